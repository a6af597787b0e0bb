//! Information measures of an innovations-form state-space model: process
//! covariance, partial variances, information storage, information
//! transfer, and predictive information, plus the multiscale sweep that
//! evaluates them across scales.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::multiscale::{self, Mode, ScaleRequest};
use crate::statespace::{extract_target_submodel, ss_to_iss, IssModel};
use crate::var::VarModel;

/// Stationary second-order description of an innovations-form model.
#[derive(Debug, Clone)]
pub struct ProcessCovariance {
    /// State covariance Omega = E[Z_n Z_n^T], solving
    /// Omega = A Omega A^T + K Phi K^T.
    pub omega: Matrix,
    /// Zero-lag process covariance Gamma = C Omega C^T + Phi.
    pub gamma: Matrix,
}

/// Variances and information measures for one target channel.
#[derive(Debug, Clone)]
pub struct InfoMeasures {
    /// Target channel index (1-based).
    pub target: usize,
    /// Unconditional variance of the target.
    pub lambda_full: f64,
    /// Residual variance of the target given its own past.
    pub lambda_own: f64,
    /// Residual variance of the target given the past of all channels.
    pub lambda_all: f64,
    /// Information storage (nats): half the log ratio full/own.
    pub storage: f64,
    /// Information transfer from the other channels (nats): half the log
    /// ratio own/all.
    pub transfer: f64,
    /// Predictive information (nats): storage + transfer.
    pub predictive: f64,
}

/// One row of a multiscale sweep; solver failures are recorded per row so
/// a failing scale does not abort the others.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// Scale factor.
    pub tau: usize,
    /// Processing mode of the row.
    pub mode: Mode,
    /// Target channel (1-based).
    pub target: usize,
    /// Measures, or the error that prevented computing them.
    pub result: Result<InfoMeasures>,
}

/// Solves the state Lyapunov equation and assembles the process covariance.
pub fn process_covariance(iss: &IssModel) -> Result<ProcessCovariance> {
    let k_phi = &iss.k * &iss.phi;
    let mut q = &k_phi * iss.k.transpose();
    linalg::symmetrize(&mut q);
    let omega = linalg::solve_dlyap(&iss.a, &q)?;
    let mut gamma = &iss.c * &omega * iss.c.transpose() + &iss.phi;
    linalg::symmetrize(&mut gamma);
    Ok(ProcessCovariance { omega, gamma })
}

/// Analytic autocovariance sequence Gamma_0..Gamma_maxlag of the observed
/// process: Gamma_0 = C Omega C^T + Phi and
/// Gamma_k = C A^{k-1} (A Omega C^T + K Phi) for k >= 1.
pub fn autocovariance(iss: &IssModel, max_lag: usize) -> Result<Vec<Matrix>> {
    let cov = process_covariance(iss)?;
    let mut out = Vec::with_capacity(max_lag + 1);
    out.push(cov.gamma.clone());
    if max_lag == 0 {
        return Ok(out);
    }
    // X = A Omega C^T + K Phi; Gamma_k = C A^{k-1} X.
    let x = &iss.a * &cov.omega * iss.c.transpose() + &iss.k * &iss.phi;
    let mut a_pow_x = x;
    out.push(&iss.c * &a_pow_x);
    for _ in 2..=max_lag {
        a_pow_x = &iss.a * &a_pow_x;
        out.push(&iss.c * &a_pow_x);
    }
    Ok(out)
}

/// Computes the three partial variances and the information measures for
/// one target channel (1-based): the unconditional variance from the
/// process covariance, the full-past residual variance from the innovation
/// covariance, and the own-past residual variance from the innovations
/// form of the single-target submodel.
pub fn measures(iss: &IssModel, target: usize) -> Result<InfoMeasures> {
    let m = iss.obs_dim();
    if target == 0 || target > m {
        return Err(Error::IndexOutOfRange {
            index: target,
            max: m,
        });
    }
    let idx = target - 1;
    let cov = process_covariance(iss)?;
    let lambda_full = cov.gamma[(idx, idx)];
    let lambda_all = iss.phi[(idx, idx)];
    let sub = extract_target_submodel(iss, target)?;
    let sub_iss = ss_to_iss(&sub)?;
    let lambda_own = sub_iss.phi[(0, 0)];
    if !(lambda_full > 0.0 && lambda_own > 0.0 && lambda_all > 0.0) {
        return Err(Error::Degeneracy(format!(
            "non-positive partial variance for target {target}: full {lambda_full:.3e}, own {lambda_own:.3e}, all {lambda_all:.3e}"
        )));
    }
    let storage = 0.5 * (lambda_full / lambda_own).ln();
    let transfer = 0.5 * (lambda_own / lambda_all).ln();
    Ok(InfoMeasures {
        target,
        lambda_full,
        lambda_own,
        lambda_all,
        storage,
        transfer,
        predictive: storage + transfer,
    })
}

/// Evaluates the information measures of a VAR model across scales: for
/// each tau the model is averaged (and downsampled, in DWS mode) and every
/// requested target is measured. Rows appear in input order (taus outer,
/// targets inner); a failing scale marks its rows with the error and the
/// sweep continues.
pub fn multiscale_sweep(
    model: &VarModel,
    taus: &[usize],
    mode: Mode,
    targets: &[usize],
) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(taus.len() * targets.len());
    for &tau in taus {
        let iss = ScaleRequest::new(tau, mode).and_then(|req| multiscale::rescaled_iss(model, req));
        match iss {
            Ok(iss) => {
                for &target in targets {
                    rows.push(SweepRow {
                        tau,
                        mode,
                        target,
                        result: measures(&iss, target),
                    });
                }
            }
            Err(err) => {
                for &target in targets {
                    rows.push(SweepRow {
                        tau,
                        mode,
                        target,
                        result: Err(err.clone()),
                    });
                }
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix_from_rows;
    use approx::assert_abs_diff_eq;

    fn uni_model() -> VarModel {
        let mut a1 = Matrix::zeros(2, 2);
        a1[(0, 0)] = 0.25;
        let mut a2 = Matrix::zeros(2, 2);
        a2[(1, 0)] = 0.5;
        VarModel::new(vec![a1, a2], Matrix::identity(2, 2)).unwrap()
    }

    #[test]
    fn scalar_ar1_variance() {
        let a = vec![matrix_from_rows(1, 1, &[0.5]).unwrap()];
        let model = VarModel::new(a, matrix_from_rows(1, 1, &[1.0]).unwrap()).unwrap();
        let cov = process_covariance(&model.companion_iss().unwrap()).unwrap();
        assert_abs_diff_eq!(cov.gamma[(0, 0)], 4.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn white_noise_covariance_equals_phi() {
        // Observation map zero: the state contributes nothing, Gamma = Phi.
        let a = matrix_from_rows(1, 1, &[0.5]).unwrap();
        let c = matrix_from_rows(1, 1, &[0.0]).unwrap();
        let k = matrix_from_rows(1, 1, &[0.3]).unwrap();
        let phi = matrix_from_rows(1, 1, &[2.0]).unwrap();
        let iss = IssModel::new(a, c, k, phi).unwrap();
        let cov = process_covariance(&iss).unwrap();
        assert_abs_diff_eq!(cov.gamma[(0, 0)], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn unidirectional_process_variance() {
        // Channel 1 is an autonomous AR(1) with a = 0.25:
        // Gamma(1,1) = 1/(1 - 0.0625) = 16/15.
        let cov = process_covariance(&uni_model().companion_iss().unwrap()).unwrap();
        assert_abs_diff_eq!(cov.gamma[(0, 0)], 16.0 / 15.0, epsilon = 1e-12);
        // Channel 2 = 0.5 y1[n-2] + u2: Gamma(2,2) = 0.25 * 16/15 + 1 = 19/15.
        assert_abs_diff_eq!(cov.gamma[(1, 1)], 19.0 / 15.0, epsilon = 1e-12);
    }

    #[test]
    fn white_noise_measures_vanish() {
        let model = VarModel::new(vec![Matrix::zeros(2, 2)], Matrix::identity(2, 2)).unwrap();
        let iss = model.companion_iss().unwrap();
        for target in [1, 2] {
            let m = measures(&iss, target).unwrap();
            assert_abs_diff_eq!(m.storage, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(m.transfer, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn unidirectional_baseline_measures() {
        let iss = uni_model().companion_iss().unwrap();
        let m1 = measures(&iss, 1).unwrap();
        // Storage of the AR(1) channel: -0.5 ln(1 - 0.25^2) = 0.5 ln(16/15).
        assert_abs_diff_eq!(m1.storage, 0.5 * (16.0f64 / 15.0).ln(), epsilon = 1e-10);
        assert_abs_diff_eq!(m1.transfer, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m1.lambda_own, 1.0, epsilon = 1e-10);

        let m2 = measures(&iss, 2).unwrap();
        // Own-past residual variance frozen from an independent dense
        // Riccati solver; transfer = 0.5 ln(lambda_own / 1).
        assert_abs_diff_eq!(m2.lambda_own, 1.2630152449671121, epsilon = 1e-9);
        assert_abs_diff_eq!(
            m2.transfer,
            0.5 * 1.2630152449671121f64.ln(),
            epsilon = 1e-9
        );
        assert!(m2.transfer > 0.0);
        assert_abs_diff_eq!(m2.lambda_all, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn decomposition_is_exact() {
        let iss = uni_model().companion_iss().unwrap();
        for target in [1, 2] {
            let m = measures(&iss, target).unwrap();
            assert_eq!(m.predictive, m.storage + m.transfer);
            // Consistency of the three variance ratios.
            assert_abs_diff_eq!(
                m.predictive,
                0.5 * (m.lambda_full / m.lambda_all).ln(),
                epsilon = 1e-12
            );
            assert!(m.lambda_full >= m.lambda_own - 1e-10);
            assert!(m.lambda_own >= m.lambda_all - 1e-10);
        }
    }

    #[test]
    fn averaged_sweep_keeps_transfer_constant_and_storage_growing() {
        let taus: Vec<usize> = (1..=6).collect();
        let rows = multiscale_sweep(&uni_model(), &taus, Mode::Avg, &[1, 2]);
        assert_eq!(rows.len(), 12);
        let t2: Vec<f64> = rows
            .iter()
            .filter(|r| r.target == 2)
            .map(|r| r.result.as_ref().unwrap().transfer)
            .collect();
        let spread = t2.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - t2.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread <= 1e-8, "transfer spread {spread:.3e}");
        let s1: Vec<f64> = rows
            .iter()
            .filter(|r| r.target == 1)
            .map(|r| r.result.as_ref().unwrap().storage)
            .collect();
        for w in s1.windows(2) {
            assert!(w[1] >= w[0] - 1e-9);
        }
    }

    #[test]
    fn sweep_records_row_errors_without_aborting() {
        let model = VarModel::new(vec![Matrix::zeros(2, 2)], Matrix::identity(2, 2)).unwrap();
        // tau = 200 embeds into dimension 400 > 256 and must fail alone.
        let rows = multiscale_sweep(&model, &[1, 200], Mode::Avg, &[1]);
        assert_eq!(rows.len(), 2);
        assert!(rows[0].result.is_ok());
        assert!(matches!(rows[1].result, Err(Error::Size { .. })));
    }

    #[test]
    fn measures_rejects_bad_target() {
        let iss = uni_model().companion_iss().unwrap();
        assert!(matches!(
            measures(&iss, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            measures(&iss, 5),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
