//! Oracle orchestration: simulate the model once, coarse-grain the
//! realization per (scale, mode), and attach regression estimates to the
//! analytic rows.

use msid::estimator::{coarse_grain, default_lag_order, estimate_measures, EstimationSettings};
use msid::multiscale::Mode;
use msid::var::{TimeSeries, VarModel};

use crate::errors::CliError;
use crate::table::{OracleComparison, RowData};

/// Transient samples discarded before the recorded realization.
pub const ORACLE_BURN_IN: usize = 10_000;
/// Default simulation length.
pub const DEFAULT_SAMPLE_COUNT: usize = 1_000_000;

/// Oracle configuration as requested on the command line.
#[derive(Debug, Clone, Copy)]
pub struct OracleSpec {
    pub sample_count: usize,
    pub seed: u64,
    /// Fixed regression truncation; None selects the per-row default rule.
    pub lag_order: Option<usize>,
    pub ridge: f64,
}

/// Runs the oracle over every row, reusing one simulated realization and
/// one coarse-grained series per (scale, mode). Rows must be ordered
/// scale-outer then mode so consecutive rows share the coarse series.
pub fn attach_estimates(
    rows: &mut [RowData],
    model: &VarModel,
    spec: &OracleSpec,
) -> Result<(), CliError> {
    let ts = model
        .simulate(spec.sample_count, spec.seed, ORACLE_BURN_IN)
        .map_err(|e| CliError::solver(format!("oracle simulation failed: {e}")))?;
    let mut cache: Option<((usize, Mode), TimeSeries)> = None;
    for row in rows.iter_mut() {
        let key = (row.tau, row.mode);
        if cache.as_ref().map(|(k, _)| *k) != Some(key) {
            let coarse = coarse_grain(&ts, row.tau, row.mode).map_err(|e| {
                CliError::solver(format!(
                    "coarse-graining at scale {} ({}) failed: {e}",
                    row.tau,
                    row.mode.label()
                ))
            })?;
            cache = Some((key, coarse));
        }
        let coarse = &cache.as_ref().expect("coarse series cached").1;
        let lag = spec
            .lag_order
            .unwrap_or_else(|| default_lag_order(model.p, row.tau, row.mode));
        let settings = EstimationSettings::new(lag, spec.sample_count, spec.seed, spec.ridge)
            .map_err(|e| CliError::usage(format!("invalid oracle settings: {e}")))?;
        let measures = estimate_measures(coarse, row.target, &settings).map_err(|e| {
            CliError::solver(format!(
                "oracle estimate at scale {} ({}) target {} failed: {e}",
                row.tau,
                row.mode.label(),
                row.target
            ))
        })?;
        row.oracle = Some(OracleComparison {
            lag_order: lag,
            measures,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use msid::infodyn::measures;
    use msid::linalg::Matrix;
    use msid::var::VarModel;

    fn scalar_ar1() -> VarModel {
        let mut a1 = Matrix::zeros(1, 1);
        a1[(0, 0)] = 0.5;
        VarModel::new(vec![a1], Matrix::identity(1, 1)).unwrap()
    }

    #[test]
    fn attaches_estimates_close_to_analytic_values() {
        let model = scalar_ar1();
        let iss = model.companion_iss().unwrap();
        let analytic = measures(&iss, 1).unwrap();
        let mut rows = vec![RowData {
            tau: 1,
            mode: Mode::Avg,
            target: 1,
            analytic: analytic.clone(),
            oracle: None,
        }];
        let spec = OracleSpec {
            sample_count: 200_000,
            seed: 11,
            lag_order: None,
            ridge: 1e-10,
        };
        attach_estimates(&mut rows, &model, &spec).unwrap();
        let est = rows[0].oracle.as_ref().unwrap();
        assert_eq!(est.lag_order, default_lag_order(1, 1, Mode::Avg));
        assert!((est.measures.storage - analytic.storage).abs() < 0.01);
    }

    #[test]
    fn consecutive_rows_share_settings_but_not_targets() {
        // Bivariate white noise: both targets estimated from one series.
        let model = VarModel::new(vec![Matrix::zeros(2, 2)], Matrix::identity(2, 2)).unwrap();
        let iss = model.companion_iss().unwrap();
        let mut rows: Vec<RowData> = (1..=2)
            .map(|target| RowData {
                tau: 2,
                mode: Mode::Dws,
                target,
                analytic: measures(&iss, target).unwrap(),
                oracle: None,
            })
            .collect();
        let spec = OracleSpec {
            sample_count: 50_000,
            seed: 3,
            lag_order: Some(4),
            ridge: 1e-10,
        };
        attach_estimates(&mut rows, &model, &spec).unwrap();
        for row in &rows {
            let est = row.oracle.as_ref().unwrap();
            assert_eq!(est.lag_order, 4);
            assert_eq!(est.measures.target, row.target);
            // White noise: all measures tiny.
            assert!(est.measures.storage.abs() < 0.01);
            assert!(est.measures.transfer.abs() < 0.01);
        }
    }

    #[test]
    fn short_simulation_against_long_lag_is_rejected() {
        let model = scalar_ar1();
        let iss = model.companion_iss().unwrap();
        let mut rows = vec![RowData {
            tau: 1,
            mode: Mode::Avg,
            target: 1,
            analytic: measures(&iss, 1).unwrap(),
            oracle: None,
        }];
        let spec = OracleSpec {
            sample_count: 200,
            seed: 0,
            lag_order: Some(50),
            ridge: 1e-10,
        };
        let err = attach_estimates(&mut rows, &model, &spec).unwrap_err();
        assert_eq!(err.exit_code(), crate::errors::EXIT_SOLVER);
    }
}
