//! Dense-matrix numerical kernel: spectral radius, discrete Lyapunov and
//! Riccati solvers, and symmetry/definiteness checks used by every other
//! module.
//!
//! Matrices are small (state dimensions of a few dozen, capped at 256), so
//! all algorithms are plain dense iterations with no attention to sparsity.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

/// Dense real matrix used throughout the crate.
pub type Matrix = DMatrix<f64>;

/// Iteration cap for the Lyapunov doubling loop.
const DLYAP_CAP: usize = 200;
/// Iteration cap for the Riccati doubling loop. Each step squares the
/// effective horizon, so 120 steps cover 2^120 filter iterations.
const DARE_CAP: usize = 120;
/// Tolerance on the closed-loop spectral radius of a Riccati solution.
///
/// Averaged processes carry moving-average zeros exactly on the unit circle,
/// so their innovations representations are only weakly stabilizing: the
/// true radius of A - KC is exactly 1 and rounding can push the computed
/// value a few ulps above it. Radii beyond 1 + this tolerance are rejected
/// as genuinely non-stabilizing.
pub const CLOSED_LOOP_TOL: f64 = 1e-9;

/// Builds a matrix from row-major entries, rejecting NaN/infinite values.
pub fn matrix_from_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<Matrix> {
    if entries.len() != rows * cols {
        return Err(Error::Dimension(format!(
            "expected {}x{} = {} entries, got {}",
            rows,
            cols,
            rows * cols,
            entries.len()
        )));
    }
    let m = Matrix::from_row_slice(rows, cols, entries);
    check_finite(&m, "matrix literal")?;
    Ok(m)
}

/// Rejects matrices containing NaN or infinite entries.
pub fn check_finite(m: &Matrix, what: &str) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// Largest absolute entry (max norm); 0 for empty matrices.
pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Symmetry test with tolerance 1e-10 relative to the largest absolute entry.
pub fn is_symmetric(m: &Matrix) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let tol = 1e-10 * max_abs(m);
    for i in 0..m.nrows() {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > tol {
                return false;
            }
        }
    }
    true
}

/// Replaces M by (M + M^T)/2 to suppress rounding-induced asymmetry.
pub fn symmetrize(m: &mut Matrix) {
    let t = m.transpose();
    *m += t;
    *m *= 0.5;
}

/// Checks that a covariance-role matrix is symmetric and positive
/// semidefinite (smallest eigenvalue >= -1e-10 * trace).
pub fn check_psd(m: &Matrix, what: &str) -> Result<()> {
    check_finite(m, what)?;
    if !is_symmetric(m) {
        return Err(Error::Covariance {
            what: what.to_string(),
            reason: "not symmetric".to_string(),
        });
    }
    let eigs = m.clone().symmetric_eigenvalues();
    let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    let tol = 1e-10 * m.trace().abs() + 1e-300;
    if min_eig < -tol {
        return Err(Error::Covariance {
            what: what.to_string(),
            reason: format!("not positive semidefinite (min eigenvalue {min_eig:.3e})"),
        });
    }
    Ok(())
}

/// Checks that a covariance-role matrix is symmetric positive definite.
pub fn check_pd(m: &Matrix, what: &str) -> Result<()> {
    check_finite(m, what)?;
    if !is_symmetric(m) {
        return Err(Error::Covariance {
            what: what.to_string(),
            reason: "not symmetric".to_string(),
        });
    }
    if nalgebra::Cholesky::new(m.clone()).is_none() {
        return Err(Error::Covariance {
            what: what.to_string(),
            reason: "not positive definite".to_string(),
        });
    }
    Ok(())
}

/// Iteration budget for one bounded QR eigenvalue sweep of an n x n matrix.
fn schur_iteration_cap(n: usize) -> usize {
    75 * n + 300
}

/// Maximum absolute eigenvalue of a square matrix.
///
/// The QR iteration behind the Schur decomposition can cycle forever on
/// exactly structured inputs such as companion forms and shift registers,
/// where the Wilkinson shift is an exact tie (the transition and closed-loop
/// matrices built by this crate are full of such structure). The
/// decomposition therefore runs with a bounded iteration count, and on
/// failure is retried under deterministic random orthogonal similarity
/// transforms: the spectrum is invariant, but a generic basis breaks the
/// ties and lets the shifts converge.
pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "spectral radius needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    check_finite(m, "spectral radius input")?;
    let n = m.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let cap = schur_iteration_cap(n);
    let radius = |schur: nalgebra::linalg::Schur<f64, nalgebra::Dyn>| {
        schur
            .complex_eigenvalues()
            .iter()
            .fold(0.0, |acc: f64, e| acc.max(e.norm()))
    };
    if let Some(schur) = nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, cap) {
        return Ok(radius(schur));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(0x51ec7ad);
    for _ in 0..3 {
        let raw = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let q = raw.qr().q();
        let rotated = q.transpose() * m * &q;
        if let Some(schur) = nalgebra::linalg::Schur::try_new(rotated, f64::EPSILON, cap) {
            return Ok(radius(schur));
        }
    }
    Err(Error::Convergence {
        solver: "eigenvalue QR iteration".to_string(),
        cap,
    })
}

/// Solves the discrete Lyapunov equation X = A X A^T + Q by doubling:
/// X <- A X A^T + X, A <- A^2, until the powers of A vanish.
pub fn solve_dlyap(a: &Matrix, q: &Matrix) -> Result<Matrix> {
    let l = a.nrows();
    if a.ncols() != l || q.nrows() != l || q.ncols() != l {
        return Err(Error::Dimension(format!(
            "Lyapunov solve needs square A and Q of equal size, got A {}x{}, Q {}x{}",
            a.nrows(),
            a.ncols(),
            q.nrows(),
            q.ncols()
        )));
    }
    let radius = spectral_radius(a)?;
    if radius >= 1.0 {
        return Err(Error::Instability {
            what: "Lyapunov transition matrix".to_string(),
            radius,
        });
    }
    check_psd(q, "Lyapunov right-hand side")?;

    let mut x = q.clone();
    let mut ak = a.clone();
    let mut converged = false;
    for _ in 0..DLYAP_CAP {
        x = &ak * &x * ak.transpose() + &x;
        symmetrize(&mut x);
        ak = &ak * &ak;
        if max_abs(&ak) <= 1e-14 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            solver: "Lyapunov doubling".to_string(),
            cap: DLYAP_CAP,
        });
    }
    check_finite(&x, "Lyapunov solution")?;
    Ok(x)
}

/// Stabilizing solution of the filter-form discrete algebraic Riccati
/// equation together with the derived gain and innovation covariance.
#[derive(Debug, Clone)]
pub struct DareSolution {
    /// State prediction-error covariance P.
    pub p: Matrix,
    /// Gain K = (A P C^T + Ups) Phi^-1.
    pub k: Matrix,
    /// Innovation covariance Phi = C P C^T + Psi.
    pub phi: Matrix,
}

/// Solves the filter-form DARE
///
///   P = A P A^T + Xi - (A P C^T + Ups)(C P C^T + Psi)^-1 (A P C^T + Ups)^T
///
/// by a structure-preserving doubling iteration, returning the minimal
/// (weakly) stabilizing solution with its gain and innovation covariance.
///
/// Doubling squares the effective filter horizon every step, so it reaches
/// the fixed point even for marginally invertible models (unit-circle
/// moving-average zeros) where the one-step filter recursion converges only
/// harmonically and would need ~1e8 iterations to hit comparable accuracy.
pub fn solve_dare(
    a: &Matrix,
    c: &Matrix,
    xi: &Matrix,
    psi: &Matrix,
    ups: &Matrix,
) -> Result<DareSolution> {
    let l = a.nrows();
    let m = c.nrows();
    if a.ncols() != l
        || c.ncols() != l
        || xi.nrows() != l
        || xi.ncols() != l
        || psi.nrows() != m
        || psi.ncols() != m
        || ups.nrows() != l
        || ups.ncols() != m
    {
        return Err(Error::Dimension(format!(
            "Riccati solve shapes inconsistent: A {}x{}, C {}x{}, Xi {}x{}, Psi {}x{}, Ups {}x{}",
            a.nrows(),
            a.ncols(),
            c.nrows(),
            c.ncols(),
            xi.nrows(),
            xi.ncols(),
            psi.nrows(),
            psi.ncols(),
            ups.nrows(),
            ups.ncols()
        )));
    }
    check_psd(xi, "state noise covariance")?;
    check_finite(psi, "observation noise covariance")?;
    if !is_symmetric(psi) {
        return Err(Error::Covariance {
            what: "observation noise covariance".to_string(),
            reason: "not symmetric".to_string(),
        });
    }
    let psi_chol = nalgebra::Cholesky::new(psi.clone()).ok_or_else(|| {
        Error::Singular("observation noise covariance not positive definite".to_string())
    })?;

    // Remove the noise cross-term: with Acheck = A - Ups Psi^-1 C and
    // Qcheck = Xi - Ups Psi^-1 Ups^T (a Schur complement, hence PSD),
    // the DARE takes the standard control form handled by doubling.
    let psi_inv_c = psi_chol.solve(c);
    let psi_inv_upst = psi_chol.solve(&ups.transpose());
    let a_check = a - ups * &psi_inv_c;
    let mut q_check = xi - ups * &psi_inv_upst;
    symmetrize(&mut q_check);

    let mut ahat = a_check.transpose();
    let mut g = c.transpose() * &psi_inv_c;
    symmetrize(&mut g);
    let mut h = q_check;
    let identity = Matrix::identity(l, l);

    let mut converged = false;
    let mut prev_change = f64::INFINITY;
    for iter in 0..DARE_CAP {
        let w = &identity + &g * &h;
        let lu = w.lu();
        let winv_ahat = lu
            .solve(&ahat)
            .ok_or_else(|| Error::Singular("Riccati doubling pivot matrix".to_string()))?;
        let winv_g = lu
            .solve(&g)
            .ok_or_else(|| Error::Singular("Riccati doubling pivot matrix".to_string()))?;
        let mut h_next = &h + ahat.transpose() * &h * &winv_ahat;
        symmetrize(&mut h_next);
        let mut g_next = &g + &ahat * &winv_g * ahat.transpose();
        symmetrize(&mut g_next);
        let a_next = &ahat * &winv_ahat;

        check_finite(&h_next, "Riccati doubling iterate")?;
        let change = max_abs(&(&h_next - &h));
        let scale = 1.0 + max_abs(&h_next);
        h = h_next;
        g = g_next;
        ahat = a_next;
        if change <= 1e-13 * scale {
            converged = true;
            break;
        }
        // Marginally invertible models approach the fixed point linearly at
        // rate 1/2; once the update stalls at the rounding floor, stop.
        if iter >= 8 && change >= prev_change && change <= 1e-9 * scale {
            converged = true;
            break;
        }
        prev_change = change;
    }
    if !converged {
        return Err(Error::Convergence {
            solver: "Riccati doubling".to_string(),
            cap: DARE_CAP,
        });
    }

    let mut p = h;
    symmetrize(&mut p);
    let mut phi = c * &p * c.transpose() + psi;
    symmetrize(&mut phi);
    let phi_chol = nalgebra::Cholesky::new(phi.clone()).ok_or_else(|| {
        Error::Singular("innovation covariance not positive definite".to_string())
    })?;
    let apc_ups = a * &p * c.transpose() + ups;
    let k = phi_chol.solve(&apc_ups.transpose()).transpose();

    // Verify the residual of the equation actually solved.
    let gain_term = &apc_ups * phi_chol.solve(&apc_ups.transpose());
    let residual = a * &p * a.transpose() + xi - gain_term - &p;
    let res_norm = max_abs(&residual);
    let res_tol = 1e-9 * (1.0 + max_abs(&p));
    if res_norm > res_tol {
        return Err(Error::Convergence {
            solver: format!("Riccati doubling (residual {res_norm:.3e} above tolerance)"),
            cap: DARE_CAP,
        });
    }

    // Stabilizing-solution check, with tolerance for the weakly stabilizing
    // boundary case of averaged processes.
    let closed_loop = a - &k * c;
    let radius = spectral_radius(&closed_loop)?;
    if radius >= 1.0 + CLOSED_LOOP_TOL {
        return Err(Error::NonStabilizing { radius });
    }

    Ok(DareSolution { p, k, phi })
}
