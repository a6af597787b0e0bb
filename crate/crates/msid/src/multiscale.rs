//! Rescaling of a VAR process to coarser time scales on the parameter
//! level: window averaging turns the VAR(p) into a VARMA(p, tau-1), which
//! embeds exactly as an innovations-form state-space model; downsampling
//! that model by tau is another state-space model obtained by accumulating
//! tau steps of noise and solving a Riccati equation.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::statespace::{ss_to_iss, IssModel, SsModel};
use crate::var::VarModel;

/// Hard cap on embedded state dimensions; Riccati cost grows cubically.
pub const MAX_STATE_DIM: usize = 256;

/// Processing mode of one rescaling step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Window averaging only.
    Avg,
    /// Window averaging followed by downsampling.
    Dws,
}

impl Mode {
    /// Lower-case label used in tables and command-line arguments.
    pub fn label(self) -> &'static str {
        match self {
            Mode::Avg => "avg",
            Mode::Dws => "dws",
        }
    }
}

/// One requested scale: factor tau and processing mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleRequest {
    /// Scale factor, at least 1.
    pub tau: usize,
    /// Averaging only, or averaging plus downsampling.
    pub mode: Mode,
}

impl ScaleRequest {
    /// Builds a request, rejecting tau = 0.
    pub fn new(tau: usize, mode: Mode) -> Result<Self> {
        if tau == 0 {
            return Err(Error::Parameter(
                "scale factor tau must be at least 1".into(),
            ));
        }
        Ok(ScaleRequest { tau, mode })
    }
}

/// VARMA(p, q) model: Y_n = sum_k A_k Y_{n-k} + sum_l B_l U_{n-l} with
/// Gaussian noise U_n of covariance Sigma. Averaging a VAR over windows of
/// length tau produces exactly this form with q = tau - 1 and every
/// B_l = (1/tau) I.
#[derive(Debug, Clone)]
pub struct VarmaModel {
    /// Process dimension M.
    pub m: usize,
    /// Autoregressive order p.
    pub p: usize,
    /// Moving-average order q.
    pub q: usize,
    /// AR matrices A_1..A_p.
    pub a: Vec<Matrix>,
    /// MA matrices B_0..B_q (q + 1 of them); B_0 must be invertible.
    pub b: Vec<Matrix>,
    /// Driving noise covariance Sigma.
    pub sigma: Matrix,
}

impl VarmaModel {
    /// Builds and validates a VARMA model: consistent shapes, stable AR
    /// part, positive definite Sigma, invertible B_0.
    pub fn new(a: Vec<Matrix>, b: Vec<Matrix>, sigma: Matrix) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::Parameter(
                "VARMA needs at least the MA matrix B_0".into(),
            ));
        }
        let q = b.len() - 1;
        let m = sigma.nrows();
        for (l, bl) in b.iter().enumerate() {
            if bl.nrows() != m || bl.ncols() != m {
                return Err(Error::Dimension(format!(
                    "MA matrix B_{} is {}x{}, expected {}x{}",
                    l,
                    bl.nrows(),
                    bl.ncols(),
                    m,
                    m
                )));
            }
            linalg::check_finite(bl, &format!("MA matrix B_{l}"))?;
        }
        // Reuse the VAR validation for the AR part and Sigma.
        let ar_view = VarModel {
            m,
            p: a.len(),
            a,
            sigma,
        };
        ar_view.validate()?;
        if b[0].clone().try_inverse().is_none() {
            return Err(Error::Singular("MA matrix B_0".into()));
        }
        Ok(VarmaModel {
            m,
            p: ar_view.p,
            q,
            a: ar_view.a,
            b,
            sigma: ar_view.sigma,
        })
    }
}

/// Averages a VAR(p) over windows of length tau: the AR part is unchanged
/// and the MA part becomes B_0 = ... = B_{tau-1} = (1/tau) I.
pub fn average_varma(model: &VarModel, tau: usize) -> Result<VarmaModel> {
    model.validate()?;
    if tau == 0 {
        return Err(Error::Parameter(
            "scale factor tau must be at least 1".into(),
        ));
    }
    let b_l = Matrix::identity(model.m, model.m) / tau as f64;
    let b = vec![b_l; tau];
    VarmaModel::new(model.a.clone(), b, model.sigma.clone())
}

/// Embeds a VARMA(p, q) as an innovations-form state-space model with state
/// Z_n = [Y_{n-1}; ..; Y_{n-p}; U_{n-1}; ..; U_{n-q}] of dimension
/// L = M(p + q):
///
///   A = [[A_1..A_p  B_1..B_q], [shift_Y, 0], [0, shift_U]],
///   C = [A_1 .. A_p  B_1 .. B_q],
///   K = [I; 0; B_0^-1; 0],   Phi = B_0 Sigma B_0^T,
///
/// whose innovations are E_n = B_0 U_n. For q = 0 this degenerates to the
/// plain companion form.
pub fn aoki_iss(varma: &VarmaModel) -> Result<IssModel> {
    let (m, p, q) = (varma.m, varma.p, varma.q);
    let b0 = &varma.b[0];
    let phi = {
        let mut phi = b0 * &varma.sigma * b0.transpose();
        linalg::symmetrize(&mut phi);
        phi
    };
    if q == 0 {
        // Companion form with innovations B_0 U_n.
        let base = VarModel::new(varma.a.clone(), phi)?;
        return base.companion_iss();
    }
    let l = m * (p + q);
    if l > MAX_STATE_DIM {
        return Err(Error::Size {
            dim: l,
            max: MAX_STATE_DIM,
        });
    }
    let b0_inv = b0
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("MA matrix B_0".into()))?;

    let ident = Matrix::identity(m, m);
    let mut a = Matrix::zeros(l, l);
    let mut c = Matrix::zeros(m, l);
    for k in 0..p {
        a.view_mut((0, k * m), (m, m)).copy_from(&varma.a[k]);
        c.view_mut((0, k * m), (m, m)).copy_from(&varma.a[k]);
    }
    for lag in 1..=q {
        let col = (p + lag - 1) * m;
        a.view_mut((0, col), (m, m)).copy_from(&varma.b[lag]);
        c.view_mut((0, col), (m, m)).copy_from(&varma.b[lag]);
    }
    // Shift registers for the Y history and the U history.
    for i in 1..p {
        a.view_mut((i * m, (i - 1) * m), (m, m)).copy_from(&ident);
    }
    for i in 1..q {
        a.view_mut(((p + i) * m, (p + i - 1) * m), (m, m))
            .copy_from(&ident);
    }
    let mut k_mat = Matrix::zeros(l, m);
    k_mat.view_mut((0, 0), (m, m)).copy_from(&ident);
    k_mat.view_mut((p * m, 0), (m, m)).copy_from(&b0_inv);

    IssModel::new(a, c, k_mat, phi)
}

/// Downsamples an innovations-form model by tau: the downsampled process
/// observes every tau-th sample, so its state advances tau steps at a time.
/// The accumulated noise gives the state-space model
///
///   A_bar = A^tau,  C_bar = C,  Psi_bar = Phi,
///   Xi_1 = K Phi K^T,  Xi_t = A Xi_{t-1} A^T + K Phi K^T,
///   Ups_tau = A^{tau-1} K Phi,
///
/// which is converted back to innovations form via the Riccati equation.
/// For tau = 1 this reproduces the input model.
pub fn downsample_iss(avg: &IssModel, tau: usize) -> Result<IssModel> {
    if tau == 0 {
        return Err(Error::Parameter(
            "scale factor tau must be at least 1".into(),
        ));
    }
    let k_phi = &avg.k * &avg.phi;
    let mut k_phi_kt = &k_phi * avg.k.transpose();
    linalg::symmetrize(&mut k_phi_kt);

    let mut xi = k_phi_kt.clone();
    let l = avg.state_dim();
    let mut a_pow = Matrix::identity(l, l); // becomes A^{tau-1}
    for _ in 1..tau {
        xi = &avg.a * &xi * avg.a.transpose() + &k_phi_kt;
        linalg::symmetrize(&mut xi);
        a_pow = &a_pow * &avg.a;
    }
    let ups = &a_pow * &k_phi;
    let a_bar = &a_pow * &avg.a;

    let ss = SsModel::new(a_bar, avg.c.clone(), xi, avg.phi.clone(), ups)?;
    ss_to_iss(&ss)
}

/// Builds the rescaled innovations-form model of a VAR at one scale:
/// averaging always, downsampling when the mode asks for it.
pub fn rescaled_iss(model: &VarModel, request: ScaleRequest) -> Result<IssModel> {
    let varma = average_varma(model, request.tau)?;
    let avg = aoki_iss(&varma)?;
    match request.mode {
        Mode::Avg => Ok(avg),
        Mode::Dws => downsample_iss(&avg, request.tau),
    }
}
