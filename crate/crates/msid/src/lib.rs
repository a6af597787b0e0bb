//! Analytic multiscale information dynamics for linear Gaussian processes.
//!
//! The crate computes information storage, information transfer, and
//! predictive information of stationary vector autoregressive (VAR)
//! processes observed at coarser time scales. Rescaling by a factor tau is
//! window averaging optionally followed by downsampling; both steps are
//! carried out exactly on model parameters rather than on data:
//!
//! 1. [`var`] defines, validates, and simulates the original VAR process and
//!    provides its companion-form innovations state-space model.
//! 2. [`multiscale`] maps the averaged process to a VARMA model, embeds it
//!    as an innovations-form state-space model, and derives the downsampled
//!    model via a Riccati equation.
//! 3. [`infodyn`] reads variances and the information measures off any
//!    innovations-form model.
//! 4. [`estimator`] independently cross-checks every analytic value by
//!    simulating, coarse-graining, and regressing on lagged samples.
//! 5. [`linalg`] supplies the Lyapunov/Riccati solvers underneath.
//!
//! All public channel indices (regression targets) are 1-based.

pub mod error;
pub mod estimator;
pub mod infodyn;
pub mod linalg;
pub mod multiscale;
pub mod presets;
pub mod statespace;
pub mod var;

pub use error::{Error, Result};
pub use linalg::Matrix;
