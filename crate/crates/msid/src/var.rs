//! Vector autoregressive (VAR) model definition, validation, simulation,
//! and the companion-form innovations state-space representation.

use nalgebra::Cholesky;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::statespace::IssModel;

/// Stationary VAR(p) model: Y_n = sum_k A_k Y_{n-k} + U_n with Gaussian
/// innovations U_n of covariance Sigma.
#[derive(Debug, Clone)]
pub struct VarModel {
    /// Process dimension M.
    pub m: usize,
    /// Autoregressive order p.
    pub p: usize,
    /// Coefficient matrices A_1..A_p, each M x M.
    pub a: Vec<Matrix>,
    /// Innovation covariance Sigma, M x M, symmetric positive definite.
    pub sigma: Matrix,
}

/// Where a time series sits in the rescaling pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOrigin {
    /// Raw simulation of the original process.
    Original,
    /// Window-averaged at some scale.
    Averaged,
    /// Window-averaged and downsampled at some scale.
    Downsampled,
}

/// Multichannel time series, stored one contiguous vector per channel.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    /// Channel count M.
    pub m: usize,
    /// Sample count N.
    pub n: usize,
    /// channels[c][t] is sample t of channel c (c is 0-based).
    pub channels: Vec<Vec<f64>>,
    /// Where the series sits in the rescaling pipeline.
    pub origin: SeriesOrigin,
}

impl TimeSeries {
    /// Wraps per-channel sample vectors, checking finiteness and equal length.
    pub fn new(channels: Vec<Vec<f64>>, origin: SeriesOrigin) -> Result<Self> {
        let m = channels.len();
        if m == 0 {
            return Err(Error::Parameter(
                "time series needs at least one channel".into(),
            ));
        }
        let n = channels[0].len();
        if n == 0 {
            return Err(Error::Length(
                "time series needs at least one sample".into(),
            ));
        }
        for (c, ch) in channels.iter().enumerate() {
            if ch.len() != n {
                return Err(Error::Dimension(format!(
                    "channel {} has {} samples, expected {}",
                    c + 1,
                    ch.len(),
                    n
                )));
            }
            if !ch.iter().all(|x| x.is_finite()) {
                return Err(Error::NonFinite(format!("channel {} samples", c + 1)));
            }
        }
        Ok(TimeSeries {
            m,
            n,
            channels,
            origin,
        })
    }
}

impl VarModel {
    /// Builds and validates a VAR model from coefficient matrices and the
    /// innovation covariance.
    pub fn new(a: Vec<Matrix>, sigma: Matrix) -> Result<Self> {
        let p = a.len();
        if p == 0 {
            return Err(Error::Parameter("VAR order p must be at least 1".into()));
        }
        let m = sigma.nrows();
        let model = VarModel { m, p, a, sigma };
        model.validate()?;
        Ok(model)
    }

    /// Checks every model invariant: shapes, finite entries, symmetric
    /// positive definite Sigma, and stationarity (companion spectral
    /// radius below one).
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Parameter(
                "process dimension M must be at least 1".into(),
            ));
        }
        if self.p == 0 || self.a.len() != self.p {
            return Err(Error::Parameter(format!(
                "expected p = {} coefficient matrices, got {}",
                self.p,
                self.a.len()
            )));
        }
        for (k, ak) in self.a.iter().enumerate() {
            if ak.nrows() != self.m || ak.ncols() != self.m {
                return Err(Error::Dimension(format!(
                    "coefficient matrix A_{} is {}x{}, expected {}x{}",
                    k + 1,
                    ak.nrows(),
                    ak.ncols(),
                    self.m,
                    self.m
                )));
            }
            linalg::check_finite(ak, &format!("coefficient matrix A_{}", k + 1))?;
        }
        if self.sigma.nrows() != self.m || self.sigma.ncols() != self.m {
            return Err(Error::Dimension(format!(
                "Sigma is {}x{}, expected {}x{}",
                self.sigma.nrows(),
                self.sigma.ncols(),
                self.m,
                self.m
            )));
        }
        linalg::check_pd(&self.sigma, "innovation covariance Sigma")?;
        let radius = self.companion_radius()?;
        if radius >= 1.0 {
            return Err(Error::Instability {
                what: "VAR companion matrix".to_string(),
                radius,
            });
        }
        Ok(())
    }

    /// Companion matrix: block row [A_1 .. A_p] over a shifted identity.
    pub fn companion(&self) -> Matrix {
        let (m, p) = (self.m, self.p);
        let l = m * p;
        let mut comp = Matrix::zeros(l, l);
        for k in 0..p {
            comp.view_mut((0, k * m), (m, m)).copy_from(&self.a[k]);
        }
        for i in 1..p {
            comp.view_mut((i * m, (i - 1) * m), (m, m))
                .copy_from(&Matrix::identity(m, m));
        }
        comp
    }

    /// Spectral radius of the companion matrix; < 1 means stationary.
    pub fn companion_radius(&self) -> Result<f64> {
        linalg::spectral_radius(&self.companion())
    }

    /// Companion-form innovations state-space model: state is the stacked
    /// p-lag history, A the companion matrix, C = [A_1 .. A_p],
    /// K = [I; 0], Phi = Sigma. Its one-step prediction reproduces the VAR
    /// recursion exactly.
    pub fn companion_iss(&self) -> Result<IssModel> {
        self.validate()?;
        let (m, p) = (self.m, self.p);
        let l = m * p;
        let a = self.companion();
        let mut c = Matrix::zeros(m, l);
        for k in 0..p {
            c.view_mut((0, k * m), (m, m)).copy_from(&self.a[k]);
        }
        let mut k_mat = Matrix::zeros(l, m);
        k_mat
            .view_mut((0, 0), (m, m))
            .copy_from(&Matrix::identity(m, m));
        IssModel::new(a, c, k_mat, self.sigma.clone())
    }

    /// Simulates the VAR recursion from zero initial conditions, discarding
    /// `burn_in` transient samples. Deterministic for a fixed seed: one
    /// ChaCha12 stream, M standard-normal draws per step (channel order),
    /// colored through the Cholesky factor of Sigma.
    pub fn simulate(&self, n: usize, seed: u64, burn_in: usize) -> Result<TimeSeries> {
        self.validate()?;
        if n == 0 {
            return Err(Error::Parameter("sample count n must be at least 1".into()));
        }
        let (m, p) = (self.m, self.p);
        let chol = Cholesky::new(self.sigma.clone()).ok_or_else(|| Error::Covariance {
            what: "innovation covariance Sigma".to_string(),
            reason: "not positive definite".to_string(),
        })?;
        let lfac = chol.l();

        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut channels = vec![Vec::with_capacity(n); m];
        // Ring buffer of the last p samples: slot (head + k) % p holds the
        // sample k+1 steps in the past.
        let mut hist = vec![0.0f64; p * m];
        let mut head = 0usize;
        let mut z = vec![0.0f64; m];
        let mut y = vec![0.0f64; m];
        for step in 0..burn_in + n {
            for zi in z.iter_mut() {
                *zi = StandardNormal.sample(&mut rng);
            }
            // y starts as the colored innovation u = L z.
            for i in 0..m {
                let mut acc = 0.0;
                for j in 0..=i {
                    acc += lfac[(i, j)] * z[j];
                }
                y[i] = acc;
            }
            for k in 0..p {
                let base = ((head + k) % p) * m;
                let ak = &self.a[k];
                for i in 0..m {
                    let mut acc = 0.0;
                    for j in 0..m {
                        acc += ak[(i, j)] * hist[base + j];
                    }
                    y[i] += acc;
                }
            }
            head = (head + p - 1) % p;
            hist[head * m..head * m + m].copy_from_slice(&y);
            if step >= burn_in {
                for i in 0..m {
                    channels[i].push(y[i]);
                }
            }
        }
        TimeSeries::new(channels, SeriesOrigin::Original)
    }
}
