//! Built-in bivariate example configurations used by the command-line
//! experiments and the acceptance suite. All three share unit innovation
//! covariance; they differ in coupling structure:
//!
//! * `uni` — unidirectional coupling: channel 1 is a weak AR(1)
//!   (coefficient 0.25 at lag 1) driving channel 2 with weight 0.5 at
//!   lag 2; no feedback.
//! * `bi` — bidirectional coupling with autonomous dynamics: channel 1 has
//!   coefficient 0.25 at lag 2 and receives 0.75 of channel 2 at lag 3;
//!   channel 2 has coefficient 0.25 at lag 5 and receives 0.5 of channel 1
//!   at lag 7.
//! * `uni-strong` — like `uni` but with driver coefficient 0.95, a nearly
//!   unit-root driver that leaks spurious transfer into the uncoupled
//!   direction at coarse scales.

use crate::linalg::Matrix;
use crate::var::VarModel;

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 3] = ["uni", "bi", "uni-strong"];

/// Unidirectional configuration (driver coefficient `a1` at lag 1,
/// coupling 0.5 from channel 1 into channel 2 at lag 2).
fn unidirectional(a1: f64) -> VarModel {
    let mut lag1 = Matrix::zeros(2, 2);
    lag1[(0, 0)] = a1;
    let mut lag2 = Matrix::zeros(2, 2);
    lag2[(1, 0)] = 0.5;
    VarModel::new(vec![lag1, lag2], Matrix::identity(2, 2))
        .expect("built-in configuration must validate")
}

/// Unidirectional configuration with weak driver dynamics.
pub fn uni() -> VarModel {
    unidirectional(0.25)
}

/// Unidirectional configuration with near-unit-root driver dynamics.
pub fn uni_strong() -> VarModel {
    unidirectional(0.95)
}

/// Bidirectional configuration with autonomous dynamics in both channels.
pub fn bi() -> VarModel {
    let mut a = vec![Matrix::zeros(2, 2); 7];
    a[1][(0, 0)] = 0.25; // channel 1 on itself, lag 2
    a[2][(0, 1)] = 0.75; // channel 2 into channel 1, lag 3
    a[4][(1, 1)] = 0.25; // channel 2 on itself, lag 5
    a[6][(1, 0)] = 0.5; // channel 1 into channel 2, lag 7
    VarModel::new(a, Matrix::identity(2, 2)).expect("built-in configuration must validate")
}

/// Looks a preset up by its command-line name.
pub fn by_name(name: &str) -> Option<VarModel> {
    match name {
        "uni" => Some(uni()),
        "bi" => Some(bi()),
        "uni-strong" => Some(uni_strong()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uni_matches_hard_coded_parameters() {
        let model = uni();
        assert_eq!((model.m, model.p), (2, 2));
        let expected = [[[0.25, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]];
        for (k, mat) in expected.iter().enumerate() {
            for (i, row) in mat.iter().enumerate() {
                for (j, &value) in row.iter().enumerate() {
                    assert_eq!(model.a[k][(i, j)], value, "A_{} ({i},{j})", k + 1);
                }
            }
        }
        assert_eq!(model.sigma, Matrix::identity(2, 2));
        assert_abs_diff_eq!(model.companion_radius().unwrap(), 0.25, epsilon = 1e-10);
    }

    #[test]
    fn uni_strong_differs_only_in_driver_coefficient() {
        let model = uni_strong();
        assert_eq!(model.a[0][(0, 0)], 0.95);
        let weak = uni();
        let mut patched = model.clone();
        patched.a[0][(0, 0)] = 0.25;
        for k in 0..2 {
            assert_eq!(patched.a[k], weak.a[k]);
        }
        assert_abs_diff_eq!(model.companion_radius().unwrap(), 0.95, epsilon = 1e-10);
    }

    #[test]
    fn bi_matches_hard_coded_parameters() {
        let model = bi();
        assert_eq!((model.m, model.p), (2, 2 + 5));
        let mut nonzero = 0;
        for k in 0..7 {
            for i in 0..2 {
                for j in 0..2 {
                    if model.a[k][(i, j)] != 0.0 {
                        nonzero += 1;
                    }
                }
            }
        }
        assert_eq!(nonzero, 4);
        assert_eq!(model.a[1][(0, 0)], 0.25);
        assert_eq!(model.a[2][(0, 1)], 0.75);
        assert_eq!(model.a[4][(1, 1)], 0.25);
        assert_eq!(model.a[6][(1, 0)], 0.5);
        assert_eq!(model.sigma, Matrix::identity(2, 2));
        // Stationary but close to the boundary; radius frozen from an
        // independent eigensolver run.
        assert_abs_diff_eq!(
            model.companion_radius().unwrap(),
            0.9682334974576914,
            epsilon = 1e-8
        );
    }

    #[test]
    fn lookup_by_name() {
        for name in NAMES {
            assert!(by_name(name).is_some(), "missing preset {name}");
        }
        assert!(by_name("unknown").is_none());
    }
}
