//! JSON model ingestion: the on-disk schema for user-supplied VAR models.
//!
//! A model file is a UTF-8 JSON object
//!
//! ```json
//! {
//!   "m": 2,
//!   "p": 2,
//!   "A": [[0.25, 0.0, 0.0, 0.0], [0.0, 0.0, 0.5, 0.0]],
//!   "Sigma": [1.0, 0.0, 0.0, 1.0]
//! }
//! ```
//!
//! where `A` holds the `p` coefficient matrices and `Sigma` the innovation
//! covariance, each flattened row-major to `m * m` numbers.

use serde::Deserialize;

use msid::linalg::matrix_from_rows;
use msid::var::VarModel;

use crate::errors::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    m: usize,
    p: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "Sigma")]
    sigma: Vec<f64>,
}

/// Parses and validates a model file, returning a ready-to-use model.
pub fn parse_model(text: &str) -> Result<VarModel, CliError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| {
        CliError::schema(format!("model file is not valid JSON for the schema: {e}"))
    })?;
    if file.m == 0 {
        return Err(CliError::schema(
            "field \"m\" must be at least 1".to_string(),
        ));
    }
    if file.p == 0 {
        return Err(CliError::schema(
            "field \"p\" must be at least 1".to_string(),
        ));
    }
    if file.a.len() != file.p {
        return Err(CliError::schema(format!(
            "field \"A\" must hold p = {} matrices, got {}",
            file.p,
            file.a.len()
        )));
    }
    let mm = file.m * file.m;
    let mut a = Vec::with_capacity(file.p);
    for (k, flat) in file.a.iter().enumerate() {
        if flat.len() != mm {
            return Err(CliError::schema(format!(
                "matrix A[{}] must hold m*m = {} row-major entries, got {}",
                k,
                mm,
                flat.len()
            )));
        }
        a.push(
            matrix_from_rows(file.m, file.m, flat)
                .map_err(|e| CliError::schema(format!("matrix A[{k}]: {e}")))?,
        );
    }
    if file.sigma.len() != mm {
        return Err(CliError::schema(format!(
            "field \"Sigma\" must hold m*m = {} row-major entries, got {}",
            mm,
            file.sigma.len()
        )));
    }
    let sigma = matrix_from_rows(file.m, file.m, &file.sigma)
        .map_err(|e| CliError::schema(format!("field \"Sigma\": {e}")))?;
    VarModel::new(a, sigma).map_err(CliError::from_model_build)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::errors::{EXIT_MODEL, EXIT_SCHEMA};

    const VALID: &str = r#"{
        "m": 2,
        "p": 2,
        "A": [[0.25, 0.0, 0.0, 0.0], [0.0, 0.0, 0.5, 0.0]],
        "Sigma": [1.0, 0.0, 0.0, 1.0]
    }"#;

    #[test]
    fn valid_file_round_trips_into_model() {
        let model = parse_model(VALID).unwrap();
        assert_eq!(model.m, 2);
        assert_eq!(model.p, 2);
        assert_eq!(model.a[0][(0, 0)], 0.25);
        assert_eq!(model.a[1][(1, 0)], 0.5);
        assert_eq!(model.sigma[(0, 0)], 1.0);
    }

    #[test]
    fn invalid_json_is_a_schema_error() {
        let err = parse_model("{ not json").unwrap_err();
        assert_eq!(err.exit_code(), EXIT_SCHEMA);
    }

    #[test]
    fn unknown_field_is_a_schema_error() {
        let err = parse_model(r#"{"m": 1, "p": 1, "A": [[0.5]], "Sigma": [1.0], "extra": 1}"#)
            .unwrap_err();
        assert_eq!(err.exit_code(), EXIT_SCHEMA);
    }

    #[test]
    fn wrong_entry_count_is_a_schema_error() {
        let err = parse_model(
            r#"{"m": 2, "p": 1, "A": [[0.5, 0.0, 0.0]], "Sigma": [1.0, 0.0, 0.0, 1.0]}"#,
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), EXIT_SCHEMA);
        assert!(err.message().contains("A[0]"));
    }

    #[test]
    fn asymmetric_sigma_is_a_schema_error() {
        let err = parse_model(
            r#"{"m": 2, "p": 1, "A": [[0.5, 0.0, 0.0, 0.5]], "Sigma": [1.0, 0.3, 0.0, 1.0]}"#,
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), EXIT_SCHEMA);
    }

    #[test]
    fn unstable_model_is_a_model_error() {
        let err = parse_model(r#"{"m": 1, "p": 1, "A": [[1.05]], "Sigma": [1.0]}"#).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_MODEL);
    }

    #[test]
    fn overflowing_number_is_a_schema_error() {
        // 1e400 overflows f64; whether the JSON parser rejects it or it
        // arrives as infinity, the loader must fail with a schema error.
        let err = parse_model(r#"{"m": 1, "p": 1, "A": [[1e400]], "Sigma": [1.0]}"#).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_SCHEMA);
    }
}
