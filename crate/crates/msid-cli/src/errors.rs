//! Failure classification for the command line: every error is mapped to a
//! distinct exit code and can be rendered as a machine-readable JSON object.

use msid::Error as MsidError;

/// Exit code for malformed command-line arguments (also used by clap).
pub const EXIT_USAGE: i32 = 2;
/// Exit code when the model file cannot be found or read.
pub const EXIT_FILE_NOT_FOUND: i32 = 3;
/// Exit code for model files that violate the JSON schema or shape rules.
pub const EXIT_SCHEMA: i32 = 4;
/// Exit code for structurally valid but unusable models (e.g. unstable).
pub const EXIT_MODEL: i32 = 5;
/// Exit code when a solver or estimator fails during the sweep.
pub const EXIT_SOLVER: i32 = 6;
/// Exit code when writing the result table fails.
pub const EXIT_OUTPUT: i32 = 7;

/// A classified command-line failure.
#[derive(Debug)]
pub struct CliError {
    kind: Kind,
    message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Usage,
    FileNotFound,
    Schema,
    Model,
    Solver,
    Output,
}

impl Kind {
    fn label(self) -> &'static str {
        match self {
            Kind::Usage => "usage",
            Kind::FileNotFound => "file-not-found",
            Kind::Schema => "schema",
            Kind::Model => "model",
            Kind::Solver => "solver",
            Kind::Output => "output",
        }
    }

    fn exit_code(self) -> i32 {
        match self {
            Kind::Usage => EXIT_USAGE,
            Kind::FileNotFound => EXIT_FILE_NOT_FOUND,
            Kind::Schema => EXIT_SCHEMA,
            Kind::Model => EXIT_MODEL,
            Kind::Solver => EXIT_SOLVER,
            Kind::Output => EXIT_OUTPUT,
        }
    }
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: Kind::Usage,
            message: message.into(),
        }
    }

    pub fn file_not_found(message: impl Into<String>) -> Self {
        CliError {
            kind: Kind::FileNotFound,
            message: message.into(),
        }
    }

    pub fn schema(message: impl Into<String>) -> Self {
        CliError {
            kind: Kind::Schema,
            message: message.into(),
        }
    }

    pub fn model(message: impl Into<String>) -> Self {
        CliError {
            kind: Kind::Model,
            message: message.into(),
        }
    }

    pub fn solver(message: impl Into<String>) -> Self {
        CliError {
            kind: Kind::Solver,
            message: message.into(),
        }
    }

    pub fn output(message: impl Into<String>) -> Self {
        CliError {
            kind: Kind::Output,
            message: message.into(),
        }
    }

    /// Classifies a core-library error raised while building the model:
    /// instability is a model problem, everything else a schema problem.
    pub fn from_model_build(err: MsidError) -> Self {
        match err {
            MsidError::Instability { .. } => CliError::model(err.to_string()),
            other => CliError::schema(other.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    pub fn message(&self) -> &str {
        &self.message
    }

    /// Machine-readable rendering for the --error-json flag.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": {
                "kind": self.kind.label(),
                "exit_code": self.kind.exit_code(),
                "message": self.message,
            }
        })
        .to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct() {
        let codes = [
            CliError::usage("u").exit_code(),
            CliError::file_not_found("f").exit_code(),
            CliError::schema("s").exit_code(),
            CliError::model("m").exit_code(),
            CliError::solver("v").exit_code(),
            CliError::output("o").exit_code(),
        ];
        for (i, a) in codes.iter().enumerate() {
            assert_ne!(*a, 0);
            for b in codes.iter().skip(i + 1) {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn instability_maps_to_model_exit_code() {
        let err = CliError::from_model_build(MsidError::Instability {
            what: "VAR companion matrix".into(),
            radius: 1.25,
        });
        assert_eq!(err.exit_code(), EXIT_MODEL);
    }

    #[test]
    fn shape_errors_map_to_schema_exit_code() {
        let err = CliError::from_model_build(MsidError::Dimension("bad shape".into()));
        assert_eq!(err.exit_code(), EXIT_SCHEMA);
    }

    #[test]
    fn json_rendering_carries_kind_and_code() {
        let err = CliError::schema("Sigma is not symmetric");
        let parsed: serde_json::Value = serde_json::from_str(&err.to_json()).unwrap();
        assert_eq!(parsed["error"]["kind"], "schema");
        assert_eq!(parsed["error"]["exit_code"], EXIT_SCHEMA);
        assert_eq!(parsed["error"]["message"], "Sigma is not symmetric");
    }
}
