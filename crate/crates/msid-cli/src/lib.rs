//! Library half of the `msid` command-line tool: model-file ingestion,
//! argument-list parsing, sweep orchestration, table rendering, and failure
//! classification. The binary in `main.rs` is a thin wrapper so that every
//! behavior stays unit-testable.

pub mod args;
pub mod errors;
pub mod model_file;
pub mod oracle;
pub mod run;
pub mod table;
