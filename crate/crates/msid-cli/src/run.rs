//! Sweep orchestration: compute one analytic row per (scale, mode, target),
//! optionally attach oracle estimates, and render the requested format.

use clap::ValueEnum;

use msid::infodyn::multiscale_sweep;
use msid::multiscale::Mode;
use msid::var::VarModel;

use crate::errors::CliError;
use crate::oracle::{attach_estimates, OracleSpec, ORACLE_BURN_IN};
use crate::table::{
    build_json_document, render_csv, render_json, JsonMeta, JsonOracleMeta, RowData,
};

/// Output format of the result table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A fully validated run description.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: VarModel,
    /// Preset name or model file path, recorded in JSON metadata.
    pub model_label: String,
    pub taus: Vec<usize>,
    pub modes: Vec<Mode>,
    pub targets: Vec<usize>,
    pub oracle: Option<OracleSpec>,
    pub format: Format,
}

/// Computes the analytic rows in scale-outer, mode, target order. Any
/// failing row aborts the run: partial tables are never emitted.
pub fn compute_rows(
    model: &VarModel,
    taus: &[usize],
    modes: &[Mode],
    targets: &[usize],
) -> Result<Vec<RowData>, CliError> {
    let mut rows = Vec::with_capacity(taus.len() * modes.len() * targets.len());
    for &tau in taus {
        for &mode in modes {
            for row in multiscale_sweep(model, &[tau], mode, targets) {
                match row.result {
                    Ok(analytic) => rows.push(RowData {
                        tau,
                        mode,
                        target: row.target,
                        analytic,
                        oracle: None,
                    }),
                    Err(err) => {
                        return Err(CliError::solver(format!(
                            "scale {tau} ({}) target {}: {err}",
                            mode.label(),
                            row.target
                        )))
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// Runs the sweep described by the config and renders the result table.
pub fn execute(config: &RunConfig) -> Result<String, CliError> {
    let mut rows = compute_rows(&config.model, &config.taus, &config.modes, &config.targets)?;
    if let Some(spec) = &config.oracle {
        attach_estimates(&mut rows, &config.model, spec)?;
    }
    match config.format {
        Format::Csv => Ok(render_csv(&rows, config.oracle.is_some())),
        Format::Json => {
            let meta = JsonMeta {
                model: config.model_label.clone(),
                m: config.model.m,
                p: config.model.p,
                taus: config.taus.clone(),
                modes: config.modes.iter().map(|m| m.label().to_string()).collect(),
                targets: config.targets.clone(),
                oracle: config.oracle.as_ref().map(|spec| JsonOracleMeta {
                    sample_count: spec.sample_count,
                    seed: spec.seed,
                    lag_order: spec.lag_order,
                    ridge: spec.ridge,
                    burn_in: ORACLE_BURN_IN,
                    rng: "chacha12".to_string(),
                    sampler: "standard-normal".to_string(),
                }),
            };
            Ok(render_json(&build_json_document(meta, &rows)))
        }
    }
}
