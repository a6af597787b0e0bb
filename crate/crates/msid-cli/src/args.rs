//! Parsers for the list-valued command-line arguments: scale lists with
//! ranges, mode subsets, target lists, and oracle settings strings.

use msid::estimator::DEFAULT_RIDGE;
use msid::multiscale::Mode;

use crate::errors::CliError;
use crate::oracle::{OracleSpec, DEFAULT_SAMPLE_COUNT};

/// Parses a scale list such as "1..20" or "1,2,5..8" into a sorted,
/// deduplicated list of strictly positive integers.
pub fn parse_taus(text: &str) -> Result<Vec<usize>, CliError> {
    let mut taus: Vec<usize> = Vec::new();
    for seg in text.split(',') {
        let seg = seg.trim();
        if seg.is_empty() {
            return Err(CliError::usage(format!(
                "--taus: empty segment in \"{text}\""
            )));
        }
        if let Some((lo, hi)) = seg.split_once("..") {
            let lo = parse_positive(lo.trim(), "--taus range start")?;
            let hi = parse_positive(hi.trim(), "--taus range end")?;
            if lo > hi {
                return Err(CliError::usage(format!(
                    "--taus: range {lo}..{hi} is empty (start exceeds end)"
                )));
            }
            taus.extend(lo..=hi);
        } else {
            taus.push(parse_positive(seg, "--taus value")?);
        }
    }
    taus.sort_unstable();
    taus.dedup();
    Ok(taus)
}

fn parse_positive(text: &str, what: &str) -> Result<usize, CliError> {
    let value: usize = text
        .parse()
        .map_err(|_| CliError::usage(format!("{what}: \"{text}\" is not a positive integer")))?;
    if value == 0 {
        return Err(CliError::usage(format!("{what}: must be at least 1")));
    }
    Ok(value)
}

/// Parses a comma-separated subset of {avg, dws}; the result is in the
/// canonical order avg before dws regardless of input order.
pub fn parse_modes(text: &str) -> Result<Vec<Mode>, CliError> {
    let mut avg = false;
    let mut dws = false;
    for seg in text.split(',') {
        match seg.trim() {
            "avg" => avg = true,
            "dws" => dws = true,
            other => {
                return Err(CliError::usage(format!(
                    "--modes: unknown mode \"{other}\" (expected avg or dws)"
                )))
            }
        }
    }
    let mut modes = Vec::new();
    if avg {
        modes.push(Mode::Avg);
    }
    if dws {
        modes.push(Mode::Dws);
    }
    if modes.is_empty() {
        return Err(CliError::usage(
            "--modes: at least one mode is required".to_string(),
        ));
    }
    Ok(modes)
}

/// Parses a comma-separated list of 1-based target channels, validated
/// against the model dimension; sorted and deduplicated.
pub fn parse_targets(text: &str, m: usize) -> Result<Vec<usize>, CliError> {
    let mut targets = Vec::new();
    for seg in text.split(',') {
        let value = parse_positive(seg.trim(), "--targets value")?;
        if value > m {
            return Err(CliError::usage(format!(
                "--targets: channel {value} out of range for an {m}-channel model"
            )));
        }
        targets.push(value);
    }
    targets.sort_unstable();
    targets.dedup();
    Ok(targets)
}

/// Parses the oracle settings string "N=...,seed=...,lags=...,ridge=..."
/// (every key optional; an empty string selects all defaults). The seed
/// defaults to `base_seed` from the top-level --seed flag.
pub fn parse_oracle(text: &str, base_seed: u64) -> Result<OracleSpec, CliError> {
    let mut spec = OracleSpec {
        sample_count: DEFAULT_SAMPLE_COUNT,
        seed: base_seed,
        lag_order: None,
        ridge: DEFAULT_RIDGE,
    };
    if text.trim().is_empty() {
        return Ok(spec);
    }
    for seg in text.split(',') {
        let (key, value) = seg.split_once('=').ok_or_else(|| {
            CliError::usage(format!("--oracle: expected key=value, got \"{seg}\""))
        })?;
        let value = value.trim();
        match key.trim() {
            "N" => {
                spec.sample_count = parse_positive(value, "--oracle N")?;
            }
            "seed" => {
                spec.seed = value.parse().map_err(|_| {
                    CliError::usage(format!("--oracle seed: \"{value}\" is not an integer"))
                })?;
            }
            "lags" => {
                spec.lag_order = Some(parse_positive(value, "--oracle lags")?);
            }
            "ridge" => {
                let ridge: f64 = value.parse().map_err(|_| {
                    CliError::usage(format!("--oracle ridge: \"{value}\" is not a number"))
                })?;
                if !(ridge.is_finite() && ridge >= 0.0) {
                    return Err(CliError::usage(
                        "--oracle ridge: must be finite and nonnegative".to_string(),
                    ));
                }
                spec.ridge = ridge;
            }
            other => {
                return Err(CliError::usage(format!(
                    "--oracle: unknown key \"{other}\" (expected N, seed, lags, ridge)"
                )))
            }
        }
    }
    Ok(spec)
}
