//! Result-table assembly and serialization.
//!
//! One row per (scale, mode, target), ordered scale-outer, then mode, then
//! target. CSV uses a header row, comma separators, '.' decimals, LF line
//! endings, and 12 significant digits. JSON serializes through fixed structs
//! so that re-reading a document and re-serializing it is byte-identical.

use serde::{Deserialize, Serialize};

use msid::infodyn::InfoMeasures;
use msid::multiscale::Mode;

/// Natural logarithm of 2, for nats-to-bits conversion.
const LN_2: f64 = std::f64::consts::LN_2;

/// One computed row: analytic measures plus the optional oracle estimate.
#[derive(Debug, Clone)]
pub struct RowData {
    pub tau: usize,
    pub mode: Mode,
    pub target: usize,
    pub analytic: InfoMeasures,
    pub oracle: Option<OracleComparison>,
}

/// Empirical estimate attached to a row by the simulation oracle.
#[derive(Debug, Clone)]
pub struct OracleComparison {
    /// Regression truncation actually used for this row.
    pub lag_order: usize,
    /// Estimated measures from the simulated realization.
    pub measures: InfoMeasures,
}

/// Formats with 12 significant digits in scientific notation.
fn sig(x: f64) -> String {
    format!("{x:.11e}")
}

const BASE_COLUMNS: &str = "scale,mode,target,lambda_full,lambda_own,lambda_all,\
storage_nats,transfer_nats,predictive_nats,storage_bits,transfer_bits";
const ORACLE_COLUMNS: &str = "oracle_lambda_full,oracle_lambda_own,oracle_lambda_all,\
oracle_storage_nats,oracle_transfer_nats,oracle_predictive_nats,\
storage_abs_dev_nats,transfer_abs_dev_nats,predictive_abs_dev_nats";

/// Renders the CSV table; oracle columns appear only when requested.
pub fn render_csv(rows: &[RowData], with_oracle: bool) -> String {
    let mut out = String::new();
    out.push_str(BASE_COLUMNS);
    if with_oracle {
        out.push(',');
        out.push_str(ORACLE_COLUMNS);
    }
    out.push('\n');
    for row in rows {
        let a = &row.analytic;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            row.tau,
            row.mode.label(),
            row.target,
            sig(a.lambda_full),
            sig(a.lambda_own),
            sig(a.lambda_all),
            sig(a.storage),
            sig(a.transfer),
            sig(a.predictive),
            sig(a.storage / LN_2),
            sig(a.transfer / LN_2),
        ));
        if with_oracle {
            let o = &row
                .oracle
                .as_ref()
                .expect("oracle column requested but row carries no estimate")
                .measures;
            out.push_str(&format!(
                ",{},{},{},{},{},{},{},{},{}",
                sig(o.lambda_full),
                sig(o.lambda_own),
                sig(o.lambda_all),
                sig(o.storage),
                sig(o.transfer),
                sig(o.predictive),
                sig((o.storage - a.storage).abs()),
                sig((o.transfer - a.transfer).abs()),
                sig((o.predictive - a.predictive).abs()),
            ));
        }
        out.push('\n');
    }
    out
}

/// Top-level JSON document.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonDocument {
    pub meta: JsonMeta,
    pub rows: Vec<JsonRow>,
}

/// Run description recorded alongside the rows.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonMeta {
    /// Preset name or model file path.
    pub model: String,
    pub m: usize,
    pub p: usize,
    pub taus: Vec<usize>,
    pub modes: Vec<String>,
    pub targets: Vec<usize>,
    pub oracle: Option<JsonOracleMeta>,
}

/// Oracle configuration, including the exact randomness convention so runs
/// can be reproduced elsewhere.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonOracleMeta {
    pub sample_count: usize,
    pub seed: u64,
    /// Fixed regression truncation; null means the per-row default rule.
    pub lag_order: Option<usize>,
    pub ridge: f64,
    pub burn_in: usize,
    pub rng: String,
    pub sampler: String,
}

/// One serialized row.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonRow {
    pub scale: usize,
    pub mode: String,
    pub target: usize,
    pub lambda_full: f64,
    pub lambda_own: f64,
    pub lambda_all: f64,
    pub storage_nats: f64,
    pub transfer_nats: f64,
    pub predictive_nats: f64,
    pub storage_bits: f64,
    pub transfer_bits: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<JsonOracleRow>,
}

/// Oracle estimate serialized next to the analytic values.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonOracleRow {
    pub lag_order: usize,
    pub lambda_full: f64,
    pub lambda_own: f64,
    pub lambda_all: f64,
    pub storage_nats: f64,
    pub transfer_nats: f64,
    pub predictive_nats: f64,
    pub storage_abs_dev_nats: f64,
    pub transfer_abs_dev_nats: f64,
    pub predictive_abs_dev_nats: f64,
}

/// Assembles the JSON document from computed rows.
pub fn build_json_document(meta: JsonMeta, rows: &[RowData]) -> JsonDocument {
    let rows = rows
        .iter()
        .map(|row| {
            let a = &row.analytic;
            JsonRow {
                scale: row.tau,
                mode: row.mode.label().to_string(),
                target: row.target,
                lambda_full: a.lambda_full,
                lambda_own: a.lambda_own,
                lambda_all: a.lambda_all,
                storage_nats: a.storage,
                transfer_nats: a.transfer,
                predictive_nats: a.predictive,
                storage_bits: a.storage / LN_2,
                transfer_bits: a.transfer / LN_2,
                oracle: row.oracle.as_ref().map(|cmp| {
                    let o = &cmp.measures;
                    JsonOracleRow {
                        lag_order: cmp.lag_order,
                        lambda_full: o.lambda_full,
                        lambda_own: o.lambda_own,
                        lambda_all: o.lambda_all,
                        storage_nats: o.storage,
                        transfer_nats: o.transfer,
                        predictive_nats: o.predictive,
                        storage_abs_dev_nats: (o.storage - a.storage).abs(),
                        transfer_abs_dev_nats: (o.transfer - a.transfer).abs(),
                        predictive_abs_dev_nats: (o.predictive - a.predictive).abs(),
                    }
                }),
            }
        })
        .collect();
    JsonDocument { meta, rows }
}

/// Canonical JSON rendering; re-parsing and re-rendering reproduces the
/// exact bytes.
pub fn render_json(doc: &JsonDocument) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("result table serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_measures(target: usize) -> InfoMeasures {
        InfoMeasures {
            target,
            lambda_full: 16.0 / 15.0,
            lambda_own: 1.0,
            lambda_all: 1.0,
            storage: 0.5 * (16.0f64 / 15.0).ln(),
            transfer: 0.0,
            predictive: 0.5 * (16.0f64 / 15.0).ln(),
        }
    }

    fn sample_rows() -> Vec<RowData> {
        vec![
            RowData {
                tau: 1,
                mode: Mode::Avg,
                target: 1,
                analytic: sample_measures(1),
                oracle: None,
            },
            RowData {
                tau: 1,
                mode: Mode::Dws,
                target: 2,
                analytic: sample_measures(2),
                oracle: None,
            },
        ]
    }

    #[test]
    fn csv_header_matches_contract() {
        let csv = render_csv(&sample_rows(), false);
        let header = csv.lines().next().unwrap();
        assert_eq!(
            header,
            "scale,mode,target,lambda_full,lambda_own,lambda_all,storage_nats,\
transfer_nats,predictive_nats,storage_bits,transfer_bits"
        );
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.ends_with('\n'));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn csv_values_carry_twelve_significant_digits() {
        let csv = render_csv(&sample_rows(), false);
        let row = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], "1");
        assert_eq!(fields[1], "avg");
        assert_eq!(fields[2], "1");
        // lambda_full = 16/15 = 1.0666...; 12 significant digits.
        assert_eq!(fields[3], "1.06666666667e0");
        let parsed: f64 = fields[6].parse().unwrap();
        assert!((parsed - 0.5 * (16.0f64 / 15.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn csv_with_oracle_appends_the_comparison_columns() {
        let mut rows = sample_rows();
        for row in &mut rows {
            row.oracle = Some(OracleComparison {
                lag_order: 6,
                measures: row.analytic.clone(),
            });
        }
        let csv = render_csv(&rows, true);
        let header = csv.lines().next().unwrap();
        assert!(header.ends_with(
            "oracle_lambda_full,oracle_lambda_own,oracle_lambda_all,oracle_storage_nats,\
oracle_transfer_nats,oracle_predictive_nats,storage_abs_dev_nats,transfer_abs_dev_nats,\
predictive_abs_dev_nats"
        ));
        let row = csv.lines().nth(1).unwrap();
        assert_eq!(row.split(',').count(), 20);
        // Identical estimate: deviations are exactly zero.
        assert!(row.ends_with("0.00000000000e0,0.00000000000e0,0.00000000000e0"));
    }

    #[test]
    fn bits_columns_are_nats_over_ln2() {
        let csv = render_csv(&sample_rows(), false);
        let fields: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        let nats: f64 = fields[6].parse().unwrap();
        let bits: f64 = fields[9].parse().unwrap();
        assert!((bits - nats / LN_2).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let meta = JsonMeta {
            model: "uni".to_string(),
            m: 2,
            p: 2,
            taus: vec![1],
            modes: vec!["avg".to_string(), "dws".to_string()],
            targets: vec![1, 2],
            oracle: None,
        };
        let doc = build_json_document(meta, &sample_rows());
        let text = render_json(&doc);
        let reread: JsonDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(render_json(&reread), text);
        assert_eq!(reread, doc);
    }
}
