//! Report documents: JSON and CSV emission with fixed field names and
//! fixed-width numbers.
//!
//! Floats are serialized with 17 significant digits (`{:.16e}`) for
//! diff-stability; the two output formats carry identical numeric content.
//! Non-finite values become `null` in JSON and an empty field in CSV, with
//! the `finite` flag carrying the distinction. Field names are pinned by
//! `schema/report.schema.json` at the repository root.

use crate::axioms::{AxiomReport, Verdict};
use crate::divergence::DivergenceValue;

/// 17-significant-digit rendering shared by both formats.
pub fn fmt_float(x: f64) -> Option<String> {
    if x.is_finite() {
        Some(format!("{:.16e}", x))
    } else {
        None
    }
}

fn json_num(x: f64) -> String {
    fmt_float(x).unwrap_or_else(|| "null".to_string())
}

fn csv_num(x: f64) -> String {
    fmt_float(x).unwrap_or_default()
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_float_array(xs: &[f64]) -> String {
    let inner: Vec<String> = xs.iter().map(|&x| json_num(x)).collect();
    format!("[{}]", inner.join(","))
}

/// Everything the run was configured with, echoed verbatim into reports so
/// identical configs are recognizable from the output alone.
#[derive(Debug, Clone)]
pub struct ConfigEcho {
    pub command: String,
    pub alpha_grid: Vec<f64>,
    pub input: Option<String>,
    pub seed: u64,
    pub trials: u32,
    pub n_max: usize,
    pub format: String,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub domain: String,
    pub threads: usize,
    pub measures: String,
    pub initial_element: String,
    pub gamma: f64,
}

impl ConfigEcho {
    fn to_json(&self) -> String {
        format!(
            "{{\"command\":{},\"alpha_grid\":{},\"input\":{},\"seed\":{},\"trials\":{},\"n_max\":{},\"format\":{},\"rel_tol\":{},\"abs_tol\":{},\"domain\":{},\"threads\":{},\"measures\":{},\"initial_element\":{},\"gamma\":{}}}",
            json_str(&self.command),
            json_float_array(&self.alpha_grid),
            self.input
                .as_deref()
                .map(json_str)
                .unwrap_or_else(|| "null".to_string()),
            self.seed,
            self.trials,
            self.n_max,
            json_str(&self.format),
            json_num(self.rel_tol),
            json_num(self.abs_tol),
            json_str(&self.domain),
            self.threads,
            json_str(&self.measures),
            json_str(&self.initial_element),
            json_num(self.gamma),
        )
    }
}

/// One axiom-suite result row: a report plus the measure and alpha it
/// belongs to and the verdict the measure's design predicts.
pub struct AxiomRow {
    pub measure: String,
    pub alpha: f64,
    pub expected: Verdict,
    pub report: AxiomReport,
}

pub fn axioms_json(config: &ConfigEcho, rows: &[AxiomRow]) -> String {
    let mut reports = Vec::with_capacity(rows.len());
    for row in rows {
        let witness = match &row.report.worst_witness {
            Some(w) => format!(
                "{{\"p\":{},\"q\":{},\"detail\":{}}}",
                json_float_array(&w.p),
                json_float_array(&w.q),
                json_str(&w.detail)
            ),
            None => "null".to_string(),
        };
        reports.push(format!(
            "{{\"measure\":{},\"axiom\":{},\"alpha\":{},\"trials\":{},\"max_residual\":{},\"tolerance_used\":{},\"verdict\":{},\"expected\":{},\"infinite_trials\":{},\"worst_witness\":{}}}",
            json_str(&row.measure),
            json_str(row.report.axiom.label()),
            json_num(row.alpha),
            row.report.trials,
            json_num(row.report.max_residual),
            json_num(row.report.tolerance_used),
            json_str(row.report.verdict.label()),
            json_str(row.expected.label()),
            row.report.infinite_trials,
            witness,
        ));
    }
    let pass = rows
        .iter()
        .filter(|r| r.report.verdict == Verdict::Pass)
        .count();
    let fail = rows.len() - pass;
    format!(
        "{{\"config_echo\":{},\"reports\":[{}],\"summary\":{{\"pass\":{},\"fail\":{}}}}}\n",
        config.to_json(),
        reports.join(","),
        pass,
        fail
    )
}

pub fn axioms_csv(_config: &ConfigEcho, rows: &[AxiomRow]) -> String {
    let mut out = String::from(
        "measure,axiom,alpha,trials,max_residual,tolerance_used,verdict,expected,infinite_trials,witness_p,witness_q,witness_detail\n",
    );
    for row in rows {
        let (wp, wq, wd) = match &row.report.worst_witness {
            Some(w) => (
                w.p.iter()
                    .map(|&x| csv_num(x))
                    .collect::<Vec<_>>()
                    .join(";"),
                w.q.iter()
                    .map(|&x| csv_num(x))
                    .collect::<Vec<_>>()
                    .join(";"),
                w.detail.clone(),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            csv_field(&row.measure),
            row.report.axiom.label(),
            csv_num(row.alpha),
            row.report.trials,
            csv_num(row.report.max_residual),
            csv_num(row.report.tolerance_used),
            row.report.verdict.label(),
            row.expected.label(),
            row.report.infinite_trials,
            csv_field(&wp),
            csv_field(&wq),
            csv_field(&wd),
        ));
    }
    out
}

/// One divergence evaluation: a record from the input file at one alpha.
pub struct DivergenceRow {
    pub record_id: String,
    pub alpha: f64,
    pub value: DivergenceValue,
}

pub fn divergence_json(config: &ConfigEcho, rows: &[DivergenceRow]) -> String {
    let body: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{{\"record_id\":{},\"alpha\":{},\"value\":{},\"finite\":{}}}",
                json_str(&r.record_id),
                json_num(r.alpha),
                json_num(r.value.value()),
                r.value.is_finite(),
            )
        })
        .collect();
    format!(
        "{{\"config_echo\":{},\"rows\":[{}]}}\n",
        config.to_json(),
        body.join(",")
    )
}

pub fn divergence_csv(_config: &ConfigEcho, rows: &[DivergenceRow]) -> String {
    let mut out = String::from("record_id,alpha,value,finite\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            csv_field(&r.record_id),
            csv_num(r.alpha),
            csv_num(r.value.value()),
            r.value.is_finite(),
        ));
    }
    out
}

/// Reconstruction summary per alpha: worst gaps against the divergence and
/// against the iterated recursion, plus the observed scale ratio when the
/// divergence is large enough to divide by.
pub struct ReconstructionRow {
    pub alpha: f64,
    pub pairs: u32,
    pub max_abs_vs_divergence: f64,
    pub max_abs_vs_recursion: f64,
    pub max_abs_value: f64,
    pub gamma_ratio_min: Option<f64>,
    pub gamma_ratio_max: Option<f64>,
}

pub fn reconstruction_json(config: &ConfigEcho, rows: &[ReconstructionRow]) -> String {
    let body: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{{\"alpha\":{},\"pairs\":{},\"max_abs_vs_divergence\":{},\"max_abs_vs_recursion\":{},\"max_abs_value\":{},\"gamma_ratio_min\":{},\"gamma_ratio_max\":{}}}",
                json_num(r.alpha),
                r.pairs,
                json_num(r.max_abs_vs_divergence),
                json_num(r.max_abs_vs_recursion),
                json_num(r.max_abs_value),
                r.gamma_ratio_min.map(json_num).unwrap_or_else(|| "null".to_string()),
                r.gamma_ratio_max.map(json_num).unwrap_or_else(|| "null".to_string()),
            )
        })
        .collect();
    format!(
        "{{\"config_echo\":{},\"reconstruction\":[{}]}}\n",
        config.to_json(),
        body.join(",")
    )
}

pub fn reconstruction_csv(_config: &ConfigEcho, rows: &[ReconstructionRow]) -> String {
    let mut out = String::from(
        "alpha,pairs,max_abs_vs_divergence,max_abs_vs_recursion,max_abs_value,gamma_ratio_min,gamma_ratio_max\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_num(r.alpha),
            r.pairs,
            csv_num(r.max_abs_vs_divergence),
            csv_num(r.max_abs_vs_recursion),
            csv_num(r.max_abs_value),
            r.gamma_ratio_min.map(csv_num).unwrap_or_default(),
            r.gamma_ratio_max.map(csv_num).unwrap_or_default(),
        ));
    }
    out
}
