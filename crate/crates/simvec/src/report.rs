//! Report tables: machine-readable structs plus aligned plain text.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use simvec_core::eval::{QaScore, ReconSummary, THRESHOLDS};

/// Left-aligned first column, right-aligned rest.
pub fn aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width = vec![0; cols];
    for r in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |r: &[String]| {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(i, c)| if i == 0 { format!("{c:<w$}", w = width[i]) } else { format!("{c:>w$}", w = width[i]) })
            .collect();
        cells.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    out.push_str(&line(&width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

fn pct(v: f64) -> String {
    format!("{:.2}%", v * 100.0)
}

fn opt(v: Option<f64>, f: fn(f64) -> String) -> String {
    v.map_or_else(|| "-".to_string(), f)
}

pub fn qa_table(score: &QaScore) -> String {
    let mut header = vec!["group".to_string(), "items".to_string()];
    header.extend(THRESHOLDS.iter().map(|t| format!("<{}%", (t * 100.0).round())));
    let row = |name: &str, a: &simvec_core::eval::Accuracy| {
        let mut r = vec![name.to_string(), a.items.to_string()];
        r.extend((0..THRESHOLDS.len()).map(|i| pct(a.rate(i))));
        r
    };
    let mut rows: Vec<Vec<String>> = score.by_group.iter().map(|(k, a)| row(k, a)).collect();
    rows.push(row("overall", &score.overall));
    let mut out = aligned(&header, &rows);
    out.push('\n');
    let rows: Vec<Vec<String>> = score.by_kind.iter().map(|(k, a)| row(k, a)).collect();
    header[0] = "task".to_string();
    out.push_str(&aligned(&header, &rows));
    out
}

/// Metrics as rows, groups as columns.
pub fn recon_table(summary: &BTreeMap<String, ReconSummary>) -> String {
    let mut header = vec!["metric".to_string()];
    header.extend(summary.keys().cloned());
    let metrics: [(&str, fn(&ReconSummary) -> String); 6] = [
        ("charts", |s| s.charts.to_string()),
        ("text hit rate", |s| opt(s.text_hit_rate, pct)),
        ("text similarity", |s| opt(s.text_similarity, pct)),
        ("text center distance", |s| opt(s.text_center_distance, |v| format!("{v:.3}"))),
        ("element color distance", |s| opt(s.element_color_distance, |v| format!("{v:.3}"))),
        ("element position distance", |s| opt(s.element_position_distance, |v| format!("{v:.3}"))),
    ];
    let rows: Vec<Vec<String>> = metrics
        .iter()
        .map(|(name, f)| std::iter::once(name.to_string()).chain(summary.values().map(f)).collect())
        .collect();
    aligned(&header, &rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenRow {
    pub id: String,
    pub chart_type: String,
    pub svg_tokens: usize,
    pub simvec_tokens: usize,
    /// `1 - simvec / svg`.
    pub reduction: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TokensReport {
    pub rows: Vec<TokenRow>,
    pub median_reduction: Option<f64>,
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}

impl TokensReport {
    pub fn new(rows: Vec<TokenRow>) -> Self {
        let reductions: Vec<f64> = rows.iter().map(|r| r.reduction).collect();
        TokensReport { median_reduction: median(&reductions), rows }
    }

    pub fn table(&self) -> String {
        let header: Vec<String> = ["chart", "type", "svg", "simvec", "reduction"].map(String::from).to_vec();
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| vec![r.id.clone(), r.chart_type.clone(), r.svg_tokens.to_string(), r.simvec_tokens.to_string(), pct(r.reduction)])
            .collect();
        let mut out = aligned(&header, &rows);
        out.push_str(&format!("median reduction: {}\n", opt(self.median_reduction, pct)));
        out
    }
}
