//! Dataset manifest: one JSON record per line, paths relative to the
//! manifest file.

use std::collections::HashSet;
use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use simvec_core::chart::{ChartMeta, ChartType};
use simvec_core::qa::{arith, extract_final_answer, Answer, Extracted, QaItem, Scope, Target};
use simvec_core::{parse_simvec, validate};
use thiserror::Error;

pub const GENERATOR_VERSION: &str = concat!("simvec ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    Digital,
    Historical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifestRecord {
    pub id: String,
    pub chart_type: ChartType,
    pub style: Style,
    pub svg_path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub png_path: Option<String>,
    pub simvec_path: String,
    pub meta: ChartMeta,
    pub qa: Vec<QaItem>,
    pub generator_version: String,
    pub master_seed: u64,
}

impl ManifestRecord {
    /// Corpus-wide id of a QA item, `chart/q0`.
    pub fn item_id(&self, item: &QaItem) -> String {
        format!("{}/{}", self.id, item.id)
    }
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: {source}")]
    Record { path: PathBuf, line: usize, source: serde_json::Error },
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestRecord>, ManifestError> {
    let io_err = |source| ManifestError::Io { path: path.to_path_buf(), source };
    let file = fs::File::open(path).map_err(io_err)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line)
            .map_err(|source| ManifestError::Record { path: path.to_path_buf(), line: i + 1, source })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn manifest_text(records: &[ManifestRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Write via a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Problem {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct VerifyReport {
    pub records: usize,
    pub qa_items: usize,
    pub problems: Vec<Problem>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

/// Problems with one QA item against its chart metadata.
pub fn check_item(meta: &ChartMeta, item: &QaItem) -> Vec<String> {
    let mut out = Vec::new();
    match &item.target {
        Target::Key { category, time } => {
            if meta.binding(category, time).is_none() {
                out.push(format!("{}: key ({category}, {time}) not in meta", item.id));
            }
        }
        Target::Extreme { scope, .. } => {
            let known = match scope {
                Scope::Slice { time } => meta.table.time_index(time).is_some(),
                Scope::Series { category } => meta.table.category_index(category).is_some(),
            };
            if !known {
                out.push(format!("{}: scope {scope:?} not in meta", item.id));
            }
        }
    }
    match &item.answer {
        Answer::Number(v) => match arith::eval(item.cot.expression()) {
            Ok(got) if round2(got) == *v => {}
            Ok(got) => out.push(format!("{}: CoT evaluates to {got}, answer {v}", item.id)),
            Err(e) => out.push(format!("{}: CoT arithmetic: {e}", item.id)),
        },
        Answer::Label(_) => {
            let ok = item
                .cot
                .arithmetic
                .split_once(" = ")
                .and_then(|(lhs, rhs)| Some((arith::eval(lhs).ok()?, rhs.trim().parse::<f64>().ok()?)))
                .is_some_and(|(a, b)| a == b);
            if !ok {
                out.push(format!("{}: comparison `{}` does not evaluate", item.id, item.cot.arithmetic));
            }
        }
    }
    let expected = match &item.answer {
        Answer::Number(v) => Extracted::Number(*v),
        Answer::Label(l) => Extracted::Label(l.clone()),
    };
    if extract_final_answer(&item.cot.text(), item.expected()) != expected {
        out.push(format!("{}: final answer not recoverable from the CoT", item.id));
    }
    out
}

/// Files exist, ids are unique, SimVec parses and validates, QA keys
/// resolve and CoT arithmetic re-evaluates to the answers.
pub fn verify_manifest(path: &Path) -> Result<VerifyReport, ManifestError> {
    let records = read_manifest(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut report = VerifyReport { records: records.len(), ..Default::default() };
    let mut ids = HashSet::new();
    for r in &records {
        let mut problem = |reason: String| report.problems.push(Problem { id: r.id.clone(), reason });
        if !ids.insert(r.id.as_str()) {
            problem("duplicate id".into());
        }
        if r.chart_type != r.meta.chart_type {
            problem("chart type differs from meta".into());
        }
        for p in [Some(&r.svg_path), Some(&r.simvec_path), r.png_path.as_ref()].into_iter().flatten() {
            if !base.join(p).is_file() {
                problem(format!("missing file {p}"));
            }
        }
        match fs::read_to_string(base.join(&r.simvec_path)) {
            Ok(text) => match parse_simvec(&text) {
                Ok(doc) => {
                    let v = validate(&doc);
                    if !v.is_empty() {
                        problem(format!("{} SimVec violations", v.len()));
                    }
                    if r.meta.bindings.iter().filter_map(|b| b.element).any(|i| i >= doc.len()) {
                        problem("binding points past the SimVec".into());
                    }
                }
                Err(e) => problem(format!("SimVec: {e}")),
            },
            Err(_) => {}
        }
        for item in &r.qa {
            for reason in check_item(&r.meta, item) {
                problem(reason);
            }
        }
        report.qa_items += r.qa.len();
    }
    Ok(report)
}
