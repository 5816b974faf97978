//! Subcommand implementations shared by the binary and the tests.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use simvec_core::antiqua::AntiquaParams;
use simvec_core::chart::{ChartFamily, CorpusError, CorpusItem, CorpusPlan, Mix};
use simvec_core::eval::{
    aggregate_reports, evaluate_reconstruction_with, score_qa, EvalOptions, GtItem, QaScore, ReconReport,
    ReconSummary,
};
use simvec_core::qa::{gen_qa_suite, TaskKind};
use simvec_core::{count_tokens, parse_simvec, seed, serialize_simvec, validate, SimVecDoc};
use thiserror::Error;

use crate::adapters::{Rasterizer, TopicProvider};
use crate::ingest::{ingest_svg, IngestOptions, Warning};
use crate::manifest::{
    manifest_text, read_manifest, verify_manifest, write_atomic, ManifestError, ManifestRecord, Style, VerifyReport,
    GENERATOR_VERSION,
};
use crate::oldify::oldify;
use crate::render::render_simvec;
use crate::report::{recon_table, qa_table, TokenRow, TokensReport};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl PipelineError {
    /// 1 usage, 2 validation, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Usage(_) => 1,
            PipelineError::Validation(_) => 2,
            PipelineError::Io { .. } => 3,
        }
    }
}

impl From<ManifestError> for PipelineError {
    fn from(e: ManifestError) -> Self {
        match e {
            ManifestError::Io { path, source } => PipelineError::Io { path, source },
            e @ ManifestError::Record { .. } => PipelineError::Validation(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), PipelineError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| PipelineError::Io { path: dir.to_path_buf(), source })?;
    }
    write_atomic(path, contents.as_bytes()).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })
}

#[derive(Debug, Clone)]
pub struct SynthOptions {
    pub n: usize,
    pub mix: Mix,
    pub seed: u64,
    pub out: PathBuf,
    /// Also write a historical variant of every chart.
    pub antiqua: Option<AntiquaParams>,
    pub workers: Option<usize>,
    pub rasterizer: Option<Rasterizer>,
    pub topic_provider: Option<TopicProvider>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SynthSummary {
    pub manifest: PathBuf,
    pub charts: usize,
    pub records: usize,
    pub counts: [usize; 3],
    pub retrieve_items: usize,
    pub extreme_items: usize,
    pub warnings: Vec<String>,
}

pub const MANIFEST_NAME: &str = "manifest.jsonl";

fn corpus_item(plan: &CorpusPlan, i: usize, provider: Option<&TopicProvider>, warnings: &mut Vec<String>) -> Result<CorpusItem, CorpusError> {
    if let Some(p) = provider {
        match p.spec(plan.topic_seed(i), plan.family(i) == ChartFamily::Area) {
            Ok(spec) => match plan.item_with_spec(i, spec) {
                Ok(item) => return Ok(item),
                Err(e) => warnings.push(format!("topic provider spec unusable, using built-in bank: {e}")),
            },
            Err(e) => warnings.push(format!("item {i}: topic provider failed, using built-in bank: {e}")),
        }
    }
    plan.item(i)
}

fn synth_one(plan: &CorpusPlan, i: usize, opts: &SynthOptions) -> Result<(Vec<ManifestRecord>, Vec<String>), PipelineError> {
    let mut warnings = Vec::new();
    let item = corpus_item(plan, i, opts.topic_provider.as_ref(), &mut warnings)
        .map_err(|e| PipelineError::Validation(e.to_string()))?;
    let chart = &item.chart;
    let id = format!("chart-{i:05}");
    let svg_path = format!("svg/{id}.svg");
    let simvec_path = format!("simvec/{id}.simvec");
    write(&opts.out.join(&svg_path), &chart.svg)?;
    let text = serialize_simvec(&chart.simvec).map_err(|e| PipelineError::Validation(format!("{id}: {e}")))?;
    write(&opts.out.join(&simvec_path), &text)?;
    let qa = gen_qa_suite(&chart.meta, seed::derive(item.seed, "qa"));

    let raster = |svg_rel: &str, stem: &str, warnings: &mut Vec<String>| -> Result<Option<String>, PipelineError> {
        let Some(r) = &opts.rasterizer else { return Ok(None) };
        let png = format!("png/{stem}.png");
        let target = opts.out.join(&png);
        fs::create_dir_all(target.parent().expect("has parent"))
            .map_err(|source| PipelineError::Io { path: target.clone(), source })?;
        match r.rasterize(&opts.out.join(svg_rel), &target) {
            Ok(()) => Ok(Some(png)),
            Err(e) => {
                warnings.push(format!("{stem}: rasterizer: {e}"));
                Ok(None)
            }
        }
    };

    let record = ManifestRecord {
        id: id.clone(),
        chart_type: chart.meta.chart_type,
        style: Style::Digital,
        png_path: raster(&svg_path, &id, &mut warnings)?,
        svg_path,
        simvec_path: simvec_path.clone(),
        meta: chart.meta.clone(),
        qa: qa.clone(),
        generator_version: GENERATOR_VERSION.to_string(),
        master_seed: opts.seed,
    };
    let mut records = vec![record];
    if let Some(base) = &opts.antiqua {
        let params = AntiquaParams { seed: seed::stable_hash(base.seed, item.seed), ..base.clone() };
        let old = oldify(&chart.svg, &params).map_err(|e| PipelineError::Validation(format!("{id}: {e}")))?;
        let hid = format!("{id}-historical");
        let hsvg = format!("historical/{hid}.svg");
        write(&opts.out.join(&hsvg), &old)?;
        records.push(ManifestRecord {
            id: hid.clone(),
            style: Style::Historical,
            png_path: raster(&hsvg, &hid, &mut warnings)?,
            svg_path: hsvg,
            ..records[0].clone()
        });
    }
    Ok((records, warnings))
}

/// Generate a corpus under `opts.out` and write its manifest.
pub fn cmd_synth(opts: &SynthOptions) -> Result<SynthSummary, PipelineError> {
    let plan = CorpusPlan::new(opts.n, opts.mix, opts.seed).map_err(|e| PipelineError::Usage(e.to_string()))?;
    if let Some(p) = &opts.antiqua {
        p.validate().map_err(|e| PipelineError::Usage(e.to_string()))?;
    }
    fs::create_dir_all(&opts.out).map_err(|source| PipelineError::Io { path: opts.out.clone(), source })?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.unwrap_or(0))
        .build()
        .map_err(|e| PipelineError::Usage(e.to_string()))?;
    let results: Vec<_> = pool.install(|| (0..opts.n).into_par_iter().map(|i| synth_one(&plan, i, opts)).collect());
    let mut summary = SynthSummary { charts: opts.n, counts: plan.counts, ..Default::default() };
    let mut records = Vec::with_capacity(opts.n);
    for r in results {
        let (recs, warns) = r?;
        let first = &recs[0];
        summary.retrieve_items += first.qa.iter().filter(|q| q.kind == TaskKind::RetrieveValue).count();
        summary.extreme_items += first.qa.iter().filter(|q| q.kind != TaskKind::RetrieveValue).count();
        summary.warnings.extend(warns);
        records.extend(recs);
    }
    summary.records = records.len();
    summary.manifest = opts.out.join(MANIFEST_NAME);
    write(&summary.manifest, &manifest_text(&records))?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvertOutcome {
    pub simvec: String,
    pub warnings: Vec<Warning>,
}

pub fn cmd_convert(svg_path: &Path, out: Option<&Path>, options: &IngestOptions) -> Result<ConvertOutcome, PipelineError> {
    let svg = read(svg_path)?;
    let ingested = ingest_svg(&svg, options).map_err(|e| PipelineError::Validation(format!("{}: {e}", svg_path.display())))?;
    let simvec = serialize_simvec(&ingested.doc).map_err(|e| PipelineError::Validation(e.to_string()))?;
    if let Some(out) = out {
        write(out, &simvec)?;
    }
    Ok(ConvertOutcome { simvec, warnings: ingested.warnings })
}

fn load_simvec(path: &Path) -> Result<SimVecDoc, PipelineError> {
    let text = read(path)?;
    let doc = parse_simvec(&text).map_err(|e| PipelineError::Validation(format!("{}: {e}", path.display())))?;
    let v = validate(&doc);
    if let Some(first) = v.first() {
        return Err(PipelineError::Validation(format!("{}: {} violations, first: element {} {} = {}", path.display(), v.len(), first.index, first.field, first.observed)));
    }
    Ok(doc)
}

pub fn cmd_render(simvec_path: &Path, out: Option<&Path>) -> Result<String, PipelineError> {
    let svg = render_simvec(&load_simvec(simvec_path)?);
    if let Some(out) = out {
        write(out, &svg)?;
    }
    Ok(svg)
}

pub fn cmd_oldify(svg_path: &Path, out: Option<&Path>, params: &AntiquaParams) -> Result<String, PipelineError> {
    let svg = read(svg_path)?;
    let old = oldify(&svg, params).map_err(|e| PipelineError::Validation(format!("{}: {e}", svg_path.display())))?;
    if let Some(out) = out {
        write(out, &old)?;
    }
    Ok(old)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Recon,
    Qa,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QaPrediction {
    pub item_id: String,
    pub raw_text: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReconPrediction {
    pub chart_id: String,
    pub simvec_text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChartRecon {
    pub chart_id: String,
    pub group: String,
    /// The prediction did not parse and was scored as an empty document.
    pub unparsable: bool,
    pub report: ReconReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconOutcome {
    pub summary: BTreeMap<String, ReconSummary>,
    pub charts: Vec<ChartRecon>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum EvalOutcome {
    Qa(QaScore),
    Recon(ReconOutcome),
}

impl EvalOutcome {
    pub fn table(&self) -> String {
        match self {
            EvalOutcome::Qa(s) => qa_table(s),
            EvalOutcome::Recon(r) => recon_table(&r.summary),
        }
    }
}

fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, PipelineError> {
    read(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l)
                .map_err(|e| PipelineError::Validation(format!("{}:{}: {e}", path.display(), i + 1)))
        })
        .collect()
}

fn group_of(r: &ManifestRecord) -> &'static str {
    r.chart_type.family().name()
}

/// Score predictions against a manifest; reports go to `out` when given.
pub fn cmd_eval(
    manifest: &Path,
    predictions: &Path,
    mode: EvalMode,
    options: &EvalOptions,
    out: Option<&Path>,
) -> Result<EvalOutcome, PipelineError> {
    let records = read_manifest(manifest)?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let outcome = match mode {
        EvalMode::Qa => {
            let preds: Vec<QaPrediction> = read_jsonl(predictions)?;
            let ids: Vec<(String, &str, &simvec_core::qa::QaItem)> =
                records.iter().flat_map(|r| r.qa.iter().map(move |q| (r.item_id(q), group_of(r), q))).collect();
            let gt: Vec<GtItem> = ids.iter().map(|(id, group, item)| GtItem { id, group, item }).collect();
            let pairs: Vec<(String, String)> = preds.into_iter().map(|p| (p.item_id, p.raw_text)).collect();
            EvalOutcome::Qa(score_qa(&pairs, &gt).map_err(|e| PipelineError::Validation(e.to_string()))?)
        }
        EvalMode::Recon => {
            let preds: Vec<ReconPrediction> = read_jsonl(predictions)?;
            let by_id: HashMap<&str, &ManifestRecord> = records.iter().map(|r| (r.id.as_str(), r)).collect();
            let mut charts = Vec::with_capacity(preds.len());
            for p in &preds {
                let r = by_id
                    .get(p.chart_id.as_str())
                    .ok_or_else(|| PipelineError::Validation(format!("prediction for unknown chart `{}`", p.chart_id)))?;
                let gt = load_simvec(&base.join(&r.simvec_path))?;
                let (pred, unparsable) = match parse_simvec(&p.simvec_text) {
                    Ok(d) => (d, false),
                    Err(_) => (SimVecDoc::default(), true),
                };
                charts.push(ChartRecon {
                    chart_id: p.chart_id.clone(),
                    group: group_of(r).to_string(),
                    unparsable,
                    report: evaluate_reconstruction_with(&pred, &gt, options),
                });
            }
            let summary = aggregate_reports(charts.iter().map(|c| (c.group.as_str(), &c.report)));
            EvalOutcome::Recon(ReconOutcome { summary, charts })
        }
    };
    if let Some(dir) = out {
        let stem = match mode {
            EvalMode::Qa => "qa_report",
            EvalMode::Recon => "recon_report",
        };
        let json = serde_json::to_string_pretty(&outcome).expect("report serializes");
        write(&dir.join(format!("{stem}.json")), &(json + "\n"))?;
        write(&dir.join(format!("{stem}.txt")), &outcome.table())?;
    }
    Ok(outcome)
}

/// Token counts of every digital chart's SVG against its SimVec.
pub fn cmd_tokens(manifest: &Path) -> Result<TokensReport, PipelineError> {
    let records = read_manifest(manifest)?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let rows = records
        .iter()
        .filter(|r| r.style == Style::Digital)
        .map(|r| {
            let svg_tokens = count_tokens(&read(&base.join(&r.svg_path))?);
            let simvec_tokens = count_tokens(&read(&base.join(&r.simvec_path))?);
            let reduction = if svg_tokens == 0 { 0.0 } else { 1.0 - simvec_tokens as f64 / svg_tokens as f64 };
            Ok(TokenRow { id: r.id.clone(), chart_type: r.chart_type.name().to_string(), svg_tokens, simvec_tokens, reduction })
        })
        .collect::<Result<Vec<_>, PipelineError>>()?;
    Ok(TokensReport::new(rows))
}

pub fn cmd_verify(manifest: &Path) -> Result<VerifyReport, PipelineError> {
    Ok(verify_manifest(manifest)?)
}
