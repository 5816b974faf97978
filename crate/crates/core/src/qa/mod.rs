//! Question/answer generation with chain-of-thought traces.

pub mod arith;
pub mod extract;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chart::{format_value, ChartFamily, ChartMeta, MarkBinding};
use crate::math::round_to;
use crate::seed;

pub use extract::{extract_final_answer, Expected, Extracted};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    RetrieveValue,
    ExtremeWhich,
    ExtremeValue,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::RetrieveValue => "retrieve-value",
            TaskKind::ExtremeWhich => "extreme-which",
            TaskKind::ExtremeValue => "extreme-value",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extreme {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnswerForm {
    Which,
    Value,
}

/// Marks compared by an extreme question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scope", rename_all = "lowercase")]
pub enum Scope {
    /// All categories at one time.
    Slice { time: String },
    /// One category across all times.
    Series { category: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "lowercase")]
pub enum Target {
    Key { category: String, time: String },
    Extreme { scope: Scope, extreme: Extreme },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "lowercase")]
pub enum Answer {
    Number(f64),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CotTrace {
    pub axis: String,
    pub geometry: String,
    /// Evaluable expression, `=`, and its printed result.
    pub arithmetic: String,
    /// Closing sentence; contains `arithmetic`.
    pub conclusion: String,
}

impl CotTrace {
    pub fn text(&self) -> String {
        format!("{} {} {}", self.axis, self.geometry, self.conclusion)
    }

    /// Left-hand side of the arithmetic statement.
    pub fn expression(&self) -> &str {
        self.arithmetic.split(" = ").next().unwrap_or("")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaItem {
    pub id: String,
    pub kind: TaskKind,
    pub question: String,
    pub target: Target,
    pub cot: CotTrace,
    pub answer: Answer,
    pub unit: String,
    /// Candidate labels for label answers.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    /// Value-axis span, used when scoring answers near zero.
    pub data_span: f64,
}

impl QaItem {
    pub fn expected(&self) -> Expected<'_> {
        match self.answer {
            Answer::Number(_) => Expected::Numeric,
            Answer::Label(_) => Expected::Label(&self.labels),
        }
    }

    pub fn answer_text(&self) -> String {
        match &self.answer {
            Answer::Number(v) => with_unit(*v, &self.unit),
            Answer::Label(l) => l.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QaError {
    #[error("no mark for category `{category}` at `{time}`")]
    MissingKey { category: String, time: String },
    #[error("scope has {0} marks, need at least 2")]
    EmptyScope(usize),
    #[error("unknown scope member `{0}`")]
    UnknownScope(String),
}

fn with_unit(v: f64, unit: &str) -> String {
    match unit {
        "" => format_value(v),
        "%" => format!("{}%", format_value(v)),
        u => format!("{} {u}", format_value(v)),
    }
}

fn axis_sentence(meta: &ChartMeta) -> String {
    let y = &meta.y_scale;
    let unit = &meta.spec.quantitative.unit;
    format!(
        "For the Y-axis of the chart maps from {} pixels to {} pixels, corresponding to a {} range of {} to {}.",
        format_value(y.pixel_min),
        format_value(y.pixel_max),
        meta.spec.quantitative.name,
        with_unit(y.data_min, unit),
        with_unit(y.data_max, unit)
    )
}

/// Axis formula applied to a printed measurement.
fn formula(meta: &ChartMeta, extent: &str) -> String {
    let y = &meta.y_scale;
    let mut f = format!(
        "({}/({} − {}))×{}",
        extent,
        format_value(y.pixel_max),
        format_value(y.pixel_min),
        format_value(y.data_span())
    );
    if y.data_min != 0.0 {
        f.push_str(&format!(" + {}", format_value(y.data_min)));
    }
    f
}

/// Exact mark extent printed with the fewest decimals whose formula rounds
/// back to `value`.
fn printed_extent(meta: &ChartMeta, value: f64) -> String {
    let exact = meta.y_scale.extent_of(value - meta.y_scale.data_min);
    for decimals in 0..=6usize {
        let s = trim(format!("{exact:.decimals$}"));
        if let Ok(v) = arith::eval(&formula(meta, &s)) {
            if round_to(v, 2) == value {
                return s;
            }
        }
    }
    trim(format!("{exact:.6}"))
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

struct Noun {
    mark: &'static str,
}

fn noun(meta: &ChartMeta) -> Noun {
    match meta.chart_type.family() {
        ChartFamily::Bar => Noun { mark: "bar" },
        ChartFamily::Line => Noun { mark: "point" },
        ChartFamily::Area => Noun { mark: "band" },
    }
}

fn measurement_sentence(meta: &ChartMeta, who: &str, extent: &str) -> String {
    match meta.chart_type.family() {
        ChartFamily::Bar => format!("The height of the bar representing {who} is {extent} pixels."),
        ChartFamily::Line => {
            format!("The point representing {who} lies {extent} pixels above the x-axis.")
        }
        ChartFamily::Area => format!("The thickness of the band representing {who} is {extent} pixels."),
    }
}

fn binding<'a>(meta: &'a ChartMeta, category: &str, time: &str) -> Result<&'a MarkBinding, QaError> {
    meta.binding(category, time).ok_or_else(|| QaError::MissingKey {
        category: category.to_string(),
        time: time.to_string(),
    })
}

pub fn gen_retrieve_value(meta: &ChartMeta, category: &str, time: &str) -> Result<QaItem, QaError> {
    let b = binding(meta, category, time)?;
    let q = &meta.spec.quantitative;
    let extent = printed_extent(meta, b.value);
    let who = format!("{category} in {time}");
    let arithmetic = format!("{} = {}", formula(meta, &extent), with_unit(b.value, &q.unit));
    let conclusion = format!("Thus, {who} accounts for {arithmetic}.");
    Ok(QaItem {
        id: String::new(),
        kind: TaskKind::RetrieveValue,
        question: format!("What is the {} of {category} in {time}?", q.name),
        target: Target::Key { category: category.to_string(), time: time.to_string() },
        cot: CotTrace {
            axis: axis_sentence(meta),
            geometry: measurement_sentence(meta, &who, &extent),
            arithmetic,
            conclusion,
        },
        answer: Answer::Number(b.value),
        unit: q.unit.clone(),
        labels: Vec::new(),
        data_span: meta.y_scale.data_span(),
    })
}

/// `(label, binding)` pairs of a scope in list order.
fn scope_members<'a>(meta: &'a ChartMeta, scope: &Scope) -> Result<Vec<(&'a str, &'a MarkBinding)>, QaError> {
    let t = &meta.table;
    match scope {
        Scope::Slice { time } => {
            if t.time_index(time).is_none() {
                return Err(QaError::UnknownScope(time.clone()));
            }
            t.categories.iter().map(|c| Ok((c.as_str(), binding(meta, c, time)?))).collect()
        }
        Scope::Series { category } => {
            if t.category_index(category).is_none() {
                return Err(QaError::UnknownScope(category.clone()));
            }
            t.times.iter().map(|tm| Ok((tm.as_str(), binding(meta, category, tm)?))).collect()
        }
    }
}

/// Index of the extreme; ties go to the first occurrence.
pub fn extreme_index(values: &[f64], extreme: Extreme) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        let better = match (best, extreme) {
            (None, _) => true,
            (Some(b), Extreme::Max) => *v > values[b],
            (Some(b), Extreme::Min) => *v < values[b],
        };
        if better {
            best = Some(i);
        }
    }
    best
}

pub fn gen_extreme(meta: &ChartMeta, scope: &Scope, extreme: Extreme, form: AnswerForm) -> Result<QaItem, QaError> {
    let members = scope_members(meta, scope)?;
    if members.len() < 2 {
        return Err(QaError::EmptyScope(members.len()));
    }
    let q = &meta.spec.quantitative;
    let values: Vec<f64> = members.iter().map(|(_, b)| b.value).collect();
    let winner = extreme_index(&values, extreme).unwrap_or(0);
    let extents: Vec<String> = values.iter().map(|v| printed_extent(meta, *v)).collect();
    let (word, func) = match extreme {
        Extreme::Max => ("highest", "max"),
        Extreme::Min => ("lowest", "min"),
    };
    let mark = noun(meta).mark;

    let listing = members
        .iter()
        .zip(&extents)
        .map(|((label, _), e)| format!("{e} pixels for {label}"))
        .collect::<Vec<_>>()
        .join(", ");
    let geometry = match (scope, meta.chart_type.family()) {
        (Scope::Slice { time }, ChartFamily::Line) => {
            format!("In {time}, the {mark}s lie above the x-axis by {listing}.")
        }
        (Scope::Series { category }, ChartFamily::Line) => {
            format!("For {category}, the {mark}s lie above the x-axis by {listing}.")
        }
        (Scope::Slice { time }, ChartFamily::Area) => format!("In {time}, the {mark} thicknesses are {listing}."),
        (Scope::Series { category }, ChartFamily::Area) => {
            format!("For {category}, the {mark} thicknesses are {listing}.")
        }
        (Scope::Slice { time }, ChartFamily::Bar) => format!("In {time}, the {mark} heights are {listing}."),
        (Scope::Series { category }, ChartFamily::Bar) => {
            format!("For {category}, the {mark} heights are {listing}.")
        }
    };
    let compared = format!("{func}({}) = {}", extents.join(", "), extents[winner]);
    let winner_label = members[winner].0.to_string();
    let ties: Vec<&str> = members
        .iter()
        .enumerate()
        .filter(|(i, (_, b))| *i != winner && b.value == values[winner])
        .map(|(_, (l, _))| *l)
        .collect();
    let tie_note = if ties.is_empty() {
        String::new()
    } else {
        format!(" {} ties with {}; the first listed is taken.", winner_label, ties.join(", "))
    };

    let (kind, question, arithmetic, conclusion, answer, labels) = match (form, scope) {
        (AnswerForm::Which, Scope::Slice { time }) => {
            let question = format!("Which {} has the {word} {} in {time}?", meta.spec.categorical.name, q.name);
            let conclusion = format!(
                "Comparing them, {compared} pixels.{tie_note} So {winner_label} has the {word} {} in {time}.",
                q.name
            );
            (TaskKind::ExtremeWhich, question, compared, conclusion, Answer::Label(winner_label), meta.table.categories.clone())
        }
        (AnswerForm::Which, Scope::Series { category }) => {
            let question = format!("In which {} does {category} have the {word} {}?", meta.spec.temporal.name, q.name);
            let conclusion = format!(
                "Comparing them, {compared} pixels.{tie_note} So {category} has the {word} {} in {winner_label}.",
                q.name
            );
            (TaskKind::ExtremeWhich, question, compared, conclusion, Answer::Label(winner_label), meta.table.times.clone())
        }
        (AnswerForm::Value, _) => {
            let value = values[winner];
            let arithmetic = format!("{} = {}", formula(meta, &extents[winner]), with_unit(value, &q.unit));
            let (question, subject) = match scope {
                Scope::Slice { time } => (
                    format!("What is the {word} {} in {time}?", q.name),
                    format!("the {word} {} in {time}", q.name),
                ),
                Scope::Series { category } => (
                    format!("What is the {word} {} of {category}?", q.name),
                    format!("the {word} {} of {category}", q.name),
                ),
            };
            let conclusion = format!(
                "Comparing them, {compared} pixels, for {winner_label}.{tie_note} Thus, {subject} is {arithmetic}."
            );
            (TaskKind::ExtremeValue, question, arithmetic, conclusion, Answer::Number(value), Vec::new())
        }
    };

    Ok(QaItem {
        id: String::new(),
        kind,
        question,
        target: Target::Extreme { scope: scope.clone(), extreme },
        cot: CotTrace { axis: axis_sentence(meta), geometry, arithmetic, conclusion },
        answer,
        unit: if labels.is_empty() { q.unit.clone() } else { String::new() },
        labels,
        data_span: meta.y_scale.data_span(),
    })
}

/// One retrieve item plus a max and a min item over one seeded scope.
/// Items are numbered `q0`, `q1`, ...
pub fn gen_qa_suite(meta: &ChartMeta, suite_seed: u64) -> Vec<QaItem> {
    let mut rng = seed::rng(seed::derive(suite_seed, "qa"));
    let t = &meta.table;
    let mut items = Vec::with_capacity(3);
    if t.categories.is_empty() || t.times.is_empty() {
        return items;
    }
    let c = rng.random_range(0..t.categories.len());
    let tm = rng.random_range(0..t.times.len());
    if let Ok(item) = gen_retrieve_value(meta, &t.categories[c], &t.times[tm]) {
        items.push(item);
    }
    let scope = if rng.random_bool(0.5) {
        Scope::Slice { time: t.times[rng.random_range(0..t.times.len())].clone() }
    } else {
        Scope::Series { category: t.categories[rng.random_range(0..t.categories.len())].clone() }
    };
    for extreme in [Extreme::Max, Extreme::Min] {
        let form = if rng.random_bool(0.5) { AnswerForm::Which } else { AnswerForm::Value };
        if let Ok(item) = gen_extreme(meta, &scope, extreme, form) {
            items.push(item);
        }
    }
    for (i, item) in items.iter_mut().enumerate() {
        item.id = format!("q{i}");
    }
    items
}
