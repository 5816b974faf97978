//! Thresholded QA accuracy.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qa::{extract_final_answer, Answer, Extracted, QaItem};

pub const THRESHOLDS: [f64; 3] = [0.05, 0.10, 0.20];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Accuracy {
    pub items: usize,
    /// Correct counts per entry of [`THRESHOLDS`].
    pub correct: [usize; 3],
}

impl Accuracy {
    pub fn rate(&self, threshold: usize) -> f64 {
        if self.items == 0 {
            0.0
        } else {
            self.correct[threshold] as f64 / self.items as f64
        }
    }

    fn add(&mut self, hits: [bool; 3]) {
        self.items += 1;
        for (c, h) in self.correct.iter_mut().zip(hits) {
            *c += h as usize;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct QaScore {
    pub overall: Accuracy,
    pub by_group: BTreeMap<String, Accuracy>,
    pub by_kind: BTreeMap<String, Accuracy>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("prediction for unknown item `{0}`")]
    UnknownItem(String),
}

/// Ground-truth item with its grouping key (usually the chart type).
#[derive(Debug, Clone, Copy)]
pub struct GtItem<'a> {
    pub id: &'a str,
    pub group: &'a str,
    pub item: &'a QaItem,
}

/// Per-threshold correctness of one raw prediction.
pub fn judge(item: &QaItem, raw: &str) -> [bool; 3] {
    match (&item.answer, extract_final_answer(raw, item.expected())) {
        (Answer::Number(g), Extracted::Number(p)) => {
            let dev = if g.abs() < 1e-9 {
                (p - g).abs() / item.data_span
            } else {
                (p - g).abs() / g.abs()
            };
            THRESHOLDS.map(|t| dev < t)
        }
        (Answer::Label(g), Extracted::Label(p)) => {
            let ok = g.to_lowercase() == p.to_lowercase();
            [ok; 3]
        }
        _ => [false; 3],
    }
}

/// Score `(item id, raw text)` predictions; items without one are wrong.
pub fn score_qa(predictions: &[(String, String)], gt: &[GtItem<'_>]) -> Result<QaScore, ScoreError> {
    let index: BTreeMap<&str, usize> = gt.iter().enumerate().map(|(i, g)| (g.id, i)).collect();
    let mut raw: Vec<Option<&str>> = alloc::vec![None; gt.len()];
    for (id, text) in predictions {
        let i = *index.get(id.as_str()).ok_or_else(|| ScoreError::UnknownItem(id.clone()))?;
        raw[i] = Some(text);
    }
    let mut score = QaScore::default();
    for (g, text) in gt.iter().zip(raw) {
        let hits = text.map_or([false; 3], |t| judge(g.item, t));
        score.overall.add(hits);
        score.by_group.entry(String::from(g.group)).or_default().add(hits);
        score.by_kind.entry(String::from(g.item.kind.name())).or_default().add(hits);
    }
    Ok(score)
}
