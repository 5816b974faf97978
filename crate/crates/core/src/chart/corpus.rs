//! Deterministic corpora of rendered charts.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::data::{synth_spec_constrained, synth_table, DataSpec, SpecError, ValueMode};
use super::render::{render_chart, ChartFamily, ChartType, RenderError, RenderedChart};
use crate::seed;

/// Relative weights of bar, line and area charts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mix {
    pub bar: f64,
    pub line: f64,
    pub area: f64,
}

impl Default for Mix {
    fn default() -> Self {
        Mix { bar: 1.0, line: 1.0, area: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorpusError {
    #[error("mix weights must be finite, non-negative and not all zero")]
    Mix,
    #[error("item {index}: {source}")]
    Render { index: usize, source: RenderError },
    #[error("item {index}: {source}")]
    Spec { index: usize, source: SpecError },
}

impl Mix {
    /// Item counts per family; largest remainder, ties to bar then line.
    pub fn partition(&self, n: usize) -> Result<[usize; 3], CorpusError> {
        let w = [self.bar, self.line, self.area];
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(CorpusError::Mix);
        }
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            return Err(CorpusError::Mix);
        }
        let raw: Vec<f64> = w.iter().map(|x| x / total * n as f64).collect();
        let mut counts = [raw[0] as usize, raw[1] as usize, raw[2] as usize];
        let mut left = n - counts.iter().sum::<usize>();
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| {
            let fa = raw[a] - counts[a] as f64;
            let fb = raw[b] - counts[b] as f64;
            fb.partial_cmp(&fa).unwrap_or(core::cmp::Ordering::Equal).then(a.cmp(&b))
        });
        for &i in order.iter().cycle() {
            if left == 0 {
                break;
            }
            if w[i] > 0.0 {
                counts[i] += 1;
                left -= 1;
            }
        }
        Ok(counts)
    }
}

/// Corpus shape: family of every index and the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusPlan {
    pub n: usize,
    pub counts: [usize; 3],
    pub master_seed: u64,
}

impl CorpusPlan {
    pub fn new(n: usize, mix: Mix, master_seed: u64) -> Result<Self, CorpusError> {
        Ok(CorpusPlan { n, counts: mix.partition(n)?, master_seed })
    }

    /// Bars first, then lines, then areas.
    pub fn family(&self, index: usize) -> ChartFamily {
        if index < self.counts[0] {
            ChartFamily::Bar
        } else if index < self.counts[0] + self.counts[1] {
            ChartFamily::Line
        } else {
            ChartFamily::Area
        }
    }

    pub fn item_seed(&self, index: usize) -> u64 {
        seed::stable_hash(self.master_seed, index as u64)
    }

    /// Seed handed to the topic source for item `index`.
    pub fn topic_seed(&self, index: usize) -> u64 {
        seed::derive(self.item_seed(index), "topic")
    }

    /// Spec drawn from the built-in topic bank.
    pub fn default_spec(&self, index: usize) -> DataSpec {
        synth_spec_constrained(self.topic_seed(index), self.family(index) == ChartFamily::Area)
    }

    /// Item `index`, independent of every other item.
    pub fn item(&self, index: usize) -> Result<CorpusItem, CorpusError> {
        self.item_with_spec(index, self.default_spec(index))
    }

    /// Item `index` drawn for an externally supplied spec.
    pub fn item_with_spec(&self, index: usize, spec: DataSpec) -> Result<CorpusItem, CorpusError> {
        let item_seed = self.item_seed(index);
        let family = self.family(index);
        spec.validate().map_err(|source| CorpusError::Spec { index, source })?;
        let table = synth_table(&spec, seed::derive(item_seed, "values"));
        let mut rng = seed::rng(seed::derive(item_seed, "type"));
        let chart_type = match family {
            ChartFamily::Line => ChartType::Line,
            ChartFamily::Area => ChartType::StackedArea,
            ChartFamily::Bar if spec.quantitative.mode == ValueMode::PercentStacked => ChartType::StackedBar,
            ChartFamily::Bar if rng.random_bool(0.7) => ChartType::GroupedBar,
            ChartFamily::Bar => ChartType::StackedBar,
        };
        let chart = render_chart(&spec, &table, chart_type, seed::derive(item_seed, "style"))
            .map_err(|source| CorpusError::Render { index, source })?;
        Ok(CorpusItem { index, seed: item_seed, chart })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusItem {
    pub index: usize,
    pub seed: u64,
    pub chart: RenderedChart,
}

pub fn gen_corpus(n: usize, mix: Mix, master_seed: u64) -> Result<Vec<CorpusItem>, CorpusError> {
    let plan = CorpusPlan::new(n, mix, master_seed)?;
    (0..n).map(|i| plan.item(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_exact() {
        let mix = Mix { bar: 1012.0, line: 1012.0, area: 975.0 };
        assert_eq!(mix.partition(2999).unwrap(), [1012, 1012, 975]);
        assert_eq!(Mix::default().partition(300).unwrap(), [100, 100, 100]);
        assert_eq!(Mix::default().partition(10).unwrap(), [4, 3, 3]);
        assert_eq!(Mix { bar: 1.0, line: 0.0, area: 0.0 }.partition(7).unwrap(), [7, 0, 0]);
        assert!(Mix { bar: 0.0, line: 0.0, area: 0.0 }.partition(3).is_err());
        assert!(Mix { bar: -1.0, line: 1.0, area: 1.0 }.partition(3).is_err());
    }

    #[test]
    fn items_are_reproducible_in_any_order() {
        let plan = CorpusPlan::new(12, Mix::default(), 42).unwrap();
        let forward: Vec<_> = (0..12).map(|i| plan.item(i).unwrap()).collect();
        for i in (0..12).rev() {
            assert_eq!(plan.item(i).unwrap(), forward[i]);
        }
        assert_eq!(gen_corpus(12, Mix::default(), 42).unwrap(), forward);
    }

    #[test]
    fn families_follow_the_plan() {
        let items = gen_corpus(9, Mix::default(), 1).unwrap();
        let fams: Vec<_> = items.iter().map(|i| i.chart.meta.chart_type.family()).collect();
        assert_eq!(&fams[..3], &[ChartFamily::Bar; 3]);
        assert_eq!(&fams[3..6], &[ChartFamily::Line; 3]);
        assert_eq!(&fams[6..], &[ChartFamily::Area; 3]);
    }
}
