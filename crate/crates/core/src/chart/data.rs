//! Data specs, the built-in topic bank and table synthesis.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math::{ln, round};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueMode {
    Absolute,
    PercentStacked,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantitative {
    pub name: String,
    pub unit: String,
    pub mode: ValueMode,
    /// Value range for absolute mode.
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSpec {
    pub topic: String,
    pub categorical: Attribute,
    pub temporal: Attribute,
    pub quantitative: Quantitative,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("need at least 2 categorical values, got {0}")]
    TooFewCategories(usize),
    #[error("need at least 3 temporal values, got {0}")]
    TooFewTimes(usize),
    #[error("duplicate {0} value `{1}`")]
    Duplicate(&'static str, String),
    #[error("quantitative range [{0}, {1}] is invalid")]
    Range(f64, f64),
}

impl DataSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        let cats = &self.categorical.values;
        let times = &self.temporal.values;
        if cats.len() < 2 {
            return Err(SpecError::TooFewCategories(cats.len()));
        }
        if times.len() < 3 {
            return Err(SpecError::TooFewTimes(times.len()));
        }
        for (what, list) in [("categorical", cats), ("temporal", times)] {
            for (i, v) in list.iter().enumerate() {
                if list[..i].contains(v) {
                    return Err(SpecError::Duplicate(what, v.clone()));
                }
            }
        }
        let q = &self.quantitative;
        if q.mode == ValueMode::Absolute && !(q.min >= 0.0 && q.min < q.max) {
            return Err(SpecError::Range(q.min, q.max));
        }
        Ok(())
    }

    /// Label for the value axis, e.g. `Generation (TWh)`.
    pub fn value_label(&self) -> String {
        let name = capitalize(&self.quantitative.name);
        if self.quantitative.unit.is_empty() {
            name
        } else {
            format!("{name} ({})", self.quantitative.unit)
        }
    }
}

pub(crate) fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[derive(Debug, Clone, Copy)]
enum Timeline {
    Years,
    Quarters,
    Months,
}

struct Template {
    topic: &'static str,
    category: &'static str,
    values: &'static [&'static str],
    timeline: Timeline,
    measure: &'static str,
    unit: &'static str,
    range: (f64, f64),
    /// Name used when the chart shows shares, `None` when shares make no sense.
    share: Option<&'static str>,
}

const BANK: &[Template] = &[
    Template {
        topic: "Electricity generation",
        category: "energy source",
        values: &["Coal", "Gas", "Solar", "Wind", "Hydro", "Nuclear", "Oil", "Biomass"],
        timeline: Timeline::Years,
        measure: "generation",
        unit: "TWh",
        range: (20.0, 400.0),
        share: Some("proportion"),
    },
    Template {
        topic: "Household energy use",
        category: "fuel",
        values: &["Electricity", "Natural Gas", "Heating Oil", "Wood", "Propane"],
        timeline: Timeline::Years,
        measure: "consumption",
        unit: "GJ",
        range: (5.0, 60.0),
        share: Some("share"),
    },
    Template {
        topic: "Renewable capacity additions",
        category: "technology",
        values: &["Solar PV", "Onshore Wind", "Offshore Wind", "Hydropower", "Geothermal", "Bioenergy"],
        timeline: Timeline::Years,
        measure: "capacity",
        unit: "GW",
        range: (1.0, 120.0),
        share: Some("share"),
    },
    Template {
        topic: "Oil production",
        category: "region",
        values: &["North America", "Middle East", "Europe", "Africa", "Asia Pacific", "South America"],
        timeline: Timeline::Years,
        measure: "production",
        unit: "Mb/d",
        range: (1.0, 30.0),
        share: Some("share"),
    },
    Template {
        topic: "Company revenue",
        category: "product line",
        values: &["Hardware", "Software", "Services", "Licensing", "Support", "Cloud"],
        timeline: Timeline::Quarters,
        measure: "revenue",
        unit: "M USD",
        range: (10.0, 500.0),
        share: Some("share"),
    },
    Template {
        topic: "Household spending",
        category: "category",
        values: &["Housing", "Food", "Transport", "Healthcare", "Leisure", "Education"],
        timeline: Timeline::Months,
        measure: "spending",
        unit: "USD",
        range: (100.0, 2000.0),
        share: Some("share"),
    },
    Template {
        topic: "Market capitalization",
        category: "sector",
        values: &["Technology", "Finance", "Energy", "Healthcare", "Utilities", "Industrials"],
        timeline: Timeline::Years,
        measure: "market cap",
        unit: "B USD",
        range: (50.0, 900.0),
        share: Some("share"),
    },
    Template {
        topic: "Venture funding",
        category: "stage",
        values: &["Seed", "Series A", "Series B", "Series C", "Growth"],
        timeline: Timeline::Quarters,
        measure: "funding",
        unit: "B USD",
        range: (1.0, 80.0),
        share: Some("share"),
    },
    Template {
        topic: "Hospital admissions",
        category: "department",
        values: &["Cardiology", "Oncology", "Pediatrics", "Orthopedics", "Neurology", "Emergency"],
        timeline: Timeline::Years,
        measure: "admissions",
        unit: "thousand",
        range: (5.0, 90.0),
        share: Some("share"),
    },
    Template {
        topic: "Vaccination coverage",
        category: "age group",
        values: &["Under 5", "5 to 17", "18 to 49", "50 to 64", "65 and over"],
        timeline: Timeline::Years,
        measure: "coverage",
        unit: "%",
        range: (40.0, 98.0),
        share: None,
    },
    Template {
        topic: "Deaths by cause",
        category: "cause",
        values: &["Heart Disease", "Cancer", "Stroke", "Respiratory", "Accidents", "Diabetes"],
        timeline: Timeline::Years,
        measure: "deaths",
        unit: "thousand",
        range: (10.0, 700.0),
        share: Some("proportion"),
    },
    Template {
        topic: "Health expenditure",
        category: "country",
        values: &["Germany", "France", "Japan", "Canada", "Italy", "Spain"],
        timeline: Timeline::Years,
        measure: "expenditure per capita",
        unit: "USD",
        range: (2000.0, 7000.0),
        share: None,
    },
    Template {
        topic: "Passenger journeys",
        category: "mode",
        values: &["Rail", "Bus", "Tram", "Ferry", "Metro", "Air"],
        timeline: Timeline::Years,
        measure: "journeys",
        unit: "million",
        range: (5.0, 300.0),
        share: Some("share"),
    },
    Template {
        topic: "New car registrations",
        category: "powertrain",
        values: &["Petrol", "Diesel", "Hybrid", "Electric", "Plug-in Hybrid"],
        timeline: Timeline::Years,
        measure: "registrations",
        unit: "thousand",
        range: (20.0, 900.0),
        share: Some("proportion"),
    },
    Template {
        topic: "Freight transport",
        category: "mode",
        values: &["Road", "Rail", "Inland Waterway", "Pipeline", "Air"],
        timeline: Timeline::Years,
        measure: "volume",
        unit: "Bt-km",
        range: (5.0, 500.0),
        share: Some("share"),
    },
    Template {
        topic: "Airport passenger traffic",
        category: "airport",
        values: &["Heathrow", "Frankfurt", "Schiphol", "Madrid", "Istanbul", "Paris CDG"],
        timeline: Timeline::Months,
        measure: "passengers",
        unit: "million",
        range: (2.0, 8.0),
        share: Some("share"),
    },
    Template {
        topic: "CO2 emissions",
        category: "sector",
        values: &["Power", "Industry", "Transport", "Buildings", "Agriculture", "Waste"],
        timeline: Timeline::Years,
        measure: "emissions",
        unit: "Mt",
        range: (20.0, 600.0),
        share: Some("proportion"),
    },
    Template {
        topic: "Monthly rainfall",
        category: "city",
        values: &["London", "Paris", "Berlin", "Madrid", "Rome", "Oslo"],
        timeline: Timeline::Months,
        measure: "rainfall",
        unit: "mm",
        range: (10.0, 120.0),
        share: None,
    },
    Template {
        topic: "Average temperature",
        category: "city",
        values: &["Lisbon", "Athens", "Vienna", "Warsaw", "Dublin", "Prague"],
        timeline: Timeline::Months,
        measure: "temperature",
        unit: "°C",
        range: (2.0, 30.0),
        share: None,
    },
    Template {
        topic: "Forest area",
        category: "country",
        values: &["Brazil", "Canada", "Russia", "United States", "China", "Australia"],
        timeline: Timeline::Years,
        measure: "forest area",
        unit: "Mha",
        range: (100.0, 800.0),
        share: Some("share"),
    },
    Template {
        topic: "Plastic waste",
        category: "disposal method",
        values: &["Recycled", "Incinerated", "Landfilled", "Mismanaged"],
        timeline: Timeline::Years,
        measure: "waste",
        unit: "Mt",
        range: (5.0, 150.0),
        share: Some("proportion"),
    },
    Template {
        topic: "Crop production",
        category: "crop",
        values: &["Wheat", "Maize", "Rice", "Soybean", "Barley"],
        timeline: Timeline::Years,
        measure: "production",
        unit: "Mt",
        range: (50.0, 800.0),
        share: Some("share"),
    },
    Template {
        topic: "Water withdrawal",
        category: "sector",
        values: &["Agriculture", "Industry", "Domestic", "Energy"],
        timeline: Timeline::Years,
        measure: "withdrawal",
        unit: "km³",
        range: (10.0, 300.0),
        share: Some("share"),
    },
    Template {
        topic: "Heatwave days",
        category: "region",
        values: &["North", "South", "East", "West", "Central"],
        timeline: Timeline::Years,
        measure: "heatwave days",
        unit: "days",
        range: (2.0, 40.0),
        share: None,
    },
];

/// Number of built-in topic templates.
pub fn topic_bank_len() -> usize {
    BANK.len()
}

const MONTHS: [&str; 12] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];

/// Deterministic spec from the built-in bank.
pub fn synth_spec(topic_seed: u64) -> DataSpec {
    synth_spec_constrained(topic_seed, false)
}

/// Like [`synth_spec`]; `require_shares` restricts the draw to topics where
/// percent-stacked values make sense and forces that mode.
pub fn synth_spec_constrained(topic_seed: u64, require_shares: bool) -> DataSpec {
    let mut rng = seed::rng(seed::derive(topic_seed, "spec"));
    let candidates: Vec<&Template> = BANK
        .iter()
        .filter(|t| !require_shares || t.share.is_some())
        .collect();
    let template = candidates[rng.random_range(0..candidates.len())];

    let mut pool: Vec<&str> = template.values.to_vec();
    pool.shuffle(&mut rng);
    let n_cats = rng.random_range(2..=4usize.min(pool.len()));
    let categories: Vec<String> = pool[..n_cats].iter().map(|s| s.to_string()).collect();

    let n_times = rng.random_range(3..=7usize);
    let (time_name, times) = match template.timeline {
        Timeline::Years => {
            let start = rng.random_range(1995..=2018u32);
            ("year", (0..n_times as u32).map(|k| format!("{}", start + k)).collect())
        }
        Timeline::Quarters => {
            let year = rng.random_range(2015..=2023u32);
            let first = rng.random_range(0..4u32);
            let quarters = (0..n_times as u32)
                .map(|k| {
                    let q = first + k;
                    format!("Q{} {}", q % 4 + 1, year + q / 4)
                })
                .collect();
            ("quarter", quarters)
        }
        Timeline::Months => {
            let first = rng.random_range(0..=(12 - n_times));
            ("month", MONTHS[first..first + n_times].iter().map(|s| s.to_string()).collect())
        }
    };

    let shares = match template.share {
        Some(_) if require_shares => true,
        Some(_) => rng.random_bool(0.5),
        None => false,
    };
    let quantitative = if shares {
        Quantitative {
            name: template.share.unwrap_or("share").to_string(),
            unit: "%".to_string(),
            mode: ValueMode::PercentStacked,
            min: 0.0,
            max: 100.0,
        }
    } else {
        Quantitative {
            name: template.measure.to_string(),
            unit: template.unit.to_string(),
            mode: ValueMode::Absolute,
            min: template.range.0,
            max: template.range.1,
        }
    };

    DataSpec {
        topic: template.topic.to_string(),
        categorical: Attribute { name: template.category.to_string(), values: categories },
        temporal: Attribute { name: time_name.to_string(), values: times },
        quantitative,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataRow {
    pub category: String,
    pub time: String,
    pub value: f64,
}

/// Complete category x time grid, category-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataTable {
    pub categories: Vec<String>,
    pub times: Vec<String>,
    pub mode: ValueMode,
    pub rows: Vec<DataRow>,
}

impl DataTable {
    /// Build from a category-major value grid.
    pub fn from_grid(
        categories: Vec<String>,
        times: Vec<String>,
        mode: ValueMode,
        values: &[Vec<f64>],
    ) -> DataTable {
        let mut rows = Vec::with_capacity(categories.len() * times.len());
        for (ci, cat) in categories.iter().enumerate() {
            for (ti, time) in times.iter().enumerate() {
                rows.push(DataRow { category: cat.clone(), time: time.clone(), value: values[ci][ti] });
            }
        }
        DataTable { categories, times, mode, rows }
    }

    pub fn value(&self, category: usize, time: usize) -> f64 {
        self.rows[category * self.times.len() + time].value
    }

    pub fn category_index(&self, name: &str) -> Option<usize> {
        self.categories.iter().position(|c| c == name)
    }

    pub fn time_index(&self, name: &str) -> Option<usize> {
        self.times.iter().position(|t| t == name)
    }

    /// Sum over categories at one time index.
    pub fn column_sum(&self, time: usize) -> f64 {
        (0..self.categories.len()).map(|c| self.value(c, time)).sum()
    }

    pub fn max_value(&self) -> f64 {
        self.rows.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Grid shape and, for shares, per-time totals.
    pub fn check(&self) -> Result<(), TableError> {
        if self.rows.len() != self.categories.len() * self.times.len() {
            return Err(TableError::Incomplete);
        }
        for (ci, cat) in self.categories.iter().enumerate() {
            for (ti, time) in self.times.iter().enumerate() {
                let row = &self.rows[ci * self.times.len() + ti];
                if &row.category != cat || &row.time != time {
                    return Err(TableError::Incomplete);
                }
                if !row.value.is_finite() || row.value < 0.0 {
                    return Err(TableError::NegativeValue(row.value));
                }
            }
        }
        if self.mode == ValueMode::PercentStacked {
            for t in 0..self.times.len() {
                let total = self.column_sum(t);
                if (total - 100.0).abs() > 1e-9 {
                    return Err(TableError::ShareTotal(t, total));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TableError {
    #[error("table is not a complete category x time grid")]
    Incomplete,
    #[error("values must be finite and non-negative, got {0}")]
    NegativeValue(f64),
    #[error("shares at time index {0} sum to {1}, not 100")]
    ShareTotal(usize, f64),
}

/// Smallest share handed to any category, in hundredths of a percent.
const MIN_SHARE_CENTS: u64 = 200;

/// Random values for `spec`, rounded to 2 decimals.
pub fn synth_table(spec: &DataSpec, table_seed: u64) -> DataTable {
    let mut rng = seed::rng(seed::derive(table_seed, "table"));
    let n_cats = spec.categorical.values.len();
    let n_times = spec.temporal.values.len();
    let mut grid = alloc::vec![alloc::vec![0.0; n_times]; n_cats];
    match spec.quantitative.mode {
        ValueMode::Absolute => {
            let (lo, hi) = (spec.quantitative.min, spec.quantitative.max);
            for row in grid.iter_mut() {
                for v in row.iter_mut() {
                    let x: f64 = rng.random_range(lo..=hi);
                    *v = (round(x * 100.0) / 100.0).clamp(lo, hi);
                }
            }
        }
        ValueMode::PercentStacked => {
            for t in 0..n_times {
                let cents = simplex_cents(&mut rng, n_cats);
                for (c, v) in cents.iter().enumerate() {
                    grid[c][t] = *v as f64 / 100.0;
                }
            }
        }
    }
    DataTable::from_grid(
        spec.categorical.values.clone(),
        spec.temporal.values.clone(),
        spec.quantitative.mode,
        &grid,
    )
}

/// Uniform simplex point in hundredths summing to exactly 10000, each part
/// at least `MIN_SHARE_CENTS`; largest-remainder rounding.
fn simplex_cents(rng: &mut impl Rng, k: usize) -> Vec<u64> {
    let free = 10_000 - MIN_SHARE_CENTS * k as u64;
    let weights: Vec<f64> = (0..k)
        .map(|_| {
            let u: f64 = rng.random_range(f64::EPSILON..1.0);
            -ln(u)
        })
        .collect();
    let total: f64 = weights.iter().sum();
    let raw: Vec<f64> = weights.iter().map(|w| w / total * free as f64).collect();
    let mut cents: Vec<u64> = raw.iter().map(|r| *r as u64).collect();
    let mut left = free - cents.iter().sum::<u64>();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        let fa = raw[a] - cents[a] as f64;
        let fb = raw[b] - cents[b] as f64;
        fb.partial_cmp(&fa).unwrap_or(core::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        cents[i] += 1;
        left -= 1;
    }
    cents.iter().map(|c| c + MIN_SHARE_CENTS).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bank_is_large_and_varied() {
        assert!(BANK.len() >= 20);
        let topics = ["Electricity", "revenue", "Hospital", "journeys", "emissions"];
        for t in topics {
            assert!(BANK.iter().any(|b| b.topic.contains(t) || b.measure.contains(t)), "{t}");
        }
        for b in BANK {
            assert!(b.values.len() >= 4, "{}", b.topic);
            assert!(b.range.0 > 0.0 && b.range.0 < b.range.1);
        }
    }

    #[test]
    fn energy_source_topic_exists() {
        let (seed, spec) = (0..200u64)
            .map(|s| (s, synth_spec(s)))
            .find(|(_, s)| s.categorical.name == "energy source")
            .expect("energy template reachable");
        assert_eq!(spec.temporal.name, "year");
        for v in &spec.categorical.values {
            assert!(BANK[0].values.contains(&v.as_str()));
        }
        assert_eq!(synth_spec(seed), spec);
    }

    #[test]
    fn specs_are_valid_and_deterministic() {
        for s in 0..500 {
            let spec = synth_spec(s);
            spec.validate().unwrap();
            assert_eq!(spec, synth_spec(s));
        }
    }

    #[test]
    fn different_seeds_usually_differ() {
        let pairs = 1000u64;
        let differing = (0..pairs).filter(|&i| synth_spec(2 * i) != synth_spec(2 * i + 1)).count();
        assert!(differing as f64 / pairs as f64 >= 0.9, "{differing}");
    }

    #[test]
    fn percent_tables_sum_to_100() {
        for s in 0..200 {
            let spec = synth_spec_constrained(s, true);
            assert_eq!(spec.quantitative.mode, ValueMode::PercentStacked);
            let table = synth_table(&spec, s);
            table.check().unwrap();
            for t in 0..table.times.len() {
                assert!((table.column_sum(t) - 100.0).abs() <= 1e-9);
            }
            assert_eq!(table, synth_table(&spec, s));
        }
    }

    #[test]
    fn absolute_values_stay_in_range() {
        let mut spec = synth_spec(3);
        spec.quantitative = Quantitative {
            name: "value".into(),
            unit: String::new(),
            mode: ValueMode::Absolute,
            min: 10.0,
            max: 90.0,
        };
        for s in 0..50 {
            let table = synth_table(&spec, s);
            assert!(table.rows.iter().all(|r| (10.0..=90.0).contains(&r.value)));
            for r in &table.rows {
                assert_eq!(round(r.value * 100.0) / 100.0, r.value);
            }
        }
    }

    #[test]
    fn spec_validation() {
        let mut spec = synth_spec(1);
        spec.categorical.values.truncate(1);
        assert_eq!(spec.validate(), Err(SpecError::TooFewCategories(1)));
        let mut spec = synth_spec(1);
        spec.temporal.values.truncate(2);
        assert_eq!(spec.validate(), Err(SpecError::TooFewTimes(2)));
    }
}
