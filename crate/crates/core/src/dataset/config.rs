use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DatasetError;
use crate::qgen::{Category, GenOptions, Template};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Benchmark,
    Train,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    Textual,
    Visual,
    Both,
}

/// Named per-template weightings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightPreset {
    /// Each template gets an equal share of its category.
    Equal,
    /// Reference per-template proportions.
    Catalog,
}

impl WeightPreset {
    pub fn weights(self) -> BTreeMap<Template, f64> {
        match self {
            WeightPreset::Equal => Template::ALL
                .into_iter()
                .map(|t| (t, 1.0 / t.category().templates().len() as f64))
                .collect(),
            WeightPreset::Catalog => CATALOG_COUNTS.into_iter().map(|(t, n)| (t, n as f64 / 400.0)).collect(),
        }
    }
}

/// Per-template counts of the reference 1,600-question benchmark.
pub const CATALOG_COUNTS: [(Template, usize); 9] = [
    (Template::TimeSignatureQuestion, 217),
    (Template::BarLinePlacementQuestion, 183),
    (Template::IntervalNumberQuestion, 199),
    (Template::NoteCompletionByInterval, 201),
    (Template::ChordsCompletionQuestion, 156),
    (Template::ChordKeyRootIdentificationQuestion, 200),
    (Template::ChordIdentificationQuestion, 44),
    (Template::ScaleIdentificationFromAbcQuestion, 352),
    (Template::ScaleSelectionQuestion, 48),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetConfig {
    pub split: Split,
    /// Records per category.
    pub counts: BTreeMap<Category, usize>,
    /// Share of each template within its category; each category sums to 1.
    pub weights: BTreeMap<Template, f64>,
    pub seed: u64,
    pub modality: Modality,
    pub context_measures: usize,
    /// Keep benchmark and training tunes apart.
    pub disjoint: bool,
    /// Share of tune ids assigned to the benchmark pool when `disjoint`.
    pub benchmark_fraction: f64,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig::benchmark()
    }
}

impl DatasetConfig {
    fn with_counts(split: Split, per_category: usize) -> DatasetConfig {
        DatasetConfig {
            split,
            counts: Category::ALL.into_iter().map(|c| (c, per_category)).collect(),
            weights: WeightPreset::Equal.weights(),
            seed: 0,
            modality: Modality::Textual,
            context_measures: GenOptions::default().context_measures,
            disjoint: true,
            benchmark_fraction: 0.2,
        }
    }

    /// 400 per category, 1,600 in all.
    pub fn benchmark() -> DatasetConfig {
        DatasetConfig::with_counts(Split::Benchmark, 400)
    }

    /// 2,000 per category, 8,000 in all.
    pub fn train() -> DatasetConfig {
        DatasetConfig::with_counts(Split::Train, 2000)
    }

    pub fn for_split(split: Split) -> DatasetConfig {
        match split {
            Split::Benchmark => DatasetConfig::benchmark(),
            Split::Train => DatasetConfig::train(),
        }
    }

    pub fn with_preset(mut self, preset: WeightPreset) -> DatasetConfig {
        self.weights = preset.weights();
        self
    }

    pub fn gen_options(&self) -> GenOptions {
        GenOptions {
            context_measures: self.context_measures,
        }
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn from_toml(text: &str) -> Result<DatasetConfig, DatasetError> {
        let cfg: DatasetConfig = toml::from_str(text).map_err(|e| DatasetError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<DatasetConfig, DatasetError> {
        DatasetConfig::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is plain data")
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        let bad = |m: String| Err(DatasetError::Config(m));
        if self.counts.is_empty() {
            return bad("no category counts".into());
        }
        for (c, n) in &self.counts {
            if *n == 0 {
                return bad(format!("count for {c} must be positive"));
            }
            let sum: f64 = c
                .templates()
                .iter()
                .map(|t| self.weights.get(t).copied().unwrap_or(0.0))
                .sum();
            if (sum - 1.0).abs() > 1e-9 {
                return bad(format!("weights for {c} sum to {sum}, expected 1"));
            }
        }
        if let Some((t, w)) = self.weights.iter().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return bad(format!("weight for {t} is {w}"));
        }
        if self.context_measures == 0 {
            return bad("context_measures must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.benchmark_fraction) {
            return bad(format!("benchmark_fraction {} outside [0, 1]", self.benchmark_fraction));
        }
        Ok(())
    }

    /// Records per template, by largest remainder so each category total is exact.
    pub fn template_counts(&self) -> BTreeMap<Template, usize> {
        let mut out = BTreeMap::new();
        for (&category, &n) in &self.counts {
            let templates = category.templates();
            let quotas: Vec<f64> = templates
                .iter()
                .map(|t| self.weights.get(t).copied().unwrap_or(0.0) * n as f64)
                .collect();
            // Round first so float noise like 351.99999 does not lose a record.
            let mut base: Vec<usize> = quotas.iter().map(|q| (q + 1e-9).floor() as usize).collect();
            let mut left = n.saturating_sub(base.iter().sum());
            let mut order: Vec<usize> = (0..templates.len()).collect();
            order.sort_by(|&a, &b| {
                let ra = quotas[a] - base[a] as f64;
                let rb = quotas[b] - base[b] as f64;
                rb.partial_cmp(&ra).expect("finite").then(a.cmp(&b))
            });
            for &i in order.iter().cycle() {
                if left == 0 {
                    break;
                }
                base[i] += 1;
                left -= 1;
            }
            for (t, c) in templates.into_iter().zip(base) {
                out.insert(t, c);
            }
        }
        out
    }
}
