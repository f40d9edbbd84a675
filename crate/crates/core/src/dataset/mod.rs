//! Corpus ingestion, set assembly and dataset files.

mod config;
mod jsonl;
pub mod synth;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::abc::{parse_tune, serialize, Tune};
use crate::qgen::{self, record_seed, Category, GenOptions, QARecord, Template};
use crate::theory::validate_measures;

pub use config::{DatasetConfig, Modality, Split, WeightPreset, CATALOG_COUNTS};
pub use jsonl::{
    read_jsonl, read_lines, read_visual_jsonl, write_jsonl, write_lines, write_visual_jsonl, StoredRecord,
    VisualQARecord,
};

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("corpus contains no usable tunes")]
    EmptyCorpus,
    #[error("not enough tunes for {category}: {template} needs {needed}, produced {available}")]
    InsufficientCorpus {
        category: Category,
        template: Template,
        needed: usize,
        available: usize,
    },
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for DatasetError {
    fn from(e: std::io::Error) -> Self {
        DatasetError::Io(e.to_string())
    }
}

/// A parsed, deduplicated tune with its per-template eligibility.
#[derive(Clone, Debug)]
pub struct IndexedTune {
    pub id: String,
    pub path: PathBuf,
    pub tune: Tune,
    /// sha256 of the serialized tune without its X: number.
    pub content_hash: String,
    /// Indexed by [`Template::ordinal`].
    pub eligible: [bool; 9],
}

impl IndexedTune {
    pub fn eligible_for(&self, t: Template) -> bool {
        self.eligible[t.ordinal()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Clone, Debug, Default)]
pub struct CorpusIndex {
    /// Sorted by id.
    pub tunes: Vec<IndexedTune>,
    pub rejections: Vec<Rejection>,
    /// Tunes dropped because an identical one was already indexed.
    pub duplicates: usize,
    /// Options the eligibility flags were computed with.
    pub opts: GenOptions,
}

impl CorpusIndex {
    /// One hash for the accepted corpus: ids and contents in id order.
    pub fn corpus_hash(&self) -> String {
        let mut h = Sha256::new();
        for t in &self.tunes {
            h.update(t.id.as_bytes());
            h.update(b"\t");
            h.update(t.content_hash.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }
}

/// Rejects tunes whose interior measures do not fill the meter. A pickup and
/// a short closing measure are fine.
pub fn check_tune(text: &str) -> Result<Tune, String> {
    let tune = parse_tune(text).map_err(|e| e.to_string())?;
    if let Some(meter) = tune.header.meter {
        let report = validate_measures(&tune, &meter);
        if !report.interior_full() {
            let m = report
                .measures
                .iter()
                .find(|m| !m.full && m.index != 0 && m.index + 1 != report.measures.len())
                .or(report.measures.iter().find(|m| !m.full))
                .expect("some measure is off");
            return Err(format!(
                "measure {} lasts {} units, meter needs {}",
                m.index + 1,
                m.duration,
                m.capacity
            ));
        }
    }
    Ok(tune)
}

/// Dedup key: the canonical text without the X: number.
fn content_hash(tune: &Tune) -> String {
    let mut t = tune.clone();
    t.header.reference = None;
    hex::encode(Sha256::digest(serialize(&t).as_bytes()))
}

fn eligibility(tune: &Tune, opts: &GenOptions) -> [bool; 9] {
    Template::ALL.map(|t| qgen::eligible(t, tune, opts))
}

/// Splits a file holding several tunes at each `X:` line.
fn split_tunes(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for line in text.lines() {
        if line.starts_with("X:") || out.is_empty() {
            out.push(String::new());
        }
        let cur = out.last_mut().expect("pushed");
        cur.push_str(line);
        cur.push('\n');
    }
    out.retain(|t| !t.trim().is_empty());
    out
}

pub fn ingest_corpus(dir: &Path) -> Result<CorpusIndex, DatasetError> {
    ingest_corpus_with(dir, &GenOptions::default())
}

/// Tune id, source file and parse outcome.
type Parsed = (String, PathBuf, Result<Tune, String>);

/// Parses every `.abc` file under `dir` in parallel, logs rejects, drops
/// duplicates and flags eligibility.
pub fn ingest_corpus_with(dir: &Path, opts: &GenOptions) -> Result<CorpusIndex, DatasetError> {
    let mut files: Vec<PathBuf> = walkdir::WalkDir::new(dir)
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file() && e.path().extension().is_some_and(|x| x == "abc"))
        .map(|e| e.into_path())
        .collect();
    files.sort();

    let parsed: Vec<Vec<Parsed>> = files
        .par_iter()
        .map(|path| {
            let rel = path
                .strip_prefix(dir)
                .unwrap_or(path)
                .to_string_lossy()
                .replace('\\', "/");
            match fs::read_to_string(path) {
                Err(e) => vec![(rel, path.clone(), Err(e.to_string()))],
                Ok(text) => {
                    let tunes = split_tunes(&text);
                    let many = tunes.len() > 1;
                    tunes
                        .iter()
                        .enumerate()
                        .map(|(i, t)| {
                            let id = if many { format!("{rel}#{}", i + 1) } else { rel.clone() };
                            (id, path.clone(), check_tune(t))
                        })
                        .collect()
                }
            }
        })
        .collect();

    let mut index = CorpusIndex {
        opts: *opts,
        ..CorpusIndex::default()
    };
    let mut seen = HashSet::new();
    let mut accepted = Vec::new();
    for (id, path, result) in parsed.into_iter().flatten() {
        match result {
            Err(reason) => {
                log::warn!("rejected {id}: {reason}");
                index.rejections.push(Rejection { path, reason });
            }
            Ok(tune) => {
                let hash = content_hash(&tune);
                if seen.insert(hash.clone()) {
                    accepted.push((id, path, tune, hash));
                } else {
                    log::info!("duplicate {id} skipped");
                    index.duplicates += 1;
                }
            }
        }
    }
    index.tunes = accepted
        .into_par_iter()
        .map(|(id, path, tune, content_hash)| {
            let eligible = eligibility(&tune, opts);
            IndexedTune {
                id,
                path,
                tune,
                content_hash,
                eligible,
            }
        })
        .collect();
    index.tunes.sort_by(|a, b| a.id.cmp(&b.id));
    if index.tunes.is_empty() {
        return Err(DatasetError::EmptyCorpus);
    }
    Ok(index)
}

/// Which pool a tune id belongs to: a fixed hash of the id, so the split does
/// not depend on the rest of the corpus.
pub fn split_of(tune_id: &str, benchmark_fraction: f64) -> Split {
    let digest = Sha256::digest(tune_id.as_bytes());
    let x = u64::from_be_bytes(digest[..8].try_into().expect("8 bytes"));
    if (x as f64) / (u64::MAX as f64 + 1.0) < benchmark_fraction {
        Split::Benchmark
    } else {
        Split::Train
    }
}

/// Generates exactly the configured number of records per template.
///
/// Each template walks its eligible tunes in a seeded order; the record seed
/// depends on (master seed, template, position), so results do not depend on
/// thread count. A tune gives at most one record per template.
pub fn build_set(index: &CorpusIndex, cfg: &DatasetConfig) -> Result<Vec<QARecord>, DatasetError> {
    cfg.validate()?;
    let opts = cfg.gen_options();
    let pool: Vec<&IndexedTune> = index
        .tunes
        .iter()
        .filter(|t| !cfg.disjoint || split_of(&t.id, cfg.benchmark_fraction) == cfg.split)
        .collect();
    let counts = cfg.template_counts();

    let mut out = Vec::with_capacity(cfg.total());
    for category in Category::ALL {
        let mut produced: Vec<QARecord> = Vec::new();
        for template in category.templates() {
            let need = counts.get(&template).copied().unwrap_or(0);
            if need == 0 {
                continue;
            }
            let mut eligible: Vec<&IndexedTune> = pool
                .iter()
                .copied()
                .filter(|t| {
                    if index.opts == opts {
                        t.eligible_for(template)
                    } else {
                        qgen::eligible(template, &t.tune, &opts)
                    }
                })
                .collect();
            let stream = (template.ordinal() as u64) << 32;
            let mut order_rng = ChaCha8Rng::seed_from_u64(record_seed(cfg.seed, stream | 0xffff_ffff));
            eligible.shuffle(&mut order_rng);

            let mut got: Vec<QARecord> = Vec::with_capacity(need);
            let mut next = 0;
            while got.len() < need && next < eligible.len() {
                let missing = need - got.len();
                let chunk = (missing + missing / 4 + 16).min(eligible.len() - next);
                let batch: Vec<Option<QARecord>> = (next..next + chunk)
                    .into_par_iter()
                    .map(|pos| {
                        let tune = eligible[pos];
                        let seed = record_seed(cfg.seed, stream | pos as u64);
                        match qgen::generate(template, &tune.tune, String::new(), tune.id.clone(), seed, &opts) {
                            Ok(r) => Some(r),
                            Err(e) => {
                                log::debug!("{template} on {}: {e}", tune.id);
                                None
                            }
                        }
                    })
                    .collect();
                got.extend(batch.into_iter().flatten().take(missing));
                next += chunk;
            }
            if got.len() < need {
                return Err(DatasetError::InsufficientCorpus {
                    category,
                    template,
                    needed: need,
                    available: got.len(),
                });
            }
            produced.extend(got);
        }
        for (i, r) in produced.iter_mut().enumerate() {
            r.id = format!("{}-{:04}", category.slug(), i + 1);
        }
        out.extend(produced);
    }
    Ok(out)
}

/// Per-template and per-category counts.
pub fn stats(records: &[QARecord]) -> (BTreeMap<Template, usize>, BTreeMap<Category, usize>) {
    let mut by_template: BTreeMap<Template, usize> = Template::ALL.into_iter().map(|t| (t, 0)).collect();
    let mut by_category: BTreeMap<Category, usize> = Category::ALL.into_iter().map(|c| (c, 0)).collect();
    for r in records {
        *by_template.entry(r.class_name).or_default() += 1;
        *by_category.entry(r.category).or_default() += 1;
    }
    (by_template, by_category)
}
