//! JSONL batch grading, the bridge used by training loops and evaluation.
//!
//! Input lines are `{"record_id": ..., "response_text": ...}`; output lines
//! are `GradeResult`s in the same order.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{score, GradeResult};
use crate::qgen::{Category, QARecord};

#[derive(Debug, thiserror::Error)]
pub enum BatchError {
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("line {line}: no gold record with id {id:?}")]
    UnknownRecord { line: usize, id: String },
    #[error("duplicate gold id {0:?}")]
    DuplicateGold(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseLine {
    pub record_id: String,
    pub response_text: String,
}

pub fn read_responses<R: BufRead>(input: R) -> Result<Vec<ResponseLine>, BatchError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(&line).map_err(|e| BatchError::Schema {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(row);
    }
    Ok(out)
}

/// Grades every response against the gold record of the same id. Output
/// order matches input order whatever the thread count.
pub fn grade_batch(responses: &[ResponseLine], gold: &[QARecord]) -> Result<Vec<GradeResult>, BatchError> {
    let mut by_id: HashMap<&str, &QARecord> = HashMap::with_capacity(gold.len());
    for r in gold {
        if by_id.insert(r.id.as_str(), r).is_some() {
            return Err(BatchError::DuplicateGold(r.id.clone()));
        }
    }
    let records = responses
        .iter()
        .enumerate()
        .map(|(i, r)| {
            by_id
                .get(r.record_id.as_str())
                .copied()
                .ok_or_else(|| BatchError::UnknownRecord {
                    line: i + 1,
                    id: r.record_id.clone(),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(responses
        .par_iter()
        .zip(records.par_iter())
        .map(|(resp, rec)| score(&resp.record_id, &resp.response_text, rec))
        .collect())
}

pub fn write_results<W: Write>(mut out: W, results: &[GradeResult]) -> Result<(), BatchError> {
    for r in results {
        serde_json::to_writer(&mut out, r).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Correct and total per category.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AccuracyTable {
    pub per_category: BTreeMap<Category, (usize, usize)>,
}

impl AccuracyTable {
    pub fn accuracy(&self, c: Category) -> Option<f64> {
        self.per_category
            .get(&c)
            .filter(|(_, n)| *n > 0)
            .map(|(k, n)| *k as f64 / *n as f64)
    }

    pub fn overall(&self) -> Option<f64> {
        let (k, n) = self.per_category.values().fold((0, 0), |(a, b), (k, n)| (a + k, b + n));
        (n > 0).then(|| k as f64 / n as f64)
    }
}

pub fn summarize(results: &[GradeResult], gold: &[QARecord]) -> AccuracyTable {
    let cats: HashMap<&str, Category> = gold.iter().map(|r| (r.id.as_str(), r.category)).collect();
    let mut table = AccuracyTable::default();
    for r in results {
        if let Some(c) = cats.get(r.record_id.as_str()) {
            let e = table.per_category.entry(*c).or_default();
            e.0 += r.reward as usize;
            e.1 += 1;
        }
    }
    table
}
