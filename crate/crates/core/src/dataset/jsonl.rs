use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DatasetError;
use crate::qgen::{Category, ChoiceSet, QARecord, Template};

/// One line of a dataset file.
///
/// Field order follows the reference sample; `id`, `seed` and
/// `source_tune_id` are extras and default when absent, so the sample itself
/// loads.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredRecord {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub id: String,
    pub class_name: Template,
    pub question: String,
    pub abc_context: String,
    pub correct_answer: String,
    pub incorrect_answer1: String,
    pub incorrect_answer2: String,
    pub incorrect_answer3: String,
    pub category: Category,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub source_tune_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context_image: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub choice_images: Vec<String>,
}

/// A record plus its image paths. Score-valued templates carry four choice
/// images; the others only a context image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisualQARecord {
    pub base: QARecord,
    pub context_image: Option<String>,
    pub choice_images: Vec<String>,
}

impl From<&QARecord> for StoredRecord {
    fn from(r: &QARecord) -> StoredRecord {
        let [a, b, c] = r.incorrect_answers.clone();
        StoredRecord {
            id: r.id.clone(),
            class_name: r.class_name,
            question: r.question.clone(),
            abc_context: r.abc_context.clone(),
            correct_answer: r.correct_answer.clone(),
            incorrect_answer1: a,
            incorrect_answer2: b,
            incorrect_answer3: c,
            category: r.category,
            seed: r.seed,
            source_tune_id: r.source_tune_id.clone(),
            context_image: None,
            choice_images: Vec::new(),
        }
    }
}

impl From<&VisualQARecord> for StoredRecord {
    fn from(v: &VisualQARecord) -> StoredRecord {
        StoredRecord {
            context_image: v.context_image.clone(),
            choice_images: v.choice_images.clone(),
            ..StoredRecord::from(&v.base)
        }
    }
}

impl StoredRecord {
    /// Rebuilds the record; the presented order comes from the stored seed.
    pub fn to_record(&self) -> Result<QARecord, String> {
        if self.category != self.class_name.category() {
            return Err(format!(
                "{} belongs to {}, not {}",
                self.class_name,
                self.class_name.category(),
                self.category
            ));
        }
        if !self.choice_images.is_empty() && self.choice_images.len() != 4 {
            return Err(format!(
                "expected 0 or 4 choice images, found {}",
                self.choice_images.len()
            ));
        }
        let set = ChoiceSet {
            correct: self.correct_answer.clone(),
            distractors: [
                self.incorrect_answer1.clone(),
                self.incorrect_answer2.clone(),
                self.incorrect_answer3.clone(),
            ],
        };
        Ok(QARecord::new(
            self.id.clone(),
            self.class_name,
            self.question.clone(),
            self.abc_context.clone(),
            set,
            self.seed,
            self.source_tune_id.clone(),
        ))
    }

    pub fn to_visual(&self) -> Result<VisualQARecord, String> {
        Ok(VisualQARecord {
            base: self.to_record()?,
            context_image: self.context_image.clone(),
            choice_images: self.choice_images.clone(),
        })
    }
}

/// Writes one compact JSON object per line, LF-terminated.
pub fn write_lines<W: Write>(out: W, rows: impl IntoIterator<Item = StoredRecord>) -> Result<(), DatasetError> {
    let mut out = BufWriter::new(out);
    for row in rows {
        serde_json::to_writer(&mut out, &row).map_err(|e| DatasetError::Io(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_lines<R: BufRead>(input: R) -> Result<Vec<StoredRecord>, DatasetError> {
    let mut rows = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: StoredRecord = serde_json::from_str(&line).map_err(|e| DatasetError::Schema {
            line: i + 1,
            message: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_jsonl(path: &Path, records: &[QARecord]) -> Result<(), DatasetError> {
    write_lines(File::create(path)?, records.iter().map(StoredRecord::from))
}

pub fn write_visual_jsonl(path: &Path, records: &[VisualQARecord]) -> Result<(), DatasetError> {
    write_lines(File::create(path)?, records.iter().map(StoredRecord::from))
}

fn convert<T>(rows: Vec<StoredRecord>, f: impl Fn(&StoredRecord) -> Result<T, String>) -> Result<Vec<T>, DatasetError> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| f(r).map_err(|message| DatasetError::Schema { line: i + 1, message }))
        .collect()
}

pub fn read_jsonl(path: &Path) -> Result<Vec<QARecord>, DatasetError> {
    convert(read_lines(BufReader::new(File::open(path)?))?, StoredRecord::to_record)
}

pub fn read_visual_jsonl(path: &Path) -> Result<Vec<VisualQARecord>, DatasetError> {
    convert(read_lines(BufReader::new(File::open(path)?))?, StoredRecord::to_visual)
}
