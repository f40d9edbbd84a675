//! Rewards: boxed-answer extraction, binary accuracy, group-normalized
//! advantages and the rhythmic-consistency check for continuations.

mod batch;
mod rhythm;

use serde::{Deserialize, Serialize};

use crate::qgen::{Label, QARecord};

pub use batch::{grade_batch, read_responses, summarize, write_results, AccuracyTable, BatchError, ResponseLine};
pub use rhythm::{check_rhythmic_consistency, rc_score, RcVerdict, RC_MEASURES};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraderError {
    #[error("group of {0} is too small, need at least 2")]
    GroupTooSmall(usize),
    #[error("no verdicts to average")]
    EmptySet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    NoBoxed,
    Unparseable,
    Wrong,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeResult {
    pub record_id: String,
    pub extracted: Option<Label>,
    pub reward: u8,
    #[serde(rename = "reason")]
    pub failure_reason: Option<FailureReason>,
}

/// Contents of every complete `\boxed{...}`, braces balanced.
pub(crate) fn boxed_groups(text: &str) -> Vec<&str> {
    const OPEN: &str = "\\boxed{";
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(at) = rest.find(OPEN) {
        let body = &rest[at + OPEN.len()..];
        let mut depth = 1;
        let mut end = None;
        for (i, c) in body.char_indices() {
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        end = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        match end {
            Some(i) => {
                out.push(&body[..i]);
                rest = &body[i + 1..];
            }
            None => break,
        }
    }
    out
}

/// A single option letter, allowing "(A)", "A.", "a" and similar wrapping.
fn parse_label(s: &str) -> Option<Label> {
    let core = s.trim_matches(|c: char| c.is_whitespace() || c.is_ascii_punctuation());
    let mut chars = core.chars();
    let c = chars.next()?;
    if chars.next().is_some() {
        return None;
    }
    match c.to_ascii_uppercase() {
        'A' => Some(Label::A),
        'B' => Some(Label::B),
        'C' => Some(Label::C),
        'D' => Some(Label::D),
        _ => None,
    }
}

/// The label in the last `\boxed{}` group, if it holds one.
pub fn extract_answer(response: &str) -> Option<Label> {
    boxed_groups(response).last().and_then(|g| parse_label(g))
}

/// 1 for the right label, 0 otherwise. No partial or format credit.
pub fn score(record_id: &str, response: &str, record: &QARecord) -> GradeResult {
    let groups = boxed_groups(response);
    let extracted = groups.last().and_then(|g| parse_label(g));
    let failure_reason = match (groups.is_empty(), extracted) {
        (true, _) if !response.contains("\\boxed{") => Some(FailureReason::NoBoxed),
        (_, None) => Some(FailureReason::Unparseable),
        (_, Some(l)) if l != record.answer_label => Some(FailureReason::Wrong),
        _ => None,
    };
    GradeResult {
        record_id: record_id.to_string(),
        extracted,
        reward: failure_reason.is_none() as u8,
        failure_reason,
    }
}

/// `(r - mean) / std` over one group, population std. A group whose rewards
/// are all equal carries no signal and gets zeros.
pub fn group_advantages(rewards: &[f64]) -> Result<Vec<f64>, GraderError> {
    let n = rewards.len();
    if n < 2 {
        return Err(GraderError::GroupTooSmall(n));
    }
    let mean = rewards.iter().sum::<f64>() / n as f64;
    let var = rewards.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n as f64;
    let std = var.sqrt();
    if rewards.iter().all(|r| *r == rewards[0]) || std == 0.0 {
        return Ok(vec![0.0; n]);
    }
    Ok(rewards.iter().map(|r| (r - mean) / std).collect())
}
