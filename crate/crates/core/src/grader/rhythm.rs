use serde::{Deserialize, Serialize};

use super::{boxed_groups, GraderError};
use crate::abc::{parse_tune, AbcError, Duration, Meter};
use crate::theory::{check_measures, MeasureCheck};

/// Continuations are asked for this many measures.
pub const RC_MEASURES: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RcVerdict {
    pub sample_id: String,
    pub syntax_ok: bool,
    /// Why the syntax stage failed.
    pub syntax_error: Option<String>,
    pub per_measure: Vec<MeasureCheck>,
    /// False when the continuation does not have exactly four measures.
    pub measure_count_ok: bool,
    pub score: u8,
}

/// Non-ABC spellings such as `Bb` or `C#` written as a note token.
fn foreign_spelling(body: &str) -> Option<String> {
    if let Some(c) = body.chars().find(|c| matches!(c, '#' | '♭' | '♯')) {
        return Some(format!("accidental sign {c:?} is not ABC"));
    }
    for token in body.split(|c: char| c.is_whitespace() || c == '|') {
        let mut chars = token.chars();
        let (Some(letter), Some(mark)) = (chars.next(), chars.next()) else {
            continue;
        };
        let tail_is_length = chars.all(|c| c.is_ascii_digit() || matches!(c, '/' | '\'' | ','));
        if ('A'..='G').contains(&letter) && mark == 'b' && tail_is_length {
            return Some(format!("note token {token:?} uses a letter accidental"));
        }
    }
    None
}

fn is_field(line: &str) -> bool {
    let b = line.trim().as_bytes();
    b.len() >= 2 && b[0].is_ascii_alphabetic() && b[1] == b':'
}

/// Two stages: the text must be plain ABC, then each of the four measures
/// must sum exactly to the meter's capacity. Score 1 only if both hold.
///
/// A `K:` line in the continuation is honoured; other header fields are
/// replaced by `meter` and `unit`. When the text is a raw model response the
/// last `\boxed{}` group is taken as the continuation.
pub fn check_rhythmic_consistency(sample_id: &str, continuation: &str, meter: &Meter, unit: Duration) -> RcVerdict {
    let continuation = boxed_groups(continuation).last().copied().unwrap_or(continuation);
    let mut verdict = RcVerdict {
        sample_id: sample_id.to_string(),
        syntax_ok: false,
        syntax_error: None,
        per_measure: Vec::new(),
        measure_count_ok: false,
        score: 0,
    };
    let key = continuation
        .lines()
        .filter_map(|l| l.trim().strip_prefix("K:"))
        .next_back()
        .unwrap_or("C")
        .trim()
        .to_string();
    let body: Vec<&str> = continuation
        .lines()
        .filter(|l| !is_field(l) && !l.trim_start().starts_with('%'))
        .collect();
    let body = body.join("\n");
    if let Some(e) = foreign_spelling(&body) {
        verdict.syntax_error = Some(e);
        return verdict;
    }
    let text = format!("L:{unit}\nM:{meter}\nK:{key}\n{body}\n");
    let tune = match parse_tune(&text) {
        Ok(t) => t,
        // Parsed fine but too few measures: a count problem, not a syntax one.
        Err(AbcError::TooShort(_)) => {
            verdict.syntax_ok = true;
            return verdict;
        }
        Err(e) => {
            verdict.syntax_error = Some(e.to_string());
            return verdict;
        }
    };
    verdict.syntax_ok = true;
    let report = check_measures(&tune.measures, meter, unit);
    verdict.measure_count_ok = tune.measures.len() == RC_MEASURES;
    verdict.score = (verdict.measure_count_ok && report.all_full()) as u8;
    verdict.per_measure = report.measures;
    verdict
}

/// Mean binary score.
pub fn rc_score(verdicts: &[RcVerdict]) -> Result<f64, GraderError> {
    if verdicts.is_empty() {
        return Err(GraderError::EmptySet);
    }
    Ok(verdicts.iter().map(|v| v.score as f64).sum::<f64>() / verdicts.len() as f64)
}
