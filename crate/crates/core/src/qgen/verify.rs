use std::fmt;

use super::{chord, interval, rhythm, scale, shuffle_choices, shuffle_rng, QARecord, Template};

/// What a template's judge says about one payload.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Judgement {
    Correct,
    /// Rejected, with the check that failed.
    Wrong(&'static str),
}

/// Judges `payload` as an answer to `question` over `context`.
///
/// `Err` means the payload (or context) could not be read at all, which is
/// different from being a wrong answer.
pub fn judge_choice(template: Template, question: &str, context: &str, payload: &str) -> Result<Judgement, String> {
    match template {
        Template::TimeSignatureQuestion => rhythm::judge_time_signature(context, payload),
        Template::BarLinePlacementQuestion => rhythm::judge_bar_placement(context, payload),
        Template::IntervalNumberQuestion => interval::judge_interval_number(context, payload),
        Template::NoteCompletionByInterval => interval::judge_note_completion(question, context, payload),
        Template::ChordsCompletionQuestion => chord::judge_chords_completion(question, context, payload),
        Template::ChordKeyRootIdentificationQuestion => chord::judge_chord_root(context, payload),
        Template::ChordIdentificationQuestion => chord::judge_chord_id(context, payload),
        Template::ScaleIdentificationFromAbcQuestion => scale::judge_scale_id(context, payload),
        Template::ScaleSelectionQuestion => scale::judge_scale_selection(question, payload),
    }
}

/// Name of the property a distractor must falsify.
pub fn falsifier(template: Template) -> &'static str {
    match template {
        Template::TimeSignatureQuestion => "equal-capacity",
        Template::BarLinePlacementQuestion => "valid-barring",
        Template::IntervalNumberQuestion => "same-interval",
        Template::NoteCompletionByInterval => "forms-interval",
        Template::ChordsCompletionQuestion => "forms-triad",
        Template::ChordKeyRootIdentificationQuestion => "same-root",
        Template::ChordIdentificationQuestion => "same-chord",
        Template::ScaleIdentificationFromAbcQuestion => "top-ranked-key",
        Template::ScaleSelectionQuestion => "correct-spelling",
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// Two of the four payloads are identical.
    Duplicate {
        first: usize,
        second: usize,
    },
    /// A payload the judge could not read. Index 0 is the correct answer.
    Malformed {
        choice: usize,
        reason: String,
    },
    /// The stored correct answer does not satisfy the predicate.
    CorrectRejected {
        predicate: &'static str,
    },
    /// A distractor satisfies the predicate, so it is also correct.
    NotFalsified {
        choice: usize,
        predicate: &'static str,
    },
    /// Presented order or label differs from the one derived from the seed.
    LabelMismatch,
    CategoryMismatch,
}

impl Failure {
    pub fn name(&self) -> String {
        match self {
            Failure::Duplicate { .. } => "duplicate".into(),
            Failure::Malformed { .. } => "malformed".into(),
            Failure::CorrectRejected { predicate } => format!("correct-rejected({predicate})"),
            Failure::NotFalsified { predicate, .. } => (*predicate).into(),
            Failure::LabelMismatch => "label".into(),
            Failure::CategoryMismatch => "category".into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Duplicate { first, second } => write!(f, "duplicate: payloads {first} and {second} are equal"),
            Failure::Malformed { choice, reason } => write!(f, "malformed: payload {choice}: {reason}"),
            Failure::CorrectRejected { predicate } => write!(f, "correct answer fails {predicate}"),
            Failure::NotFalsified { choice, predicate } => {
                write!(f, "{predicate}: distractor {choice} is also correct")
            }
            Failure::LabelMismatch => f.write_str("label: presented order does not match the seed"),
            Failure::CategoryMismatch => f.write_str("category: does not match the template"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    pub failures: Vec<Failure>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            return f.write_str("pass");
        }
        let names: Vec<String> = self.failures.iter().map(|x| x.name()).collect();
        write!(f, "fail({})", names.join(", "))
    }
}

/// Re-checks a record from scratch: one correct payload, three payloads the
/// judge rejects, no duplicates, and the presented order the seed implies.
pub fn verify_record(record: &QARecord) -> Verdict {
    let template = record.class_name;
    let predicate = falsifier(template);
    let mut failures = Vec::new();

    let payloads: Vec<&String> = std::iter::once(&record.correct_answer)
        .chain(&record.incorrect_answers)
        .collect();
    for i in 0..4 {
        for j in i + 1..4 {
            if payloads[i] == payloads[j] {
                failures.push(Failure::Duplicate { first: i, second: j });
            }
        }
    }

    for (i, p) in payloads.iter().enumerate() {
        match judge_choice(template, &record.question, &record.abc_context, p) {
            Err(reason) => failures.push(Failure::Malformed { choice: i, reason }),
            Ok(Judgement::Correct) if i > 0 => failures.push(Failure::NotFalsified { choice: i, predicate }),
            Ok(Judgement::Wrong(_)) if i == 0 => failures.push(Failure::CorrectRejected { predicate }),
            Ok(_) => {}
        }
    }

    let (choices, label) = shuffle_choices(&record.choice_set(), &mut shuffle_rng(record.seed));
    if choices != record.choices || label != record.answer_label {
        failures.push(Failure::LabelMismatch);
    }
    if record.category != template.category() {
        failures.push(Failure::CategoryMismatch);
    }

    Verdict {
        pass: failures.is_empty(),
        failures,
    }
}
