//! Question templates.
//!
//! Every template builds a question, a context and a correct payload, then asks
//! [`gen_distractors`] for three wrong payloads. Correctness is decided by one
//! judge per template ([`judge_choice`]), which both generation and
//! [`verify_record`] use, so a distractor is never assumed wrong: it has been
//! checked by the same code that accepts the answer.

mod chord;
mod interval;
mod rhythm;
mod scale;
mod sound;
mod verify;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abc::{AbcError, Tune};
use crate::theory::TheoryError;

pub use verify::{falsifier, judge_choice, verify_record, Failure, Judgement, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    Rhythm,
    Chord,
    Interval,
    Scale,
}

impl Category {
    pub const ALL: [Category; 4] = [Category::Rhythm, Category::Chord, Category::Interval, Category::Scale];

    pub fn name(self) -> &'static str {
        match self {
            Category::Rhythm => "Rhythm",
            Category::Chord => "Chord",
            Category::Interval => "Interval",
            Category::Scale => "Scale",
        }
    }

    /// Lowercase plural used in image file names.
    pub fn slug(self) -> &'static str {
        match self {
            Category::Rhythm => "rhythm",
            Category::Chord => "chords",
            Category::Interval => "intervals",
            Category::Scale => "scales",
        }
    }

    pub fn templates(self) -> Vec<Template> {
        Template::ALL.into_iter().filter(|t| t.category() == self).collect()
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = QgenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()) || c.slug() == s.trim())
            .ok_or_else(|| QgenError::UnknownName(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Template {
    TimeSignatureQuestion,
    BarLinePlacementQuestion,
    IntervalNumberQuestion,
    NoteCompletionByInterval,
    ChordsCompletionQuestion,
    ChordKeyRootIdentificationQuestion,
    ChordIdentificationQuestion,
    ScaleIdentificationFromAbcQuestion,
    ScaleSelectionQuestion,
}

impl Template {
    pub const ALL: [Template; 9] = [
        Template::TimeSignatureQuestion,
        Template::BarLinePlacementQuestion,
        Template::IntervalNumberQuestion,
        Template::NoteCompletionByInterval,
        Template::ChordsCompletionQuestion,
        Template::ChordKeyRootIdentificationQuestion,
        Template::ChordIdentificationQuestion,
        Template::ScaleIdentificationFromAbcQuestion,
        Template::ScaleSelectionQuestion,
    ];

    pub fn class_name(self) -> &'static str {
        match self {
            Template::TimeSignatureQuestion => "TimeSignatureQuestion",
            Template::BarLinePlacementQuestion => "BarLinePlacementQuestion",
            Template::IntervalNumberQuestion => "IntervalNumberQuestion",
            Template::NoteCompletionByInterval => "NoteCompletionByInterval",
            Template::ChordsCompletionQuestion => "ChordsCompletionQuestion",
            Template::ChordKeyRootIdentificationQuestion => "ChordKeyRootIdentificationQuestion",
            Template::ChordIdentificationQuestion => "ChordIdentificationQuestion",
            Template::ScaleIdentificationFromAbcQuestion => "ScaleIdentificationFromAbcQuestion",
            Template::ScaleSelectionQuestion => "ScaleSelectionQuestion",
        }
    }

    /// Short label used in reports.
    pub fn abbreviation(self) -> &'static str {
        match self {
            Template::TimeSignatureQuestion => "Time Sig",
            Template::BarLinePlacementQuestion => "Bar Placement",
            Template::IntervalNumberQuestion => "Interval No",
            Template::NoteCompletionByInterval => "Note Comp",
            Template::ChordsCompletionQuestion => "Chord Comp",
            Template::ChordKeyRootIdentificationQuestion => "Chord Root ID",
            Template::ChordIdentificationQuestion => "Chord ID",
            Template::ScaleIdentificationFromAbcQuestion => "Scale ID",
            Template::ScaleSelectionQuestion => "Scale Sel",
        }
    }

    pub fn category(self) -> Category {
        match self {
            Template::TimeSignatureQuestion | Template::BarLinePlacementQuestion => Category::Rhythm,
            Template::IntervalNumberQuestion | Template::NoteCompletionByInterval => Category::Interval,
            Template::ChordsCompletionQuestion
            | Template::ChordKeyRootIdentificationQuestion
            | Template::ChordIdentificationQuestion => Category::Chord,
            Template::ScaleIdentificationFromAbcQuestion | Template::ScaleSelectionQuestion => Category::Scale,
        }
    }

    /// Templates whose four options are scores rather than names.
    pub fn has_score_choices(self) -> bool {
        matches!(
            self,
            Template::ScaleSelectionQuestion
                | Template::BarLinePlacementQuestion
                | Template::NoteCompletionByInterval
                | Template::ChordsCompletionQuestion
        )
    }

    /// Position in [`Template::ALL`].
    pub fn ordinal(self) -> usize {
        Template::ALL.iter().position(|t| *t == self).expect("listed")
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.class_name())
    }
}

impl FromStr for Template {
    type Err = QgenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Template::ALL
            .into_iter()
            .find(|t| t.class_name() == s.trim())
            .ok_or_else(|| QgenError::UnknownName(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
    C,
    D,
}

impl Label {
    pub const ALL: [Label; 4] = [Label::A, Label::B, Label::C, Label::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Label> {
        Label::ALL.get(i).copied()
    }

    pub fn as_char(self) -> char {
        (b'A' + self as u8) as char
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QgenError {
    #[error("tune not eligible for {template}: {reason}")]
    Ineligible { template: Template, reason: String },
    #[error("{template}: only {found} of 3 distractors could be falsified")]
    InsufficientCandidates { template: Template, found: usize },
    #[error("generated record failed verification: {0}")]
    Unverified(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Abc(#[from] AbcError),
}

/// Knobs shared by the templates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenOptions {
    /// Measures of context for the rhythm templates.
    pub context_measures: usize,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { context_measures: 4 }
    }
}

/// Correct payload plus three verified-wrong ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceSet {
    pub correct: String,
    pub distractors: [String; 3],
}

/// One multiple-choice question.
///
/// `correct_answer` and `incorrect_answers` are the stored form; `choices` and
/// `answer_label` are the presented order, a pure function of `seed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QARecord {
    pub id: String,
    pub class_name: Template,
    pub category: Category,
    pub question: String,
    pub abc_context: String,
    pub correct_answer: String,
    pub incorrect_answers: [String; 3],
    pub choices: [String; 4],
    pub answer_label: Label,
    pub seed: u64,
    pub source_tune_id: String,
}

impl QARecord {
    /// Assembles a record, deriving the presented order from `seed`.
    pub fn new(
        id: String,
        template: Template,
        question: String,
        abc_context: String,
        set: ChoiceSet,
        seed: u64,
        source_tune_id: String,
    ) -> QARecord {
        let (choices, answer_label) = shuffle_choices(&set, &mut shuffle_rng(seed));
        QARecord {
            id,
            class_name: template,
            category: template.category(),
            question,
            abc_context,
            correct_answer: set.correct,
            incorrect_answers: set.distractors,
            choices,
            answer_label,
            seed,
            source_tune_id,
        }
    }

    pub fn choice_set(&self) -> ChoiceSet {
        ChoiceSet {
            correct: self.correct_answer.clone(),
            distractors: self.incorrect_answers.clone(),
        }
    }
}

/// Seed of record `index` under `master`: each index gets its own ChaCha stream,
/// so records can be produced in any order or in parallel.
pub fn record_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

/// Generator used by the templates for one record.
pub fn record_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Separate stream for option order, so re-deriving it never depends on how
/// many draws the template made.
pub fn shuffle_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

/// Uniformly permutes the four payloads and reports where the correct one went.
pub fn shuffle_choices<R: Rng + ?Sized>(set: &ChoiceSet, rng: &mut R) -> ([String; 4], Label) {
    let mut order = [0usize, 1, 2, 3];
    order.shuffle(rng);
    let payload = |i: usize| {
        if i == 0 {
            set.correct.clone()
        } else {
            set.distractors[i - 1].clone()
        }
    };
    let choices = order.map(payload);
    let label = Label::from_index(order.iter().position(|&i| i == 0).expect("present")).expect("4 slots");
    (choices, label)
}

/// The pieces a template produces before distractors are attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Draft {
    pub question: String,
    pub abc_context: String,
    pub correct: String,
}

/// Builds the three distractors for a drafted question.
///
/// Candidates come from the template's recipe; each one is kept only if
/// [`judge_choice`] rejects it, then three are drawn without replacement.
pub fn gen_distractors<R: Rng + ?Sized>(
    template: Template,
    draft: &Draft,
    rng: &mut R,
) -> Result<ChoiceSet, QgenError> {
    let candidates = match template {
        Template::TimeSignatureQuestion => rhythm::time_signature_candidates(draft)?,
        Template::BarLinePlacementQuestion => rhythm::bar_placement_candidates(draft, rng)?,
        Template::IntervalNumberQuestion => interval::interval_name_candidates(draft, rng)?,
        Template::NoteCompletionByInterval => interval::note_completion_candidates(draft)?,
        Template::ChordsCompletionQuestion => chord::completion_candidates(draft)?,
        Template::ChordKeyRootIdentificationQuestion => chord::root_candidates(draft)?,
        Template::ChordIdentificationQuestion => chord::chord_name_candidates(draft)?,
        Template::ScaleIdentificationFromAbcQuestion => scale::key_name_candidates(draft)?,
        Template::ScaleSelectionQuestion => scale::scale_spelling_candidates(draft)?,
    };
    pick_distractors(template, draft, candidates, rng)
}

/// A group of candidate distractors and how many may be drawn from it.
#[derive(Clone, Debug)]
pub(crate) struct Tier {
    candidates: Vec<String>,
    take: usize,
}

impl Tier {
    pub(crate) fn new(candidates: Vec<String>, take: usize) -> Tier {
        Tier { candidates, take }
    }
}

/// Tiers are visited in order; within a tier candidates are drawn at random
/// until its quota or the total of three is reached.
fn pick_distractors<R: Rng + ?Sized>(
    template: Template,
    draft: &Draft,
    tiers: Vec<Tier>,
    rng: &mut R,
) -> Result<ChoiceSet, QgenError> {
    let mut chosen: Vec<String> = Vec::with_capacity(3);
    for mut tier in tiers {
        tier.candidates.shuffle(rng);
        let mut taken = 0;
        for c in tier.candidates {
            if chosen.len() == 3 || taken == tier.take {
                break;
            }
            if c == draft.correct || chosen.contains(&c) {
                continue;
            }
            let judged = judge_choice(template, &draft.question, &draft.abc_context, &c);
            if matches!(judged, Ok(Judgement::Wrong(_))) {
                chosen.push(c);
                taken += 1;
            }
        }
    }
    if chosen.len() < 3 {
        return Err(QgenError::InsufficientCandidates {
            template,
            found: chosen.len(),
        });
    }
    Ok(ChoiceSet {
        correct: draft.correct.clone(),
        distractors: [chosen[0].clone(), chosen[1].clone(), chosen[2].clone()],
    })
}

/// Cheap precheck used while indexing a corpus. A `true` here can still fail
/// at generation time (for example when a random window has no usable pair).
pub fn eligible(template: Template, tune: &Tune, opts: &GenOptions) -> bool {
    match template {
        Template::TimeSignatureQuestion => rhythm::time_signature_window(tune, opts).is_some(),
        Template::BarLinePlacementQuestion => rhythm::bar_placement_window(tune, opts).is_some(),
        Template::IntervalNumberQuestion => !interval::interval_pairs(tune).is_empty(),
        Template::NoteCompletionByInterval => !interval::single_notes(tune).is_empty(),
        Template::ChordsCompletionQuestion
        | Template::ChordKeyRootIdentificationQuestion
        | Template::ChordIdentificationQuestion
        | Template::ScaleSelectionQuestion => true,
        Template::ScaleIdentificationFromAbcQuestion => scale::scale_id_window(tune).is_some(),
    }
}

/// Drafts a question from `tune`.
pub fn draft<R: Rng + ?Sized>(
    template: Template,
    tune: &Tune,
    rng: &mut R,
    opts: &GenOptions,
) -> Result<Draft, QgenError> {
    match template {
        Template::TimeSignatureQuestion => rhythm::draft_time_signature(tune, rng, opts),
        Template::BarLinePlacementQuestion => rhythm::draft_bar_placement(tune, rng, opts),
        Template::IntervalNumberQuestion => interval::draft_interval_number(tune, rng),
        Template::NoteCompletionByInterval => interval::draft_note_completion(tune, rng),
        Template::ChordsCompletionQuestion => chord::draft_chords_completion(tune, rng),
        Template::ChordKeyRootIdentificationQuestion => chord::draft_chord_root_id(tune, rng),
        Template::ChordIdentificationQuestion => chord::draft_chord_id(tune, rng),
        Template::ScaleIdentificationFromAbcQuestion => scale::draft_scale_id(tune, rng),
        Template::ScaleSelectionQuestion => scale::draft_scale_selection(tune, rng),
    }
}

/// Full pipeline for one record: draft, distractors, shuffle, verification.
pub fn generate(
    template: Template,
    tune: &Tune,
    id: String,
    source_tune_id: String,
    seed: u64,
    opts: &GenOptions,
) -> Result<QARecord, QgenError> {
    let mut rng = record_rng(seed);
    let d = draft(template, tune, &mut rng, opts)?;
    let set = gen_distractors(template, &d, &mut rng)?;
    let record = QARecord::new(id, template, d.question, d.abc_context, set, seed, source_tune_id);
    let verdict = verify_record(&record);
    if !verdict.pass {
        return Err(QgenError::Unverified(format!("{}: {}", record.id, verdict)));
    }
    Ok(record)
}

pub use chord::{gen_chord_id, gen_chord_root_id, gen_chords_completion};
pub use interval::{gen_interval_number, gen_note_completion};
pub use rhythm::{gen_bar_placement, gen_time_signature};
pub use scale::{gen_scale_id, gen_scale_selection};

/// Shared helper for the per-template `gen_*` entry points.
fn finish<R: Rng + ?Sized>(template: Template, d: Draft, rng: &mut R) -> Result<QARecord, QgenError> {
    let set = gen_distractors(template, &d, rng)?;
    let seed = rng.next_u64();
    Ok(QARecord::new(
        format!("{}-{seed:016x}", template.category().slug()),
        template,
        d.question,
        d.abc_context,
        set,
        seed,
        String::new(),
    ))
}

/// Strips a fixed prefix and suffix, returning the variable middle.
fn between<'a>(text: &'a str, prefix: &str, suffix: &str) -> Option<&'a str> {
    text.strip_prefix(prefix)?.strip_suffix(suffix)
}
