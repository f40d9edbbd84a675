use rand::Rng;

use super::sound::spell_explicit;
use super::{between, finish, Draft, Judgement, QARecord, QgenError, Template, Tier};
use crate::abc::{parse_tune, serialize_note, Key, Mode, Tune};
use crate::theory::{
    rank_keys, scale_pitches, sounding_events, KeyEvidence, Pitch, PitchClass, ScaleDirection, ScaleMode, ScaleSpec,
};

pub(crate) const SCALE_ID_QUESTION: &str = "Select the most suitable key for the following musical score.";
const SELECTION_PREFIX: &str = "Select the correctly written ";
const SELECTION_SUFFIX: &str = " direction.";
const SELECTION_JOIN: &str = " key with ";

const SNIPPET_HEADER: &str = "L:1/4\nK:C\n";
const MIN_NOTES: usize = 12;
const MAX_NOTES: usize = 20;

/// Pitches over K:C, every alteration spelled out, one unit each.
fn explicit_text(pitches: &[Pitch]) -> String {
    let body: Vec<String> = spell_explicit(pitches).iter().map(serialize_note).collect();
    format!("{SNIPPET_HEADER}{}", body.join(" "))
}

fn melody(tune: &Tune) -> Vec<Pitch> {
    sounding_events(tune)
        .into_iter()
        .filter(|e| e.pitches.len() == 1)
        .map(|e| e.pitches[0])
        .collect()
}

fn top_key(pitches: &[Pitch]) -> Option<Key> {
    rank_keys(&KeyEvidence::from_pitches(pitches.to_vec()))
        .ok()
        .map(|keys| keys[0])
}

/// A run of 12 to 20 melody notes on which key inference recovers the tune's
/// own key. Tries the ending first (it usually lands on the tonic), then the
/// opening.
fn window_for(notes: &[Pitch], len: usize, key: Key) -> Option<Vec<Pitch>> {
    if notes.len() < len {
        return None;
    }
    [&notes[notes.len() - len..], &notes[..len]]
        .into_iter()
        .find(|w| top_key(w) == Some(key))
        .map(|w| w.to_vec())
}

pub(crate) fn scale_id_window(tune: &Tune) -> Option<Vec<Pitch>> {
    let notes = melody(tune);
    let key = tune.header.key;
    (MIN_NOTES..=MAX_NOTES.min(notes.len()))
        .rev()
        .find_map(|len| window_for(&notes, len, key))
}

pub(crate) fn draft_scale_id<R: Rng + ?Sized>(tune: &Tune, rng: &mut R) -> Result<Draft, QgenError> {
    let notes = melody(tune);
    let key = tune.header.key;
    let mut window = None;
    if notes.len() >= MIN_NOTES {
        let len = rng.gen_range(MIN_NOTES..=MAX_NOTES.min(notes.len()));
        window = window_for(&notes, len, key);
    }
    let window = window
        .or_else(|| scale_id_window(tune))
        .ok_or_else(|| QgenError::Ineligible {
            template: Template::ScaleIdentificationFromAbcQuestion,
            reason: "no melody window where the key is recoverable".into(),
        })?;
    Ok(Draft {
        question: SCALE_ID_QUESTION.to_string(),
        abc_context: explicit_text(&window),
        correct: key.to_string(),
    })
}

/// Loose key name: tonic with any accidental, optional "m". Unlike [`Key`]
/// this admits names outside the signature range, such as "A#".
fn parse_key_name(s: &str) -> Option<(PitchClass, Mode)> {
    let s = s.trim();
    let (tonic, mode) = match s.strip_suffix('m') {
        Some(t) => (t, Mode::Minor),
        None => (s, Mode::Major),
    };
    let pc: PitchClass = tonic.parse().ok()?;
    (-1..=1).contains(&pc.accidental).then_some((pc, mode))
}

fn key_name(tonic: PitchClass, mode: Mode) -> String {
    let m = if mode == Mode::Minor { "m" } else { "" };
    format!("{tonic}{m}")
}

/// The tonic letter with its other accidentals, and the parallel mode.
pub(crate) fn key_name_candidates(draft: &Draft) -> Result<Vec<Tier>, QgenError> {
    let (tonic, mode) = parse_key_name(&draft.correct).ok_or_else(|| QgenError::UnknownName(draft.correct.clone()))?;
    let mut names: Vec<String> = (-1..=1)
        .filter(|a| *a != tonic.accidental)
        .map(|a| key_name(PitchClass::new(tonic.letter, a), mode))
        .collect();
    let other = if mode == Mode::Major { Mode::Minor } else { Mode::Major };
    names.push(key_name(tonic, other));
    Ok(vec![Tier::new(names, 3)])
}

pub(crate) fn judge_scale_id(context: &str, payload: &str) -> Result<Judgement, String> {
    let tune = parse_tune(context).map_err(|e| e.to_string())?;
    let top = top_key(&melody(&tune)).ok_or("no key fits the melody")?;
    let (tonic, mode) = parse_key_name(payload).ok_or_else(|| format!("not a key name: {payload:?}"))?;
    let same = tonic == PitchClass::new(top.tonic(), top.tonic_accidental()) && mode == top.mode();
    Ok(if same {
        Judgement::Correct
    } else {
        Judgement::Wrong("key-rank")
    })
}

fn spec_for(key: &Key, direction: ScaleDirection) -> ScaleSpec {
    let mode = match key.mode() {
        Mode::Major => ScaleMode::Major,
        Mode::Minor => ScaleMode::NaturalMinor,
    };
    ScaleSpec::new(PitchClass::new(key.tonic(), key.tonic_accidental()), mode, direction)
}

pub(crate) fn draft_scale_selection<R: Rng + ?Sized>(tune: &Tune, rng: &mut R) -> Result<Draft, QgenError> {
    let direction = if rng.gen_bool(0.5) {
        ScaleDirection::Ascending
    } else {
        ScaleDirection::Descending
    };
    let spec = spec_for(&tune.header.key, direction);
    let pitches = scale_pitches(&spec)?;
    Ok(Draft {
        question: format!(
            "{SELECTION_PREFIX}{spec}{SELECTION_JOIN}{}{SELECTION_SUFFIX}",
            direction.name()
        ),
        abc_context: "None".to_string(),
        correct: explicit_text(&pitches),
    })
}

pub(crate) fn selection_spec(question: &str) -> Result<ScaleSpec, String> {
    let middle = between(question, SELECTION_PREFIX, SELECTION_SUFFIX).ok_or("question does not name a scale")?;
    let (name, direction) = middle
        .split_once(SELECTION_JOIN)
        .ok_or("question does not name a direction")?;
    let key: Key = name.parse().map_err(|_| format!("not a key: {name:?}"))?;
    let direction = [ScaleDirection::Ascending, ScaleDirection::Descending]
        .into_iter()
        .find(|d| d.name() == direction)
        .ok_or_else(|| format!("not a direction: {direction:?}"))?;
    Ok(spec_for(&key, direction))
}

/// The same scale reversed, with one degree altered, and in the parallel mode.
pub(crate) fn scale_spelling_candidates(draft: &Draft) -> Result<Vec<Tier>, QgenError> {
    let spec = selection_spec(&draft.question).map_err(QgenError::UnknownName)?;
    let correct = scale_pitches(&spec)?;

    let mut reversed = correct.clone();
    reversed.reverse();

    let mut altered = Vec::new();
    for i in 0..correct.len() {
        for d in [-1, 1] {
            let mut v = correct.clone();
            v[i].accidental += d;
            if (-2..=2).contains(&v[i].accidental) {
                altered.push(explicit_text(&v));
            }
        }
    }

    // Major and natural minor differ by a semitone on degrees 3, 6 and 7.
    let shift = if spec.mode == ScaleMode::Major { -1 } else { 1 };
    let parallel: Vec<Pitch> = correct
        .iter()
        .map(|p| {
            let degree = (p.letter.index() - spec.tonic.letter.index()).rem_euclid(7);
            let mut q = *p;
            if matches!(degree, 2 | 5 | 6) {
                q.accidental += shift;
            }
            q
        })
        .collect();
    let mut tiers = vec![
        Tier::new(vec![explicit_text(&reversed)], 1),
        Tier::new(altered.clone(), 1),
    ];
    if parallel.iter().all(|p| (-2..=2).contains(&p.accidental)) {
        tiers.push(Tier::new(vec![explicit_text(&parallel)], 1));
    }
    tiers.push(Tier::new(altered, 3));
    Ok(tiers)
}

pub(crate) fn judge_scale_selection(question: &str, payload: &str) -> Result<Judgement, String> {
    let spec = selection_spec(question)?;
    let expected = scale_pitches(&spec).map_err(|e| e.to_string())?;
    let tune = parse_tune(payload).map_err(|e| e.to_string())?;
    Ok(if melody(&tune) == expected {
        Judgement::Correct
    } else {
        Judgement::Wrong("scale-spelling")
    })
}

/// Key question on a melody window re-spelled over C.
pub fn gen_scale_id<R: Rng + ?Sized>(tune: &Tune, rng: &mut R) -> Result<QARecord, QgenError> {
    let d = draft_scale_id(tune, rng)?;
    finish(Template::ScaleIdentificationFromAbcQuestion, d, rng)
}

/// Scale-spelling question for `spec`. The context is always "None".
pub fn gen_scale_selection<R: Rng + ?Sized>(spec: &ScaleSpec, rng: &mut R) -> Result<QARecord, QgenError> {
    let key = spec.key()?;
    let pitches = scale_pitches(spec)?;
    let d = Draft {
        question: format!(
            "{SELECTION_PREFIX}{spec}{SELECTION_JOIN}{}{SELECTION_SUFFIX}",
            spec.direction.name()
        ),
        abc_context: "None".to_string(),
        correct: explicit_text(&pitches),
    };
    debug_assert_eq!(spec_for(&key, spec.direction), *spec);
    finish(Template::ScaleSelectionQuestion, d, rng)
}
