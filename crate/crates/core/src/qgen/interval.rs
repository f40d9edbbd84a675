use rand::Rng;

use super::sound::{context_header, respell_measure, sounded_measures, unbarred_text, Sounded};
use super::{between, finish, Draft, Judgement, QARecord, QgenError, Template, Tier};
use crate::abc::{parse_tune, Duration, EventKind, Header, Letter, Tune};
use crate::theory::{interval_between, key_signature, transpose, Direction, Interval, Pitch, Quality};

pub(crate) const INTERVAL_NUMBER_QUESTION: &str =
    "Given two notes with their ABC scores, select the correct name of the interval between them.";
const NOTE_COMPLETION_PREFIX: &str = "Select the correct note to make the following note in music score form the ";
const NOTE_COMPLETION_SUFFIX: &str = " interval.";

/// Targets for note completion: the simple intervals that come up in tonal music.
const COMPLETION_TARGETS: [(u8, Quality); 14] = [
    (1, Quality::Perfect),
    (2, Quality::Minor),
    (2, Quality::Major),
    (3, Quality::Minor),
    (3, Quality::Major),
    (4, Quality::Perfect),
    (4, Quality::Augmented),
    (5, Quality::Diminished),
    (5, Quality::Perfect),
    (6, Quality::Minor),
    (6, Quality::Major),
    (7, Quality::Minor),
    (7, Quality::Major),
    (8, Quality::Perfect),
];

/// Orders two pitches by staff position and names the interval if it is simple.
fn ordered_interval(a: Pitch, b: Pitch) -> Option<Interval> {
    let (low, high) = if (a.staff_position(), a.semitone()) <= (b.staff_position(), b.semitone()) {
        (a, b)
    } else {
        (b, a)
    };
    interval_between(&low, &high).ok()
}

/// Single-note events with their sounding pitch, in order.
pub(crate) fn single_notes(tune: &Tune) -> Vec<Sounded> {
    sounded_measures(tune)
        .into_iter()
        .flatten()
        .filter(|e| e.kind == EventKind::Note)
        .collect()
}

/// Adjacent single notes (no rest or chord between) that form a nameable interval.
pub(crate) fn interval_pairs(tune: &Tune) -> Vec<(Sounded, Sounded)> {
    let events: Vec<Sounded> = sounded_measures(tune).into_iter().flatten().collect();
    events
        .windows(2)
        .filter(|w| w[0].kind == EventKind::Note && w[1].kind == EventKind::Note)
        .filter(|w| ordered_interval(w[0].pitches[0], w[1].pitches[0]).is_some())
        .map(|w| {
            let mut a = w[0].clone();
            let mut b = w[1].clone();
            a.tie = false;
            b.tie = false;
            (a, b)
        })
        .collect()
}

fn ineligible(template: Template, reason: &str) -> QgenError {
    QgenError::Ineligible {
        template,
        reason: reason.to_string(),
    }
}

pub(crate) fn draft_interval_number<R: Rng + ?Sized>(tune: &Tune, rng: &mut R) -> Result<Draft, QgenError> {
    let pairs = interval_pairs(tune);
    if pairs.is_empty() {
        return Err(ineligible(
            Template::IntervalNumberQuestion,
            "no adjacent notes within an octave",
        ));
    }
    let (a, b) = pairs[rng.gen_range(0..pairs.len())].clone();
    let iv = ordered_interval(a.pitches[0], b.pitches[0]).expect("filtered");
    let header = context_header(&tune.header);
    Ok(Draft {
        question: INTERVAL_NUMBER_QUESTION.to_string(),
        abc_context: unbarred_text(&header, true, &respell_measure(&[a, b], &header.key)),
        correct: iv.to_string(),
    })
}

/// One near miss sharing the number or quality, then anything else.
pub(crate) fn interval_name_candidates<R: Rng + ?Sized>(draft: &Draft, _rng: &mut R) -> Result<Vec<Tier>, QgenError> {
    let correct: Interval = draft.correct.parse()?;
    let (near, far): (Vec<Interval>, Vec<Interval>) = Interval::nameable()
        .into_iter()
        .filter(|iv| *iv != correct)
        .partition(|iv| iv.number() == correct.number() || iv.quality() == correct.quality());
    let names = |v: Vec<Interval>| v.iter().map(|iv| iv.to_string()).collect();
    Ok(vec![
        Tier::new(names(near.clone()), 1),
        Tier::new(names(far), 2),
        Tier::new(names(near), 3),
    ])
}

fn note_event(p: Pitch) -> Sounded {
    Sounded {
        kind: EventKind::Note,
        pitches: vec![p],
        duration: Duration::ONE,
        tie: false,
    }
}

fn two_notes(header: &Header, a: Pitch, b: Pitch) -> String {
    unbarred_text(
        header,
        true,
        &respell_measure(&[note_event(a), note_event(b)], &header.key),
    )
}

fn in_range(p: &Pitch) -> bool {
    (-4..=4).contains(&p.octave) && (-2..=2).contains(&p.accidental)
}

pub(crate) fn draft_note_completion<R: Rng + ?Sized>(tune: &Tune, rng: &mut R) -> Result<Draft, QgenError> {
    let template = Template::NoteCompletionByInterval;
    let notes = single_notes(tune);
    if notes.is_empty() {
        return Err(ineligible(template, "no single notes"));
    }
    let header = context_header(&tune.header);
    for _ in 0..32 {
        let seed = notes[rng.gen_range(0..notes.len())].pitches[0];
        let (n, q) = COMPLETION_TARGETS[rng.gen_range(0..COMPLETION_TARGETS.len())];
        let iv = Interval::new(n, q).expect("table holds valid intervals");
        let Ok(answer) = transpose(&seed, iv, Direction::Up) else {
            continue;
        };
        return Ok(Draft {
            question: format!("{NOTE_COMPLETION_PREFIX}{iv}{NOTE_COMPLETION_SUFFIX}"),
            abc_context: unbarred_text(&header, true, &respell_measure(&[note_event(seed)], &header.key)),
            correct: two_notes(&header, seed, answer),
        });
    }
    Err(ineligible(template, "no spellable target found"))
}

/// Wrong second notes: the right letter in another octave, a neighbouring
/// letter, and the right letter with another accidental. Enharmonic
/// respellings of the answer are never offered.
pub(crate) fn note_completion_candidates(draft: &Draft) -> Result<Vec<Tier>, QgenError> {
    let correct = parse_tune(&draft.correct)?;
    let notes = single_notes(&correct);
    let (seed, answer) = (notes[0].pitches[0], notes[1].pitches[0]);
    let header = correct.header.clone();
    let sig = key_signature(&header.key);
    let keep = |p: &Pitch| in_range(p) && p.semitone() != answer.semitone();

    let octaves: Vec<Pitch> = [-1, 1]
        .into_iter()
        .map(|d| Pitch::new(answer.letter, answer.accidental, answer.octave + d))
        .filter(keep)
        .collect();
    let mut letters = Vec::new();
    for step in [-2, -1, 1, 2] {
        let pos = answer.staff_position() + step;
        let letter = Letter::from_index(pos);
        let octave = pos.div_euclid(7) as i8;
        for acc in [sig.accidental(letter), 0] {
            let p = Pitch::new(letter, acc, octave);
            if keep(&p) && !letters.contains(&p) {
                letters.push(p);
            }
        }
    }
    let accidentals: Vec<Pitch> = [-1, 1]
        .into_iter()
        .map(|d| Pitch::new(answer.letter, answer.accidental + d, answer.octave))
        .filter(keep)
        .collect();

    let text = |v: &[Pitch]| v.iter().map(|p| two_notes(&header, seed, *p)).collect::<Vec<_>>();
    let all: Vec<Pitch> = octaves.iter().chain(&letters).chain(&accidentals).copied().collect();
    Ok(vec![
        Tier::new(text(&octaves), 1),
        Tier::new(text(&letters), 1),
        Tier::new(text(&accidentals), 1),
        Tier::new(text(&all), 3),
    ])
}

pub(crate) fn judge_interval_number(context: &str, payload: &str) -> Result<Judgement, String> {
    let tune = parse_tune(context).map_err(|e| e.to_string())?;
    let notes = single_notes(&tune);
    if notes.len() != 2 {
        return Err(format!("context has {} notes, expected 2", notes.len()));
    }
    let iv = ordered_interval(notes[0].pitches[0], notes[1].pitches[0]).ok_or("context interval has no name")?;
    let named: Interval = payload
        .parse()
        .map_err(|_| format!("not an interval name: {payload:?}"))?;
    Ok(if named == iv {
        Judgement::Correct
    } else {
        Judgement::Wrong("interval-name")
    })
}

pub(crate) fn completion_interval(question: &str) -> Result<Interval, String> {
    between(question, NOTE_COMPLETION_PREFIX, NOTE_COMPLETION_SUFFIX)
        .ok_or("question does not name an interval")?
        .parse()
        .map_err(|e: crate::theory::TheoryError| e.to_string())
}

pub(crate) fn judge_note_completion(question: &str, context: &str, payload: &str) -> Result<Judgement, String> {
    let iv = completion_interval(question)?;
    let ctx = parse_tune(context).map_err(|e| e.to_string())?;
    let seed = match single_notes(&ctx).as_slice() {
        [one] => one.pitches[0],
        other => return Err(format!("context has {} notes, expected 1", other.len())),
    };
    let option = parse_tune(payload).map_err(|e| e.to_string())?;
    if option.header != ctx.header {
        return Ok(Judgement::Wrong("header"));
    }
    let notes = single_notes(&option);
    if notes.len() != 2 || notes[0].pitches[0] != seed {
        return Ok(Judgement::Wrong("seed"));
    }
    Ok(if interval_between(&seed, &notes[1].pitches[0]) == Ok(iv) {
        Judgement::Correct
    } else {
        Judgement::Wrong("interval")
    })
}

/// Interval-name question from two adjacent notes of the tune.
pub fn gen_interval_number<R: Rng + ?Sized>(tune: &Tune, rng: &mut R) -> Result<QARecord, QgenError> {
    let d = draft_interval_number(tune, rng)?;
    finish(Template::IntervalNumberQuestion, d, rng)
}

/// Note-completion question seeded by a note of the tune.
pub fn gen_note_completion<R: Rng + ?Sized>(tune: &Tune, rng: &mut R) -> Result<QARecord, QgenError> {
    let d = draft_note_completion(tune, rng)?;
    finish(Template::NoteCompletionByInterval, d, rng)
}
