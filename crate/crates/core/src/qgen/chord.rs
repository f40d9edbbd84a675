use rand::Rng;

use super::{between, finish, Draft, Judgement, QARecord, QgenError, Template, Tier};
use crate::abc::{parse_tune, serialize_header, serialize_note, Duration, EventKind, Header, Key, Letter, Mode, Tune};
use crate::theory::{
    complete_triad, identify_triad, parse_register_name, scale_pitches, sounding_events, spell_in_measure, Pitch,
    PitchClass, ScaleDirection, ScaleMode, ScaleSpec, Triad, TriadQuality,
};

const COMPLETION_PREFIX: &str = "Given several notes, select the correct Note to form a ";
const COMPLETION_SUFFIX: &str = " chord.";
pub(crate) const ROOT_QUESTION: &str = "Identify the correct root note of the chord in the following sheet music.";
pub(crate) const CHORD_ID_QUESTION: &str = "Select the correct chord name based on the following music sheet.";

/// Standalone chord contexts use a quarter-note unit.
fn chord_header(key: Key) -> Header {
    Header::new(Duration::new(1, 4).expect("valid"), None, key)
}

/// `L:1/4`, the key, then one chord of the given pitches written under that key.
fn chord_text(key: Key, pitches: &[Pitch]) -> String {
    let notes: String = spell_in_measure(pitches, &key).iter().map(serialize_note).collect();
    format!("{}[{notes}]", serialize_header(&chord_header(key), false))
}

/// Close-position voicing starting from `members[rotation]` in the uppercase
/// register, each next member the nearest one above.
fn voice(members: [PitchClass; 3], rotation: usize) -> Vec<Pitch> {
    let mut out: Vec<Pitch> = Vec::with_capacity(3);
    for i in 0..3 {
        let c = members[(rotation + i) % 3];
        let p = match out.last() {
            None => c.at_octave(0),
            Some(prev) => {
                let oct = (prev.staff_position() - c.letter.index()).div_euclid(7) + 1;
                c.at_octave(oct as i8)
            }
        };
        out.push(p);
    }
    out
}

fn random_triad<R: Rng + ?Sized>(rng: &mut R) -> (Triad, [PitchClass; 3]) {
    loop {
        let letter = Letter::ALL[rng.gen_range(0..7)];
        let acc = rng.gen_range(-1..=1);
        let quality = TriadQuality::ALL[rng.gen_range(0..4)];
        let triad = Triad::new(PitchClass::new(letter, acc), quality);
        if let Ok(m) = triad.members() {
            return (triad, m);
        }
    }
}

/// Pitches of the single chord in a snippet.
fn chord_pitches(tune: &Tune) -> Result<Vec<Pitch>, String> {
    let events: Vec<_> = sounding_events(tune)
        .into_iter()
        .filter(|e| e.event.kind != EventKind::Rest)
        .collect();
    match events.as_slice() {
        [one] => Ok(one.pitches.clone()),
        other => Err(format!("expected one chord, found {} events", other.len())),
    }
}

pub(crate) fn draft_chords_completion<R: Rng + ?Sized>(_tune: &Tune, rng: &mut R) -> Result<Draft, QgenError> {
    let (triad, members) = random_triad(rng);
    let voiced = voice(members, rng.gen_range(0..3));
    let missing = rng.gen_range(0..3);
    let given: Vec<Pitch> = (0..3).filter(|&i| i != missing).map(|i| voiced[i]).collect();
    let third = complete_triad([given[0], given[1]], &triad)?;
    Ok(Draft {
        question: format!("{COMPLETION_PREFIX}{}{COMPLETION_SUFFIX}", triad.long_name()),
        abc_context: chord_text(Key::C_MAJOR, &given),
        correct: chord_text(Key::C_MAJOR, &[given[0], given[1], third]),
    })
}

fn in_range(p: &Pitch) -> bool {
    (-4..=4).contains(&p.octave) && (-2..=2).contains(&p.accidental)
}

/// Third notes that break the chord: the missing member off by a semitone, a
/// given note doubled at the octave, and a neighbouring letter. Anything that
/// sounds like the correct note is skipped.
pub(crate) fn completion_candidates(draft: &Draft) -> Result<Vec<Tier>, QgenError> {
    let correct = parse_tune(&draft.correct)?;
    let pitches = chord_pitches(&correct).map_err(QgenError::Unverified)?;
    let (given, third) = ([pitches[0], pitches[1]], pitches[2]);
    let keep = |p: &Pitch| in_range(p) && p.semitone().rem_euclid(12) != third.semitone().rem_euclid(12);
    let text = |ps: Vec<Pitch>| -> Vec<String> {
        ps.into_iter()
            .filter(|p| keep(p))
            .map(|p| chord_text(Key::C_MAJOR, &[given[0], given[1], p]))
            .collect()
    };

    let semitone = text(vec![
        Pitch::new(third.letter, third.accidental - 1, third.octave),
        Pitch::new(third.letter, third.accidental + 1, third.octave),
    ]);
    let doubled = text(
        given
            .iter()
            .flat_map(|g| [-1, 1].map(|d| Pitch::new(g.letter, g.accidental, g.octave + d)))
            .filter(|p| !given.contains(p))
            .collect(),
    );
    let mut wrong_letter = Vec::new();
    for step in [-1, 1] {
        let pos = third.staff_position() + step;
        let letter = Letter::from_index(pos);
        for acc in [0, third.accidental] {
            wrong_letter.push(Pitch::new(letter, acc, pos.div_euclid(7) as i8));
        }
    }
    let wrong_letter = text(wrong_letter);
    let all: Vec<String> = semitone.iter().chain(&doubled).chain(&wrong_letter).cloned().collect();
    Ok(vec![
        Tier::new(semitone, 1),
        Tier::new(doubled, 1),
        Tier::new(wrong_letter, 1),
        Tier::new(all, 3),
    ])
}

pub(crate) fn completion_target(question: &str) -> Result<Triad, String> {
    let name = between(question, COMPLETION_PREFIX, COMPLETION_SUFFIX).ok_or("question does not name a chord")?;
    let (root, quality) = name.rsplit_once(' ').ok_or("chord name has no quality")?;
    let root: PitchClass = root.parse().map_err(|e: crate::theory::TheoryError| e.to_string())?;
    let quality = TriadQuality::ALL
        .into_iter()
        .find(|q| q.name() == quality)
        .ok_or_else(|| format!("unknown quality {quality:?}"))?;
    Ok(Triad::new(root, quality))
}

pub(crate) fn judge_chords_completion(question: &str, context: &str, payload: &str) -> Result<Judgement, String> {
    let target = completion_target(question)?;
    let given = chord_pitches(&parse_tune(context).map_err(|e| e.to_string())?)?;
    let option = parse_tune(payload).map_err(|e| e.to_string())?;
    let pitches = chord_pitches(&option)?;
    if pitches.len() != 3 {
        return Ok(Judgement::Wrong("size"));
    }
    if !given.iter().all(|g| pitches.contains(g)) {
        return Ok(Judgement::Wrong("given"));
    }
    Ok(match identify_triad(&pitches) {
        Ok(t) if t == target => Judgement::Correct,
        _ => Judgement::Wrong("triad"),
    })
}

/// A diatonic triad of `key`, built on scale degree `degree`.
fn diatonic_triad(key: &Key, degree: usize) -> Result<[PitchClass; 3], QgenError> {
    let mode = match key.mode() {
        Mode::Major => ScaleMode::Major,
        Mode::Minor => ScaleMode::NaturalMinor,
    };
    let spec = ScaleSpec::new(
        PitchClass::new(key.tonic(), key.tonic_accidental()),
        mode,
        ScaleDirection::Ascending,
    );
    let scale = scale_pitches(&spec)?;
    Ok([0, 2, 4].map(|i| scale[(degree + i) % 7].class()))
}

pub(crate) fn draft_chord_root_id<R: Rng + ?Sized>(tune: &Tune, rng: &mut R) -> Result<Draft, QgenError> {
    let key = tune.header.key;
    let members = diatonic_triad(&key, rng.gen_range(0..7))?;
    let voiced = voice(members, rng.gen_range(0..3));
    let root = voiced.iter().find(|p| p.class() == members[0]).expect("root voiced");
    Ok(Draft {
        question: ROOT_QUESTION.to_string(),
        abc_context: chord_text(key, &voiced),
        correct: root.register_name(),
    })
}

/// Names a reader might confuse with the root: the root as written (without
/// the signature), other members as sounding or as written, then the root
/// letter with other accidentals. Names sounding like the root are skipped.
pub(crate) fn root_candidates(draft: &Draft) -> Result<Vec<Tier>, QgenError> {
    let tune = parse_tune(&draft.abc_context)?;
    let pitches = chord_pitches(&tune).map_err(QgenError::Unverified)?;
    let triad = identify_triad(&pitches)?;
    let written: Vec<_> = tune.measures[0].events[0].notes.clone();
    let root_chroma = triad.root.chroma();
    let name = |p: Pitch| p.register_name();
    let mut first = Vec::new();
    for (p, w) in pitches.iter().zip(&written) {
        first.push(name(Pitch::new(w.letter, w.accidental.unwrap_or(0), w.octave)));
        if p.class() != triad.root {
            first.push(name(*p));
        }
    }
    let root = pitches.iter().find(|p| p.class() == triad.root).expect("member");
    let second: Vec<String> = [-1, 1]
        .into_iter()
        .map(|d| Pitch::new(root.letter, root.accidental + d, root.octave))
        .filter(|p| (-2..=2).contains(&p.accidental))
        .map(name)
        .collect();
    let differs = |s: &String| parse_register_name(s).is_some_and(|p| p.class().chroma() != root_chroma);
    let first: Vec<String> = first.into_iter().filter(differs).collect();
    let second: Vec<String> = second.into_iter().filter(differs).collect();
    Ok(vec![Tier::new(first, 3), Tier::new(second, 3)])
}

pub(crate) fn judge_chord_root(context: &str, payload: &str) -> Result<Judgement, String> {
    let pitches = chord_pitches(&parse_tune(context).map_err(|e| e.to_string())?)?;
    let triad = identify_triad(&pitches).map_err(|e| e.to_string())?;
    let named = parse_register_name(payload).ok_or_else(|| format!("not a note name: {payload:?}"))?;
    Ok(if named.class() == triad.root {
        Judgement::Correct
    } else {
        Judgement::Wrong("root")
    })
}

pub(crate) fn draft_chord_id<R: Rng + ?Sized>(_tune: &Tune, rng: &mut R) -> Result<Draft, QgenError> {
    let (triad, members) = random_triad(rng);
    let voiced = voice(members, rng.gen_range(0..3));
    Ok(Draft {
        question: CHORD_ID_QUESTION.to_string(),
        abc_context: chord_text(Key::C_MAJOR, &voiced),
        correct: triad.to_string(),
    })
}

/// Same root with another quality, then other members taken as the root.
/// Chords with the same sounding notes as the answer are skipped.
pub(crate) fn chord_name_candidates(draft: &Draft) -> Result<Vec<Tier>, QgenError> {
    let correct: Triad = draft.correct.parse()?;
    let chromas = correct.chromas()?;
    let distinct = |t: &Triad| t.chromas().is_ok_and(|c| c != chromas);
    let same_root: Vec<String> = TriadQuality::ALL
        .into_iter()
        .map(|q| Triad::new(correct.root, q))
        .filter(|t| *t != correct && distinct(t))
        .map(|t| t.to_string())
        .collect();
    let members = correct.members()?;
    let mut moved = Vec::new();
    for m in &members[1..] {
        for q in TriadQuality::ALL {
            let t = Triad::new(*m, q);
            if distinct(&t) {
                moved.push(t.to_string());
            }
        }
    }
    Ok(vec![
        Tier::new(same_root.clone(), 2),
        Tier::new(moved, 1),
        Tier::new(same_root, 3),
    ])
}

pub(crate) fn judge_chord_id(context: &str, payload: &str) -> Result<Judgement, String> {
    let pitches = chord_pitches(&parse_tune(context).map_err(|e| e.to_string())?)?;
    let actual = identify_triad(&pitches).map_err(|e| e.to_string())?;
    let named: Triad = payload.parse().map_err(|e: crate::theory::TheoryError| e.to_string())?;
    Ok(if named == actual {
        Judgement::Correct
    } else {
        Judgement::Wrong("chord-name")
    })
}

/// Chord-completion question on a synthesized triad.
pub fn gen_chords_completion<R: Rng + ?Sized>(tune: &Tune, rng: &mut R) -> Result<QARecord, QgenError> {
    let d = draft_chords_completion(tune, rng)?;
    finish(Template::ChordsCompletionQuestion, d, rng)
}

/// Root question on a diatonic triad of the tune's key.
pub fn gen_chord_root_id<R: Rng + ?Sized>(tune: &Tune, rng: &mut R) -> Result<QARecord, QgenError> {
    let d = draft_chord_root_id(tune, rng)?;
    finish(Template::ChordKeyRootIdentificationQuestion, d, rng)
}

/// Chord-name question on a synthesized triad.
pub fn gen_chord_id<R: Rng + ?Sized>(tune: &Tune, rng: &mut R) -> Result<QARecord, QgenError> {
    let d = draft_chord_id(tune, rng)?;
    finish(Template::ChordIdentificationQuestion, d, rng)
}
