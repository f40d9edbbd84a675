use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abc::{Event, Key, Letter, Tune, WrittenNote};

/// A sounding pitch: letter, resolved accidental and octave
/// (0 = the ABC uppercase register).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pitch {
    pub letter: Letter,
    pub accidental: i8,
    pub octave: i8,
}

impl Pitch {
    pub fn new(letter: Letter, accidental: i8, octave: i8) -> Pitch {
        Pitch {
            letter,
            accidental,
            octave,
        }
    }

    pub fn class(&self) -> PitchClass {
        PitchClass::new(self.letter, self.accidental)
    }

    /// Letter steps from the uppercase-register C.
    pub fn staff_position(&self) -> i32 {
        self.letter.index() + 7 * self.octave as i32
    }

    /// Same as [`semitone_index`].
    pub fn semitone(&self) -> i32 {
        semitone_index(self)
    }

    /// The written form with the accidental made explicit.
    pub fn written(&self) -> WrittenNote {
        WrittenNote::new(self.letter, Some(self.accidental), self.octave)
    }

    /// Name keeping the ABC register: "G#" for octave 0, "d#" for octave 1.
    /// Octave marks are not included.
    pub fn register_name(&self) -> String {
        let c = if self.octave >= 1 {
            self.letter.as_char().to_ascii_lowercase()
        } else {
            self.letter.as_char()
        };
        format!("{c}{}", accidental_symbol(self.accidental))
    }
}

/// 12 * octave + natural offset of the letter + accidental.
pub fn semitone_index(p: &Pitch) -> i32 {
    12 * p.octave as i32 + p.letter.semitone() + p.accidental as i32
}

/// Spelled pitch class: letter plus accidental, no octave.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PitchClass {
    pub letter: Letter,
    pub accidental: i8,
}

impl PitchClass {
    pub fn new(letter: Letter, accidental: i8) -> PitchClass {
        PitchClass { letter, accidental }
    }

    /// Semitone class in 0..12.
    pub fn chroma(&self) -> i32 {
        (self.letter.semitone() + self.accidental as i32).rem_euclid(12)
    }

    pub fn at_octave(&self, octave: i8) -> Pitch {
        Pitch::new(self.letter, self.accidental, octave)
    }
}

pub(crate) fn accidental_symbol(acc: i8) -> &'static str {
    match acc {
        2 => "##",
        1 => "#",
        -1 => "b",
        -2 => "bb",
        _ => "",
    }
}

impl fmt::Display for PitchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter, accidental_symbol(self.accidental))
    }
}

fn split_accidental(rest: &str) -> Option<i8> {
    match rest {
        "" => Some(0),
        "#" => Some(1),
        "##" => Some(2),
        "b" => Some(-1),
        "bb" => Some(-2),
        _ => None,
    }
}

/// Parses "F#", "Bb", "Ebb". The letter must be uppercase.
impl std::str::FromStr for PitchClass {
    type Err = super::TheoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || super::TheoryError::OutOfRange(format!("pitch name {s:?}"));
        let mut chars = s.trim().chars();
        let letter = chars
            .next()
            .filter(|c| c.is_ascii_uppercase())
            .and_then(Letter::from_char)
            .ok_or_else(bad)?;
        let accidental = split_accidental(chars.as_str()).ok_or_else(bad)?;
        Ok(PitchClass::new(letter, accidental))
    }
}

/// Inverse of [`Pitch::register_name`]: "d#" gives D# at octave 1.
pub fn parse_register_name(s: &str) -> Option<Pitch> {
    let mut chars = s.trim().chars();
    let c = chars.next()?;
    let letter = Letter::from_char(c)?;
    let accidental = split_accidental(chars.as_str())?;
    let octave = if c.is_ascii_lowercase() { 1 } else { 0 };
    Some(Pitch::new(letter, accidental, octave))
}

impl fmt::Display for Pitch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.class(), self.octave)
    }
}

/// Accidental applied by a key to each letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KeySignature {
    accidentals: [i8; 7],
}

const SHARP_ORDER: [Letter; 7] = [
    Letter::F,
    Letter::C,
    Letter::G,
    Letter::D,
    Letter::A,
    Letter::E,
    Letter::B,
];

impl KeySignature {
    pub fn accidental(&self, letter: Letter) -> i8 {
        self.accidentals[letter.index() as usize]
    }

    /// Altered letters in signature order (F C G ... for sharps, B E A ... for flats).
    pub fn altered(&self) -> Vec<(Letter, i8)> {
        let mut order = SHARP_ORDER.to_vec();
        if self.accidentals.iter().any(|&a| a < 0) {
            order.reverse();
        }
        order
            .into_iter()
            .filter(|l| self.accidental(*l) != 0)
            .map(|l| (l, self.accidental(l)))
            .collect()
    }
}

/// The letters a key sharpens or flattens; every other letter stays natural.
pub fn key_signature(key: &Key) -> KeySignature {
    let fifths = key.fifths();
    let mut accidentals = [0i8; 7];
    let count = fifths.unsigned_abs() as usize;
    if fifths > 0 {
        for l in SHARP_ORDER.iter().take(count) {
            accidentals[l.index() as usize] = 1;
        }
    } else {
        for l in SHARP_ORDER.iter().rev().take(count) {
            accidentals[l.index() as usize] = -1;
        }
    }
    KeySignature { accidentals }
}

/// Explicit accidentals seen so far in the current measure, per letter and octave.
#[derive(Clone, Debug, Default)]
pub struct AccidentalState {
    seen: HashMap<(Letter, i8), i8>,
}

impl AccidentalState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Forget everything at a bar line.
    pub fn clear(&mut self) {
        self.seen.clear();
    }

    pub fn get(&self, letter: Letter, octave: i8) -> Option<i8> {
        self.seen.get(&(letter, octave)).copied()
    }

    fn set(&mut self, letter: Letter, octave: i8, accidental: i8) {
        self.seen.insert((letter, octave), accidental);
    }
}

/// Resolves a written note: explicit accidental first (and remembered for the
/// rest of the measure), then earlier accidentals in the measure, then the key.
pub fn sounding_pitch(note: &WrittenNote, key: &Key, state: &mut AccidentalState) -> Pitch {
    let accidental = match note.accidental {
        Some(a) => {
            state.set(note.letter, note.octave, a);
            a
        }
        None => state
            .get(note.letter, note.octave)
            .unwrap_or_else(|| key_signature(key).accidental(note.letter)),
    };
    Pitch::new(note.letter, accidental, note.octave)
}

/// Inverse of [`sounding_pitch`] over one measure: writes each pitch with an
/// explicit accidental only where the key and earlier notes would not already
/// produce it.
pub fn spell_in_measure(pitches: &[Pitch], key: &Key) -> Vec<WrittenNote> {
    let signature = key_signature(key);
    let mut state = AccidentalState::new();
    pitches
        .iter()
        .map(|p| {
            let implied = state
                .get(p.letter, p.octave)
                .unwrap_or_else(|| signature.accidental(p.letter));
            if implied == p.accidental {
                WrittenNote::new(p.letter, None, p.octave)
            } else {
                state.set(p.letter, p.octave, p.accidental);
                WrittenNote::new(p.letter, Some(p.accidental), p.octave)
            }
        })
        .collect()
}

/// An event with its sounding pitches resolved.
#[derive(Clone, Debug)]
pub struct SoundingEvent<'a> {
    pub measure: usize,
    pub index: usize,
    pub event: &'a Event,
    pub pitches: Vec<Pitch>,
}

/// Resolves every event of a tune, resetting accidentals at each bar line.
pub fn sounding_events(tune: &Tune) -> Vec<SoundingEvent<'_>> {
    let key = tune.header.key;
    let mut out = Vec::new();
    for (mi, measure) in tune.measures.iter().enumerate() {
        let mut state = AccidentalState::new();
        for (ei, event) in measure.events.iter().enumerate() {
            let pitches = event
                .notes
                .iter()
                .map(|n| sounding_pitch(n, &key, &mut state))
                .collect();
            out.push(SoundingEvent {
                measure: mi,
                index: ei,
                event,
                pitches,
            });
        }
    }
    out
}
