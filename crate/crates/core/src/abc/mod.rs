//! A strict subset of ABC notation: parsing into a score model and canonical
//! serialization.
//!
//! The accepted subset covers headers `X T L Q M K`, notes with `^ ^^ _ __ =`
//! accidentals and `'`/`,` octave marks, integer and fractional length
//! suffixes, rests `z`/`Z`, chords `[...]`, ties, plain bar lines and `(3`
//! triplets. Decorations, annotations, grace notes, slurs and lyrics are
//! dropped. Anything else (broken rhythm, repeats, voices, inline fields,
//! other tuplets) is rejected so that every accepted tune can be analysed
//! exactly.

mod duration;
mod header;
mod parse;
mod serialize;

pub use duration::{Duration, ParseDurationError};
pub use header::{Header, Key, KeyError, Letter, Meter, Mode, ParseMeterError};
pub use parse::parse_tune;
pub use serialize::{serialize, serialize_body, serialize_event, serialize_header, serialize_note};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AbcError {
    #[error("unsupported token {token:?} at line {line}, column {column}")]
    UnsupportedToken { line: usize, column: usize, token: String },
    #[error("malformed header at line {line}: {text:?}")]
    MalformedHeader { line: usize, text: String },
    #[error("tune body contains no notes or rests")]
    EmptyBody,
    #[error("need at least two measures, found {0}")]
    TooShort(usize),
}

/// A note as written: letter, optional explicit accidental, octave.
///
/// `octave` is 0 for the uppercase register (`C`..`B`), 1 for lowercase
/// (`c`..`b`), and shifted by each `'` (up) or `,` (down).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WrittenNote {
    pub letter: Letter,
    /// `None` means the accidental is inherited from the measure or key.
    pub accidental: Option<i8>,
    pub octave: i8,
}

impl WrittenNote {
    pub fn new(letter: Letter, accidental: Option<i8>, octave: i8) -> WrittenNote {
        WrittenNote {
            letter,
            accidental,
            octave,
        }
    }

    /// Diatonic position counted in letter steps from the uppercase-register C.
    pub fn staff_position(&self) -> i32 {
        self.letter.index() + 7 * self.octave as i32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    Note,
    Rest,
    Chord,
}

/// One timed element of a measure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    pub kind: EventKind,
    /// One note for `Note`, two or more distinct notes for `Chord`, empty for `Rest`.
    pub notes: Vec<WrittenNote>,
    /// In multiples of the unit note length.
    pub duration: Duration,
    pub tie: bool,
}

impl Event {
    pub fn note(note: WrittenNote, duration: Duration) -> Event {
        Event {
            kind: EventKind::Note,
            notes: vec![note],
            duration,
            tie: false,
        }
    }

    pub fn rest(duration: Duration) -> Event {
        Event {
            kind: EventKind::Rest,
            notes: Vec::new(),
            duration,
            tie: false,
        }
    }

    pub fn chord(notes: Vec<WrittenNote>, duration: Duration) -> Event {
        Event {
            kind: EventKind::Chord,
            notes,
            duration,
            tie: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Measure {
    pub events: Vec<Event>,
}

impl Measure {
    /// Sum of event durations in unit-note-length counts.
    pub fn duration(&self) -> Duration {
        self.events.iter().map(|e| e.duration).sum()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tune {
    pub header: Header,
    pub measures: Vec<Measure>,
    pub raw_source: String,
}

/// Structural equality ignores `raw_source`.
impl PartialEq for Tune {
    fn eq(&self, other: &Tune) -> bool {
        self.header == other.header && self.measures == other.measures
    }
}

impl Eq for Tune {}

impl Tune {
    pub fn events(&self) -> impl Iterator<Item = &Event> + '_ {
        self.measures.iter().flat_map(|m| m.events.iter())
    }
}

/// A tune with its bar lines removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unbarred {
    pub header: Header,
    pub events: Vec<Event>,
}

impl Unbarred {
    /// Events separated by single spaces, no bar lines.
    pub fn body(&self) -> String {
        self.events.iter().map(serialize_event).collect::<Vec<_>>().join(" ")
    }

    /// Splits the sequence into measures of the given sizes (in events).
    pub fn bar(&self, sizes: &[usize]) -> Option<Vec<Measure>> {
        if sizes.iter().sum::<usize>() != self.events.len() || sizes.contains(&0) {
            return None;
        }
        let mut out = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for &n in sizes {
            out.push(Measure {
                events: self.events[start..start + n].to_vec(),
            });
            start += n;
        }
        Some(out)
    }
}

/// Concatenates all events, discarding bar boundaries.
pub fn strip_bars(tune: &Tune) -> Result<Unbarred, AbcError> {
    if tune.measures.len() < 2 {
        return Err(AbcError::TooShort(tune.measures.len()));
    }
    Ok(Unbarred {
        header: tune.header.clone(),
        events: tune.events().cloned().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_bars_concatenates() {
        let tune = parse_tune("L:1/8\nM:3/4\nK:F\n| f4 F2 | g2 gg gg |").unwrap();
        let flat = strip_bars(&tune).unwrap();
        assert_eq!(flat.events.len(), 7);
        assert_eq!(flat.body(), "f4 F2 g2 g g g g");
        assert_eq!(flat.header, tune.header);
    }

    #[test]
    fn strip_bars_single_event_measures() {
        let tune = parse_tune("L:1/4\nM:1/4\nK:C\n|C|D|E|F|G|").unwrap();
        assert_eq!(strip_bars(&tune).unwrap().events.len(), 5);
    }

    #[test]
    fn strip_bars_rejects_one_measure() {
        let tune = parse_tune("L:1/4\nK:C\nC D E F").unwrap();
        assert_eq!(strip_bars(&tune), Err(AbcError::TooShort(1)));
    }

    #[test]
    fn rebar_reproduces_measures() {
        let tune = parse_tune("L:1/8\nM:3/4\nK:F\n| f4 F2 | g2 gg gg | g4 G2 | a2 ba gf |").unwrap();
        let flat = strip_bars(&tune).unwrap();
        let sizes: Vec<usize> = tune.measures.iter().map(|m| m.events.len()).collect();
        assert_eq!(flat.bar(&sizes).unwrap(), tune.measures);
        assert!(flat.bar(&[1, 2]).is_none());
    }
}
