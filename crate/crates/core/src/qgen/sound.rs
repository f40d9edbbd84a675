//! Events reduced to what they sound like, and back.
//!
//! Moving notes across bar lines changes what an unmarked note means, so any
//! template that re-bars or extracts notes works on sounding pitches and
//! respells them for the new measure layout.

use crate::abc::{
    serialize_body, serialize_event, serialize_header, Duration, Event, EventKind, Header, Key, Measure, Tune,
    WrittenNote,
};
use crate::theory::{sounding_events, spell_in_measure, AccidentalState, Pitch};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Sounded {
    pub kind: EventKind,
    pub pitches: Vec<Pitch>,
    pub duration: Duration,
    pub tie: bool,
}

/// Sounding events grouped by measure.
pub(crate) fn sounded_measures(tune: &Tune) -> Vec<Vec<Sounded>> {
    let mut out: Vec<Vec<Sounded>> = vec![Vec::new(); tune.measures.len()];
    for se in sounding_events(tune) {
        out[se.measure].push(Sounded {
            kind: se.event.kind,
            pitches: se.pitches,
            duration: se.event.duration,
            tie: se.event.tie,
        });
    }
    out
}

pub(crate) fn flatten(measures: &[Vec<Sounded>]) -> Vec<Sounded> {
    measures.iter().flatten().cloned().collect()
}

/// Writes one measure's worth of sounding events under `key`.
pub(crate) fn respell_measure(events: &[Sounded], key: &Key) -> Measure {
    let pitches: Vec<Pitch> = events.iter().flat_map(|e| e.pitches.iter().copied()).collect();
    let mut written = spell_in_measure(&pitches, key).into_iter();
    let events = events
        .iter()
        .map(|e| {
            let notes: Vec<WrittenNote> = written.by_ref().take(e.pitches.len()).collect();
            Event {
                kind: e.kind,
                notes,
                duration: e.duration,
                tie: e.tie,
            }
        })
        .collect();
    Measure { events }
}

/// Splits `events` into measures of the given sizes and respells each.
pub(crate) fn respell_barred(events: &[Sounded], sizes: &[usize], key: &Key) -> Vec<Measure> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for &n in sizes {
        out.push(respell_measure(&events[start..start + n], key));
        start += n;
    }
    out
}

/// Header for a question context: no reference number or title.
pub(crate) fn context_header(h: &Header) -> Header {
    Header {
        reference: None,
        title: None,
        ..h.clone()
    }
}

/// Header lines followed by space-separated events and no bar lines.
pub(crate) fn unbarred_text(header: &Header, with_meter: bool, measure: &Measure) -> String {
    let body: Vec<String> = measure.events.iter().map(serialize_event).collect();
    format!("{}{}", serialize_header(header, with_meter), body.join(" "))
}

pub(crate) fn barred_text(header: &Header, with_meter: bool, measures: &[Measure]) -> String {
    format!("{}{}", serialize_header(header, with_meter), serialize_body(measures))
}

/// Writes pitches over K:C with an explicit mark on every altered note, and a
/// natural sign where an earlier note in the line altered the same letter.
pub(crate) fn spell_explicit(pitches: &[Pitch]) -> Vec<WrittenNote> {
    let mut state = AccidentalState::new();
    pitches
        .iter()
        .map(|p| {
            let mark = if p.accidental != 0 || state.get(p.letter, p.octave).is_some_and(|a| a != 0) {
                Some(p.accidental)
            } else {
                None
            };
            let note = WrittenNote::new(p.letter, mark, p.octave);
            // Keep the state in step with how a reader resolves the note.
            crate::theory::sounding_pitch(&note, &Key::C_MAJOR, &mut state);
            note
        })
        .collect()
}
