use std::fmt::Write;

use super::{Event, EventKind, Header, Measure, Tune, WrittenNote};

/// Canonical ABC text: headers in `X T L Q M K` order, then one line of
/// measures written as `| e e e | e e |`.
pub fn serialize(tune: &Tune) -> String {
    let mut out = serialize_header(&tune.header, true);
    out.push_str(&serialize_body(&tune.measures));
    out
}

/// Header lines, each terminated by a newline. `with_meter = false` omits `M:`.
pub fn serialize_header(header: &Header, with_meter: bool) -> String {
    let mut out = String::new();
    if let Some(x) = header.reference {
        let _ = writeln!(out, "X:{x}");
    }
    if let Some(t) = &header.title {
        let _ = writeln!(out, "T:{t}");
    }
    let _ = writeln!(out, "L:{}", header.unit);
    if let Some(q) = &header.tempo {
        let _ = writeln!(out, "Q:{q}");
    }
    if with_meter {
        if let Some(m) = header.meter {
            let _ = writeln!(out, "M:{m}");
        }
    }
    let _ = writeln!(out, "K:{}", header.key);
    out
}

pub fn serialize_body(measures: &[Measure]) -> String {
    let mut out = String::from("|");
    for m in measures {
        for ev in &m.events {
            out.push(' ');
            out.push_str(&serialize_event(ev));
        }
        out.push_str(" |");
    }
    out
}

pub fn serialize_event(event: &Event) -> String {
    let mut out = match event.kind {
        EventKind::Rest => "z".to_string(),
        EventKind::Note => serialize_note(&event.notes[0]),
        EventKind::Chord => {
            let inner: String = event.notes.iter().map(serialize_note).collect();
            format!("[{inner}]")
        }
    };
    out.push_str(&event.duration.abc_suffix());
    if event.tie {
        out.push('-');
    }
    out
}

/// Accidental, letter and octave marks, without a length.
pub fn serialize_note(note: &WrittenNote) -> String {
    let mut out = String::new();
    match note.accidental {
        Some(2) => out.push_str("^^"),
        Some(1) => out.push('^'),
        Some(0) => out.push('='),
        Some(-1) => out.push('_'),
        Some(-2) => out.push_str("__"),
        _ => {}
    }
    let c = note.letter.as_char();
    if note.octave >= 1 {
        out.push(c.to_ascii_lowercase());
        out.extend(std::iter::repeat_n('\'', (note.octave - 1) as usize));
    } else {
        out.push(c);
        out.extend(std::iter::repeat_n(',', (-note.octave) as usize));
    }
    out
}
