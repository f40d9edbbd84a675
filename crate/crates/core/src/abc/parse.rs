use super::{AbcError, Duration, Event, EventKind, Header, Key, Letter, Measure, Meter, Tune, WrittenNote};

const DECORATION_LETTERS: &str = "HIJKLMNOPQRSTUVWhijklmnopqrstuvw";
/// Information fields that carry no musical content for our purposes.
const IGNORED_FIELDS: &str = "ABCDFGHINOPRSWZrw";

/// Parses a single tune.
///
/// Header lines may appear in any order before the first music line. After
/// that, only informational fields and lyrics are tolerated.
pub fn parse_tune(text: &str) -> Result<Tune, AbcError> {
    let mut fields = HeaderFields::default();
    let mut body: Option<BodyParser> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.trim_end_matches('\r');
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if let Some((tag, value)) = field_line(trimmed) {
            match body {
                None => fields.apply(tag, value, lineno)?,
                Some(_) if IGNORED_FIELDS.contains(tag) || tag == 'T' => {}
                Some(_) => {
                    return Err(AbcError::UnsupportedToken {
                        line: lineno,
                        column: 1,
                        token: format!("{tag}:"),
                    })
                }
            }
            continue;
        }
        if body.is_none() {
            body = Some(BodyParser::new(fields.finish(lineno)?));
        }
        body.as_mut().expect("just set").feed_line(line, lineno)?;
    }

    match body {
        Some(parser) => parser.finish(text, last_line),
        None => {
            // Header-only input still has to be well-formed before we report it empty.
            fields.finish(last_line)?;
            Err(AbcError::EmptyBody)
        }
    }
}

fn field_line(line: &str) -> Option<(char, &str)> {
    let mut chars = line.chars();
    let tag = chars.next()?;
    if tag.is_ascii_alphabetic() && chars.next() == Some(':') {
        Some((tag, line[2..].trim()))
    } else {
        None
    }
}

#[derive(Default)]
struct HeaderFields {
    reference: Option<u32>,
    title: Option<String>,
    unit: Option<Duration>,
    tempo: Option<String>,
    meter: Option<Meter>,
    key: Option<Key>,
}

impl HeaderFields {
    fn apply(&mut self, tag: char, value: &str, line: usize) -> Result<(), AbcError> {
        let malformed = || AbcError::MalformedHeader {
            line,
            text: format!("{tag}:{value}"),
        };
        match tag {
            'X' => self.reference = Some(value.parse().map_err(|_| malformed())?),
            'T' => {
                if self.title.is_none() {
                    self.title = Some(value.to_string());
                }
            }
            'L' => self.unit = Some(value.parse().map_err(|_| malformed())?),
            'M' => {
                self.meter = if value.eq_ignore_ascii_case("none") {
                    None
                } else {
                    Some(value.parse().map_err(|_| malformed())?)
                }
            }
            'K' => self.key = Some(value.parse().map_err(|_| malformed())?),
            'Q' => self.tempo = Some(value.to_string()),
            t if IGNORED_FIELDS.contains(t) => {}
            _ => {
                return Err(AbcError::UnsupportedToken {
                    line,
                    column: 1,
                    token: format!("{tag}:"),
                })
            }
        }
        Ok(())
    }

    fn finish(&self, line: usize) -> Result<Header, AbcError> {
        let key = self.key.ok_or_else(|| AbcError::MalformedHeader {
            line,
            text: "missing K: field".into(),
        })?;
        Ok(Header {
            reference: self.reference,
            title: self.title.clone(),
            unit: self.unit.unwrap_or(Header::DEFAULT_UNIT),
            tempo: self.tempo.clone(),
            meter: self.meter,
            key,
        })
    }
}

struct BodyParser {
    header: Header,
    measures: Vec<Measure>,
    current: Vec<Event>,
    /// Events still to be squeezed by an open `(3`.
    triplet_left: u8,
}

struct Cursor<'a> {
    chars: &'a [char],
    pos: usize,
    line: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn error(&self, start: usize, len: usize) -> AbcError {
        let end = (start + len.max(1)).min(self.chars.len());
        AbcError::UnsupportedToken {
            line: self.line,
            column: start + 1,
            token: self.chars[start.min(end)..end].iter().collect(),
        }
    }

    fn skip_until(&mut self, close: char) -> Result<(), AbcError> {
        let start = self.pos;
        self.pos += 1;
        while let Some(c) = self.bump() {
            if c == close {
                return Ok(());
            }
        }
        Err(self.error(start, self.pos - start))
    }

    fn number(&mut self) -> Option<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    /// Optional length suffix: `n`, `/n`, `n/m`, `/`, `//`, ...
    fn length(&mut self) -> Result<Option<Duration>, AbcError> {
        let start = self.pos;
        let numer = self.number();
        if self.peek() != Some('/') {
            return match numer {
                None => Ok(None),
                Some(0) => Err(self.error(start, self.pos - start)),
                Some(n) => Ok(Some(Duration::from_integer(n))),
            };
        }
        let mut slashes = 0u32;
        while self.peek() == Some('/') {
            slashes += 1;
            self.pos += 1;
        }
        let denom = self.number();
        let denom = match (slashes, denom) {
            (1, Some(d)) => d,
            (_, None) if slashes < 8 => 1u64 << slashes,
            _ => return Err(self.error(start, self.pos - start)),
        };
        match Duration::new(numer.unwrap_or(1), denom) {
            Some(d) if !d.is_zero() => Ok(Some(d)),
            _ => Err(self.error(start, self.pos - start)),
        }
    }

    /// Accidental, letter and octave marks of one note; `None` if no note starts here.
    fn written_note(&mut self) -> Result<Option<WrittenNote>, AbcError> {
        let start = self.pos;
        let accidental = match (self.peek(), self.peek_at(1)) {
            (Some('^'), Some('^')) => Some(2),
            (Some('_'), Some('_')) => Some(-2),
            (Some('^'), _) => Some(1),
            (Some('_'), _) => Some(-1),
            (Some('='), _) => Some(0),
            _ => None,
        };
        if let Some(a) = accidental {
            self.pos += if a == 2 || a == -2 { 2 } else { 1 };
        }
        let letter_char = match self.peek() {
            Some(c) if Letter::from_char(c).is_some() => c,
            _ if accidental.is_some() => return Err(self.error(start, self.pos - start + 1)),
            _ => return Ok(None),
        };
        self.pos += 1;
        let letter = Letter::from_char(letter_char).expect("checked");
        let mut octave: i32 = if letter_char.is_ascii_lowercase() { 1 } else { 0 };
        while let Some(c) = self.peek() {
            match c {
                '\'' => octave += 1,
                ',' => octave -= 1,
                _ => break,
            }
            self.pos += 1;
        }
        if !(-4..=4).contains(&octave) {
            return Err(self.error(start, self.pos - start));
        }
        Ok(Some(WrittenNote::new(letter, accidental, octave as i8)))
    }
}

impl BodyParser {
    fn new(header: Header) -> BodyParser {
        BodyParser {
            header,
            measures: Vec::new(),
            current: Vec::new(),
            triplet_left: 0,
        }
    }

    fn feed_line(&mut self, line: &str, lineno: usize) -> Result<(), AbcError> {
        let chars: Vec<char> = line.chars().collect();
        let mut cur = Cursor {
            chars: &chars,
            pos: 0,
            line: lineno,
        };
        while let Some(c) = cur.peek() {
            let start = cur.pos;
            match c {
                c if c.is_whitespace() => cur.pos += 1,
                '%' => break,
                '\\' | '`' | ')' | '.' | '~' | 'y' => cur.pos += 1,
                '"' => cur.skip_until('"')?,
                '!' => cur.skip_until('!')?,
                '+' => cur.skip_until('+')?,
                '{' => cur.skip_until('}')?,
                '(' => {
                    if cur.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
                        if cur.peek_at(1) != Some('3')
                            || cur.peek_at(2).is_some_and(|d| d.is_ascii_digit() || d == ':')
                            || self.triplet_left > 0
                        {
                            return Err(cur.error(start, 2));
                        }
                        self.triplet_left = 3;
                        cur.pos += 2;
                    } else {
                        cur.pos += 1;
                    }
                }
                '|' => {
                    cur.pos += 1;
                    match cur.peek() {
                        Some('|') | Some(']') => cur.pos += 1,
                        Some(':') => return Err(cur.error(start, 2)),
                        Some(d) if d.is_ascii_digit() => return Err(cur.error(start, 2)),
                        _ => {}
                    }
                    self.close_measure(&cur, start)?;
                }
                '[' => match cur.peek_at(1) {
                    Some('|') => {
                        cur.pos += 2;
                        self.close_measure(&cur, start)?;
                    }
                    Some(n) if n.is_ascii_digit() => return Err(cur.error(start, 2)),
                    Some(t) if t.is_ascii_alphabetic() && cur.peek_at(2) == Some(':') => {
                        return Err(cur.error(start, 3))
                    }
                    _ => self.chord(&mut cur)?,
                },
                '-' => {
                    cur.pos += 1;
                    match self.current.last_mut() {
                        Some(ev) if ev.kind != EventKind::Rest => ev.tie = true,
                        _ => return Err(cur.error(start, 1)),
                    }
                }
                'z' | 'Z' => self.rest(&mut cur)?,
                c if DECORATION_LETTERS.contains(c) => cur.pos += 1,
                _ => match cur.written_note()? {
                    Some(note) => {
                        let length = cur.length()?.unwrap_or(Duration::ONE);
                        let event = Event::note(note, length);
                        self.push(event, &cur, start)?;
                    }
                    None => return Err(cur.error(start, 1)),
                },
            }
        }
        Ok(())
    }

    fn chord(&mut self, cur: &mut Cursor<'_>) -> Result<(), AbcError> {
        let start = cur.pos;
        cur.pos += 1;
        let mut notes: Vec<WrittenNote> = Vec::new();
        let mut inner: Option<Option<Duration>> = None;
        loop {
            match cur.peek() {
                None => return Err(cur.error(start, cur.pos - start)),
                Some(']') => {
                    cur.pos += 1;
                    break;
                }
                Some(c) if c.is_whitespace() => cur.pos += 1,
                Some(_) => {
                    let note_start = cur.pos;
                    let note = cur.written_note()?.ok_or_else(|| cur.error(note_start, 1))?;
                    let len = cur.length()?;
                    match inner {
                        None => inner = Some(len),
                        Some(prev) if prev == len => {}
                        Some(_) => return Err(cur.error(note_start, cur.pos - note_start)),
                    }
                    if notes.contains(&note) {
                        return Err(cur.error(note_start, cur.pos - note_start));
                    }
                    notes.push(note);
                }
            }
        }
        if notes.is_empty() {
            return Err(cur.error(start, cur.pos - start));
        }
        let outer = cur.length()?.unwrap_or(Duration::ONE);
        let duration = inner.flatten().unwrap_or(Duration::ONE) * outer;
        let event = if notes.len() == 1 {
            Event::note(notes[0], duration)
        } else {
            Event::chord(notes, duration)
        };
        self.push(event, cur, start)
    }

    fn rest(&mut self, cur: &mut Cursor<'_>) -> Result<(), AbcError> {
        let start = cur.pos;
        let whole_measure = cur.bump() == Some('Z');
        let length = cur.length()?;
        let duration = if whole_measure {
            match (length, self.header.meter) {
                (None, Some(m)) => m.whole_notes() / self.header.unit,
                (Some(n), Some(m)) if n == Duration::ONE => m.whole_notes() / self.header.unit,
                _ => return Err(cur.error(start, cur.pos - start)),
            }
        } else {
            length.unwrap_or(Duration::ONE)
        };
        self.push(Event::rest(duration), cur, start)
    }

    fn push(&mut self, mut event: Event, cur: &Cursor<'_>, start: usize) -> Result<(), AbcError> {
        if self.triplet_left > 0 {
            event.duration = event.duration * Duration::new(2, 3).expect("non-zero");
            self.triplet_left -= 1;
        }
        if !event.duration.has_supported_denominator() {
            return Err(cur.error(start, cur.pos - start));
        }
        self.current.push(event);
        Ok(())
    }

    fn close_measure(&mut self, cur: &Cursor<'_>, start: usize) -> Result<(), AbcError> {
        if self.triplet_left > 0 {
            return Err(cur.error(start, cur.pos - start));
        }
        if !self.current.is_empty() {
            self.measures.push(Measure {
                events: std::mem::take(&mut self.current),
            });
        }
        Ok(())
    }

    fn finish(mut self, text: &str, last_line: usize) -> Result<Tune, AbcError> {
        if self.triplet_left > 0 {
            return Err(AbcError::UnsupportedToken {
                line: last_line,
                column: 1,
                token: "(3".into(),
            });
        }
        if !self.current.is_empty() {
            self.measures.push(Measure {
                events: std::mem::take(&mut self.current),
            });
        }
        if self.measures.is_empty() {
            return Err(AbcError::EmptyBody);
        }
        Ok(Tune {
            header: self.header,
            measures: self.measures,
            raw_source: text.to_string(),
        })
    }
}
