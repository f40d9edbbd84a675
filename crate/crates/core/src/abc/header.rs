use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Duration;

/// Diatonic note letter, ordered from C.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    C,
    D,
    E,
    F,
    G,
    A,
    B,
}

impl Letter {
    pub const ALL: [Letter; 7] = [
        Letter::C,
        Letter::D,
        Letter::E,
        Letter::F,
        Letter::G,
        Letter::A,
        Letter::B,
    ];

    /// Diatonic step index, C = 0 ... B = 6.
    pub fn index(self) -> i32 {
        self as i32
    }

    pub fn from_index(i: i32) -> Letter {
        Letter::ALL[i.rem_euclid(7) as usize]
    }

    /// Semitones above C of the natural letter.
    pub fn semitone(self) -> i32 {
        match self {
            Letter::C => 0,
            Letter::D => 2,
            Letter::E => 4,
            Letter::F => 5,
            Letter::G => 7,
            Letter::A => 9,
            Letter::B => 11,
        }
    }

    /// Accepts either case.
    pub fn from_char(c: char) -> Option<Letter> {
        Some(match c.to_ascii_uppercase() {
            'C' => Letter::C,
            'D' => Letter::D,
            'E' => Letter::E,
            'F' => Letter::F,
            'G' => Letter::G,
            'A' => Letter::A,
            'B' => Letter::B,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::C => 'C',
            Letter::D => 'D',
            Letter::E => 'E',
            Letter::F => 'F',
            Letter::G => 'G',
            Letter::A => 'A',
            Letter::B => 'B',
        }
    }

    /// Position on the circle of fifths of the natural letter (F = -1, C = 0 ... B = 5).
    pub fn fifths(self) -> i32 {
        match self {
            Letter::F => -1,
            Letter::C => 0,
            Letter::G => 1,
            Letter::D => 2,
            Letter::A => 3,
            Letter::E => 4,
            Letter::B => 5,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Time signature. `beat_unit` is a power of two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Meter {
    pub beats: u32,
    pub beat_unit: u32,
}

impl Meter {
    pub fn new(beats: u32, beat_unit: u32) -> Option<Meter> {
        (beats > 0 && beat_unit.is_power_of_two()).then_some(Meter { beats, beat_unit })
    }

    /// Measure length as a fraction of a whole note.
    pub fn whole_notes(&self) -> Duration {
        Duration::new(self.beats as u64, self.beat_unit as u64).expect("beat unit is non-zero")
    }
}

impl fmt::Display for Meter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.beats, self.beat_unit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid meter {0:?}")]
pub struct ParseMeterError(pub String);

impl FromStr for Meter {
    type Err = ParseMeterError;

    /// Numeric meters plus the `C` / `C|` shorthands.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseMeterError(s.to_string());
        let s = s.trim();
        match s {
            "C" => return Ok(Meter { beats: 4, beat_unit: 4 }),
            "C|" => return Ok(Meter { beats: 2, beat_unit: 2 }),
            _ => {}
        }
        let (n, d) = s.split_once('/').ok_or_else(err)?;
        let beats: u32 = n.trim().parse().map_err(|_| err())?;
        let unit: u32 = d.trim().parse().map_err(|_| err())?;
        Meter::new(beats, unit).ok_or_else(err)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    Major,
    Minor,
}

/// A major or minor key whose signature holds at most seven sharps or flats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Key {
    tonic: Letter,
    accidental: i8,
    mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KeyError {
    #[error("key {0:?} is not a supported major/minor key")]
    Unrecognized(String),
    #[error("key {0} needs more than seven sharps or flats")]
    OutOfRange(String),
}

impl Key {
    pub fn new(tonic: Letter, accidental: i8, mode: Mode) -> Result<Key, KeyError> {
        if !(-1..=1).contains(&accidental) {
            return Err(KeyError::Unrecognized(format!("{tonic}{accidental:+}")));
        }
        let key = Key {
            tonic,
            accidental,
            mode,
        };
        if key.fifths().abs() > 7 {
            return Err(KeyError::OutOfRange(key.to_string()));
        }
        Ok(key)
    }

    pub fn major(tonic: Letter, accidental: i8) -> Result<Key, KeyError> {
        Key::new(tonic, accidental, Mode::Major)
    }

    pub fn minor(tonic: Letter, accidental: i8) -> Result<Key, KeyError> {
        Key::new(tonic, accidental, Mode::Minor)
    }

    pub const C_MAJOR: Key = Key {
        tonic: Letter::C,
        accidental: 0,
        mode: Mode::Major,
    };

    pub fn tonic(&self) -> Letter {
        self.tonic
    }

    pub fn tonic_accidental(&self) -> i8 {
        self.accidental
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Signed accidental count: positive for sharps, negative for flats.
    pub fn fifths(&self) -> i32 {
        let major = self.tonic.fifths() + 7 * self.accidental as i32;
        match self.mode {
            Mode::Major => major,
            Mode::Minor => major - 3,
        }
    }

    /// All 30 keys with at most seven sharps or flats, majors first, each
    /// ordered by signature from seven flats to seven sharps.
    pub fn all() -> Vec<Key> {
        let mut keys = Vec::with_capacity(30);
        for mode in [Mode::Major, Mode::Minor] {
            for fifths in -7..=7 {
                keys.push(Key::from_fifths(fifths, mode).expect("in range"));
            }
        }
        keys
    }

    pub fn from_fifths(fifths: i32, mode: Mode) -> Option<Key> {
        if fifths.abs() > 7 {
            return None;
        }
        let major_pos = match mode {
            Mode::Major => fifths,
            Mode::Minor => fifths + 3,
        };
        // F is the lowest natural on the circle (-1); every seven steps adds a sharp.
        let offset = major_pos + 1;
        let letter_pos = offset.rem_euclid(7) - 1;
        let accidental = offset.div_euclid(7) as i8;
        let tonic = Letter::ALL
            .into_iter()
            .find(|l| l.fifths() == letter_pos)
            .expect("every circle position has a letter");
        Some(Key {
            tonic,
            accidental,
            mode,
        })
    }

    pub fn with_mode(&self, mode: Mode) -> Result<Key, KeyError> {
        Key::new(self.tonic, self.accidental, mode)
    }
}

/// "C", "F#", "Eb", "Am", "C#m", "Ebm".
impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let acc = match self.accidental {
            1 => "#",
            -1 => "b",
            _ => "",
        };
        let mode = match self.mode {
            Mode::Major => "",
            Mode::Minor => "m",
        };
        write!(f, "{}{}{}", self.tonic, acc, mode)
    }
}

impl FromStr for Key {
    type Err = KeyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unrecognized = || KeyError::Unrecognized(s.to_string());
        let mut words = s.split_whitespace();
        let first = words.next().ok_or_else(unrecognized)?;
        let mut chars = first.chars();
        let tonic = chars
            .next()
            .filter(|c| c.is_ascii_uppercase())
            .and_then(Letter::from_char)
            .ok_or_else(unrecognized)?;
        let rest: String = chars.collect();
        let (accidental, mode_text) = if let Some(r) = rest.strip_prefix('#') {
            (1, r.to_string())
        } else if let Some(r) = rest.strip_prefix('b') {
            (-1, r.to_string())
        } else {
            (0, rest)
        };
        let mut mode_text = mode_text.to_ascii_lowercase();
        let mut trailing: Vec<&str> = words.collect();
        if mode_text.is_empty() && !trailing.is_empty() && !trailing[0].contains('=') {
            mode_text = trailing.remove(0).to_ascii_lowercase();
        }
        let mode = match mode_text.as_str() {
            "" | "maj" | "major" | "ion" | "ionian" => Mode::Major,
            "m" | "min" | "minor" | "aeo" | "aeolian" => Mode::Minor,
            _ => return Err(unrecognized()),
        };
        if trailing.iter().any(|w| *w != "clef=treble" && *w != "treble") {
            return Err(unrecognized());
        }
        Key::new(tonic, accidental, mode)
    }
}

/// Tune header fields understood by the parser.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub reference: Option<u32>,
    pub title: Option<String>,
    /// `L:` as a fraction of a whole note.
    pub unit: Duration,
    pub tempo: Option<String>,
    pub meter: Option<Meter>,
    pub key: Key,
}

impl Header {
    pub const DEFAULT_UNIT: Duration = Duration::ONE_EIGHTH;

    pub fn new(unit: Duration, meter: Option<Meter>, key: Key) -> Header {
        Header {
            reference: None,
            title: None,
            unit,
            tempo: None,
            meter,
            key,
        }
    }
}
