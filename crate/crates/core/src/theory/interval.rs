use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Pitch, TheoryError};
use crate::abc::Letter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quality {
    Diminished,
    Minor,
    Perfect,
    Major,
    Augmented,
}

impl Quality {
    pub const ALL: [Quality; 5] = [
        Quality::Perfect,
        Quality::Major,
        Quality::Minor,
        Quality::Augmented,
        Quality::Diminished,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quality::Perfect => "perfect",
            Quality::Major => "major",
            Quality::Minor => "minor",
            Quality::Augmented => "augmented",
            Quality::Diminished => "diminished",
        }
    }
}

const NUMBER_NAMES: [&str; 8] = [
    "unison", "second", "third", "fourth", "fifth", "sixth", "seventh", "octave",
];

/// Semitones of the perfect or major interval for each number.
const REFERENCE_SEMITONES: [i32; 8] = [0, 2, 4, 5, 7, 9, 11, 12];

fn is_perfect_class(number: u8) -> bool {
    matches!(number, 1 | 4 | 5 | 8)
}

/// A simple interval, unison through octave.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    number: u8,
    quality: Quality,
}

impl Interval {
    pub fn new(number: u8, quality: Quality) -> Option<Interval> {
        if !(1..=8).contains(&number) {
            return None;
        }
        let ok = match quality {
            Quality::Perfect => is_perfect_class(number),
            Quality::Major | Quality::Minor => !is_perfect_class(number),
            Quality::Augmented | Quality::Diminished => true,
        };
        ok.then_some(Interval { number, quality })
    }

    pub fn number(&self) -> u8 {
        self.number
    }

    pub fn quality(&self) -> Quality {
        self.quality
    }

    /// Size in semitones. The diminished unison is -1.
    pub fn semitones(&self) -> i32 {
        let base = REFERENCE_SEMITONES[self.number as usize - 1];
        let offset = if is_perfect_class(self.number) {
            match self.quality {
                Quality::Diminished => -1,
                Quality::Augmented => 1,
                _ => 0,
            }
        } else {
            match self.quality {
                Quality::Diminished => -2,
                Quality::Minor => -1,
                Quality::Augmented => 1,
                _ => 0,
            }
        };
        base + offset
    }

    /// Every interval that `interval_between` can return: all number/quality
    /// pairs except the diminished unison, which would descend. 27 in total.
    pub fn nameable() -> Vec<Interval> {
        let mut out = Vec::new();
        for number in 1..=8 {
            for q in Quality::ALL {
                if let Some(iv) = Interval::new(number, q) {
                    if iv.semitones() >= 0 {
                        out.push(iv);
                    }
                }
            }
        }
        out
    }

    pub const PERFECT_UNISON: Interval = Interval {
        number: 1,
        quality: Quality::Perfect,
    };
}

/// "perfect octave", "minor third".
impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.quality.name(), NUMBER_NAMES[self.number as usize - 1])
    }
}

impl FromStr for Interval {
    type Err = TheoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TheoryError::NonNameable(s.to_string());
        let (q, n) = s.trim().split_once(' ').ok_or_else(bad)?;
        let quality = Quality::ALL.into_iter().find(|x| x.name() == q).ok_or_else(bad)?;
        let number = NUMBER_NAMES.iter().position(|x| *x == n.trim()).ok_or_else(bad)? as u8 + 1;
        Interval::new(number, quality).ok_or_else(bad)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// Names the interval from `low` up to `high`.
pub fn interval_between(low: &Pitch, high: &Pitch) -> Result<Interval, TheoryError> {
    let steps = high.staff_position() - low.staff_position();
    let semis = high.semitone() - low.semitone();
    if semis < 0 || !(0..=7).contains(&steps) {
        return Err(TheoryError::OutOfRange(format!("{low} to {high}")));
    }
    let number = steps as u8 + 1;
    let diff = semis - REFERENCE_SEMITONES[steps as usize];
    let quality = if is_perfect_class(number) {
        match diff {
            -1 => Quality::Diminished,
            0 => Quality::Perfect,
            1 => Quality::Augmented,
            _ => return Err(TheoryError::NonNameable(format!("{low} to {high}"))),
        }
    } else {
        match diff {
            -2 => Quality::Diminished,
            -1 => Quality::Minor,
            0 => Quality::Major,
            1 => Quality::Augmented,
            _ => return Err(TheoryError::NonNameable(format!("{low} to {high}"))),
        }
    };
    Ok(Interval { number, quality })
}

/// Moves `p` by `iv`, spelling the result so the interval is exact.
pub fn transpose(p: &Pitch, iv: Interval, direction: Direction) -> Result<Pitch, TheoryError> {
    let sign = match direction {
        Direction::Up => 1,
        Direction::Down => -1,
    };
    let pos = p.staff_position() + sign * (iv.number as i32 - 1);
    let semis = p.semitone() + sign * iv.semitones();
    let letter = Letter::from_index(pos);
    let octave = pos.div_euclid(7);
    if !(-4..=4).contains(&octave) {
        return Err(TheoryError::OutOfRange(format!("{p} {iv}")));
    }
    let accidental = semis - (12 * octave + letter.semitone());
    if accidental.abs() > 2 {
        return Err(TheoryError::Unspellable(format!("{p} {iv}")));
    }
    Ok(Pitch::new(letter, accidental as i8, octave as i8))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(l: Letter, a: i8, o: i8) -> Pitch {
        Pitch::new(l, a, o)
    }

    #[test]
    fn names() {
        assert_eq!(
            Interval::new(8, Quality::Perfect).unwrap().to_string(),
            "perfect octave"
        );
        assert_eq!(
            "minor third".parse::<Interval>().unwrap(),
            Interval::new(3, Quality::Minor).unwrap()
        );
        assert!("perfect third".parse::<Interval>().is_err());
        assert!("major ninth".parse::<Interval>().is_err());
        assert_eq!(Interval::nameable().len(), 27);
    }

    #[test]
    fn octave_b() {
        let iv = interval_between(&p(Letter::B, 0, 0), &p(Letter::B, 0, 1)).unwrap();
        assert_eq!(iv.to_string(), "perfect octave");
    }

    #[test]
    fn unison() {
        let x = p(Letter::E, -1, 0);
        assert_eq!(interval_between(&x, &x).unwrap(), Interval::PERFECT_UNISON);
    }

    #[test]
    fn g_to_b_major_third() {
        let iv = interval_between(&p(Letter::G, 0, 0), &p(Letter::B, 0, 0)).unwrap();
        assert_eq!(iv.to_string(), "major third");
    }

    #[test]
    fn errors() {
        // compound
        assert!(matches!(
            interval_between(&p(Letter::C, 0, 0), &p(Letter::D, 0, 1)),
            Err(TheoryError::OutOfRange(_))
        ));
        // descending
        assert!(matches!(
            interval_between(&p(Letter::D, 0, 0), &p(Letter::C, 0, 0)),
            Err(TheoryError::OutOfRange(_))
        ));
        // triply augmented fourth
        assert!(matches!(
            interval_between(&p(Letter::C, -1, 0), &p(Letter::F, 2, 0)),
            Err(TheoryError::NonNameable(_))
        ));
    }

    #[test]
    fn transpose_examples() {
        let maj3 = Interval::new(3, Quality::Major).unwrap();
        assert_eq!(
            transpose(&p(Letter::G, 0, 0), maj3, Direction::Up).unwrap(),
            p(Letter::B, 0, 0)
        );
        let aug5 = Interval::new(5, Quality::Augmented).unwrap();
        assert_eq!(
            transpose(&p(Letter::B, 0, 0), aug5, Direction::Up).unwrap(),
            p(Letter::F, 2, 1)
        );
        let x = p(Letter::A, 1, -1);
        assert_eq!(transpose(&x, Interval::PERFECT_UNISON, Direction::Up).unwrap(), x);
        assert!(matches!(
            transpose(&p(Letter::F, 2, 0), aug5, Direction::Up),
            Err(TheoryError::Unspellable(_))
        ));
        let p8 = Interval::new(8, Quality::Perfect).unwrap();
        assert!(matches!(
            transpose(&p(Letter::C, 0, 4), p8, Direction::Up),
            Err(TheoryError::OutOfRange(_))
        ));
    }

    /// Brute-force spelling search for B + augmented fifth: every letter and
    /// accidental in range with 8 semitones and 4 letter steps above B.
    #[test]
    fn augmented_fifth_on_b_by_search() {
        let b = p(Letter::B, 0, 0);
        let mut found = Vec::new();
        for octave in 0..=1 {
            for l in Letter::ALL {
                for a in -2..=2 {
                    let q = p(l, a, octave);
                    if q.staff_position() - b.staff_position() == 4 && q.semitone() - b.semitone() == 8 {
                        found.push(q);
                    }
                }
            }
        }
        assert_eq!(found, vec![p(Letter::F, 2, 1)]);
    }
}
