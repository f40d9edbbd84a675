use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Pitch, PitchClass, TheoryError};
use crate::abc::{Key, Letter, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScaleMode {
    Major,
    NaturalMinor,
}

impl ScaleMode {
    fn steps(self) -> [i32; 7] {
        match self {
            ScaleMode::Major => [2, 2, 1, 2, 2, 2, 1],
            ScaleMode::NaturalMinor => [2, 1, 2, 2, 1, 2, 2],
        }
    }

    pub fn key_mode(self) -> Mode {
        match self {
            ScaleMode::Major => Mode::Major,
            ScaleMode::NaturalMinor => Mode::Minor,
        }
    }

    pub fn other(self) -> ScaleMode {
        match self {
            ScaleMode::Major => ScaleMode::NaturalMinor,
            ScaleMode::NaturalMinor => ScaleMode::Major,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScaleDirection {
    Ascending,
    Descending,
}

impl ScaleDirection {
    pub fn name(self) -> &'static str {
        match self {
            ScaleDirection::Ascending => "ascending",
            ScaleDirection::Descending => "descending",
        }
    }

    pub fn reversed(self) -> ScaleDirection {
        match self {
            ScaleDirection::Ascending => ScaleDirection::Descending,
            ScaleDirection::Descending => ScaleDirection::Ascending,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScaleSpec {
    pub tonic: PitchClass,
    pub mode: ScaleMode,
    pub direction: ScaleDirection,
}

impl ScaleSpec {
    pub fn new(tonic: PitchClass, mode: ScaleMode, direction: ScaleDirection) -> ScaleSpec {
        ScaleSpec { tonic, mode, direction }
    }

    pub fn key(&self) -> Result<Key, TheoryError> {
        Key::new(self.tonic.letter, self.tonic.accidental, self.mode.key_mode())
            .map_err(|e| TheoryError::UnsupportedKey(e.to_string()))
    }
}

/// Key-style name: "Eb", "Ebm", "F#m".
impl fmt::Display for ScaleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = match self.mode {
            ScaleMode::Major => "",
            ScaleMode::NaturalMinor => "m",
        };
        write!(f, "{}{}", self.tonic, suffix)
    }
}

/// Eight pitches from the tonic (uppercase register) to its octave, one per
/// letter; descending is the exact reverse.
pub fn scale_pitches(spec: &ScaleSpec) -> Result<Vec<Pitch>, TheoryError> {
    spec.key()?;
    let start = spec.tonic.at_octave(0);
    let mut out = Vec::with_capacity(8);
    out.push(start);
    let mut semis = start.semitone();
    for (i, step) in spec.mode.steps().iter().enumerate() {
        semis += step;
        let pos = start.staff_position() + i as i32 + 1;
        let letter = Letter::from_index(pos);
        let octave = pos.div_euclid(7);
        let acc = semis - (12 * octave + letter.semitone());
        out.push(Pitch::new(letter, acc as i8, octave as i8));
    }
    if spec.direction == ScaleDirection::Descending {
        out.reverse();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(ps: &[Pitch]) -> Vec<String> {
        ps.iter().map(|p| format!("{}{}", p.class(), p.octave)).collect()
    }

    #[test]
    fn e_flat_minor() {
        let spec = ScaleSpec::new(
            PitchClass::new(Letter::E, -1),
            ScaleMode::NaturalMinor,
            ScaleDirection::Ascending,
        );
        assert_eq!(
            names(&scale_pitches(&spec).unwrap()),
            ["Eb0", "F0", "Gb0", "Ab0", "Bb0", "Cb1", "Db1", "Eb1"]
        );
        let down = ScaleSpec {
            direction: ScaleDirection::Descending,
            ..spec
        };
        let mut up = scale_pitches(&spec).unwrap();
        up.reverse();
        assert_eq!(scale_pitches(&down).unwrap(), up);
    }

    #[test]
    fn c_major_is_plain() {
        let spec = ScaleSpec::new(
            PitchClass::new(Letter::C, 0),
            ScaleMode::Major,
            ScaleDirection::Ascending,
        );
        let ps = scale_pitches(&spec).unwrap();
        assert!(ps.iter().all(|p| p.accidental == 0));
        assert_eq!(ps[7], Pitch::new(Letter::C, 0, 1));
    }

    #[test]
    fn unsupported_tonic() {
        let spec = ScaleSpec::new(
            PitchClass::new(Letter::G, 1),
            ScaleMode::Major,
            ScaleDirection::Ascending,
        );
        assert!(matches!(scale_pitches(&spec), Err(TheoryError::UnsupportedKey(_))));
    }
}
