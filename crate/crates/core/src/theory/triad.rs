use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Pitch, PitchClass, TheoryError};
use crate::abc::Letter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TriadQuality {
    Major,
    Minor,
    Diminished,
    Augmented,
}

impl TriadQuality {
    pub const ALL: [TriadQuality; 4] = [
        TriadQuality::Major,
        TriadQuality::Minor,
        TriadQuality::Diminished,
        TriadQuality::Augmented,
    ];

    /// Semitones of the third and fifth above the root.
    fn sizes(self) -> (i32, i32) {
        match self {
            TriadQuality::Major => (4, 7),
            TriadQuality::Minor => (3, 7),
            TriadQuality::Diminished => (3, 6),
            TriadQuality::Augmented => (4, 8),
        }
    }

    fn from_sizes(third: i32, fifth: i32) -> Option<TriadQuality> {
        TriadQuality::ALL.into_iter().find(|q| q.sizes() == (third, fifth))
    }

    pub fn suffix(self) -> &'static str {
        match self {
            TriadQuality::Major => "",
            TriadQuality::Minor => "m",
            TriadQuality::Diminished => "dim",
            TriadQuality::Augmented => "aug",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TriadQuality::Major => "major",
            TriadQuality::Minor => "minor",
            TriadQuality::Diminished => "diminished",
            TriadQuality::Augmented => "augmented",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triad {
    pub root: PitchClass,
    pub quality: TriadQuality,
}

impl Triad {
    pub fn new(root: PitchClass, quality: TriadQuality) -> Triad {
        Triad { root, quality }
    }

    /// Root, third and fifth spelled on consecutive alternate letters.
    pub fn members(&self) -> Result<[PitchClass; 3], TheoryError> {
        let (third, fifth) = self.quality.sizes();
        let spell = |steps: i32, semis: i32| {
            let letter = Letter::from_index(self.root.letter.index() + steps);
            let target = self.root.letter.semitone() + self.root.accidental as i32 + semis;
            // Fold into -6..6 around the natural letter.
            let acc = (target - letter.semitone() + 6).rem_euclid(12) - 6;
            if acc.abs() > 2 {
                Err(TheoryError::Unspellable(format!("{self}")))
            } else {
                Ok(PitchClass::new(letter, acc as i8))
            }
        };
        Ok([self.root, spell(2, third)?, spell(4, fifth)?])
    }

    /// Set of semitone classes, for enharmonic comparison.
    pub fn chromas(&self) -> Result<[i32; 3], TheoryError> {
        let mut c = self.members()?.map(|m| m.chroma());
        c.sort_unstable();
        Ok(c)
    }

    /// "B augmented", "F# minor".
    pub fn long_name(&self) -> String {
        format!("{} {}", self.root, self.quality.name())
    }
}

/// Chord symbol: "Fm", "C", "Bbdim", "Caug".
impl fmt::Display for Triad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.root, self.quality.suffix())
    }
}

impl FromStr for Triad {
    type Err = TheoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TheoryError::NotATriad(s.to_string());
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars
            .next()
            .filter(|c| c.is_ascii_uppercase())
            .and_then(Letter::from_char)
            .ok_or_else(bad)?;
        let rest = chars.as_str();
        let (acc, rest) = ["##", "bb", "#", "b"]
            .iter()
            .zip([2i8, -2, 1, -1])
            .find_map(|(sym, a)| rest.strip_prefix(sym).map(|r| (a, r)))
            .unwrap_or((0, rest));
        let quality = match rest {
            "" => TriadQuality::Major,
            "m" => TriadQuality::Minor,
            "dim" => TriadQuality::Diminished,
            "aug" => TriadQuality::Augmented,
            _ => return Err(bad()),
        };
        // "Cbm" parses as C-flat minor, never as C + "bm".
        Ok(Triad::new(PitchClass::new(letter, acc), quality))
    }
}

fn distinct_classes(pitches: &[Pitch]) -> Vec<PitchClass> {
    let mut classes: Vec<PitchClass> = Vec::new();
    for p in pitches {
        if !classes.contains(&p.class()) {
            classes.push(p.class());
        }
    }
    classes
}

/// Names the triad formed by the pitches, in any voicing or doubling.
pub fn identify_triad(pitches: &[Pitch]) -> Result<Triad, TheoryError> {
    let classes = distinct_classes(pitches);
    let describe = || classes.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
    if classes.len() != 3 {
        return Err(TheoryError::NotATriad(describe()));
    }
    for root in &classes {
        let mut third = None;
        let mut fifth = None;
        for other in classes.iter().filter(|c| *c != root) {
            let steps = (other.letter.index() - root.letter.index()).rem_euclid(7);
            let semis = (other.chroma() - root.chroma()).rem_euclid(12);
            match steps {
                2 => third = Some(semis),
                4 => fifth = Some(semis),
                _ => {}
            }
        }
        if let (Some(t), Some(f)) = (third, fifth) {
            if let Some(q) = TriadQuality::from_sizes(t, f) {
                return Ok(Triad::new(*root, q));
            }
        }
    }
    Err(TheoryError::NotATriad(describe()))
}

/// The member of `target` missing from `given`, placed in the lowest octave
/// above the lower given note.
pub fn complete_triad(given: [Pitch; 2], target: &Triad) -> Result<Pitch, TheoryError> {
    let members = target.members()?;
    for g in &given {
        if !members.contains(&g.class()) {
            return Err(TheoryError::NotMembers(format!("{} not in {target}", g.class())));
        }
    }
    if given[0].class() == given[1].class() {
        return Err(TheoryError::Ambiguous(format!("{} given twice", given[0].class())));
    }
    let missing = members
        .into_iter()
        .find(|m| *m != given[0].class() && *m != given[1].class())
        .expect("three members, two given");
    let low = given[0].staff_position().min(given[1].staff_position());
    let octave = (low - missing.letter.index()).div_euclid(7) + 1;
    Ok(missing.at_octave(octave as i8))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(l: Letter, a: i8, o: i8) -> Pitch {
        Pitch::new(l, a, o)
    }

    fn pc(l: Letter, a: i8) -> PitchClass {
        PitchClass::new(l, a)
    }

    #[test]
    fn f_minor() {
        let t = identify_triad(&[p(Letter::F, 0, 0), p(Letter::A, -1, 0), p(Letter::C, 0, 1)]).unwrap();
        assert_eq!(t.to_string(), "Fm");
    }

    #[test]
    fn g_sharp_minor_from_inversion() {
        let t = identify_triad(&[p(Letter::B, 0, 0), p(Letter::D, 1, 1), p(Letter::G, 1, 0)]).unwrap();
        assert_eq!(t, Triad::new(pc(Letter::G, 1), TriadQuality::Minor));
    }

    #[test]
    fn augmented_rotations() {
        let c = p(Letter::C, 0, 0);
        let e = p(Letter::E, 0, 0);
        let gs = p(Letter::G, 1, 0);
        let expect = Triad::new(pc(Letter::C, 0), TriadQuality::Augmented);
        for set in [[c, e, gs], [e, gs, c], [gs, c, e]] {
            assert_eq!(identify_triad(&set).unwrap(), expect);
        }
    }

    #[test]
    fn not_triads() {
        assert!(identify_triad(&[p(Letter::C, 0, 0), p(Letter::D, 0, 0), p(Letter::E, 0, 0)]).is_err());
        assert!(identify_triad(&[p(Letter::C, 0, 0), p(Letter::E, 0, 0)]).is_err());
        assert!(identify_triad(&[
            p(Letter::C, 0, 0),
            p(Letter::E, 0, 0),
            p(Letter::G, 0, 0),
            p(Letter::B, 0, 0)
        ])
        .is_err());
        // sus4
        assert!(identify_triad(&[p(Letter::C, 0, 0), p(Letter::F, 0, 0), p(Letter::G, 0, 0)]).is_err());
    }

    #[test]
    fn completion() {
        let cmaj = Triad::new(pc(Letter::C, 0), TriadQuality::Major);
        assert_eq!(
            complete_triad([p(Letter::C, 0, 0), p(Letter::E, 0, 0)], &cmaj).unwrap(),
            p(Letter::G, 0, 0)
        );

        let baug = Triad::new(pc(Letter::B, 0), TriadQuality::Augmented);
        assert_eq!(
            complete_triad([p(Letter::B, 0, 0), p(Letter::D, 1, 1)], &baug).unwrap(),
            p(Letter::F, 2, 1)
        );

        let fmin = Triad::new(pc(Letter::F, 0), TriadQuality::Minor);
        assert_eq!(
            complete_triad([p(Letter::F, 0, 0), p(Letter::C, 0, 1)], &fmin).unwrap(),
            p(Letter::A, -1, 0)
        );
        assert_eq!(
            complete_triad([p(Letter::F, 0, 0), p(Letter::A, -1, 0)], &fmin).unwrap(),
            p(Letter::C, 0, 1)
        );

        assert!(matches!(
            complete_triad([p(Letter::B, 0, 0), p(Letter::F, 1, 1)], &baug),
            Err(TheoryError::NotMembers(_))
        ));
        assert!(matches!(
            complete_triad([p(Letter::C, 0, 0), p(Letter::C, 0, 1)], &cmaj),
            Err(TheoryError::Ambiguous(_))
        ));
    }

    #[test]
    fn symbols() {
        for s in ["Fm", "C", "Bbdim", "C#aug", "Abm", "Cbm", "F##"] {
            assert_eq!(s.parse::<Triad>().unwrap().to_string(), s);
        }
        assert!("Fmaj7".parse::<Triad>().is_err());
        assert!("fm".parse::<Triad>().is_err());
        assert_eq!(
            Triad::new(pc(Letter::B, 0), TriadQuality::Augmented).long_name(),
            "B augmented"
        );
    }

    #[test]
    fn b_augmented_members() {
        let baug = Triad::new(pc(Letter::B, 0), TriadQuality::Augmented);
        assert_eq!(
            baug.members().unwrap(),
            [pc(Letter::B, 0), pc(Letter::D, 1), pc(Letter::F, 2)]
        );
    }
}
