//! Brute-force oracles for the theory engine. They share none of its tables.

use std::collections::BTreeSet;

use sheetqa::abc::{Key, Letter};
use sheetqa::theory::{
    identify_triad, interval_between, scale_pitches, transpose, Direction, Interval, Pitch, PitchClass, ScaleDirection,
    ScaleMode, ScaleSpec,
};

const LETTERS: &str = "CDEFGAB";
const NATURAL: [i32; 7] = [0, 2, 4, 5, 7, 9, 11];

pub fn letter(i: usize) -> Letter {
    Letter::from_char(LETTERS.as_bytes()[i] as char).unwrap()
}

fn letter_pos(l: Letter) -> usize {
    LETTERS.find(l.as_char()).unwrap()
}

fn oracle_semitone(p: &Pitch) -> i32 {
    NATURAL[letter_pos(p.letter)] + p.accidental as i32 + 12 * p.octave as i32
}

fn oracle_step(p: &Pitch) -> i32 {
    letter_pos(p.letter) as i32 + 7 * p.octave as i32
}

/// (name, letter steps, semitones), written out by hand.
const INTERVALS: [(&str, i32, i32); 27] = [
    ("perfect unison", 0, 0),
    ("augmented unison", 0, 1),
    ("diminished second", 1, 0),
    ("minor second", 1, 1),
    ("major second", 1, 2),
    ("augmented second", 1, 3),
    ("diminished third", 2, 2),
    ("minor third", 2, 3),
    ("major third", 2, 4),
    ("augmented third", 2, 5),
    ("diminished fourth", 3, 4),
    ("perfect fourth", 3, 5),
    ("augmented fourth", 3, 6),
    ("diminished fifth", 4, 6),
    ("perfect fifth", 4, 7),
    ("augmented fifth", 4, 8),
    ("diminished sixth", 5, 7),
    ("minor sixth", 5, 8),
    ("major sixth", 5, 9),
    ("augmented sixth", 5, 10),
    ("diminished seventh", 6, 9),
    ("minor seventh", 6, 10),
    ("major seventh", 6, 11),
    ("augmented seventh", 6, 12),
    ("diminished octave", 7, 11),
    ("perfect octave", 7, 12),
    ("augmented octave", 7, 13),
];

fn oracle_interval(low: &Pitch, high: &Pitch) -> Option<&'static str> {
    let steps = oracle_step(high) - oracle_step(low);
    let semis = oracle_semitone(high) - oracle_semitone(low);
    INTERVALS
        .iter()
        .find(|(_, s, t)| *s == steps && *t == semis)
        .map(|(n, _, _)| *n)
}

fn pitches(octaves: std::ops::RangeInclusive<i8>) -> Vec<Pitch> {
    let mut out = Vec::new();
    for o in octaves {
        for l in 0..7 {
            for a in -2..=2 {
                out.push(Pitch::new(letter(l), a, o));
            }
        }
    }
    out
}

/// Every ordered pair of pitches in two octaves, double accidentals included.
/// Returns the number of pairs checked.
pub fn check_intervals() -> Result<usize, String> {
    let ours: BTreeSet<String> = Interval::nameable().iter().map(|i| i.to_string()).collect();
    let table: BTreeSet<String> = INTERVALS.iter().map(|(n, _, _)| n.to_string()).collect();
    if ours != table {
        return Err(format!("nameable set differs: {ours:?}"));
    }
    let domain = pitches(0..=1);
    let mut checked = 0;
    for low in &domain {
        for high in &domain {
            let got = interval_between(low, high).ok().map(|iv| iv.to_string());
            if got.as_deref() != oracle_interval(low, high) {
                return Err(format!("{low} to {high}: {got:?}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Transposition by every nameable interval, both ways, against a search
/// over all pitches in range.
pub fn check_transpose() -> Result<usize, String> {
    let starts = pitches(0..=1);
    let targets = pitches(-1..=3);
    let mut checked = 0;
    for p in &starts {
        for (name, _, _) in INTERVALS {
            let iv: Interval = name.parse().map_err(|e| format!("{name}: {e}"))?;
            let up: Vec<&Pitch> = targets.iter().filter(|q| oracle_interval(p, q) == Some(name)).collect();
            let down: Vec<&Pitch> = targets.iter().filter(|q| oracle_interval(q, p) == Some(name)).collect();
            if up.len() > 1 || down.len() > 1 {
                return Err(format!("oracle ambiguous for {p} {name}"));
            }
            if transpose(p, iv, Direction::Up).ok().as_ref() != up.first().copied() {
                return Err(format!("{p} up {name}"));
            }
            if transpose(p, iv, Direction::Down).ok().as_ref() != down.first().copied() {
                return Err(format!("{p} down {name}"));
            }
            checked += 2;
        }
    }
    Ok(checked)
}

/// Key name, fifths, minor?
const KEYS: [(&str, i32, bool); 30] = [
    ("Cb", -7, false),
    ("Gb", -6, false),
    ("Db", -5, false),
    ("Ab", -4, false),
    ("Eb", -3, false),
    ("Bb", -2, false),
    ("F", -1, false),
    ("C", 0, false),
    ("G", 1, false),
    ("D", 2, false),
    ("A", 3, false),
    ("E", 4, false),
    ("B", 5, false),
    ("F#", 6, false),
    ("C#", 7, false),
    ("Abm", -7, true),
    ("Ebm", -6, true),
    ("Bbm", -5, true),
    ("Fm", -4, true),
    ("Cm", -3, true),
    ("Gm", -2, true),
    ("Dm", -1, true),
    ("Am", 0, true),
    ("Em", 1, true),
    ("Bm", 2, true),
    ("F#m", 3, true),
    ("C#m", 4, true),
    ("G#m", 5, true),
    ("D#m", 6, true),
    ("A#m", 7, true),
];

/// Scale read straight off the signature: seven letters from the tonic plus
/// the octave, each letter taking the signature's accidental.
fn oracle_scale(name: &str, fifths: i32) -> Vec<(char, i8, i8)> {
    let sharps = "FCGDAEB";
    let flats = "BEADGCF";
    let sig = |c: char| -> i8 {
        if fifths > 0 && sharps[..fifths as usize].contains(c) {
            1
        } else if fifths < 0 && flats[..(-fifths) as usize].contains(c) {
            -1
        } else {
            0
        }
    };
    let tonic = name.chars().next().unwrap();
    let start = LETTERS.find(tonic).unwrap();
    (0..8)
        .map(|i| {
            let pos = start + i;
            let c = LETTERS.as_bytes()[pos % 7] as char;
            (c, sig(c), (pos / 7) as i8)
        })
        .collect()
}

/// Both directions of all 30 keys.
pub fn check_scales() -> Result<usize, String> {
    if Key::all().len() != 30 {
        return Err(format!("{} keys supported", Key::all().len()));
    }
    let mut checked = 0;
    for (name, fifths, minor) in KEYS {
        let key: Key = name.parse().map_err(|e| format!("{name}: {e}"))?;
        if key.fifths() != fifths {
            return Err(format!("{name} has {} fifths", key.fifths()));
        }
        let mode = if minor {
            ScaleMode::NaturalMinor
        } else {
            ScaleMode::Major
        };
        let tonic = PitchClass::new(key.tonic(), key.tonic_accidental());
        let expected = oracle_scale(name, fifths);
        for direction in [ScaleDirection::Ascending, ScaleDirection::Descending] {
            let got: Vec<(char, i8, i8)> = scale_pitches(&ScaleSpec::new(tonic, mode, direction))
                .map_err(|e| format!("{name}: {e}"))?
                .iter()
                .map(|p| (p.letter.as_char(), p.accidental, p.octave))
                .collect();
            let mut want = expected.clone();
            if direction == ScaleDirection::Descending {
                want.reverse();
            }
            if got != want {
                return Err(format!("{name} {direction:?}: {got:?}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Triads by spelling: root, the letter two up at 3 or 4 semitones, the letter
/// four up at 6, 7 or 8.
fn oracle_triads() -> Vec<(String, BTreeSet<(char, i8)>)> {
    let qualities = [("", 4, 7), ("m", 3, 7), ("dim", 3, 6), ("aug", 4, 8)];
    let mut out = Vec::new();
    for (l, nat) in NATURAL.iter().enumerate() {
        for a in -2..=2i32 {
            let root_semi = nat + a;
            for (suffix, third, fifth) in qualities {
                let member = |steps: usize, size: i32| -> Option<(char, i8)> {
                    let pos = (l + steps) % 7;
                    let acc = (root_semi + size - NATURAL[pos]).rem_euclid(12);
                    let acc = if acc > 6 { acc - 12 } else { acc };
                    (-2..=2)
                        .contains(&acc)
                        .then_some((LETTERS.as_bytes()[pos] as char, acc as i8))
                };
                if let (Some(t), Some(f)) = (member(2, third), member(4, fifth)) {
                    let root = (LETTERS.as_bytes()[l] as char, a as i8);
                    let acc = match a {
                        -2 => "bb",
                        -1 => "b",
                        0 => "",
                        1 => "#",
                        _ => "##",
                    };
                    let name = format!("{}{acc}{suffix}", root.0);
                    out.push((name, [root, t, f].into_iter().collect()));
                }
            }
        }
    }
    out
}

/// All 3-element sets of the 35 spelled pitch classes, two voicings each.
/// Returns the number of sets checked.
pub fn check_triads() -> Result<usize, String> {
    let table = oracle_triads();
    let classes: Vec<(char, i8)> = (0..7)
        .flat_map(|l| (-2..=2).map(move |a| (LETTERS.as_bytes()[l] as char, a)))
        .collect();
    let mut found = 0;
    let mut checked = 0;
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            for k in j + 1..classes.len() {
                let set: BTreeSet<(char, i8)> = [classes[i], classes[j], classes[k]].into_iter().collect();
                let expected = table.iter().find(|(_, s)| *s == set).map(|(n, _)| n.clone());
                // Two voicings: as listed, and rotated with the first note an octave up.
                let ps = |c: (char, i8), o: i8| Pitch::new(Letter::from_char(c.0).unwrap(), c.1, o);
                for voicing in [
                    vec![ps(classes[i], 0), ps(classes[j], 0), ps(classes[k], 0)],
                    vec![ps(classes[j], 0), ps(classes[k], 0), ps(classes[i], 1)],
                ] {
                    let got = identify_triad(&voicing).ok().map(|t| t.to_string());
                    if got != expected {
                        return Err(format!("{set:?}: {got:?}, oracle {expected:?}"));
                    }
                }
                found += expected.is_some() as usize;
                checked += 1;
            }
        }
    }
    if found != table.len() {
        return Err(format!("{found} of {} oracle triads met", table.len()));
    }
    Ok(checked)
}
