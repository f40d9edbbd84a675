use std::cmp::Reverse;
use std::collections::BTreeSet;

use super::{key_signature, sounding_events, Pitch, PitchClass, TheoryError};
use crate::abc::{Key, Mode, Tune};

/// Evidence gathered from a melody for ranking candidate keys.
#[derive(Clone, Debug, Default)]
pub struct KeyEvidence {
    /// Every (letter, accidental) that sounds in the tune, naturals included.
    pub used: BTreeSet<PitchClass>,
    pub first: Option<PitchClass>,
    pub last: Option<PitchClass>,
    pub pitches: Vec<Pitch>,
}

impl KeyEvidence {
    pub fn from_tune(tune: &Tune) -> KeyEvidence {
        let pitches: Vec<Pitch> = sounding_events(tune).into_iter().flat_map(|e| e.pitches).collect();
        KeyEvidence::from_pitches(pitches)
    }

    pub fn from_pitches(pitches: Vec<Pitch>) -> KeyEvidence {
        KeyEvidence {
            used: pitches.iter().map(|p| p.class()).collect(),
            first: pitches.first().map(|p| p.class()),
            last: pitches.last().map(|p| p.class()),
            pitches,
        }
    }

    /// No sounding letter contradicts the key's signature.
    pub fn consistent_with(&self, key: &Key) -> bool {
        let sig = key_signature(key);
        self.used.iter().all(|c| sig.accidental(c.letter) == c.accidental)
    }

    /// Consistent, and every altered letter of the signature actually sounds.
    pub fn exact_for(&self, key: &Key) -> bool {
        self.consistent_with(key)
            && key_signature(key)
                .altered()
                .into_iter()
                .all(|(l, a)| self.used.contains(&PitchClass::new(l, a)))
    }

    fn score(&self, key: &Key) -> impl Ord {
        let tonic = PitchClass::new(key.tonic(), key.tonic_accidental());
        let count = self.pitches.iter().filter(|p| p.class() == tonic).count();
        (
            Reverse(self.exact_for(key)),
            Reverse(self.last == Some(tonic)),
            Reverse(self.first == Some(tonic)),
            Reverse(count),
            key.fifths().abs(),
            key.mode() == Mode::Minor,
            key.fifths(),
        )
    }
}

/// Keys consistent with the tune's accidentals, best first.
///
/// Ranking: exact signature match, then the tonic as final note, then as first
/// note, then tonic frequency; remaining ties go to fewer accidentals, major
/// before minor, flats before sharps.
pub fn infer_keys(tune: &Tune) -> Result<Vec<Key>, TheoryError> {
    rank_keys(&KeyEvidence::from_tune(tune))
}

pub fn rank_keys(evidence: &KeyEvidence) -> Result<Vec<Key>, TheoryError> {
    let mut keys: Vec<Key> = Key::all().into_iter().filter(|k| evidence.consistent_with(k)).collect();
    if keys.is_empty() {
        return Err(TheoryError::NoCandidates);
    }
    keys.sort_by_cached_key(|k| evidence.score(k));
    Ok(keys)
}
