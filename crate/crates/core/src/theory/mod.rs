//! Music-theory kernel: pitch resolution, key signatures, intervals, scales,
//! triads, meter capacity and key inference. Everything here is pure.

mod infer;
mod interval;
mod meter;
mod pitch;
mod scale;
mod triad;

pub use infer::{infer_keys, rank_keys, KeyEvidence};
pub use interval::{interval_between, transpose, Direction, Interval, Quality};
pub use meter::{check_measures, measure_capacity, validate_measures, MeasureCheck, MeasureReport};
pub use pitch::{
    key_signature, parse_register_name, semitone_index, sounding_events, sounding_pitch, spell_in_measure,
    AccidentalState, KeySignature, Pitch, PitchClass, SoundingEvent,
};
pub use scale::{scale_pitches, ScaleDirection, ScaleMode, ScaleSpec};
pub use triad::{complete_triad, identify_triad, Triad, TriadQuality};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TheoryError {
    #[error("unsupported key: {0}")]
    UnsupportedKey(String),
    #[error("out of supported range: {0}")]
    OutOfRange(String),
    #[error("interval has no standard name: {0}")]
    NonNameable(String),
    #[error("cannot spell within double sharps/flats: {0}")]
    Unspellable(String),
    #[error("not a triad: {0}")]
    NotATriad(String),
    #[error("given notes are not chord members: {0}")]
    NotMembers(String),
    #[error("cannot infer the missing member: {0}")]
    Ambiguous(String),
    #[error("no key is consistent with the accidentals used")]
    NoCandidates,
}
