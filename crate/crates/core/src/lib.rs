//! Verifiable sheet-music reasoning questions built from ABC notation.
//!
//! The crate is organised bottom-up:
//!
//! * [`abc`] parses and serializes a strict ABC subset with exact rational durations.
//! * [`theory`] implements pitch spelling, keys, intervals, scales, triads and meter checks.
//! * [`qgen`] turns tunes into multiple-choice questions whose answers are machine-checked.
//! * [`dataset`] ingests corpora, assembles benchmark/training sets and handles JSONL.
//! * [`grader`] extracts boxed answers, computes rewards, group advantages and rhythmic consistency.
//! * [`render`] drives an external engraver to produce the image modality.

pub mod abc;
pub mod dataset;
pub mod grader;
pub mod qgen;
pub mod render;
pub mod theory;
