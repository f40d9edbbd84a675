//! Seeded stand-in corpus.
//!
//! The real source corpus is not redistributable, so tests and demos run on
//! tonal melodies generated here. They are ordinary ABC files: headers, full
//! measures (optionally a pickup), mostly diatonic notes ending on the tonic,
//! and the odd rest, chord or chromatic passing note.

use std::fs;
use std::io;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::abc::{serialize_event, Duration, Event, Key, Mode};
use crate::qgen::record_seed;
use crate::theory::{scale_pitches, spell_in_measure, Pitch, PitchClass, ScaleDirection, ScaleMode, ScaleSpec};

/// (beats, beat unit) pairs used for synthetic tunes, all with L:1/8.
const METERS: [(u32, u32); 8] = [(2, 4), (3, 4), (4, 4), (2, 2), (3, 8), (6, 8), (9, 8), (12, 8)];

/// Knobs for [`synth_tune`].
#[derive(Clone, Copy, Debug)]
pub struct SynthOptions {
    pub min_measures: usize,
    pub max_measures: usize,
    /// Share of tunes written without an M: line.
    pub no_meter: f64,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions {
            min_measures: 8,
            max_measures: 16,
            no_meter: 0.03,
        }
    }
}

struct Melody {
    scale: Vec<Pitch>,
    degree: i32,
}

impl Melody {
    fn pitch(&self, degree: i32) -> Pitch {
        let base = self.scale[degree.rem_euclid(7) as usize];
        Pitch::new(base.letter, base.accidental, base.octave + degree.div_euclid(7) as i8)
    }

    /// Mostly steps, some leaps, pulled back towards the middle of the range.
    fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Pitch {
        let moves = [-2, -1, -1, 0, 1, 1, 2, 3, -3, 4, -4];
        let mut next = self.degree + moves[rng.gen_range(0..moves.len())];
        if !(-3..=11).contains(&next) {
            next = self.degree - (next - self.degree);
        }
        self.degree = next.clamp(-3, 11);
        self.pitch(self.degree)
    }
}

/// Splits `units` eighths into note lengths, favouring short values.
fn rhythm<R: Rng + ?Sized>(units: u32, rng: &mut R) -> Vec<Duration> {
    let mut out = Vec::new();
    let mut left = units;
    while left > 0 {
        let choices: &[u32] = match left {
            1 => &[1],
            2 => &[1, 2],
            3 => &[1, 2, 3],
            _ => &[1, 1, 2, 2, 3, 4],
        };
        let n = choices[rng.gen_range(0..choices.len())];
        if n == 1 && rng.gen_bool(0.1) {
            // Two sixteenths.
            let half = Duration::new(1, 2).expect("valid");
            out.push(half);
            out.push(half);
        } else {
            out.push(Duration::from_integer(n as u64));
        }
        left -= n;
    }
    out
}

enum Slot {
    Note(Pitch),
    Chord(Vec<Pitch>),
    Rest,
}

fn write_measure(slots: &[(Slot, Duration)], key: &Key) -> String {
    let pitches: Vec<Pitch> = slots
        .iter()
        .flat_map(|(s, _)| match s {
            Slot::Note(p) => vec![*p],
            Slot::Chord(ps) => ps.clone(),
            Slot::Rest => vec![],
        })
        .collect();
    let mut written = spell_in_measure(&pitches, key).into_iter();
    let events: Vec<String> = slots
        .iter()
        .map(|(s, d)| {
            let e = match s {
                Slot::Note(_) => Event::note(written.next().expect("spelled"), *d),
                Slot::Chord(ps) => Event::chord(written.by_ref().take(ps.len()).collect(), *d),
                Slot::Rest => Event::rest(*d),
            };
            serialize_event(&e)
        })
        .collect();
    events.join(" ")
}

/// One synthetic tune as ABC text, numbered `number` in its X: field.
pub fn synth_tune<R: Rng + ?Sized>(number: usize, rng: &mut R, opts: &SynthOptions) -> String {
    let keys = Key::all();
    let key = keys[rng.gen_range(0..keys.len())];
    let (beats, unit) = METERS[rng.gen_range(0..METERS.len())];
    let capacity = beats * 8 / unit;
    let with_meter = !rng.gen_bool(opts.no_meter);
    let mode = match key.mode() {
        Mode::Major => ScaleMode::Major,
        Mode::Minor => ScaleMode::NaturalMinor,
    };
    let tonic = PitchClass::new(key.tonic(), key.tonic_accidental());
    let scale = scale_pitches(&ScaleSpec::new(tonic, mode, ScaleDirection::Ascending)).expect("supported key");
    // Keep the tonic near the middle of the staff.
    let start = if scale[0].letter.index() >= 4 { 0 } else { 7 };
    let mut melody = Melody { scale, degree: start };

    let count = rng.gen_range(opts.min_measures..=opts.max_measures);
    let pickup = if rng.gen_bool(0.2) {
        rng.gen_range(1..capacity.max(2))
    } else {
        0
    };
    let mut lengths: Vec<u32> = Vec::new();
    if pickup > 0 {
        lengths.push(pickup);
    }
    lengths.extend(std::iter::repeat_n(capacity, count));

    let last = lengths.len() - 1;
    let mut measures = Vec::with_capacity(lengths.len());
    for (m, &len) in lengths.iter().enumerate() {
        let durations = rhythm(len, rng);
        let n = durations.len();
        let mut slots = Vec::with_capacity(n);
        for (i, d) in durations.into_iter().enumerate() {
            let closing = m == last && i == n - 1;
            let slot = if closing {
                Slot::Note(melody.pitch(if melody.degree >= 4 { 7 } else { 0 }))
            } else if m + 3 < last && rng.gen_bool(0.03) {
                Slot::Rest
            } else if m + 3 < last && i == 0 && rng.gen_bool(0.04) {
                let root = melody.degree.clamp(0, 7);
                Slot::Chord(vec![melody.pitch(root), melody.pitch(root + 2), melody.pitch(root + 4)])
            } else {
                let mut p = melody.step(rng);
                if m + 3 < last && rng.gen_bool(0.02) {
                    p.accidental += if rng.gen_bool(0.5) { 1 } else { -1 };
                    if !(-2..=2).contains(&p.accidental) {
                        p = melody.pitch(melody.degree);
                    }
                }
                Slot::Note(p)
            };
            slots.push((slot, d));
        }
        measures.push(write_measure(&slots, &key));
    }

    let mut text = format!("X:{number}\nT:Synthetic {number}\n");
    if with_meter {
        text.push_str(&format!("M:{beats}/{unit}\n"));
    }
    text.push_str(&format!("L:1/8\nK:{key}\n| {} |\n", measures.join(" | ")));
    text
}

/// `n` tunes from `seed`. Tune `i` depends only on (seed, i).
pub fn synth_corpus(n: usize, seed: u64) -> Vec<(String, String)> {
    let opts = SynthOptions::default();
    (0..n)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(record_seed(seed, i as u64));
            (format!("tune-{:05}.abc", i + 1), synth_tune(i + 1, &mut rng, &opts))
        })
        .collect()
}

/// Writes [`synth_corpus`] into `dir`, one tune per file.
pub fn write_synth_corpus(dir: &Path, n: usize, seed: u64) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    for (name, text) in synth_corpus(n, seed) {
        fs::write(dir.join(name), text)?;
    }
    Ok(())
}
