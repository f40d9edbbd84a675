//! The theory engine against brute-force oracles that share none of its tables.

mod common;

use common::oracle::{self, letter};
use proptest::prelude::*;
use sheetqa::theory::{interval_between, transpose, Direction, Interval, Pitch};

#[test]
fn interval_between_matches_oracle_over_two_octaves() {
    assert_eq!(oracle::check_intervals(), Ok(70 * 70));
}

#[test]
fn transpose_matches_search() {
    assert_eq!(oracle::check_transpose(), Ok(70 * 27 * 2));
}

#[test]
fn scale_pitches_for_all_thirty_keys() {
    assert_eq!(oracle::check_scales(), Ok(60));
}

#[test]
fn identify_triad_over_all_three_class_sets() {
    assert_eq!(oracle::check_triads(), Ok(35 * 34 * 33 / 6));
}

fn any_pitch() -> impl Strategy<Value = Pitch> {
    (0usize..7, -2i8..=2, -3i8..=3).prop_map(|(l, a, o)| Pitch::new(letter(l), a, o))
}

proptest! {
    #[test]
    fn transpose_then_measure(p in any_pitch(), idx in 0usize..27) {
        let iv = Interval::nameable()[idx];
        if let Ok(q) = transpose(&p, iv, Direction::Up) {
            prop_assert_eq!(interval_between(&p, &q).unwrap(), iv);
            prop_assert_eq!(transpose(&q, iv, Direction::Down).unwrap(), p);
        }
    }

    #[test]
    fn interval_size_is_semitone_distance(a in any_pitch(), b in any_pitch()) {
        if let Ok(iv) = interval_between(&a, &b) {
            prop_assert_eq!(iv.semitones(), b.semitone() - a.semitone());
            prop_assert_eq!(iv.number() as i32 - 1, b.staff_position() - a.staff_position());
        }
    }
}
