use serde::{Deserialize, Serialize};

use crate::abc::{Duration, Measure, Meter, Tune};

/// Measure length in unit-note-length counts: (beats / beat_unit) / unit.
pub fn measure_capacity(meter: &Meter, unit: Duration) -> Duration {
    meter.whole_notes() / unit
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureCheck {
    pub index: usize,
    pub duration: Duration,
    pub capacity: Duration,
    pub full: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub measures: Vec<MeasureCheck>,
    /// First measure shorter than capacity (pickup), only with two or more measures.
    pub anacrusis_first: bool,
    /// Last measure shorter than capacity, only with two or more measures.
    pub partial_last: bool,
}

impl MeasureReport {
    pub fn all_full(&self) -> bool {
        self.measures.iter().all(|m| m.full)
    }

    /// True when every measure is full apart from a flagged pickup or closing partial.
    pub fn interior_full(&self) -> bool {
        let last = self.measures.len().saturating_sub(1);
        self.measures
            .iter()
            .all(|m| m.full || (m.index == 0 && self.anacrusis_first) || (m.index == last && self.partial_last))
    }

    /// Indices of measures whose sum differs from capacity.
    pub fn violations(&self) -> Vec<usize> {
        self.measures.iter().filter(|m| !m.full).map(|m| m.index).collect()
    }
}

pub fn check_measures(measures: &[Measure], meter: &Meter, unit: Duration) -> MeasureReport {
    let capacity = measure_capacity(meter, unit);
    let checks: Vec<MeasureCheck> = measures
        .iter()
        .enumerate()
        .map(|(index, m)| {
            let duration = m.duration();
            MeasureCheck {
                index,
                duration,
                capacity,
                full: duration == capacity,
            }
        })
        .collect();
    let many = checks.len() > 1;
    let anacrusis_first = many && checks[0].duration < capacity;
    let partial_last = many && checks[checks.len() - 1].duration < capacity;
    MeasureReport {
        measures: checks,
        anacrusis_first,
        partial_last,
    }
}

/// Compares every measure of the tune against the capacity of `meter`.
pub fn validate_measures(tune: &Tune, meter: &Meter) -> MeasureReport {
    check_measures(&tune.measures, meter, tune.header.unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abc::parse_tune;

    fn meter(s: &str) -> Meter {
        s.parse().unwrap()
    }

    #[test]
    fn capacities() {
        let eighth = Duration::new(1, 8).unwrap();
        assert_eq!(measure_capacity(&meter("2/2"), eighth), Duration::from_integer(8));
        assert_eq!(measure_capacity(&meter("3/4"), eighth), Duration::from_integer(6));
        assert_eq!(
            measure_capacity(&meter("4/4"), Duration::new(1, 4).unwrap()),
            Duration::from_integer(4)
        );
        assert_eq!(
            measure_capacity(&meter("3/8"), Duration::new(1, 4).unwrap()),
            Duration::new(3, 2).unwrap()
        );
    }

    #[test]
    fn worked_time_signature_context() {
        let tune = parse_tune("L:1/8\nK:A\n| efga fedc | c3 d edcd | fedc c2 B2 | E3 G BGEG |").unwrap();
        assert!(validate_measures(&tune, &meter("2/2")).all_full());
        let seven = validate_measures(&tune, &meter("7/8"));
        assert_eq!(seven.violations(), vec![0, 1, 2, 3]);
        assert!(seven.measures.iter().all(|m| m.duration > m.capacity));
    }

    #[test]
    fn rest_measure_is_full() {
        let tune = parse_tune("L:1/8\nK:C\nz8").unwrap();
        assert!(validate_measures(&tune, &meter("2/2")).all_full());
    }

    #[test]
    fn pickup_and_closing_partial() {
        let tune = parse_tune("L:1/8\nM:3/4\nK:C\n| C2 | D6 | E6 | F4 |").unwrap();
        let r = validate_measures(&tune, &meter("3/4"));
        assert!(r.anacrusis_first && r.partial_last);
        assert!(!r.all_full());
        assert!(r.interior_full());
        let overfull = parse_tune("L:1/8\nM:3/4\nK:C\n| C2 | D8 | E6 |").unwrap();
        assert!(!validate_measures(&overfull, &meter("3/4")).interior_full());
    }
}
