//! Fixture tables shared by the integration tests and the acceptance target.
#![allow(dead_code)]

pub mod oracle;
pub mod worked;

use sheetqa::qgen::Label;

/// Response text and the label the extraction rules should yield.
pub const EXTRACTION: &[(&str, Option<Label>)] = &[
    ("Thinking it over... \\boxed{C}", Some(Label::C)),
    ("\\boxed{A} hmm, actually \\boxed{B}", Some(Label::B)),
    ("The answer is C", None),
    ("", None),
    ("\\boxed{c}", Some(Label::C)),
    ("\\boxed{(A)}", Some(Label::A)),
    ("\\boxed{A.}", Some(Label::A)),
    ("\\boxed{ D }", Some(Label::D)),
    ("\\boxed{ (d). }", Some(Label::D)),
    ("<think>two beats</think> \\boxed{B}.", Some(Label::B)),
    ("$\\boxed{C}$", Some(Label::C)),
    ("\\boxed{{A}}", Some(Label::A)),
    ("\\boxed{'C'}", Some(Label::C)),
    ("\\boxed{**a**}", Some(Label::A)),
    ("\\boxed{B}\nthen again \\boxed{b}", Some(Label::B)),
    ("\\boxed{E}", None),
    ("\\boxed{}", None),
    ("\\boxed{AB}", None),
    ("\\boxed{Option A}", None),
    ("\\boxed{A", None),
    ("boxed{A}", None),
    ("\\boxed{A} then \\boxed{Z}", None),
    ("\\boxed{1}", None),
    ("\\boxed{\\text{B}}", None),
];

/// One continuation for the rhythmic-consistency suite.
pub struct RcCase {
    pub text: String,
    pub meter: &'static str,
    pub unit: &'static str,
    /// Per-measure sums in units of `unit`, as written by hand or by
    /// construction. Empty when the syntax stage should reject the text.
    pub sums: Vec<u32>,
    pub capacity: u32,
    pub label: u8,
}

fn case(text: &str, meter: &'static str, unit: &'static str, sums: &[u32], capacity: u32, label: u8) -> RcCase {
    RcCase {
        text: text.to_string(),
        meter,
        unit,
        sums: sums.to_vec(),
        capacity,
        label,
    }
}

/// A measure of `units` whole units, built from a rotating set of note
/// lengths. Half units are never needed, so the sum is the plain total.
fn measure(units: u32, seed: usize) -> String {
    const LETTERS: [&str; 7] = ["C", "D", "E", "F", "G", "A", "B"];
    const STEPS: [u32; 4] = [2, 1, 3, 2];
    let mut left = units;
    let mut out = Vec::new();
    let mut i = seed;
    while left > 0 {
        let len = STEPS[i % 4].min(left);
        let letter = LETTERS[i % 7];
        out.push(if len == 1 {
            letter.to_string()
        } else {
            format!("{letter}{len}")
        });
        left -= len;
        i += 1;
    }
    out.join(" ")
}

fn constructed(sums: &[u32], seed: usize) -> String {
    let body: Vec<String> = sums.iter().enumerate().map(|(i, &s)| measure(s, seed + i)).collect();
    format!("| {} |", body.join(" | "))
}

/// 50 continuations with known sums and labels.
pub fn rc_suite() -> Vec<RcCase> {
    let mut v = vec![
        case(
            "| G2 B2 d2 | c2 A2 F2 | G2 B2 d2 | G6 |",
            "3/4",
            "1/8",
            &[6, 6, 6, 6],
            6,
            1,
        ),
        case(
            "| G2 B2 d2 | c2 A2 F | G2 B2 d2 | G6 |",
            "3/4",
            "1/8",
            &[6, 5, 6, 6],
            6,
            0,
        ),
        case("| G2 Bb d2 | c2 A2 F2 | G2 B2 d2 | G6 |", "3/4", "1/8", &[], 6, 0),
        case("| G2 B2 d2 | C#2 A2 F2 | G2 B2 d2 | G6 |", "3/4", "1/8", &[], 6, 0),
        case("| G2 B♭2 d2 | c2 A2 F2 | G2 B2 d2 | G6 |", "3/4", "1/8", &[], 6, 0),
        case("| G2 B2 d2 | c2 A2 F2 | G2 B2 d2 | Eb6 |", "3/4", "1/8", &[], 6, 0),
        case(
            "| ^F2 _B2 =d2 | c2 A2 ^F2 | G2 B2 d2 | G6 |",
            "3/4",
            "1/8",
            &[6, 6, 6, 6],
            6,
            1,
        ),
        case(
            "| bb a2 g2 | c2 A2 F2 | G2 B2 d2 | G6 |",
            "3/4",
            "1/8",
            &[6, 6, 6, 6],
            6,
            1,
        ),
        case(
            "| (3ABc B2 | A2 G2 | (3GAB A2 | G4 |",
            "2/4",
            "1/8",
            &[4, 4, 4, 4],
            4,
            1,
        ),
        case("| (3ABc B | A2 G2 | (3GAB A2 | G4 |", "2/4", "1/8", &[3, 4, 4, 4], 4, 0),
        case(
            "| [CEG]2 [DFA]2 | [EGB]4 | z4 | [CEG]4 |",
            "2/4",
            "1/8",
            &[4, 4, 4, 4],
            4,
            1,
        ),
        case("| z6 | z2 G2 A2 | B3 A G2 | G6 |", "3/4", "1/8", &[6, 6, 6, 6], 6, 1),
        case(
            "K:D\n| d2 f2 a2 | g2 e2 c2 | d2 f2 a2 | d6 |",
            "3/4",
            "1/8",
            &[6, 6, 6, 6],
            6,
            1,
        ),
        case(
            "Here is my continuation: \\boxed{| G2 B2 d2 | c2 A2 F2 | G2 B2 d2 | G6 |}",
            "3/4",
            "1/8",
            &[6, 6, 6, 6],
            6,
            1,
        ),
        case("| G2 B2 d2 | 1 2 3 | G2 B2 d2 | G6 |", "3/4", "1/8", &[], 6, 0),
        case("| G2 B2 d2 | c2 A2 F2 | G2 x2 d2 | G6 |", "3/4", "1/8", &[], 6, 0),
        case("| G2 B2 d2 | c2 A2 F2 | G6 |", "3/4", "1/8", &[6, 6, 6], 6, 0),
        case(
            "| G2 B2 d2 | c2 A2 F2 | G2 B2 d2 | G6 | G6 |",
            "3/4",
            "1/8",
            &[6, 6, 6, 6, 6],
            6,
            0,
        ),
        case("| d2 | c2 A2 F2 | G2 B2 d2 | G6 |", "3/4", "1/8", &[2, 6, 6, 6], 6, 0),
        case(
            "| G2 B2 d2 | c2 A2 F2 | G2 B2 d2 | G4 |",
            "3/4",
            "1/8",
            &[6, 6, 6, 4],
            6,
            0,
        ),
        case(
            "| c/d/e/f/ g2 | a2 g2 | f/e/d/c/ B2 | c4 |",
            "2/4",
            "1/8",
            &[4, 4, 4, 4],
            4,
            1,
        ),
        case(
            "| C D E F | G A B c | c B A G | F E D C |",
            "C",
            "1/4",
            &[4, 4, 4, 4],
            4,
            1,
        ),
        case(
            "| C D E F | G A B c | c B A G | F E D C2 |",
            "C",
            "1/4",
            &[4, 4, 4, 5],
            4,
            0,
        ),
        case(
            "| A3 B c2 | d3 c B2 | A2 G2 F2 | E6 |",
            "6/8",
            "1/8",
            &[6, 6, 6, 6],
            6,
            1,
        ),
        case(
            "| A3 B c2 | d3 c B2 | A2 G2 F2 | E6 |",
            "3/8",
            "1/8",
            &[6, 6, 6, 6],
            3,
            0,
        ),
    ];
    let meters: [(&str, &str, u32); 6] = [
        ("3/4", "1/8", 6),
        ("4/4", "1/8", 8),
        ("6/8", "1/8", 6),
        ("2/4", "1/16", 8),
        ("C", "1/4", 4),
        ("9/8", "1/8", 9),
    ];
    let mut i = 0;
    while v.len() < 50 {
        let (meter, unit, cap) = meters[i % meters.len()];
        let sums: Vec<u32> = match i % 3 {
            0 => vec![cap; 4],
            1 => {
                let mut s = vec![cap; 4];
                s[i % 4] = if i % 2 == 0 { cap + 1 } else { cap - 1 };
                s
            }
            _ => vec![cap; 3 + 2 * (i % 2)],
        };
        let label = (sums.len() == 4 && sums.iter().all(|&s| s == cap)) as u8;
        v.push(RcCase {
            text: constructed(&sums, i),
            meter,
            unit,
            sums,
            capacity: cap,
            label,
        });
        i += 1;
    }
    v
}
