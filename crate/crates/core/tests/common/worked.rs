//! Nine worked examples, one per question class, as data.

use sheetqa::abc::parse_tune;
use sheetqa::qgen::{judge_choice, verify_record, ChoiceSet, Judgement, QARecord, Template};
use sheetqa::theory::{complete_triad, identify_triad, sounding_events, Triad};

pub struct Example {
    pub template: Template,
    pub question: &'static str,
    pub context: String,
    pub options: Vec<String>,
    /// Index of the keyed answer.
    pub answer: usize,
}

impl Example {
    /// Which options the theory engine accepts.
    pub fn verdicts(&self) -> Result<Vec<bool>, String> {
        self.options
            .iter()
            .map(|o| match judge_choice(self.template, self.question, &self.context, o) {
                Ok(Judgement::Correct) => Ok(true),
                Ok(Judgement::Wrong(_)) => Ok(false),
                Err(e) => Err(format!("{}: option {o:?} unreadable: {e}", self.template)),
            })
            .collect()
    }

    pub fn record(&self) -> QARecord {
        let mut wrong: Vec<String> = self
            .options
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != self.answer)
            .map(|(_, c)| c.clone())
            .collect();
        let set = ChoiceSet {
            correct: self.options[self.answer].clone(),
            distractors: [wrong.remove(0), wrong.remove(0), wrong.remove(0)],
        };
        QARecord::new(
            "x".into(),
            self.template,
            self.question.into(),
            self.context.clone(),
            set,
            1,
            String::new(),
        )
    }

    /// Exactly the keyed option is accepted, and the stored record verifies.
    pub fn check(&self) -> Result<(), String> {
        let v = self.verdicts()?;
        let want: Vec<bool> = (0..self.options.len()).map(|i| i == self.answer).collect();
        if v != want {
            return Err(format!("{}: accepted {v:?}", self.template));
        }
        let verdict = verify_record(&self.record());
        if !verdict.pass {
            return Err(format!("{}: {verdict}", self.template));
        }
        Ok(())
    }
}

fn with(header: &str, bodies: &[&str]) -> Vec<String> {
    bodies.iter().map(|b| format!("{header}{b}")).collect()
}

fn plain(options: &[&str]) -> Vec<String> {
    options.iter().map(|s| s.to_string()).collect()
}

/// The eight examples whose keyed answer is consistent with standard
/// spelling. Chord completion is handled by [`check_chord_completion`].
pub fn examples() -> Vec<Example> {
    let bar = "L:1/8\nQ:1/4=120\nM:3/4\nK:F\n";
    let note = "L:1/16\nM:2/4\nK:G\n";
    let scale = "L:1/4\nK:C\n";
    vec![
        Example {
            template: Template::ScaleIdentificationFromAbcQuestion,
            question: "Select the most suitable key for the following musical score.",
            context: "L:1/4\nK:C\n^g ^c d B e e ^c ^f d B ^f a a ^g A A".into(),
            options: plain(&["A#", "Ab", "Am", "A"]),
            answer: 3,
        },
        Example {
            template: Template::ScaleSelectionQuestion,
            question: "Select the correctly written Ebm key with ascending direction.",
            context: "None".into(),
            options: with(
                scale,
                &["_E F G _A _B _c _d _e", "_e _d _c _B _A _G F _E", "_E ^F _G _A _B _c _d _e", "_E F _G _A _B _c _d _e"],
            ),
            answer: 3,
        },
        Example {
            template: Template::TimeSignatureQuestion,
            question: "Select the correct time signature for the music score.",
            context: "L:1/8\nK:A\n| efga fedc | c3 d edcd | fedc c2 B2 | E3 G BGEG |".into(),
            options: plain(&["5/8", "4/2", "2/2", "7/8"]),
            answer: 2,
        },
        Example {
            template: Template::BarLinePlacementQuestion,
            question: "Based on the time signature, which option correctly places the bar lines for the given sequence of notes?",
            context: format!("{bar}f4 F2 g2 gg gg g4 G2 a2 ba gf"),
            options: with(
                bar,
                &[
                    "| f4 F2 g2 gg gg g4 | G2 a2 ba gf |",
                    "| f4 F2 | g2 gg gg | g4 G2 | a2 ba gf |",
                    "| f4 F2 g2 gg gg | g4 G2 a2 ba gf |",
                    "| f4 F2 g2 | gg gg g4 | G2 a2 ba gf |",
                ],
            ),
            answer: 1,
        },
        Example {
            template: Template::IntervalNumberQuestion,
            question: "Given two notes with their ABC scores, select the correct name of the interval between them.",
            context: "L:1/8\nQ:1/4=120\nM:2/2\nK:A\nB b2".into(),
            options: plain(&["perfect octave", "perfect unison", "major third", "major seventh"]),
            answer: 0,
        },
        Example {
            template: Template::NoteCompletionByInterval,
            question: "Select the correct note to make the following note in music score form the major third interval.",
            context: format!("{note}G"),
            options: with(note, &["G b", "G d", "G D", "G B"]),
            answer: 3,
        },
        Example {
            template: Template::ChordKeyRootIdentificationQuestion,
            question: "Identify the correct root note of the chord in the following sheet music.",
            context: "K:C#m\nL:1/4\n[BdG]".into(),
            options: plain(&["G", "d#", "G#", "d"]),
            answer: 2,
        },
        Example {
            template: Template::ChordIdentificationQuestion,
            question: "Select the correct chord name based on the following music sheet.",
            context: "K:C\nL:1/4\n[F_Ac]".into(),
            options: plain(&["Fdim", "Abm", "F", "Fm"]),
            answer: 3,
        },
    ]
}

pub const CHORD_COMP_QUESTION: &str = "Given several notes, select the correct Note to form a B augmented chord.";
pub const CHORD_HEADER: &str = "K:C\nL:1/4\n";

/// The chord-completion example pairs a B augmented question with
/// [B^f], and its keyed option [B^f^d] spells B major. Under canonical
/// spelling no printed option is correct; this checks that divergence and
/// that the canonical completion, F## over [B^d], is accepted.
pub fn check_chord_completion() -> Result<(), String> {
    let q = CHORD_COMP_QUESTION;
    let h = CHORD_HEADER;
    let given = format!("{h}[B^f]");
    let opts = with(h, &["[B^f^f]", "[B^ff]", "[B^fe]", "[B^f^d]"]);
    // A repeated note is outside the accepted subset.
    if judge_choice(Template::ChordsCompletionQuestion, q, &given, &opts[0]).is_ok() {
        return Err("[B^f^f] was judged".into());
    }
    for o in &opts[1..] {
        match judge_choice(Template::ChordsCompletionQuestion, q, &given, o) {
            Ok(Judgement::Wrong(_)) => {}
            other => return Err(format!("{o:?}: {other:?}")),
        }
    }
    let keyed = parse_tune(&opts[3]).map_err(|e| e.to_string())?;
    let pitches = sounding_events(&keyed)[0].pitches.clone();
    let name = identify_triad(&pitches).map_err(|e| e.to_string())?.to_string();
    if name != "B" {
        return Err(format!("keyed option identifies as {name}"));
    }
    let base = parse_tune(&format!("{h}[B^d]")).map_err(|e| e.to_string())?;
    let g = sounding_events(&base)[0].pitches.clone();
    let target: Triad = "Baug".parse().map_err(|e| format!("{e:?}"))?;
    let third = complete_triad([g[0], g[1]], &target).map_err(|e| e.to_string())?;
    if (third.letter.as_char(), third.accidental) != ('F', 2) {
        return Err(format!("canonical third is {third}"));
    }
    match judge_choice(
        Template::ChordsCompletionQuestion,
        q,
        &format!("{h}[B^d]"),
        &format!("{h}[B^d^^f]"),
    ) {
        Ok(Judgement::Correct) => Ok(()),
        other => Err(format!("canonical completion: {other:?}")),
    }
}

/// All nine; the count of examples reproduced.
pub fn check_all() -> Result<usize, String> {
    let mut n = 0;
    for e in examples() {
        e.check()?;
        n += 1;
    }
    check_chord_completion()?;
    Ok(n + 1)
}
