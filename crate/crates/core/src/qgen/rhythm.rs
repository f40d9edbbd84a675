use rand::Rng;

use super::sound::{
    barred_text, context_header, flatten, respell_barred, respell_measure, sounded_measures, unbarred_text,
};
use super::{finish, Draft, GenOptions, Judgement, QARecord, QgenError, Template, Tier};
use crate::abc::{parse_tune, serialize_body, serialize_header, Meter, Tune};
use crate::theory::{check_measures, validate_measures};

pub(crate) const TIME_SIGNATURE_QUESTION: &str = "Select the correct time signature for the music score.";
pub(crate) const BAR_PLACEMENT_QUESTION: &str =
    "Based on the time signature, which option correctly places the bar lines for the given sequence of notes?";

/// Meters offered as time-signature distractors.
pub const METER_POOL: [(u32, u32); 12] = [
    (2, 4),
    (3, 4),
    (4, 4),
    (2, 2),
    (3, 8),
    (6, 8),
    (9, 8),
    (12, 8),
    (5, 8),
    (7, 8),
    (4, 2),
    (3, 2),
];

/// Start indices of `len` consecutive measures that are all full under the
/// tune's own meter.
fn full_windows(tune: &Tune, len: usize) -> Vec<usize> {
    let Some(meter) = tune.header.meter else {
        return Vec::new();
    };
    if len == 0 || tune.measures.len() < len {
        return Vec::new();
    }
    let report = validate_measures(tune, &meter);
    let full: Vec<bool> = report.measures.iter().map(|m| m.full).collect();
    (0..=full.len() - len)
        .filter(|&s| full[s..s + len].iter().all(|f| *f))
        .collect()
}

pub(crate) fn time_signature_window(tune: &Tune, opts: &GenOptions) -> Option<Vec<usize>> {
    let w = full_windows(tune, opts.context_measures.max(1));
    (!w.is_empty()).then_some(w)
}

fn bar_placement_len(opts: &GenOptions) -> usize {
    opts.context_measures.clamp(3, 5)
}

pub(crate) fn bar_placement_window(tune: &Tune, opts: &GenOptions) -> Option<Vec<usize>> {
    let len = bar_placement_len(opts);
    let w: Vec<usize> = full_windows(tune, len)
        .into_iter()
        .filter(|&s| {
            // Need a boundary that can move: some measure with two or more events.
            tune.measures[s..s + len].iter().any(|m| m.events.len() > 1)
        })
        .collect();
    (!w.is_empty()).then_some(w)
}

fn ineligible(template: Template, reason: &str) -> QgenError {
    QgenError::Ineligible {
        template,
        reason: reason.to_string(),
    }
}

pub(crate) fn draft_time_signature<R: Rng + ?Sized>(
    tune: &Tune,
    rng: &mut R,
    opts: &GenOptions,
) -> Result<Draft, QgenError> {
    let template = Template::TimeSignatureQuestion;
    let starts = time_signature_window(tune, opts).ok_or_else(|| ineligible(template, "no run of full measures"))?;
    let start = starts[rng.gen_range(0..starts.len())];
    let measures = &tune.measures[start..start + opts.context_measures.max(1)];
    let header = context_header(&tune.header);
    let meter = tune.header.meter.expect("window implies meter");
    Ok(Draft {
        question: TIME_SIGNATURE_QUESTION.to_string(),
        abc_context: format!("{}{}", serialize_header(&header, false), serialize_body(measures)),
        correct: meter.to_string(),
    })
}

pub(crate) fn time_signature_candidates(_draft: &Draft) -> Result<Vec<Tier>, QgenError> {
    let pool = METER_POOL.iter().map(|(b, u)| format!("{b}/{u}")).collect();
    Ok(vec![Tier::new(pool, 3)])
}

pub(crate) fn draft_bar_placement<R: Rng + ?Sized>(
    tune: &Tune,
    rng: &mut R,
    opts: &GenOptions,
) -> Result<Draft, QgenError> {
    let template = Template::BarLinePlacementQuestion;
    let starts = bar_placement_window(tune, opts).ok_or_else(|| ineligible(template, "no run of full measures"))?;
    let start = starts[rng.gen_range(0..starts.len())];
    let len = bar_placement_len(opts);
    let sounded = sounded_measures(tune);
    let window = &sounded[start..start + len];
    let events = flatten(window);
    let sizes: Vec<usize> = window.iter().map(|m| m.len()).collect();
    let header = context_header(&tune.header);
    let key = header.key;
    Ok(Draft {
        question: BAR_PLACEMENT_QUESTION.to_string(),
        abc_context: unbarred_text(&header, true, &respell_measure(&events, &key)),
        correct: barred_text(&header, true, &respell_barred(&events, &sizes, &key)),
    })
}

/// Re-barrings of the correct answer: merged neighbours, boundaries moved by
/// one event, and random splits. Which of them are actually wrong is left to
/// the judge.
pub(crate) fn bar_placement_candidates<R: Rng + ?Sized>(draft: &Draft, rng: &mut R) -> Result<Vec<Tier>, QgenError> {
    let correct = parse_tune(&draft.correct)?;
    let sizes: Vec<usize> = correct.measures.iter().map(|m| m.events.len()).collect();
    let events = flatten(&sounded_measures(&correct));
    let header = correct.header.clone();
    let render = |s: &[usize]| barred_text(&header, true, &respell_barred(&events, s, &header.key));

    let mut local = Vec::new();
    for i in 0..sizes.len().saturating_sub(1) {
        let mut merged = sizes.clone();
        let b = merged.remove(i + 1);
        merged[i] += b;
        local.push(render(&merged));
        for delta in [-1i64, 1] {
            let mut shifted = sizes.clone();
            let left = shifted[i] as i64 + delta;
            let right = shifted[i + 1] as i64 - delta;
            if left >= 1 && right >= 1 {
                shifted[i] = left as usize;
                shifted[i + 1] = right as usize;
                local.push(render(&shifted));
            }
        }
    }
    let n = events.len();
    let mut random = Vec::new();
    for _ in 0..12 {
        let parts = rng.gen_range(sizes.len().saturating_sub(1).max(1)..=(sizes.len() + 1).min(n));
        let mut cuts: Vec<usize> = rand::seq::index::sample(rng, n - 1, parts - 1)
            .into_iter()
            .map(|c| c + 1)
            .collect();
        cuts.sort_unstable();
        let mut prev = 0;
        let mut split = Vec::with_capacity(parts);
        for c in cuts.into_iter().chain(std::iter::once(n)) {
            split.push(c - prev);
            prev = c;
        }
        random.push(render(&split));
    }
    Ok(vec![Tier::new(local, 3), Tier::new(random, 3)])
}

pub(crate) fn judge_time_signature(context: &str, payload: &str) -> Result<Judgement, String> {
    let tune = parse_tune(context).map_err(|e| e.to_string())?;
    let meter: Meter = payload.parse().map_err(|_| format!("not a meter: {payload:?}"))?;
    let report = check_measures(&tune.measures, &meter, tune.header.unit);
    Ok(if report.all_full() {
        Judgement::Correct
    } else {
        Judgement::Wrong("capacity")
    })
}

pub(crate) fn judge_bar_placement(context: &str, payload: &str) -> Result<Judgement, String> {
    let ctx = parse_tune(context).map_err(|e| e.to_string())?;
    let meter = ctx.header.meter.ok_or("context has no meter")?;
    let option = parse_tune(payload).map_err(|e| e.to_string())?;
    if option.header != ctx.header {
        return Ok(Judgement::Wrong("header"));
    }
    if flatten(&sounded_measures(&option)) != flatten(&sounded_measures(&ctx)) {
        return Ok(Judgement::Wrong("events"));
    }
    let report = check_measures(&option.measures, &meter, ctx.header.unit);
    Ok(if report.all_full() {
        Judgement::Correct
    } else {
        Judgement::Wrong("capacity")
    })
}

/// Time-signature question from a tune with a meter and a run of full measures.
pub fn gen_time_signature<R: Rng + ?Sized>(tune: &Tune, rng: &mut R) -> Result<QARecord, QgenError> {
    let d = draft_time_signature(tune, rng, &GenOptions::default())?;
    finish(Template::TimeSignatureQuestion, d, rng)
}

/// Bar-placement question: the context is the unbarred run, options are barrings.
pub fn gen_bar_placement<R: Rng + ?Sized>(tune: &Tune, rng: &mut R) -> Result<QARecord, QgenError> {
    let d = draft_bar_placement(tune, rng, &GenOptions::default())?;
    finish(Template::BarLinePlacementQuestion, d, rng)
}
