use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use serde::{Deserialize, Serialize};
use sheetqa::abc::{Duration, Meter};
use sheetqa::dataset::{
    build_set, ingest_corpus_with, read_jsonl, stats, synth::write_synth_corpus, write_jsonl, write_visual_jsonl,
    DatasetConfig, Modality,
};
use sheetqa::grader::{
    check_rhythmic_consistency, grade_batch, group_advantages, rc_score, read_responses, summarize, write_results,
    AccuracyTable,
};
use sheetqa::qgen::{Category, QARecord};
use sheetqa::render::{build_visual_set, RenderConfig};

use crate::manifest::RunManifest;
use crate::{AdvantagesArgs, CheckRhythmArgs, Command, GenArgs, GradeArgs, RenderArgs, StatsArgs, SynthArgs};

/// An error with the exit code it should produce.
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

fn data(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 3,
        error: error.into(),
    }
}

fn tool(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 4,
        error: error.into(),
    }
}

type Outcome = Result<(), Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Gen(a) => gen(a),
        Command::Render(a) => render(a),
        Command::Grade(a) => grade(a),
        Command::CheckRhythm(a) => check_rhythm(a),
        Command::Stats(a) => print_stats(a),
        Command::Advantages(a) => advantages(a),
        Command::SynthCorpus(a) => synth(a),
    }
}

fn set_jobs(jobs: usize) {
    if jobs > 0 {
        // Only fails if a pool already exists, which is harmless here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
}

fn gen_config(a: &GenArgs) -> Result<DatasetConfig, Failure> {
    let mut cfg = match &a.config {
        Some(p) => DatasetConfig::load(p).map_err(|e| data(anyhow!("{}: {e}", p.display())))?,
        None => DatasetConfig::for_split(a.split.into()),
    };
    if let Some(p) = a.preset {
        cfg = cfg.with_preset(p.into());
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(m) = a.modality {
        cfg.modality = m.into();
    }
    if !a.categories.is_empty() {
        let keep = a
            .categories
            .iter()
            .map(|c| c.parse::<Category>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(data)?;
        cfg.counts.retain(|c, _| keep.contains(c));
        for c in keep {
            cfg.counts.entry(c).or_insert(0);
        }
    }
    if let Some(n) = a.count {
        cfg.counts.values_mut().for_each(|v| *v = n);
    }
    cfg.validate().map_err(data)?;
    Ok(cfg)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    path.with_file_name(name)
}

fn gen(a: GenArgs) -> Outcome {
    let cfg = gen_config(&a)?;
    set_jobs(a.jobs);
    let index = ingest_corpus_with(&a.corpus, &cfg.gen_options()).map_err(data)?;
    log::info!(
        "corpus: {} tunes, {} rejected, {} duplicates",
        index.tunes.len(),
        index.rejections.len(),
        index.duplicates
    );
    let records = build_set(&index, &cfg).map_err(data)?;
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(data)?;
    }
    write_jsonl(&a.out, &records).map_err(data)?;

    let mut manifest = RunManifest {
        command: "gen".into(),
        config: cfg.clone(),
        seed: cfg.seed,
        corpus_hash: index.corpus_hash(),
        corpus_tunes: index.tunes.len(),
        corpus_rejections: index.rejections.len(),
        corpus_duplicates: index.duplicates,
        tool_versions: BTreeMap::new(),
        outputs: BTreeMap::new(),
    };
    manifest.add_output(&a.out).map_err(data)?;
    println!("wrote {} records to {}", records.len(), a.out.display());

    let mut outcome = Ok(());
    if cfg.modality != Modality::Textual {
        let dir = a.visual_dir.clone().unwrap_or_else(|| sibling(&a.out, ".visual"));
        let rcfg = RenderConfig {
            jobs: a.jobs,
            ..RenderConfig::from_env()
        };
        manifest.tool_versions = rcfg.tool_versions();
        outcome = render_into(&records, &dir, &rcfg, Some(&mut manifest));
    }
    manifest.write(&sibling(&a.out, ".manifest.json")).map_err(data)?;
    outcome
}

/// Renders, writes `visual.jsonl` next to the images and reports failures.
fn render_into(records: &[QARecord], dir: &Path, cfg: &RenderConfig, manifest: Option<&mut RunManifest>) -> Outcome {
    if !cfg.tools_available() {
        return Err(tool(anyhow!(
            "renderer not found ({} / {}); set SHEETQA_ABCM2PS and SHEETQA_CONVERT",
            cfg.engraver.display(),
            cfg.converter.display()
        )));
    }
    let set = build_visual_set(records, dir, cfg).map_err(tool)?;
    let jsonl = dir.join("visual.jsonl");
    write_visual_jsonl(&jsonl, &set.records).map_err(data)?;
    if let Some(m) = manifest {
        m.add_output(&jsonl).map_err(data)?;
    }
    println!(
        "rendered {} of {} records into {}",
        set.records.len(),
        records.len(),
        dir.display()
    );
    if set.manifest.failures.is_empty() {
        return Ok(());
    }
    for f in &set.manifest.failures {
        eprintln!("  {} {}: {}", f.record_id, f.image, f.error);
    }
    Err(tool(anyhow!(
        "{} records failed to render",
        set.manifest.failures.len()
    )))
}

fn render(a: RenderArgs) -> Outcome {
    let records = read_jsonl(&a.input).map_err(data)?;
    let mut cfg = RenderConfig {
        jobs: a.jobs,
        ..RenderConfig::from_env()
    };
    if let Some(d) = a.dpi {
        cfg.dpi = d;
    }
    render_into(&records, &a.out, &cfg, None)
}

/// Rhythm, Chord, Interval, Scale, Overall, as percentages.
pub fn accuracy_table(table: &AccuracyTable) -> String {
    let cell = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{:.2}", x * 100.0));
    let mut head = String::new();
    let mut row = String::new();
    for c in Category::ALL {
        head.push_str(&format!("{:>10}", c.name()));
        row.push_str(&format!("{:>10}", cell(table.accuracy(c))));
    }
    head.push_str(&format!("{:>10}", "Overall"));
    row.push_str(&format!("{:>10}", cell(table.overall())));
    format!("{head}\n{row}\n")
}

fn grade(a: GradeArgs) -> Outcome {
    set_jobs(a.jobs);
    let gold = read_jsonl(&a.gold).map_err(data)?;
    let file = File::open(&a.pred)
        .with_context(|| a.pred.display().to_string())
        .map_err(data)?;
    let responses = read_responses(BufReader::new(file)).map_err(data)?;
    let results = grade_batch(&responses, &gold).map_err(data)?;
    match &a.out {
        Some(p) => write_results(BufWriter::new(File::create(p).map_err(data)?), &results).map_err(data)?,
        None => write_results(io::stdout().lock(), &results).map_err(data)?,
    }
    let table = summarize(&results, &gold);
    // Keep stdout clean for the JSONL when it goes there.
    if a.out.is_some() {
        print!("{}", accuracy_table(&table));
    } else {
        eprint!("{}", accuracy_table(&table));
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Continuation {
    sample_id: String,
    continuation: String,
    meter: Option<String>,
    unit: Option<String>,
}

fn check_rhythm(a: CheckRhythmArgs) -> Outcome {
    let file = File::open(&a.input)
        .with_context(|| a.input.display().to_string())
        .map_err(data)?;
    let mut verdicts = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(data)?;
        if line.trim().is_empty() {
            continue;
        }
        let at = |e: String| data(anyhow!("line {}: {e}", i + 1));
        let c: Continuation = serde_json::from_str(&line).map_err(|e| at(e.to_string()))?;
        let meter = c
            .meter
            .or_else(|| a.meter.clone())
            .ok_or_else(|| at("no meter".into()))?;
        let unit = c.unit.or_else(|| a.unit.clone()).ok_or_else(|| at("no unit".into()))?;
        let meter: Meter = meter.parse().map_err(|e| at(format!("meter: {e}")))?;
        let unit: Duration = unit.parse().map_err(|e| at(format!("unit: {e}")))?;
        verdicts.push(check_rhythmic_consistency(&c.sample_id, &c.continuation, &meter, unit));
    }
    let score = rc_score(&verdicts).map_err(data)?;
    if let Some(p) = &a.out {
        let mut w = BufWriter::new(File::create(p).map_err(data)?);
        for v in &verdicts {
            serde_json::to_writer(&mut w, v).map_err(data)?;
            w.write_all(b"\n").map_err(data)?;
        }
        w.flush().map_err(data)?;
    }
    let passed = verdicts.iter().filter(|v| v.score == 1).count();
    println!("RC {:.2} ({passed}/{})", score * 100.0, verdicts.len());
    Ok(())
}

/// Counts in the layout of the reference statistics table.
pub fn stats_table(records: &[QARecord]) -> String {
    let (per_template, per_category) = stats(records);
    let mut out = format!(
        "{:<10}{:<36}{:<16}{:>7}{:>7}\n",
        "Domain", "Question Class", "Abbreviation", "Counts", "Total"
    );
    for c in [Category::Scale, Category::Rhythm, Category::Interval, Category::Chord] {
        let total = per_category.get(&c).copied().unwrap_or(0);
        for (i, t) in c.templates().into_iter().enumerate() {
            let n = per_template.get(&t).copied().unwrap_or(0);
            let (domain, total) = if i == 0 {
                (c.name().to_string(), total.to_string())
            } else {
                (String::new(), String::new())
            };
            out.push_str(&format!(
                "{domain:<10}{:<36}{:<16}{n:>7}{total:>7}\n",
                t.class_name(),
                t.abbreviation()
            ));
        }
    }
    out.push_str(&format!("{:<62}{:>7}{:>7}\n", "All", "", records.len()));
    out
}

fn print_stats(a: StatsArgs) -> Outcome {
    let records = read_jsonl(&a.input).map_err(data)?;
    print!("{}", stats_table(&records));
    Ok(())
}

#[derive(Serialize)]
struct Group<'a> {
    group: usize,
    advantages: &'a [f64],
}

fn advantages(a: AdvantagesArgs) -> Outcome {
    let mut text = String::new();
    match &a.input {
        Some(p) => File::open(p).and_then(|mut f| f.read_to_string(&mut text)),
        None => io::stdin().read_to_string(&mut text),
    }
    .map_err(data)?;
    let rewards = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| data(anyhow!("reward {s:?}: {e}"))))
        .collect::<Result<Vec<f64>, _>>()?;
    if a.group_size == 0 || rewards.len() % a.group_size != 0 {
        return Err(data(anyhow!(
            "{} rewards do not split into groups of {}",
            rewards.len(),
            a.group_size
        )));
    }
    let mut out = io::stdout().lock();
    for (i, chunk) in rewards.chunks(a.group_size).enumerate() {
        let adv = group_advantages(chunk).map_err(data)?;
        let line = serde_json::to_string(&Group {
            group: i,
            advantages: &adv,
        })
        .map_err(data)?;
        writeln!(out, "{line}").map_err(data)?;
    }
    Ok(())
}

fn synth(a: SynthArgs) -> Outcome {
    write_synth_corpus(&a.out, a.count, a.seed).map_err(data)?;
    println!("wrote {} tunes to {}", a.count, a.out.display());
    Ok(())
}
