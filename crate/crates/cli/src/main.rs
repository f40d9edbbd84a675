//! `sheetqa`: build question sets from an ABC corpus, render them, grade
//! model answers and score continuations.
//!
//! Exit codes: 0 ok, 2 usage, 3 bad data, 4 external tool trouble.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sheetqa::dataset::{Modality, Split, WeightPreset};

#[derive(Parser, Debug)]
#[command(
    name = "sheetqa",
    version,
    about = "Verifiable sheet-music reasoning questions from ABC notation"
)]
pub struct Cli {
    /// More logging (-v info, -vv debug). RUST_LOG wins when set.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a question set from a corpus of .abc files.
    Gen(GenArgs),
    /// Render the image modality for an existing JSONL set.
    Render(RenderArgs),
    /// Grade model responses against a gold set.
    Grade(GradeArgs),
    /// Rhythmic consistency of four-measure continuations.
    CheckRhythm(CheckRhythmArgs),
    /// Per-class and per-category counts of a set.
    Stats(StatsArgs),
    /// Group-normalized advantages for consecutive reward groups.
    Advantages(AdvantagesArgs),
    /// Write a synthetic corpus of well-formed tunes.
    SynthCorpus(SynthArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SplitArg {
    Benchmark,
    Train,
}

impl From<SplitArg> for Split {
    fn from(s: SplitArg) -> Split {
        match s {
            SplitArg::Benchmark => Split::Benchmark,
            SplitArg::Train => Split::Train,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModalityArg {
    Textual,
    Visual,
    Both,
}

impl From<ModalityArg> for Modality {
    fn from(m: ModalityArg) -> Modality {
        match m {
            ModalityArg::Textual => Modality::Textual,
            ModalityArg::Visual => Modality::Visual,
            ModalityArg::Both => Modality::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PresetArg {
    Equal,
    Catalog,
}

impl From<PresetArg> for WeightPreset {
    fn from(p: PresetArg) -> WeightPreset {
        match p {
            PresetArg::Equal => WeightPreset::Equal,
            PresetArg::Catalog => WeightPreset::Catalog,
        }
    }
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// TOML config; flags below override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults used when no config file is given.
    #[arg(long, value_enum, default_value = "benchmark")]
    pub split: SplitArg,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub modality: Option<ModalityArg>,
    /// Comma-separated subset, e.g. "rhythm,chord".
    #[arg(long, value_delimiter = ',')]
    pub categories: Vec<String>,
    /// Records per category.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_enum)]
    pub preset: Option<PresetArg>,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Where images go when rendering; defaults to `<out>.visual`.
    #[arg(long)]
    pub visual_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Overrides SHEETQA_DPI.
    #[arg(long)]
    pub dpi: Option<u32>,
}

#[derive(Args, Debug)]
pub struct GradeArgs {
    /// JSONL of {"record_id", "response_text"}.
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub gold: PathBuf,
    /// Per-response results; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct CheckRhythmArgs {
    /// JSONL of {"sample_id", "continuation", "meter"?, "unit"?}.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Meter for lines that do not carry one.
    #[arg(long)]
    pub meter: Option<String>,
    /// Unit note length for lines that do not carry one.
    #[arg(long)]
    pub unit: Option<String>,
    /// Per-sample verdicts.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct AdvantagesArgs {
    /// Rewards separated by whitespace or commas; stdin when absent.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub group_size: usize,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.error);
            ExitCode::from(e.code)
        }
    }
}
