//! Image modality: ABC snippets go through abcm2ps (to EPS) and ImageMagick
//! (to a trimmed PNG). Both run as subprocesses; nothing here links an
//! engraver.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abc::parse_tune;
use crate::dataset::VisualQARecord;
use crate::qgen::{Label, QARecord};

pub const DEFAULT_DPI: u32 = 150;
pub const DEFAULT_TIMEOUT_SECS: u64 = 30;
/// Image paths in records and the manifest are relative to the output dir.
pub const IMAGE_DIR: &str = "image";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Prepended to every snippet: no title space, no page margins, one system
/// per source line.
const FURNITURE_OFF: &str = "%%topspace 0\n%%titlespace 0\n%%musicspace 0\n%%composerspace 0\n%%infospace 0\n";

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("{tool} not found at {path:?}")]
    ToolMissing { tool: &'static str, path: PathBuf },
    #[error("{tool} failed: {stderr}")]
    ToolFailed { tool: &'static str, stderr: String },
    #[error("{tool} timed out after {after:?}")]
    Timeout { tool: &'static str, after: Duration },
    #[error("invalid job: {0}")]
    InvalidJob(String),
    #[error("{0}")]
    Io(#[from] io::Error),
}

/// Tool locations and limits. `from_env` reads SHEETQA_ABCM2PS,
/// SHEETQA_CONVERT, SHEETQA_DPI and SHEETQA_TIMEOUT.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderConfig {
    pub engraver: PathBuf,
    pub converter: PathBuf,
    pub dpi: u32,
    pub timeout: Duration,
    /// Worker threads; 0 means rayon's default.
    pub jobs: usize,
}

impl Default for RenderConfig {
    fn default() -> RenderConfig {
        RenderConfig {
            engraver: "abcm2ps".into(),
            converter: "convert".into(),
            dpi: DEFAULT_DPI,
            timeout: Duration::from_secs(DEFAULT_TIMEOUT_SECS),
            jobs: 0,
        }
    }
}

impl RenderConfig {
    pub fn from_env() -> RenderConfig {
        let mut cfg = RenderConfig::default();
        if let Some(p) = std::env::var_os("SHEETQA_ABCM2PS") {
            cfg.engraver = p.into();
        }
        if let Some(p) = std::env::var_os("SHEETQA_CONVERT") {
            cfg.converter = p.into();
        }
        if let Some(d) = std::env::var("SHEETQA_DPI").ok().and_then(|v| v.parse().ok()) {
            cfg.dpi = d;
        }
        if let Some(s) = std::env::var("SHEETQA_TIMEOUT").ok().and_then(|v| v.parse().ok()) {
            cfg.timeout = Duration::from_secs(s);
        }
        cfg
    }

    /// True when both binaries can be found, either as a path or on PATH.
    pub fn tools_available(&self) -> bool {
        locate(&self.engraver).is_some() && locate(&self.converter).is_some()
    }

    /// First line of each tool's version banner, for run manifests.
    pub fn tool_versions(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for (name, path, flag) in [
            ("abcm2ps", &self.engraver, "-V"),
            ("convert", &self.converter, "-version"),
        ] {
            let version = Command::new(path)
                .arg(flag)
                .stdin(Stdio::null())
                .output()
                .ok()
                .map(|o| {
                    let text = if o.stdout.is_empty() { o.stderr } else { o.stdout };
                    String::from_utf8_lossy(&text)
                        .lines()
                        .next()
                        .unwrap_or("")
                        .trim()
                        .to_string()
                })
                .unwrap_or_else(|| "unavailable".into());
            out.insert(name.to_string(), version);
        }
        out
    }
}

fn locate(tool: &Path) -> Option<PathBuf> {
    if tool.components().count() > 1 {
        return tool.is_file().then(|| tool.to_path_buf());
    }
    let paths = std::env::var_os("PATH")?;
    std::env::split_paths(&paths)
        .map(|d| d.join(tool))
        .find(|p| p.is_file())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderJob {
    pub abc_text: String,
    pub output_path: PathBuf,
    pub dpi: u32,
    pub trim: bool,
}

impl RenderJob {
    pub fn new(
        abc_text: &str,
        output_path: impl Into<PathBuf>,
        dpi: u32,
        trim: bool,
    ) -> Result<RenderJob, RenderError> {
        if !(72..=600).contains(&dpi) {
            return Err(RenderError::InvalidJob(format!("dpi {dpi} outside 72..=600")));
        }
        parse_tune(abc_text).map_err(|e| RenderError::InvalidJob(e.to_string()))?;
        Ok(RenderJob {
            abc_text: abc_text.to_string(),
            output_path: output_path.into(),
            dpi,
            trim,
        })
    }
}

fn excerpt(bytes: &[u8]) -> String {
    let text = String::from_utf8_lossy(bytes);
    let text = text.trim();
    match text.char_indices().nth(400) {
        Some((i, _)) => format!("{}...", &text[..i]),
        None => text.to_string(),
    }
}

/// Runs one tool to completion, killing it at `timeout`. stderr goes to a
/// file so a chatty tool can never block on a full pipe.
fn run(
    tool: &'static str,
    program: &Path,
    args: &[OsString],
    dir: &Path,
    timeout: Duration,
) -> Result<(), RenderError> {
    let err_path = dir.join(format!("{tool}.stderr"));
    let err_file = fs::File::create(&err_path)?;
    let mut cmd = Command::new(program);
    cmd.args(args)
        .current_dir(dir)
        .stdin(Stdio::null())
        .stdout(Stdio::null())
        .stderr(err_file);
    let mut spawned = cmd.spawn();
    // A script written moments ago by another thread can briefly be busy.
    for _ in 0..20 {
        match &spawned {
            Err(e) if e.raw_os_error() == Some(26) => {
                thread::sleep(Duration::from_millis(10));
                spawned = cmd.spawn();
            }
            _ => break,
        }
    }
    let mut child = match spawned {
        Ok(c) => c,
        Err(e) if e.kind() == io::ErrorKind::NotFound || e.kind() == io::ErrorKind::PermissionDenied => {
            return Err(RenderError::ToolMissing {
                tool,
                path: program.to_path_buf(),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let started = Instant::now();
    let status = loop {
        if let Some(s) = child.try_wait()? {
            break s;
        }
        if started.elapsed() >= timeout {
            let _ = child.kill();
            let _ = child.wait();
            return Err(RenderError::Timeout { tool, after: timeout });
        }
        thread::sleep(Duration::from_millis(5));
    };
    if !status.success() {
        let stderr = excerpt(&fs::read(&err_path).unwrap_or_default());
        return Err(RenderError::ToolFailed {
            tool,
            stderr: if stderr.is_empty() { status.to_string() } else { stderr },
        });
    }
    Ok(())
}

/// Renders one snippet to `job.output_path`, replacing any existing file.
pub fn render_snippet(job: &RenderJob, cfg: &RenderConfig) -> Result<(), RenderError> {
    let work = tempfile::tempdir()?;
    let dir = work.path();
    // abcm2ps wants a tune number; it is not printed.
    fs::write(
        dir.join("in.abc"),
        format!("{FURNITURE_OFF}X:1\n{}\n", job.abc_text.trim_end()),
    )?;

    let args: Vec<OsString> = ["-q", "-E", "-O", "out", "in.abc"].iter().map(OsString::from).collect();
    run("abcm2ps", &cfg.engraver, &args, dir, cfg.timeout)?;
    let mut eps: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "eps"))
        .collect();
    eps.sort();
    let Some(eps) = eps.into_iter().next() else {
        return Err(RenderError::ToolFailed {
            tool: "abcm2ps",
            stderr: "no EPS output".into(),
        });
    };

    let mut args: Vec<OsString> = vec!["-density".into(), job.dpi.to_string().into(), eps.into_os_string()];
    for a in ["-background", "white", "-flatten"] {
        args.push(a.into());
    }
    if job.trim {
        args.push("-trim".into());
        args.push("+repage".into());
    }
    // Drop timestamps so identical input gives identical bytes.
    for a in ["-strip", "-define", "png:exclude-chunks=date,time", "out.png"] {
        args.push(a.into());
    }
    run("convert", &cfg.converter, &args, dir, cfg.timeout)?;

    if let Some(parent) = job.output_path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::copy(dir.join("out.png"), &job.output_path)?;
    Ok(())
}

/// Relative image paths for a record: the context image (absent when the
/// context is "None") and, for score-valued options, one per choice.
pub fn image_paths(r: &QARecord) -> (Option<String>, Vec<String>) {
    let context = (r.abc_context != "None").then(|| format!("{IMAGE_DIR}/visual-{}.png", r.id));
    let choices = if r.class_name.has_score_choices() {
        Label::ALL
            .iter()
            .map(|l| format!("{IMAGE_DIR}/visual-{}-{}.png", r.id, l.as_char().to_ascii_lowercase()))
            .collect()
    } else {
        Vec::new()
    };
    (context, choices)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderFailure {
    pub record_id: String,
    pub image: String,
    pub error: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub context_image: Option<String>,
    pub choice_images: Vec<String>,
}

/// Record id to image paths, plus whatever failed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisualManifest {
    pub dpi: u32,
    pub records: BTreeMap<String, ManifestEntry>,
    pub failures: Vec<RenderFailure>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VisualSet {
    pub records: Vec<VisualQARecord>,
    pub manifest: VisualManifest,
}

/// Renders every image for every record under `out_dir`. A record with any
/// failed image is left out of the result and listed in the manifest's
/// failures; the rest of the batch carries on.
pub fn build_visual_set(records: &[QARecord], out_dir: &Path, cfg: &RenderConfig) -> Result<VisualSet, RenderError> {
    fs::create_dir_all(out_dir.join(IMAGE_DIR))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| RenderError::InvalidJob(e.to_string()))?;

    let render_one = |r: &QARecord| -> Result<VisualQARecord, RenderFailure> {
        let (context, choices) = image_paths(r);
        let mut jobs: Vec<(&str, &str)> = Vec::new();
        if let Some(c) = &context {
            jobs.push((c, &r.abc_context));
        }
        for (path, text) in choices.iter().zip(&r.choices) {
            jobs.push((path, text));
        }
        for (rel, text) in jobs {
            let fail = |e: RenderError| RenderFailure {
                record_id: r.id.clone(),
                image: rel.to_string(),
                error: e.to_string(),
            };
            let job = RenderJob::new(text, out_dir.join(rel), cfg.dpi, true).map_err(fail)?;
            render_snippet(&job, cfg).map_err(fail)?;
        }
        Ok(VisualQARecord {
            base: r.clone(),
            context_image: context,
            choice_images: choices,
        })
    };
    let results: Vec<Result<VisualQARecord, RenderFailure>> =
        pool.install(|| records.par_iter().map(render_one).collect());

    let mut set = VisualSet {
        manifest: VisualManifest {
            dpi: cfg.dpi,
            ..Default::default()
        },
        ..Default::default()
    };
    for res in results {
        match res {
            Ok(v) => {
                set.manifest.records.insert(
                    v.base.id.clone(),
                    ManifestEntry {
                        context_image: v.context_image.clone(),
                        choice_images: v.choice_images.clone(),
                    },
                );
                set.records.push(v);
            }
            Err(f) => {
                log::warn!("render failed for {} ({}): {}", f.record_id, f.image, f.error);
                set.manifest.failures.push(f);
            }
        }
    }
    let json = serde_json::to_string_pretty(&set.manifest).map_err(io::Error::from)?;
    fs::write(out_dir.join(MANIFEST_FILE), json + "\n")?;
    Ok(set)
}
