//! Command bodies shared by the single-language subcommands and the batch
//! pipeline.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use kbsynth::config::Config;
use kbsynth::corpus::{load_plain_text, load_word_frequency_list};
use kbsynth::emit::{emit_package, EmitManifest};
use kbsynth::layout::{identify_base_layout, parse_csv, serialize_csv, Layout, ViewKind};
use kbsynth::preview::{render_svg, RenderStyle};
use kbsynth::stats::{tally, CharacterTally};
use kbsynth::synthesis::{synthesize_with, SynthesisReport};

use crate::error::Failure;

pub const LAYOUT_FILE: &str = "layout.csv";
pub const REPORT_FILE: &str = "report.tsv";
pub const PREVIEW_FILE: &str = "preview.svg";

#[derive(Debug, Clone, Default)]
pub struct Inputs {
    pub texts: Vec<PathBuf>,
    pub wordlists: Vec<PathBuf>,
}

impl Inputs {
    pub fn is_empty(&self) -> bool {
        self.texts.is_empty() && self.wordlists.is_empty()
    }
}

pub fn load_tally(inputs: &Inputs) -> Result<CharacterTally, Failure> {
    if inputs.is_empty() {
        return Err(Failure::Usage("no input; pass --text or --wordlist".into()));
    }
    let docs = inputs
        .texts
        .iter()
        .map(|p| load_plain_text(p))
        .collect::<Result<Vec<_>, _>>()?;
    let lists = inputs
        .wordlists
        .iter()
        .map(|p| load_word_frequency_list(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(tally(&docs, &lists))
}

pub fn synthesize_layout(
    inputs: &Inputs,
    config: &Config,
) -> Result<(Layout, SynthesisReport), Failure> {
    let resolver = config.resolver()?;
    let tally = load_tally(inputs)?;
    Ok(synthesize_with(&tally, &config.synthesis, &resolver)?)
}

/// Writes `contents` unless an identical file is already there. A differing
/// file is a conflict unless `force` is set.
pub fn write_output(path: &Path, contents: &str, force: bool) -> Result<(), Failure> {
    match fs::read(path) {
        Ok(existing) if existing == contents.as_bytes() => return Ok(()),
        Ok(_) if !force => {
            return Err(Failure::Io(format!(
                "{} already exists with different content (use --force to overwrite)",
                path.display()
            )))
        }
        Ok(_) => {}
        Err(e) if e.kind() == io::ErrorKind::NotFound => {}
        Err(e) => return Err(io_failure(path, e)),
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

pub fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

/// Loads a layout CSV and fills in metadata the CSV does not carry.
pub fn load_layout(path: &Path, config: &Config) -> Result<Layout, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let mut layout =
        parse_csv(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    layout.language_tag = config.synthesis.language_tag.clone();
    layout.name = config.synthesis.language_tag.clone();
    layout.currency_symbol = config.synthesis.currency_symbol;
    layout.base_layout_name = config
        .synthesis
        .base_layout
        .clone()
        .or_else(|| identify_base_layout(&layout).map(str::to_owned))
        .unwrap_or_else(|| {
            log::warn!(
                "{}: visible keys match no built-in layout; IME variant defaults to qwerty",
                path.display()
            );
            "qwerty".to_owned()
        });
    Ok(layout)
}

pub fn write_preview(
    layout: &Layout,
    view: ViewKind,
    path: &Path,
    force: bool,
) -> Result<(), Failure> {
    write_output(
        path,
        &render_svg(layout, view, &RenderStyle::default()),
        force,
    )
}

#[derive(Debug, Clone)]
pub struct JobOutput {
    pub report: SynthesisReport,
    pub manifest: EmitManifest,
}

/// Synthesis, CSV, report, emission and preview for one language into
/// `outdir`.
pub fn run_language(
    inputs: &Inputs,
    config: &Config,
    outdir: &Path,
    force: bool,
) -> Result<JobOutput, Failure> {
    let (layout, report) = synthesize_layout(inputs, config)?;
    write_output(&outdir.join(LAYOUT_FILE), &serialize_csv(&layout), force)?;
    write_output(&outdir.join(REPORT_FILE), &report.to_tsv(), force)?;
    let emit_config = kbsynth::emit::EmitConfig {
        force,
        ..config.emit.clone()
    };
    let manifest = emit_package(&layout, &emit_config, outdir)?;
    write_preview(
        &layout,
        ViewKind::Default,
        &outdir.join(PREVIEW_FILE),
        force,
    )?;
    Ok(JobOutput { report, manifest })
}
