mod error;
mod pipeline;
mod run;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kbsynth::config::Config;
use kbsynth::emit::{emit_package, EmitConfig, EmitManifest};
use kbsynth::layout::{serialize_csv, ViewKind};
use kbsynth::unicode_base::{
    covered_blocks, LATIN_1_SUPPLEMENT, LATIN_EXTENDED_A, LATIN_EXTENDED_B,
};

use crate::error::Failure;
use crate::run::{load_layout, load_tally, synthesize_layout, write_output, write_preview, Inputs};

#[derive(Parser)]
#[command(
    name = "kbsynth",
    version,
    about = "Design Latin-script mobile keyboard layouts from corpus data"
)]
struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Character frequency table of the inputs, as TSV.
    Analyze {
        #[command(flatten)]
        inputs: InputArgs,
        /// Write the TSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Design a layout; writes layout.csv and report.tsv into --out.
    Synth {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        settings: SettingsArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
        /// Also render the default view as SVG.
        #[arg(long)]
        preview: Option<PathBuf>,
    },
    /// Generate the Android resource package for a layout CSV.
    Emit {
        layout: PathBuf,
        #[command(flatten)]
        settings: SettingsArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        preview: Option<PathBuf>,
    },
    /// Render a layout CSV as SVG.
    Preview {
        layout: PathBuf,
        #[command(flatten)]
        settings: SettingsArgs,
        #[arg(long)]
        out: PathBuf,
        /// Render the shift view.
        #[arg(long)]
        shift: bool,
        #[arg(long)]
        force: bool,
    },
    /// Count how Latin letters resolve to base keys.
    Census {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run analyze, synth and emit for every line of a job file.
    Pipeline {
        jobs: PathBuf,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long = "jobs", value_name = "N")]
        workers: Option<usize>,
        #[arg(long)]
        base_layout: Option<String>,
        #[arg(long)]
        min_count: Option<u64>,
        #[arg(long)]
        force: bool,
        /// Write the run summary here as well as to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Plain-text corpus file.
    #[arg(long = "text", value_name = "PATH", num_args = 1..)]
    texts: Vec<PathBuf>,
    /// `word<TAB>count` frequency list.
    #[arg(long = "wordlist", value_name = "PATH", num_args = 1..)]
    wordlists: Vec<PathBuf>,
}

impl From<InputArgs> for Inputs {
    fn from(a: InputArgs) -> Self {
        Inputs {
            texts: a.texts,
            wordlists: a.wordlists,
        }
    }
}

#[derive(Args)]
struct SettingsArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    language_tag: Option<String>,
    #[arg(long)]
    base_layout: Option<String>,
    #[arg(long)]
    min_count: Option<u64>,
}

impl SettingsArgs {
    fn resolve(&self) -> Result<Config, Failure> {
        let mut config = match &self.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        if let Some(v) = &self.language_tag {
            config.set("language_tag", v)?;
        }
        if let Some(v) = &self.base_layout {
            config.set("base_layout", v)?;
        }
        if let Some(v) = self.min_count {
            config.set("min_count", &v.to_string())?;
        }
        Ok(config)
    }
}

fn print_manifest(manifest: &EmitManifest) {
    for f in &manifest.files {
        println!(
            "{}\t{}\t{}\t{}{}",
            f.role.label(),
            f.path,
            f.bytes,
            f.sha256,
            if f.shared { "\tshared" } else { "" }
        );
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analyze { inputs, out } => {
            let tsv = load_tally(&inputs.into())?.to_tsv();
            match out {
                Some(path) => write_output(&path, &tsv, true)?,
                None => {
                    let _ = std::io::stdout().write_all(tsv.as_bytes());
                }
            }
        }
        Command::Synth {
            inputs,
            settings,
            out,
            force,
            preview,
        } => {
            let config = settings.resolve()?;
            let (layout, report) = synthesize_layout(&inputs.into(), &config)?;
            write_output(&out.join(run::LAYOUT_FILE), &serialize_csv(&layout), force)?;
            write_output(&out.join(run::REPORT_FILE), &report.to_tsv(), force)?;
            if let Some(svg) = preview {
                write_preview(&layout, ViewKind::Default, &svg, force)?;
            }
            for w in &report.warnings {
                log::warn!("{w}");
            }
            println!(
                "base layout {}; {} placed, {} unplaceable, {} warnings",
                report.base_layout_chosen,
                report.placements.len(),
                report.unplaceable.len(),
                report.warnings.len()
            );
        }
        Command::Emit {
            layout,
            settings,
            out,
            force,
            preview,
        } => {
            let config = settings.resolve()?;
            let layout = load_layout(&layout, &config)?;
            let emit_config = EmitConfig {
                force,
                ..config.emit.clone()
            };
            let manifest = emit_package(&layout, &emit_config, &out)?;
            if let Some(svg) = preview {
                write_preview(&layout, ViewKind::Default, &svg, force)?;
            }
            print_manifest(&manifest);
        }
        Command::Preview {
            layout,
            settings,
            out,
            shift,
            force,
        } => {
            let config = settings.resolve()?;
            let layout = load_layout(&layout, &config)?;
            let view = if shift {
                ViewKind::Shift
            } else {
                ViewKind::Default
            };
            write_preview(&layout, view, &out, force)?;
        }
        Command::Census { config } => {
            let config = match config {
                Some(p) => Config::load(&p)?,
                None => Config::default(),
            };
            let resolver = config.resolver()?;
            println!("block\tdecomposable\tfallback\tuncovered\ttotal");
            for (name, block) in [
                ("latin_1_supplement", LATIN_1_SUPPLEMENT),
                ("latin_extended_a", LATIN_EXTENDED_A),
                ("latin_extended_b", LATIN_EXTENDED_B),
            ] {
                let c = resolver.decomposition_census(&[block]);
                println!(
                    "{name}\t{}\t{}\t{}\t{}",
                    c.decomposable,
                    c.fallback,
                    c.uncovered.len(),
                    c.total()
                );
            }
            let all = resolver.decomposition_census(&covered_blocks());
            println!(
                "all\t{}\t{}\t{}\t{}",
                all.decomposable,
                all.fallback,
                all.uncovered.len(),
                all.total()
            );
            for ch in &all.uncovered {
                println!("uncovered\tU+{:04X}\t{ch}", *ch as u32);
            }
        }
        Command::Pipeline {
            jobs,
            workers,
            base_layout,
            min_count,
            force,
            out,
        } => {
            let job_list = pipeline::load_jobs(&jobs)?;
            let workers = workers
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            if workers == 0 {
                return Err(Failure::Usage("--jobs must be at least 1".into()));
            }
            let mut overrides: pipeline::Overrides = Vec::new();
            if let Some(b) = base_layout {
                overrides.push(("base_layout", b));
            }
            if let Some(m) = min_count {
                overrides.push(("min_count", m.to_string()));
            }
            let result = pipeline::run_pipeline(&job_list, &overrides, force, workers)?;
            print!("{}", result.summary);
            if let Some(path) = out {
                write_output(&path, &result.summary, true)?;
            }
            if let Some(f) = result.first_failure {
                return Err(f);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .parse_default_env()
        .init();

    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("kbsynth: {f}");
            f.exit_code()
        }
    }
}
