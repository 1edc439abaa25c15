//! Batch mode: many languages from one job file.
//!
//! Job file lines are tab-separated:
//!
//! ```text
//! # tag  outdir     config        inputs...
//! pt     out/pt     -             text:udhr/pt.txt
//! kl     out/kl     kl.conf       text:kl.txt   wordlist:kl_words.tsv
//! ```
//!
//! Relative paths are resolved against the job file's directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Component, Path, PathBuf};

use rayon::prelude::*;

use kbsynth::config::Config;

use crate::error::Failure;
use crate::run::{io_failure, run_language, Inputs, JobOutput};

#[derive(Debug, Clone)]
pub struct PipelineJob {
    pub line: usize,
    pub language_tag: String,
    pub outdir: PathBuf,
    pub config: Option<PathBuf>,
    pub inputs: Inputs,
}

pub fn parse_jobs(text: &str, base: &Path) -> Result<Vec<PipelineJob>, Failure> {
    let resolve = |p: &str| {
        let p = Path::new(p);
        if p.is_relative() {
            base.join(p)
        } else {
            p.to_owned()
        }
    };
    let mut jobs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw
            .split('\t')
            .map(str::trim)
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() < 4 {
            return Err(Failure::Usage(format!(
                "job line {line}: expected `tag<TAB>outdir<TAB>config|-<TAB>input...`"
            )));
        }
        let mut inputs = Inputs::default();
        for spec in &fields[3..] {
            match spec.split_once(':') {
                Some(("text", p)) if !p.is_empty() => inputs.texts.push(resolve(p)),
                Some(("wordlist", p)) if !p.is_empty() => inputs.wordlists.push(resolve(p)),
                _ => {
                    return Err(Failure::Usage(format!(
                        "job line {line}: input `{spec}` must be `text:<path>` or `wordlist:<path>`"
                    )))
                }
            }
        }
        jobs.push(PipelineJob {
            line,
            language_tag: fields[0].to_owned(),
            outdir: resolve(fields[1]),
            config: (fields[2] != "-").then(|| resolve(fields[2])),
            inputs,
        });
    }
    if jobs.is_empty() {
        return Err(Failure::Usage("job file lists no jobs".into()));
    }
    check_distinct_outdirs(&jobs)?;
    Ok(jobs)
}

fn lexical_normalize(p: &Path) -> PathBuf {
    let abs = std::path::absolute(p).unwrap_or_else(|_| p.to_owned());
    let mut out = PathBuf::new();
    for c in abs.components() {
        match c {
            Component::CurDir => {}
            Component::ParentDir => {
                out.pop();
            }
            other => out.push(other),
        }
    }
    out
}

fn check_distinct_outdirs(jobs: &[PipelineJob]) -> Result<(), Failure> {
    let mut seen: BTreeMap<PathBuf, usize> = BTreeMap::new();
    for job in jobs {
        if let Some(first) = seen.insert(lexical_normalize(&job.outdir), job.line) {
            return Err(Failure::Usage(format!(
                "job lines {first} and {} share output directory {}",
                job.line,
                job.outdir.display()
            )));
        }
    }
    Ok(())
}

/// Overrides applied to every job's config after it is loaded.
pub type Overrides = Vec<(&'static str, String)>;

fn run_job(job: &PipelineJob, overrides: &Overrides, force: bool) -> Result<JobOutput, Failure> {
    let mut config = match &job.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    config.set("language_tag", &job.language_tag)?;
    for (k, v) in overrides {
        config.set(k, v)?;
    }
    run_language(&job.inputs, &config, &job.outdir, force)
}

pub struct PipelineResult {
    pub summary: String,
    pub first_failure: Option<Failure>,
}

/// Runs all jobs on up to `workers` threads. Each job writes only into its
/// own output directory. Results are reported in job-file order.
pub fn run_pipeline(
    jobs: &[PipelineJob],
    overrides: &Overrides,
    force: bool,
    workers: usize,
) -> Result<PipelineResult, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<JobOutput, Failure>> = pool.install(|| {
        jobs.par_iter()
            .map(|j| run_job(j, overrides, force))
            .collect()
    });

    let mut summary = String::from("tag\tstatus\tdetail\n");
    let mut first_failure = None;
    for (job, result) in jobs.iter().zip(results) {
        match result {
            Ok(out) => {
                let _ = writeln!(
                    summary,
                    "{}\tok\tbase={} files={} warnings={} unplaceable={} outdir={}",
                    job.language_tag,
                    out.report.base_layout_chosen,
                    out.manifest.files.len(),
                    out.report.warnings.len(),
                    out.report.unplaceable.len(),
                    job.outdir.display()
                );
            }
            Err(f) => {
                let _ = writeln!(
                    summary,
                    "{}\tfailed\texit={} {}",
                    job.language_tag,
                    f.code(),
                    f.message().replace(['\t', '\n'], " ")
                );
                first_failure.get_or_insert(f);
            }
        }
    }
    Ok(PipelineResult {
        summary,
        first_failure,
    })
}

pub fn load_jobs(path: &Path) -> Result<Vec<PipelineJob>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_jobs(&text, base)
}
