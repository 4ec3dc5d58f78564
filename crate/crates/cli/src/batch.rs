use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{BatchArgs, Cli, Command, Format};
use crate::{execute, Exit, EXIT_ERROR, EXIT_FALSIFIED, EXIT_OK};

#[derive(Debug, Serialize)]
struct JobRecord {
    line: usize,
    args: Vec<String>,
    exit_code: i32,
    report: Option<String>,
    error: Option<String>,
}

struct Job {
    line: usize,
    args: Vec<String>,
}

fn parse_jobs(text: &str) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(args) = shlex::split(line) else {
            bail!("line {}: unbalanced quotes", k + 1);
        };
        jobs.push(Job { line: k + 1, args });
    }
    Ok(jobs)
}

/// Writes `contents` to `dir/name` through a temporary file in `dir`, so a
/// reader never sees a partial report.
fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(dir.join(name)).map_err(|e| e.error)?;
    Ok(())
}

fn run_job(job: &Job, out_dir: &Path) -> JobRecord {
    let argv = std::iter::once("saddle".to_string()).chain(job.args.iter().cloned());
    let parsed = Cli::try_parse_from(argv);
    let (exit, ext) = match parsed {
        Ok(cli) if matches!(cli.command, Command::Batch(_)) => (
            Exit {
                code: EXIT_ERROR,
                stdout: String::new(),
                stderr: "batch jobs cannot nest".into(),
            },
            "json",
        ),
        Ok(cli) => {
            let ext = match cli.output {
                Format::Json => "json",
                Format::Text => "txt",
                Format::Csv => "csv",
            };
            (execute(&cli), ext)
        }
        Err(e) => (
            Exit {
                code: EXIT_ERROR,
                stdout: String::new(),
                stderr: e.render().to_string(),
            },
            "json",
        ),
    };
    let mut record = JobRecord {
        line: job.line,
        args: job.args.clone(),
        exit_code: exit.code,
        report: None,
        error: (!exit.stderr.is_empty()).then(|| exit.stderr.trim_end().to_string()),
    };
    if !exit.stdout.is_empty() {
        let name = format!("job-{:04}.{ext}", job.line);
        match write_atomic(out_dir, &name, &exit.stdout) {
            Ok(()) => record.report = Some(name),
            Err(e) => {
                record.exit_code = EXIT_ERROR;
                record.error = Some(format!("writing {name}: {e:#}"));
            }
        }
    }
    record
}

/// Exit 1 if any job failed to run, else 2 if any was falsified, else 0.
pub fn run_batch(a: &BatchArgs, format: Format) -> Exit {
    match batch(a, format) {
        Ok(exit) => exit,
        Err(e) => crate::error_exit(&e),
    }
}

fn batch(a: &BatchArgs, format: Format) -> Result<Exit> {
    let text = fs::read_to_string(&a.jobs).with_context(|| format!("reading {}", a.jobs.display()))?;
    let jobs = parse_jobs(&text)?;
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.threads).build()?;
    let records: Vec<JobRecord> = pool.install(|| jobs.par_iter().map(|j| run_job(j, &a.out_dir)).collect());

    let code = if records.iter().any(|r| r.exit_code == EXIT_ERROR) {
        EXIT_ERROR
    } else if records.iter().any(|r| r.exit_code == EXIT_FALSIFIED) {
        EXIT_FALSIFIED
    } else {
        EXIT_OK
    };
    let count = |c: i32| records.iter().filter(|r| r.exit_code == c).count();
    let summary = serde_json::json!({
        "jobs": records,
        "ok": count(EXIT_OK),
        "falsified": count(EXIT_FALSIFIED),
        "failed": count(EXIT_ERROR),
    });
    write_atomic(&a.out_dir, "summary.json", &(serde_json::to_string_pretty(&summary)? + "\n"))?;
    let stdout = match format {
        Format::Text => records
            .iter()
            .map(|r| format!("line {:>4}  exit {}  {}\n", r.line, r.exit_code, r.args.join(" ")))
            .collect(),
        _ => serde_json::to_string_pretty(&summary)? + "\n",
    };
    Ok(Exit {
        code,
        stdout,
        stderr: String::new(),
    })
}
