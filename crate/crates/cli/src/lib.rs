//! Command-line front end for `saddle-core`.
//!
//! [`run`] takes an argument vector and returns the exit code with the text
//! for standard output and standard error, so the whole tool can be driven
//! in-process. Exit codes: 0 success, 1 usage or input error, 2 a checked
//! mathematical expectation failed.

mod args;
mod batch;
mod commands;

use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub use args::{Cli, Command, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FALSIFIED: i32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exit {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Envelope shared by every JSON report.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: &'static str,
    /// `sha256:` of the command, its options and canonical input documents.
    pub inputs_digest: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resonance: Option<Value>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

pub fn run<I, T>(argv: I) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    Exit {
                        code: if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { EXIT_ERROR } else { EXIT_OK },
                        stdout: text,
                        stderr: String::new(),
                    }
                }
                _ => Exit {
                    code: EXIT_ERROR,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Exit {
    let start = Instant::now();
    let produced = match &cli.command {
        Command::SaddleValues(a) => commands::saddle_values(a),
        Command::Linearize(a) => commands::linearize(a),
        Command::ResonanceData(a) => commands::resonance(a),
        Command::Matrix(a) => commands::matrix(a),
        Command::Witness(a) => commands::witness(a),
        Command::Certificate(a) => commands::certificate(a),
        Command::Lift(a) => commands::lift(a),
        Command::VerifyHomo(a) => commands::verify_homo(a),
        Command::Selftest(a) => commands::selftest(a, !cli.no_timing),
        Command::Batch(a) => return batch::run_batch(a, cli.output),
    };
    let (out, inputs) = match produced {
        Ok(v) => v,
        Err(e) => return error_exit(&e),
    };
    let seconds = start.elapsed().as_secs_f64();
    let code = if out.falsified { EXIT_FALSIFIED } else { EXIT_OK };
    let status = if out.falsified { "falsified" } else { "ok" };
    let digest = inputs_digest(&cli.command, &inputs);

    let stdout = match cli.output {
        Format::Json => {
            let report = RunReport {
                schema_version: saddle_core::document::SCHEMA_VERSION,
                command: cli.command.name(),
                inputs_digest: digest,
                status,
                resonance: out.resonance,
                result: out.result,
                wall_time_seconds: (!cli.no_timing).then_some(seconds),
            };
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        Format::Text => {
            let mut s = format!("{} [{}]\n{}", cli.command.name(), status, out.text);
            s.push_str(&format!("inputs {digest}\n"));
            if !cli.no_timing {
                s.push_str(&format!("wall time {seconds:.3} s\n"));
            }
            s
        }
        Format::Csv => match out.csv {
            Some(rows) => match to_csv(&rows) {
                Ok(s) => s,
                Err(e) => return error_exit(&e),
            },
            None => {
                return Exit {
                    code: EXIT_ERROR,
                    stdout: String::new(),
                    stderr: format!("error: csv output is not available for {}\n", cli.command.name()),
                }
            }
        },
    };
    Exit {
        code,
        stdout,
        stderr: String::new(),
    }
}

fn error_exit(e: &anyhow::Error) -> Exit {
    let falsified = e
        .chain()
        .any(|c| c.downcast_ref::<saddle_core::Error>().is_some_and(saddle_core::Error::is_falsification));
    Exit {
        code: if falsified { EXIT_FALSIFIED } else { EXIT_ERROR },
        stdout: String::new(),
        stderr: format!("error: {e:#}\n"),
    }
}

fn to_csv(rows: &[Vec<String>]) -> anyhow::Result<String> {
    let mut w = csv::WriterBuilder::new().flexible(false).from_writer(Vec::new());
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn inputs_digest(cmd: &Command, inputs: &[String]) -> String {
    let options = match cmd {
        Command::SaddleValues(a) => serde_json::to_value(a),
        Command::Linearize(a) => serde_json::to_value(a),
        Command::ResonanceData(a) => serde_json::to_value(a),
        Command::Matrix(a) => serde_json::to_value(a),
        Command::Witness(a) => serde_json::to_value(a),
        Command::Certificate(a) => serde_json::to_value(a),
        Command::Lift(a) => serde_json::to_value(a),
        Command::VerifyHomo(a) => serde_json::to_value(a),
        Command::Selftest(a) => serde_json::to_value(a),
        Command::Batch(a) => serde_json::to_value(a),
    }
    .expect("options serialize");
    let canonical = serde_json::json!({"command": cmd.name(), "options": options, "inputs": inputs});
    let hash = Sha256::digest(canonical.to_string().as_bytes());
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}
