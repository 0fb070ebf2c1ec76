//! Command-line front end: `solve`, `verify`, `sweep` and `export`.
//!
//! Exit codes: 0 when every check passes, 1 for usage or configuration
//! errors, 2 for failed verification or computation. Errors are printed to
//! standard error as `{"error": {"kind": ..., "message": ...}}`.

pub mod args;
pub mod config;
pub mod document;
pub mod error;
pub mod run;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use serde::Serialize;

use args::{parse_list, parse_pair, Cli, Command};
use config::{OutputFormat, PartialConfig, RunConfig};
use document::{records_csv, wavefunctions_csv, ResultDocument, TOOL, VERSION};
use error::{CliError, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};

pub use run::{export_wavefunctions, run_solve, run_verify};

/// Writes `contents` to `path` through a temporary file in the same
/// directory and an atomic rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn emit(cfg: &RunConfig, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.out {
        Some(p) => write_atomic(p, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
    }
}

fn render(doc: &ResultDocument, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => doc.to_json(),
        OutputFormat::Csv if doc.command == "export" => wavefunctions_csv(&doc.wavefunctions),
        OutputFormat::Csv => records_csv(doc),
    }
}

#[derive(Serialize)]
struct SweepRun {
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    document: Option<ResultDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<serde_json::Value>,
}

#[derive(Serialize)]
struct SweepDocument {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    vary: String,
    runs: Vec<SweepRun>,
}

fn sweep(base: PartialConfig, vary: &str, values: &[f64], verify: bool) -> (Vec<SweepRun>, i32) {
    let results: Vec<(f64, Result<ResultDocument, CliError>)> = std::thread::scope(|s| {
        let handles: Vec<_> = values
            .iter()
            .map(|&v| {
                let mut partial = base.clone();
                partial.parameters.insert(vary.to_string(), v);
                s.spawn(move || {
                    let res = partial.resolve().and_then(|cfg| {
                        if verify {
                            run_verify(&cfg)
                        } else {
                            run_solve(&cfg)
                        }
                    });
                    (v, res)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut code = EXIT_OK;
    let runs = results
        .into_iter()
        .map(|(value, res)| match res {
            Ok(doc) => {
                if !doc.passed() {
                    code = code.max(EXIT_VERIFY);
                }
                SweepRun {
                    value,
                    document: Some(doc),
                    error: None,
                }
            }
            Err(e) => {
                code = code.max(e.exit_code());
                SweepRun {
                    value,
                    document: None,
                    error: serde_json::from_str(&e.to_json()).ok(),
                }
            }
        })
        .collect();
    (runs, code)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve(a) => {
            let cfg = a.merged()?.resolve()?;
            let doc = run_solve(&cfg)?;
            emit(&cfg, &render(&doc, cfg.output), out)?;
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let cfg = a.merged()?.resolve()?;
            let doc = run_verify(&cfg)?;
            emit(&cfg, &render(&doc, cfg.output), out)?;
            Ok(if doc.passed() { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Export(a) => {
            let mut partial = a.common.merged()?;
            if partial.output.is_none() {
                partial.output = Some(OutputFormat::Csv);
            }
            let cfg = partial.resolve()?;
            let range = parse_pair(&a.xrange, "--xrange")?;
            let doc = export_wavefunctions(&cfg, a.points, range)?;
            emit(&cfg, &render(&doc, cfg.output), out)?;
            Ok(EXIT_OK)
        }
        Command::Sweep(a) => {
            let base = a.common.merged()?;
            let values = parse_list(&a.values)?;
            let cfg = base.clone().resolve()?;
            if cfg.output == OutputFormat::Csv {
                return Err(CliError::Usage("sweep writes JSON only".into()));
            }
            let (runs, code) = sweep(base, &a.vary, &values, a.verify);
            let doc = SweepDocument {
                tool: TOOL,
                version: VERSION,
                command: "sweep",
                vary: a.vary,
                runs,
            };
            let mut text = serde_json::to_string_pretty(&doc).expect("sweep document serializes");
            text.push('\n');
            emit(&cfg, &text, out)?;
            Ok(code)
        }
    }
}

/// Runs the command line `args` (including the program name), writing
/// results to `out` and errors to `err`; returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = writeln!(
                err,
                "{}",
                CliError::Usage(e.to_string().trim().to_string()).to_json()
            );
            return EXIT_USAGE;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json());
            e.exit_code()
        }
    }
}
