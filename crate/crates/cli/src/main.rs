use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use beta_verify::{list_targets, run, summary, write_report, RunConfig};
use clap::{ArgAction, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "beta-verify", version, about = "Numerically verify beta-integral identities and finite Wilson systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print every target id with its anchor, parameters and domain
    ListTargets,
    /// Run the verifications described by a config file
    Run {
        config: PathBuf,
        /// Override the config seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override every tolerance
        #[arg(long)]
        tolerance: Option<f64>,
        /// Report path (default: the config's `output`, else stdout)
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
        /// Print only failures
        #[arg(short, long, conflicts_with = "verbose")]
        quiet: bool,
        /// -v: per-record lines; -vv: also failure reasons
        #[arg(short, long, action = ArgAction::Count)]
        verbose: u8,
    },
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool> {
    match Cli::parse().cmd {
        Cmd::ListTargets => {
            print!("{}", list_targets());
            Ok(true)
        }
        Cmd::Run { config, seed, tolerance, output, threads, quiet, verbose } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let mut cfg = RunConfig::parse(&text)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if tolerance.is_some() {
                cfg.tolerance = tolerance;
            }
            if threads.is_some() {
                cfg.threads = threads;
            }
            if cfg.targets.is_empty() {
                eprintln!("warning: no targets in {}; nothing to verify", config.display());
            }
            let records = run(&cfg)?;
            let out = output.or_else(|| cfg.output.as_ref().map(|o| config.parent().unwrap_or(".".as_ref()).join(o)));
            match &out {
                Some(path) => {
                    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
                    write_report(BufWriter::new(f), cfg.seed, &records)?;
                }
                None => write_report(io::stdout().lock(), cfg.seed, &records)?,
            }
            for r in &records {
                if !r.passed || verbose > 0 {
                    let p: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    eprintln!(
                        "{} {} [{}] rel_error {:.3e} (tol {:.1e})",
                        if r.passed { "PASS" } else { "FAIL" },
                        r.target,
                        p.join(", "),
                        r.rel_error,
                        r.tolerance
                    );
                    if verbose > 1 || !r.passed {
                        if let Some(why) = &r.reason {
                            eprintln!("    {why}");
                        }
                    }
                }
            }
            if !quiet {
                eprint!("{}", summary(&records));
            }
            Ok(records.iter().all(|r| r.passed))
        }
    }
}
