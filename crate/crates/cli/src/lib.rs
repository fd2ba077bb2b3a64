//! Command line driver: runs configured evolutions, property suites and
//! parameter sweeps, and writes their artifacts.
//!
//! Exit codes: 0 success, 1 check failure or failed run, 2 usage or
//! configuration error.

pub mod config;
pub mod evolve;
pub mod suites;
pub mod svg;
pub mod sweep;
pub mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use curveflow::CurveKind;

use crate::config::{ConfigError, RunConfig};
use crate::evolve::{run_evolve, EvolveOptions};
use crate::sweep::{run_sweep, Axis, SweepError};
use crate::verify::{run_suite, Scale, VerifyError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "curveflow", version, about = "Curve shortening flow of closed space curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve the configured curve(s) and write metrics, snapshots and a report.
    Evolve(RunArgs),
    /// Run a property suite and print one line per check.
    Verify {
        /// One of: frenet, convexity, projection, lemma2, lemma3, lemma4,
        /// schur, avoidance, sphericity, family.
        suite: String,
        /// Smaller problem sizes, for smoke tests.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the configured evolution over a parameter grid.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Grid axis `key=v1,v2,...`; repeat for a product grid.
        #[arg(long = "vary", value_name = "KEY=VALUES")]
        vary: Vec<String>,
    },
    /// List the curve generators and their parameters.
    ListGenerators,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Overrides `output_dir`.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Overrides the top-level `seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Skip the O(N²) self-intersection and family-distance monitors.
    #[arg(long)]
    pub no_topology_checks: bool,
    #[arg(long)]
    pub dump_chordfield: bool,
    #[arg(long)]
    pub svg: bool,
}

impl RunArgs {
    pub fn load(&self) -> Result<(RunConfig, EvolveOptions), ConfigError> {
        let mut cfg = RunConfig::load(&self.config)?;
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        cfg.validate()?;
        let opts = EvolveOptions {
            topology_checks: !self.no_topology_checks,
            dump_chordfield: self.dump_chordfield,
            svg: self.svg,
        };
        Ok((cfg, opts))
    }
}

/// Maps an error to its exit code: configuration problems are usage errors.
fn failure(e: anyhow::Error) -> ExitCode {
    eprintln!("error: {e:#}");
    let usage = e.is::<ConfigError>() || e.is::<VerifyError>() || e.is::<SweepError>();
    ExitCode::from(if usage { EXIT_USAGE } else { EXIT_CHECK_FAILED })
}

pub fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Evolve(args) => {
            let (cfg, opts) = match args.load() {
                Ok(x) => x,
                Err(e) => return failure(e.into()),
            };
            match run_evolve(&cfg, &opts) {
                Ok(run) => {
                    println!(
                        "stopped: {} at t = {:.6e} after {} steps ({:.3} s)",
                        run.stop, run.final_time, run.steps, run.wall_seconds
                    );
                    let violations = run.violations();
                    for (name, t) in &violations {
                        println!("violation: {name} first at t = {t:.6e}");
                    }
                    println!("output: {}", run.output_dir.display());
                    ExitCode::from(if violations.is_empty() { EXIT_OK } else { EXIT_CHECK_FAILED })
                }
                Err(e) => failure(e),
            }
        }
        Command::Verify { suite, quick, seed } => match run_suite(&suite, Scale { quick }, seed) {
            Ok(checks) => {
                for c in &checks {
                    println!("{c}");
                }
                let ok = checks.iter().all(|c| c.passed());
                ExitCode::from(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
            }
            Err(e) => failure(e),
        },
        Command::Sweep { run, vary } => {
            let (cfg, opts) = match run.load() {
                Ok(x) => x,
                Err(e) => return failure(e.into()),
            };
            let axes = match vary.iter().map(|s| s.parse::<Axis>()).collect::<Result<Vec<_>, _>>() {
                Ok(a) => a,
                Err(e) => return failure(e.into()),
            };
            match run_sweep(&cfg, &axes, &opts) {
                Ok(out) => {
                    print!("{}", out.to_csv());
                    if !out.convergence.is_empty() {
                        print!("{}", out.convergence_csv());
                    }
                    let failed = out.failures();
                    if failed > 0 {
                        eprintln!("{failed} of {} cells failed", out.cells.len());
                    }
                    ExitCode::from(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
                }
                Err(e) => failure(e),
            }
        }
        Command::ListGenerators => {
            for kind in CurveKind::ALL {
                println!("{kind}: {}", kind.description());
                for p in kind.params() {
                    println!("    {} = {}  ({})", p.key, p.default, p.help);
                }
            }
            ExitCode::from(EXIT_OK)
        }
    }
}
