//! `posetmep`: load an instance, run one check, print a report.
//!
//! Exit status is 0 when the report passes, 1 when a checked property
//! fails, 2 on invalid input and 3 when an enumeration bound is hit.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use posetmep::acceptance::{acceptance_report, run_all, run_criterion, Grid};
use posetmep::instance::Instance;
use posetmep::mep::MepMode;
use posetmep::report::{
    audit_report, isometries_report, lattice_report, macwilliams_report, mep_report, poset_report, Report,
};
use posetmep::{Error, Limits, Result};

#[derive(Parser)]
#[command(name = "posetmep", version, about = "Weighted poset metrics over finite-field block spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: Output,
    /// Cap on every enumeration (vectors, codes, maps, matrices, group elements).
    #[arg(long, global = true)]
    bound: Option<u128>,
}

#[derive(Args)]
struct Output {
    /// Pretty JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// One `key: value` line per result field.
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Args)]
struct InstanceArg {
    /// Path to a JSON instance file.
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Weight,
    Psupport,
}

#[derive(Subcommand)]
enum Command {
    /// Ideals, levels, hierarchy, automorphisms and the UDP.
    Poset(InstanceArg),
    /// The isometry group, its image table and kernel.
    Isometries {
        #[command(flatten)]
        instance: InstanceArg,
        /// Also compare against the brute-force matrix scan.
        #[arg(long)]
        brute_force: bool,
    },
    /// The MacWilliams extension property.
    Mep {
        #[command(flatten)]
        instance: InstanceArg,
        #[arg(long, value_enum, default_value = "weight")]
        mode: Mode,
        /// Decide by exhaustive search rather than the closed form.
        #[arg(long)]
        brute_force: bool,
    },
    /// Möbius function and minimal isometry-equation solutions of a
    /// generated lattice, e.g. "subspace 2 2", "morita 2 2 3", "boolean 3".
    Lattice {
        /// Generator words, joined with spaces.
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
    },
    /// The MacWilliams identity, with a witness pair when it fails.
    Macwilliams(InstanceArg),
    /// Every equivalent property side by side, with the implications checked.
    Audit(InstanceArg),
    /// The acceptance criteria.
    Accept {
        /// Run only these criteria (repeatable).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
        criterion: Vec<u8>,
        /// Posets on at most two elements, for a fast smoke run.
        #[arg(long)]
        quick: bool,
        /// Seed for the randomized parts of the grid.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn limits(bound: Option<u128>) -> Limits {
    let mut l = Limits::default();
    if let Some(b) = bound {
        l.max_vectors = b;
        l.max_codes = b;
        l.max_maps = b;
        l.max_group = b;
        l.max_matrices = b;
    }
    l
}

fn load(arg: &InstanceArg) -> Result<Instance> {
    let text = std::fs::read_to_string(&arg.instance)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", arg.instance.display())))?;
    Instance::from_json(&text)
}

fn run(command: &Command, limits: &Limits) -> Result<Report> {
    match command {
        Command::Poset(i) => poset_report(&load(i)?, limits),
        Command::Isometries { instance, brute_force } => isometries_report(&load(instance)?, *brute_force, limits),
        Command::Mep {
            instance,
            mode,
            brute_force,
        } => {
            let mode = match mode {
                Mode::Weight => MepMode::Weight,
                Mode::Psupport => MepMode::PSupport,
            };
            mep_report(&load(instance)?, mode, *brute_force, limits)
        }
        Command::Lattice { spec } => lattice_report(&spec.join(" "), limits),
        Command::Macwilliams(i) => macwilliams_report(&load(i)?, limits),
        Command::Audit(i) => audit_report(&load(i)?, limits),
        Command::Accept { criterion, quick, seed } => {
            let grid = Grid {
                seed: *seed,
                ..if *quick { Grid::quick() } else { Grid::default() }
            };
            let results = if criterion.is_empty() {
                run_all(&grid)
            } else {
                criterion.iter().map(|&id| run_criterion(id, &grid)).collect()
            };
            for r in &results {
                eprintln!("{r}");
                if !r.passed {
                    eprintln!("  replay: {}", r.replay());
                }
            }
            Ok(acceptance_report(&grid, &results))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli.command, &limits(cli.bound)) {
        Ok(mut report) => {
            report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
            let body = if cli.output.text {
                report.to_text()
            } else {
                report.to_json() + "\n"
            };
            // a closed pipe (`| head`) is not an error worth reporting
            let _ = std::io::stdout().write_all(body.as_bytes());
            ExitCode::from(if report.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
