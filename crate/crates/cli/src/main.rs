//! `emergence`: experiment harness for the measures, simulators and the
//! ecological pipeline.

mod commands;
mod error;
mod output;

use std::process::ExitCode;
use std::time::{Instant, SystemTime};

use clap::{Parser, Subcommand};
use serde::Serialize;

use commands::{eca, eco, measure, rbn, traffic};
use error::{CliError, CliResult};
use output::{emit, OutArgs, Report, RunInfo};

#[derive(Debug, Parser)]
#[command(
    name = "emergence",
    version,
    about = "Measures of emergence, self-organization, complexity, homeostasis and autopoiesis"
)]
struct Cli {
    /// Worker threads for replicate and density parallelism.
    #[arg(long, global = true, env = "EMERGENCE_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// E, S, C, H and HmV of every column of a CSV table.
    Measure(measure::MeasureArgs),
    /// Measure distributions of random Boolean network ensembles over K.
    RbnSweep(rbn::SweepArgs),
    /// Autopoiesis table of internal networks coupled to an environment.
    RbnCoupled(rbn::CoupledArgs),
    /// Multi-scale measures of elementary cellular automata.
    EcaProfile(eca::ProfileArgs),
    /// Density sweep of the traffic-light grid.
    Traffic(traffic::TrafficArgs),
    /// Ecological pipeline.
    #[command(subcommand)]
    Eco(eco::EcoCommand),
}

fn execute<A: Serialize>(
    name: &str,
    args: &A,
    out: &OutArgs,
    run: impl FnOnce(&A) -> CliResult<Report>,
) -> CliResult<()> {
    let started = (SystemTime::now(), Instant::now());
    let report = run(args)?;
    let info = RunInfo {
        subcommand: name,
        parameters: serde_json::to_value(args)?,
        started,
    };
    emit(&report, out, info)
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Measure(a) => execute("measure", &a, &a.out, measure::run),
        Command::RbnSweep(a) => execute("rbn-sweep", &a, &a.out, rbn::sweep),
        Command::RbnCoupled(a) => execute("rbn-coupled", &a, &a.out, rbn::coupled),
        Command::EcaProfile(a) => execute("eca-profile", &a, &a.out, eca::run),
        Command::Traffic(a) => execute("traffic", &a, &a.out, traffic::run),
        Command::Eco(cmd) => eco::dispatch(cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.jobs {
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(cli.command))),
        None => dispatch(cli.command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
