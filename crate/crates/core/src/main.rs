use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use agwwo_core::harness::{load_config, run_experiment, write_outputs, ExperimentSpec, SweepVar};
use agwwo_core::optimizers::Algorithm;
use agwwo_core::Result;

#[derive(Parser)]
#[command(name = "agwwo", version, about = "Multi-step offloading simulator and optimizers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every algorithm once per replicate on the configured scenario, ignoring any sweep.
    Run(Common),
    /// Run the configured sweep and write results.csv.
    Sweep(Common),
    /// Run the configured sweep and also write one convergence trace per cell.
    Trace(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML); built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides experiment.master_seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Comma-separated subset of agwwo,wwo,aga,cmt.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<Algorithm>>,
    /// Worker threads.
    #[arg(long)]
    parallel: Option<usize>,
}

fn prepare(common: &Common) -> Result<ExperimentSpec> {
    let mut spec = match &common.config {
        Some(path) => load_config(path)?,
        None => ExperimentSpec::default(),
    };
    if let Some(seed) = common.seed {
        spec.experiment.master_seed = seed;
    }
    if let Some(algs) = &common.algorithms {
        spec.experiment.algorithms = algs.clone();
    }
    if let Some(n) = common.parallel {
        spec.experiment.parallel = n;
    }
    spec.validate()?;
    Ok(spec)
}

fn execute(cli: Cli) -> Result<()> {
    let (common, traces) = match &cli.command {
        Command::Run(c) => (c, None),
        Command::Sweep(c) => (c, None),
        Command::Trace(c) => (c, Some(true)),
    };
    let mut spec = prepare(common)?;
    if let Command::Run(_) = cli.command {
        spec.experiment.sweep = SweepVar::None;
        spec.experiment.values = vec![0.0];
    }
    let traces = traces.unwrap_or(spec.experiment.traces);
    let results = run_experiment(&spec)?;

    println!(
        "{:<10} {:>10} {:>5} {:>16} {:>16} {:>6} {:>6}",
        "algorithm",
        spec.experiment.sweep.name(),
        "seed",
        "network_E_J",
        "local_E_J",
        "time",
        "cost"
    );
    for c in &results {
        let r = &c.row;
        println!(
            "{:<10} {:>10} {:>5} {:>16.6} {:>16.6} {:>6.3} {:>6.3}",
            r.algorithm,
            r.sweep_value,
            r.seed,
            r.network_energy_j,
            r.local_energy_j,
            r.time_support_ratio,
            r.cost_support_ratio
        );
    }
    for path in write_outputs(&results, &common.out, traces)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
