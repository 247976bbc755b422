use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sgkdv::manifest::Experiment;
use sgkdv_cli::{report, run_path, Overrides};

/// Numerical laboratory for the stochastic generalized KdV equation.
///
/// Exit status: 0 when every gate passes, 2 when a gate fails, 1 on error
/// (a JSON error record is printed on stderr).
#[derive(Parser)]
#[command(name = "sgkdv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment manifest (TOML).
    #[arg(long)]
    manifest: PathBuf,
    /// Override the noise seed (and the probe data seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the equation and dump the trace and the energy series.
    Simulate(RunArgs),
    /// Oscillatory integrals, decay fits and envelope bounds.
    Oscint(RunArgs),
    /// Empirical Kato smoothing constants with refinement checks.
    ProbeKato(RunArgs),
    /// Empirical Strichartz constants with refinement checks.
    ProbeStrichartz(RunArgs),
    /// Functionals of the stochastic convolution along sample paths.
    Beta(RunArgs),
    /// Monte Carlo ensemble statistics.
    Ensemble(RunArgs),
    /// Forward scattering diagnostics.
    Scatter(RunArgs),
    /// Collect gates of finished runs and merge ensemble shards.
    Report {
        /// Run directories to aggregate.
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = match cli.command {
        Command::Simulate(a) => (Experiment::Simulate, a),
        Command::Oscint(a) => (Experiment::Oscint, a),
        Command::ProbeKato(a) => (Experiment::ProbeKato, a),
        Command::ProbeStrichartz(a) => (Experiment::ProbeStrichartz, a),
        Command::Beta(a) => (Experiment::Beta, a),
        Command::Ensemble(a) => (Experiment::Ensemble, a),
        Command::Scatter(a) => (Experiment::Scatter, a),
        Command::Report { runs, out } => {
            return finish(report(&runs, &out).map(|r| {
                print_gates(&r.gates);
                r.passed
            }))
        }
    };
    let o = Overrides {
        seed: args.seed,
        out: args.out,
        jobs: args.jobs,
    };
    finish(run_path(&args.manifest, experiment, &o).map(|s| {
        for w in &s.warnings {
            eprintln!("warning: {w}");
        }
        print_gates(&s.gates);
        s.passed
    }))
}

fn print_gates(gates: &[sgkdv_cli::Gate]) {
    for g in gates {
        let mark = if g.passed { "pass" } else { "FAIL" };
        println!("{mark}  {}  ({})", g.name, g.detail);
    }
}

fn finish(r: anyhow::Result<bool>) -> ExitCode {
    match r {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            let mut causes: Vec<String> = e.chain().skip(1).map(|c| c.to_string()).collect();
            if let Some(sgkdv::Error::Manifest(list)) = e.chain().find_map(|c| c.downcast_ref::<sgkdv::Error>()) {
                causes = list.clone();
            }
            let record = json!({ "error": e.to_string(), "causes": causes });
            eprintln!("{record}");
            ExitCode::FAILURE
        }
    }
}
