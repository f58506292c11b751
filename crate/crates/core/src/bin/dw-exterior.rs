use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dw_exterior::harness::{parse_config, run_experiment, ExperimentConfig, ExperimentKind};
use dw_exterior::Error;

#[derive(Parser)]
#[command(version, about = "Damped-wave experiments outside the unit disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Log-weighted heat decay and the supersolution residual.
    HeatDecay(Common),
    /// Positivity, L1(dmu) contraction, diffusion-phenomenon rates and solver agreement.
    LinearEstimates(Common),
    /// Hardy and Gagliardo-Nirenberg constant sweeps.
    Inequalities(Common),
    /// Lifespan sweep over an amplitude grid.
    LifespanSweep(Common),
    /// Long-time weighted decay of a small supercritical solution.
    GlobalDecay(Common),
    /// Heat-supersolution lifespans against measured damped-wave lifespans.
    SupersolutionCompare(Common),
    /// Every check above.
    VerifyAll(Common),
}

#[derive(Args)]
struct Common {
    /// TOML experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default `out/<subcommand>`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed for the randomized checks.
    #[arg(long)]
    seed: Option<u64>,
}

fn split(cmd: Command) -> (ExperimentKind, &'static str, Common) {
    use ExperimentKind::*;
    match cmd {
        Command::HeatDecay(c) => (HeatDecay, "heat-decay", c),
        Command::LinearEstimates(c) => (LinearEstimates, "linear-estimates", c),
        Command::Inequalities(c) => (Inequalities, "inequalities", c),
        Command::LifespanSweep(c) => (LifespanSweep, "lifespan-sweep", c),
        Command::GlobalDecay(c) => (GlobalDecay, "global-decay", c),
        Command::SupersolutionCompare(c) => (SupersolutionCompare, "supersolution-compare", c),
        Command::VerifyAll(c) => (VerifyAll, "verify-all", c),
    }
}

fn load(kind: ExperimentKind, name: &str, args: &Common) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => parse_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(k) = cfg.kind {
        if k != kind {
            return Err(Error::Config(format!("kind: file describes {k:?}, but the subcommand is {name}")));
        }
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.jobs.is_some() {
        cfg.jobs = args.jobs;
    }
    if cfg.jobs == Some(0) {
        return Err(Error::Config("jobs: must be at least 1".into()));
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, name, args) = split(cli.command);
    let cfg = match load(kind, name, &args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let out = args
        .out
        .clone()
        .or_else(|| cfg.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out").join(name));
    match run_experiment(kind, &cfg, &out, cfg.jobs) {
        Ok(summary) => {
            for c in &summary.checks {
                println!("{}", c.line());
            }
            println!("{} passed, {} failed; results in {}", summary.passed, summary.failed, out.display());
            if summary.all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ (Error::Config(_) | Error::InvalidArgument { .. })) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
