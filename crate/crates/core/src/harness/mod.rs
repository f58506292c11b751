//! Experiment orchestration: configuration, parallel sweeps, fits, the
//! per-estimate checks and the summary files.

pub mod checks;
mod config;
mod fit;
mod summary;
mod sweep;

pub use config::{
    parse_config, EpsilonGrid, ExperimentConfig, ExperimentKind, GlobalParams, HardyParams, HeatDecayParams, LinearParams, LogGnParams,
    ModalParams, OracleParams, PositivityParams, SupersolutionParams, SweepParams,
};
pub use fit::{fit_exponent, least_squares, FitInput, FitResult};
pub use summary::{emit_summary, CheckRow, Summary};
pub use sweep::{par_map, run_sweep, run_sweep_to};

use std::path::Path;

use crate::error::{Error, Result};
use checks::Ctx;

/// The checks behind one subcommand, in report order.
pub fn run_checks(kind: ExperimentKind, ctx: &Ctx) -> Result<Vec<CheckRow>> {
    use ExperimentKind::*;
    let cfg = ctx.cfg;
    let rows = match kind {
        HeatDecay => vec![checks::heat_decay(ctx)?, checks::supersolution_residual(ctx)?],
        LinearEstimates => vec![
            checks::positivity(ctx)?,
            checks::l1_contraction(ctx)?,
            checks::matsumura(ctx)?,
            checks::log_matsumura(ctx)?,
            checks::oracle_equivalence(ctx)?,
            checks::modal_matsumura(ctx)?,
        ],
        Inequalities => vec![checks::hardy(ctx)?, checks::gn(ctx)?, checks::log_gn(ctx)?],
        LifespanSweep => {
            let p = cfg.sweep.p;
            if p < 2.0 {
                vec![checks::subcritical_lifespan(ctx, &cfg.sweep)?]
            } else if p == 2.0 {
                vec![checks::critical_q_band(ctx, &cfg.sweep)?]
            } else {
                return Err(Error::Config(format!(
                    "sweep.p: lifespan sweeps need p <= 2, got {p}; use global-decay"
                )));
            }
        }
        GlobalDecay => vec![checks::global_decay(ctx)?],
        SupersolutionCompare => vec![checks::supersolution_compare(ctx)?],
        VerifyAll => vec![
            checks::hardy(ctx)?,
            checks::positivity(ctx)?,
            checks::l1_contraction(ctx)?,
            checks::matsumura(ctx)?,
            checks::heat_decay(ctx)?,
            checks::supersolution_residual(ctx)?,
            checks::log_gn(ctx)?,
            checks::subcritical_lifespan(ctx, &cfg.sweep)?,
            checks::critical_q_band(ctx, &cfg.critical)?,
            checks::global_decay(ctx)?,
            checks::oracle_equivalence(ctx)?,
            checks::modal_matsumura(ctx)?,
            checks::gn(ctx)?,
            checks::log_matsumura(ctx)?,
            checks::supersolution_compare(ctx)?,
        ],
    };
    Ok(rows)
}

/// Runs `kind`, writing CSVs and the summary files into `out`.
pub fn run_experiment(kind: ExperimentKind, cfg: &ExperimentConfig, out: &Path, jobs: Option<usize>) -> Result<Summary> {
    std::fs::create_dir_all(out)?;
    let ctx = Ctx { cfg, out: Some(out), jobs };
    let rows = run_checks(kind, &ctx)?;
    std::fs::write(
        out.join("config.toml"),
        toml::to_string(cfg).map_err(|e| Error::Config(e.to_string()))?,
    )?;
    emit_summary(rows, out)
}
