//! Critical (p = 2) lifespans over a short amplitude grid and their Q band.

use dw_exterior::harness::{fit_exponent, run_sweep, EpsilonGrid, FitInput, SweepParams};
use dw_exterior::semilinear::SemilinearConfig;
use dw_exterior::wave::OuterRule;

fn main() -> dw_exterior::Result<()> {
    let params = SweepParams {
        epsilons: EpsilonGrid::List(vec![80.0, 60.0, 45.0, 35.0]),
        horizon: 200.0,
        ..SweepParams::critical()
    };
    let mut cfg = SemilinearConfig::default();
    cfg.wave.outer = OuterRule::DampedFront { tol: 1e-10 };
    let records = run_sweep(&params, &cfg, None)?;
    for r in &records {
        println!(
            "eps = {:>5}  T = {:>8.3}  converged = {}  Q = {:.3}",
            r.epsilon, r.t_measured, r.refinement_converged, r.q_value
        );
    }
    let fit = fit_exponent(FitInput::CriticalQ(&records))?;
    println!("Q band {:?}, ratio {:.3}", fit.band, fit.exponent);
    Ok(())
}
