//! A small supercritical solution decays at the linear rates.

use dw_exterior::data::DataSpec;
use dw_exterior::harness::{fit_exponent, FitInput};
use dw_exterior::semilinear::{global_decay_report, semilinear_evolve, SemilinearConfig};
use dw_exterior::wave::OuterRule;

fn main() -> dw_exterior::Result<()> {
    let g = DataSpec::default().build(0.1);
    let mut cfg = SemilinearConfig::default();
    cfg.wave.outer = OuterRule::DampedFront { tol: 1e-10 };
    let run = semilinear_evolve(&g, 1.0, 3.0, 300.0, &cfg)?;
    let rep = global_decay_report(&run)?;
    println!("at t = {:.0}: {:?}", rep.t_first, rep.first);
    println!("at t = {:.0}: {:?}", rep.t_last, rep.last);
    let fit = fit_exponent(FitInput::Global(&rep))?;
    println!("log |grad u| vs log h(t): slope {:.3} (linear rate 1)", fit.exponent);
    Ok(())
}
