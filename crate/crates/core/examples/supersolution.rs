//! Residual of the heat comparison profile, and the lifespan of the ODE
//! supersolution built from the heat flow.

use dw_exterior::data::DataSpec;
use dw_exterior::heat::{supersolution_residual_check, HeatConfig};
use dw_exterior::semilinear::{heat_supersolution_lifespan, lifespan_estimate, SemilinearConfig};

fn main() -> dw_exterior::Result<()> {
    for q in [1.0, 2.0, f64::INFINITY] {
        let rep = supersolution_residual_check(q, 10_000)?;
        println!(
            "q = {q}: min residual {:.3e}, min scaled {:.3e}",
            rep.min_residual, rep.min_scaled_residual
        );
    }
    let f = DataSpec::default().build(0.1);
    for eps in [200.0, 100.0, 50.0] {
        let heat = heat_supersolution_lifespan(&f, eps, 2.0, 100.0, &HeatConfig::default())?;
        let wave = lifespan_estimate(&f, eps, 2.0, 100.0, &SemilinearConfig::default())?;
        println!("eps = {eps}: supersolution {:.3}, damped wave {:.3}", heat.time, wave.t_measured);
    }
    Ok(())
}
