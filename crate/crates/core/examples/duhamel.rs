//! Rebuilds a semilinear solution from the linear propagator and compares.

use dw_exterior::data::DataSpec;
use dw_exterior::semilinear::{duhamel_residual_check, semilinear_evolve, SemilinearConfig};

fn main() -> dw_exterior::Result<()> {
    let cfg = SemilinearConfig {
        snapshot_stride: Some(1),
        ..SemilinearConfig::default()
    };
    for dr in [0.1, 0.05] {
        let run = semilinear_evolve(&DataSpec::default().build(dr), 2.0, 2.0, 4.0, &cfg)?;
        let rep = duhamel_residual_check(&run, &[2.0, 4.0])?;
        println!("dr = {dr}: deviations {:?}", rep.deviations);
    }
    Ok(())
}
