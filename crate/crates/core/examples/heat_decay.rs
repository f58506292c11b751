//! Log-weighted L^q -> L^2 decay of the exterior heat flow.

use dw_exterior::data::bump;
use dw_exterior::grid::RadialGrid;
use dw_exterior::heat::{heat_decay_report, HeatConfig};

fn main() -> dw_exterior::Result<()> {
    let dr = 0.2;
    let f = bump(RadialGrid::with_spacing(3.5 + dr, dr)?, 1.5, 3.5, 3);
    let times = [1.0, 10.0, 100.0, 1000.0];
    for q in [1.0, 1.5, 2.0] {
        let rep = heat_decay_report(&f, q, &times, &HeatConfig::default())?;
        println!("q = {q}  (r_max = {:.0}, n = {})", rep.grid.r_max, rep.grid.n);
        for ((t, rho), pw) in rep.times.iter().zip(&rep.ratios).zip(&rep.pointwise_ratios) {
            println!("  t = {t:>6}  rho = {rho:.5}  pointwise = {pw:.5}");
        }
    }
    Ok(())
}
