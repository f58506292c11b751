//! Linear damped-wave estimates for one datum: positivity, the L1(dmu)
//! bound, and the gap to the heat flow.

use dw_exterior::data::bump;
use dw_exterior::grid::RadialGrid;
use dw_exterior::heat::HeatConfig;
use dw_exterior::wave::{l1dmu_bound_check, matsumura_diff_report, positivity_check, WaveConfig};

fn main() -> dw_exterior::Result<()> {
    let dr = 0.05;
    let g = bump(RadialGrid::with_spacing(3.5 + dr, dr)?, 1.5, 3.5, 3);
    let wave = WaveConfig::default();

    let pos = positivity_check(&g, 20.0, &wave)?;
    println!(
        "min u: radial {:.3e}, reduced {:.3e} (|g|_inf = {:.3e})",
        pos.min_radial, pos.min_reduced, pos.g_sup
    );

    let l1 = l1dmu_bound_check(&g, &[0.1, 1.0, 10.0], &wave)?;
    println!("L1(dmu) ratios {:?}", l1.ratios);

    let times = [1.0, 3.0, 10.0, 30.0];
    let m = matsumura_diff_report(&g, &times, &wave, &HeatConfig::default())?;
    for ((t, a), b) in times.iter().zip(&m.grad_ratios).zip(&m.dt_ratios) {
        println!("t = {t:>4}  t^1.5 |grad(S - heat)g| = {a:.4}  t^2 |d_t(S - heat)g| = {b:.4}");
    }
    Ok(())
}
