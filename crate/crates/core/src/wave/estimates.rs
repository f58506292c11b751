use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::grid::{apply_laplacian, grad_norm_sq, norm, GridMeta, Measure, RadialField};
use crate::heat::{heat_trajectory, HeatConfig};
use crate::weight::h_weight;

use super::radial::{evolve_with_source, RadialLeapfrog, Source};
use super::reduced::reduced_1d_evolve;
use super::WaveConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PositivityStatus {
    Checked,
    /// The datum changes sign, so there is nothing to check.
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityReport {
    pub status: PositivityStatus,
    pub horizon: f64,
    pub g_sup: f64,
    /// Minimum of `u` over the grid and every step, radial solver.
    pub min_radial: f64,
    /// Same for `u` recovered from the reduced solver.
    pub min_reduced: f64,
    pub tol_pos: f64,
    pub passed: bool,
    pub grid: GridMeta,
}

impl PositivityReport {
    /// `max(0, -min u) / ‖g‖_∞` over both solvers.
    pub fn relative_undershoot(&self) -> f64 {
        if self.g_sup == 0.0 {
            return 0.0;
        }
        (-self.min_radial.min(self.min_reduced)).max(0.0) / self.g_sup
    }
}

pub const TOL_POS: f64 = 1e-6;

/// Runs both linear solvers up to `horizon` and records the most negative
/// value of `u` seen at any step.
pub fn positivity_check(g: &RadialField, horizon: f64, cfg: &WaveConfig) -> Result<PositivityReport> {
    if !(horizon >= 0.0) || !horizon.is_finite() {
        return Err(invalid("horizon", format!("must be finite and >= 0, got {horizon}")));
    }
    let g = cfg.fit_grid(g, horizon);
    let grid = *g.grid();
    let dt = cfg.time_step(&grid)?;
    let g_sup = g.max_abs();
    if !g.is_nonnegative() {
        return Ok(PositivityReport {
            status: PositivityStatus::Skipped,
            horizon,
            g_sup,
            min_radial: f64::NAN,
            min_reduced: f64::NAN,
            tol_pos: TOL_POS,
            passed: true,
            grid: GridMeta::new(&grid, dt),
        });
    }
    let steps = (horizon / dt).round() as usize;
    let mut lf = RadialLeapfrog::new(&g, dt, Source::None)?;
    let mut min_radial = lf.current().iter().copied().fold(0.0, f64::min);
    while lf.step_index() < steps {
        if !lf.advance() {
            return Err(Error::NonFinite);
        }
        min_radial = min_radial.min(lf.current().iter().copied().fold(0.0, f64::min));
    }
    let reduced = reduced_1d_evolve(&g, &[horizon], cfg)?;
    let min_reduced = reduced.min_u;
    let floor = -TOL_POS * g_sup;
    Ok(PositivityReport {
        status: PositivityStatus::Checked,
        horizon,
        g_sup,
        min_radial,
        min_reduced,
        tol_pos: TOL_POS,
        passed: min_radial >= floor && min_reduced >= floor,
        grid: GridMeta::new(&grid, dt),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct L1BoundReport {
    pub times: Vec<f64>,
    /// `‖S(t)g‖_{L¹_dμ} / ((1 - e^{-t}) ‖g‖_{L¹_dμ})`.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub grid: GridMeta,
}

pub fn l1dmu_bound_check(g: &RadialField, times: &[f64], cfg: &WaveConfig) -> Result<L1BoundReport> {
    let horizon = times.last().copied().unwrap_or(0.0);
    let g = cfg.fit_grid(g, horizon);
    let traj = evolve_with_source(&g, times, cfg, Source::None)?;
    let g_norm = norm(&g, 1.0, Measure::LogWeighted)?;
    let mut ratios = Vec::with_capacity(times.len());
    for (&t, s) in times.iter().zip(&traj.states) {
        let u_norm = norm(&s.u, 1.0, Measure::LogWeighted)?;
        let bound = -(-t).exp_m1() * g_norm;
        ratios.push(if u_norm == 0.0 { 0.0 } else { u_norm / bound });
    }
    Ok(L1BoundReport {
        times: times.to_vec(),
        max_ratio: ratios.iter().copied().fold(0.0, f64::max),
        ratios,
        grid: GridMeta::new(&traj.grid, traj.dt),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MatsumuraDiffReport {
    pub times: Vec<f64>,
    /// `t^{3/2} ‖∇(S(t) - e^{tΔ})g‖₂ / ‖g‖₂`.
    pub grad_ratios: Vec<f64>,
    /// `t² ‖∂_t(S(t) - e^{tΔ})g‖₂ / ‖g‖₂`.
    pub dt_ratios: Vec<f64>,
    pub grad_constant: f64,
    pub dt_constant: f64,
    pub grid: GridMeta,
}

/// Compares the damped wave with the heat flow of the same datum on a common
/// grid; `∂_t e^{tΔ}g` is taken as `Δ_h e^{tΔ}g`.
pub fn matsumura_diff_report(g: &RadialField, times: &[f64], wave: &WaveConfig, heat: &HeatConfig) -> Result<MatsumuraDiffReport> {
    if let Some(&bad) = times.iter().find(|&&t| !(t >= 1.0)) {
        return Err(invalid("times", format!("must be >= 1, got {bad}")));
    }
    let horizon = times.last().copied().unwrap_or(1.0);
    let r_supp = g.support_radius();
    let r_max = wave.required_r_max(r_supp, horizon).max(heat.required_r_max(r_supp, horizon));
    let g = g.extended_to(r_max + g.grid().dr());
    let traj = evolve_with_source(&g, times, wave, Source::None)?;
    let heat_states = heat_trajectory(&g, times, heat)?;
    let g_l2 = norm(&g, 2.0, Measure::Lebesgue)?;
    let mut grad_ratios = Vec::with_capacity(times.len());
    let mut dt_ratios = Vec::with_capacity(times.len());
    for ((&t, s), w) in times.iter().zip(&traj.states).zip(&heat_states) {
        if g_l2 == 0.0 {
            grad_ratios.push(0.0);
            dt_ratios.push(0.0);
            continue;
        }
        let du = s.u.lin_comb(1.0, w, -1.0)?;
        let dv = s.v.lin_comb(1.0, &apply_laplacian(w), -1.0)?;
        grad_ratios.push(t.powf(1.5) * grad_norm_sq(&du).sqrt() / g_l2);
        dt_ratios.push(t * t * norm(&dv, 2.0, Measure::Lebesgue)? / g_l2);
    }
    Ok(MatsumuraDiffReport {
        times: times.to_vec(),
        grad_constant: grad_ratios.iter().copied().fold(0.0, f64::max),
        dt_constant: dt_ratios.iter().copied().fold(0.0, f64::max),
        grad_ratios,
        dt_ratios,
        grid: GridMeta::new(&traj.grid, traj.dt),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LogMatsumuraReport {
    pub q: f64,
    pub times: Vec<f64>,
    /// `‖∇S(t)g‖₂ / (h(t)^{1/q} (‖g‖_{L^q_dμ} + ‖g‖₂))`.
    pub grad_ratios: Vec<f64>,
    /// `(1+t)^{1/2} ‖∂_t S(t)g‖₂ / (h(t)^{1/q} (‖g‖_{L^q_dμ} + ‖g‖₂))`.
    pub dt_ratios: Vec<f64>,
    pub grad_constant: f64,
    pub dt_constant: f64,
    pub grid: GridMeta,
}

pub fn log_matsumura_report(g: &RadialField, q: f64, times: &[f64], cfg: &WaveConfig) -> Result<LogMatsumuraReport> {
    if !(1.0..=2.0).contains(&q) {
        return Err(invalid("q", format!("need q in [1, 2], got {q}")));
    }
    let horizon = times.last().copied().unwrap_or(0.0);
    let g = cfg.fit_grid(g, horizon);
    let traj = evolve_with_source(&g, times, cfg, Source::None)?;
    let size = norm(&g, q, Measure::LogWeighted)? + norm(&g, 2.0, Measure::Lebesgue)?;
    let mut grad_ratios = Vec::with_capacity(times.len());
    let mut dt_ratios = Vec::with_capacity(times.len());
    for (&t, s) in times.iter().zip(&traj.states) {
        if size == 0.0 {
            grad_ratios.push(0.0);
            dt_ratios.push(0.0);
            continue;
        }
        let scale = h_weight(t)?.powf(1.0 / q) * size;
        grad_ratios.push(s.grad_l2() / scale);
        dt_ratios.push((1.0 + t).sqrt() * s.dtu_l2() / scale);
    }
    Ok(LogMatsumuraReport {
        q,
        times: times.to_vec(),
        grad_constant: grad_ratios.iter().copied().fold(0.0, f64::max),
        dt_constant: dt_ratios.iter().copied().fold(0.0, f64::max),
        grad_ratios,
        dt_ratios,
        grid: GridMeta::new(&traj.grid, traj.dt),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::bump;
    use crate::grid::RadialGrid;

    fn grid() -> RadialGrid {
        RadialGrid::with_spacing(4.0, 0.05).unwrap()
    }

    #[test]
    fn zero_datum_stays_zero() {
        let g = RadialField::zeros(grid());
        let cfg = WaveConfig::default();
        let pos = positivity_check(&g, 5.0, &cfg).unwrap();
        assert_eq!(pos.status, PositivityStatus::Checked);
        assert_eq!(pos.min_radial, 0.0);
        assert_eq!(pos.min_reduced, 0.0);
        let l1 = l1dmu_bound_check(&g, &[0.1, 1.0], &cfg).unwrap();
        assert_eq!(l1.max_ratio, 0.0);
        let m = matsumura_diff_report(&g, &[1.0, 3.0], &cfg, &HeatConfig::default()).unwrap();
        assert_eq!(m.grad_constant, 0.0);
        assert_eq!(m.dt_constant, 0.0);
    }

    #[test]
    fn sign_changing_datum_is_skipped() {
        let g = bump(grid(), 1.2, 2.0, 3).lin_comb(1.0, &bump(grid(), 2.2, 3.0, 3), -1.0).unwrap();
        let pos = positivity_check(&g, 2.0, &WaveConfig::default()).unwrap();
        assert_eq!(pos.status, PositivityStatus::Skipped);
        assert!(pos.passed);
    }

    #[test]
    fn bump_stays_nonnegative_and_contracts() {
        let g = bump(grid(), 1.5, 3.0, 4);
        let cfg = WaveConfig::default();
        let pos = positivity_check(&g, 10.0, &cfg).unwrap();
        assert!(pos.passed, "{pos:?}");
        let l1 = l1dmu_bound_check(&g, &[0.1, 1.0, 10.0], &cfg).unwrap();
        assert!(l1.max_ratio <= 1.02, "{l1:?}");
    }

    #[test]
    fn matsumura_rejects_early_times() {
        let g = bump(grid(), 1.5, 3.0, 4);
        assert!(matsumura_diff_report(&g, &[0.5], &WaveConfig::default(), &HeatConfig::default()).is_err());
    }
}
