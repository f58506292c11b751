//! Dirichlet heat semigroup `e^{tΔ}` on the exterior of the unit disk for
//! radial data, the comparison function used for its pointwise decay, and
//! the log-weighted `L^q → L²` decay report.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{laplacian_into, norm, GridMeta, Measure, RadialField, RadialGrid};
use crate::tridiag::Tridiagonal;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HeatConfig {
    /// Time step; `None` means `dt = dr`.
    pub dt: Option<f64>,
    /// Backward-Euler half steps taken before switching to Crank–Nicolson.
    pub rannacher_steps: usize,
    pub tail_margin: f64,
    pub tol_tail: f64,
}

impl Default for HeatConfig {
    fn default() -> Self {
        Self {
            dt: None,
            rannacher_steps: 2,
            tail_margin: 1.0,
            tol_tail: 1e-10,
        }
    }
}

impl HeatConfig {
    pub fn time_step(&self, grid: &RadialGrid) -> f64 {
        self.dt.unwrap_or(grid.dr())
    }

    /// Smallest outer radius that keeps the Gaussian tail below `tol_tail`
    /// up to `horizon`.
    pub fn required_r_max(&self, r_supp: f64, horizon: f64) -> f64 {
        r_supp + self.tail_margin * (4.0 * horizon * (1.0 / self.tol_tail).ln()).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(dt) = self.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(invalid("dt", format!("must be positive, got {dt}")));
            }
        }
        if !(self.tol_tail > 0.0 && self.tol_tail < 1.0) {
            return Err(invalid("tol_tail", "must lie in (0, 1)"));
        }
        if !(self.tail_margin > 0.0) {
            return Err(invalid("tail_margin", "must be positive"));
        }
        Ok(())
    }
}

/// One-step propagator `(I - θhA) w⁺ = (I + (1-θ)hA) w` on the interior nodes.
struct ThetaStep {
    h: f64,
    theta: f64,
    lu: Tridiagonal,
}

impl ThetaStep {
    fn new(grid: &RadialGrid, h: f64, theta: f64) -> Result<Self> {
        let m = grid.n() - 2;
        let inv = 1.0 / (grid.dr() * grid.dr());
        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        for k in 0..m {
            let c = 0.5 * grid.dr() / grid.radius(k + 1);
            lower[k] = -theta * h * (1.0 - c) * inv;
            diag[k] = 1.0 + theta * h * 2.0 * inv;
            upper[k] = -theta * h * (1.0 + c) * inv;
        }
        Ok(Self {
            h,
            theta,
            lu: Tridiagonal::factor(&lower, &diag, &upper)?,
        })
    }

    fn apply(&self, grid: &RadialGrid, w: &mut [f64], scratch: &mut [f64]) {
        let n = grid.n();
        if self.theta < 1.0 {
            laplacian_into(grid, w, scratch);
            let k = (1.0 - self.theta) * self.h;
            for i in 1..n - 1 {
                scratch[i] = w[i] + k * scratch[i];
            }
        } else {
            scratch[1..n - 1].copy_from_slice(&w[1..n - 1]);
        }
        self.lu.solve(&mut scratch[1..n - 1]);
        w[1..n - 1].copy_from_slice(&scratch[1..n - 1]);
        w[0] = 0.0;
        w[n - 1] = 0.0;
    }
}

/// Steps the heat equation and hands every intermediate state to
/// `on_step(t, values)`. Returns the states at the requested `times`
/// (nondecreasing, nonnegative).
pub fn heat_trajectory_with(
    f: &RadialField,
    times: &[f64],
    cfg: &HeatConfig,
    mut on_step: impl FnMut(f64, &[f64]),
) -> Result<Vec<RadialField>> {
    heat_until(f, times, cfg, |t, w| {
        on_step(t, w);
        true
    })
}

/// As [`heat_trajectory_with`], but stops as soon as `on_step` returns
/// `false`; only the states reached so far are returned.
pub(crate) fn heat_until(
    f: &RadialField,
    times: &[f64],
    cfg: &HeatConfig,
    mut on_step: impl FnMut(f64, &[f64]) -> bool,
) -> Result<Vec<RadialField>> {
    cfg.validate()?;
    if let Some(&bad) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(invalid("t", format!("times must be finite and >= 0, got {bad}")));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("times", "must be nondecreasing"));
    }
    let grid = *f.grid();
    let dt = cfg.time_step(&grid);
    let mut w = f.values().to_vec();
    w[0] = 0.0;
    w[grid.n() - 1] = 0.0;
    let mut scratch = vec![0.0; grid.n()];
    let main = ThetaStep::new(&grid, dt, 0.5)?;
    let startup = ThetaStep::new(&grid, 0.5 * dt, 1.0)?;
    let mut implicit_left = cfg.rannacher_steps;
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        if target == 0.0 {
            out.push(f.clone());
            continue;
        }
        while t < target {
            let nominal = if implicit_left > 0 { &startup } else { &main };
            let remaining = target - t;
            if remaining <= nominal.h * (1.0 + 1e-9) {
                if (remaining - nominal.h).abs() <= 1e-9 * nominal.h {
                    nominal.apply(&grid, &mut w, &mut scratch);
                } else {
                    ThetaStep::new(&grid, remaining, nominal.theta)?.apply(&grid, &mut w, &mut scratch);
                }
                t = target;
            } else {
                nominal.apply(&grid, &mut w, &mut scratch);
                t += nominal.h;
            }
            if w.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
            implicit_left = implicit_left.saturating_sub(1);
            if !on_step(t, &w) {
                return Ok(out);
            }
        }
        out.push(RadialField::from_values(grid, w.clone())?);
    }
    Ok(out)
}

pub fn heat_trajectory(f: &RadialField, times: &[f64], cfg: &HeatConfig) -> Result<Vec<RadialField>> {
    heat_trajectory_with(f, times, cfg, |_, _| {})
}

/// `e^{tΔ} f` with homogeneous Dirichlet data at `r = 1` and `r = r_max`.
pub fn heat_evolve(f: &RadialField, t: f64, cfg: &HeatConfig) -> Result<RadialField> {
    if t.is_nan() || t < 0.0 {
        return Err(invalid("t", format!("time must be >= 0, got {t}")));
    }
    Ok(heat_trajectory(f, &[t], cfg)?.pop().expect("one time requested"))
}

/// `κ_q = (1 - 1/q)^{1-1/q} (4π)^{-1/q}`, the whole-plane `L^q → L^∞` constant.
pub fn kappa_q(q: f64) -> f64 {
    let a = 1.0 / q;
    let b = 1.0 - a;
    let lead = if b == 0.0 { 1.0 } else { b.powf(b) };
    lead * (4.0 * std::f64::consts::PI).powf(-a)
}

/// Comparison profile `Φ(r, t) = (1 + log r²) / (2 + log t + log r²)`.
pub fn supersolution_profile(r: f64, t: f64) -> f64 {
    let l2 = 2.0 * r.ln();
    (1.0 + l2) / (2.0 + t.ln() + l2)
}

fn check_region(r: f64, t: f64) -> Result<()> {
    if !(t >= 4.0) || !t.is_finite() {
        return Err(invalid("t", format!("comparison region starts at t = 4, got {t}")));
    }
    if !(r >= 1.0) || r > t.sqrt() * (1.0 + 1e-12) {
        return Err(invalid("r", format!("need 1 <= r <= sqrt(t), got r = {r}, t = {t}")));
    }
    Ok(())
}

/// `U(r, t) = Φ(r, t) t^{-1/q} e^{-r²/4t}` on `{1 <= r <= √t, t >= 4}`.
/// `q = ∞` drops the power of `t`.
pub fn supersolution_phi(r: f64, t: f64, q: f64) -> Result<f64> {
    check_region(r, t)?;
    if !(q >= 1.0) {
        return Err(invalid("q", format!("need q >= 1, got {q}")));
    }
    let a = 1.0 / q;
    Ok(supersolution_profile(r, t) * t.powf(-a) * (-r * r / (4.0 * t)).exp())
}

/// `(∂_t U - ΔU) · t^{1/q} e^{r²/4t}`, assembled from the closed-form
/// derivatives of `Φ` with `Θ = 2 + log t + log r²`.
pub fn supersolution_residual_scaled(r: f64, t: f64, q: f64) -> f64 {
    let a = 1.0 / q;
    let log_t = t.ln();
    let log_r2 = 2.0 * r.ln();
    let theta = 2.0 + log_t + log_r2;
    let phi = (1.0 + log_r2) / theta;
    let dt_phi = -(1.0 + log_r2) / (t * theta * theta);
    // ∇Φ = Φ_r x/r
    let dr_phi = 2.0 * (1.0 + log_t) / (theta * theta * r);
    let lap_phi = -8.0 * (1.0 + log_t) / (theta * theta * theta * r * r);
    // E = e^{-r²/4t}: ∂_t E / E = r²/4t², ∂_r E / E = -r/2t, ΔE / E = r²/4t² - 1/t
    let gauss_t = r * r / (4.0 * t * t);
    let dt_u = dt_phi + phi * (-a / t + gauss_t);
    let lap_u = lap_phi + 2.0 * dr_phi * (-r / (2.0 * t)) + phi * (gauss_t - 1.0 / t);
    dt_u - lap_u
}

pub fn supersolution_residual(r: f64, t: f64, q: f64) -> f64 {
    supersolution_residual_scaled(r, t, q) * t.powf(-1.0 / q) * (-r * r / (4.0 * t)).exp()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualReport {
    pub q: f64,
    pub sample_count: usize,
    pub t_max: f64,
    pub min_residual: f64,
    /// Minimum of the residual with `t^{-1-1/q} e^{-r²/4t}` divided out.
    pub min_scaled_residual: f64,
    /// `1 + log(1+t) <= 2(1 + log r)` at `r = √t` for every sampled `t`.
    pub edge_bound_holds: bool,
    pub kappa_q: f64,
}

/// Radical inverse of `index` in `base`; the Halton sequence.
pub(crate) fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

/// Evaluates the residual at `sample_count` Halton points of the comparison
/// region with `t ∈ [4, 10⁶]`, log-uniform in both `t` and `r`.
pub fn supersolution_residual_check(q: f64, sample_count: usize) -> Result<ResidualReport> {
    if !(q >= 1.0) {
        return Err(invalid("q", format!("need q in [1, ∞], got {q}")));
    }
    let t_min: f64 = 4.0;
    let t_max: f64 = 1e6;
    let mut min_residual = f64::INFINITY;
    let mut min_scaled = f64::INFINITY;
    let mut edge_ok = true;
    for k in 1..=sample_count as u64 {
        let t = t_min * (t_max / t_min).powf(halton(k, 2));
        let r = t.powf(0.5 * halton(k, 3));
        let res = supersolution_residual(r, t, q);
        min_residual = min_residual.min(res);
        // divide out t^{-1} as well to compare with the bracketed lower bound
        min_scaled = min_scaled.min(supersolution_residual_scaled(r, t, q) * t);
        let edge = t.sqrt();
        edge_ok &= 1.0 + t.ln_1p() <= 2.0 * (1.0 + edge.ln());
    }
    Ok(ResidualReport {
        q,
        sample_count,
        t_max,
        min_residual,
        min_scaled_residual: min_scaled,
        edge_bound_holds: edge_ok,
        kappa_q: kappa_q(q),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeatDecayReport {
    pub q: f64,
    pub times: Vec<f64>,
    /// `t^{1/q-1/2} (1+log(1+t))^{1/q} ‖e^{tΔ}f‖₂ / ‖f‖_{L^q_dμ}`.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    /// Grid maximum of `e^{tΔ}f(r) t^{1/q} (1+log(1+t)) / ((1+log r) ‖f‖_{L^q})`.
    pub pointwise_ratios: Vec<f64>,
    pub max_pointwise_ratio: f64,
    pub grid: GridMeta,
}

/// Runs the heat flow of `f` (padded to the tail-safe radius) and reports the
/// normalized decay ratios at each time.
pub fn heat_decay_report(f: &RadialField, q: f64, times: &[f64], cfg: &HeatConfig) -> Result<HeatDecayReport> {
    if !(1.0..=2.0).contains(&q) {
        return Err(invalid("q", format!("need q in [1, 2], got {q}")));
    }
    if times.iter().any(|&t| !(t > 0.0)) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("times", "must be positive and increasing"));
    }
    let horizon = times.last().copied().unwrap_or(0.0);
    let f = f.extended_to(cfg.required_r_max(f.support_radius(), horizon));
    let grid = *f.grid();
    let weighted = norm(&f, q, Measure::LogWeighted)?;
    let plain = norm(&f, q, Measure::Lebesgue)?;
    let states = heat_trajectory(&f, times, cfg)?;
    let mut ratios = Vec::with_capacity(times.len());
    let mut pointwise = Vec::with_capacity(times.len());
    for (&t, w) in times.iter().zip(&states) {
        let lt = 1.0 + t.ln_1p();
        if weighted == 0.0 {
            ratios.push(0.0);
            pointwise.push(0.0);
            continue;
        }
        let l2 = norm(w, 2.0, Measure::Lebesgue)?;
        ratios.push(t.powf(1.0 / q - 0.5) * lt.powf(1.0 / q) * l2 / weighted);
        let peak = grid
            .radii()
            .zip(w.values())
            .map(|(r, &v)| v.abs() / (1.0 + r.ln()))
            .fold(0.0, f64::max);
        pointwise.push(peak * t.powf(1.0 / q) * lt / plain);
    }
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let max_pointwise_ratio = pointwise.iter().copied().fold(0.0, f64::max);
    Ok(HeatDecayReport {
        q,
        times: times.to_vec(),
        ratios,
        max_ratio,
        pointwise_ratios: pointwise,
        max_pointwise_ratio,
        grid: GridMeta::new(&grid, cfg.time_step(&grid)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::bump;
    use approx::assert_relative_eq;

    fn small_bump() -> RadialField {
        let grid = RadialGrid::with_spacing(12.0, 0.05).unwrap();
        bump(grid, 1.5, 3.0, 3)
    }

    #[test]
    fn zero_time_is_identity() {
        let f = small_bump();
        assert_eq!(heat_evolve(&f, 0.0, &HeatConfig::default()).unwrap(), f);
        assert!(heat_evolve(&f, -1.0, &HeatConfig::default()).is_err());
    }

    #[test]
    fn l2_norm_never_increases() {
        let f = small_bump();
        let mut prev = norm(&f, 2.0, Measure::Lebesgue).unwrap();
        let grid = *f.grid();
        let w = grid.weights(Measure::Lebesgue);
        heat_trajectory_with(&f, &[5.0], &HeatConfig::default(), |_, v| {
            let l2 = v.iter().zip(&w).map(|(x, w)| w * x * x).sum::<f64>().sqrt();
            assert!(l2 <= prev * (1.0 + 1e-12));
            prev = l2;
        })
        .unwrap();
    }

    #[test]
    fn nonnegative_data_stays_nonnegative() {
        let f = small_bump();
        let out = heat_trajectory(&f, &[0.05, 0.5, 2.0, 8.0], &HeatConfig::default()).unwrap();
        for w in out {
            assert!(w.min() >= -1e-8 * f.max_abs());
        }
    }

    #[test]
    fn kappa_examples() {
        // (1/2)^{1/2} / (4π)^{1/2} = 1/√(8π)
        assert_relative_eq!(kappa_q(2.0), 0.199_471_140_200_716_35, max_relative = 1e-14);
        assert_relative_eq!(kappa_q(1.0), 1.0 / (4.0 * std::f64::consts::PI), max_relative = 1e-14);
        assert_eq!(kappa_q(f64::INFINITY), 1.0);
    }

    #[test]
    fn profile_examples() {
        for t in [4.0f64, 10.0, 1e3, 1e6] {
            assert_relative_eq!(supersolution_profile(t.sqrt(), t), 0.5, max_relative = 1e-14);
        }
        let phi = supersolution_profile(1.0, 4.0);
        assert_relative_eq!(phi, 1.0 / (2.0 + 4f64.ln()), max_relative = 1e-14);
        assert_relative_eq!(phi, 0.295_308_054_574_820_6, max_relative = 1e-12);
        // q = ∞ keeps only Φ and the Gaussian
        let u = supersolution_phi(1.0, 4.0, f64::INFINITY).unwrap();
        assert_relative_eq!(u, phi * (-1.0f64 / 16.0).exp(), max_relative = 1e-14);
        assert!(supersolution_phi(1.0, 3.9, 2.0).is_err());
        assert!(supersolution_phi(3.0, 4.0, 2.0).is_err());
    }

    #[test]
    fn residual_matches_finite_differences() {
        // independent check of the hand-derived derivatives: central
        // differences of U in t and of the radial Laplacian in r
        for &(r, t, q) in &[(1.3, 5.0, 1.0), (2.0, 40.0, 2.0), (7.0, 100.0, 1.5), (1.0, 9.0, f64::INFINITY)] {
            let u = |r: f64, t: f64| supersolution_profile(r, t) * t.powf(-1.0 / q) * (-r * r / (4.0 * t)).exp();
            let ht = 1e-4 * t;
            let hr = 1e-4;
            let ut = (u(r, t + ht) - u(r, t - ht)) / (2.0 * ht);
            let urr = (u(r + hr, t) - 2.0 * u(r, t) + u(r - hr, t)) / (hr * hr);
            let ur = (u(r + hr, t) - u(r - hr, t)) / (2.0 * hr);
            let fd = ut - (urr + ur / r);
            let exact = supersolution_residual(r, t, q);
            assert!((fd - exact).abs() <= 1e-5 * (ut.abs() + urr.abs()), "r={r} t={t}: {fd} vs {exact}");
        }
    }

    #[test]
    fn residual_nonnegative_on_region() {
        for q in [1.0, 2.0, f64::INFINITY] {
            let rep = supersolution_residual_check(q, 5_000).unwrap();
            assert!(rep.min_residual >= -1e-12);
            assert!(rep.edge_bound_holds);
        }
    }

    #[test]
    fn zero_data_gives_zero_ratios() {
        let grid = RadialGrid::with_spacing(4.0, 0.1).unwrap();
        let rep = heat_decay_report(&RadialField::zeros(grid), 1.0, &[1.0, 2.0], &HeatConfig::default()).unwrap();
        assert!(rep.ratios.iter().all(|&r| r == 0.0));
        assert!(rep.pointwise_ratios.iter().all(|&r| r == 0.0));
    }
}
