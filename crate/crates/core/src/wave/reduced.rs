use crate::error::{invalid, Error, Result};
use crate::grid::RadialField;

use super::{output_steps, Trajectory, WaveConfig, WaveState};

/// `m(y) = (1/(|y|+1)² + 1) / 4`, the even potential of the reduced problem.
pub fn reduced_potential(y: f64) -> f64 {
    let s = y.abs() + 1.0;
    0.25 * (1.0 / (s * s) + 1.0)
}

#[derive(Debug, Clone)]
pub struct ReducedTrajectory {
    /// `u(r, t) = e^{-t/2} r^{-1/2} Ũ(r - 1, t)` on the radial grid of the data.
    pub trajectory: Trajectory,
    /// `max |Ũ(0, t)|` over every step.
    pub center_residual: f64,
    /// Minimum of `Ũ` over `y >= 0` and every step.
    pub min_reduced: f64,
    /// Minimum of the recovered `u` over the grid and every step.
    pub min_u: f64,
}

/// Solves `Ũ_tt - Ũ_yy = m Ũ` on `(-Y, Y)` with the odd extension of
/// `(0, r^{1/2} g)` by leapfrog, and maps back to `u`.
pub fn reduced_1d_evolve(g: &RadialField, times: &[f64], cfg: &WaveConfig) -> Result<ReducedTrajectory> {
    if !g.is_dirichlet() {
        return Err(invalid("g", "data must vanish at r = 1"));
    }
    let grid = *g.grid();
    let dt = cfg.time_step(&grid)?;
    let horizon = times.last().copied().unwrap_or(0.0);
    cfg.check_support(g, horizon)?;
    let steps = output_steps(times, dt)?;

    let n = grid.n();
    let dy = grid.dr();
    // node j of the full line sits at y = (j - c) dy
    let c = n - 1;
    let len = 2 * n - 1;
    let mut g_odd = vec![0.0; len];
    for i in 1..n {
        let v = grid.radius(i).sqrt() * g.values()[i];
        g_odd[c + i] = v;
        g_odd[c - i] = -v;
    }
    let pot: Vec<f64> = (0..len).map(|j| reduced_potential((j as f64 - c as f64) * dy)).collect();
    let lam = (dt / dy).powi(2);
    let dt2 = dt * dt;

    // level 0 is zero; Taylor start Ũ¹ = dt g̃ + dt²/2 (Ũ_yy + mŨ)(0) = dt g̃
    let mut prev = vec![0.0; len];
    let mut cur: Vec<f64> = g_odd.iter().map(|v| dt * v).collect();
    let mut next = vec![0.0; len];
    let mut step = 1usize;
    let mut center_residual = 0.0f64;
    let mut min_reduced = 0.0f64;
    let mut min_u = 0.0f64;
    let inv_sqrt: Vec<f64> = grid.radii().map(|r| 1.0 / r.sqrt()).collect();

    let recover = |vals: &[f64], t: f64| -> Vec<f64> {
        let damp = (-0.5 * t).exp();
        (0..n).map(|i| damp * vals[c + i] / grid.radius(i).sqrt()).collect::<Vec<f64>>()
    };

    let mut states: Vec<WaveState> = Vec::with_capacity(steps.len());
    let mut last_step = None;
    for &k in &steps {
        if k == 0 {
            states.push(WaveState {
                u: RadialField::zeros(grid),
                v: g.clone(),
            });
            continue;
        }
        if last_step == Some(k) {
            let again = states.last().expect("a state was stored").clone();
            states.push(again);
            continue;
        }
        let mut older = Vec::new();
        let mut at = Vec::new();
        while step < k + 1 {
            if step == k {
                older = prev.clone();
                at = cur.clone();
            }
            for j in 1..len - 1 {
                let u = cur[j];
                next[j] = 2.0 * u - prev[j] + lam * (cur[j + 1] - 2.0 * u + cur[j - 1]) + dt2 * pot[j] * u;
            }
            if !next[c].is_finite() {
                return Err(Error::NonFinite);
            }
            center_residual = center_residual.max(next[c].abs());
            let low = next[c..].iter().copied().fold(f64::INFINITY, f64::min);
            if low < 0.0 {
                min_reduced = min_reduced.min(low);
                let damp = (-0.5 * (step + 1) as f64 * dt).exp();
                let low_u = next[c..].iter().zip(&inv_sqrt).map(|(v, w)| v * w).fold(f64::INFINITY, f64::min);
                min_u = min_u.min(damp * low_u);
            }
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
            step += 1;
        }
        let t = k as f64 * dt;
        let u = recover(&at, t);
        // ∂_t u = e^{-t/2} r^{-1/2} (Ũ_t - Ũ / 2)
        let ut: Vec<f64> = (0..len).map(|j| (cur[j] - older[j]) / (2.0 * dt)).collect();
        let damp = (-0.5 * t).exp();
        let v: Vec<f64> = (0..n)
            .map(|i| damp * (ut[c + i] - 0.5 * at[c + i]) / grid.radius(i).sqrt())
            .collect();
        states.push(WaveState {
            u: RadialField::from_values(grid, u)?,
            v: RadialField::from_values(grid, v)?,
        });
        last_step = Some(k);
    }
    Ok(ReducedTrajectory {
        trajectory: Trajectory {
            grid,
            dt,
            times: steps.iter().map(|&k| k as f64 * dt).collect(),
            states,
        },
        center_residual,
        min_reduced,
        min_u,
    })
}
