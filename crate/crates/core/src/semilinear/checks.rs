use serde::Serialize;

use crate::error::{invalid, Result};
use crate::grid::{norm, Measure, RadialField};
use crate::wave::{propagate, Source};

use super::{RunStatus, SemilinearRun};

#[derive(Debug, Clone, Serialize)]
pub struct DuhamelReport {
    pub sample_times: Vec<f64>,
    /// `‖u_rec(t) - u(t)‖₂ / ‖u(t)‖₂` (absolute when `u(t) = 0`).
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub dt: f64,
    pub ds: f64,
}

/// Rebuilds `u(t) = εS(t)g + ∫_0^t S(t-s)|u(s)|^p ds` from the snapshots of
/// `run` (trapezoid rule in `s` on the snapshot lattice) and compares it with
/// the directly computed `u(t)`.
pub fn duhamel_residual_check(run: &SemilinearRun, sample_times: &[f64]) -> Result<DuhamelReport> {
    let stride = run
        .snapshot_stride
        .ok_or_else(|| invalid("run", "was recorded without snapshots"))?;
    if !matches!(run.status, RunStatus::Completed { .. }) {
        return Err(invalid("run", "must have completed without blow-up"));
    }
    let dt = run.dt;
    let ds = stride as f64 * dt;
    let mut sample_steps = Vec::with_capacity(sample_times.len());
    for &t in sample_times {
        let k = (t / dt).round() as usize;
        if (k as f64 * dt - t).abs() > 1e-9 * t.max(1.0) || !k.is_multiple_of(stride) {
            return Err(invalid("sample_times", format!("{t} is not on the snapshot lattice (ds = {ds})")));
        }
        if !run.snapshots.iter().any(|&(s, _)| s == k) {
            return Err(invalid("sample_times", format!("{t} lies beyond the recorded run")));
        }
        sample_steps.push(k);
    }
    if sample_steps.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("sample_times", "must be nondecreasing"));
    }
    let grid = run.grid;
    let last = sample_steps.last().copied().unwrap_or(0);
    let durations = |from: usize| -> Vec<f64> {
        sample_steps
            .iter()
            .filter(|&&k| k >= from)
            .map(|&k| (k - from) as f64 * dt)
            .collect()
    };

    let mut rebuilt: Vec<Vec<f64>> = vec![vec![0.0; grid.n()]; sample_steps.len()];
    let free = propagate(&run.g.scaled(run.epsilon), &durations(0), dt, Source::None)?;
    for (acc, s) in rebuilt.iter_mut().zip(&free.states) {
        acc.copy_from_slice(s.u.values());
    }
    if run.source_enabled {
        for (step, u) in run.snapshots.iter().filter(|(s, _)| *s <= last) {
            let f = u.map(|v| v.abs().powf(run.p));
            if f.max_abs() == 0.0 {
                continue;
            }
            let traj = propagate(&f, &durations(*step), dt, Source::None)?;
            let offset = sample_steps.len() - traj.states.len();
            for (i, s) in traj.states.iter().enumerate() {
                let k = sample_steps[offset + i];
                // trapezoid weight: half at either end of [0, t]
                let w = if *step == 0 || *step == k { 0.5 * ds } else { ds };
                for (a, b) in rebuilt[offset + i].iter_mut().zip(s.u.values()) {
                    *a += w * b;
                }
            }
        }
    }

    let mut deviations = Vec::with_capacity(sample_steps.len());
    for (k, rec) in sample_steps.iter().zip(rebuilt) {
        let direct = &run.snapshots.iter().find(|(s, _)| s == k).expect("checked above").1;
        let rec = RadialField::from_values(grid, rec)?;
        let diff = norm(&rec.lin_comb(1.0, direct, -1.0)?, 2.0, Measure::Lebesgue)?;
        let scale = norm(direct, 2.0, Measure::Lebesgue)?;
        deviations.push(if scale > 0.0 { diff / scale } else { diff });
    }
    Ok(DuhamelReport {
        sample_times: sample_times.to_vec(),
        max_deviation: deviations.iter().copied().fold(0.0, f64::max),
        deviations,
        dt,
        ds,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GlobalDecayReport {
    pub times: Vec<f64>,
    /// `‖∇u‖₂ (1+t)(1+log(1+t))`.
    pub grad_ratios: Vec<f64>,
    /// `‖∂_t u‖₂ (1+t)^{3/2}(1+log(1+t))`.
    pub dtu_ratios: Vec<f64>,
    /// `‖u‖_{L¹_dμ}`.
    pub l1dmu: Vec<f64>,
    /// `(‖∇u‖₂² + ‖∂_t u‖₂²)(1+t)²(1+log(1+t))²`.
    pub energy_ratios: Vec<f64>,
    /// Suprema of the four series in the order above.
    pub suprema: [f64; 4],
    /// Values at the first recorded time `>= 10`.
    pub first: [f64; 4],
    /// Values at the last recorded time.
    pub last: [f64; 4],
    pub t_first: f64,
    pub t_last: f64,
}

impl GlobalDecayReport {
    /// Every series ends within `factor` times its value at `t_first`.
    pub fn bounded(&self, factor: f64) -> bool {
        self.first.iter().zip(&self.last).all(|(a, b)| *b <= factor * a)
    }
}

/// Weighted decay ratios of a completed run with `p > 2`, over `t >= 10`.
pub fn global_decay_report(run: &SemilinearRun) -> Result<GlobalDecayReport> {
    if !(run.p > 2.0) {
        return Err(invalid("run", format!("needs p > 2, got {}", run.p)));
    }
    if !matches!(run.status, RunStatus::Completed { .. }) {
        return Err(invalid("run", "must have completed without blow-up"));
    }
    let rows: Vec<_> = run.functionals.iter().filter(|f| f.t >= 10.0 - 1e-9).collect();
    if rows.is_empty() {
        return Err(invalid("run", "horizon must reach t = 10"));
    }
    let mut report = GlobalDecayReport {
        times: Vec::with_capacity(rows.len()),
        grad_ratios: Vec::with_capacity(rows.len()),
        dtu_ratios: Vec::with_capacity(rows.len()),
        l1dmu: Vec::with_capacity(rows.len()),
        energy_ratios: Vec::with_capacity(rows.len()),
        suprema: [0.0; 4],
        first: [0.0; 4],
        last: [0.0; 4],
        t_first: rows[0].t,
        t_last: rows[rows.len() - 1].t,
    };
    for f in &rows {
        let a = 1.0 + f.t;
        let l = 1.0 + f.t.ln_1p();
        let values = [
            f.grad_l2 * a * l,
            f.dtu_l2 * a.powf(1.5) * l,
            f.l1dmu,
            (f.grad_l2 * f.grad_l2 + f.dtu_l2 * f.dtu_l2) * (a * l).powi(2),
        ];
        report.times.push(f.t);
        report.grad_ratios.push(values[0]);
        report.dtu_ratios.push(values[1]);
        report.l1dmu.push(values[2]);
        report.energy_ratios.push(values[3]);
        for (s, v) in report.suprema.iter_mut().zip(values) {
            *s = s.max(v);
        }
    }
    let pick = |i: usize| {
        [
            report.grad_ratios[i],
            report.dtu_ratios[i],
            report.l1dmu[i],
            report.energy_ratios[i],
        ]
    };
    report.first = pick(0);
    report.last = pick(rows.len() - 1);
    Ok(report)
}
