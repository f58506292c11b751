//! The semilinear problem `u_tt - Δu + u_t = |u|^p` with data `(0, εg)`:
//! evolution with blow-up detection, lifespan measurement and the
//! consistency checks built on top of it.

mod checks;
mod lifespan;

pub use checks::{duhamel_residual_check, global_decay_report, DuhamelReport, GlobalDecayReport};
pub use lifespan::{
    detect_blowup, heat_supersolution_lifespan, lifespan_estimate, write_sweep_csv, BlowupDecision, LifespanRecord, SupersolutionLifespan,
};

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{grad_norm_sq, norm, Measure, RadialField, RadialGrid};
use crate::wave::{RadialLeapfrog, Source, WaveConfig};
use crate::weight::h_unchecked;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SemilinearConfig {
    pub wave: WaveConfig,
    /// `‖u‖_∞` level treated as blow-up.
    pub m_blow: f64,
    /// Functionals are recorded on a geometric schedule with this many
    /// points per decade (plus every 0.1 up to t = 1).
    pub records_per_decade: usize,
    /// Store `u` every this many steps (needed by the Duhamel check).
    pub snapshot_stride: Option<usize>,
    /// Switches the `|u|^p` term off, leaving `εS(t)g`.
    pub source_enabled: bool,
    /// Maximum number of `dt` halvings in a lifespan estimate.
    pub max_refinements: usize,
    /// Relative change in the crossing time accepted as converged.
    pub tol_converge: f64,
}

impl Default for SemilinearConfig {
    fn default() -> Self {
        Self {
            wave: WaveConfig::default(),
            m_blow: 1e8,
            records_per_decade: 40,
            snapshot_stride: None,
            source_enabled: true,
            max_refinements: 3,
            tol_converge: 0.02,
        }
    }
}

impl SemilinearConfig {
    pub fn validate(&self) -> Result<()> {
        self.wave.validate()?;
        if !(self.m_blow > 1.0) || !self.m_blow.is_finite() {
            return Err(invalid("m_blow", format!("must be finite and > 1, got {}", self.m_blow)));
        }
        if self.records_per_decade == 0 {
            return Err(invalid("records_per_decade", "must be positive"));
        }
        if self.snapshot_stride == Some(0) {
            return Err(invalid("snapshot_stride", "must be positive"));
        }
        if !(self.tol_converge > 0.0) {
            return Err(invalid("tol_converge", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RunStatus {
    Completed { horizon: f64 },
    BlewUp { t_blow: f64 },
}

impl RunStatus {
    pub fn blow_time(&self) -> Option<f64> {
        match *self {
            RunStatus::BlewUp { t_blow } => Some(t_blow),
            RunStatus::Completed { .. } => None,
        }
    }
}

/// Diagnostic functionals at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Functionals {
    pub t: f64,
    pub l1dmu: f64,
    pub grad_l2: f64,
    pub dtu_l2: f64,
    pub sup: f64,
    /// `sup_{s<=t} (‖u(s)‖_{L¹_dμ} + ‖∇u(s)‖₂ / h(s))`.
    pub xt: f64,
}

#[derive(Debug, Clone)]
pub struct SemilinearRun {
    pub p: f64,
    pub epsilon: f64,
    /// Unscaled datum on the run grid.
    pub g: RadialField,
    pub grid: RadialGrid,
    pub dt: f64,
    pub source_enabled: bool,
    pub status: RunStatus,
    pub functionals: Vec<Functionals>,
    /// `(step, u)` pairs every `snapshot_stride` steps.
    pub snapshots: Vec<(usize, RadialField)>,
    pub snapshot_stride: Option<usize>,
}

impl SemilinearRun {
    pub fn blew_up(&self) -> bool {
        matches!(self.status, RunStatus::BlewUp { .. })
    }

    /// Functionals recorded nearest to `t`.
    pub fn functionals_at(&self, t: f64) -> Option<&Functionals> {
        self.functionals.iter().min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
    }

    /// `t,l1dmu,grad_l2,dtu_l2,sup,xt` CSV.
    pub fn write_functionals_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "l1dmu", "grad_l2", "dtu_l2", "sup", "xt"])?;
        for f in &self.functionals {
            w.write_record([f.t, f.l1dmu, f.grad_l2, f.dtu_l2, f.sup, f.xt].map(|v| format!("{v:.17e}")))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Steps at which functionals are recorded: every 0.1 up to 1, then
/// `records_per_decade` geometric points per decade, then the horizon.
fn record_schedule(horizon: f64, dt: f64, per_decade: usize) -> Vec<usize> {
    let last = (horizon / dt).round() as usize;
    let mut steps: Vec<usize> = (0..=10).map(|k| (0.1 * k as f64 / dt).round() as usize).collect();
    let mut j = 1usize;
    loop {
        let t = 10f64.powf(j as f64 / per_decade as f64);
        if t >= horizon {
            break;
        }
        steps.push((t / dt).round() as usize);
        j += 1;
    }
    steps.push(last);
    steps.retain(|&k| k <= last);
    steps.sort_unstable();
    steps.dedup();
    steps
}

fn functionals(u: &RadialField, v: &RadialField, t: f64, xt_prev: f64) -> Functionals {
    let l1dmu = norm(u, 1.0, Measure::LogWeighted).expect("p = 1 is valid");
    let grad_l2 = grad_norm_sq(u).sqrt();
    let dtu_l2 = norm(v, 2.0, Measure::Lebesgue).expect("p = 2 is valid");
    Functionals {
        t,
        l1dmu,
        grad_l2,
        dtu_l2,
        sup: u.max_abs(),
        xt: xt_prev.max(l1dmu + grad_l2 / h_unchecked(t)),
    }
}

/// Runs `u_tt - Δu + u_t = |u|^p`, `(u, u_t)(0) = (0, εg)` until
/// `‖u‖_∞ >= m_blow` or `horizon`. The grid of `g` is padded to satisfy the
/// outer-boundary rule of `cfg.wave` for `horizon`.
pub fn semilinear_evolve(g: &RadialField, epsilon: f64, p: f64, horizon: f64, cfg: &SemilinearConfig) -> Result<SemilinearRun> {
    cfg.validate()?;
    if !(p > 1.0) {
        return Err(invalid("p", format!("need p > 1, got {p}")));
    }
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(invalid("epsilon", format!("must be finite and >= 0, got {epsilon}")));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(invalid("horizon", format!("must be finite and positive, got {horizon}")));
    }
    if !g.is_dirichlet() {
        return Err(invalid("g", "data must vanish at r = 1"));
    }
    let g = cfg.wave.fit_grid(g, horizon);
    let grid = *g.grid();
    let dt = cfg.wave.time_step(&grid)?;
    let data = g.scaled(epsilon);
    let source = if cfg.source_enabled { Source::Power(p) } else { Source::None };
    let mut lf = RadialLeapfrog::new(&data, dt, source)?;

    let schedule = record_schedule(horizon, dt, cfg.records_per_decade);
    let last = *schedule.last().expect("schedule ends at the horizon");
    let mut next_record = 1usize;
    let mut out = Vec::with_capacity(schedule.len());
    let zero = RadialField::zeros(grid);
    out.push(functionals(&zero, &data, 0.0, 0.0));
    let mut snapshots = Vec::new();
    if cfg.snapshot_stride.is_some() {
        snapshots.push((0, zero.clone()));
    }
    // (step, u^{k-1}, u^k) awaiting u^{k+1} for the centred velocity
    let mut pending: Option<(usize, Vec<f64>, Vec<f64>)> = None;
    let mut status = RunStatus::Completed { horizon: last as f64 * dt };
    let mut sup_prev = 0.0f64;

    loop {
        let k = lf.step_index();
        if let Some(stride) = cfg.snapshot_stride {
            if k % stride == 0 {
                snapshots.push((k, RadialField::from_values(grid, lf.current().to_vec())?));
            }
        }
        if next_record < schedule.len() && schedule[next_record] == k {
            pending = Some((k, lf.previous().to_vec(), lf.current().to_vec()));
            next_record += 1;
        }
        if k >= last && pending.is_none() {
            break;
        }
        let ok = lf.advance();
        let sup = lf.sup();
        if !ok || sup >= cfg.m_blow {
            let t_blow = if ok && sup.is_finite() && sup_prev > 0.0 {
                // log-linear interpolation of the threshold crossing
                let frac = (cfg.m_blow.ln() - sup_prev.ln()) / (sup.ln() - sup_prev.ln());
                (k as f64 + frac.clamp(0.0, 1.0)) * dt
            } else {
                k as f64 * dt
            };
            status = RunStatus::BlewUp { t_blow };
            // last finite level, with a one-sided velocity
            let (older, newer) = (lf.previous(), lf.current());
            let u = RadialField::from_values(grid, newer.to_vec())?;
            let v: Vec<f64> = older.iter().zip(newer).map(|(a, b)| (b - a) / dt).collect();
            let xt = out.last().map_or(0.0, |f: &Functionals| f.xt);
            out.push(functionals(&u, &RadialField::from_values(grid, v)?, lf.time(), xt));
            break;
        }
        sup_prev = sup;
        if let Some((step, older, at)) = pending.take() {
            let v: Vec<f64> = older.iter().zip(lf.current()).map(|(a, b)| (b - a) / (2.0 * dt)).collect();
            let xt = out.last().map_or(0.0, |f: &Functionals| f.xt);
            let u = RadialField::from_values(grid, at)?;
            out.push(functionals(&u, &RadialField::from_values(grid, v)?, step as f64 * dt, xt));
        }
        if lf.step_index() > last && pending.is_none() {
            break;
        }
    }
    if out.iter().any(|f| !f.xt.is_finite()) && !matches!(status, RunStatus::BlewUp { .. }) {
        return Err(Error::NonFinite);
    }
    Ok(SemilinearRun {
        p,
        epsilon,
        g,
        grid,
        dt,
        source_enabled: cfg.source_enabled,
        status,
        functionals: out,
        snapshots,
        snapshot_stride: cfg.snapshot_stride,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DataSpec;

    #[test]
    fn zero_amplitude_completes_with_zero_solution() {
        let g = DataSpec::default().build(0.1);
        let run = semilinear_evolve(&g, 0.0, 2.0, 5.0, &SemilinearConfig::default()).unwrap();
        assert!(matches!(run.status, RunStatus::Completed { .. }));
        assert!(run.functionals.iter().all(|f| f.sup == 0.0 && f.xt == 0.0));
    }

    #[test]
    fn schedule_hits_decades_exactly() {
        let dt = 0.025;
        let s = record_schedule(1000.0, dt, 40);
        for t in [0.1, 1.0, 10.0, 100.0, 1000.0] {
            assert!(s.contains(&((t / dt).round() as usize)), "{t}");
        }
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn large_data_blows_up_and_xt_is_monotone() {
        let g = DataSpec::default().build(0.1);
        let run = semilinear_evolve(&g, 50.0, 2.0, 20.0, &SemilinearConfig::default()).unwrap();
        assert!(run.blew_up());
        assert!(run.functionals.windows(2).all(|w| w[1].xt >= w[0].xt));
        assert!(run.functionals.windows(2).all(|w| w[1].t >= w[0].t));
    }

    #[test]
    fn functionals_csv_has_header() {
        let g = DataSpec::default().build(0.1);
        let run = semilinear_evolve(&g, 0.1, 3.0, 2.0, &SemilinearConfig::default()).unwrap();
        let mut buf = Vec::new();
        run.write_functionals_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,l1dmu,grad_l2,dtu_l2,sup,xt\n"));
        assert_eq!(text.lines().count(), run.functionals.len() + 1);
    }
}
