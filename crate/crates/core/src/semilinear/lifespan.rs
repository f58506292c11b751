use std::io::Write;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::grid::RadialField;
use crate::heat::{heat_until, HeatConfig};
use crate::weight::int_h_power;

use super::{semilinear_evolve, SemilinearConfig, SemilinearRun};

#[derive(Debug, Clone, Serialize)]
pub struct BlowupDecision {
    pub declared: bool,
    /// Threshold crossing time of each run, coarsest first.
    pub crossing_times: Vec<Option<f64>>,
    /// Relative change between the last two crossing times.
    pub relative_change: Option<f64>,
    /// `X_t` at the end of the finest run over its value at `t = 0.1`.
    pub xt_growth: f64,
    /// Same for `‖u‖_∞`.
    pub sup_growth: f64,
}

fn growth(run: &SemilinearRun, pick: impl Fn(&super::Functionals) -> f64) -> f64 {
    let early = run.functionals_at(0.1).map_or(0.0, &pick);
    let late = run.functionals.last().map_or(0.0, &pick);
    if early > 0.0 {
        late / early
    } else {
        0.0
    }
}

/// Blow-up is declared when the two finest of `runs` (ordered by decreasing
/// `dt`) both cross the threshold and their crossing times agree to `tol`.
pub fn detect_blowup(runs: &[SemilinearRun], tol: f64) -> BlowupDecision {
    let crossing_times: Vec<Option<f64>> = runs.iter().map(|r| r.status.blow_time()).collect();
    let relative_change = match crossing_times.as_slice() {
        [.., Some(a), Some(b)] => Some((a - b).abs() / b),
        _ => None,
    };
    let (xt_growth, sup_growth) = runs.last().map_or((0.0, 0.0), |r| (growth(r, |f| f.xt), growth(r, |f| f.sup)));
    BlowupDecision {
        declared: relative_change.is_some_and(|c| c < tol),
        crossing_times,
        relative_change,
        xt_growth,
        sup_growth,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LifespanRecord {
    pub p: f64,
    pub epsilon: f64,
    /// Converged crossing time, or the horizon when no blow-up was seen.
    #[serde(rename = "T_measured")]
    pub t_measured: f64,
    pub blew_up: bool,
    #[serde(rename = "converged")]
    pub refinement_converged: bool,
    /// `ε^{p-1} ∫_0^T h^{p-1}`.
    #[serde(rename = "Q_value")]
    pub q_value: f64,
    pub relative_change: Option<f64>,
    pub grid_n: usize,
    pub r_max: f64,
    pub dt: f64,
    pub error: Option<String>,
}

impl LifespanRecord {
    /// Row for a sweep point whose run failed outright.
    pub fn failed(p: f64, epsilon: f64, error: String) -> Self {
        Self {
            p,
            epsilon,
            t_measured: f64::NAN,
            blew_up: false,
            refinement_converged: false,
            q_value: f64::NAN,
            relative_change: None,
            grid_n: 0,
            r_max: f64::NAN,
            dt: f64::NAN,
            error: Some(error),
        }
    }
}

/// Measures the lifespan by running to blow-up and halving `dt` until the
/// crossing time moves by less than `cfg.tol_converge`.
pub fn lifespan_estimate(g: &RadialField, epsilon: f64, p: f64, horizon: f64, cfg: &SemilinearConfig) -> Result<LifespanRecord> {
    let base = semilinear_evolve(g, epsilon, p, horizon, cfg)?;
    let dt0 = base.dt;
    let mut runs = vec![base];
    let mut decision = detect_blowup(&runs, cfg.tol_converge);
    if runs[0].blew_up() {
        for level in 1..=cfg.max_refinements {
            let mut refined = *cfg;
            refined.wave.dt = Some(dt0 / f64::powi(2.0, level as i32));
            refined.snapshot_stride = None;
            runs.push(semilinear_evolve(g, epsilon, p, horizon, &refined)?);
            decision = detect_blowup(&runs, cfg.tol_converge);
            if decision.declared || !runs.last().expect("just pushed").blew_up() {
                break;
            }
        }
    }
    let finest = runs.last().expect("at least one run");
    let blew_up = finest.blew_up();
    let t_measured = finest.status.blow_time().unwrap_or(horizon);
    Ok(LifespanRecord {
        p,
        epsilon,
        t_measured,
        blew_up,
        refinement_converged: decision.declared,
        q_value: epsilon.powf(p - 1.0) * int_h_power(t_measured, p)?,
        relative_change: decision.relative_change,
        grid_n: finest.grid.n(),
        r_max: finest.grid.r_max(),
        dt: finest.dt,
        error: None,
    })
}

/// `p,epsilon,T_measured,converged,Q_value,grid_n,dt` CSV.
pub fn write_sweep_csv<W: Write>(records: &[LifespanRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["p", "epsilon", "T_measured", "converged", "Q_value", "grid_n", "dt"])?;
    for r in records {
        w.write_record([
            format!("{}", r.p),
            format!("{:.17e}", r.epsilon),
            format!("{:.17e}", r.t_measured),
            r.refinement_converged.to_string(),
            format!("{:.17e}", r.q_value),
            r.grid_n.to_string(),
            format!("{:.17e}", r.dt),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SupersolutionLifespan {
    /// Zero of `1 - (p-1) ε^{p-1} ∫_0^t ‖e^{sΔ}f‖_∞^{p-1} ds`, or the horizon.
    pub time: f64,
    pub reached: bool,
    pub horizon: f64,
}

/// Blow-up time of `α(t) = ε (1 - (p-1) ε^{p-1} ∫_0^t ‖e^{sΔ}f‖_∞^{p-1} ds)^{-1/(p-1)}`.
pub fn heat_supersolution_lifespan(f: &RadialField, epsilon: f64, p: f64, horizon: f64, cfg: &HeatConfig) -> Result<SupersolutionLifespan> {
    if !f.is_nonnegative() {
        return Err(invalid("f", "must be nonnegative"));
    }
    if !(p > 1.0) {
        return Err(invalid("p", format!("need p > 1, got {p}")));
    }
    if !(epsilon >= 0.0) {
        return Err(invalid("epsilon", format!("must be >= 0, got {epsilon}")));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(invalid("horizon", format!("must be finite and positive, got {horizon}")));
    }
    let target = 1.0 / ((p - 1.0) * epsilon.powf(p - 1.0));
    let f = f.extended_to(cfg.required_r_max(f.support_radius(), horizon));
    let mut integral = 0.0;
    let mut t_prev = 0.0;
    let mut g_prev = f.max_abs().powf(p - 1.0);
    let mut hit = None;
    heat_until(&f, &[horizon], cfg, |t, w| {
        let g = w.iter().fold(0.0f64, |m, v| m.max(v.abs())).powf(p - 1.0);
        let piece = 0.5 * (t - t_prev) * (g + g_prev);
        if integral + piece >= target {
            // linear interpolation inside the step
            hit = Some(t_prev + (t - t_prev) * (target - integral) / piece);
            return false;
        }
        integral += piece;
        t_prev = t;
        g_prev = g;
        true
    })?;
    Ok(SupersolutionLifespan {
        time: hit.unwrap_or(horizon),
        reached: hit.is_some(),
        horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DataSpec;
    use crate::semilinear::RunStatus;

    #[test]
    fn linear_runs_never_blow_up() {
        let g = DataSpec::default().build(0.1);
        let cfg = SemilinearConfig {
            source_enabled: false,
            ..SemilinearConfig::default()
        };
        let run = semilinear_evolve(&g, 100.0, 2.0, 20.0, &cfg).unwrap();
        assert!(matches!(run.status, RunStatus::Completed { .. }));
        assert!(!detect_blowup(&[run.clone(), run], 0.02).declared);
    }

    #[test]
    fn lifespan_shrinks_as_amplitude_grows() {
        let g = DataSpec::default().build(0.1);
        let cfg = SemilinearConfig::default();
        let a = lifespan_estimate(&g, 100.0, 2.0, 50.0, &cfg).unwrap();
        let b = lifespan_estimate(&g, 400.0, 2.0, 50.0, &cfg).unwrap();
        assert!(a.blew_up && b.blew_up);
        assert!(a.refinement_converged && b.refinement_converged, "{a:?} {b:?}");
        assert!(b.t_measured < a.t_measured && b.t_measured > 0.0);
    }

    #[test]
    fn supersolution_lifespan_decreases_in_epsilon() {
        let f = DataSpec::default().build(0.1);
        let cfg = HeatConfig::default();
        let small = heat_supersolution_lifespan(&f, 50.0, 2.0, 50.0, &cfg).unwrap();
        let large = heat_supersolution_lifespan(&f, 200.0, 2.0, 50.0, &cfg).unwrap();
        assert!(small.reached && large.reached);
        assert!(large.time < small.time);
        let global = heat_supersolution_lifespan(&f, 1e-3, 3.0, 50.0, &cfg).unwrap();
        assert!(!global.reached);
    }

    #[test]
    fn sweep_csv_header() {
        let mut buf = Vec::new();
        write_sweep_csv(&[LifespanRecord::failed(1.5, 0.1, "x".into())], &mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("p,epsilon,T_measured,converged,Q_value,grid_n,dt\n"));
    }
}
