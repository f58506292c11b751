//! Linear damped wave propagation `S(t)g` (data `(0, g)`) on the exterior
//! of the unit disk under radial symmetry.
//!
//! Two independent discretizations are provided: a leapfrog scheme for the
//! radial equation `u_tt - u_rr - u_r/r + u_t = 0`, and a leapfrog scheme for
//! the reduced problem `Ũ_tt - Ũ_yy = m(y) Ũ` obtained from
//! `U = e^{t/2} r^{1/2} u` and odd reflection across `r = 1`.

mod estimates;
mod modal;
mod radial;
mod reduced;

pub use estimates::{
    l1dmu_bound_check, log_matsumura_report, matsumura_diff_report, positivity_check, L1BoundReport, LogMatsumuraReport,
    MatsumuraDiffReport, PositivityReport, PositivityStatus, TOL_POS,
};
pub use modal::{abstract_matsumura_verify, modal_heat, modal_wave, ModalReport};
pub(crate) use radial::propagate;
pub use radial::{dw_linear_evolve, RadialLeapfrog, Source};
pub use reduced::{reduced_1d_evolve, reduced_potential, ReducedTrajectory};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{grad_norm_sq, norm, Measure, RadialField, RadialGrid};

/// How far from the data support the outer Dirichlet boundary must sit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OuterRule {
    /// `r_max >= r_supp + T + margin`: the outer boundary is never reached.
    FinitePropagation,
    /// The wave front carries the factor `e^{-t/2}`; past
    /// `t_front = 2 log(1/tol)` only the diffusive part matters, which is
    /// confined to `sqrt(4 T log(1/tol))` up to a relative `tol`.
    DampedFront { tol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WaveConfig {
    pub cfl_safety: f64,
    /// Explicit time step; `None` means the largest admissible one.
    pub dt: Option<f64>,
    pub margin: f64,
    pub outer: OuterRule,
}

impl Default for WaveConfig {
    fn default() -> Self {
        Self {
            cfl_safety: 0.5,
            dt: None,
            margin: 5.0,
            outer: OuterRule::FinitePropagation,
        }
    }
}

/// Output times on a 0.1 lattice land exactly on steps.
const TIME_QUANTUM: f64 = 0.1;

impl WaveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(invalid("cfl_safety", format!("must lie in (0, 1], got {}", self.cfl_safety)));
        }
        if !(self.margin >= 0.0) {
            return Err(invalid("margin", "must be >= 0"));
        }
        if let OuterRule::DampedFront { tol } = self.outer {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(invalid("outer.tol", "must lie in (0, 1)"));
            }
        }
        Ok(())
    }

    /// Time step for `grid`. The automatic step is the largest divisor of 0.1
    /// not exceeding `cfl_safety * dr`.
    pub fn time_step(&self, grid: &RadialGrid) -> Result<f64> {
        self.validate()?;
        let limit = self.cfl_safety * grid.dr();
        match self.dt {
            Some(dt) if !(dt > 0.0) => Err(invalid("dt", format!("must be positive, got {dt}"))),
            Some(dt) if dt > limit * (1.0 + 1e-12) => Err(Error::Cfl { dt, limit }),
            Some(dt) => Ok(dt),
            None => Ok(TIME_QUANTUM / (TIME_QUANTUM / limit - 1e-9).ceil()),
        }
    }

    /// Distance the solution may travel (to tolerance) by `horizon`.
    pub fn reach(&self, horizon: f64) -> f64 {
        match self.outer {
            OuterRule::FinitePropagation => horizon,
            OuterRule::DampedFront { tol } => {
                let l = (1.0 / tol).ln();
                horizon.min(2.0 * l) + (4.0 * horizon * l).sqrt()
            }
        }
    }

    pub fn required_r_max(&self, r_supp: f64, horizon: f64) -> f64 {
        r_supp + self.reach(horizon) + self.margin
    }

    pub fn check_support(&self, g: &RadialField, horizon: f64) -> Result<()> {
        let limit = g.grid().r_max() - self.reach(horizon) - self.margin;
        let r_supp = g.support_radius();
        if r_supp > limit + 1e-9 {
            return Err(Error::Support { r_supp, limit });
        }
        Ok(())
    }

    /// Pads `g` with zeros until the support rule holds for `horizon`.
    pub fn fit_grid(&self, g: &RadialField, horizon: f64) -> RadialField {
        g.extended_to(self.required_r_max(g.support_radius(), horizon) + g.grid().dr())
    }
}

/// `(u, ∂_t u)` at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    pub u: RadialField,
    pub v: RadialField,
}

impl WaveState {
    pub fn grad_l2(&self) -> f64 {
        grad_norm_sq(&self.u).sqrt()
    }

    pub fn dtu_l2(&self) -> f64 {
        norm(&self.v, 2.0, Measure::Lebesgue).expect("p = 2 is valid")
    }

    /// `‖∇u‖² + ‖∂_t u‖²`.
    pub fn energy(&self) -> f64 {
        grad_norm_sq(&self.u) + self.dtu_l2().powi(2)
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: RadialGrid,
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<WaveState>,
}

impl Trajectory {
    /// State stored at (the step nearest to) `t`.
    pub fn at(&self, t: f64) -> Option<&WaveState> {
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= 0.5 * self.dt)
            .map(|i| &self.states[i])
    }

    /// Long-format `t,r,u,v` CSV.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "r", "u", "v"])?;
        for (t, s) in self.times.iter().zip(&self.states) {
            for (i, r) in self.grid.radii().enumerate() {
                w.write_record([
                    format!("{t:.17e}"),
                    format!("{r:.17e}"),
                    format!("{:.17e}", s.u.values()[i]),
                    format!("{:.17e}", s.v.values()[i]),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Maps requested output times to step indices on the `dt` lattice.
pub(crate) fn output_steps(times: &[f64], dt: f64) -> Result<Vec<usize>> {
    if let Some(&bad) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(invalid("times", format!("must be finite and >= 0, got {bad}")));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("times", "must be nondecreasing"));
    }
    Ok(times.iter().map(|&t| (t / dt).round() as usize).collect())
}
