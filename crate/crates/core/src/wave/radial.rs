use crate::error::{invalid, Error, Result};
use crate::grid::{RadialField, RadialGrid};

use super::{output_steps, Trajectory, WaveConfig, WaveState};

/// Right-hand side added to the damped wave equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    None,
    /// `|u|^p`.
    Power(f64),
}

impl Source {
    #[inline]
    fn eval(self, u: f64) -> f64 {
        match self {
            Source::None => 0.0,
            Source::Power(p) => {
                let a = u.abs();
                if p == 2.0 {
                    a * a
                } else if p == 3.0 {
                    a * a * a
                } else if p == 1.5 {
                    a * a.sqrt()
                } else {
                    a.powf(p)
                }
            }
        }
    }
}

/// Leapfrog integrator for `u_tt - Δu + u_t = F(u)` on a radial grid with
/// Dirichlet nodes at both ends. The damping is the centred average
/// `(u⁺ - u⁻) / 2dt`, so each node update is a scalar division.
pub struct RadialLeapfrog {
    grid: RadialGrid,
    dt: f64,
    source: Source,
    lower: Vec<f64>,
    upper: Vec<f64>,
    prev: Vec<f64>,
    cur: Vec<f64>,
    next: Vec<f64>,
    step: usize,
    // last node that can be nonzero after the current step
    active: usize,
    sup: f64,
}

impl RadialLeapfrog {
    /// Starts from `(u, u_t)(0) = (0, g)`, taking the Taylor step
    /// `u¹ = dt g + dt²/2 (Δ0 - g + F(0))`.
    pub fn new(g: &RadialField, dt: f64, source: Source) -> Result<Self> {
        let grid = *g.grid();
        if !(dt > 0.0) {
            return Err(invalid("dt", format!("must be positive, got {dt}")));
        }
        if dt > grid.dr() * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt, limit: grid.dr() });
        }
        let n = grid.n();
        let inv = 1.0 / (grid.dr() * grid.dr());
        let mut lower = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for i in 1..n - 1 {
            let c = 0.5 * grid.dr() / grid.radius(i);
            lower[i] = (1.0 - c) * inv;
            upper[i] = (1.0 + c) * inv;
        }
        let f0 = source.eval(0.0);
        let mut cur = vec![0.0; n];
        for (c, &v) in cur.iter_mut().zip(g.values()).take(n - 1).skip(1) {
            *c = dt * v + 0.5 * dt * dt * (f0 - v);
        }
        let supp = g.values().iter().rposition(|&v| v != 0.0).unwrap_or(0);
        let active = if f0 != 0.0 { n - 2 } else { (supp + 1).min(n - 2) };
        let sup = cur.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Self {
            grid,
            dt,
            source,
            lower,
            upper,
            prev: vec![0.0; n],
            cur,
            next: vec![0.0; n],
            step: 1,
            active,
            sup,
        })
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Index of the current level.
    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.dt
    }

    pub fn current(&self) -> &[f64] {
        &self.cur
    }

    pub fn previous(&self) -> &[f64] {
        &self.prev
    }

    /// `max |u|` at the current level.
    pub fn sup(&self) -> f64 {
        self.sup
    }

    /// Advances one level. Returns `false` if a non-finite value appeared
    /// (the state is then left at the last finite level).
    pub fn advance(&mut self) -> bool {
        let dt = self.dt;
        let dt2 = dt * dt;
        let inv_plus = 1.0 / (1.0 + 0.5 * dt);
        let minus = 1.0 - 0.5 * dt;
        let diag = -2.0 / (self.grid.dr() * self.grid.dr());
        let end = (self.active + 1).min(self.grid.n() - 2);
        let (prev, cur, next) = (&self.prev, &self.cur, &mut self.next);
        let mut sup = 0.0f64;
        let mut finite = true;
        for i in 1..=end {
            let u = cur[i];
            let lap = self.lower[i] * cur[i - 1] + diag * u + self.upper[i] * cur[i + 1];
            let val = (2.0 * u - minus * prev[i] + dt2 * (lap + self.source.eval(u))) * inv_plus;
            finite &= val.is_finite();
            sup = sup.max(val.abs());
            next[i] = val;
        }
        if !finite {
            return false;
        }
        self.active = end;
        std::mem::swap(&mut self.prev, &mut self.cur);
        std::mem::swap(&mut self.cur, &mut self.next);
        self.step += 1;
        self.sup = sup;
        true
    }

    /// Centred velocity `(newer - older) / 2dt` for the level between them.
    pub(crate) fn centered_velocity(older: &[f64], newer: &[f64], dt: f64) -> Vec<f64> {
        older.iter().zip(newer).map(|(a, b)| (b - a) / (2.0 * dt)).collect()
    }
}

/// `S(t)g` stored at `times` (the horizon is the last entry).
pub fn dw_linear_evolve(g: &RadialField, times: &[f64], cfg: &WaveConfig) -> Result<Trajectory> {
    evolve_with_source(g, times, cfg, Source::None)
}

pub(crate) fn evolve_with_source(g: &RadialField, times: &[f64], cfg: &WaveConfig, source: Source) -> Result<Trajectory> {
    if !g.is_dirichlet() {
        return Err(invalid("g", "data must vanish at r = 1"));
    }
    let dt = cfg.time_step(g.grid())?;
    let horizon = times.last().copied().unwrap_or(0.0);
    cfg.check_support(g, horizon)?;
    propagate(g, times, dt, source)
}

/// Leapfrog run with a fixed `dt` and no outer-boundary check.
pub(crate) fn propagate(g: &RadialField, times: &[f64], dt: f64, source: Source) -> Result<Trajectory> {
    let grid = *g.grid();
    let steps = output_steps(times, dt)?;
    let mut lf = RadialLeapfrog::new(g, dt, source)?;
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
        while lf.step_index() < k {
            if !lf.advance() {
                return Err(Error::NonFinite);
            }
        }
        let older = lf.previous().to_vec();
        let at = lf.current().to_vec();
        if !lf.advance() {
            return Err(Error::NonFinite);
        }
        let v = RadialLeapfrog::centered_velocity(&older, lf.current(), dt);
        states.push(WaveState {
            u: RadialField::from_values(grid, at)?,
            v: RadialField::from_values(grid, v)?,
        });
        last_step = Some(k);
    }
    Ok(Trajectory {
        grid,
        dt,
        times: steps.iter().map(|&k| k as f64 * dt).collect(),
        states,
    })
}
