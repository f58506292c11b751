//! Uniform radial meshes on `[1, r_max]`, radial fields, the two measures
//! used throughout the crate, and the quadratures built on them.
//!
//! A radial function `f(|x|)` on the exterior of the unit disk is stored by
//! its samples `f(r_i)` at `r_i = 1 + i * dr`. Planar integrals reduce to
//! `∫ f(r) 2πr dr`, and the log-weighted measure multiplies that density by
//! `1 + log r`.

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Inner boundary radius of the exterior domain.
pub const R_MIN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    r_max: f64,
    n: usize,
    dr: f64,
}

impl RadialGrid {
    /// Uniform grid with `n` nodes on `[1, r_max]`.
    pub fn new(r_max: f64, n: usize) -> Result<Self> {
        if !(r_max > R_MIN) || !r_max.is_finite() {
            return Err(Error::InvalidGrid(format!("r_max must exceed 1, got {r_max}")));
        }
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 nodes, got {n}")));
        }
        let dr = (r_max - R_MIN) / (n - 1) as f64;
        Ok(Self { r_max, n, dr })
    }

    /// Grid with spacing exactly `dr` whose outer radius is the first node at or
    /// beyond `r_max_at_least`.
    pub fn with_spacing(r_max_at_least: f64, dr: f64) -> Result<Self> {
        if !(dr > 0.0) || !dr.is_finite() {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {dr}")));
        }
        if !(r_max_at_least > R_MIN) {
            return Err(Error::InvalidGrid(format!("r_max must exceed 1, got {r_max_at_least}")));
        }
        let intervals = ((r_max_at_least - R_MIN) / dr - 1e-9).ceil().max(2.0) as usize;
        Ok(Self {
            r_max: R_MIN + intervals as f64 * dr,
            n: intervals + 1,
            dr,
        })
    }

    pub fn r_min(&self) -> f64 {
        R_MIN
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    #[inline]
    pub fn radius(&self, i: usize) -> f64 {
        R_MIN + i as f64 * self.dr
    }

    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.radius(i))
    }

    /// Index of the last node with radius `<= r` (clamped to the grid).
    pub fn index_below(&self, r: f64) -> usize {
        if r <= R_MIN {
            return 0;
        }
        (((r - R_MIN) / self.dr + 1e-9).floor() as usize).min(self.n - 1)
    }

    /// Same spacing, `n * factor - (factor - 1)` nodes: every old node survives.
    pub fn refined(&self, factor: usize) -> Self {
        let factor = factor.max(1);
        let n = (self.n - 1) * factor + 1;
        Self {
            r_max: self.r_max,
            n,
            dr: (self.r_max - R_MIN) / (n - 1) as f64,
        }
    }

    /// Trapezoidal node weights with the measure density folded in.
    pub fn weights(&self, measure: Measure) -> Vec<f64> {
        let mut w: Vec<f64> = self.radii().map(|r| self.dr * measure.density(r)).collect();
        w[0] *= 0.5;
        w[self.n - 1] *= 0.5;
        w
    }
}

/// Grid and time-step metadata attached to every emitted report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub r_max: f64,
    pub n: usize,
    pub dt: f64,
}

impl GridMeta {
    pub fn new(grid: &RadialGrid, dt: f64) -> Self {
        Self {
            r_max: grid.r_max(),
            n: grid.n(),
            dt,
        }
    }
}

/// Measures on the exterior domain, given by their radial densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    /// `dx`, radial density `2πr`.
    Lebesgue,
    /// `(1 + log|x|) dx`, radial density `(1 + log r) 2πr`.
    LogWeighted,
}

impl Measure {
    #[inline]
    pub fn density(self, r: f64) -> f64 {
        match self {
            Measure::Lebesgue => 2.0 * PI * r,
            Measure::LogWeighted => (1.0 + r.ln()) * 2.0 * PI * r,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl RadialField {
    pub fn zeros(grid: RadialGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.n()],
        }
    }

    pub fn from_values(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::LengthMismatch {
                expected: grid.n(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.radii().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_dirichlet(&self) -> bool {
        self.values[0] == 0.0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Outermost radius where the field is nonzero, or 1 for the zero field.
    pub fn support_radius(&self) -> f64 {
        self.values.iter().rposition(|&v| v != 0.0).map_or(R_MIN, |i| self.grid.radius(i))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// `a * self + b * other`.
    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect(),
        })
    }

    /// Pointwise positive and negative parts, `self = plus - minus`.
    pub fn split_sign(&self) -> (Self, Self) {
        (self.map(|v| v.max(0.0)), self.map(|v| (-v).max(0.0)))
    }

    /// Pads with zeros (same spacing) so the grid reaches at least `r_max`.
    /// Returns a clone when the grid is already large enough.
    pub fn extended_to(&self, r_max: f64) -> Self {
        if r_max <= self.grid.r_max() + 1e-12 {
            return self.clone();
        }
        let grid = RadialGrid::with_spacing(r_max, self.grid.dr()).expect("spacing and radius already validated");
        let mut values = self.values.clone();
        values.resize(grid.n(), 0.0);
        Self { grid, values }
    }

    /// Keeps the first `n` nodes.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        let grid = RadialGrid::new(self.grid.radius(n - 1), n)?;
        Ok(Self {
            grid,
            values: self.values[..n].to_vec(),
        })
    }

    /// Writes the `r,value` CSV form.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["r", "value"])?;
        for (r, v) in self.grid.radii().zip(&self.values) {
            w.write_record([format!("{r:.17e}"), format!("{v:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    /// Reads the `r,value` CSV form. Radii must form a uniform grid starting at 1.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "r" || &headers[1] != "value" {
            return Err(invalid("csv", "header must be `r,value`"));
        }
        let mut radii = Vec::new();
        let mut values = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| invalid("csv", format!("bad number {s:?}: {e}")))
            };
            radii.push(parse(&rec[0])?);
            values.push(parse(&rec[1])?);
        }
        if radii.len() < 3 {
            return Err(invalid("csv", "need at least 3 rows"));
        }
        let grid = RadialGrid::new(*radii.last().unwrap(), radii.len())?;
        if (radii[0] - R_MIN).abs() > 1e-9 {
            return Err(invalid("csv", "first radius must be 1"));
        }
        for (i, &r) in radii.iter().enumerate() {
            if (r - grid.radius(i)).abs() > 1e-9 * grid.r_max() {
                return Err(invalid("csv", format!("row {i}: radius {r} is off the uniform grid")));
            }
        }
        Self::from_values(grid, values)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Trapezoidal quadrature of `f` against the measure over `[1, r_max]`.
pub fn integrate(f: &RadialField, m: Measure) -> f64 {
    let g = f.grid();
    let n = g.n();
    let mut acc = 0.0;
    for (i, &v) in f.values().iter().enumerate() {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        acc += w * v * m.density(g.radius(i));
    }
    acc * g.dr()
}

/// `(∫ |f|^p dm)^(1/p)`, or the grid maximum of `|f|` for `p = ∞`.
pub fn norm(f: &RadialField, p: f64, m: Measure) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(invalid("p", format!("norm exponent must be >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let g = f.grid();
    let n = g.n();
    let mut acc = 0.0;
    for (i, &v) in f.values().iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        acc += w * v.abs().powf(p) * m.density(g.radius(i));
    }
    Ok((acc * g.dr()).powf(1.0 / p))
}

/// `‖∇f‖²` in the plane for radial `f`: staggered difference quotients,
/// midpoint rule against `2πr dr`. Exact for piecewise-linear fields with
/// knots on the grid, and equal to `-⟨Δ_h f, f⟩` for Dirichlet fields.
pub fn grad_norm_sq(f: &RadialField) -> f64 {
    let g = f.grid();
    let dr = g.dr();
    let v = f.values();
    let mut acc = 0.0;
    for i in 0..g.n() - 1 {
        let d = v[i + 1] - v[i];
        if d != 0.0 {
            acc += d * d * (g.radius(i) + 0.5 * dr);
        }
    }
    2.0 * PI * acc / dr
}

/// Discrete radial Laplacian `f'' + f'/r` with centered differences at the
/// interior nodes; both boundary nodes carry 0.
pub fn apply_laplacian(f: &RadialField) -> RadialField {
    let mut out = RadialField::zeros(*f.grid());
    laplacian_into(f.grid(), f.values(), out.values_mut());
    out
}

/// `out[i] = (Δ_h v)[i]` for interior `i`; boundary entries set to 0.
pub(crate) fn laplacian_into(grid: &RadialGrid, v: &[f64], out: &mut [f64]) {
    let n = grid.n();
    let dr = grid.dr();
    let inv = 1.0 / (dr * dr);
    out[0] = 0.0;
    out[n - 1] = 0.0;
    for i in 1..n - 1 {
        let c = 0.5 * dr / grid.radius(i);
        out[i] = ((1.0 + c) * v[i + 1] - 2.0 * v[i] + (1.0 - c) * v[i - 1]) * inv;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn build_grid_examples() {
        let g = RadialGrid::new(2.0, 3).unwrap();
        let r: Vec<f64> = g.radii().collect();
        assert_eq!(r, vec![1.0, 1.5, 2.0]);
        assert!(RadialGrid::new(1.0, 10).is_err());
        assert!(RadialGrid::new(0.5, 10).is_err());
        assert!(RadialGrid::new(2.0, 2).is_err());
        let g = RadialGrid::new(101.0, 10001).unwrap();
        assert_relative_eq!(g.dr(), 0.01, max_relative = 1e-12);
        assert_relative_eq!(g.radius(10000), 101.0, max_relative = 1e-14);
    }

    #[test]
    fn with_spacing_lands_on_nodes() {
        let g = RadialGrid::with_spacing(3.0, 0.1).unwrap();
        assert_eq!(g.n(), 21);
        assert_relative_eq!(g.r_max(), 3.0, epsilon = 1e-12);
        let g = RadialGrid::with_spacing(3.05, 0.1).unwrap();
        assert_eq!(g.n(), 22);
    }

    #[test]
    fn integrate_examples() {
        let g = RadialGrid::new(2.0, 201).unwrap();
        let one = RadialField::from_fn(g, |_| 1.0);
        // the integrand 2πr is linear, so the trapezoid rule is exact
        assert_relative_eq!(integrate(&one, Measure::Lebesgue), 3.0 * PI, max_relative = 1e-13);
        assert_eq!(integrate(&RadialField::zeros(g), Measure::LogWeighted), 0.0);
    }

    #[test]
    fn norm_examples() {
        let g = RadialGrid::new(2.0, 101).unwrap();
        let z = RadialField::zeros(g);
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            for m in [Measure::Lebesgue, Measure::LogWeighted] {
                assert_eq!(norm(&z, p, m).unwrap(), 0.0);
            }
        }
        let one = RadialField::from_fn(g, |_| 1.0);
        assert_relative_eq!(norm(&one, 2.0, Measure::Lebesgue).unwrap(), (3.0 * PI).sqrt(), max_relative = 1e-13);
        assert!(norm(&one, 0.5, Measure::Lebesgue).is_err());
        assert_eq!(norm(&one, f64::INFINITY, Measure::Lebesgue).unwrap(), 1.0);
    }

    #[test]
    fn laplacian_of_zero_is_zero() {
        let g = RadialGrid::new(5.0, 41).unwrap();
        let lap = apply_laplacian(&RadialField::zeros(g));
        assert!(lap.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn grad_norm_matches_negative_laplacian_pairing() {
        let g = RadialGrid::new(4.0, 61).unwrap();
        let f = RadialField::from_fn(g, |r| (r - 1.0) * (4.0 - r) * (1.0 + 0.3 * r.sin()));
        let lap = apply_laplacian(&f);
        let w = g.weights(Measure::Lebesgue);
        let pairing: f64 = (0..g.n()).map(|i| w[i] * lap.values()[i] * f.values()[i]).sum();
        assert_relative_eq!(-pairing, grad_norm_sq(&f), max_relative = 1e-12);
    }

    #[test]
    fn extension_and_support() {
        let g = RadialGrid::new(3.0, 21).unwrap();
        let f = RadialField::from_fn(g, |r| if r < 2.0 { (r - 1.0) * (2.0 - r) } else { 0.0 });
        assert_relative_eq!(f.support_radius(), 1.9, epsilon = 1e-12);
        let e = f.extended_to(10.0);
        assert_relative_eq!(e.grid().r_max(), 10.0, epsilon = 1e-9);
        assert_relative_eq!(e.grid().dr(), 0.1, epsilon = 1e-12);
        assert_eq!(&e.values()[..21], f.values());
        assert!(e.values()[21..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn csv_round_trip_keeps_full_precision() {
        let g = RadialGrid::new(2.5, 16).unwrap();
        let f = RadialField::from_fn(g, |r| (r - 1.0).sin() / 3.0);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("r,value\n"));
        let back = RadialField::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.values(), f.values());
        assert_relative_eq!(back.grid().dr(), g.dr(), max_relative = 1e-15);
    }

    #[test]
    fn csv_rejects_bad_header_and_nonuniform_rows() {
        assert!(RadialField::read_csv("x,y\n1,0\n2,0\n3,0\n".as_bytes()).is_err());
        assert!(RadialField::read_csv("r,value\n1,0\n1.5,0\n3,0\n".as_bytes()).is_err());
    }
}
