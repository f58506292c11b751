//! Initial-data families shared by the solvers, the inequality sweeps and the
//! harness.

use serde::{Deserialize, Serialize};

use crate::grid::{norm, Measure, RadialField, RadialGrid};

/// `[(r - a)(b - r)]_+^k`.
pub fn bump(grid: RadialGrid, a: f64, b: f64, k: i32) -> RadialField {
    RadialField::from_fn(grid, |r| if r > a && r < b { ((r - a) * (b - r)).powi(k) } else { 0.0 })
}

/// Gaussian in `r` centred at `center`, cut to zero where it drops below
/// `1e-16` of its peak and forced to vanish at `r = 1`.
pub fn gaussian(grid: RadialGrid, center: f64, width: f64) -> RadialField {
    let cut = width * (2.0 * 16.0 * std::f64::consts::LN_10).sqrt();
    let mut f = RadialField::from_fn(grid, |r| {
        let z = (r - center) / width;
        if (r - center).abs() > cut {
            0.0
        } else {
            (-0.5 * z * z).exp() * (1.0 - (-(r - 1.0) / width).exp()).powi(2)
        }
    });
    f.values_mut()[0] = 0.0;
    f
}

/// `‖g‖_{L¹_dμ} + ‖g‖_{L²}`, the data size controlling every linear estimate.
pub fn data_size(g: &RadialField) -> f64 {
    norm(g, 1.0, Measure::LogWeighted).expect("p = 1 is valid") + norm(g, 2.0, Measure::Lebesgue).expect("p = 2 is valid")
}

/// Rescales so that `data_size = 1` (the zero field is returned unchanged).
pub fn normalized(g: &RadialField) -> RadialField {
    let s = data_size(g);
    if s == 0.0 {
        g.clone()
    } else {
        g.scaled(1.0 / s)
    }
}

/// Default semilinear datum: `[(r-1)(a-r)]_+²` normalized in `L² ∩ L¹_dμ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataSpec {
    pub outer: f64,
    pub power: i32,
}

impl Default for DataSpec {
    fn default() -> Self {
        Self { outer: 3.0, power: 2 }
    }
}

impl DataSpec {
    pub fn build(&self, dr: f64) -> RadialField {
        let grid = RadialGrid::with_spacing(self.outer + dr, dr).expect("outer radius exceeds 1");
        normalized(&bump(grid, 1.0, self.outer, self.power))
    }
}
