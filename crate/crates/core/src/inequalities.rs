//! Ratios for the critical Hardy inequality, the Gagliardo–Nirenberg (Nash)
//! inequality and its log-weighted version, with empirical constant sweeps
//! over families of test profiles.

use serde::{Deserialize, Serialize};

use crate::data::{bump, gaussian};
use crate::error::{invalid, Result};
use crate::grid::{grad_norm_sq, norm, Measure, RadialField, RadialGrid};

/// Default slack allowed for discretization in inequality checks.
pub const TOL_DISC: f64 = 1e-3;

fn require_nonzero(f: &RadialField) -> Result<f64> {
    let grad = grad_norm_sq(f);
    if f.max_abs() == 0.0 || grad == 0.0 {
        return Err(invalid("f", "field must be nonzero"));
    }
    Ok(grad)
}

fn require_q(q: f64) -> Result<()> {
    if !(q > 1.0) {
        return Err(invalid("q", format!("need q > 1, got {q}")));
    }
    Ok(())
}

/// `(1/4) ∫ f² / (r² (1+log r)²) dx  /  ‖∇f‖²`.
pub fn hardy_ratio(f: &RadialField) -> Result<f64> {
    let grad = require_nonzero(f)?;
    let grid = f.grid();
    let w = grid.weights(Measure::Lebesgue);
    let lhs: f64 = grid
        .radii()
        .zip(f.values())
        .zip(&w)
        .map(|((r, &v), w)| {
            let h = r * (1.0 + r.ln());
            w * v * v / (h * h)
        })
        .sum();
    Ok(0.25 * lhs / grad)
}

fn gn_with(f: &RadialField, q: f64, m: Measure) -> Result<f64> {
    require_q(q)?;
    let grad = require_nonzero(f)?;
    let lq = norm(f, q, m)?;
    let l1 = norm(f, 1.0, m)?;
    Ok(lq / (grad.sqrt().powf(1.0 - 1.0 / q) * l1.powf(1.0 / q)))
}

/// `‖f‖_q / (‖∇f‖₂^{1-1/q} ‖f‖₁^{1/q})`.
pub fn gn_ratio(f: &RadialField, q: f64) -> Result<f64> {
    gn_with(f, q, Measure::Lebesgue)
}

/// `‖f‖_{L^q_dμ} / (‖∇f‖₂^{1-1/q} ‖f‖_{L¹_dμ}^{1/q})`.
pub fn log_gn_ratio(f: &RadialField, q: f64) -> Result<f64> {
    gn_with(f, q, Measure::LogWeighted)
}

/// One test function, built on a grid of spacing `dr` that just covers its
/// support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    /// `[(r-a)(b-r)]_+^k`.
    Bump {
        a: f64,
        b: f64,
        k: i32,
    },
    Gaussian {
        center: f64,
        width: f64,
    },
    /// `(1+log r)^{1/2} sin(π s/S)` with `s = log(1+log r)`, cut off at
    /// `r = cutoff`.
    HardyExtremal {
        cutoff: f64,
    },
}

impl Profile {
    fn outer(&self) -> f64 {
        match *self {
            Profile::Bump { b, .. } => b,
            Profile::Gaussian { center, width } => center + width * (2.0 * 16.0 * std::f64::consts::LN_10).sqrt(),
            Profile::HardyExtremal { cutoff } => cutoff,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Profile::Bump { a, b, k } if !(a >= 1.0 && b > a && k >= 1) => Err(invalid(
                "profile",
                format!("bump needs 1 <= a < b and k >= 1, got a = {a}, b = {b}, k = {k}"),
            )),
            Profile::Gaussian { center, width } if !(center >= 1.0 && width > 0.0) => Err(invalid(
                "profile",
                format!("gaussian needs center >= 1 and width > 0, got {center}, {width}"),
            )),
            Profile::HardyExtremal { cutoff } if !(cutoff > 1.0) => Err(invalid("profile", format!("cutoff must exceed 1, got {cutoff}"))),
            _ => Ok(()),
        }
    }

    pub fn build(&self, dr: f64) -> Result<RadialField> {
        self.validate()?;
        let grid = RadialGrid::with_spacing(self.outer() + dr, dr)?;
        Ok(self.build_on(grid))
    }

    pub fn build_on(&self, grid: RadialGrid) -> RadialField {
        match *self {
            Profile::Bump { a, b, k } => bump(grid, a, b, k),
            Profile::Gaussian { center, width } => gaussian(grid, center, width),
            Profile::HardyExtremal { cutoff } => {
                let span = (1.0 + cutoff.ln()).ln();
                RadialField::from_fn(grid, |r| {
                    if r >= cutoff {
                        return 0.0;
                    }
                    let h = 1.0 + r.ln();
                    h.sqrt() * (std::f64::consts::PI * h.ln() / span).sin()
                })
            }
        }
    }
}

/// Bumps of every `(center ± width/2, power)` combination that stays in `r >= 1`.
pub fn bump_family(centers: &[f64], widths: &[f64], powers: &[i32]) -> Vec<Profile> {
    let mut out = Vec::new();
    for &c in centers {
        for &w in widths {
            for &k in powers {
                let a = (c - 0.5 * w).max(1.0);
                out.push(Profile::Bump { a, b: a + w, k });
            }
        }
    }
    out
}

/// `f(1 + (r-1)/λ)` for a bump `f` on `[a, b]`.
pub fn dilation_family(a: f64, b: f64, k: i32, factors: &[f64]) -> Vec<Profile> {
    factors
        .iter()
        .map(|&l| Profile::Bump {
            a: 1.0 + (a - 1.0) * l,
            b: 1.0 + (b - 1.0) * l,
            k,
        })
        .collect()
}

/// Unit-width bumps centred at each `r0`.
pub fn translation_family(centers: &[f64], width: f64, k: i32) -> Vec<Profile> {
    centers
        .iter()
        .map(|&c| Profile::Bump {
            a: c - 0.5 * width,
            b: c + 0.5 * width,
            k,
        })
        .collect()
}

pub fn hardy_extremal_family(cutoffs: &[f64]) -> Vec<Profile> {
    cutoffs.iter().map(|&cutoff| Profile::HardyExtremal { cutoff }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inequality {
    Hardy,
    Gn,
    LogGn,
}

impl Inequality {
    pub fn ratio(self, f: &RadialField, q: f64) -> Result<f64> {
        match self {
            Inequality::Hardy => hardy_ratio(f),
            Inequality::Gn => gn_ratio(f, q),
            Inequality::LogGn => log_gn_ratio(f, q),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Inequality::Hardy => "hardy",
            Inequality::Gn => "gn",
            Inequality::LogGn => "log-gn",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub q: f64,
    pub dr: f64,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    /// Larger of the suprema on the base and the refined grid.
    pub fitted_constant: f64,
    /// `|sup_fine - sup_coarse| / sup_fine` after halving `dr`.
    pub refinement_drift: f64,
}

/// Evaluates `ineq` over `family` at spacing `dr` and again at `dr / 2`.
pub fn constant_sweep(ineq: Inequality, family: &[Profile], q: f64, dr: f64) -> Result<InequalityReport> {
    if family.is_empty() {
        return Err(invalid("family", "must contain at least one profile"));
    }
    if !(dr > 0.0) {
        return Err(invalid("dr", format!("must be positive, got {dr}")));
    }
    let sweep = |h: f64| -> Result<Vec<f64>> { family.iter().map(|p| ineq.ratio(&p.build(h)?, q)).collect() };
    let ratios = sweep(dr)?;
    let fine = sweep(0.5 * dr)?;
    let max_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_fine = fine.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(InequalityReport {
        name: ineq.name().to_string(),
        q,
        dr,
        ratios,
        max_ratio,
        fitted_constant: max_ratio.max(max_fine),
        refinement_drift: (max_fine - max_ratio).abs() / max_fine,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> RadialField {
        Profile::Bump { a: 1.5, b: 4.0, k: 2 }.build(0.01).unwrap()
    }

    #[test]
    fn ratios_ignore_amplitude() {
        let f = field();
        for c in [-3.0, 1e-3, 250.0] {
            let g = f.scaled(c);
            for q in [1.5, 2.0, 3.0] {
                let a = gn_ratio(&f, q).unwrap();
                assert!((gn_ratio(&g, q).unwrap() - a).abs() <= 1e-12 * a);
                let b = log_gn_ratio(&f, q).unwrap();
                assert!((log_gn_ratio(&g, q).unwrap() - b).abs() <= 1e-12 * b);
            }
            let h = hardy_ratio(&f).unwrap();
            assert!((hardy_ratio(&g).unwrap() - h).abs() <= 1e-12 * h);
        }
    }

    #[test]
    fn zero_field_and_bad_exponent_are_rejected() {
        let z = RadialField::zeros(RadialGrid::new(3.0, 50).unwrap());
        assert!(hardy_ratio(&z).is_err());
        assert!(gn_ratio(&z, 2.0).is_err());
        assert!(gn_ratio(&field(), 1.0).is_err());
        assert!(log_gn_ratio(&field(), 0.5).is_err());
    }

    #[test]
    fn far_support_makes_hardy_small() {
        let f = Profile::Bump { a: 100.0, b: 200.0, k: 2 }.build(0.05).unwrap();
        assert!(hardy_ratio(&f).unwrap() < 1e-3);
    }

    #[test]
    fn extremal_profiles_approach_from_below() {
        let mut prev = 0.0;
        for cutoff in [10.0, 100.0, 1e3, 1e4] {
            let r = hardy_ratio(&Profile::HardyExtremal { cutoff }.build(0.01).unwrap()).unwrap();
            assert!(r > prev && r <= 1.0 + TOL_DISC, "cutoff {cutoff}: {r}");
            prev = r;
        }
    }

    #[test]
    fn extremal_ratio_matches_closed_form() {
        // in s = log(1 + log r) the ratio is (1/4) / (1/4 + (π/S)²)
        for cutoff in [10.0f64, 100.0, 1e3] {
            let span = (1.0 + cutoff.ln()).ln();
            let k = std::f64::consts::PI / span;
            let exact = 0.25 / (0.25 + k * k);
            let r = hardy_ratio(&Profile::HardyExtremal { cutoff }.build(0.005).unwrap()).unwrap();
            assert!((r - exact).abs() < 1e-3 * exact, "cutoff {cutoff}: {r} vs {exact}");
        }
    }

    #[test]
    fn empty_family_is_an_error() {
        assert!(constant_sweep(Inequality::Hardy, &[], 2.0, 0.01).is_err());
    }

    #[test]
    fn dilations_stay_bounded() {
        let family = dilation_family(1.5, 3.0, 2, &[1.0, 2.0, 4.0, 8.0]);
        let rep = constant_sweep(Inequality::Gn, &family, 2.0, 0.01).unwrap();
        assert!(rep.max_ratio.is_finite() && rep.max_ratio <= rep.fitted_constant);
        assert!(rep.refinement_drift < 0.1);
    }
}
