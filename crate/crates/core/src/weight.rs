//! The logarithmic decay weight `h(t) = 1 / ((1 + t)(1 + log(1 + t)))` and
//! the time integrals of its powers that govern lifespans.

use crate::error::{invalid, Result};
use crate::quad::adaptive_simpson;

pub fn h_weight(t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(invalid("t", format!("time must be >= 0, got {t}")));
    }
    Ok(h_unchecked(t))
}

#[inline]
pub(crate) fn h_unchecked(t: f64) -> f64 {
    let lp = t.ln_1p();
    1.0 / ((1.0 + t) * (1.0 + lp))
}

/// `∫_0^t h(s)^(p-1) ds`.
///
/// Integrated in `σ = log(1 + s)`, where the integrand becomes
/// `e^{(2-p)σ} (1 + σ)^{1-p}` and stays smooth for every horizon.
pub fn int_h_power(t: f64, p: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(invalid("t", format!("time must be >= 0, got {t}")));
    }
    if p.is_nan() || p <= 1.0 {
        return Err(invalid("p", format!("exponent must exceed 1, got {p}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    if t.is_infinite() {
        if p <= 2.0 {
            return Ok(f64::INFINITY);
        }
        // the tail beyond σ = 60 is below e^{-60(p-2)}
        return int_h_power(1e26, p);
    }
    let upper = t.ln_1p();
    let f = move |s: f64| ((2.0 - p) * s).exp() * (1.0 + s).powf(1.0 - p);
    let scale = f(0.0).max(f(upper)).max(1e-300);
    let tol = 1e-13 * scale * upper.max(1.0);
    // split so the adaptive rule sees each decade of σ separately
    let pieces = (upper.ceil() as usize).max(1);
    let width = upper / pieces as f64;
    Ok((0..pieces)
        .map(|k| {
            let a = k as f64 * width;
            adaptive_simpson(f, a, a + width, tol / pieces as f64)
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    #[test]
    fn h_examples() {
        assert_eq!(h_weight(0.0).unwrap(), 1.0);
        // 1/(e * 2) evaluated independently
        assert_relative_eq!(h_weight(E - 1.0).unwrap(), 0.183_939_720_585_721_2, max_relative = 1e-14);
        assert!(h_weight(-1e-3).is_err());
    }

    #[test]
    fn h_strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for k in 0..=600 {
            let t = if k == 0 { 0.0 } else { 10f64.powf(-3.0 + 9.0 * k as f64 / 600.0) };
            let h = h_weight(t).unwrap();
            assert!(h < prev, "h not decreasing at t = {t}");
            prev = h;
        }
    }

    #[test]
    fn critical_integral_closed_form() {
        assert_eq!(int_h_power(0.0, 2.0).unwrap(), 0.0);
        assert_relative_eq!(int_h_power(E - 1.0, 2.0).unwrap(), 2f64.ln(), max_relative = 1e-10);
        for t in [0.1f64, 1.0, 10.0, 1e3, 1e6, 1e9] {
            let exact = (1.0 + (1.0 + t).ln()).ln();
            assert_relative_eq!(int_h_power(t, 2.0).unwrap(), exact, max_relative = 1e-8);
        }
    }

    #[test]
    fn supercritical_integral_converges() {
        let a = int_h_power(1e6, 3.0).unwrap();
        let b = int_h_power(1e8, 3.0).unwrap();
        assert!((b - a).abs() <= 0.01 * a);
        assert!(int_h_power(f64::INFINITY, 3.0).unwrap().is_finite());
        assert!(int_h_power(f64::INFINITY, 2.0).unwrap().is_infinite());
    }

    #[test]
    fn subcritical_growth_matches_envelope() {
        // ∫ h^{p-1} <= k_p (1+t)^{2-p} (1+log(1+t))^{1-p}; the ratio stays bounded
        let p = 1.5;
        let ratios: Vec<f64> = [1e1, 1e3, 1e5, 1e7]
            .iter()
            .map(|&t: &f64| int_h_power(t, p).unwrap() / ((1.0 + t).powf(2.0 - p) * (1.0 + t.ln_1p()).powf(1.0 - p)))
            .collect();
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min < 2.0, "{ratios:?}");
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(int_h_power(1.0, 1.0).is_err());
        assert!(int_h_power(-1.0, 2.0).is_err());
    }
}
