use serde::Serialize;

use crate::error::{invalid, Result};

/// `(y, y')` for `y'' + y' + λy = 0`, `y(0) = 0`, `y'(0) = 1`.
pub fn modal_wave(lambda: f64, t: f64) -> Result<(f64, f64)> {
    if !(lambda >= 0.0) {
        return Err(invalid("lambda", format!("must be >= 0, got {lambda}")));
    }
    let disc = 0.25 - lambda;
    let damp = (-0.5 * t).exp();
    let (y, c) = if disc > 0.0 {
        let d = disc.sqrt();
        if d * t < 1e-4 {
            let x2 = (d * t).powi(2);
            (damp * t * (1.0 + x2 / 6.0), damp * (1.0 + 0.5 * x2))
        } else {
            // e^{-t/2} sinh(dt)/d without overflow
            let a = ((d - 0.5) * t).exp();
            let b = ((-d - 0.5) * t).exp();
            ((a - b) / (2.0 * d), 0.5 * (a + b))
        }
    } else if disc == 0.0 {
        (t * damp, damp)
    } else {
        let w = (-disc).sqrt();
        (damp * (w * t).sin() / w, damp * (w * t).cos())
    };
    Ok((y, c - 0.5 * y))
}

/// `e^{-λt}`.
pub fn modal_heat(lambda: f64, t: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(invalid("lambda", format!("must be >= 0, got {lambda}")));
    }
    Ok((-lambda * t).exp())
}

#[derive(Debug, Clone, Serialize)]
pub struct ModalReport {
    pub eigs: Vec<f64>,
    pub times: Vec<f64>,
    /// Per mode, `sup_t √λ |y - e^{-λt}| / (t^{-3/2} e^{-λt/2} + e^{-t/16} √λ/(√λ+1))`.
    pub grad_constants: Vec<f64>,
    /// Per mode, `sup_t |y' + λ e^{-λt}| / (t^{-2} (1 + e^{-t/4}))`.
    pub dt_constants: Vec<f64>,
    pub grad_uniform: f64,
    pub dt_uniform: f64,
    /// Largest over smallest nonzero per-mode constant.
    pub grad_spread: f64,
    pub dt_spread: f64,
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(0.0, f64::max);
    let min = values.iter().copied().filter(|&v| v > 0.0).fold(f64::INFINITY, f64::min);
    if min.is_finite() {
        max / min
    } else {
        1.0
    }
}

/// Fits the constants of the modal diffusion-phenomenon bounds over `times`
/// (each `>= 1`) for every eigenvalue in `eigs`.
pub fn abstract_matsumura_verify(eigs: &[f64], times: &[f64]) -> Result<ModalReport> {
    if let Some(&bad) = eigs.iter().find(|&&l| !(l >= 0.0)) {
        return Err(invalid("eigs", format!("must be >= 0, got {bad}")));
    }
    if let Some(&bad) = times.iter().find(|&&t| !(t >= 1.0) || !t.is_finite()) {
        return Err(invalid("times", format!("must be finite and >= 1, got {bad}")));
    }
    let mut grad_constants = Vec::with_capacity(eigs.len());
    let mut dt_constants = Vec::with_capacity(eigs.len());
    for &lambda in eigs {
        let s = lambda.sqrt();
        let mut c1 = 0.0f64;
        let mut c2 = 0.0f64;
        for &t in times {
            let (y, dy) = modal_wave(lambda, t)?;
            let e = modal_heat(lambda, t)?;
            let b1 = t.powf(-1.5) * (-0.5 * lambda * t).exp() + (-t / 16.0).exp() * s / (s + 1.0);
            let b2 = (1.0 + (-0.25 * t).exp()) / (t * t);
            c1 = c1.max(s * (y - e).abs() / b1);
            c2 = c2.max((dy + lambda * e).abs() / b2);
        }
        grad_constants.push(c1);
        dt_constants.push(c2);
    }
    Ok(ModalReport {
        eigs: eigs.to_vec(),
        times: times.to_vec(),
        grad_uniform: grad_constants.iter().copied().fold(0.0, f64::max),
        dt_uniform: dt_constants.iter().copied().fold(0.0, f64::max),
        grad_spread: spread(&grad_constants),
        dt_spread: spread(&dt_constants),
        grad_constants,
        dt_constants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_mode_is_one_minus_exponential() {
        for t in [0.0, 0.3, 1.0, 7.0, 40.0] {
            let (y, dy) = modal_wave(0.0, t).unwrap();
            assert_relative_eq!(y, -(-t).exp_m1(), max_relative = 1e-13, epsilon = 1e-300);
            assert_relative_eq!(dy, (-t).exp(), max_relative = 1e-13);
        }
    }

    #[test]
    fn critical_mode_is_t_exp() {
        for t in [0.5, 2.0, 9.0] {
            let (y, dy) = modal_wave(0.25, t).unwrap();
            assert_relative_eq!(y, t * (-0.5 * t).exp(), max_relative = 1e-14);
            assert_relative_eq!(dy, (1.0 - 0.5 * t) * (-0.5 * t).exp(), max_relative = 1e-13);
        }
    }

    #[test]
    fn branches_agree_near_critical_damping() {
        let (a, da) = modal_wave(0.25 - 1e-12, 3.0).unwrap();
        let (b, db) = modal_wave(0.25 + 1e-12, 3.0).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-9);
        assert_relative_eq!(da, db, max_relative = 1e-9);
    }

    #[test]
    fn closed_form_solves_the_ode() {
        let h = 1e-4;
        for lambda in [1e-3, 0.1, 0.25, 2.0, 100.0] {
            for t in [1.0, 5.0] {
                let (ym, _) = modal_wave(lambda, t - h).unwrap();
                let (y, dy) = modal_wave(lambda, t).unwrap();
                let (yp, _) = modal_wave(lambda, t + h).unwrap();
                let ypp = (yp - 2.0 * y + ym) / (h * h);
                assert!((ypp + dy + lambda * y).abs() < 1e-5 * (1.0 + lambda), "λ = {lambda}, t = {t}");
                assert_relative_eq!(dy, (yp - ym) / (2.0 * h), epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn rejects_negative_eigenvalues() {
        assert!(modal_wave(-1.0, 1.0).is_err());
        assert!(abstract_matsumura_verify(&[1.0, -0.5], &[1.0]).is_err());
        assert!(abstract_matsumura_verify(&[1.0], &[0.5]).is_err());
    }
}
