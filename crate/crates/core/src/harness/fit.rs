use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::semilinear::{GlobalDecayReport, LifespanRecord};
use crate::weight::h_weight;

/// What a fit is applied to.
#[derive(Debug, Clone, Copy)]
pub enum FitInput<'a> {
    /// `1 < p < 2`: `log T` against `log(ε⁻¹ log(1/ε))`.
    SubCritical(&'a [LifespanRecord]),
    /// `p = 2`: the band of `Q = ε ∫_0^T h`.
    CriticalQ(&'a [LifespanRecord]),
    /// `p > 2`: `log ‖∇u‖₂` against `log h(t)`; slope 1 means the linear rate.
    Global(&'a GlobalDecayReport),
}

#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub model: String,
    /// Fitted slope (sub-2, global) or `max Q / min Q` (critical-Q).
    pub exponent: f64,
    /// Intercept `exp(b)` of the log-space line, or `min Q`.
    pub constant: f64,
    /// Predicted slope, where the model has one.
    pub expected: Option<f64>,
    /// `(min, max)` of `Q` for the critical model.
    pub band: Option<(f64, f64)>,
    /// RMS of the log-space deviations.
    pub residual: f64,
    pub points: usize,
}

/// Unweighted least squares `y = a x + b`; returns `(a, b, rms)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() {
        return Err(invalid("ys", "must match xs in length"));
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientPoints { needed: 3, got: xs.len() });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("xs", "need at least two distinct abscissae"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    let rms = (xs.iter().zip(ys).map(|(x, y)| (y - a * x - b).powi(2)).sum::<f64>() / n).sqrt();
    Ok((a, b, rms))
}

fn usable(records: &[LifespanRecord]) -> Vec<&LifespanRecord> {
    records
        .iter()
        .filter(|r| r.error.is_none() && r.blew_up && r.refinement_converged && r.t_measured.is_finite())
        .collect()
}

pub fn fit_exponent(input: FitInput<'_>) -> Result<FitResult> {
    match input {
        FitInput::SubCritical(records) => {
            let pts: Vec<_> = usable(records).into_iter().filter(|r| r.epsilon < 1.0).collect();
            let p = pts.first().map_or(f64::NAN, |r| r.p);
            if pts.iter().any(|r| r.p != p) {
                return Err(invalid("records", "mix several exponents"));
            }
            let xs: Vec<f64> = pts.iter().map(|r| ((1.0 / r.epsilon) * (1.0 / r.epsilon).ln()).ln()).collect();
            let ys: Vec<f64> = pts.iter().map(|r| r.t_measured.ln()).collect();
            let (a, b, rms) = least_squares(&xs, &ys)?;
            Ok(FitResult {
                model: "sub-2".into(),
                exponent: a,
                constant: b.exp(),
                expected: (p < 2.0).then(|| (p - 1.0) / (2.0 - p)),
                band: None,
                residual: rms,
                points: pts.len(),
            })
        }
        FitInput::CriticalQ(records) => {
            let pts = usable(records);
            if pts.len() < 3 {
                return Err(Error::InsufficientPoints { needed: 3, got: pts.len() });
            }
            let qs: Vec<f64> = pts.iter().map(|r| r.q_value).collect();
            let min = qs.iter().copied().fold(f64::INFINITY, f64::min);
            let max = qs.iter().copied().fold(0.0, f64::max);
            let mean_log = qs.iter().map(|q| q.ln()).sum::<f64>() / qs.len() as f64;
            let rms = (qs.iter().map(|q| (q.ln() - mean_log).powi(2)).sum::<f64>() / qs.len() as f64).sqrt();
            Ok(FitResult {
                model: "critical-Q".into(),
                exponent: max / min,
                constant: min,
                expected: None,
                band: Some((min, max)),
                residual: rms,
                points: pts.len(),
            })
        }
        FitInput::Global(report) => {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for (&t, &ratio) in report.times.iter().zip(&report.grad_ratios) {
                if ratio > 0.0 {
                    let h = h_weight(t)?;
                    xs.push(h.ln());
                    // grad_ratios = ‖∇u‖₂ / h
                    ys.push((ratio * h).ln());
                }
            }
            let (a, b, rms) = least_squares(&xs, &ys)?;
            Ok(FitResult {
                model: "global".into(),
                exponent: a,
                constant: b.exp(),
                expected: Some(1.0),
                band: None,
                residual: rms,
                points: xs.len(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(p: f64, epsilon: f64, t: f64) -> LifespanRecord {
        LifespanRecord {
            p,
            epsilon,
            t_measured: t,
            blew_up: true,
            refinement_converged: true,
            q_value: epsilon * t.ln_1p().ln_1p(),
            relative_change: Some(0.0),
            grid_n: 10,
            r_max: 2.0,
            dt: 0.05,
            error: None,
        }
    }

    #[test]
    fn exact_power_law_gives_unit_slope() {
        let recs: Vec<_> = [0.3, 0.2, 0.1, 0.05, 0.02]
            .iter()
            .map(|&e: &f64| record(1.5, e, 7.0 * (1.0 / e) * (1.0 / e).ln()))
            .collect();
        let fit = fit_exponent(FitInput::SubCritical(&recs)).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-6, "{fit:?}");
        assert!((fit.constant - 7.0).abs() < 1e-6);
        assert!(fit.residual < 1e-9);
        assert_eq!(fit.points, 5);
    }

    #[test]
    fn expected_slope_follows_the_exponent() {
        let recs: Vec<_> = [0.3, 0.1, 0.03].iter().map(|&e| record(1.8, e, 1.0 / e)).collect();
        let fit = fit_exponent(FitInput::SubCritical(&recs)).unwrap();
        assert!((fit.expected.unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_points_is_an_error() {
        let recs = vec![record(1.5, 0.1, 10.0), record(1.5, 0.05, 30.0)];
        assert!(matches!(
            fit_exponent(FitInput::SubCritical(&recs)),
            Err(Error::InsufficientPoints { needed: 3, got: 2 })
        ));
        let mut bad = recs.clone();
        bad.push(LifespanRecord::failed(1.5, 0.01, "diverged".into()));
        assert!(fit_exponent(FitInput::CriticalQ(&bad)).is_err());
    }

    #[test]
    fn q_band_reports_ratio() {
        let recs = vec![record(2.0, 1.0, 10.0), record(2.0, 0.5, 100.0), record(2.0, 0.25, 1e4)];
        let fit = fit_exponent(FitInput::CriticalQ(&recs)).unwrap();
        let (lo, hi) = fit.band.unwrap();
        assert!((fit.exponent - hi / lo).abs() < 1e-12 && fit.constant == lo);
    }
}
