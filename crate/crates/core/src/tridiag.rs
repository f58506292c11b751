use crate::error::{Error, Result};

/// LU factors of a tridiagonal matrix for repeated Thomas solves.
#[derive(Debug, Clone)]
pub(crate) struct Tridiagonal {
    lower: Vec<f64>,
    // reciprocal pivots
    inv_pivot: Vec<f64>,
    upper_scaled: Vec<f64>,
}

impl Tridiagonal {
    /// `lower[i]` couples row `i` to `i-1` (ignored at `i = 0`), `upper[i]`
    /// couples row `i` to `i+1` (ignored at the last row).
    pub fn factor(lower: &[f64], diag: &[f64], upper: &[f64]) -> Result<Self> {
        let m = diag.len();
        let mut inv_pivot = vec![0.0; m];
        let mut upper_scaled = vec![0.0; m];
        let mut prev_upper = 0.0;
        for i in 0..m {
            let piv = diag[i] - if i > 0 { lower[i] * prev_upper } else { 0.0 };
            if piv == 0.0 || !piv.is_finite() {
                return Err(Error::ZeroPivot(i));
            }
            inv_pivot[i] = 1.0 / piv;
            upper_scaled[i] = if i + 1 < m { upper[i] / piv } else { 0.0 };
            prev_upper = upper_scaled[i];
        }
        Ok(Self {
            lower: lower.to_vec(),
            inv_pivot,
            upper_scaled,
        })
    }

    /// Solves in place.
    pub fn solve(&self, rhs: &mut [f64]) {
        let m = rhs.len();
        rhs[0] *= self.inv_pivot[0];
        for i in 1..m {
            rhs[i] = (rhs[i] - self.lower[i] * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..m - 1).rev() {
            rhs[i] -= self.upper_scaled[i] * rhs[i + 1];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // [2 1 0; 1 3 1; 0 1 4] x = [3 5 5] -> x = [1 1 1]
        let t = Tridiagonal::factor(&[0.0, 1.0, 1.0], &[2.0, 3.0, 4.0], &[1.0, 1.0, 0.0]).unwrap();
        let mut b = vec![3.0, 5.0, 5.0];
        t.solve(&mut b);
        for x in b {
            assert!((x - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn reports_zero_pivot() {
        assert!(matches!(
            Tridiagonal::factor(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0]),
            Err(Error::ZeroPivot(0))
        ));
    }
}
