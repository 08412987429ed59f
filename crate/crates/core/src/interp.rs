//! Local interpolating polynomials through a sliding window of knots.

/// Number of knots per window (polynomial degree `WINDOW - 1`).
pub(crate) const WINDOW: usize = 8;

/// Polynomial in `t - center` with monomial coefficients.
#[derive(Clone, Copy, Debug)]
pub(crate) struct LocalPolynomial {
    center: f64,
    coeffs: [f64; WINDOW],
}

impl LocalPolynomial {
    /// Interpolates `ys` at `ts` (exactly `WINDOW` distinct nodes).
    pub(crate) fn fit(ts: &[f64], ys: &[f64], center: f64) -> Self {
        debug_assert_eq!(ts.len(), WINDOW);
        debug_assert_eq!(ys.len(), WINDOW);
        let s: [f64; WINDOW] = core::array::from_fn(|i| ts[i] - center);
        // Newton divided differences, in place.
        let mut dd: [f64; WINDOW] = core::array::from_fn(|i| ys[i]);
        for level in 1..WINDOW {
            for i in (level..WINDOW).rev() {
                dd[i] = (dd[i] - dd[i - 1]) / (s[i] - s[i - level]);
            }
        }
        // Expand the Newton form into monomials by Horner's scheme.
        let mut coeffs = [0.0; WINDOW];
        coeffs[0] = dd[WINDOW - 1];
        for k in (0..WINDOW - 1).rev() {
            // coeffs <- coeffs * (s - s_k) + dd[k]
            for i in (1..WINDOW).rev() {
                coeffs[i] = coeffs[i - 1] - s[k] * coeffs[i];
            }
            coeffs[0] = dd[k] - s[k] * coeffs[0];
        }
        LocalPolynomial { center, coeffs }
    }

    pub(crate) fn eval(&self, t: f64) -> f64 {
        let s = t - self.center;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    /// `order`-th derivative at `t`.
    pub(crate) fn derivative(&self, t: f64, order: usize) -> f64 {
        let s = t - self.center;
        let mut acc = 0.0;
        for i in (order..WINDOW).rev() {
            let falling: f64 = ((i - order + 1)..=i).map(|k| k as f64).product();
            acc = acc * s + self.coeffs[i] * falling;
        }
        acc
    }
}

/// First index of the `WINDOW` knots centred on `t` (clamped to the data).
pub(crate) fn window_start(knots: &[f64], t: f64) -> usize {
    let n = knots.len();
    debug_assert!(n >= WINDOW);
    let above = knots.partition_point(|&k| k <= t);
    above.saturating_sub(WINDOW / 2).min(n - WINDOW)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_degree_seven_polynomial() {
        let p = |t: f64| 1.0 - t + 0.5 * t.powi(3) - 0.1 * t.powi(7);
        let dp = |t: f64| -1.0 + 1.5 * t * t - 0.7 * t.powi(6);
        let d3p = |t: f64| 3.0 - 21.0 * t.powi(4);
        let ts: [f64; WINDOW] = core::array::from_fn(|i| -1.0 + 0.27 * i as f64 + 0.01 * (i * i) as f64);
        let ys = ts.map(p);
        let poly = LocalPolynomial::fit(&ts, &ys, 0.1);
        for t in [-0.9, 0.0, 0.37, 1.2] {
            assert!((poly.eval(t) - p(t)).abs() < 1e-12);
            assert!((poly.derivative(t, 1) - dp(t)).abs() < 1e-10);
            assert!((poly.derivative(t, 3) - d3p(t)).abs() < 1e-8);
        }
    }

    #[test]
    fn window_is_clamped() {
        let knots: [f64; 20] = core::array::from_fn(|i| i as f64);
        assert_eq!(window_start(&knots, -3.0), 0);
        assert_eq!(window_start(&knots, 10.5), 7);
        assert_eq!(window_start(&knots, 19.0), 12);
    }
}
