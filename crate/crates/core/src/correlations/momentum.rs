use core::f64::consts::PI;

use num_complex::Complex64;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;
use crate::quadrature::gauss_legendre;
use crate::vector::Event;

/// Relative size of the neglected tail above which the oracle gives up.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

/// Positive-frequency on-shell integral after the angular integration:
///
/// ```text
/// (2π/r) ∫₀^Λ sin(ωr) e^{−iωΔt} e^{−εω} dω
/// ```
///
/// with `r = |x − x′|`, `Δt = t − t′` and cutoff `Λ`.
pub fn momentum_space_oracle(x: &Event, x_prime: &Event, epsilon: f64, cutoff: f64) -> Result<Complex64> {
    if !(epsilon > 0.0) || !(cutoff > 0.0) {
        return Err(Error::InvalidInput("regulator and cutoff must be positive"));
    }
    let d = *x - *x_prime;
    let dt = d.t();
    let r = math::sqrt(d.0[1] * d.0[1] + d.0[2] * d.0[2] + d.0[3] * d.0[3]);
    // sin(ωr)/r, with the r → 0 limit ω.
    let radial = |w: f64| if r > 1e-12 { math::sin(w * r) / r } else { w };
    let integrand = |w: f64| {
        let phase = Complex64::new(math::cos(w * dt), -math::sin(w * dt));
        Ok(phase * (radial(w) * math::exp(-epsilon * w)))
    };
    // Panels short against both the oscillation and the damping scale.
    let scale = (r + dt.abs()).max(epsilon).max(1.0);
    let width = (0.5 / scale).min(0.25 / epsilon);
    let panels = libm::ceil(cutoff / width) as usize;
    let step = cutoff / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let a = k as f64 * step;
        acc += gauss_legendre(a, a + step, integrand)?;
    }
    let value = acc * (2.0 * PI);
    // ∫_Λ^∞ ω e^{−εω} dω bounds the tail of |sin(ωr)/r| e^{−εω}.
    let tail_bound =
        2.0 * PI * math::exp(-epsilon * cutoff) * (cutoff / epsilon + 1.0 / (epsilon * epsilon));
    if tail_bound > ORACLE_TOLERANCE * value.norm() {
        return Err(Error::NonConvergence { tail_bound });
    }
    Ok(value)
}

/// `−2π / ((Δt − iε)² − r²)`: the oracle integral with `Λ → ∞`.
pub fn momentum_space_closed_form(x: &Event, x_prime: &Event, epsilon: f64) -> Complex64 {
    let d = *x - *x_prime;
    let r2 = d.0[1] * d.0[1] + d.0[2] * d.0[2] + d.0[3] * d.0[3];
    let z = Complex64::new(d.t(), -epsilon);
    Complex64::new(-2.0 * PI, 0.0) / (z * z - r2)
}

/// Best single constant `k` with `oracle ≈ k · kernel`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ProportionalityFit {
    pub ratio: Complex64,
    /// `max |oracle/kernel − k| / |k|`.
    pub spread: f64,
}

pub fn proportionality_fit(oracle: &[Complex64], kernel: &[Complex64]) -> Result<ProportionalityFit> {
    if oracle.len() != kernel.len() || oracle.is_empty() {
        return Err(Error::InvalidInput("need equally many non-zero samples"));
    }
    let (num, den) = oracle
        .iter()
        .zip(kernel)
        .fold((Complex64::new(0.0, 0.0), 0.0), |(n, d), (o, c)| (n + o * c.conj(), d + c.norm_sqr()));
    if den == 0.0 {
        return Err(Error::InvalidInput("kernel values vanish"));
    }
    let ratio = num / den;
    let spread = oracle
        .iter()
        .zip(kernel)
        .map(|(o, c)| (o / c - ratio).norm() / ratio.norm())
        .fold(0.0_f64, f64::max);
    Ok(ProportionalityFit { ratio, spread })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::scalar_vacuum_correlation;

    const EPS: f64 = 0.02;

    #[test]
    fn matches_closed_form() {
        for x in [Event::new(0.3, 1.0, 0.2, 0.0), Event::new(1.5, 0.2, -0.3, 0.1), Event::new(0.8, 0.0, 0.0, 0.0)] {
            let o = momentum_space_oracle(&x, &Event::ZERO, EPS, 50.0 / EPS).unwrap();
            let exact = momentum_space_closed_form(&x, &Event::ZERO, EPS);
            assert!((o - exact).norm() < 1e-6 * exact.norm(), "{o} vs {exact}");
        }
    }

    #[test]
    fn proportional_to_kernel() {
        let mut os = alloc::vec::Vec::new();
        let mut cs = alloc::vec::Vec::new();
        for k in 0..6 {
            let x = Event::new(0.2 * k as f64 - 0.5, 1.0, 0.1 * k as f64, 0.3);
            os.push(momentum_space_oracle(&x, &Event::ZERO, EPS, 50.0 / EPS).unwrap());
            cs.push(scalar_vacuum_correlation(&x, &Event::ZERO, 2.0 * EPS));
        }
        let fit = proportionality_fit(&os, &cs).unwrap();
        assert!(fit.spread < 0.01);
        assert!((fit.ratio - Complex64::new(-2.0 * PI, 0.0)).norm() < 0.05);
    }

    #[test]
    fn spacelike_imaginary_part_vanishes() {
        let x = Event::new(0.2, 1.0, 0.0, 0.0);
        let a = momentum_space_oracle(&x, &Event::ZERO, 0.02, 2500.0).unwrap();
        let b = momentum_space_oracle(&x, &Event::ZERO, 0.01, 5000.0).unwrap();
        assert!(b.im.abs() < 0.6 * a.im.abs());
        assert!(b.im.abs() / b.norm() < 0.01);
    }

    #[test]
    fn short_cutoff_is_rejected() {
        let x = Event::new(0.2, 1.0, 0.0, 0.0);
        assert!(matches!(
            momentum_space_oracle(&x, &Event::ZERO, 0.02, 10.0),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn homogeneous_of_degree_minus_two() {
        let x = Event::new(0.3, 1.0, 0.2, 0.0);
        let c1 = scalar_vacuum_correlation(&x, &Event::ZERO, 0.0);
        let c2 = scalar_vacuum_correlation(&(x * 2.0), &Event::ZERO, 0.0);
        assert!((c1 - c2 * 4.0).norm() < 1e-15);
    }
}
