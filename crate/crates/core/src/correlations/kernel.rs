use num_complex::Complex64;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::complex_residual;
use crate::conformal::ConformalTransform;
use crate::error::{Error, Result};
use crate::vector::Event;

/// `1 / ((x − x′)² − iε(t − t′))`.
///
/// At `x = x′` the kernel has no finite value and `(∞, 0)` is returned.
pub fn scalar_vacuum_correlation(x: &Event, x_prime: &Event, epsilon: f64) -> Complex64 {
    let d = *x - *x_prime;
    let q = Complex64::new(d.square(), -epsilon * d.t());
    if q.re == 0.0 && q.im == 0.0 {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    q.inv()
}

/// The regularised scalar kernel at a fixed `ε > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RegularizedKernel {
    epsilon: f64,
}

impl RegularizedKernel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidInput("regulator must be positive"));
        }
        Ok(RegularizedKernel { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn eval(&self, x: &Event, x_prime: &Event) -> Complex64 {
        scalar_vacuum_correlation(x, x_prime, self.epsilon)
    }

    /// `P 1/(x − x′)²`, the `ε → 0` limit off the light cone.
    pub fn principal_part(&self, x: &Event, x_prime: &Event) -> f64 {
        1.0 / (*x - *x_prime).square()
    }

    /// `ε Δt / (s² + ε²Δt²)` with `s = (x − x′)²`: `π sgn(Δt)` times a unit
    /// Lorentzian in `s` of width `ε|Δt|`, which tends to `π sgn(Δt) δ(s)`.
    pub fn imaginary_part(&self, x: &Event, x_prime: &Event) -> f64 {
        self.eval(x, x_prime).im
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ScalarInvarianceReport {
    /// `λ(x) λ(x′) c(x̄, x̄′)`, extrapolated to `ε → 0`.
    pub lhs: Complex64,
    /// `c(x, x′)`, extrapolated to `ε → 0`.
    pub rhs: Complex64,
    pub residual: f64,
    /// Residual at the finite `ε` itself.
    pub raw_residual: f64,
}

/// Checks `λ(x) λ(x′) c(x̄, x̄′) = c(x, x′)`.
///
/// Both sides use the same numerical `ε`; the comparison is made after
/// linear extrapolation from `ε` and `ε/2` to zero. Pairs on opposite sides
/// of a singular set still agree in the limit off the cone, where the kernel
/// is real.
pub fn verify_scalar_invariance<M: ConformalTransform + ?Sized>(
    m: &M,
    x: &Event,
    x_prime: &Event,
    epsilon: f64,
) -> Result<ScalarInvarianceReport> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("regulator must be positive"));
    }
    let (xb, xbp) = (m.apply(x)?, m.apply(x_prime)?);
    let ll = m.factor(x)? * m.factor(x_prime)?;
    let lhs = |e: f64| scalar_vacuum_correlation(&xb, &xbp, e) * ll;
    let rhs = |e: f64| scalar_vacuum_correlation(x, x_prime, e);
    let (l1, l2) = (lhs(epsilon), lhs(0.5 * epsilon));
    let (r1, r2) = (rhs(epsilon), rhs(0.5 * epsilon));
    let l0 = l2 * 2.0 - l1;
    let r0 = r2 * 2.0 - r1;
    Ok(ScalarInvarianceReport {
        lhs: l0,
        rhs: r0,
        residual: complex_residual(l0, r0),
        raw_residual: complex_residual(l1, r1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::{AcceleratedFrameForm, Primitive};
    use crate::math;
    use crate::quadrature::gauss_legendre;
    use crate::vector::FourVector;

    #[test]
    fn examples() {
        let o = Event::ZERO;
        let c = scalar_vacuum_correlation(&Event::new(0.0, 1.0, 0.0, 0.0), &o, 1e-12);
        assert!((c - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let c = scalar_vacuum_correlation(&Event::new(2.0, 0.0, 0.0, 0.0), &o, 0.01);
        let expected = Complex64::new(4.0, -0.02).inv();
        assert!((c - expected).norm() < 1e-16);
        assert!(scalar_vacuum_correlation(&o, &o, 0.1).re.is_infinite());
    }

    #[test]
    fn hermitian_and_homogeneous() {
        let x = Event::new(0.3, -0.1, 0.7, 0.2);
        let y = Event::new(-0.4, 0.5, 0.1, -0.3);
        let k = RegularizedKernel::new(0.05).unwrap();
        assert!((k.eval(&x, &y) - k.eval(&y, &x).conj()).norm() < 1e-15);
        // c(sx, sx′; ε) = s⁻² c(x, x′; ε/s)
        let s = 2.0;
        let scaled = scalar_vacuum_correlation(&(x * s), &(y * s), 0.05);
        let base = scalar_vacuum_correlation(&x, &y, 0.05 / s);
        assert!((scaled * (s * s) - base).norm() < 1e-13);
    }

    #[test]
    fn imaginary_part_vanishes_linearly_off_the_cone() {
        let x = Event::new(1.0, 0.4, 0.0, 0.0);
        let a = RegularizedKernel::new(1e-3).unwrap().imaginary_part(&x, &Event::ZERO);
        let b = RegularizedKernel::new(5e-4).unwrap().imaginary_part(&x, &Event::ZERO);
        assert!((a / b - 2.0).abs() < 1e-5);
    }

    #[test]
    fn imaginary_part_is_a_signed_delta_on_the_cone() {
        // ∫ Im c(s) g(s) ds → π sgn(Δt) g(0), with s the squared interval.
        let eps = 1e-3;
        for dt in [1.0, -1.0] {
            let g = |s: f64| math::exp(-s * s) * (1.0 + 0.3 * s);
            let im = |s: f64| eps * dt / (s * s + eps * eps * dt * dt);
            let mut acc = 0.0;
            let n = 4000;
            for k in 0..n {
                let a = -4.0 + 8.0 * k as f64 / n as f64;
                let b = a + 8.0 / n as f64;
                acc += gauss_legendre(a, b, |s| Ok(im(s) * g(s))).unwrap();
            }
            let expected = core::f64::consts::PI * dt * g(0.0);
            assert!((acc - expected).abs() < 0.01 * expected.abs());
        }
    }

    #[test]
    fn inversion_example() {
        let inv = Primitive::inversion(1.0).unwrap();
        let r = verify_scalar_invariance(&inv, &Event::new(2.0, 0.0, 0.0, 0.0), &Event::basis(0), 1e-8).unwrap();
        assert!((r.lhs - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn identity_is_exact() {
        let x = Event::new(0.1, 0.2, 0.3, 0.4);
        let r = verify_scalar_invariance(&AcceleratedFrameForm::identity(), &x, &Event::ZERO, 1e-6).unwrap();
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn accelerated_frame_spacelike_pair() {
        let f = AcceleratedFrameForm::new(FourVector::new(0.2, -0.3, 0.1, 0.25), 1.7).unwrap();
        let x = Event::new(0.1, 0.5, -0.2, 0.3);
        let y = Event::new(-0.1, -0.3, 0.2, 0.1);
        let r = verify_scalar_invariance(&f, &x, &y, 1e-6).unwrap();
        assert!(r.residual < 1e-10);
    }
}
