//! Conformal factor fields `λ(x)` and the Ricci tensor of `λ² η`.

use crate::conformal::AcceleratedFrameForm;
use crate::error::{Error, Result};
use crate::math;
use crate::stencil;
use crate::vector::{Event, FourVector, Matrix4, METRIC};

/// Default finite-difference step for derivatives of `ln |λ|`.
pub const FACTOR_STEP: f64 = 1e-3;

/// A scalar conformal factor on spacetime.
pub trait ConformalFactorField {
    fn lambda(&self, x: &Event) -> Result<f64>;

    /// Closed-form `(φ_μ, φ_{μν})` with `φ_μ = ∂_μ ln λ`, when known.
    fn closed_form(&self, _x: &Event) -> Option<Result<(FourVector, Matrix4)>> {
        None
    }
}

impl ConformalFactorField for AcceleratedFrameForm {
    fn lambda(&self, x: &Event) -> Result<f64> {
        self.conformal_factor(x)
    }

    fn closed_form(&self, x: &Event) -> Option<Result<(FourVector, Matrix4)>> {
        Some(self.log_gradient(x).and_then(|g| Ok((g, self.log_hessian(x)?))))
    }
}

/// Wraps a plain function as a factor field; derivatives come from finite
/// differences.
#[derive(Clone, Copy, Debug)]
pub struct FactorFn<F>(pub F);

impl<F: Fn(&Event) -> f64> ConformalFactorField for FactorFn<F> {
    fn lambda(&self, x: &Event) -> Result<f64> {
        let l = (self.0)(x);
        if l == 0.0 || !l.is_finite() {
            return Err(Error::Singular { residual: l });
        }
        Ok(l)
    }
}

/// `λ(x) = exp(x⁰)`: smooth, positive and not of the flat-frame family.
pub fn exponential_factor() -> FactorFn<fn(&Event) -> f64> {
    FactorFn(|x: &Event| math::exp(x.t()))
}

/// How `φ_μ` and `φ_{μν}` are obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Derivatives {
    /// Closed form when the field has one, finite differences otherwise.
    Auto { step: f64 },
    /// Always finite differences of `ln |λ|` with the given step.
    Finite { step: f64 },
}

impl Default for Derivatives {
    fn default() -> Self {
        Derivatives::Auto { step: FACTOR_STEP }
    }
}

/// `(φ_μ, φ_{μν})` at `x`.
pub fn log_derivatives<L: ConformalFactorField + ?Sized>(
    field: &L,
    x: &Event,
    how: Derivatives,
) -> Result<(FourVector, Matrix4)> {
    let step = match how {
        Derivatives::Auto { step } => {
            if let Some(cf) = field.closed_form(x) {
                return cf;
            }
            step
        }
        Derivatives::Finite { step } => step,
    };
    if !(step > 0.0) {
        return Err(Error::InvalidInput("finite-difference step must be positive"));
    }
    stencil::gradient_hessian(|y| field.lambda(&y).map(|l| math::ln(l.abs())), *x, step)
}

/// `R_{μν} = −η_{μν} η^{αβ}(φ_{αβ} + 2φ_αφ_β) − 2(φ_{μν} − φ_μφ_ν)`.
pub fn ricci_from_log_derivatives(phi: &FourVector, phi2: &Matrix4) -> Matrix4 {
    let trace: f64 = (0..4)
        .map(|a| METRIC[a] * (phi2[(a, a)] + 2.0 * phi[a] * phi[a]))
        .sum();
    Matrix4::metric().scale(-trace) - (*phi2 - Matrix4::outer(phi, phi)).scale(2.0)
}

/// Ricci tensor of the metric `λ(x)² η`.
pub fn ricci_conformal<L: ConformalFactorField + ?Sized>(field: &L, x: &Event) -> Result<Matrix4> {
    ricci_conformal_with(field, x, Derivatives::default())
}

pub fn ricci_conformal_with<L: ConformalFactorField + ?Sized>(
    field: &L,
    x: &Event,
    how: Derivatives,
) -> Result<Matrix4> {
    let (phi, phi2) = log_derivatives(field, x, how)?;
    Ok(ricci_from_log_derivatives(&phi, &phi2))
}
