//! The conformal group of Minkowski spacetime.
//!
//! A [`ConformalMap`] is a chain of Poincaré, dilation and inversion
//! primitives. The special conformal family used for accelerated frames has
//! the closed form
//!
//! ```text
//! λ(x) = β / (1 − 2α·x + α²x²),    x̄ = λ(x) (x − x² α)
//! ```
//!
//! held by [`AcceleratedFrameForm`]; it equals inversion ∘ translation(α) ∘
//! inversion. Every map reports a signed conformal factor `λ` with
//! `Jᵀ η J = λ² η`, obtained as the product of the primitive factors.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;
use crate::vector::{Event, FourVector, Matrix4};

/// Default relative threshold below which a singular residual counts as zero.
pub const SINGULAR_THRESHOLD: f64 = 1e-12;

/// Tolerance on `Λᵀ η Λ = η` for Lorentz primitives.
pub const LORENTZ_TOLERANCE: f64 = 1e-9;

/// Anything that maps events conformally.
pub trait ConformalTransform {
    fn apply(&self, x: &Event) -> Result<Event>;

    /// `∂x̄^μ/∂x^ν` together with the signed conformal factor `λ(x)`.
    fn jacobian(&self, x: &Event) -> Result<(Matrix4, f64)>;

    /// Signed conformal factor `λ(x)`.
    fn factor(&self, x: &Event) -> Result<f64> {
        self.jacobian(x).map(|(_, l)| l)
    }

    /// Global sign of the light-ray sign law: +1 for orientation-preserving
    /// chains, −1 when an odd number of primitives flips the time arrow
    /// (negative β or s, or a time-reversing Lorentz block).
    fn orientation(&self) -> f64 {
        1.0
    }
}

/// One generator of the conformal group.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum Primitive {
    /// `x ↦ x + b`.
    Translation { b: FourVector },
    /// `x ↦ Λx`.
    Lorentz { matrix: Matrix4 },
    /// `x ↦ s x`.
    Dilation { s: f64 },
    /// `x ↦ −β x / x²`.
    Inversion { beta: f64 },
}

impl Primitive {
    pub fn translation(b: FourVector) -> Self {
        Primitive::Translation { b }
    }

    pub fn lorentz(matrix: Matrix4) -> Result<Self> {
        let p = Primitive::Lorentz { matrix };
        p.validate()?;
        Ok(p)
    }

    pub fn dilation(s: f64) -> Result<Self> {
        let p = Primitive::Dilation { s };
        p.validate()?;
        Ok(p)
    }

    pub fn inversion(beta: f64) -> Result<Self> {
        let p = Primitive::Inversion { beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Primitive::Translation { b } if !b.is_finite() => {
                Err(Error::InvalidInput("non-finite translation"))
            }
            Primitive::Lorentz { matrix } => {
                if !matrix.is_finite() {
                    return Err(Error::InvalidInput("non-finite Lorentz matrix"));
                }
                let residual = matrix.lorentz_residual();
                if residual > LORENTZ_TOLERANCE {
                    return Err(Error::Constraint {
                        name: "ΛᵀηΛ = η",
                        residual,
                    });
                }
                Ok(())
            }
            Primitive::Dilation { s } if s == 0.0 || !s.is_finite() => {
                Err(Error::InvalidInput("dilation factor must be finite and non-zero"))
            }
            Primitive::Inversion { beta } if beta == 0.0 || !beta.is_finite() => {
                Err(Error::InvalidInput("inversion constant must be finite and non-zero"))
            }
            _ => Ok(()),
        }
    }

    pub fn inverse(&self) -> Primitive {
        match *self {
            Primitive::Translation { b } => Primitive::Translation { b: -b },
            Primitive::Lorentz { matrix } => Primitive::Lorentz {
                matrix: matrix.lorentz_inverse(),
            },
            Primitive::Dilation { s } => Primitive::Dilation { s: 1.0 / s },
            Primitive::Inversion { beta } => Primitive::Inversion { beta },
        }
    }

    fn inversion_square(x: &Event, threshold: f64) -> Result<f64> {
        let x2 = x.square();
        let scale = x.0.iter().map(|c| c * c).sum::<f64>();
        if x2.abs() <= threshold * scale || scale == 0.0 {
            return Err(Error::Singular { residual: x2 });
        }
        Ok(x2)
    }

    fn apply_with(&self, x: &Event, threshold: f64) -> Result<Event> {
        Ok(match *self {
            Primitive::Translation { b } => *x + b,
            Primitive::Lorentz { matrix } => matrix * *x,
            Primitive::Dilation { s } => *x * s,
            Primitive::Inversion { beta } => {
                let x2 = Self::inversion_square(x, threshold)?;
                *x * (-beta / x2)
            }
        })
    }

    fn jacobian_with(&self, x: &Event, threshold: f64) -> Result<(Matrix4, f64)> {
        Ok(match *self {
            Primitive::Translation { .. } => (Matrix4::identity(), 1.0),
            Primitive::Lorentz { matrix } => (matrix, 1.0),
            Primitive::Dilation { s } => (Matrix4::identity().scale(s), s),
            Primitive::Inversion { beta } => {
                let x2 = Self::inversion_square(x, threshold)?;
                // (−β/x²)(δ^μ_ν − 2 x^μ x_ν / x²): a scaled Minkowski reflection.
                let reflection =
                    Matrix4::identity() - Matrix4::outer(x, &x.lower()).scale(2.0 / x2);
                (reflection.scale(-beta / x2), beta / x2)
            }
        })
    }

    fn orientation(&self) -> f64 {
        match *self {
            Primitive::Translation { .. } => 1.0,
            Primitive::Lorentz { matrix } => math::sgn(matrix.0[0][0]),
            Primitive::Dilation { s } => math::sgn(s),
            Primitive::Inversion { beta } => math::sgn(beta),
        }
    }
}

impl ConformalTransform for Primitive {
    fn apply(&self, x: &Event) -> Result<Event> {
        self.apply_with(x, SINGULAR_THRESHOLD)
    }

    fn jacobian(&self, x: &Event) -> Result<(Matrix4, f64)> {
        self.jacobian_with(x, SINGULAR_THRESHOLD)
    }

    fn orientation(&self) -> f64 {
        Primitive::orientation(self)
    }
}

/// Ordered chain of primitives; `chain[0]` acts first.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawMap"))]
pub struct ConformalMap {
    chain: Vec<Primitive>,
    #[cfg_attr(feature = "serde", serde(skip_serializing))]
    singular_threshold: f64,
}

#[cfg(feature = "serde")]
#[derive(Deserialize)]
struct RawMap {
    chain: Vec<Primitive>,
    #[serde(default = "default_threshold")]
    singular_threshold: f64,
}

#[cfg(feature = "serde")]
fn default_threshold() -> f64 {
    SINGULAR_THRESHOLD
}

#[cfg(feature = "serde")]
impl TryFrom<RawMap> for ConformalMap {
    type Error = Error;
    fn try_from(raw: RawMap) -> Result<Self> {
        ConformalMap::new(raw.chain).map(|m| m.with_singular_threshold(raw.singular_threshold))
    }
}

impl ConformalMap {
    /// Validates every primitive. An empty chain is the identity.
    pub fn new(chain: Vec<Primitive>) -> Result<Self> {
        for p in &chain {
            p.validate()?;
        }
        let chain = if chain.is_empty() {
            vec![Primitive::translation(FourVector::ZERO)]
        } else {
            chain
        };
        Ok(ConformalMap {
            chain,
            singular_threshold: SINGULAR_THRESHOLD,
        })
    }

    pub fn identity() -> Self {
        ConformalMap {
            chain: vec![Primitive::translation(FourVector::ZERO)],
            singular_threshold: SINGULAR_THRESHOLD,
        }
    }

    pub fn with_singular_threshold(mut self, threshold: f64) -> Self {
        self.singular_threshold = threshold;
        self
    }

    pub fn chain(&self) -> &[Primitive] {
        &self.chain
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &ConformalMap) -> ConformalMap {
        let mut chain = inner.chain.clone();
        chain.extend_from_slice(&self.chain);
        ConformalMap {
            chain,
            singular_threshold: self.singular_threshold.max(inner.singular_threshold),
        }
    }

    pub fn invert(&self) -> ConformalMap {
        ConformalMap {
            chain: self.chain.iter().rev().map(Primitive::inverse).collect(),
            singular_threshold: self.singular_threshold,
        }
    }

    /// Recognises chains of the literal form inversion ∘ translation ∘
    /// inversion and returns their closed form.
    pub fn canonical_form(&self) -> Option<AcceleratedFrameForm> {
        match self.chain.as_slice() {
            [Primitive::Inversion { beta: b1 }, Primitive::Translation { b }, Primitive::Inversion { beta: b2 }] => {
                AcceleratedFrameForm::new(*b * (1.0 / b1), b2 / b1).ok()
            }
            _ => None,
        }
    }
}

impl ConformalTransform for ConformalMap {
    fn apply(&self, x: &Event) -> Result<Event> {
        self.chain
            .iter()
            .try_fold(*x, |y, p| p.apply_with(&y, self.singular_threshold))
    }

    fn jacobian(&self, x: &Event) -> Result<(Matrix4, f64)> {
        let mut y = *x;
        let mut jac = Matrix4::identity();
        let mut lambda = 1.0;
        for p in &self.chain {
            let (j, l) = p.jacobian_with(&y, self.singular_threshold)?;
            jac = j * jac;
            lambda *= l;
            y = p.apply_with(&y, self.singular_threshold)?;
        }
        Ok((jac, lambda))
    }

    fn orientation(&self) -> f64 {
        self.chain.iter().map(Primitive::orientation).product()
    }
}

/// Canonical special conformal map with constants `(α^μ, β)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawForm"))]
pub struct AcceleratedFrameForm {
    alpha: FourVector,
    beta: f64,
    #[cfg_attr(feature = "serde", serde(skip_serializing))]
    singular_threshold: f64,
}

#[cfg(feature = "serde")]
#[derive(Deserialize)]
struct RawForm {
    alpha: FourVector,
    beta: f64,
    #[serde(default = "default_threshold")]
    singular_threshold: f64,
}

#[cfg(feature = "serde")]
impl TryFrom<RawForm> for AcceleratedFrameForm {
    type Error = Error;
    fn try_from(raw: RawForm) -> Result<Self> {
        AcceleratedFrameForm::new(raw.alpha, raw.beta)
            .map(|f| f.with_singular_threshold(raw.singular_threshold))
    }
}

impl AcceleratedFrameForm {
    pub fn new(alpha: FourVector, beta: f64) -> Result<Self> {
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::InvalidInput("beta must be finite and non-zero"));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidInput("non-finite alpha"));
        }
        Ok(AcceleratedFrameForm {
            alpha,
            beta,
            singular_threshold: SINGULAR_THRESHOLD,
        })
    }

    pub fn identity() -> Self {
        AcceleratedFrameForm {
            alpha: FourVector::ZERO,
            beta: 1.0,
            singular_threshold: SINGULAR_THRESHOLD,
        }
    }

    pub fn with_singular_threshold(mut self, threshold: f64) -> Self {
        self.singular_threshold = threshold;
        self
    }

    pub fn alpha(&self) -> FourVector {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The equivalent chain inversion(1) → translation(α) → inversion(β).
    pub fn to_map(&self) -> ConformalMap {
        ConformalMap {
            chain: vec![
                Primitive::Inversion { beta: 1.0 },
                Primitive::Translation { b: self.alpha },
                Primitive::Inversion { beta: self.beta },
            ],
            singular_threshold: self.singular_threshold,
        }
    }

    /// `1 − 2α·x + α²x²`.
    pub fn singular_residual(&self, x: &Event) -> f64 {
        let a = &self.alpha;
        1.0 - 2.0 * a.dot(x) + a.square() * x.square()
    }

    /// `1 + 2ᾱ·x̄ + ᾱ²x̄²` with `ᾱ = α/β`; equals `1 / (1 − 2α·x + α²x²)`.
    pub fn image_singular_residual(&self, x_bar: &Event) -> f64 {
        let a = self.alpha * (1.0 / self.beta);
        1.0 + 2.0 * a.dot(x_bar) + a.square() * x_bar.square()
    }

    /// Denominator of λ, or a singularity error when it is numerically zero.
    fn denominator(&self, x: &Event) -> Result<f64> {
        let d = self.singular_residual(x);
        let scale = 1.0 + (self.alpha.square() * x.square()).abs();
        if d.abs() < self.singular_threshold * scale || !d.is_finite() {
            return Err(Error::Singular { residual: d });
        }
        Ok(d)
    }

    pub fn conformal_factor(&self, x: &Event) -> Result<f64> {
        Ok(self.beta / self.denominator(x)?)
    }

    /// `φ_μ = ∂_μ ln λ` (lower index).
    pub fn log_gradient(&self, x: &Event) -> Result<FourVector> {
        let d = self.denominator(x)?;
        let a2 = self.alpha.square();
        Ok((self.alpha.lower() * 2.0 - x.lower() * (2.0 * a2)) * (1.0 / d))
    }

    /// `φ_{μν} = ∂_μ φ_ν = φ_μ φ_ν − 2α² η_{μν} / D`.
    pub fn log_hessian(&self, x: &Event) -> Result<Matrix4> {
        let d = self.denominator(x)?;
        let phi = self.log_gradient(x)?;
        let a2 = self.alpha.square();
        Ok(Matrix4::outer(&phi, &phi) - Matrix4::metric().scale(2.0 * a2 / d))
    }
}

impl ConformalTransform for AcceleratedFrameForm {
    fn apply(&self, x: &Event) -> Result<Event> {
        let lambda = self.conformal_factor(x)?;
        Ok((*x - self.alpha * x.square()) * lambda)
    }

    fn jacobian(&self, x: &Event) -> Result<(Matrix4, f64)> {
        let lambda = self.conformal_factor(x)?;
        let phi = self.log_gradient(x)?;
        let y = *x - self.alpha * x.square();
        // ∂_ν y^μ = δ^μ_ν − 2 α^μ x_ν
        let dy = Matrix4::identity() - Matrix4::outer(&self.alpha, &x.lower()).scale(2.0);
        let j = (Matrix4::outer(&y, &phi) + dy).scale(lambda);
        Ok((j, lambda))
    }

    fn factor(&self, x: &Event) -> Result<f64> {
        self.conformal_factor(x)
    }

    fn orientation(&self) -> f64 {
        math::sgn(self.beta)
    }
}

/// `λ(x) = β / (1 − 2α·x + α²x²)`.
pub fn conformal_factor(form: &AcceleratedFrameForm, x: &Event) -> Result<f64> {
    form.conformal_factor(x)
}

/// Source-side singular residual `1 − 2α·x + α²x²`.
pub fn singular_residual(form: &AcceleratedFrameForm, x: &Event) -> f64 {
    form.singular_residual(x)
}

/// Image-side singular residual, see [`AcceleratedFrameForm::image_singular_residual`].
pub fn image_singular_residual(form: &AcceleratedFrameForm, x_bar: &Event) -> f64 {
    form.image_singular_residual(x_bar)
}

/// Pointwise Lorentz frame `f^μ_ν = (1/λ) ∂x̄^μ/∂x^ν`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Tetrad(pub Matrix4);

impl Tetrad {
    pub fn matrix(&self) -> &Matrix4 {
        &self.0
    }

    pub fn lorentz_residual(&self) -> f64 {
        self.0.lorentz_residual()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobianTetrad {
    pub jacobian: Matrix4,
    pub lambda: f64,
    pub tetrad: Tetrad,
}

pub fn jacobian_tetrad<M: ConformalTransform + ?Sized>(m: &M, x: &Event) -> Result<JacobianTetrad> {
    let (jacobian, lambda) = m.jacobian(x)?;
    Ok(JacobianTetrad {
        jacobian,
        lambda,
        tetrad: Tetrad(jacobian.scale(1.0 / lambda)),
    })
}

/// Both sides of `(x̄ − x̄′)² = λ(x) λ(x′) (x − x′)²`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct IntervalReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs| / max(|lhs|, 1)`.
    pub residual: f64,
}

pub fn verify_interval_law<M: ConformalTransform + ?Sized>(
    m: &M,
    x: &Event,
    x_prime: &Event,
) -> Result<IntervalReport> {
    let (xb, xbp) = (m.apply(x)?, m.apply(x_prime)?);
    let lhs = (xb - xbp).square();
    let rhs = m.factor(x)? * m.factor(x_prime)? * (*x - *x_prime).square();
    Ok(IntervalReport {
        lhs,
        rhs,
        residual: math::relative_residual(lhs, rhs),
    })
}
