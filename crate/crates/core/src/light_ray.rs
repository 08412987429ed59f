//! Straight null rays and their images under conformal maps.
//!
//! A ray `x(s) = x′ + v s` with `v⁰ = 1` maps onto the ray through `x̄′`
//! with direction `v̄ = f v / (f⁰ v)` (tetrad `f` at `x′`), and
//!
//! ```text
//! t̄ − t̄′ = (f⁰_ν(x′) v^ν) λ(x) (t − t′)
//! ```
//!
//! so the image time runs backwards wherever `λ(x)` has the opposite sign.

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::conformal::{jacobian_tetrad, ConformalTransform};
use crate::error::{Error, Result};
use crate::math;
use crate::vector::{Event, FourVector};

/// Tolerance on `v² = 0` for ray directions.
pub const NULL_TOLERANCE: f64 = 1e-9;

const BISECTION_STEPS: usize = 80;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct LightRay {
    origin: Event,
    direction: FourVector,
    span: (f64, f64),
}

impl LightRay {
    /// Validates `v⁰ = 1`, `v² = 0` and a finite, non-empty span of `t − t′`.
    pub fn new(origin: Event, direction: FourVector, span: (f64, f64)) -> Result<Self> {
        if direction.t() != 1.0 {
            return Err(Error::InvalidInput("ray direction must have v⁰ = 1"));
        }
        let residual = direction.square();
        if residual.abs() > NULL_TOLERANCE {
            return Err(Error::Constraint {
                name: "v·v = 0",
                residual,
            });
        }
        if !origin.is_finite() || !(span.0 < span.1) || !span.0.is_finite() || !span.1.is_finite() {
            return Err(Error::InvalidInput("ray needs a finite origin and span"));
        }
        Ok(LightRay {
            origin,
            direction,
            span,
        })
    }

    /// Ray along the spatial direction `n` (normalised here).
    pub fn along(origin: Event, n: [f64; 3], span: (f64, f64)) -> Result<Self> {
        let norm = math::sqrt(n.iter().map(|c| c * c).sum());
        if !(norm > 0.0) {
            return Err(Error::InvalidInput("zero spatial direction"));
        }
        let v = FourVector::new(1.0, n[0] / norm, n[1] / norm, n[2] / norm);
        LightRay::new(origin, v, span)
    }

    pub fn origin(&self) -> Event {
        self.origin
    }

    pub fn direction(&self) -> FourVector {
        self.direction
    }

    pub fn span(&self) -> (f64, f64) {
        self.span
    }

    /// `x′ + v s`.
    pub fn point(&self, s: f64) -> Event {
        self.origin + self.direction * s
    }
}

/// Bookkeeping for `sgn(t − t′) = ±sgn λ(x) sgn λ(x′) sgn(t̄ − t̄′)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SignLawReport {
    /// The global sign (−1 for orientation-reversing maps such as β < 0).
    pub orientation: f64,
    pub checked: usize,
    pub violations: usize,
}

impl SignLawReport {
    pub fn holds(&self) -> bool {
        self.checked > 0 && self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct LightRayImage {
    /// Image ray; its span is the range of `t̄ − t̄′` over regular samples.
    pub ray: LightRay,
    /// Ray parameters `s` at which `λ` changes sign.
    pub flips: Vec<f64>,
    pub sign_law: SignLawReport,
    /// Max distance of mapped samples from the image line, relative to
    /// `max(1, |x̄ − x̄′|)`.
    pub collinearity: f64,
    /// Max relative deviation of `t̄ − t̄′` from the transport law.
    pub transport_residual: f64,
    /// Samples skipped because they sit on a singular set.
    pub singular_samples: usize,
}

struct Sample {
    s: f64,
    lambda: f64,
}

/// Maps `samples` equally spaced points of `ray` and checks the transport
/// and sign laws on each.
pub fn transform_light_ray<M: ConformalTransform + ?Sized>(
    m: &M,
    ray: &LightRay,
    samples: usize,
) -> Result<LightRayImage> {
    if samples < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: samples,
        });
    }
    let v = ray.direction;
    let x0 = ray.origin;
    let x0_bar = match m.apply(&x0) {
        Ok(p) => p,
        Err(Error::Singular { .. }) => return Err(singular_or_ray(m, ray, samples)),
        Err(e) => return Err(e),
    };
    let jt = jacobian_tetrad(m, &x0)?;
    let fv = jt.tetrad.matrix().mul_vec(&v);
    let f0v = fv.t();
    let v_bar = fv * (1.0 / f0v);
    let lambda0 = jt.lambda;
    let orientation = m.orientation();

    let (a, b) = ray.span;
    let mut regular: Vec<Sample> = Vec::with_capacity(samples);
    let mut singular_samples = 0;
    let mut collinearity = 0.0_f64;
    let mut transport_residual = 0.0_f64;
    let mut sign_law = SignLawReport {
        orientation,
        checked: 0,
        violations: 0,
    };
    let mut t_range = (f64::INFINITY, f64::NEG_INFINITY);

    for k in 0..samples {
        let s = a + (b - a) * (k as f64) / ((samples - 1) as f64);
        let x = ray.point(s);
        let (x_bar, lambda) = match (m.apply(&x), m.factor(&x)) {
            (Ok(p), Ok(l)) => (p, l),
            (Err(Error::Singular { .. }), _) | (_, Err(Error::Singular { .. })) => {
                singular_samples += 1;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let d = x_bar - x0_bar;
        let dt = d.t();
        let scale = d.euclidean_norm().max(1.0);
        let off_line = d - v_bar * dt;
        collinearity = collinearity.max(off_line.euclidean_norm() / scale);
        let predicted = f0v * lambda * s;
        transport_residual = transport_residual.max((dt - predicted).abs() / dt.abs().max(1.0));
        t_range = (t_range.0.min(dt), t_range.1.max(dt));

        if s != 0.0 && dt != 0.0 {
            sign_law.checked += 1;
            let rhs = orientation * math::sgn(lambda) * math::sgn(lambda0) * math::sgn(dt);
            if math::sgn(s) != rhs {
                sign_law.violations += 1;
            }
        }
        regular.push(Sample { s, lambda });
    }
    if regular.is_empty() {
        return Err(Error::SingularRay);
    }

    let mut flips = Vec::new();
    for w in regular.windows(2) {
        if math::sgn(w[0].lambda) != math::sgn(w[1].lambda) {
            flips.push(locate_flip(m, ray, w[0].s, w[1].s, w[0].lambda));
        }
    }

    let span = if t_range.0 < t_range.1 {
        t_range
    } else {
        (t_range.0 - 1.0, t_range.0 + 1.0)
    };
    Ok(LightRayImage {
        ray: LightRay {
            origin: x0_bar,
            direction: v_bar,
            span,
        },
        flips,
        sign_law,
        collinearity,
        transport_residual,
        singular_samples,
    })
}

/// The whole ray is singular, or just its origin.
fn singular_or_ray<M: ConformalTransform + ?Sized>(m: &M, ray: &LightRay, samples: usize) -> Error {
    let (a, b) = ray.span;
    let any_regular = (0..samples).any(|k| {
        let s = a + (b - a) * (k as f64) / ((samples - 1) as f64);
        m.factor(&ray.point(s)).is_ok()
    });
    if any_regular {
        Error::Singular { residual: 0.0 }
    } else {
        Error::SingularRay
    }
}

/// Bisection for the sign change of `λ` between `lo` and `hi`.
fn locate_flip<M: ConformalTransform + ?Sized>(
    m: &M,
    ray: &LightRay,
    mut lo: f64,
    mut hi: f64,
    lambda_lo: f64,
) -> f64 {
    let sign_lo = math::sgn(lambda_lo);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        match m.factor(&ray.point(mid)) {
            Ok(l) if math::sgn(l) == sign_lo => lo = mid,
            Ok(_) => hi = mid,
            Err(_) => return mid,
        }
    }
    0.5 * (lo + hi)
}
