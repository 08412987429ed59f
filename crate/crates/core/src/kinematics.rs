//! The Abraham vector `w = v̈ + v (v̇·v̇)`, motion classification and the
//! transport of worldlines through conformal maps.

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::conformal::{AcceleratedFrameForm, ConformalTransform};
use crate::error::{Error, Result};
use crate::factor::{log_derivatives, ConformalFactorField, Derivatives};
use crate::math;
use crate::quadrature::gauss_legendre;
use crate::vector::{FourVector, Matrix4};
use crate::worldline::{KinematicState, Worldline};

/// Default tolerance on Euclidean norms used by [`classify_motion`].
pub const CLASSIFY_TOLERANCE: f64 = 1e-5;

/// Default bound on `a δ` for a body to count as rigid.
pub const RIGIDITY_THRESHOLD: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AbrahamVector {
    pub w: FourVector,
    /// Euclidean norm of the components of `w`.
    pub residual_norm: f64,
}

impl AbrahamVector {
    pub fn from_state(state: &KinematicState) -> Self {
        let w = state.jerk + state.velocity * state.acceleration.square();
        AbrahamVector {
            w,
            residual_norm: w.euclidean_norm(),
        }
    }
}

pub fn abraham_vector(w: &Worldline, tau: f64, step: f64) -> Result<AbrahamVector> {
    Ok(AbrahamVector::from_state(&w.kinematic_state(tau, step)?))
}

/// Image of a worldline, sampled on the image's own proper time `τ̄`
/// (zero at the first grid point).
pub fn pushforward_worldline<M: ConformalTransform + ?Sized>(
    m: &M,
    w: &Worldline,
    grid: &[f64],
) -> Result<Worldline> {
    for (k, pair) in grid.windows(2).enumerate() {
        if !(pair[0] < pair[1]) {
            return Err(Error::NotMonotone { index: k + 1 });
        }
    }
    let at = |index: usize, tau: f64| -> Result<_> {
        let x = w.position(tau)?;
        m.apply(&x).map_err(|e| match e {
            Error::Singular { residual } => Error::SingularGridPoint {
                index,
                tau,
                residual,
            },
            other => other,
        })
    };
    // dτ̄ = |J v| dτ
    let speed = |index: usize, tau: f64| -> Result<f64> {
        let x = w.position(tau)?;
        let v = w.velocity(tau)?;
        let (j, _) = m.jacobian(&x).map_err(|e| match e {
            Error::Singular { residual } => Error::SingularGridPoint {
                index,
                tau,
                residual,
            },
            other => other,
        })?;
        Ok(math::sqrt((j * v).square().abs()))
    };

    let mut taus = Vec::with_capacity(grid.len());
    let mut events = Vec::with_capacity(grid.len());
    let mut tau_bar = 0.0;
    for (k, &tau) in grid.iter().enumerate() {
        if k > 0 {
            tau_bar += gauss_legendre(grid[k - 1], tau, |t| speed(k - 1, t))?;
        }
        taus.push(tau_bar);
        events.push(at(k, tau)?);
    }
    Worldline::sampled(taus, events)
}

/// Both forms of the Abraham-vector transformation law.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct HillTransform {
    /// `J (1/λ³) {w + (v v − η) v (φ₂ − φφ)}`.
    pub general: FourVector,
    /// `J (1/λ³) w`.
    pub reduced: FourVector,
}

impl HillTransform {
    pub fn disagreement(&self) -> f64 {
        (self.general - self.reduced).euclidean_norm()
    }
}

/// Applies both laws given the Jacobian, factor and its log-derivatives at
/// the state's position.
pub fn hill_law(
    jacobian: &Matrix4,
    lambda: f64,
    phi: &FourVector,
    phi2: &Matrix4,
    state: &KinematicState,
) -> HillTransform {
    let v = state.velocity;
    let w = AbrahamVector::from_state(state).w;
    let m = *phi2 - Matrix4::outer(phi, phi);
    // (M v)_ρ, lower index
    let mv = m * v;
    let vmv = v.dot(&mv.lower());
    // (v^ν v^ρ − η^{νρ}) (M v)_ρ
    let correction = v * vmv - mv.lower();
    let scale = 1.0 / (lambda * lambda * lambda);
    HillTransform {
        general: (*jacobian * (w + correction)) * scale,
        reduced: (*jacobian * w) * scale,
    }
}

pub fn transform_abraham(form: &AcceleratedFrameForm, state: &KinematicState) -> Result<HillTransform> {
    let x = state.position;
    let (j, lambda) = form.jacobian(&x)?;
    let phi = form.log_gradient(&x)?;
    let phi2 = form.log_hessian(&x)?;
    Ok(hill_law(&j, lambda, &phi, &phi2, state))
}

/// Same laws for an arbitrary factor field paired with a Jacobian.
pub fn transform_abraham_with<L: ConformalFactorField + ?Sized>(
    field: &L,
    jacobian: &Matrix4,
    state: &KinematicState,
    how: Derivatives,
) -> Result<HillTransform> {
    let x = state.position;
    let lambda = field.lambda(&x)?;
    let (phi, phi2) = log_derivatives(field, &x, how)?;
    Ok(hill_law(jacobian, lambda, &phi, &phi2, state))
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "class", rename_all = "snake_case"))]
pub enum MotionClass {
    Inertial,
    UniformlyAccelerated { a: f64 },
    Other,
}

impl MotionClass {
    /// Inertial motion is the `a = 0` case of uniform acceleration.
    pub fn is_uniformly_accelerated(&self) -> bool {
        !matches!(self, MotionClass::Other)
    }

    pub fn label(&self) -> &'static str {
        match self {
            MotionClass::Inertial => "inertial",
            MotionClass::UniformlyAccelerated { .. } => "uniformly_accelerated",
            MotionClass::Other => "other",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Classification {
    pub class: MotionClass,
    pub tolerance: f64,
    /// sup of ‖v̇‖ over interior grid points.
    pub max_acceleration: f64,
    /// sup of ‖w‖ over interior grid points.
    pub max_abraham: f64,
}

/// Classifies motion from the interior points of `grid`.
pub fn classify_motion(w: &Worldline, grid: &[f64], step: f64, tol: f64) -> Result<Classification> {
    if grid.len() < 3 {
        return Err(Error::InsufficientSamples {
            needed: 3,
            got: grid.len(),
        });
    }
    let interior = &grid[1..grid.len() - 1];
    let mut max_acceleration = 0.0_f64;
    let mut max_abraham = 0.0_f64;
    let mut sum_a = 0.0;
    for &tau in interior {
        let state = w.kinematic_state(tau, step)?;
        max_acceleration = max_acceleration.max(state.acceleration.euclidean_norm());
        max_abraham = max_abraham.max(AbrahamVector::from_state(&state).residual_norm);
        sum_a += math::sqrt(state.acceleration.square().abs());
    }
    let class = if max_acceleration < tol {
        MotionClass::Inertial
    } else if max_abraham < tol {
        MotionClass::UniformlyAccelerated {
            a: sum_a / interior.len() as f64,
        }
    } else {
        MotionClass::Other
    };
    Ok(Classification {
        class,
        tolerance: tol,
        max_acceleration,
        max_abraham,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RigidityReport {
    pub ok: bool,
    /// `a δ` in units with c = 1.
    pub ratio: f64,
}

pub fn rigidity_check(a: f64, delta: f64) -> Result<RigidityReport> {
    rigidity_check_with(a, delta, RIGIDITY_THRESHOLD)
}

pub fn rigidity_check_with(a: f64, delta: f64, threshold: f64) -> Result<RigidityReport> {
    if !(a >= 0.0) || !(delta >= 0.0) {
        return Err(Error::InvalidInput("acceleration and size must be non-negative"));
    }
    let ratio = a * delta;
    Ok(RigidityReport {
        ok: ratio < threshold,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::exponential_factor;
    use crate::vector::Event;
    use crate::worldline::{hyperbolic_worldline, DEFAULT_STEP};

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
    }

    fn wobbly() -> Worldline {
        Worldline::from_rapidity(|t| t + 0.1 * math::sin(t), &grid(-1.0, 1.0, 201), Event::ZERO).unwrap()
    }

    fn hyperbola(a: f64) -> Worldline {
        hyperbolic_worldline(FourVector::basis(0), FourVector::basis(1) * a, a, Event::ZERO).unwrap()
    }

    #[test]
    fn vanishes_on_uniform_acceleration() {
        for a in [0.0, 0.5, 1.0, 3.0] {
            for tau in [-1.0, 0.0, 0.7] {
                let w = abraham_vector(&hyperbola(a), tau, DEFAULT_STEP).unwrap();
                assert!(w.residual_norm < 1e-12 * (1.0 + a * a * a));
            }
        }
        let rest = abraham_vector(&Worldline::rest(Event::ZERO), 2.0, DEFAULT_STEP).unwrap();
        assert_eq!(rest.residual_norm, 0.0);
    }

    #[test]
    fn wobbly_rapidity_matches_closed_form() {
        // w = s''(τ) (sh s, ch s, 0, 0) for velocity (ch s, sh s, 0, 0)
        for tau in [-0.5, 0.0, 0.3, 0.6] {
            let s = tau + 0.1 * math::sin(tau);
            let s2 = -0.1 * math::sin(tau);
            let expected = FourVector::new(math::sinh(s), math::cosh(s), 0.0, 0.0) * s2;
            let w = abraham_vector(&wobbly(), tau, DEFAULT_STEP).unwrap();
            assert!((w.w - expected).max_abs() < 1e-6, "{tau}: {:?}", w.w);
        }
        assert!(abraham_vector(&wobbly(), 0.5, DEFAULT_STEP).unwrap().residual_norm > 1e-2);
    }

    #[test]
    fn rest_maps_to_uniform_acceleration() {
        let f = AcceleratedFrameForm::new(FourVector::new(0.0, 0.5, 0.0, 0.0), 1.0).unwrap();
        let g = grid(-1.0, 1.0, 201);
        let img = pushforward_worldline(&f, &Worldline::rest(Event::ZERO), &g).unwrap();
        let Worldline::Sampled(s) = &img else { panic!() };
        let taus = s.taus().to_vec();
        for &t in &taus[1..taus.len() - 1] {
            let state = img.kinematic_state(t, DEFAULT_STEP).unwrap();
            assert!(AbrahamVector::from_state(&state).residual_norm < 1e-6);
        }
        let c = classify_motion(&img, &taus, DEFAULT_STEP, CLASSIFY_TOLERANCE).unwrap();
        assert!(matches!(c.class, MotionClass::UniformlyAccelerated { .. }));
    }

    #[test]
    fn identity_pushforward_is_a_resampling() {
        let w = hyperbola(1.0);
        let g = grid(-1.0, 1.0, 101);
        let img = pushforward_worldline(&AcceleratedFrameForm::identity(), &w, &g).unwrap();
        let Worldline::Sampled(s) = &img else { panic!() };
        for (k, &t) in g.iter().enumerate() {
            assert!((s.taus()[k] - (t + 1.0)).abs() < 1e-12);
            assert!((s.events()[k] - w.position(t).unwrap()).max_abs() < 1e-15);
        }
    }

    #[test]
    fn singular_grid_point_is_named() {
        let f = AcceleratedFrameForm::new(FourVector::new(0.5, 0.0, 0.0, 0.0), 1.0).unwrap();
        let g = grid(0.0, 3.0, 31);
        let err = pushforward_worldline(&f, &Worldline::rest(Event::ZERO), &g).unwrap_err();
        assert!(matches!(err, Error::SingularGridPoint { index: 20, .. }), "{err:?}");
    }

    #[test]
    fn hill_laws_agree_for_flat_frames() {
        let f = AcceleratedFrameForm::new(FourVector::new(0.2, -0.1, 0.15, 0.05), 1.2).unwrap();
        let w = wobbly();
        for tau in [-0.5, 0.0, 0.4] {
            let state = w.kinematic_state(tau, DEFAULT_STEP).unwrap();
            let h = transform_abraham(&f, &state).unwrap();
            assert!(h.disagreement() < 1e-12);
        }
        let state = hyperbola(0.8).kinematic_state(0.3, DEFAULT_STEP).unwrap();
        let h = transform_abraham(&f, &state).unwrap();
        assert_eq!(h.reduced.max_abs(), 0.0);
        assert!(h.general.euclidean_norm() < 1e-8);
    }

    #[test]
    fn identity_law_is_trivial() {
        let state = wobbly().kinematic_state(0.2, DEFAULT_STEP).unwrap();
        let h = transform_abraham(&AcceleratedFrameForm::identity(), &state).unwrap();
        let w = AbrahamVector::from_state(&state).w;
        assert_eq!(h.general, w);
        assert_eq!(h.reduced, w);
    }

    #[test]
    fn hill_laws_differ_for_curved_factor() {
        let state = hyperbola(1.0).kinematic_state(0.2, DEFAULT_STEP).unwrap();
        let h = transform_abraham_with(&exponential_factor(), &Matrix4::identity(), &state, Derivatives::default()).unwrap();
        assert!(h.disagreement() > 1e-2);
    }

    #[test]
    fn reduced_law_matches_numerical_pushforward() {
        let f = AcceleratedFrameForm::new(FourVector::new(0.1, 0.2, -0.1, 0.0), 1.5).unwrap();
        let w = wobbly();
        let g = grid(-0.6, 0.6, 121);
        let img = pushforward_worldline(&f, &w, &g).unwrap();
        let Worldline::Sampled(s) = &img else { panic!() };
        for k in [30, 60, 90] {
            let state = w.kinematic_state(g[k], DEFAULT_STEP).unwrap();
            let predicted = transform_abraham(&f, &state).unwrap().reduced;
            let numeric = abraham_vector(&img, s.taus()[k], DEFAULT_STEP).unwrap().w;
            assert!((predicted - numeric).euclidean_norm() < 1e-5);
        }
    }

    #[test]
    fn classification() {
        let g = grid(-1.0, 1.0, 21);
        let rest = classify_motion(&Worldline::rest(Event::ZERO), &g, DEFAULT_STEP, CLASSIFY_TOLERANCE).unwrap();
        assert_eq!(rest.class, MotionClass::Inertial);
        assert!(rest.class.is_uniformly_accelerated());
        let hyp = classify_motion(&hyperbola(1.0), &g, DEFAULT_STEP, CLASSIFY_TOLERANCE).unwrap();
        let MotionClass::UniformlyAccelerated { a } = hyp.class else { panic!() };
        assert!((a - 1.0).abs() < CLASSIFY_TOLERANCE);
        let g = grid(-0.9, 0.9, 19);
        let other = classify_motion(&wobbly(), &g, DEFAULT_STEP, CLASSIFY_TOLERANCE).unwrap();
        assert_eq!(other.class, MotionClass::Other);
    }

    #[test]
    fn rigidity() {
        let r = rigidity_check(1.0, 1e-3).unwrap();
        assert!(r.ok && (r.ratio - 1e-3).abs() < 1e-18);
        let r = rigidity_check(10.0, 1.0).unwrap();
        assert!(!r.ok && r.ratio == 10.0);
        assert_eq!(rigidity_check(0.0, 5.0).unwrap(), RigidityReport { ok: true, ratio: 0.0 });
        assert!(rigidity_check(-1.0, 1.0).is_err());
    }
}
