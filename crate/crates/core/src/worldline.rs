//! Proper-time parametrised worldlines and their kinematic state.
//!
//! The hyperbolic family has closed-form derivatives. Sampled worldlines are
//! interpolated by a local degree-7 polynomial through the nearest knots and
//! then differentiated with central stencils of the requested step.
//!
//! Sign note: with η = diag(1, −1, −1, −1) the proper acceleration of a
//! hyperbolic worldline is spacelike, so `v̇·v̇ = −a²`. Some texts write
//! `v̇² = a²`, meaning the Euclidean-style magnitude; here all squares use η.

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::{window_start, LocalPolynomial, WINDOW};
use crate::math;
use crate::quadrature::gauss_legendre;
use crate::stencil;
use crate::vector::{Event, FourVector};

/// Default proper-time step for finite differences.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Tolerance on the initial-value constraints of a hyperbolic worldline.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-9;

/// Position, velocity and its first two derivatives at proper time `tau`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct KinematicState {
    pub tau: f64,
    pub position: Event,
    pub velocity: FourVector,
    pub acceleration: FourVector,
    pub jerk: FourVector,
    /// `max(|v·v − 1|, |v·v̇|)`.
    pub residual: f64,
}

impl KinematicState {
    pub fn new(
        tau: f64,
        position: Event,
        velocity: FourVector,
        acceleration: FourVector,
        jerk: FourVector,
    ) -> Self {
        let residual = (velocity.square() - 1.0)
            .abs()
            .max(velocity.dot(&acceleration).abs());
        KinematicState {
            tau,
            position,
            velocity,
            acceleration,
            jerk,
            residual,
        }
    }
}

/// Uniformly accelerated worldline `v(τ) = v0 ch(aτ) + (v̇0/a) sh(aτ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct HyperbolicWorldline {
    v0: FourVector,
    vdot0: FourVector,
    a: f64,
    x0: Event,
}

impl HyperbolicWorldline {
    pub fn initial_velocity(&self) -> FourVector {
        self.v0
    }

    pub fn initial_acceleration(&self) -> FourVector {
        self.vdot0
    }

    pub fn acceleration(&self) -> f64 {
        self.a
    }

    pub fn origin(&self) -> Event {
        self.x0
    }

    /// `(sh(aτ)/a, (ch(aτ) − 1)/a²)` with the `a → 0` limits.
    fn profiles(&self, tau: f64) -> (f64, f64) {
        let a = self.a;
        if a == 0.0 {
            return (tau, 0.5 * tau * tau);
        }
        let half = math::sinh(0.5 * a * tau);
        (math::sinh(a * tau) / a, 2.0 * half * half / (a * a))
    }

    pub fn position(&self, tau: f64) -> Event {
        let (sh, ch1) = self.profiles(tau);
        self.x0 + self.v0 * sh + self.vdot0 * ch1
    }

    pub fn velocity(&self, tau: f64) -> FourVector {
        let (sh, _) = self.profiles(tau);
        self.v0 * math::cosh(self.a * tau) + self.vdot0 * sh
    }

    pub fn state(&self, tau: f64) -> KinematicState {
        let a = self.a;
        let (sh, _) = self.profiles(tau);
        let ch = math::cosh(a * tau);
        let velocity = self.v0 * ch + self.vdot0 * sh;
        let acceleration = self.v0 * (a * a * sh) + self.vdot0 * ch;
        KinematicState::new(
            tau,
            self.position(tau),
            velocity,
            acceleration,
            velocity * (a * a),
        )
    }
}

/// Worldline known only through ordered `(τ, event)` samples.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SampledWorldline {
    taus: Vec<f64>,
    events: Vec<Event>,
}

impl SampledWorldline {
    pub fn new(taus: Vec<f64>, events: Vec<Event>) -> Result<Self> {
        if taus.len() != events.len() {
            return Err(Error::InvalidInput("tau and event sequences differ in length"));
        }
        if taus.len() < WINDOW {
            return Err(Error::InsufficientSamples {
                needed: WINDOW,
                got: taus.len(),
            });
        }
        if taus.iter().any(|t| !t.is_finite()) || events.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidInput("non-finite sample"));
        }
        if let Some(i) = taus.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NotMonotone { index: i + 1 });
        }
        Ok(SampledWorldline { taus, events })
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.taus[0], self.taus[self.taus.len() - 1])
    }

    fn check_range(&self, tau: f64) -> Result<()> {
        let (min, max) = self.range();
        if tau < min || tau > max || !tau.is_finite() {
            return Err(Error::OutOfRange {
                value: tau,
                min,
                max,
            });
        }
        Ok(())
    }

    /// Per-component local polynomials around `tau`, offset by the window's
    /// centre knot so the differenced values stay small.
    fn local(&self, tau: f64) -> (usize, Event, [LocalPolynomial; 4]) {
        let start = window_start(&self.taus, tau);
        let ts = &self.taus[start..start + WINDOW];
        let reference = self.events[start + WINDOW / 2];
        let center = ts[WINDOW / 2];
        let polys = core::array::from_fn(|mu| {
            let ys: [f64; WINDOW] =
                core::array::from_fn(|i| self.events[start + i][mu] - reference[mu]);
            LocalPolynomial::fit(ts, &ys, center)
        });
        (start, reference, polys)
    }

    pub fn position(&self, tau: f64) -> Result<Event> {
        self.check_range(tau)?;
        let (_, reference, polys) = self.local(tau);
        Ok(reference + FourVector(core::array::from_fn(|mu| polys[mu].eval(tau))))
    }

    /// Derivative of the interpolant (not finite-differenced).
    pub fn velocity(&self, tau: f64) -> Result<FourVector> {
        self.check_range(tau)?;
        let (_, _, polys) = self.local(tau);
        Ok(FourVector(core::array::from_fn(|mu| polys[mu].derivative(tau, 1))))
    }

    pub fn state(&self, tau: f64, step: f64) -> Result<KinematicState> {
        if !(step > 0.0) {
            return Err(Error::InvalidInput("finite-difference step must be positive"));
        }
        let (min, max) = self.range();
        let reach = 3.0 * step;
        if tau - reach < min || tau + reach > max || !tau.is_finite() {
            return Err(Error::OutOfRange {
                value: tau,
                min: min + reach,
                max: max - reach,
            });
        }
        let (start, reference, polys) = self.local(tau);
        let lo = self.taus[start];
        let hi = self.taus[start + WINDOW - 1];
        if tau - reach < lo || tau + reach > hi {
            let limit = (tau - lo).min(hi - tau) / 3.0;
            return Err(Error::StepTooLarge { step, limit });
        }
        let mut v = FourVector::ZERO;
        let mut vdot = FourVector::ZERO;
        let mut vddot = FourVector::ZERO;
        for mu in 0..4 {
            let s7: [f64; 7] =
                core::array::from_fn(|k| polys[mu].eval(tau + (k as f64 - 3.0) * step));
            let s5: [f64; 5] = core::array::from_fn(|k| s7[k + 1]);
            v[mu] = stencil::first(&s5, step);
            vdot[mu] = stencil::second(&s5, step);
            vddot[mu] = stencil::third(&s7, step);
        }
        let position = reference + FourVector(core::array::from_fn(|mu| polys[mu].eval(tau)));
        Ok(KinematicState::new(tau, position, v, vdot, vddot))
    }
}

/// A timelike worldline parametrised by proper time.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Worldline {
    Hyperbolic(HyperbolicWorldline),
    Sampled(SampledWorldline),
}

/// Builds a uniformly accelerated worldline through `x0` at τ = 0.
///
/// Requires `v0·v0 = 1`, `v0·v̇0 = 0` and `v̇0·v̇0 = −a²` within
/// [`CONSTRAINT_TOLERANCE`]. With `a = 0` this is uniform motion.
pub fn hyperbolic_worldline(
    v0: FourVector,
    vdot0: FourVector,
    a: f64,
    x0: Event,
) -> Result<Worldline> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::InvalidInput("acceleration must be finite and non-negative"));
    }
    if !v0.is_finite() || !vdot0.is_finite() || !x0.is_finite() {
        return Err(Error::InvalidInput("non-finite initial data"));
    }
    let norm = v0.square() - 1.0;
    if norm.abs() > CONSTRAINT_TOLERANCE {
        return Err(Error::Constraint {
            name: "v0·v0 = 1",
            residual: norm,
        });
    }
    if v0.t() <= 0.0 {
        return Err(Error::Constraint {
            name: "v0 future-directed",
            residual: v0.t(),
        });
    }
    let orth = v0.dot(&vdot0);
    if orth.abs() > CONSTRAINT_TOLERANCE * a.max(1.0) {
        return Err(Error::Constraint {
            name: "v0·vdot0 = 0",
            residual: orth,
        });
    }
    let mag = vdot0.square() + a * a;
    if mag.abs() > CONSTRAINT_TOLERANCE * (a * a).max(1.0) {
        return Err(Error::Constraint {
            name: "vdot0·vdot0 = -a²",
            residual: mag,
        });
    }
    Ok(Worldline::Hyperbolic(HyperbolicWorldline { v0, vdot0, a, x0 }))
}

impl Worldline {
    /// At rest at `x0`.
    pub fn rest(x0: Event) -> Self {
        Worldline::Hyperbolic(HyperbolicWorldline {
            v0: FourVector::basis(0),
            vdot0: FourVector::ZERO,
            a: 0.0,
            x0,
        })
    }

    pub fn sampled(taus: Vec<f64>, events: Vec<Event>) -> Result<Self> {
        SampledWorldline::new(taus, events).map(Worldline::Sampled)
    }

    /// Motion along x1 with rapidity profile `s(τ)`, i.e. velocity
    /// `(ch s, sh s, 0, 0)`, sampled on `grid` and anchored at `x0` on
    /// `grid[0]`.
    pub fn from_rapidity<F: Fn(f64) -> f64>(rapidity: F, grid: &[f64], x0: Event) -> Result<Self> {
        let mut events = Vec::with_capacity(grid.len());
        let mut x = x0;
        for (k, &tau) in grid.iter().enumerate() {
            if k > 0 {
                x += gauss_legendre(grid[k - 1], tau, |t| {
                    let s = rapidity(t);
                    Ok(FourVector::new(math::cosh(s), math::sinh(s), 0.0, 0.0))
                })?;
            }
            events.push(x);
        }
        Worldline::sampled(grid.to_vec(), events)
    }

    /// Samples `self` on `grid` (no reparametrisation).
    pub fn resample(&self, grid: &[f64]) -> Result<Self> {
        let events = grid
            .iter()
            .map(|&t| self.position(t))
            .collect::<Result<Vec<_>>>()?;
        Worldline::sampled(grid.to_vec(), events)
    }

    /// Admissible proper-time interval, `None` when unbounded.
    pub fn range(&self) -> Option<(f64, f64)> {
        match self {
            Worldline::Hyperbolic(_) => None,
            Worldline::Sampled(s) => Some(s.range()),
        }
    }

    pub fn position(&self, tau: f64) -> Result<Event> {
        match self {
            Worldline::Hyperbolic(h) => Ok(h.position(tau)),
            Worldline::Sampled(s) => s.position(tau),
        }
    }

    pub fn velocity(&self, tau: f64) -> Result<FourVector> {
        match self {
            Worldline::Hyperbolic(h) => Ok(h.velocity(tau)),
            Worldline::Sampled(s) => s.velocity(tau),
        }
    }

    /// Kinematic state at `tau`. The analytic family ignores `step` beyond
    /// validating it; sampled worldlines use it as the stencil spacing.
    pub fn kinematic_state(&self, tau: f64, step: f64) -> Result<KinematicState> {
        if !(step > 0.0) {
            return Err(Error::InvalidInput("finite-difference step must be positive"));
        }
        match self {
            Worldline::Hyperbolic(h) => Ok(h.state(tau)),
            Worldline::Sampled(s) => s.state(tau, step),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_hyperbola() -> Worldline {
        hyperbolic_worldline(
            FourVector::basis(0),
            FourVector::basis(1),
            1.0,
            Event::ZERO,
        )
        .unwrap()
    }

    #[test]
    fn unit_hyperbola_position() {
        let w = unit_hyperbola();
        for tau in [-1.3, 0.0, 0.4, 2.0] {
            let x = w.position(tau).unwrap();
            let expected =
                Event::new(math::sinh(tau), math::cosh(tau) - 1.0, 0.0, 0.0);
            assert!((x - expected).max_abs() < 1e-14);
        }
    }

    #[test]
    fn rest_worldline() {
        let w = hyperbolic_worldline(FourVector::basis(0), FourVector::ZERO, 0.0, Event::ZERO)
            .unwrap();
        let s = w.kinematic_state(3.5, DEFAULT_STEP).unwrap();
        assert_eq!(s.position, Event::new(3.5, 0.0, 0.0, 0.0));
        assert_eq!(s.velocity, FourVector::basis(0));
        assert_eq!(s.acceleration, FourVector::ZERO);
        assert_eq!(s.jerk, FourVector::ZERO);
    }

    #[test]
    fn rejects_inconsistent_acceleration() {
        let err = hyperbolic_worldline(FourVector::basis(0), FourVector::basis(1), 2.0, Event::ZERO)
            .unwrap_err();
        assert!(matches!(err, Error::Constraint { name, .. } if name.contains("-a²")));
        let err = hyperbolic_worldline(FourVector::new(1.0, 0.1, 0.0, 0.0), FourVector::ZERO, 0.0, Event::ZERO)
            .unwrap_err();
        assert!(matches!(err, Error::Constraint { name: "v0·v0 = 1", .. }));
    }

    #[test]
    fn closed_form_state_at_origin() {
        let s = unit_hyperbola().kinematic_state(0.0, DEFAULT_STEP).unwrap();
        assert_eq!(s.velocity, FourVector::basis(0));
        assert_eq!(s.acceleration, FourVector::basis(1));
        assert_eq!(s.jerk, FourVector::basis(0));
        assert_eq!(s.residual, 0.0);
    }

    #[test]
    fn hyperbolic_invariants_hold_for_large_acceleration() {
        let a = 3.0;
        let w = hyperbolic_worldline(
            FourVector::new(math::cosh(0.4), math::sinh(0.4), 0.0, 0.0),
            FourVector::new(a * math::sinh(0.4), a * math::cosh(0.4), 0.0, 0.0),
            a,
            Event::new(0.1, 0.2, 0.3, 0.4),
        )
        .unwrap();
        for tau in [-0.7, 0.0, 0.9] {
            let s = w.kinematic_state(tau, DEFAULT_STEP).unwrap();
            assert!(s.residual < 1e-12 * math::cosh(2.0 * a * tau));
            let acc2 = s.acceleration.square();
            assert!((acc2 + a * a).abs() < 1e-10 * math::cosh(2.0 * a * tau));
        }
    }

    #[test]
    fn sampled_copy_matches_analytic_state() {
        let w = unit_hyperbola();
        let grid: Vec<f64> = (0..=200).map(|i| -1.0 + 0.01 * i as f64).collect();
        let sampled = w.resample(&grid).unwrap();
        for tau in [-0.8, -0.333, 0.0, 0.5, 0.91] {
            let exact = w.kinematic_state(tau, DEFAULT_STEP).unwrap();
            let approx = sampled.kinematic_state(tau, DEFAULT_STEP).unwrap();
            assert!((exact.position - approx.position).max_abs() < 1e-10);
            assert!((exact.velocity - approx.velocity).max_abs() < 1e-6);
            assert!((exact.acceleration - approx.acceleration).max_abs() < 1e-6);
            assert!((exact.jerk - approx.jerk).max_abs() < 1e-6, "{:?}", exact.jerk - approx.jerk);
        }
    }

    #[test]
    fn sampled_errors() {
        let w = unit_hyperbola();
        let grid: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
        let sampled = w.resample(&grid).unwrap();
        assert!(matches!(
            sampled.kinematic_state(-0.5, DEFAULT_STEP),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            sampled.kinematic_state(1.0, 0.2),
            Err(Error::StepTooLarge { .. })
        ));
        assert!(matches!(
            Worldline::sampled(grid[..5].to_vec(), alloc::vec![Event::ZERO; 5]),
            Err(Error::InsufficientSamples { .. })
        ));
        let mut bad = grid.clone();
        bad[4] = bad[3];
        assert!(matches!(
            Worldline::sampled(bad, alloc::vec![Event::ZERO; 21]),
            Err(Error::NotMonotone { index: 4 })
        ));
    }
}
