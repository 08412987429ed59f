//! Two-dimensional spacetime in light-cone variables `u± = t ± x`.
//!
//! Any pair of increasing maps `u± ↦ f±(u±)` is conformal in 2D. The maps
//! that also preserve the vacuum are the fractional-linear ones,
//! `f(u) = (au + b)/(cu + d)` with `ad − bc = 1`. A map is detected as
//! fractional-linear through its Schwarzian derivative, which vanishes
//! exactly on that subgroup.

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::{window_start, LocalPolynomial, WINDOW};
use crate::math;

/// Default Schwarzian threshold separating homographic from other maps.
pub const SCHWARZIAN_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct LightConeEvent {
    pub u_plus: f64,
    pub u_minus: f64,
}

impl LightConeEvent {
    pub fn from_cartesian(t: f64, x: f64) -> Self {
        LightConeEvent {
            u_plus: t + x,
            u_minus: t - x,
        }
    }

    /// `(t, x)`.
    pub fn to_cartesian(&self) -> (f64, f64) {
        (
            0.5 * (self.u_plus + self.u_minus),
            0.5 * (self.u_plus - self.u_minus),
        )
    }
}

pub fn to_lightcone(t: f64, x: f64) -> LightConeEvent {
    LightConeEvent::from_cartesian(t, x)
}

/// `u ↦ (au + b)/(cu + d)`, normalised to `ad − bc = 1` and `a + d ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawHomography"))]
pub struct Homography2D {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

#[cfg(feature = "serde")]
#[derive(Deserialize)]
struct RawHomography {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

#[cfg(feature = "serde")]
impl TryFrom<RawHomography> for Homography2D {
    type Error = Error;
    fn try_from(r: RawHomography) -> Result<Self> {
        Homography2D::new(r.a, r.b, r.c, r.d)
    }
}

impl Homography2D {
    pub const IDENTITY: Homography2D = Homography2D {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Rescales by `1/√(ad − bc)`; a non-positive determinant is rejected
    /// since the map would not be increasing.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::InvalidInput("homography needs a positive determinant"));
        }
        let s = 1.0 / math::sqrt(det);
        let s = if a + d < 0.0 { -s } else { s };
        Ok(Homography2D {
            a: a * s,
            b: b * s,
            c: c * s,
            d: d * s,
        })
    }

    /// `u ↦ s u` for `s > 0`.
    pub fn dilation(s: f64) -> Result<Self> {
        Homography2D::new(s, 0.0, 0.0, 1.0)
    }

    pub fn coefficients(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// `cu + d`, or a pole error.
    fn denominator(&self, u: f64) -> Result<f64> {
        let q = self.c * u + self.d;
        if q.abs() <= 1e-15 * ((self.c * u).abs() + self.d.abs()) || q == 0.0 {
            return Err(Error::Pole { at: u });
        }
        Ok(q)
    }

    pub fn apply(&self, u: f64) -> Result<f64> {
        let q = self.denominator(u)?;
        Ok((self.a * u + self.b) / q)
    }

    /// `order`-th derivative at `u`, for `order` in `0..=3`.
    pub fn derivative(&self, u: f64, order: usize) -> Result<f64> {
        let q = self.denominator(u)?;
        let c = self.c;
        Ok(match order {
            0 => (self.a * u + self.b) / q,
            1 => 1.0 / (q * q),
            2 => -2.0 * c / (q * q * q),
            3 => 6.0 * c * c / (q * q * q * q),
            _ => return Err(Error::InvalidInput("derivative order above 3")),
        })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Homography2D) -> Homography2D {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let (e, f, g, h) = (inner.a, inner.b, inner.c, inner.d);
        Homography2D::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
            .expect("product of unit-determinant matrices")
    }

    pub fn invert(&self) -> Homography2D {
        Homography2D::new(self.d, -self.b, -self.c, self.a).expect("adjugate of a unit-determinant matrix")
    }

    /// Largest coefficient difference, after normalisation.
    pub fn distance(&self, other: &Homography2D) -> f64 {
        let (p, q) = (self.coefficients(), other.coefficients());
        (0..4).map(|i| (p[i] - q[i]).abs()).fold(0.0, f64::max)
    }
}

/// `u ↦ −β/u` for `β > 0`. A 2D inversion acts as `ū± = −β/u∓`, i.e. this
/// map combined with the exchange of `u₊` and `u₋`.
pub fn inversion_2d(beta: f64) -> Result<Homography2D> {
    Homography2D::new(0.0, -beta, 1.0, 0.0)
}

/// A strictly increasing map known through samples `(u_k, f_k)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawRule"))]
pub struct SampledRule {
    u: Vec<f64>,
    f: Vec<f64>,
}

#[cfg(feature = "serde")]
#[derive(Deserialize)]
struct RawRule {
    u: Vec<f64>,
    f: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawRule> for SampledRule {
    type Error = Error;
    fn try_from(r: RawRule) -> Result<Self> {
        SampledRule::new(r.u, r.f)
    }
}

impl SampledRule {
    pub fn new(u: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if u.len() != f.len() {
            return Err(Error::InvalidInput("u and f(u) differ in length"));
        }
        if u.len() < WINDOW {
            return Err(Error::InsufficientSamples {
                needed: WINDOW,
                got: u.len(),
            });
        }
        if u.iter().chain(f.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite sample"));
        }
        for k in 1..u.len() {
            if !(u[k] > u[k - 1]) || !(f[k] > f[k - 1]) {
                return Err(Error::NotMonotone { index: k });
            }
        }
        Ok(SampledRule { u, f })
    }

    /// Samples `g` on `grid`.
    pub fn from_fn<G: Fn(f64) -> f64>(g: G, grid: &[f64]) -> Result<Self> {
        SampledRule::new(grid.to_vec(), grid.iter().map(|&u| g(u)).collect())
    }

    pub fn knots(&self) -> &[f64] {
        &self.u
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.u[0], self.u[self.u.len() - 1])
    }

    /// Swaps the roles of `u` and `f(u)`.
    pub fn inverse(&self) -> SampledRule {
        SampledRule {
            u: self.f.clone(),
            f: self.u.clone(),
        }
    }

    pub fn derivative(&self, u: f64, order: usize) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(u >= lo && u <= hi) {
            return Err(Error::OutOfRange {
                value: u,
                min: lo,
                max: hi,
            });
        }
        let start = window_start(&self.u, u);
        let ts = &self.u[start..start + WINDOW];
        let reference = self.f[start + WINDOW / 2];
        let ys: [f64; WINDOW] = core::array::from_fn(|i| self.f[start + i] - reference);
        let poly = LocalPolynomial::fit(ts, &ys, ts[WINDOW / 2]);
        Ok(match order {
            0 => reference + poly.eval(u),
            1..=3 => poly.derivative(u, order),
            _ => return Err(Error::InvalidInput("derivative order above 3")),
        })
    }

    pub fn apply(&self, u: f64) -> Result<f64> {
        self.derivative(u, 0)
    }
}

/// One light-cone component of a 2D conformal map.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum RayComponent {
    Homography(Homography2D),
    Sampled(SampledRule),
}

impl RayComponent {
    pub fn identity() -> Self {
        RayComponent::Homography(Homography2D::IDENTITY)
    }

    pub fn apply(&self, u: f64) -> Result<f64> {
        self.derivative(u, 0)
    }

    pub fn derivative(&self, u: f64, order: usize) -> Result<f64> {
        match self {
            RayComponent::Homography(h) => h.derivative(u, order),
            RayComponent::Sampled(s) => s.derivative(u, order),
        }
    }

    pub fn invert(&self) -> RayComponent {
        match self {
            RayComponent::Homography(h) => RayComponent::Homography(h.invert()),
            RayComponent::Sampled(s) => RayComponent::Sampled(s.inverse()),
        }
    }

    /// `self ∘ inner`. Homographies compose in closed form; otherwise the
    /// result is sampled on the knots of the sampled factor.
    pub fn compose(&self, inner: &RayComponent) -> Result<RayComponent> {
        match (self, inner) {
            (RayComponent::Homography(a), RayComponent::Homography(b)) => {
                Ok(RayComponent::Homography(a.compose(b)))
            }
            (outer, RayComponent::Sampled(s)) => {
                let f = s.f.iter().map(|&v| outer.apply(v)).collect::<Result<Vec<_>>>()?;
                SampledRule::new(s.u.clone(), f).map(RayComponent::Sampled)
            }
            (RayComponent::Sampled(s), RayComponent::Homography(h)) => {
                let back = h.invert();
                let u = s.u.iter().map(|&v| back.apply(v)).collect::<Result<Vec<_>>>()?;
                SampledRule::new(u, s.f.clone()).map(RayComponent::Sampled)
            }
        }
    }
}

/// `(u₊, u₋) ↦ (f₊(u₊), f₋(u₋))`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RayMap2D {
    pub f_plus: RayComponent,
    pub f_minus: RayComponent,
}

impl RayMap2D {
    pub fn identity() -> Self {
        RayMap2D {
            f_plus: RayComponent::identity(),
            f_minus: RayComponent::identity(),
        }
    }

    pub fn apply(&self, e: &LightConeEvent) -> Result<LightConeEvent> {
        Ok(LightConeEvent {
            u_plus: self.f_plus.apply(e.u_plus)?,
            u_minus: self.f_minus.apply(e.u_minus)?,
        })
    }
}

/// The 2D special conformal map with constants `α = (α⁰, α¹)` and `β > 0`:
/// `f₊(u) = βu / (1 − α₋u)`, `f₋(u) = βu / (1 − α₊u)` with `α± = α⁰ ± α¹`.
pub fn accelerated_frame_maps_2d(alpha: [f64; 2], beta: f64) -> Result<RayMap2D> {
    if !(beta > 0.0) {
        return Err(Error::InvalidInput("beta must be positive in two dimensions"));
    }
    let (ap, am) = (alpha[0] + alpha[1], alpha[0] - alpha[1]);
    Ok(RayMap2D {
        f_plus: RayComponent::Homography(Homography2D::new(beta, 0.0, -am, 1.0)?),
        f_minus: RayComponent::Homography(Homography2D::new(beta, 0.0, -ap, 1.0)?),
    })
}

/// Input-to-output ray map of a mirror at rest at `x = 0` in the frame
/// whose light-cone coordinates `frame` maps to the lab.
///
/// An incoming ray `u₊` leaves as `u₋ = g₊(u₊)` with `g₊ = f₋ ∘ f₊⁻¹`;
/// symmetrically `g₋ = f₊ ∘ f₋⁻¹` sends `u₋` to `u₊`.
pub fn mirror_scattering_map(frame: &RayMap2D) -> Result<RayMap2D> {
    Ok(RayMap2D {
        f_plus: frame.f_minus.compose(&frame.f_plus.invert())?,
        f_minus: frame.f_plus.compose(&frame.f_minus.invert())?,
    })
}

/// `f‴/f′ − (3/2)(f″/f′)²`.
pub fn schwarzian(f: &RayComponent, u: f64) -> Result<f64> {
    let d1 = f.derivative(u, 1)?;
    if !(d1 > 0.0) {
        return Err(Error::InvalidInput("map is not increasing"));
    }
    let d2 = f.derivative(u, 2)?;
    let d3 = f.derivative(u, 3)?;
    let r = d2 / d1;
    Ok(d3 / d1 - 1.5 * r * r)
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct HomographyReport {
    pub max_schwarzian: f64,
    pub homographic: bool,
}

pub fn is_homographic(f: &RayComponent, grid: &[f64]) -> Result<HomographyReport> {
    is_homographic_with(f, grid, SCHWARZIAN_THRESHOLD)
}

pub fn is_homographic_with(f: &RayComponent, grid: &[f64], threshold: f64) -> Result<HomographyReport> {
    let mut max_schwarzian = 0.0_f64;
    for (k, &u) in grid.iter().enumerate() {
        if !(f.derivative(u, 1)? > 0.0) {
            return Err(Error::NotMonotone { index: k });
        }
        max_schwarzian = max_schwarzian.max(schwarzian(f, u)?.abs());
    }
    Ok(HomographyReport {
        max_schwarzian,
        homographic: max_schwarzian < threshold,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Verdict {
    Invariant,
    Modified,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct MirrorVerdict {
    pub verdict: Verdict,
    /// Largest |Schwarzian| over both components.
    pub evidence: f64,
    pub composite: RayMap2D,
}

/// Invariant iff both components are homographic on their grids.
pub fn vacuum_verdict(m: &RayMap2D, grid_plus: &[f64], grid_minus: &[f64]) -> Result<MirrorVerdict> {
    vacuum_verdict_with(m, grid_plus, grid_minus, SCHWARZIAN_THRESHOLD)
}

pub fn vacuum_verdict_with(
    m: &RayMap2D,
    grid_plus: &[f64],
    grid_minus: &[f64],
    threshold: f64,
) -> Result<MirrorVerdict> {
    let p = is_homographic_with(&m.f_plus, grid_plus, threshold)?;
    let q = is_homographic_with(&m.f_minus, grid_minus, threshold)?;
    let evidence = p.max_schwarzian.max(q.max_schwarzian);
    Ok(MirrorVerdict {
        verdict: if evidence < threshold {
            Verdict::Invariant
        } else {
            Verdict::Modified
        },
        evidence,
        composite: m.clone(),
    })
}

/// `((a − c)(b − d)) / ((a − d)(b − c))`.
pub fn cross_ratio(a: f64, b: f64, c: f64, d: f64) -> f64 {
    ((a - c) * (b - d)) / ((a - d) * (b - c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
    }

    fn wobble() -> RayComponent {
        RayComponent::Sampled(SampledRule::from_fn(|u| u + 0.1 * math::sin(u), &grid(-2.0, 2.0, 801)).unwrap())
    }

    #[test]
    fn lightcone_coordinates() {
        assert_eq!(to_lightcone(1.0, 0.0), LightConeEvent { u_plus: 1.0, u_minus: 1.0 });
        assert_eq!(to_lightcone(0.0, 1.0), LightConeEvent { u_plus: 1.0, u_minus: -1.0 });
        let e = to_lightcone(0.37, -1.21);
        let (t, x) = e.to_cartesian();
        assert!((t - 0.37).abs() < 1e-16 && (x + 1.21).abs() < 1e-16);
    }

    #[test]
    fn homography_group() {
        let h1 = Homography2D::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let h2 = Homography2D::new(0.0, 1.0, -1.0, 0.0).unwrap();
        let h = h2.compose(&h1);
        // [[0, 1], [−1, −1]] up to the overall sign.
        assert_eq!(h.coefficients(), [0.0, -1.0, 1.0, 1.0]);
        assert!((h.determinant() - 1.0).abs() < 1e-12);
        for u in grid(-3.0, 3.0, 1000) {
            let Ok(direct) = h1.apply(u).and_then(|v| h2.apply(v)) else { continue };
            assert!((h.apply(u).unwrap() - direct).abs() < 1e-10 * direct.abs().max(1.0));
            let back = h.invert().apply(h.apply(u).unwrap()).unwrap();
            assert!((back - u).abs() < 1e-10 * u.abs().max(1.0));
        }
        assert_eq!(Homography2D::IDENTITY.apply(0.3).unwrap(), 0.3);
        assert!(matches!(h2.apply(0.0), Err(Error::Pole { .. })));
        assert!(Homography2D::new(1.0, 0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn homographies_have_zero_schwarzian() {
        let h = RayComponent::Homography(Homography2D::new(2.0, 0.3, -0.4, 0.7).unwrap());
        let r = is_homographic(&h, &grid(-1.0, 1.0, 1000)).unwrap();
        assert!(r.max_schwarzian < 1e-8 && r.homographic);
    }

    #[test]
    fn wobble_is_not_homographic() {
        let r = is_homographic(&wobble(), &grid(-1.0, 1.0, 1000)).unwrap();
        assert!(r.max_schwarzian > 0.01 && !r.homographic);
        let s0 = schwarzian(&wobble(), 0.0).unwrap();
        assert!((s0 + 0.1 / 1.1).abs() < 1e-6);
    }

    #[test]
    fn exponential_has_constant_schwarzian() {
        let e = RayComponent::Sampled(SampledRule::from_fn(math::exp, &grid(-1.5, 1.5, 601)).unwrap());
        for u in grid(-1.0, 1.0, 21) {
            assert!((schwarzian(&e, u).unwrap() + 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn accelerated_frames_are_homographic() {
        let m = accelerated_frame_maps_2d([0.0, 0.0], 2.0).unwrap();
        let RayComponent::Homography(h) = m.f_plus else { panic!() };
        let r2 = math::sqrt(2.0);
        assert!(h.distance(&Homography2D::new(r2, 0.0, 0.0, 1.0 / r2).unwrap()) < 1e-15);
        let m = accelerated_frame_maps_2d([0.2, 0.3], 1.5).unwrap();
        let g = grid(-1.0, 1.0, 500);
        assert!(is_homographic(&m.f_plus, &g).unwrap().homographic);
        assert!(is_homographic(&m.f_minus, &g).unwrap().homographic);
        assert!(accelerated_frame_maps_2d([0.1, 0.0], -1.0).is_err());
    }

    #[test]
    fn light_cone_form_matches_four_dimensional_map() {
        use crate::conformal::{AcceleratedFrameForm, ConformalTransform};
        use crate::vector::{Event, FourVector};
        let (a0, a1, beta) = (0.2, 0.3, 1.5);
        let f = AcceleratedFrameForm::new(FourVector::new(a0, a1, 0.0, 0.0), beta).unwrap();
        let m = accelerated_frame_maps_2d([a0, a1], beta).unwrap();
        for (t, x) in [(0.1, 0.4), (-0.5, 0.2), (0.3, -0.7)] {
            let img = f.apply(&Event::new(t, x, 0.0, 0.0)).unwrap();
            let lc = m.apply(&to_lightcone(t, x)).unwrap();
            let expected = to_lightcone(img.t(), img[1]);
            assert!((lc.u_plus - expected.u_plus).abs() < 1e-14);
            assert!((lc.u_minus - expected.u_minus).abs() < 1e-14);
        }
    }

    #[test]
    fn two_dimensional_inversion() {
        use crate::conformal::{ConformalTransform, Primitive};
        use crate::vector::Event;
        let beta = 0.8;
        let h = inversion_2d(beta).unwrap();
        let inv = Primitive::inversion(beta).unwrap();
        let (t, x) = (0.9, 0.3);
        let img = inv.apply(&Event::new(t, x, 0.0, 0.0)).unwrap();
        let e = to_lightcone(t, x);
        let out = to_lightcone(img.t(), img[1]);
        assert!((out.u_plus - h.apply(e.u_minus).unwrap()).abs() < 1e-14);
        assert!((out.u_minus - h.apply(e.u_plus).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn mirror_composites() {
        let g = grid(-1.0, 1.0, 400);
        let still = mirror_scattering_map(&RayMap2D::identity()).unwrap();
        assert_eq!(still, RayMap2D::identity());

        let accel = mirror_scattering_map(&accelerated_frame_maps_2d([0.1, 0.2], 1.3).unwrap()).unwrap();
        let v = vacuum_verdict(&accel, &g, &g).unwrap();
        assert_eq!(v.verdict, Verdict::Invariant);

        let frame = RayMap2D {
            f_plus: wobble(),
            f_minus: RayComponent::identity(),
        };
        let wobbly = mirror_scattering_map(&frame).unwrap();
        let w = vacuum_verdict(&wobbly, &g, &g).unwrap();
        assert_eq!(w.verdict, Verdict::Modified);
        assert!(w.evidence > 1e3 * v.evidence.max(1e-12));

        // Scattering twice returns every ray to its original variable.
        for u in [-0.8, 0.0, 0.55] {
            let once = wobbly.f_plus.apply(u).unwrap();
            assert!((wobbly.f_minus.apply(once).unwrap() - u).abs() < 1e-9);
        }
    }

    #[test]
    fn cross_ratio_invariance() {
        let h = Homography2D::new(1.2, -0.3, 0.4, 0.9).unwrap();
        let pts = [-0.7, -0.1, 0.35, 0.8];
        let before = cross_ratio(pts[0], pts[1], pts[2], pts[3]);
        let img: Vec<f64> = pts.iter().map(|&u| h.apply(u).unwrap()).collect();
        let after = cross_ratio(img[0], img[1], img[2], img[3]);
        assert!((before - after).abs() < 1e-12);
        let w = wobble();
        let img: Vec<f64> = pts.iter().map(|&u| w.apply(u).unwrap()).collect();
        let after = cross_ratio(img[0], img[1], img[2], img[3]);
        assert!((before - after).abs() > 1e-4);
    }

    #[test]
    fn sampled_rules_reject_non_monotone_data() {
        assert!(matches!(
            SampledRule::new(grid(0.0, 1.0, 10), (0..10).map(|k| if k == 5 { 0.0 } else { k as f64 }).collect()),
            Err(Error::NotMonotone { index: 5 })
        ));
    }
}
