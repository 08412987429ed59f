//! Random maps, events, rays and worldlines for the sweeps.
//!
//! Maps have `‖α‖ ≤ 0.5` (Euclidean), events lie in `‖x‖ ≤ 1`, and every
//! accepted event has `|1 − 2α·x + α²x²| ≥ 0.1`.

use conformal_vacuum::{
    hyperbolic_worldline, AcceleratedFrameForm, ConformalMap, Event, FourVector, Matrix4, Primitive, Worldline,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::SuiteConfig;

pub const ALPHA_RADIUS: f64 = 0.5;
pub const EVENT_RADIUS: f64 = 1.0;
pub const MIN_SINGULAR_RESIDUAL: f64 = 0.1;
const MAX_TRIES: usize = 10_000;

pub type SuiteRng = ChaCha8Rng;

/// One independent stream per suite, all derived from the seed.
pub fn rng_for(config: &SuiteConfig) -> SuiteRng {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(config.suite.stream());
    rng
}

/// Uniform in the Euclidean 4-ball of radius `r`.
pub fn in_ball<R: Rng>(rng: &mut R, r: f64) -> FourVector {
    loop {
        let v = FourVector::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        if v.euclidean_norm() <= 1.0 {
            return v * r;
        }
    }
}

/// Uniform on the unit 2-sphere.
pub fn unit_direction<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let n = [
            rng.random_range(-1.0..=1.0_f64),
            rng.random_range(-1.0..=1.0_f64),
            rng.random_range(-1.0..=1.0_f64),
        ];
        let r2: f64 = n.iter().map(|c| c * c).sum();
        if r2 > 1e-4 && r2 <= 1.0 {
            let r = r2.sqrt();
            return [n[0] / r, n[1] / r, n[2] / r];
        }
    }
}

/// `β ∈ [0.5, 2]`, negated when `allow_negative` and a coin says so.
pub fn random_form<R: Rng>(rng: &mut R, allow_negative: bool) -> AcceleratedFrameForm {
    let alpha = in_ball(rng, ALPHA_RADIUS);
    let mut beta = rng.random_range(0.5..=2.0);
    if allow_negative && rng.random_bool(0.5) {
        beta = -beta;
    }
    AcceleratedFrameForm::new(alpha, beta).expect("β is bounded away from zero")
}

pub fn regular<R: Rng>(rng: &mut R, form: &AcceleratedFrameForm, radius: f64) -> Event {
    for _ in 0..MAX_TRIES {
        let x = in_ball(rng, radius);
        if form.singular_residual(&x).abs() >= MIN_SINGULAR_RESIDUAL {
            return x;
        }
    }
    panic!("no regular event found; the sampling box is degenerate")
}

/// Two regular events with `(x − x′)² ≤ −min_separation`.
pub fn spacelike_pair<R: Rng>(rng: &mut R, form: &AcceleratedFrameForm, min_separation: f64) -> (Event, Event) {
    for _ in 0..MAX_TRIES {
        let x = regular(rng, form, EVENT_RADIUS);
        let y = regular(rng, form, EVENT_RADIUS);
        if (x - y).square() <= -min_separation {
            return (x, y);
        }
    }
    panic!("no spacelike pair found")
}

/// Two regular events off each other's light cone, `|(x − x′)²| ≥ min_separation`.
pub fn separated_pair<R: Rng>(rng: &mut R, form: &AcceleratedFrameForm, min_separation: f64) -> (Event, Event) {
    for _ in 0..MAX_TRIES {
        let x = regular(rng, form, EVENT_RADIUS);
        let y = regular(rng, form, EVENT_RADIUS);
        if (x - y).square().abs() >= min_separation {
            return (x, y);
        }
    }
    panic!("no separated pair found")
}

/// Product of random boosts along two axes and rotations in all three planes.
pub fn random_lorentz<R: Rng>(rng: &mut R) -> Matrix4 {
    let mut angle = || rng.random_range(-3.0..=3.0);
    let r = Matrix4::rotation(1, 2, angle()) * Matrix4::rotation(2, 3, angle()) * Matrix4::rotation(1, 3, angle());
    let b = Matrix4::boost(1, rng.random_range(-0.8..=0.8)) * Matrix4::boost(2, rng.random_range(-0.8..=0.8));
    r * b
}

/// A random chain of all four primitive kinds.
pub fn random_chain<R: Rng>(rng: &mut R) -> ConformalMap {
    let shift = in_ball(rng, 0.5);
    let chain = vec![
        Primitive::translation(shift),
        Primitive::lorentz(random_lorentz(rng)).expect("boost times rotation is Lorentz"),
        Primitive::inversion(rng.random_range(0.5..=2.0)).expect("β > 0"),
        Primitive::dilation(rng.random_range(0.5..=2.0)).expect("s > 0"),
        Primitive::translation(in_ball(rng, 0.5)),
    ];
    ConformalMap::new(chain).expect("valid primitives")
}

/// Hyperbolic (or, for `a = 0`, uniform) worldline through `x0 ∈ ‖x‖ ≤ 0.3`
/// with a random initial velocity and acceleration direction.
pub fn random_hyperbolic<R: Rng>(rng: &mut R, a: f64) -> Worldline {
    let n = unit_direction(rng);
    let eta: f64 = rng.random_range(0.0..=0.5);
    let v0 = FourVector::new(eta.cosh(), eta.sinh() * n[0], eta.sinh() * n[1], eta.sinh() * n[2]);
    let x0 = in_ball(rng, 0.3);
    if a == 0.0 {
        return hyperbolic_worldline(v0, FourVector::ZERO, 0.0, x0).expect("unit velocity");
    }
    loop {
        let m = unit_direction(rng);
        let m4 = FourVector::new(0.0, m[0], m[1], m[2]);
        let e = m4 - v0 * v0.dot(&m4);
        let e2 = e.square();
        if e2 < -1e-3 {
            let e = e * (1.0 / (-e2).sqrt());
            return hyperbolic_worldline(v0, e * a, a, x0).expect("orthogonal spacelike acceleration");
        }
    }
}
