use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::kernel::scalar_vacuum_correlation;
use crate::conformal::{jacobian_tetrad, AcceleratedFrameForm};
use crate::error::{Error, Result};
use crate::vector::{Event, FourVector, Matrix4, METRIC};

/// Relative tolerance on the agreement of the two evaluation routes of the
/// transformed potential correlator.
pub const ROUTE_TOLERANCE: f64 = 1e-9;

/// Largest relative change of a field-tensor correlation between steps `h`
/// and `h/2` before the step is rejected.
pub const RICHARDSON_GATE: f64 = 1e-3;

/// Number of regulator values `ε, ε/2, …` used for the `ε → 0` limit of
/// field-tensor correlations.
pub const EPSILON_LEVELS: usize = 4;

type Block = [[Complex64; 4]; 4];

const ZERO_BLOCK: Block = [[Complex64::new(0.0, 0.0); 4]; 4];

fn block_max_abs(b: &Block) -> f64 {
    b.iter().flatten().fold(0.0_f64, |m, c| m.max(c.norm()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Frame {
    Minkowski,
    Conformal,
}

/// `C_{A_μ A_ν}(x, x′)` as a 4×4 complex matrix with lower indices.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PotentialCorrelationMatrix {
    pub entries: [[Complex64; 4]; 4],
    pub frame: Frame,
    pub hbar: f64,
}

impl PotentialCorrelationMatrix {
    pub fn max_abs(&self) -> f64 {
        block_max_abs(&self.entries)
    }

    /// `max |a − b| / max(1, max |b|)`.
    pub fn residual(&self, other: &PotentialCorrelationMatrix) -> f64 {
        block_residual(&self.entries, &other.entries)
    }
}

fn block_residual(a: &Block, b: &Block) -> f64 {
    let mut d = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d / block_max_abs(b).max(1.0)
}

/// `(ħ/π) η_{μν} c(x, x′)`.
pub fn em_potential_correlation(
    x: &Event,
    x_prime: &Event,
    epsilon: f64,
    hbar: f64,
) -> PotentialCorrelationMatrix {
    PotentialCorrelationMatrix {
        entries: minkowski_block(x, x_prime, epsilon, hbar),
        frame: Frame::Minkowski,
        hbar,
    }
}

fn minkowski_block(x: &Event, x_prime: &Event, epsilon: f64, hbar: f64) -> Block {
    let c = scalar_vacuum_correlation(x, x_prime, epsilon) * (hbar / PI);
    let mut b = ZERO_BLOCK;
    for (mu, row) in b.iter_mut().enumerate() {
        row[mu] = c * METRIC[mu];
    }
    b
}

/// Both sides of the tetrad contraction identity
///
/// ```text
/// f^ρ_μ(x) η_{ρσ} f^σ_ν(x′) = η_{μν} + φ_μ(x)(x − x′)_ν + φ_ν(x′)(x′ − x)_μ
///                             − ½ φ_μ(x) φ_ν(x′) (x′ − x)²
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TetradContraction {
    pub lhs: Matrix4,
    pub rhs: Matrix4,
    /// `max |lhs − rhs| / max(1, max |rhs|)`.
    pub residual: f64,
}

pub fn tetrad_contraction(form: &AcceleratedFrameForm, x: &Event, x_prime: &Event) -> Result<TetradContraction> {
    let f = jacobian_tetrad(form, x)?.tetrad;
    let fp = jacobian_tetrad(form, x_prime)?.tetrad;
    let lhs = f.matrix().transpose() * Matrix4::metric() * *fp.matrix();
    let rhs = contraction_rhs(form, x, x_prime)?;
    let residual = (lhs - rhs).max_abs() / rhs.max_abs().max(1.0);
    Ok(TetradContraction { lhs, rhs, residual })
}

fn contraction_rhs(form: &AcceleratedFrameForm, x: &Event, x_prime: &Event) -> Result<Matrix4> {
    let phi = form.log_gradient(x)?;
    let phip = form.log_gradient(x_prime)?;
    let d = (*x - *x_prime).lower();
    let d2 = (*x - *x_prime).square();
    Ok(Matrix4::metric() + Matrix4::outer(&phi, &d) - Matrix4::outer(&d, &phip)
        - Matrix4::outer(&phi, &phip).scale(0.5 * d2))
}

/// Which correction terms of the transformed correlator to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CorrectionTerms {
    /// `(ħ/π) η_{μν} c`.
    pub leading: bool,
    /// `(ħ/π)[φ_μ(x)(x − x′)_ν + φ_ν(x′)(x′ − x)_μ] c`.
    pub linear: bool,
    /// `−(ħ/2π) φ_μ(x) φ_ν(x′)`.
    pub quadratic: bool,
}

impl CorrectionTerms {
    pub const ALL: CorrectionTerms = CorrectionTerms {
        leading: true,
        linear: true,
        quadratic: true,
    };
    /// Drops the `φφ′` term and keeps the rest.
    pub const WITHOUT_QUADRATIC: CorrectionTerms = CorrectionTerms {
        leading: true,
        linear: true,
        quadratic: false,
    };
    /// Only the gauge-like corrections.
    pub const CORRECTIONS_ONLY: CorrectionTerms = CorrectionTerms {
        leading: false,
        linear: true,
        quadratic: true,
    };
}

impl Default for CorrectionTerms {
    fn default() -> Self {
        CorrectionTerms::ALL
    }
}

/// The four-term transformed correlator. With `exact_interval` the `φφ′`
/// term carries the factor `(x − x′)² c`, which is 1 in the `ε → 0` limit.
fn explicit_block(
    form: &AcceleratedFrameForm,
    x: &Event,
    x_prime: &Event,
    epsilon: f64,
    hbar: f64,
    terms: CorrectionTerms,
    exact_interval: bool,
) -> Result<Block> {
    let c = scalar_vacuum_correlation(x, x_prime, epsilon);
    let pref = hbar / PI;
    let phi = form.log_gradient(x)?;
    let phip = form.log_gradient(x_prime)?;
    let d = (*x - *x_prime).lower();
    let quad = if exact_interval {
        c * (*x - *x_prime).square()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut b = ZERO_BLOCK;
    for mu in 0..4 {
        for nu in 0..4 {
            let mut v = Complex64::new(0.0, 0.0);
            if terms.leading && mu == nu {
                v += c * (pref * METRIC[mu]);
            }
            if terms.linear {
                v += c * (pref * (phi[mu] * d[nu] - phip[nu] * d[mu]));
            }
            if terms.quadratic {
                v -= quad * (0.5 * pref * phi[mu] * phip[nu]);
            }
            b[mu][nu] = v;
        }
    }
    Ok(b)
}

/// The transformed correlator evaluated by transport and by the explicit
/// formula.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EmRoutes {
    /// `λ f^ρ_μ(x) λ′ f^σ_ν(x′) C̄_{ρσ}`, with the scalar law folding
    /// `λλ′ c̄` into `c`.
    pub transported: PotentialCorrelationMatrix,
    /// The four-term formula with the constant `−(ħ/2π) φφ′` term.
    pub explicit: PotentialCorrelationMatrix,
    /// Disagreement of the transported matrix with the explicit formula at
    /// the same finite `ε` (the `φφ′` term carrying `(x − x′)² c`).
    pub residual: f64,
}

pub fn em_correlation_routes(
    form: &AcceleratedFrameForm,
    x: &Event,
    x_prime: &Event,
    epsilon: f64,
    hbar: f64,
) -> Result<EmRoutes> {
    let f = jacobian_tetrad(form, x)?.tetrad;
    let fp = jacobian_tetrad(form, x_prime)?.tetrad;
    let contraction = f.matrix().transpose() * Matrix4::metric() * *fp.matrix();
    let c = scalar_vacuum_correlation(x, x_prime, epsilon) * (hbar / PI);
    let mut transported = ZERO_BLOCK;
    for mu in 0..4 {
        for nu in 0..4 {
            transported[mu][nu] = c * contraction[(mu, nu)];
        }
    }
    let same_eps = explicit_block(form, x, x_prime, epsilon, hbar, CorrectionTerms::ALL, true)?;
    let explicit = explicit_block(form, x, x_prime, epsilon, hbar, CorrectionTerms::ALL, false)?;
    let wrap = |entries| PotentialCorrelationMatrix {
        entries,
        frame: Frame::Conformal,
        hbar,
    };
    Ok(EmRoutes {
        transported: wrap(transported),
        explicit: wrap(explicit),
        residual: block_residual(&transported, &same_eps),
    })
}

/// The potential correlator seen from the accelerated frame, cross-checked
/// against transport of the Minkowski correlator.
pub fn transformed_em_correlation(
    form: &AcceleratedFrameForm,
    x: &Event,
    x_prime: &Event,
    epsilon: f64,
    hbar: f64,
) -> Result<PotentialCorrelationMatrix> {
    let routes = em_correlation_routes(form, x, x_prime, epsilon, hbar)?;
    if !(routes.residual <= ROUTE_TOLERANCE) {
        return Err(Error::Inconsistent {
            what: "transformed potential correlator",
            residual: routes.residual,
        });
    }
    Ok(routes.explicit)
}

/// A potential correlator as a function of both events.
pub trait PotentialCorrelator {
    fn potential(&self, x: &Event, x_prime: &Event) -> Result<[[Complex64; 4]; 4]>;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinkowskiCorrelator {
    pub epsilon: f64,
    pub hbar: f64,
}

impl PotentialCorrelator for MinkowskiCorrelator {
    fn potential(&self, x: &Event, x_prime: &Event) -> Result<Block> {
        Ok(minkowski_block(x, x_prime, self.epsilon, self.hbar))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformedCorrelator {
    pub form: AcceleratedFrameForm,
    pub epsilon: f64,
    pub hbar: f64,
    pub terms: CorrectionTerms,
}

impl PotentialCorrelator for TransformedCorrelator {
    fn potential(&self, x: &Event, x_prime: &Event) -> Result<Block> {
        explicit_block(&self.form, x, x_prime, self.epsilon, self.hbar, self.terms, false)
    }
}

/// `C_{F_{μν} F_{ρσ}}(x, x′)`, indexed `[μ][ν][ρ][σ]`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FieldTensorCorrelation {
    pub entries: [[[[Complex64; 4]; 4]; 4]; 4],
}

impl FieldTensorCorrelation {
    pub const ZERO: FieldTensorCorrelation = FieldTensorCorrelation {
        entries: [[ZERO_BLOCK; 4]; 4],
    };

    pub fn get(&self, mu: usize, nu: usize, rho: usize, sigma: usize) -> Complex64 {
        self.entries[mu][nu][rho][sigma]
    }

    fn values(&self) -> impl Iterator<Item = &Complex64> {
        self.entries.iter().flatten().flatten().flatten()
    }

    pub fn max_abs(&self) -> f64 {
        self.values().fold(0.0_f64, |m, c| m.max(c.norm()))
    }

    pub fn max_abs_diff(&self, other: &FieldTensorCorrelation) -> f64 {
        self.values()
            .zip(other.values())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()))
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &FieldTensorCorrelation, b: f64) -> FieldTensorCorrelation {
        let mut out = *self;
        for mu in 0..4 {
            for nu in 0..4 {
                for rho in 0..4 {
                    for sigma in 0..4 {
                        out.entries[mu][nu][rho][sigma] = self.entries[mu][nu][rho][sigma] * a
                            + other.entries[mu][nu][rho][sigma] * b;
                    }
                }
            }
        }
        out
    }

    /// Largest violation of antisymmetry in `μν` and in `ρσ`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let mut r = 0.0_f64;
        for mu in 0..4 {
            for nu in 0..4 {
                for rho in 0..4 {
                    for sigma in 0..4 {
                        let v = self.entries[mu][nu][rho][sigma];
                        r = r
                            .max((v + self.entries[nu][mu][rho][sigma]).norm())
                            .max((v + self.entries[mu][nu][sigma][rho]).norm());
                    }
                }
            }
        }
        r
    }
}

/// Antisymmetrises `D[μ][ρ][ν][σ] = ∂_μ ∂′_ρ C_{νσ}`.
fn assemble(d: &[[Block; 4]; 4]) -> FieldTensorCorrelation {
    let mut out = FieldTensorCorrelation::ZERO;
    for mu in 0..4 {
        for nu in 0..4 {
            for rho in 0..4 {
                for sigma in 0..4 {
                    out.entries[mu][nu][rho][sigma] = d[mu][rho][nu][sigma]
                        - d[nu][rho][mu][sigma]
                        - d[mu][sigma][nu][rho]
                        + d[nu][sigma][mu][rho];
                }
            }
        }
    }
    out
}

/// Field-tensor correlation from central cross differences with step `h`.
pub fn field_tensor_correlation_at<C: PotentialCorrelator + ?Sized>(
    source: &C,
    x: &Event,
    x_prime: &Event,
    h: f64,
) -> Result<FieldTensorCorrelation> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput("finite-difference step must be positive"));
    }
    let mut d = [[ZERO_BLOCK; 4]; 4];
    let inv = 1.0 / (4.0 * h * h);
    for mu in 0..4 {
        let e_mu = FourVector::basis(mu) * h;
        for rho in 0..4 {
            let e_rho = FourVector::basis(rho) * h;
            let pp = source.potential(&(*x + e_mu), &(*x_prime + e_rho))?;
            let pm = source.potential(&(*x + e_mu), &(*x_prime - e_rho))?;
            let mp = source.potential(&(*x - e_mu), &(*x_prime + e_rho))?;
            let mm = source.potential(&(*x - e_mu), &(*x_prime - e_rho))?;
            for nu in 0..4 {
                for sigma in 0..4 {
                    d[mu][rho][nu][sigma] =
                        (pp[nu][sigma] - pm[nu][sigma] - mp[nu][sigma] + mm[nu][sigma]) * inv;
                }
            }
        }
    }
    Ok(assemble(&d))
}

/// As [`field_tensor_correlation_at`], rejecting `h` when halving it
/// changes the result by more than [`RICHARDSON_GATE`] (relative).
pub fn field_tensor_correlation<C: PotentialCorrelator + ?Sized>(
    source: &C,
    x: &Event,
    x_prime: &Event,
    h: f64,
) -> Result<FieldTensorCorrelation> {
    let coarse = field_tensor_correlation_at(source, x, x_prime, h)?;
    let fine = field_tensor_correlation_at(source, x, x_prime, 0.5 * h)?;
    let change = coarse.max_abs_diff(&fine) / fine.max_abs().max(f64::MIN_POSITIVE);
    if change > RICHARDSON_GATE {
        let limit = h * libm::sqrt(RICHARDSON_GATE / change);
        return Err(Error::StepTooLarge { step: h, limit });
    }
    Ok(coarse)
}

/// Closed-form field-tensor correlation of the Minkowski potential, from
/// `∂_μ ∂′_ρ Q⁻¹ = 2Q⁻³ ∂_μQ ∂′_ρQ + 2η_{μρ} Q⁻²` with
/// `Q = (x − x′)² − iε(t − t′)`.
pub fn minkowski_field_tensor_analytic(
    x: &Event,
    x_prime: &Event,
    epsilon: f64,
    hbar: f64,
) -> FieldTensorCorrelation {
    let dx = *x - *x_prime;
    let q = Complex64::new(dx.square(), -epsilon * dx.t());
    let (q2, q3) = (q * q, q * q * q);
    let low = dx.lower();
    let ie = Complex64::new(0.0, epsilon);
    let dq = |mu: usize| {
        let base = Complex64::new(2.0 * low[mu], 0.0);
        if mu == 0 { base - ie } else { base }
    };
    let pref = hbar / PI;
    let mut d = [[ZERO_BLOCK; 4]; 4];
    for mu in 0..4 {
        for rho in 0..4 {
            let mut mixed = dq(mu) * (-dq(rho)) * 2.0 / q3;
            if mu == rho {
                mixed += Complex64::new(2.0 * METRIC[mu], 0.0) / q2;
            }
            for nu in 0..4 {
                d[mu][rho][nu][nu] = mixed * (pref * METRIC[nu]);
            }
        }
    }
    assemble(&d)
}

/// Limit `ε → 0` of values computed at `ε / 2^k`, assuming a power series
/// in `ε`.
fn richardson(mut table: Vec<FieldTensorCorrelation>) -> FieldTensorCorrelation {
    let n = table.len();
    for level in 1..n {
        let p = (1u64 << level) as f64;
        for k in 0..(n - level) {
            table[k] = table[k + 1].combine(p / (p - 1.0), &table[k], -1.0 / (p - 1.0));
        }
    }
    table[0]
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EmInvarianceReport {
    /// `max |F̄ − F| / max |F|` in the `ε → 0` limit.
    pub residual: f64,
    /// The same at the finite `ε`.
    pub raw_residual: f64,
    /// Finite-difference Minkowski tensor against the closed form at `ε`.
    pub oracle_residual: f64,
    pub epsilon: f64,
    pub h: f64,
}

/// Compares the field-tensor correlation built from the transformed
/// potential correlator with the one built from the Minkowski correlator.
///
/// Each is evaluated at `ε, ε/2, …` ([`EPSILON_LEVELS`] values) and
/// extrapolated to `ε → 0` before comparison.
pub fn verify_em_invariance(
    form: &AcceleratedFrameForm,
    x: &Event,
    x_prime: &Event,
    epsilon: f64,
    h: f64,
    terms: CorrectionTerms,
) -> Result<EmInvarianceReport> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("regulator must be positive"));
    }
    let hbar = 1.0;
    let mut diffs = Vec::with_capacity(EPSILON_LEVELS);
    let mut plain = Vec::with_capacity(EPSILON_LEVELS);
    let mut eps = epsilon;
    for _ in 0..EPSILON_LEVELS {
        let t = TransformedCorrelator {
            form: *form,
            epsilon: eps,
            hbar,
            terms,
        };
        let m = MinkowskiCorrelator { epsilon: eps, hbar };
        let ft = field_tensor_correlation(&t, x, x_prime, h)?;
        let fm = field_tensor_correlation(&m, x, x_prime, h)?;
        diffs.push(ft.combine(1.0, &fm, -1.0));
        plain.push(fm);
        eps *= 0.5;
    }
    let raw_residual = diffs[0].max_abs() / plain[0].max_abs();
    let analytic = minkowski_field_tensor_analytic(x, x_prime, epsilon, hbar);
    let oracle_residual = plain[0].max_abs_diff(&analytic) / analytic.max_abs();
    let diff0 = richardson(diffs);
    let plain0 = richardson(plain);
    Ok(EmInvarianceReport {
        residual: diff0.max_abs() / plain0.max_abs(),
        raw_residual,
        oracle_residual,
        epsilon,
        h,
    })
}

/// Size of the field-tensor correlation of the correction terms alone,
/// relative to the Minkowski one, in the `ε → 0` limit.
pub fn gauge_terms_contribution(
    form: &AcceleratedFrameForm,
    x: &Event,
    x_prime: &Event,
    epsilon: f64,
    h: f64,
) -> Result<f64> {
    let mut corr = Vec::with_capacity(EPSILON_LEVELS);
    let mut plain = Vec::with_capacity(EPSILON_LEVELS);
    let mut eps = epsilon;
    for _ in 0..EPSILON_LEVELS {
        let t = TransformedCorrelator {
            form: *form,
            epsilon: eps,
            hbar: 1.0,
            terms: CorrectionTerms::CORRECTIONS_ONLY,
        };
        corr.push(field_tensor_correlation_at(&t, x, x_prime, h)?);
        plain.push(minkowski_field_tensor_analytic(x, x_prime, eps, 1.0));
        eps *= 0.5;
    }
    Ok(richardson(corr).max_abs() / richardson(plain).max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form() -> AcceleratedFrameForm {
        AcceleratedFrameForm::new(FourVector::new(0.2, -0.3, 0.1, 0.25), 1.7).unwrap()
    }

    const X: Event = Event::new(0.1, 0.5, -0.2, 0.3);
    const Y: Event = Event::new(-0.1, -0.3, 0.2, 0.1);

    #[test]
    fn minkowski_structure() {
        let m = em_potential_correlation(&X, &Y, 0.01, 1.0);
        let c = scalar_vacuum_correlation(&X, &Y, 0.01);
        assert_eq!(m.entries[0][0], c / PI);
        assert_eq!(m.entries[1][1], -c / PI);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(m.entries[i][j], Complex64::new(0.0, 0.0));
                }
            }
        }
        let m = em_potential_correlation(&X, &Y, 0.01, PI);
        assert!((m.entries[2][2] + c).norm() < 1e-15);
    }

    #[test]
    fn tetrad_identity() {
        let r = tetrad_contraction(&form(), &X, &Y).unwrap();
        assert!(r.residual < 1e-12, "{}", r.residual);
        let same = tetrad_contraction(&form(), &X, &X).unwrap();
        assert!((same.lhs - Matrix4::metric()).max_abs() < 1e-12);
        let id = tetrad_contraction(&AcceleratedFrameForm::identity(), &X, &Y).unwrap();
        assert_eq!(id.lhs, Matrix4::metric());
        assert_eq!(id.rhs, Matrix4::metric());
    }

    #[test]
    fn routes_agree() {
        let r = em_correlation_routes(&form(), &X, &Y, 0.01, 1.0).unwrap();
        assert!(r.residual < 1e-12, "{}", r.residual);
        let id = transformed_em_correlation(&AcceleratedFrameForm::identity(), &X, &Y, 0.01, 1.0).unwrap();
        assert_eq!(id.entries, em_potential_correlation(&X, &Y, 0.01, 1.0).entries);
    }

    #[test]
    fn leading_term_is_minkowskian() {
        let t = TransformedCorrelator {
            form: form(),
            epsilon: 0.01,
            hbar: 1.0,
            terms: CorrectionTerms {
                leading: true,
                linear: false,
                quadratic: false,
            },
        };
        let m = MinkowskiCorrelator { epsilon: 0.01, hbar: 1.0 };
        assert_eq!(t.potential(&X, &Y).unwrap(), m.potential(&X, &Y).unwrap());
    }

    #[test]
    fn finite_differences_match_closed_form() {
        let m = MinkowskiCorrelator { epsilon: 1e-2, hbar: 1.0 };
        let fd = field_tensor_correlation(&m, &X, &Y, 1e-4).unwrap();
        let exact = minkowski_field_tensor_analytic(&X, &Y, 1e-2, 1.0);
        assert!(fd.max_abs_diff(&exact) / exact.max_abs() < 1e-5);
        assert_eq!(fd.antisymmetry_residual(), 0.0);
        assert_eq!(exact.antisymmetry_residual(), 0.0);
    }

    #[test]
    fn coarse_step_is_rejected() {
        let m = MinkowskiCorrelator { epsilon: 1e-2, hbar: 1.0 };
        let near = Event::new(0.0, 0.2, 0.0, 0.0);
        let err = field_tensor_correlation(&m, &near, &Event::ZERO, 0.05).unwrap_err();
        assert!(matches!(err, Error::StepTooLarge { .. }));
    }

    #[test]
    fn field_tensor_invariance() {
        let r = verify_em_invariance(&form(), &X, &Y, 1e-2, 1e-4, CorrectionTerms::ALL).unwrap();
        assert!(r.residual < 1e-4, "{r:?}");
        assert!(r.oracle_residual < 1e-5);
        let id = verify_em_invariance(&AcceleratedFrameForm::identity(), &X, &Y, 1e-2, 1e-4, CorrectionTerms::ALL).unwrap();
        assert_eq!(id.residual, 0.0);
    }

    #[test]
    fn gauge_terms_drop_out() {
        let g = gauge_terms_contribution(&form(), &X, &Y, 1e-2, 1e-4).unwrap();
        assert!(g < 1e-5, "{g}");
    }
}
