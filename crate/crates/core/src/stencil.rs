//! Central finite-difference stencils.
//!
//! All stencils are fourth order in the step `h`.

use crate::error::Result;
use crate::vector::{FourVector, Matrix4};

/// Offsets and weights (in units of `1/h`) of the first-derivative stencil.
pub const FIRST: [(f64, f64); 4] = [
    (-2.0, 1.0 / 12.0),
    (-1.0, -8.0 / 12.0),
    (1.0, 8.0 / 12.0),
    (2.0, -1.0 / 12.0),
];

/// `f'` from samples at offsets `-2..=2`.
pub fn first(f: &[f64; 5], h: f64) -> f64 {
    (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h)
}

/// `f''` from samples at offsets `-2..=2`.
pub fn second(f: &[f64; 5], h: f64) -> f64 {
    (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h)
}

/// `f'''` from samples at offsets `-3..=3`.
pub fn third(f: &[f64; 7], h: f64) -> f64 {
    (f[0] - 8.0 * f[1] + 13.0 * f[2] - 13.0 * f[4] + 8.0 * f[5] - f[6]) / (8.0 * h * h * h)
}

/// Gradient and Hessian of a scalar field on spacetime.
///
/// Diagonal entries use the 5-point second-derivative stencil, off-diagonal
/// entries the tensor product of two first-derivative stencils.
pub fn gradient_hessian<F>(mut f: F, x: FourVector, h: f64) -> Result<(FourVector, Matrix4)>
where
    F: FnMut(FourVector) -> Result<f64>,
{
    let f0 = f(x)?;
    // Differences from the centre value keep constants exactly flat.
    let mut f = move |y: FourVector| f(y).map(|v| v - f0);
    let mut grad = FourVector::ZERO;
    let mut hess = Matrix4::ZERO;
    for mu in 0..4 {
        let e = FourVector::basis(mu);
        let s = [
            f(x + e * (-2.0 * h))?,
            f(x + e * (-h))?,
            0.0,
            f(x + e * h)?,
            f(x + e * (2.0 * h))?,
        ];
        grad[mu] = first(&s, h);
        hess[(mu, mu)] = second(&s, h);
    }
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            let (e_mu, e_nu) = (FourVector::basis(mu), FourVector::basis(nu));
            let mut acc = 0.0;
            for &(a, wa) in &FIRST {
                for &(b, wb) in &FIRST {
                    acc += wa * wb * f(x + e_mu * (a * h) + e_nu * (b * h))?;
                }
            }
            let v = acc / (h * h);
            hess[(mu, nu)] = v;
            hess[(nu, mu)] = v;
        }
    }
    Ok((grad, hess))
}
