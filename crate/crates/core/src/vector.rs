//! Minkowski four-vectors and 4×4 real matrices.

use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::math;

/// Diagonal of the Minkowski metric η = diag(1, −1, −1, −1).
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// A contravariant four-vector `(t, x1, x2, x3)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct FourVector(pub [f64; 4]);

/// A point of spacetime.
pub type Event = FourVector;

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    pub const fn new(t: f64, x1: f64, x2: f64, x3: f64) -> Self {
        FourVector([t, x1, x2, x3])
    }

    /// Unit vector along axis `mu`.
    pub fn basis(mu: usize) -> Self {
        let mut v = [0.0; 4];
        v[mu] = 1.0;
        FourVector(v)
    }

    pub fn t(&self) -> f64 {
        self.0[0]
    }

    /// Minkowski inner product.
    pub fn dot(&self, other: &FourVector) -> f64 {
        self.0[0] * other.0[0] - self.0[1] * other.0[1] - self.0[2] * other.0[2]
            - self.0[3] * other.0[3]
    }

    /// Minkowski square `x·x`.
    pub fn square(&self) -> f64 {
        self.dot(self)
    }

    /// Index lowered with η: components `x_μ`.
    pub fn lower(&self) -> FourVector {
        FourVector([self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }

    pub fn euclidean_norm(&self) -> f64 {
        math::sqrt(self.0.iter().map(|c| c * c).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, s: f64) -> FourVector {
        FourVector(self.0.map(|c| c * s))
    }
}

/// `x⁰y⁰ − x¹y¹ − x²y² − x³y³`.
pub fn minkowski_dot(x: &FourVector, y: &FourVector) -> f64 {
    x.dot(y)
}

/// Squared Minkowski distance `(x − x′)²`; positive for timelike separation.
pub fn interval(x: &Event, x_prime: &Event) -> f64 {
    (*x - *x_prime).square()
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for FourVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, rhs: FourVector) -> FourVector {
        FourVector(core::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for FourVector {
    fn add_assign(&mut self, rhs: FourVector) {
        *self = *self + rhs;
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector(core::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl SubAssign for FourVector {
    fn sub_assign(&mut self, rhs: FourVector) {
        *self = *self - rhs;
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector(self.0.map(|c| -c))
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        self.scale(s)
    }
}

impl Mul<FourVector> for f64 {
    type Output = FourVector;
    fn mul(self, v: FourVector) -> FourVector {
        v.scale(self)
    }
}

/// Real 4×4 matrix, row-major: `m.0[mu][nu]` is `M^μ_ν`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Matrix4(pub [[f64; 4]; 4]);

impl Matrix4 {
    pub const ZERO: Matrix4 = Matrix4([[0.0; 4]; 4]);

    pub fn identity() -> Self {
        Self::diagonal([1.0; 4])
    }

    /// η_{μν}.
    pub fn metric() -> Self {
        Self::diagonal(METRIC)
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = d[i];
        }
        Matrix4(m)
    }

    /// `a ⊗ b`, i.e. `m[i][j] = a[i] b[j]`.
    pub fn outer(a: &FourVector, b: &FourVector) -> Self {
        Matrix4(core::array::from_fn(|i| core::array::from_fn(|j| a[i] * b[j])))
    }

    /// Pure boost with rapidity `eta` along spatial axis `axis` (1..=3).
    pub fn boost(axis: usize, rapidity: f64) -> Self {
        let mut m = Self::identity();
        let (ch, sh) = (math::cosh(rapidity), math::sinh(rapidity));
        m.0[0][0] = ch;
        m.0[axis][axis] = ch;
        m.0[0][axis] = sh;
        m.0[axis][0] = sh;
        m
    }

    /// Rotation by `angle` in the plane of spatial axes `i`, `j`.
    pub fn rotation(i: usize, j: usize, angle: f64) -> Self {
        let mut m = Self::identity();
        let (c, s) = (math::cos(angle), math::sin(angle));
        m.0[i][i] = c;
        m.0[j][j] = c;
        m.0[i][j] = -s;
        m.0[j][i] = s;
        m
    }

    pub fn transpose(&self) -> Self {
        Matrix4(core::array::from_fn(|i| core::array::from_fn(|j| self.0[j][i])))
    }

    pub fn scale(&self, s: f64) -> Self {
        Matrix4(self.0.map(|row| row.map(|c| c * s)))
    }

    pub fn mul_vec(&self, v: &FourVector) -> FourVector {
        FourVector(core::array::from_fn(|i| {
            (0..4).map(|j| self.0[i][j] * v[j]).sum()
        }))
    }

    /// `Mᵀ η M`; equals `η` exactly when `M` is a Lorentz matrix.
    pub fn metric_pullback(&self) -> Self {
        self.transpose() * Matrix4::metric() * *self
    }

    /// Max-abs deviation of `Mᵀ η M` from `η`.
    pub fn lorentz_residual(&self) -> f64 {
        (self.metric_pullback() - Matrix4::metric()).max_abs()
    }

    /// Inverse of a Lorentz matrix, `η Mᵀ η`.
    pub fn lorentz_inverse(&self) -> Self {
        Matrix4::metric() * self.transpose() * Matrix4::metric()
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..4).all(|i| (0..4).all(|j| (self.0[i][j] - self.0[j][i]).abs() <= tol))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flat_map(|r| r.iter()).all(|c| c.is_finite())
    }
}

impl Index<(usize, usize)> for Matrix4 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Matrix4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;
    fn mul(self, rhs: Matrix4) -> Matrix4 {
        Matrix4(core::array::from_fn(|i| {
            core::array::from_fn(|j| (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
        }))
    }
}

impl Mul<FourVector> for Matrix4 {
    type Output = FourVector;
    fn mul(self, v: FourVector) -> FourVector {
        self.mul_vec(&v)
    }
}

impl Add for Matrix4 {
    type Output = Matrix4;
    fn add(self, rhs: Matrix4) -> Matrix4 {
        Matrix4(core::array::from_fn(|i| {
            core::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])
        }))
    }
}

impl Sub for Matrix4 {
    type Output = Matrix4;
    fn sub(self, rhs: Matrix4) -> Matrix4 {
        Matrix4(core::array::from_fn(|i| {
            core::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])
        }))
    }
}
