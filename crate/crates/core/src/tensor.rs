//! Two-dimensional vectors and 2×2 tensors.

use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

pub type Vec2 = [f64; 2];

#[inline]
pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm(a: Vec2) -> f64 {
    crate::math::hypot(a[0], a[1])
}

#[inline]
pub fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn scale(s: f64, a: Vec2) -> Vec2 {
    [s * a[0], s * a[1]]
}

/// Rotation by π/2: `(θ₁, θ₂) ↦ (−θ₂, θ₁)`.
#[inline]
pub fn rot90(a: Vec2) -> Vec2 {
    [-a[1], a[0]]
}

/// A 2×2 tensor stored row-major. Not assumed symmetric: the gradient
/// recovery Hessian has a nonsymmetric part.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[0.0; 2]; 2]);
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    #[inline]
    pub fn new(xx: f64, xy: f64, yx: f64, yy: f64) -> Self {
        Mat2([[xx, xy], [yx, yy]])
    }

    #[inline]
    pub fn symmetric(xx: f64, xy: f64, yy: f64) -> Self {
        Mat2([[xx, xy], [xy, yy]])
    }

    /// `a ⊗ b` with entries `a_i b_j`.
    #[inline]
    pub fn outer(a: Vec2, b: Vec2) -> Self {
        Mat2([[a[0] * b[0], a[0] * b[1]], [a[1] * b[0], a[1] * b[1]]])
    }

    /// Frobenius product `self : other`.
    #[inline]
    pub fn ddot(&self, other: &Mat2) -> f64 {
        let (a, b) = (&self.0, &other.0);
        a[0][0] * b[0][0] + a[0][1] * b[0][1] + a[1][0] * b[1][0] + a[1][1] * b[1][1]
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Cofactor matrix: `[[a, b], [c, d]] ↦ [[d, −c], [−b, a]]`.
    #[inline]
    pub fn cof(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2([[d, -c], [-b, a]])
    }

    #[inline]
    pub fn transpose(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2([[a, c], [b, d]])
    }

    #[inline]
    pub fn mul_vec(&self, v: Vec2) -> Vec2 {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    #[inline]
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.ddot(self)
    }

    #[inline]
    pub fn max_abs(&self) -> f64 {
        let m = &self.0;
        m[0][0].abs().max(m[0][1].abs()).max(m[1][0].abs()).max(m[1][1].abs())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    #[inline]
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    #[inline]
    fn sub(self, o: Mat2) -> Mat2 {
        self + (-o)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    #[inline]
    fn neg(self) -> Mat2 {
        self * -1.0
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    #[inline]
    fn mul(self, s: f64) -> Mat2 {
        let a = self.0;
        Mat2([[s * a[0][0], s * a[0][1]], [s * a[1][0], s * a[1][1]]])
    }
}

impl AddAssign for Mat2 {
    #[inline]
    fn add_assign(&mut self, o: Mat2) {
        *self = *self + o;
    }
}

impl SubAssign for Mat2 {
    #[inline]
    fn sub_assign(&mut self, o: Mat2) {
        *self = *self - o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cofactor_of_general_matrix() {
        let m = Mat2::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(m.cof(), Mat2::new(4.0, -3.0, -2.0, 1.0));
        assert_eq!(Mat2::IDENTITY.cof(), Mat2::IDENTITY);
    }

    #[test]
    fn rotation_is_orthogonal_to_input() {
        let v = [1.0, 2.0];
        assert_eq!(dot(v, rot90(v)), 0.0);
        assert_eq!(dot([1.0, 0.0], rot90([0.0, 1.0])), -1.0);
    }
}
