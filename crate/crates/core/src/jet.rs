//! Bivariate truncated Taylor jets.
//!
//! A [`Jet`] holds the Taylor coefficients of a smooth function of `(x, y)`
//! about a point up to total order [`ORDER`]. Arithmetic and elementary
//! functions propagate the coefficients exactly (up to rounding), so any
//! closed-form expression built from them yields all partial derivatives up
//! to fourth order without finite differences.

use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::math;
use crate::tensor::{Mat2, Vec2};
use crate::Result;

/// A smooth scalar function that can be expanded about any admissible point.
pub trait SmoothFunction {
    fn jet(&self, p: Vec2) -> Result<Jet>;
}

impl<F: Fn(Vec2) -> Jet> SmoothFunction for F {
    fn jet(&self, p: Vec2) -> Result<Jet> {
        Ok(self(p))
    }
}

pub const ORDER: usize = 4;
const LEN: usize = (ORDER + 1) * (ORDER + 2) / 2;

const fn idx(a: usize, b: usize) -> usize {
    // graded ordering: all terms of degree n come after those of degree n-1
    let n = a + b;
    n * (n + 1) / 2 + b
}

const FACT: [f64; ORDER + 1] = [1.0, 1.0, 2.0, 6.0, 24.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; LEN],
}

impl Jet {
    pub const ZERO: Jet = Jet { c: [0.0; LEN] };

    pub fn constant(v: f64) -> Jet {
        let mut j = Jet::ZERO;
        j.c[0] = v;
        j
    }

    /// The coordinate function `x` about `p`.
    pub fn x(p: Vec2) -> Jet {
        let mut j = Jet::constant(p[0]);
        j.c[idx(1, 0)] = 1.0;
        j
    }

    /// The coordinate function `y` about `p`.
    pub fn y(p: Vec2) -> Jet {
        let mut j = Jet::constant(p[1]);
        j.c[idx(0, 1)] = 1.0;
        j
    }

    /// Jet of a function of `x` alone, from its derivatives `f, f', …, f''''`.
    pub fn univariate_x(d: [f64; ORDER + 1]) -> Jet {
        let mut j = Jet::ZERO;
        for (a, v) in d.iter().enumerate() {
            j.c[idx(a, 0)] = v / FACT[a];
        }
        j
    }

    pub fn univariate_y(d: [f64; ORDER + 1]) -> Jet {
        let mut j = Jet::ZERO;
        for (b, v) in d.iter().enumerate() {
            j.c[idx(0, b)] = v / FACT[b];
        }
        j
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `∂ₓᵃ∂ᵧᵇ` at the expansion point, `a + b ≤ 4`.
    pub fn d(&self, a: usize, b: usize) -> f64 {
        self.c[idx(a, b)] * FACT[a] * FACT[b]
    }

    pub fn grad(&self) -> Vec2 {
        [self.d(1, 0), self.d(0, 1)]
    }

    pub fn hess(&self) -> Mat2 {
        let xy = self.d(1, 1);
        Mat2::new(self.d(2, 0), xy, xy, self.d(0, 2))
    }

    pub fn laplacian(&self) -> f64 {
        self.d(2, 0) + self.d(0, 2)
    }

    /// `∇(Δu)`.
    pub fn grad_laplacian(&self) -> Vec2 {
        [self.d(3, 0) + self.d(1, 2), self.d(2, 1) + self.d(0, 3)]
    }

    pub fn bilaplacian(&self) -> f64 {
        self.d(4, 0) + 2.0 * self.d(2, 2) + self.d(0, 4)
    }

    pub fn scale(mut self, s: f64) -> Jet {
        self.c.iter_mut().for_each(|v| *v *= s);
        self
    }

    pub fn powi(self, n: u32) -> Jet {
        let mut r = Jet::constant(1.0);
        for _ in 0..n {
            r = r * self;
        }
        r
    }

    /// `f(self)` where `derivs[k]` is `f⁽ᵏ⁾` at the constant term.
    fn compose(self, derivs: [f64; ORDER + 1]) -> Jet {
        let mut u = self;
        u.c[0] = 0.0;
        let mut out = Jet::constant(derivs[0]);
        let mut upow = Jet::constant(1.0);
        for k in 1..=ORDER {
            upow = upow * u;
            out += upow.scale(derivs[k] / FACT[k]);
        }
        out
    }

    pub fn sin(self) -> Jet {
        let (s, c) = (math::sin(self.c[0]), math::cos(self.c[0]));
        self.compose([s, c, -s, -c, s])
    }

    pub fn cos(self) -> Jet {
        let (s, c) = (math::sin(self.c[0]), math::cos(self.c[0]));
        self.compose([c, -s, -c, s, c])
    }

    pub fn exp(self) -> Jet {
        let e = math::exp(self.c[0]);
        self.compose([e; ORDER + 1])
    }

    /// Natural logarithm; the constant term must be positive.
    pub fn ln(self) -> Jet {
        let x = self.c[0];
        let r = 1.0 / x;
        self.compose([math::ln(x), r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    /// `self^p` for real `p`; the constant term must be positive.
    pub fn powf(self, p: f64) -> Jet {
        let x = self.c[0];
        let mut d = [0.0; ORDER + 1];
        let mut coef = 1.0;
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = coef * math::pow(x, p - k as f64);
            coef *= p - k as f64;
        }
        self.compose(d)
    }

    pub fn sqrt(self) -> Jet {
        self.powf(0.5)
    }

    pub fn recip(self) -> Jet {
        let r = 1.0 / self.c[0];
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r, 24.0 * r * r * r * r * r])
    }

    pub fn atan(self) -> Jet {
        let x = self.c[0];
        let q = 1.0 / (1.0 + x * x);
        self.compose([
            math::atan2(x, 1.0),
            q,
            -2.0 * x * q * q,
            (6.0 * x * x - 2.0) * q * q * q,
            24.0 * x * (1.0 - x * x) * q * q * q * q,
        ])
    }

    /// Polar angle of `(x, y)` with the branch chosen by `angle0`, the angle
    /// of the expansion point.
    pub fn polar_angle(x: Jet, y: Jet, angle0: f64) -> Jet {
        let (x0, y0) = (x.c[0], y.c[0]);
        let mut dx = x;
        dx.c[0] = 0.0;
        let mut dy = y;
        dy.c[0] = 0.0;
        // θ = θ₀ + atan((x₀dy − y₀dx) / (r₀² + x₀dx + y₀dy))
        let num = dy.scale(x0) - dx.scale(y0);
        let den = dx.scale(x0) + dy.scale(y0) + Jet::constant(x0 * x0 + y0 * y0);
        let mut t = (num * den.recip()).atan();
        t.c[0] = angle0;
        t
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        self += o;
        self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        for (a, b) in self.c.iter_mut().zip(o.c) {
            *a += b;
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, o: Jet) -> Jet {
        for (a, b) in self.c.iter_mut().zip(o.c) {
            *a -= b;
        }
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut r = Jet::ZERO;
        for n1 in 0..=ORDER {
            for b1 in 0..=n1 {
                let u = self.c[idx(n1 - b1, b1)];
                if u == 0.0 {
                    continue;
                }
                for n2 in 0..=ORDER - n1 {
                    for b2 in 0..=n2 {
                        r.c[idx(n1 - b1 + n2 - b2, b1 + b2)] += u * o.c[idx(n2 - b2, b2)];
                    }
                }
            }
        }
        r
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, s: f64) -> Jet {
        self.c[0] += s;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, s: f64) -> Jet {
        self.c[0] -= s;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn polynomial_derivatives() {
        let p = [0.3, -0.7];
        let (x, y) = (Jet::x(p), Jet::y(p));
        // f = x³y² + 2xy
        let f = x.powi(3) * y.powi(2) + (x * y).scale(2.0);
        let (a, b) = (p[0], p[1]);
        assert!(close(f.value(), a * a * a * b * b + 2.0 * a * b, 1e-15));
        assert!(close(f.d(1, 0), 3.0 * a * a * b * b + 2.0 * b, 1e-15));
        assert!(close(f.d(1, 1), 6.0 * a * a * b + 2.0, 1e-15));
        assert!(close(f.d(3, 1), 12.0 * b, 1e-15));
        assert!(close(f.d(2, 2), 12.0 * a, 1e-15));
        assert_eq!(f.d(0, 3), 0.0);
    }

    #[test]
    fn elementary_functions() {
        let p = [0.4, 1.3];
        let (x, y) = (Jet::x(p), Jet::y(p));
        let f = (x * y).sin();
        // ∂ₓ²∂ᵧ² sin(xy) = (2 − x²y²) ... computed by hand:
        // ∂ᵧ² sin(xy) = −x² sin(xy); ∂ₓ² of that = −2 sin − 4xy cos + x²y² sin
        let (s, c, xy) = (libm::sin(0.52), libm::cos(0.52), 0.52);
        assert!(close(f.d(2, 2), -2.0 * s - 4.0 * xy * c + xy * xy * s, 1e-14));

        let g = (x.powi(2) + y.powi(2)).ln();
        // Δ ln r² = 0 away from the origin
        assert!(g.laplacian().abs() < 1e-14);
        assert!(g.bilaplacian().abs() < 1e-12);

        let r = (x * x + y * y).sqrt();
        assert!(close(r.d(1, 0), 0.4 / libm::hypot(0.4, 1.3), 1e-15));
        assert!(close((x.exp() * (-x).exp()).value(), 1.0, 1e-15));
        assert!((x.exp() * (-x).exp()).d(4, 0).abs() < 1e-13);
    }

    #[test]
    fn polar_angle_is_harmonic_with_unit_gradient_scaled() {
        let p = [-0.6, -0.2];
        let th0 = libm::atan2(p[1], p[0]) + 2.0 * core::f64::consts::PI;
        let t = Jet::polar_angle(Jet::x(p), Jet::y(p), th0);
        assert_eq!(t.value(), th0);
        let r2 = p[0] * p[0] + p[1] * p[1];
        assert!(close(t.d(1, 0), -p[1] / r2, 1e-15));
        assert!(close(t.d(0, 1), p[0] / r2, 1e-15));
        assert!(t.laplacian().abs() < 1e-13);
        assert!(t.bilaplacian().abs() < 1e-10);
    }
}
