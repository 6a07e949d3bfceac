//! The two model problems and their manufactured solutions.
//!
//! Both problems have the form `A(HΨ, HΦ) + B(HΨ, ∇Ψ, ∇Φ) = ℒ(Φ)` with `A`
//! bilinear and `B` trilinear. The kernels here are pointwise densities;
//! `B` is exposed through its test vectors, i.e. for fixed first and second
//! slots the vectors `bᶜ` with `B = Σ_c bᶜ · θ_c`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::jet::{Jet, SmoothFunction};
use crate::math;
use crate::mesh::Domain;
use crate::tensor::{self, Mat2, Vec2};
use crate::{Error, Result};

/// Upper bound on the number of solution components.
pub const MAX_COMPONENTS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Problem {
    /// Stream-function form of the incompressible Navier–Stokes equations.
    NavierStokes,
    /// Von Kármán plate equations in vector form (displacement, Airy stress).
    VonKarman,
}

impl Problem {
    pub fn n_components(self) -> usize {
        match self {
            Problem::NavierStokes => 1,
            Problem::VonKarman => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Problem::NavierStokes => "ns",
            Problem::VonKarman => "vk",
        }
    }

    /// Weight of component `c` in the bilinear form and the load.
    #[inline]
    pub fn weight(self, c: usize) -> f64 {
        if c == 1 {
            2.0
        } else {
            1.0
        }
    }

    /// `A` density for Hessians `xi` and `chi`.
    pub fn a_kernel(self, xi: &[Mat2], chi: &[Mat2]) -> f64 {
        (0..self.n_components()).map(|c| self.weight(c) * xi[c].ddot(&chi[c])).sum()
    }

    /// Test vectors of `B(lam, xi, ·)`, one per component.
    #[inline]
    pub fn b_test(self, lam: &[Mat2], xi: &[Vec2], out: &mut [Vec2]) {
        match self {
            Problem::NavierStokes => {
                // tr(λ) ξ·rot(θ) = tr(λ) (ξ₂, −ξ₁)·θ
                let t = lam[0].trace();
                out[0] = [t * xi[0][1], -t * xi[0][0]];
            }
            Problem::VonKarman => {
                let cof = lam[0].cof();
                out[0] = cof.transpose().mul_vec(xi[1]);
                out[1] = tensor::scale(-1.0, cof.mul_vec(xi[0]));
            }
        }
    }

    /// `B` density.
    pub fn b_kernel(self, lam: &[Mat2], xi: &[Vec2], theta: &[Vec2]) -> f64 {
        let mut b = [[0.0; 2]; MAX_COMPONENTS];
        self.b_test(lam, xi, &mut b);
        (0..self.n_components()).map(|c| tensor::dot(b[c], theta[c])).sum()
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `[u, v] = u_xx v_yy + u_yy v_xx − 2 u_xy v_xy`.
pub fn bracket(u: &Jet, v: &Jet) -> f64 {
    u.d(2, 0) * v.d(0, 2) + u.d(0, 2) * v.d(2, 0) - 2.0 * u.d(1, 1) * v.d(1, 1)
}

/// Manufactured exact solution of one problem on one domain, with the
/// loads that make it exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactSolution {
    pub problem: Problem,
    pub domain: Domain,
    profile: Profile,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Profile {
    SquareBubble,
    CornerSingular,
    Zero,
}

impl ExactSolution {
    /// `u = x²y²(1−x)²(1−y)²` on the unit square (both components for vK).
    pub fn square(problem: Problem) -> Self {
        ExactSolution { problem, domain: Domain::Square, profile: Profile::SquareBubble }
    }

    /// The corner-singular solution on the L-shaped domain (both
    /// components for vK).
    pub fn lshape(problem: Problem) -> Self {
        ExactSolution { problem, domain: Domain::LShape, profile: Profile::CornerSingular }
    }

    /// The trivial solution, whose loads vanish.
    pub fn zero(problem: Problem, domain: Domain) -> Self {
        ExactSolution { problem, domain, profile: Profile::Zero }
    }

    pub fn for_domain(problem: Problem, domain: Domain) -> Self {
        match domain {
            Domain::Square => Self::square(problem),
            Domain::LShape => Self::lshape(problem),
        }
    }

    /// Jet of component `c` at `p`. All manufactured solutions use the same
    /// profile for both components.
    pub fn component(&self, _c: usize, p: Vec2) -> Result<Jet> {
        match self.profile {
            Profile::SquareBubble => Ok(square_bubble(p)),
            Profile::CornerSingular => corner_singular(p),
            Profile::Zero => Ok(Jet::ZERO),
        }
    }

    /// Load densities `f_c` at `p`.
    pub fn load(&self, p: Vec2) -> Result<[f64; MAX_COMPONENTS]> {
        if self.profile == Profile::Zero {
            return Ok([0.0; MAX_COMPONENTS]);
        }
        match self.problem {
            Problem::NavierStokes => {
                let u = self.component(0, p)?;
                let g = u.grad();
                let gl = u.grad_laplacian();
                Ok([u.bilaplacian() + g[0] * gl[1] - g[1] * gl[0], 0.0])
            }
            Problem::VonKarman => {
                let u = self.component(0, p)?;
                let v = self.component(1, p)?;
                Ok([u.bilaplacian() - bracket(&u, &v), v.bilaplacian() + 0.5 * bracket(&u, &u)])
            }
        }
    }

    pub fn component_fn(&self, c: usize) -> ComponentFn<'_> {
        ComponentFn { exact: self, c }
    }
}

/// One component of an [`ExactSolution`] as a [`SmoothFunction`].
#[derive(Clone, Copy, Debug)]
pub struct ComponentFn<'a> {
    exact: &'a ExactSolution,
    c: usize,
}

impl SmoothFunction for ComponentFn<'_> {
    fn jet(&self, p: Vec2) -> Result<Jet> {
        self.exact.component(self.c, p)
    }
}

/// `t²(1 − t)²` and its first four derivatives.
fn bubble_1d(t: f64) -> [f64; 5] {
    let s = 1.0 - t;
    [
        t * t * s * s,
        2.0 * t * s * (1.0 - 2.0 * t),
        2.0 - 12.0 * t + 12.0 * t * t,
        -12.0 + 24.0 * t,
        24.0,
    ]
}

fn square_bubble(p: Vec2) -> Jet {
    Jet::univariate_x(bubble_1d(p[0])) * Jet::univariate_y(bubble_1d(p[1]))
}

/// Singular exponent at the re-entrant corner.
pub const CORNER_EXPONENT: f64 = 0.5444837367;
/// Interior angle at the re-entrant corner.
pub const CORNER_ANGLE: f64 = 1.5 * PI;

/// Angular profile of the corner singularity; vanishes at `0` and at the
/// corner angle.
pub fn corner_profile(theta: Jet) -> Jet {
    corner_profile_with(theta, CORNER_EXPONENT)
}

fn corner_profile_with(theta: Jet, g: f64) -> Jet {
    let w = CORNER_ANGLE;
    let a = math::sin((g - 1.0) * w) / (g - 1.0) - math::sin((g + 1.0) * w) / (g + 1.0);
    let c = math::cos((g - 1.0) * w) - math::cos((g + 1.0) * w);
    let cos_part = (theta * (g - 1.0)).cos() - (theta * (g + 1.0)).cos();
    let sin_part = (theta * (g - 1.0)).sin() * (1.0 / (g - 1.0)) - (theta * (g + 1.0)).sin() * (1.0 / (g + 1.0));
    cos_part * a - sin_part * c
}

/// Polar angle in `[−π/4, 7π/4)`, continuous on the closed L-shaped domain
/// away from the corner.
pub fn lshape_angle(p: Vec2) -> f64 {
    let t = math::atan2(p[1], p[0]);
    if t < -0.25 * PI {
        t + 2.0 * PI
    } else {
        t
    }
}

fn corner_singular(p: Vec2) -> Result<Jet> {
    corner_singular_with(p, CORNER_EXPONENT)
}

fn corner_singular_with(p: Vec2, exponent: f64) -> Result<Jet> {
    if p[0] == 0.0 && p[1] == 0.0 {
        return Err(Error::CornerEvaluation);
    }
    let (x, y) = (Jet::x(p), Jet::y(p));
    let theta = Jet::polar_angle(x, y, lshape_angle(p));
    let r2 = x * x + y * y;
    let radial = r2.powf(0.5 * (1.0 + exponent));
    let cutoff = (x * x - 1.0).powi(2) * (y * y - 1.0).powi(2);
    Ok(cutoff * radial * corner_profile_with(theta, exponent))
}

/// Boundary sample points of `domain`, evenly spaced along each side.
pub fn boundary_samples(domain: Domain, per_side: usize) -> Vec<(Vec2, Vec2)> {
    let sides: &[(Vec2, Vec2, Vec2)] = match domain {
        Domain::Square => &[
            ([0.0, 0.0], [1.0, 0.0], [0.0, -1.0]),
            ([1.0, 0.0], [1.0, 1.0], [1.0, 0.0]),
            ([1.0, 1.0], [0.0, 1.0], [0.0, 1.0]),
            ([0.0, 1.0], [0.0, 0.0], [-1.0, 0.0]),
        ],
        Domain::LShape => &[
            ([-1.0, -1.0], [0.0, -1.0], [0.0, -1.0]),
            ([0.0, -1.0], [0.0, 0.0], [1.0, 0.0]),
            ([0.0, 0.0], [1.0, 0.0], [0.0, -1.0]),
            ([1.0, 0.0], [1.0, 1.0], [1.0, 0.0]),
            ([1.0, 1.0], [-1.0, 1.0], [0.0, 1.0]),
            ([-1.0, 1.0], [-1.0, -1.0], [-1.0, 0.0]),
        ],
    };
    let mut out = Vec::with_capacity(sides.len() * per_side);
    for &(a, b, n) in sides {
        for i in 0..per_side {
            let t = (i as f64 + 0.5) / per_side as f64;
            out.push(([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])], n));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ns_kernel_examples() {
        let ns = Problem::NavierStokes;
        let traceless = [Mat2::new(1.0, 0.0, 0.0, -1.0)];
        assert_eq!(ns.b_kernel(&traceless, &[[0.3, 0.4]], &[[1.0, 2.0]]), 0.0);
        let lam = [Mat2::new(0.3, 0.7, -0.2, 1.1)];
        assert_eq!(ns.b_kernel(&lam, &[[1.0, 2.0]], &[[1.0, 2.0]]), 0.0);
        assert_eq!(ns.b_kernel(&[Mat2::IDENTITY], &[[1.0, 0.0]], &[[0.0, 1.0]]), -2.0);
        assert_eq!(ns.a_kernel(&[Mat2::IDENTITY], &[Mat2::new(1.0, 5.0, 5.0, 2.0)]), 3.0);
    }

    #[test]
    fn vk_kernel_examples() {
        let vk = Problem::VonKarman;
        let id = [Mat2::IDENTITY, Mat2::ZERO];
        let (xi, th) = ([[1.0, 2.0], [3.0, -1.0]], [[0.5, 0.0], [2.0, 1.0]]);
        let expected = tensor::dot(th[0], xi[1]) - tensor::dot(xi[0], th[1]);
        assert!((vk.b_kernel(&id, &xi, &th) - expected).abs() < 1e-15);
        assert_eq!(vk.b_kernel(&[Mat2::new(1.0, 2.0, 3.0, 4.0), Mat2::ZERO], &th, &th), 0.0);
        let a = vk.a_kernel(&[Mat2::IDENTITY, Mat2::IDENTITY], &[Mat2::IDENTITY, Mat2::IDENTITY]);
        assert_eq!(a, 2.0 + 4.0);
    }

    #[test]
    fn square_solution_values() {
        let u = square_bubble([0.5, 0.5]);
        assert!((u.value() - 1.0 / 256.0).abs() < 1e-17);
        assert_eq!(u.grad(), [0.0, 0.0]);
    }

    /// Root of `sin(γω) = γ` near the stored exponent, by Newton's method.
    fn resolved_exponent() -> f64 {
        let mut g = 0.5;
        for _ in 0..50 {
            let f = libm::sin(g * CORNER_ANGLE) - g;
            g -= f / (CORNER_ANGLE * libm::cos(g * CORNER_ANGLE) - 1.0);
        }
        g
    }

    #[test]
    fn stored_exponent_matches_resolved_root() {
        assert!((resolved_exponent() - CORNER_EXPONENT).abs() < 1e-10);
    }

    #[test]
    fn lshape_solution_vanishes_on_boundary() {
        let e = ExactSolution::lshape(Problem::VonKarman);
        let exact_root = resolved_exponent();
        for (p, n) in boundary_samples(Domain::LShape, 200) {
            let j = e.component(0, p).unwrap();
            assert!(j.value().abs() < 1e-10, "{p:?}");
            // the printed exponent leaves a normal-derivative residue of
            // order 1e-9 on the cut; the re-solved root removes it
            assert!(tensor::dot(j.grad(), n).abs() < 1e-8, "{p:?}");
            let k = corner_singular_with(p, exact_root).unwrap();
            assert!(tensor::dot(k.grad(), n).abs() < 1e-10, "{p:?}");
        }
        assert_eq!(e.component(0, [0.0, 0.0]), Err(Error::CornerEvaluation));
        assert!(corner_profile(Jet::constant(0.0)).value().abs() < 1e-15);
    }

    #[test]
    fn zero_solution_has_zero_loads() {
        let z = ExactSolution::zero(Problem::VonKarman, Domain::Square);
        assert_eq!(z.load([0.3, 0.3]).unwrap(), [0.0, 0.0]);
    }
}
