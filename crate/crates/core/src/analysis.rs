//! Error norms, observed orders and the structural property measures of a
//! Hessian discretisation.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::{free_locals, gram_matrix, GramKind};
use crate::discretisation::{interpolate_dofs, HessianDiscretisation};
use crate::jet::{Jet, SmoothFunction};
use crate::math;
use crate::mesh::Domain;
use crate::problems::ExactSolution;
use crate::solver::{nested_dissection, SparseLu};
use crate::sparse::{self, CsrMatrix};
use crate::tensor::{self, Mat2, Vec2};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Errors

/// Relative errors of one component.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComponentErrors {
    pub rel_l2: f64,
    pub rel_h1: f64,
    pub rel_w14: f64,
    pub rel_h2: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ErrorBundle {
    pub components: Vec<ComponentErrors>,
}

/// Relative errors of the reconstructions of `u` against `phi`, with broken
/// norms summed cell by cell.
pub fn component_errors(hd: &HessianDiscretisation, phi: &dyn SmoothFunction, u: &[f64]) -> Result<ComponentErrors> {
    if u.len() != hd.n_dofs() {
        return Err(Error::DimensionMismatch { expected: hd.n_dofs(), found: u.len() });
    }
    let (mut e, mut n) = ([0.0; 4], [0.0; 4]);
    for cell in 0..hd.n_cells() {
        let t = &hd.tables[cell];
        for (q, (&p, &w)) in t.quadrature.points.iter().zip(&t.quadrature.weights).enumerate() {
            let j = phi.jet(p)?;
            let d = hd.eval_unchecked(u, cell, q);
            let (g, dg) = (j.grad(), tensor::sub(d.grad, j.grad()));
            e[0] += w * sq(d.value - j.value());
            n[0] += w * sq(j.value());
            e[1] += w * tensor::dot(dg, dg);
            n[1] += w * tensor::dot(g, g);
            e[2] += w * sq(tensor::dot(dg, dg));
            n[2] += w * sq(tensor::dot(g, g));
            e[3] += w * (d.hess - j.hess()).frobenius_norm_sq();
            n[3] += w * j.hess().frobenius_norm_sq();
        }
    }
    const WHAT: [&str; 4] = ["L2", "H1", "W14", "H2"];
    let mut rel = [0.0; 4];
    for i in 0..4 {
        if n[i] <= 0.0 {
            return Err(Error::ZeroExactNorm { what: WHAT[i] });
        }
        rel[i] = if i == 2 { math::sqrt(math::sqrt(e[i] / n[i])) } else { math::sqrt(e[i] / n[i]) };
    }
    Ok(ComponentErrors { rel_l2: rel[0], rel_h1: rel[1], rel_w14: rel[2], rel_h2: rel[3] })
}

/// Errors of every component of the block vector `psi`.
pub fn compute_errors(hd: &HessianDiscretisation, exact: &ExactSolution, psi: &[f64]) -> Result<ErrorBundle> {
    let k = exact.problem.n_components();
    let n = hd.n_dofs();
    if psi.len() != k * n {
        return Err(Error::DimensionMismatch { expected: k * n, found: psi.len() });
    }
    let components = (0..k)
        .map(|c| component_errors(hd, &exact.component_fn(c), &psi[c * n..(c + 1) * n]))
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorBundle { components })
}

/// `log₂(e_{ℓ−1}/e_ℓ)` for each level after the first; absent where an
/// error vanishes.
pub fn observed_order(errors: &[f64]) -> Vec<Option<f64>> {
    let mut out = vec![None; errors.len()];
    for l in 1..errors.len() {
        let (a, b) = (errors[l - 1], errors[l]);
        if a > 0.0 && b > 0.0 {
            out[l] = Some(math::log2(a / b));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Test families

#[derive(Clone, Copy, Debug)]
pub struct TestFunction {
    pub id: &'static str,
    pub f: fn(Vec2) -> Jet,
}

/// Matrix field as `[xx, xy, yx, yy]`.
#[derive(Clone, Copy, Debug)]
pub struct TestTensorField {
    pub id: &'static str,
    pub f: fn(Vec2) -> [Jet; 4],
}

#[derive(Clone, Copy, Debug)]
pub struct TestVectorField {
    pub id: &'static str,
    pub f: fn(Vec2) -> [Jet; 2],
}

#[inline]
fn sq(v: f64) -> f64 {
    v * v
}

fn xy(p: Vec2) -> (Jet, Jet) {
    (Jet::x(p), Jet::y(p))
}

fn square_bubble(p: Vec2) -> Jet {
    let (x, y) = xy(p);
    (x * (x * -1.0 + 1.0) * y * (y * -1.0 + 1.0)).powi(2) * 256.0
}

fn lshape_bubble(p: Vec2) -> Jet {
    let (x, y) = xy(p);
    ((x * x - 1.0) * (y * y - 1.0) * x * y).powi(2) * 16.0
}

fn sin_pi(t: Jet, k: f64) -> Jet {
    (t * (k * core::f64::consts::PI)).sin()
}

/// Five smooth functions vanishing with their gradients on the boundary of
/// `domain`.
pub fn test_functions(domain: Domain) -> [TestFunction; 5] {
    match domain {
        Domain::Square => [
            TestFunction { id: "sin2sin2", f: |p| (sin_pi(Jet::x(p), 1.0) * sin_pi(Jet::y(p), 1.0)).powi(2) },
            TestFunction { id: "bubble_exp", f: |p| square_bubble(p) * (Jet::x(p) - Jet::y(p)).exp() },
            TestFunction { id: "bubble_linear", f: |p| square_bubble(p) * (Jet::x(p) + Jet::y(p) * 2.0 + 1.0) },
            TestFunction { id: "sin2sin2_2", f: |p| (sin_pi(Jet::x(p), 1.0) * sin_pi(Jet::y(p), 2.0)).powi(2) },
            TestFunction { id: "bubble_cos", f: |p| square_bubble(p) * (Jet::x(p) * 3.0 + Jet::y(p)).cos() },
        ],
        Domain::LShape => [
            TestFunction { id: "bubble", f: lshape_bubble },
            TestFunction { id: "bubble_exp", f: |p| lshape_bubble(p) * (Jet::x(p) - Jet::y(p)).exp() },
            TestFunction { id: "bubble_linear", f: |p| lshape_bubble(p) * (Jet::x(p) + Jet::y(p) * 2.0 + 3.0) },
            TestFunction { id: "bubble_sin", f: |p| lshape_bubble(p) * sin_pi(Jet::x(p) + Jet::y(p), 0.5) },
            TestFunction { id: "bubble_cos", f: |p| lshape_bubble(p) * (Jet::x(p) * 3.0 + Jet::y(p)).cos() },
        ],
    }
}

/// Five smooth matrix fields, without boundary conditions.
pub fn test_tensor_fields() -> [TestTensorField; 5] {
    [
        TestTensorField {
            id: "poly_sym",
            f: |p| {
                let (x, y) = xy(p);
                let off = x * y * y;
                [x * x * y + 1.0, off, off, x - y * y * y]
            },
        },
        TestTensorField {
            id: "trig_sym",
            f: |p| {
                let (x, y) = xy(p);
                let off = x.cos() * y;
                [(x + y).sin(), off, off, x.exp() * y]
            },
        },
        TestTensorField {
            id: "poly_nonsym",
            f: |p| {
                let (x, y) = xy(p);
                [x, y, -y, x * x]
            },
        },
        TestTensorField {
            id: "exp_diag",
            f: |p| {
                let (x, y) = xy(p);
                [(x - y).exp(), Jet::ZERO, Jet::ZERO, y.exp()]
            },
        },
        TestTensorField {
            id: "trig_mixed",
            f: |p| {
                let (x, y) = xy(p);
                let off = sin_pi(x * y, 1.0);
                [(x * core::f64::consts::PI).cos() * (y * core::f64::consts::PI).cos(), off, off, x * x + y * y]
            },
        },
    ]
}

/// Smooth vector fields, without boundary conditions.
pub fn test_vector_fields() -> [TestVectorField; 2] {
    [
        TestVectorField {
            id: "poly",
            f: |p| {
                let (x, y) = xy(p);
                [x * x + y, x * y - y * y]
            },
        },
        TestVectorField {
            id: "trig",
            f: |p| {
                let (x, y) = xy(p);
                [sin_pi(x, 1.0) * y.cos(), x.exp() * y]
            },
        },
    ]
}

/// `div ξ` (row-wise) and `ℋ:ξ = div div ξ` of a matrix field.
fn tensor_derivatives(xi: &[Jet; 4]) -> (Vec2, f64) {
    let div = [xi[0].d(1, 0) + xi[1].d(0, 1), xi[2].d(1, 0) + xi[3].d(0, 1)];
    let hh = xi[0].d(2, 0) + xi[1].d(1, 1) + xi[2].d(1, 1) + xi[3].d(0, 2);
    (div, hh)
}

fn tensor_value(xi: &[Jet; 4]) -> Mat2 {
    Mat2::new(xi[0].value(), xi[1].value(), xi[2].value(), xi[3].value())
}

// ---------------------------------------------------------------------------
// Property measures

/// A named measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Named {
    pub id: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PropertyMeasures {
    /// `max(c_d_l2, c_d_l4)`.
    pub c_d: f64,
    pub c_d_l2: f64,
    /// Best value found by the multistart ascent; a lower bound.
    pub c_d_l4: f64,
    /// Upper bounds on the interpolation error, per test function.
    pub s_d: Vec<Named>,
    pub w_d: Vec<Named>,
    /// Per vector field.
    pub w_hat_d: Vec<Named>,
    /// `Ŵ_D(div ξ)` per matrix field.
    pub w_hat_div_d: Vec<Named>,
    pub w_tilde_d: Vec<Named>,
    pub alpha_d: f64,
    pub gamma_d: f64,
    /// GR only: see [`stabilisation_defect`].
    pub stabilisation_defect: Option<f64>,
}

pub const ASCENT_STARTS: usize = 20;
pub const ASCENT_MAX_ITER: usize = 200;
const ASCENT_SEED: u64 = 0x5eed_c0de;

/// Factorised Hessian Gram matrix and the per-point data shared by the
/// measures.
#[derive(Debug)]
pub struct PropertyContext<'a> {
    pub hd: &'a HessianDiscretisation,
    gram_h: CsrMatrix,
    gram_v: CsrMatrix,
    lu: Option<SparseLu>,
}

impl<'a> PropertyContext<'a> {
    pub fn new(hd: &'a HessianDiscretisation) -> Result<Self> {
        let gram_h = gram_matrix(hd, GramKind::Hessian);
        let gram_v = gram_matrix(hd, GramKind::Value);
        let lu = if hd.n_dofs() == 0 { None } else { Some(SparseLu::factor(&gram_h, &nested_dissection(&gram_h))?) };
        Ok(PropertyContext { hd, gram_h, gram_v, lu })
    }

    fn n(&self) -> usize {
        self.hd.n_dofs()
    }

    fn g_solve(&self, r: &[f64]) -> Vec<f64> {
        self.lu.as_ref().map_or_else(Vec::new, |lu| lu.solve(r))
    }

    /// `‖w‖_D` through the Gram matrix.
    pub fn norm_d(&self, w: &[f64]) -> f64 {
        math::sqrt(self.gram_h.quadratic_form(w).max(0.0))
    }

    /// `sup_w |rᵀw| / ‖w‖_D = (rᵀ G⁻¹ r)^{1/2}`.
    pub fn dual_norm(&self, r: &[f64]) -> f64 {
        if self.n() == 0 {
            return 0.0;
        }
        math::sqrt(sparse::dot(r, &self.g_solve(r)).max(0.0))
    }

    /// Largest `‖Π_D w‖ / ‖w‖_D` by power iteration on the pencil.
    pub fn c_d_l2(&self) -> f64 {
        let n = self.n();
        if n == 0 {
            return 0.0;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(ASCENT_SEED);
        let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
        let mut lambda = 0.0;
        for _ in 0..2000 {
            let y = self.g_solve(&self.gram_v.mul_vec(&x));
            let ny = self.norm_d(&y);
            if ny == 0.0 {
                return 0.0;
            }
            x = y.iter().map(|v| v / ny).collect();
            let next = self.gram_v.quadratic_form(&x);
            let done = (next - lambda).abs() <= 1e-15 * next;
            lambda = next;
            if done {
                break;
            }
        }
        math::sqrt(lambda)
    }

    /// `∫|∇_D w|⁴` and its gradient with respect to `w`.
    fn l4_functional(&self, w: &[f64], grad: Option<&mut Vec<f64>>) -> f64 {
        let hd = self.hd;
        let mut f = 0.0;
        let mut g = grad;
        if let Some(g) = g.as_deref_mut() {
            g.iter_mut().for_each(|v| *v = 0.0);
        }
        for cell in 0..hd.n_cells() {
            let t = &hd.tables[cell];
            let locals = free_locals(hd, cell);
            for (q, &wq) in t.quadrature.weights.iter().enumerate() {
                let gw = hd.eval_unchecked(w, cell, q).grad;
                let s = tensor::dot(gw, gw);
                f += wq * s * s;
                if let Some(g) = g.as_deref_mut() {
                    for &(i, gi) in &locals {
                        g[gi] += 4.0 * wq * s * tensor::dot(gw, t.at(i, q).1);
                    }
                }
            }
        }
        f
    }

    /// Multistart ascent of `‖∇_D w‖_{0,4} / ‖w‖_D`; the best value found.
    pub fn c_d_l4(&self) -> f64 {
        let n = self.n();
        if n == 0 {
            return 0.0;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(ASCENT_SEED ^ 1);
        let mut best: f64 = 0.0;
        let mut g = vec![0.0; n];
        for _ in 0..ASCENT_STARTS {
            // one smoothing step keeps the start away from mesh-scale noise
            let r: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut w = self.g_solve(&self.gram_v.mul_vec(&r));
            let nw = self.norm_d(&w);
            if nw == 0.0 {
                continue;
            }
            w.iter_mut().for_each(|v| *v /= nw);
            let mut f = self.l4_functional(&w, Some(&mut g));
            let mut step = 0.5;
            for _ in 0..ASCENT_MAX_ITER {
                let gg = self.g_solve(&g);
                let radial = sparse::dot(&w, &g);
                let d: Vec<f64> = gg.iter().zip(&w).map(|(a, b)| a - radial * b).collect();
                let nd = self.norm_d(&d);
                if nd <= 1e-14 {
                    break;
                }
                let mut improved = false;
                for _ in 0..40 {
                    let t = step / nd;
                    let mut cand: Vec<f64> = w.iter().zip(&d).map(|(a, b)| a + t * b).collect();
                    let nc = self.norm_d(&cand);
                    cand.iter_mut().for_each(|v| *v /= nc);
                    let fc = self.l4_functional(&cand, None);
                    if fc > f {
                        let gain = (fc - f) / fc;
                        w = cand;
                        f = self.l4_functional(&w, Some(&mut g));
                        step = (step * 2.0).min(1.0);
                        improved = gain > 1e-13;
                        break;
                    }
                    step *= 0.5;
                }
                if !improved {
                    break;
                }
            }
            best = best.max(math::sqrt(math::sqrt(f)));
        }
        best
    }

    /// Upper bound on the interpolation error of `phi`: the smaller
    /// objective on the line through the canonical interpolant and the
    /// Hessian-Gram best approximation.
    pub fn s_d(&self, phi: &dyn SmoothFunction) -> Result<f64> {
        let hd = self.hd;
        let n = self.n();
        let interp = interpolate_dofs(hd, phi)?;
        let mut rhs = vec![0.0; n];
        let mut pts = Vec::new();
        for cell in 0..hd.n_cells() {
            let t = &hd.tables[cell];
            let locals = free_locals(hd, cell);
            for (q, (&p, &w)) in t.quadrature.points.iter().zip(&t.quadrature.weights).enumerate() {
                let j = phi.jet(p)?;
                let h = j.hess();
                for &(i, gi) in &locals {
                    rhs[gi] += w * h.ddot(&t.at(i, q).2);
                }
                pts.push((cell, q, w, j.value(), j.grad(), h));
            }
        }
        let best = self.g_solve(&rhs);
        let dir: Vec<f64> = best.iter().zip(&interp).map(|(a, b)| a - b).collect();
        let line: Vec<_> = pts
            .iter()
            .map(|&(cell, q, w, v, g, h)| {
                let a = hd.eval_unchecked(&interp, cell, q);
                let d = hd.eval_unchecked(&dir, cell, q);
                (w, a.value - v, tensor::sub(a.grad, g), a.hess - h, d)
            })
            .collect();
        let objective = |t: f64| {
            let (mut e0, mut e1, mut e2) = (0.0, 0.0, 0.0);
            for &(w, v, g, h, d) in &line {
                let dv = v + t * d.value;
                let dg = tensor::add(g, tensor::scale(t, d.grad));
                let dh = h + d.hess * t;
                e0 += w * dv * dv;
                e1 += w * sq(tensor::dot(dg, dg));
                e2 += w * dh.frobenius_norm_sq();
            }
            math::sqrt(e0) + math::sqrt(math::sqrt(e1)) + math::sqrt(e2)
        };
        let (f0, f1) = (objective(0.0), objective(1.0));
        if dir.iter().all(|&v| v == 0.0) {
            return Ok(f0);
        }
        let (_, fmin) = minimise_convex(objective, 0.0, 1.0, 1e-12);
        Ok(fmin.min(f0).min(f1))
    }

    fn tensor_functionals(&self, field: &TestTensorField) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let hd = self.hd;
        let n = self.n();
        let (mut rw, mut rhat, mut rtilde) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for cell in 0..hd.n_cells() {
            let t = &hd.tables[cell];
            let locals = free_locals(hd, cell);
            for (q, (&p, &w)) in t.quadrature.points.iter().zip(&t.quadrature.weights).enumerate() {
                let xi = (field.f)(p);
                let (div, hh) = tensor_derivatives(&xi);
                let m = tensor_value(&xi);
                for &(i, gi) in &locals {
                    let (pi, gr, h) = t.at(i, q);
                    let xh = m.ddot(&h);
                    let dg = tensor::dot(div, gr);
                    rw[gi] += w * (hh * pi - xh);
                    rhat[gi] += w * (dg + pi * hh);
                    rtilde[gi] += w * (xh + dg);
                }
            }
        }
        (rw, rhat, rtilde)
    }

    /// `(W_D(ξ), Ŵ_D(div ξ), W̃_D(ξ))`.
    pub fn tensor_measures(&self, field: &TestTensorField) -> (f64, f64, f64) {
        let (rw, rhat, rtilde) = self.tensor_functionals(field);
        (self.dual_norm(&rw), self.dual_norm(&rhat), self.dual_norm(&rtilde))
    }

    pub fn w_hat_d(&self, field: &TestVectorField) -> f64 {
        let hd = self.hd;
        let mut r = vec![0.0; self.n()];
        for cell in 0..hd.n_cells() {
            let t = &hd.tables[cell];
            let locals = free_locals(hd, cell);
            for (q, (&p, &w)) in t.quadrature.points.iter().zip(&t.quadrature.weights).enumerate() {
                let f = (field.f)(p);
                let v = [f[0].value(), f[1].value()];
                let div = f[0].d(1, 0) + f[1].d(0, 1);
                for &(i, gi) in &locals {
                    let (pi, gr, _) = t.at(i, q);
                    r[gi] += w * (tensor::dot(gr, v) + pi * div);
                }
            }
        }
        self.dual_norm(&r)
    }

    fn h3_norm(&self, f: &TestFunction) -> f64 {
        let mut s = 0.0;
        for t in &self.hd.tables {
            s += t.quadrature.integrate(|p| {
                let j = (f.f)(p);
                let mut a = 0.0;
                for order in 0..=3 {
                    for b in 0..=order {
                        a += sq(j.d(order - b, b));
                    }
                }
                a
            });
        }
        math::sqrt(s)
    }

    fn h1_norm(&self, f: &TestTensorField) -> f64 {
        let mut s = 0.0;
        for t in &self.hd.tables {
            s += t.quadrature.integrate(|p| {
                (f.f)(p).iter().map(|j| sq(j.value()) + sq(j.d(1, 0)) + sq(j.d(0, 1))).sum()
            });
        }
        math::sqrt(s)
    }
}

/// Every measure over the fixed test families of `domain`.
pub fn compute_properties(hd: &HessianDiscretisation, domain: Domain) -> Result<PropertyMeasures> {
    let ctx = PropertyContext::new(hd)?;
    let c_d_l2 = ctx.c_d_l2();
    let c_d_l4 = ctx.c_d_l4();
    let mut m = PropertyMeasures { c_d: c_d_l2.max(c_d_l4), c_d_l2, c_d_l4, ..PropertyMeasures::default() };
    for f in test_functions(domain) {
        let s = ctx.s_d(&f.f)?;
        m.s_d.push(Named { id: f.id, value: s });
        m.alpha_d = m.alpha_d.max(s / ctx.h3_norm(&f));
    }
    for f in test_tensor_fields() {
        let (w, wh, wt) = ctx.tensor_measures(&f);
        m.w_d.push(Named { id: f.id, value: w });
        m.w_hat_div_d.push(Named { id: f.id, value: wh });
        m.w_tilde_d.push(Named { id: f.id, value: wt });
        m.gamma_d = m.gamma_d.max(wt / ctx.h1_norm(&f));
    }
    for f in test_vector_fields() {
        m.w_hat_d.push(Named { id: f.id, value: ctx.w_hat_d(&f) });
    }
    m.stabilisation_defect = stabilisation_defect(hd);
    Ok(m)
}

/// For GR, how far the recovery defect `Q_h∇φ − ∇φ` of each basis function
/// is from having zero mean on each cell, which is what orthogonality of
/// the stabilisation term to piecewise-constant matrices requires:
/// `max |∫_K (Q_h∇φ − ∇φ)| / ∫_K |Q_h∇φ − ∇φ|`. `None` for other methods.
pub fn stabilisation_defect(hd: &HessianDiscretisation) -> Option<f64> {
    if hd.method != crate::discretisation::Method::Gr {
        return None;
    }
    let mesh = &hd.mesh;
    let mut worst: f64 = 0.0;
    for cell in 0..hd.n_cells() {
        let t = &hd.tables[cell];
        let vs = mesh.cells[cell].vertex_ids();
        for (i, gi) in free_locals(hd, cell) {
            let vertex = hd.dof_map.dof_entity[gi];
            let p1 = match vs.iter().position(|&v| v == vertex) {
                Some(k) => {
                    let (a, b, c) = (mesh.point(vs[k]), mesh.point(vs[(k + 1) % 3]), mesh.point(vs[(k + 2) % 3]));
                    let n = tensor::rot90(tensor::sub(c, b));
                    tensor::scale(1.0 / tensor::dot(n, tensor::sub(a, b)), n)
                }
                None => [0.0, 0.0],
            };
            let (mut mean, mut mass) = ([0.0, 0.0], 0.0);
            for (q, &w) in t.quadrature.weights.iter().enumerate() {
                let d = tensor::sub(t.at(i, q).1, p1);
                mean = tensor::add(mean, tensor::scale(w, d));
                mass += w * tensor::norm(d);
            }
            if mass > 1e-14 * mesh.cells[cell].area {
                worst = worst.max(tensor::norm(mean) / mass);
            }
        }
    }
    Some(worst)
}

/// Minimum of a convex function of one variable: downhill bracketing from
/// `a`, `b`, then golden-section search. Returns `(t, f(t))`.
pub fn minimise_convex(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const GOLD: f64 = 1.618_033_988_749_895;
    let (mut x0, mut x1) = (a, b);
    let (mut f0, mut f1) = (f(x0), f(x1));
    if f1 > f0 {
        core::mem::swap(&mut x0, &mut x1);
        core::mem::swap(&mut f0, &mut f1);
    }
    let mut x2 = x1 + GOLD * (x1 - x0);
    let mut f2 = f(x2);
    let mut guard = 0;
    while f2 < f1 && guard < 200 {
        x0 = x1;
        x1 = x2;
        f1 = f2;
        x2 = x1 + GOLD * (x1 - x0);
        f2 = f(x2);
        guard += 1;
    }
    let (mut lo, mut hi) = if x0 < x2 { (x0, x2) } else { (x2, x0) };
    let r = GOLD - 1.0;
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol * (1.0 + c.abs()) {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = f(d);
        }
    }
    let mut best = (x1, f1);
    for cand in [(c, fc), (d, fd)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}
