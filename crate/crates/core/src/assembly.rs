//! Global residual, Jacobian, load and Gram matrices.
//!
//! Unknowns are block vectors: component `c` of free DOF `i` sits at
//! `c * n_dofs + i`. Matrix rows are indexed by the test function and
//! columns by the trial function.

use alloc::vec;
use alloc::vec::Vec;

use crate::discretisation::HessianDiscretisation;
use crate::exec::{CellExecutor, Sequential, CHUNK};
use crate::problems::{ExactSolution, Problem, MAX_COMPONENTS};
use crate::sparse::CsrMatrix;
use crate::tensor::{self, Mat2, Vec2};
use crate::Result;

/// Free local DOFs of `cell`: `(table index, global index)`.
pub fn free_locals(hd: &HessianDiscretisation, cell: usize) -> Vec<(usize, usize)> {
    hd.dof_map.cell(cell).iter().enumerate().filter_map(|(i, s)| s.map(|g| (i, g))).collect()
}

/// Structure of the block matrices: every pair of block DOFs sharing a cell.
pub fn sparsity_pattern(hd: &HessianDiscretisation, k: usize) -> CsrMatrix {
    let n = hd.n_dofs();
    let mut rows = vec![Vec::new(); k * n];
    for cell in 0..hd.n_cells() {
        let locals = free_locals(hd, cell);
        for c in 0..k {
            for &(_, gi) in &locals {
                let row = &mut rows[c * n + gi];
                for d in 0..k {
                    row.extend(locals.iter().map(|&(_, gj)| d * n + gj));
                }
            }
        }
    }
    for r in &mut rows {
        r.sort_unstable();
        r.dedup();
    }
    CsrMatrix::from_pattern(k * n, &rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MatrixPart {
    None,
    Bilinear,
    Jacobian,
}

/// Contributions of one cell.
#[derive(Debug)]
struct Local {
    dofs: Vec<usize>,
    /// `A(HΨ, H·)`
    a_vec: Vec<f64>,
    /// `B(HΨ, ∇Ψ, ∇·)`
    b_vec: Vec<f64>,
    /// Row-major, `dofs.len()` square.
    mat: Vec<f64>,
}

/// Vectors produced by a fused sweep at a given `Ψ`.
#[derive(Clone, Debug)]
pub struct Linearisation {
    /// `A(HΨ, H·)`
    pub a_vec: Vec<f64>,
    /// `B(HΨ, ∇Ψ, ∇·)`
    pub b_vec: Vec<f64>,
    /// `J(Ψ)`, when requested.
    pub jacobian: Option<CsrMatrix>,
}

impl Linearisation {
    pub fn residual(&self, load: &[f64]) -> Vec<f64> {
        self.a_vec.iter().zip(&self.b_vec).zip(load).map(|((a, b), l)| a + b - l).collect()
    }
}

/// Assembles the scheme of `problem` on `hd`, reusing one sparsity pattern.
#[derive(Debug)]
pub struct Assembler<'a, E: CellExecutor = Sequential> {
    pub hd: &'a HessianDiscretisation,
    pub problem: Problem,
    pattern: CsrMatrix,
    exec: E,
}

impl<'a> Assembler<'a, Sequential> {
    pub fn new(hd: &'a HessianDiscretisation, problem: Problem) -> Self {
        Self::with_executor(hd, problem, Sequential)
    }
}

impl<'a, E: CellExecutor> Assembler<'a, E> {
    pub fn with_executor(hd: &'a HessianDiscretisation, problem: Problem, exec: E) -> Self {
        let pattern = sparsity_pattern(hd, problem.n_components());
        Assembler { hd, problem, pattern, exec }
    }

    pub fn n_components(&self) -> usize {
        self.problem.n_components()
    }

    /// Length of block vectors.
    pub fn n(&self) -> usize {
        self.n_components() * self.hd.n_dofs()
    }

    /// Union of the structures of every matrix this assembler produces.
    pub fn pattern(&self) -> &CsrMatrix {
        &self.pattern
    }

    pub fn executor(&self) -> &E {
        &self.exec
    }

    fn local(&self, cell: usize, psi: Option<&[f64]>, part: MatrixPart) -> Local {
        let hd = self.hd;
        let k = self.n_components();
        let n = hd.n_dofs();
        let t = &hd.tables[cell];
        let locals = free_locals(hd, cell);
        let nl = locals.len();
        let m = k * nl;
        let mut dofs = Vec::with_capacity(m);
        for c in 0..k {
            dofs.extend(locals.iter().map(|&(_, g)| c * n + g));
        }
        let mut a_vec = vec![0.0; if psi.is_some() { m } else { 0 }];
        let mut b_vec = a_vec.clone();
        let mut mat = vec![0.0; if part == MatrixPart::None { 0 } else { m * m }];
        let nq = t.n_points();
        let mut coef = vec![0.0; m];
        if let Some(psi) = psi {
            for (slot, &d) in coef.iter_mut().zip(&dofs) {
                *slot = psi[d];
            }
        }
        let mut trial_b = vec![[[0.0; 2]; MAX_COMPONENTS]; m];
        for q in 0..nq {
            let w = t.quadrature.weights[q];
            let mut hs = [Mat2::ZERO; MAX_COMPONENTS];
            let mut gs = [[0.0; 2]; MAX_COMPONENTS];
            if psi.is_some() {
                for c in 0..k {
                    for (a, &(ti, _)) in locals.iter().enumerate() {
                        let v = coef[c * nl + a];
                        if v != 0.0 {
                            let (_, g, h) = t.at(ti, q);
                            hs[c] += h * v;
                            gs[c] = tensor::add(gs[c], tensor::scale(v, g));
                        }
                    }
                }
                let mut bt = [[0.0; 2]; MAX_COMPONENTS];
                self.problem.b_test(&hs, &gs, &mut bt);
                for c in 0..k {
                    let wc = w * self.problem.weight(c);
                    for (a, &(ti, _)) in locals.iter().enumerate() {
                        let (_, g, h) = t.at(ti, q);
                        a_vec[c * nl + a] += wc * hs[c].ddot(&h);
                        b_vec[c * nl + a] += w * tensor::dot(bt[c], g);
                    }
                }
            }
            if part == MatrixPart::None {
                continue;
            }
            for c in 0..k {
                let wc = w * self.problem.weight(c);
                for (a, &(ta, _)) in locals.iter().enumerate() {
                    let ha = t.at(ta, q).2;
                    let row = (c * nl + a) * m + c * nl;
                    for (b, &(tb, _)) in locals.iter().enumerate() {
                        mat[row + b] += wc * ha.ddot(&t.at(tb, q).2);
                    }
                }
            }
            if part == MatrixPart::Jacobian && psi.is_some() {
                // B(HΨ, ∇Θ, ·) + B(HΘ, ∇Ψ, ·) for each trial basis function Θ
                for d in 0..k {
                    for (b, &(tb, _)) in locals.iter().enumerate() {
                        let (_, g, h) = t.at(tb, q);
                        let mut xi = [[0.0; 2]; MAX_COMPONENTS];
                        xi[d] = g;
                        let mut lam = [Mat2::ZERO; MAX_COMPONENTS];
                        lam[d] = h;
                        let mut t1 = [[0.0; 2]; MAX_COMPONENTS];
                        let mut t2 = [[0.0; 2]; MAX_COMPONENTS];
                        self.problem.b_test(&hs, &xi, &mut t1);
                        self.problem.b_test(&lam, &gs, &mut t2);
                        for c in 0..k {
                            trial_b[d * nl + b][c] = tensor::add(t1[c], t2[c]);
                        }
                    }
                }
                for c in 0..k {
                    for (a, &(ta, _)) in locals.iter().enumerate() {
                        let ga = t.at(ta, q).1;
                        let row = (c * nl + a) * m;
                        for (col, tb) in trial_b.iter().enumerate() {
                            mat[row + col] += w * tensor::dot(tb[c], ga);
                        }
                    }
                }
            }
        }
        Local { dofs, a_vec, b_vec, mat }
    }

    fn sweep(&self, psi: Option<&[f64]>, part: MatrixPart) -> (Vec<f64>, Vec<f64>, Option<CsrMatrix>) {
        let n = self.n();
        let mut a_vec = vec![0.0; n];
        let mut b_vec = vec![0.0; n];
        let mut mat = if part == MatrixPart::None { None } else { Some(self.pattern.clone()) };
        let n_cells = self.hd.n_cells();
        let mut start = 0;
        while start < n_cells {
            let end = (start + CHUNK).min(n_cells);
            let locals = self.exec.map_range(start, end, |c| self.local(c, psi, part));
            for l in locals {
                if psi.is_some() {
                    for (i, &d) in l.dofs.iter().enumerate() {
                        a_vec[d] += l.a_vec[i];
                        b_vec[d] += l.b_vec[i];
                    }
                }
                if let Some(mat) = mat.as_mut() {
                    let m = l.dofs.len();
                    for (i, &r) in l.dofs.iter().enumerate() {
                        for (j, &c) in l.dofs.iter().enumerate() {
                            let v = l.mat[i * m + j];
                            if v != 0.0 {
                                mat.add(r, c, v);
                            }
                        }
                    }
                }
            }
            start = end;
        }
        if let Some(m) = mat.as_mut() {
            m.drop_zeros();
        }
        (a_vec, b_vec, mat)
    }

    /// The matrix of `A(H·, H·)`.
    pub fn bilinear(&self) -> CsrMatrix {
        self.sweep(None, MatrixPart::Bilinear).2.expect("matrix requested")
    }

    /// `A(HΨ, H·)`, `B(HΨ, ∇Ψ, ∇·)` and optionally `J(Ψ)` in one sweep.
    pub fn linearise(&self, psi: &[f64], with_jacobian: bool) -> Linearisation {
        let part = if with_jacobian { MatrixPart::Jacobian } else { MatrixPart::None };
        let (a_vec, b_vec, jacobian) = self.sweep(Some(psi), part);
        Linearisation { a_vec, b_vec, jacobian }
    }

    /// `R(Ψ) = A(HΨ, H·) + B(HΨ, ∇Ψ, ∇·) − ℒ(Π·)`.
    pub fn residual(&self, psi: &[f64], load: &[f64]) -> Vec<f64> {
        self.linearise(psi, false).residual(load)
    }

    /// `J(Ψ)[Θ, Φ] = A(HΘ, HΦ) + B(HΨ, ∇Θ, ∇Φ) + B(HΘ, ∇Ψ, ∇Φ)`.
    pub fn jacobian(&self, psi: &[f64]) -> CsrMatrix {
        self.linearise(psi, true).jacobian.expect("matrix requested")
    }

    /// `ℒ(Π·)` for the loads of `exact`.
    pub fn load(&self, exact: &ExactSolution) -> Result<Vec<f64>> {
        let hd = self.hd;
        let k = self.n_components();
        let n = hd.n_dofs();
        let mut out = vec![0.0; self.n()];
        let n_cells = hd.n_cells();
        let mut start = 0;
        while start < n_cells {
            let end = (start + CHUNK).min(n_cells);
            let parts = self.exec.map_range(start, end, |cell| -> Result<Vec<(usize, f64)>> {
                let t = &hd.tables[cell];
                let locals = free_locals(hd, cell);
                let mut acc = vec![0.0; k * locals.len()];
                for q in 0..t.n_points() {
                    let f = exact.load(t.quadrature.points[q])?;
                    let w = t.quadrature.weights[q];
                    for c in 0..k {
                        let wf = w * self.problem.weight(c) * f[c];
                        for (a, &(ti, _)) in locals.iter().enumerate() {
                            acc[c * locals.len() + a] += wf * t.at(ti, q).0;
                        }
                    }
                }
                let mut entries = Vec::with_capacity(acc.len());
                for c in 0..k {
                    for (a, &(_, g)) in locals.iter().enumerate() {
                        entries.push((c * n + g, acc[c * locals.len() + a]));
                    }
                }
                Ok(entries)
            });
            for p in parts {
                for (d, v) in p? {
                    out[d] += v;
                }
            }
            start = end;
        }
        Ok(out)
    }

    /// `B(HΛ, ∇Ξ, ∇Θ)` for block vectors `lam`, `xi`, `theta`.
    pub fn trilinear(&self, lam: &[f64], xi: &[f64], theta: &[f64]) -> f64 {
        let hd = self.hd;
        let k = self.n_components();
        let n = hd.n_dofs();
        let mut total = 0.0;
        for cell in 0..hd.n_cells() {
            let t = &hd.tables[cell];
            let locals = free_locals(hd, cell);
            for q in 0..t.n_points() {
                let mut hl = [Mat2::ZERO; MAX_COMPONENTS];
                let mut gx = [[0.0; 2]; MAX_COMPONENTS];
                let mut gt = [[0.0; 2]; MAX_COMPONENTS];
                for c in 0..k {
                    for &(ti, g) in &locals {
                        let (_, gr, h) = t.at(ti, q);
                        hl[c] += h * lam[c * n + g];
                        gx[c] = tensor::add(gx[c], tensor::scale(xi[c * n + g], gr));
                        gt[c] = tensor::add(gt[c], tensor::scale(theta[c * n + g], gr));
                    }
                }
                total += t.quadrature.weights[q] * self.problem.b_kernel(&hl, &gx, &gt);
            }
        }
        total
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GramKind {
    /// `∫ Π_D u Π_D v`
    Value,
    /// `∫ ∇_D u · ∇_D v`
    Gradient,
    /// `∫ H_D u : H_D v`
    Hessian,
}

/// Scalar Gram matrix over the free DOFs.
pub fn gram_matrix(hd: &HessianDiscretisation, kind: GramKind) -> CsrMatrix {
    let mut m = sparsity_pattern(hd, 1);
    for cell in 0..hd.n_cells() {
        let t = &hd.tables[cell];
        let locals = free_locals(hd, cell);
        for q in 0..t.n_points() {
            let w = t.quadrature.weights[q];
            for &(ta, ga) in &locals {
                let (pa, gra, ha) = t.at(ta, q);
                for &(tb, gb) in &locals {
                    let (pb, grb, hb) = t.at(tb, q);
                    let v = match kind {
                        GramKind::Value => pa * pb,
                        GramKind::Gradient => tensor::dot(gra, grb),
                        GramKind::Hessian => ha.ddot(&hb),
                    };
                    m.add(ga, gb, w * v);
                }
            }
        }
    }
    m.drop_zeros();
    m
}

/// `‖v‖_D = (Σ_c ‖H_D v_c‖²)^{1/2}` for a block vector with `k` components.
pub fn discrete_norm(hd: &HessianDiscretisation, k: usize, v: &[f64]) -> f64 {
    let n = hd.n_dofs();
    let mut s = 0.0;
    for c in 0..k {
        let vc = &v[c * n..(c + 1) * n];
        for cell in 0..hd.n_cells() {
            let t = &hd.tables[cell];
            for q in 0..t.n_points() {
                s += t.quadrature.weights[q] * hd.eval_unchecked(vc, cell, q).hess.frobenius_norm_sq();
            }
        }
    }
    crate::math::sqrt(s)
}

/// Values of `(Π_D v, ∇_D v, H_D v)` at every quadrature point of `cell`.
pub fn cell_values(hd: &HessianDiscretisation, v: &[f64], cell: usize) -> Vec<(f64, Vec2, Mat2)> {
    (0..hd.tables[cell].n_points())
        .map(|q| {
            let p = hd.eval_unchecked(v, cell, q);
            (p.value, p.grad, p.hess)
        })
        .collect()
}
