//! Sparse linear solvers and the Newton driver.
//!
//! The direct solver is a left-looking (Gilbert–Peierls) LU factorisation
//! with threshold partial pivoting, applied after a nested-dissection
//! ordering of the columns. The iterative fallback is restarted GMRES
//! preconditioned by ILU(0).

use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::{discrete_norm, Assembler};
use crate::discretisation::HessianDiscretisation;
use crate::exec::CellExecutor;
use crate::math;
use crate::problems::{ExactSolution, Problem};
use crate::sparse::{self, CsrMatrix};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Ordering

const LEAF_SIZE: usize = 48;

/// Nested-dissection ordering of the (structurally symmetric) graph of `a`.
/// Returns `order` with `order[k]` the original index eliminated `k`-th.
pub fn nested_dissection(a: &CsrMatrix) -> Vec<usize> {
    let n = a.n_rows;
    let mut label = vec![0usize; n];
    let mut next_label = 1;
    let mut order = Vec::with_capacity(n);
    let mut dist = vec![usize::MAX; n];
    // explicit stack of (nodes, label) to dissect; separators are emitted
    // after both halves, so the stack holds deferred separator blocks too
    enum Task {
        Split(Vec<usize>),
        Emit(Vec<usize>),
    }
    let mut stack = vec![Task::Split((0..n).collect())];
    while let Some(task) = stack.pop() {
        let nodes = match task {
            Task::Emit(sep) => {
                order.extend(sep);
                continue;
            }
            Task::Split(nodes) => nodes,
        };
        if nodes.len() <= LEAF_SIZE {
            order.extend(nodes);
            continue;
        }
        let lab = next_label;
        next_label += 1;
        for &v in &nodes {
            label[v] = lab;
        }
        let bfs = |root: usize, dist: &mut Vec<usize>, label: &Vec<usize>| -> Vec<usize> {
            let mut seen = vec![root];
            dist[root] = 0;
            let mut head = 0;
            while head < seen.len() {
                let v = seen[head];
                head += 1;
                for &w in a.row(v).0 {
                    if label[w] == lab && dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        seen.push(w);
                    }
                }
            }
            seen
        };
        let reset = |seen: &[usize], dist: &mut Vec<usize>| seen.iter().for_each(|&v| dist[v] = usize::MAX);

        // pseudo-peripheral root
        let mut root = nodes[0];
        let mut seen = bfs(root, &mut dist, &label);
        let mut depth = dist[*seen.last().unwrap()];
        for _ in 0..4 {
            let far = *seen.last().unwrap();
            reset(&seen, &mut dist);
            let s2 = bfs(far, &mut dist, &label);
            let d2 = dist[*s2.last().unwrap()];
            if d2 <= depth {
                reset(&s2, &mut dist);
                seen = bfs(root, &mut dist, &label);
                break;
            }
            root = far;
            seen = s2;
            depth = d2;
        }
        if seen.len() < nodes.len() {
            // disconnected: dissect components independently
            let reached: Vec<usize> = seen.clone();
            reset(&seen, &mut dist);
            for &v in &reached {
                label[v] = usize::MAX;
            }
            let rest: Vec<usize> = nodes.iter().copied().filter(|&v| label[v] == lab).collect();
            stack.push(Task::Split(rest));
            stack.push(Task::Split(reached));
            continue;
        }
        let depth = dist[*seen.last().unwrap()];
        if depth < 2 {
            reset(&seen, &mut dist);
            order.extend(seen);
            continue;
        }
        let mut counts = vec![0usize; depth + 1];
        for &v in &seen {
            counts[dist[v]] += 1;
        }
        let half = nodes.len() / 2;
        let mut acc = 0;
        let mut mid = 1;
        for (l, &c) in counts.iter().enumerate() {
            acc += c;
            if acc >= half {
                mid = l;
                break;
            }
        }
        let mid = mid.clamp(1, depth - 1);
        let (mut lo, mut hi, mut sep) = (Vec::new(), Vec::new(), Vec::new());
        for &v in &seen {
            match dist[v].cmp(&mid) {
                core::cmp::Ordering::Less => lo.push(v),
                core::cmp::Ordering::Equal => sep.push(v),
                core::cmp::Ordering::Greater => hi.push(v),
            }
        }
        reset(&seen, &mut dist);
        stack.push(Task::Emit(sep));
        stack.push(Task::Split(hi));
        stack.push(Task::Split(lo));
    }
    order
}

// ---------------------------------------------------------------------------
// Sparse LU

/// Pivot threshold: the diagonal is kept if it is at least this fraction of
/// the largest candidate in its column.
pub const PIVOT_THRESHOLD: f64 = 0.1;

const NONE: usize = usize::MAX;

/// `A(:, q) = Pᵀ L U` with unit lower-triangular `L`.
#[derive(Clone, Debug)]
pub struct SparseLu {
    n: usize,
    l_ptr: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<f64>,
    u_ptr: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<f64>,
    /// Row `i` of `A` is pivot row `pinv[i]`.
    pinv: Vec<usize>,
    /// Column `k` of the factor is column `q[k]` of `A`.
    q: Vec<usize>,
}

impl SparseLu {
    pub fn factor(a: &CsrMatrix, order: &[usize]) -> Result<SparseLu> {
        let n = a.n_rows;
        if a.n_cols != n || order.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: if a.n_cols != n { a.n_cols } else { order.len() } });
        }
        let cols = a.transpose();
        // candidates are compared after symmetric diagonal scaling, so DOFs
        // of different physical dimension do not defeat the diagonal
        let row_scale: Vec<f64> = (0..n)
            .map(|i| {
                let d = a.get(i, i).abs();
                let m = if d > 0.0 { math::sqrt(d) } else { a.row(i).1.iter().fold(0.0_f64, |m, v| m.max(v.abs())) };
                if m > 0.0 { 1.0 / m } else { 1.0 }
            })
            .collect();
        let mut lu = SparseLu {
            n,
            l_ptr: Vec::with_capacity(n + 1),
            l_idx: Vec::with_capacity(4 * a.nnz()),
            l_val: Vec::with_capacity(4 * a.nnz()),
            u_ptr: Vec::with_capacity(n + 1),
            u_idx: Vec::with_capacity(4 * a.nnz()),
            u_val: Vec::with_capacity(4 * a.nnz()),
            pinv: vec![NONE; n],
            q: order.to_vec(),
        };
        let mut x = vec![0.0; n];
        let mut mark = vec![NONE; n];
        let mut reach = Vec::with_capacity(n);
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for k in 0..n {
            lu.l_ptr.push(lu.l_idx.len());
            lu.u_ptr.push(lu.u_idx.len());
            let col = order[k];
            let (rows, vals) = cols.row(col);

            // reach of A(:, col) in the graph of L, in topological order
            reach.clear();
            for &r in rows {
                if mark[r] == k {
                    continue;
                }
                mark[r] = k;
                stack.push((r, 0));
                while let Some(&mut (j, ref mut pos)) = stack.last_mut() {
                    let jn = lu.pinv[j];
                    let (start, end) = if jn == NONE { (0, 0) } else { (lu.l_ptr[jn] + 1, lu.l_end(jn)) };
                    let mut descended = false;
                    while start + *pos < end {
                        let i = lu.l_idx[start + *pos];
                        *pos += 1;
                        if mark[i] != k {
                            mark[i] = k;
                            stack.push((i, 0));
                            descended = true;
                            break;
                        }
                    }
                    if !descended {
                        reach.push(j);
                        stack.pop();
                    }
                }
            }
            let col_scale = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            for (&r, &v) in rows.iter().zip(vals) {
                x[r] = v;
            }
            for &j in reach.iter().rev() {
                let jn = lu.pinv[j];
                if jn == NONE {
                    continue;
                }
                let xj = x[j];
                if xj == 0.0 {
                    continue;
                }
                for p in lu.l_ptr[jn] + 1..lu.l_end(jn) {
                    x[lu.l_idx[p]] -= lu.l_val[p] * xj;
                }
            }

            let mut ipiv = NONE;
            let (mut best, mut best_raw) = (-1.0, 0.0_f64);
            for &i in reach.iter().rev() {
                if lu.pinv[i] == NONE {
                    let t = x[i].abs() * row_scale[i];
                    best_raw = best_raw.max(x[i].abs());
                    if t > best {
                        best = t;
                        ipiv = i;
                    }
                } else {
                    lu.u_idx.push(lu.pinv[i]);
                    lu.u_val.push(x[i]);
                }
            }
            if ipiv == NONE || best_raw <= 1e-14 * col_scale {
                return Err(Error::SingularMatrix { pivot: k });
            }
            if lu.pinv[col] == NONE && x[col].abs() * row_scale[col] >= PIVOT_THRESHOLD * best {
                ipiv = col;
            }
            let pivot = x[ipiv];
            lu.u_idx.push(k);
            lu.u_val.push(pivot);
            lu.pinv[ipiv] = k;
            lu.l_idx.push(ipiv);
            lu.l_val.push(1.0);
            for &i in reach.iter().rev() {
                if lu.pinv[i] == NONE {
                    let v = x[i] / pivot;
                    if v != 0.0 {
                        lu.l_idx.push(i);
                        lu.l_val.push(v);
                    }
                }
                x[i] = 0.0;
            }
        }
        lu.l_ptr.push(lu.l_idx.len());
        lu.u_ptr.push(lu.u_idx.len());
        for r in lu.l_idx.iter_mut() {
            *r = lu.pinv[*r];
        }
        Ok(lu)
    }

    #[inline]
    fn l_end(&self, j: usize) -> usize {
        // columns are appended in order; the current column has no end yet
        if j + 1 < self.l_ptr.len() {
            self.l_ptr[j + 1]
        } else {
            self.l_idx.len()
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Stored entries of `L` and `U` together.
    pub fn fill(&self) -> usize {
        self.l_idx.len() + self.u_idx.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[self.pinv[i]] = b[i];
        }
        for k in 0..n {
            let yk = y[k];
            if yk != 0.0 {
                for p in self.l_ptr[k] + 1..self.l_ptr[k + 1] {
                    y[self.l_idx[p]] -= self.l_val[p] * yk;
                }
            }
        }
        for k in (0..n).rev() {
            let last = self.u_ptr[k + 1] - 1;
            y[k] /= self.u_val[last];
            let yk = y[k];
            if yk != 0.0 {
                for p in self.u_ptr[k]..last {
                    y[self.u_idx[p]] -= self.u_val[p] * yk;
                }
            }
        }
        let mut x = vec![0.0; n];
        for k in 0..n {
            x[self.q[k]] = y[k];
        }
        x
    }
}

// ---------------------------------------------------------------------------
// Iterative fallback

/// Incomplete LU with the sparsity of the matrix itself.
#[derive(Clone, Debug)]
pub struct Ilu0 {
    m: CsrMatrix,
    diag: Vec<usize>,
}

impl Ilu0 {
    pub fn new(a: &CsrMatrix) -> Result<Ilu0> {
        let mut m = a.clone();
        let n = m.n_rows;
        let mut diag = vec![NONE; n];
        for (i, d) in diag.iter_mut().enumerate() {
            let (c, _) = m.row(i);
            *d = c.binary_search(&i).map(|k| m.row_ptr[i] + k).map_err(|_| Error::SingularMatrix { pivot: i })?;
        }
        for i in 1..n {
            for kp in m.row_ptr[i]..diag[i] {
                let k = m.col_idx[kp];
                let dk = m.values[diag[k]];
                if dk == 0.0 {
                    return Err(Error::SingularMatrix { pivot: k });
                }
                let lik = m.values[kp] / dk;
                m.values[kp] = lik;
                // row_i -= lik * row_k on the existing pattern
                let (mut p, pend) = (kp + 1, m.row_ptr[i + 1]);
                for q in diag[k] + 1..m.row_ptr[k + 1] {
                    let j = m.col_idx[q];
                    while p < pend && m.col_idx[p] < j {
                        p += 1;
                    }
                    if p < pend && m.col_idx[p] == j {
                        m.values[p] -= lik * m.values[q];
                    }
                }
            }
        }
        Ok(Ilu0 { m, diag })
    }

    pub fn apply(&self, b: &[f64]) -> Vec<f64> {
        let n = self.m.n_rows;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for p in self.m.row_ptr[i]..self.diag[i] {
                s -= self.m.values[p] * y[self.m.col_idx[p]];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for p in self.diag[i] + 1..self.m.row_ptr[i + 1] {
                s -= self.m.values[p] * y[self.m.col_idx[p]];
            }
            y[i] = s / self.m.values[self.diag[i]];
        }
        y
    }
}

pub const GMRES_RESTART: usize = 60;
pub const GMRES_MAX_ITER: usize = 6000;

/// Right-preconditioned restarted GMRES; stops when `‖b − Ax‖₂ ≤ tol ‖b‖₂`.
pub fn gmres(a: &CsrMatrix, b: &[f64], precond: &Ilu0, tol: f64) -> Result<Vec<f64>> {
    let n = a.n_rows;
    let m = GMRES_RESTART;
    let bnorm = sparse::norm2(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut iters = 0;
    let mut rel = 1.0;
    while iters < GMRES_MAX_ITER {
        let ax = a.mul_vec(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = sparse::norm2(&r);
        rel = beta / bnorm;
        if rel <= tol {
            return Ok(x);
        }
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|ri| ri / beta).collect()];
        let mut h = vec![vec![0.0; m]; m + 1];
        let (mut cs, mut sn) = (vec![0.0; m], vec![0.0; m]);
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut used = 0;
        for j in 0..m {
            iters += 1;
            let z = precond.apply(&v[j]);
            let mut w = a.mul_vec(&z);
            for (i, vi) in v.iter().enumerate() {
                h[i][j] = sparse::dot(&w, vi);
                w.iter_mut().zip(vi).for_each(|(wk, vk)| *wk -= h[i][j] * vk);
            }
            h[j + 1][j] = sparse::norm2(&w);
            for i in 0..j {
                let t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            let d = math::hypot(h[j][j], h[j + 1][j]);
            cs[j] = h[j][j] / d;
            sn[j] = h[j + 1][j] / d;
            h[j][j] = d;
            h[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];
            used = j + 1;
            if g[j + 1].abs() / bnorm <= tol * 0.5 || iters >= GMRES_MAX_ITER {
                break;
            }
            let wn = sparse::norm2(&w);
            if wn == 0.0 {
                break;
            }
            v.push(w.iter().map(|wk| wk / wn).collect());
        }
        let mut yv = vec![0.0; used];
        for i in (0..used).rev() {
            let s: f64 = (i + 1..used).map(|k| h[i][k] * yv[k]).sum();
            yv[i] = (g[i] - s) / h[i][i];
        }
        let mut dx = vec![0.0; n];
        for (i, yi) in yv.iter().enumerate() {
            dx.iter_mut().zip(&v[i]).for_each(|(d, vk)| *d += yi * vk);
        }
        let dz = precond.apply(&dx);
        x.iter_mut().zip(&dz).for_each(|(xi, di)| *xi += di);
    }
    Err(Error::IterativeSolverStalled { iterations: iters, residual: rel })
}

// ---------------------------------------------------------------------------
// Linear solve with the residual target

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LinearSolver {
    #[default]
    Direct,
    Iterative,
}

/// Whether `x` meets `‖Ax − b‖∞ ≤ 1e−10 (‖A‖∞‖x‖∞ + ‖b‖∞)`.
pub fn meets_residual_target(a: &CsrMatrix, x: &[f64], b: &[f64]) -> bool {
    residual_ratio(a, x, b) <= 1e-10
}

fn residual_ratio(a: &CsrMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    let r = ax.iter().zip(b).fold(0.0_f64, |m, (p, q)| m.max((p - q).abs()));
    let scale = a.norm_inf() * sparse::norm_inf(x) + sparse::norm_inf(b);
    if scale == 0.0 {
        r
    } else {
        r / scale
    }
}

/// Solves `a x = b` with the given column ordering (direct) or without one
/// (iterative), refining until the residual target is met.
pub fn solve_with_order(a: &CsrMatrix, b: &[f64], order: &[usize], method: LinearSolver) -> Result<Vec<f64>> {
    match method {
        LinearSolver::Direct => {
            let lu = SparseLu::factor(a, order)?;
            let mut x = lu.solve(b);
            for _ in 0..3 {
                if meets_residual_target(a, &x, b) {
                    break;
                }
                let ax = a.mul_vec(&x);
                let r: Vec<f64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
                let dx = lu.solve(&r);
                x.iter_mut().zip(&dx).for_each(|(xi, di)| *xi += di);
            }
            Ok(x)
        }
        LinearSolver::Iterative => {
            let ilu = Ilu0::new(a)?;
            let mut tol = 1e-12;
            loop {
                let x = gmres(a, b, &ilu, tol)?;
                if meets_residual_target(a, &x, b) || tol < 1e-15 {
                    return Ok(x);
                }
                tol *= 0.1;
            }
        }
    }
}

/// Solves `a x = b`, ordering `a` by nested dissection for the direct method.
pub fn solve_linear(a: &CsrMatrix, b: &[f64], method: LinearSolver) -> Result<Vec<f64>> {
    let order = match method {
        LinearSolver::Direct => nested_dissection(a),
        LinearSolver::Iterative => Vec::new(),
    };
    solve_with_order(a, b, &order, method)
}

// ---------------------------------------------------------------------------
// Newton

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonConfig {
    /// Stop once `‖Ψʲ − Ψʲ⁻¹‖_D` is at most this.
    pub tol_increment: f64,
    pub max_iter: usize,
    pub linear_solver: LinearSolver,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig { tol_increment: 1e-9, max_iter: 20, linear_solver: LinearSolver::Direct }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_increment > 0.0) {
            return Err(Error::InvalidConfig(alloc::format!("newton tolerance must be positive, got {}", self.tol_increment)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("newton max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct NewtonReport {
    pub iterations: usize,
    /// `‖Ψʲ − Ψʲ⁻¹‖_D` for `j = 1, …, iterations`.
    pub increment_history: Vec<f64>,
    pub converged: bool,
    /// `‖Ψ‖_D` of the returned iterate.
    pub solution_norm: f64,
}

/// Newton's method from the solution of the bilinear part: each iterate
/// solves `J(Ψʲ⁻¹) Ψʲ = ℒ + B(HΨʲ⁻¹, ∇Ψʲ⁻¹, ∇·)`.
pub fn newton<E: CellExecutor>(asm: &Assembler<'_, E>, load: &[f64], cfg: &NewtonConfig) -> Result<(Vec<f64>, NewtonReport)> {
    cfg.validate()?;
    let k = asm.n_components();
    let order = match cfg.linear_solver {
        LinearSolver::Direct => nested_dissection(asm.pattern()),
        LinearSolver::Iterative => Vec::new(),
    };
    let mut psi = if sparse::norm_inf(load) == 0.0 {
        vec![0.0; asm.n()]
    } else {
        solve_with_order(&asm.bilinear(), load, &order, cfg.linear_solver)?
    };
    let mut report = NewtonReport::default();
    for _ in 0..cfg.max_iter {
        let lin = asm.linearise(&psi, true);
        let rhs: Vec<f64> = load.iter().zip(&lin.b_vec).map(|(l, b)| l + b).collect();
        let jac = lin.jacobian.expect("matrix requested");
        let next = if sparse::norm_inf(&rhs) == 0.0 {
            vec![0.0; asm.n()]
        } else {
            solve_with_order(&jac, &rhs, &order, cfg.linear_solver)?
        };
        let diff: Vec<f64> = next.iter().zip(&psi).map(|(a, b)| a - b).collect();
        let delta = discrete_norm(asm.hd, k, &diff);
        psi = next;
        report.iterations += 1;
        report.increment_history.push(delta);
        if delta <= cfg.tol_increment {
            report.converged = true;
            break;
        }
    }
    report.solution_norm = discrete_norm(asm.hd, k, &psi);
    Ok((psi, report))
}

/// Assembles the load of `exact` and runs [`newton`].
pub fn newton_solve(
    hd: &HessianDiscretisation,
    problem: Problem,
    exact: &ExactSolution,
    cfg: &NewtonConfig,
) -> Result<(Vec<f64>, NewtonReport)> {
    let asm = Assembler::new(hd, problem);
    let load = asm.load(exact)?;
    newton(&asm, &load, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretisation::{build, Method};
    use crate::mesh::{build_mesh, Domain};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_solve() {
        let i = CsrMatrix::identity(5);
        let b = [1.0, -2.0, 3.0, 0.5, 7.0];
        for m in [LinearSolver::Direct, LinearSolver::Iterative] {
            let x = solve_linear(&i, &b, m).unwrap();
            assert!(x.iter().zip(&b).all(|(p, q)| (p - q).abs() <= 1e-15 * q.abs()), "{m:?}");
        }
    }

    #[test]
    fn ordering_is_a_permutation() {
        let hd = build(Method::Morley, &build_mesh(Domain::LShape, crate::mesh::CellKind::Triangle, 3)).unwrap();
        let p = crate::assembly::sparsity_pattern(&hd, 2);
        let mut order = nested_dissection(&p);
        assert_eq!(order.len(), p.n_rows);
        order.sort_unstable();
        assert!(order.iter().enumerate().all(|(i, &v)| i == v));
    }

    #[test]
    fn singular_matrix_reports_pivot() {
        let a = CsrMatrix::from_triplets(3, 3, &[(0, 0, 1.0), (1, 1, 1.0), (1, 2, 1.0), (2, 1, 2.0), (2, 2, 2.0)]);
        assert_eq!(solve_linear(&a, &[1.0, 1.0, 1.0], LinearSolver::Direct), Err(Error::SingularMatrix { pivot: 2 }));
    }

    #[test]
    fn bilinear_system_with_constructed_solution() {
        let hd = build(Method::Morley, &build_mesh(Domain::Square, crate::mesh::CellKind::Triangle, 3)).unwrap();
        let a = Assembler::new(&hd, Problem::NavierStokes).bilinear();
        let ones = vec![1.0; a.n_rows];
        let b = a.mul_vec(&ones);
        for m in [LinearSolver::Direct, LinearSolver::Iterative] {
            let x = solve_linear(&a, &b, m).unwrap();
            assert!(x.iter().all(|v| (v - 1.0).abs() < 1e-9), "{m:?}");
            assert!(meets_residual_target(&a, &x, &b));
        }
    }

    #[test]
    fn nonsymmetric_pivoting_case() {
        // zero diagonal forces an off-diagonal pivot
        let a = CsrMatrix::from_triplets(3, 3, &[(0, 1, 2.0), (1, 0, 1.0), (1, 2, 1.0), (2, 2, 3.0), (2, 0, 1.0)]);
        let x0 = [1.0, 2.0, 3.0];
        let b = a.mul_vec(&x0);
        let x = solve_linear(&a, &b, LinearSolver::Direct).unwrap();
        for (p, q) in x.iter().zip(x0) {
            assert!((p - q).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_load_converges_in_one_iteration() {
        let hd = build(Method::Morley, &build_mesh(Domain::Square, crate::mesh::CellKind::Triangle, 2)).unwrap();
        let exact = ExactSolution::zero(Problem::NavierStokes, Domain::Square);
        let (psi, rep) = newton_solve(&hd, Problem::NavierStokes, &exact, &NewtonConfig::default()).unwrap();
        assert!(psi.iter().all(|&v| v == 0.0));
        assert_eq!(rep.iterations, 1);
        assert_eq!(rep.increment_history, vec![0.0]);
        assert!(rep.converged);
    }

    #[test]
    fn newton_fixed_point_solves_the_scheme() {
        let hd = build(Method::Gr, &build_mesh(Domain::Square, crate::mesh::CellKind::Triangle, 3)).unwrap();
        let asm = Assembler::new(&hd, Problem::VonKarman);
        let load = asm.load(&ExactSolution::square(Problem::VonKarman)).unwrap();
        let (psi, rep) = newton(&asm, &load, &NewtonConfig::default()).unwrap();
        assert!(rep.converged);
        let r = asm.residual(&psi, &load);
        assert!(sparse::norm_inf(&r) <= 1e-8 * sparse::norm_inf(&load));
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = NewtonConfig { tol_increment: 0.0, ..NewtonConfig::default() };
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn random_systems_agree_between_methods() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 40;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 8.0 + rng.random_range(0.0..1.0)));
            for _ in 0..4 {
                t.push((i, rng.random_range(0..n), rng.random_range(-1.0..1.0)));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t);
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x1 = solve_linear(&a, &b, LinearSolver::Direct).unwrap();
        let x2 = solve_linear(&a, &b, LinearSolver::Iterative).unwrap();
        for (p, q) in x1.iter().zip(&x2) {
            assert!((p - q).abs() < 1e-9);
        }
    }

    #[test]
    fn dense_oracle_on_random_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 50;
        let mut t = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if rng.random_range(0.0..1.0) < 0.15 || i == j {
                    t.push((i, j, rng.random_range(-1.0..1.0)));
                }
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t);
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let dense = nalgebra::DMatrix::from_fn(n, n, |i, j| a.get(i, j));
        let oracle = dense.lu().solve(&nalgebra::DVector::from_column_slice(&b)).unwrap();
        let x = solve_linear(&a, &b, LinearSolver::Direct).unwrap();
        let scale = oracle.amax();
        for (p, q) in x.iter().zip(oracle.iter()) {
            assert!((p - q).abs() <= 1e-10 * scale);
        }
    }
}
