//! Hessian discretisations: Morley, Adini and gradient recovery (GR).
//!
//! A [`HessianDiscretisation`] stores, for every cell, the values of the
//! function, gradient and Hessian reconstructions of each local basis
//! function at the cell's quadrature points, together with the map from
//! local to free global unknowns. Everything downstream (assembly, errors,
//! property measures) works from these tables alone.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dense::DenseMatrix;
use crate::jet::SmoothFunction;
use crate::mesh::{build_mesh_with, CellKind, Domain, Layout, Mesh};
use crate::quadrature::{self, CellQuadrature};
use crate::tensor::{self, Mat2, Vec2};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Morley,
    Adini,
    Gr,
}

impl Method {
    pub fn cell_kind(self) -> CellKind {
        match self {
            Method::Adini => CellKind::Rectangle,
            Method::Morley | Method::Gr => CellKind::Triangle,
        }
    }

    /// Triangle layout of the coarse mesh this method is studied on.
    pub fn layout(self, domain: Domain) -> Layout {
        match (self, domain) {
            (Method::Morley, Domain::Square) => Layout::CrissCross,
            _ => Layout::Diagonal,
        }
    }

    /// Study mesh of this method at `level`.
    pub fn mesh(self, domain: Domain, level: usize) -> Mesh {
        build_mesh_with(domain, self.cell_kind(), self.layout(domain), level)
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Morley => "morley",
            Method::Adini => "adini",
            Method::Gr => "gr",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DofKind {
    VertexValue,
    VertexDx,
    VertexDy,
    EdgeNormalDerivative,
}

/// Local-to-global numbering of the free unknowns.
#[derive(Clone, Debug, PartialEq)]
pub struct DofMap {
    pub n_dofs: usize,
    offsets: Vec<usize>,
    slots: Vec<Option<usize>>,
    /// Kind of each free DOF.
    pub dof_kind: Vec<DofKind>,
    /// Vertex or edge id carrying each free DOF.
    pub dof_entity: Vec<usize>,
}

impl DofMap {
    /// Global index of each local DOF of `cell`, `None` where eliminated.
    pub fn cell(&self, cell: usize) -> &[Option<usize>] {
        &self.slots[self.offsets[cell]..self.offsets[cell + 1]]
    }

    pub fn n_cells(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// Reconstructions of each local basis function at each quadrature point,
/// stored `[i * n_points + q]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CellEvalTable {
    pub n_local: usize,
    pub quadrature: CellQuadrature,
    pub pi: Vec<f64>,
    pub grad: Vec<Vec2>,
    /// Symmetric for Morley and Adini; GR adds a nonsymmetric stabilisation.
    pub hess: Vec<Mat2>,
}

impl CellEvalTable {
    pub fn n_points(&self) -> usize {
        self.quadrature.weights.len()
    }

    #[inline]
    pub fn at(&self, i: usize, q: usize) -> (f64, Vec2, Mat2) {
        let k = i * self.n_points() + q;
        (self.pi[k], self.grad[k], self.hess[k])
    }
}

/// Sparse map from the unknowns to the nodal values of the recovered
/// gradient: `G_b = Σ (dof, coefficient) u_dof` for each vertex `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientRecovery {
    offsets: Vec<usize>,
    entries: Vec<(usize, Vec2)>,
}

impl GradientRecovery {
    pub fn vertex(&self, v: usize) -> &[(usize, Vec2)] {
        &self.entries[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Recovered gradient at vertex `v` for the unknowns `u`.
    pub fn apply(&self, v: usize, u: &[f64]) -> Vec2 {
        self.vertex(v).iter().fold([0.0, 0.0], |g, &(d, c)| tensor::add(g, tensor::scale(u[d], c)))
    }
}

#[derive(Clone, Debug)]
pub struct HessianDiscretisation {
    pub method: Method,
    pub mesh: Mesh,
    pub dof_map: DofMap,
    pub tables: Vec<CellEvalTable>,
    pub gr_recovery: Option<GradientRecovery>,
}

/// Function, gradient and Hessian reconstructions at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PointValue {
    pub value: f64,
    pub grad: Vec2,
    pub hess: Mat2,
}

impl HessianDiscretisation {
    pub fn n_dofs(&self) -> usize {
        self.dof_map.n_dofs
    }

    pub fn n_cells(&self) -> usize {
        self.tables.len()
    }

    /// Reconstructions of the unknowns `u` at quadrature point `q` of `cell`.
    pub fn evaluate(&self, u: &[f64], cell: usize, q: usize) -> Result<PointValue> {
        if u.len() != self.n_dofs() {
            return Err(Error::DimensionMismatch { expected: self.n_dofs(), found: u.len() });
        }
        let t = self.tables.get(cell).ok_or(Error::IndexOutOfRange { what: "cell", index: cell, len: self.n_cells() })?;
        if q >= t.n_points() {
            return Err(Error::IndexOutOfRange { what: "quadrature point", index: q, len: t.n_points() });
        }
        Ok(self.eval_unchecked(u, cell, q))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, u: &[f64], cell: usize, q: usize) -> PointValue {
        let t = &self.tables[cell];
        let mut out = PointValue::default();
        for (i, slot) in self.dof_map.cell(cell).iter().enumerate() {
            if let Some(g) = *slot {
                let c = u[g];
                if c == 0.0 {
                    continue;
                }
                let (p, gr, h) = t.at(i, q);
                out.value += c * p;
                out.grad = tensor::add(out.grad, tensor::scale(c, gr));
                out.hess += h * c;
            }
        }
        out
    }

    /// Reconstructions from a full local coefficient vector (eliminated
    /// DOFs included), as produced by [`local_interpolant`].
    pub fn evaluate_local(&self, coeffs: &[f64], cell: usize, q: usize) -> PointValue {
        let t = &self.tables[cell];
        let mut out = PointValue::default();
        for (i, &c) in coeffs.iter().enumerate() {
            let (p, gr, h) = t.at(i, q);
            out.value += c * p;
            out.grad = tensor::add(out.grad, tensor::scale(c, gr));
            out.hess += h * c;
        }
        out
    }
}

pub fn build(method: Method, mesh: &Mesh) -> Result<HessianDiscretisation> {
    match method {
        Method::Morley => build_morley(mesh),
        Method::Adini => build_adini(mesh),
        Method::Gr => build_gr(mesh),
    }
}

// ---------------------------------------------------------------------------
// Polynomial elements

#[derive(Clone, Copy, Debug)]
enum Functional {
    Value(Vec2),
    Dx(Vec2),
    Dy(Vec2),
    Normal(Vec2, Vec2),
}

const MORLEY_MONOMIALS: [(u32, u32); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
const ADINI_MONOMIALS: [(u32, u32); 12] =
    [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3), (3, 1), (1, 3)];

fn ipow(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |p, _| p * x)
}

/// Local polynomial basis dual to a set of functionals, written in the
/// scaled monomials `((x − c)/s)ᵃ((y − c)/s)ᵇ`.
#[derive(Clone, Debug)]
struct PolyBasis {
    centre: Vec2,
    scale: f64,
    monomials: &'static [(u32, u32)],
    /// Basis function `i` is `Σ_m coef[(m, i)] monomial_m`.
    coef: DenseMatrix,
}

impl PolyBasis {
    fn new(centre: Vec2, scale: f64, monomials: &'static [(u32, u32)], dofs: &[Functional]) -> Result<Self> {
        let n = monomials.len();
        let mut basis = PolyBasis { centre, scale, monomials, coef: DenseMatrix::identity(n) };
        let mut f = DenseMatrix::zeros(n, n);
        for (i, dof) in dofs.iter().enumerate() {
            let p = match *dof {
                Functional::Value(p) | Functional::Dx(p) | Functional::Dy(p) | Functional::Normal(p, _) => p,
            };
            let (v, g, _) = basis.monomial_values(p);
            for m in 0..n {
                f[(i, m)] = match *dof {
                    Functional::Value(_) => v[m],
                    Functional::Dx(_) => g[m][0],
                    Functional::Dy(_) => g[m][1],
                    Functional::Normal(_, nrm) => tensor::dot(g[m], nrm),
                };
            }
        }
        basis.coef = f.inverse()?;
        Ok(basis)
    }

    fn monomial_values(&self, p: Vec2) -> (Vec<f64>, Vec<Vec2>, Vec<Mat2>) {
        let s = (p[0] - self.centre[0]) / self.scale;
        let t = (p[1] - self.centre[1]) / self.scale;
        let h = 1.0 / self.scale;
        let mut v = Vec::with_capacity(self.monomials.len());
        let mut g = Vec::with_capacity(self.monomials.len());
        let mut hs = Vec::with_capacity(self.monomials.len());
        for &(a, b) in self.monomials {
            let (af, bf) = (a as f64, b as f64);
            let pa = |k: u32| if a >= k { ipow(s, a - k) } else { 0.0 };
            let pb = |k: u32| if b >= k { ipow(t, b - k) } else { 0.0 };
            v.push(pa(0) * pb(0));
            g.push([af * pa(1) * pb(0) * h, bf * pa(0) * pb(1) * h]);
            let xy = af * bf * pa(1) * pb(1) * h * h;
            hs.push(Mat2::symmetric(af * (af - 1.0) * pa(2) * pb(0) * h * h, xy, bf * (bf - 1.0) * pa(0) * pb(2) * h * h));
        }
        (v, g, hs)
    }

    fn eval(&self, p: Vec2) -> (Vec<f64>, Vec<Vec2>, Vec<Mat2>) {
        let (mv, mg, mh) = self.monomial_values(p);
        let n = self.monomials.len();
        let mut v = vec![0.0; n];
        let mut g = vec![[0.0; 2]; n];
        let mut h = vec![Mat2::ZERO; n];
        for i in 0..n {
            for m in 0..n {
                let c = self.coef[(m, i)];
                if c != 0.0 {
                    v[i] += c * mv[m];
                    g[i] = tensor::add(g[i], tensor::scale(c, mg[m]));
                    h[i] += mh[m] * c;
                }
            }
        }
        (v, g, h)
    }

    fn table(&self, quadrature: CellQuadrature) -> CellEvalTable {
        let n = self.monomials.len();
        let nq = quadrature.weights.len();
        let mut pi = vec![0.0; n * nq];
        let mut grad = vec![[0.0; 2]; n * nq];
        let mut hess = vec![Mat2::ZERO; n * nq];
        for (q, &p) in quadrature.points.iter().enumerate() {
            let (v, g, h) = self.eval(p);
            for i in 0..n {
                pi[i * nq + q] = v[i];
                grad[i * nq + q] = g[i];
                hess[i * nq + q] = h[i];
            }
        }
        CellEvalTable { n_local: n, quadrature, pi, grad, hess }
    }

    /// Largest relative mismatch between the tabulated derivatives and
    /// central differences of the basis values around `p`.
    fn derivative_defect(&self, p: Vec2) -> f64 {
        let e = 1e-4 * self.scale;
        let at = |dx: f64, dy: f64| self.eval([p[0] + dx, p[1] + dy]);
        let (v0, g0, h0) = self.eval(p);
        let (vxp, gxp, _) = at(e, 0.0);
        let (vxm, gxm, _) = at(-e, 0.0);
        let (vyp, gyp, _) = at(0.0, e);
        let (vym, gym, _) = at(0.0, -e);
        let mut worst: f64 = 0.0;
        for i in 0..v0.len() {
            let gfd = [(vxp[i] - vxm[i]) / (2.0 * e), (vyp[i] - vym[i]) / (2.0 * e)];
            let hfd = Mat2::new(
                (gxp[i][0] - gxm[i][0]) / (2.0 * e),
                (gyp[i][0] - gym[i][0]) / (2.0 * e),
                (gxp[i][1] - gxm[i][1]) / (2.0 * e),
                (gyp[i][1] - gym[i][1]) / (2.0 * e),
            );
            let gs = 1.0 + tensor::norm(g0[i]);
            let hs = 1.0 + h0[i].max_abs();
            worst = worst.max(tensor::norm(tensor::sub(gfd, g0[i])) / gs);
            worst = worst.max((hfd - h0[i]).max_abs() / hs);
        }
        worst
    }
}

fn require_kind(mesh: &Mesh, method: Method) -> Result<()> {
    let expected = method.cell_kind();
    if mesh.kind != expected {
        return Err(Error::WrongCellKind { method: method.name(), expected });
    }
    Ok(())
}

const DERIVATIVE_TOL: f64 = 1e-6;

fn check_derivatives(basis: &PolyBasis, table: &CellEvalTable, cell: usize) -> Result<()> {
    if let Some(&p) = table.quadrature.points.first() {
        if basis.derivative_defect(p) > DERIVATIVE_TOL {
            return Err(Error::DerivativeMismatch { cell });
        }
    }
    Ok(())
}

fn morley_basis(mesh: &Mesh, cell: usize) -> Result<PolyBasis> {
    let c = &mesh.cells[cell];
    let v = c.vertex_ids();
    let mut dofs = [Functional::Value([0.0; 2]); 6];
    for i in 0..3 {
        dofs[i] = Functional::Value(mesh.point(v[i]));
        let e = &mesh.edges[c.edge_ids()[i]];
        dofs[3 + i] = Functional::Normal(e.midpoint, e.unit_normal);
    }
    PolyBasis::new(mesh.centroid(cell), c.diameter, &MORLEY_MONOMIALS, &dofs)
}

fn adini_basis(mesh: &Mesh, cell: usize) -> Result<PolyBasis> {
    let c = &mesh.cells[cell];
    let mut dofs = [Functional::Value([0.0; 2]); 12];
    for (i, &v) in c.vertex_ids().iter().enumerate() {
        let p = mesh.point(v);
        dofs[3 * i] = Functional::Value(p);
        dofs[3 * i + 1] = Functional::Dx(p);
        dofs[3 * i + 2] = Functional::Dy(p);
    }
    PolyBasis::new(mesh.centroid(cell), c.diameter, &ADINI_MONOMIALS, &dofs)
}

fn polynomial_tables(mesh: &Mesh, make: fn(&Mesh, usize) -> Result<PolyBasis>) -> Result<Vec<CellEvalTable>> {
    let rule = quadrature::assembly_rule(mesh.kind);
    let mut tables = Vec::with_capacity(mesh.n_cells());
    for c in 0..mesh.n_cells() {
        let basis = make(mesh, c)?;
        let table = basis.table(quadrature::map_to_cell(&rule, mesh, c));
        if c == 0 {
            check_derivatives(&basis, &table, c)?;
        }
        tables.push(table);
    }
    Ok(tables)
}

/// Morley element on a triangle mesh: vertex values and edge-midpoint
/// normal derivatives, clamped DOFs removed.
pub fn build_morley(mesh: &Mesh) -> Result<HessianDiscretisation> {
    require_kind(mesh, Method::Morley)?;
    let mut vertex_dof = vec![None; mesh.n_vertices()];
    let mut edge_dof = vec![None; mesh.n_edges()];
    let mut dof_kind = Vec::new();
    let mut dof_entity = Vec::new();
    for v in mesh.vertices.iter().filter(|v| !v.is_boundary) {
        vertex_dof[v.id] = Some(dof_kind.len());
        dof_kind.push(DofKind::VertexValue);
        dof_entity.push(v.id);
    }
    for e in mesh.edges.iter().filter(|e| !e.is_boundary) {
        edge_dof[e.id] = Some(dof_kind.len());
        dof_kind.push(DofKind::EdgeNormalDerivative);
        dof_entity.push(e.id);
    }
    let mut offsets = vec![0];
    let mut slots = Vec::with_capacity(6 * mesh.n_cells());
    for c in &mesh.cells {
        slots.extend(c.vertex_ids().iter().map(|&v| vertex_dof[v]));
        slots.extend(c.edge_ids().iter().map(|&e| edge_dof[e]));
        offsets.push(slots.len());
    }
    let dof_map = DofMap { n_dofs: dof_kind.len(), offsets, slots, dof_kind, dof_entity };
    let tables = polynomial_tables(mesh, morley_basis)?;
    Ok(HessianDiscretisation { method: Method::Morley, mesh: mesh.clone(), dof_map, tables, gr_recovery: None })
}

/// Adini element on an axis-aligned rectangle mesh: value and gradient at
/// the vertices, all three eliminated at boundary vertices.
pub fn build_adini(mesh: &Mesh) -> Result<HessianDiscretisation> {
    require_kind(mesh, Method::Adini)?;
    let mut first = vec![None; mesh.n_vertices()];
    let mut dof_kind = Vec::new();
    let mut dof_entity = Vec::new();
    for v in mesh.vertices.iter().filter(|v| !v.is_boundary) {
        first[v.id] = Some(dof_kind.len());
        dof_kind.extend([DofKind::VertexValue, DofKind::VertexDx, DofKind::VertexDy]);
        dof_entity.extend([v.id; 3]);
    }
    let mut offsets = vec![0];
    let mut slots = Vec::with_capacity(12 * mesh.n_cells());
    for c in &mesh.cells {
        for &v in c.vertex_ids() {
            slots.extend((0..3).map(|k| first[v].map(|f| f + k)));
        }
        offsets.push(slots.len());
    }
    let dof_map = DofMap { n_dofs: dof_kind.len(), offsets, slots, dof_kind, dof_entity };
    let tables = polynomial_tables(mesh, adini_basis)?;
    Ok(HessianDiscretisation { method: Method::Adini, mesh: mesh.clone(), dof_map, tables, gr_recovery: None })
}

// ---------------------------------------------------------------------------
// Gradient recovery

/// Stabilisation vector used on every cell.
pub const GR_STABILISATION: Vec2 = [1.0, 1.0];

fn barycentric_gradients(p: [Vec2; 3]) -> [Vec2; 3] {
    let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    let mut g = [[0.0; 2]; 3];
    for i in 0..3 {
        let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
        g[i] = [(a[1] - b[1]) / det, (b[0] - a[0]) / det];
    }
    g
}

fn triangle_points(mesh: &Mesh, cell: usize) -> [Vec2; 3] {
    let v = mesh.cells[cell].vertex_ids();
    [mesh.point(v[0]), mesh.point(v[1]), mesh.point(v[2])]
}

/// Continuous P1 space with zero boundary values; the gradient is recovered
/// by area-weighted vertex averaging (zero at boundary vertices) and the
/// Hessian is the gradient of the recovered gradient plus a stabilisation.
pub fn build_gr(mesh: &Mesh) -> Result<HessianDiscretisation> {
    require_kind(mesh, Method::Gr)?;
    let mut vertex_dof = vec![None; mesh.n_vertices()];
    let mut dof_kind = Vec::new();
    let mut dof_entity = Vec::new();
    for v in mesh.vertices.iter().filter(|v| !v.is_boundary) {
        vertex_dof[v.id] = Some(dof_kind.len());
        dof_kind.push(DofKind::VertexValue);
        dof_entity.push(v.id);
    }
    let grads: Vec<[Vec2; 3]> = (0..mesh.n_cells()).map(|c| barycentric_gradients(triangle_points(mesh, c))).collect();

    // G_b = Σ_{K∋b} |K| ∇u_K / Σ_{K∋b} |K|
    let vertex_cells = mesh.vertex_cells();
    let mut rec_offsets = vec![0];
    let mut rec_entries: Vec<(usize, Vec2)> = Vec::new();
    for (b, cells) in vertex_cells.iter().enumerate() {
        if vertex_dof[b].is_some() {
            let total: f64 = cells.iter().map(|&k| mesh.cells[k].area).sum();
            let start = rec_entries.len();
            for &k in cells {
                let w = mesh.cells[k].area / total;
                for (i, &a) in mesh.cells[k].vertex_ids().iter().enumerate() {
                    if let Some(d) = vertex_dof[a] {
                        let c = tensor::scale(w, grads[k][i]);
                        match rec_entries[start..].iter_mut().find(|(dd, _)| *dd == d) {
                            Some(entry) => entry.1 = tensor::add(entry.1, c),
                            None => rec_entries.push((d, c)),
                        }
                    }
                }
            }
            rec_entries[start..].sort_by_key(|e| e.0);
        }
        rec_offsets.push(rec_entries.len());
    }
    let recovery = GradientRecovery { offsets: rec_offsets, entries: rec_entries };

    let rule = quadrature::assembly_rule(CellKind::Triangle);
    let nq = rule.len();
    let mut offsets = vec![0];
    let mut slots = Vec::new();
    let mut tables = Vec::with_capacity(mesh.n_cells());
    for (k, cell) in mesh.cells.iter().enumerate() {
        let vs = cell.vertex_ids();
        let mut local: Vec<usize> = vs.iter().filter_map(|&v| vertex_dof[v]).collect();
        for &b in vs {
            local.extend(recovery.vertex(b).iter().map(|e| e.0));
        }
        local.sort_unstable();
        local.dedup();
        let n = local.len();
        let pos = |d: usize| local.binary_search(&d).expect("dof in local set");

        let mut pi = vec![0.0; n * nq];
        let mut grad = vec![[0.0; 2]; n * nq];
        let mut hess = vec![Mat2::ZERO; n * nq];
        // recovered gradient coefficients at the cell's vertices, per local dof
        let mut nodal = vec![[[0.0; 2]; 3]; n];
        for (j, &b) in vs.iter().enumerate() {
            for &(d, c) in recovery.vertex(b) {
                nodal[pos(d)][j] = c;
            }
        }
        let mut own = vec![[0.0; 2]; n];
        let mut own_idx = [None; 3];
        for (j, &v) in vs.iter().enumerate() {
            if let Some(d) = vertex_dof[v] {
                own[pos(d)] = grads[k][j];
                own_idx[j] = Some(pos(d));
            }
        }
        for (q, &[s, t]) in rule.points.iter().enumerate() {
            let lam = [1.0 - s - t, s, t];
            for (j, oi) in own_idx.iter().enumerate() {
                if let Some(i) = *oi {
                    pi[i * nq + q] = lam[j];
                }
            }
            for i in 0..n {
                let mut g = [0.0; 2];
                let mut h = Mat2::ZERO;
                for j in 0..3 {
                    g = tensor::add(g, tensor::scale(lam[j], nodal[i][j]));
                    h += Mat2::outer(nodal[i][j], grads[k][j]);
                }
                h += Mat2::outer(GR_STABILISATION, tensor::sub(g, own[i]));
                grad[i * nq + q] = g;
                hess[i * nq + q] = h;
            }
        }
        slots.extend(local.iter().map(|&d| Some(d)));
        offsets.push(slots.len());
        tables.push(CellEvalTable { n_local: n, quadrature: quadrature::map_to_cell(&rule, mesh, k), pi, grad, hess });
    }
    let dof_map = DofMap { n_dofs: dof_kind.len(), offsets, slots, dof_kind, dof_entity };
    Ok(HessianDiscretisation { method: Method::Gr, mesh: mesh.clone(), dof_map, tables, gr_recovery: Some(recovery) })
}

// ---------------------------------------------------------------------------
// Interpolation

/// Canonical interpolant of `phi` on the free DOFs.
pub fn interpolate_dofs(hd: &HessianDiscretisation, phi: &dyn SmoothFunction) -> Result<Vec<f64>> {
    let mesh = &hd.mesh;
    let mut u = vec![0.0; hd.n_dofs()];
    for (d, (&kind, &ent)) in hd.dof_map.dof_kind.iter().zip(&hd.dof_map.dof_entity).enumerate() {
        u[d] = match kind {
            DofKind::VertexValue => phi.jet(mesh.point(ent))?.value(),
            DofKind::VertexDx => phi.jet(mesh.point(ent))?.d(1, 0),
            DofKind::VertexDy => phi.jet(mesh.point(ent))?.d(0, 1),
            DofKind::EdgeNormalDerivative => {
                let e = &mesh.edges[ent];
                tensor::dot(phi.jet(e.midpoint)?.grad(), e.unit_normal)
            }
        };
    }
    Ok(u)
}

/// Interpolant of `phi` on one cell with no DOF eliminated (Morley and Adini).
pub fn local_interpolant(hd: &HessianDiscretisation, cell: usize, phi: &dyn SmoothFunction) -> Result<Vec<f64>> {
    let mesh = &hd.mesh;
    let c = &mesh.cells[cell];
    let mut out = Vec::with_capacity(12);
    match hd.method {
        Method::Morley => {
            for &v in c.vertex_ids() {
                out.push(phi.jet(mesh.point(v))?.value());
            }
            for &e in c.edge_ids() {
                let e = &mesh.edges[e];
                out.push(tensor::dot(phi.jet(e.midpoint)?.grad(), e.unit_normal));
            }
        }
        Method::Adini => {
            for &v in c.vertex_ids() {
                let j = phi.jet(mesh.point(v))?;
                out.extend([j.value(), j.d(1, 0), j.d(0, 1)]);
            }
        }
        Method::Gr => {
            for slot in hd.dof_map.cell(cell) {
                let d = slot.expect("gr cells hold free dofs only");
                out.push(phi.jet(mesh.point(hd.dof_map.dof_entity[d]))?.value());
            }
        }
    }
    Ok(out)
}

/// Largest relative mismatch between tabulated derivatives and finite
/// differences of the local basis, over the first quadrature point of
/// every cell (Morley and Adini only; `None` for GR).
pub fn derivative_check(hd: &HessianDiscretisation) -> Option<f64> {
    let make = match hd.method {
        Method::Morley => morley_basis,
        Method::Adini => adini_basis,
        Method::Gr => return None,
    };
    let mut worst: f64 = 0.0;
    for c in 0..hd.n_cells() {
        let basis = make(&hd.mesh, c).ok()?;
        for &p in &hd.tables[c].quadrature.points {
            worst = worst.max(basis.derivative_defect(p));
        }
    }
    Some(worst)
}
