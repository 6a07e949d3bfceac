//! Structured meshes of the unit square and the L-shaped domain.
//!
//! Meshes are built from a fixed coarse layout and refined uniformly by red
//! refinement. Cells are stored counter-clockwise; for rectangles the first
//! vertex is always the lower-left corner, which the quadrature and element
//! maps rely on.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::tensor::{self, Vec2};

/// Absolute tolerance for geometric predicates (domains have size O(1)).
pub const GEOM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    /// `(0,1)²`
    Square,
    /// `(−1,1)² ∖ ([0,1)×(−1,0])`, re-entrant corner at the origin.
    LShape,
}

impl Domain {
    pub fn area(self) -> f64 {
        match self {
            Domain::Square => 1.0,
            Domain::LShape => 3.0,
        }
    }

    /// Whether `p` lies on the boundary of the closed domain, within [`GEOM_TOL`].
    pub fn on_boundary(self, p: Vec2) -> bool {
        let near = |a: f64, b: f64| (a - b).abs() <= GEOM_TOL;
        let [x, y] = p;
        match self {
            Domain::Square => near(x, 0.0) || near(x, 1.0) || near(y, 0.0) || near(y, 1.0),
            Domain::LShape => {
                near(x, -1.0)
                    || near(x, 1.0)
                    || near(y, -1.0)
                    || near(y, 1.0)
                    || (near(x, 0.0) && y <= GEOM_TOL)
                    || (near(y, 0.0) && x >= -GEOM_TOL)
            }
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Square => "square",
            Domain::LShape => "lshape",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellKind {
    Triangle,
    Rectangle,
}

impl CellKind {
    pub fn n_vertices(self) -> usize {
        match self {
            CellKind::Triangle => 3,
            CellKind::Rectangle => 4,
        }
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellKind::Triangle => "triangle",
            CellKind::Rectangle => "rectangle",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub id: usize,
    pub point: Vec2,
    pub is_boundary: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub id: usize,
    pub kind: CellKind,
    vertices: [usize; 4],
    edges: [usize; 4],
    pub diameter: f64,
    pub area: f64,
}

impl Cell {
    /// Vertex ids in counter-clockwise order.
    pub fn vertex_ids(&self) -> &[usize] {
        &self.vertices[..self.kind.n_vertices()]
    }

    /// Edge ids; local edge `i` joins local vertices `i` and `i + 1`.
    pub fn edge_ids(&self) -> &[usize] {
        &self.edges[..self.kind.n_vertices()]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub id: usize,
    /// Sorted vertex ids.
    pub vertices: [usize; 2],
    cells: [usize; 2],
    n_cells: usize,
    pub midpoint: Vec2,
    pub length: f64,
    /// Outward normal of the lower-id adjacent cell; for interior edges it
    /// points from the lower-id cell into the higher-id cell.
    pub unit_normal: Vec2,
    pub is_boundary: bool,
}

impl Edge {
    pub fn cell_ids(&self) -> &[usize] {
        &self.cells[..self.n_cells]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub cells: Vec<Cell>,
    pub domain: Domain,
    pub kind: CellKind,
    pub level: usize,
    /// Largest cell diameter.
    pub h: f64,
}

impl Mesh {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn point(&self, vertex: usize) -> Vec2 {
        self.vertices[vertex].point
    }

    pub fn cell_points(&self, cell: usize) -> impl Iterator<Item = Vec2> + '_ {
        self.cells[cell].vertex_ids().iter().map(move |&v| self.vertices[v].point)
    }

    pub fn centroid(&self, cell: usize) -> Vec2 {
        let c = &self.cells[cell];
        let n = c.vertex_ids().len() as f64;
        let s = self.cell_points(cell).fold([0.0, 0.0], tensor::add);
        tensor::scale(1.0 / n, s)
    }

    /// Outward unit normal of `cell` on its local edge `i`.
    pub fn outward_normal(&self, cell: usize, local_edge: usize) -> Vec2 {
        let vs = self.cells[cell].vertex_ids();
        let a = self.point(vs[local_edge]);
        let b = self.point(vs[(local_edge + 1) % vs.len()]);
        let d = tensor::sub(b, a);
        let len = tensor::norm(d);
        [d[1] / len, -d[0] / len]
    }

    pub fn n_boundary_vertices(&self) -> usize {
        self.vertices.iter().filter(|v| v.is_boundary).count()
    }

    pub fn n_interior_vertices(&self) -> usize {
        self.n_vertices() - self.n_boundary_vertices()
    }

    pub fn n_interior_edges(&self) -> usize {
        self.edges.iter().filter(|e| !e.is_boundary).count()
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|c| c.area).sum()
    }

    /// Vertex-to-cell adjacency, cells listed in increasing id order.
    pub fn vertex_cells(&self) -> Vec<Vec<usize>> {
        let mut adj = alloc::vec![Vec::new(); self.n_vertices()];
        for c in &self.cells {
            for &v in c.vertex_ids() {
                adj[v].push(c.id);
            }
        }
        adj
    }

    fn from_cells(domain: Domain, kind: CellKind, level: usize, points: Vec<Vec2>, cells: Vec<[usize; 4]>) -> Mesh {
        let nv = kind.n_vertices();
        let vertices = points
            .into_iter()
            .enumerate()
            .map(|(id, point)| Vertex { id, point, is_boundary: false })
            .collect::<Vec<_>>();

        let mut edge_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut out_cells = Vec::with_capacity(cells.len());
        for (id, vs) in cells.into_iter().enumerate() {
            let mut cell_edges = [usize::MAX; 4];
            for i in 0..nv {
                let (a, b) = (vs[i], vs[(i + 1) % nv]);
                let key = (a.min(b), a.max(b));
                let e = *edge_index.entry(key).or_insert_with(|| {
                    let pa = vertices[key.0].point;
                    let pb = vertices[key.1].point;
                    edges.push(Edge {
                        id: edges.len(),
                        vertices: [key.0, key.1],
                        cells: [id, usize::MAX],
                        n_cells: 0,
                        midpoint: tensor::scale(0.5, tensor::add(pa, pb)),
                        length: tensor::norm(tensor::sub(pb, pa)),
                        unit_normal: [0.0, 0.0],
                        is_boundary: false,
                    });
                    edges.len() - 1
                });
                let edge = &mut edges[e];
                if edge.n_cells == 0 {
                    // first (lower-id) cell fixes the orientation
                    let (pa, pb) = (vertices[a].point, vertices[b].point);
                    let d = tensor::sub(pb, pa);
                    edge.unit_normal = [d[1] / edge.length, -d[0] / edge.length];
                }
                edge.cells[edge.n_cells] = id;
                edge.n_cells += 1;
                cell_edges[i] = e;
            }
            let pts: Vec<Vec2> = vs[..nv].iter().map(|&v| vertices[v].point).collect();
            let mut diameter: f64 = 0.0;
            for i in 0..nv {
                for j in i + 1..nv {
                    diameter = diameter.max(tensor::norm(tensor::sub(pts[i], pts[j])));
                }
            }
            out_cells.push(Cell { id, kind, vertices: vs, edges: cell_edges, diameter, area: polygon_area(&pts) });
        }

        let h = out_cells.iter().map(|c| c.diameter).fold(0.0, f64::max);
        let mut mesh = Mesh { vertices, edges, cells: out_cells, domain, kind, level, h };
        classify_boundary(&mut mesh);
        mesh
    }
}

fn polygon_area(pts: &[Vec2]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

/// How the coarse squares of a domain are cut into triangles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Layout {
    /// One diagonal per square.
    #[default]
    Diagonal,
    /// Both diagonals: four triangles meeting at the square's centre.
    CrissCross,
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layout::Diagonal => "diagonal",
            Layout::CrissCross => "crisscross",
        })
    }
}

/// Coarse mesh of `domain` made of `kind` cells.
///
/// The square is one rectangle or two triangles split along the (0,0)–(1,1)
/// diagonal. The L-shape is three unit squares; as triangles each square is
/// split along the diagonal through the re-entrant corner.
pub fn build_initial_mesh(domain: Domain, kind: CellKind) -> Mesh {
    build_initial_mesh_with(domain, kind, Layout::Diagonal)
}

/// Coarse mesh with an explicit triangle layout; the layout is ignored for
/// rectangles.
pub fn build_initial_mesh_with(domain: Domain, kind: CellKind, layout: Layout) -> Mesh {
    if kind == CellKind::Triangle && layout == Layout::CrissCross {
        let quads = build_initial_mesh_with(domain, CellKind::Rectangle, Layout::Diagonal);
        let mut points: Vec<Vec2> = quads.vertices.iter().map(|v| v.point).collect();
        let mut cells = Vec::with_capacity(4 * quads.n_cells());
        for c in 0..quads.n_cells() {
            let v = quads.cells[c].vertex_ids();
            let m = points.len();
            points.push(quads.centroid(c));
            for i in 0..4 {
                cells.push([v[i], v[(i + 1) % 4], m, usize::MAX]);
            }
        }
        return Mesh::from_cells(domain, kind, 0, points, cells);
    }
    use CellKind::*;
    const NA: usize = usize::MAX;
    let (points, cells): (Vec<Vec2>, Vec<[usize; 4]>) = match (domain, kind) {
        (Domain::Square, Rectangle) => {
            (alloc::vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], alloc::vec![[0, 1, 2, 3]])
        }
        (Domain::Square, Triangle) => (
            alloc::vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            alloc::vec![[0, 1, 2, NA], [0, 2, 3, NA]],
        ),
        (Domain::LShape, _) => {
            //  5---6---7
            //  |   |   |
            //  2---3---4
            //  |   |
            //  0---1
            let points = alloc::vec![
                [-1.0, -1.0],
                [0.0, -1.0],
                [-1.0, 0.0],
                [0.0, 0.0],
                [1.0, 0.0],
                [-1.0, 1.0],
                [0.0, 1.0],
                [1.0, 1.0],
            ];
            let cells = match kind {
                Rectangle => alloc::vec![[0, 1, 3, 2], [2, 3, 6, 5], [3, 4, 7, 6]],
                Triangle => alloc::vec![
                    [0, 1, 3, NA],
                    [0, 3, 2, NA],
                    [2, 3, 5, NA],
                    [3, 6, 5, NA],
                    [3, 4, 7, NA],
                    [3, 7, 6, NA],
                ],
            };
            (points, cells)
        }
    };
    Mesh::from_cells(domain, kind, 0, points, cells)
}

/// Uniform red refinement: every cell splits into four congruent children
/// through its edge midpoints (and centre, for rectangles).
pub fn refine_red(mesh: &Mesh) -> Mesh {
    let nv = mesh.n_vertices();
    let mut points: Vec<Vec2> = mesh.vertices.iter().map(|v| v.point).collect();
    points.extend(mesh.edges.iter().map(|e| e.midpoint));
    let mid = |e: usize| nv + e;
    let mut cells = Vec::with_capacity(4 * mesh.n_cells());
    for (c, cell) in mesh.cells.iter().enumerate() {
        let v = cell.vertex_ids();
        let e = cell.edge_ids();
        match cell.kind {
            CellKind::Triangle => {
                let (m01, m12, m20) = (mid(e[0]), mid(e[1]), mid(e[2]));
                const NA: usize = usize::MAX;
                cells.push([v[0], m01, m20, NA]);
                cells.push([m01, v[1], m12, NA]);
                cells.push([m20, m12, v[2], NA]);
                cells.push([m01, m12, m20, NA]);
            }
            CellKind::Rectangle => {
                let (m01, m12, m23, m30) = (mid(e[0]), mid(e[1]), mid(e[2]), mid(e[3]));
                let centre = points.len();
                points.push(mesh.centroid(c));
                cells.push([v[0], m01, centre, m30]);
                cells.push([m01, v[1], m12, centre]);
                cells.push([centre, m12, v[2], m23]);
                cells.push([m30, centre, m23, v[3]]);
            }
        }
    }
    Mesh::from_cells(mesh.domain, mesh.kind, mesh.level + 1, points, cells)
}

/// Mesh at refinement `level` of the coarse layout.
pub fn build_mesh(domain: Domain, kind: CellKind, level: usize) -> Mesh {
    build_mesh_with(domain, kind, Layout::Diagonal, level)
}

pub fn build_mesh_with(domain: Domain, kind: CellKind, layout: Layout, level: usize) -> Mesh {
    let mut m = build_initial_mesh_with(domain, kind, layout);
    for _ in 0..level {
        m = refine_red(&m);
    }
    m
}

/// Flags boundary vertices (on ∂Ω within [`GEOM_TOL`]) and boundary edges
/// (both endpoints on ∂Ω and a single adjacent cell).
pub fn classify_boundary(mesh: &mut Mesh) {
    let domain = mesh.domain;
    for v in &mut mesh.vertices {
        v.is_boundary = domain.on_boundary(v.point);
    }
    for e in &mut mesh.edges {
        e.is_boundary =
            mesh.vertices[e.vertices[0]].is_boundary && mesh.vertices[e.vertices[1]].is_boundary && e.n_cells == 1;
    }
}

/// Largest Euclidean distance between two points of `pts`.
pub fn diameter(pts: &[Vec2]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            d = d.max(math::hypot(a[0] - b[0], a[1] - b[1]));
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: f64 = core::f64::consts::SQRT_2;

    fn counts(m: &Mesh) -> (usize, usize, usize) {
        (m.n_vertices(), m.n_edges(), m.n_cells())
    }

    #[test]
    fn crisscross_layout() {
        let m = build_initial_mesh_with(Domain::Square, CellKind::Triangle, Layout::CrissCross);
        assert_eq!(counts(&m), (5, 8, 4));
        assert_eq!(m.n_interior_vertices(), 1);
        assert!((m.h - 1.0).abs() < 1e-15);
        let l = build_mesh_with(Domain::LShape, CellKind::Triangle, Layout::CrissCross, 2);
        assert_eq!(l.n_cells(), 12 * 16);
        assert!((l.total_area() - 3.0).abs() < 1e-12);
        assert!((l.h - 0.25).abs() < 1e-15);
    }

    #[test]
    fn coarse_meshes() {
        let m = build_initial_mesh(Domain::Square, CellKind::Triangle);
        assert_eq!(counts(&m), (4, 5, 2));
        assert!((m.h - SQRT2).abs() < 1e-15);

        let m = build_initial_mesh(Domain::Square, CellKind::Rectangle);
        assert_eq!(counts(&m), (4, 4, 1));
        assert!((m.h - SQRT2).abs() < 1e-15);

        let m = build_initial_mesh(Domain::LShape, CellKind::Rectangle);
        assert_eq!(counts(&m), (8, 10, 3));

        let m = build_initial_mesh(Domain::LShape, CellKind::Triangle);
        assert_eq!(m.n_cells(), 6);
        // every triangle has the re-entrant corner as a vertex
        assert!(m.cells.iter().all(|c| c.vertex_ids().contains(&3)));
    }

    #[test]
    fn red_refinement_counts_and_h() {
        let m1 = refine_red(&build_initial_mesh(Domain::Square, CellKind::Triangle));
        assert_eq!(m1.n_cells(), 8);
        assert!((m1.h - SQRT2 / 2.0).abs() < 1e-15);

        let r1 = refine_red(&build_initial_mesh(Domain::Square, CellKind::Rectangle));
        assert_eq!(r1.n_cells(), 4);
        assert!((r1.h - SQRT2 / 2.0).abs() < 1e-15);

        let l1 = build_mesh(Domain::LShape, CellKind::Rectangle, 1);
        assert_eq!(l1.n_cells(), 12);
        assert_eq!(refine_red(&l1).n_cells(), 48);
    }

    #[test]
    fn boundary_classification() {
        let m = build_mesh(Domain::Square, CellKind::Triangle, 1);
        assert_eq!(m.n_boundary_vertices(), 8);
        assert_eq!(m.n_interior_vertices(), 1);

        let l = build_initial_mesh(Domain::LShape, CellKind::Rectangle);
        assert!(l.vertices.iter().all(|v| v.is_boundary));
        assert!(l.vertices[3].is_boundary && l.vertices[3].point == [0.0, 0.0]);

        let m2 = build_mesh(Domain::Square, CellKind::Triangle, 2);
        assert_eq!(m2.n_interior_vertices(), 9);
    }

    #[test]
    fn lshape_refined_interior_points_are_not_boundary() {
        let l = build_mesh(Domain::LShape, CellKind::Triangle, 1);
        // (-0.5,-0.5), (-0.5,0), (-0.5,0.5), (0,0.5), (0.5,0.5)
        assert_eq!(l.n_interior_vertices(), 5);
        // the edges along x=0 (y<0) and y=0 (x>0) are boundary edges
        let on_cut = l
            .edges
            .iter()
            .filter(|e| e.is_boundary && (e.midpoint[0].abs() < 1e-12 || e.midpoint[1].abs() < 1e-12))
            .count();
        assert_eq!(on_cut, 4);
    }
}
