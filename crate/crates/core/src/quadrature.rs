//! Gauss-type quadrature on the reference triangle and the reference square.
//!
//! Triangle rules are collapsed (Duffy) products of Gauss–Legendre rules, so
//! every weight is positive and every point is strictly interior. Square
//! rules are tensor Gauss–Legendre rules on `[0,1]²`.

use alloc::vec::Vec;

use crate::math;
use crate::mesh::{CellKind, Mesh};
use crate::tensor::{self, Vec2};
use crate::{Error, Result};

pub const MAX_DEGREE: usize = 12;

/// Assembly degree on triangles.
pub const TRIANGLE_DEGREE: usize = 6;
/// Assembly degree on rectangles (6×6 tensor Gauss).
pub const RECTANGLE_DEGREE: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub kind: CellKind,
    /// Points in reference coordinates: the triangle `(0,0),(1,0),(0,1)` or
    /// the square `[0,1]²`.
    pub points: Vec<Vec2>,
    /// Positive weights summing to the reference measure.
    pub weights: Vec<f64>,
    /// Largest total degree integrated exactly.
    pub degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn reference_measure(&self) -> f64 {
        match self.kind {
            CellKind::Triangle => 0.5,
            CellKind::Rectangle => 1.0,
        }
    }

    pub fn integrate(&self, f: impl Fn(Vec2) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&p, &w)| w * f(p)).sum()
    }
}

/// Quadrature points and weights mapped onto one physical cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellQuadrature {
    pub points: Vec<Vec2>,
    pub weights: Vec<f64>,
}

impl CellQuadrature {
    pub fn integrate(&self, f: impl Fn(Vec2) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&p, &w)| w * f(p)).sum()
    }
}

/// Gauss–Legendre nodes and weights on `[0,1]`, exact for degree `2n − 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let pi = core::f64::consts::PI;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = math::cos(pi * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]; x_i descending so mirror into ascending order
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Rule on the reference `kind` cell integrating all bivariate polynomials
/// of total degree `≤ degree` exactly.
pub fn rule_for(kind: CellKind, degree: usize) -> Result<QuadratureRule> {
    if degree > MAX_DEGREE {
        return Err(Error::UnsupportedQuadratureDegree { degree, max: MAX_DEGREE });
    }
    let mut points = Vec::new();
    let mut weights = Vec::new();
    match kind {
        CellKind::Rectangle => {
            let (x, w) = gauss_legendre((degree + 2) / 2);
            for (yi, wy) in x.iter().zip(&w) {
                for (xi, wx) in x.iter().zip(&w) {
                    points.push([*xi, *yi]);
                    weights.push(wx * wy);
                }
            }
        }
        CellKind::Triangle => {
            // (u, v) in [0,1]^2 -> (u(1-v), v); Jacobian (1-v) adds one degree in v
            let (xu, wu) = gauss_legendre((degree + 2) / 2);
            let (xv, wv) = gauss_legendre((degree + 3) / 2);
            for (v, wvv) in xv.iter().zip(&wv) {
                for (u, wuu) in xu.iter().zip(&wu) {
                    points.push([u * (1.0 - v), *v]);
                    weights.push(wuu * wvv * (1.0 - v));
                }
            }
        }
    }
    Ok(QuadratureRule { kind, points, weights, degree })
}

/// The rule used for assembly and error integrals on `kind` cells.
pub fn assembly_rule(kind: CellKind) -> QuadratureRule {
    let degree = match kind {
        CellKind::Triangle => TRIANGLE_DEGREE,
        CellKind::Rectangle => RECTANGLE_DEGREE,
    };
    rule_for(kind, degree).expect("assembly degree is supported")
}

/// Maps `rule` onto `cell` of `mesh`. Triangles use the affine map from
/// their first vertex; rectangles the (axis-aligned, hence affine) map from
/// their lower-left vertex.
pub fn map_to_cell(rule: &QuadratureRule, mesh: &Mesh, cell: usize) -> CellQuadrature {
    let c = &mesh.cells[cell];
    let v = c.vertex_ids();
    let p0 = mesh.point(v[0]);
    let e1 = tensor::sub(mesh.point(v[1]), p0);
    let e2 = match c.kind {
        CellKind::Triangle => tensor::sub(mesh.point(v[2]), p0),
        CellKind::Rectangle => tensor::sub(mesh.point(v[3]), p0),
    };
    let det = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
    let points = rule
        .points
        .iter()
        .map(|&[s, t]| [p0[0] + s * e1[0] + t * e2[0], p0[1] + s * e1[1] + t * e2[1]])
        .collect();
    let weights = rule.weights.iter().map(|w| w * det).collect();
    CellQuadrature { points, weights }
}
