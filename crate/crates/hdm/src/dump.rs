//! Plain-text mesh dump: a `nV nE nC` header, one `id x y` line per vertex,
//! then one `id kind v0 v1 v2 [v3]` line per cell.

use std::fmt::Write;

use hdm_core::mesh::{CellKind, Mesh};

pub fn mesh_text(mesh: &Mesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {}", mesh.n_vertices(), mesh.n_edges(), mesh.n_cells());
    for v in &mesh.vertices {
        let _ = writeln!(s, "{} {:?} {:?}", v.id, v.point[0], v.point[1]);
    }
    for c in &mesh.cells {
        let kind = match c.kind {
            CellKind::Triangle => "tri",
            CellKind::Rectangle => "rect",
        };
        let ids: Vec<String> = c.vertex_ids().iter().map(usize::to_string).collect();
        let _ = writeln!(s, "{} {kind} {}", c.id, ids.join(" "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use hdm_core::mesh::{build_mesh, Domain};

    #[test]
    fn coarse_square() {
        let m = build_mesh(Domain::Square, CellKind::Triangle, 0);
        let text = mesh_text(&m);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "4 5 2");
        assert_eq!(lines.len(), 1 + 4 + 2);
        assert!(lines[5].starts_with("0 tri "));
        let r = mesh_text(&build_mesh(Domain::LShape, CellKind::Rectangle, 0));
        assert!(r.lines().last().unwrap().split(' ').count() == 6);
    }
}
