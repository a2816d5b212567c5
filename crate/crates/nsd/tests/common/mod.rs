//! Helpers shared by the integration suites.

#![allow(dead_code)]

use nsd::embed::{embed, RotationSystem};
use nsd::gen::{attach_pendants, random_planar, Density};
use nsd::Graph;
use std::collections::BTreeSet;

pub fn instance(n: usize, dense: bool, seed: u64) -> (Graph, RotationSystem) {
    let d = if dense { Density::TriangulationMinus } else { Density::Sparse };
    random_planar(n, d, seed).unwrap()
}

/// Wheel: hub 0 joined to a rim cycle `1..=rim`.
pub fn wheel(rim: usize) -> Graph {
    let mut g = Graph::with_vertices(rim + 1);
    for i in 1..=rim as u32 {
        g.add_edge(0, i).unwrap();
        let next = if i == rim as u32 { 1 } else { i + 1 };
        g.add_edge(i, next).unwrap();
    }
    g
}

/// A star on `leaves` leaves next to a disjoint triangle.
pub fn star_plus_triangle(leaves: usize) -> Graph {
    let mut g = Graph::with_vertices(1);
    for _ in 0..leaves {
        let v = g.add_vertex();
        g.add_edge(0, v).unwrap();
    }
    let a = g.add_vertex();
    let b = g.add_vertex();
    let c = g.add_vertex();
    g.add_edge(a, b).unwrap();
    g.add_edge(b, c).unwrap();
    g.add_edge(a, c).unwrap();
    g
}

/// Star with an embedding, the smallest graph whose whole boundary is
/// compensated through the trash rule.
pub fn star_embedded(leaves: usize) -> (Graph, RotationSystem) {
    let edges: Vec<(u32, u32)> = (1..=leaves as u32).map(|v| (0, v)).collect();
    let g = Graph::from_edges(leaves + 1, &edges).unwrap();
    let rs = embed(&g).planar().unwrap();
    (g, rs)
}

/// Core on the listed edges, then `boost` pendants on each chosen vertex
/// to push its degree up without changing the core.
pub fn boosted(n: usize, edges: &[(u32, u32)], boost: &[(u32, usize)]) -> (Graph, RotationSystem) {
    let g = Graph::from_edges(n, edges).unwrap();
    let mut rs = embed(&g).planar().unwrap();
    for &(v, count) in boost {
        attach_pendants(&mut rs, v, count);
    }
    let g = rs.to_graph();
    (g, rs)
}

/// 4-cycle with one degree-2 corner, one degree-3 corner carrying a
/// pendant, and two degree-7 corners: drives the 4-face rules.
pub fn quad_fixture() -> (Graph, RotationSystem) {
    boosted(
        5,
        &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 4)],
        &[(2, 5), (3, 5)],
    )
}

/// Edge 01 on two triangular faces, written by hand so the triangles
/// survive wherever the boosting pendants land: exercises the
/// largest-amount-wins resolution between overlapping rules.
pub fn double_triangle_fixture() -> (Graph, RotationSystem) {
    let mut rs = RotationSystem::new_empty(5);
    rs.set_rotation(0, vec![2, 1, 3]);
    rs.set_rotation(1, vec![0, 2, 4, 3]);
    rs.set_rotation(2, vec![0, 1]);
    rs.set_rotation(3, vec![0, 1]);
    rs.set_rotation(4, vec![1]);
    attach_pendants(&mut rs, 0, 4);
    attach_pendants(&mut rs, 2, 5);
    attach_pendants(&mut rs, 3, 5);
    let g = rs.to_graph();
    (g, rs)
}

/// Hub of degree `du`; the selected neighbours reach their prescribed
/// degrees through anchored filler so stripping the inner edges leaves no
/// isolated edge.
pub fn pendant_gadget(du: usize, sel_degs: &[usize], pair: bool) -> (Graph, u32, Vec<u32>) {
    let mut g = Graph::with_vertices(1);
    let u = 0u32;
    let mut vs = Vec::new();
    for _ in sel_degs {
        let v = g.add_vertex();
        g.add_edge(u, v).unwrap();
        vs.push(v);
    }
    if pair {
        g.add_edge(vs[0], vs[1]).unwrap();
    }
    for (i, &d) in sel_degs.iter().enumerate() {
        while g.degree(vs[i]) < d {
            let t = g.add_vertex();
            g.add_edge(vs[i], t).unwrap();
            let t2 = g.add_vertex();
            g.add_edge(t, t2).unwrap();
            let t3 = g.add_vertex();
            g.add_edge(t, t3).unwrap();
        }
    }
    while g.degree(u) < du {
        let t = g.add_vertex();
        g.add_edge(u, t).unwrap();
    }
    (g, u, vs)
}

/// The four residual patterns that the trash pass must have eliminated,
/// re-derived from scratch rather than trusting the pass's own assertions.
pub fn check_trash_shape(g: &Graph, trash: &nsd::discharge::TrashPartition) {
    let kept: BTreeSet<u32> = trash.kept_vertices().collect();
    for &v in &kept {
        assert!(g.degree(v) >= 2, "kept vertex {v} has degree 1");
    }
    for &v in &kept {
        if g.degree(v) != 3 {
            continue;
        }
        for w in g.neighbours(v).filter(|w| kept.contains(w)) {
            if g.degree(w) != 3 || w <= v {
                continue;
            }
            let common = g
                .neighbour_set(v)
                .intersection(g.neighbour_set(w))
                .filter(|x| kept.contains(x))
                .count();
            assert!(common < 2, "kept pinched pair {v}-{w} survives");
        }
    }
    let fs = trash.retained.face_set().unwrap();
    for f in &fs.faces {
        let deg = f.degree();
        if deg != 3 && deg != 4 {
            continue;
        }
        for v in f.vertex_set() {
            if g.degree(v) != 2 {
                continue;
            }
            assert_ne!(deg, 3, "degree-2 vertex {v} left on a triangular face");
            assert!(
                !g.neighbours(v).all(|w| g.degree(w) >= 7),
                "degree-2 vertex {v} left between high corners on a 4-face"
            );
        }
    }
}
