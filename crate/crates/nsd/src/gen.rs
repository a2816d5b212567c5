//! Seeded random planar instance generation.
//!
//! Graphs are grown as plane triangulations: starting from a triangle,
//! each new vertex is dropped into a uniformly random triangular face and
//! joined to its three corners. The rotation system is maintained
//! directly, so every generated graph ships with a certified embedding.
//! Density modes then delete random non-bridge edges, which preserves
//! connectivity and planarity.

use crate::embed::RotationSystem;
use crate::error::{Error, Result};
use crate::graph::{EdgeKey, Graph};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Edge density of a generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Density {
    /// Roughly 1.5 n edges.
    Sparse,
    /// Full triangulation minus about 15% of its edges.
    TriangulationMinus,
}

impl std::str::FromStr for Density {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sparse" => Ok(Density::Sparse),
            "triangulation-minus" => Ok(Density::TriangulationMinus),
            other => Err(Error::Parameter(format!(
                "unknown density '{other}' (expected sparse or triangulation-minus)"
            ))),
        }
    }
}

/// Random maximal planar graph (plane triangulation) on `n >= 3` vertices.
pub fn triangulation(n: usize, seed: u64) -> Result<RotationSystem> {
    if n < 3 {
        return Err(Error::Parameter(format!(
            "triangulation needs n >= 3, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rs = RotationSystem::new_empty(n);
    rs.set_rotation(0, vec![1, 2]);
    rs.set_rotation(1, vec![2, 0]);
    rs.set_rotation(2, vec![0, 1]);
    // Triangular faces as ordered corner triples (a, b, c), standing for
    // the dart walk (a,b), (b,c), (c,a).
    let mut tris: Vec<[u32; 3]> = vec![[0, 1, 2], [1, 0, 2]];
    for v in 3..n as u32 {
        let idx = rng.gen_range(0..tris.len());
        let [a, b, c] = tris[idx];
        // Splitting the face keeps every other triple a valid face: only
        // the three corners interior to this face change.
        rs.insert_after(a, c, v);
        rs.insert_after(b, a, v);
        rs.insert_after(c, b, v);
        rs.set_rotation(v, vec![a, c, b]);
        tris[idx] = [a, b, v];
        tris.push([b, c, v]);
        tris.push([c, a, v]);
    }
    debug_assert_eq!(rs.is_planar_embedding(), Ok(true));
    Ok(rs)
}

/// Connected planar instance with an embedding, deterministic per seed.
pub fn random_planar(n: usize, density: Density, seed: u64) -> Result<(Graph, RotationSystem)> {
    let mut rs = triangulation(n, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let full = rs.edge_count();
    let target = match density {
        Density::Sparse => (3 * n) / 2,
        Density::TriangulationMinus => full - (full * 15) / 100,
    };
    while rs.edge_count() > target {
        let Some(e) = random_non_bridge(&rs, &mut rng) else { break };
        rs.delete_edge(e.0, e.1);
    }
    let g = rs.to_graph();
    debug_assert_eq!(g.components().len(), 1);
    Ok((g, rs))
}

/// Uniformly random edge whose deletion keeps the graph connected: an
/// edge is a bridge exactly when both of its darts lie on the same face.
fn random_non_bridge(rs: &RotationSystem, rng: &mut ChaCha8Rng) -> Option<EdgeKey> {
    let fs = rs.face_set().ok()?;
    let candidates: Vec<EdgeKey> = rs
        .to_graph()
        .edges()
        .filter(|e| fs.face_of_dart((e.0, e.1)) != fs.face_of_dart((e.1, e.0)))
        .collect();
    if candidates.is_empty() {
        return None;
    }
    Some(candidates[rng.gen_range(0..candidates.len())])
}

/// The icosahedron with a fixed embedding: apex 0, upper ring 1-5, lower
/// ring 6-10, apex 11. Every vertex has degree 5 and every face is a
/// triangle, which makes it a handy rule-free discharging fixture.
pub fn icosahedron() -> (Graph, RotationSystem) {
    let mut rots: Vec<Vec<u32>> = vec![Vec::new(); 12];
    rots[0] = vec![5, 4, 3, 2, 1];
    for i in 1..=5u32 {
        let nu = i % 5 + 1;
        let pu = (i + 3) % 5 + 1;
        rots[i as usize] = vec![0, nu, nu + 5, i + 5, pu];
        rots[(i + 5) as usize] = vec![pu, i, nu + 5, 11, pu + 5];
    }
    rots[11] = vec![6, 7, 8, 9, 10];
    let rs = RotationSystem::from_rotations(rots).expect("icosahedron rotations are simple");
    (rs.to_graph(), rs)
}

/// Attaches `count` fresh pendant vertices to `v`, keeping the embedding
/// planar (a leaf can be drawn inside any corner at `v`).
pub fn attach_pendants(rs: &mut RotationSystem, v: u32, count: usize) {
    for _ in 0..count {
        let w = rs.add_vertex();
        rs.push_dart(v, w);
        rs.set_rotation(w, vec![v]);
    }
}

/// Planar instance guaranteed to reach maximum degree `delta`: a random
/// planar graph on `n` vertices whose highest-degree vertex is topped up
/// with pendant leaves until it has degree `delta`.
pub fn hub_instance(n: usize, density: Density, delta: usize, seed: u64) -> Result<(Graph, RotationSystem)> {
    let (g, mut rs) = random_planar(n, density, seed)?;
    let hub = g
        .vertices()
        .max_by_key(|&v| g.degree(v))
        .ok_or_else(|| Error::Parameter("empty graph".into()))?;
    let have = g.degree(hub);
    if have < delta {
        attach_pendants(&mut rs, hub, delta - have);
    }
    let g = rs.to_graph();
    debug_assert_eq!(rs.is_planar_embedding(), Ok(true));
    Ok((g, rs))
}
