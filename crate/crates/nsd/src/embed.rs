//! Combinatorial embeddings as rotation systems, face traversal, and a
//! planarity test that produces an embedding (Demoucron-Malgrange-Pertuiset
//! on biconnected blocks).
//!
//! A rotation system stores, for every vertex, the cyclic order of its
//! neighbours. A dart is an ordered pair `(v, w)` representing the half of
//! edge `vw` leaving `v`. Faces are the orbits of the successor map
//! `next((a, b)) = sigma_b(rev((a, b)))` where `sigma_b` steps to the next
//! neighbour in the rotation at `b`. An embedding is planar when every
//! connected component satisfies Euler's relation `V - E + F = 2`.

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, Graph};
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Half edge: `(v, w)` is the side of edge `vw` attached to `v`.
pub type Dart = (u32, u32);

/// Reverse dart of the same edge.
pub fn rev(d: Dart) -> Dart {
    (d.1, d.0)
}

/// Cyclic neighbour orders for every vertex of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    rot: Vec<Vec<u32>>,
}

/// One face of an embedding: the closed walk of darts traced by the
/// successor map. `walk[i].1 == walk[i + 1].0` cyclically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub walk: Vec<Dart>,
}

impl Face {
    /// Number of darts on the walk. A bridge contributes two.
    pub fn degree(&self) -> usize {
        self.walk.len()
    }

    /// Vertices in walk order (tails of the darts, with repetitions).
    pub fn tails(&self) -> impl Iterator<Item = u32> + '_ {
        self.walk.iter().map(|d| d.0)
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.tails().any(|t| t == v)
    }

    pub fn vertex_set(&self) -> BTreeSet<u32> {
        self.tails().collect()
    }
}

/// All faces of an embedding plus a dart -> face index lookup.
#[derive(Debug, Clone)]
pub struct FaceSet {
    pub faces: Vec<Face>,
    dart_face: HashMap<Dart, usize>,
}

impl FaceSet {
    pub fn face_of_dart(&self, d: Dart) -> Option<usize> {
        self.dart_face.get(&d).copied()
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

impl RotationSystem {
    pub fn new_empty(n: usize) -> Self {
        RotationSystem { rot: vec![Vec::new(); n] }
    }

    /// Builds from explicit neighbour orders and validates the structure.
    pub fn from_rotations(rot: Vec<Vec<u32>>) -> Result<Self> {
        let rs = RotationSystem { rot };
        rs.check()?;
        Ok(rs)
    }

    pub fn vertex_count(&self) -> usize {
        self.rot.len()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.rot[v as usize].len()
    }

    pub fn rotation(&self, v: u32) -> &[u32] {
        &self.rot[v as usize]
    }

    pub fn set_rotation(&mut self, v: u32, order: Vec<u32>) {
        self.rot[v as usize] = order;
    }

    pub fn add_vertex(&mut self) -> u32 {
        self.rot.push(Vec::new());
        (self.rot.len() - 1) as u32
    }

    /// Underlying abstract graph.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::with_vertices(self.rot.len());
        for v in 0..self.rot.len() as u32 {
            for &w in &self.rot[v as usize] {
                if v < w {
                    g.add_edge(v, w).unwrap();
                }
            }
        }
        g
    }

    pub fn edge_count(&self) -> usize {
        self.rot.iter().map(|r| r.len()).sum::<usize>() / 2
    }

    /// Structural validation: entries in range, no loops, no repeated
    /// neighbour within a rotation, and dart symmetry.
    pub fn check(&self) -> Result<()> {
        let n = self.rot.len();
        for (v, r) in self.rot.iter().enumerate() {
            let v = v as u32;
            let mut seen = BTreeSet::new();
            for &w in r {
                if w as usize >= n {
                    return Err(Error::MalformedRotation(format!(
                        "vertex {v} lists neighbour {w} outside 0..{n}"
                    )));
                }
                if w == v {
                    return Err(Error::MalformedRotation(format!(
                        "vertex {v} lists itself"
                    )));
                }
                if !seen.insert(w) {
                    return Err(Error::MalformedRotation(format!(
                        "vertex {v} lists neighbour {w} twice"
                    )));
                }
            }
        }
        for (v, r) in self.rot.iter().enumerate() {
            let v = v as u32;
            for &w in r {
                if !self.rot[w as usize].contains(&v) {
                    return Err(Error::MalformedRotation(format!(
                        "dart ({v}, {w}) has no reverse"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks that the rotation system carries exactly the edges of `g`.
    pub fn check_matches(&self, g: &Graph) -> Result<()> {
        if self.rot.len() != g.vertex_count() {
            return Err(Error::EmbeddingMismatch(format!(
                "embedding has {} vertices, graph has {}",
                self.rot.len(),
                g.vertex_count()
            )));
        }
        for v in g.vertices() {
            let from_rot: BTreeSet<u32> = self.rot[v as usize].iter().copied().collect();
            if &from_rot != g.neighbour_set(v) {
                return Err(Error::EmbeddingMismatch(format!(
                    "neighbourhoods of vertex {v} disagree"
                )));
            }
        }
        Ok(())
    }

    /// Successor of `w` in the cyclic rotation at `v`.
    fn succ(&self, v: u32, w: u32) -> u32 {
        let r = &self.rot[v as usize];
        let i = r.iter().position(|&x| x == w).expect("dart not present");
        r[(i + 1) % r.len()]
    }

    /// Next dart along the face walk.
    pub fn next_in_face(&self, d: Dart) -> Dart {
        let (a, b) = d;
        (b, self.succ(b, a))
    }

    /// Traces every face orbit. Fails on a malformed structure.
    pub fn face_set(&self) -> Result<FaceSet> {
        self.check()?;
        let mut darts: Vec<Dart> = Vec::new();
        for (v, r) in self.rot.iter().enumerate() {
            for &w in r {
                darts.push((v as u32, w));
            }
        }
        darts.sort_unstable();
        trace_faces(&darts, |d| self.next_in_face(d))
    }

    /// Euler's relation `V - E + F = 2` on every connected component that
    /// has at least one edge; isolated vertices pass trivially.
    pub fn is_planar_embedding(&self) -> Result<bool> {
        let faces = self.face_set()?;
        let g = self.to_graph();
        let comps = g.components();
        let mut comp_of = vec![usize::MAX; self.rot.len()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v as usize] = i;
            }
        }
        let mut f_count = vec![0usize; comps.len()];
        for face in &faces.faces {
            f_count[comp_of[face.walk[0].0 as usize]] += 1;
        }
        for (i, c) in comps.iter().enumerate() {
            let e: usize = c.iter().map(|&v| self.degree(v)).sum::<usize>() / 2;
            if e == 0 {
                continue;
            }
            if c.len() + f_count[i] != e + 2 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Embedding induced on the vertices flagged in `keep`: removed
    /// vertices keep their slot but lose all darts, so ids stay aligned
    /// with the original graph. Deleting vertices of a plane graph leaves
    /// a plane graph, and the cyclic orders are inherited.
    pub fn retain_vertices(&self, keep: &[bool]) -> RotationSystem {
        let mut rot = vec![Vec::new(); self.rot.len()];
        for (v, r) in self.rot.iter().enumerate() {
            if !keep[v] {
                continue;
            }
            rot[v] = r.iter().copied().filter(|&w| keep[w as usize]).collect();
        }
        RotationSystem { rot }
    }

    /// Inserts neighbour `new` immediately after `anchor` in the rotation
    /// at `v`.
    pub fn insert_after(&mut self, v: u32, anchor: u32, new: u32) {
        let r = &mut self.rot[v as usize];
        let i = r
            .iter()
            .position(|&x| x == anchor)
            .expect("anchor neighbour not present");
        r.insert(i + 1, new);
    }

    /// Appends a dart at the end of the rotation (arbitrary corner).
    pub fn push_dart(&mut self, v: u32, w: u32) {
        self.rot[v as usize].push(w);
    }

    /// Removes the two darts of edge `uv`.
    pub fn delete_edge(&mut self, u: u32, v: u32) {
        self.rot[u as usize].retain(|&x| x != v);
        self.rot[v as usize].retain(|&x| x != u);
    }

    /// Rotates every cyclic order so the least neighbour comes first.
    pub fn normalize(&mut self) {
        for r in &mut self.rot {
            if r.len() > 1 {
                let i = r
                    .iter()
                    .enumerate()
                    .min_by_key(|&(_, &w)| w)
                    .map(|(i, _)| i)
                    .unwrap();
                r.rotate_left(i);
            }
        }
    }
}

/// Orbit decomposition of a dart set under a successor map. Darts are
/// visited in sorted order so face numbering is deterministic.
fn trace_faces(darts: &[Dart], next: impl Fn(Dart) -> Dart) -> Result<FaceSet> {
    let mut dart_face: HashMap<Dart, usize> = HashMap::with_capacity(darts.len());
    let mut faces = Vec::new();
    for &start in darts {
        if dart_face.contains_key(&start) {
            continue;
        }
        let idx = faces.len();
        let mut walk = Vec::new();
        let mut d = start;
        loop {
            if dart_face.insert(d, idx).is_some() {
                return Err(Error::MalformedRotation(format!(
                    "face walk through ({}, {}) does not close", start.0, start.1
                )));
            }
            walk.push(d);
            d = next(d);
            if d == start {
                break;
            }
        }
        faces.push(Face { walk });
    }
    Ok(FaceSet { faces, dart_face })
}

/// Outcome of the planarity test.
#[derive(Debug, Clone)]
pub enum EmbedOutcome {
    Planar(RotationSystem),
    NonPlanar,
}

impl EmbedOutcome {
    pub fn planar(self) -> Result<RotationSystem> {
        match self {
            EmbedOutcome::Planar(rs) => Ok(rs),
            EmbedOutcome::NonPlanar => Err(Error::NonPlanar),
        }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self, EmbedOutcome::Planar(_))
    }
}

/// Planarity test returning a certifying embedding. Each biconnected
/// block is embedded independently by incremental face placement; block
/// rotations are concatenated at cut vertices, which merges one face per
/// extra block and keeps Euler's relation intact.
pub fn embed(g: &Graph) -> EmbedOutcome {
    let mut rot: Vec<Vec<u32>> = vec![Vec::new(); g.vertex_count()];
    for block in blocks(g) {
        // e <= 3v - 6 for simple planar graphs on >= 3 vertices.
        let verts: BTreeSet<u32> = block.iter().flat_map(|e| [e.0, e.1]).collect();
        if verts.len() >= 3 && block.len() > 3 * verts.len() - 6 {
            return EmbedOutcome::NonPlanar;
        }
        match embed_block(&block) {
            Some(block_rot) => {
                for (v, mut r) in block_rot {
                    rot[v as usize].append(&mut r);
                }
            }
            None => return EmbedOutcome::NonPlanar,
        }
    }
    let mut rs = RotationSystem { rot };
    rs.normalize();
    debug_assert!(rs.check_matches(g).is_ok());
    debug_assert_eq!(rs.is_planar_embedding(), Ok(true));
    EmbedOutcome::Planar(rs)
}

/// Biconnected components as edge lists (classic low-point DFS). Blocks
/// come out in a deterministic order and bridges form their own blocks.
fn blocks(g: &Graph) -> Vec<Vec<EdgeKey>> {
    struct St<'a> {
        g: &'a Graph,
        num: Vec<u32>,
        low: Vec<u32>,
        counter: u32,
        stack: Vec<EdgeKey>,
        out: Vec<Vec<EdgeKey>>,
    }

    fn dfs(st: &mut St, v: u32, parent: u32) {
        st.counter += 1;
        st.num[v as usize] = st.counter;
        st.low[v as usize] = st.counter;
        let nbs: Vec<u32> = st.g.neighbours(v).collect();
        for w in nbs {
            if w == parent {
                continue;
            }
            if st.num[w as usize] == 0 {
                st.stack.push(EdgeKey::new(v, w));
                dfs(st, w, v);
                st.low[v as usize] = st.low[v as usize].min(st.low[w as usize]);
                if st.low[w as usize] >= st.num[v as usize] {
                    let mut block = Vec::new();
                    let cut = EdgeKey::new(v, w);
                    loop {
                        let e = st.stack.pop().unwrap();
                        block.push(e);
                        if e == cut {
                            break;
                        }
                    }
                    block.sort_unstable();
                    st.out.push(block);
                }
            } else if st.num[w as usize] < st.num[v as usize] {
                st.stack.push(EdgeKey::new(v, w));
                st.low[v as usize] = st.low[v as usize].min(st.num[w as usize]);
            }
        }
    }

    let mut st = St {
        g,
        num: vec![0; g.vertex_count()],
        low: vec![0; g.vertex_count()],
        counter: 0,
        stack: Vec::new(),
        out: Vec::new(),
    };
    for v in g.vertices() {
        if st.num[v as usize] == 0 {
            dfs(&mut st, v, u32::MAX);
        }
    }
    st.out.sort_unstable_by_key(|b| b[0]);
    st.out
}

/// One unembedded piece relative to the partial embedding: either a chord
/// between embedded vertices or a connected chunk of unembedded vertices
/// together with its attachment vertices.
struct Fragment {
    attach: BTreeSet<u32>,
    interior: BTreeSet<u32>,
}

/// Incremental planarity for a single 2-connected block given as a sorted
/// edge list. Returns the rotation of every block vertex, or `None` when
/// some fragment has no admissible face.
fn embed_block(edges: &[EdgeKey]) -> Option<BTreeMap<u32, Vec<u32>>> {
    if edges.len() == 1 {
        let EdgeKey(u, v) = edges[0];
        let mut rot = BTreeMap::new();
        rot.insert(u, vec![v]);
        rot.insert(v, vec![u]);
        return Some(rot);
    }

    let mut adj: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &EdgeKey(u, v) in edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    for r in adj.values_mut() {
        r.sort_unstable();
    }

    let cycle = find_cycle(&adj)?;
    let m = cycle.len();
    let mut rot: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut embedded: BTreeSet<EdgeKey> = BTreeSet::new();
    let mut h_verts: BTreeSet<u32> = BTreeSet::new();
    for i in 0..m {
        let prev = cycle[(i + m - 1) % m];
        let v = cycle[i];
        let next = cycle[(i + 1) % m];
        rot.insert(v, vec![prev, next]);
        embedded.insert(EdgeKey::new(v, next));
        h_verts.insert(v);
    }

    while embedded.len() < edges.len() {
        let faces = map_faces(&rot);
        let fragments = find_fragments(&adj, &embedded, &h_verts);
        debug_assert!(!fragments.is_empty());

        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let adm: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| frag.attach.iter().all(|a| f.contains_vertex(*a)))
                .map(|(i, _)| i)
                .collect();
            if adm.is_empty() {
                return None;
            }
            match choice {
                None => choice = Some((fi, adm[0])),
                Some(_) if adm.len() == 1 => {
                    choice = Some((fi, adm[0]));
                }
                _ => {}
            }
            if adm.len() == 1 {
                break;
            }
        }
        let (fi, face_idx) = choice?;
        let frag = &fragments[fi];
        let path = fragment_path(frag, &adj, &h_verts)?;
        insert_path(&mut rot, &faces[face_idx], &path);
        for pair in path.windows(2) {
            embedded.insert(EdgeKey::new(pair[0], pair[1]));
        }
        for &v in &path[1..path.len() - 1] {
            h_verts.insert(v);
        }
    }
    Some(rot)
}

/// Some cycle of the block, as a vertex list.
fn find_cycle(adj: &BTreeMap<u32, Vec<u32>>) -> Option<Vec<u32>> {
    let start = *adj.keys().next()?;
    let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
    let mut order: Vec<u32> = Vec::new();
    let mut on_path: BTreeMap<u32, usize> = BTreeMap::new();
    // Iterative DFS keeping the current tree path explicit.
    let mut stack: Vec<(u32, usize)> = vec![(start, 0)];
    parent.insert(start, start);
    on_path.insert(start, 0);
    order.push(start);
    while let Some(&(v, i)) = stack.last() {
        let nbs = &adj[&v];
        if i >= nbs.len() {
            stack.pop();
            on_path.remove(&v);
            order.pop();
            continue;
        }
        stack.last_mut().unwrap().1 += 1;
        let w = nbs[i];
        if parent[&v] == w {
            continue;
        }
        if let Some(&pos) = on_path.get(&w) {
            return Some(order[pos..].to_vec());
        }
        if let Entry::Vacant(slot) = parent.entry(w) {
            slot.insert(v);
            on_path.insert(w, order.len());
            order.push(w);
            stack.push((w, 0));
        }
    }
    None
}

/// Face orbits of a partial rotation stored as a map.
fn map_faces(rot: &BTreeMap<u32, Vec<u32>>) -> Vec<Face> {
    let mut darts: Vec<Dart> = Vec::new();
    for (&v, r) in rot {
        for &w in r {
            darts.push((v, w));
        }
    }
    darts.sort_unstable();
    let next = |d: Dart| -> Dart {
        let (a, b) = d;
        let r = &rot[&b];
        let i = r.iter().position(|&x| x == a).expect("dart not present");
        (b, r[(i + 1) % r.len()])
    };
    trace_faces(&darts, next).expect("partial embedding stays well formed").faces
}

/// Fragments of the block relative to the embedded subgraph: chords
/// first (sorted), then unembedded components (sorted by least vertex).
fn find_fragments(
    adj: &BTreeMap<u32, Vec<u32>>,
    embedded: &BTreeSet<EdgeKey>,
    h_verts: &BTreeSet<u32>,
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for (&v, nbs) in adj {
        for &w in nbs {
            if v < w
                && h_verts.contains(&v)
                && h_verts.contains(&w)
                && !embedded.contains(&EdgeKey(v, w))
            {
                out.push(Fragment {
                    attach: [v, w].into_iter().collect(),
                    interior: BTreeSet::new(),
                });
            }
        }
    }
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    for &v in adj.keys() {
        if h_verts.contains(&v) || seen.contains(&v) {
            continue;
        }
        let mut interior = BTreeSet::new();
        let mut attach = BTreeSet::new();
        let mut queue = vec![v];
        seen.insert(v);
        interior.insert(v);
        while let Some(x) = queue.pop() {
            for &y in &adj[&x] {
                if h_verts.contains(&y) {
                    attach.insert(y);
                } else if seen.insert(y) {
                    interior.insert(y);
                    queue.push(y);
                }
            }
        }
        out.push(Fragment { attach, interior });
    }
    out
}

/// A path through the fragment between two distinct attachment vertices.
/// For a chord this is just its two endpoints.
fn fragment_path(
    frag: &Fragment,
    adj: &BTreeMap<u32, Vec<u32>>,
    h_verts: &BTreeSet<u32>,
) -> Option<Vec<u32>> {
    let mut attach = frag.attach.iter().copied();
    let a = attach.next()?;
    if frag.interior.is_empty() {
        let b = attach.next()?;
        return Some(vec![a, b]);
    }
    // Breadth-first from `a` through interior vertices only, stopping at
    // the first other embedded vertex.
    let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::new();
    for &y in &adj[&a] {
        if frag.interior.contains(&y) && !parent.contains_key(&y) {
            parent.insert(y, a);
            queue.push_back(y);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &y in &adj[&x] {
            if y == a {
                continue;
            }
            if h_verts.contains(&y) {
                let mut path = vec![y, x];
                let mut cur = x;
                while cur != a {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            if frag.interior.contains(&y) && !parent.contains_key(&y) {
                parent.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    None
}

/// Splices `path` into `face`. The face walk visits each embedded vertex
/// once (the embedded subgraph stays 2-connected), so the corners of the
/// endpoints are unique: at the corner of `v` reached by dart `d`, the
/// new dart goes immediately after `rev(d)` in the rotation at `v`.
fn insert_path(rot: &mut BTreeMap<u32, Vec<u32>>, face: &Face, path: &[u32]) {
    let a = path[0];
    let b = *path.last().unwrap();
    for &d in &face.walk {
        let (tail, head) = d;
        if head == a {
            let r = rot.get_mut(&a).unwrap();
            let i = r.iter().position(|&x| x == tail).unwrap();
            r.insert(i + 1, path[1]);
        }
    }
    for &d in &face.walk {
        let (tail, head) = d;
        if head == b {
            let r = rot.get_mut(&b).unwrap();
            let i = r.iter().position(|&x| x == tail).unwrap();
            r.insert(i + 1, path[path.len() - 2]);
        }
    }
    for j in 1..path.len() - 1 {
        rot.insert(path[j], vec![path[j - 1], path[j + 1]]);
    }
}
