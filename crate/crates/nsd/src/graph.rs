//! Simple undirected graphs with stable vertex ids, the surgeries used by the
//! reduction engine, and the well-founded "smaller graph" order that makes
//! every reduction terminate.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Canonical undirected edge: the smaller endpoint is stored first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey(pub u32, pub u32);

impl EdgeKey {
    pub fn new(a: u32, b: u32) -> Self {
        if a <= b {
            EdgeKey(a, b)
        } else {
            EdgeKey(b, a)
        }
    }

    pub fn endpoints(&self) -> (u32, u32) {
        (self.0, self.1)
    }

    pub fn other(&self, v: u32) -> u32 {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }

    pub fn touches(&self, v: u32) -> bool {
        self.0 == v || self.1 == v
    }
}

impl std::fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// Undirected simple graph.  Vertex ids are dense indices `0..n`; surgeries
/// keep the ids of untouched vertices stable, so intermediate results may
/// contain isolated vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<u32>>,
}

impl Graph {
    pub fn with_vertices(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut g = Graph::with_vertices(n);
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> u32 {
        self.adj.push(BTreeSet::new());
        (self.adj.len() - 1) as u32
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        if (v as usize) < self.adj.len() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v, self.adj.len()))
        }
    }

    /// Adds an edge; returns false if it was already present.
    pub fn add_edge(&mut self, a: u32, b: u32) -> Result<bool> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        let fresh = self.adj[a as usize].insert(b);
        self.adj[b as usize].insert(a);
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, a: u32, b: u32) -> Result<()> {
        if !self.has_edge(a, b) {
            return Err(Error::MissingEdge(EdgeKey::new(a, b)));
        }
        self.adj[a as usize].remove(&b);
        self.adj[b as usize].remove(&a);
        Ok(())
    }

    /// Copy of the graph with the given edges deleted.
    pub fn remove_edges(&self, edges: &[EdgeKey]) -> Result<Graph> {
        let mut g = self.clone();
        for &EdgeKey(a, b) in edges {
            g.remove_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        (a as usize) < self.adj.len() && self.adj[a as usize].contains(&b)
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbours(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[v as usize].iter().copied()
    }

    pub fn neighbour_set(&self, v: u32) -> &BTreeSet<u32> {
        &self.adj[v as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        0..self.adj.len() as u32
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeKey> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nb)| {
            nb.iter()
                .filter(move |&&v| u < v as usize)
                .map(move |&v| EdgeKey(u as u32, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|nb| nb.len()).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|nb| nb.len()).max().unwrap_or(0)
    }

    /// Connected component vertex sets, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![s as u32];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in self.neighbours(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Components that consist of exactly one edge.  Such components admit no
    /// colouring whose endpoint sums differ, so any operation that promises a
    /// genuine nsd colouring must reject them.
    pub fn isolated_edges(&self) -> Vec<EdgeKey> {
        self.components()
            .into_iter()
            .filter(|c| c.len() == 2 && self.degree(c[0]) == 1)
            .map(|c| EdgeKey::new(c[0], c[1]))
            .collect()
    }

    /// Induced subgraph on `keep` with vertex ids left untouched: removed
    /// vertices stay as isolated slots so ids remain comparable with `self`.
    pub fn subgraph_retaining(&self, keep: &[bool]) -> Graph {
        let mut g = Graph::with_vertices(self.adj.len());
        for v in self.vertices() {
            if !keep[v as usize] {
                continue;
            }
            for w in self.neighbours(v) {
                if v < w && keep[w as usize] {
                    g.add_edge(v, w).unwrap();
                }
            }
        }
        g
    }

    /// Induced subgraph on `keep` (ids are compacted; returns the mapping
    /// old id -> new id for kept vertices).
    pub fn induced(&self, keep: &BTreeSet<u32>) -> (Graph, Vec<u32>) {
        let order: Vec<u32> = keep.iter().copied().collect();
        let mut index = vec![u32::MAX; self.adj.len()];
        for (i, &v) in order.iter().enumerate() {
            index[v as usize] = i as u32;
        }
        let mut g = Graph::with_vertices(order.len());
        for &v in &order {
            for w in self.neighbours(v) {
                if v < w && keep.contains(&w) {
                    g.add_edge(index[v as usize], index[w as usize]).unwrap();
                }
            }
        }
        (g, order)
    }

    /// Degree histogram: entry `i-1` counts the vertices of degree `i`, for
    /// `i` up to `t` (at least the maximum degree).  Isolated vertices are not
    /// counted anywhere.
    pub fn degree_histogram(&self, t: usize) -> Vec<usize> {
        let mut h = vec![0usize; t];
        for nb in &self.adj {
            let d = nb.len();
            if d > 0 {
                h[d - 1] += 1;
            }
        }
        h
    }

    pub fn order_key(&self) -> GraphOrderKey {
        GraphOrderKey {
            edge_count: self.edge_count(),
            histogram: self.degree_histogram(self.max_degree().max(1)),
        }
    }

    /// Splits vertex `v` of degree d into d pendant vertices, one per former
    /// neighbour.  Fresh ids are appended in ascending neighbour order, so the
    /// pendant attached to the i-th smallest former neighbour has id
    /// `old_vertex_count + i`.  `v` keeps its id and becomes isolated.
    pub fn vertex_split(&self, v: u32) -> Result<(Graph, Vec<(u32, u32)>)> {
        self.check_vertex(v)?;
        let mut g = self.clone();
        let former: Vec<u32> = g.adj[v as usize].iter().copied().collect();
        for &w in &former {
            g.adj[w as usize].remove(&v);
        }
        g.adj[v as usize].clear();
        let mut pendants = Vec::with_capacity(former.len());
        for &w in &former {
            let p = g.add_vertex();
            g.add_edge(p, w)?;
            pendants.push((w, p));
        }
        Ok((g, pendants))
    }

    /// Contracts edge `uv`: the smaller id absorbs the other endpoint's
    /// neighbours, the larger id becomes isolated.  Parallel edges collapse;
    /// a would-be loop (the edge itself) is dropped.
    pub fn contract_edge(&self, u: u32, v: u32) -> Result<(Graph, u32)> {
        if !self.has_edge(u, v) {
            return Err(Error::MissingEdge(EdgeKey::new(u, v)));
        }
        let (keep, gone) = if u < v { (u, v) } else { (v, u) };
        let mut g = self.clone();
        let moved: Vec<u32> = g.adj[gone as usize].iter().copied().collect();
        for &w in &moved {
            g.adj[w as usize].remove(&gone);
            if w != keep {
                g.adj[w as usize].insert(keep);
                g.adj[keep as usize].insert(w);
            }
        }
        g.adj[gone as usize].clear();
        g.adj[keep as usize].remove(&gone);
        Ok((g, keep))
    }

    /// Detaches edge `uv` from `v`: removes the edge and attaches a fresh
    /// pendant `v'` to `u`.  Edge and vertex-degree counts move the graph
    /// strictly down in the [`smaller_than`] order whenever `deg(v) >= 2`.
    pub fn disjoin_edge(&self, u: u32, v: u32) -> Result<(Graph, u32)> {
        if !self.has_edge(u, v) {
            return Err(Error::MissingEdge(EdgeKey::new(u, v)));
        }
        let mut g = self.clone();
        g.remove_edge(u, v)?;
        let fresh = g.add_vertex();
        g.add_edge(u, fresh)?;
        Ok((g, fresh))
    }
}

/// Key for the well-founded order on graphs: edge count first, then the
/// degree histogram `(n_t, ..., n_1)` lexicographically, where `t` covers the
/// larger of the two maximum degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphOrderKey {
    pub edge_count: usize,
    pub histogram: Vec<usize>,
}

impl GraphOrderKey {
    pub fn compare(&self, other: &GraphOrderKey) -> Ordering {
        match self.edge_count.cmp(&other.edge_count) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let t = self.histogram.len().max(other.histogram.len());
        for i in (0..t).rev() {
            let a = self.histogram.get(i).copied().unwrap_or(0);
            let b = other.histogram.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl std::fmt::Display for GraphOrderKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "e{}[", self.edge_count)?;
        for (i, n) in self.histogram.iter().enumerate().rev() {
            write!(f, "{}", n)?;
            if i > 0 {
                write!(f, ",")?;
            }
        }
        write!(f, "]")
    }
}

/// Strict order used to certify reduction progress: `H` is smaller than `H'`
/// when it has fewer edges, or equally many and its degree histogram precedes
/// lexicographically.
pub fn smaller_than(h: &Graph, h2: &Graph) -> bool {
    minimality_order(h, h2) == Ordering::Less
}

/// Three-way version of [`smaller_than`].
pub fn minimality_order(h: &Graph, h2: &Graph) -> Ordering {
    h.order_key().compare(&h2.order_key())
}
