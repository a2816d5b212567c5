//! Partial edge colourings, weighted degrees, and the properness / nsd
//! validators.  The validators are the ground truth every other part of the
//! crate is checked against.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, Graph};

/// Edge colouring over palette `1..=palette`.  Partial colourings are first
/// class: an unset edge is simply absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColouring {
    palette: u32,
    map: BTreeMap<EdgeKey, u32>,
}

impl EdgeColouring {
    pub fn new(palette: u32) -> Self {
        EdgeColouring {
            palette,
            map: BTreeMap::new(),
        }
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn get(&self, e: EdgeKey) -> Option<u32> {
        self.map.get(&e).copied()
    }

    pub fn set(&mut self, e: EdgeKey, colour: u32) -> Result<()> {
        if colour == 0 || colour > self.palette {
            return Err(Error::ColourOutOfPalette {
                edge: e,
                colour,
                palette: self.palette,
            });
        }
        self.map.insert(e, colour);
        Ok(())
    }

    pub fn unset(&mut self, e: EdgeKey) {
        self.map.remove(&e);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeKey, u32)> + '_ {
        self.map.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_total(&self, g: &Graph) -> bool {
        g.edges().all(|e| self.map.contains_key(&e))
    }

    /// First uncoloured edge of `g`, if any.
    pub fn missing_edge(&self, g: &Graph) -> Option<EdgeKey> {
        g.edges().find(|e| !self.map.contains_key(e))
    }

    /// Keeps only the edges present in `g`.
    pub fn restricted_to(&self, g: &Graph) -> EdgeColouring {
        let mut out = EdgeColouring::new(self.palette);
        for e in g.edges() {
            if let Some(c) = self.get(e) {
                out.map.insert(e, c);
            }
        }
        out
    }
}

/// Sum of the colours on the edges incident with `v`.  Every incident edge
/// must be coloured.
pub fn weighted_degree(g: &Graph, c: &EdgeColouring, v: u32) -> Result<u64> {
    let mut sum = 0u64;
    for w in g.neighbours(v) {
        let e = EdgeKey::new(v, w);
        match c.get(e) {
            Some(col) => sum += col as u64,
            None => return Err(Error::PartialColouring(e)),
        }
    }
    Ok(sum)
}

/// Checks properness of a total colouring: no two edges sharing a vertex get
/// the same colour.  Returns the first violating edge pair, or None.
pub fn proper_violation(g: &Graph, c: &EdgeColouring) -> Result<Option<(EdgeKey, EdgeKey)>> {
    if let Some(e) = c.missing_edge(g) {
        return Err(Error::PartialColouring(e));
    }
    for v in g.vertices() {
        let mut seen: BTreeMap<u32, EdgeKey> = BTreeMap::new();
        for w in g.neighbours(v) {
            let e = EdgeKey::new(v, w);
            let col = c.get(e).unwrap();
            if let Some(&prev) = seen.get(&col) {
                return Ok(Some((prev, e)));
            }
            seen.insert(col, e);
        }
    }
    Ok(None)
}

pub fn is_proper(g: &Graph, c: &EdgeColouring) -> Result<bool> {
    Ok(proper_violation(g, c)?.is_none())
}

fn conflicts_inner(g: &Graph, c: &EdgeColouring, skip: &[bool]) -> Result<Vec<(u32, u32)>> {
    if let Some((e1, e2)) = proper_violation(g, c)? {
        return Err(Error::ImproperColouring(e1, e2));
    }
    let mut sums = vec![0u64; g.vertex_count()];
    for v in g.vertices() {
        sums[v as usize] = weighted_degree(g, c, v)?;
    }
    let mut out = Vec::new();
    for e in g.edges() {
        let (u, v) = e.endpoints();
        if skip.get(u as usize).copied().unwrap_or(false) {
            continue;
        }
        if sums[u as usize] == sums[v as usize] {
            out.push((u, v));
        }
    }
    Ok(out)
}

/// Adjacent vertex pairs with equal weighted degrees.  Requires a total,
/// proper colouring.
pub fn nsd_conflicts(g: &Graph, c: &EdgeColouring) -> Result<Vec<(u32, u32)>> {
    conflicts_inner(g, c, &[])
}

pub fn is_nsd(g: &Graph, c: &EdgeColouring) -> Result<bool> {
    Ok(nsd_conflicts(g, c)?.is_empty())
}

/// Like [`nsd_conflicts`], but endpoints of isolated edges (components of
/// order two) are exempt.  Such components can never distinguish their two
/// sums, so recursive colouring treats them as "colour arbitrarily".
pub fn nsd_conflicts_skipping_isolated_edges(
    g: &Graph,
    c: &EdgeColouring,
) -> Result<Vec<(u32, u32)>> {
    let mut skip = vec![false; g.vertex_count()];
    for e in g.isolated_edges() {
        skip[e.0 as usize] = true;
        skip[e.1 as usize] = true;
    }
    conflicts_inner(g, c, &skip)
}

pub fn is_nsd_skipping_isolated_edges(g: &Graph, c: &EdgeColouring) -> Result<bool> {
    Ok(nsd_conflicts_skipping_isolated_edges(g, c)?.is_empty())
}
