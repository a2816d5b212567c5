//! Dynamic-list extension enumerator.  Given a partial colouring that
//! misses exactly the edges inside `{u, v_1..v_p}`, builds per-edge colour
//! lists, trims them in two passes and walks a staircase of assignments
//! whose sums at `u` strictly increase.

use crate::colouring::EdgeColouring;
use crate::graph::{EdgeKey, Graph};
use crate::{Error, Result};
use std::collections::BTreeSet;

/// One way of colouring the missing edges: the pendant edges `uv_j` plus
/// the connecting edges of matched pairs.
#[derive(Debug, Clone)]
pub struct Extension {
    pub colours: Vec<(EdgeKey, u32)>,
    pub sum_u: u64,
}

impl Extension {
    /// The partial colouring with this extension written on top.
    pub fn applied_to(&self, alpha: &EdgeColouring) -> Result<EdgeColouring> {
        let mut col = alpha.clone();
        for &(e, c) in &self.colours {
            col.set(e, c)?;
        }
        Ok(col)
    }
}

/// Enumerates extensions of `alpha` onto the edges of `G[{u, v_1..v_p}]`,
/// one per staircase step, sums at `u` strictly increasing.  Guarantees at
/// least `1 + p(k - d(u) + 3) - 2 sum d(v_i)` of them; every extension is
/// proper, raises no conflict between any unmatched `v_j` and its
/// neighbours other than `u`, none between matched partners, and none
/// between a matched vertex and any of its neighbours.
pub fn lemma1_extensions(
    g: &Graph,
    alpha: &EdgeColouring,
    u: u32,
    vs: &[u32],
    k: u32,
) -> Result<Vec<Extension>> {
    lemma1_with_trims(g, alpha, u, vs, k, &[])
}

/// As [`lemma1_extensions`], with extra colours struck from named lists
/// before the trimming passes (the non-adjacent two-neighbour variant).
/// Each pretrim `(v_j, c)` removes `c` from the list of edge `uv_j` and
/// relaxes the floor and the output-count guarantee by one.
pub(crate) fn lemma1_with_trims(
    g: &Graph,
    alpha: &EdgeColouring,
    u: u32,
    vs: &[u32],
    k: u32,
    pretrims: &[(u32, u32)],
) -> Result<Vec<Extension>> {
    let p = vs.len();
    let pre = |msg: String| Err(Error::ListPrecondition(msg));
    if p == 0 {
        return pre("empty neighbour selection".into());
    }
    if k < 20 {
        return pre(format!("k >= 20 required, got {k}"));
    }
    let mut seen = BTreeSet::new();
    for &v in vs {
        if v == u || !seen.insert(v) {
            return pre(format!("vertex {v} repeated or equal to u"));
        }
        if !g.has_edge(u, v) {
            return pre(format!("{u}-{v} is not an edge"));
        }
    }
    let du = g.degree(u);
    for &v in vs {
        let dv = g.degree(v);
        if dv > 6 {
            return pre(format!("d(v) <= 6 violated at v = {v}: d = {dv}"));
        }
        if du as i64 > k as i64 - 2 * dv as i64 + 3 {
            return pre(format!(
                "d(u) <= k - 2 d(v) + 3 violated at v = {v}: {du} > {k} - {} + 3",
                2 * dv
            ));
        }
    }

    // Matched pairs are the edges inside the selection; more than one
    // partner per vertex breaks the list floors.
    let vset: BTreeSet<u32> = vs.iter().copied().collect();
    let mut partner = vec![None; p];
    for (i, &a) in vs.iter().enumerate() {
        for (j, &b) in vs.iter().enumerate().skip(i + 1) {
            if g.has_edge(a, b) {
                if partner[i].is_some() || partner[j].is_some() {
                    return pre(format!(
                        "selection spans a vertex with two partners near {a}-{b}"
                    ));
                }
                partner[i] = Some(j);
                partner[j] = Some(i);
            }
        }
    }
    // Reorder: pairs first, then the unmatched.
    let mut ord: Vec<u32> = Vec::with_capacity(p);
    for (i, &a) in vs.iter().enumerate() {
        if let Some(j) = partner[i] {
            if j > i {
                ord.push(a);
                ord.push(vs[j]);
            }
        }
    }
    let paired = ord.len();
    for (i, &a) in vs.iter().enumerate() {
        if partner[i].is_none() {
            ord.push(a);
        }
    }

    // alpha must colour exactly the edges outside G[{u} union vs].
    let mut inner = Vec::new();
    for e in g.edges() {
        let e_inner = (e.0 == u || vset.contains(&e.0)) && (e.1 == u || vset.contains(&e.1));
        if e_inner {
            inner.push(e);
        }
        match alpha.get(e) {
            Some(c) if e_inner => {
                return pre(format!("alpha colours inner edge {}-{} with {c}", e.0, e.1))
            }
            Some(c) if c == 0 || c > k + 1 => {
                return pre(format!("alpha colour {c} outside 1..={}", k + 1))
            }
            None if !e_inner => return pre(format!("alpha misses outer edge {}-{}", e.0, e.1)),
            _ => {}
        }
    }

    let coloured_sum = |v: u32| -> u64 {
        g.neighbours(v)
            .filter_map(|y| alpha.get(EdgeKey::new(v, y)))
            .map(u64::from)
            .sum()
    };
    let colours_at = |v: u32| -> BTreeSet<u32> {
        g.neighbours(v)
            .filter_map(|y| alpha.get(EdgeKey::new(v, y)))
            .collect()
    };
    let s_u = coloured_sum(u);
    let fixed: Vec<u64> = ord.iter().map(|&v| coloured_sum(v)).collect();

    // Initial lists: strike colours of coloured edges sharing an endpoint
    // with uv_j; unmatched lists also lose every colour that would put v_j
    // in conflict with a neighbour other than u.
    let u_cols = colours_at(u);
    let mut lists: Vec<BTreeSet<u32>> = Vec::with_capacity(p);
    for (j, &v) in ord.iter().enumerate() {
        let mut list: BTreeSet<u32> = (1..=k + 1).collect();
        for c in &u_cols {
            list.remove(c);
        }
        for c in colours_at(v) {
            list.remove(&c);
        }
        if j >= paired {
            for y in g.neighbours(v).filter(|&y| y != u) {
                let clash = coloured_sum(y) as i64 - fixed[j] as i64;
                if (1..=k as i64 + 1).contains(&clash) {
                    list.remove(&(clash as u32));
                }
            }
        }
        lists.push(list);
    }

    let mut trims = vec![0i64; p];
    for &(v, c) in pretrims {
        let Some(j) = ord.iter().position(|&w| w == v) else {
            return pre(format!("pretrim names {v}, which is not in the selection"));
        };
        lists[j].remove(&c);
        trims[j] += 1;
    }

    // Pass (a): walk forward, striking each list's current minimum from
    // all later lists; at the first vertex of a pair, also strike from the
    // partner's list the colour that would tie the pair's sums no matter
    // how the connecting edge ends up coloured.
    for i in 0..p.saturating_sub(1) {
        let Some(&min_i) = lists[i].first() else {
            return pre(format!("list {i} emptied during pass (a)"));
        };
        for list in lists.iter_mut().skip(i + 1) {
            list.remove(&min_i);
        }
        if i % 2 == 0 && i + 1 < paired {
            let tie = fixed[i] as i64 + min_i as i64 - fixed[i + 1] as i64;
            if (1..=k as i64 + 1).contains(&tie) {
                lists[i + 1].remove(&(tie as u32));
            }
        }
    }
    // Pass (b): walk backward with maxima; at the second vertex of a pair,
    // strike the symmetric tie colour from the partner's list.
    for i in (1..p).rev() {
        let Some(&max_i) = lists[i].last() else {
            return pre(format!("list {i} emptied during pass (b)"));
        };
        for list in lists.iter_mut().take(i) {
            debug_assert_ne!(list.first(), Some(&max_i));
            list.remove(&max_i);
        }
        if i % 2 == 1 && i < paired {
            let tie = fixed[i] as i64 + max_i as i64 - fixed[i - 1] as i64;
            if (1..=k as i64 + 1).contains(&tie) {
                debug_assert_ne!(lists[i - 1].first(), Some(&(tie as u32)));
                lists[i - 1].remove(&(tie as u32));
            }
        }
    }

    // The floor every trimmed list must respect.
    for (j, &v) in ord.iter().enumerate() {
        let floor = k as i64 - du as i64 - 2 * g.degree(v) as i64 + 4 - trims[j];
        let len = lists[j].len() as i64;
        if len < floor.max(1) {
            return pre(format!(
                "trimmed list for {u}-{v} has {len} colours, below its floor \
                 k - d(u) - 2 d(v) + 4 - pretrims = {floor}"
            ));
        }
    }

    let sorted: Vec<Vec<u32>> = lists.iter().map(|l| l.iter().copied().collect()).collect();
    let mins: Vec<u32> = sorted.iter().map(|l| l[0]).collect();
    let maxes: Vec<u32> = sorted.iter().map(|l| *l.last().unwrap()).collect();

    // Staircase: sweep the last coordinate through its whole list, then
    // each earlier coordinate from its second value up with everything
    // after it pinned at maxima.  Sums strictly increase along the walk.
    let mut tuples: Vec<Vec<u32>> = Vec::new();
    for q in (0..p).rev() {
        let start = if q == p - 1 { 0 } else { 1 };
        for &c in &sorted[q][start..] {
            let mut t = Vec::with_capacity(p);
            t.extend_from_slice(&mins[..q]);
            t.push(c);
            t.extend_from_slice(&maxes[q + 1..]);
            tuples.push(t);
        }
    }
    let expected: i64 = sorted.iter().map(|l| l.len() as i64).sum::<i64>() - (p as i64 - 1);
    assert_eq!(tuples.len() as i64, expected);
    let sum_dv: i64 = ord.iter().map(|&v| g.degree(v) as i64).sum();
    let bound =
        1 + p as i64 * (k as i64 - du as i64 + 3) - 2 * sum_dv - trims.iter().sum::<i64>();
    assert!(
        tuples.len() as i64 >= bound,
        "staircase produced {} tuples, below the guaranteed {bound}",
        tuples.len()
    );

    let mut out = Vec::with_capacity(tuples.len());
    let mut last_sum = None;
    for tuple in &tuples {
        let mut work = alpha.clone();
        for (j, (&v, &c)) in ord.iter().zip(tuple).enumerate() {
            debug_assert!(lists[j].contains(&c));
            work.set(EdgeKey::new(u, v), c)?;
        }
        // Matched pairs: colour each connecting edge so both endpoints
        // stay proper and clash with none of their neighbours; the tie
        // trims already rule out a clash inside the pair itself.
        for t in (0..paired).step_by(2) {
            let (a, b) = (ord[t], ord[t + 1]);
            colour_connecting_edge(g, &mut work, a, b, k)?;
        }
        let sum_u = s_u + tuple.iter().map(|&c| u64::from(c)).sum::<u64>();
        debug_assert!(last_sum.is_none_or(|s| s < sum_u));
        last_sum = Some(sum_u);
        let colours = inner
            .iter()
            .map(|&e| {
                work.get(e).map(|c| (e, c)).ok_or(Error::PartialColouring(e))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(Extension { colours, sum_u });
    }
    Ok(out)
}

/// First palette colour for the pair edge `ab` that keeps both endpoints
/// proper and in conflict with none of their fully-coloured neighbours.
fn colour_connecting_edge(
    g: &Graph,
    work: &mut EdgeColouring,
    a: u32,
    b: u32,
    k: u32,
) -> Result<()> {
    let part_sum = |v: u32| -> u64 {
        g.neighbours(v)
            .filter_map(|y| work.get(EdgeKey::new(v, y)))
            .map(u64::from)
            .sum()
    };
    let s_a = part_sum(a);
    let s_b = part_sum(b);
    if s_a == s_b {
        return Err(Error::ExtensionFailed(format!(
            "pair {a}-{b} reached the connecting edge with tied sums"
        )));
    }
    let mut banned: BTreeSet<u32> = BTreeSet::new();
    for v in [a, b] {
        for y in g.neighbours(v) {
            if let Some(c) = work.get(EdgeKey::new(v, y)) {
                banned.insert(c);
            }
        }
    }
    for (v, s_v, other) in [(a, s_a, b), (b, s_b, a)] {
        for y in g.neighbours(v).filter(|&y| y != other) {
            let c = part_sum(y) as i64 - s_v as i64;
            if (1..=k as i64 + 1).contains(&c) {
                banned.insert(c as u32);
            }
        }
    }
    let Some(c) = (1..=k + 1).find(|c| !banned.contains(c)) else {
        return Err(Error::ExtensionFailed(format!(
            "no colour left for connecting edge {a}-{b}"
        )));
    };
    work.set(EdgeKey::new(a, b), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{is_nsd_skipping_isolated_edges, is_proper, weighted_degree};
    use crate::solver::colour_by_minimality;

    /// Hub of degree `du` whose selected neighbours have the prescribed
    /// degrees, padded with pendant filler; selected neighbours reach
    /// their degrees through chains of high-degree anchors.
    fn gadget(du: usize, sel_degs: &[usize], pair: bool) -> (Graph, u32, Vec<u32>) {
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
                // anchor the filler so it is not an isolated edge after
                // removing the inner edges
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

    fn strip_inner(g: &Graph, u: u32, vs: &[u32]) -> Graph {
        let mut set: Vec<u32> = vs.to_vec();
        set.push(u);
        let inner: Vec<EdgeKey> = g
            .edges()
            .filter(|e| set.contains(&e.0) && set.contains(&e.1))
            .collect();
        g.remove_edges(&inner).unwrap()
    }

    fn check_all(g: &Graph, alpha: &EdgeColouring, u: u32, vs: &[u32], exts: &[Extension]) {
        let mut prev = None;
        for ext in exts {
            let col = ext.applied_to(alpha).unwrap();
            assert!(col.is_total(g));
            assert!(is_proper(g, &col).unwrap());
            assert_eq!(weighted_degree(g, &col, u).unwrap(), ext.sum_u);
            assert!(prev.is_none_or(|s| s < ext.sum_u));
            prev = Some(ext.sum_u);
            for &v in vs {
                for y in g.neighbours(v).filter(|&y| y != u) {
                    assert_ne!(
                        weighted_degree(g, &col, v).unwrap(),
                        weighted_degree(g, &col, y).unwrap(),
                        "conflict at {v}-{y}"
                    );
                }
            }
        }
    }

    #[test]
    fn single_pendant_edge_count_matches_formula() {
        let (g, u, vs) = gadget(10, &[2], false);
        let h = strip_inner(&g, u, &vs);
        let alpha = colour_by_minimality(&h, 29).unwrap();
        let exts = lemma1_extensions(&g, &alpha, u, &vs, 28).unwrap();
        assert!(exts.len() >= 18);
        check_all(&g, &alpha, u, &vs, &exts);
    }

    #[test]
    fn two_unmatched_neighbours() {
        let (g, u, vs) = gadget(10, &[2, 2], false);
        let h = strip_inner(&g, u, &vs);
        let alpha = colour_by_minimality(&h, 29).unwrap();
        let exts = lemma1_extensions(&g, &alpha, u, &vs, 28).unwrap();
        assert!(exts.len() >= 35);
        check_all(&g, &alpha, u, &vs, &exts);
    }

    #[test]
    fn matched_pair_respects_floor_and_validity() {
        let (g, u, vs) = gadget(10, &[2, 2], true);
        let h = strip_inner(&g, u, &vs);
        let alpha = colour_by_minimality(&h, 29).unwrap();
        let exts = lemma1_extensions(&g, &alpha, u, &vs, 28).unwrap();
        assert!(exts.len() as i64 >= 1 + 2 * (28 - 10 + 3) - 2 * 4);
        check_all(&g, &alpha, u, &vs, &exts);
        // partners never tie
        for ext in &exts {
            let col = ext.applied_to(&alpha).unwrap();
            assert_ne!(
                weighted_degree(&g, &col, vs[0]).unwrap(),
                weighted_degree(&g, &col, vs[1]).unwrap()
            );
        }
    }

    #[test]
    fn pretrims_shrink_count_by_at_most_their_number() {
        let (g, u, vs) = gadget(10, &[2, 2], false);
        let h = strip_inner(&g, u, &vs);
        let alpha = colour_by_minimality(&h, 29).unwrap();
        let plain = lemma1_extensions(&g, &alpha, u, &vs, 28).unwrap().len();
        let trimmed = lemma1_with_trims(&g, &alpha, u, &vs, 28, &[(vs[0], 3), (vs[1], 7)])
            .unwrap()
            .len();
        assert!(trimmed as i64 >= plain as i64 - 2);
        assert!(trimmed as i64 >= 1 + 2 * (28 - 10 + 3) - 2 * 4 - 2);
    }

    #[test]
    fn precondition_failures_name_the_inequality() {
        let (g, u, vs) = gadget(30, &[2], false);
        let h = strip_inner(&g, u, &vs);
        let alpha = colour_by_minimality(&h, 31).unwrap();
        let err = lemma1_extensions(&g, &alpha, u, &vs, 28).unwrap_err();
        match err {
            Error::ListPrecondition(msg) => assert!(msg.contains("d(u) <= k - 2 d(v) + 3")),
            other => panic!("unexpected error {other:?}"),
        }
        let err = lemma1_extensions(&g, &alpha, u, &vs, 10).unwrap_err();
        match err {
            Error::ListPrecondition(msg) => assert!(msg.contains("k >= 20")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_alpha_with_inner_colour() {
        let (g, u, vs) = gadget(10, &[2], false);
        let alpha = colour_by_minimality(&g, 29).unwrap();
        let err = lemma1_extensions(&g, &alpha, u, &vs, 28).unwrap_err();
        assert!(matches!(err, Error::ListPrecondition(_)));
    }

    #[test]
    fn degree_six_selection_still_meets_bound() {
        let (g, u, vs) = gadget(12, &[6, 6], true);
        let h = strip_inner(&g, u, &vs);
        let alpha = colour_by_minimality(&h, 31).unwrap();
        assert!(is_nsd_skipping_isolated_edges(&h, &alpha).unwrap());
        let exts = lemma1_extensions(&g, &alpha, u, &vs, 30).unwrap();
        assert!(exts.len() as i64 >= 1 + 2 * (30 - 12 + 3) - 2 * 12);
        check_all(&g, &alpha, u, &vs, &exts);
    }

    #[test]
    fn respects_budget_free_purity() {
        // same inputs, same outputs
        let (g, u, vs) = gadget(10, &[3, 2], false);
        let h = strip_inner(&g, u, &vs);
        let alpha = colour_by_minimality(&h, 29).unwrap();
        let a = lemma1_extensions(&g, &alpha, u, &vs, 28).unwrap();
        let b = lemma1_extensions(&g, &alpha, u, &vs, 28).unwrap();
        assert_eq!(a.len(), b.len());
        assert!(a
            .iter()
            .zip(&b)
            .all(|(x, y)| x.sum_u == y.sum_u && x.colours == y.colours));
    }
}
