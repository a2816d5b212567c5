//! The nine local repair procedures.  Each performs its surgery, asks the
//! provider for a colouring of the strictly smaller graph, pulls it back
//! and repairs the seam.  A repair that cannot be completed reports
//! `ExtensionFailed`; the driver then falls back to plain search.

use super::lemma1::{lemma1_extensions, lemma1_with_trims, Extension};
use crate::colouring::{self, EdgeColouring};
use crate::config::{ConfigKind, ConfigurationWitness};
use crate::graph::{EdgeKey, Graph};
use crate::{Error, Result};
use std::collections::BTreeSet;

/// Recursive colouring source: hands back an nsd `(k+1)`-colouring of a
/// strictly smaller graph, isolated edges coloured arbitrarily.
pub type Provider<'a> = dyn FnMut(&Graph) -> Result<EdgeColouring> + 'a;

/// Dispatches a witness to the reducer for its kind.
pub fn reduce(
    g: &Graph,
    w: &ConfigurationWitness,
    k: u32,
    provider: &mut Provider,
) -> Result<EdgeColouring> {
    match w.kind {
        ConfigKind::C1 => reduce_c1(g, w, k, provider),
        ConfigKind::C2 => reduce_c2(g, w, k, provider),
        ConfigKind::C3 => reduce_c3(g, w, k, provider),
        ConfigKind::C4 => reduce_c4(g, w, k, provider),
        ConfigKind::C5 => reduce_c5(g, w, k, provider),
        ConfigKind::C6 => reduce_c6(g, w, k, provider),
        ConfigKind::C7 => reduce_c7(g, w, k, provider),
        ConfigKind::C8 => reduce_c8(g, w, k, provider),
        ConfigKind::C9 => reduce_c9(g, w, k, provider),
    }
}

fn ensure_witness(g: &Graph, w: &ConfigurationWitness, k: u32) -> Result<()> {
    if w.verify(g, k) {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "stale {} witness at u = {}",
            w.kind, w.u
        )))
    }
}

fn want(role: Option<u32>, what: &str) -> Result<u32> {
    role.ok_or_else(|| Error::Parameter(format!("witness lacks role {what}")))
}

fn got(col: &EdgeColouring, e: EdgeKey) -> Result<u32> {
    col.get(e).ok_or(Error::PartialColouring(e))
}

fn coloured_sum(g: &Graph, col: &EdgeColouring, v: u32) -> u64 {
    g.neighbours(v)
        .filter_map(|y| col.get(EdgeKey::new(v, y)))
        .map(u64::from)
        .sum()
}

fn colour_set(g: &Graph, col: &EdgeColouring, v: u32) -> BTreeSet<u32> {
    g.neighbours(v)
        .filter_map(|y| col.get(EdgeKey::new(v, y)))
        .collect()
}

fn swap_colours(col: &mut EdgeColouring, e1: EdgeKey, e2: EdgeKey) -> Result<()> {
    let c1 = got(col, e1)?;
    let c2 = got(col, e2)?;
    col.set(e1, c2)?;
    col.set(e2, c1)
}

/// The single neighbour of `v` outside `not`, if there is exactly one.
fn lone_neighbour(g: &Graph, v: u32, not: &[u32]) -> Result<u32> {
    let mut it = g.neighbours(v).filter(|y| !not.contains(y));
    match (it.next(), it.next()) {
        (Some(y), None) => Ok(y),
        _ => Err(Error::Parameter(format!(
            "vertex {v} does not have exactly one neighbour outside {not:?}"
        ))),
    }
}

fn finish(g: &Graph, col: EdgeColouring, what: &str) -> Result<EdgeColouring> {
    if let Some(e) = col.missing_edge(g) {
        return Err(Error::ExtensionFailed(format!(
            "{what}: edge {}-{} left uncoloured",
            e.0, e.1
        )));
    }
    if !colouring::is_proper(g, &col)? {
        return Err(Error::ExtensionFailed(format!(
            "{what}: repair broke properness"
        )));
    }
    if !colouring::is_nsd_skipping_isolated_edges(g, &col)? {
        return Err(Error::ExtensionFailed(format!(
            "{what}: repair left a sum conflict"
        )));
    }
    Ok(col)
}

/// Copies `alpha` (a colouring of `g` minus `removed`) onto a fresh
/// colouring of `g`, leaving `removed` open.
fn pull_back_identity(g: &Graph, alpha: &EdgeColouring, removed: &[EdgeKey]) -> Result<EdgeColouring> {
    let mut col = EdgeColouring::new(alpha.palette());
    for e in g.edges() {
        if removed.contains(&e) {
            continue;
        }
        col.set(e, got(alpha, e)?)?;
    }
    Ok(col)
}

/// Picks the first extension whose sum at `u` dodges every forbidden value
/// and whose application survives full validation.
fn pick_extension(
    g: &Graph,
    alpha: &EdgeColouring,
    exts: &[Extension],
    forbidden: &BTreeSet<u64>,
    what: &str,
) -> Result<EdgeColouring> {
    for ext in exts {
        if forbidden.contains(&ext.sum_u) {
            continue;
        }
        let col = ext.applied_to(alpha)?;
        if let Ok(done) = finish(g, col, what) {
            return Ok(done);
        }
    }
    Err(Error::ExtensionFailed(format!(
        "{what}: none of {} extensions cleared the neighbour sums",
        exts.len()
    )))
}

/// A vertex with two low-degree neighbours `w`, `x`: delete the edges
/// towards them (and `wx` when present), recolour via the staircase.  In
/// the non-adjacent case two extra list trims rule out conflicts of `u`
/// with `w` and `x` themselves.
pub fn reduce_c1(
    g: &Graph,
    wit: &ConfigurationWitness,
    k: u32,
    provider: &mut Provider,
) -> Result<EdgeColouring> {
    ensure_witness(g, wit, k)?;
    let u = wit.u;
    let wv = want(wit.role1("w"), "w")?;
    let x = want(wit.role1("x"), "x")?;
    let adjacent = g.has_edge(wv, x);
    let mut removed = vec![EdgeKey::new(u, wv), EdgeKey::new(u, x)];
    if adjacent {
        removed.push(EdgeKey::new(wv, x));
    }
    let h = g.remove_edges(&removed)?;
    let alpha = provider(&h)?;
    let exts = if adjacent {
        lemma1_extensions(g, &alpha, u, &[wv, x], k)?
    } else {
        let s_u = coloured_sum(g, &alpha, u) as i64;
        let mut trims = Vec::new();
        // a conflict of u with w depends only on the colour of ux, and
        // symmetrically; strike those colours up front
        for (list_v, other) in [(x, wv), (wv, x)] {
            let c = coloured_sum(g, &alpha, other) as i64 - s_u;
            if (1..=k as i64 + 1).contains(&c) {
                trims.push((list_v, c as u32));
            }
        }
        lemma1_with_trims(g, &alpha, u, &[wv, x], k, &trims)?
    };
    let forbidden: BTreeSet<u64> = g
        .neighbours(u)
        .filter(|&y| y != wv && y != x)
        .map(|y| coloured_sum(g, &alpha, y))
        .collect();
    pick_extension(g, &alpha, &exts, &forbidden, "C1")
}

/// A vertex with a pendant neighbour `v` and a degree-2 neighbour `w`:
/// split `w`, pull back, then either recolour the freed far edge or swap
/// the two near colours.
pub fn reduce_c2(
    g: &Graph,
    wit: &ConfigurationWitness,
    k: u32,
    provider: &mut Provider,
) -> Result<EdgeColouring> {
    ensure_witness(g, wit, k)?;
    let u = wit.u;
    let v = want(wit.role1("v"), "v")?;
    let wv = want(wit.role1("w"), "w")?;
    let x = lone_neighbour(g, wv, &[u])?;
    let (h, pendants) = g.vertex_split(wv)?;
    let alpha = provider(&h)?;
    let pendant_for = |n: u32| -> Result<u32> {
        pendants
            .iter()
            .find(|&&(m, _)| m == n)
            .map(|&(_, p)| p)
            .ok_or_else(|| Error::Parameter(format!("split lost the pendant for {n}")))
    };
    let e_uw = EdgeKey::new(u, wv);
    let e_wx = EdgeKey::new(wv, x);
    let e_uv = EdgeKey::new(u, v);
    let mut col = EdgeColouring::new(alpha.palette());
    for e in g.edges() {
        let src = if e == e_uw {
            EdgeKey::new(u, pendant_for(u)?)
        } else if e == e_wx {
            EdgeKey::new(x, pendant_for(x)?)
        } else {
            e
        };
        col.set(e, got(&alpha, src)?)?;
    }
    let s_x = coloured_sum(g, &col, x) - u64::from(got(&col, e_wx)?);
    if 2 * g.degree(x) <= k as usize {
        if u64::from(got(&col, e_uw)?) == s_x {
            swap_colours(&mut col, e_uv, e_uw)?;
        }
        col.unset(e_wx);
        let x_cols = colour_set(g, &col, x);
        let c_uw = got(&col, e_uw)?;
        let mut candidates = Vec::new();
        for c in 1..=k + 1 {
            if c == c_uw || x_cols.contains(&c) {
                continue;
            }
            let clash = g
                .neighbours(x)
                .filter(|&y| y != wv)
                .any(|y| s_x + u64::from(c) == coloured_sum(g, &col, y));
            if !clash {
                candidates.push(c);
            }
        }
        if candidates.len() < 2 {
            return Err(Error::ExtensionFailed(format!(
                "C2: only {} colours left for the freed edge",
                candidates.len()
            )));
        }
        col.set(e_wx, candidates[0])?;
    } else if got(&col, e_uw)? == got(&col, e_wx)? {
        swap_colours(&mut col, e_uv, e_uw)?;
    }
    finish(g, col, "C2")
}

/// Two adjacent degree-2 vertices: remove or contract their edge, then
/// recolour it dodging at most four constraints.
pub fn reduce_c3(
    g: &Graph,
    wit: &ConfigurationWitness,
    k: u32,
    provider: &mut Provider,
) -> Result<EdgeColouring> {
    ensure_witness(g, wit, k)?;
    let v = want(wit.role1("v"), "v")?;
    let wv = want(wit.role1("w"), "w")?;
    let u = lone_neighbour(g, v, &[wv])?;
    let x = lone_neighbour(g, wv, &[v])?;
    let e_vw = EdgeKey::new(v, wv);
    let e_uv = EdgeKey::new(u, v);
    let e_wx = EdgeKey::new(wv, x);
    let mut col = if u == x {
        let h = g.remove_edges(&[e_vw])?;
        let alpha = provider(&h)?;
        pull_back_identity(g, &alpha, &[e_vw])?
    } else {
        let (h, keep) = g.contract_edge(v, wv)?;
        if h.edge_count() != g.edge_count() - 1 {
            return Err(Error::ExtensionFailed(
                "C3: contraction merged parallel edges".into(),
            ));
        }
        let alpha = provider(&h)?;
        let gone = v.max(wv);
        let mut col = EdgeColouring::new(alpha.palette());
        for e in g.edges() {
            if e == e_vw {
                continue;
            }
            let map = |z: u32| if z == gone { keep } else { z };
            col.set(e, got(&alpha, EdgeKey::new(map(e.0), map(e.1)))?)?;
        }
        col
    };
    let c_uv = got(&col, e_uv)?;
    let c_wx = got(&col, e_wx)?;
    if c_uv == c_wx {
        return Err(Error::ExtensionFailed(
            "C3: boundary edges came back equally coloured".into(),
        ));
    }
    let sum_u = coloured_sum(g, &col, u);
    let sum_x = coloured_sum(g, &col, x);
    let pick = (1..=k + 1).find(|&c| {
        c != c_uv
            && c != c_wx
            && u64::from(c_uv) + u64::from(c) != sum_u
            && u64::from(c_wx) + u64::from(c) != sum_x
    });
    match pick {
        Some(c) => {
            col.set(e_vw, c)?;
            finish(g, col, "C3")
        }
        None => Err(Error::ExtensionFailed(
            "C3: no colour for the reinserted edge".into(),
        )),
    }
}

/// Two degree-2 vertices sharing both neighbours: split them both; if a
/// pulled-back colour repeats at one of them, one swap fixes both.
pub fn reduce_c4(
    g: &Graph,
    wit: &ConfigurationWitness,
    k: u32,
    provider: &mut Provider,
) -> Result<EdgeColouring> {
    ensure_witness(g, wit, k)?;
    let v = want(wit.role1("v"), "v")?;
    let x = want(wit.role1("x"), "x")?;
    let shared = wit
        .role("shared")
        .ok_or_else(|| Error::Parameter("witness lacks role shared".into()))?;
    let &[u, wv] = shared else {
        return Err(Error::Parameter("role shared must name two vertices".into()));
    };
    let (h1, pend_v) = g.vertex_split(v)?;
    let (h, pend_x) = h1.vertex_split(x)?;
    let alpha = provider(&h)?;
    let from = |pends: &[(u32, u32)], n: u32| -> Result<u32> {
        pends
            .iter()
            .find(|&&(m, _)| m == n)
            .map(|&(_, p)| p)
            .ok_or_else(|| Error::Parameter(format!("split lost the pendant for {n}")))
    };
    let e_uv = EdgeKey::new(u, v);
    let e_vw = EdgeKey::new(v, wv);
    let e_ux = EdgeKey::new(u, x);
    let e_xw = EdgeKey::new(x, wv);
    let mut col = EdgeColouring::new(alpha.palette());
    for e in g.edges() {
        let src = if e == e_uv {
            EdgeKey::new(u, from(&pend_v, u)?)
        } else if e == e_vw {
            EdgeKey::new(wv, from(&pend_v, wv)?)
        } else if e == e_ux {
            EdgeKey::new(u, from(&pend_x, u)?)
        } else if e == e_xw {
            EdgeKey::new(wv, from(&pend_x, wv)?)
        } else {
            e
        };
        col.set(e, got(&alpha, src)?)?;
    }
    if got(&col, e_uv)? == got(&col, e_vw)? || got(&col, e_ux)? == got(&col, e_xw)? {
        swap_colours(&mut col, e_uv, e_ux)?;
    }
    finish(g, col, "C4")
}

/// A triangle with a degree-2 corner `a` and a low corner `b`: delete
/// `ab`, possibly swap the two edges at the third corner, recolour `ab`.
pub fn reduce_c5(
    g: &Graph,
    wit: &ConfigurationWitness,
    k: u32,
    provider: &mut Provider,
) -> Result<EdgeColouring> {
    ensure_witness(g, wit, k)?;
    let tri = wit
        .role("triangle")
        .ok_or_else(|| Error::Parameter("witness lacks role triangle".into()))?;
    let a = want(wit.role1("deg2"), "deg2")?;
    let b = want(wit.role1("low"), "low")?;
    let u = tri
        .iter()
        .copied()
        .find(|&t| t != a && t != b)
        .ok_or_else(|| Error::Parameter("triangle lacks a third vertex".into()))?;
    let e_ua = EdgeKey::new(u, a);
    let e_ub = EdgeKey::new(u, b);
    let e_ab = EdgeKey::new(a, b);
    let h = g.remove_edges(&[e_ab])?;
    let alpha = provider(&h)?;
    let mut col = pull_back_identity(g, &alpha, &[e_ab])?;
    if u64::from(got(&col, e_ua)?) == coloured_sum(g, &col, b) {
        swap_colours(&mut col, e_ua, e_ub)?;
    }
    let s_b = coloured_sum(g, &col, b);
    let c_ua = got(&col, e_ua)?;
    if u64::from(c_ua) == s_b {
        return Err(Error::ExtensionFailed(
            "C5: swap failed to break the standing tie".into(),
        ));
    }
    let b_cols = colour_set(g, &col, b);
    let sum_u = coloured_sum(g, &col, u);
    let pick = (1..=k + 1).find(|&c| {
        c != c_ua
            && !b_cols.contains(&c)
            && u64::from(c_ua) + u64::from(c) != sum_u
            && !g
                .neighbours(b)
                .filter(|&y| y != a)
                .any(|y| s_b + u64::from(c) == coloured_sum(g, &col, y))
    });
    match pick {
        Some(c) => {
            col.set(e_ab, c)?;
            finish(g, col, "C5")
        }
        None => Err(Error::ExtensionFailed(
            "C5: no colour for the reinserted edge".into(),
        )),
    }
}

/// An adjacent degree-3 pair `v`, `w` under `u` next to a low vertex `x`:
/// delete `vw`, untie the pair's sums by a swap (routed through `ux` in
/// the hard case), then recolour `vw`.
pub fn reduce_c6(
    g: &Graph,
    wit: &ConfigurationWitness,
    k: u32,
    provider: &mut Provider,
) -> Result<EdgeColouring> {
    ensure_witness(g, wit, k)?;
    let u = wit.u;
    let v = want(wit.role1("v"), "v")?;
    let wv = want(wit.role1("w"), "w")?;
    let x = want(wit.role1("x"), "x")?;
    let v3 = lone_neighbour(g, v, &[u, wv])?;
    let w3 = lone_neighbour(g, wv, &[u, v])?;
    let e_vw = EdgeKey::new(v, wv);
    let e_uv = EdgeKey::new(u, v);
    let e_uw = EdgeKey::new(u, wv);
    let e_ux = EdgeKey::new(u, x);
    let e_vv3 = EdgeKey::new(v, v3);
    let e_ww3 = EdgeKey::new(wv, w3);
    let h = g.remove_edges(&[e_vw])?;
    let alpha = provider(&h)?;
    let mut col = pull_back_identity(g, &alpha, &[e_vw])?;
    let pair_sums = |col: &EdgeColouring| -> Result<(u64, u64)> {
        Ok((
            u64::from(got(col, e_uv)?) + u64::from(got(col, e_vv3)?),
            u64::from(got(col, e_uw)?) + u64::from(got(col, e_ww3)?),
        ))
    };
    let (s_v, s_w) = pair_sums(&col)?;
    if s_v == s_w {
        if got(&col, e_uv)? != got(&col, e_ww3)? || got(&col, e_uw)? != got(&col, e_vv3)? {
            swap_colours(&mut col, e_uv, e_uw)?;
        } else if g.degree(x) == 1 {
            // no far side to disturb; either route works
            swap_colours(&mut col, e_ux, e_uv)?;
        } else {
            let y = lone_neighbour(g, x, &[u])?;
            let e_xy = EdgeKey::new(x, y);
            if 2 * g.degree(y) > k as usize {
                let route = if got(&col, e_uv)? != got(&col, e_xy)? {
                    e_uv
                } else {
                    e_uw
                };
                swap_colours(&mut col, e_ux, route)?;
            } else {
                let s_y1 = coloured_sum(g, &col, y) - u64::from(got(&col, e_xy)?);
                let route = if u64::from(got(&col, e_uv)?) != s_y1 {
                    e_uv
                } else {
                    e_uw
                };
                swap_colours(&mut col, e_ux, route)?;
                if got(&col, e_ux)? == got(&col, e_xy)? {
                    col.unset(e_xy);
                    let y_cols = colour_set(g, &col, y);
                    let c_ux = got(&col, e_ux)?;
                    let s_y2 = coloured_sum(g, &col, y);
                    let pick = (1..=k + 1).find(|&c| {
                        c != c_ux
                            && !y_cols.contains(&c)
                            && !g
                                .neighbours(y)
                                .filter(|&z| z != x && z != v && z != wv)
                                .any(|z| s_y2 + u64::from(c) == coloured_sum(g, &col, z))
                    });
                    let Some(c) = pick else {
                        return Err(Error::ExtensionFailed(
                            "C6: no replacement colour on the far side".into(),
                        ));
                    };
                    col.set(e_xy, c)?;
                }
            }
        }
    }
    let (s_v, s_w) = pair_sums(&col)?;
    if s_v == s_w {
        return Err(Error::ExtensionFailed("C6: pair sums still tied".into()));
    }
    let v_cols = [got(&col, e_uv)?, got(&col, e_vv3)?];
    let w_cols = [got(&col, e_uw)?, got(&col, e_ww3)?];
    let pick = (1..=k + 1).find(|&c| {
        !v_cols.contains(&c)
            && !w_cols.contains(&c)
            && !g
                .neighbours(v)
                .filter(|&y| y != wv)
                .any(|y| s_v + u64::from(c) == coloured_sum(g, &col, y))
            && !g
                .neighbours(wv)
                .filter(|&y| y != v)
                .any(|y| s_w + u64::from(c) == coloured_sum(g, &col, y))
    });
    match pick {
        Some(c) => {
            col.set(e_vw, c)?;
            finish(g, col, "C6")
        }
        None => Err(Error::ExtensionFailed(
            "C6: no colour for the pair edge".into(),
        )),
    }
}

/// Two disjoint adjacent degree-3 pairs under `u`: delete both pair
/// edges, search the permutations of the four colours at `u` for one that
/// unties both pairs, then colour the two pair edges jointly.
pub fn reduce_c7(
    g: &Graph,
    wit: &ConfigurationWitness,
    k: u32,
    provider: &mut Provider,
) -> Result<EdgeColouring> {
    ensure_witness(g, wit, k)?;
    let u = wit.u;
    let p1 = wit
        .role("pair1")
        .ok_or_else(|| Error::Parameter("witness lacks role pair1".into()))?;
    let p2 = wit
        .role("pair2")
        .ok_or_else(|| Error::Parameter("witness lacks role pair2".into()))?;
    let (&[v1, w1], &[v2, w2]) = (p1, p2) else {
        return Err(Error::Parameter("pair roles must name two vertices".into()));
    };
    let quad = [v1, w1, v2, w2];
    let e_p1 = EdgeKey::new(v1, w1);
    let e_p2 = EdgeKey::new(v2, w2);
    let h = g.remove_edges(&[e_p1, e_p2])?;
    let alpha = provider(&h)?;
    let base = pull_back_identity(g, &alpha, &[e_p1, e_p2])?;
    let thirds = [
        lone_neighbour(g, v1, &[u, w1])?,
        lone_neighbour(g, w1, &[u, v1])?,
        lone_neighbour(g, v2, &[u, w2])?,
        lone_neighbour(g, w2, &[u, v2])?,
    ];
    let u_edges: Vec<EdgeKey> = quad.iter().map(|&q| EdgeKey::new(u, q)).collect();
    let u_colours: Vec<u32> = u_edges
        .iter()
        .map(|&e| got(&base, e))
        .collect::<Result<_>>()?;
    let third_colours: Vec<u32> = quad
        .iter()
        .zip(&thirds)
        .map(|(&q, &t)| got(&base, EdgeKey::new(q, t)))
        .collect::<Result<_>>()?;
    let sum_u = coloured_sum(g, &base, u);
    for perm in permutations4() {
        let assigned: Vec<u32> = perm.iter().map(|&i| u_colours[i]).collect();
        if assigned
            .iter()
            .zip(&third_colours)
            .any(|(&c, &t)| c == t)
        {
            continue;
        }
        let s: Vec<u64> = assigned
            .iter()
            .zip(&third_colours)
            .map(|(&c, &t)| u64::from(c) + u64::from(t))
            .collect();
        if s[0] == s[1] || s[2] == s[3] {
            continue;
        }
        let mut work = base.clone();
        for (&e, &c) in u_edges.iter().zip(&assigned) {
            work.set(e, c)?;
        }
        if let Some((ca, cb)) = joint_pair_scan(g, &work, k, u, sum_u, &quad, &s) {
            work.set(e_p1, ca)?;
            work.set(e_p2, cb)?;
            return finish(g, work, "C7");
        }
    }
    Err(Error::ExtensionFailed(
        "C7: no permutation untied both pairs with colourable pair edges".into(),
    ))
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Finds colours for the two pair edges so all four pair vertices dodge
/// every neighbour, or reports that this permutation admits none.
#[allow(clippy::too_many_arguments)]
fn joint_pair_scan(
    g: &Graph,
    work: &EdgeColouring,
    k: u32,
    u: u32,
    sum_u_fixed: u64,
    quad: &[u32; 4],
    s: &[u64],
) -> Option<(u32, u32)> {
    let pair_of = |z: u32| -> Option<usize> {
        quad.iter().position(|&q| q == z).map(|i| i / 2)
    };
    let cols = |v: u32| colour_set(g, work, v);
    let banned_a: BTreeSet<u32> = cols(quad[0]).union(&cols(quad[1])).copied().collect();
    let banned_b: BTreeSet<u32> = cols(quad[2]).union(&cols(quad[3])).copied().collect();
    for ca in 1..=k + 1 {
        if banned_a.contains(&ca) {
            continue;
        }
        for cb in 1..=k + 1 {
            if banned_b.contains(&cb) {
                continue;
            }
            let bonus = |z: u32| -> u64 {
                match pair_of(z) {
                    Some(0) => u64::from(ca),
                    Some(1) => u64::from(cb),
                    _ => 0,
                }
            };
            let mut ok = true;
            'quad: for (i, &q) in quad.iter().enumerate() {
                let sum_q = s[i] + if i < 2 { u64::from(ca) } else { u64::from(cb) };
                for y in g.neighbours(q) {
                    let sum_y = if y == u {
                        sum_u_fixed
                    } else if Some(i / 2) == pair_of(y) {
                        // partner; the tie was broken before the pair edge
                        continue;
                    } else {
                        coloured_sum(g, work, y) + bonus(y)
                    };
                    if sum_q == sum_y {
                        ok = false;
                        break 'quad;
                    }
                }
            }
            if ok {
                return Some((ca, cb));
            }
        }
    }
    None
}

/// A heavy vertex with pendants and a degree-`r` neighbour `v`: disjoin
/// `uv`, then trade `uv`'s colour with whichever pendant colour suits `v`.
pub fn reduce_c8(
    g: &Graph,
    wit: &ConfigurationWitness,
    k: u32,
    provider: &mut Provider,
) -> Result<EdgeColouring> {
    ensure_witness(g, wit, k)?;
    let u = wit.u;
    let v = want(wit.role1("v"), "v")?;
    let e_uv = EdgeKey::new(u, v);
    let (h, fresh) = g.disjoin_edge(u, v)?;
    let alpha = provider(&h)?;
    let mut col = EdgeColouring::new(alpha.palette());
    for e in g.edges() {
        let src = if e == e_uv {
            EdgeKey::new(u, fresh)
        } else {
            e
        };
        col.set(e, got(&alpha, src)?)?;
    }
    let s_v = coloured_sum(g, &col, v) - u64::from(got(&col, e_uv)?);
    let v_cols: BTreeSet<u32> = g
        .neighbours(v)
        .filter(|&y| y != u)
        .filter_map(|y| col.get(EdgeKey::new(v, y)))
        .collect();
    let mut candidates = vec![(e_uv, got(&col, e_uv)?)];
    for y in g.neighbours(u).filter(|&y| g.degree(y) == 1) {
        let e = EdgeKey::new(u, y);
        candidates.push((e, got(&col, e)?));
    }
    let chosen = candidates.iter().find(|&&(_, c)| {
        !v_cols.contains(&c)
            && !g
                .neighbours(v)
                .filter(|&z| z != u)
                .any(|z| s_v + u64::from(c) == coloured_sum(g, &col, z))
    });
    match chosen {
        Some(&(e, _)) => {
            if e != e_uv {
                swap_colours(&mut col, e_uv, e)?;
            }
            finish(g, col, "C8")
        }
        None => Err(Error::ExtensionFailed(
            "C8: no pendant colour fits the rejoined edge".into(),
        )),
    }
}

/// A heavy vertex with many low neighbours: delete every edge inside the
/// selection, recolour by the staircase, pick the extension whose sum at
/// `u` dodges the untouched neighbours.
pub fn reduce_c9(
    g: &Graph,
    wit: &ConfigurationWitness,
    k: u32,
    provider: &mut Provider,
) -> Result<EdgeColouring> {
    ensure_witness(g, wit, k)?;
    let u = wit.u;
    let vs = wit
        .role("vs")
        .ok_or_else(|| Error::Parameter("witness lacks role vs".into()))?
        .to_vec();
    let mut set: BTreeSet<u32> = vs.iter().copied().collect();
    set.insert(u);
    let removed: Vec<EdgeKey> = g
        .edges()
        .filter(|e| set.contains(&e.0) && set.contains(&e.1))
        .collect();
    let h = g.remove_edges(&removed)?;
    let alpha = provider(&h)?;
    let exts = lemma1_extensions(g, &alpha, u, &vs, k)?;
    let forbidden: BTreeSet<u64> = g
        .neighbours(u)
        .filter(|y| !vs.contains(y))
        .map(|y| coloured_sum(g, &alpha, y))
        .collect();
    pick_extension(g, &alpha, &exts, &forbidden, "C9")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{is_nsd, is_proper};
    use crate::config::detect_kind;
    use crate::reduce::{construct_nsd, conflict_bound};
    use crate::solver::{colour_by_minimality, SolveBudget};
    use std::time::Duration;

    fn backtracking_provider(k: u32) -> impl FnMut(&Graph) -> Result<EdgeColouring> {
        move |h: &Graph| colour_by_minimality(h, k + 1)
    }

    fn wheel(rim: usize) -> Graph {
        let mut g = Graph::with_vertices(rim + 1);
        for i in 1..=rim as u32 {
            g.add_edge(0, i).unwrap();
            let next = if i == rim as u32 { 1 } else { i + 1 };
            g.add_edge(i, next).unwrap();
        }
        g
    }

    fn add_pendants(g: &mut Graph, v: u32, n: usize) {
        for _ in 0..n {
            let p = g.add_vertex();
            g.add_edge(v, p).unwrap();
        }
    }

    /// Attaches a fresh degree-2 chain vertex to `v`, anchored on a new
    /// three-edge claw so it never forms an isolated edge after surgery.
    fn add_chain(g: &mut Graph, v: u32) -> u32 {
        let c = g.add_vertex();
        g.add_edge(v, c).unwrap();
        let a = g.add_vertex();
        g.add_edge(c, a).unwrap();
        add_pendants(g, a, 2);
        c
    }

    #[test]
    fn c1_adjacent_pair_on_wheel() {
        let g = wheel(30);
        let k = 30;
        // rim vertices have degree 3 but their rim neighbours are not
        // adjacent; build one chord to force the adjacent case
        let mut g2 = g.clone();
        g2.add_edge(2, 30).unwrap();
        let wits = crate::config::detect_c1(&g2, k, 64);
        let wit = wits
            .iter()
            .find(|w| {
                let wv = w.role1("w").unwrap();
                let x = w.role1("x").unwrap();
                g2.has_edge(wv, x)
            })
            .expect("adjacent low pair");
        let col = reduce_c1(&g2, wit, k, &mut backtracking_provider(k)).unwrap();
        assert!(is_nsd(&g2, &col).unwrap());
    }

    #[test]
    fn c1_non_adjacent_pair_on_wheel() {
        let g = wheel(30);
        let k = 30;
        let wits = crate::config::detect_c1(&g, k, 64);
        let wit = wits
            .iter()
            .find(|w| {
                let wv = w.role1("w").unwrap();
                let x = w.role1("x").unwrap();
                !g.has_edge(wv, x)
            })
            .expect("non-adjacent low pair");
        let col = reduce_c1(&g, wit, k, &mut backtracking_provider(k)).unwrap();
        assert!(is_nsd(&g, &col).unwrap());
    }

    #[test]
    fn c2_near_and_far_cases() {
        // far end light: d(x) <= k/2
        let mut g = Graph::with_vertices(1);
        let u = 0;
        add_pendants(&mut g, u, 6);
        let v = 1u32; // one of the pendants
        let w = add_chain(&mut g, u);
        let k = 28;
        let wit = detect_kind(&g, k, ConfigKind::C2, 8)
            .into_iter()
            .find(|c| c.role1("v") == Some(v) && c.role1("w") == Some(w))
            .unwrap();
        let col = reduce_c2(&g, &wit, k, &mut backtracking_provider(k)).unwrap();
        assert!(is_nsd(&g, &col).unwrap());

        // far end heavy: d(x) > k/2
        let mut g = Graph::with_vertices(2);
        let (u, x) = (0, 1);
        add_pendants(&mut g, u, 5);
        add_pendants(&mut g, x, 16);
        let w = g.add_vertex();
        g.add_edge(u, w).unwrap();
        g.add_edge(w, x).unwrap();
        let wit = detect_kind(&g, k, ConfigKind::C2, 8)
            .into_iter()
            .find(|c| c.role1("w") == Some(w))
            .unwrap();
        let col = reduce_c2(&g, &wit, k, &mut backtracking_provider(k)).unwrap();
        assert!(is_nsd(&g, &col).unwrap());
    }

    #[test]
    fn c3_contract_and_triangle_cases() {
        // u != x: a degree-2 corridor inside a larger graph
        let mut g = Graph::with_vertices(2);
        let (a, b) = (0, 1);
        add_pendants(&mut g, a, 7);
        add_pendants(&mut g, b, 9);
        let v = g.add_vertex();
        let wv = g.add_vertex();
        g.add_edge(a, v).unwrap();
        g.add_edge(v, wv).unwrap();
        g.add_edge(wv, b).unwrap();
        let k = 28;
        let wit = detect_kind(&g, k, ConfigKind::C3, 4)
            .into_iter()
            .find(|c| c.role1("v") == Some(v))
            .unwrap();
        let col = reduce_c3(&g, &wit, k, &mut backtracking_provider(k)).unwrap();
        assert!(is_nsd(&g, &col).unwrap());

        // u == x: a triangle hanging off a hub
        let mut g = Graph::with_vertices(1);
        let u = 0;
        add_pendants(&mut g, u, 8);
        let v = g.add_vertex();
        let wv = g.add_vertex();
        g.add_edge(u, v).unwrap();
        g.add_edge(u, wv).unwrap();
        g.add_edge(v, wv).unwrap();
        let wit = detect_kind(&g, k, ConfigKind::C3, 4)
            .into_iter()
            .find(|c| c.role1("v") == Some(v))
            .unwrap();
        let col = reduce_c3(&g, &wit, k, &mut backtracking_provider(k)).unwrap();
        assert!(is_nsd(&g, &col).unwrap());
    }

    #[test]
    fn c4_shared_neighbours() {
        let mut g = Graph::with_vertices(2);
        let (u, wv) = (0, 1);
        add_pendants(&mut g, u, 9);
        add_pendants(&mut g, wv, 7);
        let v = g.add_vertex();
        let x = g.add_vertex();
        for z in [v, x] {
            g.add_edge(u, z).unwrap();
            g.add_edge(wv, z).unwrap();
        }
        let k = 28;
        let wit = detect_kind(&g, k, ConfigKind::C4, 4).remove(0);
        let col = reduce_c4(&g, &wit, k, &mut backtracking_provider(k)).unwrap();
        assert!(is_nsd(&g, &col).unwrap());
    }

    #[test]
    fn c5_triangle_with_low_corner() {
        let mut g = Graph::with_vertices(1);
        let u = 0;
        add_pendants(&mut g, u, 9);
        let a = g.add_vertex();
        let b = g.add_vertex();
        g.add_edge(u, a).unwrap();
        g.add_edge(u, b).unwrap();
        g.add_edge(a, b).unwrap();
        add_chain(&mut g, b);
        add_chain(&mut g, b);
        let k = 28;
        let wit = detect_kind(&g, k, ConfigKind::C5, 8)
            .into_iter()
            .find(|c| c.role1("deg2") == Some(a))
            .unwrap();
        let col = reduce_c5(&g, &wit, k, &mut backtracking_provider(k)).unwrap();
        assert!(is_nsd(&g, &col).unwrap());
    }

    fn c6_instance(x_pendant: bool) -> (Graph, u32, u32, u32, u32) {
        let mut g = Graph::with_vertices(1);
        let u = 0;
        add_pendants(&mut g, u, 5);
        let v = g.add_vertex();
        let wv = g.add_vertex();
        g.add_edge(u, v).unwrap();
        g.add_edge(u, wv).unwrap();
        g.add_edge(v, wv).unwrap();
        add_chain(&mut g, v);
        add_chain(&mut g, wv);
        let x = if x_pendant {
            let x = g.add_vertex();
            g.add_edge(u, x).unwrap();
            x
        } else {
            add_chain(&mut g, u)
        };
        (g, u, v, wv, x)
    }

    #[test]
    fn c6_basic_cases() {
        let k = 28;
        for pendant in [true, false] {
            let (g, _, v, wv, x) = c6_instance(pendant);
            let wit = detect_kind(&g, k, ConfigKind::C6, 16)
                .into_iter()
                .find(|c| {
                    c.role1("v") == Some(v.min(wv))
                        && c.role1("w") == Some(v.max(wv))
                        && c.role1("x") == Some(x)
                })
                .unwrap();
            let col = reduce_c6(&g, &wit, k, &mut backtracking_provider(k)).unwrap();
            assert!(is_nsd(&g, &col).unwrap());
        }
    }

    /// Scripted provider driving the hard branch: tied pair sums with both
    /// cross colours repeated, pendant `x`, so the swap reroutes via `ux`.
    #[test]
    fn c6_hard_case_with_scripted_colouring() {
        let mut g = Graph::from_edges(
            6,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (2, 5)],
        )
        .unwrap();
        let (u, v, wv, x, v3, w3) = (0u32, 1u32, 2u32, 3u32, 4u32, 5u32);
        add_pendants(&mut g, v3, 2);
        add_pendants(&mut g, w3, 2);
        let k = 28;
        let h = g.remove_edges(&[EdgeKey::new(v, wv)]).unwrap();
        let mut alpha = EdgeColouring::new(k + 1);
        for (e, c) in [
            ((u, v), 1),
            ((u, wv), 2),
            ((u, x), 3),
            ((v, v3), 2),
            ((wv, w3), 1),
            ((v3, 6), 3),
            ((v3, 7), 4),
            ((w3, 8), 3),
            ((w3, 9), 4),
        ] {
            alpha.set(EdgeKey::new(e.0, e.1), c).unwrap();
        }
        assert!(is_proper(&h, &alpha).unwrap());
        assert!(is_nsd(&h, &alpha).unwrap());
        let wit = detect_kind(&g, k, ConfigKind::C6, 4)
            .into_iter()
            .find(|c| c.role1("x") == Some(x))
            .unwrap();
        let mut scripted = |req: &Graph| -> Result<EdgeColouring> {
            assert_eq!(req.edge_count(), h.edge_count());
            Ok(alpha.clone())
        };
        let col = reduce_c6(&g, &wit, k, &mut scripted).unwrap();
        assert!(is_nsd(&g, &col).unwrap());
        // the reroute really happened: ux now carries a near colour
        assert_eq!(col.get(EdgeKey::new(u, x)), Some(1));
    }

    #[test]
    fn c7_two_disjoint_pairs() {
        let mut g = Graph::with_vertices(1);
        let u = 0;
        add_pendants(&mut g, u, 6);
        let mut pairs = Vec::new();
        for _ in 0..2 {
            let a = g.add_vertex();
            let b = g.add_vertex();
            g.add_edge(u, a).unwrap();
            g.add_edge(u, b).unwrap();
            g.add_edge(a, b).unwrap();
            add_chain(&mut g, a);
            add_chain(&mut g, b);
            pairs.push((a, b));
        }
        let k = 28;
        let wit = detect_kind(&g, k, ConfigKind::C7, 4).remove(0);
        let col = reduce_c7(&g, &wit, k, &mut backtracking_provider(k)).unwrap();
        assert!(is_nsd(&g, &col).unwrap());
    }

    #[test]
    fn c8_pendant_identification() {
        let mut g = Graph::with_vertices(1);
        let u = 0;
        add_pendants(&mut g, u, 2);
        let v = add_chain(&mut g, u);
        for _ in 0..7 {
            add_chain(&mut g, u);
        }
        let k = 28;
        assert!(!conflict_bound(k, 2).unwrap().admits(g.degree(u)));
        let wit = detect_kind(&g, k, ConfigKind::C8, 8)
            .into_iter()
            .find(|c| c.role1("v") == Some(v))
            .unwrap();
        let col = reduce_c8(&g, &wit, k, &mut backtracking_provider(k)).unwrap();
        assert!(is_nsd(&g, &col).unwrap());
    }

    #[test]
    fn c9_star_hub() {
        let mut g = Graph::with_vertices(1);
        add_pendants(&mut g, 0, 30);
        let k = 30;
        let wit = detect_kind(&g, k, ConfigKind::C9, 4).remove(0);
        assert_eq!(wit.p, Some(30));
        let col = reduce_c9(&g, &wit, k, &mut backtracking_provider(k)).unwrap();
        assert!(colouring::is_nsd_skipping_isolated_edges(&g, &col).unwrap());
    }

    #[test]
    fn c9_small_path_case() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let k = 28;
        let wit = detect_kind(&g, k, ConfigKind::C9, 4).remove(0);
        assert_eq!((wit.u, wit.r, wit.j), (1, Some(1), Some(15)));
        let col = reduce_c9(&g, &wit, k, &mut backtracking_provider(k)).unwrap();
        assert!(is_nsd(&g, &col).unwrap());
    }

    #[test]
    fn stale_witness_is_rejected() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let other = Graph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let k = 28;
        let wit = detect_kind(&g, k, ConfigKind::C3, 1).remove(0);
        let err = reduce_c3(&other, &wit, k, &mut backtracking_provider(k)).unwrap_err();
        assert!(matches!(err, Error::Parameter(_)));
    }

    #[test]
    fn driver_solves_wheel_30() {
        let g = wheel(30);
        let (trace, res) = construct_nsd(&g, 30, &SolveBudget::default());
        let col = res.unwrap();
        assert!(is_proper(&g, &col).unwrap());
        assert!(is_nsd(&g, &col).unwrap());
        assert!(trace.strictly_decreasing());
        assert!(trace.steps.iter().any(|s| s.config.is_some()));
    }

    #[test]
    fn driver_solves_star_plus_triangle() {
        let mut g = Graph::with_vertices(1);
        add_pendants(&mut g, 0, 30);
        let a = g.add_vertex();
        let b = g.add_vertex();
        let c = g.add_vertex();
        g.add_edge(a, b).unwrap();
        g.add_edge(b, c).unwrap();
        g.add_edge(a, c).unwrap();
        let (trace, res) = construct_nsd(&g, 30, &SolveBudget::default());
        let col = res.unwrap();
        assert!(is_nsd(&g, &col).unwrap());
        assert!(trace.strictly_decreasing());
    }

    #[test]
    fn driver_rejects_isolated_edges_and_small_k() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let (_, res) = construct_nsd(&g, 30, &SolveBudget::default());
        assert!(matches!(res, Err(Error::IsolatedEdge(_))));
        let g = wheel(30);
        let (_, res) = construct_nsd(&g, 29, &SolveBudget::default());
        assert!(matches!(res, Err(Error::Parameter(_))));
    }

    #[test]
    fn driver_reports_budget_exhaustion_with_partial_trace() {
        let g = wheel(30);
        let tight = SolveBudget::new(64, 5, Duration::from_secs(60)).unwrap();
        let (_, res) = construct_nsd(&g, 30, &tight);
        assert!(matches!(res, Err(Error::BudgetExhausted(_))));
    }
}
