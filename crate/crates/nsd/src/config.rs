//! Detection of the nine reducible local patterns, parameterized by the
//! palette parameter k.
//!
//! Predicates are evaluated in exact integer arithmetic. The square-root
//! bound sqrt((2k-r+4)(r-1)+1/4)+1/2 that guards C8 and C9 is compared
//! via `d(d-1) > (2k-r+4)(r-1)`, which is equivalent for integer d and
//! avoids floating-point misclassification at the boundary; the float
//! form is kept only for display. C1's threshold (2k+6-4r)/3 is compared
//! as `3 d(u) <= 2k+6-4r` together with the side condition
//! `2k+6-4r > 36`.

use crate::graph::Graph;
use num_rational::Rational64;
use std::collections::BTreeSet;
use std::fmt;

/// Default cap on witnesses reported per kind by the exhaustive scan.
pub const DEFAULT_WITNESS_LIMIT: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConfigKind {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
}

impl ConfigKind {
    pub const ALL: [ConfigKind; 9] = [
        ConfigKind::C1,
        ConfigKind::C2,
        ConfigKind::C3,
        ConfigKind::C4,
        ConfigKind::C5,
        ConfigKind::C6,
        ConfigKind::C7,
        ConfigKind::C8,
        ConfigKind::C9,
    ];
}

impl fmt::Display for ConfigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", *self as u8 + 1)
    }
}

/// One detected occurrence, carrying enough named vertices to replay the
/// predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigurationWitness {
    pub kind: ConfigKind,
    pub u: u32,
    /// Named vertex lists, e.g. ("w", [5]) or ("vs", [1, 2, 3]).
    pub roles: Vec<(&'static str, Vec<u32>)>,
    pub r: Option<u32>,
    pub j: Option<u32>,
    pub p: Option<u32>,
    /// Evaluated threshold, for reports.
    pub bound: Option<String>,
}

impl ConfigurationWitness {
    pub(crate) fn role(&self, name: &str) -> Option<&[u32]> {
        self.roles
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, vs)| vs.as_slice())
    }

    pub(crate) fn role1(&self, name: &str) -> Option<u32> {
        match self.role(name) {
            Some([v]) => Some(*v),
            _ => None,
        }
    }

    /// Replays this witness's predicate against the graph.
    pub fn verify(&self, g: &Graph, k: u32) -> bool {
        let d = |v: u32| g.degree(v) as i64;
        let adj = |a: u32, b: u32| g.has_edge(a, b);
        let u = self.u;
        let k = k as i64;
        match self.kind {
            ConfigKind::C1 => {
                let (Some(w), Some(x), Some(r)) = (self.role1("w"), self.role1("x"), self.r)
                else {
                    return false;
                };
                let r = r as i64;
                w != x
                    && adj(u, w)
                    && adj(u, x)
                    && d(w) <= r
                    && d(x) <= r
                    && r <= 6
                    && 2 * k + 6 - 4 * r > 36
                    && 3 * d(u) <= 2 * k + 6 - 4 * r
            }
            ConfigKind::C2 => {
                let (Some(v), Some(w)) = (self.role1("v"), self.role1("w")) else {
                    return false;
                };
                adj(u, v) && adj(u, w) && d(v) == 1 && d(w) == 2
            }
            ConfigKind::C3 => {
                let Some(w) = self.role1("w") else { return false };
                adj(u, w) && d(u) == 2 && d(w) == 2
            }
            ConfigKind::C4 => {
                let Some(x) = self.role1("x") else { return false };
                u != x
                    && d(u) == 2
                    && d(x) == 2
                    && g.neighbour_set(u) == g.neighbour_set(x)
            }
            ConfigKind::C5 => {
                let (Some(tri), Some(a), Some(b)) =
                    (self.role("triangle"), self.role1("deg2"), self.role1("low"))
                else {
                    return false;
                };
                let [x, y, z] = tri else { return false };
                adj(*x, *y)
                    && adj(*y, *z)
                    && adj(*x, *z)
                    && a != b
                    && tri.contains(&a)
                    && tri.contains(&b)
                    && d(a) == 2
                    && d(b) <= 6
            }
            ConfigKind::C6 => {
                let (Some(v), Some(w), Some(x)) =
                    (self.role1("v"), self.role1("w"), self.role1("x"))
                else {
                    return false;
                };
                adj(u, v)
                    && adj(u, w)
                    && adj(u, x)
                    && adj(v, w)
                    && x != v
                    && x != w
                    && d(v) == 3
                    && d(w) == 3
                    && d(x) <= 2
            }
            ConfigKind::C7 => {
                let (Some(p1), Some(p2)) = (self.role("pair1"), self.role("pair2")) else {
                    return false;
                };
                let ([v1, w1], [v2, w2]) = (p1, p2) else { return false };
                let all = [*v1, *w1, *v2, *w2];
                all.iter().collect::<BTreeSet<_>>().len() == 4
                    && all.iter().all(|&y| adj(u, y) && d(y) == 3)
                    && adj(*v1, *w1)
                    && adj(*v2, *w2)
            }
            ConfigKind::C8 => {
                let (Some(v), Some(r)) = (self.role1("v"), self.r) else {
                    return false;
                };
                let r = r as i64;
                let pendants = g.neighbours(u).filter(|&y| d(y) == 1).count() as i64;
                (2..=6).contains(&r)
                    && adj(u, v)
                    && d(v) == r
                    && pendants >= 2 * r - 2
                    && d(u) * (d(u) - 1) > (2 * k - r + 4) * (r - 1)
            }
            ConfigKind::C9 => {
                let (Some(vs), Some(r), Some(j), Some(p)) =
                    (self.role("vs"), self.r, self.j, self.p)
                else {
                    return false;
                };
                let (r, j) = (r as i64, j as i64);
                let a = k - 2 * r + 4 - j;
                r <= 6
                    && j >= 1
                    && a > 0
                    && d(u) * (d(u) - 1) > (2 * k - r + 4) * (r - 1)
                    && d(u) <= a
                    && vs.len() as u32 == p
                    && (p as i64) >= (a + j - 1) / j
                    && vs.iter().all(|&y| adj(u, y) && d(y) <= r)
            }
        }
    }
}

impl fmt::Display for ConfigurationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} u={}", self.kind, self.u)?;
        if !self.roles.is_empty() {
            write!(f, " roles=")?;
            for (i, (name, vs)) in self.roles.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{name}:")?;
                for (j, v) in vs.iter().enumerate() {
                    if j > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
            }
        }
        if let Some(r) = self.r {
            write!(f, " r={r}")?;
        }
        if let Some(j) = self.j {
            write!(f, " j={j}")?;
        }
        if let Some(p) = self.p {
            write!(f, " p={p}")?;
        }
        if let Some(b) = &self.bound {
            write!(f, " bound={b}")?;
        }
        Ok(())
    }
}

fn deg(g: &Graph, v: u32) -> i64 {
    g.degree(v) as i64
}

/// Vertices of low degree adjacent to a vertex whose own degree sits
/// under the threshold (2k+6-4r)/3, with the threshold above 12.
pub fn detect_c1(g: &Graph, k: u32, limit: usize) -> Vec<ConfigurationWitness> {
    let k = k as i64;
    let mut out = Vec::new();
    for u in g.vertices() {
        let nbs: Vec<u32> = g.neighbours(u).collect();
        for (i, &w) in nbs.iter().enumerate() {
            for &x in &nbs[i + 1..] {
                if out.len() >= limit {
                    return out;
                }
                let r = deg(g, w).max(deg(g, x));
                if r > 6 {
                    continue;
                }
                let slack = 2 * k + 6 - 4 * r;
                if slack > 36 && 3 * deg(g, u) <= slack {
                    out.push(ConfigurationWitness {
                        kind: ConfigKind::C1,
                        u,
                        roles: vec![("w", vec![w]), ("x", vec![x])],
                        r: Some(r as u32),
                        j: None,
                        p: None,
                        bound: Some(Rational64::new(slack, 3).to_string()),
                    });
                }
            }
        }
    }
    out
}

/// A vertex adjacent to both a degree-1 and a degree-2 vertex.
pub fn detect_c2(g: &Graph, limit: usize) -> Vec<ConfigurationWitness> {
    let mut out = Vec::new();
    for u in g.vertices() {
        for v in g.neighbours(u).filter(|&v| deg(g, v) == 1) {
            for w in g.neighbours(u).filter(|&w| deg(g, w) == 2) {
                if out.len() >= limit {
                    return out;
                }
                out.push(ConfigurationWitness {
                    kind: ConfigKind::C2,
                    u,
                    roles: vec![("v", vec![v]), ("w", vec![w])],
                    r: None,
                    j: None,
                    p: None,
                    bound: None,
                });
            }
        }
    }
    out
}

/// Two adjacent degree-2 vertices.
pub fn detect_c3(g: &Graph, limit: usize) -> Vec<ConfigurationWitness> {
    let mut out = Vec::new();
    for e in g.edges() {
        if out.len() >= limit {
            break;
        }
        if deg(g, e.0) == 2 && deg(g, e.1) == 2 {
            out.push(ConfigurationWitness {
                kind: ConfigKind::C3,
                u: e.0,
                roles: vec![("v", vec![e.0]), ("w", vec![e.1])],
                r: None,
                j: None,
                p: None,
                bound: None,
            });
        }
    }
    out
}

/// Two degree-2 vertices sharing both neighbours.
pub fn detect_c4(g: &Graph, limit: usize) -> Vec<ConfigurationWitness> {
    let twos: Vec<u32> = g.vertices().filter(|&v| deg(g, v) == 2).collect();
    let mut out = Vec::new();
    for (i, &v) in twos.iter().enumerate() {
        for &x in &twos[i + 1..] {
            if out.len() >= limit {
                return out;
            }
            if g.neighbour_set(v) == g.neighbour_set(x) && !g.neighbour_set(v).contains(&x) {
                let shared: Vec<u32> = g.neighbours(v).collect();
                out.push(ConfigurationWitness {
                    kind: ConfigKind::C4,
                    u: v,
                    roles: vec![("v", vec![v]), ("x", vec![x]), ("shared", shared)],
                    r: None,
                    j: None,
                    p: None,
                    bound: None,
                });
            }
        }
    }
    out
}

/// A triangle containing a degree-2 vertex and another vertex of degree
/// at most 6. Triangles are graph triangles, not necessarily faces.
pub fn detect_c5(g: &Graph, limit: usize) -> Vec<ConfigurationWitness> {
    let mut out = Vec::new();
    for e in g.edges() {
        let common: Vec<u32> = g
            .neighbour_set(e.0)
            .intersection(g.neighbour_set(e.1))
            .copied()
            .filter(|&z| z > e.1)
            .collect();
        for z in common {
            if out.len() >= limit {
                return out;
            }
            let tri = [e.0, e.1, z];
            let Some(&a) = tri.iter().find(|&&t| deg(g, t) == 2) else {
                continue;
            };
            let Some(&b) = tri.iter().find(|&&t| t != a && deg(g, t) <= 6) else {
                continue;
            };
            out.push(ConfigurationWitness {
                kind: ConfigKind::C5,
                u: tri[0],
                roles: vec![
                    ("triangle", tri.to_vec()),
                    ("deg2", vec![a]),
                    ("low", vec![b]),
                ],
                r: None,
                j: None,
                p: None,
                bound: None,
            });
        }
    }
    out
}

/// A vertex adjacent to an adjacent pair of degree-3 vertices and to a
/// vertex of degree at most 2.
pub fn detect_c6(g: &Graph, limit: usize) -> Vec<ConfigurationWitness> {
    let mut out = Vec::new();
    for u in g.vertices() {
        let nbs: Vec<u32> = g.neighbours(u).collect();
        for (i, &v) in nbs.iter().enumerate() {
            if deg(g, v) != 3 {
                continue;
            }
            for &w in &nbs[i + 1..] {
                if deg(g, w) != 3 || !g.has_edge(v, w) {
                    continue;
                }
                for &x in &nbs {
                    if x == v || x == w || deg(g, x) > 2 {
                        continue;
                    }
                    if out.len() >= limit {
                        return out;
                    }
                    out.push(ConfigurationWitness {
                        kind: ConfigKind::C6,
                        u,
                        roles: vec![("v", vec![v]), ("w", vec![w]), ("x", vec![x])],
                        r: None,
                        j: None,
                        p: None,
                        bound: None,
                    });
                }
            }
        }
    }
    out
}

/// A vertex adjacent to two vertex-disjoint adjacent pairs of degree-3
/// vertices.
pub fn detect_c7(g: &Graph, limit: usize) -> Vec<ConfigurationWitness> {
    let mut out = Vec::new();
    for u in g.vertices() {
        let nbs: Vec<u32> = g.neighbours(u).filter(|&v| deg(g, v) == 3).collect();
        let mut pairs = Vec::new();
        for (i, &v) in nbs.iter().enumerate() {
            for &w in &nbs[i + 1..] {
                if g.has_edge(v, w) {
                    pairs.push((v, w));
                }
            }
        }
        'outer: for (i, &(v1, w1)) in pairs.iter().enumerate() {
            for &(v2, w2) in &pairs[i + 1..] {
                if v1 == v2 || v1 == w2 || w1 == v2 || w1 == w2 {
                    continue;
                }
                if out.len() >= limit {
                    return out;
                }
                out.push(ConfigurationWitness {
                    kind: ConfigKind::C7,
                    u,
                    roles: vec![("pair1", vec![v1, w1]), ("pair2", vec![v2, w2])],
                    r: None,
                    j: None,
                    p: None,
                    bound: None,
                });
                continue 'outer;
            }
        }
    }
    out
}

fn sqrt_bound_display(k: i64, r: i64) -> String {
    let x = ((2 * k - r + 4) * (r - 1)) as f64;
    format!("{:.3}", 0.5 + (x + 0.25).sqrt())
}

/// A vertex with 2r-2 pendant neighbours and a degree-r neighbour, its
/// own degree above the conflict bound.
pub fn detect_c8(g: &Graph, k: u32, limit: usize) -> Vec<ConfigurationWitness> {
    let k = k as i64;
    let mut out = Vec::new();
    for u in g.vertices() {
        let d = deg(g, u);
        let pendants = g.neighbours(u).filter(|&y| deg(g, y) == 1).count() as i64;
        for v in g.neighbours(u) {
            let r = deg(g, v);
            if !(2..=6).contains(&r) {
                continue;
            }
            if pendants >= 2 * r - 2 && d * (d - 1) > (2 * k - r + 4) * (r - 1) {
                if out.len() >= limit {
                    return out;
                }
                out.push(ConfigurationWitness {
                    kind: ConfigKind::C8,
                    u,
                    roles: vec![("v", vec![v])],
                    r: Some(r as u32),
                    j: None,
                    p: None,
                    bound: Some(sqrt_bound_display(k, r)),
                });
            }
        }
    }
    out
}

/// A vertex above the conflict bound with many low-degree neighbours:
/// for the first (r, j) in scan order with
/// bound < d(u) <= k-2r+4-j and at least ceil((k-2r+4-j)/j) neighbours
/// of degree at most r.
pub fn detect_c9(g: &Graph, k: u32, limit: usize) -> Vec<ConfigurationWitness> {
    let k = k as i64;
    let mut out = Vec::new();
    'next_u: for u in g.vertices() {
        let d = deg(g, u);
        for r in 1..=6i64 {
            if d * (d - 1) <= (2 * k - r + 4) * (r - 1) {
                continue;
            }
            let vs: Vec<u32> = g.neighbours(u).filter(|&y| deg(g, y) <= r).collect();
            let p = vs.len() as i64;
            for j in 1..=k {
                let a = k - 2 * r + 4 - j;
                if a <= 0 {
                    break;
                }
                if d <= a && p >= (a + j - 1) / j {
                    if out.len() >= limit {
                        return out;
                    }
                    out.push(ConfigurationWitness {
                        kind: ConfigKind::C9,
                        u,
                        roles: vec![("vs", vs.clone())],
                        r: Some(r as u32),
                        j: Some(j as u32),
                        p: Some(p as u32),
                        bound: Some(sqrt_bound_display(k, r)),
                    });
                    continue 'next_u;
                }
            }
        }
    }
    out
}

pub(crate) fn detect_kind(
    g: &Graph,
    k: u32,
    kind: ConfigKind,
    limit: usize,
) -> Vec<ConfigurationWitness> {
    match kind {
        ConfigKind::C1 => detect_c1(g, k, limit),
        ConfigKind::C2 => detect_c2(g, limit),
        ConfigKind::C3 => detect_c3(g, limit),
        ConfigKind::C4 => detect_c4(g, limit),
        ConfigKind::C5 => detect_c5(g, limit),
        ConfigKind::C6 => detect_c6(g, limit),
        ConfigKind::C7 => detect_c7(g, limit),
        ConfigKind::C8 => detect_c8(g, k, limit),
        ConfigKind::C9 => detect_c9(g, k, limit),
    }
}

fn check_k(g: &Graph, k: u32) -> crate::Result<()> {
    if k < 28 || (k as usize) < g.max_degree() {
        return Err(crate::Error::Parameter(format!(
            "k = {k} must be at least max(28, max degree {})",
            g.max_degree()
        )));
    }
    Ok(())
}

/// First witness of every kind that occurs; an empty answer means the
/// exhaustive scan of all nine predicates found nothing.
pub fn detect_all(g: &Graph, k: u32) -> crate::Result<Vec<ConfigurationWitness>> {
    check_k(g, k)?;
    Ok(ConfigKind::ALL
        .into_iter()
        .flat_map(|kind| detect_kind(g, k, kind, 1))
        .collect())
}

/// All witnesses, capped per kind.
pub fn detect_all_with_limit(
    g: &Graph,
    k: u32,
    limit: usize,
) -> crate::Result<Vec<ConfigurationWitness>> {
    check_k(g, k)?;
    Ok(ConfigKind::ALL
        .into_iter()
        .flat_map(|kind| detect_kind(g, k, kind, limit))
        .collect())
}
