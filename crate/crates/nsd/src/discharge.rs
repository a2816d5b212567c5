//! Trash partition and the discharging engine.
//!
//! Every vertex starts with charge d(v) - 6 and every face of the
//! retained embedding with 2 d(f) - 6, so the grand total is pinned by
//! Euler's formula and no local rule can change it. The rules move
//! charge between neighbouring vertices and from faces to the low
//! vertices on their boundary, and every move is recorded as a
//! [`Transfer`] so the run can be audited after the fact. A graph in
//! which every retained vertex and face ends non-negative would break
//! the Euler total, so [`verify_balance`] reporting violations is the
//! expected outcome on real planar inputs; where the violations sit is
//! what points back at the reducible patterns.
//!
//! Before the rules run, a preparatory pass strips the "trash": leaves,
//! adjacent degree-3 pairs pinched between two common neighbours, and
//! degree-2 vertices trapped on small faces. The rules then only fire
//! inside the stripped core; trash vertices are compensated separately
//! at one unit per retained neighbour.
//!
//! Degrees are always read from the original graph, never from the
//! stripped one. Face patterns are always read from the retained
//! embedding. Where a rule family offers several amounts along the same
//! edge, the giver pays the maximum once, not the sum.

use crate::embed::{Face, FaceSet, RotationSystem};
use crate::error::Result;
use crate::graph::Graph;
use num_rational::Rational64;
use std::collections::BTreeSet;
use std::fmt;

/// Exact charge value. All rule amounts are multiples of one sixth.
pub type Charge = Rational64;

fn q(n: i64, d: i64) -> Charge {
    Charge::new(n, d)
}

fn whole(n: i64) -> Charge {
    Charge::from_integer(n)
}

/// Staged removal of low-degree vertices that would otherwise soak up
/// charge without constraining the rules.
///
/// The four stages run in order, each against the embedding as left by
/// the previous stage, with vertex degrees always read from the
/// original graph:
/// 1. every vertex of degree 1,
/// 2. adjacent degree-3 pairs sharing two common surviving neighbours,
/// 3. degree-2 vertices on a triangular face,
/// 4. degree-2 vertices on a 4-face whose both neighbours have degree
///    at least 7.
#[derive(Debug, Clone)]
pub struct TrashPartition {
    pub t1: BTreeSet<u32>,
    pub t2: BTreeSet<u32>,
    pub t3: BTreeSet<u32>,
    pub t4: BTreeSet<u32>,
    /// Embedding induced on the surviving vertices. Vertex ids keep
    /// their original slots.
    pub retained: RotationSystem,
    kept: Vec<bool>,
}

impl TrashPartition {
    /// The all-kept partition: nothing stripped, the full embedding
    /// retained. Useful for charging a graph as-is.
    pub fn empty(g: &Graph, rs: &RotationSystem) -> Result<TrashPartition> {
        rs.check_matches(g)?;
        Ok(TrashPartition {
            t1: BTreeSet::new(),
            t2: BTreeSet::new(),
            t3: BTreeSet::new(),
            t4: BTreeSet::new(),
            retained: rs.clone(),
            kept: vec![true; g.vertex_count()],
        })
    }

    pub fn is_trash(&self, v: u32) -> bool {
        !self.kept[v as usize]
    }

    /// All stripped vertices, across the four stages.
    pub fn trash(&self) -> BTreeSet<u32> {
        self.t1
            .iter()
            .chain(&self.t2)
            .chain(&self.t3)
            .chain(&self.t4)
            .copied()
            .collect()
    }

    pub fn kept_vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.kept
            .iter()
            .enumerate()
            .filter(|(_, &k)| k)
            .map(|(v, _)| v as u32)
    }

    /// Number of surviving neighbours of `v` in the original graph.
    pub fn kept_neighbours(&self, g: &Graph, v: u32) -> usize {
        g.neighbours(v).filter(|&w| !self.is_trash(w)).count()
    }
}

/// Runs the four trash stages and checks the residual-pattern
/// postconditions: the survivors contain no degree-1 vertex, no
/// pinched degree-3 pair, no degree-2 vertex on a triangular face of
/// the retained embedding, and no degree-2 vertex with two degree-7+
/// neighbours on one of its 4-faces.
pub fn compute_trash(g: &Graph, rs: &RotationSystem) -> Result<TrashPartition> {
    rs.check_matches(g)?;
    let n = g.vertex_count();
    let mut keep = vec![true; n];
    let mut t1 = BTreeSet::new();
    let mut t2 = BTreeSet::new();
    let mut t3 = BTreeSet::new();
    let mut t4 = BTreeSet::new();

    for v in g.vertices() {
        if g.degree(v) == 1 {
            t1.insert(v);
            keep[v as usize] = false;
        }
    }

    // Pairs are claimed in ascending order of their smaller endpoint;
    // eligibility only shrinks as vertices disappear, so one pass
    // reaches the fixpoint.
    for u in g.vertices() {
        if !keep[u as usize] || g.degree(u) != 3 {
            continue;
        }
        for v in g.neighbours(u) {
            if v <= u || !keep[v as usize] || g.degree(v) != 3 {
                continue;
            }
            let common = g
                .neighbours(u)
                .filter(|&w| keep[w as usize] && w != v && g.has_edge(v, w))
                .count();
            if common >= 2 {
                t2.insert(u);
                t2.insert(v);
                keep[u as usize] = false;
                keep[v as usize] = false;
                break;
            }
        }
    }

    // Removing a batch can merge faces and expose fresh instances of
    // the same pattern, so each of the two face-driven stages repeats
    // until its scan comes back empty. Stage 4 never creates a
    // triangular face (a merged face keeps the degree of the non-quad
    // side, which is at least 4 once stage 3 is stable), so the two
    // stages need no back-and-forth.
    loop {
        let fs = rs.retain_vertices(&keep).face_set()?;
        let mut batch = BTreeSet::new();
        for face in fs.faces.iter().filter(|f| f.degree() == 3) {
            batch.extend(face.tails().filter(|&v| g.degree(v) == 2));
        }
        if batch.is_empty() {
            break;
        }
        for &v in &batch {
            keep[v as usize] = false;
        }
        t3.append(&mut batch);
    }

    loop {
        let fs = rs.retain_vertices(&keep).face_set()?;
        let mut batch = BTreeSet::new();
        for face in fs.faces.iter().filter(|f| f.degree() == 4) {
            batch.extend(
                face.tails()
                    .filter(|&v| g.degree(v) == 2 && g.neighbours(v).all(|w| g.degree(w) >= 7)),
            );
        }
        if batch.is_empty() {
            break;
        }
        for &v in &batch {
            keep[v as usize] = false;
        }
        t4.append(&mut batch);
    }

    let retained = rs.retain_vertices(&keep);
    let fs = retained.face_set()?;
    for v in g.vertices() {
        assert!(
            !(keep[v as usize] && g.degree(v) == 1),
            "trash pass left degree-1 vertex {v}"
        );
    }
    for u in g.vertices().filter(|&u| keep[u as usize] && g.degree(u) == 3) {
        for v in g.neighbours(u).filter(|&v| v > u) {
            if !keep[v as usize] || g.degree(v) != 3 {
                continue;
            }
            let common = g
                .neighbours(u)
                .filter(|&w| keep[w as usize] && w != v && g.has_edge(v, w))
                .count();
            assert!(
                common < 2,
                "trash pass left pinched degree-3 pair {u},{v}"
            );
        }
    }
    for face in &fs.faces {
        if face.degree() == 3 {
            for v in face.tails() {
                assert!(
                    g.degree(v) != 2,
                    "trash pass left degree-2 vertex {v} on a triangular face"
                );
            }
        }
        if face.degree() == 4 {
            for v in face.tails() {
                assert!(
                    !(g.degree(v) == 2 && g.neighbours(v).all(|w| g.degree(w) >= 7)),
                    "trash pass left degree-2 vertex {v} on a 4-face between two high neighbours"
                );
            }
        }
    }

    Ok(TrashPartition {
        t1,
        t2,
        t3,
        t4,
        retained,
        kept: keep,
    })
}

/// Which rule moved the charge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleTag {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
    R14,
    R15,
    /// Compensation along an edge into the trash.
    Trash,
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleTag::Trash => write!(f, "RT"),
            other => write!(f, "R{}", *other as u8 + 1),
        }
    }
}

/// A charge holder: a vertex of the graph or a face of the retained
/// embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChargeNode {
    Vertex(u32),
    Face(usize),
}

impl fmt::Display for ChargeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChargeNode::Vertex(v) => write!(f, "V{v}"),
            ChargeNode::Face(i) => write!(f, "F{i}"),
        }
    }
}

/// One recorded charge movement. Face-sourced transfers remember the
/// boundary-walk position of the receiving incidence, so the guard can
/// be replayed later.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub source: ChargeNode,
    pub target: u32,
    pub amount: Charge,
    pub rule: RuleTag,
    pub position: Option<usize>,
}

/// Charge state of a run: one rational per vertex of the graph, one per
/// face of the retained embedding, plus the transfer log.
#[derive(Debug, Clone)]
pub struct ChargeLedger {
    pub vertex_charge: Vec<Charge>,
    pub face_charge: Vec<Charge>,
    /// Faces of the retained embedding, frozen at charging time.
    pub faces: FaceSet,
    pub transfers: Vec<Transfer>,
}

impl ChargeLedger {
    /// Grand total over all vertices and faces. Transfers never change
    /// it.
    pub fn total(&self) -> Charge {
        let v: Charge = self.vertex_charge.iter().sum();
        let f: Charge = self.face_charge.iter().sum();
        v + f
    }
}

/// Charges d(v) - 6 onto every vertex (trash included) and 2 d(f) - 6
/// onto every face of the retained embedding.
pub fn initial_charges(g: &Graph, trash: &TrashPartition) -> Result<ChargeLedger> {
    let faces = trash.retained.face_set()?;
    let vertex_charge = g
        .vertices()
        .map(|v| whole(g.degree(v) as i64 - 6))
        .collect();
    let face_charge = faces
        .faces
        .iter()
        .map(|f| whole(2 * f.degree() as i64 - 6))
        .collect();
    Ok(ChargeLedger {
        vertex_charge,
        face_charge,
        faces,
        transfers: Vec::new(),
    })
}

/// Total charge of the ledger. With faces traced per component (each
/// component closes its own set of orbits), a trash-free planar input
/// totals exactly -12 per connected component; see [`euler_reference`].
pub fn charge_identity(ledger: &ChargeLedger) -> Charge {
    ledger.total()
}

/// The expected [`charge_identity`] for a trash-free planar input with
/// `components` connected components: 6(E - V - F) summed per
/// component, which Euler's formula fixes at -12 each.
pub fn euler_reference(components: usize) -> Charge {
    whole(-12 * components as i64)
}

fn other_neighbour(g: &Graph, v: u32, not: u32) -> Option<u32> {
    g.neighbours(v).find(|&w| w != not)
}

/// True when one of the two faces along edge `uv` is a triangle whose
/// third corner is `w`.
fn triangle_with(faces: &FaceSet, u: u32, v: u32, w: u32) -> bool {
    [(u, v), (v, u)].into_iter().any(|d| {
        faces
            .face_of_dart(d)
            .map(|i| faces.faces[i].degree() == 3 && faces.faces[i].contains_vertex(w))
            .unwrap_or(false)
    })
}

/// Occurrences of `a` immediately followed by `b` on a 4-face walk, in
/// either direction; yields the remaining two corners in walk order
/// after `b`.
fn quad_contexts(face: &Face, a: u32, b: u32) -> Vec<(u32, u32)> {
    if face.degree() != 4 {
        return Vec::new();
    }
    let t: Vec<u32> = face.tails().collect();
    let mut out = Vec::new();
    for i in 0..4 {
        if t[i] == a && t[(i + 1) % 4] == b {
            out.push((t[(i + 2) % 4], t[(i + 3) % 4]));
        }
        if t[i] == b && t[(i + 1) % 4] == a {
            out.push((t[(i + 3) % 4], t[(i + 2) % 4]));
        }
    }
    out
}

/// Evaluates the vertex-to-vertex rules along the ordered edge (u, v)
/// and returns the single transfer the giver owes: the maximum
/// applicable amount, tagged by the first rule attaining it.
fn pair_rule(g: &Graph, faces: &FaceSet, u: u32, v: u32) -> Option<(RuleTag, Charge)> {
    let du = g.degree(u);
    let dv = g.degree(v);
    let fa = faces
        .face_of_dart((u, v))
        .expect("edge of the retained embedding lies on a face");
    let fb = faces
        .face_of_dart((v, u))
        .expect("edge of the retained embedding lies on a face");
    let da = faces.faces[fa].degree();
    let db = faces.faces[fb].degree();
    let distinct = fa != fb;
    let deg = |w: u32| g.degree(w);
    let mut hits: Vec<(RuleTag, Charge)> = Vec::new();

    if du >= 7 {
        if (3..=6).contains(&dv) && (da == 3 || db == 3) {
            hits.push((RuleTag::R1, q(1, 2)));
        }
        if dv == 4 && distinct && da == 3 && db == 3 {
            hits.push((RuleTag::R2, whole(1)));
        }
        if dv == 2 {
            if let Some(w) = other_neighbour(g, v, u) {
                if deg(w) == 3 || deg(w) >= 7 {
                    hits.push((RuleTag::R3, q(2, 3)));
                }
                let beyond = |f: usize| {
                    quad_contexts(&faces.faces[f], u, v)
                        .into_iter()
                        .any(|(wc, xc)| wc == w && deg(xc) >= 7)
                };
                if deg(w) == 3 && distinct && beyond(fa) && beyond(fb) {
                    hits.push((RuleTag::R4, whole(1)));
                }
            }
        }
        if dv == 3 {
            let past_low = |f: usize| {
                quad_contexts(&faces.faces[f], u, v)
                    .into_iter()
                    .any(|(wc, xc)| deg(wc) == 2 && deg(xc) >= 7)
            };
            if past_low(fa) || past_low(fb) {
                hits.push((RuleTag::R5, q(2, 3)));
            }
            let rest: Vec<u32> = g.neighbours(v).filter(|&w| w != u).collect();
            let corner_high = rest
                .iter()
                .any(|&w| deg(w) >= 7 && triangle_with(faces, u, v, w));
            let sibling_low = rest.iter().any(|&x| (2..=3).contains(&deg(x)));
            if corner_high && sibling_low {
                hits.push((RuleTag::R6, whole(1)));
            }
            if rest
                .iter()
                .any(|&w| deg(w) == 3 && triangle_with(faces, u, v, w))
            {
                hits.push((RuleTag::R7, whole(1)));
            }
        }
    }
    if du >= 4 && dv == 3 {
        if distinct && da == 3 && db == 3 {
            hits.push((RuleTag::R8, whole(1)));
        }
        if g
            .neighbours(v)
            .any(|w| w != u && deg(w) >= 7 && triangle_with(faces, u, v, w))
        {
            hits.push((RuleTag::R9, q(2, 3)));
        }
    }
    if (4..=6).contains(&du) && dv == 2 {
        hits.push((RuleTag::R10, whole(2)));
    }
    if du == 2 && dv == 3 {
        if let Some(w) = other_neighbour(g, u, v) {
            let flanked = |f: usize| {
                quad_contexts(&faces.faces[f], w, u)
                    .into_iter()
                    .any(|(vc, xc)| vc == v && deg(xc) >= 7)
            };
            if deg(w) >= 7 && distinct && flanked(fa) && flanked(fb) {
                hits.push((RuleTag::R11, q(1, 3)));
            }
        }
    }

    hits.into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
}

/// Evaluates the face-to-vertex rules for one incidence of the boundary
/// walk: the vertex at `pos` flanked by its walk neighbours. Precedence
/// runs 5/3, 4/3, 1/3, then the fallback 1.
fn incidence_rule(g: &Graph, face: &Face, pos: usize) -> Option<(RuleTag, Charge)> {
    let l = face.degree();
    if l < 4 {
        return None;
    }
    let t: Vec<u32> = face.tails().collect();
    let v = t[pos];
    let dv = g.degree(v);
    if !(2..=6).contains(&dv) {
        return None;
    }
    let prev = t[(pos + l - 1) % l];
    let next = t[(pos + 1) % l];
    let deg = |w: u32| g.degree(w);
    if dv == 2 && (deg(prev) == 3 || deg(next) == 3) {
        return Some((RuleTag::R14, q(5, 3)));
    }
    if l >= 5 && deg(prev) >= 7 && deg(next) >= 7 {
        return Some((RuleTag::R12, q(4, 3)));
    }
    if l == 4 && dv == 3 {
        let opp = t[(pos + 2) % 4];
        let flanked = (deg(prev) == 2 && deg(next) >= 7) || (deg(next) == 2 && deg(prev) >= 7);
        if flanked && deg(opp) >= 7 {
            return Some((RuleTag::R13, q(1, 3)));
        }
    }
    Some((RuleTag::R15, whole(1)))
}

/// Runs every rule and returns the extended ledger. Vertex rules fire
/// along ordered edges between survivors, face rules per boundary
/// incidence, and each survivor pays 1 along every edge into the trash.
pub fn apply_rules(g: &Graph, trash: &TrashPartition, ledger: &ChargeLedger) -> ChargeLedger {
    let faces = &ledger.faces;
    let mut out = ledger.clone();
    let record = |out: &mut ChargeLedger, t: Transfer| {
        match t.source {
            ChargeNode::Vertex(u) => out.vertex_charge[u as usize] -= t.amount,
            ChargeNode::Face(i) => out.face_charge[i] -= t.amount,
        }
        out.vertex_charge[t.target as usize] += t.amount;
        out.transfers.push(t);
    };

    for e in g.edges() {
        for (u, v) in [(e.0, e.1), (e.1, e.0)] {
            if trash.is_trash(u) || trash.is_trash(v) {
                continue;
            }
            if let Some((rule, amount)) = pair_rule(g, faces, u, v) {
                record(
                    &mut out,
                    Transfer {
                        source: ChargeNode::Vertex(u),
                        target: v,
                        amount,
                        rule,
                        position: None,
                    },
                );
            }
        }
    }
    for (fi, face) in faces.faces.iter().enumerate() {
        let tails: Vec<u32> = face.tails().collect();
        for (pos, &v) in tails.iter().enumerate() {
            if let Some((rule, amount)) = incidence_rule(g, face, pos) {
                record(
                    &mut out,
                    Transfer {
                        source: ChargeNode::Face(fi),
                        target: v,
                        amount,
                        rule,
                        position: Some(pos),
                    },
                );
            }
        }
    }
    for e in g.edges() {
        for (a, b) in [(e.0, e.1), (e.1, e.0)] {
            if !trash.is_trash(a) && trash.is_trash(b) {
                record(
                    &mut out,
                    Transfer {
                        source: ChargeNode::Vertex(a),
                        target: b,
                        amount: whole(1),
                        rule: RuleTag::Trash,
                        position: None,
                    },
                );
            }
        }
    }
    out
}

/// One balance line: the element, its final charge, and the floor it
/// must meet. Survivors and faces owe 0; a trash vertex owes
/// d(v) + (surviving neighbours) - 6.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceRow {
    pub node: ChargeNode,
    pub final_charge: Charge,
    pub floor: Charge,
}

impl BalanceRow {
    pub fn ok(&self) -> bool {
        self.final_charge >= self.floor
    }
}

/// Per-element outcome of a discharging run.
#[derive(Debug, Clone)]
pub struct BalanceReport {
    pub rows: Vec<BalanceRow>,
}

impl BalanceReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(BalanceRow::ok)
    }

    pub fn violations(&self) -> impl Iterator<Item = &BalanceRow> {
        self.rows.iter().filter(|r| !r.ok())
    }
}

/// Checks every vertex and face against its floor and reports all of
/// them, violators flagged.
pub fn verify_balance(g: &Graph, trash: &TrashPartition, ledger: &ChargeLedger) -> BalanceReport {
    let mut rows = Vec::new();
    for v in g.vertices() {
        let floor = if trash.is_trash(v) {
            whole(g.degree(v) as i64 + trash.kept_neighbours(g, v) as i64 - 6)
        } else {
            whole(0)
        };
        rows.push(BalanceRow {
            node: ChargeNode::Vertex(v),
            final_charge: ledger.vertex_charge[v as usize],
            floor,
        });
    }
    for (i, &c) in ledger.face_charge.iter().enumerate() {
        rows.push(BalanceRow {
            node: ChargeNode::Face(i),
            final_charge: c,
            floor: whole(0),
        });
    }
    BalanceReport { rows }
}

/// Replays the guard behind a recorded transfer. True exactly when the
/// rule still fires with the same amount at the same spot.
pub fn verify_transfer(
    g: &Graph,
    trash: &TrashPartition,
    ledger: &ChargeLedger,
    t: &Transfer,
) -> bool {
    match (t.source, t.rule) {
        (ChargeNode::Vertex(u), RuleTag::Trash) => {
            !trash.is_trash(u)
                && trash.is_trash(t.target)
                && g.has_edge(u, t.target)
                && t.amount == whole(1)
                && t.position.is_none()
        }
        (ChargeNode::Vertex(u), _) => {
            !trash.is_trash(u)
                && !trash.is_trash(t.target)
                && g.has_edge(u, t.target)
                && t.position.is_none()
                && pair_rule(g, &ledger.faces, u, t.target) == Some((t.rule, t.amount))
        }
        (ChargeNode::Face(fi), rule) => {
            rule != RuleTag::Trash
                && fi < ledger.faces.faces.len()
                && t.position.is_some_and(|pos| {
                    let face = &ledger.faces.faces[fi];
                    pos < face.degree()
                        && face.tails().nth(pos) == Some(t.target)
                        && incidence_rule(g, face, pos) == Some((t.rule, t.amount))
                })
        }
    }
}
