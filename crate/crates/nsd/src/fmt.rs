//! Text formats: edge lists, rotation systems, colourings, a graph6
//! importer, and the line-oriented report renderers used by the CLI.
//!
//! All writers emit a normalized form (ascending ids, single spaces,
//! one trailing newline per line), so writing what was just parsed
//! reproduces a normalized file byte for byte. Parsers skip blank
//! lines and lines starting with `#`, and report errors with the
//! 1-based line number of the offending input line.

use crate::colouring::EdgeColouring;
use crate::discharge::{BalanceReport, ChargeLedger, ChargeNode, TrashPartition};
use crate::embed::RotationSystem;
use crate::error::{Error, Result};
use crate::graph::{EdgeKey, Graph};
use crate::reduce::ReductionTrace;
use std::collections::BTreeSet;
use std::fmt::Write as _;

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let s = raw.trim();
        (!s.is_empty() && !s.starts_with('#')).then_some((i + 1, s))
    })
}

fn parse_token<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| bad(line, format!("cannot read {what} from '{token}'")))
}

/// Reads the edge-list format: a header line "n m", then m lines
/// "u v" with 0-based vertex ids.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (ln, head) = lines
        .next()
        .ok_or_else(|| bad(1, "empty graph file, expected a header line 'n m'"))?;
    let mut parts = head.split_whitespace();
    let n: usize = parse_token(ln, parts.next().unwrap_or(""), "vertex count")?;
    let m: usize = parse_token(
        ln,
        parts
            .next()
            .ok_or_else(|| bad(ln, "header line needs both a vertex and an edge count"))?,
        "edge count",
    )?;
    if parts.next().is_some() {
        return Err(bad(ln, "header line has trailing tokens"));
    }
    let mut g = Graph::with_vertices(n);
    let mut last = ln;
    for _ in 0..m {
        let (ln, s) = lines
            .next()
            .ok_or_else(|| bad(last, format!("file ends before all {m} edges were read")))?;
        last = ln;
        let mut parts = s.split_whitespace();
        let u: u32 = parse_token(ln, parts.next().unwrap_or(""), "vertex id")?;
        let v: u32 = parse_token(
            ln,
            parts
                .next()
                .ok_or_else(|| bad(ln, "edge line needs two vertex ids"))?,
            "vertex id",
        )?;
        if parts.next().is_some() {
            return Err(bad(ln, "edge line has trailing tokens"));
        }
        match g.add_edge(u, v) {
            Ok(true) => {}
            Ok(false) => return Err(bad(ln, format!("duplicate edge {u} {v}"))),
            Err(e) => return Err(bad(ln, e.to_string())),
        }
    }
    if let Some((ln, _)) = lines.next() {
        return Err(bad(ln, format!("unexpected content after {m} edges")));
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "{} {}", e.0, e.1);
    }
    out
}

/// Reads the rotation-system format: one line per vertex,
/// "v: u1 u2 … ud" listing the neighbours in cyclic order. Every
/// vertex must get exactly one line; isolated vertices list nothing
/// after the colon.
pub fn parse_rotations(text: &str) -> Result<RotationSystem> {
    let mut rows: Vec<(usize, u32, Vec<u32>)> = Vec::new();
    for (ln, s) in content_lines(text) {
        let (head, tail) = s
            .split_once(':')
            .ok_or_else(|| bad(ln, "rotation line needs the form 'v: u1 u2 ...'"))?;
        let v: u32 = parse_token(ln, head.trim(), "vertex id")?;
        let mut order = Vec::new();
        for token in tail.split_whitespace() {
            order.push(parse_token(ln, token, "neighbour id")?);
        }
        rows.push((ln, v, order));
    }
    let n = rows.len();
    let mut rot: Vec<Option<Vec<u32>>> = vec![None; n];
    for (ln, v, order) in rows {
        let slot = rot
            .get_mut(v as usize)
            .ok_or_else(|| bad(ln, format!("vertex {v} out of range for {n} rotation lines")))?;
        if slot.is_some() {
            return Err(bad(ln, format!("vertex {v} listed twice")));
        }
        *slot = Some(order);
    }
    RotationSystem::from_rotations(rot.into_iter().map(|r| r.unwrap_or_default()).collect())
}

pub fn write_rotations(rs: &RotationSystem) -> String {
    let mut out = String::new();
    for v in 0..rs.vertex_count() as u32 {
        let _ = write!(out, "{v}:");
        for u in rs.rotation(v) {
            let _ = write!(out, " {u}");
        }
        out.push('\n');
    }
    out
}

/// Reads a colouring: lines "u v colour". The palette is the largest
/// colour mentioned.
pub fn parse_colouring(text: &str) -> Result<EdgeColouring> {
    let mut triples: Vec<(usize, EdgeKey, u32)> = Vec::new();
    let mut top = 1;
    for (ln, s) in content_lines(text) {
        let mut parts = s.split_whitespace();
        let u: u32 = parse_token(ln, parts.next().unwrap_or(""), "vertex id")?;
        let v: u32 = parse_token(
            ln,
            parts
                .next()
                .ok_or_else(|| bad(ln, "colouring line needs 'u v colour'"))?,
            "vertex id",
        )?;
        let c: u32 = parse_token(
            ln,
            parts
                .next()
                .ok_or_else(|| bad(ln, "colouring line needs 'u v colour'"))?,
            "colour",
        )?;
        if parts.next().is_some() {
            return Err(bad(ln, "colouring line has trailing tokens"));
        }
        if u == v {
            return Err(bad(ln, format!("self-loop {u} {v} cannot be coloured")));
        }
        if c == 0 {
            return Err(bad(ln, "colours are 1-based"));
        }
        top = top.max(c);
        triples.push((ln, EdgeKey::new(u, v), c));
    }
    let mut col = EdgeColouring::new(top);
    for (ln, e, c) in triples {
        if col.get(e).is_some() {
            return Err(bad(ln, format!("edge {e} coloured twice")));
        }
        col.set(e, c).map_err(|err| bad(ln, err.to_string()))?;
    }
    Ok(col)
}

/// Writes the coloured edges of `g` in edge order, one "u v colour"
/// line each.
pub fn write_colouring(g: &Graph, col: &EdgeColouring) -> String {
    let mut out = String::new();
    for e in g.edges() {
        if let Some(c) = col.get(e) {
            let _ = writeln!(out, "{} {} {}", e.0, e.1, c);
        }
    }
    out
}

/// Reads one graph in graph6 format (optionally prefixed with the
/// ">>graph6<<" header). Import only; nothing here writes graph6.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let s = text.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let b = s.as_bytes();
    if b.is_empty() {
        return Err(bad(1, "empty graph6 input"));
    }
    for &byte in b {
        if !(63..=126).contains(&byte) {
            return Err(bad(1, format!("byte {byte} outside the graph6 range")));
        }
    }
    let (n, rest) = if b[0] == 126 {
        if b.len() >= 2 && b[1] == 126 {
            if b.len() < 8 {
                return Err(bad(1, "truncated graph6 vertex count"));
            }
            let mut n: u64 = 0;
            for &byte in &b[2..8] {
                n = (n << 6) | u64::from(byte - 63);
            }
            (n as usize, &b[8..])
        } else {
            if b.len() < 4 {
                return Err(bad(1, "truncated graph6 vertex count"));
            }
            let mut n: u64 = 0;
            for &byte in &b[1..4] {
                n = (n << 6) | u64::from(byte - 63);
            }
            (n as usize, &b[4..])
        }
    } else {
        ((b[0] - 63) as usize, &b[1..])
    };
    let bits_needed = n * n.saturating_sub(1) / 2;
    let bytes_needed = bits_needed.div_ceil(6);
    if rest.len() != bytes_needed {
        return Err(bad(
            1,
            format!(
                "graph6 body has {} bytes, expected {bytes_needed} for {n} vertices",
                rest.len()
            ),
        ));
    }
    let mut g = Graph::with_vertices(n);
    let mut k = 0usize;
    for j in 1..n as u32 {
        for i in 0..j {
            let byte = rest[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                g.add_edge(i, j).map_err(|e| bad(1, e.to_string()))?;
            }
            k += 1;
        }
    }
    Ok(g)
}

fn id_line(out: &mut String, label: &str, ids: &BTreeSet<u32>) {
    let _ = write!(out, "{label}:");
    for v in ids {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
}

/// Renders the four trash stages and the surviving vertex set.
pub fn write_trash(t: &TrashPartition) -> String {
    let mut out = String::new();
    id_line(&mut out, "T1", &t.t1);
    id_line(&mut out, "T2", &t.t2);
    id_line(&mut out, "T3", &t.t3);
    id_line(&mut out, "T4", &t.t4);
    id_line(&mut out, "kept", &t.kept_vertices().collect());
    out
}

/// Renders a charge run: one "V" line per vertex and one "F" line per
/// face with initial and final charges, then every transfer as an "X"
/// line in the order it fired.
pub fn ledger_dump(before: &ChargeLedger, after: &ChargeLedger) -> String {
    debug_assert_eq!(before.vertex_charge.len(), after.vertex_charge.len());
    debug_assert_eq!(before.face_charge.len(), after.face_charge.len());
    let mut out = String::new();
    for (v, (b, a)) in before
        .vertex_charge
        .iter()
        .zip(&after.vertex_charge)
        .enumerate()
    {
        let _ = writeln!(out, "V {v} init={b} final={a}");
    }
    for (f, (b, a)) in before
        .face_charge
        .iter()
        .zip(&after.face_charge)
        .enumerate()
    {
        let _ = writeln!(out, "F {f} init={b} final={a}");
    }
    for t in &after.transfers {
        let _ = writeln!(
            out,
            "X {} -> {} {} {}",
            t.source,
            ChargeNode::Vertex(t.target),
            t.amount,
            t.rule
        );
    }
    out
}

/// Renders the balance report, one line per element, violations
/// flagged, with a PASS/FAIL summary line at the end.
pub fn write_balance(report: &BalanceReport) -> String {
    let mut out = String::new();
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{} final={} floor={} {}",
            row.node,
            row.final_charge,
            row.floor,
            if row.ok() { "ok" } else { "VIOLATION" }
        );
    }
    let bad = report.violations().count();
    if bad == 0 {
        out.push_str("balance: PASS\n");
    } else {
        let _ = writeln!(out, "balance: FAIL ({bad} violations)");
    }
    out
}

/// Renders a reduction trace, one numbered step per line.
pub fn write_trace(trace: &ReductionTrace) -> String {
    let mut out = String::new();
    for (i, step) in trace.steps.iter().enumerate() {
        let tag = step
            .config
            .map(|k| k.to_string())
            .unwrap_or_else(|| "base".into());
        let _ = writeln!(
            out,
            "step {}: {} | {} | edges={} | {}",
            i + 1,
            tag,
            step.surgery,
            step.key.edge_count,
            step.outcome
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discharge::{apply_rules, compute_trash, initial_charges};
    use crate::embed::embed;
    use crate::gen::{random_planar, Density};

    #[test]
    fn graph_round_trip_is_stable() {
        for seed in 0..4u64 {
            let (g, rs) = random_planar(20, Density::Sparse, seed).unwrap();
            let text = write_graph(&g);
            let back = parse_graph(&text).unwrap();
            assert_eq!(back, g);
            assert_eq!(write_graph(&back), text);
            let rot_text = write_rotations(&rs);
            let rs_back = parse_rotations(&rot_text).unwrap();
            assert_eq!(rs_back, rs);
            assert_eq!(write_rotations(&rs_back), rot_text);
        }
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let g = parse_graph("# a triangle\n\n3 3\n0 1\n\n# middle\n1 2\n0 2\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.vertex_count(), 3);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases: &[(&str, usize)] = &[
            ("", 1),
            ("3\n", 1),
            ("3 2\n0 1\n", 2),
            ("3 1\n0 x\n", 2),
            ("3 1\n0 0\n", 2),
            ("3 1\n0 7\n", 2),
            ("3 2\n0 1\n0 1\n", 3),
            ("3 1\n0 1\n1 2\n", 3),
        ];
        for (text, want) in cases {
            match parse_graph(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, *want, "input {text:?}"),
                other => panic!("expected a parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn rotation_rejections_name_the_line() {
        assert!(matches!(
            parse_rotations("0: 1\n2: 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_rotations("0: 1\n1: 0\n0: 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_rotations("0 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn colouring_round_trip_and_errors() {
        let g = parse_graph("4 3\n0 1\n1 2\n2 3\n").unwrap();
        let col = parse_colouring("0 1 1\n1 2 2\n2 3 1\n").unwrap();
        assert_eq!(col.palette(), 2);
        assert_eq!(col.get(EdgeKey::new(1, 0)), Some(1));
        let text = write_colouring(&g, &col);
        assert_eq!(text, "0 1 1\n1 2 2\n2 3 1\n");
        let back = parse_colouring(&text).unwrap();
        assert_eq!(write_colouring(&g, &back), text);
        assert!(matches!(
            parse_colouring("0 1 1\n1 0 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_colouring("0 1 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn graph6_reads_known_graphs() {
        let k3 = parse_graph6("Bw").unwrap();
        assert_eq!(k3.vertex_count(), 3);
        assert_eq!(k3.edge_count(), 3);
        let p4 = parse_graph6("Ch").unwrap();
        assert_eq!(p4.vertex_count(), 4);
        assert_eq!(p4.edge_count(), 3);
        assert!(p4.has_edge(0, 1) && p4.has_edge(1, 2) && p4.has_edge(2, 3));
        let with_header = parse_graph6(">>graph6<<Bw").unwrap();
        assert_eq!(with_header, k3);
        assert!(parse_graph6("B").is_err());
        assert!(parse_graph6("").is_err());
    }

    #[test]
    fn ledger_dump_is_stable() {
        let edges: Vec<(u32, u32)> = (1..=3).map(|v| (0, v)).collect();
        let g = Graph::from_edges(4, &edges).unwrap();
        let rs = embed(&g).planar().unwrap();
        let trash = compute_trash(&g, &rs).unwrap();
        let before = initial_charges(&g, &trash).unwrap();
        let after = apply_rules(&g, &trash, &before);
        let dump = ledger_dump(&before, &after);
        assert_eq!(
            dump,
            "V 0 init=-3 final=-6\n\
             V 1 init=-5 final=-4\n\
             V 2 init=-5 final=-4\n\
             V 3 init=-5 final=-4\n\
             X V0 -> V1 1 RT\n\
             X V0 -> V2 1 RT\n\
             X V0 -> V3 1 RT\n"
        );
        let trash_text = write_trash(&trash);
        assert_eq!(trash_text, "T1: 1 2 3\nT2:\nT3:\nT4:\nkept: 0\n");
    }
}
