//! Constructive reduction machinery: the exact conflict bound, the
//! dynamic-list extension enumerator, nine local repair procedures and a
//! recursive driver that stitches them into a colouring algorithm.

mod lemma1;
mod reducers;

pub use lemma1::{lemma1_extensions, Extension};
pub use reducers::{
    reduce, reduce_c1, reduce_c2, reduce_c3, reduce_c4, reduce_c5, reduce_c6, reduce_c7,
    reduce_c8, reduce_c9, Provider,
};

use crate::colouring::{self, EdgeColouring};
use crate::config::{self, ConfigKind, ConfigurationWitness};
use crate::graph::{smaller_than, Graph, GraphOrderKey};
use crate::solver::{colour_by_minimality_with_meter, BudgetMeter, SolveBudget};
use crate::{Error, Result};
use std::cmp::Ordering;

/// Degree threshold of Observation-2 type: a sum conflict between a vertex
/// of degree `d` and a neighbour of degree at most `r` forces
/// `d <= sqrt((2k-r+4)(r-1) + 1/4) + 1/2`.  The radicand is kept so the
/// comparison stays in integers: `d <= bound  <=>  d(d-1) <= radicand`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConflictBound {
    radicand: u64,
}

impl ConflictBound {
    /// Whether a vertex of degree `d_u` is at or below the bound, i.e.
    /// whether a conflict with a degree-`<= r` neighbour is arithmetically
    /// possible at all.
    pub fn admits(&self, d_u: usize) -> bool {
        let d = d_u as u64;
        d * d.saturating_sub(1) <= self.radicand
    }

    /// Floating-point value of the bound, for display only.
    pub fn approx(&self) -> f64 {
        0.5 + (self.radicand as f64 + 0.25).sqrt()
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }
}

/// The threshold of the conflict bound for palette parameter `k` and
/// neighbour degree `r`.
pub fn conflict_bound(k: u32, r: u32) -> Result<ConflictBound> {
    if !(1..=6).contains(&r) {
        return Err(Error::Parameter(format!("r = {r} must lie in 1..6")));
    }
    if k < r {
        return Err(Error::Parameter(format!("k = {k} must be at least r = {r}")));
    }
    let (k, r) = (k as u64, r as u64);
    Ok(ConflictBound {
        radicand: (2 * k - r + 4) * (r - 1),
    })
}

/// Companion predicate: can a vertex of degree `d_u` be in conflict with a
/// neighbour of degree at most `r` under palette `1..=k+1`?
pub fn conflict_possible(d_u: usize, r: u32, k: u32) -> Result<bool> {
    Ok(conflict_bound(k, r)?.admits(d_u))
}

/// One step of the reduction recursion, keyed by the graph it processed.
#[derive(Debug, Clone)]
pub struct TraceStep {
    /// Configuration that fired, or `None` for cutoff / fallback solves.
    pub config: Option<ConfigKind>,
    /// Human-readable description of the surgery performed.
    pub surgery: String,
    /// Order key of the graph handled at this step.
    pub key: GraphOrderKey,
    /// What happened after the recursive colouring came back.
    pub outcome: String,
}

/// Audit log of a [`construct_nsd`] run.  Steps are recorded in recursion
/// order, so their keys must strictly decrease: each reducer hands the
/// provider a strictly smaller graph.
#[derive(Debug, Clone, Default)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    pub fn strictly_decreasing(&self) -> bool {
        self.steps
            .windows(2)
            .all(|w| w[0].key.compare(&w[1].key) == Ordering::Greater)
    }
}

const SMALL_EDGE_CUTOFF: usize = 12;
const SMALL_DEGREE_CUTOFF: usize = 5;

/// Detection order: cheapest surgeries first.
const REDUCTION_ORDER: [ConfigKind; 9] = [
    ConfigKind::C3,
    ConfigKind::C4,
    ConfigKind::C5,
    ConfigKind::C2,
    ConfigKind::C1,
    ConfigKind::C6,
    ConfigKind::C7,
    ConfigKind::C8,
    ConfigKind::C9,
];

/// Builds an nsd `(k+1)`-colouring of `g` by recursive reduction: detect a
/// configuration, perform its surgery, colour the smaller graph, repair.
/// Small graphs and reducts where no configuration fires fall back to
/// backtracking search.  The trace is returned even when the run fails, so
/// a budget exhaustion still leaves an audit prefix.
pub fn construct_nsd(
    g: &Graph,
    k: u32,
    budget: &SolveBudget,
) -> (ReductionTrace, Result<EdgeColouring>) {
    let mut trace = ReductionTrace::default();
    if let Err(e) = preflight(g, k, budget) {
        return (trace, Err(e));
    }
    let mut meter = BudgetMeter::start(budget);
    let res = go(g, k, &mut trace, &mut meter).and_then(|col| {
        if colouring::is_proper(g, &col)? && colouring::is_nsd(g, &col)? {
            Ok(col)
        } else {
            Err(Error::ExtensionFailed(
                "driver produced a colouring that fails final validation".into(),
            ))
        }
    });
    (trace, res)
}

fn preflight(g: &Graph, k: u32, budget: &SolveBudget) -> Result<()> {
    budget.validate()?;
    if let Some(e) = g.isolated_edges().first() {
        return Err(Error::IsolatedEdge(*e));
    }
    let need = 28.max(g.max_degree() as u32);
    if k < need {
        return Err(Error::Parameter(format!(
            "k = {k} must be at least max(28, max degree) = {need}"
        )));
    }
    Ok(())
}

fn go(
    g: &Graph,
    k: u32,
    trace: &mut ReductionTrace,
    meter: &mut BudgetMeter,
) -> Result<EdgeColouring> {
    meter.tick()?;
    let key = g.order_key();
    if g.edge_count() <= SMALL_EDGE_CUTOFF || g.max_degree() <= SMALL_DEGREE_CUTOFF {
        let col = colour_by_minimality_with_meter(g, k + 1, meter)?;
        trace.steps.push(TraceStep {
            config: None,
            surgery: "small-graph cutoff".into(),
            key,
            outcome: format!("backtracking on {} edges", g.edge_count()),
        });
        return Ok(col);
    }
    let witness = REDUCTION_ORDER
        .iter()
        .find_map(|&kind| config::detect_kind(g, k, kind, 1).into_iter().next());
    let Some(w) = witness else {
        return fallback(g, k, trace, meter, "no configuration detected");
    };
    let mark = trace.steps.len();
    trace.steps.push(TraceStep {
        config: Some(w.kind),
        surgery: surgery_description(g, &w),
        key: key.clone(),
        outcome: String::new(),
    });
    let attempt = {
        let mut provider = |h: &Graph| -> Result<EdgeColouring> {
            assert!(
                smaller_than(h, g),
                "reducer for {} handed the provider a graph that is not strictly smaller",
                w.kind
            );
            go(h, k, trace, meter)
        };
        reducers::reduce(g, &w, k, &mut provider)
    };
    match attempt {
        Ok(col) => {
            trace.steps[mark].outcome = "repaired into a valid colouring".into();
            Ok(col)
        }
        Err(Error::ExtensionFailed(msg)) | Err(Error::ListPrecondition(msg)) => {
            trace.steps.truncate(mark);
            fallback(g, k, trace, meter, &format!("{} gave up: {msg}", w.kind))
        }
        Err(e) => Err(e),
    }
}

fn fallback(
    g: &Graph,
    k: u32,
    trace: &mut ReductionTrace,
    meter: &mut BudgetMeter,
    why: &str,
) -> Result<EdgeColouring> {
    let col = colour_by_minimality_with_meter(g, k + 1, meter)?;
    trace.steps.push(TraceStep {
        config: None,
        surgery: format!("fallback search ({why})"),
        key: g.order_key(),
        outcome: "solved by backtracking".into(),
    });
    Ok(col)
}

fn surgery_description(g: &Graph, w: &ConfigurationWitness) -> String {
    let u = w.u;
    match w.kind {
        ConfigKind::C1 => {
            let wv = w.role1("w").unwrap_or(u);
            let x = w.role1("x").unwrap_or(u);
            if g.has_edge(wv, x) {
                format!("delete {u}-{wv}, {u}-{x}, {wv}-{x}")
            } else {
                format!("delete {u}-{wv}, {u}-{x}")
            }
        }
        ConfigKind::C2 => {
            let wv = w.role1("w").unwrap_or(u);
            format!("split vertex {wv}")
        }
        ConfigKind::C3 => {
            let v = w.role1("v").unwrap_or(u);
            let wv = w.role1("w").unwrap_or(u);
            format!("remove or contract {v}-{wv}")
        }
        ConfigKind::C4 => {
            let v = w.role1("v").unwrap_or(u);
            let x = w.role1("x").unwrap_or(u);
            format!("split vertices {v} and {x}")
        }
        ConfigKind::C5 => {
            let a = w.role1("deg2").unwrap_or(u);
            let b = w.role1("low").unwrap_or(u);
            format!("delete {a}-{b}")
        }
        ConfigKind::C6 => {
            let v = w.role1("v").unwrap_or(u);
            let wv = w.role1("w").unwrap_or(u);
            format!("delete {v}-{wv}")
        }
        ConfigKind::C7 => {
            let p1 = w.role("pair1").unwrap_or(&[]);
            let p2 = w.role("pair2").unwrap_or(&[]);
            format!(
                "delete {}-{} and {}-{}",
                p1.first().copied().unwrap_or(u),
                p1.get(1).copied().unwrap_or(u),
                p2.first().copied().unwrap_or(u),
                p2.get(1).copied().unwrap_or(u)
            )
        }
        ConfigKind::C8 => {
            let v = w.role1("v").unwrap_or(u);
            format!("disjoin {u}-{v} from {v}")
        }
        ConfigKind::C9 => {
            let p = w.role("vs").map_or(0, <[u32]>::len);
            format!("delete all edges inside {{{u}}} and its {p} low neighbours")
        }
    }
}
