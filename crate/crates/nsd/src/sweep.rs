//! Batch sweeps over seeded instances.
//!
//! A sweep runs one independent job per index and returns the results
//! in index order, so its output is identical whether the jobs ran on
//! one thread or many. With the `parallel` feature (on by default)
//! jobs fan out across the rayon pool; without it the same code runs
//! sequentially. [`run_indexed_seq`] is always sequential, which gives
//! benchmarks a baseline to compare against inside one build.

use crate::config::{detect_all, ConfigurationWitness};
use crate::error::Result;
use crate::gen::{random_planar, Density};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Runs `count` jobs and collects their results in index order.
#[cfg(feature = "parallel")]
pub fn run_indexed<T, F>(count: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    (0..count).into_par_iter().map(job).collect()
}

/// Runs `count` jobs and collects their results in index order.
#[cfg(not(feature = "parallel"))]
pub fn run_indexed<T, F>(count: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    run_indexed_seq(count, job)
}

/// Sequential twin of [`run_indexed`], available in every build.
pub fn run_indexed_seq<T, F>(count: usize, job: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(job).collect()
}

/// Deterministic schedule for a detection sweep: instance `i` gets a
/// size cycling through `n_lo..=n_hi`, alternating density modes, and
/// seed `seed + i`.
#[derive(Debug, Clone, Copy)]
pub struct SweepPlan {
    pub count: usize,
    pub n_lo: usize,
    pub n_hi: usize,
    pub seed: u64,
}

impl SweepPlan {
    fn instance(&self, i: usize) -> (usize, Density, u64) {
        let span = self.n_hi.saturating_sub(self.n_lo) + 1;
        let n = self.n_lo + i % span;
        let density = if i.is_multiple_of(2) {
            Density::Sparse
        } else {
            Density::TriangulationMinus
        };
        (n, density, self.seed.wrapping_add(i as u64))
    }
}

/// Result of one sweep instance: the generated graph's parameters and
/// every configuration found in it at `k = max(28, Δ)`.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub index: usize,
    pub n: usize,
    pub density: Density,
    pub seed: u64,
    pub edge_count: usize,
    pub max_degree: usize,
    pub k: u32,
    pub witnesses: Vec<ConfigurationWitness>,
}

fn detect_one(plan: &SweepPlan, index: usize) -> Result<SweepOutcome> {
    let (n, density, seed) = plan.instance(index);
    let (g, _) = random_planar(n, density, seed)?;
    let k = 28.max(g.max_degree() as u32);
    let witnesses = detect_all(&g, k)?;
    Ok(SweepOutcome {
        index,
        n,
        density,
        seed,
        edge_count: g.edge_count(),
        max_degree: g.max_degree(),
        k,
        witnesses,
    })
}

/// Generates and scans every instance of the plan, fanning out across
/// the thread pool when the `parallel` feature is on.
pub fn detection_sweep(plan: &SweepPlan) -> Result<Vec<SweepOutcome>> {
    run_indexed(plan.count, |i| detect_one(plan, i))
        .into_iter()
        .collect()
}

/// Sequential twin of [`detection_sweep`].
pub fn detection_sweep_seq(plan: &SweepPlan) -> Result<Vec<SweepOutcome>> {
    run_indexed_seq(plan.count, |i| detect_one(plan, i))
        .into_iter()
        .collect()
}
