//! Neighbour-sum-distinguishing (nsd) edge colourings on planar graphs.
//!
//! A proper edge colouring with colours `1..=K` is *nsd* when every pair of
//! adjacent vertices receives distinct sums of incident edge colours.  The
//! crate provides:
//!
//! - exact small-graph machinery: [`solver::find_nsd_colouring`],
//!   [`solver::chi_sum_exact`];
//! - combinatorial embeddings (rotation systems), face traversal, a
//!   quadratic planarity/embedding algorithm, and a seeded random planar
//!   generator;
//! - detectors for the nine reducible configurations that drive the
//!   structural argument for planar graphs with large maximum degree, and
//!   the matching reduction engine [`reduce::construct_nsd`] which builds an
//!   nsd `(k+1)`-colouring by repeated reduction;
//! - a discharging auditor: trash partition, initial charges, the fifteen
//!   discharging rules plus the trash rule, conservation and balance checks.
//!
//! All arithmetic on thresholds and charges is exact (integers and
//! rationals); nothing is compared through floating point.

pub mod colouring;
pub mod config;
pub mod discharge;
pub mod embed;
pub mod error;
pub mod fmt;
pub mod gen;
pub mod graph;
pub mod reduce;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{EdgeKey, Graph};
