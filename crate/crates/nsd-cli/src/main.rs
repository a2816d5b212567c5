//! `nsd`: exact solving, configuration detection, discharging audits,
//! constructive colouring, verification, and corpus generation over
//! plain-text graph files.
//!
//! Exit codes: 0 success, 1 input or precondition error, 2 budget
//! exhausted, 3 internal invariant breach.

use clap::{Parser, Subcommand};
use nsd::colouring::{is_nsd_skipping_isolated_edges, is_proper};
use nsd::discharge::{
    apply_rules, charge_identity, compute_trash, initial_charges, verify_balance, TrashPartition,
};
use nsd::embed::RotationSystem;
use nsd::fmt as text;
use nsd::gen::{random_planar, Density};
use nsd::graph::Graph;
use nsd::reduce::construct_nsd;
use nsd::solver::{chi_sum_exact, ChiSumVerdict, SolveBudget};
use nsd::sweep::{detection_sweep, SweepPlan};
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "nsd", version, about = "Neighbour-sum-distinguishing edge colouring toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct BudgetArgs {
    /// Largest palette the search may reach.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    max_palette: u32,
    /// Colour-placement attempts before giving up.
    #[arg(long, default_value_t = 50_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    node_limit: u64,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
    time_limit: u64,
}

impl BudgetArgs {
    fn budget(&self) -> nsd::Result<SolveBudget> {
        SolveBudget::new(
            self.max_palette,
            self.node_limit,
            Duration::from_secs(self.time_limit),
        )
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact least palette size admitting an nsd colouring, with witness.
    ChiSum {
        graph: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Scan for reducible configurations, one witness line per kind found.
    Detect {
        graph: PathBuf,
        /// Palette parameter; defaults to max(28, max degree).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: Option<u32>,
    },
    /// Run the discharging audit: trash partition, ledger, balance report.
    Discharge {
        graph: PathBuf,
        embedding: PathBuf,
        /// Skip the trash pass and charge every vertex as kept.
        #[arg(long)]
        keep_all: bool,
    },
    /// Build an nsd colouring by recursive reduction and print it.
    Construct {
        graph: PathBuf,
        /// Palette parameter; defaults to max(28, max degree).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: Option<u32>,
        /// Also print the reduction trace.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check a colouring file for properness and sum distinction.
    Verify { graph: PathBuf, colouring: PathBuf },
    /// Generate a seeded random planar graph and its embedding.
    Gen {
        #[arg(long, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
        n: usize,
        #[arg(long, default_value = "sparse")]
        density: Density,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        seed: u64,
        /// Write <out>.txt and <out>.rot instead of printing the edge list.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate many instances and scan each for configurations.
    Sweep {
        #[arg(long, default_value_t = 100, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
        count: usize,
        #[arg(long, default_value_t = 5, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(3..))]
        n_lo: usize,
        #[arg(long, default_value_t = 60, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(3..))]
        n_hi: usize,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        seed: u64,
    },
}

/// An error that already knows its exit code and prints as-is.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Display) -> Failure {
        Failure { code: 1, message: message.to_string() }
    }

    fn at(path: &Path, err: nsd::Error) -> Failure {
        let code = if matches!(err, nsd::Error::BudgetExhausted(_)) { 2 } else { 1 };
        Failure { code, message: format!("{}: {err}", path.display()) }
    }
}

impl From<nsd::Error> for Failure {
    fn from(err: nsd::Error) -> Failure {
        let code = if matches!(err, nsd::Error::BudgetExhausted(_)) { 2 } else { 1 };
        Failure { code, message: err.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Failure {
        Failure::input(err)
    }
}

fn read_to_string(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Edge-list file, or graph6 when the extension is `.g6` or the content
/// carries the format header.
fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let body = read_to_string(path)?;
    let graph6 = path.extension().is_some_and(|e| e == "g6")
        || body.trim_start().starts_with(">>graph6<<");
    let parsed = if graph6 { text::parse_graph6(&body) } else { text::parse_graph(&body) };
    parsed.map_err(|e| Failure::at(path, e))
}

fn load_rotations(path: &Path) -> Result<RotationSystem, Failure> {
    let body = read_to_string(path)?;
    text::parse_rotations(&body).map_err(|e| Failure::at(path, e))
}

fn default_k(g: &Graph) -> u32 {
    28.max(g.max_degree() as u32)
}

fn no_isolated_edges(g: &Graph, path: &Path) -> Result<(), Failure> {
    match g.isolated_edges().first() {
        Some(&e) => Err(Failure::at(path, nsd::Error::IsolatedEdge(e))),
        None => Ok(()),
    }
}

fn density_name(d: Density) -> &'static str {
    match d {
        Density::Sparse => "sparse",
        Density::TriangulationMinus => "triangulation-minus",
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::ChiSum { graph, budget } => {
            let g = load_graph(&graph)?;
            let budget = budget.budget()?;
            match chi_sum_exact(&g, &budget).map_err(|e| Failure::at(&graph, e))? {
                ChiSumVerdict::Exact { value, colouring } => {
                    println!("{value}");
                    print!("{}", text::write_colouring(&g, &colouring));
                    Ok(())
                }
                ChiSumVerdict::LowerBound(bound) => Err(Failure {
                    code: 2,
                    message: format!("no exact value within budget; at least {bound}"),
                }),
            }
        }
        Cmd::Detect { graph, k } => {
            let g = load_graph(&graph)?;
            no_isolated_edges(&g, &graph)?;
            let k = k.unwrap_or_else(|| default_k(&g));
            let witnesses =
                nsd::config::detect_all(&g, k).map_err(|e| Failure::at(&graph, e))?;
            for w in &witnesses {
                println!("{w}");
            }
            println!("configurations: {}", witnesses.len());
            Ok(())
        }
        Cmd::Discharge { graph, embedding, keep_all } => {
            let g = load_graph(&graph)?;
            let rs = load_rotations(&embedding)?;
            let located = |e: nsd::Error| {
                let path = if matches!(e, nsd::Error::EmbeddingMismatch(_)) {
                    &embedding
                } else {
                    &graph
                };
                Failure::at(path, e)
            };
            let trash = if keep_all {
                TrashPartition::empty(&g, &rs).map_err(located)?
            } else {
                compute_trash(&g, &rs).map_err(located)?
            };
            let before = initial_charges(&g, &trash)?;
            let after = apply_rules(&g, &trash, &before);
            print!("{}", text::write_trash(&trash));
            print!("{}", text::ledger_dump(&before, &after));
            print!("{}", text::write_balance(&verify_balance(&g, &trash, &after)));
            println!(
                "total(before)={} total(after)={}",
                charge_identity(&before),
                charge_identity(&after)
            );
            Ok(())
        }
        Cmd::Construct { graph, k, trace, budget } => {
            let g = load_graph(&graph)?;
            let k = k.unwrap_or_else(|| default_k(&g));
            let budget = budget.budget()?;
            let (steps, res) = construct_nsd(&g, k, &budget);
            let colouring = res.map_err(|e| Failure::at(&graph, e))?;
            print!("{}", text::write_colouring(&g, &colouring));
            if trace {
                print!("{}", text::write_trace(&steps));
            }
            Ok(())
        }
        Cmd::Verify { graph, colouring } => {
            let g = load_graph(&graph)?;
            let body = read_to_string(&colouring)?;
            let col = text::parse_colouring(&body).map_err(|e| Failure::at(&colouring, e))?;
            let at = |e| Failure::at(&colouring, e);
            let proper = is_proper(&g, &col).map_err(at)?;
            let nsd_ok = proper && is_nsd_skipping_isolated_edges(&g, &col).map_err(at)?;
            let word = |b: bool| if b { "yes" } else { "no" };
            println!("proper: {}, nsd: {}", word(proper), word(nsd_ok));
            Ok(())
        }
        Cmd::Gen { n, density, seed, out } => {
            let (g, rs) = random_planar(n, density, seed)?;
            match out {
                Some(prefix) => {
                    let graph_path = prefix.with_extension("txt");
                    let rot_path = prefix.with_extension("rot");
                    std::fs::write(&graph_path, text::write_graph(&g))?;
                    std::fs::write(&rot_path, text::write_rotations(&rs))?;
                    println!("{}", graph_path.display());
                    println!("{}", rot_path.display());
                }
                None => print!("{}", text::write_graph(&g)),
            }
            Ok(())
        }
        Cmd::Sweep { count, n_lo, n_hi, seed } => {
            if n_lo > n_hi {
                return Err(Failure::input("--n-lo must not exceed --n-hi"));
            }
            let plan = SweepPlan { count, n_lo, n_hi, seed };
            let outcomes = detection_sweep(&plan)?;
            let mut hits = 0;
            for o in &outcomes {
                if !o.witnesses.is_empty() {
                    hits += 1;
                }
                println!(
                    "i={} n={} density={} seed={} m={} delta={} k={} witnesses={}",
                    o.index,
                    o.n,
                    density_name(o.density),
                    o.seed,
                    o.edge_count,
                    o.max_degree,
                    o.k,
                    o.witnesses.len()
                );
            }
            println!("non-empty: {hits}/{count}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(move || run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(f)) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
        Err(_) => {
            eprintln!("internal invariant breach");
            ExitCode::from(3)
        }
    }
}
