//! Exact solvers for the short secluded path problem: find an s-t path with
//! at most `k` vertices and at most `l` vertices next to it, and its
//! vertex-weighted generalization.
//!
//! The crate provides
//! - graph and instance types ([`graph`], [`instance`]),
//! - kernelization pipelines with witness lift-back ([`kernel`]),
//! - tree decompositions and their nice form ([`treedecomp`]),
//! - a single-exponential treewidth DP with rank-based reduction ([`dp`]),
//! - a brute-force reference ([`oracle`]) and instance generators
//!   ([`generators`]).

pub mod dp;
pub mod error;
pub mod format;
pub mod generators;
pub mod graph;
pub mod instance;
pub mod kernel;
pub mod oracle;
pub mod treedecomp;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use dp::{solve, ReduceMode, Solution, SolveOptions, SolveStats};
pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use instance::{evaluate_path, expand_to_ssp, lift, PathWitness, SspInstance, VwSspInstance};
pub use oracle::{brute_force_solve, OracleAnswer};
pub use treedecomp::{make_nice, NiceTreeDecomposition, TreeDecomposition};

/// Heuristic decomposition, nice form and DP in one call.
pub fn solve_with_heuristic(i: &VwSspInstance, opts: SolveOptions) -> Result<Solution> {
    let td = treedecomp::heuristic_decomposition(&i.graph)?;
    let ntd = make_nice(&td, &i.graph, i.s, i.t)?;
    solve(i, &ntd, opts)
}
