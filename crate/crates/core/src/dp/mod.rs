//! Dynamic program over nice tree decompositions with rank-based
//! representative sets.
//!
//! A cell is indexed by a [`PreSignature`]: the role of every bag vertex in a
//! partial solution (single-vertex path, path endpoint, inner vertex,
//! permitted neighbor, or untouched) plus a load budget. Its content is a set
//! of perfect matchings on the endpoints, pairing the two ends of each partial
//! path, each with the least cost achieving it. A cell at level `l` holds every
//! partial solution of load at most `l`.

pub mod partition;
pub mod reduce;
pub mod signature;
mod solver;
pub mod transitions;
pub mod wps;

pub use partition::{coarsen_join, Elem, Partition};
pub use reduce::{reduce, representative_bound, ReduceMode};
pub use signature::{PreSignature, Role};
pub use solver::{solve, Solution, SolveOptions, SolveStats};
pub use transitions::{Staircase, Table};
pub use wps::{glue, join, opt, proj, rmc, shift, union_min, Weight, WeightedPartitionSet};
