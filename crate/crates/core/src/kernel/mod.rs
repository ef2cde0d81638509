//! Data reduction rules and the three kernelization pipelines.
//!
//! Rules act on a [`WorkInstance`], which keeps vertex ids stable while
//! vertices come and go and records every primitive change in a
//! [`ReductionTrace`]. Pipelines renumber once the component of s and t is
//! isolated and again at the end.

mod fes;
mod fvs;
mod trees;
mod twins;
mod work;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::VertexSet;
use crate::instance::{expand_to_ssp, Expansion, PathWitness, SspInstance, VwSspInstance};

pub use fes::{fes_applicable_rules, fes_good_vertices, kernelize_fes, rr_burn_leaf_fes, rr_shrink_edgy_fes};
pub use fvs::{
    classify_fvs, fvs_applicable_rules, kernelize_fvs, rr_burn_leaf, rr_delete_trees, rr_forbidden, rr_shrink_edgy,
    FvsClassification,
};
pub use twins::{kernelize_vc_krr, rr_twin_reduce, twin_kernel_bound};
pub use work::{ReductionTrace, RuleId, TraceOp, TraceStep, WeightField, WorkInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    Fvs,
    Fes,
    VcKrr { r: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    Connected,
    No,
}

/// Keeps only the component holding s, or reports that t lies elsewhere.
pub fn rr_connected(w: &mut WorkInstance) -> Connectivity {
    let mut seen = VertexSet::new(w.id_bound());
    seen.insert(w.s);
    let mut stack = vec![w.s];
    while let Some(v) = stack.pop() {
        for u in w.neighbors(v) {
            if !seen.contains(u) {
                seen.insert(u);
                stack.push(u);
            }
        }
    }
    if !seen.contains(w.t) {
        return Connectivity::No;
    }
    let rest: Vec<usize> = w.vertices().filter(|&v| !seen.contains(v)).collect();
    w.remove_vertices(RuleId::Connected, &rest);
    Connectivity::Connected
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelStats {
    pub pipeline: Pipeline,
    /// Size after discarding other components.
    pub input_n: usize,
    pub input_m: usize,
    pub output_n: usize,
    pub output_m: usize,
    /// Feedback vertex set size, feedback edge count, or vertex cover size.
    pub parameter: usize,
    pub vertex_bound: Option<u128>,
    pub edge_bound: Option<u128>,
    /// Forbidden vertices (fvs) or shrunk twin classes.
    pub forbidden: usize,
    pub good: usize,
    /// `(vertices, good vertices)` per remaining tree.
    pub tree_sizes: Vec<(usize, usize)>,
}

/// Reduced instance with the vertex set the expansion must leave alone.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub instance: VwSspInstance,
    pub a: VertexSet,
    pub trace: ReductionTrace,
    pub stats: KernelStats,
}

impl Kernel {
    pub fn expand(&self) -> Result<Expansion> {
        expand_to_ssp(&self.instance, &self.a)
    }

    /// Original-instance path for a path of the kernel.
    pub fn lift_witness(&self, path: &PathWitness) -> Result<PathWitness> {
        self.trace.lift_path(path)
    }
}

#[derive(Clone, Debug)]
pub enum KernelOutcome {
    Reduced(Kernel),
    /// s and t lie in different components.
    No(ReductionTrace),
}

impl KernelOutcome {
    pub fn kernel(&self) -> Option<&Kernel> {
        match self {
            KernelOutcome::Reduced(k) => Some(k),
            KernelOutcome::No(_) => None,
        }
    }

    pub fn trace(&self) -> &ReductionTrace {
        match self {
            KernelOutcome::Reduced(k) => &k.trace,
            KernelOutcome::No(t) => t,
        }
    }
}

pub fn kernelize(i: &SspInstance, pipeline: Pipeline) -> Result<KernelOutcome> {
    match pipeline {
        Pipeline::Fvs => kernelize_fvs(i),
        Pipeline::Fes => kernelize_fes(i),
        Pipeline::VcKrr { r } => kernelize_vc_krr(i, r),
    }
}
