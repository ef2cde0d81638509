use crate::error::{Error, Result};
use crate::graph::{feedback_edge_set, VertexSet};
use crate::instance::{is_simple_instance, lift, SspInstance};

use super::trees::Forest;
use super::work::{RuleId, WorkInstance};
use super::{rr_connected, Connectivity, Kernel, KernelOutcome, KernelStats, Pipeline};

fn forest<'a>(good: &'a VertexSet, none: &'a VertexSet) -> Forest<'a> {
    Forest { f: none, good, r: none }
}

/// s, t and every endpoint of a feedback edge.
pub fn fes_good_vertices(w: &WorkInstance, fes: &[(usize, usize)]) -> VertexSet {
    let mut good = VertexSet::from_iter_n(w.id_bound(), [w.s, w.t]);
    for &(u, v) in fes {
        good.insert(u);
        good.insert(v);
    }
    good
}

/// Leaf burning on the spanning tree left by a feedback edge set; `good`
/// must contain s, t and all feedback edge endpoints.
pub fn rr_burn_leaf_fes(w: &mut WorkInstance, good: &VertexSet) -> bool {
    let none = VertexSet::new(0);
    forest(good, &none).burn_one(w, RuleId::BurnLeafFes)
}

pub fn rr_shrink_edgy_fes(w: &mut WorkInstance, good: &VertexSet) -> bool {
    let none = VertexSet::new(0);
    forest(good, &none).shrink_one(w, RuleId::ShrinkEdgyFes)
}

pub fn fes_applicable_rules(w: &WorkInstance, good: &VertexSet) -> Vec<RuleId> {
    let none = VertexSet::new(0);
    let forest = forest(good, &none);
    let mut out = Vec::new();
    if forest.has_leaf(w) {
        out.push(RuleId::BurnLeafFes);
    }
    if forest.has_long_run(w) {
        out.push(RuleId::ShrinkEdgyFes);
    }
    out
}

pub fn kernelize_fes(i: &SspInstance) -> Result<KernelOutcome> {
    i.validate()?;
    let mut w = WorkInstance::from_instance(&lift(i));
    if rr_connected(&mut w) == Connectivity::No {
        return Ok(KernelOutcome::No(w.into_trace()));
    }
    w.compact();
    let (input_n, input_m) = (w.vertex_count(), w.edge_count());
    let fes = feedback_edge_set(&w.graph())?;
    let good = fes_good_vertices(&w, &fes);
    let none = VertexSet::new(0);
    let forest = forest(&good, &none);
    forest.burn_all(&mut w, RuleId::BurnLeafFes);
    forest.shrink_all(&mut w, RuleId::ShrinkEdgyFes);
    let left = fes_applicable_rules(&w, &good);
    if !left.is_empty() {
        return Err(Error::Invariant(format!("rules still applicable after reduction: {left:?}")));
    }
    w.compact();
    let (instance, _) = w.snapshot();
    let vertex_bound = 16 * fes.len() + 9;
    let edge_bound = 17 * fes.len() + 8;
    if instance.n() > vertex_bound || instance.graph.m() > edge_bound {
        return Err(Error::Invariant(format!(
            "fes kernel has {} vertices and {} edges for fes {}",
            instance.n(),
            instance.graph.m(),
            fes.len()
        )));
    }
    let a = VertexSet::new(instance.n());
    if !is_simple_instance(&instance, &a) {
        return Err(Error::Invariant("fes kernel is not simple".into()));
    }
    let stats = KernelStats {
        pipeline: Pipeline::Fes,
        input_n,
        input_m,
        output_n: instance.n(),
        output_m: instance.graph.m(),
        parameter: fes.len(),
        vertex_bound: Some(vertex_bound as u128),
        edge_bound: Some(edge_bound as u128),
        forbidden: 0,
        good: good.len(),
        tree_sizes: Vec::new(),
    };
    Ok(KernelOutcome::Reduced(Kernel {
        instance,
        a,
        trace: w.into_trace(),
        stats,
    }))
}
