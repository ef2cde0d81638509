use crate::error::{Error, Result};
use crate::graph::{contains_k22, matching_vertex_cover, twin_classes, VertexSet};
use crate::instance::{lift, SspInstance};

use super::work::{RuleId, WeightField, WorkInstance};
use super::{rr_connected, Connectivity, Kernel, KernelOutcome, KernelStats, Pipeline};

/// Caps every twin class avoiding s and t at `r` members. The smallest
/// survivor stands in for the deleted twins as a neighbor and is barred from
/// paths. Returns the number of classes shrunk.
pub fn rr_twin_reduce(w: &mut WorkInstance, r: usize) -> Result<usize> {
    if r == 0 {
        return Err(Error::Precondition("twin bound must be positive".into()));
    }
    let unit = w.vertices().all(|v| w.kappa(v) == 1 && w.lambda(v) == 1 && w.eta(v) == 0);
    if !unit {
        return Err(Error::Precondition("twin reduction needs unit weights".into()));
    }
    let (snap, mapping) = w.snapshot();
    if r == 2 && contains_k22(&snap.graph) {
        return Err(Error::Precondition("graph contains a 4-cycle".into()));
    }
    let mut back = vec![0; snap.n()];
    for (old, new) in mapping.iter().enumerate() {
        if let Some(new) = new {
            back[*new] = old;
        }
    }
    let mut shrunk = 0;
    for class in twin_classes(&snap.graph) {
        let members: Vec<usize> = class.iter().filter(|&v| v != snap.s && v != snap.t).map(|v| back[v]).collect();
        if members.len() <= r {
            continue;
        }
        let survivor = members[0];
        w.remove_vertices(RuleId::Twins, &members[r..]);
        w.set_weight(RuleId::Twins, survivor, WeightField::Lambda, (members.len() - r + 1) as u64);
        w.set_weight(RuleId::Twins, survivor, WeightField::Kappa, w.k + 1);
        shrunk += 1;
    }
    Ok(shrunk)
}

/// `(c+2) + r·(c+2)^r` for cover size `c`, saturating.
pub fn twin_kernel_bound(cover: usize, r: usize) -> u128 {
    let base = cover as u128 + 2;
    let pow = base.checked_pow(r as u32).unwrap_or(u128::MAX);
    base.saturating_add((r as u128).saturating_mul(pow))
}

pub fn kernelize_vc_krr(i: &SspInstance, r: usize) -> Result<KernelOutcome> {
    if r == 0 {
        return Err(Error::Precondition("twin bound must be positive".into()));
    }
    i.validate()?;
    let mut w = WorkInstance::from_instance(&lift(i));
    if rr_connected(&mut w) == Connectivity::No {
        return Ok(KernelOutcome::No(w.into_trace()));
    }
    w.compact();
    let (input_n, input_m) = (w.vertex_count(), w.edge_count());
    let cover = matching_vertex_cover(&w.graph()).len();
    let shrunk = rr_twin_reduce(&mut w, r)?;
    w.compact();
    let (instance, _) = w.snapshot();
    let bound = twin_kernel_bound(cover, r);
    if instance.n() as u128 > bound {
        return Err(Error::Invariant(format!("twin kernel has {} vertices, bound {bound}", instance.n())));
    }
    let stats = KernelStats {
        pipeline: Pipeline::VcKrr { r },
        input_n,
        input_m,
        output_n: instance.n(),
        output_m: instance.graph.m(),
        parameter: cover,
        vertex_bound: Some(bound),
        edge_bound: None,
        forbidden: shrunk,
        good: 0,
        tree_sizes: Vec::new(),
    };
    let a = VertexSet::new(instance.n());
    Ok(KernelOutcome::Reduced(Kernel {
        instance,
        a,
        trace: w.into_trace(),
        stats,
    }))
}
