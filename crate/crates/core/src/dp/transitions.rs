//! Cell formulas for the five node kinds. Each reads completed child tables
//! and returns the weighted partition set of one parent signature.

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::instance::VwSspInstance;

use super::partition::{Elem, Partition};
use super::signature::{PreSignature, Role};
use super::wps::{glue, join, proj, shift, union_min, WeightedPartitionSet};

/// Cells of one role assignment at increasing load levels. The cell for a
/// level is the last step at or below it; consecutive steps differ.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Staircase {
    steps: Vec<(u32, WeightedPartitionSet)>,
}

impl Staircase {
    pub fn steps(&self) -> &[(u32, WeightedPartitionSet)] {
        &self.steps
    }

    pub fn levels(&self) -> impl Iterator<Item = u32> + '_ {
        self.steps.iter().map(|s| s.0)
    }

    /// Step in force at level `l`.
    pub fn at(&self, l: u32) -> Option<(u32, &WeightedPartitionSet)> {
        let i = self.steps.partition_point(|s| s.0 <= l);
        i.checked_sub(1).map(|i| (self.steps[i].0, &self.steps[i].1))
    }

    /// Appends a cell for a level above all current steps unless it repeats
    /// the last one.
    pub fn push(&mut self, l: u32, cell: WeightedPartitionSet) {
        debug_assert!(self.steps.last().is_none_or(|s| s.0 < l));
        if cell.is_empty() || self.steps.last().is_some_and(|s| s.1 == cell) {
            return;
        }
        self.steps.push((l, cell));
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn entries(&self) -> usize {
        self.steps.iter().map(|s| s.1.len()).sum()
    }
}

/// Keyed by role assignment with the level field zeroed.
pub type Table = FxHashMap<PreSignature, Staircase>;

/// Cell of `sig` at its level, if nonempty.
pub fn cell_at<'a>(table: &'a Table, sig: &PreSignature) -> Option<(u32, &'a WeightedPartitionSet)> {
    table.get(&sig.with_l(0))?.at(sig.l)
}

fn lookup(table: &Table, sig: &PreSignature) -> WeightedPartitionSet {
    cell_at(table, sig).map(|c| c.1.clone()).unwrap_or_default()
}

fn finish(mut a: WeightedPartitionSet, k: u64) -> WeightedPartitionSet {
    a.prune_above(k);
    a
}

fn is_endpoint(inst: &VwSspInstance, v: Elem) -> bool {
    v as usize == inst.s || v as usize == inst.t
}

pub fn transition_leaf(inst: &VwSspInstance, sig: &PreSignature) -> WeightedPartitionSet {
    let (s, t) = (inst.s as Elem, inst.t as Elem);
    let expected = PreSignature::from_roles([(s, Role::Zero), (t, Role::Zero)], sig.l);
    if *sig != expected || inst.eta[inst.s] + inst.eta[inst.t] > sig.l as u64 {
        return WeightedPartitionSet::new();
    }
    finish(
        WeightedPartitionSet::singleton(Partition::empty(), inst.kappa[inst.s] + inst.kappa[inst.t]),
        inst.k,
    )
}

pub fn transition_introduce_vertex(
    inst: &VwSspInstance,
    v: Elem,
    sig: &PreSignature,
    child: &Table,
) -> Result<WeightedPartitionSet> {
    let l = sig.l as u64;
    let vi = v as usize;
    let out = match sig.role(v) {
        Some(Role::Zero) if l >= inst.eta[vi] => {
            let below = sig.with(v, None).with_l((l - inst.eta[vi]) as u32);
            shift(inst.kappa[vi] as i64, &lookup(child, &below))?
        }
        Some(Role::Neighbor) if l >= inst.lambda[vi] => {
            let below = sig.with(v, None).with_l((l - inst.lambda[vi]) as u32);
            lookup(child, &below)
        }
        None => lookup(child, sig),
        _ => WeightedPartitionSet::new(),
    };
    Ok(finish(out, inst.k))
}

pub fn transition_introduce_edge(
    inst: &VwSspInstance,
    u: Elem,
    v: Elem,
    sig: &PreSignature,
    child: &Table,
) -> Result<WeightedPartitionSet> {
    let (ru, rv) = (sig.role(u), sig.role(v));
    let on_path = |r: Option<Role>| r.is_some_and(Role::on_path);
    if (on_path(ru) && rv.is_none()) || (on_path(rv) && ru.is_none()) {
        return Ok(WeightedPartitionSet::new());
    }
    let base = lookup(child, sig);
    let via_edge = match (ru, rv) {
        (Some(Role::End), Some(Role::End)) => {
            let below = sig.with(u, Some(Role::Zero)).with(v, Some(Role::Zero));
            glue(u, v, &lookup(child, &below))
        }
        (Some(Role::Inner), Some(Role::Inner)) => {
            let below = sig.with(u, Some(Role::End)).with(v, Some(Role::End));
            proj(&[u, v], &glue(u, v, &lookup(child, &below)))
        }
        (Some(Role::End), Some(Role::Inner)) => {
            let below = sig.with(u, Some(Role::Zero)).with(v, Some(Role::End));
            proj(&[v], &glue(u, v, &lookup(child, &below)))
        }
        (Some(Role::Inner), Some(Role::End)) => {
            let below = sig.with(v, Some(Role::Zero)).with(u, Some(Role::End));
            proj(&[u], &glue(u, v, &lookup(child, &below)))
        }
        _ => WeightedPartitionSet::new(),
    };
    Ok(finish(union_min(&base, &via_edge), inst.k))
}

pub fn transition_forget(
    inst: &VwSspInstance,
    v: Elem,
    sig: &PreSignature,
    child: &Table,
) -> Result<WeightedPartitionSet> {
    if is_endpoint(inst, v) {
        return Err(Error::Precondition("s and t are never forgotten".into()));
    }
    let mut out = lookup(child, &sig.with(v, Some(Role::Neighbor)));
    out = union_min(&out, &lookup(child, &sig.with(v, Some(Role::Inner))));
    out = union_min(&out, &lookup(child, sig));
    Ok(finish(out, inst.k))
}

pub(crate) fn join_role_splits(role: Role) -> &'static [(Role, Role)] {
    match role {
        Role::Zero => &[(Role::Zero, Role::Zero)],
        Role::End => &[(Role::Zero, Role::End), (Role::End, Role::Zero)],
        Role::Inner => &[
            (Role::Zero, Role::Inner),
            (Role::Inner, Role::Zero),
            (Role::End, Role::End),
        ],
        Role::Neighbor => &[(Role::Neighbor, Role::Neighbor)],
    }
}

/// Load and cost counted by both children of a join for this signature.
pub(crate) fn join_overlap(inst: &VwSspInstance, sig: &PreSignature) -> (u64, u64) {
    let mut load = 0;
    let mut cost = 0;
    for &(v, r) in sig.roles() {
        let vi = v as usize;
        if r == Role::Neighbor {
            load += inst.lambda[vi];
        } else {
            load += inst.eta[vi];
            cost += inst.kappa[vi];
        }
    }
    (load, cost)
}

/// All child signature pairs `(left roles, right roles)` a join cell draws from,
/// ignoring load levels.
pub(crate) fn join_splits(sig: &PreSignature) -> Vec<(PreSignature, PreSignature)> {
    let mut out = vec![(PreSignature::new(0), PreSignature::new(0))];
    for &(v, r) in sig.roles() {
        let mut next = Vec::with_capacity(out.len() * 3);
        for (a, b) in &out {
            for &(ra, rb) in join_role_splits(r) {
                next.push((a.with(v, Some(ra)), b.with(v, Some(rb))));
            }
        }
        out = next;
    }
    out
}

/// Endpoints of either child that become inner vertices at the parent.
pub(crate) fn join_projected(sig: &PreSignature, left: &PreSignature, right: &PreSignature) -> SmallVec<[Elem; 8]> {
    let mut x: SmallVec<[Elem; 8]> = left.ends();
    x.extend(right.ends());
    x.sort_unstable();
    x.dedup();
    x.retain(|e| sig.role(*e) != Some(Role::End));
    x
}

pub fn transition_join(
    inst: &VwSspInstance,
    sig: &PreSignature,
    left: &Table,
    right: &Table,
) -> Result<WeightedPartitionSet> {
    let (overlap_load, overlap_cost) = join_overlap(inst, sig);
    let total = sig.l as u64 + overlap_load;
    let mut out = WeightedPartitionSet::new();
    for (ly_roles, lz_roles) in join_splits(sig) {
        let (Some(ys), Some(zs)) = (left.get(&ly_roles), right.get(&lz_roles)) else {
            continue;
        };
        let x = join_projected(sig, &ly_roles, &lz_roles);
        // Levels between steps of the left child add nothing new.
        for (ly, a) in ys.steps() {
            let Some(lz) = total.checked_sub(*ly as u64) else {
                break;
            };
            let Some((_, b)) = zs.at(lz.min(u32::MAX as u64) as u32) else {
                continue;
            };
            let merged = proj(&x, &join(a, b));
            let shifted = shift(-(overlap_cost as i64), &merged)?;
            out = union_min(&out, &shifted);
        }
    }
    Ok(finish(out, inst.k))
}

/// Weight of the single s-t path at the root cell, if at most `k`.
pub fn root_weight(inst: &VwSspInstance, root: &Table) -> Option<u64> {
    let (s, t) = (inst.s as Elem, inst.t as Elem);
    let sig = PreSignature::from_roles([(s, Role::End), (t, Role::End)], inst.l as u32);
    cell_at(root, &sig)?
        .1
        .weight_of(&Partition::from_pairs(&[(s, t)]))
        .filter(|&w| w <= inst.k)
}
