use std::collections::{HashMap, HashSet};
use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{evaluate_path, PathWitness, VwSspInstance};
use crate::treedecomp::{NiceTreeDecomposition, NodeKind};

use super::partition::{coarsen_join, Elem, Partition};
use super::reduce::{reduce, representative_bound, ReduceMode};
use super::signature::{PreSignature, Role};
use super::transitions::{
    cell_at, join_overlap, join_projected, join_splits, root_weight, transition_forget, transition_introduce_edge,
    transition_introduce_vertex, transition_join, transition_leaf, Staircase, Table,
};
use super::wps::{Weight, WeightedPartitionSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub reduce: ReduceMode,
    /// Keep all tables and rebuild a witness path.
    pub witness: bool,
    /// Evaluate the cells of one node on the rayon pool.
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            reduce: ReduceMode::CutBasis,
            witness: true,
            parallel: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub width: usize,
    pub nodes: usize,
    /// Largest single cell after reduction.
    pub max_cell: usize,
    /// Largest number of entries stored at one node.
    pub max_table: usize,
    pub total_entries: u64,
    pub max_signatures: usize,
    /// Signature count times representative bound for bags of the
    /// decomposition's width.
    pub table_bound: f64,
    pub timings_ms: HashMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub answer: bool,
    pub min_cost: Option<u64>,
    pub witness: Option<PathWitness>,
    pub stats: SolveStats,
}

/// Load levels at which a parent cell may change, per role assignment.
type Candidates = FxHashMap<PreSignature, Vec<u32>>;

fn add_levels(out: &mut Candidates, roles: PreSignature, levels: impl Iterator<Item = u64>, cap: u64) {
    let slot = out.entry(roles).or_default();
    slot.extend(levels.filter(|&l| l <= cap).map(|l| l as u32));
}

/// Role assignments that may be nonempty at a node, each with the load
/// levels where its cell can differ from the level below. These are the
/// child step levels shifted by the weight the transition adds.
fn candidates(inst: &VwSspInstance, kind: NodeKind, children: &[&Table]) -> Vec<(PreSignature, Vec<u32>)> {
    let cap = inst.l;
    let (s, t) = (inst.s as Elem, inst.t as Elem);
    let mut out = Candidates::default();
    let levels = |st: &Staircase| st.levels().map(u64::from).collect::<Vec<_>>();
    match kind {
        NodeKind::Leaf => {
            let roles = PreSignature::from_roles([(s, Role::Zero), (t, Role::Zero)], 0);
            add_levels(&mut out, roles, std::iter::once(inst.eta[inst.s] + inst.eta[inst.t]), cap);
        }
        NodeKind::IntroduceVertex(v) => {
            let v32 = v as Elem;
            for (roles, st) in children[0] {
                let ls = levels(st);
                add_levels(&mut out, roles.clone(), ls.iter().copied(), cap);
                let (eta, lambda) = (inst.eta[v], inst.lambda[v]);
                add_levels(&mut out, roles.with(v32, Some(Role::Zero)), ls.iter().map(|l| l + eta), cap);
                add_levels(&mut out, roles.with(v32, Some(Role::Neighbor)), ls.iter().map(|l| l + lambda), cap);
            }
        }
        NodeKind::IntroduceEdge(u, v) => {
            let (u, v) = (u as Elem, v as Elem);
            let endpoint = |x: Elem| x == s || x == t;
            for (roles, st) in children[0] {
                let ls = levels(st);
                add_levels(&mut out, roles.clone(), ls.iter().copied(), cap);
                let next = match (roles.role(u), roles.role(v)) {
                    (Some(Role::Zero), Some(Role::Zero)) => {
                        Some(roles.with(u, Some(Role::End)).with(v, Some(Role::End)))
                    }
                    (Some(Role::End), Some(Role::End)) if !endpoint(u) && !endpoint(v) => {
                        Some(roles.with(u, Some(Role::Inner)).with(v, Some(Role::Inner)))
                    }
                    (Some(Role::Zero), Some(Role::End)) if !endpoint(v) => {
                        Some(roles.with(u, Some(Role::End)).with(v, Some(Role::Inner)))
                    }
                    (Some(Role::End), Some(Role::Zero)) if !endpoint(u) => {
                        Some(roles.with(v, Some(Role::End)).with(u, Some(Role::Inner)))
                    }
                    _ => None,
                };
                if let Some(next) = next {
                    add_levels(&mut out, next, ls.into_iter(), cap);
                }
            }
        }
        NodeKind::Forget(v) => {
            let v = v as Elem;
            for (roles, st) in children[0] {
                match roles.role(v) {
                    None | Some(Role::Inner) | Some(Role::Neighbor) => {
                        add_levels(&mut out, roles.with(v, None), levels(st).into_iter(), cap)
                    }
                    _ => {}
                }
            }
        }
        NodeKind::Join => {
            let shape = |sig: &PreSignature| -> SmallVec<[(Elem, bool); 8]> {
                sig.roles().iter().map(|&(v, r)| (v, r == Role::Neighbor)).collect()
            };
            let mut right_by_shape: FxHashMap<_, Vec<(&PreSignature, Vec<u64>)>> = FxHashMap::default();
            for (roles, st) in children[1] {
                right_by_shape.entry(shape(roles)).or_default().push((roles, levels(st)));
            }
            for (left, lst) in children[0] {
                let Some(rights) = right_by_shape.get(&shape(left)) else {
                    continue;
                };
                let lls = levels(lst);
                for (right, rls) in rights {
                    let Some(parent) = combine_roles(left, right, s, t) else {
                        continue;
                    };
                    let (overlap, _) = join_overlap(inst, &parent);
                    let sums = lls
                        .iter()
                        .flat_map(|a| rls.iter().map(move |b| (a + b).saturating_sub(overlap)));
                    add_levels(&mut out, parent, sums, cap);
                }
            }
        }
    }
    let mut out: Vec<(PreSignature, Vec<u32>)> = out
        .into_iter()
        .filter_map(|(roles, mut ls)| {
            ls.sort_unstable();
            ls.dedup();
            (!ls.is_empty()).then_some((roles, ls))
        })
        .collect();
    out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    out
}

fn combine_roles(left: &PreSignature, right: &PreSignature, s: Elem, t: Elem) -> Option<PreSignature> {
    let mut roles = Vec::with_capacity(left.roles().len());
    for (&(v, a), &(w, b)) in left.roles().iter().zip(right.roles()) {
        debug_assert_eq!(v, w);
        let r = match (a, b) {
            (Role::Neighbor, Role::Neighbor) => Role::Neighbor,
            (Role::Zero, Role::Zero) => Role::Zero,
            (Role::Zero, Role::End) | (Role::End, Role::Zero) => Role::End,
            (Role::Zero, Role::Inner) | (Role::Inner, Role::Zero) => Role::Inner,
            (Role::End, Role::End) if v != s && v != t => Role::Inner,
            _ => return None,
        };
        roles.push((v, r));
    }
    Some(PreSignature::from_roles(roles, 0))
}

fn evaluate(
    inst: &VwSspInstance,
    kind: NodeKind,
    sig: &PreSignature,
    children: &[&Table],
) -> Result<WeightedPartitionSet> {
    match kind {
        NodeKind::Leaf => Ok(transition_leaf(inst, sig)),
        NodeKind::IntroduceVertex(v) => transition_introduce_vertex(inst, v as Elem, sig, children[0]),
        NodeKind::IntroduceEdge(u, v) => transition_introduce_edge(inst, u as Elem, v as Elem, sig, children[0]),
        NodeKind::Forget(v) => transition_forget(inst, v as Elem, sig, children[0]),
        NodeKind::Join => transition_join(inst, sig, children[0], children[1]),
    }
}

fn kind_name(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Leaf => "leaf",
        NodeKind::IntroduceVertex(_) => "introduce_vertex",
        NodeKind::IntroduceEdge(..) => "introduce_edge",
        NodeKind::Forget(_) => "forget",
        NodeKind::Join => "join",
    }
}

const PARALLEL_MIN_CELLS: usize = 128;

fn compute_staircase(
    inst: &VwSspInstance,
    kind: NodeKind,
    roles: PreSignature,
    levels: &[u32],
    children: &[&Table],
    mode: ReduceMode,
) -> Result<Option<(PreSignature, Staircase)>> {
    let mut st = Staircase::default();
    let ends = roles.ends().len();
    let bound = representative_bound(ends, mode);
    for &l in levels {
        let sig = roles.with_l(l);
        let full = evaluate(inst, kind, &sig, children)?;
        if full.is_empty() {
            continue;
        }
        let cell = reduce(&full, mode)?;
        if cell.len() > bound {
            return Err(Error::Invariant(format!(
                "cell {sig:?} holds {} entries, above the bound for {ends} endpoints",
                cell.len()
            )));
        }
        debug_assert!(cell.all_perfect_matchings(), "non-matching entry in {sig:?}");
        st.push(l, cell);
    }
    Ok((!st.is_empty()).then_some((roles, st)))
}

fn width_bound(width: usize, l: u64, mode: ReduceMode) -> f64 {
    let b = width + 1;
    let sigs = 4.0 * 5f64.powi(b.saturating_sub(2) as i32) * (l as f64 + 1.0);
    let rep = match mode {
        ReduceMode::Off => f64::INFINITY,
        _ => representative_bound(b, mode) as f64,
    };
    sigs * rep
}

/// Runs the dynamic program bottom-up over `ntd`.
pub fn solve(inst: &VwSspInstance, ntd: &NiceTreeDecomposition, opts: SolveOptions) -> Result<Solution> {
    inst.validate()?;
    if ntd.s != inst.s || ntd.t != inst.t {
        return Err(Error::Precondition("decomposition built for different s, t".into()));
    }
    ntd.check(&inst.graph)?;
    if inst.l > u32::MAX as u64 / 4 {
        return Err(Error::Precondition("load budget too large".into()));
    }
    let started = Instant::now();
    let width = ntd.width();
    let mut stats = SolveStats {
        width,
        nodes: ntd.nodes.len(),
        table_bound: width_bound(width, inst.l, opts.reduce),
        ..SolveStats::default()
    };
    let mut tables: Vec<Option<Table>> = vec![None; ntd.nodes.len()];
    for (x, node) in ntd.nodes.iter().enumerate() {
        let clock = Instant::now();
        let table = {
            let children: Vec<&Table> = node
                .children
                .iter()
                .map(|&c| tables[c].as_ref().expect("children are evaluated first"))
                .collect();
            let cands = candidates(inst, node.kind, &children);
            let run = |(roles, levels): (PreSignature, Vec<u32>)| {
                compute_staircase(inst, node.kind, roles, &levels, &children, opts.reduce)
            };
            let cells: Vec<Option<(PreSignature, Staircase)>> = if opts.parallel && cands.len() >= PARALLEL_MIN_CELLS {
                cands.into_par_iter().map(run).collect::<Result<_>>()?
            } else {
                cands.into_iter().map(run).collect::<Result<_>>()?
            };
            let table: Table = cells.into_iter().flatten().collect();
            table
        };
        let entries: usize = table.values().map(Staircase::entries).sum();
        let largest = table.values().flat_map(|st| st.steps().iter().map(|s| s.1.len())).max();
        stats.max_cell = stats.max_cell.max(largest.unwrap_or(0));
        stats.max_table = stats.max_table.max(entries);
        stats.max_signatures = stats.max_signatures.max(table.values().map(|st| st.steps().len()).sum());
        stats.total_entries += entries as u64;
        *stats.timings_ms.entry(kind_name(node.kind).to_string()).or_default() +=
            clock.elapsed().as_secs_f64() * 1e3;
        tables[x] = Some(table);
        if !opts.witness {
            for &c in &node.children {
                tables[c] = None;
            }
        }
    }
    if stats.max_table as f64 > stats.table_bound {
        return Err(Error::Invariant(format!(
            "node table with {} entries exceeds the width bound {}",
            stats.max_table, stats.table_bound
        )));
    }
    let root = ntd.root();
    let min_cost = root_weight(inst, tables[root].as_ref().unwrap());
    let witness = match (min_cost, opts.witness) {
        (Some(w), true) => {
            let clock = Instant::now();
            let path = reconstruct(inst, ntd, &tables, w)?;
            stats
                .timings_ms
                .insert("witness".into(), clock.elapsed().as_secs_f64() * 1e3);
            Some(path)
        }
        _ => None,
    };
    stats.timings_ms.insert("total".into(), started.elapsed().as_secs_f64() * 1e3);
    Ok(Solution {
        answer: min_cost.is_some(),
        min_cost,
        witness,
        stats,
    })
}

fn cell<'a>(tables: &'a [Option<Table>], x: usize, sig: &PreSignature) -> Option<&'a WeightedPartitionSet> {
    tables[x].as_ref().and_then(|t| cell_at(t, sig)).map(|c| c.1)
}

/// Walks down from the root entry, at each node locating child entries that
/// produce the current entry exactly, and collects the introduced edges the
/// derivation uses.
fn reconstruct(
    inst: &VwSspInstance,
    ntd: &NiceTreeDecomposition,
    tables: &[Option<Table>],
    weight: Weight,
) -> Result<PathWitness> {
    let (s, t) = (inst.s as Elem, inst.t as Elem);
    let missing = || Error::Invariant("witness derivation not found".into());
    let root_sig = PreSignature::from_roles([(s, Role::End), (t, Role::End)], inst.l as u32);
    let mut stack = vec![(ntd.root(), root_sig, Partition::from_pairs(&[(s, t)]), weight)];
    let mut used: Vec<(usize, usize)> = Vec::new();
    while let Some((x, mut sig, p, w)) = stack.pop() {
        let node = &ntd.nodes[x];
        // Work at the level where this cell was computed.
        sig.l = tables[x]
            .as_ref()
            .and_then(|t| cell_at(t, &sig))
            .ok_or_else(missing)?
            .0;
        let has = |c: usize, sig: &PreSignature, p: &Partition, w: Weight| {
            cell(tables, c, sig).and_then(|a| a.weight_of(p)) == Some(w)
        };
        match node.kind {
            NodeKind::Leaf => {}
            NodeKind::IntroduceVertex(v) => {
                let c = node.children[0];
                let v32 = v as Elem;
                let (below, cw) = match sig.role(v32) {
                    Some(Role::Zero) => (
                        sig.with(v32, None).with_l(sig.l - inst.eta[v] as u32),
                        w - inst.kappa[v],
                    ),
                    Some(Role::Neighbor) => (sig.with(v32, None).with_l(sig.l - inst.lambda[v] as u32), w),
                    _ => (sig.clone(), w),
                };
                if !has(c, &below, &p, cw) {
                    return Err(missing());
                }
                stack.push((c, below, p, cw));
            }
            NodeKind::IntroduceEdge(u, v) => {
                let c = node.children[0];
                if has(c, &sig, &p, w) {
                    stack.push((c, sig, p, w));
                    continue;
                }
                let (u32_, v32) = (u as Elem, v as Elem);
                let (below, drop): (PreSignature, Vec<Elem>) = match (sig.role(u32_), sig.role(v32)) {
                    (Some(Role::End), Some(Role::End)) => {
                        (sig.with(u32_, Some(Role::Zero)).with(v32, Some(Role::Zero)), vec![])
                    }
                    (Some(Role::Inner), Some(Role::Inner)) => {
                        (sig.with(u32_, Some(Role::End)).with(v32, Some(Role::End)), vec![u32_, v32])
                    }
                    (Some(Role::End), Some(Role::Inner)) => {
                        (sig.with(u32_, Some(Role::Zero)).with(v32, Some(Role::End)), vec![v32])
                    }
                    (Some(Role::Inner), Some(Role::End)) => {
                        (sig.with(v32, Some(Role::Zero)).with(u32_, Some(Role::End)), vec![u32_])
                    }
                    _ => return Err(missing()),
                };
                let source = cell(tables, c, &below).ok_or_else(missing)?;
                let found = source
                    .iter()
                    .find(|(q, qw)| *qw == w && q.glue(u32_, v32).project(&drop).as_ref() == Some(&p))
                    .ok_or_else(missing)?;
                used.push((u, v));
                stack.push((c, below, found.0.clone(), w));
            }
            NodeKind::Forget(v) => {
                let c = node.children[0];
                let v32 = v as Elem;
                let options = [
                    sig.with(v32, Some(Role::Neighbor)),
                    sig.with(v32, Some(Role::Inner)),
                    sig.clone(),
                ];
                let below = options
                    .into_iter()
                    .find(|o| has(c, o, &p, w))
                    .ok_or_else(missing)?;
                stack.push((c, below, p, w));
            }
            NodeKind::Join => {
                let (lc, rc) = (node.children[0], node.children[1]);
                let (overlap_load, overlap_cost) = join_overlap(inst, &sig);
                let total = sig.l as u64 + overlap_load;
                let mut found = None;
                let (left, right) = (tables[lc].as_ref().ok_or_else(missing)?, tables[rc].as_ref().ok_or_else(missing)?);
                'search: for (ly_roles, lz_roles) in join_splits(&sig) {
                    let (Some(ys), Some(zs)) = (left.get(&ly_roles), right.get(&lz_roles)) else {
                        continue;
                    };
                    let x = join_projected(&sig, &ly_roles, &lz_roles);
                    for (ly, a) in ys.steps() {
                        let Some(lz) = total.checked_sub(*ly as u64) else {
                            break;
                        };
                        let Some((lz, b)) = zs.at(lz.min(u32::MAX as u64) as u32) else {
                            continue;
                        };
                        let (ysig, zsig) = (ly_roles.with_l(*ly), lz_roles.with_l(lz));
                        for (pa, wa) in a.iter() {
                            for (pb, wb) in b.iter() {
                                if wa + wb != w + overlap_cost {
                                    continue;
                                }
                                if coarsen_join(pa, pb).project(&x).as_ref() == Some(&p) {
                                    found = Some((ysig.clone(), pa.clone(), *wa, zsig.clone(), pb.clone(), *wb));
                                    break 'search;
                                }
                            }
                        }
                    }
                }
                let (ysig, pa, wa, zsig, pb, wb) = found.ok_or_else(missing)?;
                stack.push((lc, ysig, pa, wa));
                stack.push((rc, zsig, pb, wb));
            }
        }
    }
    let path = path_from_edges(inst, &used)?;
    let (cost, load) = evaluate_path(inst, &path)?;
    if cost != weight || load > inst.l {
        return Err(Error::Invariant(format!(
            "reconstructed path has cost {cost}, load {load}; expected cost {weight}"
        )));
    }
    Ok(path)
}

fn path_from_edges(inst: &VwSspInstance, edges: &[(usize, usize)]) -> Result<PathWitness> {
    let bad = |m: &str| Error::Invariant(format!("witness edges do not form an s-t path: {m}"));
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(u, v) in edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let mut path = vec![inst.s];
    let mut seen = HashSet::from([inst.s]);
    let mut cur = inst.s;
    while cur != inst.t {
        let next = adj
            .get(&cur)
            .and_then(|nb| nb.iter().copied().find(|w| !seen.contains(w)))
            .ok_or_else(|| bad("dead end"))?;
        seen.insert(next);
        path.push(next);
        cur = next;
    }
    if path.len() != edges.len() + 1 {
        return Err(bad("unused edges"));
    }
    Ok(PathWitness(path))
}
