use crate::error::{Error, Result};
use crate::graph::{feedback_vertex_set_heuristic, VertexSet};
use crate::instance::{is_simple_instance, lift, SspInstance};

use super::trees::{forest_components, Forest};
use super::work::{RuleId, WeightField, WorkInstance};
use super::{rr_connected, Connectivity, Kernel, KernelOutcome, KernelStats, Pipeline};

/// Vertex roles relative to a feedback vertex set `f`.
///
/// `r` holds the forbidden members of `f`: too many neighbors, or too many
/// degree-one neighbors other than s and t, to lie on any solution. `y` holds
/// the good forest vertices, those with a neighbor in `f \ r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FvsClassification {
    pub f: VertexSet,
    pub r: VertexSet,
    pub y: VertexSet,
    pub trees: Vec<Vec<usize>>,
}

impl FvsClassification {
    fn forest(&self) -> Forest<'_> {
        Forest {
            f: &self.f,
            good: &self.y,
            r: &self.r,
        }
    }
}

pub fn classify_fvs(w: &WorkInstance, f: &VertexSet) -> Result<FvsClassification> {
    if !f.contains(w.s) || !f.contains(w.t) {
        return Err(Error::Precondition("feedback set must contain s and t".into()));
    }
    if f.iter().any(|v| !w.is_alive(v)) {
        return Err(Error::Precondition("feedback set contains a deleted vertex".into()));
    }
    let edges_outside: usize = w
        .vertices()
        .filter(|&v| !f.contains(v))
        .map(|v| w.neighbors(v).filter(|&u| !f.contains(u)).count())
        .sum::<usize>()
        / 2;
    let trees = forest_components(w, f);
    let forest_vertices: usize = trees.iter().map(Vec::len).sum();
    if edges_outside + trees.len() != forest_vertices {
        return Err(Error::Precondition("removing the feedback set leaves a cycle".into()));
    }
    let budget = (w.k + w.l) as usize;
    let mut r = VertexSet::new(w.id_bound());
    for v in f.iter() {
        let pendants = w
            .neighbors(v)
            .filter(|&u| w.degree(u) == 1 && u != w.s && u != w.t)
            .count();
        if w.degree(v) > budget || pendants as u64 > w.l {
            r.insert(v);
        }
    }
    let mut y = VertexSet::new(w.id_bound());
    for v in w.vertices().filter(|&v| !f.contains(v)) {
        if w.neighbors(v).any(|u| f.contains(u) && !r.contains(u)) {
            y.insert(v);
        }
    }
    if y.len() > f.len() * budget {
        return Err(Error::Invariant("more good vertices than the neighbor budget allows".into()));
    }
    Ok(FvsClassification {
        f: f.clone(),
        r,
        y,
        trees,
    })
}

/// Pins every forbidden vertex at the load that excludes it from paths.
pub fn rr_forbidden(w: &mut WorkInstance, cls: &FvsClassification) -> bool {
    let target = w.l + 1;
    let mut changed = false;
    for v in cls.r.iter() {
        if w.eta(v) != target {
            w.set_weight(RuleId::Forbidden, v, WeightField::Eta, target);
            changed = true;
        }
    }
    changed
}

/// Deletes the forest components without good vertices; returns how many.
pub fn rr_delete_trees(w: &mut WorkInstance, cls: &FvsClassification) -> usize {
    let dead: Vec<Vec<usize>> = forest_components(w, &cls.f)
        .into_iter()
        .filter(|t| t.iter().all(|&v| !cls.y.contains(v)))
        .collect();
    for t in &dead {
        w.remove_vertices(RuleId::DeleteTrees, t);
    }
    dead.len()
}

/// Removes one non-good forest leaf, charging it to its neighbor's load.
pub fn rr_burn_leaf(w: &mut WorkInstance, cls: &FvsClassification) -> bool {
    cls.forest().burn_one(w, RuleId::BurnLeaf)
}

/// Replaces the interior of one maximal edgy path with more than three
/// vertices by a single weighted vertex.
pub fn rr_shrink_edgy(w: &mut WorkInstance, cls: &FvsClassification) -> bool {
    cls.forest().shrink_one(w, RuleId::ShrinkEdgy)
}

/// Rules among forbidden-pinning, tree deletion, leaf burning and edgy
/// shrinking that could still fire.
pub fn fvs_applicable_rules(w: &WorkInstance, cls: &FvsClassification) -> Vec<RuleId> {
    let mut out = Vec::new();
    if cls.r.iter().any(|v| w.is_alive(v) && w.eta(v) != w.l + 1) {
        out.push(RuleId::Forbidden);
    }
    if forest_components(w, &cls.f)
        .iter()
        .any(|t| t.iter().all(|&v| !cls.y.contains(v)))
    {
        out.push(RuleId::DeleteTrees);
    }
    let forest = cls.forest();
    if forest.has_leaf(w) {
        out.push(RuleId::BurnLeaf);
    }
    if forest.has_long_run(w) {
        out.push(RuleId::ShrinkEdgy);
    }
    out
}

pub fn kernelize_fvs(i: &SspInstance) -> Result<KernelOutcome> {
    i.validate()?;
    let mut w = WorkInstance::from_instance(&lift(i));
    if rr_connected(&mut w) == Connectivity::No {
        return Ok(KernelOutcome::No(w.into_trace()));
    }
    w.compact();
    let (input_n, input_m) = (w.vertex_count(), w.edge_count());
    let mut f = feedback_vertex_set_heuristic(&w.graph());
    f.insert(w.s);
    f.insert(w.t);
    let cls = classify_fvs(&w, &f)?;
    rr_forbidden(&mut w, &cls);
    rr_delete_trees(&mut w, &cls);
    let forest = cls.forest();
    forest.burn_all(&mut w, RuleId::BurnLeaf);
    forest.shrink_all(&mut w, RuleId::ShrinkEdgy);
    let left = fvs_applicable_rules(&w, &cls);
    if !left.is_empty() {
        return Err(Error::Invariant(format!("rules still applicable after reduction: {left:?}")));
    }
    let mut tree_sizes = Vec::new();
    for t in forest_components(&w, &cls.f) {
        let good = t.iter().filter(|&&v| cls.y.contains(v)).count();
        if t.len() > 8 * good {
            return Err(Error::Invariant(format!("tree of {} vertices with {good} good", t.len())));
        }
        tree_sizes.push((t.len(), good));
    }
    let mapping = w.compact();
    let (instance, _) = w.snapshot();
    let a = VertexSet::from_iter_n(instance.n(), cls.r.iter().filter_map(|v| mapping[v]));
    if !is_simple_instance(&instance, &a) {
        return Err(Error::Invariant("fvs kernel is not simple".into()));
    }
    let budgets_ok = instance.kappa.iter().all(|&c| c <= i.k + 1) && instance.eta.iter().all(|&e| e <= i.l + 1);
    if !budgets_ok {
        return Err(Error::Invariant("kernel weight above its clamp".into()));
    }
    let stats = KernelStats {
        pipeline: Pipeline::Fvs,
        input_n,
        input_m,
        output_n: instance.n(),
        output_m: instance.graph.m(),
        parameter: f.len(),
        vertex_bound: None,
        edge_bound: None,
        forbidden: cls.r.len(),
        good: cls.y.len(),
        tree_sizes,
    };
    Ok(KernelOutcome::Reduced(Kernel {
        instance,
        a,
        trace: w.into_trace(),
        stats,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::VwSspInstance;

    fn work(n: usize, edges: &[(usize, usize)], s: usize, t: usize, k: u64, l: u64) -> WorkInstance {
        let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
        WorkInstance::from_instance(&lift(&SspInstance::new(g, s, t, k, l).unwrap()))
    }

    fn set(w: &WorkInstance, xs: &[usize]) -> VertexSet {
        VertexSet::from_iter_n(w.id_bound(), xs.iter().copied())
    }

    #[test]
    fn pendant_heavy_vertex_is_forbidden() {
        // Vertex 1 carries three pendants with l = 2.
        let w = work(6, &[(0, 1), (1, 2), (1, 3), (1, 4), (0, 5)], 0, 5, 4, 2);
        let cls = classify_fvs(&w, &set(&w, &[0, 1, 5])).unwrap();
        assert!(cls.r.contains(1));
        let w2 = work(6, &[(0, 1), (1, 2), (1, 3), (1, 4), (0, 5)], 0, 5, 4, 3);
        let cls2 = classify_fvs(&w2, &set(&w2, &[0, 1, 5])).unwrap();
        assert!(cls2.r.is_empty());
    }

    #[test]
    fn terminals_do_not_count_as_pendants() {
        // s and t are degree-one neighbors of 2 and must not make it forbidden.
        let w = work(3, &[(0, 2), (1, 2)], 0, 1, 3, 1);
        let cls = classify_fvs(&w, &set(&w, &[0, 1, 2])).unwrap();
        assert!(cls.r.is_empty());
    }

    #[test]
    fn hub_is_forbidden() {
        let edges: Vec<(usize, usize)> = (1..7).map(|v| (0, v)).collect();
        let w = work(7, &edges, 1, 2, 2, 1);
        let cls = classify_fvs(&w, &set(&w, &[0, 1, 2])).unwrap();
        assert!(cls.r.contains(0));
    }

    #[test]
    fn classification_rejects_bad_sets() {
        let w = work(3, &[(0, 1), (1, 2), (0, 2)], 0, 2, 3, 1);
        assert!(classify_fvs(&w, &set(&w, &[0])).is_err());
        assert!(classify_fvs(&w, &set(&w, &[0, 2])).is_ok());
        let w = work(5, &[(0, 1), (1, 2), (2, 4), (4, 1), (2, 3)], 0, 3, 3, 1);
        assert!(classify_fvs(&w, &set(&w, &[0, 3])).is_err());
    }

    #[test]
    fn forbidden_pins_load() {
        let edges: Vec<(usize, usize)> = (1..7).map(|v| (0, v)).collect();
        let mut w = work(7, &edges, 1, 2, 2, 1);
        let cls = classify_fvs(&w, &set(&w, &[0, 1, 2])).unwrap();
        assert!(rr_forbidden(&mut w, &cls));
        assert_eq!(w.eta(0), 2);
        assert!(!rr_forbidden(&mut w, &cls));
    }

    #[test]
    fn tree_off_forbidden_vertex_is_deleted() {
        let mut edges: Vec<(usize, usize)> = (1..7).map(|v| (0, v)).collect();
        edges.push((6, 7));
        let mut w = work(8, &edges, 1, 2, 2, 1);
        let cls = classify_fvs(&w, &set(&w, &[0, 1, 2])).unwrap();
        assert_eq!(rr_delete_trees(&mut w, &cls), 4);
        assert_eq!(w.vertex_count(), 3);
    }

    #[test]
    fn burn_leaf_increments_and_clamps() {
        // s=0 - 2 - 3 - t=1, pendant 4 on 3; F = {0, 1}.
        let mut w = work(5, &[(0, 2), (2, 3), (3, 1), (3, 4)], 0, 1, 4, 2);
        let cls = classify_fvs(&w, &set(&w, &[0, 1])).unwrap();
        assert!(rr_burn_leaf(&mut w, &cls));
        assert!(!w.is_alive(4));
        assert_eq!(w.eta(3), 1);
        assert!(!rr_burn_leaf(&mut w, &cls));

        let mut w = work(5, &[(0, 2), (2, 3), (3, 1), (3, 4)], 0, 1, 4, 0);
        let cls = classify_fvs(&w, &set(&w, &[0, 1])).unwrap();
        assert!(rr_burn_leaf(&mut w, &cls));
        assert_eq!(w.eta(3), 1);
        // A second pendant finds η(3) already at the clamp.
        let inst = w.snapshot().0;
        let mut w = WorkInstance::from_instance(&VwSspInstance { eta: vec![0, 0, 0, 1], ..inst });
        w.add_vertex(RuleId::BurnLeaf, 1, 1, 0);
        w.add_edge(RuleId::BurnLeaf, 3, 4);
        let cls = classify_fvs(&w, &set(&w, &[0, 1])).unwrap();
        assert!(rr_burn_leaf(&mut w, &cls));
        assert_eq!(w.eta(3), 1);
    }

    #[test]
    fn shrink_long_edgy_path() {
        // s - 2 - 3 - 4 - 5 - 6 - 7 - t with good 2 and 7: the run is 3..6
        // and its interior {4, 5} becomes one vertex.
        let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 1)];
        let mut w = work(8, &edges, 0, 1, 9, 1);
        let cls = classify_fvs(&w, &set(&w, &[0, 1])).unwrap();
        assert!(cls.y.contains(2) && cls.y.contains(7));
        assert!(rr_shrink_edgy(&mut w, &cls));
        let x = w.id_bound() - 1;
        assert_eq!(w.kappa(x), 2);
        assert_eq!(w.eta(x), 0);
        assert_eq!(w.vertex_count(), 7);
        assert!(!rr_shrink_edgy(&mut w, &cls));
    }

    #[test]
    fn run_of_three_is_left_alone() {
        let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)];
        let mut w = work(7, &edges, 0, 1, 9, 1);
        let cls = classify_fvs(&w, &set(&w, &[0, 1])).unwrap();
        assert!(!rr_shrink_edgy(&mut w, &cls));
    }

    #[test]
    fn six_vertex_run_collapses() {
        // Run 3..8 (six vertices) inside good 2 and 9.
        let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (9, 1)];
        let mut w = work(10, &edges, 0, 1, 3, 1);
        let cls = classify_fvs(&w, &set(&w, &[0, 1])).unwrap();
        assert!(rr_shrink_edgy(&mut w, &cls));
        let x = w.id_bound() - 1;
        assert_eq!(w.kappa(x), 4);
        assert!(w.has_edge(x, 3) && w.has_edge(x, 8));
    }

    #[test]
    fn pipeline_on_path() {
        let g = Graph::from_edges(10, (0..9).map(|v| (v, v + 1))).unwrap();
        let i = SspInstance::new(g, 0, 9, 10, 0).unwrap();
        let KernelOutcome::Reduced(kernel) = kernelize_fvs(&i).unwrap() else {
            panic!("connected input");
        };
        assert!(kernel.instance.n() <= 7);
        assert_eq!(kernel.trace.replay(&lift(&i)).unwrap(), kernel.instance);
    }
}
