//! Leaf burning and edgy-path shrinking, shared by the fvs and fes variants.
//!
//! A vertex is *plain* when it lies in the forest (not in `f`) and is not
//! good. Plain vertices only have forest neighbors besides forbidden ones, so
//! their forest degree can be read off the work graph.

use std::collections::VecDeque;

use crate::graph::VertexSet;

use super::work::{RuleId, WeightField, WorkInstance};

pub(crate) struct Forest<'a> {
    pub f: &'a VertexSet,
    pub good: &'a VertexSet,
    pub r: &'a VertexSet,
}

impl Forest<'_> {
    pub fn plain(&self, w: &WorkInstance, v: usize) -> bool {
        w.is_alive(v) && !self.f.contains(v) && !self.good.contains(v)
    }

    pub fn tree_neighbors<'w>(&'w self, w: &'w WorkInstance, v: usize) -> impl Iterator<Item = usize> + 'w {
        w.neighbors(v).filter(move |&u| !self.f.contains(u))
    }

    pub fn tree_degree(&self, w: &WorkInstance, v: usize) -> usize {
        self.tree_neighbors(w, v).count()
    }

    fn leaf_target(&self, w: &WorkInstance, v: usize) -> Option<usize> {
        if !self.plain(w, v) {
            return None;
        }
        let mut it = self.tree_neighbors(w, v);
        match (it.next(), it.next()) {
            (Some(u), None) => Some(u),
            _ => None,
        }
    }

    fn burn(&self, w: &mut WorkInstance, rule: RuleId, v: usize, target: usize) {
        let eta = (w.eta(target) + 1).min(w.l + 1);
        w.set_weight(rule, target, WeightField::Eta, eta);
        w.remove_vertices(rule, &[v]);
    }

    pub fn burn_one(&self, w: &mut WorkInstance, rule: RuleId) -> bool {
        let found = w.vertices().find_map(|v| self.leaf_target(w, v).map(|u| (v, u)));
        match found {
            Some((v, u)) => {
                self.burn(w, rule, v, u);
                true
            }
            None => false,
        }
    }

    pub fn burn_all(&self, w: &mut WorkInstance, rule: RuleId) -> usize {
        let mut stack: Vec<usize> = w.vertices().filter(|&v| self.leaf_target(w, v).is_some()).collect();
        stack.reverse();
        let mut count = 0;
        while let Some(v) = stack.pop() {
            if let Some(u) = self.leaf_target(w, v) {
                self.burn(w, rule, v, u);
                count += 1;
                if self.leaf_target(w, u).is_some() {
                    stack.push(u);
                }
            }
        }
        count
    }

    fn edgy(&self, w: &WorkInstance, v: usize) -> bool {
        self.plain(w, v) && self.tree_degree(w, v) <= 2
    }

    /// Maximal edgy paths, each listed end to end, starting from the
    /// smaller end.
    pub fn edgy_runs(&self, w: &WorkInstance) -> Vec<Vec<usize>> {
        let mut seen = VertexSet::new(w.id_bound());
        let mut runs = Vec::new();
        for v in w.vertices() {
            if seen.contains(v) || !self.edgy(w, v) {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([v]);
            seen.insert(v);
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for x in self.tree_neighbors(w, u) {
                    if !seen.contains(x) && self.edgy(w, x) {
                        seen.insert(x);
                        queue.push_back(x);
                    }
                }
            }
            let members = VertexSet::from_iter_n(w.id_bound(), comp.iter().copied());
            let in_run = |x: usize| members.contains(x);
            let run_degree = |x: usize| self.tree_neighbors(w, x).filter(|&y| in_run(y)).count();
            let start = comp
                .iter()
                .copied()
                .filter(|&x| run_degree(x) <= 1)
                .min()
                .expect("edgy component of a forest is a path");
            let mut order = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            while let Some(next) = self.tree_neighbors(w, cur).find(|&y| y != prev && in_run(y)) {
                order.push(next);
                prev = cur;
                cur = next;
            }
            debug_assert_eq!(order.len(), comp.len());
            runs.push(order);
        }
        runs
    }

    pub fn shrink(&self, w: &mut WorkInstance, rule: RuleId, run: &[usize]) {
        let (a, b) = (run[0], run[run.len() - 1]);
        let inner = &run[1..run.len() - 1];
        let kappa = inner.iter().map(|&v| w.kappa(v)).sum::<u64>().min(w.k + 1);
        let eta = inner.iter().map(|&v| w.eta(v)).sum::<u64>().min(w.l + 1);
        let mut forbidden: Vec<usize> = inner
            .iter()
            .flat_map(|&v| w.neighbors(v).filter(|&u| self.r.contains(u)).collect::<Vec<_>>())
            .collect();
        forbidden.sort_unstable();
        forbidden.dedup();
        let x = w.add_vertex(rule, kappa, 1, eta);
        w.add_edge(rule, x, a);
        w.add_edge(rule, x, b);
        for u in forbidden {
            w.add_edge(rule, x, u);
        }
        w.record_contraction(rule, x, a, inner.to_vec());
        w.remove_vertices(rule, inner);
    }

    pub fn shrink_one(&self, w: &mut WorkInstance, rule: RuleId) -> bool {
        match self.edgy_runs(w).into_iter().find(|r| r.len() > 3) {
            Some(run) => {
                self.shrink(w, rule, &run);
                true
            }
            None => false,
        }
    }

    pub fn shrink_all(&self, w: &mut WorkInstance, rule: RuleId) -> usize {
        let runs: Vec<Vec<usize>> = self.edgy_runs(w).into_iter().filter(|r| r.len() > 3).collect();
        for run in &runs {
            self.shrink(w, rule, run);
        }
        runs.len()
    }

    pub fn has_leaf(&self, w: &WorkInstance) -> bool {
        w.vertices().any(|v| self.leaf_target(w, v).is_some())
    }

    pub fn has_long_run(&self, w: &WorkInstance) -> bool {
        self.edgy_runs(w).iter().any(|r| r.len() > 3)
    }
}

/// Components of the live vertices outside `f`, by minimum id.
pub(crate) fn forest_components(w: &WorkInstance, f: &VertexSet) -> Vec<Vec<usize>> {
    let mut seen = VertexSet::new(w.id_bound());
    let mut out = Vec::new();
    for v in w.vertices() {
        if f.contains(v) || seen.contains(v) {
            continue;
        }
        seen.insert(v);
        let mut comp = vec![v];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for x in w.neighbors(u) {
                if !f.contains(x) && !seen.contains(x) {
                    seen.insert(x);
                    comp.push(x);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
