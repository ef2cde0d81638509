use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{PathWitness, VwSspInstance};

/// Which rule produced a trace step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleId {
    Connected,
    Twins,
    Forbidden,
    DeleteTrees,
    BurnLeaf,
    ShrinkEdgy,
    BurnLeafFes,
    ShrinkEdgyFes,
    Compact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightField {
    Kappa,
    Lambda,
    Eta,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceOp {
    RemoveVertices(Vec<usize>),
    AddVertex { id: usize, kappa: u64, lambda: u64, eta: u64 },
    AddEdge(usize, usize),
    SetWeight { vertex: usize, field: WeightField, old: u64, new: u64 },
    /// `vertex` stands for `replaced`, listed starting next to `anchor`.
    Contract { vertex: usize, anchor: usize, replaced: Vec<usize> },
    /// Renumbering; entry `v` is the new id of old vertex `v`.
    Compact(Vec<Option<usize>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: RuleId,
    pub op: TraceOp,
}

/// Every primitive change a pipeline made, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Number of steps recorded per rule, excluding renumberings.
    pub fn counts(&self) -> Vec<(RuleId, usize)> {
        let mut out: Vec<(RuleId, usize)> = Vec::new();
        for step in &self.steps {
            if step.rule == RuleId::Compact {
                continue;
            }
            match out.iter_mut().find(|(r, _)| *r == step.rule) {
                Some(entry) => entry.1 += 1,
                None => out.push((step.rule, 1)),
            }
        }
        out
    }

    /// Re-applies all steps to `original`, yielding the reduced instance.
    pub fn replay(&self, original: &VwSspInstance) -> Result<VwSspInstance> {
        let mut w = WorkInstance::from_instance(original);
        w.recording = false;
        for step in &self.steps {
            let rule = step.rule;
            match &step.op {
                TraceOp::RemoveVertices(vs) => {
                    for &v in vs {
                        w.check_alive(v)?;
                    }
                    w.remove_vertices(rule, vs);
                }
                TraceOp::AddVertex { id, kappa, lambda, eta } => {
                    let got = w.add_vertex(rule, *kappa, *lambda, *eta);
                    if got != *id {
                        return Err(Error::Invariant(format!("replay added {got}, trace says {id}")));
                    }
                }
                TraceOp::AddEdge(u, v) => {
                    w.check_alive(*u)?;
                    w.check_alive(*v)?;
                    w.add_edge(rule, *u, *v);
                }
                TraceOp::SetWeight { vertex, field, old, new } => {
                    w.check_alive(*vertex)?;
                    if w.weight(*vertex, *field) != *old {
                        return Err(Error::Invariant(format!("weight of {vertex} diverged in replay")));
                    }
                    w.set_weight(rule, *vertex, *field, *new);
                }
                TraceOp::Contract { .. } => {}
                TraceOp::Compact(mapping) => {
                    if w.compact() != *mapping {
                        return Err(Error::Invariant("renumbering diverged in replay".into()));
                    }
                }
            }
        }
        Ok(w.snapshot().0)
    }

    /// Maps a path of the reduced instance back to the original one.
    pub fn lift_path(&self, path: &PathWitness) -> Result<PathWitness> {
        let mut p = path.0.clone();
        for step in self.steps.iter().rev() {
            match &step.op {
                TraceOp::Compact(mapping) => {
                    let mut back = vec![usize::MAX; mapping.iter().flatten().count()];
                    for (old, new) in mapping.iter().enumerate() {
                        if let Some(new) = new {
                            back[*new] = old;
                        }
                    }
                    for v in p.iter_mut() {
                        *v = *back
                            .get(*v)
                            .ok_or_else(|| Error::InvalidWitness(format!("vertex {v} unknown to trace")))?;
                    }
                }
                TraceOp::Contract { vertex, anchor, replaced } => {
                    if let Some(i) = p.iter().position(|v| v == vertex) {
                        let forward = i + 1 >= p.len() || p[i + 1] != *anchor;
                        let mut seg = replaced.clone();
                        if !forward {
                            seg.reverse();
                        }
                        p.splice(i..=i, seg);
                    }
                }
                _ => {}
            }
        }
        Ok(PathWitness(p))
    }
}

/// Mutable instance with stable vertex ids; deleted ids stay reserved until
/// [`WorkInstance::compact`].
#[derive(Clone, Debug)]
pub struct WorkInstance {
    adj: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
    kappa: Vec<u64>,
    lambda: Vec<u64>,
    eta: Vec<u64>,
    pub s: usize,
    pub t: usize,
    pub k: u64,
    pub l: u64,
    trace: ReductionTrace,
    recording: bool,
}

impl WorkInstance {
    pub fn from_instance(i: &VwSspInstance) -> Self {
        let n = i.n();
        let mut adj = vec![BTreeSet::new(); n];
        for &(u, v) in i.graph.edges() {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        WorkInstance {
            adj,
            alive: vec![true; n],
            kappa: i.kappa.clone(),
            lambda: i.lambda.clone(),
            eta: i.eta.clone(),
            s: i.s,
            t: i.t,
            k: i.k,
            l: i.l,
            trace: ReductionTrace::default(),
            recording: true,
        }
    }

    fn record(&mut self, rule: RuleId, op: TraceOp) {
        if self.recording {
            self.trace.steps.push(TraceStep { rule, op });
        }
    }

    fn check_alive(&self, v: usize) -> Result<()> {
        if self.is_alive(v) {
            Ok(())
        } else {
            Err(Error::Invariant(format!("vertex {v} is not alive")))
        }
    }

    pub fn trace(&self) -> &ReductionTrace {
        &self.trace
    }

    pub fn into_trace(self) -> ReductionTrace {
        self.trace
    }

    /// One past the largest id ever used.
    pub fn id_bound(&self) -> usize {
        self.alive.len()
    }

    pub fn is_alive(&self, v: usize) -> bool {
        v < self.alive.len() && self.alive[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.alive.len()).filter(|&v| self.alive[v])
    }

    pub fn vertex_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices().map(|v| self.adj[v].len()).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn weight(&self, v: usize, field: WeightField) -> u64 {
        match field {
            WeightField::Kappa => self.kappa[v],
            WeightField::Lambda => self.lambda[v],
            WeightField::Eta => self.eta[v],
        }
    }

    pub fn kappa(&self, v: usize) -> u64 {
        self.kappa[v]
    }

    pub fn lambda(&self, v: usize) -> u64 {
        self.lambda[v]
    }

    pub fn eta(&self, v: usize) -> u64 {
        self.eta[v]
    }

    pub fn remove_vertices(&mut self, rule: RuleId, vs: &[usize]) {
        if vs.is_empty() {
            return;
        }
        for &v in vs {
            for w in std::mem::take(&mut self.adj[v]) {
                self.adj[w].remove(&v);
            }
            self.alive[v] = false;
        }
        self.record(rule, TraceOp::RemoveVertices(vs.to_vec()));
    }

    pub fn add_vertex(&mut self, rule: RuleId, kappa: u64, lambda: u64, eta: u64) -> usize {
        let id = self.alive.len();
        self.adj.push(BTreeSet::new());
        self.alive.push(true);
        self.kappa.push(kappa);
        self.lambda.push(lambda);
        self.eta.push(eta);
        self.record(rule, TraceOp::AddVertex { id, kappa, lambda, eta });
        id
    }

    pub fn add_edge(&mut self, rule: RuleId, u: usize, v: usize) {
        debug_assert!(u != v && self.is_alive(u) && self.is_alive(v));
        if self.adj[u].insert(v) {
            self.adj[v].insert(u);
            self.record(rule, TraceOp::AddEdge(u, v));
        }
    }

    pub fn set_weight(&mut self, rule: RuleId, v: usize, field: WeightField, new: u64) {
        let slot = match field {
            WeightField::Kappa => &mut self.kappa[v],
            WeightField::Lambda => &mut self.lambda[v],
            WeightField::Eta => &mut self.eta[v],
        };
        let old = *slot;
        if old != new {
            *slot = new;
            self.record(rule, TraceOp::SetWeight { vertex: v, field, old, new });
        }
    }

    pub(crate) fn record_contraction(&mut self, rule: RuleId, vertex: usize, anchor: usize, replaced: Vec<usize>) {
        self.record(rule, TraceOp::Contract { vertex, anchor, replaced });
    }

    /// Renumbers live vertices to `0..n` in id order and returns the mapping.
    pub fn compact(&mut self) -> Vec<Option<usize>> {
        let mut mapping = vec![None; self.alive.len()];
        let mut next = 0;
        for v in 0..self.alive.len() {
            if self.alive[v] {
                mapping[v] = Some(next);
                next += 1;
            }
        }
        let keep = |xs: &[u64]| -> Vec<u64> {
            xs.iter().enumerate().filter(|(v, _)| mapping[*v].is_some()).map(|(_, &x)| x).collect()
        };
        self.kappa = keep(&self.kappa);
        self.lambda = keep(&self.lambda);
        self.eta = keep(&self.eta);
        let mut adj = vec![BTreeSet::new(); next];
        for (v, nb) in self.adj.iter().enumerate() {
            if let Some(nv) = mapping[v] {
                adj[nv] = nb.iter().map(|w| mapping[*w].expect("live neighbor")).collect();
            }
        }
        self.adj = adj;
        self.alive = vec![true; next];
        self.s = mapping[self.s].expect("s stays alive");
        self.t = mapping[self.t].expect("t stays alive");
        self.record(RuleId::Compact, TraceOp::Compact(mapping.clone()));
        mapping
    }

    /// Current state as a contiguous instance plus the id mapping used.
    pub fn snapshot(&self) -> (VwSspInstance, Vec<Option<usize>>) {
        let mut mapping = vec![None; self.alive.len()];
        let mut order = Vec::new();
        for v in self.vertices() {
            mapping[v] = Some(order.len());
            order.push(v);
        }
        let mut edges = Vec::new();
        for &v in &order {
            for &w in &self.adj[v] {
                if v < w {
                    edges.push((mapping[v].unwrap(), mapping[w].unwrap()));
                }
            }
        }
        let graph = Graph::from_edges(order.len(), edges).expect("work graph stays simple");
        let pick = |xs: &[u64]| order.iter().map(|&v| xs[v]).collect::<Vec<u64>>();
        let inst = VwSspInstance {
            graph,
            s: mapping[self.s].expect("s stays alive"),
            t: mapping[self.t].expect("t stays alive"),
            k: self.k,
            l: self.l,
            kappa: pick(&self.kappa),
            lambda: pick(&self.lambda),
            eta: pick(&self.eta),
        };
        (inst, mapping)
    }

    pub fn graph(&self) -> Graph {
        self.snapshot().0.graph
    }
}
