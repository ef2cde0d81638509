//! Problem instances, path evaluation and the weighted-to-unweighted
//! expansion of simple instances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Unweighted instance: path with at most `k` vertices and at most `l` open
/// neighbors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SspInstance {
    pub graph: Graph,
    pub s: usize,
    pub t: usize,
    pub k: u64,
    pub l: u64,
}

/// Vertex-weighted instance. `kappa` counts toward the cost budget `k`;
/// `eta` on the path plus `lambda` on its open neighborhood count toward the
/// load budget `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VwSspInstance {
    pub graph: Graph,
    pub s: usize,
    pub t: usize,
    pub k: u64,
    pub l: u64,
    pub kappa: Vec<u64>,
    pub lambda: Vec<u64>,
    pub eta: Vec<u64>,
}

/// Ordered vertex sequence of an s-t path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathWitness(pub Vec<usize>);

fn check_common(g: &Graph, s: usize, t: usize, k: u64) -> Result<()> {
    for v in [s, t] {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
        }
    }
    if s == t {
        return Err(Error::InvalidInstance("s and t coincide".into()));
    }
    if k < 2 {
        return Err(Error::InvalidInstance(format!("k = {k} < 2")));
    }
    Ok(())
}

impl SspInstance {
    pub fn new(graph: Graph, s: usize, t: usize, k: u64, l: u64) -> Result<Self> {
        check_common(&graph, s, t, k)?;
        Ok(SspInstance { graph, s, t, k, l })
    }

    pub fn validate(&self) -> Result<()> {
        check_common(&self.graph, self.s, self.t, self.k)
    }
}

impl VwSspInstance {
    pub fn new(
        graph: Graph,
        s: usize,
        t: usize,
        k: u64,
        l: u64,
        kappa: Vec<u64>,
        lambda: Vec<u64>,
        eta: Vec<u64>,
    ) -> Result<Self> {
        let inst = VwSspInstance {
            graph,
            s,
            t,
            k,
            l,
            kappa,
            lambda,
            eta,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        check_common(&self.graph, self.s, self.t, self.k)?;
        let n = self.graph.n();
        if self.kappa.len() != n || self.lambda.len() != n || self.eta.len() != n {
            return Err(Error::InvalidInstance("weight vectors do not match n".into()));
        }
        if let Some(v) = self.kappa.iter().position(|&c| c == 0) {
            return Err(Error::InvalidInstance(format!("kappa({v}) = 0")));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn has_unit_weights(&self) -> bool {
        self.kappa.iter().all(|&c| c == 1)
            && self.lambda.iter().all(|&c| c == 1)
            && self.eta.iter().all(|&c| c == 0)
    }
}

/// Unit cost and neighbor weights, zero path load.
pub fn lift(i: &SspInstance) -> VwSspInstance {
    let n = i.graph.n();
    VwSspInstance {
        graph: i.graph.clone(),
        s: i.s,
        t: i.t,
        k: i.k,
        l: i.l,
        kappa: vec![1; n],
        lambda: vec![1; n],
        eta: vec![0; n],
    }
}

/// Checks the witness is a simple s-t path of `g`.
pub fn check_path(g: &Graph, s: usize, t: usize, p: &PathWitness) -> Result<()> {
    let path = &p.0;
    if path.first() != Some(&s) || path.last() != Some(&t) {
        return Err(Error::InvalidWitness("endpoints are not s and t".into()));
    }
    let mut seen = vec![false; g.n()];
    for &v in path {
        if v >= g.n() {
            return Err(Error::InvalidWitness(format!("vertex {v} out of range")));
        }
        if seen[v] {
            return Err(Error::InvalidWitness(format!("vertex {v} repeated")));
        }
        seen[v] = true;
    }
    if let Some(w) = path.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
        return Err(Error::InvalidWitness(format!(
            "{} and {} are not adjacent",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Returns `(cost, load)` of a path.
pub fn evaluate_path(i: &VwSspInstance, p: &PathWitness) -> Result<(u64, u64)> {
    check_path(&i.graph, i.s, i.t, p)?;
    let on_path = VertexSet::from_iter_n(i.n(), p.0.iter().copied());
    let cost = p.0.iter().map(|&v| i.kappa[v]).sum();
    let mut load: u64 = p.0.iter().map(|&v| i.eta[v]).sum();
    load += crate::graph::open_neighborhood(&i.graph, &on_path)
        .iter()
        .map(|v| i.lambda[v])
        .sum::<u64>();
    Ok((cost, load))
}

/// Reason the instance fails to be simple with respect to `a`, if any.
pub fn simple_violation(i: &VwSspInstance, a: &VertexSet) -> Option<String> {
    if i.kappa[i.s] != 1 || i.kappa[i.t] != 1 {
        return Some("kappa(s) or kappa(t) differs from 1".into());
    }
    if let Some(v) = i.lambda.iter().position(|&x| x != 1) {
        return Some(format!("lambda({v}) != 1"));
    }
    for v in a.iter() {
        if i.eta[v] <= i.l || i.kappa[v] != 1 {
            return Some(format!("vertex {v} of A needs eta > l and kappa = 1"));
        }
    }
    let outside = |v: &usize| !a.contains(*v);
    let deg_out = |v: usize| i.graph.neighbors(v).iter().filter(|w| outside(w)).count();
    for v in 0..i.n() {
        if a.contains(v) || i.kappa[v] <= 1 {
            continue;
        }
        let nb: Vec<usize> = i.graph.neighbors(v).iter().copied().filter(|w| outside(w)).collect();
        if nb.len() != 2 {
            return Some(format!("weighted vertex {v} has {} neighbors outside A", nb.len()));
        }
        for &w in &nb {
            if deg_out(w) > 2 || w == i.s || w == i.t || i.kappa[w] != 1 {
                return Some(format!("neighbor {w} of weighted vertex {v} is not plain"));
            }
        }
    }
    None
}

pub fn is_simple_instance(i: &VwSspInstance, a: &VertexSet) -> bool {
    simple_violation(i, a).is_none()
}

/// Unweighted instance produced by [`expand_to_ssp`] and the original vertex
/// each new vertex stands for.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub instance: SspInstance,
    pub origin: Vec<usize>,
}

impl Expansion {
    /// Weighted-instance path visited by a path of the expanded instance.
    pub fn contract_path(&self, p: &PathWitness) -> Result<PathWitness> {
        let mut out: Vec<usize> = Vec::new();
        for &v in &p.0 {
            let o = *self
                .origin
                .get(v)
                .ok_or_else(|| Error::InvalidWitness(format!("vertex {v} not in expansion")))?;
            if out.last() != Some(&o) {
                out.push(o);
            }
        }
        Ok(PathWitness(out))
    }
}

/// Replaces each weighted vertex by a path of `kappa(v)` vertices and hangs
/// `eta(v)` pendants on it.
///
/// Vertex `v` keeps its id as the first vertex of its path; extra path
/// vertices and pendants are appended in vertex order.
pub fn expand_to_ssp(i: &VwSspInstance, a: &VertexSet) -> Result<Expansion> {
    if let Some(why) = simple_violation(i, a) {
        return Err(Error::NotSimple(why));
    }
    let n = i.n();
    let total: u64 = i.kappa.iter().sum::<u64>() + i.eta.iter().sum::<u64>();
    let total = usize::try_from(total).map_err(|_| Error::Precondition("expansion too large".into()))?;
    let mut origin: Vec<usize> = (0..n).collect();
    origin.reserve(total - n);
    // Last vertex of each path, where the larger outside neighbor attaches.
    let mut tail: Vec<usize> = (0..n).collect();
    let mut edges = Vec::new();
    for v in 0..n {
        let mut prev = v;
        for _ in 1..i.kappa[v] {
            let x = origin.len();
            origin.push(v);
            edges.push((prev, x));
            prev = x;
        }
        tail[v] = prev;
        for _ in 0..i.eta[v] {
            let x = origin.len();
            origin.push(v);
            edges.push((v, x));
        }
    }
    for &(u, w) in i.graph.edges() {
        let end = |v: usize, other: usize| -> usize {
            if i.kappa[v] <= 1 || a.contains(other) {
                return v;
            }
            let larger = i
                .graph
                .neighbors(v)
                .iter()
                .copied()
                .filter(|x| !a.contains(*x))
                .max()
                .expect("weighted vertex has two outside neighbors");
            if other == larger {
                tail[v]
            } else {
                v
            }
        };
        edges.push((end(u, w), end(w, u)));
    }
    debug_assert_eq!(origin.len(), total);
    let graph = Graph::from_edges(origin.len(), edges)?;
    Ok(Expansion {
        instance: SspInstance::new(graph, i.s, i.t, i.k, i.l)?,
        origin,
    })
}
