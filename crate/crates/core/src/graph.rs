//! Simple undirected graphs and the structural queries the rest of the crate
//! builds on.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Membership set over the vertex ids `0..n` of one graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet { bits }
    }

    pub fn from_iter_n<I: IntoIterator<Item = usize>>(n: usize, items: I) -> Self {
        let mut set = VertexSet::new(n);
        for v in items {
            set.insert(v);
        }
        set
    }

    /// Size of the universe the set lives in.
    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    /// Grows the universe when `v` lies beyond it.
    pub fn insert(&mut self, v: usize) {
        if v >= self.bits.len() {
            self.bits.grow(v + 1);
        }
        self.bits.insert(v);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.bits.len() {
            self.bits.set(v, false);
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.bits.len() && self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }
}

/// Simple undirected graph on vertices `0..n`.
///
/// Adjacency lists are sorted and the edge list holds each edge once as
/// `(min, max)`, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adjacency: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    /// Builds a graph, rejecting self-loops, duplicates and out-of-range ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &list {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        Ok(Graph {
            n,
            adjacency,
            edges: list,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || connected_components(self).len() == 1
    }

    /// Subgraph induced by `keep`, renumbered contiguously in increasing id
    /// order. Returns the graph and the old-to-new mapping.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> (Graph, Vec<Option<usize>>) {
        let mut map = vec![None; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if keep.contains(v) {
                map[v] = Some(next);
                next += 1;
            }
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter_map(|&(u, v)| Some((map[u]?, map[v]?)))
            .collect();
        let g = Graph::from_edges(next, edges).expect("induced subgraph of a simple graph");
        (g, map)
    }

    /// True iff the graph minus `removed` has no cycle.
    pub fn is_forest_without(&self, removed: &VertexSet) -> bool {
        let mut uf = UnionFind::new(self.n);
        for &(u, v) in &self.edges {
            if removed.contains(u) || removed.contains(v) {
                continue;
            }
            if !uf.union(u, v) {
                return false;
            }
        }
        true
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

pub fn open_neighborhood(g: &Graph, u: &VertexSet) -> VertexSet {
    let mut out = VertexSet::new(g.n());
    for v in u.iter() {
        for &w in g.neighbors(v) {
            if !u.contains(w) {
                out.insert(w);
            }
        }
    }
    out
}

/// Components ordered by their minimum vertex id.
pub fn connected_components(g: &Graph) -> Vec<VertexSet> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..g.n() {
        if seen[root] {
            continue;
        }
        let mut comp = VertexSet::new(g.n());
        seen[root] = true;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            comp.insert(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Non-tree edges of a BFS spanning tree rooted at vertex 0.
pub fn feedback_edge_set(g: &Graph) -> Result<Vec<(usize, usize)>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    // BFS order keeps the spanning tree shallow; any spanning tree works.
    let mut tree = std::collections::HashSet::new();
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::new();
    if g.n() > 0 {
        seen[0] = true;
        queue.push_back(0);
    }
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                tree.insert((v.min(w), v.max(w)));
                queue.push_back(w);
            }
        }
    }
    Ok(g.edges().iter().copied().filter(|e| !tree.contains(e)).collect())
}

/// Strips the graph to its 2-core, repeatedly removes a maximum-degree core
/// vertex, then drops redundant picks.
pub fn feedback_vertex_set_heuristic(g: &Graph) -> VertexSet {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut picked = Vec::new();

    let strip = |alive: &mut Vec<bool>, deg: &mut Vec<usize>| {
        let mut stack: Vec<usize> = (0..n).filter(|&v| alive[v] && deg[v] <= 1).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &w in g.neighbors(v) {
                if alive[w] {
                    deg[w] -= 1;
                    if deg[w] <= 1 {
                        stack.push(w);
                    }
                }
            }
        }
    };

    strip(&mut alive, &mut deg);
    while let Some(v) = (0..n)
        .filter(|&v| alive[v])
        .max_by_key(|&v| (deg[v], std::cmp::Reverse(v)))
    {
        picked.push(v);
        alive[v] = false;
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
            }
        }
        strip(&mut alive, &mut deg);
    }

    let mut fvs = VertexSet::from_iter_n(n, picked.iter().copied());
    for &v in picked.iter().rev() {
        fvs.remove(v);
        if !g.is_forest_without(&fvs) {
            fvs.insert(v);
        }
    }
    debug_assert!(g.is_forest_without(&fvs));
    fvs
}

/// Maximal classes of vertices with identical open neighborhoods, ordered by
/// minimum member.
pub fn twin_classes(g: &Graph) -> Vec<VertexSet> {
    let mut groups: HashMap<&[usize], Vec<usize>> = HashMap::new();
    for v in 0..g.n() {
        groups.entry(g.neighbors(v)).or_default().push(v);
    }
    let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
    classes.sort_unstable_by_key(|c| c[0]);
    classes
        .into_iter()
        .map(|c| VertexSet::from_iter_n(g.n(), c))
        .collect()
}

/// True iff some pair of vertices has at least two common neighbors.
pub fn contains_k22(g: &Graph) -> bool {
    let mut seen = std::collections::HashSet::new();
    for w in 0..g.n() {
        let nb = g.neighbors(w);
        for (i, &u) in nb.iter().enumerate() {
            for &v in &nb[i + 1..] {
                if !seen.insert((u, v)) {
                    return true;
                }
            }
        }
    }
    false
}

/// Greedy maximal matching; its endpoints form a 2-approximate vertex cover.
pub fn matching_vertex_cover(g: &Graph) -> VertexSet {
    let mut cover = VertexSet::new(g.n());
    for &(u, v) in g.edges() {
        if !cover.contains(u) && !cover.contains(v) {
            cover.insert(u);
            cover.insert(v);
        }
    }
    cover
}
