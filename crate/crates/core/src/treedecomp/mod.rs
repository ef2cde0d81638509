//! Tree decompositions: construction by elimination orderings, validation and
//! conversion to nice form.

mod nice;
mod td_format;

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use nice::{make_nice, NiceNode, NiceTreeDecomposition, NodeKind};
pub use td_format::{parse_td, write_td};

/// Tree of bags. Node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Children lists when rooted at node 0, or `None` if the bag graph is
    /// not a tree.
    pub fn rooted_children(&self) -> Option<Vec<Vec<usize>>> {
        let nb = self.bags.len();
        if nb == 0 || self.tree_edges.len() != nb - 1 {
            return None;
        }
        let mut adj = vec![Vec::new(); nb];
        for &(a, b) in &self.tree_edges {
            if a >= nb || b >= nb {
                return None;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut children = vec![Vec::new(); nb];
        let mut seen = vec![false; nb];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    children[x].push(y);
                    queue.push_back(y);
                }
            }
        }
        seen.iter().all(|&b| b).then_some(children)
    }
}

/// Checks vertex coverage, edge coverage and connectivity of each vertex's
/// bags.
pub fn validate(td: &TreeDecomposition, g: &Graph) -> bool {
    validation_error(td, g).is_none()
}

pub fn validation_error(td: &TreeDecomposition, g: &Graph) -> Option<String> {
    let Some(children) = td.rooted_children() else {
        return Some("bags do not form a tree".into());
    };
    let n = g.n();
    let mut sets: Vec<BTreeSet<usize>> = Vec::with_capacity(td.bags.len());
    let mut count = vec![0usize; n];
    for bag in &td.bags {
        let set: BTreeSet<usize> = bag.iter().copied().collect();
        if set.len() != bag.len() {
            return Some("bag with repeated vertex".into());
        }
        for &v in &set {
            if v >= n {
                return Some(format!("vertex {v} out of range"));
            }
            count[v] += 1;
        }
        sets.push(set);
    }
    if let Some(v) = (0..n).find(|&v| count[v] == 0) {
        return Some(format!("vertex {v} in no bag"));
    }
    for &(u, v) in g.edges() {
        if !sets.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            return Some(format!("edge {{{u}, {v}}} in no bag"));
        }
    }
    // Bags of v are connected iff exactly one of them has a parent without v.
    let mut tops = vec![0usize; n];
    for v in &sets[0] {
        tops[*v] += 1;
    }
    for (x, ch) in children.iter().enumerate() {
        for &y in ch {
            for v in &sets[y] {
                if !sets[x].contains(v) {
                    tops[*v] += 1;
                }
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| tops[v] != 1) {
        return Some(format!("bags of vertex {v} are not connected"));
    }
    None
}

/// Decomposition induced by eliminating vertices in `order`.
pub fn decomposition_from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.n();
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = vec![Vec::new(); n];
    let mut parent = vec![None; n];
    for &v in order {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&w| pos[w] > pos[v]).collect();
        for (i, &a) in later.iter().enumerate() {
            for &b in &later[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        parent[pos[v]] = later.iter().min_by_key(|&&w| pos[w]).map(|&w| pos[w]);
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags[pos[v]] = bag;
    }
    from_parent_links(bags, parent)
}

/// Reverses node order so that the last eliminated bag is the root; joins
/// multiple roots (disconnected graphs) under the first.
fn from_parent_links(bags: Vec<Vec<usize>>, parent: Vec<Option<usize>>) -> TreeDecomposition {
    let nb = bags.len();
    let id = |x: usize| nb - 1 - x;
    let mut tree_edges = Vec::with_capacity(nb.saturating_sub(1));
    for x in 0..nb {
        match parent[x] {
            Some(p) => tree_edges.push((id(p), id(x))),
            None if x != nb - 1 => tree_edges.push((0, id(x))),
            None => {}
        }
    }
    let mut out = vec![Vec::new(); nb];
    for (x, bag) in bags.into_iter().enumerate() {
        out[id(x)] = bag;
    }
    tree_edges.sort_unstable();
    TreeDecomposition {
        bags: out,
        tree_edges,
    }
}

/// Candidates of minimum degree inspected for the fill tie-break.
const FILL_CANDIDATES: usize = 8;

/// Minimum-degree elimination with minimum-fill tie-breaking. Seed 0 breaks
/// remaining ties by vertex id; other seeds by a random per-vertex priority.
pub fn heuristic_decomposition(g: &Graph) -> Result<TreeDecomposition> {
    heuristic_decomposition_seeded(g, 0)
}

pub fn heuristic_decomposition_seeded(g: &Graph, seed: u64) -> Result<TreeDecomposition> {
    let order = min_degree_order(g, seed);
    let td = decomposition_from_order(g, &order);
    if let Some(e) = validation_error(&td, g) {
        return Err(Error::Invariant(format!("heuristic decomposition invalid: {e}")));
    }
    Ok(td)
}

pub fn min_degree_order(g: &Graph, seed: u64) -> Vec<usize> {
    let n = g.n();
    let tie: Vec<u64> = if seed == 0 {
        (0..n as u64).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.gen()).collect()
    };
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut queue: BTreeSet<(usize, u64, usize)> = (0..n).map(|v| (adj[v].len(), tie[v], v)).collect();
    let mut order = Vec::with_capacity(n);
    let fill = |adj: &Vec<BTreeSet<usize>>, v: usize| -> usize {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !adj[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };
    while let Some(&(d, _, _)) = queue.iter().next() {
        let mut best: Option<(usize, (usize, u64, usize))> = None;
        for &key in queue.iter().take_while(|k| k.0 == d).take(FILL_CANDIDATES) {
            let f = fill(&adj, key.2);
            if best.is_none_or(|(bf, _)| f < bf) {
                best = Some((f, key));
                if f == 0 {
                    break;
                }
            }
        }
        let (_, key) = best.expect("queue is nonempty");
        let v = key.2;
        queue.remove(&key);
        order.push(v);
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for &w in &nb {
            queue.remove(&(adj[w].len(), tie[w], w));
            adj[w].remove(&v);
        }
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &w in &nb {
            queue.insert((adj[w].len(), tie[w], w));
        }
        adj[v].clear();
    }
    order
}

/// Largest graph accepted by [`exact_decomposition`].
pub const EXACT_MAX_N: usize = 20;

/// Optimal-width decomposition by dynamic programming over vertex subsets
/// (the eliminated prefix of an ordering).
pub fn exact_decomposition(g: &Graph) -> Result<TreeDecomposition> {
    let n = g.n();
    if n > EXACT_MAX_N {
        return Err(Error::CapExceeded { size: n, cap: EXACT_MAX_N });
    }
    if n == 0 {
        return Ok(TreeDecomposition {
            bags: vec![Vec::new()],
            tree_edges: Vec::new(),
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let full = (1u32 << n) - 1;
    // Vertices outside `s ∪ {v}` reachable from v through `s`.
    let q = |s: u32, v: usize| -> u32 {
        let mut seen = 1u32 << v;
        let mut frontier = 1u32 << v;
        let mut out = 0u32;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let nb = adj[x] & !seen;
            seen |= nb;
            out |= nb & !s;
            frontier |= nb & s;
        }
        out
    };
    let mut tw = vec![u8::MAX; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            let cost = tw[prev as usize].max(q(prev, v).count_ones() as u8);
            best = best.min(cost);
        }
        tw[s as usize] = best;
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let target = tw[s as usize];
        let mut rest = s;
        let v = loop {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            if tw[prev as usize].max(q(prev, v).count_ones() as u8) == target {
                break v;
            }
        };
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let td = decomposition_from_order(g, &order);
    debug_assert!(validate(&td, g));
    Ok(td)
}
