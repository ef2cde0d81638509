use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::{validation_error, TreeDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    IntroduceVertex(usize),
    IntroduceEdge(usize, usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Nodes are stored children-first; the root is the last node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub s: usize,
    pub t: usize,
}

impl NiceTreeDecomposition {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(1) - 1
    }

    /// Checks every structural invariant against `g`.
    pub fn check(&self, g: &Graph) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidDecomposition(m));
        if self.nodes.is_empty() {
            return fail("no nodes".into());
        }
        let (s, t) = (self.s, self.t);
        let mut parent_count = vec![0usize; self.nodes.len()];
        let mut introduced = HashSet::new();
        let mut forgotten = vec![0usize; g.n()];
        for (x, node) in self.nodes.iter().enumerate() {
            if !node.bag.windows(2).all(|w| w[0] < w[1]) {
                return fail(format!("node {x}: bag not sorted"));
            }
            if node.bag.binary_search(&s).is_err() || node.bag.binary_search(&t).is_err() {
                return fail(format!("node {x}: s or t missing from bag"));
            }
            for &c in &node.children {
                if c >= x {
                    return fail(format!("node {x}: child {c} not stored before parent"));
                }
                parent_count[c] += 1;
            }
            let child_bag = |i: usize| &self.nodes[node.children[i]].bag;
            let ok = match node.kind {
                NodeKind::Leaf => node.children.is_empty() && node.bag == sorted(vec![s, t]),
                NodeKind::IntroduceVertex(v) => {
                    node.children.len() == 1
                        && v != s
                        && v != t
                        && without(&node.bag, v).as_ref() == Some(child_bag(0))
                }
                NodeKind::Forget(v) => {
                    forgotten.get_mut(v).map(|c| *c += 1);
                    node.children.len() == 1
                        && v != s
                        && v != t
                        && without(child_bag(0), v).as_ref() == Some(&node.bag)
                }
                NodeKind::IntroduceEdge(u, v) => {
                    if !g.has_edge(u, v) || !introduced.insert((u.min(v), u.max(v))) {
                        return fail(format!("node {x}: edge {{{u}, {v}}} not in graph or repeated"));
                    }
                    node.children.len() == 1
                        && child_bag(0) == &node.bag
                        && node.bag.binary_search(&u).is_ok()
                        && node.bag.binary_search(&v).is_ok()
                }
                NodeKind::Join => {
                    node.children.len() == 2 && child_bag(0) == &node.bag && child_bag(1) == &node.bag
                }
            };
            if !ok {
                return fail(format!("node {x}: {:?} violates its bag relation", node.kind));
            }
        }
        let root = self.root();
        if self.nodes[root].bag != sorted(vec![s, t]) {
            return fail("root bag is not {s, t}".into());
        }
        if parent_count[..root].iter().any(|&c| c != 1) || parent_count[root] != 0 {
            return fail("nodes do not form a rooted tree".into());
        }
        if introduced.len() != g.m() {
            return fail(format!("{} of {} edges introduced", introduced.len(), g.m()));
        }
        if let Some(v) = (0..g.n()).find(|&v| v != s && v != t && forgotten[v] != 1) {
            return fail(format!("vertex {v} forgotten {} times", forgotten[v]));
        }
        Ok(())
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn without(bag: &[usize], v: usize) -> Option<Vec<usize>> {
    let i = bag.binary_search(&v).ok()?;
    let mut out = bag.to_vec();
    out.remove(i);
    Some(out)
}

struct Builder<'a> {
    g: &'a Graph,
    nodes: Vec<NiceNode>,
    done_edges: HashSet<(usize, usize)>,
}

impl Builder<'_> {
    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    fn bag(&self, x: usize) -> &[usize] {
        &self.nodes[x].bag
    }

    fn introduce_vertex(&mut self, top: usize, v: usize) -> usize {
        let mut bag = self.bag(top).to_vec();
        let i = bag.binary_search(&v).unwrap_err();
        bag.insert(i, v);
        self.push(NodeKind::IntroduceVertex(v), bag, vec![top])
    }

    /// Introduces the pending edges of `v` inside the current bag, then
    /// forgets `v`.
    fn forget(&mut self, mut top: usize, v: usize) -> usize {
        let bag = self.bag(top).to_vec();
        for &w in self.g.neighbors(v) {
            let e = (v.min(w), v.max(w));
            if bag.binary_search(&w).is_ok() && self.done_edges.insert(e) {
                top = self.push(NodeKind::IntroduceEdge(e.0, e.1), bag.clone(), vec![top]);
            }
        }
        let reduced = without(&bag, v).unwrap();
        self.push(NodeKind::Forget(v), reduced, vec![top])
    }

    fn adapt(&mut self, mut top: usize, target: &[usize]) -> usize {
        let current = self.bag(top).to_vec();
        for &v in &current {
            if target.binary_search(&v).is_err() {
                top = self.forget(top, v);
            }
        }
        for &v in target {
            if self.bag(top).binary_search(&v).is_err() {
                top = self.introduce_vertex(top, v);
            }
        }
        top
    }
}

/// Adds s and t to every bag, binarizes joins, and introduces each edge just
/// below the forget node of whichever endpoint is forgotten first. The edge
/// {s, t}, if present, is introduced at the root.
pub fn make_nice(td: &TreeDecomposition, g: &Graph, s: usize, t: usize) -> Result<NiceTreeDecomposition> {
    if s == t || s >= g.n() || t >= g.n() {
        return Err(Error::Precondition("s and t must be distinct vertices".into()));
    }
    if let Some(e) = validation_error(td, g) {
        return Err(Error::InvalidDecomposition(e));
    }
    let children = td.rooted_children().expect("validated");
    let full_bag = |x: usize| -> Vec<usize> {
        let mut b = td.bags[x].clone();
        b.push(s);
        b.push(t);
        b.sort_unstable();
        b.dedup();
        b
    };
    let mut order = Vec::with_capacity(td.bags.len());
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        order.push(x);
        stack.extend(children[x].iter().copied());
    }
    let mut b = Builder {
        g,
        nodes: Vec::new(),
        done_edges: HashSet::new(),
    };
    let mut top = vec![usize::MAX; td.bags.len()];
    for &x in order.iter().rev() {
        let bag = full_bag(x);
        let node = if children[x].is_empty() {
            let mut cur = b.push(NodeKind::Leaf, sorted(vec![s, t]), Vec::new());
            for &v in &bag {
                if v != s && v != t {
                    cur = b.introduce_vertex(cur, v);
                }
            }
            cur
        } else {
            let mut acc = None;
            for &c in &children[x] {
                let adapted = b.adapt(top[c], &bag);
                acc = Some(match acc {
                    None => adapted,
                    Some(prev) => b.push(NodeKind::Join, bag.clone(), vec![prev, adapted]),
                });
            }
            acc.unwrap()
        };
        top[x] = node;
    }
    let mut root = b.adapt(top[0], &sorted(vec![s, t]));
    if g.has_edge(s, t) && b.done_edges.insert((s.min(t), s.max(t))) {
        root = b.push(NodeKind::IntroduceEdge(s.min(t), s.max(t)), sorted(vec![s, t]), vec![root]);
    }
    debug_assert_eq!(root, b.nodes.len() - 1);
    let ntd = NiceTreeDecomposition {
        nodes: b.nodes,
        s,
        t,
    };
    ntd.check(g)?;
    Ok(ntd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treedecomp::heuristic_decomposition;

    #[test]
    fn triangle_single_bag() {
        let g = Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let td = TreeDecomposition {
            bags: vec![vec![0, 1, 2]],
            tree_edges: Vec::new(),
        };
        let ntd = make_nice(&td, &g, 0, 1).unwrap();
        let edges = ntd
            .nodes
            .iter()
            .filter(|x| matches!(x.kind, NodeKind::IntroduceEdge(..)))
            .count();
        assert_eq!(edges, 3);
        assert_eq!(ntd.nodes[ntd.root()].bag, vec![0, 1]);
    }

    #[test]
    fn width_grows_by_at_most_two() {
        let g = Graph::from_edges(8, (0..8).map(|i| (i, (i + 1) % 8))).unwrap();
        let td = heuristic_decomposition(&g).unwrap();
        let ntd = make_nice(&td, &g, 0, 4).unwrap();
        assert!(ntd.width() <= td.width() + 2);
        ntd.check(&g).unwrap();
    }

    #[test]
    fn joins_are_binary() {
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let td = TreeDecomposition {
            bags: vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3], vec![0, 4]],
            tree_edges: vec![(0, 1), (0, 2), (0, 3), (0, 4)],
        };
        let ntd = make_nice(&td, &g, 1, 2).unwrap();
        assert!(ntd
            .nodes
            .iter()
            .all(|x| x.kind != NodeKind::Join || x.children.len() == 2));
        assert_eq!(ntd.nodes.iter().filter(|x| x.kind == NodeKind::Join).count(), 3);
    }

    #[test]
    fn check_rejects_missing_edge() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let td = heuristic_decomposition(&g).unwrap();
        let mut ntd = make_nice(&td, &g, 0, 2).unwrap();
        let bigger = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(ntd.check(&bigger).is_err());
        ntd.nodes.pop();
        assert!(ntd.check(&g).is_err());
    }
}
