use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::SspInstance;

/// Shape of an OR-composition.
#[derive(Clone, Debug)]
pub struct CompositionLayout {
    /// Number of copies after padding to a power of two.
    pub copies: usize,
    pub depth: u32,
    /// First vertex id of each copy.
    pub offsets: Vec<usize>,
    pub tree_s: Vec<usize>,
    pub tree_t: Vec<usize>,
}

impl CompositionLayout {
    /// Budgets quoted with the construction, tighter than what a solution in
    /// one copy actually needs.
    pub fn stated_budgets(&self, k: u64, l: u64) -> (u64, i64) {
        let d = self.depth as u64;
        (k + 2 * d, (l + 2 * d) as i64 - 1)
    }
}

/// OR-composition of instances sharing `n`, `k` and `l`.
///
/// Copies are padded to a power of two with edgeless no-instances. Two
/// complete binary trees rooted at the new s and t have one leaf per copy;
/// leaf `i` of the s-tree is adjacent to copy `i`'s terminal s and likewise
/// for t. Budgets grow by the two root-to-leaf paths and their side
/// vertices: `k + 2·depth + 2` and `l + 2·depth`.
pub fn construct_tw_crosscomp(instances: &[SspInstance]) -> Result<(SspInstance, CompositionLayout)> {
    let first = instances
        .first()
        .ok_or_else(|| Error::Precondition("nothing to compose".into()))?;
    let (n, k, l) = (first.graph.n(), first.k, first.l);
    if instances.iter().any(|i| i.graph.n() != n || i.k != k || i.l != l) {
        return Err(Error::Precondition("instances must share n, k and l".into()));
    }
    let copies = instances.len().next_power_of_two();
    let depth = copies.trailing_zeros();
    let tree_nodes = 2 * copies - 1;
    let tree_s: Vec<usize> = (0..tree_nodes).collect();
    let tree_t: Vec<usize> = (tree_nodes..2 * tree_nodes).collect();
    let offsets: Vec<usize> = (0..copies).map(|i| 2 * tree_nodes + i * n).collect();
    let mut edges = Vec::new();
    for tree in [&tree_s, &tree_t] {
        for heap in 2..=tree_nodes {
            edges.push((tree[heap / 2 - 1], tree[heap - 1]));
        }
    }
    for (i, &off) in offsets.iter().enumerate() {
        let leaf = copies + i - 1;
        let (s_i, t_i) = match instances.get(i) {
            Some(inst) => {
                edges.extend(inst.graph.edges().iter().map(|&(u, v)| (u + off, v + off)));
                (inst.s, inst.t)
            }
            None => (0, 1),
        };
        edges.push((tree_s[leaf], s_i + off));
        edges.push((tree_t[leaf], t_i + off));
    }
    let graph = Graph::from_edges(2 * tree_nodes + copies * n, edges)?;
    let d = depth as u64;
    let inst = SspInstance::new(graph, tree_s[0], tree_t[0], k + 2 * d + 2, l + 2 * d)?;
    Ok((
        inst,
        CompositionLayout {
            copies,
            depth,
            offsets,
            tree_s,
            tree_t,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_tree_plus_edges;

    #[test]
    fn padding_and_size() {
        let parts: Vec<_> = (0..3).map(|i| gen_tree_plus_edges(5, 1, 3, 1, i).unwrap()).collect();
        let (inst, layout) = construct_tw_crosscomp(&parts).unwrap();
        assert_eq!(layout.copies, 4);
        assert_eq!(layout.depth, 2);
        assert_eq!(inst.graph.n(), 2 * 7 + 4 * 5);
        assert_eq!(inst.k, 3 + 4 + 2);
        assert_eq!(inst.l, 1 + 4);
        assert_eq!(layout.stated_budgets(3, 1), (7, 4));
    }

    #[test]
    fn single_copy() {
        let parts = vec![gen_tree_plus_edges(4, 0, 3, 1, 0).unwrap()];
        let (inst, layout) = construct_tw_crosscomp(&parts).unwrap();
        assert_eq!(layout.depth, 0);
        assert_eq!(inst.graph.n(), 6);
        assert_eq!(inst.k, 5);
    }

    #[test]
    fn rejects_mismatch() {
        let a = gen_tree_plus_edges(4, 0, 3, 1, 0).unwrap();
        let b = gen_tree_plus_edges(5, 0, 3, 1, 0).unwrap();
        assert!(construct_tw_crosscomp(&[a, b]).is_err());
        assert!(construct_tw_crosscomp(&[]).is_err());
    }
}
