use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::SspInstance;

use super::random::rng;

/// k-partite graph with independent color classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MccInstance {
    pub graph: Graph,
    pub classes: Vec<Vec<usize>>,
}

impl MccInstance {
    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn validate(&self) -> Result<()> {
        let mut class_of = vec![usize::MAX; self.graph.n()];
        for (i, c) in self.classes.iter().enumerate() {
            for &v in c {
                if v >= self.graph.n() || class_of[v] != usize::MAX {
                    return Err(Error::InvalidInstance("classes do not partition V".into()));
                }
                class_of[v] = i;
            }
        }
        if class_of.contains(&usize::MAX) {
            return Err(Error::InvalidInstance("classes do not cover V".into()));
        }
        if self.graph.edges().iter().any(|&(u, v)| class_of[u] == class_of[v]) {
            return Err(Error::InvalidInstance("edge inside a class".into()));
        }
        Ok(())
    }
}

/// `k` classes of `class_size` vertices; each cross-class pair is an edge
/// with probability `edge_prob`.
pub fn gen_mcc_random(k: usize, class_size: usize, edge_prob: f64, seed: u64) -> MccInstance {
    let mut rng = rng(seed);
    let n = k * class_size;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if u / class_size != v / class_size && rng.gen_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    MccInstance {
        graph: Graph::from_edges(n, edges).expect("generated edges are simple"),
        classes: (0..k).map(|i| (i * class_size..(i + 1) * class_size).collect()).collect(),
    }
}

/// `2·log z` vertices encoding an index below `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryGadget {
    pub vertices: Vec<usize>,
    pub z: usize,
}

impl BinaryGadget {
    pub fn new(vertices: Vec<usize>, z: usize) -> Result<Self> {
        if z < 2 || !z.is_power_of_two() || vertices.len() != 2 * z.trailing_zeros() as usize {
            return Err(Error::Precondition("gadget needs z = 2^b >= 2 and 2b vertices".into()));
        }
        Ok(BinaryGadget { vertices, z })
    }

    pub fn bits(&self) -> usize {
        self.z.trailing_zeros() as usize
    }
}

/// Edges from `vertex` to the gadget positions where the binary encoding of
/// `p` followed by its complement has a one.
pub fn p_connect(vertex: usize, gadget: &BinaryGadget, p: usize) -> Result<Vec<(usize, usize)>> {
    if p >= gadget.z {
        return Err(Error::Precondition(format!("index {p} not below {}", gadget.z)));
    }
    let b = gadget.bits();
    let mut out = Vec::with_capacity(b);
    for q in 0..b {
        let bit = (p >> (b - 1 - q)) & 1;
        let target = if bit == 1 { q } else { b + q };
        out.push((vertex, gadget.vertices[target]));
    }
    out.sort_unstable_by_key(|e| e.1);
    Ok(out)
}

/// Where the parts of the gadget graph ended up.
#[derive(Clone, Debug)]
pub struct PptLayout {
    pub connectors: Vec<usize>,
    pub gadgets: Vec<BinaryGadget>,
    pub edge_vertices: Vec<usize>,
    pub pendants: usize,
    pub class_size: usize,
}

/// Builds the SSP instance equivalent to the colorful clique question.
///
/// One vertex per graph edge, grouped by color pair in lexicographic order;
/// connectors link consecutive groups, s and t attach to the first and last
/// group. Each end of an edge vertex points into the binary gadget of its
/// class by its index, and gadget vertices carry `l' + 1` pendants so no
/// path can pass through them.
pub fn construct_vc_ppt(g: &MccInstance) -> Result<(SspInstance, PptLayout)> {
    g.validate()?;
    let k = g.k();
    if k < 2 {
        return Err(Error::Precondition("need at least two classes".into()));
    }
    let biggest = g.classes.iter().map(Vec::len).max().unwrap_or(0);
    let class_size = biggest.next_power_of_two().max(2);
    let bits = class_size.trailing_zeros() as usize;
    let mut class_of = vec![0; g.graph.n()];
    let mut index_in_class = vec![0; g.graph.n()];
    for (i, c) in g.classes.iter().enumerate() {
        for (p, &v) in c.iter().enumerate() {
            class_of[v] = i;
            index_in_class[v] = p;
        }
    }
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let pair_count = pairs.len();
    let pair_id = |i: usize, j: usize| pairs.iter().position(|&p| p == (i.min(j), i.max(j))).unwrap();
    let m = g.graph.m();
    let l_prime = (m + k * bits - pair_count) as u64;
    let k_prime = (2 * pair_count + 1) as u64;

    let (s, t) = (0, 1);
    let mut next = 2;
    let mut alloc = |count: usize| {
        let r: Vec<usize> = (next..next + count).collect();
        next += count;
        r
    };
    let connectors = alloc(pair_count - 1);
    let gadgets: Vec<BinaryGadget> = (0..k)
        .map(|_| BinaryGadget::new(alloc(2 * bits), class_size))
        .collect::<Result<_>>()?;
    let edge_vertices = alloc(m);
    let mut edges = Vec::new();
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); pair_count];
    for (e, &(u, v)) in g.graph.edges().iter().enumerate() {
        let ve = edge_vertices[e];
        groups[pair_id(class_of[u], class_of[v])].push(ve);
        edges.extend(p_connect(ve, &gadgets[class_of[u]], index_in_class[u])?);
        edges.extend(p_connect(ve, &gadgets[class_of[v]], index_in_class[v])?);
    }
    for &ve in &groups[0] {
        edges.push((s, ve));
    }
    for &ve in &groups[pair_count - 1] {
        edges.push((t, ve));
    }
    for (h, &w) in connectors.iter().enumerate() {
        for &ve in groups[h].iter().chain(&groups[h + 1]) {
            edges.push((w, ve));
        }
    }
    let gadget_vertices: Vec<usize> = gadgets.iter().flat_map(|b| b.vertices.clone()).collect();
    let per = l_prime as usize + 1;
    let pendants = alloc(gadget_vertices.len() * per);
    for (i, &b) in gadget_vertices.iter().enumerate() {
        for &x in &pendants[i * per..(i + 1) * per] {
            edges.push((b, x));
        }
    }
    let graph = Graph::from_edges(next, edges)?;
    let inst = SspInstance::new(graph, s, t, k_prime, l_prime)?;
    Ok((
        inst,
        PptLayout {
            connectors,
            gadgets,
            edge_vertices,
            pendants: pendants.len(),
            class_size,
        },
    ))
}
