use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::SspInstance;

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick_terminals(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let s = rng.gen_range(0..n);
    let mut t = rng.gen_range(0..n - 1);
    if t >= s {
        t += 1;
    }
    (s, t)
}

/// Uniform random recursive tree on relabelled vertices plus `extra_edges`
/// distinct non-tree edges.
pub fn gen_tree_plus_edges(n: usize, extra_edges: usize, k: u64, l: u64, seed: u64) -> Result<SspInstance> {
    if n < 2 {
        return Err(Error::Precondition("need at least two vertices".into()));
    }
    let available = n * (n - 1) / 2 - (n - 1);
    if extra_edges > available {
        return Err(Error::Precondition(format!(
            "{extra_edges} extra edges requested, only {available} non-edges"
        )));
    }
    let mut rng = rng(seed);
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(&mut rng);
    let mut edges = HashSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (label[i], label[j]);
        edges.insert((a.min(b), a.max(b)));
    }
    let mut added = 0;
    if extra_edges * 3 > available {
        let mut non_edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|e| !edges.contains(e))
            .collect();
        non_edges.shuffle(&mut rng);
        edges.extend(non_edges.into_iter().take(extra_edges));
    } else {
        while added < extra_edges {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v && edges.insert((u.min(v), u.max(v))) {
                added += 1;
            }
        }
    }
    let mut edges: Vec<_> = edges.into_iter().collect();
    edges.sort_unstable();
    let graph = Graph::from_edges(n, edges)?;
    let (s, t) = pick_terminals(&mut rng, n);
    SspInstance::new(graph, s, t, k, l)
}

/// Connected random partial `width`-tree: a random `width`-tree from which
/// each non-anchor edge survives with probability `keep`.
pub fn gen_partial_ktree(n: usize, width: usize, keep: f64, k: u64, l: u64, seed: u64) -> Result<SspInstance> {
    if width == 0 || n < width + 1 || n < 2 {
        return Err(Error::Precondition("need n > width >= 1".into()));
    }
    let mut rng = rng(seed);
    let mut cliques: Vec<Vec<usize>> = vec![(0..=width).collect()];
    let mut edges = HashSet::new();
    for u in 0..=width {
        for v in u + 1..=width {
            if v == u + 1 || rng.gen_bool(keep) {
                edges.insert((u, v));
            }
        }
    }
    for v in width + 1..n {
        let base = cliques[rng.gen_range(0..cliques.len())].clone();
        let drop = rng.gen_range(0..base.len());
        let mut clique: Vec<usize> = base
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, &x)| x)
            .collect();
        let anchor = clique[rng.gen_range(0..clique.len())];
        for &u in &clique {
            if u == anchor || rng.gen_bool(keep) {
                edges.insert((u, v));
            }
        }
        clique.push(v);
        cliques.push(clique);
    }
    let mut edges: Vec<_> = edges.into_iter().collect();
    edges.sort_unstable();
    let graph = Graph::from_edges(n, edges)?;
    let (s, t) = pick_terminals(&mut rng, n);
    SspInstance::new(graph, s, t, k, l)
}

/// Small mixed instance for cross-checking solvers: a sparse random graph
/// on at most 16 vertices, a square grid or a hexagonal grid up to 4x4, with
/// `k` drawn from `2..=n` and `l` from `0..=8`.
pub fn gen_fuzz_instance(seed: u64) -> Result<SspInstance> {
    let mut r = rng(seed);
    let family = r.gen_range(0..3);
    let inner = r.gen::<u64>();
    match family {
        0 => {
            let n = r.gen_range(2..=16usize);
            let extra = r.gen_range(0..=6usize).min(n * (n - 1) / 2 - (n - 1));
            let k = r.gen_range(2..=n as u64);
            gen_tree_plus_edges(n, extra, k, r.gen_range(0..=8), inner)
        }
        _ => {
            let (w, h) = loop {
                let (w, h) = (r.gen_range(1..=4usize), r.gen_range(1..=4usize));
                if w * h >= 2 {
                    break (w, h);
                }
            };
            let k = r.gen_range(2..=(w * h) as u64);
            let l = r.gen_range(0..=8);
            if family == 1 {
                super::gen_grid(w, h, k, l)
            } else {
                super::gen_hex_grid(w, h, k, l)
            }
        }
    }
}
