//! Helpers shared by integration tests: an independent model of weighted
//! partition sets used to check the solver's algebra.
#![allow(dead_code)]

use rand::Rng;
use secluded_core::dp::{Elem, Partition, WeightedPartitionSet};

/// Block label per universe position, in restricted-growth form.
pub type Labels = Vec<usize>;

pub fn to_partition(universe: &[Elem], labels: &[usize]) -> Partition {
    let blocks = labels.iter().max().map_or(0, |m| m + 1);
    let mut out: Vec<Vec<Elem>> = vec![Vec::new(); blocks];
    for (&e, &b) in universe.iter().zip(labels) {
        out[b].push(e);
    }
    Partition::from_blocks(&out)
}

pub fn labels_of(universe: &[Elem], p: &Partition) -> Labels {
    let mut labels = vec![usize::MAX; universe.len()];
    let mut next = 0;
    for i in 0..universe.len() {
        if labels[i] != usize::MAX {
            continue;
        }
        for j in i..universe.len() {
            if p.same_block(universe[i], universe[j]) {
                labels[j] = next;
            }
        }
        next += 1;
    }
    labels
}

/// Every partition of `size` positions.
pub fn all_labelings(size: usize) -> Vec<Labels> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(size: usize, cur: &mut Vec<usize>, out: &mut Vec<Labels>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        let next = cur.iter().max().map_or(0, |m| m + 1);
        for b in 0..=next {
            cur.push(b);
            rec(size, cur, out);
            cur.pop();
        }
    }
    rec(size, &mut cur, &mut out);
    out
}

pub fn blocks_at_most_two(labels: &[usize]) -> bool {
    let mut count = vec![0; labels.len()];
    labels.iter().all(|&b| {
        count[b] += 1;
        count[b] <= 2
    })
}

/// Whether the union of both partitions is connected.
pub fn completes(a: &[usize], b: &[usize]) -> bool {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && (a[i] == a[j] || b[i] == b[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

pub fn model_opt(universe: &[Elem], a: &WeightedPartitionSet, q: &[usize]) -> Option<u64> {
    a.iter()
        .filter(|(p, _)| completes(&labels_of(universe, p), q))
        .map(|e| e.1)
        .min()
}

pub fn random_labels(rng: &mut impl Rng, size: usize) -> Labels {
    let mut out = Vec::with_capacity(size);
    for i in 0..size {
        let next = out.iter().max().map_or(0, |m| m + 1);
        out.push(if i == 0 { 0 } else { rng.gen_range(0..=next) });
    }
    out
}

pub fn random_universe(rng: &mut impl Rng, size: usize) -> Vec<Elem> {
    let mut u: Vec<Elem> = (0..16).collect();
    for i in 0..size {
        let j = rng.gen_range(i..u.len());
        u.swap(i, j);
    }
    let mut u = u[..size].to_vec();
    u.sort_unstable();
    u
}

pub fn random_wps(rng: &mut impl Rng, universe: &[Elem], entries: usize, max_weight: u64) -> WeightedPartitionSet {
    WeightedPartitionSet::from_entries(
        (0..entries)
            .map(|_| {
                (
                    to_partition(universe, &random_labels(rng, universe.len())),
                    rng.gen_range(0..=max_weight),
                )
            })
            .collect(),
    )
}

pub fn random_matching_wps(rng: &mut impl Rng, universe: &[Elem], entries: usize, max_weight: u64) -> WeightedPartitionSet {
    WeightedPartitionSet::from_entries(
        (0..entries)
            .map(|_| {
                let mut order = universe.to_vec();
                for i in (1..order.len()).rev() {
                    order.swap(i, rng.gen_range(0..=i));
                }
                let pairs: Vec<(Elem, Elem)> = order.chunks(2).map(|c| (c[0], c[1])).collect();
                (Partition::from_pairs(&pairs), rng.gen_range(0..=max_weight))
            })
            .collect(),
    )
}
