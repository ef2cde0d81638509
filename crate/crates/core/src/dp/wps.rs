//! Sets of weighted partitions and the operators the transitions compose.

use crate::error::{Error, Result};

use super::partition::{coarsen_join, Elem, Partition};

pub type Weight = u64;

/// Duplicate-free set of `(partition, weight)` pairs, sorted by partition.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeightedPartitionSet {
    entries: Vec<(Partition, Weight)>,
}

impl WeightedPartitionSet {
    pub fn new() -> Self {
        WeightedPartitionSet::default()
    }

    /// Builds a set from arbitrary entries, keeping the minimum weight per
    /// partition.
    pub fn from_entries(entries: Vec<(Partition, Weight)>) -> Self {
        rmc(entries)
    }

    pub fn singleton(p: Partition, w: Weight) -> Self {
        WeightedPartitionSet {
            entries: vec![(p, w)],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Partition, Weight)> {
        self.entries.iter()
    }

    pub fn entries(&self) -> &[(Partition, Weight)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(Partition, Weight)> {
        self.entries
    }

    pub fn weight_of(&self, p: &Partition) -> Option<Weight> {
        self.entries
            .binary_search_by(|e| e.0.cmp(p))
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn min_weight(&self) -> Option<Weight> {
        self.entries.iter().map(|e| e.1).min()
    }

    /// Drops entries heavier than `limit`.
    pub fn prune_above(&mut self, limit: Weight) {
        self.entries.retain(|e| e.1 <= limit);
    }

    pub fn all_perfect_matchings(&self) -> bool {
        self.entries.iter().all(|e| e.0.is_perfect_matching())
    }
}

/// Keeps one entry per partition, the lightest.
pub fn rmc(mut entries: Vec<(Partition, Weight)>) -> WeightedPartitionSet {
    entries.sort_unstable();
    entries.dedup_by(|later, earlier| later.0 == earlier.0);
    WeightedPartitionSet { entries }
}

pub fn union_min(a: &WeightedPartitionSet, b: &WeightedPartitionSet) -> WeightedPartitionSet {
    if b.is_empty() {
        return a.clone();
    }
    if a.is_empty() {
        return b.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let (x, y) = (&a.entries, &b.entries);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => {
                out.push(x[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(y[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((x[i].0.clone(), x[i].1.min(y[j].1)));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&y[j..]);
    WeightedPartitionSet { entries: out }
}

/// Merges the blocks of `u` and `v` in every partition.
pub fn glue(u: Elem, v: Elem, a: &WeightedPartitionSet) -> WeightedPartitionSet {
    rmc(a.entries.iter().map(|(p, w)| (p.glue(u, v), *w)).collect())
}

/// Adds `delta` to every weight; fails if a weight would turn negative.
pub fn shift(delta: i64, a: &WeightedPartitionSet) -> Result<WeightedPartitionSet> {
    let mut entries = a.entries.clone();
    for e in entries.iter_mut() {
        let w = e.1 as i128 + delta as i128;
        if w < 0 {
            return Err(Error::Precondition(format!(
                "shift by {delta} makes weight {} negative",
                e.1
            )));
        }
        e.1 = u64::try_from(w).map_err(|_| Error::Precondition("weight overflow".into()))?;
    }
    Ok(WeightedPartitionSet { entries })
}

/// Removes the elements of `x`, discarding partitions that lose a block.
pub fn proj(x: &[Elem], a: &WeightedPartitionSet) -> WeightedPartitionSet {
    if x.is_empty() {
        return a.clone();
    }
    rmc(a
        .entries
        .iter()
        .filter_map(|(p, w)| Some((p.project(x)?, *w)))
        .collect())
}

pub fn join(a: &WeightedPartitionSet, b: &WeightedPartitionSet) -> WeightedPartitionSet {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (p, w1) in &a.entries {
        for (q, w2) in &b.entries {
            out.push((coarsen_join(p, q), w1 + w2));
        }
    }
    rmc(out)
}

/// Lightest weight among partitions that `q` completes to a single block.
pub fn opt(q: &Partition, a: &WeightedPartitionSet) -> Option<Weight> {
    a.entries
        .iter()
        .filter(|(p, _)| coarsen_join(p, q).is_single_block())
        .map(|e| e.1)
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(pairs: &[(Elem, Elem)]) -> Partition {
        Partition::from_pairs(pairs)
    }

    #[test]
    fn rmc_keeps_lightest() {
        let a = rmc(vec![(pm(&[(0, 1)]), 3), (pm(&[(0, 1)]), 7)]);
        assert_eq!(a.entries(), &[(pm(&[(0, 1)]), 3)]);
        assert_eq!(rmc(a.entries().to_vec()), a);
        assert!(rmc(Vec::new()).is_empty());
    }

    #[test]
    fn union_min_examples() {
        let a = WeightedPartitionSet::singleton(pm(&[(0, 1)]), 4);
        let b = WeightedPartitionSet::singleton(pm(&[(0, 1)]), 2);
        assert_eq!(union_min(&a, &WeightedPartitionSet::new()), a);
        assert_eq!(union_min(&a, &b), b);
    }

    #[test]
    fn glue_examples() {
        let a = WeightedPartitionSet::singleton(Partition::empty(), 5);
        assert_eq!(glue(2, 3, &a).entries(), &[(pm(&[(2, 3)]), 5)]);
        let b = WeightedPartitionSet::singleton(pm(&[(0, 1)]), 2);
        assert_eq!(glue(2, 3, &b).entries(), &[(pm(&[(0, 1), (2, 3)]), 2)]);
    }

    #[test]
    fn shift_examples() {
        let a = WeightedPartitionSet::singleton(pm(&[(0, 1)]), 2);
        assert_eq!(shift(0, &a).unwrap(), a);
        assert_eq!(shift(3, &a).unwrap().min_weight(), Some(5));
        assert_eq!(shift(-2, &a).unwrap().min_weight(), Some(0));
        assert!(shift(-3, &a).is_err());
    }

    #[test]
    fn proj_examples() {
        let a = WeightedPartitionSet::singleton(pm(&[(0, 1)]), 4);
        assert!(proj(&[0, 1], &a).is_empty());
        assert_eq!(proj(&[], &a), a);
        let three = WeightedPartitionSet::singleton(Partition::from_blocks(&[[0, 1, 2]]), 4);
        assert_eq!(proj(&[1], &three).entries(), &[(pm(&[(0, 2)]), 4)]);
    }

    #[test]
    fn join_examples() {
        let e1 = WeightedPartitionSet::singleton(Partition::empty(), 1);
        let e2 = WeightedPartitionSet::singleton(Partition::empty(), 2);
        assert_eq!(join(&e1, &e2).entries(), &[(Partition::empty(), 3)]);
        let ab = WeightedPartitionSet::singleton(pm(&[(0, 1)]), 1);
        assert_eq!(join(&ab, &ab).entries(), &[(pm(&[(0, 1)]), 2)]);
    }

    #[test]
    fn opt_examples() {
        let a = WeightedPartitionSet::singleton(pm(&[(0, 1)]), 4);
        assert_eq!(opt(&pm(&[(0, 1)]), &a), Some(4));
        assert_eq!(opt(&pm(&[(0, 1)]), &WeightedPartitionSet::new()), None);
    }
}
