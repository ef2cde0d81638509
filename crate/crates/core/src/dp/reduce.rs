//! Rank-based representative subsets.
//!
//! Rows are taken in increasing weight and kept iff their vector over GF(2)
//! is independent of the rows kept so far. Two column families are offered:
//!
//! * [`ReduceMode::CutBasis`]: the cuts of the universe that contain a fixed
//!   pivot element. A partition's row has a one for every cut the partition
//!   does not cross. The number of cuts consistent with `p ⊔ q` has odd parity
//!   iff `p ⊔ q` is a single block, so every completion `q` is preserved, and
//!   at most `2^{|U|-1}` rows survive.
//! * [`ReduceMode::MatchingBasis`]: perfect matchings of the universe, with a
//!   one where `p ⊔ q` is a single block. For rows that are perfect matchings
//!   this matrix has rank `2^{|U|/2-1}`, and the row dependencies coincide
//!   with those over all completions whose blocks have at most two elements.
//!   Those are the only completions the solver ever needs, because the rest of
//!   an s-t path meets the endpoints of a partial solution in disjoint paths.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::partition::{Elem, Partition};
use super::wps::WeightedPartitionSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum ReduceMode {
    Off,
    #[default]
    CutBasis,
    MatchingBasis,
}

/// Universes up to this size use perfect-matching columns; beyond it the
/// matching mode falls back to cut columns.
pub const MATCHING_COLUMNS_MAX: usize = 12;

pub fn representative_bound(universe: usize, mode: ReduceMode) -> usize {
    match mode {
        ReduceMode::Off => usize::MAX,
        ReduceMode::CutBasis => 1 << universe.saturating_sub(1),
        ReduceMode::MatchingBasis if universe <= MATCHING_COLUMNS_MAX => {
            1 << (universe / 2).saturating_sub(1)
        }
        ReduceMode::MatchingBasis => 1 << universe.saturating_sub(1),
    }
}

fn common_universe(a: &WeightedPartitionSet) -> Result<Vec<Elem>> {
    let mut it = a.iter();
    let first: Vec<Elem> = match it.next() {
        Some((p, _)) => p.universe().collect(),
        None => return Ok(Vec::new()),
    };
    for (p, _) in it {
        if !p.universe().eq(first.iter().copied()) {
            return Err(Error::Precondition("partitions over different universes".into()));
        }
    }
    Ok(first)
}

/// Block masks over universe positions.
fn block_masks(p: &Partition, universe: &[Elem]) -> Vec<u32> {
    p.blocks()
        .iter()
        .map(|b| {
            b.iter()
                .map(|e| 1u32 << universe.binary_search(e).unwrap())
                .fold(0, |x, y| x | y)
        })
        .collect()
}

fn cut_row(masks: &[u32], u: usize) -> Vec<u64> {
    let cols = 1usize << (u - 1);
    let mut row = vec![0u64; cols.div_ceil(64)];
    for c in 0..cols {
        let side = 1u32 | ((c as u32) << 1);
        if masks.iter().all(|&b| b & side == b || b & side == 0) {
            row[c / 64] |= 1 << (c % 64);
        }
    }
    row
}

fn matchings_of(u: usize) -> &'static [Vec<u8>] {
    static CACHE: [OnceLock<Vec<Vec<u8>>>; MATCHING_COLUMNS_MAX / 2 + 1] =
        [const { OnceLock::new() }; MATCHING_COLUMNS_MAX / 2 + 1];
    CACHE[u / 2].get_or_init(|| {
        fn rec(mate: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            let Some(i) = mate.iter().position(|&m| m == u8::MAX) else {
                out.push(mate.clone());
                return;
            };
            for j in i + 1..mate.len() {
                if mate[j] == u8::MAX {
                    mate[i] = j as u8;
                    mate[j] = i as u8;
                    rec(mate, out);
                    mate[i] = u8::MAX;
                    mate[j] = u8::MAX;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut vec![u8::MAX; u], &mut out);
        out
    })
}

fn matching_row(masks: &[u32], u: usize) -> Result<Vec<u64>> {
    let mut mate = vec![0usize; u];
    for &b in masks {
        if b.count_ones() != 2 {
            return Err(Error::Precondition("matching reduce needs perfect matchings".into()));
        }
        let x = b.trailing_zeros() as usize;
        let y = 31 - b.leading_zeros() as usize;
        mate[x] = y;
        mate[y] = x;
    }
    let cols = matchings_of(u);
    let mut row = vec![0u64; cols.len().div_ceil(64)];
    for (c, q) in cols.iter().enumerate() {
        // p ∪ q is a union of alternating cycles; one cycle means one block.
        let (mut x, mut len) = (0usize, 0usize);
        loop {
            x = q[mate[x]] as usize;
            len += 2;
            if x == 0 {
                break;
            }
        }
        if len == u {
            row[c / 64] |= 1 << (c % 64);
        }
    }
    Ok(row)
}

/// Greedy basis over GF(2), insertion order given by the caller.
struct Basis {
    rows: Vec<(usize, Vec<u64>)>,
}

impl Basis {
    fn insert(&mut self, mut row: Vec<u64>) -> bool {
        for (pivot, b) in &self.rows {
            if row[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (x, y) in row.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
        }
        match row.iter().position(|&w| w != 0) {
            Some(i) => {
                let pivot = i * 64 + row[i].trailing_zeros() as usize;
                self.rows.push((pivot, row));
                true
            }
            None => false,
        }
    }
}

pub fn reduce(a: &WeightedPartitionSet, mode: ReduceMode) -> Result<WeightedPartitionSet> {
    if mode == ReduceMode::Off || a.len() <= 1 {
        return Ok(a.clone());
    }
    let universe = common_universe(a)?;
    let u = universe.len();
    let mut order: Vec<&(Partition, u64)> = a.iter().collect();
    order.sort_by(|x, y| (x.1, &x.0).cmp(&(y.1, &y.0)));
    if u == 0 {
        return Ok(WeightedPartitionSet::singleton(order[0].0.clone(), order[0].1));
    }
    if u > 32 {
        return Err(Error::Precondition("universe too large for reduce".into()));
    }
    let use_matchings = mode == ReduceMode::MatchingBasis && u <= MATCHING_COLUMNS_MAX && u % 2 == 0;
    let mut basis = Basis { rows: Vec::new() };
    let mut kept = Vec::new();
    for entry in order {
        let masks = block_masks(&entry.0, &universe);
        let row = if use_matchings {
            matching_row(&masks, u)?
        } else {
            cut_row(&masks, u)
        };
        if basis.insert(row) {
            kept.push(entry.clone());
        }
    }
    Ok(WeightedPartitionSet::from_entries(kept))
}
