//! Set partitions of small universes of vertex ids.

use std::fmt;

use smallvec::SmallVec;

pub type Elem = u32;

type Items = SmallVec<[(Elem, Elem); 8]>;

/// A partition stored as `(element, label)` pairs sorted by element, where the
/// label of a block is its minimum element. The representation is canonical,
/// so derived equality and hashing are partition equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    items: Items,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.blocks()).finish()
    }
}

fn canonical(mut items: Items) -> Partition {
    items.sort_unstable_by_key(|x| x.0);
    let mut relabel: SmallVec<[(Elem, Elem); 8]> = SmallVec::new();
    for item in items.iter_mut() {
        let raw = item.1;
        let label = match relabel.iter().find(|r| r.0 == raw) {
            Some(r) => r.1,
            None => {
                relabel.push((raw, item.0));
                item.0
            }
        };
        item.1 = label;
    }
    Partition { items }
}

impl Partition {
    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn from_blocks<B: AsRef<[Elem]>>(blocks: &[B]) -> Self {
        let mut items = Items::new();
        for b in blocks {
            let b = b.as_ref();
            if let Some(&first) = b.first() {
                items.extend(b.iter().map(|&e| (e, first)));
            }
        }
        let p = canonical(items);
        debug_assert!(p.items.windows(2).all(|w| w[0].0 != w[1].0), "overlapping blocks");
        p
    }

    pub fn from_pairs(pairs: &[(Elem, Elem)]) -> Self {
        let blocks: Vec<[Elem; 2]> = pairs.iter().map(|&(a, b)| [a, b]).collect();
        Partition::from_blocks(&blocks)
    }

    pub fn universe(&self) -> impl Iterator<Item = Elem> + '_ {
        self.items.iter().map(|x| x.0)
    }

    pub fn universe_len(&self) -> usize {
        self.items.len()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.items.binary_search_by_key(&e, |x| x.0).is_ok()
    }

    fn label(&self, e: Elem) -> Option<Elem> {
        self.items
            .binary_search_by_key(&e, |x| x.0)
            .ok()
            .map(|i| self.items[i].1)
    }

    pub fn same_block(&self, a: Elem, b: Elem) -> bool {
        match (self.label(a), self.label(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    /// Blocks in order of their minimum element, each sorted.
    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let mut out: Vec<Vec<Elem>> = Vec::new();
        let mut labels: Vec<Elem> = Vec::new();
        for &(e, l) in &self.items {
            match labels.iter().position(|&x| x == l) {
                Some(i) => out[i].push(e),
                None => {
                    labels.push(l);
                    out.push(vec![e]);
                }
            }
        }
        out
    }

    pub fn block_count(&self) -> usize {
        self.items.iter().filter(|x| x.0 == x.1).count()
    }

    pub fn is_perfect_matching(&self) -> bool {
        let mut counts: SmallVec<[(Elem, u8); 8]> = SmallVec::new();
        for &(_, l) in &self.items {
            match counts.iter_mut().find(|c| c.0 == l) {
                Some(c) => c.1 += 1,
                None => counts.push((l, 1)),
            }
        }
        counts.iter().all(|c| c.1 == 2)
    }

    /// Merges the blocks of `u` and `v`, adding either as a singleton first if
    /// it is not yet in the universe.
    pub fn glue(&self, u: Elem, v: Elem) -> Partition {
        let mut items = self.items.clone();
        for e in [u, v] {
            if !items.iter().any(|x| x.0 == e) {
                items.push((e, e));
            }
        }
        let lu = items.iter().find(|x| x.0 == u).map(|x| x.1).unwrap();
        let lv = items.iter().find(|x| x.0 == v).map(|x| x.1).unwrap();
        if lu != lv {
            for x in items.iter_mut() {
                if x.1 == lv {
                    x.1 = lu;
                }
            }
        }
        canonical(items)
    }

    /// Removes the elements of `x`. Returns `None` when some block loses all
    /// of its elements.
    pub fn project(&self, x: &[Elem]) -> Option<Partition> {
        if x.is_empty() {
            return Some(self.clone());
        }
        let mut items = Items::new();
        let mut removed_labels: SmallVec<[Elem; 8]> = SmallVec::new();
        for &(e, l) in &self.items {
            if x.contains(&e) {
                if !removed_labels.contains(&l) {
                    removed_labels.push(l);
                }
            } else {
                items.push((e, l));
            }
        }
        if removed_labels
            .iter()
            .any(|&l| !items.iter().any(|it| it.1 == l))
        {
            return None;
        }
        Some(canonical(items))
    }

    pub fn is_single_block(&self) -> bool {
        match self.items.first() {
            None => true,
            Some(&(_, l)) => self.items.iter().all(|x| x.1 == l),
        }
    }
}

/// Finest common coarsening over the union of both universes.
pub fn coarsen_join(p: &Partition, q: &Partition) -> Partition {
    let mut elems: SmallVec<[Elem; 16]> = p.universe().chain(q.universe()).collect();
    elems.sort_unstable();
    elems.dedup();
    let idx = |e: Elem| elems.binary_search(&e).unwrap();
    let mut parent: SmallVec<[usize; 16]> = (0..elems.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for part in [p, q] {
        for &(e, l) in &part.items {
            let (a, b) = (find(&mut parent, idx(e)), find(&mut parent, idx(l)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut items = Items::new();
    for i in 0..elems.len() {
        let r = find(&mut parent, i);
        items.push((elems[i], elems[r]));
    }
    canonical(items)
}
