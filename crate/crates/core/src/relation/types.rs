use std::fmt;

use crate::error::{Error, Result};

/// A pin: position `index` within the level of rank `rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pin {
    pub rank: usize,
    pub index: usize,
}

impl Pin {
    pub const fn new(rank: usize, index: usize) -> Self {
        Self { rank, index }
    }
}

/// Largest supported number of levels.
pub const MAX_LEVELS: usize = 64;

/// A subset of ranks, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TypeSet(u64);

impl TypeSet {
    pub const EMPTY: TypeSet = TypeSet(0);

    pub fn from_ranks(ranks: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = 0u64;
        for r in ranks {
            if r >= MAX_LEVELS {
                return Err(Error::InvalidType(format!("rank {r} exceeds the supported maximum")));
            }
            bits |= 1 << r;
        }
        Ok(TypeSet(bits))
    }

    /// All ranks `0..=d`.
    pub fn full(d: usize) -> Self {
        if d + 1 >= MAX_LEVELS {
            TypeSet(u64::MAX)
        } else {
            TypeSet((1u64 << (d + 1)) - 1)
        }
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, rank: usize) -> bool {
        rank < MAX_LEVELS && (self.0 >> rank) & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn ranks(self) -> impl Iterator<Item = usize> {
        (0..MAX_LEVELS).filter(move |&r| (self.0 >> r) & 1 == 1)
    }

    /// `{0..=d} \ self`.
    pub fn complement(self, d: usize) -> Self {
        TypeSet(TypeSet::full(d).0 & !self.0)
    }

    pub fn is_subset_of(self, other: TypeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: TypeSet) -> Self {
        TypeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: TypeSet) -> Self {
        TypeSet(self.0 & other.0)
    }

    pub fn max_rank(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// All `k`-subsets of `{0..=d}` in lexicographic order of their sorted ranks.
    pub fn all_of_size(d: usize, k: usize) -> Vec<TypeSet> {
        let mut out = Vec::new();
        let mut combo: Vec<usize> = (0..k).collect();
        if k > d + 1 {
            return out;
        }
        loop {
            out.push(TypeSet(combo.iter().fold(0, |acc, &r| acc | 1 << r)));
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if combo[i] < d + 1 - k + i {
                    combo[i] += 1;
                    for j in i + 1..k {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

impl fmt::Debug for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ranks: Vec<String> = self.ranks().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}", ranks.join(","))
    }
}

/// A set of pins with at most one pin per rank, kept sorted by rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PinCollection {
    pins: Vec<Pin>,
}

impl PinCollection {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut pins: Vec<Pin>) -> Result<Self> {
        pins.sort();
        pins.dedup();
        if let Some(w) = pins.windows(2).find(|w| w[0].rank == w[1].rank) {
            return Err(Error::MalformedCollection(format!(
                "pins {} and {} share rank {}",
                w[0].index, w[1].index, w[0].rank
            )));
        }
        if let Some(p) = pins.iter().find(|p| p.rank >= MAX_LEVELS) {
            return Err(Error::MalformedCollection(format!("rank {} out of range", p.rank)));
        }
        Ok(Self { pins })
    }

    pub(crate) fn from_sorted_unchecked(pins: Vec<Pin>) -> Self {
        debug_assert!(pins.windows(2).all(|w| w[0].rank < w[1].rank));
        Self { pins }
    }

    pub fn pins(&self) -> &[Pin] {
        &self.pins
    }

    pub fn len(&self) -> usize {
        self.pins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pins.is_empty()
    }

    pub fn type_set(&self) -> TypeSet {
        TypeSet(self.pins.iter().fold(0, |acc, p| acc | 1 << p.rank))
    }

    pub fn pin_at(&self, rank: usize) -> Option<usize> {
        self.pins.iter().find(|p| p.rank == rank).map(|p| p.index)
    }

    /// True when `self` and `other` assign the same pin at every shared rank.
    pub fn agrees_with(&self, other: &PinCollection) -> bool {
        self.pins
            .iter()
            .all(|p| other.pin_at(p.rank).is_none_or(|i| i == p.index))
    }

    /// Union of two agreeing collections.
    pub fn union(&self, other: &PinCollection) -> Result<PinCollection> {
        if !self.agrees_with(other) {
            return Err(Error::MalformedCollection("collections disagree on a shared rank".into()));
        }
        let mut pins = self.pins.clone();
        pins.extend(other.pins.iter().copied());
        PinCollection::new(pins)
    }

    pub fn contains(&self, other: &PinCollection) -> bool {
        other.pins.iter().all(|p| self.pins.contains(p))
    }
}

impl fmt::Display for PinCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pins.iter().map(|p| format!("{}:{}", p.rank, p.index)).collect();
        write!(f, "({})", parts.join(" "))
    }
}
