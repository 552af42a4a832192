//! Pin-code relations: levels of pins, flags, projections and pinned sets.

mod io;
mod types;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

pub use io::{read_relation, write_relation};
pub use types::{Pin, PinCollection, TypeSet, MAX_LEVELS};

use crate::error::{Error, Result};
use crate::f2la::{BitMatrix, BitVector};

static NEXT_RELATION_ID: AtomicU64 = AtomicU64::new(1);

/// Pins of one rank. `free[i]` marks pin `i` as free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub names: Vec<String>,
    pub free: Vec<bool>,
}

impl Level {
    /// `size` pins named `0..size`, none free.
    pub fn numbered(size: usize) -> Self {
        Self {
            names: (0..size).map(|i| i.to_string()).collect(),
            free: vec![false; size],
        }
    }

    pub fn named(names: Vec<String>) -> Self {
        let free = vec![false; names.len()];
        Self { names, free }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn mark_free(&mut self, index: usize) {
        self.free[index] = true;
    }
}

/// Right action of the group generators on flags, kept for group-built relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    /// `generators[i][f]` is the flag `f · a_i`.
    pub generators: Vec<Vec<u32>>,
    /// Stabilizer enumeration uses cosets of the generated intersection subgroups.
    pub split: bool,
}

/// Levels plus flags, each flag choosing one pin per level.
///
/// Distinct flags may share a pin tuple. Flags whose pins are all free are
/// dropped on construction.
#[derive(Clone, Debug)]
pub struct PinCodeRelation {
    id: u64,
    levels: Vec<Level>,
    flags: Vec<u32>,
    dropped: usize,
    group: Option<GroupAction>,
}

impl PartialEq for PinCodeRelation {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels && self.flags == other.flags && self.group == other.group
    }
}

/// A pinned set tied to the relation it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinnedSet {
    relation_id: u64,
    pub collection: PinCollection,
    pub indicator: BitVector,
}

impl PinnedSet {
    pub fn relation_id(&self) -> u64 {
        self.relation_id
    }

    pub fn size(&self) -> usize {
        self.indicator.weight()
    }
}

/// One entry of [`PinCodeRelation::enumerate_pinned_sets`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedSet {
    pub collection: PinCollection,
    pub indicator: BitVector,
    /// Index of the first earlier entry with the same indicator.
    pub duplicate_of: Option<usize>,
}

/// Outcome of the even-cardinality check on `D`-pinned sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub passed: bool,
    pub strict: bool,
    pub checked: usize,
    /// Offending collections with their odd sizes.
    pub witnesses: Vec<(PinCollection, usize)>,
}

impl PinCodeRelation {
    /// Builds a relation from levels and flags given as per-rank pin indices.
    pub fn new(levels: Vec<Level>, flags: Vec<Vec<usize>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidParameters("a relation needs at least one level".into()));
        }
        if levels.len() > MAX_LEVELS {
            return Err(Error::InvalidParameters(format!("at most {MAX_LEVELS} levels are supported")));
        }
        for (r, l) in levels.iter().enumerate() {
            if l.names.len() != l.free.len() {
                return Err(Error::InvalidParameters(format!("level {r} has mismatched free marks")));
            }
        }
        let width = levels.len();
        let mut flat = Vec::with_capacity(flags.len() * width);
        let mut dropped = 0;
        for (fi, f) in flags.iter().enumerate() {
            if f.len() != width {
                return Err(Error::InvalidParameters(format!(
                    "flag {fi} has {} pins, expected {width}",
                    f.len()
                )));
            }
            for (r, &p) in f.iter().enumerate() {
                if p >= levels[r].len() {
                    return Err(Error::InvalidParameters(format!(
                        "flag {fi} uses pin {p} at rank {r}, which has {} pins",
                        levels[r].len()
                    )));
                }
            }
            if f.iter().enumerate().all(|(r, &p)| levels[r].free[p]) {
                dropped += 1;
                continue;
            }
            flat.extend(f.iter().map(|&p| p as u32));
        }
        Ok(Self {
            id: NEXT_RELATION_ID.fetch_add(1, Ordering::Relaxed),
            levels,
            flags: flat,
            dropped,
            group: None,
        })
    }

    pub(crate) fn with_group_action(mut self, action: GroupAction) -> Result<Self> {
        if self.dropped != 0 {
            return Err(Error::InvalidParameters("group actions need every flag kept".into()));
        }
        let n = self.num_flags();
        if action.generators.iter().any(|g| g.len() != n || g.iter().any(|&f| f as usize >= n)) {
            return Err(Error::Dimension("group action does not match the flag count".into()));
        }
        self.group = Some(action);
        Ok(self)
    }

    /// Process-unique identifier used to reject cross-relation operations.
    pub fn id(&self) -> u64 {
        self.id
    }

    /// Highest rank `D`.
    pub fn d(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Level::len).collect()
    }

    pub fn num_flags(&self) -> usize {
        self.flags.len() / self.levels.len()
    }

    /// Pins of flag `f`, one per rank.
    pub fn flag(&self, f: usize) -> &[u32] {
        let w = self.levels.len();
        &self.flags[f * w..(f + 1) * w]
    }

    pub fn dropped_flag_count(&self) -> usize {
        self.dropped
    }

    pub fn group_action(&self) -> Option<&GroupAction> {
        self.group.as_ref()
    }

    pub fn is_split(&self) -> bool {
        self.group.as_ref().is_some_and(|g| g.split)
    }

    pub fn is_free(&self, pin: Pin) -> bool {
        self.levels[pin.rank].free[pin.index]
    }

    pub fn has_free_pins(&self) -> bool {
        self.levels.iter().any(|l| l.free.iter().any(|&f| f))
    }

    fn collection_has_non_free(&self, c: &PinCollection) -> bool {
        c.pins().iter().any(|&p| !self.is_free(p))
    }

    fn check_type(&self, t: TypeSet) -> Result<()> {
        match t.max_rank() {
            Some(r) if r > self.d() => Err(Error::InvalidType(format!(
                "rank {r} out of range for a relation with D = {}",
                self.d()
            ))),
            _ => Ok(()),
        }
    }

    fn check_collection(&self, s: &PinCollection) -> Result<()> {
        for p in s.pins() {
            if p.rank > self.d() || p.index >= self.levels[p.rank].len() {
                return Err(Error::MalformedCollection(format!("pin {}:{} does not exist", p.rank, p.index)));
            }
        }
        Ok(())
    }

    /// Projection of flag `f` onto the ranks of `t`.
    pub fn project(&self, f: usize, t: TypeSet) -> Result<PinCollection> {
        self.check_type(t)?;
        let flag = self.flag(f);
        Ok(PinCollection::from_sorted_unchecked(
            t.ranks().map(|r| Pin::new(r, flag[r] as usize)).collect(),
        ))
    }

    fn flag_matches(&self, f: usize, s: &PinCollection) -> bool {
        let flag = self.flag(f);
        s.pins().iter().all(|p| flag[p.rank] as usize == p.index)
    }

    /// Indicator over flags of the pinned set of `s`.
    pub fn pinned_set(&self, s: &PinCollection) -> Result<BitVector> {
        self.check_collection(s)?;
        let n = self.num_flags();
        Ok(BitVector::from_indices(n, (0..n).filter(|&f| self.flag_matches(f, s))))
    }

    pub fn pinned(&self, s: &PinCollection) -> Result<PinnedSet> {
        Ok(PinnedSet {
            relation_id: self.id,
            collection: s.clone(),
            indicator: self.pinned_set(s)?,
        })
    }

    /// Pinned sets of `P(s)` refined to type `t`, in lexicographic collection order.
    pub fn decompose_pinned(&self, s: &PinCollection, t: TypeSet) -> Result<Vec<PinnedSet>> {
        self.check_collection(s)?;
        self.check_type(t)?;
        if !s.type_set().is_subset_of(t) {
            return Err(Error::InvalidType(format!(
                "type {t} does not contain the collection type {}",
                s.type_set()
            )));
        }
        let ranks: Vec<usize> = t.ranks().collect();
        let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for f in (0..self.num_flags()).filter(|&f| self.flag_matches(f, s)) {
            let flag = self.flag(f);
            groups.entry(ranks.iter().map(|&r| flag[r]).collect()).or_default().push(f);
        }
        let n = self.num_flags();
        Ok(groups
            .into_iter()
            .map(|(key, members)| PinnedSet {
                relation_id: self.id,
                collection: self.collection_from_key(&ranks, &key),
                indicator: BitVector::from_indices(n, members),
            })
            .collect())
    }

    fn collection_from_key(&self, ranks: &[usize], key: &[u32]) -> PinCollection {
        PinCollection::from_sorted_unchecked(
            ranks.iter().zip(key).map(|(&r, &p)| Pin::new(r, p as usize)).collect(),
        )
    }

    /// All nonempty pinned sets of type `t`, in lexicographic collection order.
    pub fn pinned_sets_of_type(&self, t: TypeSet) -> Result<Vec<(PinCollection, BitVector)>> {
        self.check_type(t)?;
        let ranks: Vec<usize> = t.ranks().collect();
        let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for f in 0..self.num_flags() {
            let flag = self.flag(f);
            groups.entry(ranks.iter().map(|&r| flag[r]).collect()).or_default().push(f);
        }
        let n = self.num_flags();
        Ok(groups
            .into_iter()
            .map(|(key, members)| (self.collection_from_key(&ranks, &key), BitVector::from_indices(n, members)))
            .collect())
    }

    /// Checks that every `D`-pinned set has even size.
    ///
    /// Unless `strict`, collections made only of free pins are skipped.
    pub fn validate(&self, strict: bool) -> ValidationReport {
        let mut witnesses = Vec::new();
        let mut checked = 0;
        for t in TypeSet::all_of_size(self.d(), self.d()) {
            for (c, v) in self.pinned_sets_of_type(t).expect("types are in range") {
                if !strict && !self.collection_has_non_free(&c) {
                    continue;
                }
                checked += 1;
                let w = v.weight();
                if w % 2 == 1 {
                    witnesses.push((c, w));
                }
            }
        }
        ValidationReport {
            passed: witnesses.is_empty(),
            strict,
            checked,
            witnesses,
        }
    }

    /// Convenience for `validate(false).passed`.
    pub fn is_pin_code_relation(&self) -> bool {
        self.validate(false).passed
    }

    /// All nonempty `k`-pinned sets whose collection has a non-free pin.
    ///
    /// Types come in lexicographic order, then collections. For `k = 0`
    /// the single full set is returned when some level has no free pin.
    pub fn enumerate_pinned_sets(&self, k: usize) -> Vec<EnumeratedSet> {
        if k == 0 {
            let some_level_fixed = self.levels.iter().any(|l| l.free.iter().all(|&f| !f));
            if !some_level_fixed || self.num_flags() == 0 {
                return Vec::new();
            }
            return vec![EnumeratedSet {
                collection: PinCollection::empty(),
                indicator: BitVector::ones(self.num_flags()),
                duplicate_of: None,
            }];
        }
        let mut raw = Vec::new();
        for t in TypeSet::all_of_size(self.d(), k) {
            for (c, v) in self.pinned_sets_of_type(t).expect("types are in range") {
                if self.collection_has_non_free(&c) {
                    raw.push((c, v));
                }
            }
        }
        mark_duplicates(raw)
    }

    /// Generator supports for `k`-pinned stabilizers.
    ///
    /// Identical to [`enumerate_pinned_sets`](Self::enumerate_pinned_sets)
    /// unless the relation carries a split group action, in which case each
    /// pinned set of type `t` is refined into cosets of the subgroup
    /// generated by the generators outside `t`.
    pub fn stabilizer_sets(&self, k: usize) -> Vec<EnumeratedSet> {
        let Some(action) = self.group.as_ref().filter(|g| g.split) else {
            return self.enumerate_pinned_sets(k);
        };
        if k == 0 {
            return self.enumerate_pinned_sets(0);
        }
        let n = self.num_flags();
        let mut raw = Vec::new();
        for t in TypeSet::all_of_size(self.d(), k) {
            let gens: Vec<&Vec<u32>> = (0..self.num_levels())
                .filter(|&i| !t.contains(i))
                .map(|i| &action.generators[i])
                .collect();
            let mut comp = vec![usize::MAX; n];
            let mut parts: Vec<(PinCollection, Vec<usize>)> = Vec::new();
            for start in 0..n {
                if comp[start] != usize::MAX {
                    continue;
                }
                let id = parts.len();
                comp[start] = id;
                let mut stack = vec![start];
                let mut members = vec![start];
                while let Some(f) = stack.pop() {
                    for g in &gens {
                        let h = g[f] as usize;
                        if comp[h] == usize::MAX {
                            comp[h] = id;
                            stack.push(h);
                            members.push(h);
                        }
                    }
                }
                members.sort_unstable();
                let c = self.project(start, t).expect("type in range");
                parts.push((c, members));
            }
            parts.sort();
            for (c, members) in parts {
                if self.collection_has_non_free(&c) {
                    raw.push((c, BitVector::from_indices(n, members)));
                }
            }
        }
        mark_duplicates(raw)
    }

    /// Rows of the `k`-pinned stabilizer supports as a matrix.
    pub fn stabilizer_matrix(&self, k: usize) -> (BitMatrix, Vec<PinCollection>) {
        let sets = self.stabilizer_sets(k);
        let mut m = BitMatrix::new(self.num_flags());
        let mut prov = Vec::with_capacity(sets.len());
        for s in sets {
            m.push_row(s.indicator).expect("indicator length matches flags");
            prov.push(s.collection);
        }
        (m, prov)
    }
}

fn mark_duplicates(raw: Vec<(PinCollection, BitVector)>) -> Vec<EnumeratedSet> {
    let mut seen: std::collections::HashMap<BitVector, usize> = std::collections::HashMap::new();
    raw.into_iter()
        .enumerate()
        .map(|(i, (collection, indicator))| {
            let duplicate_of = match seen.get(&indicator) {
                Some(&j) => Some(j),
                None => {
                    seen.insert(indicator.clone(), i);
                    None
                }
            };
            EnumeratedSet {
                collection,
                indicator,
                duplicate_of,
            }
        })
        .collect()
}

/// Intersection of two pinned sets of the same relation.
///
/// Returns `None` when the collections disagree on a shared rank, and the
/// pinned set of the union collection otherwise.
pub fn intersect_pinned(a: &PinnedSet, b: &PinnedSet) -> Result<Option<PinnedSet>> {
    if a.relation_id != b.relation_id {
        return Err(Error::RelationMismatch);
    }
    if !a.collection.agrees_with(&b.collection) {
        return Ok(None);
    }
    Ok(Some(PinnedSet {
        relation_id: a.relation_id,
        collection: a.collection.union(&b.collection)?,
        indicator: &a.indicator & &b.indicator,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The relation drawn next to the pinned-set definition: flags f0, f1, f2
    /// over levels red {1, 2}, green {a, b}, blue {α, β}.
    fn three_flag_example() -> PinCodeRelation {
        let levels = vec![
            Level::named(vec!["1".into(), "2".into()]),
            Level::named(vec!["a".into(), "b".into()]),
            Level::named(vec!["alpha".into(), "beta".into()]),
        ];
        PinCodeRelation::new(levels, vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 1, 0]]).unwrap()
    }

    fn coll(pins: &[(usize, usize)]) -> PinCollection {
        PinCollection::new(pins.iter().map(|&(r, i)| Pin::new(r, i)).collect()).unwrap()
    }

    #[test]
    fn projection() {
        let rel = three_flag_example();
        let rb = TypeSet::from_ranks([0, 2]).unwrap();
        assert_eq!(rel.project(0, rb).unwrap(), coll(&[(0, 0), (2, 0)]));
        assert!(rel.project(0, TypeSet::EMPTY).unwrap().is_empty());
        assert_eq!(rel.project(2, TypeSet::full(2)).unwrap(), coll(&[(0, 1), (1, 1), (2, 0)]));
        assert!(rel.project(0, TypeSet::from_ranks([3]).unwrap()).is_err());
    }

    #[test]
    fn pinned_sets_of_example() {
        let rel = three_flag_example();
        let b = rel.pinned_set(&coll(&[(1, 1)])).unwrap();
        assert_eq!(b.iter_ones().collect::<Vec<_>>(), vec![1, 2]);
        let s = rel.pinned_set(&coll(&[(0, 0), (2, 0)])).unwrap();
        assert_eq!(s.iter_ones().collect::<Vec<_>>(), vec![0]);
        assert_eq!(rel.pinned_set(&PinCollection::empty()).unwrap().weight(), 3);
    }

    #[test]
    fn decomposition_of_full_set() {
        let rel = three_flag_example();
        let parts = rel
            .decompose_pinned(&PinCollection::empty(), TypeSet::from_ranks([1]).unwrap())
            .unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].indicator.iter_ones().collect::<Vec<_>>(), vec![0]);
        assert_eq!(parts[1].indicator.iter_ones().collect::<Vec<_>>(), vec![1, 2]);
        let err = rel.decompose_pinned(&coll(&[(0, 0)]), TypeSet::from_ranks([1]).unwrap());
        assert!(matches!(err, Err(Error::InvalidType(_))));
    }

    #[test]
    fn intersections() {
        let rel = three_flag_example();
        let other = three_flag_example();
        let a = rel.pinned(&coll(&[(1, 1)])).unwrap();
        assert_eq!(intersect_pinned(&a, &a).unwrap().unwrap(), a);
        let c = rel.pinned(&coll(&[(1, 0)])).unwrap();
        assert!(intersect_pinned(&a, &c).unwrap().is_none());
        let foreign = other.pinned(&coll(&[(1, 1)])).unwrap();
        assert_eq!(intersect_pinned(&a, &foreign), Err(Error::RelationMismatch));
    }

    #[test]
    fn single_flag_fails_validation() {
        let rel = PinCodeRelation::new(vec![Level::numbered(1); 4], vec![vec![0; 4]]).unwrap();
        let report = rel.validate(false);
        assert!(!report.passed);
        assert_eq!(report.witnesses.len(), 4);
    }

    #[test]
    fn all_free_flags_are_dropped() {
        let mut l0 = Level::numbered(2);
        l0.mark_free(1);
        let mut l1 = Level::numbered(2);
        l1.mark_free(1);
        let flags = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        let rel = PinCodeRelation::new(vec![l0, l1], flags).unwrap();
        assert_eq!(rel.num_flags(), 3);
        assert_eq!(rel.dropped_flag_count(), 1);
        let sets = rel.enumerate_pinned_sets(1);
        assert_eq!(sets.len(), 2);
        assert!(sets.iter().all(|s| s.indicator.weight() == 2));
        assert!(rel.enumerate_pinned_sets(0).is_empty());
    }

    #[test]
    fn duplicates_are_flagged() {
        let rel = PinCodeRelation::new(
            vec![Level::numbered(1), Level::numbered(2)],
            vec![vec![0, 0], vec![0, 1]],
        )
        .unwrap();
        let sets = rel.enumerate_pinned_sets(1);
        assert_eq!(sets.len(), 3);
        assert_eq!(sets[0].indicator.weight(), 2);
        assert_eq!(sets.iter().filter(|s| s.duplicate_of.is_some()).count(), 0);
        let zero = rel.enumerate_pinned_sets(0);
        assert_eq!(zero.len(), 1);
        let twice = PinCodeRelation::new(
            vec![Level::numbered(1), Level::numbered(1)],
            vec![vec![0, 0], vec![0, 0]],
        )
        .unwrap();
        let sets = twice.enumerate_pinned_sets(1);
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[1].duplicate_of, Some(0));
    }
}
