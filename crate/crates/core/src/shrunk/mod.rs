//! Shrunk chain complexes: X-stabilizers of one type, the pinned sets of
//! the complementary type, and the Z-stabilizer types inside that
//! complement, joined by their overlaps.
//!
//! A pinned set of type `t` and one of type `t̄` share at most one flag,
//! and every other x-type meets a `t̄`-set evenly. Cycles at level 1 thus
//! lift to operators commuting with every X-stabilizer.

use std::collections::HashMap;
use std::fmt::Write;

use crate::builders::ChainComplex;
use crate::csscode::{check_relation, independent_modulo};
use crate::error::{Error, Result};
use crate::f2la::{BitMatrix, BitVector, EchelonBasis};
use crate::relation::{PinCodeRelation, PinCollection, TypeSet};

#[derive(Clone, Debug)]
pub struct ShrunkComplex {
    pub t: TypeSet,
    pub x: usize,
    pub z: usize,
    /// Level 0: sets of type `t`; level 1: type `t̄`; level 2: z-types
    /// inside `t̄`, in type order.
    pub complex: ChainComplex,
    pub level0: Vec<PinCollection>,
    pub level1: Vec<PinCollection>,
    pub level2: Vec<PinCollection>,
    /// Flag supports of the level-1 sets, one row each.
    pub level1_supports: BitMatrix,
}

fn has_non_free(rel: &PinCodeRelation, c: &PinCollection) -> bool {
    c.pins().iter().any(|&p| !rel.is_free(p))
}

/// The `t`-shrunk complex of the (x, z)-pin code.
///
/// Levels 0 and 2 keep only collections holding a non-free pin, as the
/// stabilizers do; level 1 keeps every `t̄`-set.
pub fn shrunk_complex(rel: &PinCodeRelation, x: usize, z: usize, t: TypeSet) -> Result<ShrunkComplex> {
    let d = rel.d();
    if t.len() != x {
        return Err(Error::InvalidParameters(format!("type {t} does not have {x} ranks")));
    }
    if !t.is_subset_of(TypeSet::full(d)) {
        return Err(Error::InvalidParameters(format!("type {t} has ranks beyond D = {d}")));
    }
    if x + z > d {
        return Err(Error::InvalidParameters(format!("x + z = {} exceeds D = {d}", x + z)));
    }
    check_relation(rel)?;
    let complement = t.complement(d);
    let level0: Vec<PinCollection> = rel
        .pinned_sets_of_type(t)?
        .into_iter()
        .map(|(c, _)| c)
        .filter(|c| has_non_free(rel, c))
        .collect();
    let (level1, supports): (Vec<PinCollection>, Vec<BitVector>) = rel.pinned_sets_of_type(complement)?.into_iter().unzip();
    let mut level2 = Vec::new();
    for tz in TypeSet::all_of_size(d, z) {
        if tz.is_subset_of(complement) {
            level2.extend(
                rel.pinned_sets_of_type(tz)?
                    .into_iter()
                    .map(|(c, _)| c)
                    .filter(|c| has_non_free(rel, c)),
            );
        }
    }

    let index0: HashMap<&PinCollection, usize> = level0.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let index1: HashMap<&PinCollection, usize> = level1.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut d1 = BitMatrix::zeros(level0.len(), level1.len());
    for f in 0..rel.num_flags() {
        let a = rel.project(f, t)?;
        let b = rel.project(f, complement)?;
        if let (Some(&i), Some(&j)) = (index0.get(&a), index1.get(&b)) {
            d1.set(i, j, true);
        }
    }
    let mut d2 = BitMatrix::zeros(level1.len(), level2.len());
    for (j, c) in level1.iter().enumerate() {
        for (k, zc) in level2.iter().enumerate() {
            if c.contains(zc) {
                d2.set(j, k, true);
            }
        }
    }
    let complex = ChainComplex::new(vec![level0.len(), level1.len(), level2.len()], vec![d1, d2])?;
    let level1_supports = BitMatrix::from_rows(rel.num_flags(), supports)?;
    Ok(ShrunkComplex {
        t,
        x,
        z,
        complex,
        level0,
        level1,
        level2,
        level1_supports,
    })
}

impl ShrunkComplex {
    /// A basis of level-1 cycles modulo boundaries.
    pub fn homology_representatives(&self) -> BitMatrix {
        let cycles = self.complex.boundary(1).nullspace_basis();
        let boundaries = self.complex.boundary(2).transpose();
        independent_modulo(&boundaries, &cycles)
    }

    /// Whether a level-1 chain is a cycle.
    pub fn is_cycle(&self, chain: &BitVector) -> bool {
        self.complex.boundary(1).syndrome(chain).is_zero()
    }

    /// Pin collections of each basis element, one line per element.
    pub fn provenance(&self) -> String {
        let mut out = String::new();
        writeln!(out, "type {}", self.t).expect("writing to a string");
        for (level, cs) in [&self.level0, &self.level1, &self.level2].into_iter().enumerate() {
            for (i, c) in cs.iter().enumerate() {
                writeln!(out, "level {level} {i} {c}").expect("writing to a string");
            }
        }
        out
    }
}

/// The flags covered an odd number of times by the level-1 sets of a
/// cycle.
pub fn lift_homology(sc: &ShrunkComplex, cycle: &BitVector) -> Result<BitVector> {
    if cycle.len() != sc.level1.len() {
        return Err(Error::Dimension(format!(
            "chain has length {}, level 1 has {} elements",
            cycle.len(),
            sc.level1.len()
        )));
    }
    if !sc.is_cycle(cycle) {
        return Err(Error::Precondition("the chain has a nonzero boundary".into()));
    }
    Ok(sc.level1_supports.combine_rows(cycle))
}

/// Generator ranks on the support of one level-0 set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapCount {
    pub set: PinCollection,
    /// Rank of all Z-stabilizer generators restricted to the set.
    pub pin_code_rank: usize,
    /// Rank of the level-2 generators restricted to the set.
    pub shrunk_rank: usize,
}

/// Both generator counts for every level-0 set.
///
/// Unfolding needs them to agree; they are reported without judgement.
pub fn overlap_counts(rel: &PinCodeRelation, sc: &ShrunkComplex) -> Result<Vec<OverlapCount>> {
    let (sz, _) = rel.stabilizer_matrix(sc.z);
    let level2_supports: Vec<BitVector> = sc
        .level2
        .iter()
        .map(|c| rel.pinned_set(c))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(sc.level0.len());
    for a in &sc.level0 {
        let support = rel.pinned_set(a)?;
        let rank_on = |rows: &mut dyn Iterator<Item = &BitVector>| {
            let mut basis = EchelonBasis::new(support.len());
            for r in rows {
                basis.insert(r & &support);
            }
            basis.rank()
        };
        out.push(OverlapCount {
            set: a.clone(),
            pin_code_rank: rank_on(&mut sz.rows().iter()),
            shrunk_rank: rank_on(&mut level2_supports.iter()),
        });
    }
    Ok(out)
}
