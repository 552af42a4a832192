//! Constructions of pin-code relations and chain complexes.

mod chain;
mod group;
mod tiling;

pub use chain::{
    capped_rm_complex, from_chain_complex, read_chain_complex, tensor_product, write_chain_complex, Cap,
    ChainComplex,
};
pub use group::{
    coxeter_relation, coxeter_relation_with_cap, read_presentation, todd_coxeter, write_presentation, CosetTable,
    GroupPresentation, Letter, DEFAULT_COSET_CAP,
};
pub use tiling::{torus_tiling, triangular_color_relation, TilingKind};

use crate::error::{Error, Result};
use crate::f2la::{BitMatrix, BitVector};
use crate::relation::{Level, PinCodeRelation};

/// The full Cartesian product of levels with the given sizes.
///
/// Flags are listed in lexicographic order with rank 0 most significant.
pub fn complete_relation(level_sizes: &[usize]) -> Result<PinCodeRelation> {
    if level_sizes.is_empty() {
        return Err(Error::InvalidParameters("at least one level is required".into()));
    }
    if let Some(&s) = level_sizes.iter().find(|&&s| s < 2 || s % 2 == 1) {
        return Err(Error::InvalidParameters(format!(
            "level size {s} must be even and at least 2"
        )));
    }
    let total: usize = level_sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .ok_or_else(|| Error::InvalidParameters("flag count overflows".into()))?;
    let mut flags = Vec::with_capacity(total);
    let mut current = vec![0usize; level_sizes.len()];
    for _ in 0..total {
        flags.push(current.clone());
        for r in (0..level_sizes.len()).rev() {
            current[r] += 1;
            if current[r] < level_sizes[r] {
                break;
            }
            current[r] = 0;
        }
    }
    let levels = level_sizes.iter().map(|&s| Level::numbered(s)).collect();
    PinCodeRelation::new(levels, flags)
}

/// `m` levels of two pins each; flag `c` sits at the point of `F_2^m`
/// whose coordinate `j` is bit `m - 1 - j` of `c`.
pub fn reed_muller_relation(m: usize) -> Result<PinCodeRelation> {
    if m == 0 {
        return Err(Error::InvalidParameters("m must be at least 1".into()));
    }
    complete_relation(&vec![2; m])
}

/// Generator matrix of `RM(r, m)`: one row per monomial of degree at most
/// `r`, by degree and then lexicographically, evaluated on the points of
/// `F_2^m` in the flag order of [`reed_muller_relation`].
pub fn rm_generator_matrix(r: usize, m: usize) -> Result<BitMatrix> {
    if r > m {
        return Err(Error::InvalidParameters(format!("RM order {r} exceeds m = {m}")));
    }
    if m >= 31 {
        return Err(Error::InvalidParameters(format!("m = {m} is too large")));
    }
    let n = 1usize << m;
    let coord = |c: usize, j: usize| (c >> (m - 1 - j)) & 1 == 1;
    let mut out = BitMatrix::new(n);
    for deg in 0..=r {
        for mono in crate::relation::TypeSet::all_of_size(m - 1, deg) {
            let vars: Vec<usize> = mono.ranks().collect();
            let row = BitVector::from_indices(n, (0..n).filter(|&c| vars.iter().all(|&j| coord(c, j))));
            out.push_row(row)?;
        }
    }
    Ok(out)
}

/// Three levels of two pins with the second pin of each level free.
///
/// The all-free flag is dropped, leaving 7 flags; its (1, 1)-pin code is
/// the Steane code.
pub fn steane_relation() -> Result<PinCodeRelation> {
    let ones = BitMatrix::from_strs(&["11", "11"])?;
    let cc = ChainComplex::new(vec![2, 2, 2], vec![ones.clone(), ones])?;
    let free = vec![vec![false, true]; 3];
    from_chain_complex(&cc, Some(&free))
}

/// One pin at rank 0 and two free pins at ranks 1 and 2.
///
/// The odd boundary adds a free `b0` whose flags are all free, so 4 flags
/// remain; its (1, 1)-pin code is `[[4, 2, 2]]`.
pub fn single_pin_relation() -> Result<PinCodeRelation> {
    let cc = ChainComplex::new(
        vec![1, 2, 2],
        vec![BitMatrix::from_strs(&["11"])?, BitMatrix::from_strs(&["11", "11"])?],
    )?;
    let free = vec![vec![false], vec![true; 2], vec![true; 2]];
    from_chain_complex(&cc, Some(&free))
}
