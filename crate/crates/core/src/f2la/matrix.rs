use std::fmt;

use super::vector::BitVector;
use crate::error::{Error, Result};

/// A dense matrix over GF(2) stored as a list of packed rows.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitMatrix {
    ncols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    /// An empty matrix (no rows) with `ncols` columns.
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            ncols,
            rows: vec![BitVector::zeros(ncols); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            ncols: n,
            rows: (0..n).map(|i| BitVector::from_indices(n, [i])).collect(),
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::Dimension(format!(
                "row of length {} in a matrix with {ncols} columns",
                r.len()
            )));
        }
        Ok(Self { ncols, rows })
    }

    /// Parses rows written as `'0'/'1'` strings. All rows must share a length.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.parse::<BitVector>())
            .collect::<Result<Vec<_>>>()?;
        let ncols = parsed.first().map_or(0, BitVector::len);
        Self::from_rows(ncols, parsed)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    #[inline]
    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.ncols {
            return Err(Error::Dimension(format!(
                "row of length {} pushed into a matrix with {} columns",
                row.len(),
                self.ncols
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.ncols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                out.rows[c].set(r, true);
            }
        }
        out
    }

    /// `self · otherᵀ`: entry `(i, j)` is the parity of `rowᵢ(self) · rowⱼ(other)`.
    pub fn mul_transpose(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.ncols != other.ncols {
            return Err(Error::Dimension(format!(
                "cannot multiply {}-column matrix by the transpose of a {}-column matrix",
                self.ncols, other.ncols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|a| BitVector::from_bools(&other.rows.iter().map(|b| a.dot(b)).collect::<Vec<_>>()))
            .collect();
        Ok(BitMatrix {
            ncols: other.nrows(),
            rows,
        })
    }

    /// Ordinary product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.ncols != other.nrows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols,
                other.nrows(),
                other.ncols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|a| {
                let mut acc = BitVector::zeros(other.ncols);
                for k in a.iter_ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(BitMatrix {
            ncols: other.ncols,
            rows,
        })
    }

    /// `v · self` for a row vector `v` of length `nrows`.
    pub fn combine_rows(&self, coefficients: &BitVector) -> BitVector {
        assert_eq!(coefficients.len(), self.nrows());
        let mut acc = BitVector::zeros(self.ncols);
        for k in coefficients.iter_ones() {
            acc.xor_assign(&self.rows[k]);
        }
        acc
    }

    /// `self · vᵀ` as a vector of length `nrows`.
    pub fn syndrome(&self, v: &BitVector) -> BitVector {
        BitVector::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    /// Vertical stacking.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.ncols != other.ncols {
            return Err(Error::Dimension(format!(
                "cannot stack {}-column and {}-column matrices",
                self.ncols, other.ncols
            )));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix {
            ncols: self.ncols,
            rows,
        })
    }

    /// Columns at `positions`, in that order.
    pub fn select_columns(&self, positions: &[usize]) -> BitMatrix {
        BitMatrix {
            ncols: positions.len(),
            rows: self.rows.iter().map(|r| r.select(positions)).collect(),
        }
    }

    pub fn select_rows(&self, indices: &[usize]) -> BitMatrix {
        BitMatrix {
            ncols: self.ncols,
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Row reduction visiting candidate pivot columns in `order`.
    ///
    /// Returns the reduced matrix (pivot rows first, in pivot order) and
    /// the pivot columns. Columns not in `order` are never used as pivots.
    pub fn rref_in_order(&self, order: &[usize]) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for &c in order {
            if rank == rows.len() {
                break;
            }
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        (
            BitMatrix {
                ncols: self.ncols,
                rows,
            },
            pivots,
        )
    }

    /// Reduced row-echelon form with leftmost pivots.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let order: Vec<usize> = (0..self.ncols).collect();
        self.rref_in_order(&order)
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.ncols);
        for r in &self.rows {
            basis.insert(r.clone());
        }
        basis.rank()
    }

    /// Basis of `{v : self · vᵀ = 0}`, one row per non-pivot column.
    pub fn nullspace_basis(&self) -> BitMatrix {
        let (reduced, pivots) = self.rref();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = BitMatrix::new(self.ncols);
        for f in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::zeros(self.ncols);
            v.set(f, true);
            for (i, &p) in pivots.iter().enumerate() {
                if reduced.rows[i].get(f) {
                    v.set(p, true);
                }
            }
            out.rows.push(v);
        }
        out
    }

    /// Independent rows spanning the row space, in echelon form.
    pub fn row_basis(&self) -> BitMatrix {
        let (reduced, pivots) = self.rref();
        BitMatrix {
            ncols: self.ncols,
            rows: reduced.rows.into_iter().take(pivots.len()).collect(),
        }
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.nrows();
        if n != self.ncols {
            return None;
        }
        let augmented = BitMatrix {
            ncols: 2 * n,
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| r.concat(&BitVector::from_indices(n, [i])))
                .collect(),
        };
        let order: Vec<usize> = (0..n).collect();
        let (reduced, pivots) = augmented.rref_in_order(&order);
        if pivots.len() != n {
            return None;
        }
        let right: Vec<usize> = (n..2 * n).collect();
        Some(reduced.select_columns(&right))
    }

    /// Block form with an identity on the first `k` (permuted) columns.
    pub fn standard_form(&self) -> StandardFormDecomposition {
        let order: Vec<usize> = (0..self.ncols).collect();
        self.standard_form_on(&order)
    }

    /// Block form whose identity block sits on pivots drawn from
    /// `candidates` (visited in order).
    ///
    /// The first `k` rows of the reduced matrix carry the identity on the
    /// pivot columns; the remaining rows vanish on those columns.
    pub fn standard_form_on(&self, candidates: &[usize]) -> StandardFormDecomposition {
        let (reduced, pivots) = self.rref_in_order(candidates);
        let k = pivots.len();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let rest: Vec<usize> = (0..self.ncols).filter(|&c| !is_pivot[c]).collect();
        let mut permutation = pivots.clone();
        permutation.extend(rest.iter().copied());
        let g1 = BitMatrix {
            ncols: rest.len(),
            rows: reduced.rows[..k].iter().map(|r| r.select(&rest)).collect(),
        };
        let g0 = BitMatrix {
            ncols: rest.len(),
            rows: reduced.rows[k..].iter().map(|r| r.select(&rest)).collect(),
        };
        StandardFormDecomposition {
            k,
            g1,
            g0,
            column_permutation: permutation,
        }
    }

    /// True when `v` lies in the row space.
    pub fn row_space_contains(&self, v: &BitVector) -> bool {
        let mut basis = EchelonBasis::new(self.ncols);
        for r in &self.rows {
            basis.insert(r.clone());
        }
        basis.contains(v)
    }

    /// Row spaces are equal.
    pub fn same_row_space(&self, other: &BitMatrix) -> bool {
        if self.ncols != other.ncols {
            return false;
        }
        let a = EchelonBasis::from_matrix(self);
        let b = EchelonBasis::from_matrix(other);
        a.rank() == b.rank() && other.rows.iter().all(|r| a.contains(r)) && self.rows.iter().all(|r| b.contains(r))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.ncols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// Result of [`BitMatrix::standard_form`].
///
/// After permuting the input columns by `column_permutation` and row
/// reducing, the matrix reads
///
/// ```text
///   [ 1  G1 ]   k rows
///   [ 0  G0 ]   r rows
/// ```
///
/// where `G1` and `G0` hold the columns that follow the identity block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardFormDecomposition {
    pub k: usize,
    pub g1: BitMatrix,
    pub g0: BitMatrix,
    /// `column_permutation[i]` is the original index of permuted column `i`.
    pub column_permutation: Vec<usize>,
}

impl StandardFormDecomposition {
    /// Original indices of the identity-block columns.
    pub fn pivot_columns(&self) -> &[usize] {
        &self.column_permutation[..self.k]
    }

    /// Original indices of the columns carried by `G1`/`G0`.
    pub fn remaining_columns(&self) -> &[usize] {
        &self.column_permutation[self.k..]
    }

    /// Reassembles the stacked block matrix in the original column order.
    pub fn reassemble(&self) -> BitMatrix {
        let n = self.column_permutation.len();
        let mut rows = Vec::with_capacity(self.g1.nrows() + self.g0.nrows());
        for (i, r) in self.g1.rows().iter().enumerate() {
            let mut v = BitVector::zeros(n);
            v.set(self.column_permutation[i], true);
            for c in r.iter_ones() {
                v.set(self.column_permutation[self.k + c], true);
            }
            rows.push(v);
        }
        for r in self.g0.rows() {
            let mut v = BitVector::zeros(n);
            for c in r.iter_ones() {
                v.set(self.column_permutation[self.k + c], true);
            }
            rows.push(v);
        }
        BitMatrix { ncols: n, rows }
    }
}

/// Incrementally built echelon basis supporting membership queries.
///
/// Each stored row is reduced against the rows inserted before it, so a
/// single forward pass reduces any query vector.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    ncols: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_matrix(m: &BitMatrix) -> Self {
        let mut b = Self::new(m.ncols());
        for r in m.rows() {
            b.insert(r.clone());
        }
        b
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        self.reduce_in_place(&mut v);
        v
    }

    pub fn reduce_in_place(&self, v: &mut BitVector) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` if it is independent of the basis; returns whether it was.
    pub fn insert(&mut self, mut v: BitVector) -> bool {
        assert_eq!(v.len(), self.ncols);
        self.reduce_in_place(&mut v);
        match v.first_one() {
            Some(p) => {
                self.rows.push(v);
                self.pivots.push(p);
                true
            }
            None => false,
        }
    }

    pub fn to_matrix(&self) -> BitMatrix {
        BitMatrix {
            ncols: self.ncols,
            rows: self.rows.clone(),
        }
    }
}
