use std::fmt;
use std::ops::{BitAnd, BitXor};
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2), packed 64 positions per word.
///
/// Bits beyond `len` in the last word are always zero, so equality,
/// hashing and popcounts work directly on the words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; word_count(len)],
        };
        v.clear_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector of length `len` with ones at `indices`.
    ///
    /// Panics if an index is out of range.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    fn check_len(&self, other: &Self) {
        assert_eq!(
            self.len, other.len,
            "bit vector length mismatch: {} vs {}",
            self.len, other.len
        );
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Self) {
        self.check_len(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    #[inline]
    pub fn and_assign(&mut self, other: &Self) {
        self.check_len(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn or_assign(&mut self, other: &Self) {
        self.check_len(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    /// `|self ∧ other|` without allocating.
    #[inline]
    pub fn and_weight(&self, other: &Self) -> usize {
        self.check_len(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Standard inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        let parity = self
            .words
            .iter()
            .zip(&other.words)
            .fold(0u64, |acc, (a, b)| acc ^ (a & b));
        self.check_len(other);
        parity.count_ones() % 2 == 1
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.check_len(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Restriction to the given positions, in the given order.
    pub fn select(&self, positions: &[usize]) -> Self {
        let mut out = Self::zeros(positions.len());
        for (j, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(j, true);
            }
        }
        out
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }
}

impl BitXor for &BitVector {
    type Output = BitVector;
    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

impl BitAnd for &BitVector {
    type Output = BitVector;
    fn bitand(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.and_assign(rhs);
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = Self::zeros(s.chars().count());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(Error::parse(1, format!("unexpected character {other:?}"))),
            }
        }
        Ok(v)
    }
}

/// `|v¹ ∧ … ∧ vˢ|`: the number of positions where every vector is one.
///
/// An empty list has no defined length and is rejected.
pub fn wedge_weight(vectors: &[&BitVector]) -> Result<usize> {
    let (first, rest) = vectors
        .split_first()
        .ok_or_else(|| Error::Dimension("wedge of an empty list".into()))?;
    if let Some(bad) = rest.iter().find(|v| v.len() != first.len()) {
        return Err(Error::Dimension(format!(
            "wedge of vectors with lengths {} and {}",
            first.len(),
            bad.len()
        )));
    }
    let total = (0..first.words.len())
        .map(|w| {
            rest.iter()
                .fold(first.words[w], |acc, v| acc & v.words[w])
                .count_ones() as usize
        })
        .sum();
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn wedge_weight_small_cases() {
        assert_eq!(wedge_weight(&[&bv("1111")]).unwrap(), 4);
        assert_eq!(wedge_weight(&[&bv("1100"), &bv("0110")]).unwrap(), 1);
        assert_eq!(wedge_weight(&[&bv("1010"), &bv("0101")]).unwrap(), 0);
    }

    #[test]
    fn wedge_weight_rejects_length_mismatch() {
        let err = wedge_weight(&[&bv("101"), &bv("1010")]).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
        assert!(wedge_weight(&[]).is_err());
    }

    #[test]
    fn tail_bits_stay_clear() {
        let v = BitVector::ones(70);
        assert_eq!(v.weight(), 70);
        assert_eq!(v.words().len(), 2);
        let w = BitVector::from_indices(70, [0, 65, 69]);
        assert_eq!(w.iter_ones().collect::<Vec<_>>(), vec![0, 65, 69]);
        assert_eq!((&v ^ &w).weight(), 67);
        assert_eq!(w.first_one(), Some(0));
        assert_eq!(BitVector::zeros(9).first_one(), None);
    }

    #[test]
    fn display_round_trip() {
        let v = bv("0110001");
        assert_eq!(v.to_string(), "0110001");
        assert!("01x".parse::<BitVector>().is_err());
    }

    #[test]
    fn select_and_concat() {
        let v = bv("10110");
        assert_eq!(v.select(&[4, 0, 2]).to_string(), "011");
        assert_eq!(v.concat(&bv("01")).to_string(), "1011001");
        assert!(bv("0100").is_subset_of(&bv("1100")));
        assert!(!bv("0110").is_subset_of(&bv("1100")));
    }
}
