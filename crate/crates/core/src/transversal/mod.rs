//! Multi-even and multi-orthogonal spaces, transversality conditions for
//! the phase gate `R_ℓ`, and the logical gate it implements.
//!
//! Generator-level checks enumerate subsets of at most `ℓ` rows and test
//! the size of their common support. A subset whose common support is
//! empty passes every test, and so do all of its supersets, which prunes
//! most of the search on sparse generators.

mod polynomial;

pub use polynomial::{correction_polynomial, extract_logical_polynomial, Gate, WeightedPolynomial};

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;

use crate::csscode::{CssCode, LogicalBasis};
use crate::error::{Error, Result};
use crate::f2la::{BitMatrix, BitVector, EchelonBasis};

/// Largest supported level.
pub const MAX_LEVEL: usize = 16;

/// Exhaustive checks run when `k + rank(Sx)` is at most this.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Witnesses kept per condition.
pub const MAX_WITNESSES: usize = 16;

/// A subset of rows whose common support has the wrong size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Logical rows in the subset.
    pub logicals: Vec<usize>,
    /// Stabilizer rows in the subset.
    pub stabilizers: Vec<usize>,
    pub weight: usize,
    /// The weight should be a multiple of this.
    pub modulus: u64,
}

impl Violation {
    pub fn s(&self) -> usize {
        self.logicals.len()
    }

    pub fn t(&self) -> usize {
        self.stabilizers.len()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "s={} t={} logicals={:?} stabilizers={:?} weight={} modulus={}",
            self.s(),
            self.t(),
            self.logicals,
            self.stabilizers,
            self.weight,
            self.modulus
        )
    }
}

/// Verdict of one condition with the first few failing subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub passed: bool,
    pub witnesses: Vec<Violation>,
}

/// A monomial of the gate polynomial that breaks a condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub logicals: Vec<usize>,
    pub stabilizers: Vec<usize>,
    /// Coefficient modulo `2^ℓ`.
    pub coefficient: u64,
}

/// Whole-group verdicts from [`exhaustive_transversality`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhaustiveReport {
    pub exact: bool,
    pub quasi: bool,
    pub exact_witness: Option<Monomial>,
    pub quasi_witness: Option<Monomial>,
}

/// Both transversality verdicts for one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalityReport {
    pub level: usize,
    pub exact: ConditionReport,
    pub quasi: ConditionReport,
    /// Present when the code is small enough for the exhaustive check.
    pub exhaustive: Option<ExhaustiveReport>,
}

fn check_level(level: usize) -> Result<()> {
    if level == 0 || level > MAX_LEVEL {
        return Err(Error::InvalidParameters(format!(
            "level must be between 1 and {MAX_LEVEL}, got {level}"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Source {
    Logical,
    Stabilizer,
}

/// Subset enumeration over logical rows followed by stabilizer rows.
struct Scan<'a, R> {
    rows: Vec<(Source, usize, &'a BitVector)>,
    max_size: usize,
    /// Required modulus for `s` logical and `t` stabilizer rows, if any.
    rule: R,
}

impl<'a, R> Scan<'a, R>
where
    R: Fn(usize, usize) -> Option<u64> + Sync,
{
    fn new(logicals: &'a BitMatrix, stabilizers: &'a BitMatrix, max_size: usize, rule: R) -> Self {
        let mut rows: Vec<(Source, usize, &BitVector)> = Vec::new();
        for (i, r) in logicals.rows().iter().enumerate() {
            rows.push((Source::Logical, i, r));
        }
        // Repeated stabilizer rows only repeat smaller subsets.
        let mut seen = HashSet::new();
        for (i, r) in stabilizers.rows().iter().enumerate() {
            if !r.is_zero() && seen.insert(r) {
                rows.push((Source::Stabilizer, i, r));
            }
        }
        Self { rows, max_size, rule }
    }

    fn run(&self) -> ConditionReport {
        let found: Vec<Vec<Violation>> = (0..self.rows.len())
            .into_par_iter()
            .map(|i| {
                let mut out = Vec::new();
                let mut chosen = vec![i];
                self.visit(self.rows[i].2.clone(), &mut chosen, &mut out);
                out
            })
            .collect();
        let witnesses: Vec<Violation> = found.into_iter().flatten().take(MAX_WITNESSES).collect();
        ConditionReport {
            passed: witnesses.is_empty(),
            witnesses,
        }
    }

    fn visit(&self, support: BitVector, chosen: &mut Vec<usize>, out: &mut Vec<Violation>) {
        let weight = support.weight();
        if weight == 0 || out.len() >= MAX_WITNESSES {
            return;
        }
        let s = chosen
            .iter()
            .filter(|&&c| matches!(self.rows[c].0, Source::Logical))
            .count();
        let t = chosen.len() - s;
        if let Some(modulus) = (self.rule)(s, t) {
            if weight as u64 % modulus != 0 {
                out.push(self.violation(chosen, weight, modulus));
            }
        }
        if chosen.len() == self.max_size {
            return;
        }
        let last = *chosen.last().expect("subset is nonempty");
        for next in last + 1..self.rows.len() {
            let mut narrowed = support.clone();
            narrowed.and_assign(self.rows[next].2);
            chosen.push(next);
            self.visit(narrowed, chosen, out);
            chosen.pop();
        }
    }

    fn violation(&self, chosen: &[usize], weight: usize, modulus: u64) -> Violation {
        let mut v = Violation {
            logicals: Vec::new(),
            stabilizers: Vec::new(),
            weight,
            modulus,
        };
        for &c in chosen {
            match self.rows[c].0 {
                Source::Logical => v.logicals.push(self.rows[c].1),
                Source::Stabilizer => v.stabilizers.push(self.rows[c].1),
            }
        }
        v
    }
}

/// Whether the row space of `gens` is `ℓ`-even.
///
/// Every `s`-subset of rows, `1 ≤ s ≤ ℓ`, must have a common support of
/// size divisible by `2^(ℓ − s + 1)`.
pub fn is_multi_even(gens: &BitMatrix, level: usize) -> Result<ConditionReport> {
    check_level(level)?;
    let none = BitMatrix::new(gens.ncols());
    let rule = |_s: usize, t: usize| Some(1u64 << (level - t + 1));
    Ok(Scan::new(&none, gens, level, rule).run())
}

/// Whether the row space of `gens` is `ℓ`-orthogonal: every subset of at
/// most `ℓ` rows has a common support of even size.
pub fn is_multi_orthogonal(gens: &BitMatrix, level: usize) -> Result<ConditionReport> {
    check_level(level)?;
    let none = BitMatrix::new(gens.ncols());
    Ok(Scan::new(&none, gens, level, |_, _| Some(2)).run())
}

/// Whether every pair and every triple of rows has even overlap.
///
/// Single rows may have any weight.
pub fn is_triorthogonal(gens: &BitMatrix) -> Result<ConditionReport> {
    let none = BitMatrix::new(gens.ncols());
    Ok(Scan::new(&none, gens, 3, |_, t| (t >= 2).then_some(2u64)).run())
}

/// Generator-level conditions under which transversal `R_ℓ` acts as the
/// gate polynomial of `lx` with no correction.
///
/// Any `s ≥ 0` logical rows with `t ≥ 1` stabilizer rows, `s + t ≤ ℓ`,
/// must overlap on a multiple of `2^(ℓ − s − t + 1)`.
pub fn exact_conditions(lx: &BitMatrix, sx: &BitMatrix, level: usize) -> Result<ConditionReport> {
    check_level(level)?;
    same_length(lx, sx)?;
    let rule = |s: usize, t: usize| (t >= 1).then(|| 1u64 << (level - s - t + 1));
    Ok(Scan::new(lx, sx, level, rule).run())
}

/// Generator-level conditions for transversal `R_ℓ` up to a level `ℓ − 1`
/// correction: stabilizer subsets of at most `ℓ` rows, and mixed subsets
/// with `s, t ≥ 1` and `s + t ≤ ℓ`, have even overlap.
pub fn quasi_conditions(lx: &BitMatrix, sx: &BitMatrix, level: usize) -> Result<ConditionReport> {
    check_level(level)?;
    same_length(lx, sx)?;
    let rule = |_s: usize, t: usize| (t >= 1).then_some(2u64);
    Ok(Scan::new(lx, sx, level, rule).run())
}

fn same_length(lx: &BitMatrix, sx: &BitMatrix) -> Result<()> {
    if lx.ncols() != sx.ncols() {
        return Err(Error::Dimension(format!(
            "logical rows have length {} and stabilizer rows {}",
            lx.ncols(),
            sx.ncols()
        )));
    }
    Ok(())
}

pub fn check_exact_transversality(code: &CssCode, basis: &LogicalBasis, level: usize) -> Result<ConditionReport> {
    exact_conditions(&basis.lx, code.sx(), level)
}

pub fn check_quasi_transversality(code: &CssCode, basis: &LogicalBasis, level: usize) -> Result<ConditionReport> {
    quasi_conditions(&basis.lx, code.sx(), level)
}

/// Every pair of logical rows, equal or not, meets every stabilizer row
/// on an even number of positions.
pub fn two_logical_condition(lx: &BitMatrix, sx: &BitMatrix) -> Result<ConditionReport> {
    same_length(lx, sx)?;
    let mut witnesses = Vec::new();
    let mut failed = false;
    'outer: for j in 0..lx.nrows() {
        for k in j..lx.nrows() {
            let mut pair = lx.row(j).clone();
            pair.and_assign(lx.row(k));
            for (g, row) in sx.rows().iter().enumerate() {
                let weight = pair.and_weight(row);
                if weight % 2 == 1 {
                    failed = true;
                    let logicals = if j == k { vec![j] } else { vec![j, k] };
                    witnesses.push(Violation {
                        logicals,
                        stabilizers: vec![g],
                        weight,
                        modulus: 2,
                    });
                    if witnesses.len() == MAX_WITNESSES {
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(ConditionReport {
        passed: !failed,
        witnesses,
    })
}

pub fn check_two_logical_condition(code: &CssCode, basis: &LogicalBasis) -> Result<ConditionReport> {
    two_logical_condition(&basis.lx, code.sx())
}

/// Generator-level verdicts, with the exhaustive check when it is small
/// enough.
pub fn transversality_report(code: &CssCode, basis: &LogicalBasis, level: usize) -> Result<TransversalityReport> {
    let exact = check_exact_transversality(code, basis, level)?;
    let quasi = check_quasi_transversality(code, basis, level)?;
    let exhaustive = if basis.k() + code.sx().rank() <= EXHAUSTIVE_LIMIT {
        Some(exhaustive_transversality(&basis.lx, code.sx(), level)?)
    } else {
        None
    };
    Ok(TransversalityReport {
        level,
        exact,
        quasi,
        exhaustive,
    })
}

/// Literal check over every logical and every stabilizer.
///
/// Tabulates `h(x, y) = |xL ⊕ yG| − |xL| mod 2^ℓ` over all `x` and all `y`,
/// with `G` an independent subset of the rows of `sx`, and expands `h` in
/// monomials. Transversal `R_ℓ` needs no correction iff `h` vanishes, and
/// needs a level `ℓ − 1` correction iff `h` is twice a properly weighted
/// polynomial, that is iff the coefficient of every degree-`m` monomial is
/// a multiple of `2^min(m, ℓ)`.
pub fn exhaustive_transversality(lx: &BitMatrix, sx: &BitMatrix, level: usize) -> Result<ExhaustiveReport> {
    check_level(level)?;
    same_length(lx, sx)?;
    let mut echelon = EchelonBasis::new(sx.ncols());
    let independent: Vec<usize> = (0..sx.nrows()).filter(|&i| echelon.insert(sx.row(i).clone())).collect();
    let k = lx.nrows();
    let r = independent.len();
    if k + r > EXHAUSTIVE_LIMIT {
        return Err(Error::Precondition(format!(
            "k + r = {} exceeds the exhaustive limit of {EXHAUSTIVE_LIMIT}",
            k + r
        )));
    }
    let g = sx.select_rows(&independent);
    let mask = (1u64 << level) - 1;
    let mut h = vec![0u64; 1 << (k + r)];
    let gray = |i: u64| i ^ (i >> 1);
    let mut vy = BitVector::zeros(lx.ncols());
    for yi in 0..1u64 << r {
        if yi > 0 {
            vy.xor_assign(g.row(yi.trailing_zeros() as usize));
        }
        let y = gray(yi);
        let mut vx = BitVector::zeros(lx.ncols());
        for xi in 0..1u64 << k {
            if xi > 0 {
                vx.xor_assign(lx.row(xi.trailing_zeros() as usize));
            }
            let x = gray(xi);
            let both = vx.weight() + vy.weight() - 2 * vx.and_weight(&vy);
            h[(x | (y << k)) as usize] = (both as u64).wrapping_sub(vx.weight() as u64) & mask;
        }
    }
    for bit in 0..k + r {
        let b = 1usize << bit;
        for m in 0..h.len() {
            if m & b != 0 {
                h[m] = h[m].wrapping_sub(h[m ^ b]) & mask;
            }
        }
    }
    let monomial = |m: usize| Monomial {
        logicals: (0..k).filter(|&i| m >> i & 1 == 1).collect(),
        stabilizers: (0..r).filter(|&j| m >> (k + j) & 1 == 1).map(|j| independent[j]).collect(),
        coefficient: h[m],
    };
    // Lowest degree first, for readable witnesses.
    let mut order: Vec<usize> = (1..h.len()).collect();
    order.sort_by_key(|&m| (m.count_ones(), m));
    let exact_witness = order.iter().copied().find(|&m| h[m] != 0).map(monomial);
    let quasi_witness = order
        .iter()
        .copied()
        .find(|&m| {
            let need = (m.count_ones() as usize).min(level);
            h[m] % (1u64 << need) != 0
        })
        .map(monomial);
    Ok(ExhaustiveReport {
        exact: exact_witness.is_none(),
        quasi: quasi_witness.is_none(),
        exact_witness,
        quasi_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_strs(rows).unwrap()
    }

    fn steane() -> (BitMatrix, BitMatrix) {
        (m(&["1111111"]), m(&["1111000", "1100110", "1010101"]))
    }

    #[test]
    fn small_multi_even_cases() {
        assert!(is_multi_even(&m(&["11111111"]), 3).unwrap().passed);
        let six = is_multi_even(&m(&["11111100"]), 3).unwrap();
        assert!(!six.passed);
        assert_eq!(six.witnesses[0].weight, 6);
        assert_eq!(six.witnesses[0].modulus, 8);
        assert!(is_multi_even(&BitMatrix::new(5), 3).unwrap().passed);
        assert!(is_multi_even(&m(&["1"]), 0).is_err());
    }

    #[test]
    fn overlap_of_one_is_not_orthogonal() {
        let r = is_multi_orthogonal(&m(&["110", "011"]), 2).unwrap();
        assert!(!r.passed);
        assert_eq!(r.witnesses[0].stabilizers, vec![0, 1]);
        assert_eq!(r.witnesses[0].weight, 1);
    }

    #[test]
    fn steane_levels() {
        let (l, g) = steane();
        for level in 1..=2 {
            assert!(exact_conditions(&l, &g, level).unwrap().passed);
            assert!(exhaustive_transversality(&l, &g, level).unwrap().exact);
        }
        let three = exact_conditions(&l, &g, 3).unwrap();
        assert!(!three.passed);
        assert!(!exhaustive_transversality(&l, &g, 3).unwrap().exact);
        assert!(!quasi_conditions(&l, &g, 3).unwrap().passed);
        assert!(!exhaustive_transversality(&l, &g, 3).unwrap().quasi);
    }

    #[test]
    fn exhaustive_ignores_dependent_rows() {
        let (l, g) = steane();
        let mut doubled = g.clone();
        doubled.push_row(g.row(0).clone()).unwrap();
        doubled.push_row(g.row(0) ^ g.row(1)).unwrap();
        for level in 1..=3 {
            assert_eq!(
                exhaustive_transversality(&l, &g, level).unwrap().exact,
                exhaustive_transversality(&l, &doubled, level).unwrap().exact
            );
        }
    }

    #[test]
    fn triorthogonal_allows_odd_rows() {
        assert!(is_triorthogonal(&BitMatrix::identity(4)).unwrap().passed);
        assert!(!is_triorthogonal(&m(&["110", "011"])).unwrap().passed);
    }

    #[test]
    fn two_logicals() {
        let l = m(&["1100", "0110"]);
        let g = m(&["0111"]);
        let r = two_logical_condition(&l, &g).unwrap();
        assert!(!r.passed);
        assert_eq!(r.witnesses[0].logicals, vec![0]);
        assert!(r.witnesses.iter().any(|w| w.logicals == vec![0, 1]));
        assert!(two_logical_condition(&BitMatrix::new(4), &g).unwrap().passed);
    }
}
