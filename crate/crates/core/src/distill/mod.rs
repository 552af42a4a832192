//! Puncturing triorthogonal spaces into T-distillation codes, the
//! distillation exponent, and codes whose transversal T acts as a circuit
//! of CCZ gates.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::csscode::{check_relation, distance, independent_modulo, logical_below, CssCode, DistanceOptions, DistanceResult};
use crate::error::{Error, Result};
use crate::f2la::{BitMatrix, EchelonBasis};
use crate::relation::PinCodeRelation;
use crate::transversal::{is_triorthogonal, quasi_conditions, MAX_LEVEL};

/// A triorthogonal matrix brought to the form
///
/// ```text
///   [ 1  G1 ]
///   [ 0  G0 ]
/// ```
///
/// with the identity on the punctured columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriorthoSplit {
    /// Original indices of the identity columns, which are removed.
    pub punctured: Vec<usize>,
    /// Original indices of the remaining columns, in order.
    pub kept: Vec<usize>,
    /// X-logicals on the kept columns.
    pub g1: BitMatrix,
    /// X-stabilizer generators on the kept columns.
    pub g0: BitMatrix,
}

impl TriorthoSplit {
    pub fn k(&self) -> usize {
        self.g1.nrows()
    }

    /// The punctured code: `G0` as X-stabilizers, `G1` as X-logicals and
    /// the dual of both as Z-stabilizers.
    pub fn code(&self) -> Result<CssCode> {
        let sz = self.g0.vstack(&self.g1)?.nullspace_basis();
        CssCode::with_logicals(self.g0.clone(), sz, self.g1.clone())
    }
}

fn require_triorthogonal(g: &BitMatrix) -> Result<()> {
    let report = is_triorthogonal(g)?;
    match report.witnesses.first() {
        None => Ok(()),
        Some(w) => Err(Error::Precondition(format!(
            "rows {:?} overlap on {} positions, so the span is not triorthogonal",
            w.stabilizers, w.weight
        ))),
    }
}

/// Split with the identity on the leftmost pivot columns, so that every
/// independent row becomes a logical.
pub fn triortho_split(g: &BitMatrix) -> Result<TriorthoSplit> {
    require_triorthogonal(g)?;
    let all: Vec<usize> = (0..g.ncols()).collect();
    split_unchecked(g, &all)
}

/// Split with the identity on `columns`, which must be independent
/// columns of `g`.
pub fn triortho_split_at(g: &BitMatrix, columns: &[usize]) -> Result<TriorthoSplit> {
    if let Some(&c) = columns.iter().find(|&&c| c >= g.ncols()) {
        return Err(Error::Dimension(format!("column {c} is out of range")));
    }
    require_triorthogonal(g)?;
    let split = split_unchecked(g, columns)?;
    if split.punctured.len() != columns.len() {
        return Err(Error::InvalidParameters(format!(
            "the {} requested columns have rank {}",
            columns.len(),
            split.punctured.len()
        )));
    }
    Ok(split)
}

fn split_unchecked(g: &BitMatrix, columns: &[usize]) -> Result<TriorthoSplit> {
    let form = g.standard_form_on(columns);
    let mut g0 = BitMatrix::new(form.g0.ncols());
    for row in form.g0.rows().iter().filter(|r| !r.is_zero()) {
        if row.weight() % 2 == 1 {
            return Err(Error::Precondition(
                "a stabilizer left after puncturing has odd weight".into(),
            ));
        }
        g0.push_row(row.clone())?;
    }
    Ok(TriorthoSplit {
        punctured: form.pivot_columns().to_vec(),
        kept: form.remaining_columns().to_vec(),
        g1: form.g1,
        g0,
    })
}

/// `ln(n / k) / ln(d)`.
pub fn gamma(n: usize, k: usize, d: usize) -> Result<f64> {
    if k == 0 || n <= k || d < 2 {
        return Err(Error::InvalidParameters(format!(
            "gamma needs n > k >= 1 and d >= 2, got n={n} k={k} d={d}"
        )));
    }
    Ok((n as f64 / k as f64).ln() / (d as f64).ln())
}

/// Parameters of [`puncture_search`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PunctureOptions {
    pub target_k: usize,
    pub target_d: usize,
    /// Number of random column sets drawn.
    pub budget: u64,
    pub seed: u64,
    /// Candidates whose distance is computed in full.
    pub shortlist: usize,
    /// Support enumeration cap for every distance computation.
    pub support_cap: u128,
}

impl PunctureOptions {
    pub fn new(target_k: usize, target_d: usize, budget: u64, seed: u64) -> Self {
        Self {
            target_k,
            target_d,
            budget,
            seed,
            shortlist: 16,
            support_cap: 200_000_000,
        }
    }
}

/// One punctured code.
#[derive(Clone, Debug)]
pub struct PunctureResult {
    pub punctured_columns: Vec<usize>,
    pub code: CssCode,
    pub n: usize,
    pub k: usize,
    /// Absent for the unpunctured split, which has no logicals.
    pub distance: Option<DistanceResult>,
    pub gamma: Option<f64>,
    /// Random stream that produced the column set.
    pub stream: Option<u64>,
}

/// Random puncturing of a triorthogonal span.
///
/// Draw `budget` column sets of size between `target_k` and
/// `target_k + max(4, target_k / 2)`, each from its own random stream.
/// Dependent columns are swapped for random independent ones. Sets whose
/// code has a logical below `target_d` are discarded by exhaustive search;
/// the `shortlist` survivors with the most logicals per qubit get their
/// full distance, exact when the enumeration fits under the cap and
/// otherwise a bound. Results are sorted by `γ`, then `n`.
///
/// A zero budget returns the unpunctured split alone.
pub fn puncture_search(g: &BitMatrix, options: &PunctureOptions) -> Result<Vec<PunctureResult>> {
    require_triorthogonal(g)?;
    let g = g.row_basis();
    if options.budget == 0 {
        let split = split_unchecked(&g, &[])?;
        let code = split.code()?;
        return Ok(vec![PunctureResult {
            punctured_columns: Vec::new(),
            n: code.n(),
            k: 0,
            code,
            distance: None,
            gamma: None,
            stream: None,
        }]);
    }
    let rank = g.nrows();
    let lo = options.target_k.max(1);
    let hi = (options.target_k + (options.target_k / 2).max(4)).min(rank);
    if lo > hi {
        return Ok(Vec::new());
    }
    let columns = g.transpose();
    let survivors: Vec<(u64, Vec<usize>, usize)> = (0..options.budget)
        .into_par_iter()
        .filter_map(|stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            rng.set_stream(stream);
            let size = lo + (stream as usize) % (hi - lo + 1);
            let set = draw_columns(&columns, size, &mut rng)?;
            let split = split_unchecked(&g, &set).ok()?;
            let code = split.code().ok()?;
            match logical_below(&code, options.target_d, options.support_cap) {
                Ok(None) => Some((stream, split.punctured, code.n())),
                _ => None,
            }
        })
        .collect();

    let mut seen = HashSet::new();
    let mut unique = Vec::new();
    for (stream, mut set, n) in survivors {
        set.sort_unstable();
        if seen.insert(set.clone()) {
            unique.push((stream, set, n));
        }
    }
    // Most logicals per qubit first.
    unique.sort_by(|a, b| {
        let (ka, kb) = (a.1.len() * b.2, b.1.len() * a.2);
        kb.cmp(&ka).then(a.2.cmp(&b.2)).then(a.0.cmp(&b.0))
    });
    unique.truncate(options.shortlist);

    let mut results: Vec<PunctureResult> = unique
        .into_iter()
        .filter_map(|(stream, set, _)| finish(&g, set, stream, options))
        .collect();
    results.sort_by(|a, b| {
        let ga = a.gamma.unwrap_or(f64::INFINITY);
        let gb = b.gamma.unwrap_or(f64::INFINITY);
        ga.total_cmp(&gb)
            .then(a.n.cmp(&b.n))
            .then(a.punctured_columns.cmp(&b.punctured_columns))
    });
    Ok(results)
}

/// Independent columns: a uniform random `size`-subset with dependent
/// members swapped for random columns that raise the rank.
fn draw_columns(columns: &BitMatrix, size: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let n = columns.nrows();
    let mut basis = EchelonBasis::new(columns.ncols());
    let mut chosen = Vec::with_capacity(size);
    let mut taken = vec![false; n];
    for c in sample(rng, n, size) {
        taken[c] = true;
        if basis.insert(columns.row(c).clone()) {
            chosen.push(c);
        }
    }
    if chosen.len() < size {
        let mut rest: Vec<usize> = (0..n).filter(|&c| !taken[c]).collect();
        rest.shuffle(rng);
        for c in rest {
            if chosen.len() == size {
                break;
            }
            if basis.insert(columns.row(c).clone()) {
                chosen.push(c);
            }
        }
    }
    (chosen.len() == size).then_some(chosen)
}

fn finish(g: &BitMatrix, set: Vec<usize>, stream: u64, options: &PunctureOptions) -> Option<PunctureResult> {
    let split = split_unchecked(g, &set).ok()?;
    if !quasi_conditions(&split.g1, &split.g0, 3).ok()?.passed {
        return None;
    }
    let code = split.code().ok()?;
    let exact = DistanceOptions {
        support_cap: options.support_cap,
        ..DistanceOptions::exact()
    };
    let d = match distance(&code, &exact) {
        Ok(d) => d,
        Err(Error::DistanceRefused(_)) => {
            let mut bound = distance(&code, &DistanceOptions::bound(64, options.seed ^ stream)).ok()?;
            // The certificate already rules out anything lighter.
            bound.distance = bound.distance.max(options.target_d);
            bound
        }
        Err(_) => return None,
    };
    if d.distance < options.target_d || code.k() < options.target_k {
        return None;
    }
    Some(PunctureResult {
        punctured_columns: set,
        n: code.n(),
        k: code.k(),
        gamma: gamma(code.n(), code.k(), d.distance).ok(),
        distance: Some(d),
        code,
        stream: Some(stream),
    })
}

/// `x = (D + 1) / ℓ`, the pin count for which the construction of
/// [`ccz_code`] reaches level `ℓ`.
pub fn x_for_level(d: usize, level: usize) -> Result<usize> {
    if level == 0 {
        return Err(Error::InvalidParameters("level must be at least 1".into()));
    }
    if (d + 1) % level == 0 {
        return Ok((d + 1) / level);
    }
    let below = (d + 1) / level * level;
    let above = below + level;
    let nearest = if below >= 2 {
        format!("D = {} or D = {}", below - 1, above - 1)
    } else {
        format!("D = {}", above - 1)
    };
    Err(Error::InvalidParameters(format!(
        "D + 1 = {} is not a multiple of {level}; nearest valid: {nearest}",
        d + 1
    )))
}

/// X-stabilizers from the `(x − 1)`-pinned sets and X-logicals from the
/// first `x`-pinned sets independent of them, in enumeration order.
///
/// When `x` divides `D + 1` the code must pass the quasi-transversality
/// conditions at level `(D + 1) / x`.
pub fn ccz_code(rel: &PinCodeRelation, x: usize) -> Result<CssCode> {
    if x == 0 || x > rel.d() {
        return Err(Error::InvalidParameters(format!(
            "x must be between 1 and D = {}, got {x}",
            rel.d()
        )));
    }
    check_relation(rel)?;
    let (sx, provenance) = rel.stabilizer_matrix(x - 1);
    let (candidates, _) = rel.stabilizer_matrix(x);
    let lx = independent_modulo(&sx, &candidates);
    let sz = sx.vstack(&lx)?.nullspace_basis();
    let mut code = CssCode::with_logicals(sx, sz, lx)?;
    code.x_provenance = provenance;
    if (rel.d() + 1) % x == 0 && (rel.d() + 1) / x <= MAX_LEVEL {
        let level = (rel.d() + 1) / x;
        let report = quasi_conditions(code.imposed_lx().expect("imposed"), code.sx(), level)?;
        if let Some(w) = report.witnesses.first() {
            return Err(Error::Precondition(format!(
                "the construction breaks quasi-transversality at level {level}: {w}"
            )));
        }
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{complete_relation, rm_generator_matrix};

    #[test]
    fn identity_splits_into_logicals() {
        let split = triortho_split(&BitMatrix::identity(5)).unwrap();
        assert_eq!(split.k(), 5);
        assert_eq!(split.g0.nrows(), 0);
        assert!(split.kept.is_empty());
    }

    #[test]
    fn rejects_odd_pair() {
        let g = BitMatrix::from_strs(&["110", "011"]).unwrap();
        assert!(matches!(triortho_split(&g), Err(Error::Precondition(_))));
    }

    #[test]
    fn split_rank_bookkeeping() {
        let g = rm_generator_matrix(2, 7).unwrap();
        let split = triortho_split_at(&g, &[0, 1, 2, 4, 8]).unwrap();
        assert_eq!(split.k(), 5);
        assert_eq!(split.g0.rank(), g.rank() - 5);
        let code = split.code().unwrap();
        assert_eq!((code.n(), code.k()), (123, 5));
        // A degree-2 polynomial sums to zero over any 3-flat.
        let flat: Vec<usize> = (0..8).collect();
        assert!(triortho_split_at(&g, &flat).is_err());
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(116, 12, 4).unwrap() - 1.6365).abs() < 1e-3);
        assert_eq!(gamma(10, 5, 2).unwrap(), 1.0);
        assert!(gamma(5, 5, 2).is_err());
        assert!(gamma(10, 2, 1).is_err());
    }

    #[test]
    fn level_choice() {
        assert_eq!(x_for_level(5, 3).unwrap(), 2);
        assert_eq!(x_for_level(8, 3).unwrap(), 3);
        let err = x_for_level(6, 3).unwrap_err().to_string();
        assert!(err.contains("D = 5 or D = 8"), "{err}");
    }

    #[test]
    fn small_ccz_code() {
        let code = ccz_code(&complete_relation(&[2; 6]).unwrap(), 2).unwrap();
        assert_eq!((code.n(), code.k()), (64, 15));
    }
}
