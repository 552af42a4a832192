//! Minimum distance: exact enumeration and randomized upper bounds.
//!
//! A Z-logical is a vector `v` with `Sx · v = 0` and `Lx · v ≠ 0`; the
//! X side swaps the roles. Exact mode walks the cosets `Lz + span(Sz)` in
//! Gray-code order when `k + rank` is small, and otherwise enumerates
//! supports by increasing weight with a syndrome lookup for the last
//! position. Bound mode runs an information-set search.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{binomial, logical_basis, CssCode};
use crate::error::{Error, Result};
use crate::f2la::{BitMatrix, BitVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DistanceMode {
    Exact,
    Bound,
}

impl std::str::FromStr for DistanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(DistanceMode::Exact),
            "bound" => Ok(DistanceMode::Bound),
            other => Err(Error::InvalidParameters(format!("unknown distance mode {other:?}"))),
        }
    }
}

/// Which logical operators a witness belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Species {
    X,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceOptions {
    pub mode: DistanceMode,
    /// Information-set iterations per species in bound mode.
    pub budget: u64,
    pub seed: u64,
    /// Gray-code enumeration runs when `k + rank` is at most this.
    pub gray_cap: usize,
    /// Largest number of partial supports the weight enumeration may visit.
    pub support_cap: u128,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            mode: DistanceMode::Exact,
            budget: 1000,
            seed: 0,
            gray_cap: 28,
            support_cap: 2_000_000_000,
        }
    }
}

impl DistanceOptions {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn bound(budget: u64, seed: u64) -> Self {
        Self {
            mode: DistanceMode::Bound,
            budget,
            seed,
            ..Self::default()
        }
    }
}

/// Distance or upper bound with a logical operator of that weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    pub distance: usize,
    /// False when `distance` is only an upper bound.
    pub exact: bool,
    pub species: Species,
    pub witness: BitVector,
    /// Per-species values; `None` when exact mode stopped early because
    /// that species cannot go below `distance`.
    pub x_distance: Option<usize>,
    pub z_distance: Option<usize>,
}

impl std::fmt::Display for DistanceResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exact {
            write!(f, "d={}", self.distance)
        } else {
            write!(f, "d<={}", self.distance)
        }
    }
}

/// Minimum weight of an X- or Z-logical operator.
///
/// Exact mode refuses when neither enumeration fits its cap.
pub fn distance(code: &CssCode, options: &DistanceOptions) -> Result<DistanceResult> {
    let (x_side, z_side) = sides(code)?;
    let (x, z) = match options.mode {
        DistanceMode::Exact => {
            let [x, z] = exact_pair([&x_side, &z_side], options, usize::MAX)?;
            (x, z)
        }
        DistanceMode::Bound => (
            Some(x_side.bound(options.budget, options.seed, 0)),
            Some(z_side.bound(options.budget, options.seed, 1)),
        ),
    };
    Ok(summarize(x, z, options.mode == DistanceMode::Exact).expect("some species is determined"))
}

fn sides(code: &CssCode) -> Result<(Side, Side)> {
    let basis = logical_basis(code);
    if basis.k() == 0 {
        return Err(Error::Precondition("the code encodes no logical qubits".into()));
    }
    // Z-logicals commute with Sx and anticommute with some X-logical.
    let z_side = Side {
        checks: code.sx().row_basis(),
        detect: basis.lx.clone(),
        stabilizers: code.sz().row_basis(),
        logicals: basis.lz.clone(),
    };
    let x_side = Side {
        checks: code.sz().row_basis(),
        detect: basis.lz,
        stabilizers: code.sx().row_basis(),
        logicals: basis.lx,
    };
    Ok((x_side, z_side))
}

fn summarize(x: Option<BitVector>, z: Option<BitVector>, exact: bool) -> Option<DistanceResult> {
    let (species, witness) = match (&x, &z) {
        (Some(xv), Some(zv)) if zv.weight() < xv.weight() => (Species::Z, zv.clone()),
        (Some(xv), _) => (Species::X, xv.clone()),
        (None, Some(zv)) => (Species::Z, zv.clone()),
        (None, None) => return None,
    };
    Some(DistanceResult {
        distance: witness.weight(),
        exact,
        species,
        witness,
        x_distance: x.map(|v| v.weight()),
        z_distance: z.map(|v| v.weight()),
    })
}

/// A logical operator of weight below `limit`, if any.
///
/// Enumerates supports of both species up to weight `limit − 1`, so the
/// absence of a result certifies a distance of at least `limit`.
pub fn logical_below(code: &CssCode, limit: usize, support_cap: u128) -> Result<Option<DistanceResult>> {
    let options = DistanceOptions {
        gray_cap: 0,
        support_cap,
        ..DistanceOptions::exact()
    };
    let (x_side, z_side) = sides(code)?;
    let [x, z] = exact_pair([&x_side, &z_side], &options, limit)?;
    Ok(summarize(x, z, true))
}

/// Exact minima for both species, skipping work that cannot lower the
/// overall minimum.
///
/// Species small enough for Gray-code enumeration are solved outright.
/// The others enumerate supports by weight in lockstep and stop at the
/// first weight that reaches the best value known so far.
fn exact_pair(sides: [&Side; 2], options: &DistanceOptions, limit: usize) -> Result<[Option<BitVector>; 2]> {
    let mut found: [Option<BitVector>; 2] = [None, None];
    let mut searches: [Option<SupportSearch>; 2] = [None, None];
    for (i, side) in sides.iter().enumerate() {
        if side.logicals.nrows() + side.stabilizers.nrows() <= options.gray_cap {
            found[i] = Some(side.gray_minimum());
        } else {
            searches[i] = Some(SupportSearch::new(side));
        }
    }
    let mut best = found.iter().flatten().map(|v| v.weight()).min().unwrap_or(usize::MAX).min(limit);
    let n = sides[0].checks.ncols();
    for w in 1..=n {
        if w >= best || searches.iter().all(Option::is_none) {
            break;
        }
        for i in 0..2 {
            let Some(search) = searches[i].as_mut() else {
                continue;
            };
            if let Some(v) = search.weight(w, options.support_cap)? {
                debug_assert!(sides[i].is_logical(&v));
                best = best.min(w);
                found[i] = Some(v);
                searches[i] = None;
            }
        }
    }
    Ok(found)
}

struct Side {
    checks: BitMatrix,
    detect: BitMatrix,
    stabilizers: BitMatrix,
    logicals: BitMatrix,
}

impl Side {
    fn is_logical(&self, v: &BitVector) -> bool {
        self.checks.rows().iter().all(|r| !r.dot(v)) && self.detect.rows().iter().any(|r| r.dot(v))
    }

    /// Minimum over `a·L + b·S` with `a ≠ 0`, walking `b` in Gray order.
    fn gray_minimum(&self) -> BitVector {
        let k = self.logicals.nrows();
        let r = self.stabilizers.nrows();
        let best = (1u64..1u64 << k)
            .into_par_iter()
            .map(|a| {
                let coefficients = BitVector::from_indices(k, (0..k).filter(|&i| (a >> i) & 1 == 1));
                let mut cur = self.logicals.combine_rows(&coefficients);
                let mut best = (cur.weight(), 0u64);
                let mut gray = 0u64;
                for step in 1u64..1u64 << r {
                    let bit = step.trailing_zeros() as usize;
                    cur.xor_assign(self.stabilizers.row(bit));
                    gray ^= 1 << bit;
                    let w = cur.weight();
                    if w < best.0 {
                        best = (w, gray);
                    }
                }
                (best.0, a, best.1)
            })
            .min()
            .expect("k >= 1");
        let (_, a, b) = best;
        let mut v = self
            .logicals
            .combine_rows(&BitVector::from_indices(k, (0..k).filter(|&i| (a >> i) & 1 == 1)));
        v.xor_assign(
            &self
                .stabilizers
                .combine_rows(&BitVector::from_indices(r, (0..r).filter(|&i| (b >> i) & 1 == 1))),
        );
        v
    }

    /// Information-set search: random column orders, reduced kernel bases,
    /// single rows and pairs of rows.
    fn bound(&self, budget: u64, seed: u64, side: u64) -> BitVector {
        let n = self.checks.ncols();
        let kernel = self.checks.nullspace_basis();
        let candidates: Vec<(usize, u64, BitVector)> = (0..budget.max(1))
            .into_par_iter()
            .filter_map(|iteration| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream((side << 62) | iteration);
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut rng);
                let (reduced, pivots) = kernel.rref_in_order(&order);
                let rows = &reduced.rows()[..pivots.len()];
                let mut best: Option<BitVector> = None;
                let mut consider = |v: BitVector| {
                    if best.as_ref().is_none_or(|b| v.weight() < b.weight()) && self.is_logical(&v) {
                        best = Some(v);
                    }
                };
                for (i, a) in rows.iter().enumerate() {
                    consider(a.clone());
                    for b in &rows[i + 1..] {
                        consider(a ^ b);
                    }
                }
                best.map(|v| (v.weight(), iteration, v))
            })
            .collect();
        candidates
            .into_iter()
            .min_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)))
            .map(|(_, _, v)| v)
            .unwrap_or_else(|| self.logicals.row(0).clone())
    }
}

/// Logicals by increasing support size.
///
/// For weight `w` every `(w − 1)`-subset is visited; the last position
/// must be a larger column whose check syndrome cancels the partial one
/// while its detector syndrome differs.
struct SupportSearch {
    ct: BitMatrix,
    dt: BitMatrix,
    buckets: HashMap<BitVector, Vec<usize>>,
    spent: u128,
}

impl SupportSearch {
    fn new(side: &Side) -> Self {
        let ct = side.checks.transpose();
        let dt = side.detect.transpose();
        let mut buckets: HashMap<BitVector, Vec<usize>> = HashMap::new();
        for c in 0..ct.nrows() {
            buckets.entry(ct.row(c).clone()).or_default().push(c);
        }
        Self {
            ct,
            dt,
            buckets,
            spent: 0,
        }
    }

    /// A logical of weight exactly `w`, if any; weights below `w` must
    /// already have been searched.
    fn weight(&mut self, w: usize, cap: u128) -> Result<Option<BitVector>> {
        let n = self.ct.nrows();
        self.spent = self.spent.saturating_add(binomial(n, w - 1));
        if self.spent > cap {
            return Err(Error::DistanceRefused(format!(
                "no logical of weight below {w} and enumerating weight {w} exceeds the cap of {cap} supports"
            )));
        }
        let search = Search {
            ct: &self.ct,
            dt: &self.dt,
            buckets: &self.buckets,
            target: w - 1,
        };
        let found = if w == 1 {
            search.complete(&[], &BitVector::zeros(self.ct.ncols()), &BitVector::zeros(self.dt.ncols()), None)
        } else {
            (0..n).into_par_iter().find_map_first(|first| {
                let mut chosen = vec![first];
                search.extend(&mut chosen, self.ct.row(first).clone(), self.dt.row(first).clone())
            })
        };
        Ok(found.map(|support| BitVector::from_indices(n, support)))
    }
}

struct Search<'a> {
    ct: &'a BitMatrix,
    dt: &'a BitMatrix,
    buckets: &'a HashMap<BitVector, Vec<usize>>,
    target: usize,
}

impl Search<'_> {
    fn extend(&self, chosen: &mut Vec<usize>, syn: BitVector, det: BitVector) -> Option<Vec<usize>> {
        if chosen.len() == self.target {
            return self.complete(chosen, &syn, &det, chosen.last().copied());
        }
        let last = *chosen.last().expect("nonempty");
        let n = self.ct.nrows();
        let remaining = self.target - chosen.len();
        for c in last + 1..n.saturating_sub(remaining) + 1 {
            if c >= n {
                break;
            }
            chosen.push(c);
            let found = self.extend(chosen, &syn ^ self.ct.row(c), &det ^ self.dt.row(c));
            chosen.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn complete(&self, chosen: &[usize], syn: &BitVector, det: &BitVector, last: Option<usize>) -> Option<Vec<usize>> {
        let bucket = self.buckets.get(syn)?;
        let start = last.map_or(0, |l| l + 1);
        bucket
            .iter()
            .copied()
            .find(|&c| c >= start && self.dt.row(c) != det)
            .map(|c| {
                let mut support = chosen.to_vec();
                support.push(c);
                support
            })
    }
}
