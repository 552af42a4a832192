//! CSS and gauge codes built from pin-code relations.

mod distance;

pub use distance::{distance, logical_below, DistanceMode, DistanceOptions, DistanceResult, Species};

use crate::error::{Error, Result};
use crate::f2la::{BitMatrix, BitVector, EchelonBasis};
use crate::relation::{PinCodeRelation, PinCollection};

/// A CSS code given by X and Z stabilizer generators on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    sx: BitMatrix,
    sz: BitMatrix,
    /// Pin collection behind each X generator, when built from a relation.
    pub x_provenance: Vec<PinCollection>,
    pub z_provenance: Vec<PinCollection>,
    /// X-logical operators fixed at construction, if any.
    imposed_lx: Option<BitMatrix>,
}

/// Paired logical bases with `Lx · Lzᵀ = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalBasis {
    pub lx: BitMatrix,
    pub lz: BitMatrix,
}

impl LogicalBasis {
    pub fn k(&self) -> usize {
        self.lx.nrows()
    }
}

impl CssCode {
    /// Checks that every X generator commutes with every Z generator.
    pub fn new(sx: BitMatrix, sz: BitMatrix) -> Result<Self> {
        if sx.ncols() != sz.ncols() {
            return Err(Error::Dimension(format!(
                "X generators act on {} qubits, Z generators on {}",
                sx.ncols(),
                sz.ncols()
            )));
        }
        if let Some((i, j)) = first_anticommuting(&sx, &sz) {
            return Err(Error::Precondition(format!(
                "X generator {i} anticommutes with Z generator {j}"
            )));
        }
        Ok(Self {
            sx,
            sz,
            x_provenance: Vec::new(),
            z_provenance: Vec::new(),
            imposed_lx: None,
        })
    }

    /// Like [`new`](Self::new) with X-logicals fixed in advance.
    ///
    /// `lx` rows must commute with `sz` and be independent modulo `sx`.
    pub fn with_logicals(sx: BitMatrix, sz: BitMatrix, lx: BitMatrix) -> Result<Self> {
        let mut code = Self::new(sx, sz)?;
        if lx.ncols() != code.n() {
            return Err(Error::Dimension("logical rows have the wrong length".into()));
        }
        if let Some((i, j)) = first_anticommuting(&lx, &code.sz) {
            return Err(Error::Precondition(format!(
                "X-logical {i} anticommutes with Z generator {j}"
            )));
        }
        let mut basis = EchelonBasis::from_matrix(&code.sx);
        for (i, row) in lx.rows().iter().enumerate() {
            if !basis.insert(row.clone()) {
                return Err(Error::Precondition(format!("X-logical {i} is dependent on the others")));
            }
        }
        if lx.nrows() != code.k() {
            return Err(Error::Precondition(format!(
                "{} X-logicals given for a code with k = {}",
                lx.nrows(),
                code.k()
            )));
        }
        code.imposed_lx = Some(lx);
        Ok(code)
    }

    pub fn n(&self) -> usize {
        self.sx.ncols()
    }

    pub fn sx(&self) -> &BitMatrix {
        &self.sx
    }

    pub fn sz(&self) -> &BitMatrix {
        &self.sz
    }

    pub fn imposed_lx(&self) -> Option<&BitMatrix> {
        self.imposed_lx.as_ref()
    }

    /// `n − rank(Sx) − rank(Sz)`.
    pub fn k(&self) -> usize {
        compute_k(self)
    }
}

fn first_anticommuting(a: &BitMatrix, b: &BitMatrix) -> Option<(usize, usize)> {
    for (i, r) in a.rows().iter().enumerate() {
        for (j, s) in b.rows().iter().enumerate() {
            if r.dot(s) {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn compute_k(code: &CssCode) -> usize {
    code.n() - code.sx.rank() - code.sz.rank()
}

pub(crate) fn check_relation(rel: &PinCodeRelation) -> Result<()> {
    let report = rel.validate(false);
    if report.passed {
        Ok(())
    } else {
        let (c, w) = &report.witnesses[0];
        Err(Error::NotPinCodeRelation(format!(
            "{} odd D-pinned sets, first {c} of size {w}",
            report.witnesses.len()
        )))
    }
}

/// The (x, z)-pin code of a relation.
///
/// X generators are the x-pinned sets and Z generators the z-pinned sets
/// whose collections hold a non-free pin. `x = 0` or `z = 0` gives a single
/// all-qubit generator.
pub fn build_pin_code(rel: &PinCodeRelation, x: usize, z: usize) -> Result<CssCode> {
    if x + z > rel.d() {
        return Err(Error::InvalidParameters(format!(
            "x + z = {} exceeds D = {}",
            x + z,
            rel.d()
        )));
    }
    check_relation(rel)?;
    let (sx, xp) = rel.stabilizer_matrix(x);
    let (sz, zp) = rel.stabilizer_matrix(z);
    let mut code = CssCode::new(sx, sz)?;
    code.x_provenance = xp;
    code.z_provenance = zp;
    Ok(code)
}

/// Independent rows of `candidates` modulo `base`, in order.
pub(crate) fn independent_modulo(base: &BitMatrix, candidates: &BitMatrix) -> BitMatrix {
    let mut basis = EchelonBasis::from_matrix(base);
    let mut out = BitMatrix::new(candidates.ncols());
    for row in candidates.rows() {
        if basis.insert(row.clone()) {
            out.push_row(row.clone()).expect("lengths agree");
        }
    }
    out
}

/// Paired X and Z logical bases.
///
/// X-logicals are the imposed ones when present and otherwise the first
/// independent kernel vectors of `Sz` modulo `Sx`. Z-logicals are chosen
/// the same way and then recombined so that `Lx · Lzᵀ = I`.
pub fn logical_basis(code: &CssCode) -> LogicalBasis {
    let n = code.n();
    let lx = match &code.imposed_lx {
        Some(l) => l.clone(),
        None => independent_modulo(&code.sx, &code.sz.nullspace_basis()),
    };
    let z_candidates = independent_modulo(&code.sz, &code.sx.nullspace_basis());
    if lx.nrows() == 0 {
        return LogicalBasis {
            lx,
            lz: BitMatrix::new(n),
        };
    }
    let m = lx.mul_transpose(&z_candidates).expect("lengths agree");
    let inv = m
        .inverse()
        .expect("logical operators of a CSS code pair nondegenerately");
    let lz = inv.transpose().mul(&z_candidates).expect("shapes agree");
    LogicalBasis { lx, lz }
}

/// Subsystem code from `(D − z)`- and `(D − x)`-pinned gauge generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeCode {
    pub gx: BitMatrix,
    pub gz: BitMatrix,
    /// x-pinned and z-pinned sets, which lie in the centre.
    pub sx: BitMatrix,
    pub sz: BitMatrix,
    /// X and Z parts of the centre of the gauge group.
    pub center_x: BitMatrix,
    pub center_z: BitMatrix,
    /// Logical qubits of the subsystem code.
    pub k: usize,
    /// Logical qubits of the (x, D − x) stabilizer code, for comparison.
    pub stabilizer_code_k: usize,
}

impl GaugeCode {
    pub fn k_differs(&self) -> bool {
        self.k != self.stabilizer_code_k
    }
}

/// Elements of `rowspace(g)` orthogonal to every row of `h`.
fn commuting_part(g: &BitMatrix, h: &BitMatrix) -> BitMatrix {
    let m = g.mul_transpose(h).expect("lengths agree");
    let coefficients = m.transpose().nullspace_basis();
    let mut out = BitMatrix::new(g.ncols());
    for a in coefficients.rows() {
        out.push_row(g.combine_rows(a)).expect("lengths agree");
    }
    out.row_basis()
}

pub fn gauge_code(rel: &PinCodeRelation, x: usize, z: usize) -> Result<GaugeCode> {
    let d = rel.d();
    if x == 0 || z == 0 {
        return Err(Error::InvalidParameters("gauge codes need x, z >= 1".into()));
    }
    if x + z >= d {
        return Err(Error::InvalidParameters(format!(
            "x + z = {} leaves no gauge freedom for D = {d}",
            x + z
        )));
    }
    check_relation(rel)?;
    let (gx, _) = rel.stabilizer_matrix(d - z);
    let (gz, _) = rel.stabilizer_matrix(d - x);
    let (sx, _) = rel.stabilizer_matrix(x);
    let (sz, _) = rel.stabilizer_matrix(z);
    let center_x = commuting_part(&gx, &gz);
    let center_z = commuting_part(&gz, &gx);
    let k = rel.num_flags() - gz.rank() - center_x.rank();
    let stabilizer_code_k = CssCode::new(sx.clone(), gz.clone())?.k();
    Ok(GaugeCode {
        gx,
        gz,
        sx,
        sz,
        center_x,
        center_z,
        k,
        stabilizer_code_k,
    })
}

/// Ways to extend an x-pinned type to a `(D − z)`-pinned type:
/// `C(D + 1 − x, D − z − x)`.
pub fn gauge_redundancy(d: usize, x: usize, z: usize) -> Result<u128> {
    if x + z > d {
        return Err(Error::InvalidParameters("x + z exceeds D".into()));
    }
    Ok(binomial(d + 1 - x, d - z - x))
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Weight summary of one stabilizer species.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightStats {
    pub generators: usize,
    pub rank: usize,
    pub min_weight: usize,
    pub max_weight: usize,
    pub mean_weight: f64,
    /// Largest number of generators acting on one qubit.
    pub max_qubit_degree: usize,
}

fn weight_stats(m: &BitMatrix) -> WeightStats {
    let weights: Vec<usize> = m.rows().iter().map(BitVector::weight).collect();
    let mut degree = vec![0usize; m.ncols()];
    for r in m.rows() {
        for q in r.iter_ones() {
            degree[q] += 1;
        }
    }
    WeightStats {
        generators: m.nrows(),
        rank: m.rank(),
        min_weight: weights.iter().copied().min().unwrap_or(0),
        max_weight: weights.iter().copied().max().unwrap_or(0),
        mean_weight: if weights.is_empty() {
            0.0
        } else {
            weights.iter().sum::<usize>() as f64 / weights.len() as f64
        },
        max_qubit_degree: degree.into_iter().max().unwrap_or(0),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CodeStats {
    pub n: usize,
    pub k: usize,
    pub x: WeightStats,
    pub z: WeightStats,
}

pub fn code_stats(code: &CssCode) -> CodeStats {
    let x = weight_stats(&code.sx);
    let z = weight_stats(&code.sz);
    CodeStats {
        n: code.n(),
        k: code.n() - x.rank - z.rank,
        x,
        z,
    }
}
