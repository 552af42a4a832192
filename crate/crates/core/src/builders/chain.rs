use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::f2la::io::{read_matrix, write_matrix};
use crate::f2la::{BitMatrix, BitVector, MatrixFormat};
use crate::relation::{Level, PinCodeRelation};

/// Graded GF(2) spaces `C_0 … C_D` with boundary maps `∂_j : C_j → C_{j-1}`.
///
/// `∂_j` is stored as a `dims[j-1] × dims[j]` matrix: column `c` lists the
/// boundary of basis element `c` of `C_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<BitMatrix>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<BitMatrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Dimension("a chain complex needs at least one level".into()));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::Dimension(format!(
                "{} levels need {} boundary maps, got {}",
                dims.len(),
                dims.len() - 1,
                boundaries.len()
            )));
        }
        for (j, b) in boundaries.iter().enumerate() {
            if b.nrows() != dims[j] || b.ncols() != dims[j + 1] {
                return Err(Error::Dimension(format!(
                    "boundary {} is {}x{}, expected {}x{}",
                    j + 1,
                    b.nrows(),
                    b.ncols(),
                    dims[j],
                    dims[j + 1]
                )));
            }
        }
        for j in 1..boundaries.len() {
            if !boundaries[j - 1].mul(&boundaries[j])?.is_zero() {
                return Err(Error::Dimension(format!(
                    "boundary {j} composed with boundary {} is nonzero",
                    j + 1
                )));
            }
        }
        Ok(Self { dims, boundaries })
    }

    /// Number of levels, `D + 1`.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `∂_j` for `1 ≤ j ≤ D`.
    pub fn boundary(&self, j: usize) -> &BitMatrix {
        &self.boundaries[j - 1]
    }

    pub fn boundaries(&self) -> &[BitMatrix] {
        &self.boundaries
    }

    /// True when every composition `∂_j ∘ ∂_{j+1}` vanishes.
    pub fn composes_to_zero(&self) -> bool {
        (1..self.boundaries.len()).all(|j| {
            self.boundaries[j - 1]
                .mul(&self.boundaries[j])
                .map(|m| m.is_zero())
                .unwrap_or(false)
        })
    }
}

fn kron(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    let mut out = BitMatrix::zeros(a.nrows() * b.nrows(), a.ncols() * b.ncols());
    for i in 0..a.nrows() {
        for j in a.row(i).iter_ones() {
            for k in 0..b.nrows() {
                for l in b.row(k).iter_ones() {
                    out.set(i * b.nrows() + k, j * b.ncols() + l, true);
                }
            }
        }
    }
    out
}

/// Places `blocks[r][c]` in a block grid with the given row and column sizes.
fn block_matrix(row_sizes: &[usize], col_sizes: &[usize], blocks: &[Vec<Option<BitMatrix>>]) -> BitMatrix {
    let ncols: usize = col_sizes.iter().sum();
    let nrows: usize = row_sizes.iter().sum();
    let mut out = BitMatrix::zeros(nrows, ncols);
    let mut r0 = 0;
    for (br, &rs) in row_sizes.iter().enumerate() {
        let mut c0 = 0;
        for (bc, &cs) in col_sizes.iter().enumerate() {
            if let Some(m) = &blocks[br][bc] {
                debug_assert_eq!((m.nrows(), m.ncols()), (rs, cs));
                for i in 0..rs {
                    for j in m.row(i).iter_ones() {
                        out.set(r0 + i, c0 + j, true);
                    }
                }
            }
            c0 += cs;
        }
        r0 += rs;
    }
    out
}

/// Product of `a` with a two-level complex `b`.
///
/// Level `j` is `(B_1 ⊗ A_{j-1}) ⊕ (B_0 ⊗ A_j)` with that block order, and
/// the basis of `X ⊗ Y` is indexed by `x · |Y| + y`.
pub fn tensor_product(a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex> {
    if b.len() != 2 {
        return Err(Error::Dimension(format!(
            "the second factor must have exactly two levels, found {}",
            b.len()
        )));
    }
    let (b0, b1) = (b.dims[0], b.dims[1]);
    let db = b.boundary(1);
    let top = a.len();
    let adim = |j: isize| -> usize {
        if j < 0 || j as usize >= a.len() {
            0
        } else {
            a.dims[j as usize]
        }
    };
    let aboundary = |j: isize| -> BitMatrix {
        if j >= 1 && (j as usize) < a.len() {
            a.boundary(j as usize).clone()
        } else {
            BitMatrix::zeros(adim(j - 1), adim(j))
        }
    };
    let dims: Vec<usize> = (0..=top as isize).map(|j| b1 * adim(j - 1) + b0 * adim(j)).collect();
    let mut boundaries = Vec::with_capacity(top);
    for j in 1..=top as isize {
        let rows = [b1 * adim(j - 2), b0 * adim(j - 1)];
        let cols = [b1 * adim(j - 1), b0 * adim(j)];
        let blocks = vec![
            vec![Some(kron(&BitMatrix::identity(b1), &aboundary(j - 1))), None],
            vec![
                Some(kron(db, &BitMatrix::identity(adim(j - 1)))),
                Some(kron(&BitMatrix::identity(b0), &aboundary(j))),
            ],
        ];
        boundaries.push(block_matrix(&rows, &cols, &blocks));
    }
    ChainComplex::new(dims, boundaries)
}

/// Flag relation of a chain complex.
///
/// Pins are basis elements and flags are the incidence paths
/// `(c_0, …, c_D)`. A free pin `b_0` is appended to level 0 when some
/// element of level 1 has an odd boundary, and likewise `b_D` on level `D`.
/// `free` optionally marks further pins as free, one list per level.
pub fn from_chain_complex(cc: &ChainComplex, free: Option<&[Vec<bool>]>) -> Result<PinCodeRelation> {
    let d = cc.top();
    if let Some(marks) = free {
        if marks.len() != cc.len() || marks.iter().zip(&cc.dims).any(|(m, &n)| m.len() != n) {
            return Err(Error::Dimension("free marks must match the level sizes".into()));
        }
    }
    let mut dims = cc.dims.clone();
    // adjacency[j] has rows indexed by level j and columns by level j + 1.
    let mut adjacency: Vec<BitMatrix> = cc.boundaries.clone();
    let mut added = vec![false; d + 1];
    if d >= 1 {
        let m = &adjacency[0];
        let odd: Vec<usize> = (0..m.ncols()).filter(|&c| (0..m.nrows()).filter(|&r| m.get(r, c)).count() % 2 == 1).collect();
        if !odd.is_empty() {
            let mut rows = m.rows().to_vec();
            rows.push(BitVector::from_indices(m.ncols(), odd));
            adjacency[0] = BitMatrix::from_rows(m.ncols(), rows)?;
            dims[0] += 1;
            added[0] = true;
        }
        let m = &adjacency[d - 1];
        let odd: Vec<usize> = (0..m.nrows()).filter(|&r| m.row(r).weight() % 2 == 1).collect();
        if !odd.is_empty() {
            let mut extended = BitMatrix::new(m.ncols() + 1);
            for r in 0..m.nrows() {
                extended.push_row(m.row(r).concat(&BitVector::from_bools(&[odd.binary_search(&r).is_ok()])))?;
            }
            adjacency[d - 1] = extended;
            dims[d] += 1;
            added[d] = true;
        }
    }

    let mut levels = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let mut names: Vec<String> = (0..cc.dims[j]).map(|i| i.to_string()).collect();
        let mut is_free = free.map_or_else(|| vec![false; cc.dims[j]], |m| m[j].clone());
        if added[j] {
            names.push(if j == 0 { "b0".into() } else { format!("b{j}") });
            is_free.push(true);
        }
        levels.push(Level { names, free: is_free });
    }

    let mut flags = Vec::new();
    let mut path = Vec::with_capacity(d + 1);
    for c0 in 0..dims[0] {
        path.push(c0);
        extend_paths(&adjacency, &mut path, &mut flags);
        path.pop();
    }
    PinCodeRelation::new(levels, flags)
}

fn extend_paths(adjacency: &[BitMatrix], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let j = path.len() - 1;
    if j == adjacency.len() {
        out.push(path.clone());
        return;
    }
    let here = path[j];
    for next in adjacency[j].row(here).iter_ones() {
        path.push(next);
        extend_paths(adjacency, path, out);
        path.pop();
    }
}

/// End gadget for [`capped_rm_complex`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cap {
    None,
    /// Three pins on each of the two end levels joined in a cycle.
    Triangle,
    /// Four pins on each of the two end levels joined in a cycle.
    Square,
}

impl Cap {
    fn size(self) -> usize {
        match self {
            Cap::None => 2,
            Cap::Triangle => 3,
            Cap::Square => 4,
        }
    }
}

fn cycle_incidence(n: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(n, n);
    for c in 0..n {
        m.set(c, c, true);
        m.set((c + 1) % n, c, true);
    }
    m
}

fn all_ones(r: usize, c: usize) -> BitMatrix {
    BitMatrix::from_rows(c, vec![BitVector::ones(c); r]).expect("rows have length c")
}

/// Chain of two-element levels with all-ones boundaries, optionally capped.
///
/// Without caps this is the complete relation on `D + 1` levels of two
/// pins. A cap replaces the two end levels by `n`-element levels joined by
/// an `n`-cycle incidence.
pub fn capped_rm_complex(left: Cap, right: Cap, d: usize) -> Result<ChainComplex> {
    let caps = usize::from(left != Cap::None) + usize::from(right != Cap::None);
    let min_d = match caps {
        0 => 1,
        1 => 2,
        _ => 3,
    };
    if d < min_d {
        return Err(Error::InvalidParameters(format!("D = {d} is too small for the requested caps")));
    }
    let mut dims = vec![2; d + 1];
    dims[0] = left.size();
    dims[1] = left.size();
    if right != Cap::None {
        dims[d] = right.size();
        dims[d - 1] = right.size();
    }
    let boundaries = (1..=d)
        .map(|j| {
            if j == 1 && left != Cap::None {
                cycle_incidence(left.size())
            } else if j == d && right != Cap::None {
                cycle_incidence(right.size()).transpose()
            } else {
                all_ones(dims[j - 1], dims[j])
            }
        })
        .collect();
    ChainComplex::new(dims, boundaries)
}

/// Writes `dims d0 d1 …` followed by `boundary j <format>` sections.
pub fn write_chain_complex(cc: &ChainComplex, format: MatrixFormat) -> String {
    let mut out = String::from("dims");
    for d in &cc.dims {
        let _ = write!(out, " {d}");
    }
    out.push('\n');
    for (j, b) in cc.boundaries.iter().enumerate() {
        let _ = writeln!(out, "boundary {} {format}", j + 1);
        out.push_str(&write_matrix(b, format));
    }
    out
}

pub fn read_chain_complex(text: &str) -> Result<ChainComplex> {
    let mut dims: Option<Vec<usize>> = None;
    let mut sections: Vec<(usize, usize, MatrixFormat, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix("dims") {
            if dims.is_some() {
                return Err(Error::parse(line_no, "`dims` given twice"));
            }
            dims = Some(
                rest.split_whitespace()
                    .map(|t| t.parse().map_err(|_| Error::parse(line_no, format!("bad dimension {t:?}"))))
                    .collect::<Result<_>>()?,
            );
        } else if let Some(rest) = line.strip_prefix("boundary") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let (j, fmt) = match toks[..] {
                [j, fmt] => (j, fmt),
                [j] => (j, "dense"),
                _ => return Err(Error::parse(line_no, "expected `boundary <j> [dense|alist]`")),
            };
            let j: usize = j.parse().map_err(|_| Error::parse(line_no, "bad boundary index"))?;
            let fmt: MatrixFormat = fmt.parse().map_err(|_| Error::parse(line_no, "unknown matrix format"))?;
            sections.push((line_no, j, fmt, String::new()));
        } else if let Some(section) = sections.last_mut() {
            section.3.push_str(raw);
            section.3.push('\n');
        } else if !line.is_empty() && !line.starts_with('#') {
            return Err(Error::parse(line_no, "content before the first `boundary` section"));
        }
    }
    let dims = dims.ok_or_else(|| Error::parse(0, "missing `dims` line"))?;
    if dims.is_empty() {
        return Err(Error::parse(0, "`dims` lists no levels"));
    }
    let mut boundaries: Vec<Option<BitMatrix>> = vec![None; dims.len() - 1];
    for (line_no, j, fmt, body) in sections {
        if j == 0 || j >= dims.len() {
            return Err(Error::parse(line_no, format!("boundary index {j} out of range")));
        }
        let mut m = read_matrix(&body, fmt).map_err(|e| match e {
            Error::Parse { line, message } => Error::parse(line_no + line, message),
            other => other,
        })?;
        if m.nrows() == 0 && m.ncols() == 0 {
            m = BitMatrix::zeros(dims[j - 1], dims[j]);
        }
        if m.nrows() != dims[j - 1] || m.ncols() != dims[j] {
            return Err(Error::parse(
                line_no,
                format!("boundary {j} is {}x{}, expected {}x{}", m.nrows(), m.ncols(), dims[j - 1], dims[j]),
            ));
        }
        if boundaries[j - 1].replace(m).is_some() {
            return Err(Error::parse(line_no, format!("boundary {j} given twice")));
        }
    }
    let boundaries = boundaries
        .into_iter()
        .enumerate()
        .map(|(j, b)| b.ok_or_else(|| Error::parse(0, format!("boundary {} missing", j + 1))))
        .collect::<Result<Vec<_>>>()?;
    ChainComplex::new(dims, boundaries)
}
