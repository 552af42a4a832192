use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::f2la::{BitMatrix, BitVector};

use super::{check_level, same_length};

/// Integer polynomial over binary variables with coefficients modulo
/// `2^level`. A degree-`s` coefficient is stored with its `2^(s − 1)`
/// prefactor included.
///
/// Variables below `x_vars` print as `x_i`, the rest as `y_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPolynomial {
    level: usize,
    x_vars: usize,
    terms: BTreeMap<Vec<usize>, u64>,
}

/// A gate in the level-3 dictionary acting on logical qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub name: &'static str,
    pub qubits: Vec<usize>,
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q: Vec<String> = self.qubits.iter().map(|q| q.to_string()).collect();
        write!(f, "{}({})", self.name, q.join(","))
    }
}

impl WeightedPolynomial {
    pub fn new(level: usize, x_vars: usize) -> Self {
        Self {
            level,
            x_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    fn modulus(&self) -> u64 {
        1u64 << self.level
    }

    /// Adds `c` to the coefficient of the monomial over `vars`.
    pub fn add_term(&mut self, vars: Vec<usize>, c: u64) {
        let m = self.modulus();
        let entry = self.terms.entry(vars).or_insert(0);
        *entry = (*entry + c % m) % m;
        self.terms.retain(|_, c| *c != 0);
    }

    pub fn coefficient(&self, vars: &[usize]) -> u64 {
        self.terms.get(vars).copied().unwrap_or(0)
    }

    /// Nonzero terms by degree, then lexicographically.
    pub fn terms(&self) -> Vec<(&[usize], u64)> {
        let mut out: Vec<(&[usize], u64)> = self.terms.iter().map(|(k, &c)| (k.as_slice(), c)).collect();
        out.sort_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0)));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether every degree-`s` coefficient is a multiple of `2^(s − 1)`.
    pub fn is_properly_weighted(&self) -> bool {
        self.terms.iter().all(|(vars, &c)| {
            let need = (vars.len() - 1).min(self.level);
            c % (1u64 << need) == 0
        })
    }

    /// Gates realizing the polynomial at level 3, or `None` at other
    /// levels.
    ///
    /// `x_i` carries `T`, `S`, `Z` for coefficient bits 1, 2, 4; `x_i x_j`
    /// carries `CS`, `CZ` for bits 2, 4; `x_i x_j x_k` carries `CCZ`.
    pub fn gates(&self) -> Option<Vec<Gate>> {
        if self.level != 3 {
            return None;
        }
        let names: [&[(u64, &'static str)]; 3] = [
            &[(1, "T"), (2, "S"), (4, "Z")],
            &[(2, "CS"), (4, "CZ")],
            &[(4, "CCZ")],
        ];
        let mut out = Vec::new();
        for (vars, c) in self.terms() {
            for &(bit, name) in names[vars.len() - 1] {
                if c & bit != 0 {
                    out.push(Gate {
                        name,
                        qubits: vars.to_vec(),
                    });
                }
            }
        }
        Some(out)
    }

    fn variable(&self, v: usize) -> String {
        if v < self.x_vars {
            format!("x{v}")
        } else {
            format!("y{}", v - self.x_vars)
        }
    }
}

impl fmt::Display for WeightedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (vars, c)) in self.terms().into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let names: Vec<String> = vars.iter().map(|&v| self.variable(v)).collect();
            write!(f, "{c} · {}", names.join(" "))?;
        }
        write!(f, " (mod {})", self.modulus())
    }
}

/// `(−2)^(m − 1) · w mod 2^level`.
fn signed_coefficient(m: usize, w: u64, level: usize) -> u64 {
    let modulus = 1u128 << level;
    let v = ((w as u128) << (m - 1)) % modulus;
    let v = if m % 2 == 0 { (modulus - v) % modulus } else { v };
    v as u64
}

/// Nonempty-overlap subsets of at most `max_size` rows, with the
/// overlap size.
fn overlaps(rows: &[&BitVector], max_size: usize, mut f: impl FnMut(&[usize], usize)) {
    fn visit(
        rows: &[&BitVector],
        max_size: usize,
        support: BitVector,
        chosen: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize], usize),
    ) {
        let w = support.weight();
        if w == 0 {
            return;
        }
        f(chosen, w);
        if chosen.len() == max_size {
            return;
        }
        for next in chosen.last().expect("nonempty") + 1..rows.len() {
            let mut narrowed = support.clone();
            narrowed.and_assign(rows[next]);
            chosen.push(next);
            visit(rows, max_size, narrowed, chosen, f);
            chosen.pop();
        }
    }
    for i in 0..rows.len() {
        let mut chosen = vec![i];
        visit(rows, max_size, rows[i].clone(), &mut chosen, &mut f);
    }
}

/// `F_ℓ(x) = |xL|` as a weighted polynomial in the logical variables.
///
/// The coefficient of `x_{m_1} … x_{m_s}` is `(−2)^(s − 1)` times the
/// overlap of rows `m_1, …, m_s`, modulo `2^ℓ`.
pub fn extract_logical_polynomial(lx: &BitMatrix, level: usize) -> Result<WeightedPolynomial> {
    check_level(level)?;
    let mut p = WeightedPolynomial::new(level, lx.nrows());
    let rows: Vec<&BitVector> = lx.rows().iter().collect();
    overlaps(&rows, level, |vars, w| {
        p.add_term(vars.to_vec(), signed_coefficient(vars.len(), w as u64, level));
    });
    Ok(p)
}

/// The level `ℓ − 1` correction `F̃` with `F′(y) + F″(x, y) = 2 F̃(x, y)`.
///
/// Variables are the logical rows `x_i` followed by the stabilizer rows
/// `y_j`. A monomial with `s` logical and `t ≥ 1` stabilizer variables gets
/// `(−2)^(s + t − 1) · w / 2`, where `w` is the overlap of its rows; an odd
/// `w` with `s + t ≤ ℓ` breaks quasi-transversality and is an error.
pub fn correction_polynomial(lx: &BitMatrix, sx: &BitMatrix, level: usize) -> Result<WeightedPolynomial> {
    check_level(level)?;
    same_length(lx, sx)?;
    let k = lx.nrows();
    let mut p = WeightedPolynomial::new(level - 1, k);
    let rows: Vec<&BitVector> = lx.rows().iter().chain(sx.rows()).collect();
    let mut odd = None;
    overlaps(&rows, level, |vars, w| {
        if vars.last().is_some_and(|&v| v >= k) {
            if w % 2 == 1 {
                odd.get_or_insert_with(|| (vars.to_vec(), w));
            } else if level > 1 {
                p.add_term(vars.to_vec(), signed_coefficient(vars.len(), w as u64 / 2, level - 1));
            }
        }
    });
    if let Some((vars, w)) = odd {
        let (l, g): (Vec<usize>, Vec<usize>) = vars.iter().partition(|&&v| v < k);
        let g: Vec<usize> = g.into_iter().map(|v| v - k).collect();
        return Err(Error::Precondition(format!(
            "not quasi-transversal: logicals {l:?} with stabilizers {g:?} overlap on {w} positions"
        )));
    }
    Ok(p)
}
