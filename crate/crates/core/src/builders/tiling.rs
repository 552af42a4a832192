use std::str::FromStr;

use super::chain::ChainComplex;
use crate::error::{Error, Result};
use crate::f2la::BitMatrix;
use crate::relation::{Level, PinCodeRelation};

/// Periodic tilings available from [`torus_tiling`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TilingKind {
    /// Honeycomb cells; its flags give the hexagonal colour code.
    Hexagonal,
    /// Square cells; its flags give the 4.8.8 colour code.
    SquareOctagon,
}

impl FromStr for TilingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hexagonal" => Ok(TilingKind::Hexagonal),
            "square_octagon" => Ok(TilingKind::SquareOctagon),
            other => Err(Error::InvalidParameters(format!("unknown tiling {other:?}"))),
        }
    }
}

fn wrap(i: isize, n: usize) -> usize {
    i.rem_euclid(n as isize) as usize
}

/// Vertex, edge and face complex of a tiling on an `l1 × l2` torus.
///
/// Cells are numbered lexicographically by (row, column, local index).
pub fn torus_tiling(kind: TilingKind, l1: usize, l2: usize) -> Result<ChainComplex> {
    if l1 < 2 || l2 < 2 {
        return Err(Error::InvalidParameters(format!("torus size {l1}x{l2} is below 2x2")));
    }
    match kind {
        TilingKind::Hexagonal => Ok(honeycomb(l1, l2)),
        TilingKind::SquareOctagon => Ok(square(l1, l2)),
    }
}

/// Honeycomb as the dual of the triangular lattice on sites `(i, j)`.
///
/// Faces are sites. Vertices are the up triangle `{s, s+e1, s+e2}` and the
/// down triangle `{s+e1, s+e2, s+e1+e2}` of each site. Edges are the three
/// lattice bonds `s–s+e1`, `s–s+e2`, `s+e1–s+e2` of each site.
fn honeycomb(l1: usize, l2: usize) -> ChainComplex {
    let cell = |i: isize, j: isize| wrap(i, l1) * l2 + wrap(j, l2);
    let (nf, nv, ne) = (l1 * l2, 2 * l1 * l2, 3 * l1 * l2);
    let up = |i, j| 2 * cell(i, j);
    let down = |i, j| 2 * cell(i, j) + 1;
    let edge = |i, j, k: usize| 3 * cell(i, j) + k;
    let mut d1 = BitMatrix::zeros(nv, ne);
    let mut d2 = BitMatrix::zeros(ne, nf);
    for i in 0..l1 as isize {
        for j in 0..l2 as isize {
            // Each bond separates the two triangles that contain it.
            let ends = [
                (up(i, j), down(i, j - 1)),
                (up(i, j), down(i - 1, j)),
                (up(i, j), down(i, j)),
            ];
            for (k, (a, b)) in ends.into_iter().enumerate() {
                d1.set(a, edge(i, j, k), true);
                d1.set(b, edge(i, j, k), true);
            }
            let f = cell(i, j);
            for e in [
                edge(i, j, 0),
                edge(i - 1, j, 0),
                edge(i, j, 1),
                edge(i, j - 1, 1),
                edge(i - 1, j, 2),
                edge(i, j - 1, 2),
            ] {
                let v = d2.get(e, f);
                d2.set(e, f, !v);
            }
        }
    }
    ChainComplex::new(vec![nv, ne, nf], vec![d1, d2]).expect("honeycomb boundaries compose to zero")
}

/// Square lattice: edge `2c` runs from vertex `c` along the row, edge
/// `2c + 1` down the column, and face `c` has vertex `c` as its corner.
fn square(l1: usize, l2: usize) -> ChainComplex {
    let cell = |i: isize, j: isize| wrap(i, l1) * l2 + wrap(j, l2);
    let n = l1 * l2;
    let mut d1 = BitMatrix::zeros(n, 2 * n);
    let mut d2 = BitMatrix::zeros(2 * n, n);
    for i in 0..l1 as isize {
        for j in 0..l2 as isize {
            let c = cell(i, j);
            d1.set(c, 2 * c, true);
            d1.set(cell(i, j + 1), 2 * c, true);
            d1.set(c, 2 * c + 1, true);
            d1.set(cell(i + 1, j), 2 * c + 1, true);
            for e in [2 * c, 2 * cell(i + 1, j), 2 * c + 1, 2 * cell(i, j + 1) + 1] {
                d2.set(e, c, true);
            }
        }
    }
    ChainComplex::new(vec![n, 2 * n, n], vec![d1, d2]).expect("square boundaries compose to zero")
}

/// Three-coloured triangular lattice on a twisted `l1 × l2` torus.
///
/// Site `(i, j)` has colour `(i - j) mod 3`, which becomes its rank.
/// Crossing the `j` boundary shifts `i` so that colours stay consistent;
/// `l1` must be a multiple of 3. Flags are the triangles, up then down per
/// site. `(3, 4)` gives 12 sites and 24 flags with 4 pins per level.
pub fn triangular_color_relation(l1: usize, l2: usize) -> Result<PinCodeRelation> {
    if l1 < 3 || l1 % 3 != 0 || l2 < 2 {
        return Err(Error::InvalidParameters(format!(
            "triangular lattice needs l1 a positive multiple of 3 and l2 >= 2, got {l1}x{l2}"
        )));
    }
    let twist = (3 - l2 % 3) % 3;
    let site = |i: isize, j: isize| {
        let k = j.div_euclid(l2 as isize);
        let jj = j.rem_euclid(l2 as isize) as usize;
        let ii = wrap(i + k * twist as isize, l1);
        (ii, jj)
    };
    let colour = |(i, j): (usize, usize)| (i + 3 * l2 - j % 3) % 3;
    let mut index_in_colour = vec![usize::MAX; l1 * l2];
    let mut counts = [0usize; 3];
    for i in 0..l1 {
        for j in 0..l2 {
            let c = colour((i, j));
            index_in_colour[i * l2 + j] = counts[c];
            counts[c] += 1;
        }
    }
    let mut flags = Vec::with_capacity(2 * l1 * l2);
    for i in 0..l1 as isize {
        for j in 0..l2 as isize {
            let triangles = [
                [site(i, j), site(i + 1, j), site(i, j + 1)],
                [site(i + 1, j), site(i, j + 1), site(i + 1, j + 1)],
            ];
            for tri in triangles {
                let mut flag = vec![usize::MAX; 3];
                for s in tri {
                    let c = colour(s);
                    if flag[c] != usize::MAX {
                        return Err(Error::InvalidParameters("triangle repeats a colour".into()));
                    }
                    flag[c] = index_in_colour[s.0 * l2 + s.1];
                }
                flags.push(flag);
            }
        }
    }
    let levels = counts.iter().map(|&c| Level::numbered(c)).collect();
    PinCodeRelation::new(levels, flags)
}

#[cfg(test)]
mod tests {
    use super::super::from_chain_complex;
    use super::*;

    #[test]
    fn triangular_example_counts() {
        let rel = triangular_color_relation(3, 4).unwrap();
        assert_eq!(rel.num_flags(), 24);
        assert_eq!(rel.level_sizes(), vec![4, 4, 4]);
        assert!(rel.validate(true).passed);
        let ones = rel.enumerate_pinned_sets(1);
        assert_eq!(ones.len(), 12);
        assert!(ones.iter().all(|s| s.indicator.weight() == 6));
    }

    #[test]
    fn honeycomb_flags() {
        for (l1, l2) in [(2, 2), (2, 3), (3, 3)] {
            let cc = torus_tiling(TilingKind::Hexagonal, l1, l2).unwrap();
            assert!(cc.composes_to_zero());
            let rel = from_chain_complex(&cc, None).unwrap();
            assert_eq!(rel.num_flags(), 12 * l1 * l2);
            assert_eq!(rel.level_sizes(), vec![2 * l1 * l2, 3 * l1 * l2, l1 * l2]);
        }
    }

    #[test]
    fn square_flags() {
        let cc = torus_tiling(TilingKind::SquareOctagon, 2, 2).unwrap();
        let rel = from_chain_complex(&cc, None).unwrap();
        assert_eq!(rel.num_flags(), 8 * 4);
        assert!(rel.validate(true).passed);
        assert!(torus_tiling(TilingKind::SquareOctagon, 1, 3).is_err());
    }
}
