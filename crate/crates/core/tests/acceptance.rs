//! Acceptance suite. Each test prints one `PASS`/`FAIL` line to the real
//! stdout, bypassing the harness capture, and then asserts.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pincode::builders::{
    capped_rm_complex, complete_relation, coxeter_relation, from_chain_complex, reed_muller_relation,
    single_pin_relation, steane_relation, tensor_product, todd_coxeter, torus_tiling, triangular_color_relation,
    Cap, ChainComplex, GroupPresentation, Letter, TilingKind,
};
use pincode::csscode::{build_pin_code, distance, logical_basis, CssCode, DistanceOptions};
use pincode::distill::{ccz_code, gamma, puncture_search, triortho_split, triortho_split_at, PunctureOptions};
use pincode::relation::{PinCodeRelation, TypeSet};
use pincode::shrunk::shrunk_complex;
use pincode::transversal::{
    exact_conditions, exhaustive_transversality, extract_logical_polynomial, is_multi_even, is_multi_orthogonal,
    is_triorthogonal, quasi_conditions,
};
use pincode::{BitMatrix, BitVector, Error};

fn report(name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{verdict} {name}: {detail}");
    let _ = out.flush();
    assert!(ok, "{name}: {detail}");
}

fn params(code: &CssCode) -> (usize, usize) {
    (code.n(), code.k())
}

#[test]
fn complete_relation_d6_bound_distances() {
    let limit = Duration::from_secs(600);
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    let cases = [
        (vec![2, 2, 2, 2, 2, 2, 4], 2, 4, 256, 30, 8),
        (vec![2, 2, 2, 2, 2, 2, 4], 3, 3, 256, 40, 16),
        (vec![2, 2, 2, 2, 2, 4, 4], 2, 4, 512, 120, 8),
        (vec![2, 2, 2, 2, 2, 4, 4], 3, 3, 512, 160, 16),
    ];
    for (sizes, x, z, n, k, d) in cases {
        let start = Instant::now();
        let rel = complete_relation(&sizes).unwrap();
        let code = build_pin_code(&rel, x, z).unwrap();
        let result = distance(&code, &DistanceOptions::bound(400, 1)).unwrap();
        let elapsed = start.elapsed();
        let line = format!("[[{},{},<={}]] ({x},{z}) in {:.1?}", code.n(), code.k(), result.distance, elapsed);
        if params(&code) != (n, k) || result.distance != d || result.exact || elapsed > limit {
            failures.push(line.clone());
        }
        lines.push(line);
    }
    report("complete_relation_d6_bound_distances", failures.is_empty(), &lines.join("; "));
}

/// Type of each row of `lx`, found among the `x`-pinned sets.
fn row_types(rel: &PinCodeRelation, lx: &BitMatrix, x: usize) -> Vec<TypeSet> {
    let sets = rel.enumerate_pinned_sets(x);
    lx.rows()
        .iter()
        .map(|row| {
            sets.iter()
                .find(|s| &s.indicator == row)
                .expect("logical rows are pinned sets")
                .collection
                .type_set()
        })
        .collect()
}

fn pairwise_disjoint(types: &[TypeSet]) -> bool {
    (0..types.len()).all(|i| (i + 1..types.len()).all(|j| types[i].intersection(types[j]).is_empty()))
}

#[test]
fn ccz_codes_from_pinned_sets() {
    let limit = Duration::from_secs(300);
    let cases = [
        ("complete", capped_rm_complex(Cap::None, Cap::None, 5).unwrap(), 64, 15),
        ("triangle", capped_rm_complex(Cap::Triangle, Cap::None, 5).unwrap(), 96, 23),
        ("square", capped_rm_complex(Cap::Square, Cap::None, 5).unwrap(), 128, 31),
    ];
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    for (name, cc, n, k) in cases {
        let start = Instant::now();
        let rel = from_chain_complex(&cc, None).unwrap();
        let code = ccz_code(&rel, 2).unwrap();
        let d = distance(&code, &DistanceOptions::exact()).unwrap();
        let lx = code.imposed_lx().unwrap().clone();
        let quasi = quasi_conditions(&lx, code.sx(), 3).unwrap().passed;
        let types = row_types(&rel, &lx, 2);
        let gates = extract_logical_polynomial(&lx, 3).unwrap().gates().unwrap();
        let found: BTreeSet<Vec<usize>> =
            gates.iter().filter(|g| g.name == "CCZ").map(|g| g.qubits.clone()).collect();
        let all_ccz = gates.iter().all(|g| g.name == "CCZ");
        // Capped ends add Clifford gates next to the CCZ circuit.
        let clifford_rest = gates.iter().all(|g| ["CCZ", "CZ", "S", "Z"].contains(&g.name));
        let gates_ok = if name == "complete" {
            let mut expected = BTreeSet::new();
            for a in 0..k {
                for b in a + 1..k {
                    for c in b + 1..k {
                        if pairwise_disjoint(&[types[a], types[b], types[c]]) {
                            expected.insert(vec![a, b, c]);
                        }
                    }
                }
            }
            all_ccz && found == expected
        } else {
            clifford_rest
                && !found.is_empty()
                && found.iter().all(|q| pairwise_disjoint(&q.iter().map(|&i| types[i]).collect::<Vec<_>>()))
        };
        let elapsed = start.elapsed();
        let line = format!(
            "{name} [[{},{},{}]] exact={} quasi={quasi} ccz={} clifford={} gates_ok={gates_ok} in {:.1?}",
            code.n(),
            code.k(),
            d.distance,
            d.exact,
            found.len(),
            gates.len() - found.len(),
            elapsed
        );
        if params(&code) != (n, k) || d.distance != 4 || !d.exact || !quasi || !gates_ok || elapsed > limit {
            failures.push(line.clone());
        }
        lines.push(line);
    }
    report("ccz_codes_from_pinned_sets", failures.is_empty(), &lines.join("; "));
}

#[test]
fn small_free_pin_codes() {
    let start = Instant::now();
    let steane = build_pin_code(&steane_relation().unwrap(), 1, 1).unwrap();
    let single = build_pin_code(&single_pin_relation().unwrap(), 1, 1).unwrap();
    let ds = distance(&steane, &DistanceOptions::exact()).unwrap();
    let dp = distance(&single, &DistanceOptions::exact()).unwrap();
    let elapsed = start.elapsed();
    let ok = params(&steane) == (7, 1)
        && ds.distance == 3
        && ds.exact
        && params(&single) == (4, 2)
        && dp.distance == 2
        && dp.exact
        && elapsed < Duration::from_secs(1);
    let detail = format!(
        "steane [[{},{},{}]], single pin [[{},{},{}]] in {:.1?}",
        steane.n(),
        steane.k(),
        ds.distance,
        single.n(),
        single.k(),
        dp.distance,
        elapsed
    );
    report("small_free_pin_codes", ok, &detail);
}

/// Reduced basis of bit masks, pivot at the highest bit.
fn mask_basis(rows: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in rows {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

fn mask_in_span(basis: &[u64], mut v: u64) -> bool {
    for &b in basis {
        v = v.min(v ^ b);
    }
    v == 0
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn to_mask(v: &BitVector) -> u64 {
    v.iter_ones().fold(0u64, |acc, i| acc | 1 << i)
}

#[test]
fn pinned_sets_span_reed_muller() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut cases = 0;
    for m in 1..=5usize {
        let n = 1usize << m;
        let rel = reed_muller_relation(m).unwrap();
        for r in 0..=m {
            cases += 1;
            // Monomials of degree at most r evaluated at point c, where
            // coordinate j of c is bit m - 1 - j.
            let mut oracle_rows = Vec::new();
            for vars in 0u64..1 << m {
                if vars.count_ones() as usize > r {
                    continue;
                }
                let row = (0..n).fold(0u64, |acc, c| {
                    let on = (0..m).all(|j| vars >> j & 1 == 0 || (c >> (m - 1 - j)) & 1 == 1);
                    acc | (u64::from(on) << c)
                });
                oracle_rows.push(row);
            }
            let oracle = mask_basis(oracle_rows.iter().copied());
            let pinned: Vec<u64> = rel.enumerate_pinned_sets(r).iter().map(|s| to_mask(&s.indicator)).collect();
            let span = mask_basis(pinned.iter().copied());
            let expected_rank: usize = (0..=r).map(|j| binomial(m, j)).sum();
            let ok = span.len() == expected_rank
                && oracle.len() == expected_rank
                && pinned.iter().all(|&v| mask_in_span(&oracle, v))
                && oracle_rows.iter().all(|&v| mask_in_span(&span, v));
            if !ok {
                failures.push(format!("m={m} r={r} rank {} vs {expected_rank}", span.len()));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(60);
    report(
        "pinned_sets_span_reed_muller",
        ok,
        &format!("{cases} (m, r) pairs, mismatches {failures:?}, {elapsed:.1?}"),
    );
}

#[test]
fn capped_complexes_are_triply_even() {
    let start = Instant::now();
    let caps = [
        (Cap::None, Cap::None, 128),
        (Cap::Triangle, Cap::None, 192),
        (Cap::Square, Cap::None, 256),
        (Cap::Triangle, Cap::Triangle, 288),
        (Cap::Square, Cap::Square, 512),
    ];
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    for (left, right, flags) in caps {
        let rel = from_chain_complex(&capped_rm_complex(left, right, 6).unwrap(), None).unwrap();
        let (g, _) = rel.stabilizer_matrix(2);
        let even = is_multi_even(&g, 3).unwrap().passed;
        counts.push(rel.num_flags());
        if rel.num_flags() != flags || !even {
            failures.push(format!("{left:?}/{right:?}: {} flags, triply even {even}", rel.num_flags()));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(60);
    report(
        "capped_complexes_are_triply_even",
        ok,
        &format!("flags {counts:?}, failures {failures:?}, {elapsed:.1?}"),
    );
}

const MAX_FLAGS: usize = 256;

fn random_complete(rng: &mut ChaCha8Rng) -> PinCodeRelation {
    loop {
        let d = rng.gen_range(1..=4);
        let sizes: Vec<usize> = (0..=d).map(|_| [2, 2, 4, 6][rng.gen_range(0..4)]).collect();
        if sizes.iter().product::<usize>() <= MAX_FLAGS {
            return complete_relation(&sizes).unwrap();
        }
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, p: f64) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(p) {
                m.set(r, c, true);
            }
        }
    }
    m
}

/// Each new boundary has columns drawn from the kernel of the previous one.
fn random_sparse_complex(rng: &mut ChaCha8Rng) -> ChainComplex {
    let d = rng.gen_range(2..=3);
    let dims: Vec<usize> = (0..=d).map(|_| rng.gen_range(1..=4)).collect();
    let mut boundaries = vec![random_matrix(rng, dims[0], dims[1], 0.5)];
    for j in 2..=d {
        let kernel = boundaries[j - 2].nullspace_basis();
        let mut next = BitMatrix::zeros(dims[j - 1], dims[j]);
        for c in 0..dims[j] {
            let mut col = BitVector::zeros(dims[j - 1]);
            for row in kernel.rows() {
                if rng.gen_bool(0.6) {
                    col.xor_assign(row);
                }
            }
            for r in col.iter_ones() {
                next.set(r, c, true);
            }
        }
        boundaries.push(next);
    }
    ChainComplex::new(dims, boundaries).expect("columns lie in the kernel")
}

fn random_two_level(rng: &mut ChaCha8Rng) -> ChainComplex {
    let (a, b) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    ChainComplex::new(vec![a, b], vec![random_matrix(rng, a, b, 0.6)]).unwrap()
}

fn random_product(rng: &mut ChaCha8Rng) -> ChainComplex {
    let mut cc = tensor_product(&random_two_level(rng), &random_two_level(rng)).unwrap();
    if rng.gen_bool(0.4) {
        cc = tensor_product(&cc, &random_two_level(rng)).unwrap();
    }
    cc
}

#[derive(Default)]
struct PropertyTally {
    relations: usize,
    codes: usize,
    distances: usize,
    infeasible: usize,
    shrunk: usize,
    violations: Vec<String>,
}

impl PropertyTally {
    fn fail(&mut self, what: String) {
        if self.violations.len() < 20 {
            self.violations.push(what);
        } else {
            self.violations.push(String::new());
        }
    }

    fn check(&mut self, label: &str, rel: &PinCodeRelation) {
        self.relations += 1;
        let d = rel.d();
        if !rel.validate(false).passed {
            self.fail(format!("{label}: validation"));
            return;
        }
        for x in 1..=d {
            let (g, _) = rel.stabilizer_matrix(x);
            if !is_multi_orthogonal(&g, d / x).unwrap().passed {
                self.fail(format!("{label}: {x}-pinned sets not {}-orthogonal", d / x));
            }
        }
        let options = DistanceOptions {
            gray_cap: 22,
            support_cap: 20_000_000,
            ..DistanceOptions::exact()
        };
        for x in 1..d {
            for z in 1..=d - x {
                self.codes += 1;
                let code = build_pin_code(rel, x, z).unwrap();
                if !code.sx().mul_transpose(code.sz()).unwrap().is_zero() {
                    self.fail(format!("{label} ({x},{z}): stabilizers anticommute"));
                }
                for t in TypeSet::all_of_size(d, x) {
                    self.shrunk += 1;
                    if !shrunk_complex(rel, x, z, t).unwrap().complex.composes_to_zero() {
                        self.fail(format!("{label} ({x},{z}) type {t}: shrunk boundaries"));
                    }
                }
                if rel.has_free_pins() || code.k() == 0 {
                    continue;
                }
                let basis = logical_basis(&code);
                if basis.lx.rows().iter().chain(basis.lz.rows()).any(|r| r.weight() % 2 == 1) {
                    self.fail(format!("{label} ({x},{z}): odd logical"));
                }
                match distance(&code, &options) {
                    Ok(r) => {
                        self.distances += 1;
                        if !r.exact || r.distance < 4 {
                            self.fail(format!("{label} ({x},{z}): distance {r}"));
                        }
                    }
                    Err(Error::DistanceRefused(_)) => self.infeasible += 1,
                    Err(e) => self.fail(format!("{label} ({x},{z}): {e}")),
                }
            }
        }
    }
}

#[test]
fn random_relation_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut tally = PropertyTally::default();
    let mut complexes = 0;
    let mut kept = 0;
    while kept < 520 {
        let (label, rel) = match kept % 3 {
            0 => ("complete", random_complete(&mut rng)),
            1 | 2 => {
                let (label, cc) = if kept % 3 == 1 {
                    ("sparse", random_sparse_complex(&mut rng))
                } else {
                    ("product", random_product(&mut rng))
                };
                complexes += 1;
                if !cc.composes_to_zero() {
                    tally.fail(format!("{label} complex: boundaries"));
                }
                match from_chain_complex(&cc, None) {
                    Ok(rel) => (label, rel),
                    Err(_) => continue,
                }
            }
            _ => unreachable!(),
        };
        if rel.num_flags() == 0 || rel.num_flags() > MAX_FLAGS {
            continue;
        }
        kept += 1;
        tally.check(&format!("{label} #{kept}"), &rel);
    }
    let detail = format!(
        "{} relations ({complexes} complexes), {} codes, {} exact distances ({} infeasible), {} shrunk complexes, {} violations {:?}",
        tally.relations,
        tally.codes,
        tally.distances,
        tally.infeasible,
        tally.shrunk,
        tally.violations.len(),
        tally.violations.iter().filter(|v| !v.is_empty()).collect::<Vec<_>>()
    );
    report("random_relation_properties", tally.violations.is_empty() && tally.relations >= 500, &detail);
}

#[test]
fn distillation_exponents() {
    let cases = [
        (116, 12, 4, 1.64),
        (175, 17, 4, 1.68),
        (236, 20, 4, 1.78),
        (261, 27, 4, 1.64),
        (466, 46, 4, 1.67),
    ];
    let mut ok = true;
    let mut values = Vec::new();
    for (n, k, d, expected) in cases {
        let g = gamma(n, k, d).unwrap();
        ok &= (g - expected).abs() <= 0.005;
        values.push(format!("({n},{k},{d})={g:.4}"));
    }
    report("distillation_exponents", ok, &values.join(" "));
}

#[test]
fn puncture_search_meets_targets() {
    let start = Instant::now();
    let rel = from_chain_complex(&capped_rm_complex(Cap::None, Cap::None, 6).unwrap(), None).unwrap();
    let (g, _) = rel.stabilizer_matrix(2);
    let results = puncture_search(&g, &PunctureOptions::new(8, 4, 100_000, 1)).unwrap();
    let mut failures = Vec::new();
    for r in &results {
        let lx = r.code.imposed_lx().unwrap();
        let stacked = r.code.sx().vstack(lx).unwrap();
        let triortho = is_triorthogonal(&stacked).unwrap().passed;
        let quasi = quasi_conditions(lx, r.code.sx(), 3).unwrap().passed;
        let d = r.distance.as_ref().unwrap();
        let options = if d.exact {
            DistanceOptions::exact()
        } else {
            DistanceOptions::bound(64, 1 ^ r.stream.unwrap())
        };
        let again = distance(&r.code, &options).unwrap();
        let recomputed = !d.exact || again.distance == d.distance;
        if !triortho || !quasi || !recomputed || d.distance < 4 || r.k < 8 {
            failures.push(format!("[[{},{},{}]] triortho={triortho} quasi={quasi}", r.n, r.k, d));
        }
    }
    let best = results
        .iter()
        .filter(|r| r.k >= 8 && r.distance.as_ref().is_some_and(|d| d.exact && d.distance >= 4))
        .min_by(|a, b| a.gamma.partial_cmp(&b.gamma).unwrap());
    let ok = failures.is_empty() && best.is_some();
    let detail = match best {
        Some(b) => format!(
            "{} candidates, best [[{},{},{}]] gamma {:.4}, failures {failures:?}, {:.1?}",
            results.len(),
            b.n,
            b.k,
            b.distance.as_ref().unwrap(),
            b.gamma.unwrap(),
            start.elapsed()
        ),
        None => format!("{} candidates, none with k >= 8 and exact d >= 4", results.len()),
    };
    report("puncture_search_meets_targets", ok, &detail);
}

/// Order of the permutation group generated by `gens`, by closure.
fn permutation_group_order(gens: &[Vec<usize>]) -> usize {
    let identity: Vec<usize> = (0..gens[0].len()).collect();
    let mut seen = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Vec<usize> = p.iter().map(|&i| g[i]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.len()
}

fn transposition(n: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(a, b);
    p
}

/// `k_oracle = log2 |ker Sz| - log2 |span Sx|` by enumeration.
fn brute_force_k(code: &CssCode) -> usize {
    let n = code.n();
    assert!(n <= 24);
    let sz: Vec<u64> = code.sz().rows().iter().map(to_mask).collect();
    let kernel = (0u64..1 << n)
        .filter(|&v| sz.iter().all(|&r| (v & r).count_ones() % 2 == 0))
        .count();
    let sx: Vec<u64> = code.sx().rows().iter().map(to_mask).collect();
    let mut span = HashSet::from([0u64]);
    for &r in &sx {
        let shifted: Vec<u64> = span.iter().map(|&v| v ^ r).collect();
        span.extend(shifted);
    }
    (kernel.trailing_zeros() - span.len().trailing_zeros()) as usize
}

#[test]
fn coxeter_group_pipeline() {
    let start = Instant::now();
    let a3 = GroupPresentation::linear_coxeter(&[3, 3]).unwrap();
    let rel = coxeter_relation(&a3, false).unwrap();
    let code = build_pin_code(&rel, 1, 1).unwrap();
    let oracle_k = brute_force_k(&code);

    let s4 = [transposition(4, 0, 1), transposition(4, 1, 2), transposition(4, 2, 3)];
    // Signed permutations of {1, 2, 3} on the points ±1, ±2, ±3.
    let b3 = {
        let swap12 = vec![1, 0, 2, 4, 3, 5];
        let swap23 = vec![0, 2, 1, 3, 5, 4];
        let negate3 = vec![0, 1, 5, 3, 4, 2];
        [swap12, swap23, negate3]
    };
    // Reflections of a pentagon through vertex 0 and through the edge {0, 1}.
    let d5 = [
        (0..5).map(|i| (5 - i) % 5).collect::<Vec<_>>(),
        (0..5).map(|i| (6 - i) % 5).collect::<Vec<_>>(),
    ];
    let groups = [
        ("A3", a3.clone(), s4.to_vec()),
        ("B3", GroupPresentation::linear_coxeter(&[3, 4]).unwrap(), b3.to_vec()),
        ("I2(5)", GroupPresentation::linear_coxeter(&[5]).unwrap(), d5.to_vec()),
    ];
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    for (name, p, perms) in &groups {
        let order = permutation_group_order(perms);
        let cosets = todd_coxeter(p, &[], 10_000).unwrap().len();
        // Parabolic subgroup without the last generator.
        let last = perms.len() - 1;
        let sub: Vec<Vec<Letter>> = (0..last).map(|g| vec![Letter::gen(g)]).collect();
        let index = todd_coxeter(p, &sub, 10_000).unwrap().len();
        let sub_order = permutation_group_order(&perms[..last]);
        counts.push(format!("{name} {cosets}/{order} index {index}/{}", order / sub_order));
        if cosets != order || index * sub_order != order {
            failures.push(name.to_string());
        }
    }
    let elapsed = start.elapsed();
    let ok = rel.num_flags() == 24
        && rel.level_sizes() == vec![4, 6, 4]
        && code.k() == oracle_k
        && failures.is_empty()
        && elapsed < Duration::from_secs(60);
    let detail = format!(
        "A3 flags {} levels {:?}, (1,1) k={} oracle {oracle_k}; {}; {elapsed:.1?}",
        rel.num_flags(),
        rel.level_sizes(),
        code.k(),
        counts.join(", ")
    );
    report("coxeter_group_pipeline", ok, &detail);
}

fn corpus() -> Vec<(String, BitMatrix, BitMatrix)> {
    let mut codes: Vec<(String, CssCode)> = Vec::new();
    codes.push(("steane".into(), build_pin_code(&steane_relation().unwrap(), 1, 1).unwrap()));
    codes.push(("single pin".into(), build_pin_code(&single_pin_relation().unwrap(), 1, 1).unwrap()));
    for (m, x, z) in [(3, 1, 1), (4, 1, 1), (4, 1, 2), (4, 2, 1), (5, 1, 2), (5, 1, 3), (5, 2, 2)] {
        let rel = reed_muller_relation(m).unwrap();
        codes.push((format!("2^{m} ({x},{z})"), build_pin_code(&rel, x, z).unwrap()));
    }
    let tri = triangular_color_relation(3, 4).unwrap();
    codes.push(("triangular".into(), build_pin_code(&tri, 1, 1).unwrap()));
    let honeycomb = from_chain_complex(&torus_tiling(TilingKind::Hexagonal, 2, 2).unwrap(), None).unwrap();
    codes.push(("honeycomb".into(), build_pin_code(&honeycomb, 1, 1).unwrap()));
    let square = from_chain_complex(&torus_tiling(TilingKind::SquareOctagon, 2, 2).unwrap(), None).unwrap();
    codes.push(("square octagon".into(), build_pin_code(&square, 1, 1).unwrap()));
    let a3 = coxeter_relation(&GroupPresentation::linear_coxeter(&[3, 3]).unwrap(), false).unwrap();
    codes.push(("A3".into(), build_pin_code(&a3, 1, 1).unwrap()));
    let rm = reed_muller_relation(5).unwrap().stabilizer_matrix(1).0;
    codes.push(("punctured 2^5".into(), triortho_split(&rm).unwrap().code().unwrap()));
    let rm7 = reed_muller_relation(7).unwrap().stabilizer_matrix(2).0;
    codes.push((
        "split 2^7".into(),
        triortho_split_at(&rm7, &[0, 1, 2, 4, 8]).unwrap().code().unwrap(),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut random = 0;
    for _ in 0..20_000 {
        if random == 80 {
            break;
        }
        let rel = match random % 3 {
            0 => random_complete(&mut rng),
            1 => match from_chain_complex(&random_sparse_complex(&mut rng), None) {
                Ok(r) => r,
                Err(_) => continue,
            },
            _ => match from_chain_complex(&random_product(&mut rng), None) {
                Ok(r) => r,
                Err(_) => continue,
            },
        };
        if rel.num_flags() == 0 || rel.num_flags() > MAX_FLAGS || rel.d() < 2 {
            continue;
        }
        let x = rng.gen_range(1..rel.d());
        let z = rng.gen_range(1..=rel.d() - x);
        let code = build_pin_code(&rel, x, z).unwrap();
        if code.k() > 0 && code.k() + code.sx().rank() <= 20 {
            codes.push((format!("random #{random}"), code));
            random += 1;
        }
    }
    codes
        .into_iter()
        .filter_map(|(name, code)| {
            let lx = logical_basis(&code).lx;
            let sx = code.sx().clone();
            (lx.nrows() > 0 && lx.nrows() + sx.rank() <= 20).then_some((name, lx, sx))
        })
        .collect()
}

#[test]
fn transversality_matches_exhaustive_check() {
    let start = Instant::now();
    let codes = corpus();
    let mut checks = 0;
    let mut failing_levels = 0;
    let mut failures = Vec::new();
    for (name, lx, sx) in &codes {
        for level in 1..=4 {
            checks += 1;
            let exact = exact_conditions(lx, sx, level).unwrap().passed;
            let quasi = quasi_conditions(lx, sx, level).unwrap().passed;
            let full = exhaustive_transversality(lx, sx, level).unwrap();
            failing_levels += usize::from(!full.exact) + usize::from(!full.quasi);
            if exact != full.exact || quasi != full.quasi {
                failures.push(format!(
                    "{name} level {level}: generators {exact}/{quasi}, exhaustive {}/{}",
                    full.exact, full.quasi
                ));
            }
        }
    }
    let ok = failures.is_empty() && codes.len() >= 50;
    let detail = format!(
        "{} codes, {checks} level checks, {failing_levels} exhaustive failures all caught, mismatches {failures:?}, {:.1?}",
        codes.len(),
        start.elapsed()
    );
    report("transversality_matches_exhaustive_check", ok, &detail);
}
