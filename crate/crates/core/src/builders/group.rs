use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::relation::{GroupAction, Level, PinCodeRelation};

/// Default limit on the number of cosets defined during enumeration.
pub const DEFAULT_COSET_CAP: usize = 1_000_000;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub const fn gen(generator: usize) -> Self {
        Self {
            generator,
            inverse: false,
        }
    }

    pub const fn inv(generator: usize) -> Self {
        Self {
            generator,
            inverse: true,
        }
    }
}

/// Finitely presented group `⟨a_0, …, a_D | relators⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    num_generators: usize,
    involutions: Vec<bool>,
    relators: Vec<Vec<Letter>>,
}

impl GroupPresentation {
    /// Involution marks add the relator `g²` implicitly.
    pub fn new(num_generators: usize, involutions: Vec<bool>, relators: Vec<Vec<Letter>>) -> Result<Self> {
        if num_generators == 0 {
            return Err(Error::InvalidParameters("a presentation needs a generator".into()));
        }
        if involutions.len() != num_generators {
            return Err(Error::InvalidParameters("one involution mark per generator".into()));
        }
        if let Some(l) = relators.iter().flatten().find(|l| l.generator >= num_generators) {
            return Err(Error::InvalidParameters(format!(
                "relator uses generator {} of {num_generators}",
                l.generator
            )));
        }
        Ok(Self {
            num_generators,
            involutions,
            relators,
        })
    }

    /// Coxeter group with `(a_i a_j)^{m[i][j]}`; entries of 0 mean no relation.
    pub fn coxeter(m: &[Vec<usize>]) -> Result<Self> {
        let n = m.len();
        let mut relators = Vec::new();
        for i in 0..n {
            if m[i].len() != n {
                return Err(Error::InvalidParameters("Coxeter matrix must be square".into()));
            }
            for j in i + 1..n {
                if m[i][j] != m[j][i] {
                    return Err(Error::InvalidParameters("Coxeter matrix must be symmetric".into()));
                }
                if m[i][j] > 0 {
                    let mut w = Vec::with_capacity(2 * m[i][j]);
                    for _ in 0..m[i][j] {
                        w.push(Letter::gen(i));
                        w.push(Letter::gen(j));
                    }
                    relators.push(w);
                }
            }
        }
        Self::new(n, vec![true; n], relators)
    }

    /// Linear Coxeter diagram: `(a_i a_{i+1})^{orders[i]}`, other pairs commute.
    pub fn linear_coxeter(orders: &[usize]) -> Result<Self> {
        let n = orders.len() + 1;
        let mut m = vec![vec![2; n]; n];
        for (i, &o) in orders.iter().enumerate() {
            m[i][i + 1] = o;
            m[i + 1][i] = o;
        }
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        Self::coxeter(&m)
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn involutions(&self) -> &[bool] {
        &self.involutions
    }

    pub fn relators(&self) -> &[Vec<Letter>] {
        &self.relators
    }
}

/// Complete coset table: `action[c][g]` is the coset `c · a_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub action: Vec<Vec<usize>>,
    pub inverse_action: Vec<Vec<usize>>,
    pub subgroup_generators: Vec<Vec<Letter>>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.action.len()
    }

    pub fn is_empty(&self) -> bool {
        self.action.is_empty()
    }

    /// Coset reached from `c` by reading `word`.
    pub fn apply(&self, mut c: usize, word: &[Letter]) -> usize {
        for l in word {
            c = if l.inverse {
                self.inverse_action[c][l.generator]
            } else {
                self.action[c][l.generator]
            };
        }
        c
    }
}

const NONE: usize = usize::MAX;

/// State of an HLT enumeration. Each generator has a column; generators
/// that are not involutions get a second column for the inverse.
struct Enumerator {
    cols: usize,
    fwd: Vec<usize>,
    inv_col: Vec<usize>,
    table: Vec<usize>,
    parent: Vec<usize>,
    cap: usize,
    queue: Vec<usize>,
}

impl Enumerator {
    fn new(p: &GroupPresentation, cap: usize) -> Self {
        let mut fwd = Vec::with_capacity(p.num_generators);
        let mut inv_col = Vec::new();
        for g in 0..p.num_generators {
            let c = inv_col.len();
            fwd.push(c);
            if p.involutions[g] {
                inv_col.push(c);
            } else {
                inv_col.push(c + 1);
                inv_col.push(c);
            }
        }
        let cols = inv_col.len();
        Self {
            cols,
            fwd,
            inv_col,
            table: vec![NONE; cols],
            parent: vec![0],
            cap,
            queue: Vec::new(),
        }
    }

    fn column(&self, l: Letter) -> usize {
        let c = self.fwd[l.generator];
        if l.inverse {
            self.inv_col[c]
        } else {
            c
        }
    }

    #[inline]
    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.cols + x]
    }

    #[inline]
    fn put(&mut self, c: usize, x: usize, v: usize) {
        self.table[c * self.cols + x] = v;
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        let d = self.parent.len();
        if d >= self.cap {
            return Err(Error::EnumerationBudget { cap: self.cap });
        }
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.put(c, x, d);
        self.put(d, self.inv_col[x], c);
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut k = c;
        while self.parent[k] != root {
            let next = self.parent[k];
            self.parent[k] = root;
            k = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        self.parent[drop] = keep;
        self.queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                let xi = self.inv_col[x];
                if self.get(f, xi) == e {
                    self.put(f, xi, NONE);
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let t = self.get(e1, x);
                if t != NONE {
                    self.merge(f1, t);
                } else {
                    let u = self.get(f1, xi);
                    if u != NONE {
                        self.merge(e1, u);
                    } else {
                        self.put(e1, x, f1);
                        self.put(f1, xi, e1);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, word: &[usize]) -> Result<()> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = word.len() - 1;
        loop {
            while i <= j && self.get(f, word[i]) != NONE {
                f = self.get(f, word[i]);
                i += 1;
            }
            if i > j {
                if f != c {
                    self.coincidence(f, c);
                }
                return Ok(());
            }
            while j >= i && self.get(b, self.inv_col[word[j]]) != NONE {
                b = self.get(b, self.inv_col[word[j]]);
                if j == 0 {
                    // The whole word scanned backwards; i must be 0 here.
                    self.coincidence(f, b);
                    return Ok(());
                }
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            } else if i == j {
                self.put(f, word[i], b);
                self.put(b, self.inv_col[word[i]], f);
                return Ok(());
            } else {
                self.define(f, word[i])?;
            }
        }
    }
}

/// Coset enumeration of the subgroup generated by `subgroup` (words).
///
/// Uses the HLT strategy with at most `cap` coset definitions. The returned
/// table is renumbered in breadth-first order from the subgroup coset, so
/// it does not depend on the order in which cosets were defined.
pub fn todd_coxeter(p: &GroupPresentation, subgroup: &[Vec<Letter>], cap: usize) -> Result<CosetTable> {
    if let Some(l) = subgroup.iter().flatten().find(|l| l.generator >= p.num_generators) {
        return Err(Error::InvalidParameters(format!("subgroup word uses generator {}", l.generator)));
    }
    let mut e = Enumerator::new(p, cap.max(1));
    let to_cols = |e: &Enumerator, w: &[Letter]| w.iter().map(|&l| e.column(l)).collect::<Vec<_>>();
    let mut relators: Vec<Vec<usize>> = p.relators.iter().map(|w| to_cols(&e, w)).collect();
    for g in 0..p.num_generators {
        if p.involutions[g] {
            relators.push(vec![e.fwd[g], e.fwd[g]]);
        }
    }
    let sub: Vec<Vec<usize>> = subgroup.iter().map(|w| to_cols(&e, w)).collect();
    for w in &sub {
        e.scan_and_fill(0, w)?;
    }
    let mut c = 0;
    while c < e.parent.len() {
        for r in &relators {
            if !e.is_live(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        if e.is_live(c) {
            for x in 0..e.cols {
                if e.get(c, x) == NONE {
                    e.define(c, x)?;
                }
            }
        }
        c += 1;
    }

    // Breadth-first renumbering of the live cosets.
    let total = e.parent.len();
    let mut number = vec![NONE; total];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    number[0] = 0;
    order.push(0);
    while let Some(c) = queue.pop_front() {
        for g in 0..p.num_generators {
            for x in [e.fwd[g], e.inv_col[e.fwd[g]]] {
                let t = e.rep(e.get(c, x));
                if number[t] == NONE {
                    number[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
    }
    let mut action = Vec::with_capacity(order.len());
    let mut inverse_action = Vec::with_capacity(order.len());
    for &c in &order {
        let mut fwd = Vec::with_capacity(p.num_generators);
        let mut back = Vec::with_capacity(p.num_generators);
        for g in 0..p.num_generators {
            let a = e.get(c, e.fwd[g]);
            let b = e.get(c, e.inv_col[e.fwd[g]]);
            fwd.push(number[e.rep(a)]);
            back.push(number[e.rep(b)]);
        }
        action.push(fwd);
        inverse_action.push(back);
    }
    Ok(CosetTable {
        action,
        inverse_action,
        subgroup_generators: subgroup.to_vec(),
    })
}

/// Flag relation of a group generated by involutions `a_0 … a_D`.
///
/// Flags are group elements. The pin of `g` at rank `j` is the left coset
/// `g H_j` with `H_j = ⟨a_i : i ≠ j⟩`, numbered by smallest element. With
/// `split`, stabilizer supports of type `t` become the cosets of
/// `⟨a_i : i ∉ t⟩` instead of whole pinned sets.
pub fn coxeter_relation(p: &GroupPresentation, split: bool) -> Result<PinCodeRelation> {
    coxeter_relation_with_cap(p, split, DEFAULT_COSET_CAP)
}

pub fn coxeter_relation_with_cap(p: &GroupPresentation, split: bool, cap: usize) -> Result<PinCodeRelation> {
    if let Some(g) = p.involutions.iter().position(|&i| !i) {
        return Err(Error::InvalidParameters(format!("generator {g} is not marked as an involution")));
    }
    let table = todd_coxeter(p, &[], cap)?;
    let n = table.len();
    let levels_count = p.num_generators;
    let mut pins = vec![vec![0usize; levels_count]; n];
    let mut sizes = vec![0usize; levels_count];
    for j in 0..levels_count {
        let mut seen = vec![NONE; n];
        let mut next = 0;
        for start in 0..n {
            if seen[start] != NONE {
                continue;
            }
            seen[start] = next;
            let mut stack = vec![start];
            while let Some(g) = stack.pop() {
                for (i, row) in table.action[g].iter().enumerate() {
                    if i != j && seen[*row] == NONE {
                        seen[*row] = next;
                        stack.push(*row);
                    }
                }
            }
            next += 1;
        }
        sizes[j] = next;
        for g in 0..n {
            pins[g][j] = seen[g];
        }
    }
    let levels = sizes.iter().map(|&s| Level::numbered(s)).collect();
    let generators = (0..levels_count)
        .map(|i| (0..n).map(|g| table.action[g][i] as u32).collect())
        .collect();
    PinCodeRelation::new(levels, pins)?.with_group_action(GroupAction { generators, split })
}

/// Writes the presentation text format.
///
/// ```text
/// generators 3
/// involutions 0 1 2
/// relator 0 1 ^3
/// relator 0 2 ^2
/// ```
///
/// Relator tokens are generator indices, a trailing `'` marks an inverse,
/// and a final `^k` repeats the whole word `k` times.
pub fn write_presentation(p: &GroupPresentation) -> String {
    let mut out = format!("generators {}\n", p.num_generators);
    out.push_str("involutions");
    for (g, &inv) in p.involutions.iter().enumerate() {
        if inv {
            let _ = write!(out, " {g}");
        }
    }
    out.push('\n');
    for r in &p.relators {
        out.push_str("relator");
        for l in r {
            let _ = write!(out, " {}{}", l.generator, if l.inverse { "'" } else { "" });
        }
        out.push('\n');
    }
    out
}

pub fn read_presentation(text: &str) -> Result<GroupPresentation> {
    let mut n: Option<usize> = None;
    let mut involutions: Option<Vec<bool>> = None;
    let mut relators = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next().unwrap_or_default() {
            "generators" => {
                let v: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .filter(|&v| v > 0)
                    .ok_or_else(|| Error::parse(line_no, "expected `generators <count>`"))?;
                n = Some(v);
            }
            "involutions" => {
                let count = n.ok_or_else(|| Error::parse(line_no, "`generators` must come first"))?;
                let mut marks = vec![false; count];
                for t in toks {
                    if t == "all" {
                        marks.iter_mut().for_each(|m| *m = true);
                        continue;
                    }
                    let g: usize = t
                        .parse()
                        .ok()
                        .filter(|&g| g < count)
                        .ok_or_else(|| Error::parse(line_no, format!("bad generator {t:?}")))?;
                    marks[g] = true;
                }
                involutions = Some(marks);
            }
            "relator" => {
                let count = n.ok_or_else(|| Error::parse(line_no, "`generators` must come first"))?;
                let mut word = Vec::new();
                let mut power = 1usize;
                let toks: Vec<&str> = toks.collect();
                for (k, t) in toks.iter().enumerate() {
                    if let Some(pw) = t.strip_prefix('^') {
                        if k + 1 != toks.len() {
                            return Err(Error::parse(line_no, "`^k` must end the relator"));
                        }
                        power = pw
                            .parse()
                            .ok()
                            .filter(|&p| p > 0)
                            .ok_or_else(|| Error::parse(line_no, format!("bad power {t:?}")))?;
                        continue;
                    }
                    let (body, inverse) = match t.strip_suffix('\'') {
                        Some(b) => (b, true),
                        None => (*t, false),
                    };
                    let g: usize = body
                        .parse()
                        .ok()
                        .filter(|&g| g < count)
                        .ok_or_else(|| Error::parse(line_no, format!("bad generator {t:?}")))?;
                    word.push(Letter { generator: g, inverse });
                }
                if word.is_empty() {
                    return Err(Error::parse(line_no, "empty relator"));
                }
                relators.push(word.repeat(power));
            }
            other => return Err(Error::parse(line_no, format!("unknown keyword {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing `generators` line"))?;
    GroupPresentation::new(n, involutions.unwrap_or_else(|| vec![false; n]), relators)
}
