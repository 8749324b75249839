//! Generalized ascending parameter words `S_t^<(n,m|k)`.
//!
//! A word is a table `(t+n) × m → t+k`. Rows below `t` are constant. Every other
//! row is either made of constant labels only, or carries exactly one cell of a
//! free class (the partial-function condition together with ascending classes
//! forbids two free cells in one row). Free classes occupy consecutive row
//! ranges and each of them reaches column `m-1` somewhere.
//!
//! Only `t >= 1` is supported: for `t = 0` and `m > 1` the space is empty.

use std::collections::BTreeSet;

use serde_json::json;

use crate::error::{budget, domain, Error, Result};
use crate::space::Space;

pub type Cell = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GapWord {
    t: usize,
    m: usize,
    k: usize,
    cells: Vec<usize>,
}

impl GapWord {
    /// Validating constructor from a row-major cell array.
    pub fn from_cells(t: usize, m: usize, k: usize, cells: Vec<usize>) -> Result<Self> {
        if t == 0 || m == 0 {
            return domain("generalized ascending words need t >= 1 and m >= 1");
        }
        if !cells.len().is_multiple_of(m) {
            return Err(Error::Parse(format!("{} cells do not fill rows of width {m}", cells.len())));
        }
        let w = GapWord { t, m, k, cells };
        w.check()?;
        Ok(w)
    }

    pub fn from_rows(t: usize, m: usize, k: usize, rows: &[Vec<usize>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Parse(format!("every row must have {m} cells")));
        }
        Self::from_cells(t, m, k, rows.concat())
    }

    pub fn empty(t: usize, m: usize) -> Self {
        GapWord { t, m, k: 0, cells: Vec::new() }
    }

    /// Free class `j` is the single cell `(t+j, m-1)`; the other cells of that row are `0`.
    /// This is a right identity for composition (a two-sided one only when `m = 1`).
    pub fn identity(t: usize, m: usize, n: usize) -> Self {
        let mut cells = Vec::with_capacity((t + n) * m);
        for i in 0..t + n {
            for j in 0..m {
                cells.push(if i < t || j == m - 1 { i } else { 0 });
            }
        }
        GapWord { t, m, k: n, cells }
    }

    pub fn t(&self) -> usize {
        self.t
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn k(&self) -> usize {
        self.k
    }
    /// Total number of rows, including the `t` constant ones.
    pub fn rows(&self) -> usize {
        self.cells.len() / self.m
    }
    /// Free rows, `rows - t`; zero for the empty approximation.
    pub fn n(&self) -> usize {
        self.rows().saturating_sub(self.t)
    }
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
    pub fn cells(&self) -> &[usize] {
        &self.cells
    }
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells[i * self.m + j]
    }
    pub fn row(&self, i: usize) -> &[usize] {
        &self.cells[i * self.m..(i + 1) * self.m]
    }

    /// `a_j = A^{-1}({j})`.
    pub fn class(&self, j: usize) -> ClassSet {
        self.class_within(j, self.rows())
    }

    fn class_within(&self, j: usize, rows: usize) -> ClassSet {
        let mut s = BTreeSet::new();
        for i in 0..rows.min(self.rows()) {
            for (c, &x) in self.row(i).iter().enumerate() {
                if x == j {
                    s.insert((i, c));
                }
            }
        }
        ClassSet(s)
    }

    /// The free cell of row `i`, if any: `(column, class)`.
    pub fn free_cell(&self, i: usize) -> Option<(usize, usize)> {
        self.row(i).iter().enumerate().find(|(_, &x)| x >= self.t).map(|(c, &x)| (c, x))
    }

    fn first_row(&self, class: usize) -> Option<usize> {
        (0..self.rows()).find(|&i| self.row(i).contains(&class))
    }

    fn last_row(&self, class: usize) -> Option<usize> {
        (0..self.rows()).rev().find(|&i| self.row(i).contains(&class))
    }

    fn invalid(condition: u8, detail: String) -> Error {
        Error::Invalid { what: "generalized ascending word", condition, detail }
    }

    fn check(&self) -> Result<()> {
        let (t, m, k) = (self.t, self.m, self.k);
        if self.is_empty() {
            return if k == 0 { Ok(()) } else { Err(Self::invalid(4, "empty word with classes".into())) };
        }
        let rows = self.rows();
        if rows < t {
            return Err(Self::invalid(1, format!("{rows} rows but t = {t}")));
        }
        for i in 0..t {
            if let Some(c) = (0..m).find(|&c| self.get(i, c) != i) {
                return Err(Self::invalid(1, format!("A({i},{c}) = {} but must equal {i}", self.get(i, c))));
            }
        }
        if let Some(&x) = self.cells.iter().find(|&&x| x >= t + k) {
            return Err(Self::invalid(4, format!("label {x} outside 0..{}", t + k)));
        }
        let mut last_free = t;
        let mut has_top = vec![false; k];
        for i in t..rows {
            let free: Vec<(usize, usize)> =
                self.row(i).iter().enumerate().filter(|(_, &x)| x >= t).map(|(c, &x)| (c, x)).collect();
            match free.as_slice() {
                [] => {}
                [(c, x)] => {
                    if *x > last_free {
                        return Err(Self::invalid(5, format!("class {x} starts at row {i} before class {last_free}")));
                    }
                    if *x + 1 < last_free {
                        return Err(Self::invalid(6, format!("class {x} reappears at row {i} after class {}", last_free - 1)));
                    }
                    if *x == last_free {
                        last_free += 1;
                    }
                    if *c == m - 1 {
                        has_top[*x - t] = true;
                    }
                }
                [(_, x), (_, y), ..] if x == y => {
                    return Err(Self::invalid(2, format!("class {x} has two cells in row {i}")));
                }
                [(_, x), (_, y), ..] => {
                    return Err(Self::invalid(6, format!("classes {x} and {y} share row {i}")));
                }
            }
        }
        if last_free != t + k {
            return Err(Self::invalid(4, format!("class {last_free} is empty")));
        }
        if let Some(j) = has_top.iter().position(|&b| !b) {
            return Err(Self::invalid(4, format!("class {} never reaches column {}", t + j, m - 1)));
        }
        Ok(())
    }

    fn prefix_rows(&self, rows: usize, k: usize) -> GapWord {
        GapWord { t: self.t, m: self.m, k, cells: self.cells[..rows * self.m].to_vec() }
    }

    /// `r_n(A)`: the rows before the first row of class `t+n`.
    pub fn restrict(&self, n: usize) -> Result<GapWord> {
        if n > self.k {
            return budget(format!("r_{n} needs class {} but the word has {} free classes", self.t + n, self.k));
        }
        if n == 0 {
            return Ok(GapWord::empty(self.t, self.m));
        }
        if n == self.k {
            return Ok(self.clone());
        }
        Ok(self.prefix_rows(self.first_row(self.t + n).expect("surjective"), n))
    }

    /// `(A·B)(i,j) = B(A(i,j), m-1)`.
    pub fn compose(&self, b: &GapWord) -> Result<GapWord> {
        if self.t != b.t || self.m != b.m {
            return domain("compose: words differ in t or m");
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        if self.k != b.n() {
            return domain(format!("compose: codomain extent {} vs domain extent {}", self.k, b.n()));
        }
        let cells = self.cells.iter().map(|&x| b.get(x, self.m - 1)).collect();
        Ok(GapWord { t: self.t, m: self.m, k: b.k, cells })
    }

    /// `π`: labels `>= t+k` collapse to `0`.
    pub fn project(&self, k: usize) -> Result<GapWord> {
        if k > self.k {
            return domain(format!("project({k}) of a word with {} free classes", self.k));
        }
        let limit = self.t + k;
        let cells = self.cells.iter().map(|&x| if x >= limit { 0 } else { x }).collect();
        GapWord::from_cells(self.t, self.m, k, cells)
    }

    /// Same rows and constant on every class of `b`, i.e. `self = b·c` for some `c`.
    pub fn factors_through(&self, b: &GapWord) -> bool {
        if self.t != b.t || self.m != b.m || self.cells.len() != b.cells.len() {
            return false;
        }
        let mut image = vec![usize::MAX; b.t + b.k];
        for (&x, &y) in b.cells.iter().zip(&self.cells) {
            if image[x] == usize::MAX {
                image[x] = y;
            } else if image[x] != y {
                return false;
            }
        }
        true
    }

    /// Every row past the last row of the last class. A row whose top cell is a
    /// nonzero constant cannot start a lifted class, but a class boundary of `A`
    /// can land on such a row in `A∘X`, so those rows count as cuts too.
    pub fn cut_rows(&self) -> Vec<usize> {
        if self.is_empty() {
            return Vec::new();
        }
        let start = if self.k == 0 { self.t } else { 1 + self.last_row(self.t + self.k - 1).expect("surjective") };
        (start..self.rows()).collect()
    }
}

/// A finite set of cells; the input and output of the tetris operation.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassSet(pub BTreeSet<Cell>);

impl ClassSet {
    pub fn from_cells(cells: impl IntoIterator<Item = Cell>) -> Self {
        ClassSet(cells.into_iter().collect())
    }

    /// `T(S) = {(i, max(0, j-1))}`.
    pub fn tetris(&self) -> ClassSet {
        ClassSet(self.0.iter().map(|&(i, j)| (i, j.saturating_sub(1))).collect())
    }

    pub fn tetris_pow(&self, l: usize) -> ClassSet {
        ClassSet(self.0.iter().map(|&(i, j)| (i, j.saturating_sub(l))).collect())
    }

    pub fn union(&self, other: &ClassSet) -> ClassSet {
        ClassSet(self.0.union(&other.0).copied().collect())
    }

    pub fn minus(&self, other: &ClassSet) -> ClassSet {
        ClassSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn below_row(&self, rows: usize) -> ClassSet {
        ClassSet(self.0.iter().filter(|c| c.0 < rows).copied().collect())
    }

    pub fn contains(&self, c: &Cell) -> bool {
        self.0.contains(c)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `S^l(a_n)`: `T^{l-t}(a_n)` for `t <= l < t+m`, and `a_n ∪ a_l` for `l < t`.
pub fn s_op(l: usize, n: usize, a: &GapWord) -> Result<ClassSet> {
    if l >= a.t + a.m {
        return domain(format!("S^{l} needs l < t+m = {}", a.t + a.m));
    }
    if n < a.t || n >= a.t + a.k {
        return domain(format!("class {n} is not a free class of the word"));
    }
    let an = a.class(n);
    Ok(if l >= a.t { an.tetris_pow(l - a.t) } else { an.union(&a.class(l)) })
}

/// `S^{l_1}(a_{n_1}) + … + S^{l_q}(a_{n_q})`, stored as `(l_i, n_i)` with strictly increasing `n_i >= t`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    terms: Vec<(usize, usize)>,
}

impl Symbol {
    pub fn new(t: usize, m: usize, terms: Vec<(usize, usize)>) -> Result<Self> {
        if terms.is_empty() {
            return domain("a symbol needs at least one term");
        }
        if terms.iter().any(|&(l, n)| l >= t + m || n < t) {
            return domain(format!("symbol terms need l < {} and n >= {t}", t + m));
        }
        if terms.windows(2).any(|w| w[0].1 >= w[1].1) {
            return domain("symbol class indices must be strictly increasing");
        }
        if !terms.iter().any(|&(l, _)| l == t) {
            return domain(format!("some term must have l = t = {t}"));
        }
        Ok(Symbol { terms })
    }

    pub fn terms(&self) -> &[(usize, usize)] {
        &self.terms
    }

    /// `S^0` sends a class to the constant `0`, exactly like leaving it out,
    /// except as the last term, where it still pushes the image window past its class.
    pub fn is_canonical(&self) -> bool {
        let body = &self.terms[..self.terms.len() - 1];
        body.iter().all(|&(l, _)| l != 0)
    }

    fn last_class(&self) -> usize {
        self.terms.last().expect("nonempty").1
    }
}

/// Free rows `e` of the image of a symbol: up to the first row of the class after the last listed one.
fn image_rows(sym: &Symbol, a: &GapWord) -> Result<usize> {
    let last = sym.last_class();
    if last >= a.t + a.k {
        return domain(format!("class {last} is not realized in the word"));
    }
    Ok(if last + 1 == a.t + a.k { a.rows() } else { a.first_row(last + 1).expect("surjective") })
}

/// The one-class word a symbol stands for. Constant cells keep their labels,
/// unlisted free classes become `0`, a term with `l < t` relabels its whole
/// class to `l`, and a term with `l >= t` moves each cell of its class
/// `l - t` columns left (clamped at column `0`) into class `t`, leaving `0` behind.
pub fn symbol_to_function(sym: &Symbol, a: &GapWord) -> Result<GapWord> {
    let (t, m) = (a.t, a.m);
    let rows = image_rows(sym, a)?;
    let mut cells = a.cells[..rows * m].to_vec();
    for i in t..rows {
        let Some((c, x)) = a.free_cell(i) else { continue };
        cells[i * m + c] = 0;
        match sym.terms.iter().find(|&&(_, n)| n == x) {
            None => {}
            Some(&(l, _)) if l < t => cells[i * m + c] = l,
            Some(&(l, _)) => cells[i * m + c.saturating_sub(l - t)] = t,
        }
    }
    GapWord::from_cells(t, m, 1, cells)
}

/// Every symbol over the free classes of `a`, in canonical order.
pub fn symbols(a: &GapWord, canonical_only: bool) -> Vec<Symbol> {
    let (t, m) = (a.t, a.m);
    // choice usize::MAX means the class is not listed
    let options: Vec<usize> = std::iter::once(usize::MAX).chain(0..t + m).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; a.k];
    loop {
        let terms: Vec<(usize, usize)> = choice
            .iter()
            .enumerate()
            .filter(|(_, &o)| options[o] != usize::MAX)
            .map(|(j, &o)| (options[o], t + j))
            .collect();
        if let Ok(s) = Symbol::new(t, m, terms) {
            if !canonical_only || s.is_canonical() {
                out.push(s);
            }
        }
        let mut p = 0;
        loop {
            if p == a.k {
                out.sort();
                return out;
            }
            choice[p] += 1;
            if choice[p] < options.len() {
                break;
            }
            choice[p] = 0;
            p += 1;
        }
    }
}

/// Reads the symbol back off a one-class word, or `None` when `f` is not the image of any symbol over `a`.
pub fn decode(f: &GapWord, a: &GapWord) -> Option<Symbol> {
    if f.t != a.t || f.m != a.m || f.k != 1 || f.rows() > a.rows() {
        return None;
    }
    let (t, m) = (a.t, a.m);
    let mut terms = Vec::new();
    let mut last = None;
    for x in t..t + a.k {
        let Some(i) = (t..f.rows()).find(|&i| a.get(i, m - 1) == x) else { break };
        last = Some(x);
        let top = f.get(i, m - 1);
        if top == t {
            terms.push((t, x));
        } else if top != 0 {
            terms.push((top, x));
        } else if let Some(c) = (0..m).find(|&c| f.get(i, c) == t) {
            terms.push((t + m - 1 - c, x));
        }
    }
    if let Some(x) = last.filter(|&x| terms.last().map(|&(_, n)| n) != Some(x)) {
        terms.push((0, x));
    }
    let sym = Symbol::new(t, m, terms).ok()?;
    (symbol_to_function(&sym, a).ok()? == *f).then_some(sym)
}

/// Decode by exhaustive search over all canonical symbols of `a`.
pub fn decode_by_search(f: &GapWord, a: &GapWord) -> Option<Symbol> {
    symbols(a, true).into_iter().find(|s| symbol_to_function(s, a).ok().as_ref() == Some(f))
}

/// The clause-by-clause definition of the image of a symbol, evaluated literally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralImage {
    /// Cells claimed by two clauses with different labels.
    pub overlaps: Vec<Cell>,
    /// Cells of the window claimed by no clause.
    pub gaps: Vec<Cell>,
    /// Two clauses assign the same label.
    pub repeated_labels: bool,
    /// The function, when the clauses partition the window into a valid word.
    pub function: Option<GapWord>,
}

pub fn literal_image(sym: &Symbol, a: &GapWord) -> Result<LiteralImage> {
    let (t, m) = (a.t, a.m);
    let rows = image_rows(sym, a)?;
    let terms = &sym.terms;
    let listed: BTreeSet<usize> = terms.iter().map(|&(_, n)| n).collect();
    let unlisted = (t..t + a.k)
        .filter(|n| !listed.contains(n))
        .fold(ClassSet::default(), |acc, n| acc.union(&a.class(n)));
    let s = |i: usize| s_op(terms[i].0, terms[i].1, a).expect("valid symbol");
    let union = |range: std::ops::Range<usize>| range.fold(ClassSet::default(), |acc, i| acc.union(&s(i)));
    let mut clauses: Vec<(usize, ClassSet)> = Vec::new();
    let low: Vec<usize> = (0..terms.len()).filter(|&i| terms[i].0 < t).collect();
    if low.is_empty() {
        clauses.push((0, a.class(0).union(&unlisted)));
        for j in 1..t {
            clauses.push((j, a.class(j)));
        }
        clauses.push((t, union(0..terms.len())));
    } else {
        let j0 = terms.iter().position(|&(l, _)| l == t).expect("symbol invariant");
        let anj0 = a.class(terms[j0].1);
        let low_labels: BTreeSet<usize> = low.iter().map(|&i| terms[i].0).collect();
        for j in (0..t).filter(|j| !low_labels.contains(j)) {
            clauses.push((j, a.class(j)));
        }
        clauses.push((terms[low[0]].0, unlisted.union(&union(0..low[0] + 1)).minus(&anj0)));
        for d in 0..low.len() - 1 {
            clauses.push((terms[low[d + 1]].0, union(low[d] + 1..low[d + 1] + 1).minus(&anj0)));
        }
        let ip = *low.last().expect("nonempty");
        let top = if ip + 1 < terms.len() { union(ip + 1..terms.len()).union(&anj0) } else { anj0 };
        clauses.push((t, top));
    }
    let labels: Vec<usize> = clauses.iter().map(|c| c.0).collect();
    let repeated_labels = labels.iter().collect::<BTreeSet<_>>().len() != labels.len();
    let mut assigned: Vec<Option<usize>> = vec![None; rows * m];
    let mut overlaps = BTreeSet::new();
    for (label, set) in &clauses {
        for &(i, j) in set.below_row(rows).0.iter() {
            match assigned[i * m + j] {
                None => assigned[i * m + j] = Some(*label),
                Some(x) if x == *label => {}
                Some(_) => {
                    overlaps.insert((i, j));
                }
            }
        }
    }
    let gaps: Vec<Cell> = (0..rows * m).filter(|&p| assigned[p].is_none()).map(|p| (p / m, p % m)).collect();
    let function = if overlaps.is_empty() && gaps.is_empty() {
        GapWord::from_cells(t, m, 1, assigned.into_iter().map(|x| x.expect("no gaps")).collect()).ok()
    } else {
        None
    };
    Ok(LiteralImage { overlaps: overlaps.into_iter().collect(), gaps, repeated_labels, function })
}

/// Membership of a one-class word in `[a]`.
pub fn bracket_contains(a: &GapWord, f: &GapWord) -> bool {
    decode(f, a).is_some()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeOutcome {
    True,
    False,
    Indeterminate,
}

/// `B ≤ A` iff `[B] ⊆ [A]`, with `[B]` enumerated up to `max_symbols` symbols.
pub fn le(b: &GapWord, a: &GapWord, max_symbols: usize) -> LeOutcome {
    if b.t != a.t || b.m != a.m {
        return LeOutcome::False;
    }
    let syms = symbols(b, true);
    if syms.len() > max_symbols {
        return LeOutcome::Indeterminate;
    }
    let ok = syms
        .iter()
        .all(|s| symbol_to_function(s, b).map(|f| bracket_contains(a, &f)).unwrap_or(false));
    if ok {
        LeOutcome::True
    } else {
        LeOutcome::False
    }
}

/// Literal relaxed bracket `[b]` membership of a cell set: some sum
/// `S^{l_1}(b_{n_1}) + …` equals `set`, where constant classes may appear
/// (as themselves) and at least one `l_i = t` is needed only when every `n_i >= t`.
pub fn relaxed_bracket_contains(b: &GapWord, set: &ClassSet) -> bool {
    let (t, m) = (b.t, b.m);
    let classes = t + b.k;
    let mut choice = vec![0usize; classes];
    // per constant class: 0 = absent, 1 = present; per free class: 0 = absent, 1 + l
    let width = |x: usize| if x < t { 2 } else { 1 + t + m };
    loop {
        let mut any_const = false;
        let mut any_t = false;
        let mut union = ClassSet::default();
        let mut nonempty = false;
        for (x, &c) in choice.iter().enumerate() {
            if c == 0 {
                continue;
            }
            nonempty = true;
            if x < t {
                any_const = true;
                union = union.union(&b.class(x));
            } else {
                let l = c - 1;
                any_t |= l == t;
                union = union.union(&s_op(l, x, b).expect("in range"));
            }
        }
        if nonempty && (any_const || any_t) && &union == set {
            return true;
        }
        let mut p = 0;
        loop {
            if p == classes {
                return false;
            }
            choice[p] += 1;
            if choice[p] < width(p) {
                break;
            }
            choice[p] = 0;
            p += 1;
        }
    }
}

/// `a ≤_fin b` evaluated from the definition: equal rows and every class of `a` in the relaxed `[b]`.
pub fn le_fin_literal(a: &GapWord, b: &GapWord) -> bool {
    if a.is_empty() || b.is_empty() {
        return a.is_empty() && b.is_empty();
    }
    a.t == b.t && a.rows() == b.rows() && (0..a.t + a.k).all(|j| relaxed_bracket_contains(b, &a.class(j)))
}

/// Exhaustive generator of `S_t^<(n,m|k)` in lexicographic order of the cells.
pub fn enumerate(t: usize, m: usize, n: usize, k: usize) -> Vec<GapWord> {
    let mut out = Vec::new();
    if t == 0 || m == 0 {
        return out;
    }
    if n == 0 && k == 0 {
        out.push(GapWord { t, m, k, cells: GapWord::identity(t, m, 0).cells });
        return out;
    }
    if k > n {
        return out;
    }
    let constants = constant_rows(t, m);
    let mut cells = GapWord::identity(t, m, 0).cells;
    fill(t, m, n, k, &constants, &mut cells, t, true, &mut out);
    out
}

fn constant_rows(t: usize, m: usize) -> Vec<Vec<usize>> {
    let mut rows = vec![Vec::new()];
    for _ in 0..m {
        rows = rows.into_iter().flat_map(|r| (0..t).map(move |x| [r.clone(), vec![x]].concat())).collect();
    }
    rows
}

#[allow(clippy::too_many_arguments)]
fn fill(
    t: usize,
    m: usize,
    n: usize,
    k: usize,
    constants: &[Vec<usize>],
    cells: &mut Vec<usize>,
    next: usize,
    closed: bool,
    out: &mut Vec<GapWord>,
) {
    let done = cells.len() / m - t;
    if done == n {
        if next == t + k && closed {
            out.push(GapWord { t, m, k, cells: cells.clone() });
        }
        return;
    }
    if t + k - next > n - done {
        return;
    }
    // candidate rows with the resulting (next, closed) state
    let mut candidates: Vec<(Vec<usize>, usize, bool)> = constants.iter().map(|r| (r.clone(), next, closed)).collect();
    for r in constants {
        for c in 0..m {
            if next > t {
                let mut row = r.clone();
                row[c] = next - 1;
                candidates.push((row, next, closed || c == m - 1));
            }
            if closed && next < t + k {
                let mut row = r.clone();
                row[c] = next;
                candidates.push((row, next + 1, c == m - 1));
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    for (row, nx, cl) in candidates {
        cells.extend_from_slice(&row);
        fill(t, m, n, k, constants, cells, nx, cl, out);
        cells.truncate(cells.len() - m);
    }
}

/// `S_t^<(·,m|·)` as a [`Space`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapSpace {
    pub t: usize,
    pub m: usize,
}

impl GapSpace {
    pub fn new(t: usize, m: usize) -> Result<Self> {
        if t == 0 || m == 0 {
            return domain("generalized ascending words need t >= 1 and m >= 1");
        }
        Ok(GapSpace { t, m })
    }
}

impl Space for GapSpace {
    type Elem = GapWord;

    fn id(&self) -> String {
        format!("gapw(t={},m={})", self.t, self.m)
    }

    fn validate(&self, a: &GapWord) -> Result<()> {
        if a.t != self.t || a.m != self.m {
            return domain(format!("word does not belong to {}", self.id()));
        }
        a.check()
    }

    fn empty(&self) -> GapWord {
        GapWord::empty(self.t, self.m)
    }

    fn depth(&self, a: &GapWord) -> usize {
        a.k
    }

    fn dom_extent(&self, a: &GapWord) -> usize {
        a.n()
    }

    fn cod_extent(&self, a: &GapWord) -> usize {
        a.k
    }

    fn restrict(&self, n: usize, a: &GapWord) -> Result<GapWord> {
        a.restrict(n)
    }

    fn le_fin(&self, a: &GapWord, b: &GapWord) -> bool {
        if a.is_empty() || b.is_empty() {
            return a.is_empty() && b.is_empty();
        }
        a.factors_through(b)
    }

    fn compose(&self, a: &GapWord, b: &GapWord) -> Result<GapWord> {
        a.compose(b)
    }

    fn enumerate(&self, dom: usize, cod: usize) -> Vec<GapWord> {
        enumerate(self.t, self.m, dom, cod)
    }

    fn cuts(&self, x: &GapWord) -> Vec<usize> {
        x.cut_rows()
    }

    fn prefix(&self, x: &GapWord, len: usize) -> Result<GapWord> {
        if len > x.rows() {
            return budget("prefix longer than the truncation");
        }
        let p = x.prefix_rows(len, x.k);
        p.check()?;
        Ok(p)
    }

    fn prefix_len(&self, x: &GapWord) -> usize {
        x.rows()
    }

    fn to_json(&self, a: &GapWord) -> serde_json::Value {
        json!({ "space": "gapw", "t": a.t, "m": a.m, "n": a.n(), "k": a.k, "data": a.cells })
    }
}

pub fn from_json(v: &serde_json::Value) -> Result<GapWord> {
    if v["space"].as_str() != Some("gapw") {
        return Err(Error::Parse(format!("expected a gapw word, got space {}", v["space"])));
    }
    let get = |key: &str| v[key].as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse(format!("missing {key}")));
    let cells: Vec<usize> = serde_json::from_value(v["data"].clone())?;
    let (t, m, n) = (get("t")?, get("m")?, get("n")?);
    if cells.len() != (t + n) * m && !(cells.is_empty() && n == 0) {
        return Err(Error::Parse(format!("{} cells for a ({t}+{n})x{m} table", cells.len())));
    }
    GapWord::from_cells(t, m, get("k")?, cells)
}
