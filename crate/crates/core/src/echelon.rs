//! Reduced column echelon matrices over prime fields.
//!
//! Column `n` of an `N × c` matrix has its pivot `p_n` at its first nonzero
//! row, the pivot entry is 1, pivots strictly increase and each pivot row is
//! zero outside its own column. Approximations follow the shifted restriction
//! `r(n+1, A) = A ↾ (n × p_n(A))`: an approximation with `c` columns has depth
//! `c + 1`, and `r_0` is the tagged [`Echelon::Empty`].

use serde_json::json;

use crate::error::{budget, domain, Error, Result};
use crate::space::Space;

const PRIMES: [usize; 6] = [2, 3, 5, 7, 11, 13];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    q: usize,
    inv: Vec<usize>,
}

impl PrimeField {
    pub fn new(q: usize) -> Result<Self> {
        if !PRIMES.contains(&q) {
            return domain(format!("q = {q} is not a prime up to 13"));
        }
        let inv: Vec<usize> = (0..q).map(|x| (0..q).find(|&y| x * y % q == 1).unwrap_or(0)).collect();
        // every nonzero element is invertible and the distributive law holds on the tables
        debug_assert!((1..q).all(|x| inv[x] != 0));
        debug_assert!((0..q).all(|a| (0..q).all(|b| (0..q).all(|c| a * ((b + c) % q) % q == (a * b + a * c) % q))));
        Ok(PrimeField { q, inv })
    }

    pub fn q(&self) -> usize {
        self.q
    }
    pub fn add(&self, a: usize, b: usize) -> usize {
        (a + b) % self.q
    }
    pub fn sub(&self, a: usize, b: usize) -> usize {
        (a + self.q - b) % self.q
    }
    pub fn mul(&self, a: usize, b: usize) -> usize {
        a * b % self.q
    }
    pub fn inv(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| self.inv[a])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EchelonMatrix {
    q: usize,
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl EchelonMatrix {
    /// Validating constructor; `entries` is row-major.
    pub fn new(q: usize, rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self> {
        let m = Self::raw(q, rows, cols, entries)?;
        m.check()?;
        Ok(m)
    }

    /// A matrix of the right shape and field, without the echelon check.
    pub fn raw(q: usize, rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self> {
        PrimeField::new(q)?;
        if entries.len() != rows * cols {
            return domain(format!("{} entries for a {rows}x{cols} matrix", entries.len()));
        }
        if let Some(x) = entries.iter().find(|&&x| x as usize >= q) {
            return domain(format!("entry {x} outside GF({q})"));
        }
        Ok(EchelonMatrix { q, rows, cols, entries })
    }

    pub fn from_rows(q: usize, rows: &[&[u8]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return domain("ragged rows");
        }
        Self::new(q, rows.len(), cols, rows.concat())
    }

    pub fn identity(q: usize, n: usize) -> Self {
        let entries = (0..n * n).map(|i| u8::from(i / n == i % n)).collect();
        EchelonMatrix { q, rows: n, cols: n, entries }
    }

    pub fn q(&self) -> usize {
        self.q
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.cols + j] as usize
    }
    pub fn column(&self, j: usize) -> Vec<usize> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    fn field(&self) -> PrimeField {
        PrimeField::new(self.q).expect("checked at construction")
    }

    fn invalid(condition: u8, detail: String) -> Error {
        Error::Invalid { what: "reduced echelon matrix", condition, detail }
    }

    /// `p_n`: least nonzero row of column `n`.
    pub fn pivot(&self, n: usize) -> Result<usize> {
        if n >= self.cols {
            return domain(format!("no column {n} in a matrix with {} columns", self.cols));
        }
        (0..self.rows)
            .find(|&i| self.get(i, n) != 0)
            .ok_or_else(|| Error::Budget(format!("column {n} is zero within the {} stored rows", self.rows)))
    }

    /// Conditions: 1 zero column, 2 pivot entry not 1, 3 pivots not increasing, 4 pivot row not reduced.
    fn check(&self) -> Result<()> {
        let mut last = None;
        for n in 0..self.cols {
            let p = self.pivot(n).map_err(|_| Self::invalid(1, format!("column {n} is zero")))?;
            if self.get(p, n) != 1 {
                return Err(Self::invalid(2, format!("pivot of column {n} is {}", self.get(p, n))));
            }
            if last.is_some_and(|l| p <= l) {
                return Err(Self::invalid(3, format!("pivot of column {n} at row {p} does not increase")));
            }
            if let Some(j) = (0..self.cols).find(|&j| j != n && self.get(p, j) != 0) {
                return Err(Self::invalid(4, format!("pivot row {p} of column {n} is nonzero in column {j}")));
            }
            last = Some(p);
        }
        Ok(())
    }

    pub fn is_reduced_echelon(&self) -> bool {
        self.check().is_ok()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.cols).filter_map(|n| self.pivot(n).ok()).collect()
    }

    /// The top `rows` rows of the first `cols` columns.
    pub fn block(&self, rows: usize, cols: usize) -> EchelonMatrix {
        let entries = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| self.get(i, j) as u8).collect();
        EchelonMatrix { q: self.q, rows, cols, entries }
    }

    /// The usual matrix product.
    pub fn mul(&self, b: &EchelonMatrix) -> Result<EchelonMatrix> {
        if self.q != b.q {
            return domain(format!("GF({}) vs GF({})", self.q, b.q));
        }
        if self.cols != b.rows {
            return domain(format!("{}x{} times {}x{}", self.rows, self.cols, b.rows, b.cols));
        }
        let f = self.field();
        let mut entries = Vec::with_capacity(self.rows * b.cols);
        for i in 0..self.rows {
            for j in 0..b.cols {
                entries.push((0..self.cols).fold(0, |acc, l| f.add(acc, f.mul(self.get(i, l), b.get(l, j)))) as u8);
            }
        }
        Ok(EchelonMatrix { q: self.q, rows: self.rows, cols: b.cols, entries })
    }

    /// The `C` with `self = b·C`: `C(j, i)` is read at the pivot rows of `b`.
    pub fn quotient(&self, b: &EchelonMatrix) -> Option<EchelonMatrix> {
        if self.q != b.q || self.rows != b.rows {
            return None;
        }
        let pivots = b.pivots();
        let entries = pivots.iter().flat_map(|&p| (0..self.cols).map(move |i| (p, i))).map(|(p, i)| self.get(p, i) as u8).collect();
        let c = EchelonMatrix { q: self.q, rows: b.cols, cols: self.cols, entries };
        (b.mul(&c).ok()? == *self).then_some(c)
    }

    /// Cut rows of a projected point: zero rows past the last pivot.
    pub fn cut_rows(&self) -> Vec<usize> {
        let start = self.pivots().last().map_or(0, |p| p + 1);
        (start..self.rows).filter(|&i| (0..self.cols).all(|j| self.get(i, j) == 0)).collect()
    }

    /// Appends the standard basis column `e_r` for every cut row `r`.
    pub fn canonical_lift(&self) -> EchelonMatrix {
        let cuts = self.cut_rows();
        let cols = self.cols + cuts.len();
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend((0..self.cols).map(|j| self.get(i, j) as u8));
            entries.extend(cuts.iter().map(|&r| u8::from(r == i)));
        }
        EchelonMatrix { q: self.q, rows: self.rows, cols, entries }
    }
}

/// An approximation: the empty `r_0` or a matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Echelon {
    Empty,
    Matrix(EchelonMatrix),
}

impl Echelon {
    pub fn matrix(&self) -> Option<&EchelonMatrix> {
        match self {
            Echelon::Empty => None,
            Echelon::Matrix(m) => Some(m),
        }
    }

    /// `r(0) = ∅`, `r(n+1) = A ↾ (n × p_n(A))`, and the truncation itself at `n = cols + 1`.
    pub fn restrict(&self, n: usize) -> Result<Echelon> {
        let Echelon::Matrix(m) = self else {
            return if n == 0 { Ok(Echelon::Empty) } else { budget(format!("r_{n} of the empty approximation")) };
        };
        match n {
            0 => Ok(Echelon::Empty),
            _ if n <= m.cols => Ok(Echelon::Matrix(m.block(m.pivot(n - 1)?, n - 1))),
            _ if n == m.cols + 1 => Ok(self.clone()),
            _ => budget(format!("r_{n} needs pivot {} but the matrix has {} columns", n - 1, m.cols)),
        }
    }
}

/// All reduced echelon `rows × cols` matrices over GF(q), sorted.
pub fn enumerate(q: usize, rows: usize, cols: usize) -> Vec<EchelonMatrix> {
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(cols);
    choose_pivots(q, rows, cols, 0, &mut pivots, &mut out);
    out.sort();
    out
}

fn choose_pivots(q: usize, rows: usize, cols: usize, from: usize, pivots: &mut Vec<usize>, out: &mut Vec<EchelonMatrix>) {
    if pivots.len() == cols {
        fill_free(q, rows, pivots, out);
        return;
    }
    for p in from..rows {
        pivots.push(p);
        choose_pivots(q, rows, cols, p + 1, pivots, out);
        pivots.pop();
    }
}

fn fill_free(q: usize, rows: usize, pivots: &[usize], out: &mut Vec<EchelonMatrix>) {
    let cols = pivots.len();
    let mut base = vec![0u8; rows * cols];
    for (j, &p) in pivots.iter().enumerate() {
        base[p * cols + j] = 1;
    }
    let free: Vec<usize> = (0..cols)
        .flat_map(|j| ((pivots[j] + 1)..rows).filter(|r| !pivots.contains(r)).map(move |r| r * cols + j))
        .collect();
    let total = q.pow(free.len() as u32);
    for mut code in 0..total {
        let mut entries = base.clone();
        for &slot in &free {
            entries[slot] = (code % q) as u8;
            code /= q;
        }
        out.push(EchelonMatrix { q, rows, cols, entries });
    }
}

/// Column span membership by Gaussian elimination: every column of `a` lies in the span of the columns of `b`.
pub fn span_contains(b: &EchelonMatrix, a: &EchelonMatrix) -> bool {
    if a.q != b.q || a.rows != b.rows {
        return false;
    }
    let f = b.field();
    let rank_b = rank(&f, (0..b.cols).map(|j| b.column(j)).collect());
    (0..a.cols).all(|i| {
        let mut vs: Vec<Vec<usize>> = (0..b.cols).map(|j| b.column(j)).collect();
        vs.push(a.column(i));
        rank(&f, vs) == rank_b
    })
}

fn rank(f: &PrimeField, vectors: Vec<Vec<usize>>) -> usize {
    rref(f, vectors).len()
}

/// Reduced row echelon form of the given row vectors, zero rows dropped.
fn rref(f: &PrimeField, mut m: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let width = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let inv = f.inv(m[r][c]).expect("nonzero");
        m[r] = m[r].iter().map(|&x| f.mul(x, inv)).collect();
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                m[i] = (0..width).map(|k| f.sub(m[i][k], f.mul(factor, m[r][k]))).collect();
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Independent oracle for the echelon predicate: the columns are independent and
/// row-reducing the transpose reproduces the matrix.
pub fn echelon_oracle(m: &EchelonMatrix) -> bool {
    let f = m.field();
    let columns: Vec<Vec<usize>> = (0..m.cols).map(|j| m.column(j)).collect();
    let reduced = rref(&f, columns.clone());
    reduced.len() == m.cols && reduced == columns
}

/// Products of conformable reduced echelon pairs with at most `max_rows` rows that fail the predicate.
pub fn compose_closure_counterexamples(q: usize, max_rows: usize) -> (usize, Vec<(EchelonMatrix, EchelonMatrix)>) {
    let mut checked = 0;
    let mut bad = Vec::new();
    for rows in 1..=max_rows {
        for c in 1..=rows {
            for a in enumerate(q, rows, c) {
                for j in 1..=c {
                    for b in enumerate(q, c, j) {
                        checked += 1;
                        if !a.mul(&b).expect("conformable").is_reduced_echelon() {
                            bad.push((a.clone(), b));
                        }
                    }
                }
            }
        }
    }
    (checked, bad)
}

#[derive(Debug, Clone)]
pub struct EchelonSpace {
    pub q: usize,
}

impl EchelonSpace {
    pub fn new(q: usize) -> Result<Self> {
        PrimeField::new(q)?;
        Ok(EchelonSpace { q })
    }

    fn mat(&self, m: EchelonMatrix) -> Echelon {
        Echelon::Matrix(m)
    }

    fn zero_cols(&self, rows: usize) -> Echelon {
        self.mat(EchelonMatrix { q: self.q, rows, cols: 0, entries: Vec::new() })
    }
}

impl Space for EchelonSpace {
    type Elem = Echelon;

    fn id(&self) -> String {
        format!("echelon(q={})", self.q)
    }

    fn validate(&self, a: &Echelon) -> Result<()> {
        match a {
            Echelon::Empty => Ok(()),
            Echelon::Matrix(m) if m.q != self.q => domain(format!("GF({}) matrix in {}", m.q, self.id())),
            Echelon::Matrix(m) => m.check(),
        }
    }

    fn empty(&self) -> Echelon {
        Echelon::Empty
    }

    fn depth(&self, a: &Echelon) -> usize {
        a.matrix().map_or(0, |m| m.cols + 1)
    }

    fn depth_of_cod(&self, c: usize) -> usize {
        c + 1
    }

    fn dom_extent(&self, a: &Echelon) -> usize {
        a.matrix().map_or(0, |m| m.rows)
    }

    fn cod_extent(&self, a: &Echelon) -> usize {
        a.matrix().map_or(0, |m| m.cols)
    }

    fn restrict(&self, n: usize, a: &Echelon) -> Result<Echelon> {
        a.restrict(n)
    }

    fn le_fin(&self, a: &Echelon, b: &Echelon) -> bool {
        match (a, b) {
            (Echelon::Empty, Echelon::Empty) => true,
            (Echelon::Matrix(x), Echelon::Matrix(y)) => x.quotient(y).is_some(),
            _ => false,
        }
    }

    fn compose(&self, a: &Echelon, b: &Echelon) -> Result<Echelon> {
        match (a, b) {
            (Echelon::Empty, _) => Ok(Echelon::Empty),
            (Echelon::Matrix(_), Echelon::Empty) => domain("compose with the empty approximation"),
            (Echelon::Matrix(x), Echelon::Matrix(y)) => Ok(self.mat(x.mul(y)?)),
        }
    }

    fn enumerate(&self, dom: usize, cod: usize) -> Vec<Echelon> {
        enumerate(self.q, dom, cod).into_iter().map(Echelon::Matrix).collect()
    }

    fn approximations_with_domain(&self, dom: usize) -> Vec<Echelon> {
        let mut out: Vec<_> = (1..=dom).flat_map(|c| self.enumerate(dom, c)).collect();
        out.push(self.zero_cols(dom));
        if dom == 0 {
            out.push(Echelon::Empty);
        }
        out.sort();
        out
    }

    fn downset(&self, b: &Echelon) -> Vec<Echelon> {
        let Echelon::Matrix(m) = b else { return vec![Echelon::Empty] };
        let mut out: Vec<_> = (1..=m.cols)
            .flat_map(|j| enumerate(self.q, m.cols, j))
            .map(|c| self.mat(m.mul(&c).expect("conformable")))
            .collect();
        out.push(self.zero_cols(m.rows));
        out.sort();
        out.dedup();
        out
    }

    fn cuts(&self, x: &Echelon) -> Vec<usize> {
        x.matrix().map_or_else(Vec::new, EchelonMatrix::cut_rows)
    }

    fn prefix(&self, x: &Echelon, len: usize) -> Result<Echelon> {
        let m = x.matrix().ok_or_else(|| Error::Domain("prefix of the empty approximation".into()))?;
        if len > m.rows {
            return budget("prefix longer than the truncation");
        }
        let p = m.block(len, m.cols);
        p.check()?;
        Ok(self.mat(p))
    }

    fn prefix_len(&self, x: &Echelon) -> usize {
        self.dom_extent(x)
    }

    fn to_json(&self, a: &Echelon) -> serde_json::Value {
        match a {
            Echelon::Empty => json!({"space": "echelon", "q": self.q, "empty": true}),
            Echelon::Matrix(m) => json!({
                "space": "echelon",
                "q": m.q,
                "rows": m.rows,
                "cols": m.cols,
                "entries": m.entries,
            }),
        }
    }
}

pub fn from_json(v: &serde_json::Value) -> Result<Echelon> {
    if v["space"].as_str() != Some("echelon") {
        return Err(Error::Parse(format!("expected a matrix, got space {}", v["space"])));
    }
    if v["empty"].as_bool() == Some(true) {
        return Ok(Echelon::Empty);
    }
    let get = |key: &str| v[key].as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse(format!("missing {key}")));
    let entries: Vec<u8> = serde_json::from_value(v["entries"].clone())?;
    Ok(Echelon::Matrix(EchelonMatrix::new(get("q")?, get("rows")?, get("cols")?, entries)?))
}
