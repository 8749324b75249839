//! Parameter words `S_t(n|k)` and ascending parameter words `S_t^<(n|k)`.
//!
//! A word is a surjection `t+n → t+k` fixing `0..t` pointwise whose classes
//! have increasing minima. Ascending words additionally place the free classes
//! one after another: every position of class `t+i` precedes every position
//! of class `t+j` for `i < j`.

use serde_json::json;

use crate::error::{budget, domain, Error, Result};
use crate::space::Space;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamWord {
    t: usize,
    k: usize,
    ascending: bool,
    values: Vec<usize>,
}

impl ParamWord {
    /// Validating constructor. An empty `values` is the empty approximation.
    pub fn new(t: usize, k: usize, ascending: bool, values: Vec<usize>) -> Result<Self> {
        let w = ParamWord { t, k, ascending, values };
        w.check()?;
        Ok(w)
    }

    pub fn empty(t: usize, ascending: bool) -> Self {
        ParamWord { t, k: 0, ascending, values: Vec::new() }
    }

    /// Identity of `S_t(n|n)`.
    pub fn identity(t: usize, n: usize, ascending: bool) -> Self {
        ParamWord { t, k: n, ascending, values: (0..t + n).collect() }
    }

    pub fn t(&self) -> usize {
        self.t
    }
    /// Number of free classes.
    pub fn k(&self) -> usize {
        self.k
    }
    /// Free domain extent (`values.len() - t`); zero for the empty approximation.
    pub fn n(&self) -> usize {
        self.values.len().saturating_sub(self.t)
    }
    pub fn ascending(&self) -> bool {
        self.ascending
    }
    pub fn values(&self) -> &[usize] {
        &self.values
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn invalid(condition: u8, detail: String) -> Error {
        Error::Invalid { what: "parameter word", condition, detail }
    }

    fn check(&self) -> Result<()> {
        let (t, k, v) = (self.t, self.k, &self.values);
        if v.is_empty() {
            return if k == 0 { Ok(()) } else { Err(Self::invalid(3, "empty word with classes".into())) };
        }
        if v.len() < t {
            return Err(Self::invalid(1, format!("length {} shorter than t = {t}", v.len())));
        }
        if let Some(i) = (0..t).find(|&i| v[i] != i) {
            return Err(Self::invalid(1, format!("A({i}) = {} but must equal {i}", v[i])));
        }
        // Increasing minima; with the prefix fixed this is "each new class is the next label".
        let mut seen = t;
        for (i, &x) in v.iter().enumerate().skip(t) {
            if x >= t + k {
                return Err(Self::invalid(3, format!("A({i}) = {x} outside 0..{}", t + k)));
            }
            if x > seen {
                return Err(Self::invalid(2, format!("class {x} starts at {i} before class {seen}")));
            }
            if x == seen {
                seen += 1;
            }
        }
        if seen != t + k {
            return Err(Self::invalid(3, format!("class {seen} never occurs")));
        }
        if self.ascending {
            let mut current = t;
            for (i, &x) in v.iter().enumerate().skip(t) {
                if x >= t {
                    if x < current {
                        return Err(Self::invalid(4, format!("class {x} reappears at {i} after class {current}")));
                    }
                    current = x;
                }
            }
        }
        Ok(())
    }

    fn first(&self, class: usize) -> Option<usize> {
        self.values.iter().position(|&x| x == class)
    }

    fn last(&self, class: usize) -> Option<usize> {
        self.values.iter().rposition(|&x| x == class)
    }

    /// `r_n(A) = A ↾ min A^{-1}(t+n)`; the truncation itself when `n = k`.
    pub fn restrict(&self, n: usize) -> Result<ParamWord> {
        if n > self.k {
            return budget(format!("r_{n} needs class {} but the word has {} free classes", self.t + n, self.k));
        }
        if n == 0 {
            return Ok(ParamWord::empty(self.t, self.ascending));
        }
        if n == self.k {
            return Ok(self.clone());
        }
        let end = self.first(self.t + n).expect("surjective");
        Ok(ParamWord { t: self.t, k: n, ascending: self.ascending, values: self.values[..end].to_vec() })
    }

    /// `(A·B)(i) = B(A(i))`.
    pub fn compose(&self, b: &ParamWord) -> Result<ParamWord> {
        if self.t != b.t {
            return domain(format!("compose: t = {} vs t = {}", self.t, b.t));
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        if self.k != b.n() || (b.is_empty() && self.t > 0) {
            return domain(format!("compose: codomain extent {} vs domain extent {}", self.k, b.n()));
        }
        let values = self.values.iter().map(|&x| b.values[x]).collect();
        Ok(ParamWord { t: self.t, k: b.k, ascending: self.ascending && b.ascending, values })
    }

    /// `π`: free classes `>= t+k` collapse to `0`.
    pub fn project(&self, k: usize) -> Result<ParamWord> {
        if k > self.k {
            return domain(format!("project({k}) of a word with {} free classes", self.k));
        }
        if self.t == 0 && k == 0 && !self.is_empty() {
            return domain("project(0) is undefined when t = 0");
        }
        let limit = self.t + k;
        let values = self.values.iter().map(|&x| if x >= limit { 0 } else { x }).collect();
        ParamWord::new(self.t, k, self.ascending, values)
    }

    /// True iff `self` factors through `b`: same length and constant on every class of `b`.
    pub fn factors_through(&self, b: &ParamWord) -> bool {
        if self.t != b.t || self.values.len() != b.values.len() {
            return false;
        }
        let mut image = vec![usize::MAX; b.t + b.k];
        for (&x, &y) in b.values.iter().zip(&self.values) {
            if image[x] == usize::MAX {
                image[x] = y;
            } else if image[x] != y {
                return false;
            }
        }
        true
    }

    /// Cut positions of a projected point: zeros past its last class.
    pub fn cut_positions(&self) -> Vec<usize> {
        if self.is_empty() {
            return Vec::new();
        }
        let start = if self.k == 0 {
            self.t
        } else {
            let last = self.t + self.k - 1;
            1 + if self.ascending { self.last(last) } else { self.first(last) }.expect("surjective")
        };
        (start.max(self.t)..self.values.len()).filter(|&p| self.values[p] == 0).collect()
    }

    /// The lift of a projected point that opens a fresh class at every cut.
    pub fn canonical_lift(&self) -> ParamWord {
        let mut values = self.values.clone();
        let cuts = self.cut_positions();
        for (j, &p) in cuts.iter().enumerate() {
            values[p] = self.t + self.k + j;
        }
        ParamWord { t: self.t, k: self.k + cuts.len(), ascending: self.ascending, values }
    }
}

/// Exhaustive generator of `S_t(n|k)` (or `S_t^<(n|k)`) in lexicographic order.
pub fn enumerate(t: usize, n: usize, k: usize, ascending: bool) -> Vec<ParamWord> {
    let mut out = Vec::new();
    if t + n == 0 {
        if k == 0 {
            out.push(ParamWord::empty(t, ascending));
        }
        return out;
    }
    if k > n {
        return out;
    }
    let mut values: Vec<usize> = (0..t).collect();
    fill(t, n, k, ascending, &mut values, t, &mut out);
    out
}

fn fill(t: usize, n: usize, k: usize, asc: bool, values: &mut Vec<usize>, next: usize, out: &mut Vec<ParamWord>) {
    let remaining = t + n - values.len();
    let missing = t + k - next;
    if remaining == 0 {
        if missing == 0 {
            out.push(ParamWord { t, k, ascending: asc, values: values.clone() });
        }
        return;
    }
    if missing > remaining {
        return;
    }
    let candidates: Vec<usize> = if asc {
        let mut c: Vec<usize> = (0..t).collect();
        if next > t {
            c.push(next - 1);
        }
        c
    } else {
        (0..next).collect()
    };
    for x in candidates {
        values.push(x);
        fill(t, n, k, asc, values, next, out);
        values.pop();
    }
    if next < t + k {
        values.push(next);
        fill(t, n, k, asc, values, next + 1, out);
        values.pop();
    }
}

/// `S_t(·|·)` or `S_t^<(·|·)` as a [`Space`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamSpace {
    pub t: usize,
    pub ascending: bool,
}

impl ParamSpace {
    pub fn new(t: usize, ascending: bool) -> Self {
        ParamSpace { t, ascending }
    }

    fn same(&self, a: &ParamWord) -> Result<()> {
        if a.t != self.t || a.ascending != self.ascending {
            return domain(format!("word with t = {} does not belong to {}", a.t, self.id()));
        }
        Ok(())
    }
}

impl Space for ParamSpace {
    type Elem = ParamWord;

    fn id(&self) -> String {
        format!("{}(t={})", if self.ascending { "param-asc" } else { "param" }, self.t)
    }

    fn validate(&self, a: &ParamWord) -> Result<()> {
        self.same(a)?;
        a.check()
    }

    fn empty(&self) -> ParamWord {
        ParamWord::empty(self.t, self.ascending)
    }

    fn depth(&self, a: &ParamWord) -> usize {
        a.k
    }

    fn dom_extent(&self, a: &ParamWord) -> usize {
        a.n()
    }

    fn cod_extent(&self, a: &ParamWord) -> usize {
        a.k
    }

    fn restrict(&self, n: usize, a: &ParamWord) -> Result<ParamWord> {
        a.restrict(n)
    }

    fn le_fin(&self, a: &ParamWord, b: &ParamWord) -> bool {
        if a.is_empty() || b.is_empty() {
            return a.is_empty() && b.is_empty();
        }
        a.factors_through(b)
    }

    fn compose(&self, a: &ParamWord, b: &ParamWord) -> Result<ParamWord> {
        a.compose(b)
    }

    fn enumerate(&self, dom: usize, cod: usize) -> Vec<ParamWord> {
        enumerate(self.t, dom, cod, self.ascending)
    }

    fn cuts(&self, x: &ParamWord) -> Vec<usize> {
        x.cut_positions()
    }

    fn prefix(&self, x: &ParamWord, len: usize) -> Result<ParamWord> {
        if len > x.values.len() {
            return budget("prefix longer than the truncation");
        }
        ParamWord::new(x.t, x.k, x.ascending, x.values[..len].to_vec())
    }

    fn prefix_len(&self, x: &ParamWord) -> usize {
        x.values.len()
    }

    fn to_json(&self, a: &ParamWord) -> serde_json::Value {
        json!({
            "space": if a.ascending { "param-asc" } else { "param" },
            "t": a.t,
            "m": 1,
            "n": a.n(),
            "k": a.k,
            "data": a.values,
        })
    }
}

pub fn from_json(v: &serde_json::Value) -> Result<ParamWord> {
    let space = v["space"].as_str().unwrap_or_default();
    let ascending = match space {
        "param" => false,
        "param-asc" => true,
        other => return Err(Error::Parse(format!("expected a parameter word, got space {other:?}"))),
    };
    let get = |key: &str| v[key].as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse(format!("missing {key}")));
    let values: Vec<usize> = serde_json::from_value(v["data"].clone())?;
    ParamWord::new(get("t")?, get("k")?, ascending, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{depth, is_prefix, Depth};

    fn w(t: usize, k: usize, v: &[usize]) -> ParamWord {
        ParamWord::new(t, k, false, v.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let a = w(0, 2, &[0, 1, 0, 1]);
        let b = w(0, 1, &[0, 0]);
        assert_eq!(a.compose(&b).unwrap(), w(0, 1, &[0, 0, 0, 0]));
        assert_eq!(a.compose(&ParamWord::identity(0, 2, false)).unwrap(), a);
        assert_eq!(ParamWord::identity(0, 4, false).compose(&a).unwrap(), a);
        assert!(matches!(a.compose(&w(0, 1, &[0, 0, 0])), Err(Error::Domain(_))));
    }

    #[test]
    fn restrict_examples() {
        let a = w(0, 3, &[0, 1, 0, 2]);
        assert!(a.restrict(0).unwrap().is_empty());
        assert_eq!(a.restrict(1).unwrap(), w(0, 1, &[0]));
        let b = w(1, 2, &[0, 1, 0, 2]);
        assert_eq!(b.restrict(1).unwrap(), w(1, 1, &[0, 1, 0]));
        assert!(matches!(b.restrict(3), Err(Error::Budget(_))));
    }

    #[test]
    fn project_examples() {
        let a = w(0, 3, &[0, 1, 0, 2]);
        assert_eq!(a.project(3).unwrap(), a);
        assert_eq!(a.project(1).unwrap(), w(0, 1, &[0, 0, 0, 0]));
        assert_eq!(w(1, 3, &[0, 1, 2, 1, 3]).project(1).unwrap(), w(1, 1, &[0, 1, 0, 1, 0]));
        assert!(matches!(a.project(4), Err(Error::Domain(_))));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate(0, 3, 2, false).len(), 3);
        assert_eq!(enumerate(0, 4, 2, true).len(), 3);
        assert_eq!(enumerate(0, 2, 2, false), vec![ParamWord::identity(0, 2, false)]);
        let all = enumerate(2, 3, 2, false);
        assert!(all.windows(2).all(|p| p[0] < p[1]));
        assert!(all.iter().all(|x| x.check().is_ok()));
    }

    #[test]
    fn validation_reports_condition() {
        let bad = ParamWord::new(1, 1, false, vec![1, 0]);
        assert!(matches!(bad, Err(Error::Invalid { condition: 1, .. })));
        let bad = ParamWord::new(0, 2, false, vec![1, 0]);
        assert!(matches!(bad, Err(Error::Invalid { condition: 2, .. })));
        let bad = ParamWord::new(1, 2, true, vec![0, 1, 2, 1]);
        assert!(matches!(bad, Err(Error::Invalid { condition: 4, .. })));
    }

    #[test]
    fn depth_and_prefix() {
        let sp = ParamSpace::new(0, false);
        let b = ParamWord::identity(0, 6, false);
        assert_eq!(b.restrict(1).unwrap(), w(0, 1, &[0]));
        assert_eq!(depth(&sp, &w(0, 2, &[0, 1]), &b, 5).unwrap(), Depth::Finite(2));
        assert_eq!(depth(&sp, &sp.empty(), &b, 10).unwrap(), Depth::Finite(0));
        assert_eq!(depth(&sp, &b.restrict(2).unwrap(), &b, 10).unwrap(), Depth::Finite(2));
        // (0,0) has the length of r_2(B) but is not below it? It is: it merges classes 0 and 1.
        assert_eq!(depth(&sp, &w(0, 1, &[0, 0]), &b, 10).unwrap(), Depth::Finite(2));
        assert_eq!(depth(&sp, &w(0, 2, &[0, 1, 1]), &w(0, 3, &[0, 0, 1, 2]), 10).unwrap(), Depth::Infinite);

        let b = w(0, 2, &[0, 1, 0]);
        assert!(is_prefix(&sp, &w(0, 1, &[0]), &b).unwrap());
        assert!(is_prefix(&sp, &b, &b).unwrap());
        assert!(is_prefix(&sp, &sp.empty(), &b).unwrap());
        assert!(!is_prefix(&sp, &w(0, 1, &[0, 0]), &b).unwrap());
    }

    #[test]
    fn s_approx_matches_canonical_lift() {
        let sp = ParamSpace::new(1, false);
        let x = w(1, 1, &[0, 1, 0, 1, 0]);
        let lift = x.canonical_lift();
        assert_eq!(lift, w(1, 3, &[0, 1, 2, 1, 3]));
        assert!(sp.s_approx(0, &x).unwrap().is_empty());
        assert_eq!(sp.s_approx(1, &x).unwrap(), lift.restrict(1).unwrap());
        assert_eq!(sp.s_approx(2, &x).unwrap(), lift.restrict(2).unwrap().project(1).unwrap());
        assert_eq!(sp.s_approx(2, &x).unwrap(), w(1, 1, &[0, 1, 0, 1]));
        assert_eq!(sp.s_approx(3, &x).unwrap(), x);
        assert!(matches!(sp.s_approx(4, &x), Err(Error::Budget(_))));
        assert_eq!(sp.s_index(1, &w(1, 1, &[0, 1, 0, 1])), 2);
    }

    #[test]
    fn json_round_trip() {
        let sp = ParamSpace::new(1, true);
        for a in sp.enumerate(3, 2) {
            assert_eq!(from_json(&sp.to_json(&a)).unwrap(), a);
        }
    }
}
