//! Partial G-partitions: maps `n → {ν} ∪ (k × G)` for a finite group `G`
//! given by its Cayley table.
//!
//! There is no fixed prefix (`t = 0`). Whether `ν` may occur before the
//! anchor of block 0 is a mode of the word: the permissive reading allows it,
//! the strict one requires position 0 to be `(0, e)` whenever `k > 0`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{budget, domain, Error, Result};
use crate::space::Space;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub name: String,
    cayley: Vec<Vec<usize>>,
    unit: usize,
}

impl FiniteGroup {
    /// Validates closure, associativity, the unit laws and inverses.
    pub fn new(name: impl Into<String>, cayley: Vec<Vec<usize>>, unit: usize) -> Result<Self> {
        let n = cayley.len();
        let bad = |detail: String| Err(Error::Invalid { what: "group", condition: 0, detail });
        if n == 0 {
            return bad("empty table".into());
        }
        if cayley.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return bad(format!("table is not a closed {n}x{n} table"));
        }
        if unit >= n {
            return bad(format!("unit {unit} out of range"));
        }
        for x in 0..n {
            if cayley[unit][x] != x || cayley[x][unit] != x {
                return bad(format!("{unit} is not a unit for {x}"));
            }
            if !(0..n).any(|y| cayley[x][y] == unit && cayley[y][x] == unit) {
                return bad(format!("{x} has no inverse"));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if cayley[cayley[x][y]][z] != cayley[x][cayley[y][z]] {
                        return bad(format!("({x}*{y})*{z} != {x}*({y}*{z})"));
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.into(), cayley, unit })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z_n` with elements `0..n` and unit `0`.
    pub fn cyclic(n: usize) -> Self {
        let cayley = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        Self::new(format!("Z_{n}"), cayley, 0).expect("cyclic groups are groups")
    }

    pub fn order(&self) -> usize {
        self.cayley.len()
    }
    pub fn unit(&self) -> usize {
        self.unit
    }
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.cayley[x][y]
    }
    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    /// Reads `{"name": …, "cayley": [[…]], "unit": e}`; `name` and `unit` are optional.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let cayley: Vec<Vec<usize>> = serde_json::from_value(v["cayley"].clone())?;
        let unit = v.get("unit").and_then(|u| u.as_u64()).unwrap_or(0) as usize;
        let name = v.get("name").and_then(|n| n.as_str()).unwrap_or("G");
        Self::new(name, cayley, unit)
    }
}

/// `None` is `ν`; `Some((block, g))` otherwise.
pub type GValue = Option<(usize, usize)>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GPartWord {
    group: Arc<FiniteGroup>,
    leading_nu: bool,
    k: usize,
    values: Vec<GValue>,
}

impl GPartWord {
    /// Validating constructor for the permissive reading.
    pub fn new(group: Arc<FiniteGroup>, k: usize, values: Vec<GValue>) -> Result<Self> {
        Self::with_mode(group, true, k, values)
    }

    pub fn with_mode(group: Arc<FiniteGroup>, leading_nu: bool, k: usize, values: Vec<GValue>) -> Result<Self> {
        let w = GPartWord { group, leading_nu, k, values };
        w.check()?;
        Ok(w)
    }

    pub fn empty(group: Arc<FiniteGroup>, leading_nu: bool) -> Self {
        GPartWord { group, leading_nu, k: 0, values: Vec::new() }
    }

    pub fn identity(group: Arc<FiniteGroup>, leading_nu: bool, n: usize) -> Self {
        let e = group.unit();
        GPartWord { group, leading_nu, k: n, values: (0..n).map(|i| Some((i, e))).collect() }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn leading_nu(&self) -> bool {
        self.leading_nu
    }
    pub fn n(&self) -> usize {
        self.values.len()
    }
    pub fn values(&self) -> &[GValue] {
        &self.values
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn invalid(condition: u8, detail: String) -> Error {
        Error::Invalid { what: "partial G-partition", condition, detail }
    }

    fn check(&self) -> Result<()> {
        let e = self.group.unit();
        if !self.leading_nu && self.k > 0 && self.values.first() == Some(&None) {
            return Err(Self::invalid(1, "ν before the anchor of block 0".into()));
        }
        let mut next = 0;
        for (i, v) in self.values.iter().enumerate() {
            let Some((j, g)) = *v else { continue };
            if j >= self.k || g >= self.group.order() {
                return Err(Self::invalid(3, format!("A({i}) = ({j},{g}) outside {} x G", self.k)));
            }
            if j > next {
                return Err(Self::invalid(2, format!("block {j} starts at {i} before block {next}")));
            }
            if j == next {
                if g != e {
                    return Err(Self::invalid(1, format!("block {j} first occurs at {i} with {g}, not the unit")));
                }
                next += 1;
            }
        }
        if next != self.k {
            return Err(Self::invalid(1, format!("block {next} has no anchor")));
        }
        Ok(())
    }

    fn anchor(&self, block: usize) -> Option<usize> {
        self.values.iter().position(|v| matches!(v, Some((j, _)) if *j == block))
    }

    /// `r_n(A) = A ↾ min A^{-1}((n, e))`; the truncation itself when `n = k`.
    pub fn restrict(&self, n: usize) -> Result<GPartWord> {
        if n > self.k {
            return budget(format!("r_{n} needs block {n} but the word has {} blocks", self.k));
        }
        if n == 0 {
            return Ok(GPartWord::empty(self.group.clone(), self.leading_nu));
        }
        if n == self.k {
            return Ok(self.clone());
        }
        let end = self.anchor(n).expect("every block is anchored");
        Ok(GPartWord { k: n, values: self.values[..end].to_vec(), ..self.clone() })
    }

    /// `(A·B)(i)`: `ν` when `A(i)` or `B(A(i)_0)` is `ν`, otherwise `(B(j)_0, b·c)`.
    pub fn compose(&self, b: &GPartWord) -> Result<GPartWord> {
        if self.group != b.group {
            return domain(format!("compose: groups {} and {} differ", self.group.name, b.group.name));
        }
        if self.leading_nu != b.leading_nu {
            return domain("compose: words of different readings");
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        if self.k != b.n() {
            return domain(format!("compose: codomain extent {} vs domain extent {}", self.k, b.n()));
        }
        let values = self
            .values
            .iter()
            .map(|v| {
                let (j, x) = (*v)?;
                let (k, y) = b.values[j]?;
                Some((k, self.group.mul(x, y)))
            })
            .collect();
        Ok(GPartWord { group: self.group.clone(), leading_nu: self.leading_nu, k: b.k, values })
    }

    /// `π`: blocks `>= k` collapse to `(0, e)`.
    pub fn project(&self, k: usize) -> Result<GPartWord> {
        if k > self.k {
            return domain(format!("project({k}) of a word with {} blocks", self.k));
        }
        if k == 0 && self.k > 0 {
            return domain("project(0) is undefined without a fixed prefix");
        }
        let e = self.group.unit();
        let values = self.values.iter().map(|v| v.map(|(j, g)| if j >= k { (0, e) } else { (j, g) })).collect();
        GPartWord::with_mode(self.group.clone(), self.leading_nu, k, values)
    }

    /// The `C` with `self = b·C`, if any.
    pub fn quotient(&self, b: &GPartWord) -> Option<GPartWord> {
        if self.group != b.group || self.leading_nu != b.leading_nu || self.n() != b.n() {
            return None;
        }
        let values = (0..b.k).map(|j| self.values[b.anchor(j).expect("anchored")]).collect();
        let c = GPartWord::with_mode(self.group.clone(), self.leading_nu, self.k, values).ok()?;
        (b.compose(&c).ok()? == *self).then_some(c)
    }

    /// Cut positions of a projected point: `(0, e)` values past the anchor of its last block.
    pub fn cut_positions(&self) -> Vec<usize> {
        if self.k == 0 {
            return Vec::new();
        }
        let start = 1 + self.anchor(self.k - 1).expect("anchored");
        let e = self.group.unit();
        (start..self.values.len()).filter(|&p| self.values[p] == Some((0, e))).collect()
    }
}

impl fmt::Display for GPartWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match v {
                None => write!(f, "ν")?,
                Some((j, g)) => write!(f, "{j}:{g}")?,
            }
        }
        write!(f, ")")
    }
}

/// All words of `S_G(n|k)` in the given reading, lexicographic with `ν` first.
pub fn enumerate(group: &Arc<FiniteGroup>, leading_nu: bool, n: usize, k: usize) -> Vec<GPartWord> {
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(GPartWord::empty(group.clone(), leading_nu));
        }
        return out;
    }
    let proto = GPartWord { group: group.clone(), leading_nu, k, values: Vec::with_capacity(n) };
    fill(&proto, n, &mut proto.values.clone(), 0, &mut out);
    out
}

fn fill(proto: &GPartWord, n: usize, values: &mut Vec<GValue>, next: usize, out: &mut Vec<GPartWord>) {
    let (group, k) = (&proto.group, proto.k);
    if k - next > n - values.len() {
        return;
    }
    if values.len() == n {
        out.push(GPartWord { values: values.clone(), ..proto.clone() });
        return;
    }
    let strict_start = !proto.leading_nu && k > 0 && values.is_empty();
    let mut options: Vec<GValue> = if strict_start { vec![] } else { vec![None] };
    options.extend((0..next).flat_map(|j| (0..group.order()).map(move |g| Some((j, g)))));
    if next < k {
        options.push(Some((next, group.unit())));
    }
    options.sort();
    for v in options {
        values.push(v);
        let opened = usize::from(matches!(v, Some((j, _)) if j == next));
        fill(proto, n, values, next + opened, out);
        values.pop();
    }
}

#[derive(Debug, Clone)]
pub struct GPartSpace {
    pub group: Arc<FiniteGroup>,
    pub leading_nu: bool,
}

impl GPartSpace {
    /// The permissive reading: `ν` may precede the anchor of block 0.
    pub fn new(group: FiniteGroup) -> Self {
        GPartSpace { group: Arc::new(group), leading_nu: true }
    }

    /// Position 0 always carries the anchor of block 0.
    pub fn strict(group: FiniteGroup) -> Self {
        GPartSpace { group: Arc::new(group), leading_nu: false }
    }
}

impl Space for GPartSpace {
    type Elem = GPartWord;

    fn id(&self) -> String {
        let reading = if self.leading_nu { "" } else { ",strict" };
        format!("gpart(G={}{reading})", self.group.name)
    }

    fn validate(&self, a: &GPartWord) -> Result<()> {
        if a.group != self.group || a.leading_nu != self.leading_nu {
            return domain(format!("word over {} does not belong to {}", a.group.name, self.id()));
        }
        a.check()
    }

    fn empty(&self) -> GPartWord {
        GPartWord::empty(self.group.clone(), self.leading_nu)
    }

    fn depth(&self, a: &GPartWord) -> usize {
        a.k
    }

    fn dom_extent(&self, a: &GPartWord) -> usize {
        a.n()
    }

    fn cod_extent(&self, a: &GPartWord) -> usize {
        a.k
    }

    fn restrict(&self, n: usize, a: &GPartWord) -> Result<GPartWord> {
        a.restrict(n)
    }

    fn le_fin(&self, a: &GPartWord, b: &GPartWord) -> bool {
        if a.is_empty() || b.is_empty() {
            return a.is_empty() && b.is_empty();
        }
        a.quotient(b).is_some()
    }

    fn compose(&self, a: &GPartWord, b: &GPartWord) -> Result<GPartWord> {
        a.compose(b)
    }

    fn enumerate(&self, dom: usize, cod: usize) -> Vec<GPartWord> {
        enumerate(&self.group, self.leading_nu, dom, cod)
    }

    fn cuts(&self, x: &GPartWord) -> Vec<usize> {
        x.cut_positions()
    }

    fn prefix(&self, x: &GPartWord, len: usize) -> Result<GPartWord> {
        if len > x.values.len() {
            return budget("prefix longer than the truncation");
        }
        GPartWord::with_mode(x.group.clone(), x.leading_nu, x.k, x.values[..len].to_vec())
    }

    fn prefix_len(&self, x: &GPartWord) -> usize {
        x.values.len()
    }

    fn to_json(&self, a: &GPartWord) -> serde_json::Value {
        let data: Vec<serde_json::Value> =
            a.values.iter().map(|v| v.map_or_else(|| json!("v"), |(j, g)| json!([j, g]))).collect();
        json!({
            "space": "gpart",
            "group": a.group.as_ref(),
            "leading_nu": a.leading_nu,
            "n": a.n(),
            "k": a.k,
            "data": data,
        })
    }
}

/// Reads a word; `group` is used when the JSON carries none.
pub fn from_json(v: &serde_json::Value, group: Option<&Arc<FiniteGroup>>) -> Result<GPartWord> {
    if v["space"].as_str() != Some("gpart") {
        return Err(Error::Parse(format!("expected a G-partition, got space {}", v["space"])));
    }
    let group = match (v.get("group"), group) {
        (Some(g), _) if !g.is_null() => Arc::new(FiniteGroup::from_json(g)?),
        (_, Some(g)) => g.clone(),
        _ => return Err(Error::Parse("no group given".into())),
    };
    let k = v["k"].as_u64().ok_or_else(|| Error::Parse("missing k".into()))? as usize;
    let data = v["data"].as_array().ok_or_else(|| Error::Parse("missing data".into()))?;
    let values = data
        .iter()
        .map(|x| match x {
            serde_json::Value::String(s) if s == "v" || s == "ν" => Ok(None),
            other => serde_json::from_value::<(usize, usize)>(other.clone()).map(Some).map_err(Error::from),
        })
        .collect::<Result<Vec<_>>>()?;
    let leading_nu = v.get("leading_nu").and_then(|b| b.as_bool()).unwrap_or(true);
    GPartWord::with_mode(group, leading_nu, k, values)
}
