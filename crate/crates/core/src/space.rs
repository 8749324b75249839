//! The shared signature `(R, ≤, r, (R_k), ∘, s)` over finite truncations.
//!
//! Every concrete space stores "infinite" elements as finite truncations. A
//! truncation carrying `K` classes is identified with its own `K`-th
//! approximation: the next class is taken to start immediately past the end of
//! the stored data. Approximations and truncated elements therefore share one
//! value type per space, and `restrict(n, a)` is defined for `n <= depth(a)`.
//!
//! Projected points `X ∈ R_k` are truncations with `k` classes. Their
//! `s`-sequence is read off from *cut points*: positions past the last class
//! of `X` where a fresh class of a lift may begin. `s(n, X)` for `n < k` is
//! `r_n(X)`; for `n >= k` it is the prefix of `X` ending at the `(n-k)`-th cut,
//! with the end of the truncation counted as a final cut.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{budget, domain, Error, Result};

pub trait Space: Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    /// Stable identifier including the space parameters, e.g. `param(t=1)`.
    fn id(&self) -> String;

    /// Checks that `a` is a well-formed value of this space with matching parameters.
    fn validate(&self, a: &Self::Elem) -> Result<()>;

    /// `r_0`, the empty approximation.
    fn empty(&self) -> Self::Elem;

    /// `|a|`: the `n` with `a = r_n(a)`.
    fn depth(&self, a: &Self::Elem) -> usize;

    /// Size of the free part of the domain (positions, rows or matrix rows).
    fn dom_extent(&self, a: &Self::Elem) -> usize;

    /// Number of free classes (blocks, columns) in the codomain.
    fn cod_extent(&self, a: &Self::Elem) -> usize;

    fn restrict(&self, n: usize, a: &Self::Elem) -> Result<Self::Elem>;

    fn le_fin(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    /// `a ∘ b`; requires `cod_extent(a) == dom_extent(b)`.
    fn compose(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    /// All values with the given extents, canonically ordered.
    fn enumerate(&self, dom: usize, cod: usize) -> Vec<Self::Elem>;

    /// Cut points of a projected point, in prefix-length units, strictly
    /// inside the stored data (the end of the truncation is not included).
    fn cuts(&self, x: &Self::Elem) -> Vec<usize>;

    /// The first `len` prefix units of `x`, keeping all of its classes.
    fn prefix(&self, x: &Self::Elem, len: usize) -> Result<Self::Elem>;

    /// Prefix-length of `x` (positions, rows or matrix rows including any fixed part).
    fn prefix_len(&self, x: &Self::Elem) -> usize;

    fn to_json(&self, a: &Self::Elem) -> serde_json::Value;

    /// `b ≤ a` on truncated elements of equal domain.
    fn le(&self, b: &Self::Elem, a: &Self::Elem) -> Result<bool> {
        if self.dom_extent(a) != self.dom_extent(b) {
            return domain("le: truncations must share their domain");
        }
        Ok(self.le_fin(b, a))
    }

    /// All approximations whose domain has the given free extent.
    /// Values with no free class other than the empty one are not approximations.
    fn approximations_with_domain(&self, dom: usize) -> Vec<Self::Elem> {
        let mut out: Vec<_> = (1..=dom).flat_map(|c| self.enumerate(dom, c)).collect();
        if dom == 0 {
            out.push(self.empty());
        }
        out.sort();
        out
    }

    /// `{a : a ≤_fin b}` built by composing `b` with every admissible map.
    fn downset(&self, b: &Self::Elem) -> Vec<Self::Elem> {
        let k = self.cod_extent(b);
        if k == 0 {
            return vec![self.empty()];
        }
        let mut out: Vec<_> = (1..=k)
            .flat_map(|j| self.enumerate(k, j))
            .filter_map(|c| self.compose(b, &c).ok())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Depth of an approximation with `c` codomain classes.
    fn depth_of_cod(&self, c: usize) -> usize {
        c
    }

    /// Number of defined `s` values of a projected point (`s(n, x)` exists for `n < s_count`).
    fn s_count(&self, x: &Self::Elem) -> usize {
        self.depth_of_cod(self.cod_extent(x)) + self.cuts(x).len() + 1
    }

    fn s_approx(&self, n: usize, x: &Self::Elem) -> Result<Self::Elem> {
        let k = self.depth_of_cod(self.cod_extent(x));
        if n < k {
            return self.restrict(n, x);
        }
        let cuts = self.cuts(x);
        match (n - k).cmp(&cuts.len()) {
            std::cmp::Ordering::Less => self.prefix(x, cuts[n - k]),
            std::cmp::Ordering::Equal => Ok(x.clone()),
            std::cmp::Ordering::Greater => budget(format!(
                "s({n}, X) needs {} cut points, truncation has {}",
                n - k + 1,
                cuts.len() + 1
            )),
        }
    }

    /// The index `n` at which `a` occurs in the `s`-sequence of any `X ∈ R_k` passing through it.
    fn s_index(&self, k: usize, a: &Self::Elem) -> usize {
        if self.cod_extent(a) < k {
            self.depth(a)
        } else {
            self.depth_of_cod(k) + self.cuts(a).len()
        }
    }

    /// The strict order on `k`-approximations: `b < c` iff both occur in one `s`-sequence with `b` first.
    fn precedes(&self, b: &Self::Elem, c: &Self::Elem) -> bool {
        let k = self.cod_extent(c);
        let (ib, ic) = (self.s_index(k, b), self.s_index(k, c));
        ib < ic && self.s_approx(ib, c).map(|v| &v == b).unwrap_or(false)
    }
}

/// `depth_B(a)`; `Infinite` when no `n <= limit` works.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Depth {
    Finite(usize),
    Infinite,
}

impl Depth {
    pub fn is_finite(self) -> bool {
        matches!(self, Depth::Finite(_))
    }
}

pub fn depth<S: Space>(space: &S, a: &S::Elem, b: &S::Elem, limit: usize) -> Result<Depth> {
    space.validate(a)?;
    space.validate(b)?;
    for n in 0..=limit.min(space.depth(b)) {
        if space.le_fin(a, &space.restrict(n, b)?) {
            return Ok(Depth::Finite(n));
        }
    }
    Ok(Depth::Infinite)
}

/// `a ⊑ b`.
pub fn is_prefix<S: Space>(space: &S, a: &S::Elem, b: &S::Elem) -> Result<bool> {
    space.validate(a)?;
    space.validate(b)?;
    let m = space.depth(a);
    if m > space.depth(b) {
        return Ok(false);
    }
    Ok(&space.restrict(m, b)? == a)
}

/// `[a, B]` restricted to truncations of `B`'s own extents.
#[derive(Debug, Clone)]
pub struct BasicSet<E> {
    pub stem: E,
    pub bound: E,
    pub members: Vec<E>,
}

impl<E> BasicSet<E> {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Members of `[a, B]` among truncations with `B`'s domain and `depth_limit` classes.
pub fn basic_set<S: Space>(space: &S, a: &S::Elem, bound: &S::Elem, depth_limit: usize) -> BasicSet<S::Elem> {
    let n = space.depth(a);
    let members = space
        .enumerate(space.dom_extent(bound), depth_limit)
        .into_iter()
        .filter(|x| space.le(x, bound).unwrap_or(false))
        .filter(|x| n <= space.depth(x) && space.restrict(n, x).map(|r| &r == a).unwrap_or(false))
        .collect();
    BasicSet {
        stem: a.clone(),
        bound: bound.clone(),
        members,
    }
}

/// `⟨a⟩` truncated to projected points of `R_k` with free domain extent `dom`.
pub fn basic_set_members<S: Space>(space: &S, a: &S::Elem, k: usize, dom: usize) -> Vec<S::Elem> {
    let idx = space.s_index(k, a);
    let pool = space.enumerate(dom, k);
    let keep = crate::par::map(&pool, |x| space.s_approx(idx, x).map(|v| &v == a).unwrap_or(false));
    pool.into_iter().zip(keep).filter_map(|(x, k)| k.then_some(x)).collect()
}

/// A finite coloring, total on an explicitly listed domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring<T: Ord> {
    arity: usize,
    table: BTreeMap<T, usize>,
}

impl<T: Ord + Clone> Coloring<T> {
    pub fn from_fn(arity: usize, domain: impl IntoIterator<Item = T>, mut f: impl FnMut(&T) -> usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Domain("a coloring needs at least one color".into()));
        }
        let mut table = BTreeMap::new();
        for x in domain {
            let c = f(&x);
            if c >= arity {
                return Err(Error::Domain(format!("color {c} outside 0..{arity}")));
            }
            table.insert(x, c);
        }
        Ok(Coloring { arity, table })
    }

    pub fn constant(domain: impl IntoIterator<Item = T>) -> Self {
        Self::from_fn(1, domain, |_| 0).expect("arity 1")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, x: &T) -> Option<usize> {
        self.table.get(x).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = &T> {
        self.table.keys()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}
