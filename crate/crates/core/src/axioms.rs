//! Exhaustive, bounded checks of the axiom clauses over any [`Space`].
//!
//! Pools are built from the space's own enumerator:
//! truncations are all values with free domain extent `1..=max_extent` and at
//! least one class; approximations are every `r_n` of a truncation; projected
//! points of `R_k` are the truncations with exactly `k` classes, `1 <= k <= max_k`.
//! Every quantifier below ranges over these pools exhaustively. A clause stops
//! early only when `max_instances` is reached, and its report is then flagged
//! incomplete.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::par;
use crate::space::{Depth, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessBudget {
    pub max_extent: usize,
    pub max_k: usize,
    pub max_instances: usize,
    pub max_reported: usize,
}

impl HarnessBudget {
    pub fn new(max_extent: usize) -> Self {
        HarnessBudget { max_extent, max_k: max_extent, max_instances: 5_000_000, max_reported: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub instances: usize,
    pub violation_count: usize,
    pub violations: Vec<String>,
    pub pass: bool,
    pub complete: bool,
    pub quantifiers: String,
}

pub const CLAUSES: [&str; 13] = [
    "A1a", "A1b", "A1c", "A2a", "A2c", "A5c", "A5d", "A5e", "A6a", "A6c", "A6d", "A7b", "A7c",
];

/// Per-item result: instance count and violation descriptors.
type Outcome = (usize, Vec<String>);

struct Pools<E> {
    truncations: Vec<E>,
    approximations: Vec<E>,
    /// `projected[k-1]` holds the projected points of `R_k`.
    projected: Vec<Vec<E>>,
}

fn pools<S: Space>(space: &S, budget: &HarnessBudget) -> Pools<S::Elem> {
    let mut truncations = Vec::new();
    for n in 1..=budget.max_extent {
        for k in 1..=n {
            truncations.extend(space.enumerate(n, k));
        }
    }
    let mut approx = BTreeSet::new();
    for a in &truncations {
        for n in 0..=space.depth(a) {
            if let Ok(r) = space.restrict(n, a) {
                approx.insert(r);
            }
        }
    }
    let projected = (1..=budget.max_k.min(budget.max_extent))
        .map(|k| truncations.iter().filter(|x| space.cod_extent(x) == k).cloned().collect())
        .collect();
    Pools { truncations, approximations: approx.into_iter().collect(), projected }
}

/// Runs `check` on every item in canonical order and folds the outcomes,
/// stopping at whole-item granularity once `max_instances` is reached.
fn run<T: Sync>(
    axiom: &str,
    quantifiers: &str,
    items: &[T],
    budget: &HarnessBudget,
    check: impl Fn(&T) -> Outcome + Sync + Send,
) -> AxiomReport {
    let outcomes = par::map(items, check);
    let mut instances = 0;
    let mut complete = true;
    let mut violations = Vec::new();
    for (n, v) in outcomes {
        if instances >= budget.max_instances {
            complete = false;
            break;
        }
        instances += n;
        violations.extend(v);
    }
    violations.sort();
    let violation_count = violations.len();
    violations.truncate(budget.max_reported);
    AxiomReport {
        axiom: axiom.to_string(),
        instances,
        violation_count,
        violations,
        pass: violation_count == 0,
        complete,
        quantifiers: quantifiers.to_string(),
    }
}

fn compact<S: Space>(space: &S, a: &S::Elem) -> String {
    space.to_json(a)["data"].to_string()
}

pub fn check_axioms<S: Space>(space: &S, budget: &HarnessBudget) -> Vec<AxiomReport> {
    CLAUSES.iter().filter_map(|c| check_clause(space, c, budget)).collect()
}

/// One clause by id; `None` for ids the harness does not know.
pub fn check_clause<S: Space>(space: &S, clause: &str, budget: &HarnessBudget) -> Option<AxiomReport> {
    let p = pools(space, budget);
    let j = |a: &S::Elem| compact(space, a);
    let report = match clause {
        "A1a" => run(clause, "all truncations", &p.truncations, budget, |a| {
            let ok = space.restrict(0, a).map(|r| r == space.empty()).unwrap_or(false);
            (1, if ok { vec![] } else { vec![format!("r_0({}) is not empty", j(a))] })
        }),
        "A1b" => run(clause, "all truncations A; A = r_|A|(A)", &p.truncations, budget, |a| {
            let ok = space.restrict(space.depth(a), a).map(|r| &r == a).unwrap_or(false);
            (1, if ok { vec![] } else { vec![format!("{} is not recovered by its approximations", j(a))] })
        }),
        "A1c" => run(clause, "all truncations A, all n <= |A|, all j < n", &p.truncations, budget, |a| {
            let mut out = (0, vec![]);
            for n in 0..=space.depth(a) {
                let Ok(r) = space.restrict(n, a) else {
                    out.1.push(format!("r_{n}({}) undefined", j(a)));
                    continue;
                };
                out.0 += 1;
                if space.depth(&r) != n {
                    out.1.push(format!("|r_{n}({})| = {}", j(a), space.depth(&r)));
                }
                for i in 0..n {
                    if space.restrict(i, &r).ok() != space.restrict(i, a).ok() {
                        out.1.push(format!("r_{i}(r_{n}({})) differs from r_{i}", j(a)));
                    }
                }
            }
            out
        }),
        "A2a" => run(clause, "all approximations b", &p.approximations, budget, |b| {
            let down = space.downset(b);
            let filtered: Vec<_> = space
                .approximations_with_domain(space.dom_extent(b))
                .into_iter()
                .filter(|a| space.le_fin(a, b))
                .collect();
            (1, if down == filtered { vec![] } else { vec![format!("downset of {} disagrees with the filter", j(b))] })
        }),
        "A2c" => run(clause, "all approximations b, all a ⊏ b, all c with b ≤_fin c", &p.approximations, budget, |b| {
            let mut out = (0, vec![]);
            let above: Vec<_> = space
                .approximations_with_domain(space.dom_extent(b))
                .into_iter()
                .filter(|c| space.le_fin(b, c))
                .collect();
            for m in 0..space.depth(b) {
                let a = space.restrict(m, b).expect("prefix");
                for c in &above {
                    out.0 += 1;
                    let found = (0..space.depth(c))
                        .any(|i| space.restrict(i, c).map(|d| space.le_fin(&a, &d)).unwrap_or(false));
                    if !found {
                        out.1.push(format!("a = {}, b = {}, c = {}", j(&a), j(b), j(c)));
                    }
                }
            }
            out
        }),
        "A5c" => run(clause, "all composable truncation triples", &p.truncations, budget, |a| {
            let mut out = (0, vec![]);
            let k = space.cod_extent(a);
            for jj in 1..=k {
                for b in space.enumerate(k, jj) {
                    for i in 1..=jj {
                        for c in space.enumerate(jj, i) {
                            out.0 += 1;
                            let left = space.compose(&b, &c).and_then(|bc| space.compose(a, &bc));
                            let right = space.compose(a, &b).and_then(|ab| space.compose(&ab, &c));
                            let valid = left.as_ref().map(|x| space.validate(x).is_ok()).unwrap_or(false);
                            if left.as_ref().ok() != right.as_ref().ok() || !valid {
                                out.1.push(format!("A = {}, B = {}, C = {}", j(a), j(&b), j(&c)));
                            }
                        }
                    }
                }
            }
            out
        }),
        "A5d" => run(clause, "all truncations A, B and projected X in R_k, k <= max_k", &p.truncations, budget, |a| {
            let mut out = (0, vec![]);
            let k = space.cod_extent(a);
            for jj in 1..=k {
                for b in space.enumerate(k, jj) {
                    for x in p.projected.iter().flatten().filter(|x| space.dom_extent(x) == jj) {
                        out.0 += 1;
                        let left = space.compose(&b, x).and_then(|bx| space.compose(a, &bx));
                        let right = space.compose(a, &b).and_then(|ab| space.compose(&ab, x));
                        let kept = left.as_ref().map(|y| space.cod_extent(y) == space.cod_extent(x)).unwrap_or(false);
                        if left.as_ref().ok() != right.as_ref().ok() || !kept {
                            out.1.push(format!("A = {}, B = {}, X = {}", j(a), j(&b), j(x)));
                        }
                    }
                }
            }
            out
        }),
        "A5e" => run(clause, "all truncations A and all C composable with A", &p.truncations, budget, |a| {
            let mut out = (0, vec![]);
            let k = space.cod_extent(a);
            for c in (1..=k).flat_map(|i| space.enumerate(k, i)) {
                out.0 += 1;
                let ok = space.compose(a, &c).map(|b| space.le(&b, a).unwrap_or(false)).unwrap_or(false);
                if !ok {
                    out.1.push(format!("A = {}, C = {}", j(a), j(&c)));
                }
            }
            out
        }),
        "A6a" => run(clause, "all projected X, all n < s_count(X)", &all_projected(&p), budget, |x| {
            let mut out = (0, vec![]);
            let k = space.cod_extent(x);
            let f = space.depth_of_cod(k);
            let sf = space.s_approx(f, x);
            for n in 0..space.s_count(x) {
                out.0 += 1;
                let Ok(sn) = space.s_approx(n, x) else {
                    out.1.push(format!("s({n}, {}) undefined", j(x)));
                    continue;
                };
                let ok = if n < f {
                    sf.as_ref().ok().and_then(|s| space.restrict(n, s).ok()).as_ref() == Some(&sn)
                } else {
                    space.cod_extent(&sn) == k
                        && space.restrict(f - 1, &sn).ok() == space.s_approx(f - 1, x).ok()
                };
                if !ok {
                    out.1.push(format!("s({n}, {})", j(x)));
                }
            }
            out
        }),
        "A6c" => {
            let per_k: Vec<Vec<S::Elem>> = p.projected.clone();
            run(clause, "all pairs of s-values of projected points of equal k", &per_k, budget, |xs| {
                let mut seen: HashMap<S::Elem, (usize, Vec<S::Elem>, S::Elem)> = HashMap::new();
                let mut out = (0, vec![]);
                for x in xs {
                    let seq: Vec<S::Elem> = (0..space.s_count(x)).filter_map(|n| space.s_approx(n, x).ok()).collect();
                    for (n, a) in seq.iter().enumerate() {
                        out.0 += 1;
                        match seen.get(a) {
                            None => {
                                seen.insert(a.clone(), (n, seq[..n].to_vec(), x.clone()));
                            }
                            Some((m, before, y)) => {
                                if *m != n || before[..] != seq[..n] {
                                    out.1.push(format!("s({n}, {}) = s({m}, {})", j(x), j(y)));
                                }
                            }
                        }
                    }
                }
                out
            })
        }
        "A6d" => run(clause, "all projected points of equal k and domain", &p.projected, budget, |xs| {
            let mut seen: HashMap<Vec<S::Elem>, &S::Elem> = HashMap::new();
            let mut out = (0, vec![]);
            for x in xs {
                out.0 += 1;
                let seq: Vec<S::Elem> = (0..space.s_count(x)).filter_map(|n| space.s_approx(n, x).ok()).collect();
                if let Some(y) = seen.insert(seq, x) {
                    out.1.push(format!("{} and {} share all s-values", j(x), j(y)));
                }
            }
            out
        }),
        "A7b" => run(clause, "all X in R_n, all b < c among its s-values, all a with domain n", &all_projected(&p), budget, |x| {
            let mut out = (0, vec![]);
            let n = space.cod_extent(x);
            let seq: Vec<S::Elem> = (space.depth_of_cod(n)..space.s_count(x)).filter_map(|i| space.s_approx(i, x).ok()).collect();
            for k in 1..=n {
                for a in space.enumerate(n, k) {
                    for (i, b) in seq.iter().enumerate() {
                        for c in &seq[i + 1..] {
                            out.0 += 1;
                            let ok = match (space.compose(b, &a), space.compose(c, &a)) {
                                (Ok(ba), Ok(ca)) => space.precedes(&ba, &ca),
                                _ => false,
                            };
                            if !ok {
                                out.1.push(format!("b = {}, c = {}, a = {}", j(b), j(c), j(&a)));
                            }
                        }
                    }
                }
            }
            out
        }),
        "A7c" => run(clause, "all truncations A, projected X composable with A, all s-values a of X", &p.truncations, budget, |a_big| {
            let mut out = (0, vec![]);
            let kk = space.cod_extent(a_big);
            for x in p.projected.iter().flatten().filter(|x| space.dom_extent(x) == kk) {
                match coherence(space, a_big, x) {
                    Ok((n, v)) => {
                        out.0 += n;
                        out.1.extend(v.into_iter().map(|m| format!("A = {}, X = {}: {m}", j(a_big), j(x))));
                    }
                    Err(e) => out.1.push(format!("A = {}, X = {}: {e}", j(a_big), j(x))),
                }
            }
            out
        }),
        _ => return None,
    };
    Some(report)
}

fn all_projected<E: Clone>(p: &Pools<E>) -> Vec<E> {
    p.projected.iter().flatten().cloned().collect()
}

/// Coherence of `s` with composition: for every `s`-value `a` of `X` with
/// `k` classes, `b = r_n(A)∘a` (where `n` is the domain extent of `a`) has
/// `depth_A(b) = n` and is an `s`-value of `A∘X`.
pub fn coherence<S: Space>(space: &S, a_big: &S::Elem, x: &S::Elem) -> Result<(usize, Vec<String>)> {
    let k = space.cod_extent(x);
    let ax = space.compose(a_big, x)?;
    let mut checked = 0;
    let mut bad = Vec::new();
    for i in space.depth_of_cod(k)..space.s_count(x) {
        let a = space.s_approx(i, x)?;
        let n = space.depth_of_cod(space.dom_extent(&a));
        let b = space.compose(&space.restrict(n, a_big)?, &a)?;
        checked += 1;
        let d = crate::space::depth(space, &b, a_big, space.depth(a_big))?;
        if d != Depth::Finite(n) {
            bad.push(format!("depth_A(r_{n}(A)∘s({i}, X)) = {d:?}"));
        }
        let idx = space.s_index(k, &b);
        if space.s_approx(idx, &ax).ok().as_ref() != Some(&b) {
            bad.push(format!("r_{n}(A)∘s({i}, X) is not s({idx}, A∘X)"));
        }
    }
    Ok((checked, bad))
}

/// The end-extension law on realized `k`-approximations:
/// `a ≤ b` iff every projected point through `b` also passes through `a`.
pub fn end_extension<S: Space>(space: &S, k: usize, max_extent: usize) -> AxiomReport {
    let budget = HarnessBudget::new(max_extent);
    let points: Vec<S::Elem> = (1..=max_extent).flat_map(|d| space.enumerate(d, k)).collect();
    let realized: BTreeSet<S::Elem> = points
        .iter()
        .flat_map(|x| (space.depth_of_cod(k)..space.s_count(x)).filter_map(|n| space.s_approx(n, x).ok()))
        .collect();
    let realized: Vec<S::Elem> = realized.into_iter().collect();
    let through = |a: &S::Elem| -> BTreeSet<S::Elem> {
        let idx = space.s_index(k, a);
        points.iter().filter(|x| space.s_approx(idx, x).ok().as_ref() == Some(a)).cloned().collect()
    };
    let members: Vec<BTreeSet<S::Elem>> = par::map(&realized, through);
    let indexed: Vec<usize> = (0..realized.len()).collect();
    run("end-extension", "all pairs of realized k-approximations", &indexed, &budget, |&i| {
        let mut out = (0, vec![]);
        for jdx in 0..realized.len() {
            out.0 += 1;
            let (a, b) = (&realized[i], &realized[jdx]);
            let le = a == b || space.precedes(a, b);
            let sub = members[jdx].is_subset(&members[i]);
            if le != sub {
                out.1.push(format!("a = {}, b = {}: a ≤ b is {le}, ⟨b⟩ ⊆ ⟨a⟩ is {sub}", compact(space, a), compact(space, b)));
            }
        }
        out
    })
}

/// Wraps a space with a replacement composition, for mutation tests.
pub struct Mutant<'a, S: Space> {
    pub inner: &'a S,
    #[allow(clippy::type_complexity)]
    pub compose: Box<dyn Fn(&S::Elem, &S::Elem) -> Result<S::Elem> + Sync + 'a>,
}

impl<S: Space> Space for Mutant<'_, S> {
    type Elem = S::Elem;
    fn id(&self) -> String {
        format!("mutant({})", self.inner.id())
    }
    fn validate(&self, a: &S::Elem) -> Result<()> {
        self.inner.validate(a)
    }
    fn empty(&self) -> S::Elem {
        self.inner.empty()
    }
    fn depth(&self, a: &S::Elem) -> usize {
        self.inner.depth(a)
    }
    fn dom_extent(&self, a: &S::Elem) -> usize {
        self.inner.dom_extent(a)
    }
    fn cod_extent(&self, a: &S::Elem) -> usize {
        self.inner.cod_extent(a)
    }
    fn restrict(&self, n: usize, a: &S::Elem) -> Result<S::Elem> {
        self.inner.restrict(n, a)
    }
    fn le_fin(&self, a: &S::Elem, b: &S::Elem) -> bool {
        self.inner.le_fin(a, b)
    }
    fn compose(&self, a: &S::Elem, b: &S::Elem) -> Result<S::Elem> {
        (self.compose)(a, b)
    }
    fn enumerate(&self, dom: usize, cod: usize) -> Vec<S::Elem> {
        self.inner.enumerate(dom, cod)
    }
    fn approximations_with_domain(&self, dom: usize) -> Vec<S::Elem> {
        self.inner.approximations_with_domain(dom)
    }
    fn depth_of_cod(&self, c: usize) -> usize {
        self.inner.depth_of_cod(c)
    }
    fn cuts(&self, x: &S::Elem) -> Vec<usize> {
        self.inner.cuts(x)
    }
    fn prefix(&self, x: &S::Elem, len: usize) -> Result<S::Elem> {
        self.inner.prefix(x, len)
    }
    fn prefix_len(&self, x: &S::Elem) -> usize {
        self.inner.prefix_len(x)
    }
    fn to_json(&self, a: &S::Elem) -> serde_json::Value {
        self.inner.to_json(a)
    }
}
