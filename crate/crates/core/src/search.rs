//! Brute-force witness search at desk scale.
//!
//! Every mode searches candidates `A = B∘C` in a fixed canonical order:
//! iterative deepening on the number of classes `C` drops (`cod(B) - cod(C)`),
//! then the space's enumeration order. The first monochromatic candidate in
//! that order is returned, whatever the thread count. The verifier rebuilds the
//! colored set through `≤_fin` membership instead of composition.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::gapw::{self, GapSpace, GapWord};
use crate::par;
use crate::space::{depth, Depth, Space};

/// A coloring given as a function; it must be total on the sets it is asked about.
pub type ColorFn<'a, E> = dyn Fn(&E) -> usize + Sync + 'a;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Fewest classes a witness may keep.
    pub min_width: usize,
    /// Candidates examined before giving up.
    pub max_nodes: usize,
}

impl SearchBudget {
    pub fn new(min_width: usize) -> Self {
        SearchBudget { min_width, max_nodes: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub mode: String,
    pub space: String,
    pub found: bool,
    /// True when every candidate was examined, so `found = false` proves there is no witness at this extent.
    pub exhausted: bool,
    pub witness: Option<serde_json::Value>,
    pub color: Option<usize>,
    /// Size of the colored set below the witness.
    pub members: usize,
    pub nodes_explored: usize,
    pub candidates: usize,
    pub verified: bool,
    pub note: String,
}

impl WitnessReport {
    pub fn summary(&self) -> String {
        match (self.found, self.exhausted) {
            (true, _) => format!(
                "{} on {}: witness with color {} over {} members after {} of {} candidates, verified = {}",
                self.mode,
                self.space,
                self.color.unwrap_or_default(),
                self.members,
                self.nodes_explored,
                self.candidates,
                self.verified
            ),
            (false, true) => format!(
                "{} on {}: no witness among all {} candidates",
                self.mode, self.space, self.candidates
            ),
            (false, false) => format!(
                "{} on {}: budget spent after {} of {} candidates; absence is not proved",
                self.mode, self.space, self.nodes_explored, self.candidates
            ),
        }
    }
}

/// The common color of `items`, or `None` when they disagree or there are none.
fn monochrome<E>(items: &[E], color: &ColorFn<'_, E>) -> Option<usize> {
    let first = color(items.first()?);
    items.iter().all(|x| color(x) == first).then_some(first)
}

/// `C` candidates in canonical order.
fn refinements<S: Space>(space: &S, b: &S::Elem, min_width: usize) -> Vec<S::Elem> {
    let k = space.cod_extent(b);
    (min_width.max(1)..=k).rev().flat_map(|j| space.enumerate(k, j)).collect()
}

struct Outcome<E> {
    witness: Option<(E, usize, usize)>,
    nodes: usize,
    candidates: usize,
    exhausted: bool,
}

/// First candidate `B∘C` accepted by `members`-monochromaticity, in canonical order.
fn run_search<S: Space>(
    space: &S,
    b: &S::Elem,
    budget: &SearchBudget,
    admissible: &(dyn Fn(&S::Elem) -> bool + Sync),
    members: &(dyn Fn(&S::Elem) -> Vec<S::Elem> + Sync),
    color: &ColorFn<'_, S::Elem>,
) -> Outcome<S::Elem> {
    let cands = refinements(space, b, budget.min_width);
    let limit = cands.len().min(budget.max_nodes);
    let hit = |c: &S::Elem| -> Option<(S::Elem, usize, usize)> {
        let a = space.compose(b, c).ok()?;
        if !admissible(&a) {
            return None;
        }
        let set = members(&a);
        monochrome(&set, color).map(|col| (a, col, set.len()))
    };
    match par::position_first(&cands[..limit], |c| hit(c).is_some()) {
        Some(i) => Outcome { witness: hit(&cands[i]), nodes: i + 1, candidates: cands.len(), exhausted: false },
        None => Outcome { witness: None, nodes: limit, candidates: cands.len(), exhausted: limit == cands.len() },
    }
}

fn report<S: Space>(space: &S, mode: &str, out: Outcome<S::Elem>, verified: bool, note: String) -> WitnessReport {
    let (witness, color, members) = match &out.witness {
        Some((a, c, n)) => (Some(space.to_json(a)), Some(*c), *n),
        None => (None, None, 0),
    };
    WitnessReport {
        mode: mode.into(),
        space: space.id(),
        found: out.witness.is_some(),
        exhausted: out.exhausted,
        witness,
        color,
        members,
        nodes_explored: out.nodes,
        candidates: out.candidates,
        verified,
        note,
    }
}

/// `r_d[a, A]` built by composition: `r_d(A∘D)` over all `D`, keeping those that extend `a`.
fn members_by_compose<S: Space>(space: &S, a_big: &S::Elem, stem: &S::Elem, d: usize) -> Vec<S::Elem> {
    let k = space.cod_extent(a_big);
    let stem_depth = space.depth(stem);
    let mut out: Vec<S::Elem> = (1..=k)
        .filter(|&j| space.depth_of_cod(j) >= d)
        .flat_map(|j| space.enumerate(k, j))
        .filter_map(|c| space.compose(a_big, &c).ok())
        .filter_map(|y| space.restrict(d, &y).ok())
        .filter(|x| space.restrict(stem_depth, x).ok().as_ref() == Some(stem))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// The same set read off `≤_fin`: approximations of depth `d` extending `a` and below some `r_m(A)`.
fn members_by_order<S: Space>(space: &S, a_big: &S::Elem, stem: &S::Elem, d: usize) -> Vec<S::Elem> {
    let stem_depth = space.depth(stem);
    let prefixes: Vec<S::Elem> = (0..=space.depth(a_big)).filter_map(|m| space.restrict(m, a_big).ok()).collect();
    let mut out = Vec::new();
    for dom in 0..=space.dom_extent(a_big) {
        for x in space.approximations_with_domain(dom) {
            if space.depth(&x) != d || space.restrict(stem_depth, &x).ok().as_ref() != Some(stem) {
                continue;
            }
            if prefixes.iter().any(|p| space.dom_extent(p) == dom && space.le_fin(&x, p)) {
                out.push(x);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn verify_below<S: Space>(space: &S, a: &S::Elem, b: &S::Elem) -> bool {
    space.validate(a).is_ok() && space.le(a, b).unwrap_or(false)
}

/// Stem-extension search: `A ∈ [depth_B(a), B]` with `r_{|a|+1}[a, A]` monochromatic.
pub fn a4_witness<S: Space>(
    space: &S,
    stem: &S::Elem,
    b: &S::Elem,
    color: &ColorFn<'_, S::Elem>,
    budget: &SearchBudget,
) -> Result<WitnessReport> {
    let n = match depth(space, stem, b, space.depth(b))? {
        Depth::Finite(n) => n,
        Depth::Infinite => return domain("the stem is not below the bound"),
    };
    let d = space.depth(stem) + 1;
    let rb = space.restrict(n, b)?;
    let admissible = |a: &S::Elem| space.restrict(n, a).ok().as_ref() == Some(&rb);
    let out = run_search(space, b, budget, &admissible, &|a| members_by_compose(space, a, stem, d), color);
    let verified = out.witness.as_ref().is_some_and(|(a, col, _)| {
        let set = members_by_order(space, a, stem, d);
        verify_below(space, a, b)
            && space.restrict(n, a).ok().as_ref() == Some(&rb)
            && !set.is_empty()
            && set.iter().all(|x| color(x) == *col)
    });
    Ok(report(space, "a4", out, verified, format!("depth_B(a) = {n}; colored set r_{d}[a, A]")))
}

/// Finite Ramsey lemma on approximations: every `k`-approximation below `A` gets one color.
pub fn approx_ramsey<S: Space>(
    space: &S,
    b: &S::Elem,
    k: usize,
    color: &ColorFn<'_, S::Elem>,
    budget: &SearchBudget,
) -> Result<WitnessReport> {
    if k == 0 {
        return domain("approx-ramsey needs k >= 1");
    }
    let empty = space.empty();
    let out = run_search(space, b, budget, &|_| true, &|a| members_by_compose(space, a, &empty, k), color);
    let verified = out.witness.as_ref().is_some_and(|(a, col, _)| {
        let set = members_by_order(space, a, &empty, k);
        verify_below(space, a, b) && !set.is_empty() && set.iter().all(|x| color(x) == *col)
    });
    Ok(report(space, "approx-ramsey", out, verified, format!("colored set AR_{k}|A")))
}

/// Pigeonhole analog over gapw words: `B ≤ A` with the images of `[B]` monochromatic.
pub fn pigeonhole_demo(
    space: &GapSpace,
    a: &GapWord,
    color: &ColorFn<'_, GapWord>,
    budget: &SearchBudget,
) -> Result<WitnessReport> {
    space.validate(a)?;
    let bracket = |b: &GapWord| -> Vec<GapWord> {
        let mut out: Vec<GapWord> =
            gapw::symbols(b, true).iter().filter_map(|s| gapw::symbol_to_function(s, b).ok()).collect();
        out.sort();
        out.dedup();
        out
    };
    let out = run_search(space, a, budget, &|_| true, &bracket, color);
    let verified = out.witness.as_ref().is_some_and(|(b, col, _)| {
        let set = bracket_by_decoding(space, b);
        verify_below(space, b, a) && !set.is_empty() && set.iter().all(|x| color(x) == *col)
    });
    Ok(report(space, "pigeonhole", out, verified, "colored set [B] as symbol images".into()))
}

/// Every one-class word within the extent of `B` that decodes over `B`.
pub fn bracket_by_decoding(space: &GapSpace, b: &GapWord) -> Vec<GapWord> {
    let mut out: Vec<GapWord> = (1..=space.dom_extent(b))
        .flat_map(|n| space.enumerate(n, 1))
        .filter(|f| gapw::bracket_contains(b, f))
        .collect();
    out.sort();
    out
}

/// A coloring of `R_k` determined by `s(d, X)`; the end of a truncation counts as its last cut.
pub fn cylinder<'a, S: Space>(space: &'a S, d: usize, g: &'a ColorFn<'a, S::Elem>) -> impl Fn(&S::Elem) -> usize + Sync + 'a {
    move |x| {
        let n = d.min(space.s_count(x).saturating_sub(1));
        g(&space.s_approx(n, x).expect("n < s_count"))
    }
}

/// Projected analog: `A ≤ B` with `{A∘X : X ∈ R_k}` monochromatic.
pub fn projected_demo<S: Space>(
    space: &S,
    b: &S::Elem,
    k: usize,
    color: &ColorFn<'_, S::Elem>,
    budget: &SearchBudget,
) -> Result<WitnessReport> {
    if k == 0 {
        return domain("projected search needs k >= 1");
    }
    let composites = |a: &S::Elem| -> Vec<S::Elem> {
        let mut out: Vec<S::Elem> =
            space.enumerate(space.cod_extent(a), k).iter().filter_map(|x| space.compose(a, x).ok()).collect();
        out.sort();
        out.dedup();
        out
    };
    let width = SearchBudget { min_width: budget.min_width.max(k), ..*budget };
    let out = run_search(space, b, &width, &|_| true, &composites, color);
    let verified = out.witness.as_ref().is_some_and(|(a, col, _)| {
        let set: Vec<S::Elem> =
            space.enumerate(space.dom_extent(a), k).into_iter().filter(|y| space.le_fin(y, a)).collect();
        verify_below(space, a, b) && !set.is_empty() && set.iter().all(|y| color(y) == *col)
    });
    Ok(report(space, "projected", out, verified, format!("colored set R_{k}|A")))
}
