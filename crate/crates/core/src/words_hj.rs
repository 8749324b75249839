//! Variable words, rapidly increasing sequences and their spans, the coloring
//! transfer from symbol images to words, and finite combinatorial-line search.
//!
//! Letters are `char`s; [`VAR`] is reserved for the variable.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{budget, domain, Error, Result};
use crate::gapw::{symbol_to_function, GapWord, Symbol};
use crate::par;
use crate::space::Coloring;

pub const VAR: char = 'v';

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<char>);

impl Word {
    pub fn new(s: &str) -> Self {
        Word(s.chars().filter(|c| !c.is_whitespace()).collect())
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn is_variable(&self) -> bool {
        self.0.contains(&VAR)
    }

    /// `w(l)`: every `v` replaced by `l`.
    pub fn substitute(&self, l: char, alphabet: &[char]) -> Result<Word> {
        if l != VAR && !alphabet.contains(&l) {
            return domain(format!("letter {l:?} is not in the alphabet"));
        }
        Ok(Word(self.0.iter().map(|&c| if c == VAR { l } else { c }).collect()))
    }

    fn concat(&self, other: &Word) -> Word {
        Word([self.0.as_slice(), other.0.as_slice()].concat())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|c| write!(f, "{c}"))
    }
}

/// `(n_i, l_i)` with strictly increasing `n_i`.
pub type Decomposition = Vec<(usize, char)>;

/// A rapidly increasing sequence of variable words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSeq {
    alphabet: Vec<char>,
    base: Vec<Word>,
}

impl WordSeq {
    pub fn new(alphabet: &[char], base: Vec<Word>) -> Result<Self> {
        if alphabet.contains(&VAR) {
            return domain(format!("{VAR:?} is reserved for the variable"));
        }
        let mut total = 0;
        for (n, w) in base.iter().enumerate() {
            if !w.is_variable() {
                return domain(format!("w_{n} = {w} has no variable"));
            }
            if let Some(c) = w.0.iter().find(|&&c| c != VAR && !alphabet.contains(&c)) {
                return domain(format!("w_{n} uses {c:?}, outside the alphabet"));
            }
            if w.len() <= total {
                return domain(format!("|w_{n}| = {} is not above {total}", w.len()));
            }
            total += w.len();
        }
        Ok(WordSeq { alphabet: alphabet.to_vec(), base })
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }
    pub fn base(&self) -> &[Word] {
        &self.base
    }

    fn letters(&self) -> Vec<char> {
        self.alphabet.iter().copied().chain(std::iter::once(VAR)).collect()
    }

    pub fn assemble(&self, d: &[(usize, char)]) -> Result<Word> {
        if d.windows(2).any(|p| p[0].0 >= p[1].0) {
            return domain("indices must be strictly increasing");
        }
        d.iter().try_fold(Word(Vec::new()), |acc, &(n, l)| {
            let w = self.base.get(n).ok_or_else(|| Error::Domain(format!("no w_{n}")))?;
            Ok(acc.concat(&w.substitute(l, &self.alphabet)?))
        })
    }

    /// Span elements with at most `max_terms` terms, each with its decomposition, in canonical order.
    pub fn span_elements(&self, max_terms: usize) -> Vec<(Word, Decomposition)> {
        let letters = self.letters();
        let mut out = Vec::new();
        let mut stack: Vec<(usize, Decomposition)> = vec![(0, Vec::new())];
        while let Some((from, d)) = stack.pop() {
            if !d.is_empty() && d.iter().any(|&(_, l)| l == VAR) {
                out.push((self.assemble(&d).expect("valid"), d.clone()));
            }
            if d.len() == max_terms {
                continue;
            }
            for n in from..self.base.len() {
                for &l in &letters {
                    let mut next = d.clone();
                    next.push((n, l));
                    stack.push((n + 1, next));
                }
            }
        }
        out.sort();
        out
    }

    /// All decompositions of `u` over the sequence.
    pub fn decompositions(&self, u: &Word) -> Vec<Decomposition> {
        let mut out = Vec::new();
        self.search(&u.0, 0, &mut Vec::new(), &mut out);
        out
    }

    fn search(&self, rest: &[char], from: usize, acc: &mut Decomposition, out: &mut Vec<Decomposition>) {
        if rest.is_empty() {
            if !acc.is_empty() {
                out.push(acc.clone());
            }
            return;
        }
        for n in from..self.base.len() {
            let w = &self.base[n].0;
            if w.len() > rest.len() {
                break;
            }
            if let Some(l) = match_letter(w, &rest[..w.len()]) {
                acc.push((n, l));
                self.search(&rest[w.len()..], n + 1, acc, out);
                acc.pop();
            }
        }
    }

    /// The unique decomposition of a span element, or `None` when `u` is not in the span.
    pub fn decompose(&self, u: &Word) -> Option<Decomposition> {
        if !u.is_variable() {
            return None;
        }
        let mut all = self.decompositions(u);
        debug_assert!(all.len() <= 1, "rapidly increasing sequences decompose uniquely");
        all.pop()
    }
}

/// The letter `l` with `w(l) = segment`, if any.
fn match_letter(w: &[char], segment: &[char]) -> Option<char> {
    let mut letter = None;
    for (&a, &b) in w.iter().zip(segment) {
        if a == VAR {
            match letter {
                None => letter = Some(b),
                Some(x) if x != b => return None,
                _ => {}
            }
        } else if a != b {
            return None;
        }
    }
    letter
}

/// Letter standing for symbol label `l`; label `t` is the variable.
pub fn label_letter(l: usize, t: usize) -> char {
    if l == t {
        VAR
    } else {
        char::from_digit(l as u32, 36).expect("label below 36")
    }
}

pub fn letter_label(c: char, t: usize) -> Option<usize> {
    if c == VAR {
        Some(t)
    } else {
        c.to_digit(36).map(|d| d as usize).filter(|&d| d != t)
    }
}

/// The alphabet `(t+m) \ {t}` of the transfer.
pub fn transfer_alphabet(t: usize, m: usize) -> Vec<char> {
    (0..t + m).filter(|&l| l != t).map(|l| label_letter(l, t)).collect()
}

/// `c'(w_{n_0}(l_0)…w_{n_q}(l_q)) = c(S^{l_0}(a_{t+n_0}) + … )`, and `0` off the span.
pub fn transfer_coloring(c: &Coloring<GapWord>, seq: &WordSeq, a: &GapWord, words: &[Word]) -> Result<Coloring<Word>> {
    let t = a.t();
    let mut colors = Vec::with_capacity(words.len());
    for u in words {
        let color = match seq.decompose(u) {
            None => 0,
            Some(d) => {
                let terms = d
                    .iter()
                    .map(|&(n, l)| letter_label(l, t).map(|l| (l, t + n)))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Domain("letter outside the transfer alphabet".into()))?;
                let sym = Symbol::new(t, a.m(), terms)?;
                let f = symbol_to_function(&sym, a).or_else(|e| budget(format!("symbol beyond the truncation: {e}")))?;
                c.get(&f).ok_or_else(|| Error::Domain(format!("coloring undefined on the image of {u}")))?
            }
        };
        colors.push(color);
    }
    let mut it = colors.into_iter();
    Coloring::from_fn(c.arity(), words.iter().cloned(), |_| it.next().expect("one color per word"))
}

/// All words of length `n` over `alphabet`, in lexicographic index order.
pub fn all_words(alphabet: &[char], n: usize) -> Vec<Word> {
    let mut out = vec![Word(Vec::new())];
    for _ in 0..n {
        out = out.into_iter().flat_map(|w| alphabet.iter().map(move |&c| w.concat(&Word(vec![c])))).collect();
    }
    out
}

/// All variable words of length `n`.
pub fn variable_words(alphabet: &[char], n: usize) -> Vec<Word> {
    let mut letters = alphabet.to_vec();
    letters.push(VAR);
    all_words(&letters, n).into_iter().filter(Word::is_variable).collect()
}

fn index_of(w: &[char], alphabet: &[char]) -> usize {
    w.iter().fold(0, |acc, c| acc * alphabet.len() + alphabet.iter().position(|x| x == c).expect("letter"))
}

/// A monochromatic combinatorial line for `coloring` (indexed like [`all_words`]), first in canonical order.
pub fn find_line(alphabet: &[char], n: usize, coloring: &[usize]) -> Option<Word> {
    variable_words(alphabet, n).into_iter().find(|w| {
        let colors: BTreeSet<usize> = alphabet
            .iter()
            .map(|&l| coloring[index_of(&w.substitute(l, alphabet).expect("letter").0, alphabet)])
            .collect();
        colors.len() == 1
    })
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum HjOutcome {
    /// Every coloring of `L^n` has a monochromatic line.
    EveryColoringHasLine { colorings: u64 },
    /// The first coloring in canonical order without a monochromatic line.
    Defeated { coloring: Vec<usize> },
}

/// Exhaustive search over all `colors^(|L|^n)` colorings of `L^n`.
pub fn hj_line_search(alphabet: &[char], colors: usize, n: usize, max_colorings: u64) -> Result<HjOutcome> {
    if alphabet.is_empty() || colors == 0 || n == 0 {
        return domain("need a nonempty alphabet, at least one color and n >= 1");
    }
    let points = (alphabet.len() as u64).checked_pow(n as u32);
    let total = points.and_then(|p| (colors as u64).checked_pow(p as u32));
    let (points, total) = match (points, total) {
        (Some(p), Some(c)) if c <= max_colorings => (p as usize, c),
        _ => return budget(format!("{colors}^({}^{n}) colorings exceed the budget", alphabet.len())),
    };
    let decode = |mut code: u64| -> Vec<usize> {
        let mut c = vec![0; points];
        for slot in c.iter_mut() {
            *slot = (code % colors as u64) as usize;
            code /= colors as u64;
        }
        c
    };
    const CHUNK: u64 = 4096;
    let mut start = 0;
    while start < total {
        let codes: Vec<u64> = (start..total.min(start + CHUNK)).collect();
        if let Some(i) = par::position_first(&codes, |&code| find_line(alphabet, n, &decode(code)).is_none()) {
            return Ok(HjOutcome::Defeated { coloring: decode(codes[i]) });
        }
        start += CHUNK;
    }
    Ok(HjOutcome::EveryColoringHasLine { colorings: total })
}
