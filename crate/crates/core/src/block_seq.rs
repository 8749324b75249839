//! `FIN_m` and block sequences, identified with `S_1^<(·,m|·)`.
//!
//! Row `i` of a function `p` sits at table row `1+i` of the word: the word's
//! row `0` is the constant row required when `t = 1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::gapw::{symbol_to_function, ClassSet, GapWord, Symbol};

/// A finite-support function into `{0,…,m}`. Zeros are never stored.
/// `m` is nominal: tetris images may no longer attain it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FinFunc {
    m: usize,
    #[serde(with = "pairs")]
    entries: BTreeMap<usize, usize>,
}

mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(map: &BTreeMap<usize, usize>, s: S) -> Result<S::Ok, S::Error> {
        map.iter().map(|(&i, &v)| [i, v]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, usize>, D::Error> {
        Ok(Vec::<[usize; 2]>::deserialize(d)?.into_iter().map(|[i, v]| (i, v)).collect())
    }
}

impl FinFunc {
    pub fn new(m: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if m == 0 {
            return domain("FIN_m needs m >= 1");
        }
        let mut map = BTreeMap::new();
        for (i, v) in entries {
            if v > m {
                return domain(format!("value {v} at {i} exceeds m = {m}"));
            }
            if v > 0 && map.insert(i, v).is_some() {
                return domain(format!("row {i} given twice"));
            }
        }
        Ok(FinFunc { m, entries: map })
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn get(&self, i: usize) -> usize {
        self.entries.get(&i).copied().unwrap_or(0)
    }
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn min_supp(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }
    pub fn max_supp(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }
    /// Membership in `FIN_m` proper: `m` is attained.
    pub fn attains_m(&self) -> bool {
        self.entries.values().any(|&v| v == self.m)
    }

    /// `p + q` for `max supp p < min supp q`.
    pub fn block_sum(&self, q: &FinFunc) -> Result<FinFunc> {
        if self.m != q.m {
            return domain("block_sum: different m");
        }
        if let (Some(a), Some(b)) = (self.max_supp(), q.min_supp()) {
            if a >= b {
                return domain(format!("block_sum: max supp {a} is not below min supp {b}"));
            }
        }
        Ok(FinFunc { m: self.m, entries: self.entries.iter().chain(&q.entries).map(|(&i, &v)| (i, v)).collect() })
    }

    /// Pointwise `max(0, p(i) - 1)`; rows reaching `0` leave the support.
    pub fn pointwise_tetris(&self) -> FinFunc {
        self.pointwise_tetris_pow(1)
    }

    pub fn pointwise_tetris_pow(&self, l: usize) -> FinFunc {
        let entries = self.entries.iter().filter(|(_, &v)| v > l).map(|(&i, &v)| (i, v - l)).collect();
        FinFunc { m: self.m, entries }
    }

    /// Cells `(1+i, p(i)-1)` of the word row for `p`.
    pub fn cells(&self) -> ClassSet {
        ClassSet::from_cells(self.entries.iter().map(|(&i, &v)| (1 + i, v - 1)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockSequence {
    m: usize,
    blocks: Vec<FinFunc>,
}

impl BlockSequence {
    pub fn new(m: usize, blocks: Vec<FinFunc>) -> Result<Self> {
        for (n, p) in blocks.iter().enumerate() {
            if p.m != m || !p.attains_m() {
                return domain(format!("block {n} is not in FIN_{m}"));
            }
        }
        if let Some(n) = (1..blocks.len()).find(|&n| blocks[n - 1].max_supp() >= blocks[n].min_supp()) {
            return domain(format!("blocks {} and {n} are not separated", n - 1));
        }
        Ok(BlockSequence { m, blocks })
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn blocks(&self) -> &[FinFunc] {
        &self.blocks
    }

    /// `A_P` on `rows` function rows.
    pub fn to_gapword(&self, rows: usize) -> Result<GapWord> {
        if let Some(top) = self.blocks.last().and_then(|p| p.max_supp()) {
            if top >= rows {
                return domain(format!("support reaches row {top} but only {rows} rows are available"));
            }
        }
        let m = self.m;
        let mut cells = vec![0; (1 + rows) * m];
        for (n, p) in self.blocks.iter().enumerate() {
            for (i, v) in p.entries() {
                cells[(1 + i) * m + v - 1] = n + 1;
            }
        }
        GapWord::from_cells(1, m, self.blocks.len(), cells)
    }

    /// `P_A`.
    pub fn from_gapword(a: &GapWord) -> Result<Self> {
        if a.t() != 1 {
            return domain(format!("block sequences correspond to t = 1, not t = {}", a.t()));
        }
        let mut blocks = vec![BTreeMap::new(); a.k()];
        for i in 1..a.rows() {
            if let Some((j, x)) = a.free_cell(i) {
                blocks[x - 1].insert(i - 1, j + 1);
            }
        }
        let blocks = blocks.into_iter().map(|entries| FinFunc { m: a.m(), entries }).collect();
        BlockSequence::new(a.m(), blocks)
    }

    /// All block sequences with at most `max_blocks` blocks and support in `0..rows`, canonically ordered.
    pub fn enumerate(m: usize, rows: usize, max_blocks: usize) -> Vec<BlockSequence> {
        let mut out = Vec::new();
        extend(m, rows, max_blocks, 0, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

fn extend(m: usize, rows: usize, max_blocks: usize, from: usize, acc: &mut Vec<FinFunc>, out: &mut Vec<BlockSequence>) {
    out.push(BlockSequence { m, blocks: acc.clone() });
    if acc.len() == max_blocks {
        return;
    }
    for start in from..rows {
        for end in start..rows {
            // every function whose support has min `start` and max `end`
            let inner: Vec<usize> = (start + 1..end).collect();
            let mut assign = vec![0usize; inner.len()];
            loop {
                for a in 1..=m {
                    for b in 1..=m {
                        if start == end && a != b {
                            continue;
                        }
                        let mut entries = vec![(start, a)];
                        if end > start {
                            entries.push((end, b));
                        }
                        entries.extend(inner.iter().zip(&assign).map(|(&i, &v)| (i, v)));
                        let p = FinFunc::new(m, entries.into_iter().filter(|&(_, v)| v > 0)).expect("in range");
                        if p.attains_m() {
                            acc.push(p);
                            extend(m, rows, max_blocks, end + 1, acc, out);
                            acc.pop();
                        }
                    }
                }
                let mut q = 0;
                loop {
                    if q == assign.len() {
                        break;
                    }
                    assign[q] += 1;
                    if assign[q] <= m {
                        break;
                    }
                    assign[q] = 0;
                    q += 1;
                }
                if q == assign.len() {
                    break;
                }
            }
        }
    }
}

/// `Σ T^{l_i - 1}(p_{n_i - 1})` over the terms with `l_i >= 1`, in `FIN_m` conventions.
pub fn fin_combination(sym: &Symbol, seq: &BlockSequence) -> Result<FinFunc> {
    let mut acc = FinFunc { m: seq.m, entries: BTreeMap::new() };
    for &(l, n) in sym.terms() {
        let p = seq.blocks.get(n - 1).ok_or_else(|| Error::Domain(format!("no block for class {n}")))?;
        if l >= 1 {
            acc = acc.block_sum(&p.pointwise_tetris_pow(l - 1))?;
        }
    }
    Ok(acc)
}

/// The rows where the word image of `sym` over `A_P` and the `FIN_m` combination disagree.
/// They are the rows whose value the tetris power drives to `0`: the word keeps them at column `0`.
pub fn combination_divergence(sym: &Symbol, seq: &BlockSequence, rows: usize) -> Result<Vec<usize>> {
    let a = seq.to_gapword(rows)?;
    let f = symbol_to_function(sym, &a)?;
    let image = BlockSequence::from_gapword(&f)?;
    let word = &image.blocks[0];
    let fin = fin_combination(sym, seq)?;
    let rows_seen: std::collections::BTreeSet<usize> = word.support().chain(fin.support()).collect();
    Ok(rows_seen.into_iter().filter(|&i| word.get(i) != fin.get(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: usize, e: &[(usize, usize)]) -> FinFunc {
        FinFunc::new(m, e.iter().copied()).unwrap()
    }

    #[test]
    fn a_p_example() {
        let seq = BlockSequence::new(2, vec![p(2, &[(0, 1), (1, 2)])]).unwrap();
        let a = seq.to_gapword(2).unwrap();
        let fin = |i: usize, j: usize| a.get(1 + i, j);
        assert_eq!((fin(0, 0), fin(0, 1), fin(1, 0), fin(1, 1)), (1, 0, 0, 1));
        assert_eq!(BlockSequence::from_gapword(&a).unwrap(), seq);
    }

    #[test]
    fn empty_sequence() {
        let seq = BlockSequence::new(3, vec![]).unwrap();
        let a = seq.to_gapword(2).unwrap();
        assert_eq!(a.k(), 0);
        assert!(a.cells().iter().all(|&x| x == 0));
        assert_eq!(BlockSequence::from_gapword(&a).unwrap(), seq);
    }

    #[test]
    fn errors() {
        let seq = BlockSequence::new(1, vec![p(1, &[(3, 1)])]).unwrap();
        assert!(seq.to_gapword(3).is_err());
        assert!(BlockSequence::new(1, vec![p(1, &[(1, 1)]), p(1, &[(1, 1)])]).is_err());
        assert!(BlockSequence::new(2, vec![p(2, &[(0, 1)])]).is_err());
        assert!(BlockSequence::from_gapword(&GapWord::identity(2, 1, 1)).is_err());
        assert!(p(2, &[(0, 1)]).block_sum(&p(2, &[(0, 2)])).is_err());
    }

    #[test]
    fn semigroup_operations() {
        let a = p(2, &[(0, 2), (3, 1)]);
        assert_eq!(a.block_sum(&FinFunc::new(2, []).unwrap()).unwrap(), a);
        assert_eq!(a.pointwise_tetris(), p(2, &[(0, 1)]));
        assert_eq!(a.block_sum(&p(2, &[(5, 2)])).unwrap(), p(2, &[(0, 2), (3, 1), (5, 2)]));
        // the word tetris keeps the value-1 row at column 0
        assert_eq!(a.cells().tetris(), ClassSet::from_cells([(1, 0), (4, 0)]));
        assert_eq!(a.pointwise_tetris().cells(), ClassSet::from_cells([(1, 0)]));
    }

    #[test]
    fn enumeration_is_counted_by_the_word_side() {
        for m in 1..=2 {
            for rows in 0..=4 {
                let seqs = BlockSequence::enumerate(m, rows, rows);
                let words: usize = (0..=rows).map(|k| crate::gapw::enumerate(1, m, rows, k).len()).sum();
                assert_eq!(seqs.len(), words, "m = {m}, rows = {rows}");
            }
        }
    }

    #[test]
    fn symbol_semantics_against_fin() {
        let seq = BlockSequence::new(2, vec![p(2, &[(0, 2), (1, 1)]), p(2, &[(2, 2)])]).unwrap();
        let sym = Symbol::new(1, 2, vec![(1, 1), (2, 2)]).unwrap();
        assert_eq!(fin_combination(&sym, &seq).unwrap(), p(2, &[(0, 2), (1, 1), (2, 1)]));
        assert_eq!(combination_divergence(&sym, &seq, 3).unwrap(), Vec::<usize>::new());
        let sym = Symbol::new(1, 2, vec![(2, 1), (1, 2)]).unwrap();
        assert_eq!(combination_divergence(&sym, &seq, 3).unwrap(), vec![1]);
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(p(2, &[(0, 2), (3, 1)])).unwrap();
        assert_eq!(v, serde_json::json!({"m": 2, "entries": [[0, 2], [3, 1]]}));
        let back: FinFunc = serde_json::from_value(v).unwrap();
        assert_eq!(back, p(2, &[(0, 2), (3, 1)]));
    }
}
