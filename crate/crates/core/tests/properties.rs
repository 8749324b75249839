//! Randomized laws at sizes past the exhaustive windows.

use proptest::prelude::*;

use trs_core::block_seq::BlockSequence;
use trs_core::echelon::{self, EchelonMatrix};
use trs_core::gapw::{self, GapWord};
use trs_core::param_words::ParamWord;

/// A parameter word with `n` free letters after the fixed prefix `0..t` and exactly `k` classes.
fn param_word(t: usize, n: usize, k: usize) -> impl Strategy<Value = ParamWord> {
    // Letters are drawn freely and then relabeled into canonical order.
    proptest::collection::vec(0..t + k, n).prop_filter_map("not onto", move |raw| {
        let mut next = t;
        let mut map = vec![usize::MAX; t + k];
        let values: Vec<usize> = (0..t)
            .chain(raw.iter().map(|&v| {
                if v < t {
                    return v;
                }
                if map[v] == usize::MAX {
                    map[v] = next;
                    next += 1;
                }
                map[v]
            }))
            .collect();
        (next == t + k).then(|| ParamWord::new(t, k, false, values).ok()).flatten()
    })
}

fn chain(t: usize) -> impl Strategy<Value = (ParamWord, ParamWord, ParamWord)> {
    (3usize..9, 2usize..4, 1usize..3).prop_flat_map(move |(n, k, j)| {
        let k = k.min(n);
        let j = j.min(k);
        (param_word(t, n, k), param_word(t, k, j), param_word(t, j, 1))
    })
}

fn random_echelon(q: usize, rows: usize, cols: usize) -> impl Strategy<Value = EchelonMatrix> {
    proptest::sample::select(echelon::enumerate(q, rows, cols))
}

proptest! {
    #[test]
    fn param_composition_is_associative((a, b, c) in chain(1)) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn param_products_factor_through_the_left((a, b, _) in chain(2)) {
        let ab = a.compose(&b).unwrap();
        prop_assert!(ab.factors_through(&a));
    }

    #[test]
    fn restriction_commutes_with_composition((a, b, _) in chain(1), cut in 0usize..3) {
        // r_n(A∘B) = A∘r_n(B) when both sides are defined.
        let n = cut.min(b.k());
        let lhs = a.compose(&b).unwrap().restrict(n);
        let rhs = b.restrict(n).and_then(|rb| a.compose(&rb));
        if let (Ok(l), Ok(r)) = (lhs, rhs) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn echelon_products_stay_reduced(
        (a, b) in (1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(r, c, d)| {
            let c = c.min(r);
            let d = d.min(c);
            (random_echelon(3, r + 2, c + 1), random_echelon(3, c + 1, d))
        })
    ) {
        let p = a.mul(&b).unwrap();
        prop_assert!(p.is_reduced_echelon());
        prop_assert!(echelon::echelon_oracle(&p));
    }

    #[test]
    fn block_sequences_survive_the_bijection(idx in 0usize..10_000, m in 1usize..4) {
        let all = BlockSequence::enumerate(m, 7, 3);
        let seq = &all[idx % all.len()];
        let a = seq.to_gapword(7).unwrap();
        prop_assert_eq!(&BlockSequence::from_gapword(&a).unwrap(), seq);
    }

    #[test]
    fn symbols_decode_over_larger_words(idx in 0usize..10_000, m in 1usize..3) {
        let words: Vec<GapWord> = gapw::enumerate(1, m, 4, 3);
        let a = &words[idx % words.len()];
        for s in gapw::symbols(a, true) {
            let f = gapw::symbol_to_function(&s, a).unwrap();
            prop_assert_eq!(gapw::decode(&f, a), Some(s));
        }
    }
}
