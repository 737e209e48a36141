//! Property suites over random small matrices (up to 5 x 5, entries in [-3, 3]).

mod common;

use std::cmp::Ordering;
use std::sync::OnceLock;

use common::*;
use piw::canon::{canonical, fast_minclass, is_minimal, minclass, negation_normal_form};
use piw::classify::{decompose, dedup_h_classes};
use piw::invariant::{code, code_invariant, decode};
use piw::nsoks::nsoks;
use piw::search::rep_piw;
use piw::{row_lex_compare, IntegerMatrix};
use proptest::prelude::*;

const CASES: u32 = 1000;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(CASES)
}

/// A few genuine weighing matrices to push through random operations.
fn piw_samples() -> &'static [(IntegerMatrix, i64)] {
    static SAMPLES: OnceLock<Vec<(IntegerMatrix, i64)>> = OnceLock::new();
    SAMPLES.get_or_init(|| {
        let mut out = Vec::new();
        for &(m, n, k) in &[(2, 2, 25), (3, 4, 9), (4, 4, 4), (3, 3, 9), (2, 4, 6)] {
            for x in rep_piw(m, n, k).unwrap() {
                out.push((x, k as i64));
            }
        }
        out
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn row_lex_is_a_total_order(a in small_matrix(3, 2), b in small_matrix(3, 2), c in small_matrix(3, 2)) {
        // compare same-shape views
        let shape = a.shape();
        let fit = |x: &IntegerMatrix| {
            let data: Vec<i32> = x.as_slice().iter().copied().cycle().take(shape.0 * shape.1).collect();
            IntegerMatrix::new(shape.0, shape.1, data).unwrap()
        };
        let (b, c) = (fit(&b), fit(&c));
        let ab = row_lex_compare(&a, &b).unwrap();
        let ba = row_lex_compare(&b, &a).unwrap();
        prop_assert_eq!(ab, ba.reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        let bc = row_lex_compare(&b, &c).unwrap();
        if ab != Ordering::Greater && bc != Ordering::Greater {
            prop_assert_ne!(row_lex_compare(&a, &c).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn smaller_prefix_means_smaller_matrix((a, b, i) in small_matrix(5, 3).prop_flat_map(|a| {
        let (m, n) = a.shape();
        (Just(a), proptest::collection::vec(-3..=3i32, m * n), 1..=m)
    })) {
        let n = a.cols();
        // b agrees with a on the first i-1 rows
        let mut data = b;
        data[..(i - 1) * n].copy_from_slice(&a.as_slice()[..(i - 1) * n]);
        let b = IntegerMatrix::new(a.rows(), n, data).unwrap();
        if a.prefix(i).unwrap() < b.prefix(i).unwrap() {
            prop_assert_eq!(row_lex_compare(&a, &b).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn hadamard_ops_preserve_weighing((i, h) in (0..piw_samples().len()).prop_flat_map(|i| {
        let (r, c) = piw_samples()[i].0.shape();
        (Just(i), hadamard_pair(r, c))
    })) {
        let (x, k) = &piw_samples()[i];
        prop_assert!(h.apply(x).unwrap().is_piw(*k));
    }

    #[test]
    fn inverse_pair_and_transpose_undo((m, h) in matrix_and_pair(5, 3)) {
        let y = h.apply(&m).unwrap();
        prop_assert_eq!(&h.inverse().apply(&y).unwrap(), &m);
        prop_assert!(h.then(&h.inverse()).row_op.is_identity());
        prop_assert!(h.then(&h.inverse()).col_op.is_identity());
        prop_assert_eq!(&m.transpose().transpose(), &m);
    }

    #[test]
    fn canonical_form_is_class_invariant((m, h) in matrix_and_pair(5, 3)) {
        prop_assert_eq!(canonical(&h.apply(&m).unwrap()), canonical(&m));
    }

    #[test]
    fn canonical_form_is_idempotent(m in small_matrix(5, 3)) {
        let c = canonical(&m);
        prop_assert_eq!(canonical(&c), c);
    }

    #[test]
    fn canonical_form_meets_the_lemmas(m in small_matrix(5, 3)) {
        let c = canonical(&m);
        prop_assert!(rows_and_columns_lead_negative(&c), "{c}");
        prop_assert!(columns_ascending(&c), "{c}");
        prop_assert!(c <= m);
    }

    #[test]
    fn prefixes_of_canonical_forms_are_minimal(m in small_matrix(5, 3)) {
        let c = canonical(&m);
        prop_assert!(is_minimal(&c));
        for i in 1..=c.rows() {
            let p = c.prefix(i).unwrap();
            prop_assert!(is_minimal(&p), "prefix {i} of {c}");
            prop_assert_eq!(minclass(&p, false).unwrap().minimal, p);
        }
    }

    #[test]
    fn fast_minimizer_matches_exhaustive(m in small_matrix(5, 3)) {
        prop_assert_eq!(fast_minclass(&m, false).unwrap().minimal, minclass(&m, false).unwrap().minimal);
    }

    #[test]
    fn witnesses_map_inputs_onto_minimal_forms(m in small_matrix(5, 3)) {
        for result in [minclass(&m, true).unwrap(), fast_minclass(&m, true).unwrap()] {
            let w = result.witness.expect("witness requested");
            prop_assert_eq!(w.apply(&m).unwrap(), result.minimal);
        }
    }

    #[test]
    fn negations_alone_reach_negative_leads(m in small_matrix(5, 3)) {
        let x = negation_normal_form(&m);
        prop_assert!(rows_and_columns_lead_negative(&x), "{x}");
        for (a, b) in m.as_slice().iter().zip(x.as_slice()) {
            prop_assert_eq!(a.abs(), b.abs());
        }
    }

    #[test]
    fn code_invariant_is_class_invariant(((m, h), d) in matrix_and_pair(5, 3).prop_flat_map(|(m, h)| {
        let rows = m.rows();
        (Just((m, h)), 1..=rows)
    })) {
        prop_assert_eq!(
            code_invariant(&h.apply(&m).unwrap(), d, 3).unwrap(),
            code_invariant(&m, d, 3).unwrap()
        );
    }

    #[test]
    fn codes_decode_back(m in small_matrix(5, 3), extra in 0i64..3) {
        let bound = 3 + extra;
        let c = code(&m, bound).unwrap();
        prop_assert_eq!(decode(&c, bound, m.rows()).unwrap(), m);
    }

    #[test]
    fn decomposition_is_class_invariant((m, h) in matrix_and_pair(5, 3)) {
        match decompose(&m) {
            Ok(d) => {
                prop_assert_eq!(&decompose(&h.apply(&m).unwrap()).unwrap(), &d);
                let sum = IntegerMatrix::block_sum(&d.blocks).unwrap();
                prop_assert_eq!(canonical(&sum), canonical(&m));
            }
            Err(_) => prop_assert!(decompose(&h.apply(&m).unwrap()).is_err()),
        }
    }

    #[test]
    fn h_dedup_is_idempotent(list in proptest::collection::vec(small_matrix(2, 2).prop_map(|m| {
        // fixed shape so classes can coincide
        let data: Vec<i32> = m.as_slice().iter().copied().cycle().take(4).collect();
        IntegerMatrix::new(2, 2, data).unwrap()
    }), 1..12)) {
        let classes = dedup_h_classes(&list);
        let reps: Vec<IntegerMatrix> = classes.iter().map(|c| c.representative.clone()).collect();
        let again: Vec<IntegerMatrix> = dedup_h_classes(&reps).into_iter().map(|c| c.representative).collect();
        prop_assert_eq!(&again, &reps);
        prop_assert_eq!(classes.iter().map(|c| c.members).sum::<usize>(), list.len());
        for w in reps.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn nsoks_bound_filters_the_full_list(n in 0u64..80, r in 1u32..6, cap in 0u32..9) {
        let bounded = nsoks(n, r, Some(cap));
        let filtered: Vec<_> = nsoks(n, r, None).into_iter().filter(|s| s.largest() <= cap).collect();
        prop_assert_eq!(bounded, filtered);
    }
}

#[test]
fn nsoks_matches_naive_enumeration() {
    for n in 0..=60u64 {
        for r in 1..=6u32 {
            let mut got: Vec<Vec<u64>> = nsoks(n, r, None)
                .iter()
                .map(|s| {
                    let v: Vec<u64> = s
                        .parts()
                        .iter()
                        .flat_map(|&(val, mult)| std::iter::repeat_n(u64::from(val), mult as usize))
                        .collect();
                    assert_eq!(v.len(), r as usize, "{s} does not use {r} squares");
                    assert_eq!(v.iter().map(|x| x * x).sum::<u64>(), n);
                    v
                })
                .collect();
            let mut want = naive_sum_of_squares(n, r);
            got.sort();
            want.sort();
            assert_eq!(got, want, "n={n} r={r}");
        }
    }
    assert_eq!(naive_sum_of_squares(25, 7).len(), 7);
    assert_eq!(nsoks(25, 7, None).len(), 7);
}
