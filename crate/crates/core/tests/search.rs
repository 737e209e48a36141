//! Search guarantees on small instances, checked against brute force.

mod common;

use std::collections::BTreeSet;

use common::brute_force_orbit_count;
use piw::canon::{canonical, is_minimal};
use piw::classify::dedup_h_classes;
use piw::search::{rep_piw, search, SearchOptions, SpillConfig};
use piw::IntegerMatrix;

const CASES: &[(usize, usize, u64)] = &[(2, 3, 5), (3, 3, 9), (3, 4, 9), (4, 4, 4), (3, 4, 6), (4, 5, 9), (5, 5, 4)];

fn run(m: usize, n: usize, k: u64, mindepth: usize, threads: usize) -> Vec<IntegerMatrix> {
    let mut opts = SearchOptions::new(mindepth);
    opts.threads = threads;
    search(m, n, k, &opts).unwrap().matrices
}

#[test]
fn outputs_are_weighing_matrices_with_increasing_rows() {
    for &(m, n, k) in CASES {
        for d in 1..=m {
            for x in run(m, n, k, d, 1) {
                assert!(x.is_piw(k as i64), "{x}");
                for i in 1..m {
                    assert!(x.row(i - 1) < x.row(i), "rows of\n{x}\nnot increasing");
                }
            }
        }
    }
}

#[test]
fn full_depth_output_is_exactly_the_minimal_forms() {
    for &(m, n, k) in CASES {
        let out = run(m, n, k, m, 1);
        for x in &out {
            assert!(is_minimal(x));
            assert_eq!(&canonical(x), x);
        }
        let classes = dedup_h_classes(&out);
        assert_eq!(classes.len(), out.len(), "duplicates for ({m},{n},{k})");
    }
}

#[test]
fn shallower_mindepth_gives_supersets() {
    for &(m, n, k) in CASES {
        let minimal: BTreeSet<IntegerMatrix> = run(m, n, k, m, 1).into_iter().collect();
        let mut prev: Option<BTreeSet<IntegerMatrix>> = None;
        for d in (1..=m).rev() {
            let out: BTreeSet<IntegerMatrix> = run(m, n, k, d, 1).into_iter().collect();
            assert!(minimal.is_subset(&out), "mindepth {d} lost a minimal matrix for ({m},{n},{k})");
            if let Some(deeper) = &prev {
                assert!(deeper.is_subset(&out), "mindepth {d} is not a superset for ({m},{n},{k})");
            }
            let canon: BTreeSet<IntegerMatrix> = out.iter().map(canonical).collect();
            assert_eq!(canon, minimal);
            prev = Some(out);
        }
    }
}

#[test]
fn class_counts_match_orbit_enumeration() {
    for &(m, n, k) in &[(1, 3, 2), (2, 2, 5), (2, 3, 6), (3, 3, 9), (3, 4, 4), (2, 4, 10)] {
        assert_eq!(rep_piw(m, n, k).unwrap().len(), brute_force_orbit_count(m, n, k as i64), "({m},{n},{k})");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    for &(m, n, k) in CASES {
        let one = run(m, n, k, 1, 1);
        assert_eq!(run(m, n, k, 1, 4), one);
        assert_eq!(run(m, n, k, m, 3), run(m, n, k, m, 1));
    }
}

#[test]
fn spilled_frontiers_give_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut any_spilled = false;
    for &(m, n, k) in CASES {
        let mut opts = SearchOptions::new(1);
        opts.spill = Some(SpillConfig {
            dir: dir.path().to_path_buf(),
            budget: 3,
        });
        opts.threads = 2;
        let spilled = search(m, n, k, &opts).unwrap();
        any_spilled |= spilled.levels.iter().any(|l| l.spilled);
        assert_eq!(spilled.matrices, run(m, n, k, 1, 1), "({m},{n},{k})");
    }
    assert!(any_spilled);
}

#[test]
fn level_statistics_are_reported() {
    let out = search(4, 4, 4, &SearchOptions::new(2)).unwrap();
    assert_eq!(out.levels.len(), 4);
    assert_eq!(out.levels.last().unwrap().nodes, out.matrices.len());
    assert!(out.levels[3].minimality_tests == 0);
}
