//! Strategies and independent brute-force oracles shared by the test targets.

#![allow(dead_code)]

use std::collections::HashSet;

use itertools::Itertools;
use piw::{HadamardPair, IntegerMatrix, Monomial};
use proptest::prelude::*;

/// Matrices with `1..=max_dim` rows and columns and entries in `[-bound, bound]`.
pub fn small_matrix(max_dim: usize, bound: i32) -> impl Strategy<Value = IntegerMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(m, n)| {
        proptest::collection::vec(-bound..=bound, m * n).prop_map(move |data| IntegerMatrix::new(m, n, data).unwrap())
    })
}

pub fn monomial(size: usize) -> impl Strategy<Value = Monomial> {
    (
        Just((0..size).collect::<Vec<_>>()).prop_shuffle(),
        proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], size),
    )
        .prop_map(|(p, s)| Monomial::new(p, s).unwrap())
}

pub fn hadamard_pair(rows: usize, cols: usize) -> impl Strategy<Value = HadamardPair> {
    (monomial(rows), monomial(cols)).prop_map(|(row_op, col_op)| HadamardPair { row_op, col_op })
}

/// A small matrix together with a random pair of matching shape.
pub fn matrix_and_pair(max_dim: usize, bound: i32) -> impl Strategy<Value = (IntegerMatrix, HadamardPair)> {
    small_matrix(max_dim, bound).prop_flat_map(|m| {
        let (r, c) = m.shape();
        (Just(m), hadamard_pair(r, c))
    })
}

/// Every representation of `n` as `r` squares, as descending value lists,
/// by plain nested enumeration of non-increasing tuples.
pub fn naive_sum_of_squares(n: u64, r: u32) -> Vec<Vec<u64>> {
    fn rec(left: u64, slots: u32, cap: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in (0..=cap).rev() {
            if v * v <= left {
                cur.push(v);
                rec(left - v * v, slots - 1, v, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    let mut cap = 0;
    while (cap + 1) * (cap + 1) <= n {
        cap += 1;
    }
    rec(n, r, cap, &mut Vec::new(), &mut out);
    out
}

/// All integer vectors of length `n` with squared norm `k`.
pub fn weight_rows(n: usize, k: i64) -> Vec<Vec<i32>> {
    let mut b = 0i32;
    while i64::from(b + 1) * i64::from(b + 1) <= k {
        b += 1;
    }
    (0..n)
        .map(|_| -b..=b)
        .multi_cartesian_product()
        .filter(|v| v.iter().map(|&x| i64::from(x) * i64::from(x)).sum::<i64>() == k)
        .collect()
}

fn all_monomials(size: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for perm in (0..size).permutations(size) {
        for mask in 0..(1u32 << size) {
            let signs = (0..size).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            out.push(Monomial::new(perm.clone(), signs).unwrap());
        }
    }
    out
}

/// Number of orbits of `Mon(m) x Mon(n)` acting on all of `PIW(m, n, k)`,
/// found by enumerating every matrix and sweeping whole orbits, with no
/// canonical form involved.
pub fn brute_force_orbit_count(m: usize, n: usize, k: i64) -> usize {
    let rows = weight_rows(n, k);
    let dot = |a: &[i32], b: &[i32]| a.iter().zip(b).map(|(&x, &y)| i64::from(x) * i64::from(y)).sum::<i64>();
    let mut all: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::new();
        for t in &all {
            for (i, r) in rows.iter().enumerate() {
                if t.iter().all(|&j| dot(&rows[j], r) == 0) {
                    let mut t2 = t.clone();
                    t2.push(i);
                    next.push(t2);
                }
            }
        }
        all = next;
    }
    let row_ops = all_monomials(m);
    let col_ops = all_monomials(n);
    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    let mut orbits = 0;
    for t in &all {
        let mat: Vec<Vec<i32>> = t.iter().map(|&i| rows[i].clone()).collect();
        let mat = IntegerMatrix::from_rows(&mat).unwrap();
        if seen.contains(mat.as_slice()) {
            continue;
        }
        orbits += 1;
        for p in &row_ops {
            for q in &col_ops {
                let h = HadamardPair {
                    row_op: p.clone(),
                    col_op: q.clone(),
                };
                seen.insert(h.apply(&mat).unwrap().as_slice().to_vec());
            }
        }
    }
    orbits
}

/// Lead (first nonzero) of a slice, or 0.
pub fn lead(v: &[i32]) -> i32 {
    v.iter().copied().find(|&x| x != 0).unwrap_or(0)
}

pub fn rows_and_columns_lead_negative(m: &IntegerMatrix) -> bool {
    m.row_iter().all(|r| lead(r) <= 0) && (0..m.cols()).all(|j| lead(&m.column(j)) <= 0)
}

pub fn columns_ascending(m: &IntegerMatrix) -> bool {
    (1..m.cols()).all(|j| m.column(j - 1) <= m.column(j))
}
