//! Row-lex minimal representatives of Hadamard classes.
//!
//! Two minimizers are provided. [`minclass`] scans every row monomial and
//! normalizes the columns of each image; it is exact and serves as the
//! reference. [`fast_minclass`] grows the minimal matrix one row at a time,
//! keeping only the branches whose prefix is the smallest possible.

use std::cmp::Ordering;
use std::collections::HashSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::matrix::{HadamardPair, IntegerMatrix, Monomial};

/// Minimal member of a class, optionally with the pair mapping the input onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonResult {
    pub minimal: IntegerMatrix,
    pub witness: Option<HadamardPair>,
}

/// Which minimizer to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Canonicalizer {
    /// Exhaustive up to [`EXHAUSTIVE_MAX_ROWS`] rows, fast above.
    #[default]
    Auto,
    Exhaustive,
    Fast,
}

/// Largest row count for which [`Canonicalizer::Auto`] picks the exhaustive scan.
pub const EXHAUSTIVE_MAX_ROWS: usize = 5;

impl Canonicalizer {
    pub fn canonicalize(self, m: &IntegerMatrix, track_witness: bool) -> Result<CanonResult> {
        match self {
            Canonicalizer::Exhaustive => minclass(m, track_witness),
            Canonicalizer::Fast => fast_minclass(m, track_witness),
            Canonicalizer::Auto if m.rows() <= EXHAUSTIVE_MAX_ROWS => minclass(m, track_witness),
            Canonicalizer::Auto => fast_minclass(m, track_witness),
        }
    }
}

/// `Min(M)` with the default minimizer.
pub fn canonical(m: &IntegerMatrix) -> IntegerMatrix {
    // neither minimizer fails on a constructed (hence non-empty) matrix
    Canonicalizer::Auto
        .canonicalize(m, false)
        .expect("canonicalizing a non-empty matrix")
        .minimal
}

/// Index of the first nonzero entry of column `j`, and its sign.
fn column_lead(m: &IntegerMatrix, j: usize) -> i32 {
    (0..m.rows()).map(|i| m.get(i, j)).find(|&e| e != 0).unwrap_or(0)
}

/// Negates every column that begins with a positive entry.
pub fn neg_normalize(m: &IntegerMatrix) -> IntegerMatrix {
    let signs = neg_signs(m);
    apply_col_signs(m, &signs)
}

fn neg_signs(m: &IntegerMatrix) -> Vec<i8> {
    (0..m.cols())
        .map(|j| if column_lead(m, j) > 0 { -1 } else { 1 })
        .collect()
}

fn apply_col_signs(m: &IntegerMatrix, signs: &[i8]) -> IntegerMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for (j, &s) in signs.iter().enumerate() {
            if s < 0 {
                out.set(i, j, -m.get(i, j));
            }
        }
    }
    out
}

fn compare_columns(m: &IntegerMatrix, a: usize, b: usize) -> Ordering {
    for i in 0..m.rows() {
        match m.get(i, a).cmp(&m.get(i, b)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn ord_perm(m: &IntegerMatrix) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..m.cols()).collect();
    perm.sort_by(|&a, &b| compare_columns(m, a, b));
    perm
}

/// Sorts the columns ascending in lexicographic column order (stable).
pub fn ord_normalize(m: &IntegerMatrix) -> IntegerMatrix {
    m.select_cols(&ord_perm(m))
}

/// Smallest matrix reachable from `m` by row and column negations alone.
///
/// For fixed row signs `Neg` picks the best column signs, so scanning the
/// `2^m` row sign patterns suffices. Every nonzero row and column of the
/// result begins with a negative entry.
pub fn negation_normal_form(m: &IntegerMatrix) -> IntegerMatrix {
    let rows = m.rows();
    let mut best: Option<IntegerMatrix> = None;
    for mask in 0u64..(1u64 << rows) {
        let mut x = m.clone();
        for i in (0..rows).filter(|i| mask >> i & 1 == 1) {
            for j in 0..m.cols() {
                x.set(i, j, -m.get(i, j));
            }
        }
        let x = neg_normalize(&x);
        if best.as_ref().is_none_or(|b| x < *b) {
            best = Some(x);
        }
    }
    best.unwrap_or_else(|| m.clone())
}

/// Exhaustive minimizer: every row permutation (lexicographic order) times
/// every sign pattern (binary order), each followed by `Ord(Neg(.))`.
pub fn minclass(m: &IntegerMatrix, track_witness: bool) -> Result<CanonResult> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut best: Option<(Vec<i32>, Vec<usize>, u64)> = None;
    let mut image = vec![0i32; rows * cols];
    let mut col_order: Vec<usize> = (0..cols).collect();
    let mut sorted = vec![0i32; rows * cols];
    for perm in (0..rows).permutations(rows) {
        for mask in 0u64..(1u64 << rows) {
            for (i, &p) in perm.iter().enumerate() {
                let neg = mask >> i & 1 == 1;
                for (dst, &e) in image[i * cols..(i + 1) * cols].iter_mut().zip(m.row(p)) {
                    *dst = if neg { -e } else { e };
                }
            }
            for j in 0..cols {
                let lead = (0..rows).map(|i| image[i * cols + j]).find(|&e| e != 0);
                if lead.is_some_and(|e| e > 0) {
                    for i in 0..rows {
                        image[i * cols + j] = -image[i * cols + j];
                    }
                }
            }
            col_order.iter_mut().enumerate().for_each(|(j, c)| *c = j);
            col_order.sort_by(|&a, &b| {
                (0..rows)
                    .map(|i| image[i * cols + a].cmp(&image[i * cols + b]))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            });
            for i in 0..rows {
                for (j, &c) in col_order.iter().enumerate() {
                    sorted[i * cols + j] = image[i * cols + c];
                }
            }
            if best.as_ref().is_none_or(|(b, _, _)| sorted < *b) {
                best = Some((sorted.clone(), perm.clone(), mask));
            }
        }
    }
    let (data, perm, mask) = best.expect("at least one monomial");
    let minimal = IntegerMatrix::new(rows, cols, data)?;
    let witness = if track_witness {
        let signs = (0..rows).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let row_op = Monomial::new(perm, signs)?;
        let rowed = HadamardPair {
            row_op: row_op.clone(),
            col_op: Monomial::identity(cols),
        }
        .apply(m)?;
        let neg = neg_signs(&rowed);
        let order = ord_perm(&apply_col_signs(&rowed, &neg));
        let col_signs = order.iter().map(|&c| neg[c]).collect();
        Some(HadamardPair {
            row_op,
            col_op: Monomial::new(order, col_signs)?,
        })
    } else {
        None
    };
    Ok(CanonResult { minimal, witness })
}

/// Branch statistics from one run of the fast minimizer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BranchStats {
    /// Largest number of live branches at any level.
    pub max_branches: usize,
    /// Sum over levels of the live branch count.
    pub total_branches: usize,
}

/// A partially built minimal matrix: rows not yet placed, expressed in the
/// current column coordinates.
#[derive(Clone)]
struct Branch {
    remaining: Vec<(usize, Vec<i32>)>,
    placed: Vec<(usize, i8)>,
    col_perm: Vec<usize>,
    col_signs: Vec<i8>,
}

/// A maximal run of columns that are equal on the placed prefix.
#[derive(Clone, Copy, Debug)]
struct Group {
    start: usize,
    end: usize,
    zero: bool,
}

fn initial_groups(cols: usize) -> Vec<Group> {
    vec![Group {
        start: 0,
        end: cols,
        zero: true,
    }]
}

/// The smallest row obtainable from `sign * v` by the column operations that
/// fix the prefix: sorting within groups, negating prefix-zero columns.
fn candidate_row(v: &[i32], sign: i32, groups: &[Group], out: &mut Vec<i32>) {
    out.clear();
    for g in groups {
        let from = out.len();
        if g.zero {
            out.extend(v[g.start..g.end].iter().map(|&e| -e.abs()));
        } else {
            out.extend(v[g.start..g.end].iter().map(|&e| sign * e));
        }
        out[from..].sort_unstable();
    }
}

/// Column map realizing [`candidate_row`]: position `j` of the new coordinates
/// takes `signs[j]` times old column `src[j]`.
fn candidate_columns(v: &[i32], sign: i32, groups: &[Group]) -> (Vec<usize>, Vec<i8>) {
    let mut src = Vec::with_capacity(v.len());
    let mut signs = Vec::with_capacity(v.len());
    for g in groups {
        let key = |j: usize| if g.zero { -v[j].abs() } else { sign * v[j] };
        let mut idx: Vec<usize> = (g.start..g.end).collect();
        idx.sort_by_key(|&j| key(j));
        for j in idx {
            src.push(j);
            signs.push(if g.zero && sign * v[j] > 0 { -1 } else { 1 });
        }
    }
    (src, signs)
}

fn refine_groups(groups: &[Group], row: &[i32]) -> Vec<Group> {
    let mut out = Vec::with_capacity(groups.len());
    for g in groups {
        let mut start = g.start;
        for j in g.start + 1..=g.end {
            if j == g.end || row[j] != row[start] {
                out.push(Group {
                    start,
                    end: j,
                    zero: g.zero && row[start] == 0,
                });
                start = j;
            }
        }
    }
    out
}

fn sign_normal(v: &[i32]) -> Vec<i32> {
    let neg: Vec<i32> = v.iter().map(|&e| -e).collect();
    if neg.as_slice() > v {
        neg
    } else {
        v.to_vec()
    }
}

/// Outcome of [`grow`]: either a full minimal matrix, or the first level at
/// which the target was beaten.
enum Grown {
    Minimal(Vec<i32>, Branch),
    Smaller,
}

fn grow(m: &IntegerMatrix, target: Option<&IntegerMatrix>, track: bool, stats: &mut BranchStats) -> Grown {
    let (rows, cols) = m.shape();
    let mut groups = initial_groups(cols);
    let mut prefix: Vec<i32> = Vec::with_capacity(rows * cols);
    let mut branches = vec![Branch {
        remaining: (0..rows).map(|i| (i, m.row(i).to_vec())).collect(),
        placed: Vec::with_capacity(rows),
        col_perm: if track { (0..cols).collect() } else { Vec::new() },
        col_signs: if track { vec![1; cols] } else { Vec::new() },
    }];
    let mut scratch = Vec::with_capacity(cols);
    for level in 0..rows {
        stats.max_branches = stats.max_branches.max(branches.len());
        stats.total_branches += branches.len();

        let mut best: Option<Vec<i32>> = None;
        let mut winners: Vec<(usize, usize, i32)> = Vec::new();
        let signs: &[i32] = if level == 0 { &[1] } else { &[1, -1] };
        for (b, branch) in branches.iter().enumerate() {
            for (r, (_, v)) in branch.remaining.iter().enumerate() {
                for &s in signs {
                    candidate_row(v, s, &groups, &mut scratch);
                    match best.as_ref().map(|c| scratch.as_slice().cmp(c)) {
                        Some(Ordering::Greater) => {}
                        Some(Ordering::Equal) => winners.push((b, r, s)),
                        _ => {
                            best = Some(scratch.clone());
                            winners.clear();
                            winners.push((b, r, s));
                        }
                    }
                }
            }
        }
        let best = best.expect("a remaining row at every level");
        if let Some(t) = target {
            match best.as_slice().cmp(t.row(level)) {
                Ordering::Less => return Grown::Smaller,
                o => debug_assert_eq!(o, Ordering::Equal, "minimum exceeded a class member"),
            }
        }

        let mut seen: HashSet<Vec<Vec<i32>>> = HashSet::with_capacity(winners.len());
        let mut next = Vec::with_capacity(winners.len());
        for (b, r, s) in winners {
            let branch = &branches[b];
            let (orig, v) = &branch.remaining[r];
            let (src, csigns) = candidate_columns(v, s, &groups);
            let remaining: Vec<(usize, Vec<i32>)> = branch
                .remaining
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != r)
                .map(|(_, (o, w))| {
                    let moved = src.iter().zip(&csigns).map(|(&c, &t)| i32::from(t) * w[c]).collect();
                    (*o, moved)
                })
                .collect();
            let mut key: Vec<Vec<i32>> = remaining.iter().map(|(_, w)| sign_normal(w)).collect();
            key.sort_unstable();
            if !seen.insert(key) {
                continue;
            }
            let mut placed = branch.placed.clone();
            placed.push((*orig, s as i8));
            let (col_perm, col_signs) = if track {
                (
                    src.iter().map(|&c| branch.col_perm[c]).collect(),
                    src.iter()
                        .zip(&csigns)
                        .map(|(&c, &t)| t * branch.col_signs[c])
                        .collect(),
                )
            } else {
                (Vec::new(), Vec::new())
            };
            next.push(Branch {
                remaining,
                placed,
                col_perm,
                col_signs,
            });
        }
        groups = refine_groups(&groups, &best);
        prefix.extend_from_slice(&best);
        branches = next;
    }
    let winner = branches.swap_remove(0);
    Grown::Minimal(prefix, winner)
}

/// Row-by-row minimizer; returns the same matrix as [`minclass`].
pub fn fast_minclass(m: &IntegerMatrix, track_witness: bool) -> Result<CanonResult> {
    fast_minclass_with_stats(m, track_witness).map(|(r, _)| r)
}

pub fn fast_minclass_with_stats(m: &IntegerMatrix, track_witness: bool) -> Result<(CanonResult, BranchStats)> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut stats = BranchStats::default();
    let Grown::Minimal(data, branch) = grow(m, None, track_witness, &mut stats) else {
        unreachable!("no target to beat");
    };
    let minimal = IntegerMatrix::new(m.rows(), m.cols(), data)?;
    let witness = if track_witness {
        let (perm, signs) = branch.placed.into_iter().unzip();
        Some(HadamardPair {
            row_op: Monomial::new(perm, signs)?,
            col_op: Monomial::new(branch.col_perm, branch.col_signs)?,
        })
    } else {
        None
    };
    Ok((CanonResult { minimal, witness }, stats))
}

/// `true` iff `m` is the minimal member of its class.
///
/// Stops at the first level where a smaller row appears.
pub fn is_minimal(m: &IntegerMatrix) -> bool {
    let mut stats = BranchStats::default();
    matches!(grow(m, Some(m), false, &mut stats), Grown::Minimal(..))
}

/// [`is_minimal`] decided by the given minimizer instead of the pruned growth.
pub fn is_minimal_with(m: &IntegerMatrix, canon: Canonicalizer) -> bool {
    canon
        .canonicalize(m, false)
        .map(|r| &r.minimal == m)
        .unwrap_or(false)
}
