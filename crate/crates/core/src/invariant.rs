//! The code invariant: every `d`-row submatrix is minimized, encoded as a
//! vector of base-`(2L+1)` integers, and the encodings are collected as a
//! sorted multiset. Equal for Hadamard-equivalent matrices.

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::canon::canonical;
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;

/// Column-wise base-`(2L+1)` encoding of a `d x n` matrix with entries in `[-L, L]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeVector(pub Vec<i64>);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeInvariant {
    pub depth: usize,
    pub bound: i64,
    /// Sorted ascending.
    pub codes: Vec<CodeVector>,
}

impl CodeInvariant {
    /// First 16 hex digits of a SHA-256 over the depth, bound and codes.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{};{}", self.depth, self.bound));
        for c in &self.codes {
            h.update(";");
            h.update(c.0.iter().join(","));
        }
        hex::encode(h.finalize())[..16].to_string()
    }
}

fn base(bound: i64) -> Result<i64> {
    bound
        .checked_mul(2)
        .and_then(|b| b.checked_add(1))
        .ok_or(Error::Overflow("computing the code base"))
}

/// `Code(D)_j = sum_i b^(d-1-i) D[i][j]` with `b = 2L + 1`.
pub fn code(d: &IntegerMatrix, bound: i64) -> Result<CodeVector> {
    let b = base(bound)?;
    let mut out = vec![0i64; d.cols()];
    for row in d.row_iter() {
        for (acc, &e) in out.iter_mut().zip(row) {
            let e = i64::from(e);
            if e.abs() > bound {
                return Err(Error::EntryOutOfBound { value: e, bound });
            }
            *acc = acc
                .checked_mul(b)
                .and_then(|x| x.checked_add(e))
                .ok_or(Error::Overflow("encoding a submatrix"))?;
        }
    }
    Ok(CodeVector(out))
}

/// Inverse of [`code`] for a `depth`-row matrix.
pub fn decode(code: &CodeVector, bound: i64, depth: usize) -> Result<IntegerMatrix> {
    let b = base(bound)?;
    let cols = code.0.len();
    let mut data = vec![0i32; depth * cols];
    for (j, &c) in code.0.iter().enumerate() {
        let mut rest = c;
        for i in (0..depth).rev() {
            let digit = (rest + bound).rem_euclid(b) - bound;
            data[i * cols + j] = digit as i32;
            rest = (rest - digit) / b;
        }
        if rest != 0 {
            return Err(Error::EntryOutOfBound { value: c, bound });
        }
    }
    IntegerMatrix::new(depth, cols, data)
}

/// The multiset of codes of `Min(D)` over all `d`-row submatrices `D`.
pub fn code_invariant(m: &IntegerMatrix, depth: usize, bound: i64) -> Result<CodeInvariant> {
    if depth == 0 || depth > m.rows() {
        return Err(Error::DepthTooLarge { depth, rows: m.rows() });
    }
    if m.max_abs() > bound {
        return Err(Error::EntryOutOfBound {
            value: m.max_abs(),
            bound,
        });
    }
    let mut codes = (0..m.rows())
        .combinations(depth)
        .map(|rows| code(&canonical(&m.select_rows(&rows)), bound))
        .collect::<Result<Vec<_>>>()?;
    codes.sort_unstable();
    Ok(CodeInvariant { depth, bound, codes })
}

/// Matrices sharing one code invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantGroup {
    pub invariant: CodeInvariant,
    /// Indices into the input list, ordered by matrix.
    pub members: Vec<usize>,
}

/// Groups by equal code invariant. Groups are ordered by their smallest member.
///
/// `bound` defaults to the largest entry magnitude across the whole list.
pub fn partition_by_invariant(list: &[IntegerMatrix], depth: usize, bound: Option<i64>) -> Result<Vec<InvariantGroup>> {
    let Some(first) = list.first() else {
        return Ok(Vec::new());
    };
    if let Some(other) = list.iter().find(|m| m.shape() != first.shape()) {
        return Err(Error::DimensionMismatch {
            left_rows: first.rows(),
            left_cols: first.cols(),
            right_rows: other.rows(),
            right_cols: other.cols(),
        });
    }
    let bound = bound.unwrap_or_else(|| list.iter().map(IntegerMatrix::max_abs).max().unwrap_or(0));
    let invariants = list
        .par_iter()
        .map(|m| code_invariant(m, depth, bound))
        .collect::<Result<Vec<_>>>()?;
    let mut groups: BTreeMap<CodeInvariant, Vec<usize>> = BTreeMap::new();
    for (i, inv) in invariants.into_iter().enumerate() {
        groups.entry(inv).or_default().push(i);
    }
    let mut out: Vec<InvariantGroup> = groups
        .into_iter()
        .map(|(invariant, mut members)| {
            members.sort_by(|&a, &b| list[a].cmp(&list[b]).then(a.cmp(&b)));
            InvariantGroup { invariant, members }
        })
        .collect();
    out.sort_by(|a, b| list[a.members[0]].cmp(&list[b.members[0]]).then(a.members[0].cmp(&b.members[0])));
    Ok(out)
}
