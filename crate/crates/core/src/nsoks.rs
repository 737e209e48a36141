//! Representations of an integer as a sum of a fixed number of nonnegative squares.
//!
//! The enumeration recurses on the largest square and its multiplicity, so the
//! recursion depth is bounded by the number of distinct values rather than the
//! number of squares. Once the remaining values are bounded by 1 the answer is
//! read off directly.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::RowVector;

/// A representation `n = sum m_i * s_i^2` with strictly decreasing values `s_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareRep {
    parts: Vec<(u32, u32)>,
}

impl SquareRep {
    /// Builds a representation from `(value, multiplicity)` pairs. Pairs are
    /// merged and sorted; zero multiplicities are dropped.
    pub fn from_parts(parts: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut parts: Vec<(u32, u32)> = parts.into_iter().filter(|&(_, m)| m > 0).collect();
        parts.sort_unstable_by_key(|p| std::cmp::Reverse(p.0));
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(parts.len());
        for (s, m) in parts {
            match merged.last_mut() {
                Some(last) if last.0 == s => last.1 += m,
                _ => merged.push((s, m)),
            }
        }
        Self { parts: merged }
    }

    /// Builds the representation whose squares are the absolute values of `v`.
    pub fn from_vector(v: &[i32]) -> Self {
        Self::from_parts(v.iter().map(|&e| (e.unsigned_abs(), 1)))
    }

    pub fn parts(&self) -> &[(u32, u32)] {
        &self.parts
    }

    /// Number of squares.
    pub fn len(&self) -> usize {
        self.parts.iter().map(|&(_, m)| m as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The represented integer.
    pub fn total(&self) -> u64 {
        self.parts
            .iter()
            .map(|&(s, m)| u64::from(m) * u64::from(s) * u64::from(s))
            .sum()
    }

    pub fn largest(&self) -> u32 {
        self.parts.first().map_or(0, |&(s, _)| s)
    }

    /// Values with multiplicity, largest first.
    pub fn values(&self) -> impl Iterator<Item = u32> + '_ {
        self.parts
            .iter()
            .flat_map(|&(s, m)| std::iter::repeat_n(s, m as usize))
    }

    /// The row-lex minimal vector realizing this representation: every entry
    /// non-positive, ascending.
    pub fn to_minimal_row(&self, n_cols: usize) -> Result<RowVector> {
        if self.len() != n_cols {
            return Err(Error::MultiplicityMismatch {
                expected: n_cols,
                found: self.len(),
            });
        }
        Ok(self.values().map(|s| -(s as i32)).collect())
    }
}

/// Formats as `s^m + s^m + ...`.
impl fmt::Display for SquareRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, m)) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{s}^{m}")?;
        }
        Ok(())
    }
}

/// All representations of `n` as a sum of `r` nonnegative squares whose
/// values are at most `maxsq` (when given).
///
/// Output is in descending lexicographic order of the `(value, multiplicity)`
/// sequences: larger leading values first, then larger leading multiplicity,
/// then recursively on the tail.
pub fn nsoks(n: u64, r: u32, maxsq: Option<u32>) -> Vec<SquareRep> {
    if r == 0 {
        return if n == 0 { vec![SquareRep { parts: Vec::new() }] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    recurse(n, r, maxsq.map(u64::from), &mut stack, &mut out);
    out
}

fn recurse(n: u64, r: u32, maxsq: Option<u64>, stack: &mut Vec<(u32, u32)>, out: &mut Vec<SquareRep>) {
    if n == 0 {
        emit(stack, &[(0, r)], out);
        return;
    }
    match maxsq {
        Some(0) => return,
        Some(1) => {
            if n <= u64::from(r) {
                emit(stack, &[(1, n as u32), (0, r - n as u32)], out);
            }
            return;
        }
        _ => {}
    }
    let mut upper = isqrt(n);
    if let Some(bound) = maxsq {
        upper = upper.min(bound);
    }
    // smallest s with r * s^2 >= n; smaller leading values cannot reach n
    let lower = ceil_sqrt_ratio(n, u64::from(r)).max(1);
    for s in (lower..=upper).rev() {
        let sq = s * s;
        let max_mult = (n / sq).min(u64::from(r));
        for i in (1..=max_mult).rev() {
            let rest = n - i * sq;
            let left = r - i as u32;
            stack.push((s as u32, i as u32));
            if left == 0 {
                if rest == 0 {
                    emit(stack, &[], out);
                }
            } else {
                recurse(rest, left, Some(s - 1), stack, out);
            }
            stack.pop();
        }
    }
}

fn emit(stack: &[(u32, u32)], tail: &[(u32, u32)], out: &mut Vec<SquareRep>) {
    let parts = stack
        .iter()
        .chain(tail)
        .copied()
        .filter(|&(_, m)| m > 0)
        .collect();
    out.push(SquareRep { parts });
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// `ceil(sqrt(n / r))` computed exactly: the least `s` with `r s^2 >= n`.
fn ceil_sqrt_ratio(n: u64, r: u64) -> u64 {
    let mut s = isqrt(n / r);
    while r * s * s < n {
        s += 1;
    }
    s
}
