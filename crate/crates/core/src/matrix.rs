//! Exact integer matrices, the row-lex order and signed-permutation actions.
//!
//! Matrices are stored row-major, so two matrices of equal shape compare in
//! row-lex order exactly when their backing slices compare lexicographically.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A row of exact integers.
pub type RowVector = Vec<i32>;

/// Exact integer `m x n` matrix.
///
/// Entries are `i32`; every quantity derived from them (dot products, norms)
/// is computed in `i64`. PIW entries satisfy `|e| <= sqrt(k)`, so this is far
/// above anything the search produces.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i32>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i32>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::RaggedRows {
                row: data.len() / cols,
                expected: cols,
                found: data.len() % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[i32]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyMatrix)?.as_ref().len();
        let mut data = Vec::with_capacity(rows.len() * first);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != first {
                return Err(Error::RaggedRows {
                    row: i + 1,
                    expected: first,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), first, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![0; rows * cols])
    }

    /// `k` times the identity of order `n`.
    pub fn scalar(n: usize, k: i32) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = k;
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Zero-based entry access.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: i32) {
        self.data[i * self.cols + j] = value;
    }

    /// Zero-based row slice.
    #[inline]
    pub fn row(&self, i: usize) -> &[i32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl ExactSizeIterator<Item = &[i32]> + '_ {
        self.data.chunks_exact(self.cols)
    }

    pub fn column(&self, j: usize) -> RowVector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<RowVector> {
        self.row_iter().map(<[i32]>::to_vec).collect()
    }

    pub fn max_abs(&self) -> i64 {
        self.data.iter().map(|&e| i64::from(e).abs()).max().unwrap_or(0)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&e| -e).collect(),
        }
    }

    /// Rows `1..=i` (one-based, inclusive) in order.
    pub fn prefix(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.rows {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.rows,
            });
        }
        Ok(Self {
            rows: i,
            cols: self.cols,
            data: self.data[..i * self.cols].to_vec(),
        })
    }

    /// Appends `v` as a new last row.
    pub fn augment(&self, v: &[i32]) -> Result<Self> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: 1,
                right_cols: v.len(),
            });
        }
        let mut data = Vec::with_capacity(self.data.len() + self.cols);
        data.extend_from_slice(&self.data);
        data.extend_from_slice(v);
        Ok(Self {
            rows: self.rows + 1,
            cols: self.cols,
            data,
        })
    }

    /// The submatrix formed by the given zero-based rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.rows);
        for i in 0..self.rows {
            let r = self.row(i);
            data.extend(indices.iter().map(|&j| r[j]));
        }
        Self {
            rows: self.rows,
            cols: indices.len(),
            data,
        }
    }

    /// `M M^T`.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|a| (0..self.rows).map(|b| dot(self.row(a), self.row(b))).collect())
            .collect()
    }

    /// `true` iff `M M^T = k I`.
    pub fn is_piw(&self, k: i64) -> bool {
        for a in 0..self.rows {
            if dot(self.row(a), self.row(a)) != k {
                return false;
            }
            for b in a + 1..self.rows {
                if dot(self.row(a), self.row(b)) != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Block-diagonal sum of `blocks`, in order.
    pub fn block_sum(blocks: &[IntegerMatrix]) -> Result<Self> {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols)?;
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(out)
    }

    pub fn apply(&self, h: &HadamardPair) -> Result<Self> {
        h.apply(self)
    }
}

/// Exact dot product.
#[inline]
pub fn dot(a: &[i32], b: &[i32]) -> i64 {
    a.iter().zip(b).map(|(&x, &y)| i64::from(x) * i64::from(y)).sum()
}

/// Row-lex comparison; errors when the shapes differ.
pub fn row_lex_compare(a: &IntegerMatrix, b: &IntegerMatrix) -> Result<Ordering> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            left_rows: a.rows,
            left_cols: a.cols,
            right_rows: b.rows,
            right_cols: b.cols,
        });
    }
    Ok(a.data.cmp(&b.data))
}

/// Orders first by shape, then row-lex. Within one shape this is the row-lex order.
impl Ord for IntegerMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rows, self.cols)
            .cmp(&(other.rows, other.cols))
            .then_with(|| self.data.cmp(&other.data))
    }
}

impl PartialOrd for IntegerMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_iter()).finish()
    }
}

/// Text form: one line per row, entries separated by single spaces.
impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.row_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for (j, e) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

/// A signed permutation of `0..size`.
///
/// Acting on rows, position `i` of the image receives `signs[i]` times row
/// `perm[i]` of the source; acting on columns works the same way.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl Monomial {
    pub fn identity(size: usize) -> Self {
        Self {
            perm: (0..size).collect(),
            signs: vec![1; size],
        }
    }

    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        if perm.len() != signs.len() {
            return Err(Error::InvalidMonomial(format!(
                "{} positions but {} signs",
                perm.len(),
                signs.len()
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidMonomial(format!("{perm:?} is not a permutation")));
            }
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidMonomial(format!("signs {signs:?} not all +-1")));
        }
        Ok(Self { perm, signs })
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }

    pub fn inverse(&self) -> Self {
        let mut perm = vec![0; self.size()];
        let mut signs = vec![1; self.size()];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p] = i;
            signs[p] = self.signs[i];
        }
        Self { perm, signs }
    }

    /// The monomial that acts as `self` followed by `then`.
    pub fn then(&self, then: &Monomial) -> Self {
        let perm = then.perm.iter().map(|&q| self.perm[q]).collect();
        let signs = then
            .perm
            .iter()
            .zip(&then.signs)
            .map(|(&q, &s)| s * self.signs[q])
            .collect();
        Self { perm, signs }
    }

    /// Applies this monomial to a vector of entries indexed by position.
    pub fn apply_to_vector(&self, v: &[i32]) -> RowVector {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| i32::from(s) * v[p])
            .collect()
    }
}

/// A (row monomial, column monomial) pair: `M -> P M Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HadamardPair {
    pub row_op: Monomial,
    pub col_op: Monomial,
}

impl HadamardPair {
    pub fn identity(rows: usize, cols: usize) -> Self {
        Self {
            row_op: Monomial::identity(rows),
            col_op: Monomial::identity(cols),
        }
    }

    pub fn apply(&self, m: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.row_op.size() != m.rows {
            return Err(Error::MonomialSize {
                expected: m.rows,
                found: self.row_op.size(),
            });
        }
        if self.col_op.size() != m.cols {
            return Err(Error::MonomialSize {
                expected: m.cols,
                found: self.col_op.size(),
            });
        }
        let mut data = Vec::with_capacity(m.data.len());
        for (&pi, &si) in self.row_op.perm.iter().zip(&self.row_op.signs) {
            let src = m.row(pi);
            for (&pj, &sj) in self.col_op.perm.iter().zip(&self.col_op.signs) {
                data.push(i32::from(si * sj) * src[pj]);
            }
        }
        Ok(IntegerMatrix {
            rows: m.rows,
            cols: m.cols,
            data,
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            row_op: self.row_op.inverse(),
            col_op: self.col_op.inverse(),
        }
    }

    /// The pair that acts as `self` followed by `then`.
    pub fn then(&self, then: &HadamardPair) -> Self {
        Self {
            row_op: self.row_op.then(&then.row_op),
            col_op: self.col_op.then(&then.col_op),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i32]]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn row_lex_examples() {
        let a = m(&[&[-5, 0], &[0, -5]]);
        assert_eq!(row_lex_compare(&a, &a).unwrap(), Ordering::Equal);
        assert_eq!(
            row_lex_compare(&a, &m(&[&[-5, 0], &[0, 5]])).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            row_lex_compare(&m(&[&[-4, -3], &[-3, 4]]), &m(&[&[-4, 3], &[-3, -4]])).unwrap(),
            Ordering::Less
        );
        assert!(row_lex_compare(&a, &m(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn hadamard_actions() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(HadamardPair::identity(2, 2).apply(&a).unwrap(), a);

        let neg = HadamardPair {
            row_op: Monomial::new(vec![0], vec![-1]).unwrap(),
            col_op: Monomial::identity(1),
        };
        assert_eq!(neg.apply(&m(&[&[5]])).unwrap(), m(&[&[-5]]));

        let swap = Monomial::new(vec![1, 0], vec![1, 1]).unwrap();
        let both = HadamardPair {
            row_op: swap.clone(),
            col_op: swap,
        };
        assert_eq!(both.apply(&a).unwrap(), m(&[&[4, 3], &[2, 1]]));
        assert!(both.apply(&m(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn transpose_and_piw() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.transpose(), m(&[&[1, 3], &[2, 4]]));
        let s = m(&[&[1, 2], &[2, 1]]);
        assert_eq!(s.transpose(), s);

        assert!(m(&[&[-5, 0], &[0, -5]]).is_piw(25));
        let b1 = m(&[&[3, 4], &[4, -3]]);
        assert!(b1.is_piw(25));
        assert!(b1.transpose().is_piw(25));
        assert!(!m(&[&[3, 4], &[4, 3]]).is_piw(25));
    }

    #[test]
    fn prefix_and_augment() {
        let a = m(&[&[1, 2], &[3, 4], &[5, 6]]);
        assert_eq!(a.prefix(3).unwrap(), a);
        assert_eq!(a.prefix(2).unwrap().augment(a.row(2)).unwrap(), a);
        assert_eq!(a.augment(&[7, 8]).unwrap().prefix(3).unwrap(), a);
        assert!(a.prefix(0).is_err());
        assert!(a.prefix(4).is_err());
        assert!(a.augment(&[1]).is_err());
    }

    #[test]
    fn monomial_validation() {
        assert!(Monomial::new(vec![0, 0], vec![1, 1]).is_err());
        assert!(Monomial::new(vec![0, 1], vec![1, 2]).is_err());
        assert!(Monomial::new(vec![0], vec![1, 1]).is_err());
    }

    #[test]
    fn block_sum_layout() {
        let s = IntegerMatrix::block_sum(&[m(&[&[5]]), m(&[&[3, 4], &[4, -3]])]).unwrap();
        assert_eq!(s, m(&[&[5, 0, 0], &[0, 3, 4], &[0, 4, -3]]));
    }
}
