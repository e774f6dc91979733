//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Everything here is exact: determinants and ranks go through fraction-free
//! (Bareiss) elimination, inverses through exact rationals. The elimination
//! engine only ever needs small matrices, so no attempt is made at
//! asymptotically clever algorithms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

/// A vector of exact integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    pub fn zeros(len: usize) -> Self {
        IntVector(vec![BigInt::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|v| !v.is_negative())
    }
}

impl std::ops::Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl From<Vec<BigInt>> for IntVector {
    fn from(v: Vec<BigInt>) -> Self {
        IntVector(v)
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v.into_iter().map(BigInt::from).collect())
    }
}

impl From<&[i64]> for IntVector {
    fn from(v: &[i64]) -> Self {
        IntVector(v.iter().copied().map(BigInt::from).collect())
    }
}

impl FromIterator<BigInt> for IntVector {
    fn from_iter<I: IntoIterator<Item = BigInt>>(iter: I) -> Self {
        IntVector(iter.into_iter().collect())
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    /// Builds a matrix from its rows. All rows must have the same, nonzero length.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LinalgError> {
        if rows.is_empty() {
            return Err(LinalgError::Dimension("matrix needs at least one row".into()));
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(LinalgError::Dimension("matrix needs at least one column".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(LinalgError::Dimension(format!(
                "row {bad} has length {} but row 0 has length {cols}",
                rows[bad].len()
            )));
        }
        let n = rows.len();
        Ok(IntMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for small literal matrices. Panics on ragged input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().copied().map(BigInt::from).collect())
                .collect(),
        )
        .expect("well-formed literal matrix")
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[IntVector]) -> Result<Self, LinalgError> {
        if columns.is_empty() {
            return Err(LinalgError::Dimension("matrix needs at least one column".into()));
        }
        let rows = columns[0].len();
        if columns.iter().any(|c| c.len() != rows) {
            return Err(LinalgError::Dimension("columns of unequal length".into()));
        }
        Self::from_rows(
            (0..rows)
                .map(|i| columns.iter().map(|c| c[i].clone()).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix {
            rows: n,
            cols: n,
            data: vec![BigInt::zero(); n * n],
        };
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IntVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// The submatrix made of the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self, LinalgError> {
        if indices.is_empty() {
            return Err(LinalgError::Dimension("empty row selection".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.rows) {
            return Err(LinalgError::Dimension(format!("row index {bad} out of range")));
        }
        Ok(IntMatrix {
            rows: indices.len(),
            cols: self.cols,
            data: indices
                .iter()
                .flat_map(|&i| self.row(i).iter().cloned())
                .collect(),
        })
    }

    pub fn mul_vec(&self, v: &IntVector) -> Result<IntVector, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum())
            .collect())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
        }
        write!(f, "]")
    }
}

/// Strictly increasing list of row indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowSelection(Vec<usize>);

impl RowSelection {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        RowSelection(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }
}

/// `denom * z = lambda * x + gamma` for every rational solution of `M z = x - a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CramerSolution {
    pub denom: BigInt,
    pub lambda: IntMatrix,
    pub gamma: IntVector,
}

impl CramerSolution {
    pub fn size(&self) -> usize {
        self.gamma.len()
    }
}

/// Fraction-free forward elimination. Returns the rank and, for square input,
/// the determinant (zero when singular).
fn bareiss(m: &IntMatrix) -> (usize, BigInt) {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut prev = BigInt::one();
    let mut sign_flips = false;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            a.swap(pivot, rank);
            sign_flips = !sign_flips;
        }
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                debug_assert!((&v % &prev).is_zero());
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    let det = if rows == cols && rank == rows {
        if sign_flips {
            -prev
        } else {
            prev
        }
    } else {
        BigInt::zero()
    };
    (rank, det)
}

/// Rank of `m` over the rationals.
pub fn rank_over_rationals(m: &IntMatrix) -> usize {
    bareiss(m).0
}

pub fn determinant(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Dimension(format!(
            "determinant of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    Ok(bareiss(m).1)
}

/// Greedily picks rows in the given order, keeping those that raise the rank.
///
/// Rows are kept in visiting order. Because the row space is a matroid, visiting
/// rows in increasing index order yields the lexicographically least basis.
pub fn greedy_independent_rows<I>(m: &IntMatrix, order: I, limit: usize) -> Vec<usize>
where
    I: IntoIterator<Item = usize>,
{
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        if chosen.len() == limit {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(i);
        let sub = m.select_rows(&trial).expect("indices in range");
        if rank_over_rationals(&sub) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

/// The lexicographically least set of `cols` rows, avoiding `forbidden_row`,
/// whose submatrix has full column rank.
pub fn find_full_rank_submatrix(m: &IntMatrix, forbidden_row: Option<usize>) -> Option<RowSelection> {
    let p = m.cols;
    let chosen = greedy_independent_rows(m, (0..m.rows).filter(|&i| Some(i) != forbidden_row), p);
    (chosen.len() == p).then(|| RowSelection::new(chosen))
}

/// Exact inverse of a square matrix over the rationals.
fn rational_inverse(m: &IntMatrix) -> Result<Vec<Vec<BigRational>>, LinalgError> {
    let n = m.rows;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = m.row(i).iter().cloned().map(BigRational::from_integer).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(LinalgError::Singular)?;
        a.swap(pivot, col);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..2 * n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `M z = x - a` symbolically in `x`.
pub fn cramer_solve(m: &IntMatrix, offset: &IntVector) -> Result<CramerSolution, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Dimension(format!(
            "Cramer solve needs a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    if offset.len() != m.rows {
        return Err(LinalgError::Dimension(format!(
            "offset of length {} for a {}x{} system",
            offset.len(),
            m.rows,
            m.cols
        )));
    }
    let det = determinant(m)?;
    if det.is_zero() {
        return Err(LinalgError::Singular);
    }
    let denom = det.abs();
    let inverse = rational_inverse(m)?;
    let n = m.rows;
    let mut rows = Vec::with_capacity(n);
    for inv_row in &inverse {
        let row: Vec<BigInt> = inv_row
            .iter()
            .map(|q| {
                let scaled = q * BigRational::from_integer(denom.clone());
                debug_assert!(scaled.is_integer());
                scaled.to_integer()
            })
            .collect();
        rows.push(row);
    }
    let lambda = IntMatrix::from_rows(rows)?;
    let gamma: IntVector = lambda.mul_vec(offset)?.iter().map(|v| -v).collect();
    Ok(CramerSolution { denom, lambda, gamma })
}

/// Least common positive multiple of the nonzero values.
pub fn positive_lcm<'a, I>(values: I) -> Result<BigInt, LinalgError>
where
    I: IntoIterator<Item = &'a BigInt>,
{
    let mut acc: Option<BigInt> = None;
    for v in values.into_iter().filter(|v| !v.is_zero()) {
        acc = Some(match acc {
            None => v.abs(),
            Some(a) => a.lcm(v),
        });
    }
    acc.ok_or_else(|| LinalgError::Degenerate("lcm of an all-zero list".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn example_matrix() -> IntMatrix {
        // columns (1,2,2,1), (2,4,1,1), (-1,-2,0,-1)
        IntMatrix::from_i64_rows(&[&[1, 2, -1], &[2, 4, -2], &[2, 1, 0], &[1, 1, -1]])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_over_rationals(&IntMatrix::identity(3)), 3);
        assert_eq!(rank_over_rationals(&example_matrix()), 3);
        assert_eq!(rank_over_rationals(&IntMatrix::from_i64_rows(&[&[0], &[0], &[0]])), 0);
    }

    #[test]
    fn determinant_examples() {
        let sub = IntMatrix::from_i64_rows(&[&[1, 2, -1], &[2, 1, 0], &[1, 1, -1]]);
        assert_eq!(determinant(&sub).unwrap(), big(2));
        assert_eq!(determinant(&IntMatrix::identity(5)).unwrap(), big(1));
        assert_eq!(
            determinant(&IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]])).unwrap(),
            big(6)
        );
        assert!(matches!(
            determinant(&example_matrix()),
            Err(LinalgError::Dimension(_))
        ));
        // forces a row swap
        assert_eq!(
            determinant(&IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]])).unwrap(),
            big(-1)
        );
    }

    #[test]
    fn full_rank_selection_examples() {
        let sel = find_full_rank_submatrix(&example_matrix(), Some(1)).unwrap();
        assert_eq!(sel.indices(), &[0, 2, 3]);
        let id = find_full_rank_submatrix(&IntMatrix::identity(4), None).unwrap();
        assert_eq!(id.indices(), &[0, 1, 2, 3]);
        let col = IntMatrix::from_i64_rows(&[&[0], &[1]]);
        assert_eq!(find_full_rank_submatrix(&col, Some(1)), None);
    }

    #[test]
    fn cramer_examples() {
        let sub = IntMatrix::from_i64_rows(&[&[1, 2, -1], &[2, 1, 0], &[1, 1, -1]]);
        let cs = cramer_solve(&sub, &IntVector::zeros(3)).unwrap();
        assert_eq!(cs.denom, big(2));
        assert_eq!(
            cs.lambda,
            IntMatrix::from_i64_rows(&[&[-1, 1, 1], &[2, 0, -2], &[1, 1, -3]])
        );
        assert!(cs.gamma.is_zero());

        let cs = cramer_solve(&IntMatrix::identity(3), &IntVector::zeros(3)).unwrap();
        assert_eq!(cs.denom, big(1));
        assert_eq!(cs.lambda, IntMatrix::identity(3));

        let cs = cramer_solve(&IntMatrix::from_i64_rows(&[&[2]]), &IntVector::from(vec![4])).unwrap();
        assert_eq!(cs.denom, big(2));
        assert_eq!(cs.lambda, IntMatrix::from_i64_rows(&[&[1]]));
        assert_eq!(cs.gamma, IntVector::from(vec![-4]));

        let singular = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(
            cramer_solve(&singular, &IntVector::zeros(2)),
            Err(LinalgError::Singular)
        );
    }

    #[test]
    fn lcm_examples() {
        let vals = |v: &[i64]| v.iter().copied().map(BigInt::from).collect::<Vec<_>>();
        assert_eq!(positive_lcm(&vals(&[1, -2, -3])).unwrap(), big(6));
        assert_eq!(positive_lcm(&vals(&[5])).unwrap(), big(5));
        assert_eq!(positive_lcm(&vals(&[4, 0, 6])).unwrap(), big(12));
        assert!(positive_lcm(&vals(&[0, 0])).is_err());
    }
}
