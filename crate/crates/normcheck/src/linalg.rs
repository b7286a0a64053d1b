//! Dense matrices and vectors over exact rationals, plus the elimination
//! based solvers the automaton construction needs: linear solves, the
//! star `E* = I + E + E² + ⋯` of a matrix, and stationary distributions
//! of stochastic matrices.
//!
//! Everything here is exact. Pivoting picks the first nonzero candidate
//! (magnitude pivoting is meaningless over exact rationals) and every
//! intermediate value is reduced to canonical form by the scalar type.

use crate::rational::{rat_int, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::error::Error;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinalgError {
    /// The coefficient matrix of a linear solve is not invertible.
    SingularMatrix,
    /// `I - E` is singular, so the star series diverges.
    DivergentStar,
    /// A row of a would-be stochastic matrix has a negative entry or does
    /// not sum to 1.
    NotStochastic { row: usize },
    /// The system `{pi (P - I) = 0, sum pi = 1}` does not pin down a
    /// single solution.
    NonUniqueStationary,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::SingularMatrix => write!(f, "matrix is singular"),
            LinalgError::DivergentStar => write!(f, "star diverges: I - E is singular"),
            LinalgError::NotStochastic { row } => {
                write!(f, "row {} is not a probability distribution", row)
            }
            LinalgError::NonUniqueStationary => {
                write!(f, "stationary distribution is not unique")
            }
        }
    }
}

impl Error for LinalgError {}

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows, which must all have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        RationalMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
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

    pub fn row(&self, i: usize) -> &[Rational] {
        assert!(i < self.rows, "row {} out of bounds", i);
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_sum(&self, i: usize) -> Rational {
        self.row(i).iter().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn transpose(&self) -> RationalMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(
            i < self.rows && j < self.cols,
            "index ({}, {}) out of bounds",
            i,
            j
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(
            i < self.rows && j < self.cols,
            "index ({}, {}) out of bounds",
            i,
            j
        );
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &RationalMatrix {
    type Output = RationalMatrix;

    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "dimension mismatch"
        );
        RationalMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }
}

impl Sub for &RationalMatrix {
    type Output = RationalMatrix;

    fn sub(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "dimension mismatch"
        );
        RationalMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert!(self.cols == rhs.rows, "dimension mismatch");
        RationalMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() && !rhs[(k, j)].is_zero() {
                    acc += &self[(i, k)] * &rhs[(k, j)];
                }
            }
            acc
        })
    }
}

/// Column-aligned grid, entries right-padded, two-space separated.
impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(Rational::to_string).collect();
        let mut widths = vec![0usize; self.cols];
        for (k, cell) in cells.iter().enumerate() {
            let j = k % self.cols.max(1);
            widths[j] = widths[j].max(cell.len());
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j], width = widths[j])?;
            }
            if i + 1 < self.rows {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Dense vector of rationals. Used both as a row vector (initial weights,
/// stationary distributions) and as a plain list of entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalVector {
    data: Vec<Rational>,
}

impl RationalVector {
    pub fn zeros(n: usize) -> Self {
        RationalVector {
            data: vec![Rational::zero(); n],
        }
    }

    pub fn ones(n: usize) -> Self {
        RationalVector {
            data: vec![Rational::one(); n],
        }
    }

    pub fn from_entries(data: Vec<Rational>) -> Self {
        RationalVector { data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.data.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.data
    }

    pub fn sum(&self) -> Rational {
        self.data.iter().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn dot(&self, other: &RationalVector) -> Rational {
        assert_eq!(self.len(), other.len(), "dimension mismatch");
        let mut acc = Rational::zero();
        for (a, b) in self.data.iter().zip(other.data.iter()) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.data[i]
    }
}

impl IndexMut<usize> for RationalVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.data[i]
    }
}

/// Row vector times matrix.
impl Mul<&RationalMatrix> for &RationalVector {
    type Output = RationalVector;

    fn mul(self, m: &RationalMatrix) -> RationalVector {
        assert_eq!(self.len(), m.rows(), "dimension mismatch");
        let mut out = RationalVector::zeros(m.cols());
        for (i, v) in self.data.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    out[j] += v * &m[(i, j)];
                }
            }
        }
        out
    }
}

/// Entries space-separated, e.g. `2/3 0 0 1/6 1/6`.
impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", v)?;
        }
        Ok(())
    }
}

/// Rows rescaled to primitive integer vectors. Scaling a row of an
/// augmented system by a positive constant never changes its solutions.
fn primitive_integer_rows(aug: &RationalMatrix) -> Vec<Vec<BigInt>> {
    let mut out = Vec::with_capacity(aug.rows());
    for i in 0..aug.rows() {
        let row = aug.row(i);
        let mut scale = BigInt::one();
        for v in row {
            scale = scale.lcm(v.denom());
        }
        let mut ints: Vec<BigInt> = row
            .iter()
            .map(|v| v.numer() * (&scale / v.denom()))
            .collect();
        let mut common = BigInt::zero();
        for v in &ints {
            common = common.gcd(v);
        }
        if !common.is_zero() && !common.is_one() {
            for v in &mut ints {
                *v = &*v / &common;
            }
        }
        out.push(ints);
    }
    out
}

/// Fraction-free forward elimination (Bareiss). Pivots the first nonzero
/// candidate per column; entries stay integers (minors of the input), so
/// no per-operation gcd reduction is needed. Stops at the first
/// coefficient column without a pivot, which every caller treats as rank
/// deficiency.
fn fraction_free_eliminate(m: &mut [Vec<BigInt>], coeff_cols: usize) -> Result<(), usize> {
    let rows = m.len();
    let width = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    for col in 0..coeff_cols {
        let Some(pivot) = (col..rows).find(|&r| !m[r][col].is_zero()) else {
            return Err(col);
        };
        m.swap(col, pivot);
        for i in col + 1..rows {
            let head = std::mem::replace(&mut m[i][col], BigInt::zero());
            for j in col + 1..width {
                let mut v = &m[col][col] * &m[i][j];
                if !head.is_zero() && !m[col][j].is_zero() {
                    v -= &head * &m[col][j];
                }
                debug_assert!((&v % &prev).is_zero(), "fraction-free division is exact");
                m[i][j] = v / &prev;
            }
        }
        prev = m[col][col].clone();
    }
    Ok(())
}

/// Back substitution on the echelon form produced above: the first
/// `coeff_cols` rows carry the pivots on their diagonal; `rhs_col` picks
/// the right-hand side.
fn back_substitute(m: &[Vec<BigInt>], coeff_cols: usize, rhs_col: usize) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); coeff_cols];
    for i in (0..coeff_cols).rev() {
        let mut acc = Rational::from_integer(m[i][rhs_col].clone());
        for (j, xj) in x.iter().enumerate().skip(i + 1) {
            if !m[i][j].is_zero() && !xj.is_zero() {
                acc -= Rational::from_integer(m[i][j].clone()) * xj;
            }
        }
        x[i] = acc / Rational::from_integer(m[i][i].clone());
    }
    x
}

/// Solves `A X = B` exactly by Gauss-Jordan elimination in rationals.
/// This suits the sparse triangular-ish systems the star produces; the
/// dense stationary system goes through the fraction-free path instead.
///
/// `A` must be square with as many rows as `B`.
pub fn solve_linear(a: &RationalMatrix, b: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    assert!(a.is_square(), "coefficient matrix must be square");
    assert_eq!(a.rows(), b.rows(), "right-hand side has wrong row count");
    let n = a.rows();
    let m = b.cols();
    let mut aug = RationalMatrix::zero(n, n + m);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        for j in 0..m {
            aug[(i, n + j)] = b[(i, j)].clone();
        }
    }
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[(r, col)].is_zero())
            .ok_or(LinalgError::SingularMatrix)?;
        aug.swap_rows(pivot, col);
        let p = aug[(col, col)].clone();
        if !p.is_one() {
            for j in col..n + m {
                if !aug[(col, j)].is_zero() {
                    let v = aug[(col, j)].clone() / &p;
                    aug[(col, j)] = v;
                }
            }
        }
        for r in 0..n {
            if r == col || aug[(r, col)].is_zero() {
                continue;
            }
            let factor = aug[(r, col)].clone();
            for j in col..n + m {
                if aug[(col, j)].is_zero() {
                    continue;
                }
                let v = aug[(r, j)].clone() - &factor * &aug[(col, j)];
                aug[(r, j)] = v;
            }
        }
    }
    Ok(RationalMatrix::from_fn(n, m, |i, j| {
        aug[(i, n + j)].clone()
    }))
}

/// Computes `E* = I + E + E² + ⋯` as the solution of `(I - E) X = I`,
/// then checks `E* = E·E* + I` against the result.
pub fn star(e: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    assert!(e.is_square(), "star of a non-square matrix");
    let id = RationalMatrix::identity(e.rows());
    let x = solve_linear(&(&id - e), &id).map_err(|_| LinalgError::DivergentStar)?;
    assert_eq!(x, &(e * &x) + &id, "star self-check failed");
    Ok(x)
}

/// The unique probability row vector with `pi P = pi`.
///
/// `P` must be row-stochastic. Uniqueness is verified by a rank check on
/// `P - I` augmented with the normalization row rather than assumed from
/// irreducibility; matrices built from normalized transducers can carry
/// unreachable states.
pub fn stationary_distribution(p: &RationalMatrix) -> Result<RationalVector, LinalgError> {
    assert!(p.is_square(), "stochastic matrix must be square");
    let n = p.rows();
    assert!(n > 0, "empty matrix");
    for i in 0..n {
        if p.row(i).iter().any(Signed::is_negative) || !p.row_sum(i).is_one() {
            return Err(LinalgError::NotStochastic { row: i });
        }
    }

    // Unknowns x = pi as a column; equations (P^T - I) x = 0 and sum = 1.
    // The sum row comes first so elimination meets a nonzero pivot
    // immediately.
    let mut aug = RationalMatrix::zero(n + 1, n + 1);
    for j in 0..n {
        aug[(0, j)] = Rational::one();
    }
    aug[(0, n)] = Rational::one();
    for i in 0..n {
        for j in 0..n {
            aug[(i + 1, j)] = p[(j, i)].clone();
        }
        let v = aug[(i + 1, i)].clone() - rat_int(1);
        aug[(i + 1, i)] = v;
    }

    // Rank n over the coefficient columns pins the solution down; a
    // deficient column means the solution space is a line or more.
    let mut rows = primitive_integer_rows(&aug);
    fraction_free_eliminate(&mut rows, n).map_err(|_| LinalgError::NonUniqueStationary)?;
    // A stationary distribution always exists, so the leftover row must
    // have been annihilated.
    assert!(rows[n][n].is_zero(), "inconsistent stationary system");

    let pi = RationalVector::from_entries(back_substitute(&rows, n, n));
    assert_eq!(&pi * p, pi, "stationary self-check failed");
    assert!(pi.sum().is_one() && pi.iter().all(|v| !v.is_negative()));
    Ok(pi)
}
