//! Exact rational linear algebra: rank, reduced echelon form, nullspaces.
//!
//! Rank goes through fraction-free (Bareiss) elimination on a denominator-
//! cleared integer copy, with column pivoting, so intermediate growth stays
//! polynomial and every division is exact. Nullspaces come from a rational
//! reduced row-echelon form; returned bases are themselves put in reduced
//! echelon form so they are canonical for a given matrix.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{lcm, Rational};

/// A dense matrix of [`Rational`] entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    /// The `rows x cols` zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    /// The `n x n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix {
            rows: r,
            cols: c,
            entries: rows.into_concat(),
        }
    }

    /// Builds from integer literals, for tests and small fixtures.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| crate::rational::rat_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Copy of the rows with the given indices, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        RationalMatrix::from_rows(indices.iter().map(|&i| self.row(i).to_vec()).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut t = RationalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// `x^T * self` for a row vector `x`.
    pub fn vec_mul(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.rows, x.len(), "dimension mismatch in vector-matrix product");
        let mut out = vec![Rational::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, out_j) in out.iter_mut().enumerate() {
                *out_j += xi * &self[(i, j)];
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    /// Exact rank via fraction-free elimination on an integer copy.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| clear_denominators(self.row(i)))
            .collect();
        let rows = self.rows;
        let cols = self.cols;
        let mut prev = BigInt::one();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..cols {
            let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            // The update must run on every remaining row, zero multiplier or
            // not: the exactness of later divisions needs each entry to be the
            // full-size minor, which only uniform updates maintain.
            for r in row + 1..rows {
                for c in col + 1..cols {
                    let num = &a[r][c] * &a[row][col] - &a[r][col] * &a[row][c];
                    a[r][c] = exact_div(num, &prev);
                }
                a[r][col] = BigInt::zero();
            }
            prev = a[row][col].clone();
            rank += 1;
            row += 1;
            if row == rows {
                break;
            }
        }
        rank
    }

    /// Reduced row-echelon form and the pivot column indices.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip();
            m.scale_row(row, &inv);
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    m.row_axpy(r, row, &-factor);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Basis of `{x : self * x = 0}` in reduced echelon form (possibly empty).
    pub fn right_nullspace(&self) -> Vec<Vec<Rational>> {
        if self.cols == 0 {
            return Vec::new();
        }
        if self.rows == 0 {
            let mut basis = Vec::new();
            for j in 0..self.cols {
                let mut v = vec![Rational::zero(); self.cols];
                v[j] = Rational::one();
                basis.push(v);
            }
            return basis;
        }
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(i, free)].clone();
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return basis;
        }
        // Canonicalize: the basis itself in reduced echelon form, so each
        // vector's first nonzero entry is 1.
        let (reduced, _) = RationalMatrix::from_rows(basis).rref();
        (0..reduced.rows()).map(|i| reduced.row(i).to_vec()).collect()
    }

    /// Basis of `{x : x^T self = 0}` in reduced echelon form (possibly empty).
    pub fn left_nullspace(&self) -> Vec<Vec<Rational>> {
        self.transpose().right_nullspace()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let (x, y) = (a * self.cols + j, b * self.cols + j);
            self.entries.swap(x, y);
        }
    }

    fn scale_row(&mut self, r: usize, factor: &Rational) {
        for j in 0..self.cols {
            let v = &self[(r, j)] * factor;
            self[(r, j)] = v;
        }
    }

    /// `row[dst] += factor * row[src]`.
    fn row_axpy(&mut self, dst: usize, src: usize, factor: &Rational) {
        for j in 0..self.cols {
            let add = &self[(src, j)] * factor;
            self[(dst, j)] += add;
        }
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl std::fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(crate::rational::format_rational)
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Scales a rational row by the lcm of its denominators.
fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let mut scale = BigInt::one();
    for x in row {
        scale = lcm(&scale, x.denom());
    }
    row.iter().map(|x| x.numer() * (&scale / x.denom())).collect()
}

/// Division known to be exact by the fraction-free elimination invariant.
fn exact_div(num: BigInt, den: &BigInt) -> BigInt {
    if den.is_one() {
        return num;
    }
    let (q, r) = num_integer::Integer::div_rem(&num, den);
    assert!(r.is_zero(), "fraction-free elimination produced inexact division");
    q
}

trait IntoConcat {
    fn into_concat(self) -> Vec<Rational>;
}

impl IntoConcat for Vec<Vec<Rational>> {
    fn into_concat(self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.iter().map(Vec::len).sum());
        for row in self {
            out.extend(row);
        }
        out
    }
}
