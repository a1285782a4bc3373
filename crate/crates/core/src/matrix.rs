//! Dense matrices over the rationals.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::field::{self, never_splits, Rationals, Rows};
use crate::scalar::{Poly, Rational};
use crate::{Error, Result};

/// Row-major rational matrix. Endomorphism matrices follow the
/// columns-as-images convention: column `j` holds the coordinates of the
/// image of the `j`-th basis vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", crate::scalar::format_rational(self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    /// Convenience constructor for integer matrices; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v = rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
        Self::from_rows(v).expect("ragged matrix literal")
    }

    pub fn from_columns(cols: &[Vec<Rational>]) -> Result<Self> {
        let n = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: c.len() });
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Rows<Rational> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, mut k: u32) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn rank(&self) -> usize {
        never_splits(field::rank(&Rationals, &self.to_rows()))
    }

    /// Basis of the null space.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        never_splits(field::kernel(&Rationals, &self.to_rows(), self.cols))
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.to_rows();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            let pivot = m[c][c].clone();
            det *= &pivot;
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] / &pivot;
                for k in c..n {
                    let t = &f * &m[c][k];
                    m[r][k] -= t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug: Rows<Rational> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        let pivots = never_splits(field::rref(&Rationals, &mut aug, None));
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Matrix::from_rows(aug.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// Characteristic polynomial `det(xI - M)` via reduction to Hessenberg
    /// form.
    pub fn char_poly(&self) -> Poly {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut h = self.to_rows();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else { continue };
            if i != m {
                h.swap(i, m);
                for row in h.iter_mut() {
                    row.swap(i, m);
                }
            }
            for i in m + 1..n {
                if h[i][m - 1].is_zero() {
                    continue;
                }
                let u = &h[i][m - 1] / &h[m][m - 1];
                for c in 0..n {
                    let t = &u * &h[m][c];
                    h[i][c] -= t;
                }
                for row in h.iter_mut() {
                    let t = &u * &row[i];
                    row[m] += t;
                }
            }
        }
        let mut p: Vec<Poly> = Vec::with_capacity(n + 1);
        p.push(Poly::one());
        for m in 1..=n {
            let mut next = Poly::linear_root(&h[m - 1][m - 1]).mul(&p[m - 1]);
            let mut t = Rational::one();
            for i in (1..m).rev() {
                t *= &h[i][i - 1];
                if t.is_zero() {
                    break;
                }
                let c = &h[i - 1][m - 1] * &t;
                next = next.sub(&p[i - 1].scale(&c));
            }
            p.push(next);
        }
        p.pop().unwrap_or_else(Poly::one)
    }

    /// Companion matrix of a monic polynomial (columns-as-images of
    /// multiplication by `x` on `1, x, ..., x^{d-1}`).
    pub fn companion(p: &Poly) -> Matrix {
        let p = p.monic();
        let d = p.degree().unwrap_or(0);
        let mut m = Self::zeros(d, d);
        for i in 1..d {
            m.set(i, i - 1, Rational::one());
        }
        for i in 0..d {
            m.set(i, d - 1, -p.coeff(i));
        }
        m
    }
}
