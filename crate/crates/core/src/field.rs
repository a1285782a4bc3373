//! Exact linear algebra over the rationals and over quotient rings
//! `Q[x]/(c)` with `c` squarefree.
//!
//! `Q[x]/(c)` is a product of number fields. Computations treat it as a field
//! and, whenever a zero test meets a zero divisor, report the discovered
//! factorisation of `c` as a [`Split`]. The caller then reruns on each factor
//! (see [`split_components`]), so every successful run happens over a ring
//! in which all elements met along the way were zero or invertible.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_traits::{One, Zero};

use crate::scalar::{Poly, Rational};

/// A nontrivial monic factor of the current modulus, found as a zero divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub factor: Poly,
}

pub trait Field {
    type Elem: Clone + Debug + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn embed(&self, q: &Rational) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> Result<bool, Split>;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, Split>;

    /// Syntactic zero test (no splitting); `false` does not imply nonzero.
    fn is_trivially_zero(&self, a: &Self::Elem) -> bool;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn embed(&self, q: &Rational) -> Rational {
        q.clone()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn is_zero(&self, a: &Rational) -> Result<bool, Split> {
        Ok(a.is_zero())
    }
    fn inv(&self, a: &Rational) -> Result<Rational, Split> {
        Ok(a.recip())
    }
    fn is_trivially_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
}

/// `Q[x]/(modulus)` for a monic squarefree modulus of positive degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientField {
    modulus: Poly,
}

impl QuotientField {
    pub fn new(modulus: &Poly) -> Self {
        QuotientField { modulus: modulus.monic() }
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// The class of `x`, i.e. a generic root of the modulus.
    pub fn generator(&self) -> Poly {
        Poly::x().rem(&self.modulus)
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        p.rem(&self.modulus)
    }
}

impl Field for QuotientField {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn one(&self) -> Poly {
        Poly::one().rem(&self.modulus)
    }
    fn embed(&self, q: &Rational) -> Poly {
        Poly::constant(q.clone())
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a.sub(b)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b).rem(&self.modulus)
    }
    fn neg(&self, a: &Poly) -> Poly {
        a.neg()
    }
    fn is_zero(&self, a: &Poly) -> Result<bool, Split> {
        if a.is_zero() {
            return Ok(true);
        }
        let g = a.gcd(&self.modulus);
        if g.is_constant() {
            Ok(false)
        } else {
            Err(Split { factor: g })
        }
    }
    fn inv(&self, a: &Poly) -> Result<Poly, Split> {
        let (g, s) = a.gcd_cofactor(&self.modulus);
        if g.is_constant() && !g.is_zero() {
            Ok(s)
        } else {
            Err(Split { factor: g })
        }
    }
    fn is_trivially_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
}

/// Runs `f` over `Q[x]/(c)` for `c` ranging over a factorisation of
/// `modulus` that is refined whenever `f` hits a zero divisor. Returns one
/// result per final factor, ordered by ascending factor degree then
/// coefficients for determinism.
pub fn split_components<T>(modulus: &Poly, mut f: impl FnMut(&QuotientField) -> Result<T, Split>) -> Vec<(Poly, T)> {
    let mut work = vec![modulus.monic()];
    let mut done = Vec::new();
    while let Some(c) = work.pop() {
        let field = QuotientField::new(&c);
        match f(&field) {
            Ok(t) => done.push((c, t)),
            Err(Split { factor }) => {
                let other = c.div_exact(&factor).monic();
                debug_assert!(!factor.is_constant() && !other.is_constant());
                work.push(factor.monic());
                work.push(other);
            }
        }
    }
    done.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.coeffs().cmp(b.0.coeffs())));
    done
}

pub type Rows<E> = Vec<Vec<E>>;

/// Brings `m` to reduced row echelon form and drops zero rows. Columns are
/// tried as pivots in the order given by `col_order`, which must be a
/// permutation of all columns (ascending when `None`). Returns the pivot
/// columns in row order.
pub fn rref<F: Field>(f: &F, m: &mut Rows<F::Elem>, col_order: Option<&[usize]>) -> Result<Vec<usize>, Split> {
    let ncols = m.first().map_or(0, Vec::len);
    let default: Vec<usize> = (0..ncols).collect();
    let order = col_order.unwrap_or(&default);
    let mut pivots = Vec::new();
    let mut row = 0;
    for &col in order {
        if row == m.len() {
            break;
        }
        let mut found = None;
        for r in row..m.len() {
            if !f.is_zero(&m[r][col])? {
                found = Some(r);
                break;
            }
        }
        let Some(p) = found else { continue };
        m.swap(row, p);
        let inv = f.inv(&m[row][col])?;
        for c in 0..ncols {
            if !f.is_trivially_zero(&m[row][c]) {
                m[row][c] = f.mul(&m[row][c], &inv);
            }
        }
        for r in 0..m.len() {
            if r == row || f.is_trivially_zero(&m[r][col]) {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..ncols {
                if f.is_trivially_zero(&m[row][c]) {
                    continue;
                }
                let t = f.mul(&factor, &m[row][c]);
                m[r][c] = f.sub(&m[r][c], &t);
            }
        }
        pivots.push(col);
        row += 1;
    }
    // Rows below the pivots are zero after elimination.
    m.truncate(pivots.len());
    Ok(pivots)
}

pub fn rank<F: Field>(f: &F, m: &Rows<F::Elem>) -> Result<usize, Split> {
    let mut m = m.clone();
    Ok(rref(f, &mut m, None)?.len())
}

/// Basis of `{v : m v = 0}` for an `nrows x ncols` matrix.
pub fn kernel<F: Field>(f: &F, m: &Rows<F::Elem>, ncols: usize) -> Result<Vec<Vec<F::Elem>>, Split> {
    let mut r = m.clone();
    let pivots = rref(f, &mut r, None)?;
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(&r[row][free]);
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Some solution of `a x = b`, or `None` if inconsistent.
pub fn solve<F: Field>(f: &F, a: &Rows<F::Elem>, b: &[F::Elem], ncols: usize) -> Result<Option<Vec<F::Elem>>, Split> {
    let mut aug: Rows<F::Elem> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let order: Vec<usize> = (0..=ncols).collect();
    let pivots = rref(f, &mut aug, Some(&order))?;
    if pivots.contains(&ncols) {
        return Ok(None);
    }
    let mut x = vec![f.zero(); ncols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][ncols].clone();
    }
    Ok(Some(x))
}

pub fn mat_vec<F: Field>(f: &F, m: &Rows<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    m.iter()
        .map(|row| {
            let mut acc = f.zero();
            for (a, b) in row.iter().zip(v) {
                if f.is_trivially_zero(a) || f.is_trivially_zero(b) {
                    continue;
                }
                acc = f.add(&acc, &f.mul(a, b));
            }
            acc
        })
        .collect()
}

pub fn mat_mul<F: Field>(f: &F, a: &Rows<F::Elem>, b: &Rows<F::Elem>) -> Rows<F::Elem> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![f.zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if f.is_trivially_zero(&a[i][l]) {
                continue;
            }
            for j in 0..m {
                if f.is_trivially_zero(&b[l][j]) {
                    continue;
                }
                let t = f.mul(&a[i][l], &b[l][j]);
                out[i][j] = f.add(&out[i][j], &t);
            }
        }
    }
    out
}

/// Columns given as vectors, returned as row-major rows.
pub fn columns_to_rows<E: Clone>(cols: &[Vec<E>], nrows: usize) -> Rows<E> {
    (0..nrows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Echelon basis of the span of `vectors` (as rows).
pub fn span_basis<F: Field>(f: &F, vectors: &[Vec<F::Elem>]) -> Result<Vec<Vec<F::Elem>>, Split> {
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let mut m = vectors.to_vec();
    rref(f, &mut m, None)?;
    Ok(m)
}

/// Basis of `span(a) ∩ span(b)`, both given by independent row vectors.
pub fn intersect<F: Field>(
    f: &F,
    a: &[Vec<F::Elem>],
    b: &[Vec<F::Elem>],
    dim: usize,
) -> Result<Vec<Vec<F::Elem>>, Split> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    // Solve sum s_i a_i - sum t_j b_j = 0.
    let mut cols: Vec<Vec<F::Elem>> = a.to_vec();
    cols.extend(b.iter().map(|v| v.iter().map(|x| f.neg(x)).collect()));
    let m = columns_to_rows(&cols, dim);
    let ker = kernel(f, &m, cols.len())?;
    let vecs: Vec<Vec<F::Elem>> = ker
        .iter()
        .map(|k| {
            let mut v = vec![f.zero(); dim];
            for (i, ai) in a.iter().enumerate() {
                if f.is_trivially_zero(&k[i]) {
                    continue;
                }
                for (vd, x) in v.iter_mut().zip(ai) {
                    *vd = f.add(vd, &f.mul(&k[i], x));
                }
            }
            v
        })
        .collect();
    span_basis(f, &vecs)
}

/// Unwraps a computation over a field that cannot split.
pub fn never_splits<T>(r: Result<T, Split>) -> T {
    match r {
        Ok(t) => t,
        Err(_) => unreachable!("the rationals have no zero divisors"),
    }
}
