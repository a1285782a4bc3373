//! The matrix of `phi*` on a graded algebra and the standing-assumption
//! checks on it.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::field::{self, never_splits, Rationals};
use crate::lie_algebra::{bracket, GradedAlgebra, Vector};
use crate::matrix::Matrix;
use crate::scalar::{format_rational, real_roots, AlgebraicReal, Poly, Rational};
use crate::{Error, Result};

/// Linear map on a graded algebra; column `j` of the matrix holds the
/// coordinates of the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    algebra: GradedAlgebra,
    matrix: Matrix,
}

impl Endomorphism {
    pub fn new(algebra: GradedAlgebra, matrix: Matrix) -> Result<Self> {
        let n = algebra.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: matrix.ncols().max(matrix.nrows()) });
        }
        Ok(Endomorphism { algebra, matrix })
    }

    /// Diagonal map `e_k -> d_k e_k`.
    pub fn diagonal(algebra: GradedAlgebra, d: &[Rational]) -> Result<Self> {
        Self::new(algebra, Matrix::diagonal(d))
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn weights(&self) -> &[u32] {
        self.algebra.weights()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Endomorphism) -> Endomorphism {
        Endomorphism { algebra: self.algebra.clone(), matrix: self.matrix.mul(&other.matrix) }
    }

    pub fn pow(&self, k: u32) -> Endomorphism {
        Endomorphism { algebra: self.algebra.clone(), matrix: self.matrix.pow(k) }
    }

    pub fn image(&self, j: usize) -> Vector {
        self.matrix.column(j)
    }

    /// First pair `(i, j)`, `i < j`, with `M[e_i, e_j] != [M e_i, M e_j]`.
    pub fn homomorphism_violation(&self) -> Option<(usize, usize)> {
        let n = self.dim();
        let sc = self.algebra.sc();
        let images: Vec<Vector> = (0..n).map(|j| self.image(j)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.matrix.mul_vec(&sc.basis_bracket(i, j));
                let rhs = bracket(&images[i], &images[j], sc);
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_homomorphism(&self) -> bool {
        self.homomorphism_violation().is_none()
    }

    /// `M` maps every tail `span{e_k : w_k >= i}` into itself.
    pub fn weakly_preserves_grading(&self) -> bool {
        weakly_preserves(&self.matrix, self.weights())
    }

    pub fn determinant(&self) -> Rational {
        self.matrix.determinant()
    }

    pub fn is_injective(&self) -> bool {
        !self.determinant().is_zero()
    }

    /// `|det M| > 1`, the non-surjectivity condition for lattice maps.
    pub fn is_nonsurjective(&self) -> bool {
        self.determinant().abs() > Rational::one()
    }

    pub fn char_poly(&self) -> Poly {
        self.matrix.char_poly()
    }

    /// No eigenvalue on the unit circle.
    pub fn is_unipotent_free(&self) -> bool {
        !has_unit_circle_root(&self.char_poly())
    }

    /// The index `[N : phi(N)] = |det M|`.
    pub fn tree_valence(&self) -> Result<BigInt> {
        tree_valence(&self.matrix)
    }
}

pub(crate) fn weakly_preserves(m: &Matrix, w: &[u32]) -> bool {
    let n = m.nrows();
    (0..n).all(|j| (0..n).all(|i| m.get(i, j).is_zero() || w[i] >= w[j]))
}

pub fn tree_valence(m: &Matrix) -> Result<BigInt> {
    let d = m.determinant().abs();
    if d.is_integer() && d.is_positive() {
        Ok(d.to_integer())
    } else {
        Err(Error::NonIntegerIndex(format_rational(&d)))
    }
}

/// Whether `p` has a complex root of modulus one.
///
/// Roots `±1` are tested directly. Otherwise any unit-circle root `z` pairs
/// with `1/z = conj(z)`, so it is a root of `g = gcd(p, x^d p(1/x))`, which is
/// palindromic of even degree `2m`; writing `g = x^m h(x + 1/x)`, unit-circle
/// roots correspond to real roots of `h` in `(-2, 2)`.
pub fn has_unit_circle_root(p: &Poly) -> bool {
    let mut q = p.squarefree_part();
    if q.is_constant() {
        return false;
    }
    if q.eval(&Rational::one()).is_zero() || q.eval(&-Rational::one()).is_zero() {
        return true;
    }
    while q.coeff(0).is_zero() {
        q = q.div_exact(&Poly::x());
    }
    let g = q.gcd(&q.reverse());
    if g.is_constant() {
        return false;
    }
    let h = dickson_reduce(&g);
    let (lo, hi) = (AlgebraicReal::from_i64(-2), AlgebraicReal::from_i64(2));
    real_roots(&h).iter().any(|r| *r > lo && *r < hi)
}

/// `h` with `g(x) = x^m h(x + 1/x)` for palindromic `g` of degree `2m`.
fn dickson_reduce(g: &Poly) -> Poly {
    let d = g.degree().unwrap_or(0);
    debug_assert!(d.is_multiple_of(2));
    let m = d / 2;
    // D_0 = 2, D_1 = y, D_{j+1} = y D_j - D_{j-1}; x^j + x^-j = D_j(y).
    let mut dick = alloc::vec![Poly::constant(Rational::from_integer(2.into())), Poly::x()];
    while dick.len() <= m {
        let j = dick.len();
        let next = Poly::x().mul(&dick[j - 1]).sub(&dick[j - 2]);
        dick.push(next);
    }
    let mut h = Poly::constant(g.coeff(m));
    for j in 1..=m {
        h = h.add(&dick[j].scale(&g.coeff(m + j)));
    }
    h
}

/// Extends a grade-one action to the whole Carnot algebra using
/// `phi[x, y] = [phi x, phi y]`. `base_action` acts on the weight-one basis
/// vectors in index order, columns as images.
pub fn carnot_complete(g: &GradedAlgebra, base_action: &Matrix) -> Result<Endomorphism> {
    let cert = g.is_carnot();
    if let Some(&grade) = cert.failing_grades.first() {
        return Err(Error::NotCarnot { grade });
    }
    let n = g.dim();
    let v1 = g.grade(1);
    if base_action.nrows() != v1.len() || base_action.ncols() != v1.len() {
        return Err(Error::DimensionMismatch { expected: v1.len(), found: base_action.ncols() });
    }
    let sc = g.sc();
    let mut images: Vec<Option<Vector>> = alloc::vec![None; n];
    for (col, &k) in v1.iter().enumerate() {
        let mut v = alloc::vec![Rational::zero(); n];
        for (row, &i) in v1.iter().enumerate() {
            v[i] = base_action.get(row, col).clone();
        }
        images[k] = Some(v);
    }
    for j in 2..=g.max_weight() {
        let target = g.grade(j);
        let pairs: Vec<(usize, usize, Vector)> = v1
            .iter()
            .flat_map(|&a| g.grade(j - 1).into_iter().map(move |b| (a, b)))
            .map(|(a, b)| (a, b, sc.basis_bracket(a, b)))
            .filter(|(_, _, v)| v.iter().any(|c| !c.is_zero()))
            .collect();
        // Columns: restrictions of the brackets to grade j coordinates.
        let cols: Vec<Vector> = pairs.iter().map(|(_, _, v)| target.iter().map(|&k| v[k].clone()).collect()).collect();
        let rows = field::columns_to_rows(&cols, target.len());
        let bracket_images: Vec<Vector> = pairs
            .iter()
            .map(|(a, b, _)| {
                let (ia, ib) = (images[*a].as_ref().expect("grade one"), images[*b].as_ref().expect("lower grade"));
                bracket(ia, ib, sc)
            })
            .collect();
        for (t, &k) in target.iter().enumerate() {
            let e: Vector =
                (0..target.len()).map(|s| if s == t { Rational::one() } else { Rational::zero() }).collect();
            let coeffs =
                never_splits(field::solve(&Rationals, &rows, &e, cols.len())).ok_or(Error::NotCarnot { grade: j })?;
            let mut v = alloc::vec![Rational::zero(); n];
            for (c, img) in coeffs.iter().zip(&bracket_images) {
                if c.is_zero() {
                    continue;
                }
                for (vi, x) in v.iter_mut().zip(img) {
                    *vi += c * x;
                }
            }
            images[k] = Some(v);
        }
    }
    let cols: Vec<Vector> = images.into_iter().map(|v| v.expect("every grade filled")).collect();
    let e = Endomorphism::new(g.clone(), Matrix::from_columns(&cols)?)?;
    if let Some((i, j)) = e.homomorphism_violation() {
        let br = sc.basis_bracket(i, j);
        let index = br.iter().position(|c| !c.is_zero()).unwrap_or(j);
        return Err(Error::InconsistentExtension { index });
    }
    Ok(e)
}

/// Restriction of a map to the weight-one coordinates.
pub fn base_action(e: &Endomorphism) -> Matrix {
    let v1 = e.algebra().grade(1);
    let rows = v1.iter().map(|&i| v1.iter().map(|&j| e.matrix().get(i, j).clone()).collect()).collect();
    Matrix::from_rows(rows).expect("square")
}
