//! Nilpotent Lie algebras given by structure constants.
//!
//! Indices are 0-based in the API; [`Violation`] displays them 1-based.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::field::{self, never_splits, Rationals};
use crate::scalar::Rational;
use crate::{Error, Result};

pub type Vector = Vec<Rational>;

pub fn unit(n: usize, k: usize) -> Vector {
    let mut v = vec![Rational::zero(); n];
    v[k] = num_traits::One::one();
    v
}

/// Sparse bracket table `[e_i, e_j] = sum_k c_ijk e_k`, stored for `i < j`
/// only, so antisymmetry holds by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructureConstants {
    dim: usize,
    table: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
}

impl StructureConstants {
    pub fn new(dim: usize) -> Self {
        StructureConstants { dim, table: BTreeMap::new() }
    }

    /// Builds a table from `(i, j, k, c)` meaning `c e_k` is a term of
    /// `[e_i, e_j]`.
    pub fn from_int_triples(dim: usize, terms: &[(usize, usize, usize, i64)]) -> Result<Self> {
        let mut sc = Self::new(dim);
        for &(i, j, k, c) in terms {
            sc.add_term(i, j, k, Rational::from_integer(c.into()))?;
        }
        Ok(sc)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.dim {
            Err(Error::IndexOutOfRange { index: i, dim: self.dim })
        } else {
            Ok(())
        }
    }

    /// Adds `c e_k` to `[e_i, e_j]` (and `-c e_k` to `[e_j, e_i]`).
    pub fn add_term(&mut self, i: usize, j: usize, k: usize, c: Rational) -> Result<()> {
        self.check(i)?;
        self.check(j)?;
        self.check(k)?;
        if i == j {
            return Err(Error::InvalidInput(alloc::format!("bracket [e{0}, e{0}] is zero by antisymmetry", i + 1)));
        }
        let (i, j, c) = if i < j { (i, j, c) } else { (j, i, -c) };
        let entry = self.table.entry((i, j)).or_default();
        match entry.iter_mut().find(|(kk, _)| *kk == k) {
            Some((_, cc)) => *cc += c,
            None => entry.push((k, c)),
        }
        entry.retain(|(_, c)| !c.is_zero());
        entry.sort_by_key(|(k, _)| *k);
        if entry.is_empty() {
            self.table.remove(&(i, j));
        }
        Ok(())
    }

    /// Stored entries `(i, j)` with `i < j`, in index order.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<(usize, Rational)>)> {
        self.table.iter()
    }

    /// `[e_i, e_j]` as a dense vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector {
        let mut v = vec![Rational::zero(); self.dim];
        if i == j {
            return v;
        }
        let (key, sign) = if i < j { ((i, j), 1) } else { ((j, i), -1) };
        if let Some(terms) = self.table.get(&key) {
            for (k, c) in terms {
                if sign > 0 {
                    v[*k] += c;
                } else {
                    v[*k] -= c;
                }
            }
        }
        v
    }

    pub fn is_abelian(&self) -> bool {
        self.table.is_empty()
    }

    /// Table in a new basis order: new index `a` is old index `perm[a]`.
    pub fn permuted(&self, perm: &[usize]) -> StructureConstants {
        let mut inv = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut out = Self::new(self.dim);
        for (&(i, j), terms) in &self.table {
            for (k, c) in terms {
                let (a, b) = (inv[i], inv[j]);
                let (a, b, c) = if a < b { (a, b, c.clone()) } else { (b, a, -c.clone()) };
                out.add_term(a, b, inv[*k], c).expect("permutation keeps indices in range");
            }
        }
        out
    }

    /// Structure constants of the subalgebra spanned by `basis` (independent
    /// vectors), in that basis. Fails if the span is not bracket-closed.
    pub fn restrict(&self, basis: &[Vector]) -> core::result::Result<StructureConstants, (usize, usize)> {
        let m = basis.len();
        let cols = field::columns_to_rows(basis, self.dim);
        let mut out = Self::new(m);
        for a in 0..m {
            for b in a + 1..m {
                let v = bracket(&basis[a], &basis[b], self);
                if v.iter().all(Zero::is_zero) {
                    continue;
                }
                let coords = never_splits(field::solve(&Rationals, &cols, &v, m)).ok_or((a, b))?;
                for (k, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        out.add_term(a, b, k, c).expect("indices in range");
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Bilinear extension of the table.
pub fn bracket(x: &[Rational], y: &[Rational], sc: &StructureConstants) -> Vector {
    let mut out = vec![Rational::zero(); sc.dim];
    for (&(i, j), terms) in &sc.table {
        let coeff = &x[i] * &y[j] - &x[j] * &y[i];
        if coeff.is_zero() {
            continue;
        }
        for (k, c) in terms {
            out[*k] += &coeff * c;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Jacobi { i: usize, j: usize, k: usize },
    Triangularity { i: usize, j: usize, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Jacobi { i, j, k } => write!(f, "Jacobi violation at ({},{},{})", i + 1, j + 1, k + 1),
            Violation::Triangularity { i, j, k } => {
                write!(f, "triangularity violation at ({},{},{})", i + 1, j + 1, k + 1)
            }
        }
    }
}

/// All triangularity and Jacobi violations, in that order. Antisymmetry is
/// enforced by [`StructureConstants`] itself.
pub fn validate(sc: &StructureConstants) -> Vec<Violation> {
    let mut out = triangularity_violations(sc);
    out.extend(jacobi_violations(sc));
    out
}

fn triangularity_violations(sc: &StructureConstants) -> Vec<Violation> {
    let mut out = Vec::new();
    for (&(i, j), terms) in &sc.table {
        for (k, _) in terms {
            if *k <= j {
                out.push(Violation::Triangularity { i, j, k: *k });
            }
        }
    }
    out
}

fn jacobi_violations(sc: &StructureConstants) -> Vec<Violation> {
    let n = sc.dim;
    let basis: Vec<Vector> = (0..n).map(|k| unit(n, k)).collect();
    let br: Vec<Vec<Vector>> = (0..n).map(|i| (0..n).map(|j| sc.basis_bracket(i, j)).collect()).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let t1 = bracket(&basis[i], &br[j][k], sc);
                let t2 = bracket(&basis[j], &br[k][i], sc);
                let t3 = bracket(&basis[k], &br[i][j], sc);
                if t1.iter().zip(&t2).zip(&t3).any(|((a, b), c)| !(a + b + c).is_zero()) {
                    out.push(Violation::Jacobi { i, j, k });
                }
            }
        }
    }
    out
}

/// Terms `gamma_1 ⊇ gamma_2 ⊇ ...` of the lower central series as echelon
/// bases, ending with the first zero term.
pub fn lower_central_series(sc: &StructureConstants) -> Result<Vec<Vec<Vector>>> {
    let n = sc.dim;
    let mut terms = vec![(0..n).map(|k| unit(n, k)).collect::<Vec<_>>()];
    loop {
        let last = terms.last().expect("nonempty");
        if last.is_empty() {
            return Ok(terms);
        }
        if terms.len() > n {
            return Err(Error::NonNilpotent { dim: n });
        }
        let mut gens = Vec::new();
        for a in 0..n {
            for u in last {
                let v = bracket(&unit(n, a), u, sc);
                if v.iter().any(|c| !c.is_zero()) {
                    gens.push(v);
                }
            }
        }
        let next = never_splits(field::span_basis(&Rationals, &gens));
        if next.len() == last.len() {
            return Err(Error::NonNilpotent { dim: n });
        }
        terms.push(next);
    }
}

fn contains(space: &[Vector], v: &[Rational]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    if space.is_empty() {
        return false;
    }
    let cols = field::columns_to_rows(space, v.len());
    never_splits(field::solve(&Rationals, &cols, v, space.len())).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    pub weights: Vec<u32>,
    /// `dim(gamma_i / gamma_{i+1})` for `i = 1..=class`.
    pub grade_dims: Vec<usize>,
}

/// `w_k = max{i : e_k in gamma_i}` and the graded dimensions.
pub fn compute_weights(sc: &StructureConstants) -> Result<Weights> {
    let lcs = lower_central_series(sc)?;
    Ok(weights_from_lcs(sc.dim, &lcs))
}

fn weights_from_lcs(n: usize, lcs: &[Vec<Vector>]) -> Weights {
    let weights = (0..n)
        .map(|k| {
            let e = unit(n, k);
            lcs.iter().take_while(|g| contains(g, &e)).count() as u32
        })
        .collect();
    let grade_dims = lcs.windows(2).map(|w| w[0].len() - w[1].len()).collect();
    Weights { weights, grade_dims }
}

/// A nilpotent algebra whose basis is adapted to its lower central series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    sc: StructureConstants,
    weights: Vec<u32>,
    grade_dims: Vec<usize>,
}

impl GradedAlgebra {
    /// Computes weights and checks that every lower-central-series term is a
    /// coordinate subspace.
    pub fn new(sc: StructureConstants) -> Result<Self> {
        let lcs = lower_central_series(&sc)?;
        let Weights { weights, grade_dims } = weights_from_lcs(sc.dim, &lcs);
        for (t, term) in lcs.iter().enumerate() {
            let count = weights.iter().filter(|&&w| w as usize > t).count();
            if count != term.len() {
                return Err(Error::BasisNotAdapted { term: t + 1 });
            }
        }
        Ok(GradedAlgebra { sc, weights, grade_dims })
    }

    /// Abelian algebra of dimension `n`.
    pub fn abelian(n: usize) -> Self {
        GradedAlgebra {
            sc: StructureConstants::new(n),
            weights: vec![1; n],
            grade_dims: if n == 0 { vec![] } else { vec![n] },
        }
    }

    /// Accepts declared weights only if they equal the computed ones.
    pub fn with_declared_weights(sc: StructureConstants, declared: &[u32]) -> Result<Self> {
        let g = Self::new(sc)?;
        if declared.len() != g.dim() {
            return Err(Error::DimensionMismatch { expected: g.dim(), found: declared.len() });
        }
        if let Some(k) = (0..g.dim()).find(|&k| declared[k] != g.weights[k]) {
            return Err(Error::InvalidInput(alloc::format!(
                "declared weight {} of e{} differs from computed weight {}",
                declared[k],
                k + 1,
                g.weights[k]
            )));
        }
        Ok(g)
    }

    pub fn sc(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn dim(&self) -> usize {
        self.sc.dim
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn grade_dims(&self) -> &[usize] {
        &self.grade_dims
    }

    pub fn nilpotency_class(&self) -> usize {
        self.grade_dims.len()
    }

    pub fn max_weight(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    /// Indices with weight exactly `j`.
    pub fn grade(&self, j: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.weights[k] == j).collect()
    }

    /// Indices with weight at least `j`.
    pub fn tail(&self, j: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.weights[k] >= j).collect()
    }

    /// Stable weight-ascending order of the basis: position `a` holds the
    /// original index `perm[a]`.
    pub fn canonical_permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.dim()).collect();
        perm.sort_by_key(|&k| self.weights[k]);
        perm
    }

    /// Structure constants in canonical basis order.
    pub fn canonical_table(&self) -> StructureConstants {
        self.sc.permuted(&self.canonical_permutation())
    }

    pub fn is_triangular(&self) -> bool {
        triangularity_violations(&self.sc).is_empty()
    }

    /// Carnot test with the first failing grade, if any.
    pub fn is_carnot(&self) -> CarnotCertificate {
        let n = self.dim();
        let r = self.max_weight();
        let mut failing = Vec::new();
        for j in 1..=r {
            let mut gens = Vec::new();
            for a in self.grade(1) {
                for b in self.grade(j) {
                    let v = self.sc.basis_bracket(a, b);
                    if v.iter().any(|c| !c.is_zero()) {
                        gens.push(v);
                    }
                }
            }
            let span = never_splits(field::span_basis(&Rationals, &gens));
            let target: Vec<Vector> = self.grade(j + 1).into_iter().map(|k| unit(n, k)).collect();
            let ok = span.len() == target.len() && span.iter().all(|v| contains(&target, v));
            if !ok {
                failing.push(j + 1);
            }
        }
        CarnotCertificate { is_carnot: failing.is_empty(), failing_grades: failing }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarnotCertificate {
    pub is_carnot: bool,
    /// Grades `j + 1` for which `span [V_1, V_j] != V_{j+1}`.
    pub failing_grades: Vec<u32>,
}

/// Ball-box comparability representative `max_i |x_i|^(1/w_i)`.
pub fn nilpotent_norm(x: &[f64], w: &[u32]) -> f64 {
    x.iter()
        .zip(w)
        .map(|(&xi, &wi)| {
            let a = xi.abs();
            match wi {
                1 => a,
                2 => libm::sqrt(a),
                3 => libm::cbrt(a),
                _ => libm::pow(a, 1.0 / wi as f64),
            }
        })
        .fold(0.0, f64::max)
}

/// Basis permutation that makes the table triangular, if sorting by weight
/// achieves it.
pub fn triangular_order(g: &GradedAlgebra) -> Option<Vec<usize>> {
    let perm = g.canonical_permutation();
    triangularity_violations(&g.sc.permuted(&perm)).is_empty().then_some(perm)
}
