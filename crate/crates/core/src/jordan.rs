//! Characteristic polynomials and Jordan block data.
//!
//! Eigenvalues are handled one squarefree factor `c` of the characteristic
//! polynomial at a time: linear algebra over `Q[x]/(c)` treats all roots of
//! `c` at once, splitting `c` whenever a zero divisor shows that its roots
//! behave differently. Every root of a final factor has the same block sizes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, Zero};

use crate::field::{self, split_components, Field, Rows, Split};
use crate::matrix::Matrix;
use crate::scalar::roots::{aberth, certified_complex_roots, to_f64_coeffs};
use crate::scalar::{
    dyadic_ceil, dyadic_floor, identify_in, rational_to_f64, real_roots, AlgebraicReal, Poly, Rational,
};
use crate::{Error, Result};

pub use crate::scalar::DEFAULT_DEGREE_BOUND;

/// Exact characteristic polynomial `det(xI - M)`.
pub fn char_poly(m: &Matrix) -> Poly {
    m.char_poly()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EigenKind {
    Real(AlgebraicReal),
    /// The conjugate pair `a ± bi` with `b > 0`.
    ComplexPair {
        a: AlgebraicReal,
        b: AlgebraicReal,
    },
}

/// One eigenvalue (or conjugate pair) with its modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenRoot {
    pub kind: EigenKind,
    pub modulus: AlgebraicReal,
}

impl EigenRoot {
    pub fn is_complex(&self) -> bool {
        matches!(self.kind, EigenKind::ComplexPair { .. })
    }
}

/// A real Jordan block `J_n(lambda)` or `J_n(a, b)`; for a complex pair the
/// size counts `2x2` blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanBlockData {
    pub kind: EigenKind,
    pub modulus: AlgebraicReal,
    pub size: usize,
}

impl JordanBlockData {
    /// Real dimension of the block.
    pub fn dimension(&self) -> usize {
        match self.kind {
            EigenKind::Real(_) => self.size,
            EigenKind::ComplexPair { .. } => 2 * self.size,
        }
    }
}

/// A monic squarefree factor of the characteristic polynomial whose roots
/// share one Jordan block structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenComponent {
    pub factor: Poly,
    /// Block sizes, descending.
    pub block_sizes: Vec<usize>,
    /// Real roots ascending, then conjugate pairs.
    pub roots: Vec<EigenRoot>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealJordanData {
    pub char_poly: Poly,
    pub components: Vec<EigenComponent>,
    pub blocks: Vec<JordanBlockData>,
}

impl RealJordanData {
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(JordanBlockData::dimension).sum()
    }
}

/// Squarefree factors of `p` to run the eigen computations on: one linear
/// factor per rational root, then the rest of the squarefree part.
pub(crate) fn eigen_moduli(p: &Poly) -> Vec<Poly> {
    let mut rest = p.squarefree_part();
    let mut found = Vec::new();
    // Numeric approximations only propose candidates; each is checked
    // exactly, and exact isolation below catches anything missed.
    let c = to_f64_coeffs(&rest);
    if c.len() > 2 && c.iter().all(|x| x.is_finite()) {
        let lead = rest.to_primitive_int().pop().expect("nonconstant");
        let lead_f = rational_to_f64(&Rational::from_integer(lead.clone()));
        for z in aberth(&c) {
            if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) || !(z.re * lead_f).is_finite() {
                continue;
            }
            let Some(num) = BigInt::from_f64(libm::round(z.re * lead_f)) else {
                continue;
            };
            let q = Rational::new(num, lead.clone());
            if rest.degree().unwrap_or(0) > 0 && rest.eval(&q).is_zero() {
                rest = rest.div_exact(&Poly::linear_root(&q));
                found.push(q);
            }
        }
    }
    for r in real_roots(&rest) {
        if let Some(q) = r.as_rational() {
            rest = rest.div_exact(&Poly::linear_root(q));
            found.push(q.clone());
        }
    }
    found.sort();
    let mut out: Vec<Poly> = found.iter().map(Poly::linear_root).collect();
    if !rest.is_constant() {
        out.push(rest.monic());
    }
    out
}

/// `M - lambda I` over `field`.
pub(crate) fn shifted<F: Field>(f: &F, m: &Matrix, lambda: &F::Elem) -> Rows<F::Elem> {
    let n = m.nrows();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let a = f.embed(m.get(i, j));
                    if i == j {
                        f.sub(&a, lambda)
                    } else {
                        a
                    }
                })
                .collect()
        })
        .collect()
}

/// Ranks of `N^0, N^1, ...` up to stabilisation.
pub(crate) fn rank_chain<F: Field>(f: &F, nm: &Rows<F::Elem>) -> Result<Vec<usize>, Split> {
    let n = nm.len();
    let mut ranks = vec![n];
    let mut p = nm.clone();
    loop {
        let r = field::rank(f, &p)?;
        if r == *ranks.last().expect("nonempty") {
            return Ok(ranks);
        }
        ranks.push(r);
        p = field::mat_mul(f, &p, nm);
    }
}

/// Block sizes (descending) from a rank chain.
pub(crate) fn sizes_from_ranks(ranks: &[usize]) -> Vec<usize> {
    // b_k = #blocks of size >= k = r_{k-1} - r_k.
    let b: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for k in (1..=b.len()).rev() {
        let exact = b[k - 1] - b.get(k).copied().unwrap_or(0);
        sizes.extend(core::iter::repeat_n(k, exact));
    }
    sizes
}

pub fn jordan_structure(m: &Matrix) -> Result<RealJordanData> {
    jordan_structure_with_bound(m, DEFAULT_DEGREE_BOUND)
}

/// Jordan data with a bound on the degree of each eigenvalue factor.
pub fn jordan_structure_with_bound(m: &Matrix, degree_bound: usize) -> Result<RealJordanData> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let p = m.char_poly();
    let mut components = Vec::new();
    for c in eigen_moduli(&p) {
        let parts = split_components(&c, |f| {
            let nm = shifted(f, m, &f.generator());
            rank_chain(f, &nm)
        });
        for (factor, ranks) in parts {
            let d = factor.degree().unwrap_or(0);
            if d > degree_bound {
                return Err(Error::UnsupportedEigenvalue(format!(
                    "eigenvalue factor {} has degree {} > {}",
                    factor, d, degree_bound
                )));
            }
            let roots = component_roots(&factor)?;
            components.push(EigenComponent { factor, block_sizes: sizes_from_ranks(&ranks), roots });
        }
    }
    let mut blocks = Vec::new();
    for comp in &components {
        for root in &comp.roots {
            for &size in &comp.block_sizes {
                blocks.push(JordanBlockData { kind: root.kind.clone(), modulus: root.modulus.clone(), size });
            }
        }
    }
    Ok(RealJordanData { char_poly: p, components, blocks })
}

/// Roots of a squarefree factor: real roots exactly, complex pairs through
/// exact identification of `2a`, `|lambda|^2` and `4b^2`.
pub fn component_roots(c: &Poly) -> Result<Vec<EigenRoot>> {
    let reals = real_roots(c);
    let d = c.degree().unwrap_or(0);
    let mut out: Vec<EigenRoot> =
        reals.iter().map(|r| EigenRoot { kind: EigenKind::Real(r.clone()), modulus: r.abs() }).collect();
    let pairs = (d - reals.len()) / 2;
    if pairs == 0 {
        return Ok(out);
    }
    let unsupported = || Error::UnsupportedEigenvalue(format!("cannot separate the complex roots of {}", c));
    if d == 2 {
        // x^2 + p x + q with p^2 < 4q.
        let c = c.monic();
        let (p, q) = (c.coeff(1), c.coeff(0));
        let two = Rational::from_integer(2.into());
        let a = AlgebraicReal::from_rational(-&p / &two);
        let b2 = &q - &p * &p / (&two * &two);
        let b = AlgebraicReal::from_rational(b2).sqrt().ok_or_else(unsupported)?;
        let modulus = AlgebraicReal::from_rational(q).sqrt().ok_or_else(unsupported)?;
        out.push(EigenRoot { kind: EigenKind::ComplexPair { a, b }, modulus });
        return Ok(out);
    }
    let disks = certified_complex_roots(c).ok_or_else(unsupported)?;
    let upper: Vec<_> = disks.iter().filter(|(z, r)| z.im > *r).collect();
    let real_like = disks.iter().filter(|(z, r)| z.im.abs() <= *r).count();
    if upper.len() != pairs || real_like != reals.len() {
        return Err(unsupported());
    }
    let ps = power_sums(c, 2 * d * d);
    let sum_poly = poly_from_power_sums(&sum_pair_sums(&ps, d * d), d * d);
    let prod_poly = poly_from_power_sums(&prod_pair_sums(&ps, d * d), d * d);
    let diff_poly = poly_from_power_sums(&diff_pair_sums(&ps, d * d), d * d);
    let bits = 40;
    let enclose = |lo: f64, hi: f64| (dyadic_floor(lo, bits), dyadic_ceil(hi, bits));
    for (z, r) in upper {
        let slack = r + 1e-12 * (1.0 + z.norm());
        let (a0, a1) = enclose(2.0 * (z.re - slack), 2.0 * (z.re + slack));
        let two_a = identify_in(&sum_poly, &a0, &a1).ok_or_else(unsupported)?;
        let (m0, m1) = ((z.norm() - slack).max(0.0), z.norm() + slack);
        let (m0, m1) = enclose(m0 * m0, m1 * m1);
        let mod2 = identify_in(&prod_poly, &m0, &m1).ok_or_else(unsupported)?;
        let (b0, b1) = ((z.im - slack).max(0.0), z.im + slack);
        let (b0, b1) = enclose(4.0 * b0 * b0, 4.0 * b1 * b1);
        let four_b2 = identify_in(&diff_poly, &b0, &b1).ok_or_else(unsupported)?;
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let a = two_a.scale(&half);
        let b = four_b2.sqrt().ok_or_else(unsupported)?.scale(&half);
        let modulus = mod2.sqrt().ok_or_else(unsupported)?;
        out.push(EigenRoot { kind: EigenKind::ComplexPair { a, b }, modulus });
    }
    Ok(out)
}

/// Power sums `P_0 .. P_k` of the roots of `c`.
fn power_sums(c: &Poly, k: usize) -> Vec<Rational> {
    let c = c.monic();
    let d = c.degree().unwrap_or(0);
    // Coefficient of x^(d-i) is e'_i = c.coeff(d - i).
    let e = |i: usize| if i <= d { c.coeff(d - i) } else { Rational::zero() };
    let mut p = vec![Rational::from_integer(BigInt::from(d))];
    for m in 1..=k {
        let mut s = Rational::zero();
        for i in 1..m.min(d + 1) {
            s += e(i) * &p[m - i];
        }
        if m <= d {
            s += e(m) * Rational::from_integer(BigInt::from(m));
        }
        p.push(-s);
    }
    p
}

/// Monic polynomial of degree `n` whose roots have power sums `s[1..=n]`.
fn poly_from_power_sums(s: &[Rational], n: usize) -> Poly {
    let mut e = vec![Rational::one()];
    for k in 1..=n {
        let mut acc = Rational::zero();
        for i in 1..=k {
            let term = &e[k - i] * &s[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / Rational::from_integer(BigInt::from(k)));
    }
    let coeffs = (0..=n)
        .map(|i| {
            // Coefficient of x^i is (-1)^(n-i) e_{n-i}.
            let v = e[n - i].clone();
            if (n - i) % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    Poly::from_coeffs(coeffs)
}

fn binomials(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// Power sums of `lambda_i + lambda_j` over ordered pairs.
fn sum_pair_sums(p: &[Rational], n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|k| {
            let b = binomials(k);
            (0..=k).map(|m| Rational::from_integer(b[m].clone()) * &p[m] * &p[k - m]).sum()
        })
        .collect()
}

/// Power sums of `lambda_i * lambda_j` over ordered pairs.
fn prod_pair_sums(p: &[Rational], n: usize) -> Vec<Rational> {
    (0..=n).map(|k| &p[k] * &p[k]).collect()
}

/// Power sums of `-(lambda_i - lambda_j)^2` over ordered pairs.
fn diff_pair_sums(p: &[Rational], n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|k| {
            let b = binomials(2 * k);
            let s: Rational = (0..=2 * k)
                .map(|m| {
                    let t = Rational::from_integer(b[m].clone()) * &p[m] * &p[2 * k - m];
                    if m % 2 == 1 {
                        -t
                    } else {
                        t
                    }
                })
                .sum();
            if k % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect()
}

/// Multiset of `(modulus, size)`, a complex pair contributing twice, sorted
/// by modulus then size.
pub fn absolute_jordan_form(data: &RealJordanData) -> Vec<(AlgebraicReal, usize)> {
    let mut out = Vec::new();
    for b in &data.blocks {
        let copies = if matches!(b.kind, EigenKind::ComplexPair { .. }) { 2 } else { 1 };
        for _ in 0..copies {
            out.push((b.modulus.clone(), b.size));
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn sizes_of(data: &RealJordanData) -> Vec<(f64, usize)> {
        let mut v: Vec<(f64, usize)> = data
            .blocks
            .iter()
            .map(|b| match &b.kind {
                EigenKind::Real(l) => (l.to_f64(), b.size),
                EigenKind::ComplexPair { .. } => (b.modulus.to_f64(), b.size),
            })
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn heisenberg_example_blocks() {
        let m = Matrix::from_i64(&[&[3, -1, 0], &[1, 1, 0], &[1, 0, 4]]);
        let p = char_poly(&m);
        assert_eq!(p, Poly::from_i64(&[-2, 1]).pow(2).mul(&Poly::from_i64(&[-4, 1])));
        let data = jordan_structure(&m).unwrap();
        assert_eq!(sizes_of(&data), vec![(2.0, 2), (4.0, 1)]);
        assert_eq!(data.dimension(), 3);
    }

    #[test]
    fn six_by_six_example_blocks() {
        // Columns as images of the displayed matrix (links 1->2, 4->5, 5->6).
        let m = Matrix::from_i64(&[
            &[2, 0, 0, 0, 0, 0],
            &[1, 2, 0, 0, 0, 0],
            &[0, 0, 2, 0, 0, 0],
            &[0, 0, 0, 3, 0, 0],
            &[0, 0, 0, 1, 3, 0],
            &[0, 0, 0, 0, 1, 3],
        ]);
        assert_eq!(char_poly(&m), Poly::from_i64(&[-2, 1]).pow(3).mul(&Poly::from_i64(&[-3, 1]).pow(3)));
        let data = jordan_structure(&m).unwrap();
        assert_eq!(sizes_of(&data), vec![(2.0, 1), (2.0, 2), (3.0, 3)]);
        let ajf = absolute_jordan_form(&data);
        let expect = [(2, 1), (2, 2), (3, 3)];
        assert_eq!(ajf.len(), 3);
        for ((m, s), (em, es)) in ajf.iter().zip(expect) {
            assert_eq!(m, &AlgebraicReal::from_i64(em));
            assert_eq!(*s, es);
        }
    }

    #[test]
    fn negative_and_complex_moduli() {
        let m = Matrix::from_i64(&[&[-2, 0, 0], &[1, -2, 0], &[0, 0, 4]]);
        let ajf = absolute_jordan_form(&jordan_structure(&m).unwrap());
        assert_eq!(ajf, vec![(AlgebraicReal::from_i64(2), 2), (AlgebraicReal::from_i64(4), 1)]);
        let rot = Matrix::from_i64(&[&[0, -2], &[2, 0]]);
        let data = jordan_structure(&rot).unwrap();
        assert_eq!(data.blocks.len(), 1);
        match &data.blocks[0].kind {
            EigenKind::ComplexPair { a, b } => {
                assert_eq!(a, &AlgebraicReal::zero());
                assert_eq!(b, &AlgebraicReal::from_i64(2));
            }
            other => panic!("expected a complex pair, got {:?}", other),
        }
        let ajf = absolute_jordan_form(&data);
        assert_eq!(ajf, vec![(AlgebraicReal::from_i64(2), 1), (AlgebraicReal::from_i64(2), 1)]);
    }

    #[test]
    fn quartic_complex_pairs() {
        // Companion of (x^2 - 2x + 5)(x^2 + 2x + 10): roots 1 ± 2i, -1 ± 3i.
        let p = Poly::from_i64(&[5, -2, 1]).mul(&Poly::from_i64(&[10, 2, 1]));
        let roots = component_roots(&p).unwrap();
        assert_eq!(roots.len(), 2);
        let mut mods: Vec<AlgebraicReal> = roots.iter().map(|r| r.modulus.pow(2)).collect();
        mods.sort();
        assert_eq!(mods, vec![AlgebraicReal::from_i64(5), AlgebraicReal::from_i64(10)]);
        for r in &roots {
            let EigenKind::ComplexPair { a, b } = &r.kind else { panic!() };
            let (a, b) = (a.to_f64(), b.to_f64());
            assert!(
                ((a - 1.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12)
                    || ((a + 1.0).abs() < 1e-12 && (b - 3.0).abs() < 1e-12)
            );
        }
    }

    #[test]
    fn irrational_real_eigenvalues_split() {
        // Block diag of companion(x^2 - 2) with a Jordan block of size 2.
        let m = Matrix::from_i64(&[&[0, 2, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 2], &[0, 0, 1, 0]]);
        let data = jordan_structure(&m).unwrap();
        assert_eq!(data.components.len(), 1);
        assert_eq!(data.components[0].block_sizes, vec![1, 1]);
        let mut ln = m.clone();
        ln.set(0, 2, rat(1));
        let data = jordan_structure(&ln).unwrap();
        assert_eq!(data.components[0].block_sizes, vec![2]);
    }

    #[test]
    fn degree_bound_is_enforced() {
        let p = Poly::from_i64(&[-3, 0, 0, 1]); // x^3 - 3, one real root
        let c = Matrix::companion(&p);
        assert!(jordan_structure_with_bound(&c, 2).is_err());
        assert!(jordan_structure_with_bound(&c, 3).is_ok());
    }

    #[test]
    fn power_sum_round_trip() {
        let p = Poly::from_i64(&[6, -5, 1]);
        let ps = power_sums(&p, 4);
        assert_eq!(ps, vec![rat(2), rat(5), rat(13), rat(35), rat(97)]);
        assert_eq!(poly_from_power_sums(&ps, 2), p);
    }
}
