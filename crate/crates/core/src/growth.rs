//! Growth-rate classes `[(t^k lam^t)^{1/w}]`, divergence-rate multisets and
//! growth-space filtrations.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::Zero;

use crate::endomorphism::Endomorphism;
use crate::field::{self, never_splits, Rationals};
use crate::lie_algebra::{bracket, lower_central_series, unit, StructureConstants, Vector};
use crate::pajf::{adapted_jordan_basis, power_ratio_obstruction, AdaptedJordanBasis};
use crate::scalar::{alg_pow_compare, format_rational, AlgebraicReal};
use crate::{Error, Result};

/// The class of `(t^k lam^t)^{1/w}`.
#[derive(Clone, Debug)]
pub struct GrowthRate {
    pub lam: AlgebraicReal,
    pub k: u32,
    pub w: u32,
}

impl GrowthRate {
    pub fn new(lam: AlgebraicReal, k: u32, w: u32) -> Self {
        assert!(w > 0, "growth rate root must be positive");
        GrowthRate { lam, k, w }
    }

    /// `lam^{1/w}` as a float.
    pub fn base_f64(&self) -> f64 {
        libm::pow(self.lam.to_f64(), 1.0 / f64::from(self.w))
    }

    /// `k/w` as a float.
    pub fn degree_f64(&self) -> f64 {
        f64::from(self.k) / f64::from(self.w)
    }

    /// Time rescaling `t -> (p/q) t`: the base is raised to `p/q`, the
    /// polynomial degree is unchanged.
    pub fn rescaled(&self, p: u32, q: u32) -> GrowthRate {
        GrowthRate { lam: self.lam.pow(p), k: self.k * q, w: self.w * q }
    }

    /// Same class with the polynomial factor dropped.
    pub fn base_class(&self) -> GrowthRate {
        GrowthRate { lam: self.lam.clone(), k: 0, w: self.w }
    }
}

/// Total order on classes: exponential base first, then `k/w`.
pub fn rate_compare(a: &GrowthRate, b: &GrowthRate) -> Ordering {
    alg_pow_compare(&a.lam, a.w, &b.lam, b.w)
        .then_with(|| (u64::from(a.k) * u64::from(b.w)).cmp(&(u64::from(b.k) * u64::from(a.w))))
}

impl PartialEq for GrowthRate {
    fn eq(&self, other: &Self) -> bool {
        rate_compare(self, other) == Ordering::Equal
    }
}

impl Eq for GrowthRate {}

impl PartialOrd for GrowthRate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GrowthRate {
    fn cmp(&self, other: &Self) -> Ordering {
        rate_compare(self, other)
    }
}

impl fmt::Display for GrowthRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lam = match self.lam.as_rational() {
            Some(q) if q.is_integer() => format_rational(q),
            Some(q) => alloc::format!("({})", format_rational(q)),
            None => alloc::format!("{:.6}", self.lam.to_f64()),
        };
        let core = match self.k {
            0 => alloc::format!("{}^t", lam),
            1 => alloc::format!("t*{}^t", lam),
            k => alloc::format!("t^{}*{}^t", k, lam),
        };
        if self.w == 1 {
            f.write_str(&core)
        } else {
            write!(f, "({})^(1/{})", core, self.w)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Forward,
    Backward,
}

/// Where a rate comes from in the adapted basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateEntry {
    pub component: usize,
    pub root: usize,
    pub chain: usize,
    /// Position in the chain, 0 for the generator.
    pub position: usize,
    /// Second slot of a complex pair (imaginary part of the chain vector).
    pub conjugate: bool,
    pub rate: GrowthRate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceMultiset {
    pub entries: Vec<RateEntry>,
}

impl DivergenceMultiset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rates(&self) -> impl Iterator<Item = &GrowthRate> {
        self.entries.iter().map(|e| &e.rate)
    }

    /// Rates in increasing class order.
    pub fn sorted(&self) -> Vec<GrowthRate> {
        let mut v: Vec<GrowthRate> = self.rates().cloned().collect();
        v.sort();
        v
    }
}

/// Rate of chain vector `position` of a chain with the given weights: the
/// largest class `(t^l m^t)^{1/w_{position+l}}` over reachable offsets `l`.
pub fn chain_rate(modulus: &AlgebraicReal, weights: &[u32], position: usize) -> GrowthRate {
    (0..weights.len() - position)
        .map(|l| GrowthRate::new(modulus.clone(), l as u32, weights[position + l]))
        .max()
        .expect("position inside the chain")
}

/// One rate per basis direction; a complex pair contributes each of its
/// chains twice.
pub fn basis_rates(basis: &AdaptedJordanBasis, direction: Direction) -> DivergenceMultiset {
    let mut entries = Vec::new();
    for (ci, comp) in basis.components.iter().enumerate() {
        for (ri, root) in comp.roots.iter().enumerate() {
            let lam = match direction {
                Direction::Forward => root.modulus.clone(),
                Direction::Backward => root.modulus.recip().expect("injective map has nonzero moduli"),
            };
            let copies = if root.is_complex() { 2 } else { 1 };
            for (chi, chain) in comp.chains.iter().enumerate() {
                for copy in 0..copies {
                    for position in 0..chain.len() {
                        let rate = chain_rate(&lam, &chain.weights, position);
                        entries.push(RateEntry {
                            component: ci,
                            root: ri,
                            chain: chi,
                            position,
                            conjugate: copy == 1,
                            rate,
                        });
                    }
                }
            }
        }
    }
    DivergenceMultiset { entries }
}

pub fn endomorphism_rates(e: &Endomorphism, direction: Direction) -> Result<DivergenceMultiset> {
    let basis = adapted_jordan_basis(e.matrix(), e.weights())?;
    Ok(basis_rates(&basis, direction))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MultisetWitness {
    Size {
        left: usize,
        right: usize,
    },
    /// Sorted position whose `k/w` differs; time rescaling keeps `k/w`.
    PolynomialDegree {
        position: usize,
    },
    /// Sorted positions whose bases need different rescaling powers.
    BaseRatio {
        i: usize,
        j: usize,
    },
}

impl fmt::Display for MultisetWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultisetWitness::Size { left, right } => write!(f, "multiset sizes differ ({} vs {})", left, right),
            MultisetWitness::PolynomialDegree { position } => {
                write!(f, "sorted rate {} has a different polynomial degree k/w", position + 1)
            }
            MultisetWitness::BaseRatio { i, j } if i == j => {
                write!(f, "sorted rate {} expands on one side and contracts on the other", i + 1)
            }
            MultisetWitness::BaseRatio { i, j } => {
                write!(f, "sorted rates {} and {} need different rescaling powers", i + 1, j + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerMatch {
    /// `D1` rescaled by `s = p/q` equals `D2`.
    Equal {
        p: u32,
        q: u32,
    },
    NotEqual(MultisetWitness),
    Undecided,
}

/// Searches `s = p/q` with `p, q <= bound` (s = 1 first) such that rescaling
/// time by `s` maps `D1` onto `D2` as a multiset of classes.
pub fn multiset_equal_up_to_power(d1: &DivergenceMultiset, d2: &DivergenceMultiset, bound: u32) -> PowerMatch {
    if d1.len() != d2.len() {
        return PowerMatch::NotEqual(MultisetWitness::Size { left: d1.len(), right: d2.len() });
    }
    // Rescaling is monotone, so sorted positions must correspond.
    let (a, b) = (d1.sorted(), d2.sorted());
    if let Some(position) =
        (0..a.len()).find(|&i| u64::from(a[i].k) * u64::from(b[i].w) != u64::from(b[i].k) * u64::from(a[i].w))
    {
        return PowerMatch::NotEqual(MultisetWitness::PolynomialDegree { position });
    }
    let la: Vec<(&AlgebraicReal, u32)> = a.iter().map(|r| (&r.lam, r.w)).collect();
    let lb: Vec<(&AlgebraicReal, u32)> = b.iter().map(|r| (&r.lam, r.w)).collect();
    if let Some((i, j)) = power_ratio_obstruction(&la, &lb) {
        return PowerMatch::NotEqual(MultisetWitness::BaseRatio { i, j });
    }
    for (p, q) in rescalings(bound) {
        if a.iter().zip(&b).all(|(x, y)| x.rescaled(p, q) == *y) {
            return PowerMatch::Equal { p, q };
        }
    }
    PowerMatch::Undecided
}

/// Reduced fractions `p/q` with `p, q <= bound`, starting with 1 and then by
/// increasing `p + q`.
fn rescalings(bound: u32) -> Vec<(u32, u32)> {
    let mut out = vec![(1, 1)];
    for sum in 3..=2 * bound {
        for p in 1..sum {
            let q = sum - p;
            if p <= bound && q <= bound && num_integer::gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

/// Isomorphism invariants of a nilpotent Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fingerprint {
    pub dim: usize,
    /// Dimensions of the quotients of consecutive lower-central-series terms.
    pub graded_dims: Vec<usize>,
    /// Dimensions of the lower-central-series terms, ending with 0.
    pub lcs_dims: Vec<usize>,
    pub center_dim: usize,
    pub abelianization_dim: usize,
}

pub fn fingerprint(sc: &StructureConstants) -> Result<Fingerprint> {
    let n = sc.dim();
    let lcs_dims: Vec<usize> = lower_central_series(sc)?.iter().map(Vec::len).collect();
    let graded_dims: Vec<usize> = lcs_dims.windows(2).map(|w| w[0] - w[1]).collect();
    let mut rows = Vec::new();
    for j in 0..n {
        let images: Vec<Vector> = (0..n).map(|a| bracket(&unit(n, a), &unit(n, j), sc)).collect();
        for k in 0..n {
            rows.push(images.iter().map(|v| v[k].clone()).collect());
        }
    }
    let center_dim = if rows.iter().all(|r: &Vec<_>| r.iter().all(Zero::is_zero)) {
        n
    } else {
        never_splits(field::kernel(&Rationals, &rows, n)).len()
    };
    Ok(Fingerprint {
        dim: n,
        abelianization_dim: graded_dims.first().copied().unwrap_or(0),
        graded_dims,
        lcs_dims,
        center_dim,
    })
}

/// A chain vector of the adapted basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainVectorRef {
    pub component: usize,
    pub chain: usize,
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthSpace {
    /// Base `lam^{1/w}` (with `k = 0`).
    pub threshold: GrowthRate,
    /// Indices into `GrowthFiltration::chain_vectors`.
    pub members: Vec<usize>,
    /// Rational basis in echelon form.
    pub basis: Vec<Vector>,
    pub fingerprint: Fingerprint,
}

impl GrowthSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[crate::Rational]) -> bool {
        let mut m = self.basis.clone();
        m.push(v.to_vec());
        never_splits(field::rank(&Rationals, &m)) == self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthFiltration {
    pub chain_vectors: Vec<ChainVectorRef>,
    /// Nested spaces with strictly increasing thresholds; the last is the
    /// whole algebra.
    pub spaces: Vec<GrowthSpace>,
}

impl GrowthFiltration {
    pub fn thresholds(&self) -> Vec<&GrowthRate> {
        self.spaces.iter().map(|s| &s.threshold).collect()
    }

    pub fn fingerprints(&self) -> Vec<&Fingerprint> {
        self.spaces.iter().map(|s| &s.fingerprint).collect()
    }
}

/// The growth spaces `g_b = {v : ||M^t v|| <= C t^k b^t}` at every distinct
/// forward base `b`, each checked to be a subalgebra.
pub fn growth_filtration(e: &Endomorphism) -> Result<GrowthFiltration> {
    let basis = adapted_jordan_basis(e.matrix(), e.weights())?;
    growth_filtration_from_basis(e.algebra().sc(), &basis)
}

pub fn growth_filtration_from_basis(sc: &StructureConstants, basis: &AdaptedJordanBasis) -> Result<GrowthFiltration> {
    let n = sc.dim();
    let mut chain_vectors = Vec::new();
    // Per chain vector: its base under each root, and its rational
    // coefficient vectors.
    let mut bases: Vec<Vec<GrowthRate>> = Vec::new();
    let mut coeffs: Vec<Vec<Vector>> = Vec::new();
    for (ci, comp) in basis.components.iter().enumerate() {
        let d = comp.factor.degree().unwrap_or(0);
        for (chi, chain) in comp.chains.iter().enumerate() {
            for position in 0..chain.len() {
                chain_vectors.push(ChainVectorRef { component: ci, chain: chi, position });
                bases.push(
                    comp.roots.iter().map(|r| chain_rate(&r.modulus, &chain.weights, position).base_class()).collect(),
                );
                let v = &chain.vectors[position];
                coeffs.push((0..d).map(|t| v.iter().map(|c| c.coeff(t)).collect()).collect());
            }
        }
    }
    let mut thresholds: Vec<GrowthRate> = bases.iter().flatten().cloned().collect();
    thresholds.sort();
    thresholds.dedup();
    let mut spaces = Vec::new();
    for (ti, b) in thresholds.into_iter().enumerate() {
        let mut members = Vec::new();
        let mut gens = Vec::new();
        for (idx, bs) in bases.iter().enumerate() {
            let below = bs.iter().filter(|x| **x <= b).count();
            if below == bs.len() {
                members.push(idx);
                gens.extend(coeffs[idx].iter().cloned());
            } else if below > 0 {
                return Err(Error::GrowthSpaceNotRational { threshold: ti });
            }
        }
        let span = never_splits(field::span_basis(&Rationals, &gens));
        let sub = sc.restrict(&span).map_err(|_| Error::SubalgebraClosureFailure { threshold: ti })?;
        let fingerprint = fingerprint(&sub)?;
        spaces.push(GrowthSpace { threshold: b, members, basis: span, fingerprint });
    }
    debug_assert!(spaces.last().map_or(n == 0, |s| s.dim() == n));
    Ok(GrowthFiltration { chain_vectors, spaces })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationComparison {
    pub equivalent: bool,
    /// First position where the fingerprint sequences differ.
    pub first_mismatch: Option<usize>,
}

/// Compares the sorted fingerprint sequences position by position. This is
/// a necessary condition for the growth spaces to be isomorphic.
pub fn filtration_equivalent(f1: &GrowthFiltration, f2: &GrowthFiltration) -> FiltrationComparison {
    let mut a = f1.fingerprints();
    let mut b = f2.fingerprints();
    a.sort();
    b.sort();
    let first_mismatch = (0..a.len().max(b.len())).find(|&i| a.get(i) != b.get(i));
    FiltrationComparison { equivalent: first_mismatch.is_none(), first_mismatch }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::GradedAlgebra;
    use crate::matrix::Matrix;
    use crate::scalar::rat;

    fn r(lam: i64, k: u32, w: u32) -> GrowthRate {
        GrowthRate::new(AlgebraicReal::from_i64(lam), k, w)
    }

    fn heisenberg() -> GradedAlgebra {
        GradedAlgebra::new(StructureConstants::from_int_triples(3, &[(0, 1, 2, 1)]).unwrap()).unwrap()
    }

    fn h3_diag(n: [u32; 9]) -> Endomorphism {
        let sc = StructureConstants::from_int_triples(9, &[(0, 1, 2, 1), (3, 4, 5, 1), (6, 7, 8, 1)]).unwrap();
        let g = GradedAlgebra::new(sc).unwrap();
        let d: Vec<_> = n
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let e = if i % 3 == 2 { 2 * e } else { e };
                crate::Rational::from_integer(num_bigint::BigInt::from(2).pow(e))
            })
            .collect();
        Endomorphism::diagonal(g, &d).unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(rate_compare(&r(3, 0, 2), &r(2, 1, 1)), Ordering::Less);
        assert_eq!(rate_compare(&r(4, 0, 2), &r(2, 0, 1)), Ordering::Equal);
        assert_eq!(rate_compare(&r(2, 2, 2), &r(2, 1, 1)), Ordering::Less);
        assert_eq!(rate_compare(&r(2, 2, 2), &r(2, 1, 2)), Ordering::Greater);
        assert_eq!(alloc::format!("{}", r(4, 1, 2)), "(t*4^t)^(1/2)");
    }

    #[test]
    fn heisenberg_rates() {
        let m = Matrix::from_i64(&[&[3, -1, 0], &[1, 1, 0], &[1, 0, 4]]);
        let e = Endomorphism::new(heisenberg(), m).unwrap();
        let d = endomorphism_rates(&e, Direction::Forward).unwrap();
        assert_eq!(d.sorted(), vec![r(2, 0, 1), r(2, 0, 1), r(2, 1, 1)]);
        let back = endomorphism_rates(&e, Direction::Backward).unwrap();
        assert!(back.rates().all(|x| x.lam < AlgebraicReal::one()));
    }

    #[test]
    fn rescaling_search() {
        let e = h3_diag([1, 11, 6, 3, 15, 9, 7, 9, 8]);
        let d = endomorphism_rates(&e, Direction::Forward).unwrap();
        let d2 = endomorphism_rates(&e.pow(2), Direction::Forward).unwrap();
        assert_eq!(multiset_equal_up_to_power(&d, &d, 12), PowerMatch::Equal { p: 1, q: 1 });
        assert_eq!(multiset_equal_up_to_power(&d, &d2, 12), PowerMatch::Equal { p: 2, q: 1 });
        assert_eq!(multiset_equal_up_to_power(&d2, &d, 12), PowerMatch::Equal { p: 1, q: 2 });
        let other = endomorphism_rates(&h3_diag([1, 11, 6, 3, 15, 9, 7, 13, 10]), Direction::Forward).unwrap();
        assert!(matches!(multiset_equal_up_to_power(&d, &other, 12), PowerMatch::NotEqual(_)));
    }

    #[test]
    fn h3_filtration() {
        let f = growth_filtration(&h3_diag([1, 11, 6, 3, 15, 9, 7, 9, 8])).unwrap();
        let dims: Vec<usize> = f.spaces.iter().map(GrowthSpace::dim).collect();
        assert_eq!(dims, vec![1, 2, 3, 4, 5, 7, 8, 9]);
        let g8 = &f.spaces[4];
        for a in [0, 3, 2, 6, 8] {
            assert!(g8.contains(&unit(9, a)));
        }
        assert_eq!(g8.fingerprint.lcs_dims, vec![5, 0]);
        let top = &f.spaces[7].fingerprint;
        assert_eq!(
            (top.dim, top.graded_dims.clone(), top.lcs_dims.clone(), top.center_dim),
            (9, vec![6, 3], vec![9, 3, 0], 3)
        );
        let theta = growth_filtration(&h3_diag([7, 11, 9, 1, 15, 8, 3, 9, 6])).unwrap();
        assert!(filtration_equivalent(&f, &theta).equivalent);
    }

    #[test]
    fn heisenberg_vs_abelian() {
        let h = Endomorphism::diagonal(heisenberg(), &[rat(2), rat(2), rat(4)]).unwrap();
        let a = Endomorphism::diagonal(GradedAlgebra::abelian(3), &[rat(2), rat(2), rat(4)]).unwrap();
        let c = filtration_equivalent(&growth_filtration(&h).unwrap(), &growth_filtration(&a).unwrap());
        assert_eq!(c, FiltrationComparison { equivalent: false, first_mismatch: Some(0) });
    }
}
