//! Filtration-adapted Jordan bases and the permuted absolute Jordan form.
//!
//! A chain is listed generator first: `c_0, c_1 = N c_0, ..., c_{k-1}` with
//! `N = M - lambda I` and `c_{k-1}` an eigenvector. The weight of a vector is
//! the smallest weight among its nonzero coordinates; since `M` preserves the
//! weight tails `T_i = span{e_j : w_j >= i}`, weights never decrease along a
//! chain.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Signed};

use crate::endomorphism::weakly_preserves;
use crate::field::{self, never_splits, split_components, Field, Rationals, Rows, Split};
use crate::jordan::{component_roots, eigen_moduli, rank_chain, shifted, EigenRoot, DEFAULT_DEGREE_BOUND};
use crate::matrix::Matrix;
use crate::scalar::{alg_compare, AlgebraicReal, Poly, Rational};
use crate::{Error, Result};

/// One Jordan chain over `Q[x]/(factor)`: coordinates are polynomials in a
/// generic root of the factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub vectors: Vec<Vec<Poly>>,
    pub weights: Vec<u32>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Chains for all roots of one squarefree factor of the characteristic
/// polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedComponent {
    pub factor: Poly,
    pub roots: Vec<EigenRoot>,
    pub chains: Vec<Chain>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedJordanBasis {
    pub components: Vec<AdaptedComponent>,
}

impl AdaptedJordanBasis {
    /// Every chain weight, component by component.
    pub fn chain_weights(&self) -> Vec<Vec<u32>> {
        self.components.iter().flat_map(|c| c.chains.iter().map(|ch| ch.weights.clone())).collect()
    }
}

fn vector_weight<F: Field>(f: &F, v: &[F::Elem], w: &[u32]) -> Result<u32, Split> {
    let mut best = u32::MAX;
    for (x, &wk) in v.iter().zip(w) {
        if wk < best && !f.is_zero(x)? {
            best = wk;
        }
    }
    Ok(best)
}

fn tail_basis<F: Field>(f: &F, w: &[u32], i: u32) -> Vec<Vec<F::Elem>> {
    let n = w.len();
    (0..n).filter(|&j| w[j] >= i).map(|j| (0..n).map(|k| if k == j { f.one() } else { f.zero() }).collect()).collect()
}

fn columns<F: Field>(m: &Rows<F::Elem>) -> Vec<Vec<F::Elem>> {
    let n = m.first().map_or(0, Vec::len);
    (0..n).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

fn is_independent_of<F: Field>(f: &F, span: &[Vec<F::Elem>], v: &[F::Elem]) -> Result<bool, Split> {
    let mut m = span.to_vec();
    m.push(v.to_vec());
    Ok(field::rank(f, &m)? > span.len())
}

/// Reduces `x` modulo `span(l)` eliminating the lowest-weight coordinates
/// first, which maximises the weight of the representative.
fn reduce_max_weight<F: Field>(f: &F, x: &[F::Elem], l: &[Vec<F::Elem>], w: &[u32]) -> Result<Vec<F::Elem>, Split> {
    if l.is_empty() {
        return Ok(x.to_vec());
    }
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by_key(|&j| w[j]);
    let mut basis = l.to_vec();
    let pivots = field::rref(f, &mut basis, Some(&order))?;
    let mut x = x.to_vec();
    for (row, &p) in basis.iter().zip(&pivots) {
        if f.is_zero(&x[p])? {
            continue;
        }
        let c = x[p].clone();
        for (xi, ri) in x.iter_mut().zip(row) {
            *xi = f.sub(xi, &f.mul(&c, ri));
        }
    }
    Ok(x)
}

/// Chains as `(vectors, weights)` over the field's elements.
type RawChains<E> = core::result::Result<Vec<(Vec<Vec<E>>, Vec<u32>)>, Error>;

fn adapted_chains<F: Field>(f: &F, lambda: &F::Elem, m: &Matrix, w: &[u32]) -> Result<RawChains<F::Elem>, Split> {
    let n = m.nrows();
    let nm = shifted(f, m, lambda);
    let ranks = rank_chain(f, &nm)?;
    let s = ranks.len() - 1;
    let r = w.iter().copied().max().unwrap_or(1);
    let identity: Rows<F::Elem> =
        (0..n).map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect();
    let mut powers = vec![identity];
    for k in 1..=s {
        let next = field::mat_mul(f, &powers[k - 1], &nm);
        powers.push(next);
    }
    let ker_n = field::kernel(f, &nm, n)?;
    let images: Vec<Vec<Vec<F::Elem>>> =
        powers.iter().take(s).map(|p| field::span_basis(f, &columns::<F>(p))).collect::<Result<_, _>>()?;
    // heads[k] = im N^{k-1} ∩ ker N for k = 1..=s; heads[s+1] = 0.
    let mut heads: Vec<Vec<Vec<F::Elem>>> = vec![Vec::new(); s + 2];
    for k in 1..=s {
        heads[k] = field::intersect(f, &images[k - 1], &ker_n, n)?;
    }
    let mut chains = Vec::new();
    for k in (1..=s).rev() {
        let need = heads[k].len() - heads[k + 1].len();
        if need == 0 {
            continue;
        }
        let mut current = heads[k + 1].clone();
        let mut chosen = Vec::new();
        'levels: for i in (1..=r).rev() {
            let cand = field::intersect(f, &heads[k], &tail_basis(f, w, i), n)?;
            for v in cand {
                if chosen.len() == need {
                    break 'levels;
                }
                if is_independent_of(f, &current, &v)? {
                    current.push(v.clone());
                    chosen.push(v);
                }
            }
        }
        if chosen.len() != need {
            return Ok(Err(Error::NoAdaptedBasis { level: 1 }));
        }
        for h in chosen {
            let mut xs = vec![h];
            for d in 1..k {
                let b = &images[k - 1 - d];
                let nb: Vec<Vec<F::Elem>> = b.iter().map(|col| field::mat_vec(f, &nm, col)).collect();
                let rows = field::columns_to_rows(&nb, n);
                let Some(y) = field::solve(f, &rows, &xs[d - 1], b.len())? else {
                    return Ok(Err(Error::NoAdaptedBasis { level: 1 }));
                };
                let mut xp = vec![f.zero(); n];
                for (yc, col) in y.iter().zip(b) {
                    for (xi, ci) in xp.iter_mut().zip(col) {
                        *xi = f.add(xi, &f.mul(yc, ci));
                    }
                }
                let x = reduce_max_weight(f, &xp, &heads[k - d], w)?;
                xs.push(x);
            }
            xs.reverse();
            let weights = xs.iter().map(|v| vector_weight(f, v, w)).collect::<Result<Vec<_>, _>>()?;
            chains.push((xs, weights));
        }
    }
    // Adaptedness: T_i ∩ R is spanned by the chain vectors it contains.
    let gen_space = field::kernel(f, &powers[s], n)?;
    for i in 1..=r {
        let dim = field::intersect(f, &gen_space, &tail_basis(f, w, i), n)?.len();
        let count = chains.iter().flat_map(|c| &c.1).filter(|&&x| x >= i).count();
        if dim != count {
            return Ok(Err(Error::NoAdaptedBasis { level: i }));
        }
    }
    Ok(Ok(chains))
}

pub fn adapted_jordan_basis(m: &Matrix, w: &[u32]) -> Result<AdaptedJordanBasis> {
    adapted_jordan_basis_with_bound(m, w, DEFAULT_DEGREE_BOUND)
}

/// Jordan chains whose weights are as large as the filtration allows, so
/// that every tail `T_i` meets each generalised eigenspace in the span of
/// the chain vectors it contains.
pub fn adapted_jordan_basis_with_bound(m: &Matrix, w: &[u32], degree_bound: usize) -> Result<AdaptedJordanBasis> {
    if !m.is_square() || m.nrows() != w.len() {
        return Err(Error::DimensionMismatch { expected: w.len(), found: m.nrows() });
    }
    if !weakly_preserves(m, w) {
        return Err(Error::InvalidInput("matrix does not preserve the weight filtration".into()));
    }
    let mut components = Vec::new();
    let mut push = |factor: Poly, chains: Vec<Chain>| -> Result<()> {
        let d = factor.degree().unwrap_or(0);
        if d > degree_bound {
            return Err(Error::UnsupportedEigenvalue(format!(
                "eigenvalue factor {} has degree {} > {}",
                factor, d, degree_bound
            )));
        }
        let roots = component_roots(&factor)?;
        components.push(AdaptedComponent { factor, roots, chains });
        Ok(())
    };
    for c in eigen_moduli(&m.char_poly()) {
        if c.degree() == Some(1) {
            let lambda = -c.coeff(0) / c.lead();
            let raw = never_splits(adapted_chains(&Rationals, &lambda, m, w))?;
            let chains = raw
                .into_iter()
                .map(|(vs, weights)| Chain {
                    vectors: vs.into_iter().map(|v| v.into_iter().map(Poly::constant).collect()).collect(),
                    weights,
                })
                .collect();
            push(c, chains)?;
            continue;
        }
        for (factor, raw) in split_components(&c, |f| adapted_chains(f, &f.generator(), m, w)) {
            let chains = raw?.into_iter().map(|(vectors, weights)| Chain { vectors, weights }).collect();
            push(factor, chains)?;
        }
    }
    Ok(AdaptedJordanBasis { components })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WeightOrder {
    #[default]
    Ascending,
    Descending,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedBlock {
    pub modulus: AlgebraicReal,
    pub size: usize,
    /// Chain weights, generator first; nondecreasing.
    pub weights: Vec<u32>,
}

fn block_order(a: &WeightedBlock, b: &WeightedBlock) -> Ordering {
    alg_compare(&a.modulus, &b.modulus).then(a.size.cmp(&b.size)).then_with(|| a.weights.cmp(&b.weights))
}

/// One basis position of the permuted form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    /// Index into the canonical block list.
    pub block: usize,
    /// Position in the chain, 0 for the generator.
    pub position: usize,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutedAbsoluteJordanForm {
    /// Sorted by modulus, then size, then weight signature.
    pub blocks: Vec<WeightedBlock>,
    /// Slots in output order.
    pub slots: Vec<Slot>,
    /// `sigma[i]` is the output slot of the `i`-th canonical slot (blocks in
    /// order, each listed generator first).
    pub sigma: Vec<usize>,
    pub order: WeightOrder,
}

impl PermutedAbsoluteJordanForm {
    pub fn from_blocks(mut blocks: Vec<WeightedBlock>, order: WeightOrder) -> Self {
        blocks.sort_by(block_order);
        let canonical: Vec<Slot> = blocks
            .iter()
            .enumerate()
            .flat_map(|(b, blk)| {
                blk.weights.iter().enumerate().map(move |(p, &weight)| Slot { block: b, position: p, weight })
            })
            .collect();
        let mut idx: Vec<usize> = (0..canonical.len()).collect();
        match order {
            WeightOrder::Ascending => idx.sort_by_key(|&i| canonical[i].weight),
            WeightOrder::Descending => idx.sort_by_key(|&i| core::cmp::Reverse(canonical[i].weight)),
        }
        let mut sigma = vec![0; idx.len()];
        for (out, &i) in idx.iter().enumerate() {
            sigma[i] = out;
        }
        let slots = idx.iter().map(|&i| canonical[i].clone()).collect();
        PermutedAbsoluteJordanForm { blocks, slots, sigma, order }
    }

    pub fn dim(&self) -> usize {
        self.slots.len()
    }

    fn slot_index(&self, block: usize, position: usize) -> usize {
        let start: usize = self.blocks[..block].iter().map(|b| b.size).sum();
        self.sigma[start + position]
    }

    /// The permuted matrix: moduli on the diagonal and a 1 at
    /// `(slot(c_i), slot(c_{i+1}))` for consecutive chain vectors.
    pub fn matrix(&self) -> Vec<Vec<AlgebraicReal>> {
        let n = self.dim();
        let mut out = vec![vec![AlgebraicReal::zero(); n]; n];
        for (i, s) in self.slots.iter().enumerate() {
            out[i][i] = self.blocks[s.block].modulus.clone();
        }
        for (b, blk) in self.blocks.iter().enumerate() {
            for p in 0..blk.size.saturating_sub(1) {
                out[self.slot_index(b, p)][self.slot_index(b, p + 1)] = AlgebraicReal::one();
            }
        }
        out
    }

    /// Weights in output order.
    pub fn slot_weights(&self) -> Vec<u32> {
        self.slots.iter().map(|s| s.weight).collect()
    }

    /// `(size, weights)` of each block in canonical order.
    pub fn structure(&self) -> Vec<(usize, Vec<u32>)> {
        self.blocks.iter().map(|b| (b.size, b.weights.clone())).collect()
    }
}

/// Weighted blocks of an adapted basis: one per chain and root, two for a
/// complex pair.
pub fn weighted_blocks(basis: &AdaptedJordanBasis) -> Vec<WeightedBlock> {
    let mut out = Vec::new();
    for comp in &basis.components {
        for root in &comp.roots {
            let copies = if root.is_complex() { 2 } else { 1 };
            for chain in &comp.chains {
                for _ in 0..copies {
                    out.push(WeightedBlock {
                        modulus: root.modulus.clone(),
                        size: chain.len(),
                        weights: chain.weights.clone(),
                    });
                }
            }
        }
    }
    out
}

pub fn compute_pajf(m: &Matrix, w: &[u32], order: WeightOrder) -> Result<PermutedAbsoluteJordanForm> {
    let basis = adapted_jordan_basis(m, w)?;
    Ok(PermutedAbsoluteJordanForm::from_blocks(weighted_blocks(&basis), order))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PajfWitness {
    /// Total dimension differs.
    Dimension { left: usize, right: usize },
    /// Block `position` (canonical order) has different size or weights.
    Structure { position: usize },
    /// Moduli `i` and `j` need different power ratios (or one of them
    /// expands while the other contracts).
    PowerRatio { i: usize, j: usize },
}

impl fmt::Display for PajfWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PajfWitness::Dimension { left, right } => write!(f, "dimensions differ ({} vs {})", left, right),
            PajfWitness::Structure { position } => {
                write!(f, "block {} differs in size or weight signature", position + 1)
            }
            PajfWitness::PowerRatio { i, j } => {
                write!(f, "blocks {} and {} require incompatible powers", i + 1, j + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerEquivalence {
    Equivalent { r1: u32, r2: u32 },
    NotEquivalent(PajfWitness),
    UndecidedWithinBound,
}

/// Searches `1 <= r1, r2 <= bound` (smallest `r1 + r2` first, then `r1`)
/// such that `M_1^{r1}` and `M_2^{r2}` have the same permuted absolute
/// Jordan form.
pub fn pajf_power_equivalent(
    p1: &PermutedAbsoluteJordanForm,
    p2: &PermutedAbsoluteJordanForm,
    bound: u32,
) -> PowerEquivalence {
    if p1.dim() != p2.dim() {
        return PowerEquivalence::NotEquivalent(PajfWitness::Dimension { left: p1.dim(), right: p2.dim() });
    }
    let (s1, s2) = (p1.structure(), p2.structure());
    if let Some(position) = (0..s1.len().min(s2.len())).find(|&i| s1[i] != s2[i]) {
        return PowerEquivalence::NotEquivalent(PajfWitness::Structure { position });
    }
    if s1.len() != s2.len() {
        return PowerEquivalence::NotEquivalent(PajfWitness::Structure { position: s1.len().min(s2.len()) });
    }
    let m1: Vec<&AlgebraicReal> = p1.blocks.iter().map(|b| &b.modulus).collect();
    let m2: Vec<&AlgebraicReal> = p2.blocks.iter().map(|b| &b.modulus).collect();
    let r1: Vec<(&AlgebraicReal, u32)> = m1.iter().map(|&m| (m, 1)).collect();
    let r2: Vec<(&AlgebraicReal, u32)> = m2.iter().map(|&m| (m, 1)).collect();
    if let Some((i, j)) = power_ratio_obstruction(&r1, &r2) {
        return PowerEquivalence::NotEquivalent(PajfWitness::PowerRatio { i, j });
    }
    for sum in 2..=2 * bound {
        for r1 in 1..sum {
            let r2 = sum - r1;
            if r1 > bound || r2 > bound {
                continue;
            }
            if m1.iter().zip(&m2).all(|(a, b)| a.pow(r1) == b.pow(r2)) {
                return PowerEquivalence::Equivalent { r1, r2 };
            }
        }
    }
    PowerEquivalence::UndecidedWithinBound
}

/// Proves that no real `s > 0` satisfies `b_i = a_i^s` for all `i`, where
/// each entry `(x, w)` stands for `x^(1/w)`. Works by comparing sides of 1
/// and by disjoint enclosures of `ln b_i / ln a_i`; returns the two offending
/// positions (equal when a single one suffices).
pub(crate) fn power_ratio_obstruction(
    a: &[(&AlgebraicReal, u32)],
    b: &[(&AlgebraicReal, u32)],
) -> Option<(usize, usize)> {
    let one = AlgebraicReal::one();
    let side = |x: &AlgebraicReal| x.cmp(&one);
    for i in 0..a.len() {
        if side(a[i].0) != side(b[i].0) {
            return Some((i, i));
        }
    }
    let scaled = |(x, w): (&AlgebraicReal, u32)| {
        let (lo, hi) = log_bounds(x);
        (lo / f64::from(w), hi / f64::from(w))
    };
    let ratio = |i: usize| -> Option<(f64, f64)> {
        if side(a[i].0) == Ordering::Equal {
            return None;
        }
        let (a0, a1) = scaled(a[i]);
        let (b0, b1) = scaled(b[i]);
        // Same sign; ratio b/a enclosed by the extreme quotients.
        let qs = [b0 / a0, b0 / a1, b1 / a0, b1 / a1];
        let lo = qs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = qs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo.is_finite() && hi.is_finite()).then_some((lo * (1.0 - 1e-9), hi * (1.0 + 1e-9)))
    };
    let rs: Vec<Option<(f64, f64)>> = (0..a.len()).map(ratio).collect();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if let (Some(x), Some(y)) = (rs[i], rs[j]) {
                if x.1 < y.0 || y.1 < x.0 {
                    return Some((i, j));
                }
            }
        }
    }
    None
}

/// Enclosure of `ln x` for `x > 0`, excluding zero when `x != 1`.
pub(crate) fn log_bounds(x: &AlgebraicReal) -> (f64, f64) {
    let mut y = x.clone();
    let target = Rational::new(1.into(), (1u64 << 40).into());
    y.refine_to_width(&(target * y.interval().1.abs().max(Rational::one())));
    let (lo, hi) = y.f64_bounds();
    let (l0, l1) = (libm::log(lo.max(f64::MIN_POSITIVE)), libm::log(hi));
    let pad = 1e-12 * (1.0 + l0.abs().max(l1.abs()));
    (l0 - pad, l1 + pad)
}
