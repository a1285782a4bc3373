use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::roots::{int_sign_at, real_root_intervals, RootInterval};
use super::{format_rational, rational_to_f64, Poly, Rational};
use crate::matrix::Matrix;
use crate::{Error, Result};

/// Default bound on the degree of defining polynomials of eigenvalue data.
pub const DEFAULT_DEGREE_BOUND: usize = 8;

const MAX_REFINE: usize = 20_000;

/// A real algebraic number.
///
/// Either an exact rational, or an irrational root of a squarefree primitive
/// integer polynomial `P` (positive leading coefficient) isolated in an open
/// interval `(lo, hi)` that contains exactly one root of `P` and whose
/// endpoints are not roots. Rational values are always stored exactly, so
/// the two representations never overlap.
#[derive(Clone)]
pub struct AlgebraicReal {
    repr: Repr,
}

#[derive(Clone)]
enum Repr {
    Rational(Rational),
    Isolated { poly: Vec<BigInt>, lo: Rational, hi: Rational, sign_lo: i8 },
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(q) => write!(f, "{}", format_rational(q)),
            Repr::Isolated { poly, lo, hi, .. } => write!(
                f,
                "{:.6}~ (root of {} in ({}, {}))",
                self.to_f64(),
                Poly::from_ints(poly),
                format_rational(lo),
                format_rational(hi)
            ),
        }
    }
}

impl From<Rational> for AlgebraicReal {
    fn from(q: Rational) -> Self {
        AlgebraicReal::from_rational(q)
    }
}

impl AlgebraicReal {
    pub fn from_rational(q: Rational) -> Self {
        AlgebraicReal { repr: Repr::Rational(q) }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    /// The unique root of `min_poly` in the closed interval `[lo, hi]`.
    pub fn new(min_poly: &[BigInt], lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidAlgebraic(format!(
                "empty interval [{}, {}]",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        let p = Poly::from_ints(min_poly);
        if p.is_constant() {
            return Err(Error::InvalidAlgebraic("defining polynomial is constant".into()));
        }
        let inside: Vec<AlgebraicReal> = real_roots(&p)
            .into_iter()
            .filter_map(|mut r| {
                r.split_at(&lo);
                r.split_at(&hi);
                let (a, b) = r.interval();
                (a >= lo && b <= hi).then_some(r)
            })
            .collect();
        match <[AlgebraicReal; 1]>::try_from(inside) {
            Ok([r]) => Ok(r),
            Err(v) => Err(Error::InvalidAlgebraic(format!(
                "{} real roots of {} in [{}, {}]",
                v.len(),
                p,
                format_rational(&lo),
                format_rational(&hi)
            ))),
        }
    }

    fn raw_isolated(poly: Vec<BigInt>, lo: Rational, hi: Rational) -> Self {
        let sign_lo = int_sign_at(&poly, &lo);
        debug_assert!(sign_lo != 0 && sign_lo * int_sign_at(&poly, &hi) < 0);
        AlgebraicReal { repr: Repr::Isolated { poly, lo, hi, sign_lo } }
    }

    /// Canonicalises an isolated root: detects rational values.
    fn normalized(mut self) -> Self {
        let Repr::Isolated { poly, .. } = &self.repr else { return self };
        if poly.len() == 2 {
            return Self::from_rational(Rational::new(-poly[0].clone(), poly[1].clone()));
        }
        let lead = poly.last().cloned().unwrap_or_else(BigInt::one).abs();
        let limit = Rational::new(BigInt::one(), &lead * &lead);
        while {
            let (lo, hi) = self.interval_ref();
            hi - lo >= limit
        } {
            self.refine();
            if self.as_rational().is_some() {
                return self;
            }
        }
        let Repr::Isolated { poly, lo, hi, .. } = &self.repr else { return self };
        let s = simplest_between(lo, hi);
        if lead.is_multiple_of(s.denom()) && int_sign_at(poly, &s) == 0 {
            return Self::from_rational(s);
        }
        self
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.repr {
            Repr::Rational(q) => Some(q),
            Repr::Isolated { .. } => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Defining polynomial: squarefree, primitive, positive leading
    /// coefficient. For a rational `p/q` this is `q x - p`.
    pub fn min_poly(&self) -> Vec<BigInt> {
        match &self.repr {
            Repr::Rational(q) => alloc::vec![-q.numer().clone(), q.denom().clone()],
            Repr::Isolated { poly, .. } => poly.clone(),
        }
    }

    /// Degree of the defining polynomial.
    pub fn degree(&self) -> usize {
        match &self.repr {
            Repr::Rational(_) => 1,
            Repr::Isolated { poly, .. } => poly.len() - 1,
        }
    }

    fn interval_ref(&self) -> (&Rational, &Rational) {
        match &self.repr {
            Repr::Rational(q) => (q, q),
            Repr::Isolated { lo, hi, .. } => (lo, hi),
        }
    }

    /// Current isolating interval (degenerate for rationals).
    pub fn interval(&self) -> (Rational, Rational) {
        let (a, b) = self.interval_ref();
        (a.clone(), b.clone())
    }

    /// Restricts the interval to the side of `x` containing the root, or
    /// becomes exact if `x` is the root.
    fn split_at(&mut self, x: &Rational) {
        let Repr::Isolated { poly, lo, hi, sign_lo } = &mut self.repr else { return };
        if x <= lo || x >= hi {
            return;
        }
        let s = int_sign_at(poly, x);
        if s == 0 {
            self.repr = Repr::Rational(x.clone());
        } else if s == *sign_lo {
            *lo = x.clone();
        } else {
            *hi = x.clone();
        }
    }

    /// One bisection step. The root stays inside the halved interval.
    pub fn refine(&mut self) {
        if let Repr::Isolated { lo, hi, .. } = &self.repr {
            let mid = (lo + hi) / Rational::from_integer(2.into());
            self.split_at(&mid);
        }
    }

    pub fn refine_to_width(&mut self, width: &Rational) {
        for _ in 0..MAX_REFINE {
            let (lo, hi) = self.interval_ref();
            if &(hi - lo) <= width {
                return;
            }
            self.refine();
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mut a = self.clone();
        for _ in 0..200 {
            let (lo, hi) = a.interval_ref();
            let scale = lo.abs().max(hi.abs());
            if (hi - lo) * Rational::from_integer(BigInt::one() << 60u32) <= scale {
                break;
            }
            a.refine();
        }
        let (lo, hi) = a.interval_ref();
        rational_to_f64(&((lo + hi) / Rational::from_integer(2.into())))
    }

    /// Floating enclosure of the value, widened outward by rounding slack.
    pub fn f64_bounds(&self) -> (f64, f64) {
        let (lo, hi) = self.interval_ref();
        let (a, b) = (rational_to_f64(lo), rational_to_f64(hi));
        let slack = |x: f64| x.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE;
        (a - slack(a), b + slack(b))
    }

    pub fn signum(&self) -> i8 {
        match &self.repr {
            Repr::Rational(q) => {
                if q.is_zero() {
                    0
                } else if q.is_negative() {
                    -1
                } else {
                    1
                }
            }
            Repr::Isolated { .. } => {
                let mut a = self.clone();
                a.split_at(&Rational::zero());
                if a.interval_ref().0.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    /// Copy whose interval does not contain or touch zero (irrational only).
    fn away_from_zero(&self) -> Self {
        let mut a = self.clone();
        a.split_at(&Rational::zero());
        while {
            let (lo, hi) = a.interval_ref();
            lo.is_zero() || hi.is_zero()
        } {
            a.refine();
        }
        a
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Rational(q) => Self::from_rational(-q),
            Repr::Isolated { poly, lo, hi, .. } => {
                let mut p: Vec<BigInt> =
                    poly.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
                if p.last().is_some_and(Signed::is_negative) {
                    p.iter_mut().for_each(|c| *c = -c.clone());
                }
                Self::raw_isolated(p, -hi, -lo)
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// `1/self`, or `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        match &self.repr {
            Repr::Rational(q) => (!q.is_zero()).then(|| Self::from_rational(q.recip())),
            Repr::Isolated { .. } => {
                let a = self.away_from_zero();
                let Repr::Isolated { poly, lo, hi, .. } = &a.repr else { unreachable!() };
                let mut p: Vec<BigInt> = poly.iter().rev().cloned().collect();
                if p.last().is_some_and(Signed::is_negative) {
                    p.iter_mut().for_each(|c| *c = -c.clone());
                }
                Some(Self::raw_isolated(p, hi.recip(), lo.recip()))
            }
        }
    }

    /// `q * self`.
    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        match &self.repr {
            Repr::Rational(x) => Self::from_rational(x * q),
            Repr::Isolated { poly, lo, hi, .. } => {
                let p = Poly::from_ints(poly).scale_var(&q.recip()).to_primitive_int();
                let (a, b) = (lo * q, hi * q);
                if q.is_positive() {
                    Self::raw_isolated(p, a, b)
                } else {
                    Self::raw_isolated(p, b, a)
                }
            }
        }
    }

    /// `self^k` computed exactly: the defining polynomial of `x^k` is the
    /// characteristic polynomial of the `k`-th power of the companion matrix.
    pub fn pow(&self, k: u32) -> Self {
        match &self.repr {
            Repr::Rational(q) => Self::from_rational(num_traits::pow(q.clone(), k as usize)),
            Repr::Isolated { .. } if k == 0 => Self::one(),
            Repr::Isolated { .. } if k == 1 => self.clone(),
            Repr::Isolated { poly, .. } => {
                let q = Matrix::companion(&Poly::from_ints(poly)).pow(k).char_poly();
                let mut src = self.away_from_zero();
                let enclose = move || {
                    src.refine();
                    let (lo, hi) = src.interval_ref();
                    let (a, b) = (num_traits::pow(lo.clone(), k as usize), num_traits::pow(hi.clone(), k as usize));
                    if a <= b {
                        (a, b)
                    } else {
                        (b, a)
                    }
                };
                identify(&q, enclose).expect("power of an isolated root is identifiable")
            }
        }
    }

    /// Nonnegative square root; `None` for negative values.
    pub fn sqrt(&self) -> Option<Self> {
        match self.signum() {
            -1 => return None,
            0 => return Some(Self::zero()),
            _ => {}
        }
        if let Some(q) = self.as_rational() {
            let (n, d) = (q.numer(), q.denom());
            let (sn, sd) = (n.sqrt(), d.sqrt());
            if &(&sn * &sn) == n && &(&sd * &sd) == d {
                return Some(Self::from_rational(Rational::new(sn, sd)));
            }
        }
        let q = Poly::from_ints(&self.min_poly()).substitute_square();
        let mut src = self.away_from_zero();
        let mut bits = 16u32;
        let enclose = move || {
            src.refine();
            bits += 2;
            let (lo, hi) = src.interval_ref();
            (sqrt_bounds(lo, bits).0, sqrt_bounds(hi, bits).1)
        };
        Some(identify(&q, enclose).expect("square root of an algebraic number is identifiable"))
    }

    /// Whether the root might lie in `[a, b]`; never false when it does.
    fn meets(&self, a: &Rational, b: &Rational) -> bool {
        match &self.repr {
            Repr::Rational(x) => a <= x && x <= b,
            Repr::Isolated { lo, hi, .. } => lo < b && hi > a,
        }
    }
}

/// Rational bounds `l <= sqrt(x) <= u` with `u - l` about `2^-bits`.
fn sqrt_bounds(x: &Rational, bits: u32) -> (Rational, Rational) {
    let x = x.abs();
    let (n, d) = (x.numer(), x.denom());
    let s = (n * d * (BigInt::one() << (2 * bits))).sqrt();
    let den = d * (BigInt::one() << bits);
    (Rational::new(s.clone(), den.clone()), Rational::new(s + 1u32, den))
}

/// The rational with the smallest denominator in `[lo, hi]`.
fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    // Both strictly inside (fl, fl + 1).
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// All real roots of a nonzero polynomial, ascending.
pub fn real_roots(p: &Poly) -> Vec<AlgebraicReal> {
    let (ints, roots) = real_root_intervals(p);
    roots
        .into_iter()
        .map(|r| match r {
            RootInterval::Exact(x) => AlgebraicReal::from_rational(x),
            RootInterval::Open(a, b) => AlgebraicReal::raw_isolated(ints.clone(), a, b).normalized(),
        })
        .collect()
}

/// The unique real root of `q` consistent with a sequence of shrinking
/// enclosures `[a, b]` of a known value, each produced by `enclose`.
fn identify(q: &Poly, mut enclose: impl FnMut() -> (Rational, Rational)) -> Result<AlgebraicReal> {
    let (ints, roots) = real_root_intervals(q);
    let mut cands: Vec<AlgebraicReal> = roots
        .into_iter()
        .map(|r| match r {
            RootInterval::Exact(x) => AlgebraicReal::from_rational(x),
            RootInterval::Open(a, b) => AlgebraicReal::raw_isolated(ints.clone(), a, b),
        })
        .collect();
    for _ in 0..MAX_REFINE {
        let (a, b) = enclose();
        cands.retain(|c| c.meets(&a, &b));
        match cands.len() {
            0 => break,
            1 => return Ok(cands.pop().map(AlgebraicReal::normalized).unwrap_or_else(AlgebraicReal::zero)),
            _ => cands.iter_mut().for_each(AlgebraicReal::refine),
        }
    }
    Err(Error::InvalidAlgebraic(format!("could not identify a root of {}", q)))
}

/// The unique real root of `q` in the fixed interval `[a, b]`, or `None` if
/// there is none or more than one.
pub(crate) fn identify_in(q: &Poly, a: &Rational, b: &Rational) -> Option<AlgebraicReal> {
    let (ints, roots) = real_root_intervals(q);
    let mut cands: Vec<AlgebraicReal> = roots
        .into_iter()
        .map(|r| match r {
            RootInterval::Exact(x) => AlgebraicReal::from_rational(x),
            RootInterval::Open(lo, hi) => AlgebraicReal::raw_isolated(ints.clone(), lo, hi),
        })
        .collect();
    for _ in 0..400 {
        cands.retain(|c| c.meets(a, b));
        match cands.len() {
            0 => return None,
            1 => return cands.pop().map(AlgebraicReal::normalized),
            _ => {}
        }
        let inside = cands
            .iter()
            .filter(|c| {
                let (lo, hi) = c.interval_ref();
                lo >= a && hi <= b
            })
            .count();
        if inside >= 2 {
            return None;
        }
        cands.iter_mut().for_each(AlgebraicReal::refine);
    }
    None
}

/// Exact ordering of two real algebraic numbers.
pub fn alg_compare(a: &AlgebraicReal, b: &AlgebraicReal) -> Ordering {
    match (&a.repr, &b.repr) {
        (Repr::Rational(x), Repr::Rational(y)) => x.cmp(y),
        (Repr::Isolated { .. }, Repr::Rational(y)) => cmp_isolated_rational(a, y),
        (Repr::Rational(x), Repr::Isolated { .. }) => cmp_isolated_rational(b, x).reverse(),
        (Repr::Isolated { poly: pa, .. }, Repr::Isolated { poly: pb, .. }) => {
            let mut a = a.clone();
            let mut b = b.clone();
            let mut common: Option<Vec<BigInt>> = None;
            loop {
                let (alo, ahi) = a.interval_ref();
                let (blo, bhi) = b.interval_ref();
                if ahi <= blo {
                    return Ordering::Less;
                }
                if bhi <= alo {
                    return Ordering::Greater;
                }
                let g = common.get_or_insert_with(|| Poly::from_ints(pa).gcd(&Poly::from_ints(pb)).to_primitive_int());
                if g.len() > 1 {
                    let olo = alo.max(blo);
                    let ohi = ahi.min(bhi);
                    if int_sign_at(g, olo) * int_sign_at(g, ohi) < 0 {
                        return Ordering::Equal;
                    }
                }
                a.refine();
                b.refine();
            }
        }
    }
}

fn cmp_isolated_rational(a: &AlgebraicReal, x: &Rational) -> Ordering {
    let mut a = a.clone();
    a.split_at(x);
    let (lo, hi) = a.interval_ref();
    if hi <= x {
        Ordering::Less
    } else if lo >= x {
        Ordering::Greater
    } else {
        unreachable!("irrational root equals a rational")
    }
}

/// Orders `l1^(1/w1)` against `l2^(1/w2)` for positive `l1, l2` by comparing
/// `l1^w2` with `l2^w1` exactly.
pub fn alg_pow_compare(l1: &AlgebraicReal, w1: u32, l2: &AlgebraicReal, w2: u32) -> Ordering {
    alg_compare(&l1.pow(w2), &l2.pow(w1))
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        alg_compare(self, other) == Ordering::Equal
    }
}

impl Eq for AlgebraicReal {}

impl PartialOrd for AlgebraicReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicReal {
    fn cmp(&self, other: &Self) -> Ordering {
        alg_compare(self, other)
    }
}
