//! Real root isolation (Descartes rule of signs with bisection) for
//! polynomials with integer coefficients, plus an Aberth iteration with
//! certified inclusion disks for complex roots.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::{Poly, Rational};

/// An isolated real root: either known exactly, or the unique root in an open
/// interval whose endpoints are not roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootInterval {
    Exact(Rational),
    Open(Rational, Rational),
}

/// Sign of an integer polynomial at a rational point, without forming the
/// rational value.
pub fn int_sign_at(p: &[BigInt], x: &Rational) -> i8 {
    let (n, d) = (x.numer(), x.denom());
    // Homogeneous Horner: sum p_i n^i d^(deg-i).
    let deg = p.len().saturating_sub(1);
    let mut acc = BigInt::zero();
    let mut dp = BigInt::one();
    let mut terms: Vec<BigInt> = Vec::with_capacity(p.len());
    for _ in 0..=deg {
        terms.push(dp.clone());
        dp *= d;
    }
    for (i, c) in p.iter().enumerate().rev() {
        acc = acc * n + c * &terms[deg - i];
    }
    sign_of(&acc)
}

fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

fn sign_variations(c: &[BigInt]) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in c.iter().map(sign_of).filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn taylor_shift_one(c: &mut [BigInt]) {
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = c[j + 1].clone();
            c[j] += t;
        }
    }
}

/// Upper bound on the number of roots of `q` in `(0, 1)`, exact when 0 or 1.
fn descartes_01(q: &[BigInt]) -> usize {
    let mut r: Vec<BigInt> = q.iter().rev().cloned().collect();
    taylor_shift_one(&mut r);
    sign_variations(&r)
}

/// Roots of `q` in `(0,1)` as intervals `(c/2^j, (c+1)/2^j)` or exact dyadics.
fn isolate_unit(q: Vec<BigInt>) -> Vec<(BigInt, u32, bool)> {
    // (c, j, exact): exact means the root is c / 2^j.
    let mut out = Vec::new();
    let mut stack = vec![(BigInt::zero(), 0u32, q)];
    while let Some((c, j, q)) = stack.pop() {
        match descartes_01(&q) {
            0 => continue,
            1 => {
                out.push((c, j, false));
                continue;
            }
            _ => {}
        }
        let d = q.len() - 1;
        let left: Vec<BigInt> = q.iter().enumerate().map(|(i, a)| a << (d - i)).collect();
        let mut right = left.clone();
        taylor_shift_one(&mut right);
        let c2 = &c << 1u32;
        if right[0].is_zero() {
            out.push((&c2 + 1, j + 1, true));
            right.remove(0);
        }
        stack.push((c2.clone() + 1, j + 1, right));
        stack.push((c2, j + 1, left));
    }
    out
}

/// Isolates the positive roots of an integer polynomial with `p(0) != 0`.
fn positive_roots(p: &[BigInt]) -> Vec<RootInterval> {
    let lead = p.last().expect("nonzero polynomial").abs();
    // Cauchy bound 1 + max |a_i / a_d|, rounded up to a power of two.
    let mut m = BigInt::zero();
    for a in &p[..p.len() - 1] {
        let q = (a.abs() + &lead - 1u32) / &lead;
        if q > m {
            m = q;
        }
    }
    let bound = m + 1u32;
    let k = bound.bits() as u32;
    let q: Vec<BigInt> = p.iter().enumerate().map(|(i, a)| a << (k as usize * i)).collect();
    let scale = Rational::from_integer(BigInt::one() << k);
    let mut out: Vec<RootInterval> = isolate_unit(q)
        .into_iter()
        .map(|(c, j, exact)| {
            let den = BigInt::one() << j;
            let lo = Rational::new(c.clone(), den.clone()) * &scale;
            if exact {
                RootInterval::Exact(lo)
            } else {
                let hi = Rational::new(c + 1u32, den) * &scale;
                RootInterval::Open(lo, hi)
            }
        })
        .collect();
    out.sort_by(|a, b| left_end(a).cmp(left_end(b)));
    out
}

fn left_end(r: &RootInterval) -> &Rational {
    match r {
        RootInterval::Exact(x) => x,
        RootInterval::Open(lo, _) => lo,
    }
}

/// Isolates all real roots of a nonzero polynomial, sorted ascending. Returns
/// the squarefree primitive integer polynomial used for the isolation along
/// with the roots.
pub fn real_root_intervals(p: &Poly) -> (Vec<BigInt>, Vec<RootInterval>) {
    let sf = p.squarefree_part();
    let ints = sf.to_primitive_int();
    if ints.len() <= 1 {
        return (ints, Vec::new());
    }
    let mut work = ints.clone();
    let mut zero_root = false;
    if work[0].is_zero() {
        zero_root = true;
        work.remove(0);
    }
    let mut out = Vec::new();
    if work.len() > 1 {
        let mirrored: Vec<BigInt> =
            work.iter().enumerate().map(|(i, a)| if i % 2 == 1 { -a } else { a.clone() }).collect();
        for r in positive_roots(&mirrored).into_iter().rev() {
            out.push(match r {
                RootInterval::Exact(x) => RootInterval::Exact(-x),
                RootInterval::Open(lo, hi) => RootInterval::Open(-hi, -lo),
            });
        }
    }
    if zero_root {
        out.push(RootInterval::Exact(Rational::zero()));
    }
    if work.len() > 1 {
        out.extend(positive_roots(&work));
    }
    let out = out.into_iter().map(|r| detach_endpoints(&ints, r)).collect();
    (ints, out)
}

/// An isolating interval produced next to an exact dyadic root can have that
/// root as an endpoint. Shrinks such intervals so both endpoints are
/// non-roots, bisecting with the endpoint roots divided out.
fn detach_endpoints(p: &[BigInt], r: RootInterval) -> RootInterval {
    let RootInterval::Open(mut lo, mut hi) = r else { return r };
    if int_sign_at(p, &lo) != 0 && int_sign_at(p, &hi) != 0 {
        return RootInterval::Open(lo, hi);
    }
    let mut d = Poly::from_ints(p);
    for e in [&lo, &hi] {
        if int_sign_at(p, e) == 0 {
            d = d.div_exact(&Poly::linear_root(e));
        }
    }
    let (lo0, hi0) = (lo.clone(), hi.clone());
    let two = Rational::from_integer(2.into());
    loop {
        let mid = (&lo + &hi) / &two;
        let sm = d.eval(&mid);
        if sm.is_zero() {
            return RootInterval::Exact(mid);
        }
        if d.eval(&lo).is_positive() == sm.is_positive() {
            lo = mid;
        } else {
            hi = mid;
        }
        if lo != lo0 && hi != hi0 {
            return RootInterval::Open(lo, hi);
        }
    }
}

pub(crate) fn to_f64_coeffs(p: &Poly) -> Vec<f64> {
    p.coeffs().iter().map(super::rational_to_f64).collect()
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dv = dv * z + v;
        v = v * z + a;
    }
    (v, dv)
}

/// Numeric complex roots with inclusion radii. Every returned disk contains at
/// least one root; when the disks are pairwise disjoint each contains exactly
/// one. Returns `None` if the disks overlap (clustered or multiple roots).
pub fn certified_complex_roots(p: &Poly) -> Option<Vec<(Complex64, f64)>> {
    let c = to_f64_coeffs(p);
    let d = c.len().checked_sub(1)?;
    if d == 0 || c.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let roots = aberth(&c);
    let abs: Vec<f64> = c.iter().map(|a| a.abs()).collect();
    let mut out = Vec::with_capacity(d);
    for &z in &roots {
        let (v, dv) = horner(&c, z);
        let mut mag = 0.0;
        for &a in abs.iter().rev() {
            mag = mag * z.norm() + a;
        }
        let err = 4.0 * (d as f64 + 1.0) * f64::EPSILON * mag;
        let dvn = dv.norm();
        if dvn == 0.0 {
            return None;
        }
        let r = 2.0 * d as f64 * (v.norm() + err) / dvn + 4.0 * f64::EPSILON * z.norm();
        out.push((z, r));
    }
    for i in 0..d {
        for j in i + 1..d {
            if (out[i].0 - out[j].0).norm() <= out[i].1 + out[j].1 {
                return None;
            }
        }
    }
    Some(out)
}

/// Aberth–Ehrlich simultaneous iteration on f64 coefficients (low first).
pub fn aberth(c: &[f64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lead = c[d];
    let radius = 1.0 + c[..d].iter().map(|a| (a / lead).abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = 2.0 * core::f64::consts::PI * (k as f64 + 0.25) / d as f64 + 0.4;
            Complex64::from_polar(radius * 0.7, theta)
        })
        .collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (v, dv) = horner(c, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    s += (z[i] - zj).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-17 {
            break;
        }
    }
    // A couple of Newton polishing steps.
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let (v, dv) = horner(c, *zi);
            if dv.norm() > 0.0 {
                let step = v / dv;
                if step.re.is_finite() && step.im.is_finite() {
                    *zi -= step;
                }
            }
        }
    }
    z
}
