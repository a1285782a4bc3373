//! Exact scalars: rationals, dense polynomials, real root isolation and
//! real algebraic numbers.

mod algebraic;
pub mod poly;
pub mod roots;

use alloc::string::{String, ToString};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub(crate) use algebraic::identify_in;
pub use algebraic::{alg_compare, alg_pow_compare, real_roots, AlgebraicReal, DEFAULT_DEGREE_BOUND};
pub use poly::Poly;

/// Arbitrary-precision rational in canonical form (positive denominator,
/// coprime parts).
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
    }
}

/// Formats as `"p"` for integers and `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Large parts: shift both down to keep ~60 significant bits.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 60).max(0) as u64;
    let shift_d = (db - 60).max(0) as u64;
    let n = (q.numer().abs() >> shift_n).to_f64().unwrap_or(f64::MAX);
    let d = (q.denom() >> shift_d).to_f64().unwrap_or(f64::MAX);
    let e = shift_n as i32 - shift_d as i32;
    let v = n / d * libm::pow(2.0, e as f64);
    if q.is_negative() {
        -v
    } else {
        v
    }
}

/// Smallest rational lower bound of `x` on the dyadic grid of step `2^-bits`.
pub(crate) fn dyadic_floor(x: f64, bits: u32) -> Rational {
    let scale = libm::pow(2.0, bits as f64);
    let n = libm::floor(x * scale);
    Rational::new(big_from_f64(n), BigInt::one() << bits)
}

pub(crate) fn dyadic_ceil(x: f64, bits: u32) -> Rational {
    let scale = libm::pow(2.0, bits as f64);
    let n = libm::ceil(x * scale);
    Rational::new(big_from_f64(n), BigInt::one() << bits)
}

fn big_from_f64(x: f64) -> BigInt {
    use num_traits::FromPrimitive;
    BigInt::from_f64(x).unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3"), Some(rat(3)));
        assert_eq!(parse_rational(" -6/4 "), Some(ratio(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&ratio(-3, 2)), "-3/2");
        assert_eq!(format_rational(&rat(7)), "7");
    }

    #[test]
    fn to_f64_handles_huge_parts() {
        let big = Rational::new(BigInt::one() << 2000u32, BigInt::one() << 1999u32);
        assert!((rational_to_f64(&big) - 2.0).abs() < 1e-12);
        assert!((rational_to_f64(&ratio(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
    }
}
