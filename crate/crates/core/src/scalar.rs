//! Scalar field abstraction.
//!
//! Everything in the crate is generic over [`Scalar`]. Exact rationals
//! ([`Q`]) are the default instantiation and compare with zero tolerance;
//! the float impls exist for geometry whose coordinates are irrational
//! (the unit-ball construction) and compare within an absolute tolerance.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {text:?} as a number")]
pub struct ParseScalarError {
    pub text: String,
}

/// Ordered field used for heights, measures and weights.
pub trait Scalar: Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    /// Absolute tolerance used by [`Scalar::near`] and friends; zero for exact types.
    fn tolerance() -> Self;

    fn from_i64(v: i64) -> Self;

    /// `n / d`; panics if `d == 0`.
    fn from_ratio(n: i64, d: i64) -> Self;

    fn floor(&self) -> Self;

    /// Square root if representable (always for floats, perfect squares for rationals).
    fn sqrt(&self) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Canonical text: `p/q` (or `p` for integers) for rationals, shortest
    /// round-trip decimal for floats.
    fn to_text(&self) -> String;

    fn parse_text(s: &str) -> Result<Self, ParseScalarError>;

    fn is_integral(&self) -> bool {
        self.near(&self.floor()) || self.near(&(self.floor() + Self::one()))
    }

    fn near(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).abs() <= Self::tolerance()
    }

    fn near_zero(&self) -> bool {
        self.abs() <= Self::tolerance()
    }

    /// `self <= other` up to tolerance.
    fn le_tol(&self, other: &Self) -> bool {
        *self <= other.clone() + Self::tolerance()
    }

    /// Strictly positive beyond tolerance.
    fn is_pos(&self) -> bool {
        *self > Self::tolerance()
    }

    /// Strictly negative beyond tolerance.
    fn is_neg(&self) -> bool {
        *self < -Self::tolerance()
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn tolerance() -> Self {
        Q::zero()
    }

    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    fn floor(&self) -> Self {
        BigRational::floor(self)
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Q::new(n, d))
        } else {
            None
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_text(&self) -> String {
        self.to_string()
    }

    fn parse_text(s: &str) -> Result<Self, ParseScalarError> {
        parse_rational(s).ok_or_else(|| ParseScalarError { text: s.to_string() })
    }

    fn is_integral(&self) -> bool {
        BigRational::is_integer(self)
    }
}

/// Parses `p/q`, integers and plain decimals (`-0.35`, `1e-3`) exactly.
fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Q::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = Q::from_integer(numer);
    if scale >= 0 {
        value *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -value } else { value })
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn tolerance() -> Self {
                $tol
            }

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn from_ratio(n: i64, d: i64) -> Self {
                assert!(d != 0, "zero denominator");
                n as $t / d as $t
            }

            fn floor(&self) -> Self {
                <$t>::floor(*self)
            }

            fn sqrt(&self) -> Option<Self> {
                (*self >= 0.0).then(|| <$t>::sqrt(*self))
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn to_text(&self) -> String {
                format!("{}", self)
            }

            fn parse_text(s: &str) -> Result<Self, ParseScalarError> {
                let err = || ParseScalarError { text: s.to_string() };
                if s.contains('/') {
                    let q = parse_rational(s).ok_or_else(err)?;
                    return ToPrimitive::to_f64(&q).map(|v| v as $t).ok_or_else(err);
                }
                s.trim().parse::<$t>().map_err(|_| err())
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-5);

/// Shorthand for an exact rational from text; panics on malformed input.
/// Intended for literals in tests and fixtures.
pub fn q(s: &str) -> Q {
    Q::parse_text(s).unwrap_or_else(|e| panic!("{e}"))
}

/// Exact rational from an `i64`.
pub fn qi(v: i64) -> Q {
    Q::from_i64(v)
}

/// Converts an exact value into another scalar type.
pub fn convert<T: Scalar>(v: &Q) -> T {
    if T::EXACT {
        T::parse_text(&v.to_text()).expect("rational text round-trips")
    } else {
        let f = Scalar::to_f64(v);
        T::parse_text(&format!("{f:e}")).expect("float text round-trips")
    }
}

/// Nearest rational with denominator `den` (used to snap float input).
pub fn snap(v: f64, den: i64) -> Q {
    let n = (v * den as f64).round() as i64;
    Q::from_ratio(n, den)
}

/// `ceil` via floor.
pub fn ceil<T: Scalar>(v: &T) -> T {
    let f = v.floor();
    if f == *v {
        f
    } else {
        f + T::one()
    }
}

/// Floor of an exact rational as `BigInt`.
pub fn floor_int(v: &Q) -> BigInt {
    v.numer().div_floor(v.denom())
}

/// `i64` conversion helper for small rationals.
pub fn to_i64(v: &Q) -> Option<i64> {
    if BigRational::is_integer(v) {
        v.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_decimals_and_exponents() {
        assert_eq!(q("3/10"), Q::from_ratio(3, 10));
        assert_eq!(q("0.3"), Q::from_ratio(3, 10));
        assert_eq!(q("-1.25"), Q::from_ratio(-5, 4));
        assert_eq!(q("2"), Q::from_i64(2));
        assert_eq!(q("1e-2"), Q::from_ratio(1, 100));
        assert_eq!(q(".5"), Q::from_ratio(1, 2));
        assert!(Q::parse_text("1/0").is_err());
        assert!(Q::parse_text("abc").is_err());
        assert!(Q::parse_text("").is_err());
    }

    #[test]
    fn text_round_trip() {
        for s in ["3/10", "-7/3", "0", "5"] {
            assert_eq!(q(s).to_text(), s);
        }
        assert_eq!(f64::parse_text("1/4").unwrap(), 0.25);
    }

    #[test]
    fn exact_sqrt_only_for_squares() {
        assert_eq!(Scalar::sqrt(&q("9/4")), Some(q("3/2")));
        assert_eq!(Scalar::sqrt(&q("2")), None);
        assert!((Scalar::sqrt(&2.0f64).unwrap() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn floor_and_integrality() {
        assert_eq!(Scalar::floor(&q("-1/2")), q("-1"));
        assert_eq!(Scalar::floor(&q("7/2")), q("3"));
        assert!(q("4").is_integral());
        assert!(!q("1/3").is_integral());
        assert!((1.0f64 + 1e-12).is_integral());
        assert_eq!(ceil(&q("1/3")), q("1"));
        assert_eq!(ceil(&q("2")), q("2"));
    }

    #[test]
    fn conversion_between_fields() {
        let v: f64 = convert(&q("1/8"));
        assert_eq!(v, 0.125);
        let w: Q = convert(&q("5/7"));
        assert_eq!(w, q("5/7"));
    }
}
