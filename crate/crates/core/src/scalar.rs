//! The ordered-field abstraction every algorithm in this crate is written against.
//!
//! Everything here needs exact zero tests and exact comparisons, so the trait is
//! only implemented for `num_rational::Ratio<T>` over a signed integer type.
//! `Ratio<BigInt>` is the default everywhere; fixed-width ratios are available
//! for callers who know their data stays small (they panic on overflow in debug
//! builds and silently wrap in release builds, as the underlying integers do).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// An exact ordered field with access to numerator and denominator.
pub trait Scalar:
    Clone + Ord + Hash + Debug + Display + Signed + Send + Sync + 'static
{
    type Int: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromStr
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync;

    /// Builds `n / d` in lowest terms. Panics if `d` is zero.
    fn from_ratio(n: Self::Int, d: Self::Int) -> Self;
    fn numer(&self) -> &Self::Int;
    /// Always positive.
    fn denom(&self) -> &Self::Int;
    fn from_int(i: Self::Int) -> Self;

    fn int(i: i64) -> Self {
        Self::from_int(Self::Int::from_i64(i).expect("i64 fits in the integer type"))
    }

    fn floor(&self) -> Self;
    fn ceil(&self) -> Self;

    fn is_integral(&self) -> bool {
        self.denom().is_one()
    }

    /// Integral value as `i64`, if it is integral and fits.
    fn to_i64(&self) -> Option<i64> {
        if self.is_integral() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// Lossy conversion, only for reporting.
    fn to_f64(&self) -> f64 {
        let n = self.numer().to_f64().unwrap_or(f64::NAN);
        let d = self.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    }

    /// Distance to the nearest integer.
    fn fractionality(&self) -> Self {
        let down = self.clone() - self.floor();
        let up = self.ceil() - self.clone();
        down.min(up)
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromStr
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static,
{
    type Int = T;

    fn from_ratio(n: T, d: T) -> Self {
        Ratio::new(n, d)
    }

    fn numer(&self) -> &T {
        Ratio::numer(self)
    }

    fn denom(&self) -> &T {
        Ratio::denom(self)
    }

    fn from_int(i: T) -> Self {
        Ratio::from_integer(i)
    }

    fn floor(&self) -> Self {
        Ratio::floor(self)
    }

    fn ceil(&self) -> Self {
        Ratio::ceil(self)
    }
}

/// Parses `"p/q"` or `"p"`. Rejects zero or negative denominators and fractions
/// that are not in lowest terms, so every accepted string has exactly one value.
pub fn parse_exact<F: Scalar>(s: &str) -> Result<F, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: F::Int = n
        .parse()
        .map_err(|_| format!("malformed rational numerator in {s:?}"))?;
    let d: F::Int = match d {
        Some(d) => d
            .parse()
            .map_err(|_| format!("malformed rational denominator in {s:?}"))?,
        None => F::Int::one(),
    };
    if d <= F::Int::zero() {
        return Err(format!("rational {s:?} must have a positive denominator"));
    }
    if !n.gcd(&d).is_one() {
        return Err(format!("rational {s:?} is not in lowest terms"));
    }
    Ok(F::from_ratio(n, d))
}

/// Formats as `"p/q"`, always with an explicit denominator.
pub fn format_exact<F: Scalar>(x: &F) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_rational::Ratio;

    #[test]
    fn parse_round_trip() {
        let x: Rational = parse_exact("-3/4").unwrap();
        assert_eq!(format_exact(&x), "-3/4");
        let y: Rational = parse_exact("7").unwrap();
        assert_eq!(format_exact(&y), "7/1");
        assert_eq!(parse_exact::<Rational>(&format_exact(&y)).unwrap(), y);
    }

    #[test]
    fn parse_rejects_noncanonical() {
        assert!(parse_exact::<Rational>("2/4").is_err());
        assert!(parse_exact::<Rational>("1/0").is_err());
        assert!(parse_exact::<Rational>("1/-2").is_err());
        assert!(parse_exact::<Rational>("0.5").is_err());
        assert!(parse_exact::<Rational>("x").is_err());
    }

    #[test]
    fn floor_ceil_fractionality() {
        let x = Rational::new(7.into(), 3.into());
        assert_eq!(Scalar::floor(&x), Rational::int(2));
        assert_eq!(Scalar::ceil(&x), Rational::int(3));
        assert_eq!(x.fractionality(), Rational::new(1.into(), 3.into()));
        let y: Ratio<i64> = Ratio::new(-1, 2);
        assert_eq!(Scalar::floor(&y), Ratio::from_integer(-1));
        assert_eq!(y.fractionality(), Ratio::new(1, 2));
        assert!(!y.is_integral());
    }
}
