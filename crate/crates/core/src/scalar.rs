//! Scalar backends: exact rationals and double precision.

use std::fmt::Debug;

use num::bigint::BigInt;
use num::{BigRational, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational used by the exact backend.
pub type Rational = BigRational;

/// Field operations plus the conversions the engine needs.
pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Signed + Send + Sync + 'static
{
    /// `true` for the rational backend.
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;
    fn from_f64_lossy(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn to_rational(&self) -> Option<Rational>;
    /// Square root when it exists in the backend (perfect squares only for rationals).
    fn sqrt_exact(&self) -> Option<Self>;
    /// Lossless text form: `p/q` for rationals, shortest round-trip decimal for floats.
    fn render(&self) -> String;

    fn from_int(k: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(k)))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Zero test: exact for rationals, `|x| <= tol` for floats.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_f64().abs() <= tol
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_f64_lossy(x: f64) -> Self {
        Rational::from_float(x).unwrap_or_else(Rational::zero)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        let r = Rational::new(n, d);
        (&r * &r == *self).then_some(r)
    }

    fn render(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_f64_lossy(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<Rational> {
        None
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn render(&self) -> String {
        format!("{self:?}")
    }

    fn from_int(k: i64) -> Self {
        f64::from_i64(k).unwrap_or(f64::NAN)
    }
}

/// Parses `p/q`, an integer, or a finite decimal (`0.25`, `-1.5e-3`) into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
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
    let all: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        Rational::from_integer(all * num::pow(ten, scale as usize))
    } else {
        Rational::new(all, num::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/3"), Some(Rational::new(1.into(), 3.into())));
        assert_eq!(parse_rational("0.25"), Some(Rational::new(1.into(), 4.into())));
        assert_eq!(parse_rational("-1.5e-1"), Some(Rational::new((-3).into(), 20.into())));
        assert_eq!(parse_rational("7"), Some(Rational::from_integer(7.into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("sqrt(2)"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn exact_square_roots() {
        let r = Rational::new(9.into(), 4.into());
        assert_eq!(r.sqrt_exact(), Some(Rational::new(3.into(), 2.into())));
        assert_eq!(Rational::from_integer(2.into()).sqrt_exact(), None);
        assert_eq!(4.0f64.sqrt_exact(), Some(2.0));
    }

    #[test]
    fn render_is_lossless() {
        assert_eq!(Rational::new(2.into(), 6.into()).render(), "1/3");
        assert_eq!(Rational::from_integer((-5).into()).render(), "-5");
        assert_eq!(0.1f64.render(), "0.1");
    }
}
