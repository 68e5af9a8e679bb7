//! Exact rational scalar.
//!
//! Every probability, LP coefficient and certificate entry in this crate is a
//! [`Rational`]. Values are kept in lowest terms with a positive denominator,
//! so structural equality is numeric equality. The text form is `p/q`, or `p`
//! when the denominator is one.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    DivisionByZero(String),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// `numer / denom`, reduced. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn pow(&self, exp: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    /// Nearest `f64`. Display and floating routines only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Huge numerators/denominators: scale both down to a common exponent.
            let n = self.0.numer();
            let d = self.0.denom();
            let shift = n.bits().max(d.bits()).saturating_sub(1000);
            let n = (n >> shift).to_f64().unwrap_or(0.0);
            let d = (d >> shift).to_f64().unwrap_or(f64::INFINITY);
            n / d
        })
    }

    /// Closest rational `k / denom` to `x`, rounding to nearest.
    pub fn approximate(x: f64, denom: u32) -> Self {
        let k = (x * f64::from(denom)).round() as i64;
        Rational::new(k, i64::from(denom))
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

/// Parse `p/q`, an integer, or a decimal literal (`-0.125`, `1e-3`) exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let t = text.trim();
    let malformed = || ParseRationalError::Malformed(text.to_string());
    if t.is_empty() {
        return Err(malformed());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| malformed())?;
        let q: BigInt = q.trim().parse().map_err(|_| malformed())?;
        if q.is_zero() {
            return Err(ParseRationalError::DivisionByZero(text.to_string()));
        }
        if q.is_negative() {
            return Err(malformed());
        }
        return Ok(Rational(BigRational::new(p, q)));
    }
    parse_decimal(t).ok_or_else(malformed)
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
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
    let all: String = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(Rational(value))
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<usize> for Rational {
    fn from(n: usize) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $assign_trait<Rational> for Rational {
            fn $assign_method(&mut self, rhs: Rational) {
                self.0.$assign_method(rhs.0);
            }
        }
        impl<'a> $assign_trait<&'a Rational> for Rational {
            fn $assign_method(&mut self, rhs: &'a Rational) {
                self.0.$assign_method(&rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl<'a> Product<&'a Rational> for Rational {
    fn product<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0.denom().is_one() && *self.0.numer() == BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer(BigInt::from(*other))))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let literal = RationalLiteral::deserialize(deserializer)?;
        literal.to_rational().map_err(serde::de::Error::custom)
    }
}

/// A rational as it may appear in a structured text file: a string
/// (`"1/2"`, `"0.25"`), an integer, or a float literal.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalLiteral {
    Int(i64),
    Float(f64),
    Text(String),
}

impl RationalLiteral {
    pub fn to_rational(&self) -> Result<Rational, ParseRationalError> {
        match self {
            RationalLiteral::Int(n) => Ok(Rational::from_integer(*n)),
            // Shortest round-trip rendering recovers the decimal as written.
            RationalLiteral::Float(x) if x.is_finite() => parse_rational(&format!("{x}")),
            RationalLiteral::Float(x) => Err(ParseRationalError::Malformed(x.to_string())),
            RationalLiteral::Text(s) => parse_rational(s),
        }
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub(crate) fn bigint_to_usize(n: &BigInt) -> Option<usize> {
    if n.sign() == Sign::Minus {
        return None;
    }
    n.to_usize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("13/16").unwrap(), r(13, 16));
        assert_eq!(parse_rational("0").unwrap(), r(0, 1));
        assert_eq!(parse_rational("0.5").unwrap(), r(1, 2));
        assert_eq!(parse_rational("-3/6").unwrap(), r(-1, 2));
        assert_eq!(parse_rational("1.25e-1").unwrap(), r(1, 8));
        assert_eq!(parse_rational(".75").unwrap(), r(3, 4));
        assert_eq!(parse_rational("  7 ").unwrap(), r(7, 1));
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::DivisionByZero(_))
        ));
        for bad in ["", "abc", "1/", "/2", "1.2.3", "1/-2", "--1", "0x10"] {
            assert!(
                matches!(parse_rational(bad), Err(ParseRationalError::Malformed(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn floats() {
        assert_eq!(r(1, 2).to_f64(), 0.5);
        assert_eq!(r(13, 16).to_f64(), 0.8125);
        assert_eq!(r(7, 8).to_f64(), 0.875);
    }

    #[test]
    fn canonical_rendering() {
        assert_eq!(r(2, 4).to_string(), "1/2");
        assert_eq!(r(4, 2).to_string(), "2");
        assert_eq!(r(0, 5).to_string(), "0");
        assert_eq!(r(3, -9).to_string(), "-1/3");
    }

    #[test]
    fn float_literals_are_exact_decimals() {
        let lit = RationalLiteral::Float(0.1);
        assert_eq!(lit.to_rational().unwrap(), r(1, 10));
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| Rational::new(n, d))
    }

    proptest! {
        #[test]
        fn field_laws(a in small(), b in small(), c in small()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            if !b.is_zero() {
                prop_assert_eq!((&a / &b) * &b, a.clone());
            }
        }

        #[test]
        fn render_parse_round_trip(a in small()) {
            prop_assert_eq!(parse_rational(&a.to_string()).unwrap(), a);
        }

        #[test]
        fn canonical_form(a in small(), b in small()) {
            let s = &a * &b + &a;
            prop_assert!(s.denom().is_positive());
            prop_assert!(s.numer().gcd(s.denom()).is_one() || s.is_zero());
        }
    }
}
