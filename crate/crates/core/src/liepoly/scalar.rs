//! Exact coefficients: rationals, or residues modulo a prime `p > 3`.
//!
//! A [`Scalar::Q`] value mixed with a [`Scalar::Fp`] value is promoted to the
//! prime field. Internal constants (`±1`, `2`, `1/2`) are written as
//! rationals and so work unchanged in either mode.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 || p == 3 {
            return Err(Error::UnsupportedCharacteristic(p));
        }
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    /// `"Q"` or `"Fp:<p>"`.
    pub fn parse(text: &str) -> Result<Field> {
        let text = text.trim();
        if text == "Q" {
            return Ok(Field::Rational);
        }
        let p = text
            .strip_prefix("Fp:")
            .ok_or_else(|| Error::Validation(format!("unknown field {text:?}")))?
            .parse::<u64>()
            .map_err(|e| Error::Validation(format!("bad prime in {text:?}: {e}")))?;
        Field::prime(p)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    /// Brings a rational into this field.
    pub fn element(self, value: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Q(value.clone())),
            Field::Prime(p) => residue(value, p)
                .map(|v| Scalar::Fp { value: v, modulus: p })
                .ok_or_else(|| {
                    Error::Validation(format!("{value} has a denominator divisible by {p}"))
                }),
        }
    }

    pub fn one(self) -> Scalar {
        self.coerce(&Scalar::one())
    }

    /// Maps a scalar into this field. Panics on a rational whose denominator
    /// vanishes mod `p`; internal constants never do for `p > 3`.
    pub fn coerce(self, s: &Scalar) -> Scalar {
        match (self, s) {
            (Field::Rational, _) | (_, Scalar::Fp { .. }) => s.clone(),
            (Field::Prime(p), Scalar::Q(_)) => Scalar::Fp {
                value: s.residue_mod(p),
                modulus: p,
            },
        }
    }

    pub fn parse_element(self, text: &str) -> Result<Scalar> {
        let q = parse_rational(text)?;
        self.element(&q)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// Parses `"3"`, `"-1/2"`, `"+4"` and finite decimals such as `"-0.25"`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid coefficient {text:?}"));
    let int = |s: &str| -> Result<BigInt> {
        let s = s.strip_prefix('+').unwrap_or(s);
        if s.is_empty() || s.starts_with(['+', ' ']) {
            return Err(bad());
        }
        BigInt::from_str(s).map_err(|_| bad())
    };
    let (num, den) = match (text.split_once('/'), text.split_once('.')) {
        (Some((n, d)), None) => (int(n.trim())?, int(d.trim())?),
        (None, Some((whole, frac))) => {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let den = BigInt::from(10u32).pow(frac.len() as u32);
            let digits = int(&format!("{whole}{frac}"))?;
            (digits, den)
        }
        (None, None) => (int(text)?, BigInt::from(1)),
        _ => return Err(bad()),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

fn residue(value: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = value.numer().mod_floor(&pb).to_u64()?;
    let den = value.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    Some(mul_mod(num, inv_mod(den, p), p))
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Q(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Q(BigRational::one())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::Q(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::Q(BigRational::new(n.into(), d.into()))
    }

    pub fn half() -> Scalar {
        Scalar::ratio(1, 2)
    }

    /// `(-1)^{k}` for `odd = k odd`.
    pub fn sign(odd: bool) -> Scalar {
        Scalar::from_int(if odd { -1 } else { 1 })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(r) => Some(r),
            Scalar::Fp { .. } => None,
        }
    }

    fn modulus(&self) -> Option<u64> {
        match self {
            Scalar::Q(_) => None,
            Scalar::Fp { modulus, .. } => Some(*modulus),
        }
    }

    fn residue_mod(&self, p: u64) -> u64 {
        match self {
            Scalar::Q(r) => residue(r, p)
                .unwrap_or_else(|| panic!("rational {r} cannot be mapped into F_{p}")),
            Scalar::Fp { value, modulus } => {
                assert_eq!(*modulus, p, "mixing prime fields F_{modulus} and F_{p}");
                *value
            }
        }
    }

    fn combine(
        &self,
        rhs: &Scalar,
        q: impl FnOnce(&BigRational, &BigRational) -> BigRational,
        m: impl FnOnce(u64, u64, u64) -> u64,
    ) -> Scalar {
        match self.modulus().or(rhs.modulus()) {
            None => match (self, rhs) {
                (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(q(a, b)),
                _ => unreachable!(),
            },
            Some(p) => Scalar::Fp {
                value: m(self.residue_mod(p), rhs.residue_mod(p), p),
                modulus: p,
            },
        }
    }

    /// Negative rationals print with a leading `-`; residues are nonnegative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match self.modulus().or(other.modulus()) {
            None => self.as_rational() == other.as_rational(),
            Some(p) => self.residue_mod(p) == other.residue_mod(p),
        }
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.combine(rhs, |a, b| a + b, |a, b, p| ((a as u128 + b as u128) % p as u128) as u64)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.combine(rhs, |a, b| a - b, |a, b, p| ((a as u128 + p as u128 - b as u128) % p as u128) as u64)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.combine(rhs, |a, b| a * b, mul_mod)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Q(-r),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_canonical_form() {
        let q = Field::Rational.parse_element("-2/4").unwrap();
        assert_eq!(q.to_string(), "-1/2");
        assert_eq!(Field::Rational.parse_element("3").unwrap(), Scalar::from_int(3));
        assert_eq!(Field::Rational.parse_element("-0.25").unwrap(), Scalar::ratio(-1, 4));
        assert!(Field::Rational.parse_element("1.").is_err());
        assert!(Field::Rational.parse_element("1.5/2").is_err());
        assert!(Field::Rational.parse_element("1/0").is_err());
    }

    #[test]
    fn prime_field() {
        let f = Field::parse("Fp:7").unwrap();
        let half = f.parse_element("1/2").unwrap();
        assert_eq!(half.to_string(), "4");
        assert_eq!(&half * &Scalar::from_int(2), Scalar::one());
        assert_eq!(-&Scalar::Fp { value: 0, modulus: 7 }, Scalar::zero());
        assert_eq!(f.parse_element("-1").unwrap().to_string(), "6");
    }

    #[test]
    fn characteristic_two_three_rejected() {
        assert_eq!(Field::parse("Fp:3"), Err(Error::UnsupportedCharacteristic(3)));
        assert_eq!(Field::parse("Fp:2"), Err(Error::UnsupportedCharacteristic(2)));
        assert_eq!(Field::parse("Fp:9"), Err(Error::NotPrime(9)));
    }

    #[test]
    fn mixed_promotion() {
        let a = Scalar::Fp { value: 3, modulus: 5 };
        assert_eq!(&a + &Scalar::half(), Scalar::Fp { value: 1, modulus: 5 });
        assert_eq!(a.inv().unwrap(), Scalar::Fp { value: 2, modulus: 5 });
    }
}
