//! Exact numbers: reduced rationals, dyadic rationals, and the two floor
//! operators used throughout the crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An arbitrary-precision rational number in lowest terms.
///
/// The denominator is always positive and zero is stored as `0/1`, so
/// structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den` in lowest terms.
    ///
    /// Panics if `den` is zero; use [`Rational::checked_new`] for untrusted input.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::checked_new(num, den).expect("zero denominator")
    }

    pub fn checked_new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Option<Self> {
        let den = den.into();
        if den.is_zero() {
            return None;
        }
        Some(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// `1/x`, or `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// The integer part `[x]`: the unique `n` with `n <= x < n + 1`.
    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    /// `x - [x]`, always in `[0, 1)`.
    pub fn fract(&self) -> Self {
        let (_, r) = self.0.numer().div_mod_floor(self.0.denom());
        Rational::new(r, self.0.denom().clone())
    }

    /// The exponent `k` of `[x]_2 = 2^k`, i.e. the unique `k` with
    /// `2^k <= x < 2^(k+1)`, found by integer comparison.
    pub fn pow2_floor_exp(&self) -> Result<u64> {
        if *self < Rational::one() {
            return Err(Error::domain("pow2_floor_exp", self, "[1,inf)"));
        }
        let p = self.numer();
        let q = self.denom();
        // 2^(bits(p)-bits(q)-1) < p/q < 2^(bits(p)-bits(q)+1)
        let k = p.bits() - q.bits();
        if (q << k) <= *p {
            Ok(k)
        } else {
            Ok(k - 1)
        }
    }

    /// Whether `0 <= x < 1`.
    pub fn in_unit_interval(&self) -> bool {
        !self.is_negative() && self.numer() < self.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let parse_int = |part: &str| {
            part.trim()
                .parse::<BigInt>()
                .map_err(|e| Error::parse("rational", s, e))
        };
        match t.split_once('/') {
            Some((p, q)) => {
                let den = parse_int(q)?;
                Rational::checked_new(parse_int(p)?, den)
                    .ok_or_else(|| Error::parse("rational", s, "zero denominator"))
            }
            None => Ok(Rational::from_integer(parse_int(t)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident) => {
        impl $imp<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($imp::$method(&self.0, &rhs.0))
            }
        }
        impl $imp<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($imp::$method(self.0, rhs.0))
            }
        }
        impl $imp<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($imp::$method(self.0, &rhs.0))
            }
        }
        impl $imp<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($imp::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

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

/// The integer part `[x]` of a rational.
pub fn int_floor(x: &Rational) -> BigInt {
    x.floor()
}

/// Exponent of `[x]_2` for `x >= 1`.
pub fn pow2_floor_exp(x: &Rational) -> Result<u64> {
    x.pow2_floor_exp()
}

/// A nonnegative dyadic rational `j/2^k` in normal form: `j` odd, or
/// `j = 0` and `k = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    exp: u64,
}

impl Dyadic {
    pub fn new(num: impl Into<BigUint>, exp: u64) -> Self {
        let num = num.into();
        if num.is_zero() {
            return Dyadic::zero();
        }
        let shift = num.trailing_zeros().unwrap_or(0).min(exp);
        Dyadic {
            num: num >> shift,
            exp: exp - shift,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigUint::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            num: BigUint::one(),
            exp: 0,
        }
    }

    pub fn numer(&self) -> &BigUint {
        &self.num
    }

    pub fn exp(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Whether `0 <= d < 1`.
    pub fn below_one(&self) -> bool {
        self.num < (BigUint::one() << self.exp)
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(
            BigInt::from(self.num.clone()),
            BigInt::from(BigUint::one() << self.exp),
        )
    }

    /// `(a + b) / 2`.
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        let exp = a.exp.max(b.exp);
        let sum = (&a.num << (exp - a.exp)) + (&b.num << (exp - b.exp));
        Dyadic::new(sum, exp + 1)
    }
}

impl TryFrom<&Rational> for Dyadic {
    type Error = Error;

    fn try_from(x: &Rational) -> Result<Self> {
        let den = x.denom().magnitude();
        if x.is_negative() || den.count_ones() != 1 {
            return Err(Error::NotDyadic(x.to_string()));
        }
        let exp = den.trailing_zeros().unwrap_or(0);
        Ok(Dyadic::new(x.numer().magnitude().clone(), exp))
    }
}

impl From<&Dyadic> for Rational {
    fn from(d: &Dyadic) -> Self {
        d.to_rational()
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        (&self.num << (exp - self.exp)).cmp(&(&other.num << (exp - other.exp)))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `j/2^k`, a binary fraction `0.bits`, or any rational `p/q`
/// whose reduced denominator is a power of two.
impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some((j, k)) = t.split_once("/2^") {
            let num = j
                .trim()
                .parse::<BigUint>()
                .map_err(|e| Error::parse("dyadic", s, e))?;
            let exp = k
                .trim()
                .parse::<u64>()
                .map_err(|e| Error::parse("dyadic", s, e))?;
            return Ok(Dyadic::new(num, exp));
        }
        if let Some(bits) = t.strip_prefix("0.") {
            let mut num = BigUint::zero();
            for c in bits.chars() {
                num <<= 1;
                match c {
                    '0' => {}
                    '1' => num += 1u32,
                    _ => return Err(Error::parse("dyadic", s, "binary digits must be 0 or 1")),
                }
            }
            return Ok(Dyadic::new(num, bits.len() as u64));
        }
        let r: Rational = t
            .parse()
            .map_err(|_| Error::parse("dyadic", s, "expected j/2^k, 0.bits or p/q"))?;
        Dyadic::try_from(&r)
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every reduced fraction `p/q` in `[0, 1)` with `1 <= q <= max_den`,
/// ordered by denominator and then numerator. Starts with `0`.
pub fn reduced_fractions(max_den: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    if max_den == 0 {
        return out;
    }
    out.push(Rational::zero());
    for q in 2..=max_den {
        for p in 1..q {
            if p.gcd(&q) == 1 {
                out.push(Rational::new(p, q));
            }
        }
    }
    out
}

/// Every dyadic `j/2^k` in `[0, 1)` with `k <= max_exp`, ordered by level.
pub fn dyadics_up_to(max_exp: u64) -> Vec<Dyadic> {
    let mut out = vec![Dyadic::zero()];
    for k in 1..=max_exp {
        let top = BigUint::one() << k;
        let mut j = BigUint::one();
        while j < top {
            out.push(Dyadic::new(j.clone(), k));
            j += 2u32;
        }
    }
    out
}

pub(crate) fn big_to_u64(n: &BigInt, context: &Rational) -> Result<u64> {
    match n.sign() {
        Sign::Minus => Err(Error::DigitOverflow(context.to_string())),
        _ => n
            .to_u64()
            .ok_or_else(|| Error::DigitOverflow(context.to_string())),
    }
}
