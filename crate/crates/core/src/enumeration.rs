//! Counting bijections given by orbits of 0: under the Newman map onto the
//! nonnegative rationals, under its first return map onto `[0, 1)`, and
//! under the interval odometer onto the dyadics in `[0, 1)`.
//!
//! Index 0 is the seed 0 itself, so `enum_unit(1) = 1/2` is the first
//! rational of `(0, 1)` reached.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{Dyadic, Rational};
use crate::expansions::binary_expand;
use crate::maps::{IntervalMap, Newman, NewmanReturn};
use crate::qmark::{qmark_bcf, qmark_inverse};

/// Position in an enumeration; arbitrary precision. Serialized as a
/// decimal string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EnumIndex(pub BigUint);

impl Serialize for EnumIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for EnumIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl EnumIndex {
    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for EnumIndex {
    fn from(n: u64) -> Self {
        EnumIndex(BigUint::from(n))
    }
}

impl fmt::Display for EnumIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for EnumIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for EnumIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse()
            .map(EnumIndex)
            .map_err(|e| Error::parse("index", s, e))
    }
}

/// Streams the orbit of 0 under the Newman map or its first return map.
/// Asking for an index at or past the current position continues the
/// running orbit instead of starting over.
pub struct Enumerator {
    map: &'static dyn IntervalMap,
    index: u64,
    current: Rational,
}

impl Enumerator {
    /// `n -> F^n(0)`, onto the nonnegative rationals.
    pub fn positive() -> Self {
        Enumerator::starting(&Newman)
    }

    /// `n -> T^n(0)`, onto the rationals of `[0, 1)`.
    pub fn unit() -> Self {
        Enumerator::starting(&NewmanReturn)
    }

    fn starting(map: &'static dyn IntervalMap) -> Self {
        Enumerator {
            map,
            index: 0,
            current: Rational::zero(),
        }
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn at(&mut self, n: u64) -> Rational {
        if n < self.index {
            *self = Enumerator::starting(self.map);
        }
        while self.index < n {
            self.current = self.map.eval(&self.current);
            self.index += 1;
        }
        self.current.clone()
    }
}

impl Iterator for Enumerator {
    type Item = (u64, Rational);

    fn next(&mut self) -> Option<Self::Item> {
        let item = (self.index, self.current.clone());
        self.current = self.map.eval(&self.current);
        self.index += 1;
        Some(item)
    }
}

/// `F^n(0)`, by iteration.
pub fn enum_positive(n: u64) -> Rational {
    Enumerator::positive().at(n)
}

/// `T^n(0)`, by iteration.
pub fn enum_unit(n: u64) -> Rational {
    Enumerator::unit().at(n)
}

/// `D2^n(0)`, by iteration.
pub fn enum_dyadic(n: u64) -> Dyadic {
    dyadic_orbit()
        .nth(n as usize)
        .expect("the orbit is infinite")
}

/// The orbit of 0 under the interval odometer.
pub fn dyadic_orbit() -> impl Iterator<Item = Dyadic> {
    std::iter::successors(Some(Rational::zero()), |x| {
        Some(crate::maps::DyadicOdometer.eval(x))
    })
    .map(|x| Dyadic::try_from(&x).expect("the odometer keeps dyadics dyadic"))
}

/// `D2^n(0)` in closed form: the binary digits of `n`, least significant
/// first, read as `0.bits`.
pub fn dyadic_at(n: &EnumIndex) -> Dyadic {
    let k = n.0.bits();
    let mut j = BigUint::zero();
    for i in 0..k {
        j <<= 1;
        if n.0.bit(i) {
            j += 1u32;
        }
    }
    Dyadic::new(j, k)
}

/// `T^n(0)` in closed form, via `?^{-1}` of the `n`-th odometer point.
pub fn unit_at(n: &EnumIndex) -> Rational {
    qmark_inverse(&dyadic_at(n)).expect("odometer points lie in [0,1)")
}

/// `F^n(0)` in closed form: even indices are `T^(n/2)(0)`, odd ones one
/// more step of `F`.
pub fn positive_at(n: &EnumIndex) -> Rational {
    let half = EnumIndex(&n.0 >> 1u32);
    let x = unit_at(&half);
    if n.0.bit(0) {
        Newman.eval(&x)
    } else {
        x
    }
}

/// The `n`-th node of the Calkin-Wilf tree in breadth-first order (root
/// `1` at `n = 1`), with `0` at `n = 0`.
pub fn calkin_wilf_oracle(n: u64) -> Rational {
    CalkinWilfBfs::new()
        .nth(n as usize)
        .expect("the tree is infinite")
}

/// Breadth-first walk of the Calkin-Wilf tree, where `a/b` has children
/// `a/(a+b)` and `(a+b)/b`, preceded by 0.
pub struct CalkinWilfBfs {
    queue: VecDeque<(BigInt, BigInt)>,
    started: bool,
}

impl CalkinWilfBfs {
    pub fn new() -> Self {
        CalkinWilfBfs {
            queue: VecDeque::from([(BigInt::one(), BigInt::one())]),
            started: false,
        }
    }
}

impl Default for CalkinWilfBfs {
    fn default() -> Self {
        CalkinWilfBfs::new()
    }
}

impl Iterator for CalkinWilfBfs {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        if !self.started {
            self.started = true;
            return Some(Rational::zero());
        }
        let (a, b) = self.queue.pop_front()?;
        let sum = &a + &b;
        self.queue.push_back((a.clone(), sum.clone()));
        self.queue.push_back((sum, b.clone()));
        Some(Rational::new(a, b))
    }
}

/// The `n` with `T^n(0) = x`: the binary word of `?(x)` read backwards as
/// an integer.
pub fn index_of_unit(x: &Rational) -> Result<EnumIndex> {
    let d = qmark_bcf(x)?;
    let word = binary_expand(&d)?;
    let mut n = BigUint::zero();
    for &b in word.bits().iter().rev() {
        n <<= 1;
        if b {
            n += 1u32;
        }
    }
    Ok(EnumIndex(n))
}

/// The `n` with `F^n(0) = x` for a nonnegative rational `x`.
pub fn index_of_positive(x: &Rational) -> Result<EnumIndex> {
    if x.is_negative() {
        return Err(Error::domain("index_of_positive", x, "[0,inf)"));
    }
    if x.in_unit_interval() {
        return Ok(EnumIndex(index_of_unit(x)?.0 << 1u32));
    }
    // F maps [0,1) onto [1,inf) by y -> 1/(1-y)
    let y = Rational::one() - x.recip().expect("x >= 1");
    Ok(EnumIndex((index_of_unit(&y)?.0 << 1u32) + 1u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn positive_examples() {
        assert_eq!(enum_positive(0), r("0"));
        assert_eq!(enum_positive(1), r("1"));
        assert_eq!(enum_positive(5), r("3/2"));
    }

    #[test]
    fn unit_examples() {
        assert_eq!(enum_unit(0), r("0"));
        assert_eq!(enum_unit(2), r("1/3"));
        assert_eq!(enum_unit(4), r("1/4"));
    }

    #[test]
    fn dyadic_examples() {
        assert_eq!(enum_dyadic(0), Dyadic::zero());
        assert_eq!(enum_dyadic(3), "3/4".parse().unwrap());
        assert_eq!(enum_dyadic(6), "3/8".parse().unwrap());
        assert_eq!(dyadic_at(&6.into()), "3/8".parse().unwrap());
        assert_eq!(dyadic_at(&0.into()), Dyadic::zero());
    }

    #[test]
    fn calkin_wilf_examples() {
        assert_eq!(calkin_wilf_oracle(0), r("0"));
        assert_eq!(calkin_wilf_oracle(1), r("1"));
        assert_eq!(calkin_wilf_oracle(2), r("1/2"));
        assert_eq!(calkin_wilf_oracle(5), r("3/2"));
    }

    #[test]
    fn index_examples() {
        assert_eq!(index_of_unit(&r("0")).unwrap(), 0.into());
        assert_eq!(index_of_unit(&r("2/3")).unwrap(), 3.into());
        assert_eq!(index_of_unit(&r("1/4")).unwrap(), 4.into());
        assert!(index_of_unit(&r("1")).is_err());
    }

    #[test]
    fn enumerator_shares_its_orbit() {
        let mut e = Enumerator::positive();
        assert_eq!(e.at(5), r("3/2"));
        assert_eq!(e.index(), 5);
        assert_eq!(e.at(6), enum_positive(6));
        assert_eq!(e.at(1), r("1"));
        let first: Vec<_> = Enumerator::unit().take(5).map(|(_, x)| x).collect();
        assert_eq!(first, ["0", "1/2", "1/3", "2/3", "1/4"].map(r));
    }

    #[test]
    fn closed_forms_match_iteration() {
        let dyadic: Vec<_> = dyadic_orbit().take(600).collect();
        for (n, (i, x)) in Enumerator::unit().take(600).enumerate() {
            let idx = EnumIndex::from(n as u64);
            assert_eq!(i, n as u64);
            assert_eq!(unit_at(&idx), x);
            assert_eq!(dyadic_at(&idx), dyadic[n]);
        }
        for (n, x) in Enumerator::positive().take(600) {
            let idx = EnumIndex::from(n);
            assert_eq!(positive_at(&idx), x);
            assert_eq!(index_of_positive(&x).unwrap(), idx);
        }
    }

    #[test]
    fn huge_indices_use_closed_forms() {
        let n: EnumIndex = "1267650600228229401496703205376".parse().unwrap(); // 2^100
        let x = unit_at(&n);
        assert_eq!(index_of_unit(&x).unwrap(), n);
        // 2^100 is a single 1 bit at position 101: 1/2^101 = ?(1/102)
        assert_eq!(x, r("1/102"));
    }
}
