//! Minkowski's question-mark function on rationals, by three independent
//! exact algorithms, and its inverse on dyadics.
//!
//! On rationals `?` takes dyadic values, so every algorithm returns a
//! [`Dyadic`]. The endpoint values `?(0) = 0` and `?(1) = 1` are fixed by
//! [`question_mark`]; each algorithm only handles its own domain.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{Dyadic, Rational};
use crate::expansions::{
    bcf_eval, bcf_expand, binary_expand, blocks_encode, blocks_to_bcf, cf_expand, BinaryWord,
};
use crate::maps::Domain;
use crate::registry::Registry;

/// One way of computing `?` on rationals.
pub trait QuestionMarkAlgorithm: Send + Sync {
    fn name(&self) -> &'static str;

    fn domain(&self) -> Domain;

    /// `x` is already known to lie in the domain.
    fn eval(&self, x: &Rational) -> Dyadic;

    fn apply(&self, x: &Rational) -> Result<Dyadic> {
        self.domain().check(self.name(), x)?;
        Ok(self.eval(x))
    }
}

/// Descent of the Stern-Brocot tree: each mediant takes the average of the
/// values at its two parents.
pub struct Mediant;

/// Denjoy's alternating sum over the continued fraction digits.
pub struct Denjoy;

/// Concatenation of blocks `b_(a_i - 2)` over the backward continued
/// fraction digits.
pub struct BackwardBlocks;

impl QuestionMarkAlgorithm for Mediant {
    fn name(&self) -> &'static str {
        "mediant"
    }

    fn domain(&self) -> Domain {
        Domain::unit_closed()
    }

    fn eval(&self, x: &Rational) -> Dyadic {
        let (p, q) = (x.numer(), x.denom());
        let (mut a, mut b) = (BigInt::zero(), BigInt::one());
        let (mut c, mut d) = (BigInt::one(), BigInt::one());
        let (mut left, mut right) = (Dyadic::zero(), Dyadic::one());
        if x.is_zero() {
            return left;
        }
        if x.is_one() {
            return right;
        }
        loop {
            let (mp, mq) = (&a + &c, &b + &d);
            let value = Dyadic::midpoint(&left, &right);
            let lhs = p * &mq;
            let rhs = q * &mp;
            if lhs == rhs {
                return value;
            }
            if lhs < rhs {
                (c, d, right) = (mp, mq, value);
            } else {
                (a, b, left) = (mp, mq, value);
            }
        }
    }
}

impl QuestionMarkAlgorithm for Denjoy {
    fn name(&self) -> &'static str {
        "denjoy"
    }

    fn domain(&self) -> Domain {
        Domain {
            lower: Rational::zero(),
            lower_closed: false,
            upper: Some(Rational::one()),
            upper_closed: false,
        }
    }

    fn eval(&self, x: &Rational) -> Dyadic {
        // 2 * sum (-1)^(n+1) 2^-(a_1 + ... + a_n), over a common
        // denominator 2^(a_1 + ... + a_N)
        let digits = cf_expand(x).expect("x in (0,1)");
        let mut partial = Vec::with_capacity(digits.digits().len());
        let mut total = 0u64;
        for &a in digits.digits() {
            total += a;
            partial.push(total);
        }
        let mut num = BigInt::zero();
        for (i, &s) in partial.iter().enumerate() {
            let term = BigInt::one() << (total - s + 1);
            if i % 2 == 0 {
                num += term;
            } else {
                num -= term;
            }
        }
        let num = num.to_biguint().expect("the alternating sum is positive");
        Dyadic::new(num, total)
    }
}

impl QuestionMarkAlgorithm for BackwardBlocks {
    fn name(&self) -> &'static str {
        "bcf"
    }

    fn domain(&self) -> Domain {
        Domain::unit_half_open()
    }

    fn eval(&self, x: &Rational) -> Dyadic {
        qmark_word(x).expect("x in [0,1)").to_dyadic()
    }
}

/// The three built-in algorithms keyed by `mediant`, `denjoy` and `bcf`.
pub type QmarkRegistry = Registry<dyn QuestionMarkAlgorithm>;

impl Registry<dyn QuestionMarkAlgorithm> {
    pub fn builtin() -> Self {
        let mut reg = Registry::new("question-mark algorithm");
        reg.register(
            "bcf",
            Arc::new(BackwardBlocks) as Arc<dyn QuestionMarkAlgorithm>,
        );
        reg.register("mediant", Arc::new(Mediant));
        reg.register("denjoy", Arc::new(Denjoy));
        reg
    }
}

/// `?(x)` on `[0, 1]` with `algo`, settling the endpoints first.
pub fn question_mark(algo: &dyn QuestionMarkAlgorithm, x: &Rational) -> Result<Dyadic> {
    if x.is_zero() {
        Ok(Dyadic::zero())
    } else if x.is_one() {
        Ok(Dyadic::one())
    } else if x.in_unit_interval() {
        algo.apply(x)
    } else {
        Err(Error::domain("question_mark", x, "[0,1]"))
    }
}

pub fn qmark_mediant(x: &Rational) -> Result<Dyadic> {
    Mediant.apply(x)
}

pub fn qmark_denjoy(x: &Rational) -> Result<Dyadic> {
    Denjoy.apply(x)
}

pub fn qmark_bcf(x: &Rational) -> Result<Dyadic> {
    BackwardBlocks.apply(x)
}

/// The binary word `0.b_(a1-2) b_(a2-2) ...` of `?(x)` for `x` in `[0, 1)`;
/// the 2-tail contributes only trailing zeros.
pub fn qmark_word(x: &Rational) -> Result<BinaryWord> {
    let e = bcf_expand(x)?;
    let mut bits = Vec::new();
    for &a in e.head() {
        bits.extend(std::iter::repeat_n(true, (a - 2) as usize));
        bits.push(false);
    }
    Ok(BinaryWord::new(bits))
}

/// `?(x) = 1 - sum_j 2^-((a_1 + ... + a_j) - j)`, with the geometric sum
/// over the 2-tail taken in closed form.
pub fn qmark_bcf_series(x: &Rational) -> Result<Dyadic> {
    let e = bcf_expand(x)?;
    let mut exps = Vec::with_capacity(e.head().len());
    let mut acc = 0u64;
    for &a in e.head() {
        acc += a - 1;
        exps.push(acc);
    }
    // exponents strictly increase; the tail digits add 2^-acc in total
    let mut num = (BigUint::one() << acc) - 1u32;
    for s in exps {
        num -= BigUint::one() << (acc - s);
    }
    Ok(Dyadic::new(num, acc))
}

/// `?^{-1}` on dyadics in `[0, 1)`: binary word, then block code, then
/// digits shifted by 2, then evaluated as a backward continued fraction.
pub fn qmark_inverse(d: &Dyadic) -> Result<Rational> {
    let word = binary_expand(d).map_err(|_| Error::domain("qmark_inverse", d, "[0,1)"))?;
    Ok(bcf_eval(&blocks_to_bcf(&blocks_encode(&word))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::reduced_fractions;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn dy(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn mediant_examples() {
        assert_eq!(qmark_mediant(&r("1/2")).unwrap(), dy("1/2"));
        assert_eq!(qmark_mediant(&r("1/3")).unwrap(), dy("1/4"));
        assert_eq!(qmark_mediant(&r("2/5")).unwrap(), dy("3/8"));
        assert_eq!(qmark_mediant(&r("0")).unwrap(), Dyadic::zero());
        assert_eq!(qmark_mediant(&r("1")).unwrap(), Dyadic::one());
    }

    #[test]
    fn denjoy_examples() {
        assert_eq!(qmark_denjoy(&r("1/3")).unwrap(), dy("1/4"));
        assert_eq!(qmark_denjoy(&r("2/5")).unwrap(), dy("3/8"));
        assert_eq!(qmark_denjoy(&r("3/5")).unwrap(), dy("5/8"));
        assert!(qmark_denjoy(&r("0")).is_err());
        assert!(qmark_denjoy(&r("1")).is_err());
    }

    #[test]
    fn bcf_examples() {
        assert_eq!(qmark_bcf(&r("0")).unwrap(), Dyadic::zero());
        assert_eq!(qmark_bcf(&r("1/2")).unwrap(), dy("1/2"));
        assert_eq!(qmark_bcf(&r("2/5")).unwrap(), dy("3/8"));
        assert!(qmark_bcf(&r("1")).is_err());
    }

    #[test]
    fn series_examples() {
        for (x, d) in [("0", "0"), ("1/2", "1/2"), ("2/5", "3/8"), ("3/5", "5/8")] {
            assert_eq!(qmark_bcf_series(&r(x)).unwrap(), dy(d), "at {x}");
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(qmark_inverse(&Dyadic::zero()).unwrap(), r("0"));
        assert_eq!(qmark_inverse(&dy("1/2")).unwrap(), r("1/2"));
        assert_eq!(qmark_inverse(&dy("3/8")).unwrap(), r("2/5"));
        assert!(qmark_inverse(&Dyadic::one()).is_err());
    }

    #[test]
    fn endpoints_are_routed() {
        let reg = QmarkRegistry::builtin();
        for (name, algo) in reg.iter() {
            assert_eq!(
                question_mark(algo.as_ref(), &r("0")).unwrap(),
                Dyadic::zero(),
                "{name}"
            );
            assert_eq!(
                question_mark(algo.as_ref(), &r("1")).unwrap(),
                Dyadic::one(),
                "{name}"
            );
            assert!(question_mark(algo.as_ref(), &r("3/2")).is_err());
        }
    }

    #[test]
    fn algorithms_agree_on_small_denominators() {
        let reg = QmarkRegistry::builtin();
        let bcf = reg.get("bcf").unwrap();
        for x in reduced_fractions(40) {
            let expected = question_mark(bcf.as_ref(), &x).unwrap();
            for (name, algo) in reg.iter() {
                assert_eq!(
                    question_mark(algo.as_ref(), &x).unwrap(),
                    expected,
                    "{name} at {x}"
                );
            }
            assert_eq!(qmark_bcf_series(&x).unwrap(), expected);
        }
    }

    #[test]
    fn functional_equations() {
        for x in reduced_fractions(40).into_iter().chain([Rational::one()]) {
            let q = question_mark(&BackwardBlocks, &x).unwrap().to_rational();
            let half = &x / (&x + Rational::one());
            let q_half = question_mark(&BackwardBlocks, &half).unwrap().to_rational();
            assert_eq!(q_half, &q / Rational::from(2));
            let mirror = Rational::one() - &x;
            let q_mirror = question_mark(&BackwardBlocks, &mirror)
                .unwrap()
                .to_rational();
            assert_eq!(q_mirror, Rational::one() - q);
        }
    }
}
