//! Exhaustive identity checks over bounded families of rationals, dyadics
//! and codes. Each family is a [`VerifySuite`] registered by name.
//!
//! Checks inside a family run in parallel; the reported counterexample is
//! always the first failing input in family order, so reports do not depend
//! on scheduling.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::enumeration::{
    calkin_wilf_oracle, dyadic_at, dyadic_orbit, index_of_unit, CalkinWilfBfs, EnumIndex,
    Enumerator,
};
use crate::exact::{dyadics_up_to, reduced_fractions, Dyadic, Rational};
use crate::expansions::{
    bcf_eval, bcf_expand, binary_expand, blocks_decode, blocks_encode, blocks_to_bcf, cf_expand,
    cf_to_bcf, BinaryWord, BlockSequence,
};
use crate::maps::{
    backward_farey_map, doubling_hitting_time, doubling_map, dyadic_odometer_map, linear_renyi_map,
    newman_map, newman_return_map, renyi_hitting_time, renyi_map, BackwardFarey, Doubling,
    IntervalMap,
};
use crate::odometer::{block_odometer, odometer, odometric_substitution, BitSequence};
use crate::qmark::{
    qmark_bcf, qmark_bcf_series, qmark_denjoy, qmark_inverse, qmark_mediant, question_mark,
    BackwardBlocks,
};
use crate::registry::Registry;

/// An input at which the two sides of an identity differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub identity: &'static str,
    pub input: String,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at {}: lhs = {}, rhs = {}",
            self.identity, self.input, self.lhs, self.rhs
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCount {
    pub identity: &'static str,
    pub checked: u64,
}

/// Outcome of one suite. Families after the first failure are not run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub families: Vec<FamilyCount>,
    pub failure: Option<Counterexample>,
}

impl SuiteReport {
    pub fn checked(&self) -> u64 {
        self.families.iter().map(|f| f.checked).sum()
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub trait VerifySuite: Send + Sync {
    fn name(&self) -> &'static str;

    /// What the suite checks and what `bound` limits.
    fn description(&self) -> &'static str;

    fn run(&self, bound: u64) -> SuiteReport;
}

struct Run {
    report: SuiteReport,
}

type Mismatch = (String, String, String);

impl Run {
    fn new(suite: &str) -> Self {
        Run {
            report: SuiteReport {
                suite: suite.to_string(),
                families: Vec::new(),
                failure: None,
            },
        }
    }

    fn family<T, F>(&mut self, identity: &'static str, inputs: &[T], check: F)
    where
        T: Sync,
        F: Fn(&T) -> Option<Mismatch> + Send + Sync,
    {
        if self.report.failure.is_some() {
            return;
        }
        self.report.families.push(FamilyCount {
            identity,
            checked: inputs.len() as u64,
        });
        if let Some((input, lhs, rhs)) = inputs.par_iter().find_map_first(check) {
            self.report.failure = Some(Counterexample {
                identity,
                input,
                lhs,
                rhs,
            });
        }
    }

    fn single(
        &mut self,
        identity: &'static str,
        check: impl Fn() -> Option<Mismatch> + Send + Sync,
    ) {
        self.family(identity, &[()], |_| check());
    }

    fn finish(self) -> SuiteReport {
        self.report
    }
}

fn show<T: fmt::Display, E: fmt::Display>(r: &Result<T, E>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// `None` when both sides are equal values.
fn same<T, E>(input: impl fmt::Display, lhs: Result<T, E>, rhs: Result<T, E>) -> Option<Mismatch>
where
    T: PartialEq + fmt::Display,
    E: fmt::Display,
{
    match (&lhs, &rhs) {
        (Ok(a), Ok(b)) if a == b => None,
        _ => Some((input.to_string(), show(&lhs), show(&rhs))),
    }
}

fn iterate(map: &dyn IntervalMap, x: &Rational, n: u64) -> crate::Result<Rational> {
    let mut y = x.clone();
    for _ in 0..n {
        y = map.apply(&y)?;
    }
    Ok(y)
}

/// `1 + min { n >= 0 : m^n(x) < 1/2 }`, by stepping the map.
fn literal_hitting_time(map: &dyn IntervalMap, x: &Rational) -> crate::Result<u64> {
    let half = Rational::new(1, 2);
    let mut y = x.clone();
    let mut n = 1;
    while y >= half {
        y = map.apply(&y)?;
        n += 1;
    }
    Ok(n)
}

fn unit_fractions_and_one(bound: u64) -> Vec<Rational> {
    let mut xs = reduced_fractions(bound);
    if bound >= 1 {
        xs.push(Rational::one());
    }
    xs
}

/// Every binary word of length at most `len`, as block codes.
fn block_codes(len: u32) -> Vec<BlockSequence> {
    let mut out = Vec::new();
    for l in 0..=len {
        for v in 0u64..(1 << l) {
            let bits = (0..l).map(|i| v >> i & 1 == 1).collect();
            let w = BinaryWord::new(bits);
            if w.len() == l as usize {
                out.push(blocks_encode(&w));
            }
        }
    }
    out
}

/// `count` canonical bit sequences of length at most 24 from a fixed seed.
pub fn odometer_seeds(count: usize) -> Vec<BitSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0d0_3e7e5);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(0..=24);
            BitSequence::new((0..len).map(|_| rng.gen_bool(0.5)).collect())
        })
        .collect()
}

/// Backward continued fraction action of the first return map, its
/// expression through the Renyi map, and `T = F o F`; `bound` is the
/// largest denominator.
pub struct ActionSuite;

impl VerifySuite for ActionSuite {
    fn name(&self) -> &'static str {
        "action"
    }

    fn description(&self) -> &'static str {
        "T acts on backward expansions by the odometric substitution; T = 1/(a1 - R); T = F o F (bound: max denominator)"
    }

    fn run(&self, bound: u64) -> SuiteReport {
        let xs = reduced_fractions(bound);
        let mut run = Run::new(self.name());
        run.family("bcf_eval(O(bcf_expand(x))) = T(x)", &xs, |x| {
            let lhs = bcf_expand(x).map(|e| bcf_eval(&odometric_substitution(&e)));
            same(x, lhs, newman_return_map(x))
        });
        run.family("T(x) = 1/(a1 - R(x))", &xs, |x| {
            let lhs = newman_return_map(x);
            let rhs = bcf_expand(x).and_then(|e| {
                let r = renyi_map(x)?;
                Ok((Rational::from_integer(e.digit(0)) - r)
                    .recip()
                    .expect("a1 - R(x) >= 1"))
            });
            same(x, lhs, rhs)
        });
        run.family("T(x) = F(F(x))", &xs, |x| {
            same(
                x,
                newman_return_map(x),
                newman_map(x).and_then(|y| newman_map(&y)),
            )
        });
        run.finish()
    }
}

/// The conjugacies carried by `?`: `T` to the interval odometer, `J` to the
/// doubling map, and the symbolic squares behind them.
pub struct ConjugacySuite;

impl VerifySuite for ConjugacySuite {
    fn name(&self) -> &'static str {
        "conjugacy"
    }

    fn description(&self) -> &'static str {
        "?(T x) = D2(? x), ?(J x) = B(? x), D2 agrees with the symbolic odometer, block and digit squares commute (bound: max denominator; word length and dyadic level capped at 16)"
    }

    fn run(&self, bound: u64) -> SuiteReport {
        let xs = reduced_fractions(bound);
        let mut run = Run::new(self.name());
        run.family("?(T(x)) = D2(?(x))", &xs, |x| {
            let lhs = newman_return_map(x).and_then(|y| qmark_bcf(&y));
            let rhs = qmark_bcf(x)
                .and_then(|d| dyadic_odometer_map(&d.to_rational()))
                .and_then(|y| Dyadic::try_from(&y));
            same(x, lhs, rhs)
        });
        let with_one = unit_fractions_and_one(bound);
        run.family("?(J(x)) = B(?(x))", &with_one, |x| {
            let lhs = backward_farey_map(x).and_then(|y| question_mark(&BackwardBlocks, &y));
            let rhs = question_mark(&BackwardBlocks, x)
                .and_then(|d| doubling_map(&d.to_rational()))
                .and_then(|y| Dyadic::try_from(&y));
            same(x, lhs, rhs)
        });
        let level = bound.min(16);
        let dyadics = dyadics_up_to(level);
        run.family("binary(D2(d)) = D(binary(d))", &dyadics, |d| {
            let lhs = dyadic_odometer_map(&d.to_rational())
                .and_then(|y| Dyadic::try_from(&y))
                .and_then(|y| binary_expand(&y))
                .map(BitSequence::from);
            let rhs = binary_expand(d).map(|w| odometer(&BitSequence::from(w)));
            same(d, lhs, rhs)
        });
        let codes = block_codes(level as u32);
        run.family("block_odometer = encode o D o decode", &codes, |s| {
            let via_bits = blocks_encode(&odometer(&blocks_decode(s).into()).into());
            same::<_, crate::Error>(s, Ok(block_odometer(s)), Ok(via_bits))
        });
        run.family("O o h = h o block_odometer", &codes, |s| {
            same::<_, crate::Error>(
                s,
                Ok(odometric_substitution(&blocks_to_bcf(s))),
                Ok(blocks_to_bcf(&block_odometer(s))),
            )
        });
        run.finish()
    }
}

/// Agreement of the three `?` algorithms, the series form, inverse round
/// trips and the two functional equations.
pub struct QmarkSuite;

impl VerifySuite for QmarkSuite {
    fn name(&self) -> &'static str {
        "qmark"
    }

    fn description(&self) -> &'static str {
        "mediant, Denjoy and block algorithms agree; series form; inverse round trips; ?(x/(x+1)) = ?(x)/2 and ?(1-x) = 1-?(x) (bound: max denominator; dyadic level capped at 14)"
    }

    fn run(&self, bound: u64) -> SuiteReport {
        let xs = reduced_fractions(bound);
        let interior: Vec<_> = xs.iter().filter(|x| !x.is_zero()).cloned().collect();
        let mut run = Run::new(self.name());
        run.family("mediant(x) = bcf(x)", &xs, |x| {
            same(x, qmark_mediant(x), qmark_bcf(x))
        });
        run.family("denjoy(x) = bcf(x)", &interior, |x| {
            same(x, qmark_denjoy(x), qmark_bcf(x))
        });
        run.family("series(x) = word(x)", &xs, |x| {
            same(x, qmark_bcf_series(x), qmark_bcf(x))
        });
        run.family("?^-1(?(x)) = x", &xs, |x| {
            same(
                x,
                qmark_bcf(x).and_then(|d| qmark_inverse(&d)),
                Ok(x.clone()),
            )
        });
        let dyadics = dyadics_up_to(bound.min(14));
        run.family("?(?^-1(d)) = d", &dyadics, |d| {
            same(
                d,
                qmark_inverse(d).and_then(|x| qmark_bcf(&x)),
                Ok(d.clone()),
            )
        });
        let with_one = unit_fractions_and_one(bound);
        let q = |x: &Rational| question_mark(&BackwardBlocks, x).map(|d| d.to_rational());
        run.family("?(x/(x+1)) = ?(x)/2", &with_one, |x| {
            let y = x / (x + Rational::one());
            same(x, q(&y), q(x).map(|v| v / Rational::from(2)))
        });
        run.family("?(1-x) = 1-?(x)", &with_one, |x| {
            same(
                x,
                q(&(Rational::one() - x)),
                q(x).map(|v| Rational::one() - v),
            )
        });
        run.finish()
    }
}

/// Jump transformations: `R = J^tau`, `R2 = B^tau_B`, and both hitting
/// times against literal minimization.
pub struct JumpSuite;

impl VerifySuite for JumpSuite {
    fn name(&self) -> &'static str {
        "jump"
    }

    fn description(&self) -> &'static str {
        "R(x) = J^tau(x)(x), R2(x) = B^tauB(x)(x), closed-form hitting times equal literal minimization (bound: max denominator)"
    }

    fn run(&self, bound: u64) -> SuiteReport {
        let xs = reduced_fractions(bound);
        let mut run = Run::new(self.name());
        run.family("R(x) = J^tau(x)(x)", &xs, |x| {
            let rhs = renyi_hitting_time(x).and_then(|n| iterate(&BackwardFarey, x, n));
            same(x, renyi_map(x), rhs)
        });
        run.family("R2(x) = B^tauB(x)(x)", &xs, |x| {
            let rhs = doubling_hitting_time(x).and_then(|n| iterate(&Doubling, x, n));
            same(x, linear_renyi_map(x), rhs)
        });
        run.family("tau(x) = literal hitting time of J", &xs, |x| {
            same(
                x,
                renyi_hitting_time(x),
                literal_hitting_time(&BackwardFarey, x),
            )
        });
        run.family("tauB(x) = literal hitting time of B", &xs, |x| {
            same(
                x,
                doubling_hitting_time(x),
                literal_hitting_time(&Doubling, x),
            )
        });
        run.finish()
    }
}

/// Finitely checkable shadows of the measure statements: the odometer's
/// branch images tile the interval, `R2` is full-branched with slope `2^n`,
/// and `J` steps the partition `P_n` down and is increasing.
pub struct MeasureSuite;

impl MeasureSuite {
    fn pow2_inv(n: u64) -> Rational {
        Rational::new(1, BigUint::one() << n)
    }

    /// Left end of `I_n`.
    fn left(n: u64) -> Rational {
        Rational::one() - Self::pow2_inv(n - 1)
    }
}

impl VerifySuite for MeasureSuite {
    fn name(&self) -> &'static str {
        "measure"
    }

    fn description(&self) -> &'static str {
        "D2 maps I_n onto [1/2^n, 1/2^(n-1)), R2 maps I_n affinely onto [0,1), J(n/(n+1)) = (n-1)/n, J increasing on each branch (bound: branch count, capped at 32 and 64 for J; grid denominator for monotonicity)"
    }

    fn run(&self, bound: u64) -> SuiteReport {
        let branches: Vec<u64> = (1..=bound.min(32)).collect();
        let mut run = Run::new(self.name());
        run.family("D2(I_n) = [1/2^n, 1/2^(n-1))", &branches, |&n| {
            // D2 is a translation on I_n, so the image is fixed by the left end
            let l = Self::left(n);
            let width = Self::pow2_inv(n);
            let mid = &l + &width / Rational::from(2);
            let shift_left = dyadic_odometer_map(&l).map(|y| y - &l);
            let shift_mid = dyadic_odometer_map(&mid).map(|y| y - &mid);
            same(n, dyadic_odometer_map(&l), Ok(width.clone()))
                .or_else(|| same(n, shift_mid, shift_left))
        });
        run.single(
            "images of I_1..I_n are disjoint and leave [0, 2^-n)",
            || {
                let mut covered = Rational::one();
                for &n in &branches {
                    let lo = match dyadic_odometer_map(&Self::left(n)) {
                        Ok(v) => v,
                        Err(e) => {
                            return Some((n.to_string(), format!("error: {e}"), String::new()))
                        }
                    };
                    let hi = &lo + Self::pow2_inv(n);
                    if hi != covered {
                        return Some((n.to_string(), hi.to_string(), covered.to_string()));
                    }
                    covered = lo;
                }
                let rest = Self::pow2_inv(branches.len() as u64);
                same::<_, crate::Error>("uncovered length", Ok(covered), Ok(rest))
            },
        );
        run.family(
            "R2 on I_n: 0 at the left end, slope 2^n, 1 at the right end",
            &branches,
            |&n| {
                let l = Self::left(n);
                let width = Self::pow2_inv(n);
                let slope = Rational::from_integer(BigUint::one() << n);
                let mid = &l + &width / Rational::from(2);
                same(n, linear_renyi_map(&l), Ok(Rational::zero()))
                    .or_else(|| {
                        let affine =
                            linear_renyi_map(&mid).map(|y| y + &slope * (&l + &width - &mid));
                        same(n, affine, Ok(Rational::one()))
                    })
                    .or_else(|| {
                        let growth = linear_renyi_map(&mid).map(|y| y / (&mid - &l));
                        same(n, growth, Ok(slope.clone()))
                    })
            },
        );
        let descents: Vec<u64> = (1..=bound.min(64)).collect();
        run.family("J(n/(n+1)) = (n-1)/n", &descents, |&n| {
            same(
                n,
                backward_farey_map(&Rational::new(n, n + 1)),
                Ok(Rational::new(n - 1, n)),
            )
        });
        let mut grid = unit_fractions_and_one(bound.max(2));
        grid.sort();
        let half = Rational::new(1, 2);
        let pairs: Vec<(Rational, Rational)> = grid
            .windows(2)
            .filter(|w| (w[0] < half) == (w[1] < half))
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect();
        run.family(
            "J strictly increasing on each branch",
            &pairs,
            |(a, b)| match (backward_farey_map(a), backward_farey_map(b)) {
                (Ok(ja), Ok(jb)) if ja < jb => None,
                (ja, jb) => Some((format!("{a} < {b}"), show(&ja), show(&jb))),
            },
        );
        run.single("J(0) = 0 and J(1) = 1", || {
            same(
                "0",
                backward_farey_map(&Rational::zero()),
                Ok(Rational::zero()),
            )
            .or_else(|| {
                same(
                    "1",
                    backward_farey_map(&Rational::one()),
                    Ok(Rational::one()),
                )
            })
        });
        run.finish()
    }
}

/// Orbit cover of the odometer at every finite level, symbolically and on
/// the interval.
pub struct OdometerCoverSuite;

impl VerifySuite for OdometerCoverSuite {
    fn name(&self) -> &'static str {
        "odometer-cover"
    }

    fn description(&self) -> &'static str {
        "first n bits of D^k(w), k < 2^n, are all of {0,1}^n for 10 seeds; {D2^k(0) : k < 2^n} = {j/2^n}; closed form of D2^k(0) (bound: level n, capped at 12)"
    }

    fn run(&self, bound: u64) -> SuiteReport {
        let levels: Vec<u64> = (1..=bound.min(12)).collect();
        let seeds = odometer_seeds(10);
        let cases: Vec<(u64, usize)> = levels
            .iter()
            .flat_map(|&n| (0..seeds.len()).map(move |s| (n, s)))
            .collect();
        let mut run = Run::new(self.name());
        run.family("{first n bits of D^k(w)} = {0,1}^n", &cases, |&(n, s)| {
            let size = 1usize << n;
            let mut seen = vec![false; size];
            let mut w = seeds[s].clone();
            for _ in 0..size {
                let code = w
                    .prefix(n as usize)
                    .iter()
                    .rev()
                    .fold(0usize, |acc, &b| acc << 1 | b as usize);
                seen[code] = true;
                w = odometer(&w);
            }
            let hit = seen.iter().filter(|&&b| b).count();
            same::<_, crate::Error>(format!("n = {n}, seed {}", seeds[s]), Ok(hit), Ok(size))
        });
        let top = *levels.last().unwrap_or(&0);
        let orbit: Vec<Dyadic> = dyadic_orbit().take(1 << top).collect();
        run.family("{D2^k(0) : k < 2^n} = {j/2^n}", &levels, |&n| {
            let mut got: Vec<Dyadic> = orbit[..1 << n].to_vec();
            got.sort();
            let want: Vec<Dyadic> = (0u64..1 << n).map(|j| Dyadic::new(j, n)).collect();
            (got != want).then(|| (n.to_string(), "orbit set differs".into(), "j/2^n".into()))
        });
        let indices: Vec<u64> = (0..orbit.len() as u64).collect();
        run.family("D2^k(0) = bit reversal of k", &indices, |&k| {
            same::<_, crate::Error>(k, Ok(dyadic_at(&k.into())), Ok(orbit[k as usize].clone()))
        });
        run.finish()
    }
}

/// The counting bijections against each other and against the Calkin-Wilf
/// tree.
pub struct EnumerationSuite;

impl VerifySuite for EnumerationSuite {
    fn name(&self) -> &'static str {
        "enumeration"
    }

    fn description(&self) -> &'static str {
        "F^n(0) equals the Calkin-Wilf tree; ?(T^n(0)) = D2^n(0); index round trip; T^n(0) = F^2n(0); no repeats (bound: largest index n)"
    }

    fn run(&self, bound: u64) -> SuiteReport {
        let count = bound as usize + 1;
        let positive: Vec<Rational> = Enumerator::positive()
            .take(2 * count)
            .map(|(_, x)| x)
            .collect();
        let tree: Vec<Rational> = CalkinWilfBfs::new().take(count).collect();
        let unit: Vec<Rational> = Enumerator::unit().take(count).map(|(_, x)| x).collect();
        let dyadic: Vec<Dyadic> = dyadic_orbit().take(count).collect();
        let idx: Vec<usize> = (0..count).collect();
        let mut run = Run::new(self.name());
        run.family("F^n(0) = calkin_wilf(n)", &idx, |&n| {
            same::<_, crate::Error>(n, Ok(positive[n].clone()), Ok(tree[n].clone()))
        });
        run.single("calkin_wilf_oracle agrees with the tree walk", || {
            let n = count - 1;
            same::<_, crate::Error>(n, Ok(calkin_wilf_oracle(n as u64)), Ok(tree[n].clone()))
        });
        run.family("?(T^n(0)) = D2^n(0)", &idx, |&n| {
            same(n, qmark_bcf(&unit[n]), Ok(dyadic[n].clone()))
        });
        run.family("index_of_unit(T^n(0)) = n", &idx, |&n| {
            same(n, index_of_unit(&unit[n]), Ok(EnumIndex::from(n as u64)))
        });
        run.family("T^n(0) = F^2n(0)", &idx, |&n| {
            same::<_, crate::Error>(n, Ok(unit[n].clone()), Ok(positive[2 * n].clone()))
        });
        run.single("T^n(0) has no repeats", || {
            let mut sorted = unit.clone();
            sorted.sort();
            sorted
                .windows(2)
                .find(|w| w[0] == w[1])
                .map(|w| (w[0].to_string(), "repeated".into(), String::new()))
        });
        run.family(
            "cf_to_bcf(cf_expand(x)) = bcf_expand(x) on T^n(0)",
            &idx,
            |&n| {
                let x = &unit[n];
                same(x, cf_expand(x).map(|e| cf_to_bcf(&e)), bcf_expand(x))
            },
        );
        run.finish()
    }
}

/// Every built-in suite, keyed by name, in report order.
pub type SuiteRegistry = Registry<dyn VerifySuite>;

impl Registry<dyn VerifySuite> {
    pub fn builtin() -> Self {
        let mut reg = Registry::new("verification suite");
        let suites: [Arc<dyn VerifySuite>; 7] = [
            Arc::new(ActionSuite),
            Arc::new(ConjugacySuite),
            Arc::new(QmarkSuite),
            Arc::new(JumpSuite),
            Arc::new(MeasureSuite),
            Arc::new(OdometerCoverSuite),
            Arc::new(EnumerationSuite),
        ];
        for s in suites {
            reg.register(s.name(), s);
        }
        reg
    }
}

/// Runs the suite called `name`, or every suite for `"all"`.
pub fn run_suites(
    registry: &SuiteRegistry,
    name: &str,
    bound: u64,
) -> crate::Result<Vec<SuiteReport>> {
    if name.trim().eq_ignore_ascii_case("all") {
        Ok(registry.iter().map(|(_, s)| s.run(bound)).collect())
    } else {
        Ok(vec![registry.get(name)?.run(bound)])
    }
}
