//! Acceptance gate: ten exhaustive exact checks, one PASS/FAIL line each.
//! Runs without the libtest harness so every line shows up in the output.

use std::collections::HashSet;
use std::fmt::Display;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;

use ratcount::verify::odometer_seeds;
use ratcount::{
    backward_farey_map, bcf_eval, bcf_expand, binary_expand, calkin_wilf_oracle, cf_expand,
    cf_to_bcf, doubling_hitting_time, doubling_map, dyadic_odometer_map, enum_dyadic,
    index_of_unit, linear_renyi_map, newman_map, newman_return_map, odometer,
    odometric_substitution, qmark_bcf, qmark_bcf_series, qmark_denjoy, qmark_inverse,
    qmark_mediant, reduced_fractions, renyi_hitting_time, renyi_map, BitSequence, CalkinWilfBfs,
    Dyadic, Enumerator, MapId, Rational,
};

type Check = Result<String, String>;

/// Name, check, and time limit.
type Criterion = (&'static str, fn() -> Check, Option<Duration>);

/// First input (in order) where `f` reports a mismatch.
fn first_failure<T, F>(inputs: &[T], f: F) -> Option<String>
where
    T: Sync + Display,
    F: Fn(&T) -> Option<String> + Sync + Send,
{
    inputs
        .par_iter()
        .find_map_first(|x| f(x).map(|why| format!("at {x}: {why}")))
}

fn differ<A: PartialEq + std::fmt::Debug>(lhs: A, rhs: A) -> Option<String> {
    (lhs != rhs).then(|| format!("{lhs:?} != {rhs:?}"))
}

fn sweep<T, F>(label: &str, inputs: &[T], f: F) -> Check
where
    T: Sync + Display,
    F: Fn(&T) -> Option<String> + Sync + Send,
{
    match first_failure(inputs, f) {
        None => Ok(format!("{} {label}", inputs.len())),
        Some(e) => Err(format!("{label} {e}")),
    }
}

fn all_of(parts: impl IntoIterator<Item = Check>) -> Check {
    let mut done = Vec::new();
    for p in parts {
        done.push(p?);
    }
    Ok(done.join(", "))
}

fn iterate(map: MapId, x: &Rational, n: u64) -> ratcount::Result<Rational> {
    let m = map.map();
    let mut y = x.clone();
    for _ in 0..n {
        y = m.apply(&y)?;
    }
    Ok(y)
}

fn newman_calkin_wilf() -> Check {
    let mut tree = CalkinWilfBfs::new();
    for (n, x) in Enumerator::positive().take(10_001) {
        let oracle = tree.next().unwrap();
        if x != oracle {
            return Err(format!("n = {n}: F^n(0) = {x}, tree gives {oracle}"));
        }
    }
    // the one-shot oracle agrees with the stream at a few spots
    for n in [0u64, 1, 2, 5, 1000, 10_000] {
        if calkin_wilf_oracle(n) != ratcount::enum_positive(n) {
            return Err(format!("oracle mismatch at n = {n}"));
        }
    }
    Ok("n = 0..=10000".into())
}

fn action() -> Check {
    let xs = reduced_fractions(500);
    sweep("fractions q <= 500", &xs, |x| {
        let e = bcf_expand(x).ok()?;
        differ(
            bcf_eval(&odometric_substitution(&e)),
            newman_return_map(x).unwrap(),
        )
    })
}

fn main_conjugacy() -> Check {
    let xs = reduced_fractions(300);
    sweep("fractions q <= 300", &xs, |x| {
        let lhs = qmark_bcf(&newman_return_map(x).unwrap()).unwrap();
        let rhs = dyadic_odometer_map(&qmark_bcf(x).unwrap().to_rational()).unwrap();
        differ(lhs.to_rational(), rhs)
    })
}

fn qmark_agreement() -> Check {
    let xs = reduced_fractions(300);
    let inner: Vec<Rational> = xs.iter().filter(|x| !x.is_zero()).cloned().collect();
    let dyadics: Vec<Dyadic> = (0..=14u64)
        .flat_map(|k| {
            (0u64..(1 << k))
                .filter(move |j| k == 0 || j % 2 == 1)
                .map(move |j| Dyadic::new(BigUint::from(j), k))
        })
        .collect();
    all_of([
        sweep("three-way on q <= 300", &inner, |x| {
            let b = qmark_bcf(x).unwrap();
            differ(qmark_mediant(x).unwrap(), b.clone())
                .or_else(|| differ(qmark_denjoy(x).unwrap(), b.clone()))
                .or_else(|| differ(qmark_bcf_series(x).unwrap(), b))
        }),
        sweep("inverse after ?", &xs, |x| {
            differ(qmark_inverse(&qmark_bcf(x).unwrap()).unwrap(), x.clone())
        }),
        sweep("dyadics k <= 14", &dyadics, |d| {
            differ(qmark_bcf(&qmark_inverse(d).unwrap()).unwrap(), d.clone())
        }),
    ])
}

fn cf_to_bcf_agreement() -> Check {
    let xs = reduced_fractions(500);
    sweep("fractions q <= 500", &xs, |x| {
        differ(cf_to_bcf(&cf_expand(x).unwrap()), bcf_expand(x).unwrap())
    })
}

/// `1 + min { n >= 0 : m^n(x) < 1/2 }`.
fn literal_hitting_time(map: MapId, x: &Rational) -> u64 {
    let half = Rational::new(1, 2);
    let mut y = x.clone();
    let mut n = 1;
    while y >= half {
        y = map.map().apply(&y).unwrap();
        n += 1;
    }
    n
}

fn jump_identities() -> Check {
    let xs = reduced_fractions(300);
    all_of([
        sweep("R = J^tau", &xs, |x| {
            let n = renyi_hitting_time(x).unwrap();
            differ(
                renyi_map(x).unwrap(),
                iterate(MapId::BackwardFarey, x, n).unwrap(),
            )
        }),
        sweep("R2 = B^tauB", &xs, |x| {
            let n = doubling_hitting_time(x).unwrap();
            differ(
                linear_renyi_map(x).unwrap(),
                iterate(MapId::Doubling, x, n).unwrap(),
            )
        }),
        sweep("tauB literal", &xs, |x| {
            differ(
                doubling_hitting_time(x).unwrap(),
                literal_hitting_time(MapId::Doubling, x),
            )
        }),
    ])
}

fn doubling_conjugacy() -> Check {
    let mut xs = reduced_fractions(300);
    xs.push(Rational::one());
    sweep("fractions q <= 300 and 1", &xs, |x| {
        let q = |y: &Rational| {
            ratcount::question_mark(&ratcount::qmark::BackwardBlocks, y)
                .unwrap()
                .to_rational()
        };
        differ(
            q(&backward_farey_map(x).unwrap()),
            doubling_map(&q(x)).unwrap(),
        )
    })
}

fn pow2(n: u64) -> Rational {
    Rational::new(BigUint::from(1u32) << n, 1)
}

fn odometer_structure() -> Check {
    // levels of the interval odometer orbit
    let orbit: Vec<Rational> = ratcount::enumeration::dyadic_orbit()
        .take(1 << 12)
        .map(|d| d.to_rational())
        .collect();
    if enum_dyadic(1000).to_rational() != orbit[1000] {
        return Err("enum_dyadic disagrees with the streamed orbit".into());
    }
    for k in 0..=12u64 {
        let got: HashSet<&Rational> = orbit[..1 << k].iter().collect();
        let want: Vec<Rational> = (0u64..1 << k)
            .map(|j| Rational::new(j, 1u64 << k))
            .collect();
        if got.len() != want.len() || want.iter().any(|x| !got.contains(x)) {
            return Err(format!("D2 orbit level {k} is not the dyadic grid"));
        }
    }
    // every length-n window is visited once per 2^n steps
    for (s, seed) in odometer_seeds(10).iter().enumerate() {
        for n in 1..=12usize {
            let mut w: BitSequence = seed.clone();
            let mut seen = HashSet::new();
            for _ in 0..1u32 << n {
                seen.insert(w.prefix(n));
                w = odometer(&w);
            }
            if seen.len() != 1 << n {
                return Err(format!(
                    "seed {s} ({seed}) covers {} of 2^{n} words",
                    seen.len()
                ));
            }
        }
    }
    // branch images of D2 tile [1/2^32, 1)
    let one = Rational::one();
    let mut covered = Rational::zero();
    for n in 1..=32u64 {
        let left = &one - pow2(n - 1).recip().unwrap();
        let right = &one - pow2(n).recip().unwrap();
        let mid = (&left + &right) / Rational::from_integer(2);
        let lo = dyadic_odometer_map(&left).unwrap();
        let shift = dyadic_odometer_map(&mid).unwrap() - &mid;
        let hi = &right + &shift;
        let len = pow2(n).recip().unwrap();
        if &lo - &left != shift || &hi - &lo != len || hi != pow2(n - 1).recip().unwrap() {
            return Err(format!("D2 branch {n} maps to [{lo},{hi})"));
        }
        covered = covered + len;
    }
    if covered != &one - pow2(32).recip().unwrap() {
        return Err(format!("branch images cover {covered}"));
    }
    Ok("levels k <= 12, 10 seeds with n <= 12, 32 branches".into())
}

fn first_return_formula() -> Check {
    let xs = reduced_fractions(500);
    all_of([
        sweep("T = 1/(a1 - R)", &xs, |x| {
            let a1 = Rational::from_integer(bcf_expand(x).unwrap().digit(0));
            let rhs = (a1 - renyi_map(x).unwrap()).recip().unwrap();
            differ(newman_return_map(x).unwrap(), rhs)
        }),
        sweep("T = F o F", &xs, |x| {
            differ(
                newman_return_map(x).unwrap(),
                newman_map(&newman_map(x).unwrap()).unwrap(),
            )
        }),
    ])
}

fn enumeration_coherence() -> Check {
    let units: Vec<(u64, Rational)> = Enumerator::unit().take(4097).collect();
    let dyadics: Vec<Dyadic> = ratcount::enumeration::dyadic_orbit().take(4097).collect();
    for (n, x) in &units {
        let d = qmark_bcf(x).unwrap();
        if d != dyadics[*n as usize] {
            return Err(format!(
                "n = {n}: ?({x}) = {d}, D2^n(0) = {}",
                dyadics[*n as usize]
            ));
        }
        let idx = index_of_unit(x).unwrap();
        if idx.to_u64() != Some(*n) {
            return Err(format!("index_of_unit({x}) = {idx}, expected {n}"));
        }
        if binary_expand(&d).is_err() {
            return Err(format!("?({x}) = {d} is not below 1"));
        }
    }
    let distinct: HashSet<&Rational> = units[..4096].iter().map(|(_, x)| x).collect();
    if distinct.len() != 4096 {
        return Err(format!("{} distinct values among 4096", distinct.len()));
    }
    Ok("n = 0..=4096".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "Newman orbit equals Calkin-Wilf order",
            newman_calkin_wilf,
            Some(Duration::from_secs(1)),
        ),
        (
            "odometric substitution realizes T",
            action,
            Some(Duration::from_secs(30)),
        ),
        ("? conjugates T to D2", main_conjugacy, None),
        (
            "three ? algorithms agree; inverse round trips",
            qmark_agreement,
            None,
        ),
        (
            "CF to BCF conversion matches BCF expansion",
            cf_to_bcf_agreement,
            None,
        ),
        (
            "jump transformations and hitting times",
            jump_identities,
            None,
        ),
        ("? conjugates J to B", doubling_conjugacy, None),
        ("odometer orbit, cover and tiling", odometer_structure, None),
        (
            "T through the first BCF digit; T = F o F",
            first_return_formula,
            None,
        ),
        ("enumerations agree through ?", enumeration_coherence, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(max)) if took > max => Err(format!("took {took:.2?}, limit {max:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {:>2}: {name} [{detail}] ({took:.2?})",
                i + 1
            ),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
