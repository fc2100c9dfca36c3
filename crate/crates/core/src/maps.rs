//! Interval maps as exact operations on rationals.
//!
//! Every map implements [`IntervalMap`] and is registered under its short
//! symbol (`F`, `T`, `R`, `G`, `B`, `R2`, `J`, `D2`) in a [`MapRegistry`].
//! Partitions are closed on the left and open on the right; the doubling
//! map's second branch owns `1/2`, and so does the backward Farey map's.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{big_to_u64, Rational};
use crate::registry::Registry;

/// Tags of the built-in maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapId {
    /// Newman's map `1/(2[x] - x + 1)` on `[0, inf)`.
    Newman,
    /// First return of the Newman map to `[0, 1)`.
    NewmanReturn,
    /// Renyi map, the shift of backward continued fractions.
    Renyi,
    /// Gauss map, the shift of continued fractions.
    Gauss,
    /// Doubling map.
    Doubling,
    /// Jump transformation of the doubling map into `[0, 1/2)`.
    LinearRenyi,
    /// Backward Farey map.
    BackwardFarey,
    /// Interval realization of the dyadic odometer.
    DyadicOdometer,
}

impl MapId {
    pub const ALL: [MapId; 8] = [
        MapId::Newman,
        MapId::NewmanReturn,
        MapId::Renyi,
        MapId::Gauss,
        MapId::Doubling,
        MapId::LinearRenyi,
        MapId::BackwardFarey,
        MapId::DyadicOdometer,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            MapId::Newman => "F",
            MapId::NewmanReturn => "T",
            MapId::Renyi => "R",
            MapId::Gauss => "G",
            MapId::Doubling => "B",
            MapId::LinearRenyi => "R2",
            MapId::BackwardFarey => "J",
            MapId::DyadicOdometer => "D2",
        }
    }

    /// The built-in implementation.
    pub fn map(self) -> &'static dyn IntervalMap {
        match self {
            MapId::Newman => &Newman,
            MapId::NewmanReturn => &NewmanReturn,
            MapId::Renyi => &Renyi,
            MapId::Gauss => &Gauss,
            MapId::Doubling => &Doubling,
            MapId::LinearRenyi => &LinearRenyi,
            MapId::BackwardFarey => &BackwardFarey,
            MapId::DyadicOdometer => &DyadicOdometer,
        }
    }
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for MapId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MapId::ALL
            .into_iter()
            .find(|id| id.symbol().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Unknown {
                kind: "map",
                name: s.to_string(),
                expected: MapId::ALL.map(MapId::symbol).join(", "),
            })
    }
}

/// An interval `lower..upper` with per-end closedness; `upper = None` is
/// `+inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    pub lower: Rational,
    pub lower_closed: bool,
    pub upper: Option<Rational>,
    pub upper_closed: bool,
}

impl Domain {
    fn new(lower: i64, lower_closed: bool, upper: Option<i64>, upper_closed: bool) -> Self {
        Domain {
            lower: lower.into(),
            lower_closed,
            upper: upper.map(Rational::from),
            upper_closed,
        }
    }

    /// `[0, 1)`
    pub fn unit_half_open() -> Self {
        Domain::new(0, true, Some(1), false)
    }

    /// `[0, 1]`
    pub fn unit_closed() -> Self {
        Domain::new(0, true, Some(1), true)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lower_closed {
            *x >= self.lower
        } else {
            *x > self.lower
        };
        let below = match &self.upper {
            None => true,
            Some(u) if self.upper_closed => x <= u,
            Some(u) => x < u,
        };
        above && below
    }

    pub(crate) fn check(&self, op: &'static str, x: &Rational) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::domain(op, x, self))
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lower_closed { '[' } else { '(' };
        match &self.upper {
            None => write!(f, "{open}{},inf)", self.lower),
            Some(u) => {
                let close = if self.upper_closed { ']' } else { ')' };
                write!(f, "{open}{},{u}{close}", self.lower)
            }
        }
    }
}

/// An exact map on a rational interval.
pub trait IntervalMap: Send + Sync {
    fn id(&self) -> MapId;

    fn domain(&self) -> Domain;

    /// Evaluates the map; `x` is already known to lie in the domain.
    fn eval(&self, x: &Rational) -> Rational;

    fn name(&self) -> &'static str {
        self.id().symbol()
    }

    fn apply(&self, x: &Rational) -> Result<Rational> {
        self.domain().check(self.name(), x)?;
        Ok(self.eval(x))
    }
}

fn one() -> Rational {
    Rational::one()
}

/// `1/(1-x)` for `x < 1`.
fn inv_one_minus(x: &Rational) -> Rational {
    Rational::new(x.denom().clone(), x.denom() - x.numer())
}

fn pow2(k: u64) -> Rational {
    Rational::from_integer(BigInt::one() << k)
}

pub struct Newman;
pub struct NewmanReturn;
pub struct Renyi;
pub struct Gauss;
pub struct Doubling;
pub struct LinearRenyi;
pub struct BackwardFarey;
pub struct DyadicOdometer;

impl IntervalMap for Newman {
    fn id(&self) -> MapId {
        MapId::Newman
    }
    fn domain(&self) -> Domain {
        Domain::new(0, true, None, false)
    }
    fn eval(&self, x: &Rational) -> Rational {
        let n = Rational::from_integer(x.floor());
        (&n + &n - x + one()).recip().expect("2[x] - x + 1 >= 1")
    }
}

impl IntervalMap for NewmanReturn {
    fn id(&self) -> MapId {
        MapId::NewmanReturn
    }
    fn domain(&self) -> Domain {
        Domain::unit_half_open()
    }
    fn eval(&self, x: &Rational) -> Rational {
        let y = inv_one_minus(x);
        let n = Rational::from_integer(y.floor());
        (&n + &n + one() - y).recip().expect("2[y] + 1 - y > 0")
    }
}

impl IntervalMap for Renyi {
    fn id(&self) -> MapId {
        MapId::Renyi
    }
    fn domain(&self) -> Domain {
        Domain::unit_half_open()
    }
    fn eval(&self, x: &Rational) -> Rational {
        inv_one_minus(x).fract()
    }
}

impl IntervalMap for Gauss {
    fn id(&self) -> MapId {
        MapId::Gauss
    }
    fn domain(&self) -> Domain {
        Domain::new(0, false, Some(1), true)
    }
    fn eval(&self, x: &Rational) -> Rational {
        x.recip().expect("x > 0").fract()
    }
}

impl IntervalMap for Doubling {
    fn id(&self) -> MapId {
        MapId::Doubling
    }
    fn domain(&self) -> Domain {
        Domain::unit_closed()
    }
    fn eval(&self, x: &Rational) -> Rational {
        let twice = x + x;
        if twice < one() {
            twice
        } else {
            twice - one()
        }
    }
}

impl IntervalMap for LinearRenyi {
    fn id(&self) -> MapId {
        MapId::LinearRenyi
    }
    fn domain(&self) -> Domain {
        Domain::unit_half_open()
    }
    fn eval(&self, x: &Rational) -> Rational {
        // 2 - 2 [y]_2 / y with y = 1/(1-x)
        let y = inv_one_minus(x);
        let k = y.pow2_floor_exp().expect("1/(1-x) >= 1");
        Rational::from(2) - pow2(k + 1) * (one() - x)
    }
}

impl IntervalMap for BackwardFarey {
    fn id(&self) -> MapId {
        MapId::BackwardFarey
    }
    fn domain(&self) -> Domain {
        Domain::unit_closed()
    }
    fn eval(&self, x: &Rational) -> Rational {
        let twice = x + x;
        if twice < one() {
            x / (one() - x)
        } else {
            (twice - one()) / x
        }
    }
}

impl IntervalMap for DyadicOdometer {
    fn id(&self) -> MapId {
        MapId::DyadicOdometer
    }
    fn domain(&self) -> Domain {
        Domain::unit_half_open()
    }
    fn eval(&self, x: &Rational) -> Rational {
        // x lies in I_n exactly when [1/(1-x)]_2 = 2^(n-1)
        let n = inv_one_minus(x).pow2_floor_exp().expect("1/(1-x) >= 1") + 1;
        x + Rational::new(3, BigInt::one() << n) - one()
    }
}

/// Interval maps keyed by symbol.
pub type MapRegistry = Registry<dyn IntervalMap>;

impl Registry<dyn IntervalMap> {
    /// All eight built-in maps, in [`MapId::ALL`] order.
    pub fn builtin() -> Self {
        let mut reg = Registry::new("map");
        reg.register("F", Arc::new(Newman) as Arc<dyn IntervalMap>);
        reg.register("T", Arc::new(NewmanReturn));
        reg.register("R", Arc::new(Renyi));
        reg.register("G", Arc::new(Gauss));
        reg.register("B", Arc::new(Doubling));
        reg.register("R2", Arc::new(LinearRenyi));
        reg.register("J", Arc::new(BackwardFarey));
        reg.register("D2", Arc::new(DyadicOdometer));
        reg
    }
}

pub fn newman_map(x: &Rational) -> Result<Rational> {
    Newman.apply(x)
}

pub fn newman_return_map(x: &Rational) -> Result<Rational> {
    NewmanReturn.apply(x)
}

pub fn renyi_map(x: &Rational) -> Result<Rational> {
    Renyi.apply(x)
}

pub fn gauss_map(x: &Rational) -> Result<Rational> {
    Gauss.apply(x)
}

pub fn doubling_map(x: &Rational) -> Result<Rational> {
    Doubling.apply(x)
}

pub fn linear_renyi_map(x: &Rational) -> Result<Rational> {
    LinearRenyi.apply(x)
}

pub fn backward_farey_map(x: &Rational) -> Result<Rational> {
    BackwardFarey.apply(x)
}

pub fn dyadic_odometer_map(x: &Rational) -> Result<Rational> {
    DyadicOdometer.apply(x)
}

/// First hitting time of `P_1 = [0, 1/2)` under the backward Farey map,
/// `[1/(1-x)]`.
pub fn renyi_hitting_time(x: &Rational) -> Result<u64> {
    Domain::unit_half_open().check("renyi_hitting_time", x)?;
    big_to_u64(&inv_one_minus(x).floor(), x)
}

/// First hitting time of `[0, 1/2)` under the doubling map, read off as
/// `k + 1` where `[1/(1-x)]_2 = 2^k`.
pub fn doubling_hitting_time(x: &Rational) -> Result<u64> {
    Domain::unit_half_open().check("doubling_hitting_time", x)?;
    Ok(inv_one_minus(x).pow2_floor_exp()? + 1)
}

/// The branch of the Renyi map on `P_n = [(n-1)/n, n/(n+1))`:
/// `(n x - (n - 1))/(1 - x)`.
pub fn renyi_branch(n: u64, x: &Rational) -> Result<Rational> {
    if n == 0 {
        return Err(Error::domain("renyi_branch", "n = 0", "n >= 1"));
    }
    let lo = Rational::new(n - 1, n);
    let hi = Rational::new(n, n + 1);
    if *x < lo || *x >= hi {
        return Err(Error::domain("renyi_branch", x, format!("[{lo},{hi})")));
    }
    let n = Rational::from_integer(n);
    Ok((&n * x - (n - one())) / (one() - x))
}

/// `[x, m(x), ..., m^n(x)]`. A point leaving the domain aborts with the
/// step at which it happened.
pub fn orbit(map: &dyn IntervalMap, x: &Rational, n: u64) -> Result<Vec<Rational>> {
    OrbitIter::new(map, x.clone())
        .take(n as usize + 1)
        .collect()
}

/// Lazy orbit `x, m(x), m^2(x), ...`. The seed must lie in the domain;
/// later points are checked only when their successor is asked for. Yields
/// one error and then stops if an iterate leaves the domain.
pub struct OrbitIter<'a> {
    map: &'a dyn IntervalMap,
    current: Option<Rational>,
    step: u64,
    failed: bool,
}

impl<'a> OrbitIter<'a> {
    pub fn new(map: &'a dyn IntervalMap, seed: Rational) -> Self {
        OrbitIter {
            map,
            current: Some(seed),
            step: 0,
            failed: false,
        }
    }
}

impl Iterator for OrbitIter<'_> {
    type Item = Result<Rational>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let x = self.current.take()?;
        if !self.map.domain().contains(&x) {
            self.failed = true;
            return Some(Err(Error::AtStep {
                step: self.step.saturating_sub(1),
                source: Box::new(Error::domain(self.map.name(), &x, self.map.domain())),
            }));
        }
        let out = if self.step == 0 { x } else { self.map.eval(&x) };
        self.current = Some(out.clone());
        self.step += 1;
        Some(Ok(out))
    }
}
