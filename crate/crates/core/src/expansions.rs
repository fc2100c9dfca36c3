//! Numeration systems for numbers in `[0, 1)`: classical continued
//! fractions, backward continued fractions, binary words and their block
//! codes, with the conversions between them.
//!
//! Text grammars:
//!
//! | type            | example          | zero       |
//! |-----------------|------------------|------------|
//! | [`CfExpansion`] | `[2,2]c`         | `[]c`      |
//! | [`BcfExpansion`]| `[2,3;2...]`     | `[;2...]`  |
//! | [`BinaryWord`]  | `0.011`          | `0.0`      |
//! | [`BlockSequence`]| `(0 2)`         | `()`       |
//!
//! A backward expansion written without the `;2...` tail, e.g. `[2,2]`, is
//! read as the finite form `1 - 1/(2 - 1/2)` and converted to the canonical
//! infinite form.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{big_to_u64, Dyadic, Rational};

fn check_unit(op: &'static str, x: &Rational) -> Result<()> {
    if x.in_unit_interval() {
        Ok(())
    } else {
        Err(Error::domain(op, x, "[0,1)"))
    }
}

fn parse_list(what: &'static str, input: &str, body: &str, sep: char) -> Result<Vec<u64>> {
    body.split(sep)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|e| Error::parse(what, input, e)))
        .collect()
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

// ---------------------------------------------------------------------------
// Classical continued fractions

/// A finite continued fraction `1/(m1 + 1/(m2 + ...))` of a number in `[0, 1)`.
///
/// Canonical form: all digits `>= 1` and the last digit `>= 2`. The empty
/// expansion is zero.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CfRepr", into = "CfRepr")]
pub struct CfExpansion {
    digits: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct CfRepr {
    cf: Vec<u64>,
}

impl CfExpansion {
    /// Canonicalizes `digits`, folding a trailing `[.., m, 1]` into `[.., m+1]`.
    ///
    /// `[1]` alone is the number 1, which lies outside `[0, 1)`.
    pub fn new(mut digits: Vec<u64>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d == 0) {
            return Err(Error::InvalidDigit {
                what: "continued fraction",
                digit: d,
            });
        }
        if digits.len() >= 2 && digits.last() == Some(&1) {
            digits.pop();
            *digits.last_mut().unwrap() += 1;
        }
        if digits == [1] {
            return Err(Error::domain("continued fraction", "[1]c", "[0,1)"));
        }
        Ok(CfExpansion { digits })
    }

    pub fn zero() -> Self {
        CfExpansion { digits: Vec::new() }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Drops the first digit: the action of the Gauss map.
    pub fn shift(&self) -> Self {
        CfExpansion {
            digits: self.digits.iter().skip(1).copied().collect(),
        }
    }
}

impl TryFrom<CfRepr> for CfExpansion {
    type Error = Error;
    fn try_from(r: CfRepr) -> Result<Self> {
        CfExpansion::new(r.cf)
    }
}

impl From<CfExpansion> for CfRepr {
    fn from(e: CfExpansion) -> Self {
        CfRepr { cf: e.digits }
    }
}

impl fmt::Display for CfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]c", join(&self.digits, ","))
    }
}

impl fmt::Debug for CfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CfExpansion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix("]c"))
            .ok_or_else(|| Error::parse("continued fraction", s, "expected [m1,m2,...]c"))?;
        CfExpansion::new(parse_list("continued fraction", s, body, ',')?)
    }
}

/// Continued fraction digits of `x` in `[0, 1)`, one Gauss-map step per digit.
pub fn cf_expand(x: &Rational) -> Result<CfExpansion> {
    check_unit("cf_expand", x)?;
    let mut p = x.numer().clone();
    let mut q = x.denom().clone();
    let mut digits = Vec::new();
    while !p.is_zero() {
        // 1/x = q/p, so the digit is q div p and G(x) = (q mod p)/p
        let (a, r) = q.div_rem(&p);
        digits.push(big_to_u64(&a, x)?);
        q = std::mem::replace(&mut p, r);
    }
    Ok(CfExpansion { digits })
}

/// Evaluates a finite continued fraction from the bottom up.
pub fn cf_eval(e: &CfExpansion) -> Rational {
    let mut p = BigInt::zero();
    let mut q = BigInt::one();
    for &m in e.digits.iter().rev() {
        // 1/(m + p/q) = q/(mq + p)
        let next_q = BigInt::from(m) * &q + &p;
        p = std::mem::replace(&mut q, next_q);
    }
    Rational::new(p, q)
}

// ---------------------------------------------------------------------------
// Backward continued fractions

/// A backward continued fraction `1 - 1/(a1 - 1/(a2 - ...))` with digits
/// `a_i >= 2`, stored as a finite head followed by an implicit infinite
/// tail of 2's.
///
/// The head is minimal: when nonempty its last digit is at least 3. The
/// empty head is `[2,2,2,...] = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BcfRepr", into = "BcfRepr")]
pub struct BcfExpansion {
    head: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct BcfRepr {
    bcf_head: Vec<u64>,
}

impl BcfExpansion {
    /// Builds the infinite expansion `head, 2, 2, ...`, trimming any 2's at
    /// the end of `head` into the tail.
    pub fn new(mut head: Vec<u64>) -> Result<Self> {
        if let Some(&d) = head.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDigit {
                what: "backward continued fraction",
                digit: d,
            });
        }
        while head.last() == Some(&2) {
            head.pop();
        }
        Ok(BcfExpansion { head })
    }

    /// Converts the finite expansion `[a1, ..., an]` into the infinite one
    /// `[a1, ..., an + 1, 2, 2, ...]` of the same number.
    pub fn from_finite(mut digits: Vec<u64>) -> Result<Self> {
        match digits.last_mut() {
            None => Err(Error::parse(
                "backward continued fraction",
                "[]",
                "a finite expansion needs at least one digit",
            )),
            Some(last) => {
                *last = last
                    .checked_add(1)
                    .ok_or_else(|| Error::DigitOverflow("backward continued fraction".into()))?;
                BcfExpansion::new(digits)
            }
        }
    }

    pub fn zero() -> Self {
        BcfExpansion { head: Vec::new() }
    }

    pub fn head(&self) -> &[u64] {
        &self.head
    }

    /// The `i`-th digit (0-based) of the infinite expansion.
    pub fn digit(&self, i: usize) -> u64 {
        self.head.get(i).copied().unwrap_or(2)
    }

    /// Drops the first digit: the action of the Renyi map.
    pub fn shift(&self) -> Self {
        BcfExpansion {
            head: self.head.iter().skip(1).copied().collect(),
        }
    }
}

impl TryFrom<BcfRepr> for BcfExpansion {
    type Error = Error;
    fn try_from(r: BcfRepr) -> Result<Self> {
        BcfExpansion::new(r.bcf_head)
    }
}

impl From<BcfExpansion> for BcfRepr {
    fn from(e: BcfExpansion) -> Self {
        BcfRepr { bcf_head: e.head }
    }
}

impl fmt::Display for BcfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};2...]", join(&self.head, ","))
    }
}

impl fmt::Debug for BcfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BcfExpansion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let what = "backward continued fraction";
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::parse(what, s, "expected [a1,...,ak;2...] or [a1,...,an]"))?;
        match body.split_once(';') {
            Some((head, tail)) => {
                if tail.trim() != "2..." {
                    return Err(Error::parse(what, s, "the tail must be written ;2..."));
                }
                BcfExpansion::new(parse_list(what, s, head, ',')?)
            }
            None => BcfExpansion::from_finite(parse_list(what, s, body, ',')?),
        }
    }
}

/// Backward continued fraction digits of `x` in `[0, 1)` by the recursion
/// `a = [1/(1-x)] + 1`, `x <- R(x)`, stopping once the iterate reaches 0.
pub fn bcf_expand(x: &Rational) -> Result<BcfExpansion> {
    check_unit("bcf_expand", x)?;
    let mut p = x.numer().clone();
    let mut q = x.denom().clone();
    let mut head = Vec::new();
    while !p.is_zero() {
        // 1/(1-x) = q/(q-p)
        let d = &q - &p;
        let (a, r) = q.div_rem(&d);
        let digit = big_to_u64(&a, x)?
            .checked_add(1)
            .ok_or_else(|| Error::DigitOverflow(x.to_string()))?;
        head.push(digit);
        p = r;
        q = d;
    }
    Ok(BcfExpansion { head })
}

/// Evaluates right to left: `v = 1 - 1/(a - 1 + v)`, starting from the
/// value 0 of the 2-tail.
pub fn bcf_eval(e: &BcfExpansion) -> Rational {
    let mut p = BigInt::zero();
    let mut q = BigInt::one();
    for &a in e.head.iter().rev() {
        // 1 - q/((a-1)q + p) = ((a-2)q + p)/((a-1)q + p)
        let a = BigInt::from(a);
        let base = (&a - 1u32) * &q + &p;
        p = &base - &q;
        q = base;
    }
    Rational::new(p, q)
}

/// Rewrites a continued fraction as a backward continued fraction: each
/// digit pair `(m, n)` becomes `m - 1` twos followed by `n + 2`.
///
/// An odd-length expansion is first brought to even length by writing its
/// last digit `m` as `m - 1, 1`.
pub fn cf_to_bcf(e: &CfExpansion) -> BcfExpansion {
    let mut digits = e.digits.clone();
    if digits.len() % 2 == 1 {
        let last = digits.last_mut().unwrap();
        *last -= 1;
        digits.push(1);
    }
    let mut head = Vec::new();
    for pair in digits.chunks_exact(2) {
        head.extend(std::iter::repeat_n(2, (pair[0] - 1) as usize));
        head.push(pair[1] + 2);
    }
    BcfExpansion { head }
}

/// Inverse of [`cf_to_bcf`]: a run of `r` twos closed by a digit `d >= 3`
/// becomes the pair `(r + 1, d - 2)`.
pub fn bcf_to_cf(e: &BcfExpansion) -> CfExpansion {
    let mut digits = Vec::new();
    let mut run = 0u64;
    for &a in &e.head {
        if a == 2 {
            run += 1;
        } else {
            digits.push(run + 1);
            digits.push(a - 2);
            run = 0;
        }
    }
    CfExpansion::new(digits).expect("a canonical head yields a canonical continued fraction")
}

// ---------------------------------------------------------------------------
// Binary words and block codes

/// A finite binary word `0.b1 b2 ... bm` followed by infinitely many zeros.
/// Canonical: the last stored bit is 1; the empty word is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "BitsRepr", into = "BitsRepr")]
pub struct BinaryWord {
    bits: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct BitsRepr {
    bits: String,
}

pub(crate) fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub(crate) fn parse_bits(what: &'static str, input: &str, s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::parse(what, input, "bits must be 0 or 1")),
        })
        .collect()
}

impl BinaryWord {
    /// Drops trailing zeros.
    pub fn new(mut bits: Vec<bool>) -> Self {
        while bits.last() == Some(&false) {
            bits.pop();
        }
        BinaryWord { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn to_dyadic(&self) -> Dyadic {
        let mut num = BigUint::zero();
        for &b in &self.bits {
            num <<= 1;
            if b {
                num += 1u32;
            }
        }
        Dyadic::new(num, self.bits.len() as u64)
    }

    /// The bits alone, without the `0.` prefix.
    pub fn bit_string(&self) -> String {
        bits_to_string(&self.bits)
    }
}

impl TryFrom<BitsRepr> for BinaryWord {
    type Error = Error;
    fn try_from(r: BitsRepr) -> Result<Self> {
        Ok(BinaryWord::new(parse_bits(
            "binary word",
            &r.bits,
            &r.bits,
        )?))
    }
}

impl From<BinaryWord> for BitsRepr {
    fn from(w: BinaryWord) -> Self {
        BitsRepr {
            bits: w.bit_string(),
        }
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            f.write_str("0.0")
        } else {
            write!(f, "0.{}", self.bit_string())
        }
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix("0.")
            .ok_or_else(|| Error::parse("binary word", s, "expected 0.bits"))?;
        Ok(BinaryWord::new(parse_bits("binary word", s, body)?))
    }
}

/// The terminating binary expansion of a dyadic in `[0, 1)`.
pub fn binary_expand(x: &Dyadic) -> Result<BinaryWord> {
    if !x.below_one() {
        return Err(Error::domain("binary_expand", x, "[0,1)"));
    }
    let k = x.exp() as usize;
    let bits = (0..k).rev().map(|i| x.numer().bit(i as u64)).collect();
    Ok(BinaryWord::new(bits))
}

/// The first `depth` binary digits of any rational in `[0, 1)`, by repeated
/// doubling. Exact for the digits it returns; no trailing-zero trimming.
pub fn binary_prefix(x: &Rational, depth: usize) -> Result<Vec<bool>> {
    check_unit("binary_prefix", x)?;
    let q = x.denom().clone();
    let mut p = x.numer().clone();
    let mut bits = Vec::with_capacity(depth);
    for _ in 0..depth {
        p <<= 1;
        if p >= q {
            p -= &q;
            bits.push(true);
        } else {
            bits.push(false);
        }
    }
    Ok(bits)
}

/// Block indices `k1, k2, ...` of a binary word written as a concatenation
/// of blocks `b_k` (`k` ones then a zero), followed implicitly by infinitely
/// many `b_0` blocks. Canonical: the last stored index is positive.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "BlocksRepr", into = "BlocksRepr")]
pub struct BlockSequence {
    blocks: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct BlocksRepr {
    blocks: Vec<u64>,
}

impl BlockSequence {
    /// Drops trailing zero indices into the implicit tail.
    pub fn new(mut blocks: Vec<u64>) -> Self {
        while blocks.last() == Some(&0) {
            blocks.pop();
        }
        BlockSequence { blocks }
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    /// The `i`-th index (0-based) of the infinite sequence.
    pub fn index(&self, i: usize) -> u64 {
        self.blocks.get(i).copied().unwrap_or(0)
    }
}

impl TryFrom<BlocksRepr> for BlockSequence {
    type Error = Error;
    fn try_from(r: BlocksRepr) -> Result<Self> {
        Ok(BlockSequence::new(r.blocks))
    }
}

impl From<BlockSequence> for BlocksRepr {
    fn from(s: BlockSequence) -> Self {
        BlocksRepr { blocks: s.blocks }
    }
}

impl fmt::Display for BlockSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.blocks, " "))
    }
}

impl fmt::Debug for BlockSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BlockSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::parse("block sequence", s, "expected (k1 k2 ... kn)"))?;
        Ok(BlockSequence::new(parse_list(
            "block sequence",
            s,
            body,
            ' ',
        )?))
    }
}

/// Greedy parse of `w` into blocks. Ones still open at the end of the word
/// are closed by the first zero of the implicit tail.
pub fn blocks_encode(w: &BinaryWord) -> BlockSequence {
    let mut blocks = Vec::new();
    let mut ones = 0u64;
    for &b in &w.bits {
        if b {
            ones += 1;
        } else {
            blocks.push(ones);
            ones = 0;
        }
    }
    if ones > 0 {
        blocks.push(ones);
    }
    BlockSequence::new(blocks)
}

/// Concatenates the blocks and drops trailing zeros.
pub fn blocks_decode(s: &BlockSequence) -> BinaryWord {
    let mut bits = Vec::new();
    for &k in &s.blocks {
        bits.extend(std::iter::repeat_n(true, k as usize));
        bits.push(false);
    }
    BinaryWord::new(bits)
}

/// Adds 2 to every block index; the `b_0` tail becomes the 2-tail.
pub fn blocks_to_bcf(s: &BlockSequence) -> BcfExpansion {
    BcfExpansion {
        head: s.blocks.iter().map(|k| k + 2).collect(),
    }
}

/// Inverse of [`blocks_to_bcf`].
pub fn bcf_to_blocks(e: &BcfExpansion) -> BlockSequence {
    BlockSequence {
        blocks: e.head.iter().map(|a| a - 2).collect(),
    }
}

// ---------------------------------------------------------------------------

/// A value written in any of the expansion grammars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Notation {
    Cf(CfExpansion),
    Bcf(BcfExpansion),
    Binary(BinaryWord),
    Blocks(BlockSequence),
}

impl Notation {
    /// The number the expansion denotes. Block sequences are read as the
    /// binary word they encode.
    pub fn value(&self) -> Rational {
        match self {
            Notation::Cf(e) => cf_eval(e),
            Notation::Bcf(e) => bcf_eval(e),
            Notation::Binary(w) => w.to_dyadic().to_rational(),
            Notation::Blocks(s) => blocks_decode(s).to_dyadic().to_rational(),
        }
    }
}

impl FromStr for Notation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.ends_with("]c") {
            t.parse().map(Notation::Cf)
        } else if t.starts_with('[') {
            t.parse().map(Notation::Bcf)
        } else if t.starts_with('(') {
            t.parse().map(Notation::Blocks)
        } else if t.starts_with("0.") {
            t.parse().map(Notation::Binary)
        } else {
            Err(Error::parse(
                "expansion",
                s,
                "expected [..]c, [..;2...], 0.bits or (k1 ... kn)",
            ))
        }
    }
}

impl fmt::Display for Notation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Notation::Cf(e) => e.fmt(f),
            Notation::Bcf(e) => e.fmt(f),
            Notation::Binary(w) => w.fmt(f),
            Notation::Blocks(s) => s.fmt(f),
        }
    }
}
