//! The symbolic dyadic odometer (add one with carry), its action on block
//! codes, and the matching substitution on backward continued fraction
//! digits.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::expansions::{bits_to_string, parse_bits, BcfExpansion, BinaryWord, BlockSequence};

/// A 0/1 sequence with finite support, positions 1..m stored and zeros
/// after. Canonical: the last stored bit is 1.
///
/// The all-ones sequence has no representative here, so the odometer never
/// wraps around.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSequence {
    bits: Vec<bool>,
}

impl BitSequence {
    pub fn new(mut bits: Vec<bool>) -> Self {
        while bits.last() == Some(&false) {
            bits.pop();
        }
        BitSequence { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Bit at 0-based position `i` of the infinite sequence.
    pub fn bit(&self, i: usize) -> bool {
        self.bits.get(i).copied().unwrap_or(false)
    }

    /// The first `n` bits, padding with the zero tail.
    pub fn prefix(&self, n: usize) -> Vec<bool> {
        (0..n).map(|i| self.bit(i)).collect()
    }
}

impl From<BinaryWord> for BitSequence {
    fn from(w: BinaryWord) -> Self {
        BitSequence::new(w.bits().to_vec())
    }
}

impl From<BitSequence> for BinaryWord {
    fn from(s: BitSequence) -> Self {
        BinaryWord::new(s.bits)
    }
}

impl fmt::Display for BitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits_to_string(&self.bits))
    }
}

impl fmt::Debug for BitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitSequence({self})")
    }
}

impl FromStr for BitSequence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(BitSequence::new(parse_bits("bit sequence", s, s.trim())?))
    }
}

/// `D(1^k 0 w) = 0^k 1 w`.
pub fn odometer(w: &BitSequence) -> BitSequence {
    let mut bits = w.bits.clone();
    let k = bits.iter().take_while(|&&b| b).count();
    bits[..k].fill(false);
    if k == bits.len() {
        bits.push(true);
    } else {
        bits[k] = true;
    }
    BitSequence { bits }
}

/// The odometer read through the block code:
/// `(k1, k2, rest) -> (0 repeated k1 times, k2 + 1, rest)`.
pub fn block_odometer(s: &BlockSequence) -> BlockSequence {
    let blocks = s.blocks();
    let k1 = s.index(0) as usize;
    let k2 = s.index(1);
    let mut out = vec![0; k1];
    out.push(k2 + 1);
    out.extend(blocks.iter().skip(2));
    BlockSequence::new(out)
}

/// `(a1, a2, rest) -> (2 repeated a1 - 2 times, a2 + 1, rest)`, with digits
/// past the head read from the 2-tail.
pub fn odometric_substitution(e: &BcfExpansion) -> BcfExpansion {
    let a1 = e.digit(0);
    let a2 = e.digit(1);
    let mut head = vec![2; (a1 - 2) as usize];
    head.push(a2 + 1);
    head.extend(e.head().iter().skip(2));
    BcfExpansion::new(head).expect("substitution keeps digits >= 2")
}
