//! Finite binary words and GF(2) Laurent polynomials.
//!
//! Bit order is fixed crate-wide: the letter at index 0 of a word is the
//! most significant bit of its integer encoding. Rule tables, ring
//! permutations and serialized records all use this convention, so the word
//! `110` encodes as 6 and a window `[l, r]` puts coordinate `l` in the MSB.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Longest word supported by the integer-encoded representation.
pub const MAX_WORD_LEN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitError {
    #[error("unequal lengths: {left} vs {right}")]
    UnequalLengths { left: usize, right: usize },
    #[error("value {value} does not fit in {len} bits")]
    OutOfRange { value: u64, len: usize },
    #[error("word length {0} exceeds the {MAX_WORD_LEN}-bit limit")]
    TooLong(usize),
    #[error("invalid character {0:?} in binary word")]
    InvalidChar(char),
    #[error("index {index} out of bounds for word of length {len}")]
    IndexOutOfBounds { index: usize, len: usize },
    #[error("division by the zero polynomial")]
    ZeroDivisor,
}

/// A finite word over `{0,1}`, at most 64 letters long.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitWord {
    // letter i lives at bit (len - 1 - i)
    bits: u64,
    len: u8,
}

fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl BitWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Result<Self, BitError> {
        Self::from_int(0, len)
    }

    pub fn ones(len: usize) -> Result<Self, BitError> {
        if len > MAX_WORD_LEN {
            return Err(BitError::TooLong(len));
        }
        Ok(Self {
            bits: low_mask(len),
            len: len as u8,
        })
    }

    /// Builds a word from its MSB-first integer encoding.
    pub fn from_int(value: u64, len: usize) -> Result<Self, BitError> {
        if len > MAX_WORD_LEN {
            return Err(BitError::TooLong(len));
        }
        if value & !low_mask(len) != 0 {
            return Err(BitError::OutOfRange { value, len });
        }
        Ok(Self {
            bits: value,
            len: len as u8,
        })
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self, BitError> {
        let mut word = Self::empty();
        for b in bits {
            word = word.push(b)?;
        }
        Ok(word)
    }

    pub fn to_int(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at index `i` (0-indexed from the left).
    pub fn get(&self, i: usize) -> Option<bool> {
        (i < self.len()).then(|| (self.bits >> (self.len() - 1 - i)) & 1 == 1)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.get(i).expect("bit index out of range")
    }

    pub fn with_bit(&self, i: usize, value: bool) -> Result<Self, BitError> {
        if i >= self.len() {
            return Err(BitError::IndexOutOfBounds {
                index: i,
                len: self.len(),
            });
        }
        let mask = 1u64 << (self.len() - 1 - i);
        let bits = if value {
            self.bits | mask
        } else {
            self.bits & !mask
        };
        Ok(Self { bits, ..*self })
    }

    pub fn flip(&self, i: usize) -> Result<Self, BitError> {
        let current = self.get(i).ok_or(BitError::IndexOutOfBounds {
            index: i,
            len: self.len(),
        })?;
        self.with_bit(i, !current)
    }

    /// Appends a letter on the right.
    pub fn push(&self, b: bool) -> Result<Self, BitError> {
        if self.len() == MAX_WORD_LEN {
            return Err(BitError::TooLong(MAX_WORD_LEN + 1));
        }
        Ok(Self {
            bits: (self.bits << 1) | b as u64,
            len: self.len + 1,
        })
    }

    pub fn concat(&self, other: &BitWord) -> Result<Self, BitError> {
        let len = self.len() + other.len();
        if len > MAX_WORD_LEN {
            return Err(BitError::TooLong(len));
        }
        let bits = if other.len() == 64 {
            other.bits
        } else {
            (self.bits << other.len()) | other.bits
        };
        Ok(Self {
            bits,
            len: len as u8,
        })
    }

    /// The subword on `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.len(), "slice out of range");
        let len = end - start;
        Self {
            bits: (self.bits >> (self.len() - end)) & low_mask(len),
            len: len as u8,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| self.bit(i))
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Indices of the letters equal to 1, left to right.
    pub fn ones_positions(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.bit(i)).collect()
    }

    pub fn xor(&self, other: &BitWord) -> Result<Self, BitError> {
        if self.len != other.len {
            return Err(BitError::UnequalLengths {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Self {
            bits: self.bits ^ other.bits,
            len: self.len,
        })
    }

    pub fn reversed(&self) -> Self {
        let bits = if self.len == 0 {
            0
        } else {
            self.bits.reverse_bits() >> (64 - self.len())
        };
        Self { bits, ..*self }
    }

    /// Every word of length `len`, in increasing integer order.
    pub fn all(len: usize) -> impl Iterator<Item = BitWord> {
        assert!(len < 64, "enumeration limited to words shorter than 64");
        (0..1u64 << len).map(move |v| BitWord {
            bits: v,
            len: len as u8,
        })
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

impl FromStr for BitWord {
    type Err = BitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut word = BitWord::empty();
        for c in s.chars() {
            match c {
                '0' => word = word.push(false)?,
                '1' => word = word.push(true)?,
                other => return Err(BitError::InvalidChar(other)),
            }
        }
        Ok(word)
    }
}

impl Serialize for BitWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Characteristic word of the coordinates where `u` and `v` differ.
pub fn diff_set(u: &BitWord, v: &BitWord) -> Result<BitWord, BitError> {
    u.xor(v)
}

pub fn word_to_int(w: &BitWord) -> u64 {
    w.to_int()
}

pub fn int_to_word(k: u64, len: usize) -> Result<BitWord, BitError> {
    BitWord::from_int(k, len)
}

/// A Laurent polynomial over GF(2), kept normalized: the lowest stored
/// coefficient is 1 unless the polynomial is zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gf2Poly {
    // bit j is the coefficient of x^(low + j)
    coeffs: u128,
    low: i64,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(coeffs: u128, low: i64) -> Self {
        if coeffs == 0 {
            return Self::zero();
        }
        let tz = coeffs.trailing_zeros();
        Self {
            coeffs: coeffs >> tz,
            low: low + tz as i64,
        }
    }

    /// Reads a word as a polynomial: letter `i` is the coefficient of
    /// `x^(offset + i)`.
    pub fn from_word(w: &BitWord, offset: i64) -> Self {
        let coeffs = w
            .iter()
            .enumerate()
            .filter(|(_, b)| *b)
            .fold(0u128, |acc, (i, _)| acc | (1u128 << i));
        Self::new(coeffs, offset)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == 0
    }

    /// Degree span (highest minus lowest exponent); `None` for zero.
    pub fn span(&self) -> Option<u32> {
        (!self.is_zero()).then(|| 127 - self.coeffs.leading_zeros())
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn coefficients(&self) -> u128 {
        self.coeffs
    }

    /// Remainder of the coefficient polynomials, offsets dropped.
    fn rem(mut dividend: u128, divisor: u128) -> u128 {
        let dspan = 127 - divisor.leading_zeros();
        while dividend != 0 {
            let span = 127 - dividend.leading_zeros();
            if span < dspan {
                break;
            }
            dividend ^= divisor << (span - dspan);
        }
        dividend
    }
}

/// Whether `dividend` lies in the shift-invariant span of `divisor`, i.e.
/// whether the divisor polynomial divides the dividend up to a power of x.
pub fn gf2_divides(divisor: &Gf2Poly, dividend: &Gf2Poly) -> Result<bool, BitError> {
    if divisor.is_zero() {
        return Err(BitError::ZeroDivisor);
    }
    if dividend.is_zero() {
        return Ok(true);
    }
    Ok(Gf2Poly::rem(dividend.coeffs, divisor.coeffs) == 0)
}
