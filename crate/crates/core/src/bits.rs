//! Plain bit sequences with prefix-count rank.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("rank position {pos} out of range for length {len}")]
    OutOfRange { pos: u64, len: u64 },
    #[error("invalid bit character {0:?}")]
    BadChar(char),
}

/// Growable bit sequence backed by 64-bit words. Positions are 1-based in
/// the public API, matching the automaton conventions.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitSeq {
    words: Vec<u64>,
    len: u64,
}

impl BitSeq {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: u64) -> Self {
        BitSeq { words: vec![0; len.div_ceil(WORD) as usize], len }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        if bit {
            self.words[(self.len / WORD) as usize] |= 1 << (self.len % WORD);
        }
        self.len += 1;
    }

    /// Bit at 1-based position `pos`.
    pub fn get(&self, pos: u64) -> bool {
        assert!(pos >= 1 && pos <= self.len, "bit position {pos} out of 1..={}", self.len);
        let i = pos - 1;
        self.words[(i / WORD) as usize] >> (i % WORD) & 1 == 1
    }

    /// Sets the bit at 1-based position `pos`.
    pub fn set(&mut self, pos: u64) {
        assert!(pos >= 1 && pos <= self.len, "bit position {pos} out of 1..={}", self.len);
        let i = pos - 1;
        self.words[(i / WORD) as usize] |= 1 << (i % WORD);
    }

    /// Total number of set bits.
    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of set bits among the first `i` positions.
    pub fn rank(&self, i: u64) -> Result<u64, BitsError> {
        if i > self.len {
            return Err(BitsError::OutOfRange { pos: i, len: self.len });
        }
        let full = (i / WORD) as usize;
        let mut r: u64 = self.words[..full].iter().map(|w| w.count_ones() as u64).sum();
        let rest = i % WORD;
        if rest > 0 {
            r += (self.words[full] & ((1 << rest) - 1)).count_ones() as u64;
        }
        Ok(r)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(|p| self.get(p))
    }

    /// 1-based positions of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(wi as u64 * WORD + tz + 1)
            })
        })
    }
}

impl FromIterator<bool> for BitSeq {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut b = BitSeq::new();
        for bit in iter {
            b.push(bit);
        }
        b
    }
}

impl FromStr for BitSeq {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, BitsError> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BitsError::BadChar(other)),
            })
            .collect()
    }
}

impl fmt::Display for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitSeq({self})")
    }
}

/// Number of set bits among the first `i` positions of `x`; `rank_vec(x, 0) = 0`.
pub fn rank_vec(x: &BitSeq, i: u64) -> Result<u64, BitsError> {
    x.rank(i)
}
