//! Packed bit vector used for truth tables and allowed-input masks.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec { len, words: vec![u64::MAX; len.div_ceil(64)] };
        v.clear_tail();
        v
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                v.set(i, true);
            }
        }
        v
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i & 63);
        if b {
            self.words[i >> 6] |= m;
        } else {
            self.words[i >> 6] &= !m;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn all(&self) -> bool {
        self.count_ones() == self.len
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Hex rendering with bit 0 as the most significant bit of the first digit.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        let mut s = String::with_capacity(digits);
        for d in 0..digits {
            let mut nib = 0u32;
            for j in 0..4 {
                let i = 4 * d + j;
                if i < self.len && self.get(i) {
                    nib |= 8 >> j;
                }
            }
            s.push(char::from_digit(nib, 16).unwrap());
        }
        s
    }

    pub fn from_hex(len: usize, hex: &str) -> Result<Self> {
        let hex = hex.trim();
        let digits = len.div_ceil(4).max(1);
        if hex.len() != digits {
            return Err(Error::Parse(format!(
                "expected {digits} hex digits for {len} bits, got {}",
                hex.len()
            )));
        }
        let mut v = Self::zeros(len);
        for (d, c) in hex.chars().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {c:?}")))?;
            for j in 0..4 {
                let i = 4 * d + j;
                let bit = nib & (8 >> j) != 0;
                if i < len {
                    v.set(i, bit);
                } else if bit {
                    return Err(Error::Parse("nonzero padding bits in hex table".into()));
                }
            }
        }
        Ok(v)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{}; {}]", self.len, self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_msb_first() {
        let v = BitVec::from_fn(8, |i| i == 0 || i == 7);
        assert_eq!(v.to_hex(), "81");
        assert_eq!(BitVec::from_hex(8, "81").unwrap(), v);
    }

    #[test]
    fn short_tables_pad_low_bits() {
        let v = BitVec::from_fn(2, |i| i == 1);
        assert_eq!(v.to_hex(), "4");
        assert!(BitVec::from_hex(2, "5").is_err());
    }

    #[test]
    fn ones_has_clean_tail() {
        let v = BitVec::ones(70);
        assert_eq!(v.count_ones(), 70);
        assert!(v.all());
    }
}
