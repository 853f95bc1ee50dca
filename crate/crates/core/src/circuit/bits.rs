use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Fixed-width bit string, index 0 least significant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    pub fn zeros(width: usize) -> Self {
        BitString {
            bits: vec![false; width],
        }
    }

    /// `B[value]` over `width` bits. Panics if `value` does not fit.
    pub fn from_int(value: u64, width: usize) -> Self {
        Self::try_from_int(value, width).expect("value does not fit in width")
    }

    pub fn try_from_int(value: u64, width: usize) -> Result<Self> {
        if width < 64 && value >> width != 0 {
            return Err(Error::Overflow("integer wider than bit string"));
        }
        Ok(BitString {
            bits: (0..width).map(|j| j < 64 && value >> j & 1 == 1).collect(),
        })
    }

    /// `I[x]`. Panics on set bits above position 63.
    pub fn to_int(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| {
                assert!(j < 64, "bit string value exceeds u64");
                1u64 << j
            })
            .sum()
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn get(&self, j: usize) -> bool {
        self.bits[j]
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    /// Bits in index order as `0`/`1` characters (LSB first).
    pub fn to_lsb_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn parse_lsb(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(BitString::from_bits)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({})", self.to_lsb_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn little_endian() {
        let b = BitString::from_int(6, 3);
        assert_eq!(b.as_slice(), &[false, true, true]);
        assert_eq!(b.to_lsb_string(), "011");
        assert_eq!(BitString::parse_lsb("011"), Some(b));
        assert_eq!(BitString::parse_lsb("01x"), None);
    }

    #[test]
    fn overflow_rejected() {
        assert!(BitString::try_from_int(8, 3).is_err());
        assert!(BitString::try_from_int(7, 3).is_ok());
    }

    proptest! {
        #[test]
        fn int_round_trip(width in 1usize..64, raw in any::<u64>()) {
            let value = raw & ((1u64 << width) - 1);
            let b = BitString::from_int(value, width);
            prop_assert_eq!(b.width(), width);
            prop_assert_eq!(b.to_int(), value);
        }
    }
}
