//! Exact non-negative rationals with power-of-two denominators.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `num / 2^exp`, kept in lowest terms (`num` odd, or `num = 0` with
/// `exp = 0`), so structural equality is value equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    num: u128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };

    pub fn new(num: u128, exp: u32) -> Self {
        if num == 0 {
            return Dyadic::ZERO;
        }
        let shift = num.trailing_zeros().min(exp);
        Dyadic {
            num: num >> shift,
            exp: exp - shift,
        }
    }

    /// `value^2 / 2^exp`.
    pub fn square_over_pow2(value: i128, exp: u32) -> Result<Self> {
        let abs = value.unsigned_abs();
        let sq = abs.checked_mul(abs).ok_or(Error::Overflow("squared sum"))?;
        Ok(Dyadic::new(sq, exp))
    }

    pub fn numerator(&self) -> u128 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 * (-(self.exp as f64)).exp2()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        // a/2^x vs b/2^y  <=>  a·2^y vs b·2^x, compared without overflow by
        // bit length first.
        let (a, x, b, y) = (self.num, self.exp, other.num, other.exp);
        if a == 0 || b == 0 {
            return a.cmp(&b);
        }
        let la = 128 - a.leading_zeros() as i64 - x as i64;
        let lb = 128 - b.leading_zeros() as i64 - y as i64;
        if la != lb {
            return la.cmp(&lb);
        }
        // Same magnitude class: align to the larger exponent.
        if x >= y {
            a.cmp(&(b << (x - y)))
        } else {
            (a << (y - x)).cmp(&b)
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp {
            0 => write!(f, "{}", self.num),
            1..=63 => write!(f, "{}/{}", self.num, 1u64 << self.exp),
            _ => write!(f, "{}/2^{}", self.num, self.exp),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        assert_eq!(Dyadic::new(4, 9), Dyadic::new(1, 7));
        assert_eq!(Dyadic::new(0, 5), Dyadic::ZERO);
        assert_eq!(Dyadic::new(6, 0).numerator(), 6);
        assert_eq!(Dyadic::new(4, 9).to_string(), "1/128");
        assert_eq!(Dyadic::new(3, 70).to_string(), "3/2^70");
        assert_eq!(Dyadic::ZERO.to_string(), "0");
    }

    #[test]
    fn ordering() {
        assert!(Dyadic::new(1, 7) < Dyadic::new(3, 8));
        assert!(Dyadic::new(1, 1) > Dyadic::new(1, 2));
        assert!(Dyadic::ZERO < Dyadic::new(1, 100));
        assert_eq!(Dyadic::new(2, 2).cmp(&Dyadic::new(1, 1)), Ordering::Equal);
    }

    #[test]
    fn squares() {
        assert_eq!(Dyadic::square_over_pow2(-2, 9).unwrap(), Dyadic::new(1, 7));
        assert_eq!(Dyadic::square_over_pow2(-15, 32).unwrap(), Dyadic::new(225, 32));
    }
}
