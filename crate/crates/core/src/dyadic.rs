//! Exact non-negative dyadic rationals.
//!
//! Every value the rounding algorithms produce is a power-of-two multiple of
//! an initial `1/D`, so a numerator plus a binary exponent is enough to check
//! packing and matching constraints without any floating-point tolerance.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `num / 2^exp`, kept normalized: either `num` is odd or the value is zero
/// with `exp == 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Dyadic {
    num: u128,
    exp: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseDyadicError {
    #[error("empty dyadic literal")]
    Empty,
    #[error("invalid integer in dyadic literal {0:?}")]
    BadInteger(String),
    #[error("denominator {0} is not a power of two")]
    NotDyadic(u128),
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    fn normalized(mut num: u128, mut exp: u32) -> Dyadic {
        if num == 0 {
            return Dyadic::ZERO;
        }
        let tz = num.trailing_zeros().min(exp);
        num >>= tz;
        exp -= tz;
        Dyadic { num, exp }
    }

    pub fn new(num: u128, exp: u32) -> Dyadic {
        Dyadic::normalized(num, exp)
    }

    pub fn from_int(v: u64) -> Dyadic {
        Dyadic::new(v as u128, 0)
    }

    /// `2^-k`.
    pub fn inv_pow2(k: u32) -> Dyadic {
        Dyadic::new(1, k)
    }

    /// `2^k` for any signed `k`.
    pub fn pow2(k: i32) -> Dyadic {
        if k >= 0 {
            Dyadic::new(1u128 << k, 0)
        } else {
            Dyadic::new(1, (-k) as u32)
        }
    }

    /// `1 / d` where `d` must be a power of two.
    pub fn recip_pow2(d: u64) -> Dyadic {
        assert!(d.is_power_of_two(), "denominator {d} is not a power of two");
        Dyadic::inv_pow2(d.trailing_zeros())
    }

    pub fn half() -> Dyadic {
        Dyadic::inv_pow2(1)
    }

    pub fn numerator(self) -> u128 {
        self.num
    }

    pub fn exponent(self) -> u32 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn halved(self) -> Dyadic {
        if self.is_zero() {
            return self;
        }
        Dyadic::new(self.num, self.exp + 1)
    }

    pub fn doubled(self) -> Dyadic {
        if self.exp > 0 {
            Dyadic::new(self.num, self.exp - 1)
        } else {
            Dyadic::new(self.num.checked_mul(2).expect("dyadic overflow"), 0)
        }
    }

    /// Multiply by a non-negative integer.
    pub fn mul_int(self, k: u64) -> Dyadic {
        Dyadic::new(
            self.num.checked_mul(k as u128).expect("dyadic overflow"),
            self.exp,
        )
    }

    /// `self - other`, or `None` if that would be negative.
    pub fn checked_sub(self, other: Dyadic) -> Option<Dyadic> {
        let (a, b, e) = align(self, other);
        a.checked_sub(b).map(|n| Dyadic::new(n, e))
    }

    /// Is this an integral power of two (including fractions `2^-k`)?
    pub fn is_power_of_two(self) -> bool {
        self.num == 1 || (self.exp == 0 && self.num.is_power_of_two())
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / 2f64.powi(self.exp as i32)
    }
}

fn align(a: Dyadic, b: Dyadic) -> (u128, u128, u32) {
    let e = a.exp.max(b.exp);
    let shift = |d: Dyadic| {
        let s = e - d.exp;
        if d.num == 0 {
            return 0;
        }
        assert!(
            s < 128 && d.num.leading_zeros() > s,
            "dyadic overflow while aligning exponents"
        );
        d.num << s
    };
    (shift(a), shift(b), e)
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, e) = align(self, rhs);
        Dyadic::new(a.checked_add(b).expect("dyadic overflow"), e)
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = *self + rhs;
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self.checked_sub(rhs).expect("negative dyadic")
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::ZERO, |a, b| a + b)
    }
}

impl<'a> Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Dyadic {
        iter.copied().sum()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = align(*self, *other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u128 << self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = ParseDyadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseDyadicError::Empty);
        }
        let int = |t: &str| {
            t.parse::<u128>()
                .map_err(|_| ParseDyadicError::BadInteger(t.to_string()))
        };
        match s.split_once('/') {
            None => Ok(Dyadic::new(int(s)?, 0)),
            Some((n, d)) => {
                let n = int(n)?;
                let d = int(d)?;
                if !d.is_power_of_two() {
                    return Err(ParseDyadicError::NotDyadic(d));
                }
                Ok(Dyadic::new(n, d.trailing_zeros()))
            }
        }
    }
}

impl From<Dyadic> for String {
    fn from(d: Dyadic) -> String {
        d.to_string()
    }
}

impl TryFrom<String> for Dyadic {
    type Error = ParseDyadicError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalizes() {
        assert_eq!(Dyadic::new(4, 3), Dyadic::new(1, 1));
        assert_eq!(Dyadic::new(0, 9), Dyadic::ZERO);
        assert_eq!(Dyadic::recip_pow2(8).to_string(), "1/8");
        assert_eq!(Dyadic::pow2(3), Dyadic::from_int(8));
    }

    #[test]
    fn arithmetic() {
        let q = Dyadic::recip_pow2(4);
        assert_eq!(q + q, Dyadic::half());
        assert_eq!(q.doubled().doubled(), Dyadic::ONE);
        assert_eq!(Dyadic::ONE - q, Dyadic::new(3, 2));
        assert_eq!(q.checked_sub(Dyadic::half()), None);
        assert_eq!(Dyadic::new(3, 2).mul_int(4), Dyadic::from_int(3));
        assert!(Dyadic::new(3, 3) < Dyadic::half());
        assert!(Dyadic::new(5, 3) > Dyadic::half());
    }

    #[test]
    fn parse_rejects_non_dyadic() {
        assert_eq!(
            "1/3".parse::<Dyadic>(),
            Err(ParseDyadicError::NotDyadic(3))
        );
        assert!("x".parse::<Dyadic>().is_err());
        assert_eq!("6/8".parse::<Dyadic>().unwrap(), Dyadic::new(3, 2));
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(num in 0u128..(1u128 << 80), exp in 0u32..40) {
            let d = Dyadic::new(num, exp);
            let back: Dyadic = d.to_string().parse().unwrap();
            prop_assert_eq!(back, d);
            prop_assert_eq!(back.numerator(), d.numerator());
            prop_assert_eq!(back.exponent(), d.exponent());
        }

        #[test]
        fn add_sub_inverse(a in 0u128..(1u128 << 60), ea in 0u32..30, b in 0u128..(1u128 << 60), eb in 0u32..30) {
            let x = Dyadic::new(a, ea);
            let y = Dyadic::new(b, eb);
            prop_assert_eq!((x + y) - y, x);
            prop_assert_eq!(x + y, y + x);
            prop_assert_eq!((x + y).cmp(&x) != Ordering::Less, true);
        }
    }
}
