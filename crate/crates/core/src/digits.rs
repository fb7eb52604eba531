//! Base-b digit vectors and the positional maps between vectors and integers.
//!
//! Digit index 0 is the least significant position. A vector of length `m`
//! over base `b` encodes an integer in `[0, b^m)`; the library supports any
//! `b^m <= 2^64` so that every intermediate product fits in a `u128`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported number of elements `b^m` of a digit-vector set.
pub const MAX_ELEMENTS: u128 = 1 << 64;

/// Largest base accepted by the textual digit encoding (`0-9a-z`).
pub const MAX_TEXT_BASE: u32 = 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Base {
    b: u32,
    is_prime: bool,
}

impl Base {
    pub fn new(b: u32) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidBase(b as u64));
        }
        Ok(Base {
            b,
            is_prime: is_prime(b as u64),
        })
    }

    #[inline]
    pub fn get(&self) -> u32 {
        self.b
    }

    #[inline]
    pub fn is_prime(&self) -> bool {
        self.is_prime
    }

    /// `b^t`, or `None` when it exceeds [`MAX_ELEMENTS`].
    pub fn pow(&self, t: usize) -> Option<u128> {
        let t = u32::try_from(t).ok()?;
        (self.b as u128)
            .checked_pow(t)
            .filter(|&n| n <= MAX_ELEMENTS)
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.b)
    }
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `A_b^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    base: Base,
    digits: Vec<u32>,
}

impl DigitVector {
    pub fn new(base: Base, digits: Vec<u32>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::EmptyVector);
        }
        base.pow(digits.len()).ok_or(Error::TooLarge {
            base: base.get(),
            length: digits.len(),
        })?;
        if let Some((position, &digit)) = digits.iter().enumerate().find(|(_, &d)| d >= base.get())
        {
            return Err(Error::DigitOutOfRange {
                digit,
                position,
                base: base.get(),
            });
        }
        Ok(DigitVector { base, digits })
    }

    pub fn zero(base: Base, length: usize) -> Result<Self> {
        DigitVector::new(base, vec![0; length])
    }

    /// Parses digit text: one character from `0-9a-z` per digit, position 0 leftmost.
    pub fn from_text(base: Base, text: &str) -> Result<Self> {
        if base.get() > MAX_TEXT_BASE {
            return Err(Error::Parse(format!(
                "base {} cannot be written as digit text",
                base
            )));
        }
        let digits = text
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .filter(|_| !c.is_ascii_uppercase())
                    .ok_or_else(|| {
                        Error::Parse(format!("invalid digit character {c:?} in {text:?}"))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        DigitVector::new(base, digits)
    }

    pub fn to_text(&self) -> String {
        digits_to_text(&self.digits)
    }

    #[inline]
    pub fn base(&self) -> Base {
        self.base
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    #[inline]
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<u32> {
        self.digits
    }
}

impl fmt::Display for DigitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Renders raw digits in the `0-9a-z` alphabet. Digits above 35 render as `?`.
pub fn digits_to_text(digits: &[u32]) -> String {
    digits
        .iter()
        .map(|&d| std::char::from_digit(d, 36).unwrap_or('?'))
        .collect()
}

/// `x_0 + x_1 b + ... + x_{m-1} b^{m-1}`.
pub fn int_radix(v: &DigitVector) -> u128 {
    radix_value(v.base.get(), &v.digits)
}

/// Inverse of [`int_radix`]: the unique length-`m` vector encoding `k`.
pub fn dig_radix(k: u128, base: Base, length: usize) -> Result<DigitVector> {
    let out_of_range = Error::ValueOutOfRange {
        value: k,
        base: base.get(),
        length,
    };
    if length == 0 {
        return Err(Error::EmptyVector);
    }
    let modulus = base.pow(length).ok_or(Error::TooLarge {
        base: base.get(),
        length,
    })?;
    if k >= modulus {
        return Err(out_of_range);
    }
    let mut digits = vec![0; length];
    write_radix(k, base.get(), &mut digits);
    Ok(DigitVector { base, digits })
}

pub(crate) fn radix_value(base: u32, digits: &[u32]) -> u128 {
    digits
        .iter()
        .rev()
        .fold(0u128, |acc, &d| acc * base as u128 + d as u128)
}

/// Writes the low `out.len()` base-`base` digits of `k` into `out`.
pub(crate) fn write_radix(mut k: u128, base: u32, out: &mut [u32]) {
    let b = base as u128;
    for slot in out.iter_mut() {
        *slot = (k % b) as u32;
        k /= b;
    }
}
