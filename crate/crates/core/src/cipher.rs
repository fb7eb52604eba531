//! Key-dependent block combiner.
//!
//! A key selects the addition scheme: its first `m - 1` bits are the box
//! decisions of the composition (bit `1` = plus, `0` = comma, most significant
//! bit of byte 0 first), then each component consumes four key bytes,
//! big-endian, reduced modulo `φ(b^{t_i})`, to index the ascending list of
//! units. Plaintext blocks are combined with a caller-supplied keystream
//! under that scheme; decryption is Latin-square division.
//!
//! This is a demonstration of the combining step, not a secure cipher.

use std::fmt::Write as _;

use crate::combinatorics::{nth_twist_unit, phi_of_power};
use crate::digits::{Base, DigitVector};
use crate::error::{Error, Result};
use crate::schemes::{AdditionScheme, Composition, TwistVector};

const TWIST_BYTES: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeySpec {
    pub key_bytes: Vec<u8>,
    pub base: Base,
    pub block_length: usize,
}

impl KeySpec {
    pub fn new(key_bytes: Vec<u8>, base: Base, block_length: usize) -> Result<Self> {
        if block_length == 0 {
            return Err(Error::EmptyVector);
        }
        base.pow(block_length).ok_or(Error::TooLarge {
            base: base.get(),
            length: block_length,
        })?;
        Ok(KeySpec {
            key_bytes,
            base,
            block_length,
        })
    }

    /// Bytes holding the `m - 1` box bits.
    pub fn box_bytes(&self) -> usize {
        (self.block_length - 1).div_ceil(8)
    }

    /// Total key length needed for a composition with `parts` components.
    pub fn required_len(&self, parts: usize) -> usize {
        self.box_bytes() + TWIST_BYTES * parts
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistSelection {
    pub component: usize,
    pub part: usize,
    pub key_offset: usize,
    pub raw: u32,
    pub unit_count: u128,
    pub index: u128,
    pub unit: u128,
}

/// Which key material chose what.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTranscript {
    pub box_bits: Vec<bool>,
    pub twists: Vec<TwistSelection>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeDerivation {
    pub scheme: AdditionScheme,
    pub transcript: DerivationTranscript,
}

impl SchemeDerivation {
    pub fn render_transcript(&self) -> String {
        let mut out = String::new();
        let bits: String = self
            .transcript
            .box_bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        let _ = writeln!(out, "boxes={bits}");
        let _ = writeln!(out, "composition={}", self.scheme.composition());
        for t in &self.transcript.twists {
            let _ = writeln!(
                out,
                "component={} part={} bytes={}..{} raw={:08x} units={} index={} unit={}",
                t.component,
                t.part,
                t.key_offset,
                t.key_offset + TWIST_BYTES,
                t.raw,
                t.unit_count,
                t.index,
                t.unit
            );
        }
        let _ = writeln!(out, "scheme={}", self.scheme);
        out
    }
}

pub fn derive_scheme_from_key(key: &KeySpec) -> Result<SchemeDerivation> {
    let boxes = key.block_length - 1;
    let box_bytes = key.box_bytes();
    if key.key_bytes.len() < box_bytes {
        return Err(Error::KeyTooShort {
            required: key.required_len(1),
            actual: key.key_bytes.len(),
        });
    }
    let box_bits: Vec<bool> = (0..boxes)
        .map(|i| key.key_bytes[i / 8] >> (7 - i % 8) & 1 == 1)
        .collect();
    let composition = Composition::from_box_bits(&box_bits);

    let required = key.required_len(composition.len());
    if key.key_bytes.len() < required {
        return Err(Error::KeyTooShort {
            required,
            actual: key.key_bytes.len(),
        });
    }

    let mut twists = Vec::with_capacity(composition.len());
    for (component, &part) in composition.parts().iter().enumerate() {
        let key_offset = box_bytes + TWIST_BYTES * component;
        let raw = u32::from_be_bytes(
            key.key_bytes[key_offset..key_offset + TWIST_BYTES]
                .try_into()
                .expect("four bytes"),
        );
        let unit_count =
            u128::try_from(phi_of_power(key.base, part)).expect("φ(b^t) < b^t <= 2^64");
        let index = raw as u128 % unit_count;
        let unit = nth_twist_unit(key.base, part, index)?;
        twists.push(TwistSelection {
            component,
            part,
            key_offset,
            raw,
            unit_count,
            index,
            unit,
        });
    }

    let units = twists.iter().map(|t| t.unit).collect();
    let twist = TwistVector::new(key.base, &composition, units)?;
    let scheme = AdditionScheme::new(key.base, composition, twist)?;
    Ok(SchemeDerivation {
        scheme,
        transcript: DerivationTranscript { box_bits, twists },
    })
}

pub fn encrypt_block(
    d: &SchemeDerivation,
    plain: &DigitVector,
    keystream: &DigitVector,
) -> Result<DigitVector> {
    d.scheme.add(plain, keystream)
}

pub fn decrypt_block(
    d: &SchemeDerivation,
    cipher: &DigitVector,
    keystream: &DigitVector,
) -> Result<DigitVector> {
    d.scheme.solve(cipher, keystream)
}

fn blockwise<F>(d: &SchemeDerivation, data: &[u32], keystream: &[u32], f: F) -> Result<Vec<u32>>
where
    F: Fn(&SchemeDerivation, &DigitVector, &DigitVector) -> Result<DigitVector>,
{
    let m = d.scheme.length();
    if !data.len().is_multiple_of(m) {
        return Err(Error::StreamLength {
            length: data.len(),
            block: m,
        });
    }
    if keystream.len() < data.len() {
        return Err(Error::KeystreamExhausted {
            required: data.len(),
            available: keystream.len(),
        });
    }
    let base = d.scheme.base();
    let mut out = Vec::with_capacity(data.len());
    for (block, key) in data.chunks(m).zip(keystream.chunks(m)) {
        let block = DigitVector::new(base, block.to_vec())?;
        let key = DigitVector::new(base, key.to_vec())?;
        out.extend_from_slice(f(d, &block, &key)?.digits());
    }
    Ok(out)
}

pub fn encrypt_stream(d: &SchemeDerivation, data: &[u32], keystream: &[u32]) -> Result<Vec<u32>> {
    blockwise(d, data, keystream, encrypt_block)
}

pub fn decrypt_stream(d: &SchemeDerivation, data: &[u32], keystream: &[u32]) -> Result<Vec<u32>> {
    blockwise(d, data, keystream, decrypt_block)
}

/// One byte per 8-bit block, bit 0 as digit 0.
pub fn bytes_to_digits(bytes: &[u8]) -> Vec<u32> {
    bytes
        .iter()
        .flat_map(|&byte| (0..8).map(move |i| (byte >> i & 1) as u32))
        .collect()
}

/// Inverse of [`bytes_to_digits`]; `digits.len()` must be a multiple of 8.
pub fn digits_to_bytes(digits: &[u32]) -> Vec<u8> {
    digits
        .chunks(8)
        .map(|bits| {
            bits.iter()
                .enumerate()
                .fold(0u8, |acc, (i, &d)| acc | ((d as u8 & 1) << i))
        })
        .collect()
}
