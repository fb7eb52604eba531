//! Addition schemes on `A_b^m`.
//!
//! A scheme is a base, a composition `m = t_1 + ... + t_r` and one unit `u_i`
//! per component. Component `i` covers digit positions `[o_i, o_i + t_i)`,
//! components laid out from position 0 upwards. Inside a component the two
//! sub-vectors are read as integers `x̂, ŷ` and combined as
//! `u_i * (x̂ + ŷ) mod b^{t_i}`.
//!
//! With every `u_i = 1` this is the product group
//! `Z/b^{t_1} x ... x Z/b^{t_r}`: all-ones compositions give carryless
//! (XOR for `b = 2`) addition, the single-part composition gives integer
//! addition mod `b^m`. With some `u_i != 1` the law is still commutative and
//! a Latin square, but it is neither associative nor unital; see
//! [`crate::verify::check_group_axioms`].

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;

use crate::digits::{radix_value, write_radix, Base, DigitVector};
use crate::error::{Error, Result};

/// Default upper bound on `b^m` for materialized operation tables.
pub const DEFAULT_TABLE_CAP: usize = 4096;

/// An ordered sequence of positive parts. Order matters: `(3,2)` and `(2,3)`
/// are different compositions of 5.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidComposition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidComposition(format!("zero part in {parts:?}")));
        }
        Ok(Composition { parts })
    }

    /// The single-part composition `(m)`.
    pub fn whole(m: usize) -> Result<Self> {
        Composition::new(vec![m])
    }

    /// The all-ones composition `(1, ..., 1)`.
    pub fn ones(m: usize) -> Result<Self> {
        Composition::new(vec![1; m])
    }

    /// Builds the composition of `bits.len() + 1` from its box decisions:
    /// in `1 □ 1 □ ... □ 1`, box `i` sits between the `i`-th and `(i+1)`-th
    /// one; `true` makes it a plus (merge), `false` a comma (split).
    pub fn from_box_bits(bits: &[bool]) -> Self {
        let mut parts = Vec::with_capacity(bits.len() + 1);
        let mut current = 1;
        for &plus in bits {
            if plus {
                current += 1;
            } else {
                parts.push(current);
                current = 1;
            }
        }
        parts.push(current);
        Composition { parts }
    }

    /// Inverse of [`Composition::from_box_bits`].
    pub fn box_bits(&self) -> Vec<bool> {
        let mut bits = Vec::with_capacity(self.total().saturating_sub(1));
        for (i, &t) in self.parts.iter().enumerate() {
            if i > 0 {
                bits.push(false);
            }
            bits.extend(std::iter::repeat_n(true, t - 1));
        }
        bits
    }

    #[inline]
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of parts `r`.
    #[inline]
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The integer `m` being composed.
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Parts sorted in weakly decreasing order.
    pub fn to_partition(&self) -> Vec<usize> {
        let mut parts = self.parts.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.parts))
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Composition::new(parse_list(s)?)
    }
}

/// Per-component automorphism units `u_i = σ_i(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwistVector {
    units: Vec<u128>,
}

impl TwistVector {
    /// Validates `1 <= u_i < b^{t_i}` and `gcd(u_i, b^{t_i}) = 1`.
    pub fn new(base: Base, composition: &Composition, units: Vec<u128>) -> Result<Self> {
        if units.len() != composition.len() {
            return Err(Error::TwistLengthMismatch {
                twist: units.len(),
                parts: composition.len(),
            });
        }
        for (component, (&u, &t)) in units.iter().zip(composition.parts()).enumerate() {
            let modulus = base.pow(t).ok_or(Error::TooLarge {
                base: base.get(),
                length: t,
            })?;
            if u == 0 || u >= modulus || u.gcd(&modulus) != 1 {
                return Err(Error::InvalidTwist {
                    component,
                    unit: u,
                    modulus,
                });
            }
        }
        Ok(TwistVector { units })
    }

    pub fn identity(parts: usize) -> Self {
        TwistVector {
            units: vec![1; parts],
        }
    }

    #[inline]
    pub fn units(&self) -> &[u128] {
        &self.units
    }

    pub fn is_identity(&self) -> bool {
        self.units.iter().all(|&u| u == 1)
    }
}

/// One concrete binary operation on `A_b^m`.
#[derive(Debug, Clone)]
pub struct AdditionScheme {
    base: Base,
    composition: Composition,
    twist: TwistVector,
    moduli: Vec<u128>,
    inverse_units: Vec<u128>,
    elements: u128,
}

impl PartialEq for AdditionScheme {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.composition == other.composition
            && self.twist == other.twist
    }
}

impl Eq for AdditionScheme {}

impl AdditionScheme {
    pub fn new(base: Base, composition: Composition, twist: TwistVector) -> Result<Self> {
        let m = composition.total();
        let elements = base.pow(m).ok_or(Error::TooLarge {
            base: base.get(),
            length: m,
        })?;
        // the twist may have been validated against a different base or composition
        let twist = TwistVector::new(base, &composition, twist.units)?;
        let moduli: Vec<u128> = composition
            .parts()
            .iter()
            .map(|&t| base.pow(t).expect("component modulus bounded by b^m"))
            .collect();
        let inverse_units = twist
            .units()
            .iter()
            .zip(&moduli)
            .map(|(&u, &n)| mod_inverse(u, n))
            .collect();
        Ok(AdditionScheme {
            base,
            composition,
            twist,
            moduli,
            inverse_units,
            elements,
        })
    }

    pub fn untwisted(base: Base, composition: Composition) -> Result<Self> {
        let twist = TwistVector::identity(composition.len());
        AdditionScheme::new(base, composition, twist)
    }

    #[inline]
    pub fn base(&self) -> Base {
        self.base
    }

    #[inline]
    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    #[inline]
    pub fn twist(&self) -> &TwistVector {
        &self.twist
    }

    /// Vector length `m`.
    pub fn length(&self) -> usize {
        self.composition.total()
    }

    /// `b^m`.
    #[inline]
    pub fn element_count(&self) -> u128 {
        self.elements
    }

    pub fn is_twisted(&self) -> bool {
        !self.twist.is_identity()
    }

    fn check_dims(&self, v: &DigitVector) -> Result<()> {
        if v.base() != self.base || v.len() != self.length() {
            return Err(Error::DimensionMismatch {
                expected_base: self.base.get(),
                expected_length: self.length(),
                base: v.base().get(),
                length: v.len(),
            });
        }
        Ok(())
    }

    /// Applies `f(component, modulus, x̂, ŷ)` to every component of the digit slices.
    fn componentwise<F>(&self, x: &DigitVector, y: &DigitVector, f: F) -> Result<DigitVector>
    where
        F: Fn(usize, u128, u128, u128) -> u128,
    {
        self.check_dims(x)?;
        self.check_dims(y)?;
        let b = self.base.get();
        let mut out = vec![0u32; self.length()];
        let mut offset = 0;
        for (i, (&t, &n)) in self
            .composition
            .parts()
            .iter()
            .zip(&self.moduli)
            .enumerate()
        {
            let range = offset..offset + t;
            let xv = radix_value(b, &x.digits()[range.clone()]);
            let yv = radix_value(b, &y.digits()[range.clone()]);
            write_radix(f(i, n, xv, yv), b, &mut out[range]);
            offset += t;
        }
        DigitVector::new(self.base, out)
    }

    /// `x + y` under this scheme.
    pub fn add(&self, x: &DigitVector, y: &DigitVector) -> Result<DigitVector> {
        self.componentwise(x, y, |i, n, xv, yv| {
            let s = (xv + yv) % n;
            (self.twist.units[i] * s) % n
        })
    }

    /// The unique `x` with `add(x, y) = z`.
    pub fn solve(&self, z: &DigitVector, y: &DigitVector) -> Result<DigitVector> {
        self.componentwise(z, y, |i, n, zv, yv| {
            let unscaled = (self.inverse_units[i] * zv) % n;
            (unscaled + n - yv) % n
        })
    }

    /// The all-zero vector; the identity of every untwisted scheme.
    pub fn zero(&self) -> DigitVector {
        DigitVector::zero(self.base, self.length()).expect("scheme dimensions validated")
    }

    /// Group inverse in an untwisted scheme.
    pub fn negate(&self, x: &DigitVector) -> Result<DigitVector> {
        if self.is_twisted() {
            return Err(Error::TwistedScheme);
        }
        self.componentwise(x, x, |_, n, xv, _| (n - xv) % n)
    }

    /// `add` on integer labels: `add_index(i, j) = int(add(dig(i), dig(j)))`.
    pub fn add_index(&self, mut i: u128, mut j: u128) -> u128 {
        let mut result = 0u128;
        let mut place = 1u128;
        for (k, &n) in self.moduli.iter().enumerate() {
            let (xi, yi) = (i % n, j % n);
            i /= n;
            j /= n;
            let r = (self.twist.units[k] * ((xi + yi) % n)) % n;
            result += r * place;
            place = place.saturating_mul(n);
        }
        result
    }

    /// Materializes the `b^m x b^m` Cayley table on integer labels.
    pub fn operation_table(&self, cap: usize) -> Result<OperationTable> {
        if self.elements > cap as u128 {
            return Err(Error::CapExceeded {
                elements: self.elements,
                cap,
            });
        }
        let n = self.elements as usize;
        let mut entries = vec![0u32; n * n];
        entries.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = self.add_index(i as u128, j as u128) as u32;
            }
        });
        Ok(OperationTable { size: n, entries })
    }
}

impl fmt::Display for AdditionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b={} comp={}", self.base, self.composition)?;
        if self.is_twisted() {
            write!(f, " twist={}", join(self.twist.units()))?;
        }
        Ok(())
    }
}

impl FromStr for AdditionScheme {
    type Err = Error;

    /// `b=<int> comp=<t1>,...,<tr> [twist=<u1>,...,<ur>]`
    fn from_str(s: &str) -> Result<Self> {
        let mut base = None;
        let mut comp = None;
        let mut twist = None;
        for token in s.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {token:?}")))?;
            let slot_taken = match key {
                "b" => base.replace(value).is_some(),
                "comp" => comp.replace(value).is_some(),
                "twist" => twist.replace(value).is_some(),
                _ => return Err(Error::Parse(format!("unknown field {key:?}"))),
            };
            if slot_taken {
                return Err(Error::Parse(format!("duplicate field {key:?}")));
            }
        }
        let base = base.ok_or_else(|| Error::Parse("missing field \"b\"".into()))?;
        let base = Base::new(
            base.parse()
                .map_err(|_| Error::Parse(format!("invalid base {base:?}")))?,
        )?;
        let composition: Composition = comp
            .ok_or_else(|| Error::Parse("missing field \"comp\"".into()))?
            .parse()?;
        let twist = match twist {
            Some(list) => TwistVector::new(base, &composition, parse_list(list)?)?,
            None => TwistVector::identity(composition.len()),
        };
        AdditionScheme::new(base, composition, twist)
    }
}

/// A materialized Cayley table over labels `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperationTable {
    size: usize,
    entries: Vec<u32>,
}

impl OperationTable {
    /// Wraps a row-major `size x size` table. Entries must lie in `0..size`.
    pub fn from_entries(size: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != size * size || entries.iter().any(|&e| e as usize >= size) {
            return Err(Error::Parse(format!(
                "not a closed {size}x{size} operation table"
            )));
        }
        Ok(OperationTable { size, entries })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.size + j] as usize
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }
}

/// Where the Latin-square property first fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatinDefect {
    Row(u32),
    Column(u32),
}

/// Brute-force verdict on one operation. Element labels are integer encodings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub element_count: usize,
    pub latin_square: bool,
    pub latin_defect: Option<LatinDefect>,
    pub commutative: bool,
    pub commutativity_counterexample: Option<(u32, u32)>,
    pub associative: bool,
    pub associativity_counterexample: Option<(u32, u32, u32)>,
    pub identity: Option<u32>,
    pub has_inverses: bool,
    pub inverse_counterexample: Option<u32>,
}

impl AxiomReport {
    pub fn has_identity(&self) -> bool {
        self.identity.is_some()
    }

    /// Closure holds by construction; the remaining four axioms decide.
    pub fn is_abelian_group(&self) -> bool {
        self.associative && self.commutative && self.has_identity() && self.has_inverses
    }
}

/// Modular inverse of a unit `u` modulo `n`.
pub(crate) fn mod_inverse(u: u128, n: u128) -> u128 {
    let eg = (u as i128).extended_gcd(&(n as i128));
    debug_assert_eq!(eg.gcd, 1);
    eg.x.rem_euclid(n as i128) as u128
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|item| {
            item.parse()
                .map_err(|_| Error::Parse(format!("invalid integer {item:?}")))
        })
        .collect()
}
