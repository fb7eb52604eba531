//! Exact counting and enumeration: compositions, partitions, Euler's totient,
//! twist units and the closed-form scheme counts.
//!
//! All counts are arbitrary precision. The closed form for a general base is
//! evaluated as `φ(b) (b + φ(b))^{m-1}`, which equals
//! `b^m C_b (1 + C_b)^{m-1}` because `C_b = φ(b)/b`;
//! [`count_additions_by_density`] evaluates the rational form directly.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::digits::{is_prime, Base};
use crate::error::{Error, Result};
use crate::schemes::Composition;

/// Default cap on the number of items an enumeration may materialize.
pub const DEFAULT_ENUMERATION_BUDGET: usize = 1 << 20;

/// Prime factorization `n = ∏ p_i^{α_i}`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    prime_powers: Vec<(u64, u32)>,
}

impl Factorization {
    /// Trial division.
    pub fn of(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidComposition("cannot factor 0".into()));
        }
        let mut rest = n;
        let mut prime_powers = Vec::new();
        let mut p = 2u64;
        while p.saturating_mul(p) <= rest {
            if rest.is_multiple_of(p) {
                let mut alpha = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    alpha += 1;
                }
                prime_powers.push((p, alpha));
            }
            p += 1;
        }
        if rest > 1 {
            prime_powers.push((rest, 1));
        }
        Ok(Factorization { n, prime_powers })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn prime_powers(&self) -> &[(u64, u32)] {
        &self.prime_powers
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.prime_powers.iter().map(|&(p, _)| p)
    }

    /// Product of the distinct prime divisors.
    pub fn radical(&self) -> u64 {
        self.primes().product()
    }
}

/// Euler's totient. Panics on `n = 0`.
pub fn euler_phi(n: u64) -> u64 {
    let f = Factorization::of(n).expect("euler_phi requires n >= 1");
    f.prime_powers()
        .iter()
        .map(|&(p, alpha)| p.pow(alpha - 1) * (p - 1))
        .product()
}

/// `φ(b^t)`, exact for any `t`.
pub fn phi_of_power(base: Base, t: usize) -> BigUint {
    assert!(t >= 1, "exponent must be positive");
    let f = Factorization::of(base.get() as u64).expect("base >= 2");
    f.prime_powers()
        .iter()
        .map(|&(p, alpha)| BigUint::from(p).pow(alpha as usize * t - 1) * BigUint::from(p - 1))
        .product()
}

/// All `2^{m-1}` compositions of `m`, in box-counter order: composition `c`
/// has box `i` set to plus iff bit `i` of `c` is one. The first entry is
/// `(1, ..., 1)`, the last is `(m)`.
pub fn enumerate_compositions(m: usize, budget: usize) -> Result<Vec<Composition>> {
    if m == 0 {
        return Err(Error::InvalidComposition("m must be positive".into()));
    }
    let boxes = m - 1;
    let count = 1u128.checked_shl(boxes as u32).unwrap_or(u128::MAX);
    if boxes >= 64 || count > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: count,
            budget,
        });
    }
    Ok((0..count as u64)
        .map(|counter| {
            let bits: Vec<bool> = (0..boxes).map(|i| counter >> i & 1 == 1).collect();
            Composition::from_box_bits(&bits)
        })
        .collect())
}

/// `C(m) = 2^{m-1}`.
pub fn count_compositions(m: usize) -> BigUint {
    assert!(m >= 1, "m must be positive");
    BigUint::one() << (m - 1)
}

/// Partition number `P(m)` by the standard bounded-part recurrence.
pub fn count_partitions(m: usize) -> BigUint {
    let mut ways = vec![BigUint::zero(); m + 1];
    ways[0] = BigUint::one();
    for part in 1..=m {
        for n in part..=m {
            let prev = ways[n - part].clone();
            ways[n] += prev;
        }
    }
    ways.swap_remove(m)
}

/// All partitions of `m` as weakly decreasing part lists, in reverse
/// lexicographic order starting from `(m)`.
pub fn enumerate_partitions(m: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            current.push(part);
            rec(rest - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        rec(m, m, &mut Vec::new(), &mut out);
    }
    out
}

/// Units of `Z/b^t`, ascending, by gcd scan.
pub fn enumerate_twist_units(base: Base, t: usize, budget: usize) -> Result<Vec<u128>> {
    let modulus = base.pow(t).ok_or(Error::TooLarge {
        base: base.get(),
        length: t,
    })?;
    if modulus > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: modulus,
            budget,
        });
    }
    Ok((1..modulus).filter(|u| u.gcd(&modulus) == 1).collect())
}

/// The `k`-th unit (0-based, ascending) of `Z/b^t` without enumeration.
///
/// Units of `b^t` are exactly the residues coprime to `rad(b)`, so they repeat
/// with period `rad(b)`, `φ(rad(b))` per period.
pub fn nth_twist_unit(base: Base, t: usize, k: u128) -> Result<u128> {
    let modulus = base.pow(t).ok_or(Error::TooLarge {
        base: base.get(),
        length: t,
    })?;
    let radical = Factorization::of(base.get() as u64)?.radical() as u128;
    let period: Vec<u128> = (1..radical).filter(|u| u.gcd(&radical) == 1).collect();
    let per = period.len() as u128;
    let unit = (k / per) * radical + period[(k % per) as usize];
    if unit >= modulus {
        return Err(Error::ValueOutOfRange {
            value: k,
            base: base.get(),
            length: t,
        });
    }
    Ok(unit)
}

/// `(p-1)(2p-1)^{m-1}`; `p` must be prime.
pub fn count_additions_prime(p: u64, m: usize) -> Result<BigUint> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    assert!(m >= 1, "m must be positive");
    Ok(BigUint::from(p - 1) * BigUint::from(2 * p - 1).pow(m - 1))
}

/// `C_b = ∏ (1 - 1/p)` over the distinct primes dividing `b`.
pub fn c_b(base: Base) -> BigRational {
    let f = Factorization::of(base.get() as u64).expect("base >= 2");
    f.primes()
        .map(|p| BigRational::new((p - 1).into(), p.into()))
        .fold(BigRational::one(), |acc, r| acc * r)
}

/// `φ(b) (b + φ(b))^{m-1}`.
pub fn count_additions_general(base: Base, m: usize) -> BigUint {
    assert!(m >= 1, "m must be positive");
    let b = base.get() as u64;
    let phi = euler_phi(b);
    BigUint::from(phi) * BigUint::from(b + phi).pow(m - 1)
}

/// `b^m C_b (1 + C_b)^{m-1}` evaluated in exact rationals.
pub fn count_additions_by_density(base: Base, m: usize) -> BigRational {
    assert!(m >= 1, "m must be positive");
    let c = c_b(base);
    let b_to_m = BigRational::from_integer(num_bigint::BigInt::from(base.get()).pow(m));
    let growth = (BigRational::one() + &c).pow(m as i32 - 1);
    b_to_m * c * growth
}

/// `∏_i φ(b^{t_i})`: twist vectors available to one composition.
pub fn twist_count_for_composition(base: Base, composition: &Composition) -> BigUint {
    composition
        .parts()
        .iter()
        .map(|&t| phi_of_power(base, t))
        .product()
}

/// Enumerated versus closed-form scheme counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub base: u32,
    pub m: usize,
    pub compositions: usize,
    pub closed_form_total: BigUint,
    pub enumerated_parameter_tuples: BigUint,
    pub distinct_tables: Option<u64>,
}

impl CountReport {
    pub fn agrees(&self) -> bool {
        self.closed_form_total == self.enumerated_parameter_tuples
    }
}

/// Sums `∏ φ(b^{t_i})` over every composition of `m` and sets it beside the
/// closed form.
pub fn sum_over_compositions(base: Base, m: usize, budget: usize) -> Result<CountReport> {
    let compositions = enumerate_compositions(m, budget)?;
    let enumerated: BigUint = compositions
        .iter()
        .map(|c| twist_count_for_composition(base, c))
        .sum();
    Ok(CountReport {
        base: base.get(),
        m,
        compositions: compositions.len(),
        closed_form_total: count_additions_general(base, m),
        enumerated_parameter_tuples: enumerated,
        distinct_tables: None,
    })
}

/// Totient by gcd scan; test oracle only.
#[cfg(test)]
pub(crate) fn phi_by_scan(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}
