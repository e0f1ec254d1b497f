//! Exponent arithmetic modulo 2^m + 1.
//!
//! Trinomial exponent pairs (s, t) are residues modulo 2^m + 1; fractional or
//! negative notation like `4/3` or `-1/2` denotes modular division. This
//! module reduces fractions to residues, synthesizes the field exponents
//! s(2^m − 1) + 1, and hosts the two coprimality predicates whose closed
//! forms are re-checked against a direct gcd on every call.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest half-degree accepted by the pure exponent arithmetic (keeps
/// 2^m + 1 comfortably inside u64).
pub const MAX_RESIDUE_M: u32 = 62;

/// The residue modulus 2^m + 1.
pub fn circle_modulus(m: u32) -> u64 {
    (1u64 << m) + 1
}

/// An exponent parameter written as an integer or a fraction, to be read
/// modulo 2^m + 1.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: i64,
    den: i64,
}

impl Fraction {
    /// Panics if `den` is zero; use the `FromStr` grammar for untrusted input.
    pub const fn new(num: i64, den: i64) -> Fraction {
        assert!(den != 0, "fraction denominator must be nonzero");
        Fraction { num, den }
    }

    pub const fn int(num: i64) -> Fraction {
        Fraction { num, den: 1 }
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    /// Reduces this fraction to a residue in [0, 2^m].
    pub fn to_residue(self, m: u32) -> Result<u64> {
        frac_to_residue(self.num, self.den, m)
    }
}

impl From<i64> for Fraction {
    fn from(num: i64) -> Fraction {
        Fraction::int(num)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fraction({self})")
    }
}

/// Grammar: optional sign, decimal numerator, optional `/` and decimal
/// denominator. Examples: `2`, `-1`, `1/2`, `-1/3`.
impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Fraction> {
        let bad = |why: &str| Error::FractionError(format!("cannot parse {s:?}: {why}"));
        let t = s.trim();
        let (num_str, den_str) = match t.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (t, None),
        };
        let num: i64 = num_str
            .parse()
            .map_err(|_| bad("numerator must be a decimal integer"))?;
        let den: i64 = match den_str {
            None => 1,
            Some(d) => {
                if d.starts_with(['+', '-']) {
                    return Err(bad("denominator must be unsigned"));
                }
                d.parse()
                    .map_err(|_| bad("denominator must be a decimal integer"))?
            }
        };
        if den == 0 {
            return Err(bad("denominator is zero"));
        }
        Ok(Fraction { num, den })
    }
}

/// Reduces num/den modulo 2^m + 1 into [0, 2^m]. The denominator must be
/// invertible; negative numerators reduce in the usual way.
pub fn frac_to_residue(num: i64, den: i64, m: u32) -> Result<u64> {
    if !(1..=MAX_RESIDUE_M).contains(&m) {
        return Err(Error::RangeError(format!(
            "m = {m} outside supported range 1..={MAX_RESIDUE_M}"
        )));
    }
    let modulus = circle_modulus(m);
    let den = den.rem_euclid(modulus as i64) as u64;
    let inv = mod_inverse(den, modulus).ok_or_else(|| {
        Error::FractionError(format!(
            "denominator {den} is not invertible modulo 2^{m}+1 = {modulus}"
        ))
    })?;
    let num = num.rem_euclid(modulus as i64) as u64;
    Ok(mul_mod(num, inv, modulus))
}

/// A pair of normalized Niho exponents: residues (s, t) modulo 2^m + 1
/// together with the field exponents s(2^m − 1) + 1 and t(2^m − 1) + 1
/// reduced modulo 2^n − 1.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NihoPair {
    pub m: u32,
    pub s: u64,
    pub t: u64,
    pub exp_s: u64,
    pub exp_t: u64,
}

/// Builds a [`NihoPair`] from fractional exponent parameters.
pub fn niho_pair(s: impl Into<Fraction>, t: impl Into<Fraction>, m: u32) -> Result<NihoPair> {
    if !(crate::gf2n::MIN_M..=crate::gf2n::MAX_M).contains(&m) {
        return Err(Error::RangeError(format!(
            "m = {m} outside supported range {}..={}",
            crate::gf2n::MIN_M,
            crate::gf2n::MAX_M
        )));
    }
    let s = s.into().to_residue(m)?;
    let t = t.into().to_residue(m)?;
    Ok(NihoPair {
        m,
        s,
        t,
        exp_s: niho_exponent(s, m),
        exp_t: niho_exponent(t, m),
    })
}

/// (s(2^m − 1) + 1) mod (2^n − 1) for a residue s in [0, 2^m].
pub fn niho_exponent(s: u64, m: u32) -> u64 {
    let field_order = (1u64 << (2 * m)) - 1;
    (s * ((1u64 << m) - 1) + 1) % field_order
}

/// gcd(2^k − 1, 2^m + 1) = 1, computed both by direct gcd and by the parity
/// closed form "k / gcd(m, k) is odd"; the two routes must agree.
pub fn coprime_2k_minus_1(k: u32, m: u32) -> Result<bool> {
    check_km(k, m)?;
    let direct = gcd_u128((1u128 << k) - 1, (1u128 << m) + 1) == 1;
    let closed = (k / gcd_u64(k as u64, m as u64) as u32) % 2 == 1;
    if direct != closed {
        return Err(Error::ConsistencyError(format!(
            "coprime_2k_minus_1(k={k}, m={m}): direct gcd says {direct}, closed form says {closed}"
        )));
    }
    Ok(direct)
}

/// gcd(2^k + 1, 2^m + 1) = 1, closed form "m / gcd(m, k) or k / gcd(m, k)
/// is even"; both routes must agree.
pub fn coprime_2k_plus_1(k: u32, m: u32) -> Result<bool> {
    check_km(k, m)?;
    let direct = gcd_u128((1u128 << k) + 1, (1u128 << m) + 1) == 1;
    let g = gcd_u64(k as u64, m as u64) as u32;
    let closed = (m / g).is_multiple_of(2) || (k / g).is_multiple_of(2);
    if direct != closed {
        return Err(Error::ConsistencyError(format!(
            "coprime_2k_plus_1(k={k}, m={m}): direct gcd says {direct}, closed form says {closed}"
        )));
    }
    Ok(direct)
}

fn check_km(k: u32, m: u32) -> Result<()> {
    if k < 1 || m < 1 || k > MAX_RESIDUE_M || m > MAX_RESIDUE_M {
        return Err(Error::RangeError(format!(
            "(k, m) = ({k}, {m}) outside supported range 1..={MAX_RESIDUE_M}"
        )));
    }
    Ok(())
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mul_mod(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

/// Extended Euclid; returns a^(−1) mod modulus when gcd(a, modulus) = 1.
fn mod_inverse(a: u64, modulus: u64) -> Option<u64> {
    let (mut r0, mut r1) = (modulus as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(modulus as i128) as u64)
}
