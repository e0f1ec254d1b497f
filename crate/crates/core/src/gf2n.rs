//! Exact arithmetic in GF(2^n) for even n = 2m, in polynomial basis.
//!
//! Elements are bit-packed coefficient vectors (bit i = coefficient of x^i)
//! reduced modulo an irreducible degree-n polynomial. The context owns the
//! modulus, a fixed primitive element, and the enumerated unit circle
//! `U = {x : x^(2^m+1) = 1}`. All operations are pure; a [`FieldCtx`] is
//! immutable after construction and safe to share across threads.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Smallest supported half-degree.
pub const MIN_M: u32 = 2;
/// Largest supported half-degree (n = 2m ≤ 32 keeps products inside u64).
pub const MAX_M: u32 = 16;

const BUILTIN_MODULI: &str = include_str!("../data/moduli.txt");

/// A bit-packed element of GF(2^n), interpreted relative to a [`FieldCtx`].
///
/// The wrapped value is the coefficient bitmask; the context's operations
/// keep it below 2^n. Serialized as the lowercase hex of the bit pattern.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(u64);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Raw coefficient bitmask.
    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Lowercase hex of the bit pattern, no prefix.
    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    /// Parses the hex produced by [`FieldElem::to_hex`]; a leading `0x` is allowed.
    pub fn from_hex(s: &str) -> Result<FieldElem> {
        let digits = s.strip_prefix("0x").unwrap_or(s);
        u64::from_str_radix(digits, 16)
            .map(FieldElem)
            .map_err(|e| Error::RangeError(format!("invalid hex element {s:?}: {e}")))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem(0x{:x})", self.0)
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

/// Table mapping even degrees n to irreducible modulus bitmasks.
///
/// The built-in table ships the lowest-weight, smallest-bitmask irreducible
/// polynomial for every even degree 4 ≤ n ≤ 32; an alternate table can be
/// parsed from the same `<degree> <hex>` line format.
#[derive(Debug, Clone)]
pub struct ModulusTable {
    entries: BTreeMap<u32, u64>,
}

impl ModulusTable {
    /// The table compiled into the crate.
    pub fn builtin() -> &'static ModulusTable {
        static TABLE: OnceLock<ModulusTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            ModulusTable::parse(BUILTIN_MODULI).expect("built-in modulus table must parse")
        })
    }

    /// Parses `<degree> <bitmask>` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<ModulusTable> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (deg, mask) = match (parts.next(), parts.next(), parts.next()) {
                (Some(d), Some(v), None) => (d, v),
                _ => {
                    return Err(Error::ModulusError(format!(
                        "modulus table line {}: expected `<degree> <bitmask>`, got {raw:?}",
                        lineno + 1
                    )))
                }
            };
            let deg: u32 = deg.parse().map_err(|e| {
                Error::ModulusError(format!("modulus table line {}: {e}", lineno + 1))
            })?;
            let mask = parse_bitmask(mask).map_err(|e| {
                Error::ModulusError(format!("modulus table line {}: {e}", lineno + 1))
            })?;
            entries.insert(deg, mask);
        }
        Ok(ModulusTable { entries })
    }

    /// Loads a table from a file (see [`ModulusTable::parse`] for the format).
    pub fn load(path: &std::path::Path) -> Result<ModulusTable> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ModulusError(format!("cannot read {}: {e}", path.display())))?;
        ModulusTable::parse(&text)
    }

    pub fn lookup(&self, degree: u32) -> Option<u64> {
        self.entries.get(&degree).copied()
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }
}

/// Parses `0x`-prefixed hex or plain decimal.
pub fn parse_bitmask(s: &str) -> Result<u64> {
    let parsed = if let Some(hex) = s.strip_prefix("0x") {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse()
    };
    parsed.map_err(|e| Error::RangeError(format!("invalid bitmask {s:?}: {e}")))
}

/// A concrete GF(2^n) instance with n = 2m.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    m: u32,
    n: u32,
    modulus: u64,
    generator: FieldElem,
    order: u64,
    circle: Vec<FieldElem>,
}

impl FieldCtx {
    /// Builds GF(2^(2m)) with the built-in modulus for degree 2m.
    pub fn new(m: u32) -> Result<FieldCtx> {
        FieldCtx::from_table(m, ModulusTable::builtin())
    }

    /// Builds GF(2^(2m)) with the modulus taken from `table`.
    pub fn from_table(m: u32, table: &ModulusTable) -> Result<FieldCtx> {
        check_m(m)?;
        let modulus = table.lookup(2 * m).ok_or_else(|| {
            Error::ModulusError(format!("modulus table has no entry for degree {}", 2 * m))
        })?;
        FieldCtx::with_modulus(m, modulus)
    }

    /// Builds GF(2^(2m)) with an explicit modulus bitmask, which must be an
    /// irreducible polynomial of degree exactly 2m.
    pub fn with_modulus(m: u32, modulus: u64) -> Result<FieldCtx> {
        check_m(m)?;
        let n = 2 * m;
        let degree = 63u32.saturating_sub(modulus.leading_zeros());
        if modulus == 0 || degree != n {
            return Err(Error::ModulusError(format!(
                "modulus 0x{modulus:x} has degree {degree}, expected {n}"
            )));
        }
        if !poly_is_irreducible(modulus) {
            return Err(Error::ModulusError(format!(
                "modulus 0x{modulus:x} is reducible over GF(2)"
            )));
        }
        let order = (1u64 << n) - 1;
        let mut ctx = FieldCtx {
            m,
            n,
            modulus,
            generator: FieldElem::ZERO,
            order,
            circle: Vec::new(),
        };
        ctx.generator = ctx.find_generator();
        ctx.circle = ctx.build_circle();
        Ok(ctx)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// 2^n − 1, the order of the multiplicative group.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// 2^m + 1, the order of the unit circle.
    pub fn circle_order(&self) -> u64 {
        (1u64 << self.m) + 1
    }

    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// Wraps a bitmask as an element. Panics if `bits` has coefficients at or
    /// above degree n.
    pub fn elem(&self, bits: u64) -> FieldElem {
        assert!(
            bits < (1u64 << self.n),
            "bit pattern 0x{bits:x} does not fit in GF(2^{})",
            self.n
        );
        FieldElem(bits)
    }

    /// Parses a hex element and range-checks it against this field.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        let e = FieldElem::from_hex(s)?;
        if e.0 >= (1u64 << self.n) {
            return Err(Error::RangeError(format!(
                "element 0x{:x} does not fit in GF(2^{})",
                e.0, self.n
            )));
        }
        Ok(e)
    }

    /// All 2^n elements in increasing bit-pattern order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..1u64 << self.n).map(FieldElem)
    }

    /// Coefficient-wise XOR.
    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        FieldElem(x.0 ^ y.0)
    }

    /// Carry-less multiply reduced by the modulus.
    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        debug_assert!(x.0 < (1u64 << self.n) && y.0 < (1u64 << self.n));
        let top = 1u64 << self.n;
        let mut a = x.0;
        let mut b = y.0;
        let mut acc = 0u64;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus;
            }
        }
        FieldElem(acc)
    }

    /// Multiplicative inverse, computed as x^(2^n − 2).
    pub fn inv(&self, x: FieldElem) -> Result<FieldElem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(x, self.order as i64 - 1))
    }

    /// x · y^(−1).
    pub fn div(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Square-and-multiply exponentiation with polynomial-function semantics:
    /// the exponent is reduced mod 2^n − 1 for nonzero bases, 0^0 = 1 and
    /// 0^e = 0 for e > 0. Panics for 0 raised to a negative power.
    pub fn pow(&self, x: FieldElem, e: i64) -> FieldElem {
        if x.is_zero() {
            return match e {
                0 => FieldElem::ONE,
                e if e > 0 => FieldElem::ZERO,
                _ => panic!("zero cannot be raised to a negative power"),
            };
        }
        let mut e = e.rem_euclid(self.order as i64) as u64;
        let mut base = x;
        let mut acc = FieldElem::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// x^(2^j) by repeated squaring (j reduced by the Frobenius period n).
    pub fn frobenius(&self, x: FieldElem, j: u32) -> FieldElem {
        let mut y = x;
        for _ in 0..(j % self.n) {
            y = self.mul(y, y);
        }
        y
    }

    /// The conjugate x̄ = x^(2^m) over the subfield GF(2^m).
    pub fn conj(&self, x: FieldElem) -> FieldElem {
        self.frobenius(x, self.m)
    }

    /// The unit circle U = {x : x^(2^m+1) = 1} in the fixed enumeration order
    /// u_i = (g^(2^m−1))^i for i = 0 … 2^m, so the first element is 1.
    pub fn unit_circle(&self) -> &[FieldElem] {
        &self.circle
    }

    /// True iff x ≠ 0 and x^(2^m+1) = 1.
    pub fn is_in_unit_circle(&self, x: FieldElem) -> bool {
        !x.is_zero() && self.pow(x, self.circle_order() as i64) == FieldElem::ONE
    }

    /// Smallest element (by bit pattern) of full multiplicative order.
    fn find_generator(&self) -> FieldElem {
        let factors = prime_factors(self.order);
        for bits in 2..(1u64 << self.n) {
            let candidate = FieldElem(bits);
            let full_order = factors
                .iter()
                .all(|&q| self.pow(candidate, (self.order / q) as i64) != FieldElem::ONE);
            if full_order {
                return candidate;
            }
        }
        unreachable!("GF(2^n)* is cyclic, a generator always exists")
    }

    fn build_circle(&self) -> Vec<FieldElem> {
        let step = self.pow(self.generator, (1i64 << self.m) - 1);
        let mut circle = Vec::with_capacity(self.circle_order() as usize);
        let mut cur = FieldElem::ONE;
        for _ in 0..self.circle_order() {
            circle.push(cur);
            cur = self.mul(cur, step);
        }
        circle
    }
}

fn check_m(m: u32) -> Result<()> {
    if !(MIN_M..=MAX_M).contains(&m) {
        return Err(Error::RangeError(format!(
            "m = {m} outside supported range {MIN_M}..={MAX_M}"
        )));
    }
    Ok(())
}

/// Prime factorization by trial division; enough for 2^n − 1 with n ≤ 32.
fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d * d <= x {
        if x.is_multiple_of(d) {
            factors.push(d);
            while x.is_multiple_of(d) {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        factors.push(x);
    }
    factors
}

// ---- polynomial arithmetic over GF(2) on raw bitmasks (modulus validation) ----

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    debug_assert!(b != 0);
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Multiplication mod f for operands below 2^deg(f); deg(f) ≤ 32 keeps the
/// shifted operand inside u64.
fn poly_mulmod(x: u64, y: u64, f: u64) -> u64 {
    let top = 1u64 << poly_degree(f);
    let mut a = x;
    let mut b = y;
    let mut acc = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= f;
        }
    }
    acc
}

/// x^(2^k) mod f by k squarings.
fn poly_x_pow_2k(f: u64, k: u32) -> u64 {
    let mut r = 0b10u64;
    for _ in 0..k {
        r = poly_mulmod(r, r, f);
    }
    r
}

/// Rabin irreducibility test: f of degree n is irreducible over GF(2) iff
/// x^(2^n) ≡ x (mod f) and gcd(x^(2^(n/q)) − x, f) = 1 for every prime q | n.
pub fn poly_is_irreducible(f: u64) -> bool {
    let n = poly_degree(f);
    if n < 1 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let n = n as u32;
    if poly_x_pow_2k(f, n) != 0b10 {
        return false;
    }
    for q in prime_factors(n as u64) {
        let sub = poly_x_pow_2k(f, n / q as u32) ^ 0b10;
        if poly_gcd(sub, f) != 1 {
            return false;
        }
    }
    true
}
