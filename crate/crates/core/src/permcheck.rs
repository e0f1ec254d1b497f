//! Permutation verification engines.
//!
//! Two independent routes decide whether f(x) = x^r + x^(s(2^m−1)+r) +
//! x^(t(2^m−1)+r) permutes GF(2^n): a full-field brute force with an
//! occupancy bitset, and the unit-circle criterion — gcd(r, 2^m−1) = 1
//! together with bijectivity of h(x) = x^r (1 + x^s + x^t)^(2^m−1) on U.
//! The closed fractional forms of the known-family table are evaluated here
//! as well, plus the substitution identities tying them to the generic
//! constructions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2n::{FieldCtx, FieldElem};
use crate::mobius::ProjPoint;
use crate::residue::{self, gcd_u64, NihoPair};

/// The trinomial f_{r,s,t}(x) = x^r + x^(s(2^m−1)+r) + x^(t(2^m−1)+r),
/// with the plain construction (r = 1) as the default.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct TrinomialSpec {
    r: u64,
    pair: NihoPair,
    /// Term exponents reduced mod 2^n − 1, in declaration order (r-term,
    /// s-term, t-term). The reduced values are what the evaluation of a
    /// polynomial function on nonzero arguments sees.
    term_exps: [u64; 3],
    degenerate: bool,
}

impl TrinomialSpec {
    /// Panics if r = 0; the trinomial family requires r ≥ 1.
    pub fn new(r: u64, pair: NihoPair) -> TrinomialSpec {
        assert!(r >= 1, "trinomial exponent r must be at least 1");
        let order = (1u64 << (2 * pair.m)) - 1;
        let reduce = |e: u128| (e % order as u128) as u64;
        let term_exps = [
            reduce(r as u128),
            reduce(pair.exp_s as u128 - 1 + r as u128),
            reduce(pair.exp_t as u128 - 1 + r as u128),
        ];
        let degenerate = term_exps[0] == term_exps[1]
            || term_exps[0] == term_exps[2]
            || term_exps[1] == term_exps[2];
        TrinomialSpec {
            r,
            pair,
            term_exps,
            degenerate,
        }
    }

    pub fn plain(pair: NihoPair) -> TrinomialSpec {
        TrinomialSpec::new(1, pair)
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn pair(&self) -> &NihoPair {
        &self.pair
    }

    pub fn m(&self) -> u32 {
        self.pair.m
    }

    pub fn term_exponents(&self) -> [u64; 3] {
        self.term_exps
    }

    /// True when two of the three exponents coincide mod 2^n − 1, so the
    /// corresponding terms cancel and f reduces to a binomial or monomial.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Evaluates f at one point. Characteristic-2 addition makes coinciding
    /// terms cancel with no special casing; f(0) = 0 because every true
    /// exponent is positive.
    pub fn eval(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        if x.is_zero() {
            return FieldElem::ZERO;
        }
        let mut acc = FieldElem::ZERO;
        for &e in &self.term_exps {
            acc = ctx.add(acc, ctx.pow(x, e as i64));
        }
        acc
    }
}

/// Which engine produced a [`VerifyReport`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CheckMethod {
    BruteForce,
    ZieveCircle,
}

/// Outcome of a permutation check, serializable as a flat JSON object.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub is_permutation: bool,
    pub method: CheckMethod,
    pub m: u32,
    pub r: u64,
    pub s: u64,
    pub t: u64,
    pub exp_s: u64,
    pub exp_t: u64,
    /// Two distinct field elements with the same image, present when brute
    /// force refutes the permutation property.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<[FieldElem; 2]>,
    /// First x ∈ U with 1 + x^s + x^t = 0, present when the circle route
    /// found the degenerate value h(x) = 0.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circle_degenerate: Option<FieldElem>,
    pub degenerate: bool,
}

impl VerifyReport {
    fn new(spec: &TrinomialSpec, method: CheckMethod, is_permutation: bool) -> VerifyReport {
        VerifyReport {
            is_permutation,
            method,
            m: spec.pair.m,
            r: spec.r,
            s: spec.pair.s,
            t: spec.pair.t,
            exp_s: spec.pair.exp_s,
            exp_t: spec.pair.exp_t,
            witnesses: None,
            circle_degenerate: None,
            degenerate: spec.degenerate,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Evaluates f at all 2^n field elements, marking images in an occupancy
/// bitset over the canonical integer encoding.
///
/// Enumeration order is 0 followed by the generator powers g^0, g^1, …,
/// which lets each of the three monomials advance by one multiplication per
/// step; the first collision in that order is reported as the witness pair.
pub fn brute_force_check(ctx: &FieldCtx, spec: &TrinomialSpec) -> VerifyReport {
    debug_assert_eq!(ctx.m(), spec.pair.m, "context and spec must agree on m");
    let order = ctx.order();
    let mut seen = Bitset::new(1u64 << ctx.n());
    let mut report = VerifyReport::new(spec, CheckMethod::BruteForce, true);

    seen.set(0); // f(0) = 0

    let g = ctx.generator();
    let steps = spec.term_exps.map(|e| ctx.pow(g, e as i64));
    let mut terms = [FieldElem::ONE; 3]; // g^0 raised to each exponent
    let mut x = FieldElem::ONE;
    for _ in 0..order {
        let image = ctx.add(ctx.add(terms[0], terms[1]), terms[2]);
        if seen.get(image.bits()) {
            report.is_permutation = false;
            report.witnesses = Some([first_preimage(ctx, spec, image, x), x]);
            return report;
        }
        seen.set(image.bits());
        for (term, step) in terms.iter_mut().zip(steps) {
            *term = ctx.mul(*term, step);
        }
        x = ctx.mul(x, g);
    }
    report
}

/// Finds the earliest element (in the brute-force enumeration order) whose
/// image equals `image`, excluding `collider` itself.
fn first_preimage(
    ctx: &FieldCtx,
    spec: &TrinomialSpec,
    image: FieldElem,
    collider: FieldElem,
) -> FieldElem {
    if image.is_zero() {
        return FieldElem::ZERO;
    }
    let mut x = FieldElem::ONE;
    for _ in 0..ctx.order() {
        if x != collider && spec.eval(ctx, x) == image {
            return x;
        }
        x = ctx.mul(x, ctx.generator());
    }
    unreachable!("a collision witness must have an earlier preimage")
}

/// The value h(x) = x^r (1 + x^s + x^t)^(2^m−1) at a single point of U.
/// The convention 0^(2^m−1) = 0 sends the degenerate case 1 + x^s + x^t = 0
/// to h(x) = 0, which is not on U and therefore fails the bijection test
/// with no special path.
pub fn circle_value(ctx: &FieldCtx, spec: &TrinomialSpec, x: FieldElem) -> FieldElem {
    let w = ctx.add(
        ctx.add(FieldElem::ONE, ctx.pow(x, spec.pair.s as i64)),
        ctx.pow(x, spec.pair.t as i64),
    );
    let half_order = (1u64 << ctx.m()) - 1;
    // x^r for x on the circle equals x^(r mod 2^n−1); the reduced exponent
    // also keeps the cast safe for very large r
    ctx.mul(
        ctx.pow(x, spec.term_exps[0] as i64),
        ctx.pow(w, half_order as i64),
    )
}

/// The table x ∈ U → h(x), in the unit-circle enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleMap {
    values: Vec<FieldElem>,
    degenerate: Option<FieldElem>,
}

impl CircleMap {
    /// Values aligned with `ctx.unit_circle()`.
    pub fn values(&self) -> &[FieldElem] {
        &self.values
    }

    /// First x ∈ U with 1 + x^s + x^t = 0, if any.
    pub fn degenerate(&self) -> Option<FieldElem> {
        self.degenerate
    }

    /// True iff h restricts to a bijection of U: no degenerate zero value
    /// and all values distinct.
    pub fn is_bijection(&self) -> bool {
        if self.degenerate.is_some() {
            return false;
        }
        let mut bits: Vec<u64> = self.values.iter().map(|v| v.bits()).collect();
        bits.sort_unstable();
        bits.windows(2).all(|w| w[0] != w[1])
    }
}

/// Evaluates h over the whole unit circle.
pub fn circle_map(ctx: &FieldCtx, spec: &TrinomialSpec) -> CircleMap {
    debug_assert_eq!(ctx.m(), spec.pair.m, "context and spec must agree on m");
    let mut values = Vec::with_capacity(ctx.unit_circle().len());
    let mut degenerate = None;
    for &x in ctx.unit_circle() {
        let value = circle_value(ctx, spec, x);
        if value.is_zero() && degenerate.is_none() {
            degenerate = Some(x);
        }
        values.push(value);
    }
    CircleMap { values, degenerate }
}

/// The unit-circle permutation criterion: f permutes GF(2^n) iff
/// gcd(r, 2^m − 1) = 1 and h is a bijection of U.
pub fn zieve_check(ctx: &FieldCtx, spec: &TrinomialSpec) -> VerifyReport {
    let cm = circle_map(ctx, spec);
    let gcd_ok = gcd_u64(spec.r, (1u64 << ctx.m()) - 1) == 1;
    let mut report = VerifyReport::new(
        spec,
        CheckMethod::ZieveCircle,
        gcd_ok && cm.is_bijection(),
    );
    report.circle_degenerate = cm.degenerate();
    report
}

/// Exponent lists of the closed fractional forms h(x) = num/den from the
/// known-pairs table; a list [e0, e1, …] denotes x^e0 + x^e1 + ….
fn row_fraction_exponents(row: u32, k: Option<u32>) -> Result<(Vec<u64>, Vec<u64>)> {
    let need_k = || -> Result<u64> {
        let k = k.ok_or_else(|| {
            Error::RangeError(format!("row {row} is k-parameterized, k is required"))
        })?;
        if !(1..=31).contains(&k) {
            return Err(Error::RangeError(format!("k = {k} outside 1..=31")));
        }
        Ok(1u64 << k)
    };
    Ok(match row {
        1 => (vec![1], vec![0]),
        2 => (vec![3, 2, 0], vec![3, 1, 0]),
        3 => (vec![4, 3, 1], vec![3, 1, 0]),
        4 => (vec![5, 4, 0], vec![5, 1, 0]),
        5 => (vec![4, 3, 0], vec![5, 2, 1]),
        6 => (vec![7, 5, 0], vec![7, 2, 0]),
        7 => (vec![5, 4, 1], vec![4, 1, 0]),
        8 => (vec![6, 2, 1], vec![5, 4, 0]),
        9 => (vec![6, 4, 0], vec![7, 3, 1]),
        10 => {
            let pk = need_k()?;
            (vec![pk + 1, pk, 0], vec![pk + 1, 1, 0])
        }
        11 => {
            let pk = need_k()?;
            (vec![pk + 1, pk, 1], vec![pk, 1, 0])
        }
        _ => {
            return Err(Error::RangeError(format!(
                "table row {row} outside 1..=11"
            )))
        }
    })
}

fn eval_exponent_sum(ctx: &FieldCtx, exps: &[u64], x: FieldElem) -> FieldElem {
    exps.iter().fold(FieldElem::ZERO, |acc, &e| {
        ctx.add(acc, ctx.pow(x, e as i64))
    })
}

/// Evaluates a table row's closed fractional form at every x ∈ U, in the
/// unit-circle enumeration order. A vanishing denominator yields ∞.
pub fn table1_fraction(ctx: &FieldCtx, row: u32, k: Option<u32>) -> Result<Vec<ProjPoint>> {
    let (num_exps, den_exps) = row_fraction_exponents(row, k)?;
    let mut out = Vec::with_capacity(ctx.unit_circle().len());
    for &x in ctx.unit_circle() {
        let num = eval_exponent_sum(ctx, &num_exps, x);
        let den = eval_exponent_sum(ctx, &den_exps, x);
        if den.is_zero() {
            out.push(ProjPoint::Infinity);
        } else {
            out.push(ProjPoint::Finite(ctx.div(num, den).expect("den nonzero")));
        }
    }
    Ok(out)
}

/// Verifies, pointwise over U, that the circle map of each generic
/// construction composed with the matching power substitution reproduces the
/// table's closed fraction, and that the fraction denominators never vanish:
///
/// * pairs (2^k/(2^k−1), −1/(2^k−1)): h(x^(2^k−1)) against row 10, with
///   x^(2^k+1) + x + 1 ≠ 0 on U (requires k < m and gcd(2^k−1, 2^m+1) = 1);
/// * pairs (1/(2^k+1), 2^k/(2^k+1)): h(x^(2^k+1)) against row 11, with
///   x^(2^k) + x + 1 ≠ 0 on U (requires gcd(2^k+1, 2^m+1) = 1).
///
/// Each side runs only when its own hypothesis holds at (k, m); asking for a
/// (k, m) where neither applies is a precondition error.
pub fn substitution_identity_check(ctx: &FieldCtx, k: u32) -> Result<bool> {
    let m = ctx.m();
    if k < 1 {
        return Err(Error::RangeError("k must be at least 1".into()));
    }
    let side_minus = k < m && residue::coprime_2k_minus_1(k, m)?;
    let side_plus = residue::coprime_2k_plus_1(k, m)?;
    if !side_minus && !side_plus {
        return Err(Error::PreconditionError(format!(
            "neither construction applies at (k, m) = ({k}, {m}): \
             need k < m with gcd(2^k-1, 2^m+1) = 1, or gcd(2^k+1, 2^m+1) = 1"
        )));
    }
    let pk = 1i64 << k;
    let mut ok = true;

    if side_minus {
        let pair = residue::niho_pair(
            residue::Fraction::new(pk, pk - 1),
            residue::Fraction::new(-1, pk - 1),
            m,
        )?;
        let spec = TrinomialSpec::plain(pair);
        let fraction = table1_fraction(ctx, 10, Some(k))?;
        for (i, &x) in ctx.unit_circle().iter().enumerate() {
            let den = ctx.add(ctx.add(ctx.pow(x, pk + 1), x), FieldElem::ONE);
            if den.is_zero() {
                ok = false;
                continue;
            }
            let h = circle_value(ctx, &spec, ctx.pow(x, pk - 1));
            if fraction[i] != ProjPoint::Finite(h) {
                ok = false;
            }
        }
    }

    if side_plus {
        let pair = residue::niho_pair(
            residue::Fraction::new(1, pk + 1),
            residue::Fraction::new(pk, pk + 1),
            m,
        )?;
        let spec = TrinomialSpec::plain(pair);
        let fraction = table1_fraction(ctx, 11, Some(k))?;
        for (i, &x) in ctx.unit_circle().iter().enumerate() {
            let den = ctx.add(ctx.add(ctx.pow(x, pk), x), FieldElem::ONE);
            if den.is_zero() {
                ok = false;
                continue;
            }
            let h = circle_value(ctx, &spec, ctx.pow(x, pk + 1));
            if fraction[i] != ProjPoint::Finite(h) {
                ok = false;
            }
        }
    }

    Ok(ok)
}

/// Fixed-size bitset over the canonical integer encoding of field elements.
struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    fn new(len: u64) -> Bitset {
        Bitset {
            words: vec![0; len.div_ceil(64) as usize],
        }
    }

    fn get(&self, idx: u64) -> bool {
        self.words[(idx / 64) as usize] >> (idx % 64) & 1 == 1
    }

    fn set(&mut self, idx: u64) {
        self.words[(idx / 64) as usize] |= 1 << (idx % 64);
    }
}
