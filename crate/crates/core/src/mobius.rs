//! Linear fractional maps on GF(2^n) ∪ {∞} and the iterated-conjugation
//! machinery built from them.
//!
//! A map x ↦ (ax + b)/(cx + d) with ad + bc ≠ 0 permutes the projective
//! line, with the usual conventions at ∞. For a unit-circle element `a`
//! with a³ ≠ 1 the special map φ_a(x) = (ax + (a+1))/((a+1)x + 1) turns the
//! relation x^(2^k) = φ_a(x) into a closed form for every higher Frobenius
//! power x^(2^(ik)); [`e_sequence`] produces the coefficients of those
//! forms, with an ∞ marker where the form collapses to the identity.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2n::{FieldCtx, FieldElem};

/// A point of the projective line GF(2^n) ∪ {∞}.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum ProjPoint {
    Finite(FieldElem),
    Infinity,
}

impl ProjPoint {
    pub fn is_infinity(self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn finite(self) -> Option<FieldElem> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }

    /// Parses the serialization produced by `Display`: hex bits or `inf`.
    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<ProjPoint> {
        if s == "inf" {
            Ok(ProjPoint::Infinity)
        } else {
            Ok(ProjPoint::Finite(ctx.parse_elem(s)?))
        }
    }
}

impl From<FieldElem> for ProjPoint {
    fn from(x: FieldElem) -> ProjPoint {
        ProjPoint::Finite(x)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(x) => write!(f, "{x}"),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// x ↦ (ax + b)/(cx + d) with nonzero determinant ad + bc.
///
/// Coefficients are kept unnormalized; maps that differ by a scalar multiple
/// of the quadruple act identically, so equality is decided pointwise or via
/// [`MobiusMap::proportional`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct MobiusMap {
    a: FieldElem,
    b: FieldElem,
    c: FieldElem,
    d: FieldElem,
}

impl MobiusMap {
    pub fn new(
        ctx: &FieldCtx,
        a: FieldElem,
        b: FieldElem,
        c: FieldElem,
        d: FieldElem,
    ) -> Result<MobiusMap> {
        let map = MobiusMap { a, b, c, d };
        if map.determinant(ctx).is_zero() {
            return Err(Error::DegenerateMapError(format!(
                "ad + bc = 0 for coefficients ({a}, {b}, {c}, {d})"
            )));
        }
        Ok(map)
    }

    pub fn identity() -> MobiusMap {
        MobiusMap {
            a: FieldElem::ONE,
            b: FieldElem::ZERO,
            c: FieldElem::ZERO,
            d: FieldElem::ONE,
        }
    }

    /// x ↦ 1/x.
    pub fn reciprocal() -> MobiusMap {
        MobiusMap {
            a: FieldElem::ZERO,
            b: FieldElem::ONE,
            c: FieldElem::ONE,
            d: FieldElem::ZERO,
        }
    }

    pub fn coeffs(&self) -> (FieldElem, FieldElem, FieldElem, FieldElem) {
        (self.a, self.b, self.c, self.d)
    }

    /// ad + bc (equal to ad − bc in characteristic 2).
    pub fn determinant(&self, ctx: &FieldCtx) -> FieldElem {
        ctx.add(ctx.mul(self.a, self.d), ctx.mul(self.b, self.c))
    }

    /// Evaluates the map with the projective conventions: a finite x with
    /// cx + d = 0 goes to ∞; ∞ goes to a/c when c ≠ 0 and stays ∞ otherwise.
    pub fn apply(&self, ctx: &FieldCtx, p: ProjPoint) -> ProjPoint {
        match p {
            ProjPoint::Finite(x) => {
                let den = ctx.add(ctx.mul(self.c, x), self.d);
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    let num = ctx.add(ctx.mul(self.a, x), self.b);
                    ProjPoint::Finite(value_div(ctx, num, den))
                }
            }
            ProjPoint::Infinity => {
                if self.c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(value_div(ctx, self.a, self.c))
                }
            }
        }
    }

    /// Coefficients of f ∘ g (the product of the coefficient matrices); the
    /// determinant multiplies, so the result is again nondegenerate.
    pub fn compose(ctx: &FieldCtx, f: &MobiusMap, g: &MobiusMap) -> MobiusMap {
        let mul = |x, y| ctx.mul(x, y);
        let add = |x, y| ctx.add(x, y);
        MobiusMap {
            a: add(mul(f.a, g.a), mul(f.b, g.c)),
            b: add(mul(f.a, g.b), mul(f.b, g.d)),
            c: add(mul(f.c, g.a), mul(f.d, g.c)),
            d: add(mul(f.c, g.b), mul(f.d, g.d)),
        }
    }

    /// True iff the coefficient quadruples differ by a scalar factor, i.e.
    /// all 2×2 minors of the stacked 2×4 matrix vanish.
    pub fn proportional(ctx: &FieldCtx, f: &MobiusMap, g: &MobiusMap) -> bool {
        let fs = [f.a, f.b, f.c, f.d];
        let gs = [g.a, g.b, g.c, g.d];
        for i in 0..4 {
            for j in (i + 1)..4 {
                if ctx.mul(fs[i], gs[j]) != ctx.mul(fs[j], gs[i]) {
                    return false;
                }
            }
        }
        true
    }
}

fn value_div(ctx: &FieldCtx, num: FieldElem, den: FieldElem) -> FieldElem {
    ctx.div(num, den).expect("denominator checked nonzero")
}

/// The map φ_a(x) = (ax + (a+1))/((a+1)x + 1) for a on the unit circle.
///
/// The determinant is a² + a + 1, so construction fails exactly for the
/// unit-circle elements of order three (possible only for odd m); callers
/// handle that case by solving x^(2^k) = a + 1 = a² directly.
pub fn phi_from_a(ctx: &FieldCtx, a: FieldElem) -> Result<MobiusMap> {
    if !ctx.is_in_unit_circle(a) {
        return Err(Error::DomainError(format!(
            "a = {a} is not on the unit circle"
        )));
    }
    let a_plus_1 = ctx.add(a, FieldElem::ONE);
    let det = ctx.add(ctx.add(ctx.mul(a, a), a), FieldElem::ONE);
    if det.is_zero() {
        return Err(Error::DegenerateMapError(format!(
            "a = {a} satisfies a^2 + a + 1 = 0"
        )));
    }
    Ok(MobiusMap {
        a,
        b: a_plus_1,
        c: a_plus_1,
        d: FieldElem::ONE,
    })
}

/// The coefficient sequence e_1 = a/(a+1), e_i = φ_a(e_(i−1)^(2^k)), with
/// e_i = ∞ exactly when e_(i−1)^(2^k) + e_1 + 1 = 0. `entries[i]` holds
/// e_(i+1), so `entries[0]` is e_1.
#[derive(Clone, Debug)]
pub struct ESequence {
    pub a: FieldElem,
    pub k: u32,
    pub e1: FieldElem,
    pub entries: Vec<ProjPoint>,
}

pub fn e_sequence(ctx: &FieldCtx, a: FieldElem, k: u32, i_max: usize) -> Result<ESequence> {
    if k < 1 {
        return Err(Error::RangeError("k must be at least 1".into()));
    }
    if i_max < 1 {
        return Err(Error::RangeError("i_max must be at least 1".into()));
    }
    if !ctx.is_in_unit_circle(a) {
        return Err(Error::DomainError(format!(
            "a = {a} is not on the unit circle"
        )));
    }
    if ctx.pow(a, 3) == FieldElem::ONE {
        return Err(Error::DomainError(format!("a = {a} violates a^3 != 1")));
    }
    let phi = phi_from_a(ctx, a).expect("a^3 != 1 implies a^2 + a + 1 != 0");
    let e1 = value_div(ctx, a, ctx.add(a, FieldElem::ONE));
    let mut entries = Vec::with_capacity(i_max);
    entries.push(ProjPoint::Finite(e1));
    for _ in 1..i_max {
        let prev = *entries.last().unwrap();
        // ∞^(2^k) stays ∞, and φ_a(∞) = a/(a+1) = e_1; the finite branch hits
        // ∞ precisely when the denominator w + e_1 + 1 vanishes.
        let raised = match prev {
            ProjPoint::Finite(e) => ProjPoint::Finite(ctx.frobenius(e, k)),
            ProjPoint::Infinity => ProjPoint::Infinity,
        };
        entries.push(phi.apply(ctx, raised));
    }
    Ok(ESequence { a, k, e1, entries })
}

/// Closed form of x^(2^(ik)) on solutions of x^(2^k) = φ_a(x): either the
/// identity (when e_i = ∞) or the map (e_i·x + 1)/(x + e_i + 1).
#[derive(Copy, Clone, Debug)]
pub enum IterateForm {
    Identity,
    Map(MobiusMap),
}

impl IterateForm {
    pub fn is_identity(&self) -> bool {
        matches!(self, IterateForm::Identity)
    }

    pub fn eval(&self, ctx: &FieldCtx, p: ProjPoint) -> ProjPoint {
        match self {
            IterateForm::Identity => p,
            IterateForm::Map(map) => map.apply(ctx, p),
        }
    }
}

/// The i-th iterate form; i = 1 returns φ_a itself rewritten as
/// (e_1·x + 1)/(x + e_1 + 1).
pub fn iterate_form(ctx: &FieldCtx, a: FieldElem, k: u32, i: usize) -> Result<IterateForm> {
    if i < 1 {
        return Err(Error::RangeError("i must be at least 1".into()));
    }
    let seq = e_sequence(ctx, a, k, i)?;
    form_at(ctx, &seq, i)
}

/// Reads the i-th form out of an already-computed sequence.
pub fn form_at(ctx: &FieldCtx, seq: &ESequence, i: usize) -> Result<IterateForm> {
    match seq.entries.get(i - 1) {
        None => Err(Error::RangeError(format!(
            "sequence holds {} entries, index i = {i} unavailable",
            seq.entries.len()
        ))),
        Some(ProjPoint::Infinity) => Ok(IterateForm::Identity),
        Some(&ProjPoint::Finite(e)) => {
            let map = MobiusMap::new(ctx, e, FieldElem::ONE, FieldElem::ONE, ctx.add(e, FieldElem::ONE))?;
            Ok(IterateForm::Map(map))
        }
    }
}
