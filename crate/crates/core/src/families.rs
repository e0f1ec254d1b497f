//! Constructors and the catalog of known permutation pairs.
//!
//! Two parameterized constructors cover the generic families: pairs
//! (2^k/(2^k−1), −1/(2^k−1)) valid for k < m with gcd(2^k−1, 2^m+1) = 1,
//! and pairs (1/(2^k+1), 2^k/(2^k+1)) valid for gcd(2^k+1, 2^m+1) = 1.
//! The catalog transcribes the known-pairs table as data: eleven rows with
//! fraction literals, applicability conditions and the published equivalent
//! pairs, stored verbatim (including the duplicated equivalents of rows 8
//! and 9, which are reported as printed rather than corrected).

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::gf2n::FieldCtx;
use crate::permcheck::{circle_map, TrinomialSpec};
use crate::residue::{
    circle_modulus, coprime_2k_minus_1, coprime_2k_plus_1, gcd_u64, niho_pair, Fraction, NihoPair,
};

/// Pair (2^k/(2^k−1), −1/(2^k−1)); requires 1 ≤ k < m and
/// gcd(2^k − 1, 2^m + 1) = 1.
pub fn pair_2k_minus_1(k: u32, m: u32) -> Result<NihoPair> {
    if k < 1 || k >= m {
        return Err(Error::PreconditionError(format!(
            "pair (2^k/(2^k-1), -1/(2^k-1)) requires 1 <= k < m, got (k, m) = ({k}, {m})"
        )));
    }
    if !coprime_2k_minus_1(k, m)? {
        return Err(Error::PreconditionError(format!(
            "gcd(2^{k} - 1, 2^{m} + 1) != 1"
        )));
    }
    let pk = 1i64 << k;
    niho_pair(Fraction::new(pk, pk - 1), Fraction::new(-1, pk - 1), m)
}

/// Pair (1/(2^k+1), 2^k/(2^k+1)); requires k ≥ 1 and
/// gcd(2^k + 1, 2^m + 1) = 1.
pub fn pair_2k_plus_1(k: u32, m: u32) -> Result<NihoPair> {
    if k < 1 {
        return Err(Error::PreconditionError(format!(
            "pair (1/(2^k+1), 2^k/(2^k+1)) requires k >= 1, got k = {k}"
        )));
    }
    if !coprime_2k_plus_1(k, m)? {
        return Err(Error::PreconditionError(format!(
            "gcd(2^{k} + 1, 2^{m} + 1) != 1"
        )));
    }
    let pk = 1i64 << k;
    niho_pair(Fraction::new(1, pk + 1), Fraction::new(pk, pk + 1), m)
}

/// Applicability condition of a catalog row.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowCondition {
    /// Holds for every m.
    AllM,
    /// m even.
    MEven,
    /// gcd(3, m) = 1.
    Gcd3MIsOne,
    /// gcd(5, 2^m + 1) = 1.
    Gcd5CircleIsOne,
    /// m ≡ 2, 4 (mod 6).
    M2Or4Mod6,
    /// k-parameterized: gcd(2^k − 1, 2^m + 1) = 1 with k < m.
    CoprimePow2Minus1,
    /// k-parameterized: gcd(2^k + 1, 2^m + 1) = 1.
    CoprimePow2Plus1,
    /// Condition lives in an external result; never auto-applied.
    External,
}

impl RowCondition {
    /// Evaluates the condition at m (with k for the parameterized rows).
    pub fn holds(&self, m: u32, k: Option<u32>) -> Result<bool> {
        Ok(match self {
            RowCondition::AllM => true,
            RowCondition::MEven => m.is_multiple_of(2),
            RowCondition::Gcd3MIsOne => gcd_u64(3, m as u64) == 1,
            RowCondition::Gcd5CircleIsOne => gcd_u64(5, circle_modulus(m)) == 1,
            RowCondition::M2Or4Mod6 => matches!(m % 6, 2 | 4),
            RowCondition::CoprimePow2Minus1 => {
                let k = k.ok_or_else(|| Error::RangeError("row requires k".into()))?;
                k < m && coprime_2k_minus_1(k, m)?
            }
            RowCondition::CoprimePow2Plus1 => {
                let k = k.ok_or_else(|| Error::RangeError("row requires k".into()))?;
                coprime_2k_plus_1(k, m)?
            }
            RowCondition::External => false,
        })
    }
}

/// Main pair of a row: fixed fractions, or a function of k.
#[derive(Copy, Clone)]
pub enum PairSpec {
    Fixed(Fraction, Fraction),
    KParam(fn(u32) -> (Fraction, Fraction)),
}

impl PairSpec {
    pub fn instantiate(&self, k: Option<u32>) -> Result<(Fraction, Fraction)> {
        match self {
            PairSpec::Fixed(s, t) => Ok((*s, *t)),
            PairSpec::KParam(f) => {
                let k = k.ok_or_else(|| Error::RangeError("row requires k".into()))?;
                Ok(f(k))
            }
        }
    }
}

/// Published equivalent pairs of a row.
#[derive(Copy, Clone)]
pub enum EquivSpec {
    Fixed([(Fraction, Fraction); 2]),
    KParam(fn(u32) -> [(Fraction, Fraction); 2]),
}

impl EquivSpec {
    pub fn instantiate(&self, k: Option<u32>) -> Result<[(Fraction, Fraction); 2]> {
        match self {
            EquivSpec::Fixed(pairs) => Ok(*pairs),
            EquivSpec::KParam(f) => {
                let k = k.ok_or_else(|| Error::RangeError("row requires k".into()))?;
                Ok(f(k))
            }
        }
    }
}

/// One transcribed row of the known-pairs table.
pub struct FamilyEntry {
    pub row: u32,
    pub pair: PairSpec,
    pub pair_display: [&'static str; 2],
    pub condition: RowCondition,
    pub condition_display: &'static str,
    pub equivalents: EquivSpec,
    pub equivalents_display: [[&'static str; 2]; 2],
    pub note: &'static str,
}

impl FamilyEntry {
    pub fn is_k_parameterized(&self) -> bool {
        matches!(self.pair, PairSpec::KParam(_))
    }
}

const fn f(num: i64, den: i64) -> Fraction {
    Fraction::new(num, den)
}

const fn fi(num: i64) -> Fraction {
    Fraction::int(num)
}

static CATALOG: [FamilyEntry; 11] = [
    FamilyEntry {
        row: 1,
        pair: PairSpec::KParam(|k| (fi(k as i64), fi(-(k as i64)))),
        pair_display: ["k", "-k"],
        condition: RowCondition::External,
        condition_display: "external",
        equivalents: EquivSpec::KParam(|k| {
            let k = k as i64;
            [
                (f(k, 2 * k - 1), f(2 * k, 2 * k - 1)),
                (f(-k, 2 * k + 1), f(-2 * k, 2 * k + 1)),
            ]
        }),
        equivalents_display: [["k/(2k-1)", "2k/(2k-1)"], ["-k/(2k+1)", "-2k/(2k+1)"]],
        note: "circle map is the identity; the validity condition lives in an \
               external result and is not evaluated here",
    },
    FamilyEntry {
        row: 2,
        pair: PairSpec::Fixed(fi(2), fi(-1)),
        pair_display: ["2", "-1"],
        condition: RowCondition::AllM,
        condition_display: "positive m",
        equivalents: EquivSpec::Fixed([(fi(1), f(1, 3)), (fi(1), f(2, 3))]),
        equivalents_display: [["1", "1/3"], ["1", "2/3"]],
        note: "",
    },
    FamilyEntry {
        row: 3,
        pair: PairSpec::Fixed(fi(1), f(-1, 2)),
        pair_display: ["1", "-1/2"],
        condition: RowCondition::Gcd3MIsOne,
        condition_display: "gcd(3, m) = 1",
        equivalents: EquivSpec::Fixed([(fi(1), f(3, 2)), (f(1, 4), f(3, 4))]),
        equivalents_display: [["1", "3/2"], ["1/4", "3/4"]],
        note: "",
    },
    FamilyEntry {
        row: 4,
        pair: PairSpec::Fixed(f(-1, 3), f(4, 3)),
        pair_display: ["-1/3", "4/3"],
        condition: RowCondition::MEven,
        condition_display: "m even",
        equivalents: EquivSpec::Fixed([(fi(1), f(1, 5)), (fi(1), f(4, 5))]),
        equivalents_display: [["1", "1/5"], ["1", "4/5"]],
        note: "",
    },
    FamilyEntry {
        row: 5,
        pair: PairSpec::Fixed(fi(3), fi(-1)),
        pair_display: ["3", "-1"],
        condition: RowCondition::MEven,
        condition_display: "m even",
        equivalents: EquivSpec::Fixed([(f(3, 5), f(4, 5)), (f(1, 3), f(4, 3))]),
        equivalents_display: [["3/5", "4/5"], ["1/3", "4/3"]],
        note: "",
    },
    FamilyEntry {
        row: 6,
        pair: PairSpec::Fixed(f(-2, 3), f(5, 3)),
        pair_display: ["-2/3", "5/3"],
        condition: RowCondition::MEven,
        condition_display: "m even",
        equivalents: EquivSpec::Fixed([(fi(1), f(2, 7)), (fi(1), f(5, 7))]),
        equivalents_display: [["1", "2/7"], ["1", "5/7"]],
        note: "",
    },
    FamilyEntry {
        row: 7,
        pair: PairSpec::Fixed(f(1, 5), f(4, 5)),
        pair_display: ["1/5", "4/5"],
        condition: RowCondition::Gcd5CircleIsOne,
        condition_display: "gcd(5, 2^m + 1) = 1",
        equivalents: EquivSpec::Fixed([(fi(1), f(-1, 3)), (fi(1), f(4, 3))]),
        equivalents_display: [["1", "-1/3"], ["1", "4/3"]],
        note: "",
    },
    FamilyEntry {
        row: 8,
        pair: PairSpec::Fixed(fi(2), f(-1, 2)),
        pair_display: ["2", "-1/2"],
        condition: RowCondition::M2Or4Mod6,
        condition_display: "m = 2, 4 (mod 6)",
        equivalents: EquivSpec::Fixed([(f(2, 3), f(5, 6)), (f(1, 4), f(5, 4))]),
        equivalents_display: [["2/3", "5/6"], ["1/4", "5/4"]],
        note: "rows 8 and 9 list identical equivalent pairs; stored as printed",
    },
    FamilyEntry {
        row: 9,
        pair: PairSpec::Fixed(fi(4), fi(-2)),
        pair_display: ["4", "-2"],
        condition: RowCondition::Gcd3MIsOne,
        condition_display: "gcd(3, m) = 1",
        equivalents: EquivSpec::Fixed([(f(2, 3), f(5, 6)), (f(1, 4), f(5, 4))]),
        equivalents_display: [["2/3", "5/6"], ["1/4", "5/4"]],
        note: "rows 8 and 9 list identical equivalent pairs; stored as printed",
    },
    FamilyEntry {
        row: 10,
        pair: PairSpec::KParam(|k| {
            let pk = 1i64 << k;
            (f(pk, pk - 1), f(-1, pk - 1))
        }),
        pair_display: ["2^k/(2^k-1)", "-1/(2^k-1)"],
        condition: RowCondition::CoprimePow2Minus1,
        condition_display: "gcd(2^k - 1, 2^m + 1) = 1, k < m",
        equivalents: EquivSpec::KParam(|k| {
            let pk = 1i64 << k;
            [(fi(1), f(1, pk + 1)), (fi(1), f(pk, pk + 1))]
        }),
        equivalents_display: [["1", "1/(2^k+1)"], ["1", "2^k/(2^k+1)"]],
        note: "",
    },
    FamilyEntry {
        row: 11,
        pair: PairSpec::KParam(|k| {
            let pk = 1i64 << k;
            (f(1, pk + 1), f(pk, pk + 1))
        }),
        pair_display: ["1/(2^k+1)", "2^k/(2^k+1)"],
        condition: RowCondition::CoprimePow2Plus1,
        condition_display: "gcd(2^k + 1, 2^m + 1) = 1",
        equivalents: EquivSpec::KParam(|k| {
            let pk = 1i64 << k;
            [(fi(1), f(pk, pk - 1)), (fi(1), f(-1, pk - 1))]
        }),
        equivalents_display: [["1", "2^k/(2^k-1)"], ["1", "-1/(2^k-1)"]],
        note: "",
    },
];

/// The known-pairs table as static data, rows 1–11.
pub fn table1_catalog() -> &'static [FamilyEntry; 11] {
    &CATALOG
}

/// The catalog rendered as JSON (fractions as display strings).
pub fn catalog_json() -> serde_json::Value {
    let rows: Vec<_> = CATALOG
        .iter()
        .map(|entry| {
            json!({
                "row": entry.row,
                "pair": entry.pair_display,
                "condition": entry.condition,
                "condition_text": entry.condition_display,
                "equivalent_pairs": entry.equivalents_display,
                "note": entry.note,
            })
        })
        .collect();
    json!({ "rows": rows })
}

/// A catalog row instantiated at a concrete m (and k where applicable),
/// all of whose conditions hold.
#[derive(Clone, Debug)]
pub struct ApplicableRow {
    pub row: u32,
    pub k: Option<u32>,
    /// Resolved main pair.
    pub pair: NihoPair,
    /// Published equivalent pairs, unresolved: reduction may fail when a
    /// denominator is not invertible mod 2^m + 1.
    pub equivalents: Vec<(Fraction, Fraction)>,
}

/// Tag used in reports and search output, `row7` or `row10(k=1)`.
pub fn row_tag(row: u32, k: Option<u32>) -> String {
    match k {
        Some(k) => format!("row{row}(k={k})"),
        None => format!("row{row}"),
    }
}

/// Evaluates every row's condition at m, expanding k-parameterized rows over
/// k ∈ [1, m−1] (the 2^k−1 family) and k ∈ [1, m] (the 2^k+1 family).
/// External rows are excluded.
pub fn applicable_rows(m: u32) -> Result<Vec<ApplicableRow>> {
    let mut out = Vec::new();
    for entry in CATALOG.iter() {
        match entry.condition {
            RowCondition::External => continue,
            RowCondition::CoprimePow2Minus1 | RowCondition::CoprimePow2Plus1 => {
                let k_top = if entry.condition == RowCondition::CoprimePow2Minus1 {
                    m.saturating_sub(1)
                } else {
                    m
                };
                for k in 1..=k_top {
                    if entry.condition.holds(m, Some(k))? {
                        let (s, t) = entry.pair.instantiate(Some(k))?;
                        out.push(ApplicableRow {
                            row: entry.row,
                            k: Some(k),
                            pair: niho_pair(s, t, m)?,
                            equivalents: entry.equivalents.instantiate(Some(k))?.to_vec(),
                        });
                    }
                }
            }
            _ => {
                if entry.condition.holds(m, None)? {
                    let (s, t) = entry.pair.instantiate(None)?;
                    out.push(ApplicableRow {
                        row: entry.row,
                        k: None,
                        pair: niho_pair(s, t, m)?,
                        equivalents: entry.equivalents.instantiate(None)?.to_vec(),
                    });
                }
            }
        }
    }
    out.sort_by_key(|r| (r.row, r.k));
    Ok(out)
}

/// True iff the two specs induce the same circle map h pointwise on U —
/// the identification used by the known-pairs table for trinomials with
/// different exponent tuples.
pub fn equivalent_same_h(ctx: &FieldCtx, spec1: &TrinomialSpec, spec2: &TrinomialSpec) -> bool {
    assert_eq!(spec1.m(), spec2.m(), "specs must share m");
    circle_map(ctx, spec1).values() == circle_map(ctx, spec2).values()
}
