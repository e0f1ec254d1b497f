//! Exhaustive discovery of permutation pairs (s, t) at a given m.
//!
//! The grid 1 ≤ s ≤ t ≤ 2^m is screened with the unit-circle criterion
//! (2^m + 1 evaluations per pair instead of 2^n), cross-validated against
//! the full-field brute force at small m, and every hit is classified
//! against the catalog: literal matches against instantiated row pairs and
//! their published equivalents, then circle-map equality for the rest.
//! Output order is deterministic and independent of the worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{applicable_rows, row_tag, ApplicableRow};
use crate::gf2n::FieldCtx;
use crate::permcheck::{brute_force_check, circle_map, zieve_check, CircleMap, TrinomialSpec};
use crate::residue::{circle_modulus, niho_pair, NihoPair};

/// Largest m the exhaustive search accepts.
pub const MAX_SEARCH_M: u32 = 8;

/// One permutation pair found by the search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchHit {
    #[serde(flatten)]
    pub pair: NihoPair,
    /// Catalog row tags covering this pair; empty = unclassified.
    pub families: Vec<String>,
    /// True when every tag came from circle-map equality rather than a
    /// literal pair match.
    pub via_equivalence: bool,
}

impl SearchHit {
    /// One JSON object per line, stable field order.
    pub fn to_jsonl(&self) -> String {
        serde_json::to_string(self).expect("hit serialization cannot fail")
    }

    /// CSV row matching [`csv_header`]; families joined with `;`.
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.pair.m,
            self.pair.s,
            self.pair.t,
            self.pair.exp_s,
            self.pair.exp_t,
            self.families.join(";"),
            self.via_equivalence
        )
    }
}

pub fn csv_header() -> &'static str {
    "m,s,t,exp_s,exp_t,families,via_equivalence"
}

/// Precomputed classification data for one catalog row at a fixed m.
struct RowMatcher {
    tag: String,
    /// Canonicalized (min, max) residues of the main pair.
    main: (u64, u64),
    /// Canonicalized residues of the published equivalent pairs that
    /// actually reduce at this m.
    equivalents: Vec<(u64, u64)>,
    circle: CircleMap,
}

/// Catalog matchers for a given m: the applicable rows plus the identity
/// row (whose circle map is h(x) = x and whose literal pairs are (s, −s)).
struct Classifier {
    m: u32,
    rows: Vec<RowMatcher>,
    identity_circle: Vec<u64>,
}

fn canonical(s: u64, t: u64) -> (u64, u64) {
    (s.min(t), s.max(t))
}

impl Classifier {
    fn build(ctx: &FieldCtx) -> Result<Classifier> {
        let m = ctx.m();
        let rows = applicable_rows(m)?
            .into_iter()
            .map(|row: ApplicableRow| {
                let spec = TrinomialSpec::plain(row.pair);
                let equivalents = row
                    .equivalents
                    .iter()
                    .filter_map(|&(s, t)| {
                        let s = s.to_residue(m).ok()?;
                        let t = t.to_residue(m).ok()?;
                        Some(canonical(s, t))
                    })
                    .collect();
                RowMatcher {
                    tag: row_tag(row.row, row.k),
                    main: canonical(row.pair.s, row.pair.t),
                    equivalents,
                    circle: circle_map(ctx, &spec),
                }
            })
            .collect();
        let identity_circle = ctx.unit_circle().iter().map(|e| e.bits()).collect();
        Ok(Classifier {
            m,
            rows,
            identity_circle,
        })
    }

    /// Row tags for a spec, plus whether every tag required circle-map
    /// equality. Degenerate specs get their dedicated tag.
    fn classify(&self, ctx: &FieldCtx, spec: &TrinomialSpec) -> (Vec<String>, bool) {
        if spec.is_degenerate() {
            let tag = if spec.r() == 1 && spec.pair().s == spec.pair().t {
                "identity-degenerate"
            } else {
                "degenerate"
            };
            return (vec![tag.to_string()], false);
        }

        let hit_circle = circle_map(ctx, spec);
        let key = canonical(spec.pair().s, spec.pair().t);
        let literal_ok = spec.r() == 1;

        let mut tags = Vec::new();
        let mut any_literal = false;

        // the identity row: pairs (s, −s) literally, h(x) = x by circle map
        let modulus = circle_modulus(self.m);
        let identity_literal = literal_ok && (spec.pair().s + spec.pair().t).is_multiple_of(modulus);
        let identity_h = hit_circle
            .values()
            .iter()
            .map(|v| v.bits())
            .eq(self.identity_circle.iter().copied());
        if identity_literal || identity_h {
            tags.push("row1".to_string());
            any_literal |= identity_literal;
        }

        for row in &self.rows {
            let literal =
                literal_ok && (row.main == key || row.equivalents.contains(&key));
            let same_h = row.circle.values() == hit_circle.values();
            if literal || same_h {
                tags.push(row.tag.clone());
                any_literal |= literal;
            }
        }

        let via_equivalence = !tags.is_empty() && !any_literal;
        (tags, via_equivalence)
    }
}

/// Tags of all catalog rows whose instantiated pair equals the input or
/// whose circle map coincides with it, plus the equivalence flag.
pub fn classify(ctx: &FieldCtx, pair: &NihoPair) -> Result<(Vec<String>, bool)> {
    let classifier = Classifier::build(ctx)?;
    Ok(classifier.classify(ctx, &TrinomialSpec::plain(*pair)))
}

/// Scans 1 ≤ s ≤ t ≤ 2^m in lexicographic order and returns every pair whose
/// trinomial x^r + x^(s(2^m−1)+r) + x^(t(2^m−1)+r) permutes the field.
///
/// Screening uses the circle criterion; for m ≤ 5 every verdict is
/// cross-validated by the full-field brute force, and a disagreement is an
/// internal error. Output is byte-deterministic for a fixed context.
pub fn exhaustive_search(ctx: &FieldCtx, r: u64) -> Result<Vec<SearchHit>> {
    let m = ctx.m();
    if m > MAX_SEARCH_M {
        return Err(Error::RangeError(format!(
            "exhaustive search supports m up to {MAX_SEARCH_M}, got {m}"
        )));
    }
    let top = 1u64 << m;
    let grid: Vec<(u64, u64)> = (1..=top)
        .flat_map(|s| (s..=top).map(move |t| (s, t)))
        .collect();

    let verdicts: Vec<Option<NihoPair>> = grid
        .par_iter()
        .map(|&(s, t)| -> Result<Option<NihoPair>> {
            let pair = niho_pair(s as i64, t as i64, m)?;
            let spec = TrinomialSpec::new(r, pair);
            let is_perm = zieve_check(ctx, &spec).is_permutation;
            if m <= 5 {
                let brute = brute_force_check(ctx, &spec).is_permutation;
                if brute != is_perm {
                    return Err(Error::ConsistencyError(format!(
                        "circle criterion and brute force disagree at m={m} r={r} (s,t)=({s},{t})"
                    )));
                }
            }
            Ok(is_perm.then_some(pair))
        })
        .collect::<Result<_>>()?;

    let classifier = Classifier::build(ctx)?;
    let hits = verdicts
        .into_iter()
        .flatten()
        .map(|pair| {
            let spec = TrinomialSpec::new(r, pair);
            let (families, via_equivalence) = classifier.classify(ctx, &spec);
            SearchHit {
                pair,
                families,
                via_equivalence,
            }
        })
        .collect();
    Ok(hits)
}

/// [`exhaustive_search`] on a dedicated thread pool of the given size;
/// the worker count does not affect the output bytes.
pub fn exhaustive_search_with_jobs(
    ctx: &FieldCtx,
    r: u64,
    jobs: Option<usize>,
) -> Result<Vec<SearchHit>> {
    match jobs {
        None => exhaustive_search(ctx, r),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::RangeError(format!("cannot build thread pool: {e}")))?;
            pool.install(|| exhaustive_search(ctx, r))
        }
    }
}
