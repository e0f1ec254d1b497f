//! Exact-arithmetic toolkit for permutation trinomials of Niho type over
//! binary fields GF(2^(2m)).
//!
//! The crate decides, by exact finite-field computation, whether
//! f(x) = x^r + x^(s(2^m−1)+r) + x^(t(2^m−1)+r) permutes GF(2^(2m)), where
//! the exponent parameters (s, t) are residues modulo 2^m + 1 that may be
//! written as fractions or negative integers. It provides:
//!
//! * [`gf2n`] — GF(2^n) arithmetic in polynomial basis with a built-in
//!   irreducible modulus table and the unit-circle subgroup;
//! * [`residue`] — fraction-to-residue reduction mod 2^m + 1 and the
//!   coprimality predicates with self-checking closed forms;
//! * [`mobius`] — linear fractional maps on GF(2^n) ∪ {∞} and the iterated
//!   coefficient sequences they induce;
//! * [`permcheck`] — brute-force and unit-circle permutation checks, the
//!   catalog's closed fractional forms, and the substitution identities;
//! * [`families`] — the parameterized pair constructors and the known-pairs
//!   catalog with conditions and published equivalents;
//! * [`search`] — exhaustive, deterministic discovery and classification of
//!   all permutation pairs at a given m.

pub mod error;
pub mod families;
pub mod gf2n;
pub mod mobius;
pub mod permcheck;
pub mod residue;
pub mod search;

pub use error::{Error, Result};
pub use families::{applicable_rows, pair_2k_minus_1, pair_2k_plus_1, table1_catalog};
pub use gf2n::{FieldCtx, FieldElem, ModulusTable};
pub use mobius::{e_sequence, iterate_form, phi_from_a, MobiusMap, ProjPoint};
pub use permcheck::{
    brute_force_check, circle_map, substitution_identity_check, table1_fraction, zieve_check,
    CheckMethod, TrinomialSpec, VerifyReport,
};
pub use residue::{coprime_2k_minus_1, coprime_2k_plus_1, frac_to_residue, niho_pair, Fraction, NihoPair};
pub use search::{classify, exhaustive_search, exhaustive_search_with_jobs, SearchHit};
