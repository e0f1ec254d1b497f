//! Property-based invariants over randomized inputs.

use proptest::prelude::*;

use niho_core::mobius::{e_sequence, MobiusMap, ProjPoint};
use niho_core::permcheck::{circle_map, TrinomialSpec};
use niho_core::residue::{circle_modulus, frac_to_residue, niho_exponent, niho_pair};
use niho_core::{FieldCtx, FieldElem};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn ctx_for(m: u32) -> FieldCtx {
    FieldCtx::new(m).unwrap()
}

prop_compose! {
    fn arb_m()(m in 2u32..=8) -> u32 { m }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(m in arb_m(), xs in prop::array::uniform3(any::<u64>())) {
        let ctx = ctx_for(m);
        let mask = (1u64 << ctx.n()) - 1;
        let [x, y, z] = xs.map(|v| ctx.elem(v & mask));
        prop_assert_eq!(ctx.mul(x, y), ctx.mul(y, x));
        prop_assert_eq!(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
        prop_assert_eq!(
            ctx.mul(x, ctx.add(y, z)),
            ctx.add(ctx.mul(x, y), ctx.mul(x, z))
        );
        if !x.is_zero() {
            prop_assert_eq!(ctx.mul(x, ctx.inv(x).unwrap()), FieldElem::ONE);
        }
    }

    #[test]
    fn frobenius_is_additive_and_periodic(m in arb_m(), x in any::<u64>(), y in any::<u64>(), j in 0u32..64) {
        let ctx = ctx_for(m);
        let mask = (1u64 << ctx.n()) - 1;
        let (x, y) = (ctx.elem(x & mask), ctx.elem(y & mask));
        prop_assert_eq!(
            ctx.frobenius(ctx.add(x, y), j),
            ctx.add(ctx.frobenius(x, j), ctx.frobenius(y, j))
        );
        prop_assert_eq!(ctx.frobenius(x, ctx.n()), x);
    }

    #[test]
    fn pow_is_a_homomorphism(m in 2u32..=6, x in any::<u64>(), a in 0i64..1_000_000, b in 0i64..1_000_000) {
        let ctx = ctx_for(m);
        let x = ctx.elem(x & ((1u64 << ctx.n()) - 1));
        prop_assume!(!x.is_zero());
        prop_assert_eq!(
            ctx.pow(x, a + b),
            ctx.mul(ctx.pow(x, a), ctx.pow(x, b))
        );
        prop_assert_eq!(ctx.pow(ctx.pow(x, a), 2), ctx.pow(x, 2 * a));
    }

    #[test]
    fn norm_is_conjugation_fixed(m in arb_m(), x in any::<u64>()) {
        let ctx = ctx_for(m);
        let x = ctx.elem(x & ((1u64 << ctx.n()) - 1));
        let norm = ctx.pow(x, ctx.circle_order() as i64);
        prop_assert_eq!(ctx.frobenius(norm, m), norm);
    }

    #[test]
    fn circle_products_stay_on_circle(m in arb_m(), i in any::<usize>(), j in any::<usize>()) {
        let ctx = ctx_for(m);
        let circle = ctx.unit_circle();
        let (x, y) = (circle[i % circle.len()], circle[j % circle.len()]);
        prop_assert!(ctx.is_in_unit_circle(ctx.mul(x, y)));
        prop_assert!(ctx.is_in_unit_circle(ctx.inv(x).unwrap()));
    }

    #[test]
    fn residue_solves_the_congruence(m in 2u32..=10, num in -200i64..200, den in 1i64..200) {
        let modulus = circle_modulus(m);
        prop_assume!(gcd(den as u64 % modulus, modulus) == 1);
        let r = frac_to_residue(num, den, m).unwrap();
        prop_assert!(r < modulus);
        let lhs = (r as u128 * den.rem_euclid(modulus as i64) as u128 % modulus as u128) as u64;
        prop_assert_eq!(lhs, num.rem_euclid(modulus as i64) as u64);
    }

    #[test]
    fn scaling_preserves_fractions(m in 2u32..=8, num in -60i64..60, den in 1i64..60, scale in 2i64..60) {
        let modulus = circle_modulus(m);
        prop_assume!(gcd(den as u64 % modulus, modulus) == 1);
        prop_assume!(gcd(scale as u64 % modulus, modulus) == 1);
        prop_assert_eq!(
            frac_to_residue(num, den, m).unwrap(),
            frac_to_residue(scale * num, scale * den, m).unwrap()
        );
    }

    #[test]
    fn niho_exponents_normalized(m in 2u32..=16, s in any::<u64>()) {
        let s = s % ((1u64 << m) + 1);
        prop_assert_eq!(niho_exponent(s, m) % ((1u64 << m) - 1), 1);
    }

    #[test]
    fn mobius_respects_composition(coeffs in prop::array::uniform8(any::<u64>()), p in any::<u64>()) {
        let ctx = ctx_for(3);
        let mask = (1u64 << ctx.n()) - 1;
        let c: Vec<FieldElem> = coeffs.iter().map(|&v| ctx.elem(v & mask)).collect();
        let f = MobiusMap::new(&ctx, c[0], c[1], c[2], c[3]);
        let g = MobiusMap::new(&ctx, c[4], c[5], c[6], c[7]);
        let (Ok(f), Ok(g)) = (f, g) else { return Ok(()); };
        let point = if p % 65 == 64 {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(ctx.elem(p & mask))
        };
        prop_assert_eq!(
            MobiusMap::compose(&ctx, &f, &g).apply(&ctx, point),
            f.apply(&ctx, g.apply(&ctx, point))
        );
    }

    #[test]
    fn e_sequence_entries_on_conjugate_trace_line(m in 2u32..=5, k in 1u32..=5, a_idx in any::<usize>()) {
        // every finite entry e satisfies e + ē = 1
        let ctx = ctx_for(m);
        let k = 1 + (k - 1) % m;
        let circle = ctx.unit_circle();
        let a = circle[a_idx % circle.len()];
        prop_assume!(ctx.pow(a, 3) != FieldElem::ONE);
        let seq = e_sequence(&ctx, a, k, 4 * m as usize).unwrap();
        for entry in &seq.entries {
            if let ProjPoint::Finite(e) = entry {
                prop_assert_eq!(ctx.add(*e, ctx.conj(*e)), FieldElem::ONE);
            }
        }
    }

    #[test]
    fn circle_map_values_in_circle_or_zero(m in 2u32..=6, s in any::<u64>(), t in any::<u64>(), r in 1u64..20) {
        let ctx = ctx_for(m);
        let top = 1 << m;
        let s = 1 + (s % top);
        let t = 1 + (t % top);
        let spec = TrinomialSpec::new(r, niho_pair(s as i64, t as i64, m).unwrap());
        let cm = circle_map(&ctx, &spec);
        for &v in cm.values() {
            prop_assert!(v.is_zero() || ctx.is_in_unit_circle(v));
        }
        prop_assert_eq!(cm.values()[0], FieldElem::ONE, "h(1) = 1");
    }

    #[test]
    fn degenerate_specs_reduce_correctly(m in 2u32..=4, s in any::<u64>(), r in 1u64..6) {
        // s = t cancels the Niho terms, leaving the monomial x^r
        let ctx = ctx_for(m);
        let s = 1 + (s % (1 << m));
        let spec = TrinomialSpec::new(r, niho_pair(s as i64, s as i64, m).unwrap());
        prop_assert!(spec.is_degenerate());
        for x in ctx.elements() {
            prop_assert_eq!(spec.eval(&ctx, x), ctx.pow(x, r as i64));
        }
    }
}
