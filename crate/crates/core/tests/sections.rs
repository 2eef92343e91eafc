mod common;

use std::collections::BTreeSet;

use okbody_core::sections::isotypical_summands;
use okbody_core::{
    base_polytope, builtin, derive_context, derive_context_with, h0, isotypical_dim, isotypical_support,
    select_flag, valuation_set, DivisorClass, FlagContext, Fan,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tangent_ctx() -> FlagContext {
    let p = builtin::tangent_p2();
    let b = select_flag(&p.fan, None).unwrap();
    derive_context(&p.fan, &b, &p.bundle).unwrap()
}

fn o(m: i64) -> DivisorClass {
    DivisorClass::new(vec![0], m)
}

#[test]
fn tangent_support_and_dimensions() {
    let ctx = tangent_ctx();
    // independent scan of <u, v_j> <= 1 over a generous box
    let mut scan = Vec::new();
    for x in -5..=5i64 {
        for y in -5..=5i64 {
            if x <= 1 && y <= 1 && -x - y <= 1 {
                scan.push(vec![x, y]);
            }
        }
    }
    let support = isotypical_support(&ctx, &o(1)).unwrap();
    assert_eq!(support, scan);
    assert_eq!(support.len(), 10);
    let dims: Vec<i64> = isotypical_summands(&ctx, &o(1)).unwrap().iter().map(|s| s.dim).collect();
    assert_eq!(dims.len(), 7);
    let mut sorted = dims.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    assert_eq!(sorted, vec![2, 1, 1, 1, 1, 1, 1]);
}

#[test]
fn tangent_isotypical_examples() {
    let ctx = tangent_ctx();
    let s = isotypical_dim(&ctx, &o(1), &[0, 0]);
    assert_eq!((s.alpha0, s.alphas.clone(), s.dim), (0, vec![0, 0], 2));
    let s = isotypical_dim(&ctx, &o(1), &[1, 0]);
    assert_eq!((s.alpha0, s.dim), (1, 1));
    let s = isotypical_dim(&ctx, &o(1), &[-1, -1]);
    assert_eq!(s.dim, 0);
}

#[test]
fn tangent_h0_and_valuations() {
    let ctx = tangent_ctx();
    assert_eq!(h0(&ctx, &o(1)).unwrap(), 8);
    assert_eq!(h0(&ctx, &o(0)).unwrap(), 1);
    assert_eq!(h0(&ctx, &o(-1)).unwrap(), 0);
    assert!(valuation_set(&ctx, &o(-1)).unwrap().is_empty());
    let vals = valuation_set(&ctx, &o(1)).unwrap();
    assert_eq!(vals.len(), 8);
    let s = isotypical_dim(&ctx, &o(1), &[0, 0]);
    let from_zero: BTreeSet<Vec<i64>> =
        okbody_core::sections::summand_valuations(&ctx, &o(1), &s).into_iter().collect();
    assert_eq!(from_zero, [vec![0, 1, 0], vec![1, 0, 1]].into_iter().collect());
    let s = isotypical_dim(&ctx, &o(1), &[0, 1]);
    assert_eq!(okbody_core::sections::summand_valuations(&ctx, &o(1), &s), vec![vec![0, 0, 0]]);
}

#[test]
fn zero_class_has_constants_only() {
    let ctx = tangent_ctx();
    assert_eq!(isotypical_support(&ctx, &DivisorClass::new(vec![0], 0)).unwrap(), vec![vec![0, 0]]);
}

#[test]
fn trivial_rank_two_on_p1() {
    let p = builtin::split_p1(0, 0);
    let b = select_flag(&p.fan, None).unwrap();
    let ctx = derive_context(&p.fan, &b, &p.bundle).unwrap();
    for m in 0..6 {
        // H^0(P^1, Sym^m(O + O)) = m + 1 copies of the constants
        assert_eq!(h0(&ctx, &DivisorClass::new(vec![0], m)).unwrap(), m + 1);
    }
}

fn random_ctx(rng: &mut ChaCha8Rng, fan_idx: usize, gap: i64) -> (Fan, FlagContext) {
    let fan = common::small_fans().swap_remove(fan_idx);
    let e = common::random_bundle(rng, &fan, gap);
    let b = select_flag(&fan, None).unwrap();
    let ctx = derive_context(&fan, &b, &e).unwrap();
    (fan, ctx)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cardinality_and_nonnegativity(seed in 0u64..100_000, fan_idx in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, ctx) = random_ctx(&mut rng, fan_idx, 3);
        let cls = common::random_class(&mut rng, ctx.d - ctx.n, 0..=3, 2);
        let vals = valuation_set(&ctx, &cls).unwrap();
        prop_assert_eq!(vals.len() as i64, h0(&ctx, &cls).unwrap());
        prop_assert!(vals.iter().flatten().all(|&x| x >= 0));
    }

    #[test]
    fn superadditivity(seed in 0u64..100_000, fan_idx in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, ctx) = random_ctx(&mut rng, fan_idx, 2);
        let c1 = common::random_class(&mut rng, ctx.d - ctx.n, 0..=2, 1);
        let c2 = common::random_class(&mut rng, ctx.d - ctx.n, 0..=2, 1);
        let v12 = valuation_set(&ctx, &c1.add(&c2)).unwrap();
        let v2 = valuation_set(&ctx, &c2).unwrap();
        for a in valuation_set(&ctx, &c1).unwrap() {
            for b in &v2 {
                let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                prop_assert!(v12.contains(&s));
            }
        }
    }

    #[test]
    fn twist_zero_reduces_to_base_polytope(seed in 0u64..100_000, fan_idx in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (fan, ctx) = random_ctx(&mut rng, fan_idx, 3);
        let cls = common::random_class(&mut rng, ctx.d - ctx.n, 0..=0, 2);
        // sections of O(D) (x) Sym^0: characters of P_{D'} with D' = D + sum a_j... read off the a_j shift
        // with twist 0 the a_j drop out, so the base class is D itself
        let mut full = vec![0; fan.num_rays()];
        for (k, c) in cls.coeffs.iter().enumerate() {
            full[ctx.basis.ray_order[ctx.n + k]] = *c;
        }
        let pts = base_polytope(&fan, &full).unwrap().lattice_points().unwrap();
        let want: BTreeSet<Vec<i64>> = pts
            .iter()
            .map(|u| {
                let u = u.to_i64().unwrap();
                let mut x: Vec<i64> = (0..ctx.n).map(|i| -ctx.pairing(&u, i)).collect();
                x.push(0);
                x
            })
            .collect();
        prop_assert_eq!(valuation_set(&ctx, &cls).unwrap(), want);
    }

    #[test]
    fn line_change_of_basis_keeps_sections(seed in 0u64..100_000, fan_idx in 0usize..5, which in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = common::small_fans().swap_remove(fan_idx);
        let e = common::random_bundle(&mut rng, &fan, 2);
        let m = [[[2, 1], [1, 1]], [[0, 1], [1, 0]], [[1, 3], [0, 1]]][which];
        let b = select_flag(&fan, None).unwrap();
        let c0 = derive_context(&fan, &b, &e).unwrap();
        let c1 = derive_context_with(&fan, &b, &e.transform_lines(m).unwrap(), c0.e1.transform(m).unwrap()).unwrap();
        let cls = common::random_class(&mut rng, c0.d - c0.n, 0..=3, 2);
        prop_assert_eq!(h0(&c0, &cls).unwrap(), h0(&c1, &cls).unwrap());
        prop_assert_eq!(valuation_set(&c0, &cls).unwrap(), valuation_set(&c1, &cls).unwrap());
    }
}
