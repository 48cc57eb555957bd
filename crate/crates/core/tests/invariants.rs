use nilgamma::chars::{gauss_sum_in, gauss_sum_with};
use nilgamma::reduce::ReductionOptions;
use nilgamma::{
    AddChar, ArtinElem, CompareMode, FqField, GammaContext, InertialSupport, LaurentRational,
    MultChar, ReductionMap, Ring, RingElem,
};
use proptest::prelude::*;

fn unipotent(ctx: &GammaContext<nilgamma::ArtinAlg>, c: u32, shift: usize) -> ArtinElem {
    let r = ctx.ring();
    let k = r.residue_field();
    let c = k.from_index(u64::from(c) % k.size()).unwrap();
    r.one()
        .add(&r.constant(&c).unwrap().mul(&r.y().pow(shift as u64)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Reduction commutes with Gauss sums whichever prime above l is chosen.
    #[test]
    fn gauss_sums_reduce_for_any_seed(seed in 0u64..16, e in 0i64..24) {
        let f25 = FqField::new(5, 2).unwrap();
        let psi = AddChar::through_trace(&f25, 1).unwrap();
        let map = ReductionMap::with_options(120, 2, ReductionOptions { degree_multiple: 1, seed })
            .unwrap();
        let chi = MultChar::new(&f25, e);
        let lhs = map.reduce(&gauss_sum_in(&chi, &psi, map.source()).unwrap()).unwrap();
        let rhs = gauss_sum_with(&f25, &map.zeta_image(e * 5), &psi.reduce(&map).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    // gamma(chi) gamma(chi^-1) = (chi(-1) - q^-1 sum_x chi(x)) X^-2 for
    // ramified nilpotent lifts; the character sum need not vanish.
    #[test]
    fn ramified_pair_is_a_monomial(
        depth in 1usize..=4, e in 0i64..4, c in 0u32..16, shift in 1usize..4, seed in 0u64..3,
    ) {
        let ctx = GammaContext::modular(5, 2, depth, seed, CompareMode::Exact).unwrap();
        let chi = ctx.lift_char(e, &unipotent(&ctx, c, shift), ctx.ring().one()).unwrap();
        prop_assume!(!chi.is_unramified());
        let g = ctx.gamma_gl1(&chi).unwrap().mul(&ctx.gamma_gl1(&chi.inverse()).unwrap()).unwrap();
        let v = chi.on_units();
        let r = ctx.ring();
        let char_sum = (0..4).fold(r.zero(), |acc, k| acc.add(&v.pow(k)));
        let q_inv = r.from_int(5).inverse().unwrap();
        let expected = LaurentRational::monomial(v.pow(2).sub(&q_inv.mul(&char_sum)), -2);
        prop_assert!(g.eq_exact(&expected).unwrap(), "{:?}", g);
    }

    // Support gamma factors are deterministic and comparison is reflexive.
    #[test]
    fn supports_agree_with_themselves_under_every_mode(idx in 0usize..24, e in 0i64..4) {
        let supports = nilgamma::explorer::enumerate_supports(5, 2).unwrap();
        let s: &InertialSupport = &supports[idx];
        for mode in [CompareMode::Exact, CompareMode::UpToMonomial] {
            let ctx = GammaContext::modular(5, 2, 2, 0, mode).unwrap();
            let chi = ctx.k_char(e);
            let a = ctx.gamma_support(s, &chi).unwrap();
            let b = ctx.gamma_support(s, &chi).unwrap();
            prop_assert!(ctx.gamma_eq(&a, &b).unwrap());
        }
    }
}
