use approx::assert_relative_eq;
use proptest::prelude::*;
use quermass::counterexample::{check_supconv_support, SupGrid};
use quermass::inequalities::corpus::{case_rng, random_centered_polygon, random_layered};
use quermass::inequalities::{check_generalized_pl, FunctionalId};
use quermass::means::m_alpha_f;
use quermass::quermass::{rounded_integral, steiner_poly, w, QuadratureSpec};
use quermass::{ConvexBody, Ext, Weights};

fn alpha() -> impl Strategy<Value = Ext> {
    prop_oneof![
        Just(Ext::NegInf),
        Just(Ext::PosInf),
        (-4.0f64..4.0).prop_map(Ext::Finite),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn means_are_monotone_and_bracketed(a in alpha(), b in alpha(), u in 1e-3f64..1e3, v in 1e-3f64..1e3, l in 0.01f64..0.99) {
        let wt = Weights::lambda(l).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (m_lo, m_hi) = (m_alpha_f(lo, wt, u, v), m_alpha_f(hi, wt, u, v));
        prop_assert!(m_lo <= m_hi * (1.0 + 1e-12));
        prop_assert!(m_lo >= u.min(v) * (1.0 - 1e-12) && m_hi <= u.max(v) * (1.0 + 1e-12));
    }

    #[test]
    fn quermass_homogeneity(seed in any::<u64>(), c in 0.1f64..10.0, l in 0.2f64..5.0) {
        let q = QuadratureSpec::default();
        let f = random_layered(&mut case_rng(seed, 0), 2, 5);
        for i in 0..=2usize {
            let base = w(&f, i, &q).unwrap().to_f64();
            let sv = w(&f.scale_values(c).unwrap(), i, &q).unwrap().to_f64();
            let dl = w(&f.dilate(l).unwrap(), i, &q).unwrap().to_f64();
            assert_relative_eq!(sv, c * base, max_relative = 1e-10);
            assert_relative_eq!(dl, l.powi(2 - i as i32) * base, max_relative = 1e-10);
        }
    }

    #[test]
    fn steiner_polynomial_matches_rounding(seed in any::<u64>(), rho in 0.0f64..3.0) {
        let q = QuadratureSpec::default();
        let f = random_layered(&mut case_rng(seed, 1), 1, 4);
        let p = steiner_poly(&f, &q).unwrap();
        let direct = rounded_integral(&f, rho, &q).unwrap().to_f64();
        assert_relative_eq!(p.eval(rho), direct, max_relative = 1e-10);
    }

    #[test]
    fn generalized_pl_holds_on_random_pairs(seed in any::<u64>(), a in -0.5f64..3.0, l in 0.05f64..0.95, i in 0usize..2) {
        let q = QuadratureSpec::default();
        let mut rng = case_rng(seed, 2);
        let (f, g) = (random_layered(&mut rng, 1, 4), random_layered(&mut rng, 1, 4));
        let r = check_generalized_pl(FunctionalId::W { i }, Ext::Finite(a), l, &f, &g, None, &q).unwrap();
        prop_assert!(r.satisfied(), "{:?}", r);
    }

    #[test]
    fn support_exponentials_convolve_to_the_intersection(seed in any::<u64>(), t in 0.05f64..0.95) {
        let mut rng = case_rng(seed, 3);
        let k0 = ConvexBody::Polygon(random_centered_polygon(&mut rng, 7));
        let k1 = ConvexBody::Polygon(random_centered_polygon(&mut rng, 7));
        let r = check_supconv_support(&k0, &k1, t, SupGrid { half: 0.5, step: 0.1 }).unwrap();
        prop_assert!(r.satisfied(), "{:?}", r);
    }
}
