use beta_integrals::catalog::{self, IdentityId};
use beta_integrals::gamma::{c, gamma, gamma_ratio_real, sin_pi};
use beta_integrals::hypergeometric::f21_real;
use beta_integrals::wilson::{permutations4, symmetry_check, WilsonParams};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_recurrence(x in 0.1f64..6.0, y in -8.0f64..8.0) {
        let z = c(x, y);
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    }

    #[test]
    fn reflection(x in 0.05f64..0.95) {
        let g = gamma_ratio_real(&[x, 1.0 - x], &[]).unwrap();
        prop_assert!((g * sin_pi(x) / std::f64::consts::PI - 1.0).abs() < 1e-13);
    }

    #[test]
    fn euler_transform(a in 0.3f64..1.5, b in 0.3f64..1.5, cc in 0.3f64..1.5, x in 0.1f64..5.0) {
        let lhs = f21_real(a, b, cc, -x).unwrap();
        let rhs = (1.0 + x).powf(cc - a - b) * f21_real(cc - a, cc - b, cc, -x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-300));
    }

    #[test]
    fn wilson_symmetric_in_parameters(a in 0.2f64..1.5, b in 0.2f64..1.5, cc in 0.2f64..1.5, d in 0.2f64..1.5, n in 0usize..4) {
        let wp = WilsonParams::new(a, b, cc, d).unwrap();
        for perm in permutations4() {
            prop_assert!(symmetry_check(&wp, n, perm, &[0.0, 0.7, 1.9]).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn sampled_points_are_in_domain(seed in any::<u64>()) {
        for id in IdentityId::ALL {
            for p in catalog::sample_points(id, 2, seed) {
                prop_assert!(catalog::domain_check(id, &p).is_ok(), "{} {:?}", id, p);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn four_parameter_integral_holds(a in prop::array::uniform4(0.2f64..1.5)) {
        let r = catalog::verify(IdentityId::Eq0_2, &a, 1e-7);
        prop_assert!(r.passed, "{:?}", r);
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>()) {
        for id in [IdentityId::Eq0_1, IdentityId::Eq2_4, IdentityId::Eq4_3] {
            prop_assert_eq!(catalog::sample_points(id, 3, seed), catalog::sample_points(id, 3, seed));
        }
    }
}
