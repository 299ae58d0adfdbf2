use std::f64::consts::PI;

use beta_integrals::catalog::*;
use beta_integrals::catalog::IdentityId::*;

fn check_all(id: IdentityId, points: &[Vec<f64>]) {
    for p in points {
        let r = verify(id, p, id.default_tolerance());
        assert!(r.passed, "{id} at {p:?}: {r:?}");
    }
}

#[test]
fn symmetric_points() {
    let r = verify(Eq0_2, &[0.5; 4], 1e-7);
    assert!(r.passed && (r.lhs_value - 1.0).abs() < 1e-8, "{r:?}");
    let r = verify(Eq0_1, &[0.5, 0.5, 0.5, 3.0], 1e-7);
    assert!(r.passed && (r.rhs_value - 32.0 / (27.0 * PI)).abs() < 1e-14, "{r:?}");
    let r = verify(Eq2_1, &[0.5; 4], 1e-9);
    assert!(r.passed && (r.lhs_value - 1.0).abs() < 1e-10);
    assert!(verify(Eq0_4, &[0.4; 5], 1e-7).passed);
    let r = verify(Eq0_6, &[2.0, 2.0, 2.0, 2.0, 0.25], 1e-8);
    assert!(r.passed && (r.rhs_value - 3.0 / (16.0 * PI)).abs() < 1e-15);
}

#[test]
fn random_points_section_0() {
    for id in [Eq0_1, Eq0_2, Eq0_3, Eq0_4] {
        check_all(id, &sample_points(id, 10, 2024));
    }
    check_all(Eq0_6, &sample_points(Eq0_6, 5, 2024));
}

#[test]
fn askey_in_the_convergent_regime() {
    let pts = sample_points(Eq0_5, 3, 5);
    check_all(Eq0_5, &pts);
    // the principal value does not depend on where the lattice is cut
    for p in &pts {
        let mut q = p.clone();
        q[4] = 0.2;
        let x = lhs_numeric(Eq0_5, &q, 1e-7).unwrap().value;
        q[4] = 0.37;
        let y = lhs_numeric(Eq0_5, &q, 1e-7).unwrap().value;
        assert!((x - y).abs() <= 3e-3 * x.abs());
    }
}

#[test]
fn askey_below_three_is_refused() {
    let r = verify(Eq0_5, &[0.7, 0.7, 0.7, 0.7, 0.3], 1e-3);
    assert!(!r.passed);
    assert!(r.reason.unwrap().contains("lattice limit does not exist"));
}

#[test]
fn random_points_section_2() {
    check_all(Eq2_1, &sample_points(Eq2_1, 5, 2024));
    check_all(Eq2_2, &sample_points(Eq2_2, 10, 2024));
    for id in [Eq2_3, Eq2_4, Eq2_5] {
        check_all(id, &sample_points(id, 5, 2024));
    }
}

#[test]
fn kummer_and_whipple_witnesses() {
    let p = [0.45, 0.7, 0.55, 0.8, 0.35];
    for perm in [[0, 1, 2, 4, 3], [3, 1, 2, 0, 4], [2, 4, 0, 1, 3]] {
        let r = symmetry_probe(Eq2_2, &perm, &p).unwrap();
        assert!(r <= 1e-9, "{perm:?}: {r:e}");
    }
    let p = [1.6, 0.5, 0.6, 0.7, 0.4, 0.8];
    for perm in [[0, 1, 2, 4, 3], [3, 1, 2, 0, 4], [1, 0, 2, 3, 4]] {
        let r = symmetry_probe(Eq2_4, &perm, &p).unwrap();
        assert!(r <= 1e-9, "{perm:?}: {r:e}");
    }
}

#[test]
fn residue_forms_agree_with_contour() {
    for (id, p) in [
        (Eq2_3, vec![0.45, 0.7, 0.55, 0.8, 0.35, 0.6]),
        (Eq2_4, vec![1.6, 0.5, 0.6, 0.7, 0.4, 0.8]),
        (Eq2_5, vec![1.3, 0.3, 0.4, 0.45, 0.7]),
    ] {
        let x = closed_form(id, &p).unwrap();
        let y = residue_form(id, &p).unwrap();
        assert!((x - y).abs() <= 1e-8 * x.abs(), "{id}: {x} {y}");
    }
}

#[test]
fn nassrallah_rahman_degeneration() {
    let (b, pp, q, u, v) = (0.5, 0.6, 0.7, 0.4, 0.8);
    let a = b + u + v + pp + q;
    let x = closed_form(Eq2_4, &[a, b, pp, q, u, v]).unwrap();
    let y = closed_form(Eq0_4, &[b, pp, q, u, v]).unwrap();
    assert!((x - y).abs() <= 1e-8 * y.abs(), "{x} {y}");
}

#[test]
fn large_b_limit() {
    let (a, pp, q, u, v) = (1.3, 0.6, 0.7, 0.4, 0.8);
    let target = closed_form(Eq2_5, &[a, pp, q, u, v]).unwrap();
    let gaps: Vec<f64> = [20.0, 40.0, 80.0]
        .iter()
        .map(|&b: &f64| {
            let g = beta_integrals::gamma::ln_gamma_real(b).unwrap().0;
            let x = closed_form(Eq2_4, &[a, b, pp, q, u, v]).unwrap() * (-2.0 * g).exp();
            (x - target).abs() / target
        })
        .collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    assert!(gaps[2] < 0.05, "{gaps:?}");
}

#[test]
fn section_4_points() {
    let base = [(0.6, 0.8, 0.7, 0.9, 0.5), (1.1, 0.4, 0.9, 0.6, 0.8), (0.5, 0.5, 0.5, 0.5, 0.5)];
    for (i, y) in [0.5, 1.0, 2.0].into_iter().enumerate() {
        let (a, b, c, d, e) = base[i];
        check_all(Eq4_1, &[vec![a, b, c, 1.3, y]]);
        check_all(Eq4_2, &[vec![a, b, c, d, y]]);
        check_all(Eq4_3, &[vec![a, b, c, d, y, 2.0]]);
        check_all(Eq4_3Diag, &[vec![a, b, c, d, y]]);
        check_all(Eq4_4, &[vec![a, b, c, d, e, y]]);
    }
    assert!(verify(Eq4_2, &[0.5, 0.5, 0.5, 0.5, 1.0], 1e-6).passed);
    assert!(verify(Eq4_3Diag, &[0.5, 0.5, 0.5, 0.5, 0.5], 1e-6).passed);
}

#[test]
fn normalization_ratios() {
    assert_eq!(Eq0_2.printed_normalization_ratio(), 2.0);
    assert_eq!(Eq0_3.printed_normalization_ratio(), 1.0);
    assert!((Eq0_5.printed_normalization_ratio() - 1.0 / (2.0 * PI)).abs() < 1e-16);
}

#[test]
fn integrands_of_squared_moduli_are_nonnegative() {
    // the quadrature returns positive values for the |…|² identities
    for id in [Eq0_1, Eq0_2, Eq0_4] {
        for p in sample_points(id, 3, 9) {
            assert!(lhs_numeric(id, &p, 1e-9).unwrap().value > 0.0);
        }
    }
}
