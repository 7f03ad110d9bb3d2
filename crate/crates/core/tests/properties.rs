use proptest::prelude::*;

use humbert_core::corank1::{sl2_mod_m_orbit, TorsionClass};
use humbert_core::corank2::{branch_limit, chart_boundary_range};
use humbert_core::families::{build_mv, family_period_matrix, matching_vector, FamilyId};
use humbert_core::mumford::{
    degenerate_fiber, quotient_cycle_oracle, verify_ideal_invariance, Coord, StratumId, YElement,
};
use humbert_core::siegel::{enumerate_vectors, humbert_residual, DiscriminantVector};
use humbert_core::Complex64;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn finite_family() -> impl Strategy<Value = (i64, i64, i64)> {
    (2i64..=20)
        .prop_flat_map(|m| (Just(m), 0..=m, 0..=m))
        .prop_filter("order m", |&(m, c, e)| gcd(gcd(c, e), m) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumerated_vectors_satisfy_the_discriminant(m in 2i64..=4) {
        for v in enumerate_vectors(m, m).unwrap() {
            let [a, b, c, d, e] = v.coeffs();
            prop_assert_eq!(b * b - 4 * (a * c + d * e), m * m);
            prop_assert_eq!([a, b, c, d, e].iter().fold(0, |g, &x| gcd(g, x)), 1);
            prop_assert!(v.coeffs().iter().find(|&&x| x != 0).unwrap() > &0);
            // the negated vector is a solution too and normalizes back
            let neg = DiscriminantVector::with_exponent(v.coeffs().map(|x| -x), m).unwrap();
            prop_assert_eq!(neg.normalized(), v);
        }
    }

    #[test]
    fn residual_is_linear_in_the_vector(
        u in prop::array::uniform5(-20i64..=20),
        w in prop::array::uniform5(-20i64..=20),
        re in prop::array::uniform3(-0.5f64..0.5),
        im in prop::array::uniform3(0.5f64..2.5),
    ) {
        let tau = humbert_core::siegel::PeriodMatrix {
            tau11: Complex64::new(re[0], im[0]),
            tau12: Complex64::new(re[1], im[1] * 0.1),
            tau22: Complex64::new(re[2], im[2]),
        };
        let sum: [i64; 5] = std::array::from_fn(|k| u[k] + w[k]);
        let f = |v: [i64; 5]| humbert_core::siegel::humbert_form(v, &tau);
        prop_assert!((f(sum) - f(u) - f(w)).norm() < 1e-9);
    }

    #[test]
    fn family_matrices_lie_on_their_surface(
        (m, c, e) in finite_family(),
        mu in (-0.5f64..0.5, 0.5f64..2.5),
        tau in (-0.5f64..0.5, 0.5f64..2.5),
    ) {
        let family = FamilyId::Finite { c, e };
        if let Ok(p) = family_period_matrix(
            &family, m, Complex64::new(mu.0, mu.1), Complex64::new(tau.0, tau.1),
        ) {
            let v = matching_vector(&family, m).unwrap();
            prop_assert!(humbert_residual(&v, &p).norm() < 1e-12);
        }
    }

    #[test]
    fn mv_is_antisymmetric(v in prop::array::uniform5(-30i64..=30), m in 1i64..30) {
        let dv = DiscriminantVector { a: v[0], b: v[1], c: v[2], d: v[3], e: v[4], m };
        let mv = build_mv(&dv).mv;
        for i in 0..4 {
            for k in 0..4 {
                prop_assert_eq!(mv[i][k], -mv[k][i]);
            }
        }
    }

    #[test]
    fn ideal_invariance_holds_for_every_admissible_family((m, c, e) in finite_family()) {
        let report = verify_ideal_invariance(m, &FamilyId::Finite { c, e }).unwrap();
        prop_assert!(report.reduces_to_one);
        let inf = verify_ideal_invariance(m, &FamilyId::Infinity).unwrap();
        prop_assert!(inf.reduces_to_one);
    }

    #[test]
    fn v_multiplier_keeps_uvw_invariant(a in -100i64..100, b in -100i64..100) {
        let y = YElement::new(a, b);
        let total = y.multiplier(Coord::U) * y.multiplier(Coord::V) * y.multiplier(Coord::W);
        prop_assert!(total.is_one());
    }

    #[test]
    fn fibers_are_genus_one_cycles(m in 2i64..=30) {
        for stratum in StratumId::ALL {
            let g = degenerate_fiber(m, stratum).unwrap();
            prop_assert_eq!(g.vertices.len(), g.edges.len());
            let n = g.cycle_length().unwrap();
            let oracle = quotient_cycle_oracle(3 * n + 1, n).unwrap();
            prop_assert_eq!(oracle.edges, g.edges);
            prop_assert_eq!(g.surface_type, Some(stratum.surface_type()));
        }
    }

    #[test]
    fn orbits_cover_all_classes((m, c, e) in finite_family()) {
        let start = TorsionClass::new(c, e, m).unwrap();
        prop_assert_eq!(sl2_mod_m_orbit(m, start).unwrap(), TorsionClass::all(m));
    }

    #[test]
    fn chart_range_is_where_limits_exist(m in 2i64..=12, a in 0i64..12, b in 0i64..12) {
        prop_assume!(a < m && b < m);
        let range = chart_boundary_range(b, m).unwrap();
        for n in -3..=3 {
            prop_assert_eq!(branch_limit(a, b, m, n).is_some(), range.contains(&n), "n={}", n);
        }
    }
}
