use num_traits::Zero;
use proptest::prelude::*;
use srgeom::checks::Status;
use srgeom::cli::{parse_input, render_input};
use srgeom::connection::{canonical_connection, torsion, verify_axioms};
use srgeom::exactnum::{fmt_scalar, frac, min_eig_bounds, parse_scalar, psd_check, Laurent, Scalar, SymForm};
use srgeom::frame::{catalog_entry, random_rebased, random_step2};
use srgeom::geometry::Geometry;
use srgeom::jets::{bochner_residual, hlap, model, Expr, BochnerVariant};
use srgeom::riemann::{lc_equivalence, CompVariant};

fn scalar() -> impl Strategy<Value = Scalar> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| frac(p, q))
}

fn laurent() -> impl Strategy<Value = Laurent> {
    prop::collection::vec((-3i32..=3, scalar()), 0..4)
        .prop_map(|ts| ts.into_iter().fold(Laurent::zero(), |acc, (e, c)| acc + Laurent::monomial(c, e)))
}


proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalar_text_round_trip(x in scalar()) {
        prop_assert_eq!(parse_scalar(&fmt_scalar(&x)), Some(x));
    }

    #[test]
    fn laurent_evaluation_is_a_ring_map(a in laurent(), b in laurent(), mu in (1i64..=9, 1i64..=9)) {
        let mu = frac(mu.0, mu.1);
        let prod = (&a * &b).eval(&mu).unwrap();
        prop_assert_eq!(prod, a.eval(&mu).unwrap() * b.eval(&mu).unwrap());
        let sum = (&a + &b).eval(&mu).unwrap();
        prop_assert_eq!(sum, a.eval(&mu).unwrap() + b.eval(&mu).unwrap());
    }

    #[test]
    fn eigen_bracket_agrees_with_psd(d in prop::collection::vec(scalar(), 3), off in prop::collection::vec(scalar(), 3)) {
        let rows = vec![
            vec![d[0].clone(), off[0].clone(), off[1].clone()],
            vec![off[0].clone(), d[1].clone(), off[2].clone()],
            vec![off[1].clone(), off[2].clone(), d[2].clone()],
        ];
        let form = SymForm::from_rows(rows).unwrap();
        let (lo, hi) = min_eig_bounds(&form, &frac(1, 1_000_000));
        prop_assert!(lo <= hi);
        prop_assert!(&hi - &lo <= frac(1, 1_000_000));
        prop_assert!(psd_check(&form.shift(&lo)));
        if hi < Scalar::zero() {
            prop_assert!(!psd_check(&form));
        }
        if lo >= Scalar::zero() {
            prop_assert!(psd_check(&form));
        }
    }

    #[test]
    fn step2_identities_and_round_trip(seed in 1000u64..100_000) {
        let f = random_step2(seed);
        prop_assert_eq!(parse_input(&render_input(&f)).unwrap(), f.clone());
        let g = Geometry::new(&f).unwrap();
        for c in g.identity_checks() {
            prop_assert_ne!(c.status, Status::Fail, "{}", c.name);
        }
        prop_assert!(lc_equivalence(&g, CompVariant::Corrected).is_zero());
    }

    #[test]
    fn rebased_frames_satisfy_axioms(seed in 0u64..10_000) {
        let base = catalog_entry("su2").unwrap();
        if let Some(f) = random_rebased(&base, &[2, 1], seed) {
            let conn = canonical_connection(&f);
            if let Ok(conn) = conn {
                prop_assert!(verify_axioms(&f, &conn, &torsion(&f, &conn)).all_pass());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bochner_on_random_polynomials(
        coeffs in prop::collection::vec(-5i64..=5, 4),
        exps in prop::collection::vec(0u32..=3, 4),
        seed in 0u64..1000,
    ) {
        let m = model("heisenberg3").unwrap();
        let mono = |v: usize, e: u32| Expr::Pow(Box::new(Expr::Var(v)), e);
        let mut f = Expr::from(0);
        for (i, (c, e)) in coeffs.iter().zip(&exps).enumerate() {
            let term = Expr::Mul(Box::new(Expr::from(*c)), Box::new(Expr::Mul(Box::new(mono(i % 3, *e)), Box::new(mono((i + 1) % 3, 1)))));
            f = Expr::Add(Box::new(f), Box::new(term));
        }
        let p = m.points::<Scalar>(1, seed).remove(0);
        prop_assert_eq!(bochner_residual(&m, &f, &p, BochnerVariant::General(0)).unwrap(), Scalar::zero());
        // The Laplacian is linear.
        let twice = Expr::Add(Box::new(f.clone()), Box::new(f.clone()));
        prop_assert_eq!(hlap(&m, &twice, &p).unwrap(), hlap(&m, &f, &p).unwrap() * frac(2, 1));
    }
}
