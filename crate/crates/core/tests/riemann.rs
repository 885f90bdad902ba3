mod common;

use common::geo;
use num_traits::Signed;
use srgeom::analysis::{AnalysisError, Verdict};
use srgeom::checks::Status;
use srgeom::exactnum::{frac, Laurent};
use srgeom::frame::{builtin_catalog, validate_grading};
use srgeom::geometry::Geometry;
use srgeom::riemann::{
    bg_limit_check, default_mu_grid, lc_equivalence, lc_koszul, lc_sanity, rescaled_ricci, ricci_comparison, ricci_lower_bound,
    riemann_myers_search, rm_comparison_residuals, CompVariant,
};

fn frames() -> Vec<Geometry> {
    let mut fs = builtin_catalog();
    fs.extend(common::random_frames(50));
    fs.iter().filter(|f| validate_grading(f).all_valid()).map(|f| Geometry::new(&f.basic()).unwrap()).collect()
}

#[test]
fn koszul_is_levi_civita() {
    for g in frames() {
        let lc = lc_koszul(&g.spec);
        let (tf, mc) = lc_sanity(&g.spec, &lc);
        assert!(tf.residual.is_zero() && mc.residual.is_zero(), "{}", g.spec.name);
        assert!(lc_equivalence(&g, CompVariant::Corrected).is_zero(), "{}", g.spec.name);
    }
}

#[test]
fn comparisons_vanish_when_applicable() {
    for g in frames() {
        for c in rm_comparison_residuals(&g, CompVariant::Corrected).checks() {
            assert_ne!(c.status, Status::Fail, "{}: {}", g.spec.name, c.name);
        }
        match ricci_comparison(&g, CompVariant::Corrected) {
            Ok(rc) => {
                assert_eq!(g.spec.dim_v(), 1);
                for c in [&rc.yy, &rc.yt, &rc.tt] {
                    assert!(c.residual.is_zero(), "{}: {}", g.spec.name, c.name);
                }
                for c in &rc.strictly_normal {
                    if g.normality.strictly_normal {
                        assert_eq!(c.status, Status::Pass, "{}: {}", g.spec.name, c.name);
                    } else {
                        assert_ne!(c.status, Status::Fail);
                    }
                }
            }
            Err(e) => {
                assert!(g.spec.dim_v() != 1);
                assert!(matches!(e, AnalysisError::VerticalRankNotOne { .. }));
            }
        }
    }
}

#[test]
fn heisenberg_rescaled_ricci() {
    let r = rescaled_ricci(&geo("heisenberg3").spec);
    assert_eq!(r.m[0][0], Laurent::monomial(frac(-1, 2), 1));
    assert_eq!(r.m[2][2], Laurent::monomial(frac(1, 2), 2));
    assert!(r.is_symmetric());
}

#[test]
fn bg_limit() {
    for name in ["heisenberg3", "su2", "heisenberg5"] {
        let c = bg_limit_check(&geo(name), 8).unwrap();
        assert_eq!(c.status, Status::Pass, "{name}");
    }
    assert!(bg_limit_check(&geo("c3_basic"), 8).is_err());
}

#[test]
fn riemannian_myers() {
    let grid = default_mu_grid();
    assert!(grid.len() >= 21);
    let su2 = riemann_myers_search(&geo("su2"), &grid, &frac(1, 1000)).unwrap();
    assert_eq!(su2.verdict, Verdict::Compact);
    assert!(su2.constant("c").unwrap().is_positive());
    let h = riemann_myers_search(&geo("heisenberg3"), &grid, &frac(1, 1000)).unwrap();
    assert_eq!(h.verdict, Verdict::Inconclusive);
    assert!(!h.constant("c_upper").unwrap().is_positive());
    assert!(h.constant("mu").unwrap() >= &frac(1, 1 << 20));
    let f = &geo("heisenberg3").spec;
    let ricci = rescaled_ricci(f);
    for k in 0..=20 {
        let mu = frac(1, 1 << k);
        let (_, hi) = ricci_lower_bound(f, &ricci, &mu, &frac(1, 1000));
        assert!(!hi.is_positive(), "mu = 2^-{k}");
    }
}
