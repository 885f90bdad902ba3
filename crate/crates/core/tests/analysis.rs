mod common;

use common::geo;
use srgeom::analysis::{
    bad_bonnet, bg_form, bg_quadratic_raw, cd_feasible, cd_frontier, default_rho1_grid, myers_certificate,
    rho1_max, torsion_bounds, Verdict,
};
use srgeom::exactnum::{frac, half, int, SymForm};
use srgeom::frame::catalog_entry;
use srgeom::geometry::Geometry;

fn tol() -> srgeom::exactnum::Scalar {
    frac(1, 1000)
}

#[test]
fn heisenberg_pipeline() {
    let g = geo("heisenberg3");
    let bg = bg_form(&g);
    assert_eq!(bg.form, SymForm::diagonal(&[int(0), int(0), half()]));
    let k = torsion_bounds(&g, 0, 0, 1, &tol());
    assert!(k.exact() && k.finite);
    assert_eq!(k.upper, int(1));
    let (lo, hi) = rho1_max(&g.spec, &bg, &tol());
    assert_eq!((lo, hi), (int(0), int(0)));
    let c = myers_certificate(&g.spec, &tol()).unwrap();
    assert_eq!(c.verdict, Verdict::Inconclusive);
    assert_eq!(c.constant("kappa"), Some(&int(2)));
    assert_eq!(c.constant("rho2"), Some(&half()));
}

#[test]
fn su2_pipeline() {
    let g = geo("su2");
    assert_eq!(bg_form(&g).form, SymForm::diagonal(&[int(1), int(1), half()]));
    let c = myers_certificate(&g.spec, &tol()).unwrap();
    assert_eq!(c.verdict, Verdict::Compact);
    assert_eq!(c.constant("rho1"), Some(&int(1)));
    assert_eq!(c.constant("rho2"), Some(&half()));
    assert_eq!(c.constant("kappa"), Some(&int(2)));
}

#[test]
fn bg_form_agrees_with_raw_sum() {
    for name in ["heisenberg3", "su2", "sl2", "su2_squashed", "heisenberg5", "c3_basic", "sn"] {
        let g = Geometry::new(&catalog_entry(name).unwrap().basic()).unwrap();
        let form = bg_form(&g).form;
        for v in [[1, 0, 0, 0, 0], [1, 2, -1, 0, 1], [0, 1, 3, 2, -2]] {
            let a: Vec<_> = v.iter().take(g.dim()).map(|&x| int(x)).collect();
            assert_eq!(form.eval(&a, &a), bg_quadratic_raw(&g, &a), "{name}");
        }
    }
}

#[test]
fn frontier_is_monotone() {
    let g = geo("su2");
    let bg = bg_form(&g);
    let grid = default_rho1_grid(&g.spec, &bg, &tol());
    let rows = cd_frontier(&g.spec, &bg, &grid, &tol());
    assert_eq!(rows[0].rho1, int(1));
    for w in rows.windows(2) {
        let (a, b) = (w[0].rho2.as_ref().unwrap(), w[1].rho2.as_ref().unwrap());
        assert!(a.0 <= b.1, "rho2 can only grow as rho1 decreases");
    }
    assert!(cd_feasible(&g.spec, &bg, &int(1), &half()));
    assert!(!cd_feasible(&g.spec, &bg, &int(2), &half()));
}

#[test]
fn bad_bonnet_on_su2_and_c3() {
    let su2 = bad_bonnet(&geo("su2"), &tol()).unwrap();
    assert!(su2.hypotheses_pass());
    // The horizontal block of B + K vanishes on su(2), so no positive b is certified.
    assert_eq!(su2.constant("b"), Some(&int(0)));
    assert_eq!(su2.verdict, Verdict::Inconclusive);
    assert!(bad_bonnet(&geo("c3_basic"), &tol()).is_err());
}
