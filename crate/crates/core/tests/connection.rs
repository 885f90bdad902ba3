mod common;

use common::geo;
use srgeom::connection::{b_tensor, canonical_connection, grading_independence_check, torsion, verify_axioms};
use srgeom::exactnum::{frac, int};
use srgeom::frame::{builtin_catalog, catalog_entry, random_rebased};

const X: usize = 0;
const Y: usize = 1;
const T: usize = 2;
const S: usize = 3;

#[test]
fn c3_basic_oracle() {
    let g = geo("c3_basic");
    assert_eq!(g.conn.get(X, T, S), &frac(1, 2));
    assert_eq!(g.conn.get(X, S, T), &frac(-1, 2));
    assert_eq!(g.tor.get(X, Y, T), &int(-1));
    assert_eq!(g.tor.get(X, T, S), &frac(-1, 2));
    assert_eq!(g.tor.get(X, S, T), &frac(-1, 2));
    assert_eq!(b_tensor(&g.spec)[[T, S, X]], int(-1));
}

#[test]
fn c3_full_grading_oracle() {
    let g = geo("c3");
    assert!(g.conn.gamma.is_zero());
    for k in 0..4 {
        assert_eq!(g.td.tor2[[X, X, S, k]], int(0));
        assert_eq!(g.tor.get(X, S, k), &int(0));
    }
}

#[test]
fn normality_flags() {
    assert!(geo("c3").normality.strictly_normal);
    let b = geo("c3_basic").normality;
    assert_eq!(b.j_normal, vec![true, false]);
    assert!(geo("sn").normality.strictly_normal);
    assert!(geo("heisenberg3").normality.strictly_normal);
    assert!(geo("su2").normality.strictly_normal);
    assert!(!geo("su2_squashed").normality.vm_normal());
}

#[test]
fn axioms_on_catalog_random_and_rebased() {
    let mut frames = builtin_catalog();
    frames.extend(common::random_frames(50));
    let h = catalog_entry("heisenberg5").unwrap();
    frames.extend((0..20).filter_map(|s| random_rebased(&h, &[4, 1], s)));
    for f in &frames {
        let Ok(conn) = canonical_connection(f) else { continue };
        let tor = torsion(f, &conn);
        let rep = verify_axioms(f, &conn, &tor);
        assert!(rep.all_pass(), "{}", f.name);
        assert!(grading_independence_check(f).unwrap().residual.is_zero(), "{}", f.name);
    }
}

#[test]
fn perturbed_connection_is_caught() {
    let f = catalog_entry("su2").unwrap();
    let mut conn = canonical_connection(&f).unwrap();
    conn.gamma[[2, 0, 1]] += frac(1, 3);
    let rep = verify_axioms(&f, &conn, &torsion(&f, &conn));
    assert!(!rep.all_pass());
}
