mod common;

use common::{assert_no_failures, find, geo};
use srgeom::checks::Status;
use srgeom::curvature::flatness_flags;
use srgeom::frame::{builtin_catalog, catalog_entry, random_rebased, validate_grading};
use srgeom::geometry::Geometry;

const UNCONDITIONAL: [&str; 5] = [
    "Rm(A,B,C,D) = -Rm(A,B,D,C)",
    "Rm(A,B,C,D) = -Rm(B,A,C,D)",
    "Rm(TM,TM,HM,VM) = 0",
    "algebraic Bianchi",
    "differential Bianchi",
];

#[test]
fn check_names_are_stable() {
    let checks = geo("heisenberg3").identity_checks();
    for name in UNCONDITIONAL {
        find(&checks, name);
    }
}

#[test]
fn flatness() {
    for name in ["c3", "c3_basic", "sn", "heisenberg3", "heisenberg5", "free23", "abelian3"] {
        let g = geo(name);
        assert!(flatness_flags(&g.spec, &g.curv).flat, "{name}");
        assert!(g.curv.r.is_zero(), "{name}");
    }
    let su2 = geo("su2");
    assert!(!flatness_flags(&su2.spec, &su2.curv).flat);
}

#[test]
fn unconditional_identities_everywhere() {
    let mut frames = builtin_catalog();
    frames.extend(common::random_frames(50));
    let h = catalog_entry("heisenberg5").unwrap();
    frames.extend((0..20).filter_map(|s| random_rebased(&h, &[4, 1], s)));
    let mut ran = 0;
    for f in frames.iter().filter(|f| validate_grading(f).all_valid()) {
        let g = Geometry::new(f).unwrap();
        let checks = g.identity_checks();
        assert_no_failures(&f.name, &checks);
        for name in UNCONDITIONAL {
            assert!(find(&checks, name).residual.is_zero(), "{}: {name}", f.name);
        }
        ran += 1;
    }
    assert!(ran >= 60);
}

#[test]
fn conditional_identities() {
    for name in ["heisenberg3", "su2", "sn"] {
        let checks = geo(name).identity_checks();
        for c in &checks {
            if c.name.starts_with("algebraic Bianchi, part (c)") {
                continue;
            }
            assert_eq!(c.status, Status::Pass, "{name}: {}", c.name);
        }
    }
    let basic = geo("c3_basic").identity_checks();
    assert_no_failures("c3_basic", &basic);
    let unmet: Vec<&str> = basic.iter().filter(|c| c.status == Status::Unmet).map(|c| c.name.as_str()).collect();
    // 0-normal but not 1-normal: only the grade-1 parts lose their hypotheses.
    assert_eq!(unmet, ["algebraic Bianchi, part (b) j=1", "algebraic Bianchi, part (c) j=1"]);
}

#[test]
fn su2_ricci() {
    let g = geo("su2");
    assert_eq!(g.ricci.rc[[0, 0]], srgeom::exactnum::int(1));
    assert_eq!(g.ricci.rc[[1, 1]], srgeom::exactnum::int(1));
    assert_eq!(g.ricci.s0, srgeom::exactnum::int(2));
}
