#![allow(dead_code)]

use srgeom::checks::{Check, Status};
use srgeom::frame::{catalog_entry, random_step2, GradedFrameSpec};
use srgeom::geometry::Geometry;

pub fn geo(name: &str) -> Geometry {
    Geometry::new(&catalog_entry(name).unwrap_or_else(|| panic!("catalog entry {name}"))).unwrap()
}

/// At least `count` random step-2 nilpotent frames, deterministic.
pub fn random_frames(count: u64) -> Vec<GradedFrameSpec> {
    (0..count).map(random_step2).collect()
}

pub fn find<'a>(checks: &'a [Check], name: &str) -> &'a Check {
    checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check named {name}"))
}

pub fn assert_no_failures(label: &str, checks: &[Check]) {
    for c in checks {
        assert_ne!(c.status, Status::Fail, "{label}: {} residual {}", c.name, c.residual.max_abs);
    }
}
