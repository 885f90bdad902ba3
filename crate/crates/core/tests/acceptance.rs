//! Acceptance run: one pass/fail line per criterion, nonzero exit on any
//! failure. Every criterion is checked exactly.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use srgeom::analysis::{bg_form, cd_frontier, myers_certificate, rho1_max, torsion_bounds, Verdict};
use srgeom::checks::{Check, Status};
use srgeom::connection::b_tensor;
use srgeom::curvature::flatness_flags;
use srgeom::exactnum::{frac, half, int, Scalar, SymForm};
use srgeom::frame::{builtin_catalog, catalog_entry, random_step2, validate_grading, GradedFrameSpec};
use srgeom::geometry::Geometry;
use srgeom::jets::{builtin_models, run_suite, test_functions, Mode, SuiteOptions};
use srgeom::riemann::{
    bg_limit_check, default_mu_grid, lc_equivalence, ricci_comparison, ricci_lower_bound,
    rescaled_ricci, riemann_myers_search, CompVariant,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const X: usize = 0;
const Y: usize = 1;
const T: usize = 2;
const S: usize = 3;
const RANDOM_ALGEBRAS: u64 = 60;

fn geo(name: &str) -> Geometry {
    Geometry::new(&catalog_entry(name).expect("catalog entry")).expect("canonical connection")
}

fn tol() -> Scalar {
    frac(1, 1000)
}

/// Catalog plus random step-2 algebras, restricted to valid gradings.
fn all_frames() -> Vec<GradedFrameSpec> {
    let mut v = builtin_catalog();
    v.extend((0..RANDOM_ALGEBRAS).map(random_step2));
    v.retain(|f| validate_grading(f).all_valid());
    v
}

fn c3_values() -> Outcome {
    let b = geo("c3_basic");
    let expect = [
        ("nabla_X T = S/2", b.conn.get(X, T, S), frac(1, 2)),
        ("nabla_X S = -T/2", b.conn.get(X, S, T), frac(-1, 2)),
        ("Tor(X,Y) = -T", b.tor.get(X, Y, T), int(-1)),
        ("Tor(X,T) = -S/2", b.tor.get(X, T, S), frac(-1, 2)),
        ("Tor(X,S) = -T/2", b.tor.get(X, S, T), frac(-1, 2)),
    ];
    for (what, got, want) in expect {
        ensure!(*got == want, "{what}: got {got}");
    }
    ensure!(b_tensor(&b.spec)[[T, S, X]] == int(-1), "B(T,S,X) != -1");
    let full = geo("c3");
    ensure!(full.conn.gamma.is_zero(), "2-grading connection is not zero");
    ensure!((0..4).all(|k| full.td.tor2[[X, X, S, k]].is_zero()), "Tor(X,Tor(X,S)) != 0");
    Ok("C3 connection, torsion and B values exact".into())
}

fn normality() -> Outcome {
    ensure!(geo("c3").normality.strictly_normal, "c3 (2,1,1) not strictly normal");
    let b = geo("c3_basic");
    ensure!(b.normality.j_normal == [true, false], "c3 basic flags {:?}", b.normality.j_normal);
    ensure!(b_tensor(&b.spec)[[T, S, X]] == int(-1), "witness B(1)(T,S,X) != -1");
    ensure!(geo("sn").normality.strictly_normal, "sn not strictly normal");
    Ok("c3 strictly normal, c3 basic 0- not 1-normal (witness -1), sn strictly normal".into())
}

fn flatness() -> Outcome {
    let names = ["c3", "c3_basic", "sn", "heisenberg3", "heisenberg5", "free23", "abelian3"];
    for name in names {
        let g = geo(name);
        ensure!(flatness_flags(&g.spec, &g.curv).flat && g.curv.r.is_zero(), "{name} not flat");
    }
    Ok(format!("{} entries flat", names.len()))
}

fn is_unconditional(c: &Check) -> bool {
    matches!(
        c.name.as_str(),
        "metric compatibility"
            | "each grade parallel"
            | "Tor(V_j,V_j) in complement of V_j"
            | "torsion symmetry"
            | "Rm(A,B,C,D) = -Rm(A,B,D,C)"
            | "Rm(A,B,C,D) = -Rm(B,A,C,D)"
            | "Rm(TM,TM,HM,VM) = 0"
            | "algebraic Bianchi"
            | "differential Bianchi"
    )
}

fn identity_suites() -> Outcome {
    let frames = all_frames();
    let mut checked = 0;
    for f in &frames {
        let checks = Geometry::new(f).map_err(|e| format!("{}: {e}", f.name))?.identity_checks();
        let uncond: Vec<&Check> = checks.iter().filter(|c| is_unconditional(c)).collect();
        ensure!(uncond.len() == 9, "{}: found {} unconditional checks", f.name, uncond.len());
        for c in uncond {
            ensure!(c.residual.is_zero(), "{}: {} residual {}", f.name, c.name, c.residual.max_abs);
            checked += 1;
        }
    }
    Ok(format!("{checked} unconditional residuals zero on {} frames", frames.len()))
}

fn conditional() -> Outcome {
    for name in ["heisenberg3", "su2", "sn"] {
        for c in geo(name).identity_checks() {
            ensure!(c.status != Status::Fail, "{name}: {} failed", c.name);
            if !c.name.starts_with("algebraic Bianchi, part (c)") {
                ensure!(c.status == Status::Pass, "{name}: {} is {}", c.name, c.status.as_str());
            }
        }
    }
    let basic = geo("c3_basic").identity_checks();
    ensure!(basic.iter().all(|c| c.status != Status::Fail), "c3 basic reports a failure");
    ensure!(basic.iter().any(|c| c.status == Status::Unmet), "c3 basic reports no unmet hypothesis");
    Ok("conditional identities pass on heisenberg3/su2/sn; c3 basic reports hypothesis-unmet".into())
}

fn levi_civita() -> Outcome {
    let frames = all_frames();
    let (mut rank_one, mut strict) = (0, 0);
    for f in &frames {
        let g = Geometry::new(&f.basic()).map_err(|e| e.to_string())?;
        ensure!(lc_equivalence(&g, CompVariant::Corrected).is_zero(), "{}: lc_from_basic != koszul", f.name);
        if g.spec.dim_v() != 1 {
            continue;
        }
        let rc = ricci_comparison(&g, CompVariant::Corrected).map_err(|e| e.to_string())?;
        for c in [&rc.yy, &rc.yt, &rc.tt] {
            ensure!(c.residual.is_zero(), "{}: {} nonzero", f.name, c.name);
        }
        rank_one += 1;
        if g.normality.strictly_normal {
            for c in &rc.strictly_normal {
                ensure!(c.status == Status::Pass, "{}: {} nonzero", f.name, c.name);
            }
            strict += 1;
        }
    }
    Ok(format!("{} frames equal; expansions zero on {rank_one} rank-one, reductions zero on {strict} strictly normal", frames.len()))
}

fn bg_pipeline() -> Outcome {
    let h = geo("heisenberg3");
    let bg = bg_form(&h);
    ensure!(bg.form == SymForm::diagonal(&[int(0), int(0), half()]), "heisenberg R = {:?}", bg.form.rows());
    let k = torsion_bounds(&h, 0, 0, 1, &tol());
    ensure!(k.lower == int(1) && k.upper == int(1), "kappa_00^1 in [{}, {}]", k.lower, k.upper);
    let cert = myers_certificate(&h.spec, &tol()).map_err(|e| e.to_string())?;
    ensure!(cert.constant("kappa") == Some(&int(2)), "heisenberg kappa != 2");
    ensure!(rho1_max(&h.spec, &bg, &tol()) == (int(0), int(0)), "heisenberg rho1max != 0");
    ensure!(cert.verdict == Verdict::Inconclusive, "heisenberg verdict not inconclusive");
    ensure!(cd_frontier(&h.spec, &bg, &[int(0)], &tol())[0].rho2.is_some(), "rho1 = 0 infeasible");

    let s = geo("su2");
    ensure!(bg_form(&s).form == SymForm::diagonal(&[int(1), int(1), half()]), "su2 R wrong");
    let cert = myers_certificate(&s.spec, &tol()).map_err(|e| e.to_string())?;
    ensure!(cert.verdict == Verdict::Compact, "su2 not compact");
    ensure!(cert.constant("rho1") == Some(&int(1)), "su2 rho1 != 1");
    for g in [&h, &s] {
        let c = bg_limit_check(g, 8).map_err(|e| e.to_string())?;
        ensure!(c.status == Status::Pass, "{}: bg_limit {}", g.spec.name, c.residual.max_abs);
    }
    Ok("heisenberg diag(0,0,1/2) k=1 kappa=2 rho1max=0 inconclusive; su2 diag(1,1,1/2) compact; limits exact".into())
}

fn riemann_myers() -> Outcome {
    let grid = default_mu_grid();
    let su2 = riemann_myers_search(&geo("su2"), &grid, &tol()).map_err(|e| e.to_string())?;
    let c = su2.constant("c").cloned().unwrap_or_default();
    ensure!(su2.verdict == Verdict::Compact && c.is_positive(), "su2: c = {c}");
    let h = geo("heisenberg3");
    let ricci = rescaled_ricci(&h.spec);
    for k in 0..=20 {
        let (_, hi) = ricci_lower_bound(&h.spec, &ricci, &frac(1, 1 << k), &tol());
        ensure!(!hi.is_positive(), "heisenberg: positive bound at mu = 2^-{k}");
    }
    Ok(format!("su2 certified c = {c}; heisenberg none for mu = 2^-k, k <= 20"))
}

fn jet_suite() -> Outcome {
    let opts = SuiteOptions::default();
    ensure!(opts.points >= 10, "fewer than 10 points");
    let mut summary = Vec::new();
    for m in builtin_models() {
        ensure!(test_functions(&m).len() >= 5, "{}: fewer than 5 test functions", m.name);
        let checks = run_suite(&m, &opts).map_err(|e| format!("{}: {e}", m.name))?;
        for c in &checks {
            ensure!(c.status != Status::Fail, "{}: {} residual {}", m.name, c.name, c.residual.max_abs);
        }
        let status = |n: &str| checks.iter().find(|c| c.name == n).map(|c| c.status);
        let bochner: Vec<&Check> = checks
            .iter()
            .filter(|c| c.name.starts_with("bochner_") || c.name.starts_with("hessian_trace"))
            .collect();
        let strict = m.basic.normality.strictly_normal;
        for c in &bochner {
            let needs_strict = c.name.starts_with("bochner_strict");
            if !needs_strict || strict {
                ensure!(c.status == Status::Pass, "{}: {} {}", m.name, c.name, c.status.as_str());
                if m.mode == Mode::Exact {
                    ensure!(c.residual.max_abs.is_zero(), "{}: {} not exactly zero", m.name, c.name);
                }
            }
        }
        if strict {
            ensure!(status("gamma commutation") == Some(Status::Pass), "{}: commutation", m.name);
        }
        if m.basic.normality.vertically_rigid_for_this_metric {
            ensure!(status("divergence equals horizontal trace") == Some(Status::Pass), "{}: divergence", m.name);
        }
        summary.push(format!("{}({})", m.name, m.mode.as_str()));
    }
    Ok(format!("Bochner, commutation and divergence hold on {}", summary.join(" ")))
}

fn main() {
    let start = Instant::now();
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("C3 values", c3_values),
        ("normality flags", normality),
        ("flatness", flatness),
        ("identity suites", identity_suites),
        ("conditional identities", conditional),
        ("Levi-Civita oracle", levi_civita),
        ("Baudoin-Garofalo pipeline", bg_pipeline),
        ("Riemannian Myers search", riemann_myers),
        ("jet suite", jet_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        if i + 1 == criteria.len() {
            let total = start.elapsed();
            result = result.and_then(|msg| {
                if total <= Duration::from_secs(60) {
                    Ok(format!("{msg}; total {:.1}s", total.as_secs_f64()))
                } else {
                    Err(format!("total runtime {:.1}s exceeds 60s", total.as_secs_f64()))
                }
            });
        }
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("criterion {}: PASS  {name} ({secs:.2}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
