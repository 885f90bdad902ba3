use std::process::Command as Proc;

use srgeom::cli::{
    load_target, parse_input, render_input, run, Command, GradingChoice, Options, EXIT_INVALID, EXIT_OK, EXIT_UNMET,
};
use srgeom::frame::{builtin_catalog, catalog_entry};
use srgeom::report::Format;

fn analyze(name: &str) -> srgeom::cli::Outcome {
    run(Command::Analyze, Some(&catalog_entry(name).unwrap()), &Options::default())
}

#[test]
fn round_trip_catalog_and_random() {
    let mut frames = builtin_catalog();
    frames.extend((0..20).map(srgeom::frame::random_step2));
    for f in frames {
        let text = render_input(&f);
        let back = parse_input(&text).unwrap();
        assert_eq!(back, f, "{text}");
        assert_eq!(render_input(&back), text);
    }
}

#[test]
fn parse_errors_have_positions() {
    let e = parse_input("dim: 3\ngrades: [2, 1]\n(1,2) -> 1.5x*3\n").unwrap_err();
    assert_eq!((e.line, e.col), (3, 11));
    let e = parse_input("dim: 3\ngrades: [2, 1]\n(1,2) -> 1*4\n").unwrap_err();
    assert_eq!((e.line, e.col), (3, 12));
    let e = parse_input("dim: 3\ngrades: [2, 1]\n(2,1) -> 3\n").unwrap_err();
    assert_eq!(e.line, 3);
    let e = parse_input("dim: 3\ngrades: [2, 2]\n").unwrap_err();
    assert_eq!(e.line, 2);
    assert!(parse_input("grades: [2, 1]\n").is_err());
    let e = parse_input("dim: 3\ncolour: blue\n").unwrap_err();
    assert_eq!((e.line, e.col), (2, 1));
}

#[test]
fn comments_labels_and_shorthand() {
    let text = "# su(2)\nname: s\ndim: 3\ngrades: [2,1]\nlabels: A B C\n(1,2) -> 3   # [A,B] = C\n(1,3) -> -2\n(2,3) -> 1*1\n";
    let f = parse_input(text).unwrap();
    assert_eq!(f.labels, ["A", "B", "C"]);
    assert_eq!(f.sc(), catalog_entry("su2").unwrap().sc());
}

#[test]
fn documented_examples() {
    let h = analyze("heisenberg3");
    assert_eq!(h.exit, EXIT_OK);
    assert_eq!(h.report.get("certificates.bg_tensor"), Some("[0 0 0; 0 0 0; 0 0 1/2]"));
    assert_eq!(h.report.get("certificates.myers_bm2.verdict"), Some("inconclusive"));
    assert!(h.report.render(Format::Structured).contains("certificates.myers_bm2.constants.rho2 = \"1/2\"\n"));

    let s = analyze("su2");
    assert_eq!(s.exit, EXIT_OK);
    assert_eq!(s.report.get("certificates.myers_bm2.verdict"), Some("compact"));
    for (k, v) in [("rho1", "1"), ("rho2", "1/2"), ("kappa", "2")] {
        assert_eq!(s.report.get(&format!("certificates.myers_bm2.constants.{k}")), Some(v));
    }

    let r = run(Command::Riemann, Some(&catalog_entry("c3").unwrap()), &Options::default());
    assert_eq!(r.exit, EXIT_UNMET);
    assert_eq!(r.report.get("riemann_comparison.ricci_expansion.status"), Some("hypothesis-unmet"));
    assert!(r.report.get("riemann_comparison.rescaled_ricci.Rc_X_X").is_none());
    assert!(r.report.render(Format::Structured).contains("riemann_comparison.rescaled_ricci.Rc_X_X = [0: -1/2, 1: -1/2]"));
}

#[test]
fn empty_sections() {
    let r = analyze("su2");
    let structured = r.report.render(Format::Structured);
    assert!(structured.contains("jet_checks = {}\n"));
    assert!(!r.report.render(Format::Text).contains("[jet_checks]"));
}

#[test]
fn deterministic_output() {
    for name in ["heisenberg3", "c3", "sn"] {
        let a = analyze(name).report.render(Format::Structured);
        let b = analyze(name).report.render(Format::Structured);
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn no_identity_violation_on_catalog() {
    for f in builtin_catalog() {
        for cmd in [Command::Analyze, Command::Check, Command::Riemann, Command::Frontier] {
            let o = run(cmd, Some(&f), &Options::default());
            assert!([EXIT_OK, EXIT_UNMET].contains(&o.exit), "{} {cmd:?}: exit {}", f.name, o.exit);
        }
    }
}

#[test]
fn invalid_inputs() {
    let broken = parse_input("dim: 3\ngrades: [2,1]\n(1,2) -> 3\n(2,3) -> 1\n(1,3) -> 1\n").unwrap();
    let o = run(Command::Analyze, Some(&broken), &Options::default());
    assert_eq!(o.exit, EXIT_INVALID);
    assert_eq!(o.report.get("validation.jacobi"), Some("false"));
    assert_eq!(run(Command::Bochner, Some(&catalog_entry("su2").unwrap()), &Options::default()).exit, EXIT_INVALID);
    assert!(load_target("no-such-frame").is_err());
    let opts = Options { grading: GradingChoice::Sub(7), ..Options::default() };
    assert_eq!(run(Command::Check, Some(&catalog_entry("c3").unwrap()), &opts).exit, EXIT_INVALID);
}

#[test]
fn gradings_and_bochner() {
    let c3 = catalog_entry("c3").unwrap();
    let basic = Options { grading: GradingChoice::Basic, ..Options::default() };
    let o = run(Command::Bochner, Some(&c3), &basic);
    assert_eq!(o.exit, EXIT_OK);
    assert_eq!(o.report.get("jet_checks.bochner_strict_horizontal.status"), Some("hypothesis-unmet"));
    assert_eq!(o.report.get("jet_checks.bochner_general_grade1.status"), Some("pass"));
    assert_eq!(run(Command::Analyze, Some(&c3), &basic).exit, EXIT_UNMET);
}

#[test]
fn binary_end_to_end() {
    let bin = env!("CARGO_BIN_EXE_srgeom");
    let out = Proc::new(bin).args(["analyze", "heisenberg3", "--format", "structured"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("certificates.myers_bm2.constants.rho2 = \"1/2\""));

    assert_eq!(Proc::new(bin).args(["riemann", "c3"]).output().unwrap().status.code(), Some(3));
    assert_eq!(Proc::new(bin).args(["analyze", "nothing"]).output().unwrap().status.code(), Some(1));
    assert_eq!(Proc::new(bin).args(["analyze", "su2", "--tol", "0"]).output().unwrap().status.code(), Some(1));

    let dir = std::env::temp_dir().join(format!("srgeom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("bad.frame");
    std::fs::write(&input, "dim: 3\ngrades: [2,1]\n(1,2) -> 1.5x*3\n").unwrap();
    let out = Proc::new(bin).args(["check", input.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3, column 11"));

    let report = dir.join("su2.txt");
    let out = Proc::new(bin)
        .args(["riemann", "su2", "--mu-grid", "1,1/2", "--out", report.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&report).unwrap().contains("[riemann_comparison]"));

    let listing = Proc::new(bin).arg("catalog").output().unwrap();
    assert!(String::from_utf8_lossy(&listing.stdout).contains("heisenberg5:"));
    std::fs::remove_dir_all(&dir).unwrap();
}
