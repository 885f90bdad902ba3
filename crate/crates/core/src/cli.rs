//! Input documents, command pipelines and exit codes.
//!
//! Input grammar (one item per line, `#` starts a comment):
//!
//! ```text
//! name: heisenberg3
//! dim: 3
//! grades: [2, 1]
//! labels: X Y T                 optional, defaults to E1 .. En
//! (1,2) -> 1*3                  [E1,E2] = E3; only a < b, 1-based
//! (1,3) -> -1/2*2 + 3           a bare index means coefficient 1
//! ```

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::analysis::{
    bad_bonnet, bg_form, cd_frontier, default_rho1_grid, myers_certificate_from, torsion_bounds, Certificate,
};
use crate::checks::{Check, Status};
use crate::connection::{grading_independence_check, verify_axioms};
use crate::curvature::{
    algebraic_bianchi_residual, differential_bianchi_residual, flatness_flags, pair_symmetry, ricci_checks,
    symmetry_residuals,
};
use crate::exactnum::{fmt_scalar, frac, parse_scalar, Scalar, SymForm};
use crate::frame::{
    builtin_catalog, catalog_entry, subgrading, validate_algebra, validate_grading, GradedFrameSpec,
    StructureConstants,
};
use crate::geometry::Geometry;
use crate::jets::{builtin_models, run_suite, CoordModel, SuiteOptions};
use crate::report::{Report, Section};
use crate::riemann::{
    bg_limit_check, default_mu_grid, lc_equivalence, lc_koszul, lc_sanity, rescaled_ricci, ricci_comparison,
    riemann_myers_search, rm_comparison_residuals, CompVariant,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_UNMET: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn perr<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, msg: msg.into() })
}

/// Cursor over one line, tracking the 1-based column.
struct Cursor<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
    /// Column of `s[0]` in the original line.
    base: usize,
}

impl<'a> Cursor<'a> {
    fn col(&self) -> usize {
        self.base + self.s[..self.pos].chars().count()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        perr(self.line, self.col(), msg)
    }

    fn ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn eat_str(&mut self, t: &str) -> Result<(), ParseError> {
        self.ws();
        if self.s[self.pos..].starts_with(t) {
            self.pos += t.len();
            Ok(())
        } else {
            self.err(format!("expected `{t}`"))
        }
    }

    fn uint(&mut self) -> Result<usize, ParseError> {
        self.ws();
        let start = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        self.s[start..self.pos].parse().or_else(|_| {
            self.pos = start;
            self.err("integer out of range")
        })
    }

    /// Unsigned rational `p` or `p/q`.
    fn rational(&mut self) -> Result<Scalar, ParseError> {
        self.ws();
        let start = self.pos;
        let p = self.uint()?;
        let mut q = 1usize;
        if self.peek_raw() == Some('/') {
            self.pos += 1;
            q = self.uint()?;
            if q == 0 {
                self.pos = start;
                return self.err("zero denominator");
            }
        }
        let text = if q == 1 { p.to_string() } else { format!("{p}/{q}") };
        parse_scalar(&text).map_or_else(|| self.err("malformed rational"), Ok)
    }

    fn end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected `{c}`")),
        }
    }
}

/// `(coefficient, 1-based index, column)` of one bracket term.
type Term = (Scalar, usize, usize);

/// Parses an input document into a frame spec. Grading axioms and the
/// Jacobi identity are checked later, by the commands.
pub fn parse_input(text: &str) -> Result<GradedFrameSpec, ParseError> {
    let mut name: Option<String> = None;
    let mut dim: Option<(usize, usize)> = None;
    let mut grades: Option<(Vec<usize>, usize)> = None;
    let mut labels: Option<(Vec<String>, usize)> = None;
    // (line, column of a, a, [(0, b, column of b), (coeff, k, column of k)...])
    let mut brackets: Vec<(usize, usize, usize, Vec<Term>)> = Vec::new();
    let mut last_line = 0;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let body = content.trim_start();
        let mut cur = Cursor { s: body, pos: 0, line, base: indent + 1 };
        if body.starts_with('(') {
            cur.eat('(')?;
            let a = (cur.col(), cur.uint()?);
            cur.eat(',')?;
            let b = (cur.col(), cur.uint()?);
            cur.eat(')')?;
            cur.eat_str("->")?;
            let mut terms = Vec::new();
            let mut first = true;
            loop {
                let mut sign = Scalar::from_integer(1.into());
                match cur.peek() {
                    Some('+') if !first => cur.pos += 1,
                    Some('-') => {
                        cur.pos += 1;
                        sign = -sign;
                    }
                    None if first => return cur.err("expected a bracket expansion"),
                    None => break,
                    Some(_) if first => {}
                    Some(c) => return cur.err(format!("expected `+` or `-`, found `{c}`")),
                }
                first = false;
                cur.ws();
                let col = cur.col();
                let lead = cur.rational()?;
                let (coeff, idx, idx_col) = if matches!(cur.peek(), Some('*') | Some('·')) {
                    let c = cur.peek().expect("peeked");
                    cur.pos += c.len_utf8();
                    let ic = {
                        cur.ws();
                        cur.col()
                    };
                    (lead, cur.uint()?, ic)
                } else if lead.is_integer() && lead.is_positive() {
                    (Scalar::from_integer(1.into()), lead.to_integer().try_into().unwrap_or(0usize), col)
                } else {
                    return cur.err("expected `*` and a frame index");
                };
                terms.push((sign * coeff, idx, idx_col));
                match cur.peek() {
                    Some('+') | Some('-') | None => {}
                    Some(c) => return cur.err(format!("unexpected `{c}`")),
                }
            }
            brackets.push((line, a.0, a.1, vec![(Scalar::zero(), b.1, b.0)]));
            brackets.last_mut().expect("just pushed").3.extend(terms);
            continue;
        }
        let Some(colon) = body.find(':') else {
            return cur.err("expected `key: value` or a bracket line");
        };
        let key = body[..colon].trim();
        cur.pos = colon + 1;
        match key {
            "name" => {
                let v = body[colon + 1..].trim();
                if v.is_empty() || v.contains(char::is_whitespace) {
                    return cur.err("name must be a single nonempty word");
                }
                name = Some(v.to_string());
            }
            "dim" => {
                let col = {
                    cur.ws();
                    cur.col()
                };
                let d = cur.uint()?;
                cur.end()?;
                if d == 0 {
                    return perr(line, col, "dimension must be positive");
                }
                dim = Some((d, line));
            }
            "grades" => {
                cur.eat('[')?;
                let mut v = vec![cur.uint()?];
                while cur.peek() == Some(',') {
                    cur.pos += 1;
                    v.push(cur.uint()?);
                }
                cur.eat(']')?;
                cur.end()?;
                grades = Some((v, line));
            }
            "labels" => {
                let mut v = Vec::new();
                let mut seen = HashSet::new();
                loop {
                    cur.ws();
                    let start = cur.pos;
                    let col = cur.col();
                    while matches!(cur.peek_raw(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                        cur.pos += 1;
                    }
                    if start == cur.pos {
                        break;
                    }
                    let l = body[start..cur.pos].to_string();
                    if !seen.insert(l.clone()) {
                        return perr(line, col, format!("duplicate label `{l}`"));
                    }
                    v.push(l);
                }
                cur.end()?;
                labels = Some((v, line));
            }
            _ => return perr(line, indent + 1, format!("unknown key `{key}`")),
        }
    }
    let eof = last_line + 1;
    let Some((n, _)) = dim else { return perr(eof, 1, "missing `dim`") };
    let Some((ranks, grades_line)) = grades else { return perr(eof, 1, "missing `grades`") };
    if ranks.len() < 2 || ranks.contains(&0) || ranks.iter().sum::<usize>() != n {
        return perr(grades_line, 1, format!("grades must be at least two positive ranks summing to {n}"));
    }
    let labels = match labels {
        Some((l, line)) if l.len() != n => return perr(line, 1, format!("{} labels for dimension {n}", l.len())),
        Some((l, _)) => l,
        None => (1..=n).map(|i| format!("E{i}")).collect(),
    };
    let mut sc = StructureConstants::zero(n);
    let mut seen = HashSet::new();
    for (line, a_col, a, terms) in brackets {
        let (_, b, b_col) = terms[0].clone();
        for (idx, col) in [(a, a_col), (b, b_col)] {
            if idx == 0 || idx > n {
                return perr(line, col, format!("index {idx} out of range 1..={n}"));
            }
        }
        if a >= b {
            return perr(line, a_col, "only entries with a < b are allowed");
        }
        if !seen.insert((a, b)) {
            return perr(line, a_col, format!("duplicate bracket ({a},{b})"));
        }
        let mut out = Vec::new();
        for (c, k, col) in terms.into_iter().skip(1) {
            if k == 0 || k > n {
                return perr(line, col, format!("index {k} out of range 1..={n}"));
            }
            out.push((c, k - 1));
        }
        sc.set_bracket(a - 1, b - 1, &out);
    }
    GradedFrameSpec::new(name.unwrap_or_else(|| "input".into()), labels, sc, ranks)
        .map_err(|e| ParseError { line: grades_line, col: 1, msg: e.to_string() })
}

/// Inverse of [`parse_input`] up to formatting.
pub fn render_input(f: &GradedFrameSpec) -> String {
    let n = f.dim();
    let ranks: Vec<String> = f.ranks().iter().map(ToString::to_string).collect();
    let mut out = format!("name: {}\ndim: {n}\ngrades: [{}]\nlabels: {}\n", f.name, ranks.join(", "), f.labels.join(" "));
    for a in 0..n {
        for b in (a + 1)..n {
            let terms: Vec<(usize, &Scalar)> =
                (0..n).map(|k| (k, f.c(a, b, k))).filter(|(_, c)| !c.is_zero()).collect();
            if terms.is_empty() {
                continue;
            }
            let mut line = format!("({},{}) ->", a + 1, b + 1);
            for (i, (k, c)) in terms.iter().enumerate() {
                let sign = match (i, c.is_negative()) {
                    (0, false) => "",
                    (0, true) => "-",
                    (_, false) => "+ ",
                    (_, true) => "- ",
                };
                line.push_str(&format!(" {sign}{}*{}", fmt_scalar(&c.abs()), k + 1));
            }
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Analyze,
    Check,
    Frontier,
    Riemann,
    Bochner,
    Catalog,
}

/// Which grading of the input frame to analyze.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradingChoice {
    Full,
    Basic,
    /// Keep the first `k` blocks and merge the rest.
    Sub(usize),
}

impl std::str::FromStr for GradingChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "full" => Ok(GradingChoice::Full),
            "basic" => Ok(GradingChoice::Basic),
            k => k.parse().map(GradingChoice::Sub).map_err(|_| format!("expected basic, full or an integer, got `{k}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub tol: Scalar,
    pub mu_grid: Vec<Scalar>,
    pub grading: GradingChoice,
}

impl Default for Options {
    fn default() -> Self {
        Options { tol: frac(1, 1000), mu_grid: default_mu_grid(), grading: GradingChoice::Full }
    }
}

/// Positive rational tolerance `p/q`.
pub fn parse_tol(s: &str) -> Result<Scalar, String> {
    match parse_scalar(s.trim()) {
        Some(t) if t.is_positive() => Ok(t),
        _ => Err(format!("`{s}` is not a positive rational p/q")),
    }
}

pub struct Outcome {
    pub report: Report,
    pub exit: i32,
}

impl fmt::Debug for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Outcome(exit {})", self.exit)
    }
}

/// Failed unconditional identities dominate; conditional identities whose
/// hypotheses fail are reported but only the command's own requirements
/// decide exit 3.
fn exit_for(r: &Report) -> i32 {
    if r.statuses().contains(&Status::Fail) {
        EXIT_VIOLATION
    } else if !r.unmet_requirements().is_empty() {
        EXIT_UNMET
    } else {
        EXIT_OK
    }
}

fn invalid(title: &str, msg: impl Into<String>) -> Outcome {
    let mut r = Report::new(title);
    let mut s = Section::new();
    s.text("error", msg);
    r.section("validation", s);
    Outcome { report: r, exit: EXIT_INVALID }
}

/// Resolves a target: a readable file is parsed as an input document,
/// otherwise the name is looked up in the built-in catalog.
pub fn load_target(target: &str) -> Result<GradedFrameSpec, String> {
    let path = std::path::Path::new(target);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{target}: {e}"))?;
        return parse_input(&text).map_err(|e| format!("{target}: {e}"));
    }
    catalog_entry(target).ok_or_else(|| format!("`{target}` is neither a readable file nor a catalog entry"))
}

fn apply_grading(f: &GradedFrameSpec, g: GradingChoice) -> Result<GradedFrameSpec, String> {
    match g {
        GradingChoice::Full => Ok(f.clone()),
        GradingChoice::Basic => Ok(f.basic()),
        GradingChoice::Sub(k) => subgrading(f, k).map_err(|e| e.to_string()),
    }
}

/// Runs `cmd` on `spec` (ignored by `catalog`).
pub fn run(cmd: Command, spec: Option<&GradedFrameSpec>, opts: &Options) -> Outcome {
    if cmd == Command::Catalog {
        return catalog_report(spec);
    }
    let Some(spec) = spec else { return invalid("input", "a frame (catalog name or file) is required") };
    let spec = match apply_grading(spec, opts.grading) {
        Ok(s) => s,
        Err(e) => return invalid(&spec.name, e),
    };
    let (validation, valid) = validation_section(&spec);
    let mut r = Report::new(spec.name.clone());
    r.section("validation", validation);
    if !valid {
        return Outcome { report: r, exit: EXIT_INVALID };
    }
    let geo = match Geometry::new(&spec) {
        Ok(g) => g,
        Err(e) => {
            let mut s = Section::new();
            s.text("error", e.to_string());
            r.section("connection", s);
            return Outcome { report: r, exit: EXIT_INVALID };
        }
    };
    let basic = if spec.steps() == 1 { geo.clone() } else { Geometry::new(&spec.basic()).expect("basic grading of a valid frame") };
    match cmd {
        Command::Analyze => {
            r.section("normality", normality_section(&geo));
            r.section("connection", connection_section(&geo));
            r.section("torsion", torsion_section(&geo));
            r.section("curvature", curvature_section(&geo));
            let (certs, unmet) = certificates_section(&basic, opts);
            r.section("certificates", certs);
            if let Some(why) = unmet {
                r.require_unmet(why);
            }
            r.section("riemann comparison", riemann_section(&basic, opts, false).0);
            r.section("jet checks", jet_section(&spec, opts));
        }
        Command::Check => {
            r.section("connection", connection_section(&geo));
            r.section("curvature", curvature_section(&geo));
            r.section("riemann comparison", riemann_section(&basic, opts, true).0);
        }
        Command::Frontier => r.section("frontier", frontier_section(&basic, opts)),
        Command::Riemann => {
            let (sec, unmet) = riemann_section(&basic, opts, false);
            r.section("riemann comparison", sec);
            if let Some(why) = unmet {
                r.require_unmet(why);
            }
        }
        Command::Bochner => {
            if matching_model(&spec).is_none() {
                let mut s = Section::new();
                s.text("error", "no built-in coordinate model realizes this frame");
                r.section("jet checks", s);
                return Outcome { report: r, exit: EXIT_INVALID };
            }
            r.section("jet checks", jet_section(&spec, opts));
        }
        Command::Catalog => unreachable!("handled above"),
    }
    let exit = exit_for(&r);
    Outcome { report: r, exit }
}

fn catalog_report(spec: Option<&GradedFrameSpec>) -> Outcome {
    let mut r = Report::new("catalog");
    let mut s = Section::new();
    match spec {
        Some(f) => {
            s.text("document", render_input(f));
        }
        None => {
            for f in builtin_catalog() {
                let mut e = Section::new();
                let ranks: Vec<String> = f.ranks().iter().map(ToString::to_string).collect();
                e.text("dim", f.dim().to_string()).text("grades", ranks.join(",")).text("labels", f.labels.join(" "));
                s.child(&f.name, e);
            }
        }
    }
    r.section("catalog", s);
    Outcome { report: r, exit: EXIT_OK }
}

fn join_flags(v: &[bool]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn fmt_vec(v: &[Scalar], labels: &[String]) -> String {
    let mut out = String::new();
    for (k, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let mag = c.abs();
        let coef = if mag == Scalar::from_integer(1.into()) { String::new() } else { format!("{}*", fmt_scalar(&mag)) };
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            out = format!("{}{coef}{}", if c.is_negative() { "-" } else { "" }, labels[k]);
        } else {
            out.push_str(&format!(" {sign} {coef}{}", labels[k]));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn fmt_form(m: &SymForm) -> String {
    let rows: Vec<String> =
        m.rows().iter().map(|r| r.iter().map(fmt_scalar).collect::<Vec<_>>().join(" ")).collect();
    format!("[{}]", rows.join("; "))
}

fn validation_section(f: &GradedFrameSpec) -> (Section, bool) {
    let mut s = Section::new();
    let ranks: Vec<String> = f.ranks().iter().map(ToString::to_string).collect();
    s.text("dim", f.dim().to_string()).text("grades", ranks.join(",")).text("labels", f.labels.join(" "));
    let alg = validate_algebra(f.sc());
    s.flag("antisymmetric", alg.antisymmetry_violation.is_none());
    s.flag("jacobi", alg.jacobi_violation.is_none());
    if let Some((a, b, c, k, v)) = &alg.jacobi_violation {
        let l = &f.labels;
        s.text("jacobi_witness", format!("({},{},{}) component {} = {}", l[*a], l[*b], l[*c], l[*k], fmt_scalar(v)));
    }
    if !alg.passes() {
        return (s, false);
    }
    let g = validate_grading(f);
    s.text("grading_valid", join_flags(&g.grading_valid));
    s.text("j_regular", join_flags(&g.j_regular));
    s.flag("equiregular", g.equiregular).flag("bracket_generating", g.bracket_generating);
    s.flag("vm_integrable", g.vm_integrable);
    let ok = g.all_valid();
    (s, ok)
}

fn normality_section(geo: &Geometry) -> Section {
    let nf = &geo.normality;
    let mut s = Section::new();
    s.text("j_normal", join_flags(&nf.j_normal));
    s.flag("vm_normal", nf.vm_normal()).flag("strictly_normal", nf.strictly_normal);
    s.text("rigidity_form", fmt_vec(&nf.rigidity_form, &geo.spec.labels));
    s.flag("vertically_rigid_for_this_metric", nf.vertically_rigid_for_this_metric);
    s
}

fn connection_section(geo: &Geometry) -> Section {
    let f = &geo.spec;
    let l = &f.labels;
    let n = f.dim();
    let mut s = Section::new();
    let mut coeffs = Section::new();
    for a in 0..n {
        for b in 0..n {
            let v = geo.conn.gamma.fiber(&[a, b]);
            if v.iter().any(|x| !x.is_zero()) {
                coeffs.text(&format!("nabla_{}_{}", l[a], l[b]), fmt_vec(v, l));
            }
        }
    }
    s.child("coefficients", coeffs);
    let ax = verify_axioms(f, &geo.conn, &geo.tor);
    for c in ax.checks() {
        s.check(c, l);
    }
    if let Ok(c) = grading_independence_check(f) {
        s.check(&c, l);
    }
    s
}

fn torsion_section(geo: &Geometry) -> Section {
    let f = &geo.spec;
    let l = &f.labels;
    let mut s = Section::new();
    for a in 0..f.dim() {
        for b in (a + 1)..f.dim() {
            let v = geo.tor.tor.fiber(&[a, b]);
            if v.iter().any(|x| !x.is_zero()) {
                s.text(&format!("Tor_{}_{}", l[a], l[b]), fmt_vec(v, l));
            }
        }
    }
    s
}

fn curvature_section(geo: &Geometry) -> Section {
    let f = &geo.spec;
    let l = &f.labels;
    let n = f.dim();
    let mut s = Section::new();
    let fl = flatness_flags(f, &geo.curv);
    s.flag("horizontally_flat", fl.horizontally_flat).flag("vertically_flat", fl.vertically_flat).flag("flat", fl.flat);
    let mut comps = Section::new();
    for (idx, v) in geo.curv.r.nonzero_entries() {
        if idx[0] < idx[1] && idx[2] < idx[3] {
            comps.scalar(&format!("Rm_{}_{}_{}_{}", l[idx[0]], l[idx[1]], l[idx[2]], l[idx[3]]), v);
        }
    }
    s.child("components", comps);
    let mut ric = Section::new();
    for a in 0..n {
        for b in 0..n {
            let v = &geo.ricci.rc[[a, b]];
            if !v.is_zero() {
                ric.scalar(&format!("Rc_{}_{}", l[a], l[b]), v);
            }
        }
    }
    ric.scalar("horizontal_scalar", &geo.ricci.s0);
    s.child("ricci", ric);
    let mut checks = Section::new();
    for c in symmetry_residuals(f, &geo.curv).checks() {
        checks.check(c, l);
    }
    for c in algebraic_bianchi_residual(f, &geo.curv, &geo.td, &geo.normality).checks() {
        checks.check(c, l);
    }
    let ps = pair_symmetry(f, &geo.curv, &geo.normality);
    for c in [&ps.reduction, &ps.horizontal, &ps.three_horizontal] {
        checks.check(c, l);
    }
    let db = differential_bianchi_residual(f, &geo.conn, &geo.tor, &geo.curv, &geo.normality);
    checks.check(&db.first, l).check(&db.second, l);
    for c in ricci_checks(f, &geo.conn, &geo.ricci, &geo.normality).checks() {
        checks.check(c, l);
    }
    s.child("identities", checks);
    s
}

fn certificate_node(c: &Certificate) -> Section {
    let mut s = Section::new();
    s.text("verdict", c.verdict.as_str());
    let mut h = Section::new();
    for (k, v) in &c.hypotheses {
        h.flag(k, *v);
    }
    s.child("hypotheses", h);
    let mut k = Section::new();
    for (name, v) in &c.constants {
        k.scalar(name, v);
    }
    s.child("constants", k);
    let mut n = Section::new();
    for (i, note) in c.notes.iter().enumerate() {
        n.text(&i.to_string(), note.clone());
    }
    s.child("notes", n);
    s
}

/// Also returns why the compactness certificate's hypotheses fail, if they do.
fn certificates_section(basic: &Geometry, opts: &Options) -> (Section, Option<String>) {
    let mut s = Section::new();
    s.text("grading", "basic");
    s.text("bg_tensor", fmt_form(&bg_form(basic).form));
    let kb = torsion_bounds(basic, 0, 0, 1, &opts.tol);
    let mut k = Section::new();
    k.scalar("lower", &kb.lower).scalar("upper", &kb.upper).flag("finite", kb.finite);
    s.child("kappa_00_1", k);
    let unmet = match myers_certificate_from(basic, &opts.tol) {
        Ok(c) => {
            let unmet = (!c.hypotheses_pass()).then(|| "compactness certificate hypotheses fail".to_string());
            s.child("myers_bm2", certificate_node(&c));
            unmet
        }
        Err(e) => {
            s.text("myers_bm2", e.to_string());
            Some(e.to_string())
        }
    };
    match bad_bonnet(basic, &opts.tol) {
        Ok(c) => s.child("bad_bonnet", certificate_node(&c)),
        Err(e) => s.text("bad_bonnet", format!("not applicable: {e}")),
    };
    (s, unmet)
}

/// Levi-Civita comparison on the basic grading. `identities_only` skips
/// the exploratory Ricci table. Also returns why the comparison path is
/// unavailable, if it is.
fn riemann_section(basic: &Geometry, opts: &Options, identities_only: bool) -> (Section, Option<String>) {
    let mut unmet = None;
    let f = &basic.spec;
    let l = &f.labels;
    let mut s = Section::new();
    let lc = lc_koszul(f);
    let (tf, mc) = lc_sanity(f, &lc);
    s.check(&tf, l).check(&mc, l);
    let eq = lc_equivalence(basic, CompVariant::Corrected);
    s.check(&Check::unconditional("Levi-Civita from canonical connection", eq), l);
    if !identities_only {
        let ricci = rescaled_ricci(f);
        let mut t = Section::new();
        for a in 0..f.dim() {
            for b in a..f.dim() {
                if !ricci.m[a][b].is_zero() {
                    t.laurent(&format!("Rc_{}_{}", l[a], l[b]), &ricci.m[a][b]);
                }
            }
        }
        s.child("rescaled_ricci", t);
    }
    let rm = rm_comparison_residuals(basic, CompVariant::Corrected);
    for c in rm.checks() {
        s.check(c, l);
    }
    match ricci_comparison(basic, CompVariant::Corrected) {
        Ok(rc) => {
            for c in rc.checks() {
                s.check(c, l);
            }
        }
        Err(e) => {
            let mut u = Section::new();
            u.text("status", Status::Unmet.as_str()).text("note", e.to_string()).status(Status::Unmet);
            s.child("ricci expansion", u);
            unmet = Some(e.to_string());
        }
    }
    match bg_limit_check(basic, 8) {
        Ok(c) => {
            s.check(&c, l);
        }
        Err(e) => {
            let mut u = Section::new();
            u.text("status", Status::Unmet.as_str()).text("note", e.to_string()).status(Status::Unmet);
            s.child("BG tensor as limit of rescaled Ricci", u);
        }
    }
    if !identities_only {
        if let Ok(c) = riemann_myers_search(basic, &opts.mu_grid, &opts.tol) {
            s.child("riemann_myers", certificate_node(&c));
        }
    }
    (s, unmet)
}

fn frontier_section(basic: &Geometry, opts: &Options) -> Section {
    let f = &basic.spec;
    let bg = bg_form(basic);
    let mut s = Section::new();
    s.text("grading", "basic").text("bg_tensor", fmt_form(&bg.form));
    let grid = default_rho1_grid(f, &bg, &opts.tol);
    for (i, p) in cd_frontier(f, &bg, &grid, &opts.tol).iter().enumerate() {
        let mut row = Section::new();
        row.scalar("rho1", &p.rho1);
        match &p.rho2 {
            Some((lo, hi)) => {
                row.scalar("rho2", lo).scalar("rho2_upper", hi);
            }
            None => {
                row.text("rho2", "infeasible");
            }
        }
        s.child(&format!("row{i}"), row);
    }
    s
}

/// The built-in coordinate model realizing `f` (same structure constants
/// and labels), under the grading of `f`.
pub fn matching_model(f: &GradedFrameSpec) -> Option<CoordModel> {
    builtin_models().into_iter().find(|m| {
        let g = m.spec();
        g.sc() == f.sc() && g.labels == f.labels && (g.ranks() == f.ranks() || m.basic.spec.ranks() == f.ranks())
    })
}

fn jet_section(f: &GradedFrameSpec, opts: &Options) -> Section {
    let mut s = Section::new();
    let Some(m) = matching_model(f) else { return s };
    s.text("model", m.name.clone()).text("mode", m.mode.as_str()).text("coordinates", m.coords.join(" "));
    let sopts = SuiteOptions { tol: opts.tol.clone(), ..SuiteOptions::default() };
    match run_suite(&m, &sopts) {
        Ok(checks) => {
            for c in checks {
                s.check(&c, &f.labels);
            }
        }
        Err(e) => {
            s.text("error", e.to_string()).status(Status::Fail);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_document() {
        let f = parse_input("dim: 3\ngrades: [2, 1]\n(1,2) -> 1*3\n").unwrap();
        assert_eq!(f.c(0, 1, 2), &Scalar::from_integer(1.into()));
        assert_eq!(f.c(1, 0, 2), &Scalar::from_integer((-1).into()));
        assert_eq!(parse_input(&render_input(&f)).unwrap(), f);
    }

    #[test]
    fn malformed_coefficient_has_position() {
        let e = parse_input("dim: 3\ngrades: [2, 1]\n(1,2) -> 1.5x*3\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 11));
    }
}
