//! The full pointwise suite on one coordinate model: structure
//! coefficients, Bochner-type identities, Γ-calculus and divergence.

use num_traits::{Signed, Zero};

use super::calculus::{
    bochner_residual, cd_pointwise_check, com_check, divergence_check, hlap, hlap_finite_difference,
    structure_residual, BochnerVariant, CdConstants,
};
use super::expr::{parse_expr, Expr};
use super::model::{CoordModel, Mode};
use super::{JetError, Num};
use crate::analysis::myers_certificate_from;
use crate::checks::{Check, Residual, Status};
use crate::exactnum::{frac, from_f64_dyadic, int, Scalar};

/// Float-mode acceptance threshold for identities that vanish exactly.
pub const FLOAT_TOL: f64 = 1e-9;
/// Agreement required between jet and finite-difference Laplacians.
pub const FD_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub points: usize,
    pub seed: u64,
    pub tol: Scalar,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { points: 10, seed: 7, tol: frac(1, 1000) }
    }
}

/// Polynomial test functions, written over the model's coordinates: `a`,
/// `b` are the first two, `m` the second to last and `v` the last.
const TEMPLATES: [&str; 6] = [
    "a*b + v",
    "a^2 + b^2",
    "a^3 - b*v",
    "v^2 + a*b^2",
    "a*m + b^2*v - a^2*b",
    "(a + 2*b - v)^3/6 + m",
];

pub fn test_functions(m: &CoordModel) -> Vec<Expr> {
    let n = m.dim();
    let subst = |t: &str| -> String {
        t.chars()
            .map(|c| match c {
                'a' => m.coords[0].clone(),
                'b' => m.coords[1].clone(),
                'm' => m.coords[n - 2].clone(),
                'v' => m.coords[n - 1].clone(),
                other => other.to_string(),
            })
            .collect()
    };
    TEMPLATES.iter().map(|t| parse_expr(&subst(t), &m.coords).expect("test function template")).collect()
}

/// Horizontal vector fields `Σ φ_i E_i` for the divergence check.
fn divergence_fields(m: &CoordModel) -> Vec<Vec<Expr>> {
    let dh = m.spec().dim_h();
    let c = &m.coords;
    let mk = |first: &str| -> Vec<Expr> {
        let mut v: Vec<Expr> = vec![Expr::from(0); dh];
        v[0] = parse_expr(first, c).expect("field component");
        v
    };
    let trig = if m.mode == Mode::Float { format!("sin({})", c[0]) } else { format!("{}^2", c[0]) };
    let mut all: Vec<Expr> = vec![Expr::from(1); dh];
    all[dh - 1] = parse_expr(&format!("{}*{}", c[0], c[c.len() - 1]), c).expect("field component");
    vec![mk(&c[0]), mk(&trig), mk(&format!("{}*{}", c[1], c[c.len() - 1])), all]
}

/// Accumulates a worst-case residual in either numeric mode.
#[derive(Default)]
struct Worst {
    exact: Scalar,
    float: f64,
    unmet: Option<String>,
}

impl Worst {
    fn add<T: Num>(&mut self, r: Result<T, JetError>) -> Result<(), JetError> {
        match r {
            Ok(v) => {
                if let Some(s) = v.exact() {
                    let a = s.abs();
                    if a > self.exact {
                        self.exact = a;
                    }
                } else {
                    self.float = self.float.max(v.as_f64().abs());
                }
                Ok(())
            }
            Err(JetError::HypothesisNotMet(why)) => {
                self.unmet = Some(why);
                Ok(())
            }
            Err(e) => Err(e),
        }
    }

    fn check(self, name: &str, mode: Mode, tol: f64) -> Check {
        let (holds, max_abs) = match mode {
            Mode::Exact => (self.exact.is_zero(), self.exact),
            Mode::Float => (self.float <= tol, from_f64_dyadic(self.float, 60)),
        };
        let hyp = self.unmet.is_none();
        let mut c = Check {
            name: name.to_string(),
            status: Status::conditional(hyp, holds),
            residual: Residual { max_abs, witness: None },
            note: None,
        };
        if let Some(why) = self.unmet {
            c.note = Some(why);
        } else if mode == Mode::Float {
            c.note = Some(format!("float mode, tolerance {tol:e}"));
        }
        c
    }
}

/// Runs every pointwise identity on `m`. Exact models use rational
/// points and require exact zeros; trigonometric models use `f64`.
pub fn run_suite(m: &CoordModel, opts: &SuiteOptions) -> Result<Vec<Check>, JetError> {
    match m.mode {
        Mode::Exact => run_typed::<Scalar>(m, opts),
        Mode::Float => run_typed::<f64>(m, opts),
    }
}

fn run_typed<T: Num>(m: &CoordModel, opts: &SuiteOptions) -> Result<Vec<Check>, JetError> {
    let pts: Vec<Vec<T>> = m.points(opts.points, opts.seed);
    let funcs = test_functions(m);
    let mut out = Vec::new();

    let mut w = Worst::default();
    for p in &pts {
        w.add(structure_residual(m, p))?;
    }
    out.push(w.check("frame structure coefficients", m.mode, FLOAT_TOL));

    let steps = m.spec().steps();
    let mut variants: Vec<BochnerVariant> = (0..=steps).map(BochnerVariant::General).collect();
    variants.extend((0..=steps).map(BochnerVariant::HessianTrace));
    variants.extend([BochnerVariant::StrictHorizontal, BochnerVariant::StrictVertical]);
    for v in variants {
        let mut w = Worst::default();
        for f in &funcs {
            for p in &pts {
                w.add(bochner_residual(m, f, p, v))?;
            }
        }
        out.push(w.check(&v.name(), m.mode, FLOAT_TOL));
    }

    let mut w = Worst::default();
    for f in &funcs {
        for p in &pts {
            w.add(com_check(m, f, p))?;
        }
    }
    if !m.basic.normality.strictly_normal {
        w.unmet = Some("requires strict normality for the basic grading".into());
    }
    out.push(w.check("gamma commutation", m.mode, FLOAT_TOL));

    let mut w = Worst::default();
    for x in divergence_fields(m) {
        for p in &pts {
            w.add(divergence_check(m, &x, p))?;
        }
    }
    out.push(w.check("divergence equals horizontal trace", m.mode, FLOAT_TOL));

    // Independent finite-difference oracle, always in f64.
    let mut w = Worst::default();
    let fpts: Vec<Vec<f64>> = m.points(opts.points.min(5), opts.seed + 1);
    for f in funcs.iter().chain(coordinate_functions(m).iter()) {
        for p in &fpts {
            let jet = hlap(m, f, p)?;
            w.float = w.float.max((jet - hlap_finite_difference(m, f, p, 1e-4)).abs());
        }
    }
    out.push(w.check("horizontal Laplacian vs finite differences", Mode::Float, FD_TOL));

    out.push(cd_spot_check(m, &funcs, &pts, opts)?);
    Ok(out)
}

fn coordinate_functions(m: &CoordModel) -> Vec<Expr> {
    (0..m.dim()).map(Expr::Var).collect()
}

/// Curvature-dimension inequality at sample points with the certified
/// constants; only guaranteed where the certificate's hypotheses hold.
fn cd_spot_check<T: Num>(
    m: &CoordModel,
    funcs: &[Expr],
    pts: &[Vec<T>],
    opts: &SuiteOptions,
) -> Result<Check, JetError> {
    let name = "curvature-dimension inequality";
    let cert = match myers_certificate_from(&m.basic, &opts.tol) {
        Ok(c) => c,
        Err(e) => {
            return Ok(Check {
                name: name.into(),
                status: Status::Unmet,
                residual: Residual::zero(),
                note: Some(e.to_string()),
            })
        }
    };
    let consts = CdConstants {
        rho1: cert.constant("rho1").cloned().unwrap_or_default(),
        rho2: cert.constant("rho2").cloned().unwrap_or_default(),
        kappa: cert.constant("kappa").cloned().unwrap_or_default(),
    };
    let hyp = cert.hypotheses_pass();
    // Worst violation: the most negative slack, as a magnitude.
    let mut worst_exact = Scalar::zero();
    let mut worst_float = 0.0f64;
    for nu in [frac(1, 2), int(1), int(2)] {
        for f in funcs {
            for p in pts {
                let slack = cd_pointwise_check(m, f, &nu, &consts, p)?;
                match slack.exact() {
                    Some(s) if s.is_negative() && -&s > worst_exact => worst_exact = -s,
                    Some(_) => {}
                    None => worst_float = worst_float.max(-slack.as_f64()),
                }
            }
        }
    }
    let (holds, max_abs) = match m.mode {
        Mode::Exact => (worst_exact.is_zero(), worst_exact),
        Mode::Float => (worst_float <= FLOAT_TOL, from_f64_dyadic(worst_float.max(0.0), 60)),
    };
    let status = Status::conditional(hyp, holds);
    let note = format!(
        "rho1 = {}, rho2 = {}, kappa = {}; residual is the largest violation",
        crate::exactnum::fmt_scalar(&consts.rho1),
        crate::exactnum::fmt_scalar(&consts.rho2),
        crate::exactnum::fmt_scalar(&consts.kappa)
    );
    Ok(Check { name: name.into(), status, residual: Residual { max_abs, witness: None }, note: Some(note) })
}
