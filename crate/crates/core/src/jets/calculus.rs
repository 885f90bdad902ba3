//! Pointwise differential identities on coordinate models.
//!
//! Vector fields are carried as frame components `U = Σ U^a E_a` whose
//! components are jets; the connection acts through its constant
//! coefficients, `(∇_{E_b} U)^c = E_b(U^c) + Σ_a U^a Γ_{ba}^c`.

use std::sync::Arc;

use num_traits::Zero;

use super::expr::Expr;
use super::model::CoordModel;
use super::{Jet, JetError, JetSpace, Num};
use crate::analysis::bg_form;
use crate::exactnum::Scalar;
use crate::geometry::Geometry;
use crate::tensor::Tensor;

/// Frame tensors of one geometry converted into the numeric type.
struct Consts<T: Num> {
    gamma: Tensor<T>,
    c: Tensor<T>,
    tor: Tensor<T>,
    nabla_tor: Tensor<T>,
    tor2: Tensor<T>,
    rc: Tensor<T>,
    grade: Vec<usize>,
    h: Vec<usize>,
}

impl<T: Num> Consts<T> {
    fn new(geo: &Geometry) -> Self {
        let cv = |s: &Scalar| T::from_scalar(s);
        let f = &geo.spec;
        Consts {
            gamma: geo.conn.gamma.map(cv),
            c: f.sc().tensor().map(cv),
            tor: geo.tor.tor.map(cv),
            nabla_tor: geo.td.nabla_tor.map(cv),
            tor2: geo.td.tor2.map(cv),
            rc: geo.ricci.rc.map(cv),
            grade: (0..f.dim()).map(|a| f.grade(a)).collect(),
            h: f.horizontal(),
        }
    }
}

/// Field jets of a model at one point.
struct Ctx<'a, T: Num> {
    space: Arc<JetSpace>,
    point: &'a [T],
    /// `fields[a][m]`, with `None` for identically zero coefficients.
    fields: Vec<Vec<Option<Jet<T>>>>,
    k: Consts<T>,
}

type Field<T> = Vec<Jet<T>>;

impl<'a, T: Num> Ctx<'a, T> {
    fn new(m: &CoordModel, geo: &Geometry, point: &'a [T]) -> Result<Self, JetError> {
        let space = JetSpace::new(m.dim());
        let mut fields = Vec::with_capacity(m.fields.len());
        for row in &m.fields {
            let mut r = Vec::with_capacity(row.len());
            for e in row {
                r.push(if matches!(e, Expr::Const(c) if c.is_zero()) { None } else { Some(e.jet(&space, point)?) });
            }
            fields.push(r);
        }
        Ok(Ctx { space, point, fields, k: Consts::new(geo) })
    }

    fn n(&self) -> usize {
        self.fields.len()
    }

    fn func(&self, e: &Expr) -> Result<Jet<T>, JetError> {
        e.jet(&self.space, self.point)
    }

    fn zero(&self) -> Jet<T> {
        Jet::constant(&self.space, T::zero())
    }

    /// `E_a g`.
    fn apply(&self, a: usize, g: &Jet<T>) -> Result<Jet<T>, JetError> {
        let mut acc: Option<Jet<T>> = None;
        for (m, coef) in self.fields[a].iter().enumerate() {
            if let Some(coef) = coef {
                let term = coef.clone() * g.deriv(m)?;
                acc = Some(match acc {
                    Some(s) => s + term,
                    None => term,
                });
            }
        }
        match acc {
            Some(s) => Ok(s),
            None => Ok(self.zero().truncate_to(g.order().saturating_sub(1))),
        }
    }

    /// Full frame gradient `(E_a g)_a`.
    fn grad(&self, g: &Jet<T>) -> Result<Field<T>, JetError> {
        (0..self.n()).map(|a| self.apply(a, g)).collect()
    }

    /// `∇_{E_b} U`.
    fn cov(&self, b: usize, u: &Field<T>) -> Result<Field<T>, JetError> {
        let n = self.n();
        let mut out = Vec::with_capacity(n);
        for c in 0..n {
            let mut acc = self.apply(b, &u[c])?;
            for (a, ua) in u.iter().enumerate() {
                let g = &self.k.gamma[[b, a, c]];
                if !g.is_zero() {
                    acc = acc + ua.scale(g);
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// `Δ₀ g = Σ_i (E_i E_i g − (∇_{E_i} E_i) g)`.
    fn lap(&self, g: &Jet<T>) -> Result<Jet<T>, JetError> {
        let dg = self.grad(g)?;
        let mut acc: Option<Jet<T>> = None;
        for &i in &self.k.h {
            let mut term = self.apply(i, &dg[i])?;
            for (k, dk) in dg.iter().enumerate() {
                let g = &self.k.gamma[[i, i, k]];
                if !g.is_zero() {
                    term = term - dk.scale(g);
                }
            }
            acc = Some(match acc {
                Some(s) => s + term,
                None => term,
            });
        }
        Ok(acc.unwrap_or_else(|| self.zero()))
    }

    fn norm2(&self, u: &Field<T>) -> Jet<T> {
        u.iter().fold(self.zero(), |acc, x| acc + x.clone() * x.clone())
    }

    fn project(&self, u: &Field<T>, grade: usize) -> Field<T> {
        u.iter().enumerate().map(|(a, x)| if self.k.grade[a] == grade { x.clone() } else { self.zero() }).collect()
    }

    /// `∇²g(E_i, E_j) = E_i E_j g − (∇_{E_i} E_j) g` over horizontal `i, j`.
    fn hessian(&self, g: &Jet<T>) -> Result<Vec<Vec<T>>, JetError> {
        let dg = self.grad(g)?;
        let mut out = Vec::new();
        for &i in &self.k.h {
            let mut row = Vec::new();
            for &j in &self.k.h {
                let mut v = self.apply(i, &dg[j])?.value();
                for (k, dk) in dg.iter().enumerate() {
                    v = v - self.k.gamma[[i, j, k]].clone() * dk.value();
                }
                row.push(v);
            }
            out.push(row);
        }
        Ok(out)
    }
}

impl<T: Num> Jet<T> {
    fn truncate_to(mut self, order: u8) -> Self {
        self.order = self.order.min(order);
        self.truncated()
    }
}

fn sum<T: Num>(it: impl IntoIterator<Item = T>) -> T {
    it.into_iter().fold(T::zero(), |a, b| a + b)
}

fn dot<T: Num>(u: &[T], v: &[T]) -> T {
    sum(u.iter().zip(v).map(|(a, b)| a.clone() * b.clone()))
}

fn values<T: Num>(u: &Field<T>) -> Vec<T> {
    u.iter().map(Jet::value).collect()
}

/// Entry of largest magnitude (exactly zero only if every entry is).
fn max_mag<T: Num>(it: impl IntoIterator<Item = T>) -> T {
    let mut best = T::zero();
    for x in it {
        let (a, b) = (x.as_f64().abs(), best.as_f64().abs());
        if a > b || (best.is_zero() && !x.is_zero()) {
            best = x;
        }
    }
    best
}

fn half<T: Num>() -> T {
    T::from_scalar(&crate::exactnum::half())
}

/// `[E_a, E_b] − Σ_k c_{ab}^k E_k` in coordinates, largest entry over all
/// pairs and coordinates.
pub fn structure_residual<T: Num>(m: &CoordModel, p: &[T]) -> Result<T, JetError> {
    let cx = Ctx::new(m, &m.geo, p)?;
    let n = cx.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for q in 0..n {
                let coef = |x: usize| cx.fields[x][q].clone().unwrap_or_else(|| cx.zero());
                let mut v = cx.apply(a, &coef(b))?.value() - cx.apply(b, &coef(a))?.value();
                for k in 0..n {
                    v = v - cx.k.c[[a, b, k]].clone() * coef(k).value();
                }
                out.push(v);
            }
        }
    }
    Ok(max_mag(out))
}

/// Horizontal gradient components `(E_i f)` over horizontal `i`.
pub fn hgrad<T: Num>(m: &CoordModel, f: &Expr, p: &[T]) -> Result<Vec<T>, JetError> {
    let cx = Ctx::new(m, &m.geo, p)?;
    let g = cx.func(f)?;
    cx.k.h.iter().map(|&i| cx.apply(i, &g).map(|j| j.value())).collect()
}

/// Horizontal Hessian `∇²f(E_i, E_j)`; its symmetric part is the
/// symmetric horizontal Hessian.
pub fn hessian<T: Num>(m: &CoordModel, f: &Expr, p: &[T]) -> Result<Vec<Vec<T>>, JetError> {
    let cx = Ctx::new(m, &m.geo, p)?;
    cx.hessian(&cx.func(f)?)
}

pub fn hlap<T: Num>(m: &CoordModel, f: &Expr, p: &[T]) -> Result<T, JetError> {
    let cx = Ctx::new(m, &m.geo, p)?;
    Ok(cx.lap(&cx.func(f)?)?.value())
}

/// `Δ₀ f` by nested central differences of plain `f64` evaluations, with
/// step `h`. Independent of the jet arithmetic.
pub fn hlap_finite_difference(m: &CoordModel, f: &Expr, p: &[f64], h: f64) -> f64 {
    let n = m.dim();
    let field_at = |a: usize, x: &[f64]| -> Vec<f64> { m.fields[a].iter().map(|e| e.eval_f64(x)).collect() };
    let shifted = |x: &[f64], q: usize, s: f64| -> Vec<f64> {
        let mut y = x.to_vec();
        y[q] += s;
        y
    };
    let apply = |a: usize, g: &dyn Fn(&[f64]) -> f64, x: &[f64]| -> f64 {
        let coef = field_at(a, x);
        (0..n)
            .filter(|&q| coef[q] != 0.0)
            .map(|q| coef[q] * (g(&shifted(x, q, h)) - g(&shifted(x, q, -h))) / (2.0 * h))
            .sum()
    };
    let fv = |x: &[f64]| f.eval_f64(x);
    let mut out = 0.0;
    for i in m.geo.spec.horizontal() {
        let ei_f = |x: &[f64]| apply(i, &fv, x);
        out += apply(i, &ei_f, p);
        for k in 0..n {
            let g = crate::exactnum::to_f64(m.geo.conn.get(i, i, k));
            if g != 0.0 {
                out -= g * apply(k, &fv, p);
            }
        }
    }
    out
}

/// Which Bochner-type identity to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BochnerVariant {
    /// General formula for the closed field `F = ∇f` and its grade-`j` part,
    /// under the model's own grading.
    General(usize),
    /// `Σ_i ⟨E_i, ∇²F₀(F_j, E_i)⟩ = ⟨∇_(j) f, ∇_(j) Δ₀ f⟩`.
    HessianTrace(usize),
    /// Horizontal display of the strictly normal specialization.
    StrictHorizontal,
    /// Vertical display of the strictly normal specialization.
    StrictVertical,
}

impl BochnerVariant {
    pub fn name(self) -> String {
        match self {
            BochnerVariant::General(j) => format!("bochner_general_grade{j}"),
            BochnerVariant::HessianTrace(j) => format!("hessian_trace_grade{j}"),
            BochnerVariant::StrictHorizontal => "bochner_strict_horizontal".into(),
            BochnerVariant::StrictVertical => "bochner_strict_vertical".into(),
        }
    }
}

/// Left side minus right side of the chosen identity at `p`.
pub fn bochner_residual<T: Num>(m: &CoordModel, f: &Expr, p: &[T], variant: BochnerVariant) -> Result<T, JetError> {
    match variant {
        BochnerVariant::General(j) | BochnerVariant::HessianTrace(j) => {
            if j > m.geo.spec.steps() {
                return Err(JetError::HypothesisNotMet(format!("grade {j} does not exist in this grading")));
            }
            let cx = Ctx::new(m, &m.geo, p)?;
            general(&cx, &cx.func(f)?, j, matches!(variant, BochnerVariant::HessianTrace(_)))
        }
        BochnerVariant::StrictHorizontal | BochnerVariant::StrictVertical => {
            let b = &m.basic;
            if !(b.normality.strictly_normal && b.vm_integrable()) {
                return Err(JetError::HypothesisNotMet(
                    "requires strict normality for the basic grading and integrable VM".into(),
                ));
            }
            let cx = Ctx::new(m, b, p)?;
            let g = cx.func(f)?;
            if variant == BochnerVariant::StrictHorizontal {
                strict_horizontal(&cx, b, &g)
            } else {
                strict_vertical(&cx, &g)
            }
        }
    }
}

/// `Σ_i ⟨E_i, ∇²F₀(F_j, E_i)⟩` with `∇²G(A,B) = ∇_A∇_B G − ∇_{∇_A B} G`.
fn hessian_trace_term<T: Num>(cx: &Ctx<T>, fj: &[T], f0: &Field<T>) -> Result<T, JetError> {
    let n = cx.n();
    let mut acc = T::zero();
    for &i in &cx.k.h {
        let d0 = cx.cov(i, f0)?;
        for a in (0..n).filter(|&a| !fj[a].is_zero()) {
            acc = acc + fj[a].clone() * cx.cov(a, &d0)?[i].value();
            for k in 0..n {
                let g = &cx.k.gamma[[a, i, k]];
                if !g.is_zero() {
                    acc = acc - fj[a].clone() * g.clone() * cx.cov(k, f0)?[i].value();
                }
            }
        }
    }
    Ok(acc)
}

fn general<T: Num>(cx: &Ctx<T>, f: &Jet<T>, j: usize, trace_only: bool) -> Result<T, JetError> {
    let n = cx.n();
    let big_f = cx.grad(f)?;
    let fj_field = cx.project(&big_f, j);
    let f0_field = cx.project(&big_f, 0);
    let fv = values(&big_f);
    let fj = values(&fj_field);
    let hess = hessian_trace_term(cx, &fj, &f0_field)?;
    if trace_only {
        let lap = cx.lap(f)?;
        let mut rhs = T::zero();
        for a in (0..n).filter(|&a| cx.k.grade[a] == j) {
            rhs = rhs + fv[a].clone() * cx.apply(a, &lap)?.value();
        }
        return Ok(hess - rhs);
    }
    let norm_j = cx.norm2(&fj_field);
    let lhs = half::<T>() * cx.lap(&norm_j)?.value();

    let f0 = values(&f0_field);
    let rc = sum((0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| fj[a].clone() * f0[b].clone() * cx.k.rc[[a, b]].clone()));

    let mut grad_sq = T::zero();
    let mut tor_term = T::zero();
    let mut ntor_term = T::zero();
    let mut tor2_term = T::zero();
    for &i in &cx.k.h {
        let dfj = values(&cx.cov(i, &fj_field)?);
        grad_sq = grad_sq + dot(&dfj, &dfj);
        let df = values(&cx.cov(i, &big_f)?);
        for a in (0..n).filter(|&a| !fj[a].is_zero()) {
            for c in 0..n {
                tor_term = tor_term + df[c].clone() * fj[a].clone() * cx.k.tor[[i, a, c]].clone();
                ntor_term = ntor_term + fv[c].clone() * fj[a].clone() * cx.k.nabla_tor[[a, i, i, c]].clone();
                tor2_term = tor2_term + fv[c].clone() * fj[a].clone() * cx.k.tor2[[i, i, a, c]].clone();
            }
        }
    }
    let two = T::one() + T::one();
    let rhs = rc + grad_sq + hess - two * tor_term + ntor_term - tor2_term;
    Ok(lhs - rhs)
}

fn strict_horizontal<T: Num>(cx: &Ctx<T>, geo: &Geometry, f: &Jet<T>) -> Result<T, JetError> {
    let n = cx.n();
    let big_f = cx.grad(f)?;
    let f0_field = cx.project(&big_f, 0);
    let f1_field = cx.project(&big_f, 1);
    let fv = values(&big_f);
    let f0 = values(&f0_field);
    let lap = cx.lap(f)?;
    let norm0 = cx.norm2(&f0_field);
    let mut lhs = half::<T>() * cx.lap(&norm0)?.value();
    for &i in &cx.k.h {
        lhs = lhs - fv[i].clone() * cx.apply(i, &lap)?.value();
    }

    let bg = bg_form(geo).form;
    let mut rr = T::zero();
    for a in 0..n {
        for b in 0..n {
            rr = rr + fv[a].clone() * fv[b].clone() * T::from_scalar(bg.get(a, b));
        }
    }
    let hs = cx.hessian(f)?;
    let mut sym_sq = T::zero();
    for (i, row) in hs.iter().enumerate() {
        for (j, hij) in row.iter().enumerate() {
            let s = half::<T>() * (hij.clone() + hs[j][i].clone());
            sym_sq = sym_sq + s.clone() * s;
        }
    }
    let mut tor_term = T::zero();
    for &i in &cx.k.h {
        let d1 = values(&cx.cov(i, &f1_field)?);
        for a in (0..n).filter(|&a| !f0[a].is_zero()) {
            for c in 0..n {
                tor_term = tor_term + d1[c].clone() * f0[a].clone() * cx.k.tor[[i, a, c]].clone();
            }
        }
    }
    let two = T::one() + T::one();
    Ok(lhs - (rr + sym_sq - two * tor_term))
}

fn strict_vertical<T: Num>(cx: &Ctx<T>, f: &Jet<T>) -> Result<T, JetError> {
    let big_f = cx.grad(f)?;
    let f1_field = cx.project(&big_f, 1);
    let lap = cx.lap(f)?;
    let norm1 = cx.norm2(&f1_field);
    let mut lhs = half::<T>() * cx.lap(&norm1)?.value();
    for (a, fa) in big_f.iter().enumerate().filter(|(a, _)| cx.k.grade[*a] == 1) {
        lhs = lhs - fa.value() * cx.apply(a, &lap)?.value();
    }
    let mut rhs = T::zero();
    for &i in &cx.k.h {
        let d1 = values(&cx.cov(i, &f1_field)?);
        rhs = rhs + dot(&d1, &d1);
    }
    Ok(lhs - rhs)
}

/// `Γ_(j)` and `Γ²_(j)` for the basic grading (`j = 0` horizontal,
/// `j = 1` vertical).
#[derive(Clone, Debug, PartialEq)]
pub struct GammaForms<T> {
    pub g0: T,
    pub g1: T,
    pub g2_0: T,
    pub g2_1: T,
}

fn gamma_j<T: Num>(cx: &Ctx<T>, df: &Field<T>, dg: &Field<T>, j: usize) -> Jet<T> {
    let mut acc = cx.zero();
    for a in (0..cx.n()).filter(|&a| cx.k.grade[a] == j) {
        acc = acc + df[a].clone() * dg[a].clone();
    }
    acc
}

pub fn gamma_forms<T: Num>(m: &CoordModel, f: &Expr, g: &Expr, p: &[T]) -> Result<GammaForms<T>, JetError> {
    let cx = Ctx::new(m, &m.basic, p)?;
    let (fj, gj) = (cx.func(f)?, cx.func(g)?);
    let (df, dg) = (cx.grad(&fj)?, cx.grad(&gj)?);
    let (lf, lg) = (cx.lap(&fj)?, cx.lap(&gj)?);
    let (dlf, dlg) = (cx.grad(&lf)?, cx.grad(&lg)?);
    let form = |j: usize| -> Result<(T, T), JetError> {
        let gam = gamma_j(&cx, &df, &dg, j);
        let g2 = cx.lap(&gam)?.value() - gamma_j(&cx, &dlf, &dg, j).value() - gamma_j(&cx, &df, &dlg, j).value();
        Ok((gam.value(), g2))
    };
    let (g0, g2_0) = form(0)?;
    let (g1, g2_1) = form(1)?;
    Ok(GammaForms { g0, g1, g2_0, g2_1 })
}

/// `Γ_(0)(f, Γ_(1)(f,f)) − Γ_(1)(f, Γ_(0)(f,f))` for the basic grading.
pub fn com_check<T: Num>(m: &CoordModel, f: &Expr, p: &[T]) -> Result<T, JetError> {
    let cx = Ctx::new(m, &m.basic, p)?;
    let fj = cx.func(f)?;
    let df = cx.grad(&fj)?;
    let g0 = gamma_j(&cx, &df, &df, 0);
    let g1 = gamma_j(&cx, &df, &df, 1);
    let (dg0, dg1) = (cx.grad(&g0)?, cx.grad(&g1)?);
    Ok(gamma_j(&cx, &df, &dg1, 0).value() - gamma_j(&cx, &df, &dg0, 1).value())
}

/// Constants of the curvature-dimension inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdConstants {
    pub rho1: Scalar,
    pub rho2: Scalar,
    pub kappa: Scalar,
}

/// Slack `Γ²₀ + νΓ²₁ − (Δ₀f)²/dim HM − (ρ₁ − κ/ν)Γ₀ − ρ₂Γ₁` at `p`; the
/// inequality holds when it is nonnegative.
pub fn cd_pointwise_check<T: Num>(
    m: &CoordModel,
    f: &Expr,
    nu: &Scalar,
    consts: &CdConstants,
    p: &[T],
) -> Result<T, JetError> {
    if !num_traits::Signed::is_positive(nu) {
        return Err(JetError::HypothesisNotMet("ν must be positive".into()));
    }
    let gf = gamma_forms(m, f, f, p)?;
    let lap = {
        let cx = Ctx::new(m, &m.basic, p)?;
        cx.lap(&cx.func(f)?)?.value()
    };
    let dim_h = m.basic.spec.dim_h() as i64;
    let cv = |s: &Scalar| T::from_scalar(s);
    let lhs = gf.g2_0 + cv(nu) * gf.g2_1;
    let rhs = cv(&Scalar::new(1.into(), dim_h.into())) * lap.clone() * lap
        + cv(&(&consts.rho1 - &consts.kappa / nu)) * gf.g0
        + cv(&consts.rho2) * gf.g1;
    Ok(lhs - rhs)
}

/// Coordinate divergence of `X = Σ_i φ_i E_i` (horizontal `i`) minus
/// `tr₀∇X = Σ_i ⟨∇_{E_i} X, E_i⟩`.
pub fn divergence_check<T: Num>(m: &CoordModel, phi: &[Expr], p: &[T]) -> Result<T, JetError> {
    if !m.geo.normality.vertically_rigid_for_this_metric {
        return Err(JetError::HypothesisNotMet("frame metric is not vertically rigid".into()));
    }
    let cx = Ctx::new(m, &m.geo, p)?;
    let h = cx.k.h.clone();
    if phi.len() != h.len() {
        return Err(JetError::HypothesisNotMet(format!("expected {} horizontal components", h.len())));
    }
    let n = cx.n();
    let mut comps = vec![cx.zero(); n];
    for (k, &i) in h.iter().enumerate() {
        comps[i] = cx.func(&phi[k])?;
    }
    let mut div = T::zero();
    for q in 0..m.dim() {
        let mut coord = cx.zero();
        for &i in &h {
            if let Some(coef) = &cx.fields[i][q] {
                coord = coord + comps[i].clone() * coef.clone();
            }
        }
        div = div + coord.deriv(q)?.value();
    }
    let mut tr = T::zero();
    for &i in &h {
        tr = tr + cx.cov(i, &comps)?[i].value();
    }
    Ok(div - tr)
}
