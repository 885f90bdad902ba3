//! Baudoin–Garofalo tensor, torsion bounds, curvature-dimension constants
//! and compactness certificates.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::connection::ConnectionError;
use crate::exactnum::{from_f64_dyadic, int, min_eig_bounds, nullspace, psd_check, Scalar, SymForm};
use crate::frame::GradedFrameSpec;
use crate::geometry::{vec, Geometry};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("vertical bundle has rank {0}; this operation needs rank one")]
    VerticalRankNotOne(usize),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
}

/// The Baudoin–Garofalo form on the full tangent space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BGForm {
    pub form: SymForm,
}

/// `𝓡(A,A) = Rc(A₀,A₀) + ⟨A, tr∇Tor(A₀)⟩ + ¼ Σ_{i,j} ⟨Tor(E_i,E_j),A⟩²`,
/// evaluated directly from the defining sum.
pub fn bg_quadratic_raw(geo: &Geometry, a: &[Scalar]) -> Scalar {
    let f = &geo.spec;
    let a0 = vec::project(a, |i| f.is_horizontal(i));
    let rc = vec::scalar(&geo.ricci.rc, &[&a0, &a0]);
    let tr = vec::contract(&geo.td.trace_nabla_tor(f), &[&a0]);
    let mut quad = Scalar::zero();
    for &i in &f.horizontal() {
        for &j in &f.horizontal() {
            let t: Vec<Scalar> = (0..f.dim()).map(|k| geo.tor.get(i, j, k).clone()).collect();
            let d = vec::dot(&t, a);
            quad += &d * &d;
        }
    }
    rc + vec::dot(a, &tr) + quad / int(4)
}

pub fn bg_form(geo: &Geometry) -> BGForm {
    let f = &geo.spec;
    let n = f.dim();
    let h = f.horizontal();
    let trn = geo.td.trace_nabla_tor(f);
    let mut m = vec![vec![Scalar::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut v = Scalar::zero();
            if f.is_horizontal(a) && f.is_horizontal(b) {
                v += &geo.ricci.rc[[a, b]];
            }
            if f.is_horizontal(a) {
                v += &trn[[a, b]];
            }
            let mut q = Scalar::zero();
            for &i in &h {
                for &j in &h {
                    q += geo.tor.get(i, j, a) * geo.tor.get(i, j, b);
                }
            }
            m[a][b] = v + q / int(4);
        }
    }
    BGForm { form: SymForm::symmetrize(&m) }
}

/// Bounds on `κ_{ij}^m = sup |Tor(X,Y)_m|²` over unit `X ∈ V^i`, `Y ∈ V^j`
/// (grade 0 is horizontal).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionBound {
    pub i: usize,
    pub j: usize,
    pub m: usize,
    pub lower: Scalar,
    pub upper: Scalar,
    pub finite: bool,
}

impl TorsionBound {
    pub fn exact(&self) -> bool {
        self.lower == self.upper
    }
}

const RESTARTS: usize = 24;
const SWEEPS: usize = 60;

pub fn torsion_bounds(geo: &Geometry, i: usize, j: usize, m: usize, tol: &Scalar) -> TorsionBound {
    let f = &geo.spec;
    let (gi, gj, gm) = (f.indices_of_grade(i), f.indices_of_grade(j), f.indices_of_grade(m));
    // beta[a][b][c] = ⟨Tor(E_gi[a], E_gj[b]), E_gm[c]⟩
    let beta: Vec<Vec<Vec<Scalar>>> = gi
        .iter()
        .map(|&a| gj.iter().map(|&b| gm.iter().map(|&c| geo.tor.get(a, b, c).clone()).collect()).collect())
        .collect();
    let (p, q, r) = (gi.len(), gj.len(), gm.len());
    if p == 0 || q == 0 || r == 0 {
        return TorsionBound { i, j, m, lower: Scalar::zero(), upper: Scalar::zero(), finite: true };
    }
    let value = |x: &[Scalar], y: &[Scalar]| -> Scalar {
        let nx = vec::norm2(x);
        let ny = vec::norm2(y);
        if nx.is_zero() || ny.is_zero() {
            return Scalar::zero();
        }
        let mut s = Scalar::zero();
        for c in 0..r {
            let mut z = Scalar::zero();
            for a in 0..p {
                for b in 0..q {
                    if !x[a].is_zero() && !y[b].is_zero() {
                        z += &x[a] * &y[b] * &beta[a][b][c];
                    }
                }
            }
            s += &z * &z;
        }
        s / (nx * ny)
    };

    let mut lower = Scalar::zero();
    for a in 0..p {
        for b in 0..q {
            let v = value(&vec::unit(p, a), &vec::unit(q, b));
            if v > lower {
                lower = v;
            }
        }
    }
    let fb: Vec<Vec<Vec<f64>>> =
        beta.iter().map(|m2| m2.iter().map(|v| v.iter().map(crate::exactnum::to_f64).collect()).collect()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ ((i * 64 + j * 8 + m) as u64));
    for _ in 0..RESTARTS {
        let mut x: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut y: Vec<f64> = (0..q).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for _ in 0..SWEEPS {
            y = best_partner(&fb, &x, false);
            x = best_partner(&fb, &y, true);
        }
        let xr: Vec<Scalar> = x.iter().map(|v| from_f64_dyadic(*v, 30)).collect();
        let yr: Vec<Scalar> = y.iter().map(|v| from_f64_dyadic(*v, 30)).collect();
        let v = value(&xr, &yr);
        if v > lower {
            lower = v;
        }
    }

    // Each flattening of the bilinear map is a linear map whose squared
    // operator norm bounds κ from above.
    let grams = [
        gram(p, |a, b| (0..q).flat_map(|y| (0..r).map(move |c| (y, c))).map(|(y, c)| &beta[a][y][c] * &beta[b][y][c]).sum()),
        gram(q, |a, b| (0..p).flat_map(|x| (0..r).map(move |c| (x, c))).map(|(x, c)| &beta[x][a][c] * &beta[x][b][c]).sum()),
        gram(r, |a, b| (0..p).flat_map(|x| (0..q).map(move |y| (x, y))).map(|(x, y)| &beta[x][y][a] * &beta[x][y][b]).sum()),
    ];
    let mut upper: Option<Scalar> = None;
    for g in &grams {
        let (lo, _) = min_eig_bounds(&g.neg(), tol);
        let bound = -lo;
        if upper.as_ref().is_none_or(|u| &bound < u) {
            upper = Some(bound);
        }
    }
    let mut upper = upper.unwrap();
    if upper < lower {
        // Only possible through the outward rounding of the bracket.
        upper = lower.clone();
    }
    if lower != upper && grams.iter().any(|g| psd_check(&g.neg().shift(&-lower.clone()))) {
        upper = lower.clone();
    }
    TorsionBound { i, j, m, lower, upper, finite: true }
}

fn gram(n: usize, entry: impl Fn(usize, usize) -> Scalar) -> SymForm {
    let rows: Vec<Vec<Scalar>> = (0..n).map(|a| (0..n).map(|b| entry(a, b)).collect()).collect();
    SymForm::symmetrize(&rows)
}

/// Top right-singular vector of the linear map `y ↦ β(x, y)` (or
/// `x ↦ β(x, y)` when `fix_second`), by power iteration.
fn best_partner(beta: &[Vec<Vec<f64>>], fixed: &[f64], fix_second: bool) -> Vec<f64> {
    let (p, q, r) = (beta.len(), beta[0].len(), beta[0][0].len());
    let free = if fix_second { p } else { q };
    let mat: Vec<Vec<f64>> = (0..r)
        .map(|c| {
            (0..free)
                .map(|k| {
                    if fix_second {
                        (0..q).map(|b| fixed[b] * beta[k][b][c]).sum()
                    } else {
                        (0..p).map(|a| fixed[a] * beta[a][k][c]).sum()
                    }
                })
                .collect()
        })
        .collect();
    let mut v: Vec<f64> = (0..free).map(|k| 1.0 + k as f64 * 0.1).collect();
    for _ in 0..50 {
        let mv: Vec<f64> = mat.iter().map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        let mut w: Vec<f64> = (0..free).map(|k| mat.iter().zip(&mv).map(|(row, s)| row[k] * s).sum()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return v;
        }
        w.iter_mut().for_each(|x| *x /= norm);
        v = w;
    }
    v
}

pub fn cd_feasible(f: &GradedFrameSpec, bg: &BGForm, rho1: &Scalar, rho2: &Scalar) -> bool {
    psd_check(&bg.form.sub(&block_diag(f, rho1, rho2)))
}

fn block_diag(f: &GradedFrameSpec, rho1: &Scalar, rho2: &Scalar) -> SymForm {
    let d: Vec<Scalar> = (0..f.dim()).map(|i| if f.is_horizontal(i) { rho1.clone() } else { rho2.clone() }).collect();
    SymForm::diagonal(&d)
}

/// One row of the curvature-dimension frontier: for fixed `ρ₁` the
/// supremal feasible `ρ₂` lies in `[lower, upper]` (`lower` is itself
/// feasible). `None` when no `ρ₂` is feasible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierPoint {
    pub rho1: Scalar,
    pub rho2: Option<(Scalar, Scalar)>,
}

const DOUBLINGS: usize = 64;

pub fn rho2_max(f: &GradedFrameSpec, bg: &BGForm, rho1: &Scalar, tol: &Scalar) -> Option<(Scalar, Scalar)> {
    let v = f.vertical();
    let Some(mut hi) = v.iter().map(|&a| bg.form.get(a, a).clone()).min() else {
        // No vertical directions: ρ₂ is unconstrained.
        return None;
    };
    let feasible = |s: &Scalar| cd_feasible(f, bg, rho1, s);
    if feasible(&hi) {
        return Some((hi.clone(), hi));
    }
    let mut step = int(1);
    let mut lo = &hi - &step;
    let mut tries = 0;
    while !feasible(&lo) {
        tries += 1;
        if tries > DOUBLINGS {
            return None;
        }
        step *= int(2);
        lo = &hi - &step;
    }
    let two = int(2);
    loop {
        let s = crate::exactnum::simplest_between(&lo, &hi);
        if feasible(&s) {
            if is_supremal(f, bg, rho1, &s) {
                return Some((s.clone(), s));
            }
            if s > lo {
                lo = s;
            }
        } else if s < hi {
            hi = s;
        }
        if &hi - &lo <= *tol {
            return Some((lo, hi));
        }
        let mid = (&lo + &hi) / &two;
        if feasible(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// A feasible `s` is supremal iff the shifted form has a kernel vector
/// with a nonzero vertical part.
fn is_supremal(f: &GradedFrameSpec, bg: &BGForm, rho1: &Scalar, s: &Scalar) -> bool {
    let m = bg.form.sub(&block_diag(f, rho1, s));
    nullspace(&m.rows(), f.dim()).iter().any(|k| f.vertical().iter().any(|&a| !k[a].is_zero()))
}

pub fn cd_frontier(f: &GradedFrameSpec, bg: &BGForm, rho1_grid: &[Scalar], tol: &Scalar) -> Vec<FrontierPoint> {
    rho1_grid.iter().map(|r| FrontierPoint { rho1: r.clone(), rho2: rho2_max(f, bg, r, tol) }).collect()
}

/// Bracket on the supremum of `ρ₁` over all feasible pairs, which is the
/// smallest eigenvalue of the horizontal block.
pub fn rho1_max(f: &GradedFrameSpec, bg: &BGForm, tol: &Scalar) -> (Scalar, Scalar) {
    min_eig_bounds(&bg.form.restrict(&f.horizontal()), tol)
}

/// Default grid: a few values at and below the supremal `ρ₁`.
pub fn default_rho1_grid(f: &GradedFrameSpec, bg: &BGForm, tol: &Scalar) -> Vec<Scalar> {
    let (lo, _) = rho1_max(f, bg, tol);
    let mut grid: Vec<Scalar> = [0, 1, 2, 4].iter().map(|k| &lo - int(*k)).collect();
    if lo.is_positive() {
        grid.insert(1, &lo / int(2));
        grid.push(Scalar::zero());
    }
    grid.sort();
    grid.dedup();
    grid.reverse();
    grid
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CertKind {
    MyersBm2,
    RiemannMyers,
    BadBonnet,
}

impl CertKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertKind::MyersBm2 => "myers_bm2",
            CertKind::RiemannMyers => "riemann_myers",
            CertKind::BadBonnet => "bad_bonnet",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Compact,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Compact => "compact",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertKind,
    pub hypotheses: Vec<(String, bool)>,
    pub constants: Vec<(String, Scalar)>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl Certificate {
    /// The only constructor: the verdict is compact exactly when every
    /// hypothesis passes and `certified` (the exact sign conditions) holds.
    pub fn decide(
        kind: CertKind,
        hypotheses: Vec<(String, bool)>,
        constants: Vec<(String, Scalar)>,
        certified: bool,
        notes: Vec<String>,
    ) -> Self {
        let ok = certified && hypotheses.iter().all(|(_, h)| *h);
        Certificate {
            kind,
            hypotheses,
            constants,
            verdict: if ok { Verdict::Compact } else { Verdict::Inconclusive },
            notes,
        }
    }

    pub fn hypotheses_pass(&self) -> bool {
        self.hypotheses.iter().all(|(_, h)| *h)
    }

    pub fn constant(&self, name: &str) -> Option<&Scalar> {
        self.constants.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }
}

/// Curvature-dimension certificate on the basic grading.
pub fn myers_certificate(f: &GradedFrameSpec, tol: &Scalar) -> Result<Certificate, AnalysisError> {
    let basic = f.basic();
    let geo = Geometry::new(&basic)?;
    myers_certificate_from(&geo, tol)
}

/// Same as [`myers_certificate`] for geometry already on the basic grading.
pub fn myers_certificate_from(geo: &Geometry, tol: &Scalar) -> Result<Certificate, AnalysisError> {
    let f = &geo.spec;
    let bg = bg_form(geo);
    let kappa = torsion_bounds(geo, 0, 0, 1, tol);
    let hyps = vec![
        ("strictly normal (basic grading)".to_string(), geo.normality.strictly_normal),
        ("VM integrable".to_string(), geo.vm_integrable()),
        ("kappa_00^1 finite".to_string(), kappa.finite),
    ];
    let (lo, _) = rho1_max(f, &bg, tol);
    let mut rho1 = lo;
    let mut rho2 = rho2_max(f, &bg, &rho1, tol);
    if rho2.is_none() && f.dim_v() > 0 {
        rho1 = if rho1.is_positive() { &rho1 / int(2) } else { &rho1 - int(1) };
        rho2 = rho2_max(f, &bg, &rho1, tol);
    }
    let mut notes = vec!["exhaustion-function hypothesis holds automatically for left-invariant frames".to_string()];
    let rho2_lo = match &rho2 {
        Some((lo, _)) => lo.clone(),
        None if f.dim_v() == 0 => {
            notes.push("no vertical directions; rho2 unconstrained".to_string());
            Scalar::zero()
        }
        None => {
            notes.push("no feasible rho2 found".to_string());
            Scalar::zero()
        }
    };
    let certified = rho1.is_positive() && rho2.is_some() && rho2_lo.is_positive();
    let k = int(f.dim_h() as i64) * &kappa.upper;
    if !kappa.exact() {
        notes.push(format!("kappa_00^1 bracket [{}, {}]", kappa.lower, kappa.upper));
    }
    let mut constants = vec![("rho1".to_string(), rho1), ("rho2".to_string(), rho2_lo), ("kappa".to_string(), k)];
    if let Some((_, hi)) = rho2 {
        constants.push(("rho2_upper".to_string(), hi));
    }
    constants.push(("kappa_00^1".to_string(), kappa.upper.clone()));
    Ok(Certificate::decide(CertKind::MyersBm2, hyps, constants, certified, notes))
}

/// The tensors `𝓑` and `𝓚` on the horizontal block (rank-one vertical
/// bundle, `U` its unit frame vector).
pub fn bad_bonnet_forms(geo: &Geometry) -> Result<(SymForm, SymForm), AnalysisError> {
    let f = &geo.spec;
    if f.dim_v() != 1 {
        return Err(AnalysisError::VerticalRankNotOne(f.dim_v()));
    }
    let u = f.vertical()[0];
    let h = f.horizontal();
    let n = f.dim();
    let tor_u0 = |x: usize| -> Vec<Scalar> {
        (0..n).map(|k| if f.is_horizontal(k) { geo.tor.get(x, u, k).clone() } else { Scalar::zero() }).collect()
    };
    let j1 = |a: usize, b: usize| -> Vec<Scalar> { (0..n).map(|k| geo.td.j1[[a, b, k]].clone()).collect() };
    let mut bm = vec![vec![Scalar::zero(); h.len()]; h.len()];
    let mut km = vec![vec![Scalar::zero(); h.len()]; h.len()];
    for (p, &x) in h.iter().enumerate() {
        for (q, &y) in h.iter().enumerate() {
            bm[p][q] = geo.td.nabla_tor[[x, u, u, y]].clone() - vec::dot(&tor_u0(x), &tor_u0(y));
            let mut k = Scalar::zero();
            for &e in &h {
                k += vec::dot(&j1(e, x), &j1(e, y)) - vec::dot(&j1(e, e), &j1(x, y));
            }
            km[p][q] = k;
        }
    }
    Ok((SymForm::symmetrize(&bm), SymForm::symmetrize(&km)))
}

pub fn bad_bonnet(geo: &Geometry, tol: &Scalar) -> Result<Certificate, AnalysisError> {
    let (b, k) = bad_bonnet_forms(geo)?;
    let a = b.trace();
    let (b_lo, b_hi) = min_eig_bounds(&b.add(&k), tol);
    let hyps = vec![
        ("dim VM = 1".to_string(), true),
        ("bounded curvature and torsion".to_string(), true),
    ];
    let notes = vec!["curvature and torsion are constant in the frame, hence bounded".to_string()];
    let certified = a.is_positive() && b_lo.is_positive();
    let constants = vec![("a".to_string(), a), ("b".to_string(), b_lo), ("b_upper".to_string(), b_hi)];
    Ok(Certificate::decide(CertKind::BadBonnet, hyps, constants, certified, notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::frac;
    use crate::frame::catalog_entry;

    fn geo(name: &str) -> Geometry {
        Geometry::new(&catalog_entry(name).unwrap()).unwrap()
    }

    #[test]
    fn heisenberg_form_and_bounds() {
        let g = geo("heisenberg3");
        let bg = bg_form(&g);
        assert_eq!(bg.form, SymForm::diagonal(&[int(0), int(0), frac(1, 2)]));
        let k = torsion_bounds(&g, 0, 0, 1, &frac(1, 1_000_000));
        assert_eq!((k.lower, k.upper), (int(1), int(1)));
        assert!(cd_feasible(&g.spec, &bg, &int(0), &frac(1, 2)));
        assert!(!cd_feasible(&g.spec, &bg, &frac(1, 1000), &frac(1, 1000)));
    }

    #[test]
    fn raw_sum_matches_polarized_matrix() {
        let g = geo("su2");
        let bg = bg_form(&g);
        let a = vec![frac(1, 3), int(-2), frac(5, 7)];
        assert_eq!(bg.form.eval(&a, &a), bg_quadratic_raw(&g, &a));
    }
}
