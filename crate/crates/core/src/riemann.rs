//! Levi-Civita geometry of the rescaled metrics `g^λ = g₀ ⊕ λ² g₁`, exact
//! in the Laurent variable `μ = λ²`, and its comparison with the
//! canonical connection.

use std::borrow::Cow;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{bg_form, myers_certificate_from, AnalysisError, CertKind, Certificate};
use crate::checks::{Check, Residual};
use crate::exactnum::{frac, half, int, psd_check, Laurent, Scalar, SymForm};
use crate::frame::GradedFrameSpec;
use crate::geometry::{vec, Geometry};
use crate::tensor::{MultiIndex, Tensor};

/// Exponent of `μ` in the metric weight of a frame vector.
fn weight(f: &GradedFrameSpec, i: usize) -> i32 {
    if f.is_horizontal(i) {
        0
    } else {
        1
    }
}

/// `∇̄_{E_a} E_b = Σ_c gamma[a][b][c] E_c` for `g^λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LCConn {
    pub gamma: Tensor<Laurent>,
}

impl LCConn {
    pub fn at(&self, mu: &Scalar) -> Tensor<Scalar> {
        self.gamma.map(|l| l.eval(mu).expect("nonzero parameter"))
    }
}

/// Koszul formula `2g(∇̄_a b, c) = g([a,b],c) − g([b,c],a) + g([c,a],b)`.
pub fn lc_koszul(f: &GradedFrameSpec) -> LCConn {
    let n = f.dim();
    let gamma = Tensor::from_fn(n, 3, |i| {
        let (a, b, c) = (i[0], i[1], i[2]);
        let (wa, wb, wc) = (weight(f, a), weight(f, b), weight(f, c));
        let mut l = Laurent::monomial(f.c(a, b, c).clone(), 0);
        l = &l + &Laurent::monomial(-f.c(b, c, a).clone(), wa - wc);
        l = &l + &Laurent::monomial(f.c(c, a, b).clone(), wb - wc);
        l.scale(&half())
    });
    LCConn { gamma }
}

/// Torsion-freeness and `g^λ`-compatibility of a Laurent connection, as
/// exact Laurent identities.
pub fn lc_sanity(f: &GradedFrameSpec, lc: &LCConn) -> (Check, Check) {
    let n = f.dim();
    let coeff_max = |l: &Laurent| l.terms().map(|(_, c)| c.abs()).max().unwrap_or_else(Scalar::zero);
    let tf = Residual::from_entries(MultiIndex::new(n, 3).map(|i| {
        let d = &(&lc.gamma[[i[0], i[1], i[2]]] - &lc.gamma[[i[1], i[0], i[2]]])
            - &Laurent::constant(f.c(i[0], i[1], i[2]).clone());
        (i, coeff_max(&d))
    }));
    let mc = Residual::from_entries(MultiIndex::new(n, 3).map(|i| {
        let (a, b, c) = (i[0], i[1], i[2]);
        let d = &lc.gamma[[a, b, c]].shift(weight(f, c)) + &lc.gamma[[a, c, b]].shift(weight(f, b));
        (i, coeff_max(&d))
    }));
    (
        Check::unconditional("Levi-Civita torsion-free", tf),
        Check::unconditional("Levi-Civita metric-compatible", mc),
    )
}

/// Which form of the comparison formulas to use. The corrected forms carry
/// extra terms that vanish when `VM` is integrable (connection) or when
/// `Tor(HM,VM)` is horizontal (curvature).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompVariant {
    /// `∇_T T' − ½Tor(T,T') + ½(J⁰(T,T') + J⁰(T',T))`, the `½J¹(T,X)`
    /// terms on the mixed connection lines, and `−⟨Tor(X,Y),Tor(X,T)₁⟩`
    /// in the mixed curvature terms.
    Corrected,
    /// The uncorrected formulas; `∇_T T − ½J⁰(T,T)` is polarized.
    Literal,
}

/// `∇̄` at `μ = 1` assembled from `∇`, `Tor`, `J⁰`, `J¹`.
pub fn lc_from_basic(geo: &Geometry, variant: CompVariant) -> Tensor<Scalar> {
    let f = &geo.spec;
    let n = f.dim();
    let td = &geo.td;
    let tor = |a: usize, b: usize, k: usize| geo.tor.get(a, b, k).clone();
    Tensor::from_fn(n, 3, |i| {
        let (a, b, k) = (i[0], i[1], i[2]);
        let hk = f.is_horizontal(k);
        let base = geo.conn.get(a, b, k).clone();
        match (f.is_horizontal(a), f.is_horizontal(b)) {
            (true, true) => base - half() * tor(a, b, k) + &td.j1[[a, b, k]],
            (false, false) => match variant {
                CompVariant::Corrected => {
                    base - half() * tor(a, b, k) + half() * (&td.j0[[a, b, k]] + &td.j0[[b, a, k]])
                }
                CompVariant::Literal => base - frac(1, 4) * (&td.j0[[a, b, k]] + &td.j0[[b, a, k]]),
            },
            (false, true) => {
                // ∇̄_T X
                let mut v = base + half() * &td.j0[[b, a, k]];
                if !hk {
                    v -= tor(a, b, k);
                }
                if variant == CompVariant::Corrected {
                    v += half() * &td.j1[[a, b, k]];
                }
                v
            }
            (true, false) => {
                // ∇̄_X T
                let mut v = base + half() * &td.j0[[a, b, k]];
                if hk {
                    v -= tor(a, b, k);
                }
                if variant == CompVariant::Corrected {
                    v += half() * &td.j1[[b, a, k]];
                }
                v
            }
        }
    })
}

/// The comparison formulas concern the basic connection; frames with a
/// finer grading are regraded first.
fn basic_geometry(geo: &Geometry) -> Cow<'_, Geometry> {
    if geo.spec.steps() <= 1 {
        Cow::Borrowed(geo)
    } else {
        Cow::Owned(Geometry::new(&geo.spec.basic()).expect("a valid grading regrades to a valid basic grading"))
    }
}

/// Residual of `lc_from_basic` against the Koszul oracle at `μ = 1`,
/// on the basic grading.
pub fn lc_equivalence(geo: &Geometry, variant: CompVariant) -> Residual {
    let geo = &*basic_geometry(geo);
    let k = lc_koszul(&geo.spec).at(&int(1));
    let b = lc_from_basic(geo, variant);
    Residual::from_entries(k.entries().map(|(i, v)| {
        let d = v - b.at(&i);
        (i, d)
    }))
}

/// Lowered Riemannian curvature `Rm̄(a,b,c,d) = g^λ(R̄(a,b)c, d)`.
pub fn lc_curvature(f: &GradedFrameSpec, lc: &LCConn) -> Tensor<Laurent> {
    let n = f.dim();
    let g = &lc.gamma;
    Tensor::from_fn(n, 4, |i| {
        let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
        let mut acc = Laurent::zero();
        for e in 0..n {
            if !g[[b, c, e]].is_zero() && !g[[a, e, d]].is_zero() {
                acc = &acc + &(&g[[b, c, e]] * &g[[a, e, d]]);
            }
            if !g[[a, c, e]].is_zero() && !g[[b, e, d]].is_zero() {
                acc = &acc - &(&g[[a, c, e]] * &g[[b, e, d]]);
            }
            let ab = f.c(a, b, e);
            if !ab.is_zero() {
                acc = &acc - &g[[e, c, d]].scale(ab);
            }
        }
        acc.shift(weight(f, d))
    })
}

/// Symmetric `n×n` matrix of Laurent polynomials in `μ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentForm {
    pub m: Vec<Vec<Laurent>>,
}

impl LaurentForm {
    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn eval(&self, v: &[Scalar], w: &[Scalar]) -> Laurent {
        let mut acc = Laurent::zero();
        for (a, va) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, wb) in w.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                acc = &acc + &self.m[a][b].scale(&(va * wb));
            }
        }
        acc
    }

    pub fn eval_laurent(&self, v: &[Laurent], w: &[Laurent]) -> Laurent {
        let mut acc = Laurent::zero();
        for (a, va) in v.iter().enumerate() {
            for (b, wb) in w.iter().enumerate() {
                if !va.is_zero() && !wb.is_zero() {
                    acc = &acc + &(&(va * wb) * &self.m[a][b]);
                }
            }
        }
        acc
    }

    pub fn at(&self, mu: &Scalar) -> SymForm {
        let rows = self.m.iter().map(|r| r.iter().map(|l| l.eval(mu).expect("nonzero parameter")).collect()).collect();
        SymForm::from_rows(rows).expect("Ricci form is symmetric")
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim()).all(|a| (0..a).all(|b| self.m[a][b] == self.m[b][a]))
    }
}

/// Riemannian Ricci of `g^λ`: `Rc̄(a,b) = Σ_k g^{kk} Rm̄(a,k,k,b)`.
pub fn rescaled_ricci(f: &GradedFrameSpec) -> LaurentForm {
    let lc = lc_koszul(f);
    let rm = lc_curvature(f, &lc);
    let n = f.dim();
    let m = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut acc = Laurent::zero();
                    for k in 0..n {
                        acc = &acc + &rm[[a, k, k, b]].shift(-weight(f, k));
                    }
                    acc
                })
                .collect()
        })
        .collect();
    LaurentForm { m }
}

/// Vector-level evaluation of the canonical tensors.
struct Ops<'a> {
    geo: &'a Geometry,
}

impl Ops<'_> {
    fn tor(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        vec::contract(&self.geo.tor.tor, &[a, b])
    }
    fn ntor(&self, a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> Vec<Scalar> {
        vec::contract(&self.geo.td.nabla_tor, &[a, b, c])
    }
    fn tor2(&self, a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> Vec<Scalar> {
        vec::contract(&self.geo.td.tor2, &[a, b, c])
    }
    fn j0(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        vec::contract(&self.geo.td.j0, &[a, b])
    }
    fn j1(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        vec::contract(&self.geo.td.j1, &[a, b])
    }
    fn rm(&self, a: &[Scalar], b: &[Scalar], c: &[Scalar], d: &[Scalar]) -> Scalar {
        vec::scalar(&self.geo.curv.r, &[a, b, c, d])
    }
    fn rc(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        vec::scalar(&self.geo.ricci.rc, &[a, b])
    }
    fn h0(&self, a: &[Scalar]) -> Vec<Scalar> {
        vec::project(a, |i| self.geo.spec.is_horizontal(i))
    }
    fn v1(&self, a: &[Scalar]) -> Vec<Scalar> {
        vec::project(a, |i| !self.geo.spec.is_horizontal(i))
    }
    fn frame(&self) -> Vec<Vec<Scalar>> {
        let n = self.geo.dim();
        self.geo.spec.horizontal().iter().map(|&i| vec::unit(n, i)).collect()
    }
}

fn laurent3(m0: Scalar, m1: Scalar, mneg: Scalar) -> Laurent {
    &(&Laurent::monomial(m0, 0) + &Laurent::monomial(m1, 1)) + &Laurent::monomial(mneg, -1)
}

/// `Rc̄(Y,Y)` for horizontal `Y` from the canonical data (`U` the unit
/// vertical frame vector).
fn expansion_yy(o: &Ops, y: &[Scalar], u: &[Scalar]) -> Laurent {
    let e = o.frame();
    let m0 = o.rc(y, y) + vec::dot(&o.ntor(u, y, y), u) - vec::dot(&o.tor2(y, y, u), u);
    let m1 = -half() * e.iter().map(|ei| vec::norm2(&o.tor(ei, y))).sum::<Scalar>();
    let mut mneg = vec::dot(&o.ntor(y, u, u), y) - vec::norm2(&o.h0(&o.tor(y, u)));
    for ei in &e {
        mneg += vec::norm2(&o.j1(ei, y)) - vec::dot(&o.j1(ei, ei), &o.j1(y, y));
    }
    laurent3(m0, m1, mneg)
}

fn expansion_yt(o: &Ops, y: &[Scalar], t: &[Scalar], variant: CompVariant) -> Laurent {
    let e = o.frame();
    let mut m0 = Scalar::zero();
    let mut m1 = Scalar::zero();
    let mut tr = vec![Scalar::zero(); o.geo.dim()];
    for ei in &e {
        m0 += vec::dot(&vec::sub(&o.ntor(ei, t, y), &o.ntor(y, t, ei)), ei);
        tr = vec::add(&tr, &o.ntor(y, ei, ei));
        if variant == CompVariant::Corrected {
            m1 -= vec::dot(&o.tor(ei, y), &o.v1(&o.tor(ei, t)));
        }
    }
    laurent3(m0, m1 + half() * vec::dot(&tr, t), Scalar::zero())
}

fn expansion_tt(o: &Ops, t: &[Scalar]) -> Laurent {
    let e = o.frame();
    let (mut m0, mut m1, mut m2) = (Scalar::zero(), Scalar::zero(), Scalar::zero());
    for ei in &e {
        m0 += vec::dot(&o.ntor(ei, t, t), ei) - vec::norm2(&o.h0(&o.tor(ei, t)));
        m1 += vec::dot(&vec::sub(&o.ntor(t, ei, ei), &o.tor2(ei, ei, t)), t);
        m2 += vec::norm2(&o.j0(ei, t));
    }
    &laurent3(m0, m1, Scalar::zero()) + &Laurent::monomial(m2 / int(4), 2)
}

fn sn_yy(o: &Ops, y: &[Scalar]) -> Laurent {
    let m1 = -half() * o.frame().iter().map(|ei| vec::norm2(&o.tor(ei, y))).sum::<Scalar>();
    laurent3(o.rc(y, y), m1, Scalar::zero())
}

fn sn_yt(o: &Ops, y: &[Scalar], t: &[Scalar]) -> Laurent {
    let tr = o.frame().iter().fold(vec![Scalar::zero(); o.geo.dim()], |acc, ei| vec::add(&acc, &o.ntor(y, ei, ei)));
    Laurent::monomial(half() * vec::dot(&tr, t), 1)
}

/// Both displayed forms of the strictly normal `Rc̄(T,T)` for unit `T`.
fn sn_tt(o: &Ops, t: &[Scalar]) -> (Laurent, Laurent) {
    let e = o.frame();
    let a: Scalar = e.iter().map(|ei| vec::norm2(&o.j0(ei, t))).sum();
    let mut b = Scalar::zero();
    for ei in &e {
        for ej in &e {
            b += vec::norm2(&o.tor(ei, ej));
        }
    }
    (Laurent::monomial(a / int(4), 2), Laurent::monomial(b / int(4), 2))
}

fn laurent_abs(l: &Laurent) -> Scalar {
    l.terms().map(|(_, c)| c.abs()).max().unwrap_or_else(Scalar::zero)
}

/// Horizontal test vectors: basis vectors and pairwise sums, which
/// determine a symmetric bilinear form by polarization.
fn polarization_set(n: usize, idx: &[usize]) -> Vec<(Vec<usize>, Vec<Scalar>)> {
    let mut out: Vec<(Vec<usize>, Vec<Scalar>)> = idx.iter().map(|&i| (vec![i], vec::unit(n, i))).collect();
    for (p, &i) in idx.iter().enumerate() {
        for &j in &idx[p + 1..] {
            out.push((vec![i, j], vec::add(&vec::unit(n, i), &vec::unit(n, j))));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RicciComparison {
    pub ricci: LaurentForm,
    pub yy: Check,
    pub yt: Check,
    pub tt: Check,
    pub strictly_normal: Vec<Check>,
}

impl RicciComparison {
    pub fn checks(&self) -> Vec<&Check> {
        let mut v = vec![&self.yy, &self.yt, &self.tt];
        v.extend(self.strictly_normal.iter());
        v
    }
}

/// Compares the Koszul-side `Rc̄^λ` with its expansion in canonical data.
/// Residuals are maxima of Laurent coefficients.
pub fn ricci_comparison(geo: &Geometry, variant: CompVariant) -> Result<RicciComparison, AnalysisError> {
    let geo = &*basic_geometry(geo);
    let f = &geo.spec;
    if f.dim_v() != 1 {
        return Err(AnalysisError::VerticalRankNotOne(f.dim_v()));
    }
    let n = f.dim();
    let ricci = rescaled_ricci(f);
    let o = Ops { geo };
    let u_idx = f.vertical()[0];
    let u = vec::unit(n, u_idx);
    let hs = polarization_set(n, &f.horizontal());
    let basis_h: Vec<usize> = f.horizontal();

    let yy = Residual::from_entries(hs.iter().map(|(w, y)| (w.clone(), laurent_abs(&(&ricci.eval(y, y) - &expansion_yy(&o, y, &u))))));
    let yt = Residual::from_entries(basis_h.iter().map(|&i| {
        let y = vec::unit(n, i);
        (vec![i, u_idx], laurent_abs(&(&ricci.eval(&y, &u) - &expansion_yt(&o, &y, &u, variant))))
    }));
    let tt = Residual::from_entries([(vec![u_idx], laurent_abs(&(&ricci.eval(&u, &u) - &expansion_tt(&o, &u))))]);

    let sn = geo.normality.strictly_normal;
    let sn_yy_r = Residual::from_entries(hs.iter().map(|(w, y)| (w.clone(), laurent_abs(&(&ricci.eval(y, y) - &sn_yy(&o, y))))));
    let sn_yt_r = Residual::from_entries(basis_h.iter().map(|&i| {
        let y = vec::unit(n, i);
        (vec![i, u_idx], laurent_abs(&(&ricci.eval(&y, &u) - &sn_yt(&o, &y, &u))))
    }));
    let (tt_a, tt_b) = sn_tt(&o, &u);
    let rtt = ricci.eval(&u, &u);
    let sn_tt_r = Residual::from_entries([
        (vec![u_idx], laurent_abs(&(&rtt - &tt_a))),
        (vec![u_idx, u_idx], laurent_abs(&(&rtt - &tt_b))),
    ]);
    Ok(RicciComparison {
        ricci,
        yy: Check::unconditional("rescaled Ricci expansion (Y,Y)", yy),
        yt: Check::unconditional("rescaled Ricci expansion (Y,T)", yt),
        tt: Check::unconditional("rescaled Ricci expansion (T,T)", tt),
        strictly_normal: vec![
            Check::conditional("strictly normal reduction (Y,Y)", sn, sn_yy_r),
            Check::conditional("strictly normal reduction (Y,T)", sn, sn_yt_r),
            Check::conditional("strictly normal reduction (T,T)", sn, sn_tt_r),
        ],
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RmComparison {
    pub xy: Check,
    pub xt: Check,
    pub xyt: Check,
}

impl RmComparison {
    pub fn checks(&self) -> [&Check; 3] {
        [&self.xy, &self.xt, &self.xyt]
    }
}

/// Riemannian sectional-type components at `μ = 1` against their
/// expressions through the canonical curvature and torsion. Evaluated on
/// basis vectors and pairwise sums of each block.
pub fn rm_comparison_residuals(geo: &Geometry, variant: CompVariant) -> RmComparison {
    let geo = &*basic_geometry(geo);
    let f = &geo.spec;
    let n = f.dim();
    let lc = lc_koszul(f);
    let rmbar_l = lc_curvature(f, &lc);
    let rmbar = rmbar_l.map(|l| l.eval(&int(1)).expect("nonzero parameter"));
    let o = Ops { geo };
    let bar = |a: &[Scalar], b: &[Scalar], c: &[Scalar], d: &[Scalar]| vec::scalar(&rmbar, &[a, b, c, d]);
    let hs = polarization_set(n, &f.horizontal());
    let vs = polarization_set(n, &f.vertical());

    let mut xy = Vec::new();
    let mut xt = Vec::new();
    let mut xyt = Vec::new();
    for (wx, x) in &hs {
        for (wy, y) in &hs {
            let rhs = o.rm(x, y, y, x) - frac(3, 4) * vec::norm2(&o.tor(x, y)) - vec::dot(&o.j1(y, y), &o.j1(x, x))
                + vec::norm2(&o.j1(x, y));
            xy.push(([wx.as_slice(), wy.as_slice()].concat(), bar(x, y, y, x) - rhs));
        }
        for (wt, t) in &vs {
            let rhs = o.rm(t, x, x, t)
                + frac(1, 4) * vec::norm2(&o.j0(x, t))
                + vec::dot(&vec::sub(&o.ntor(t, x, x), &o.tor2(x, x, t)), t)
                + vec::dot(&o.ntor(x, t, t), x)
                - vec::norm2(&o.h0(&o.tor(x, t)));
            xt.push(([wx.as_slice(), wt.as_slice()].concat(), bar(t, x, x, t) - rhs));
            for (wy, y) in &hs {
                let mut rhs = o.rm(x, y, t, x)
                    + half() * vec::dot(&o.ntor(y, x, x), t)
                    + vec::dot(&vec::sub(&o.ntor(x, t, y), &o.ntor(y, t, x)), x);
                if variant == CompVariant::Corrected {
                    rhs -= vec::dot(&o.tor(x, y), &o.v1(&o.tor(x, t)));
                }
                xyt.push(([wx.as_slice(), wy.as_slice(), wt.as_slice()].concat(), bar(x, y, t, x) - rhs));
            }
        }
    }
    let integrable = geo.vm_integrable();
    RmComparison {
        xy: Check::unconditional("Rm(X,Y,Y,X) comparison", Residual::from_entries(xy)),
        xt: Check::conditional("Rm(T,X,X,T) comparison", integrable, Residual::from_entries(xt)),
        xyt: Check::conditional("Rm(X,Y,T,X) comparison", integrable, Residual::from_entries(xyt)),
    }
}

/// `𝓡(Y+T, Y+T) = lim_{μ→0} Rc̄(Y + μ⁻¹T, Y + μ⁻¹T)` on basis vectors,
/// pairwise sums and `samples` seeded random rational vectors.
pub fn bg_limit_check(geo: &Geometry, samples: usize) -> Result<Check, AnalysisError> {
    let f = &geo.spec;
    if f.dim_v() != 1 {
        return Err(AnalysisError::VerticalRankNotOne(f.dim_v()));
    }
    let n = f.dim();
    let ricci = rescaled_ricci(f);
    let bg = bg_form(geo);
    let all: Vec<usize> = (0..n).collect();
    let mut tests: Vec<(Vec<usize>, Vec<Scalar>)> = polarization_set(n, &all);
    let mut rng = ChaCha8Rng::seed_from_u64(0xb9);
    for s in 0..samples {
        let v = (0..n).map(|_| frac(rng.gen_range(-9..=9), rng.gen_range(1..=7))).collect();
        tests.push((vec![n + s], v));
    }
    let mut failed_limit = false;
    let res = Residual::from_entries(tests.into_iter().map(|(w, a)| {
        let lifted: Vec<Laurent> = a
            .iter()
            .enumerate()
            .map(|(i, x)| Laurent::monomial(x.clone(), -weight(f, i)))
            .collect();
        let q = ricci.eval_laurent(&lifted, &lifted);
        let d = match q.limit0() {
            Ok(l) => l - bg.form.eval(&a, &a),
            Err(_) => {
                failed_limit = true;
                laurent_abs(&q)
            }
        };
        (w, d)
    }));
    let sn = geo.normality.strictly_normal;
    let mut c = Check::conditional("BG tensor as limit of rescaled Ricci", sn, res);
    if failed_limit {
        c = c.with_note("negative powers of mu survive in the limit");
    }
    Ok(c)
}

/// Largest certified `c` with `Rc̄^λ − c·g^λ ≥ 0` at one `μ`: `(lo, hi)`,
/// `lo` feasible.
pub fn ricci_lower_bound(f: &GradedFrameSpec, ricci: &LaurentForm, mu: &Scalar, tol: &Scalar) -> (Scalar, Scalar) {
    let m = ricci.at(mu);
    let w: Vec<Scalar> = (0..f.dim()).map(|i| if f.is_horizontal(i) { int(1) } else { mu.clone() }).collect();
    let gl = SymForm::diagonal(&w);
    let feasible = |c: &Scalar| psd_check(&m.sub(&gl.scale(c)));
    let mut hi = (0..f.dim()).map(|a| m.get(a, a) / &w[a]).min().expect("nonempty frame");
    if feasible(&hi) {
        return (hi.clone(), hi);
    }
    let mut step = int(1);
    let mut lo = &hi - &step;
    while !feasible(&lo) {
        step *= int(2);
        lo = &hi - &step;
    }
    while &hi - &lo > *tol {
        let s = crate::exactnum::simplest_between(&lo, &hi);
        let mid = if s > lo && s < hi { s } else { (&lo + &hi) / int(2) };
        if feasible(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// `μ = 2⁻ᵏ` for `k = 0..=20`.
pub fn default_mu_grid() -> Vec<Scalar> {
    (0..=20).map(|k| Scalar::new(1.into(), num_bigint::BigInt::from(1) << k)).collect()
}

/// Riemannian Myers search over a grid of `μ`.
pub fn riemann_myers_search(geo: &Geometry, mu_grid: &[Scalar], tol: &Scalar) -> Result<Certificate, AnalysisError> {
    let f = &geo.spec;
    if f.dim_v() != 1 {
        return Err(AnalysisError::VerticalRankNotOne(f.dim_v()));
    }
    let ricci = rescaled_ricci(f);
    let mut best: Option<(Scalar, Scalar, Scalar)> = None;
    for mu in mu_grid.iter().filter(|m| m.is_positive()) {
        let (lo, hi) = ricci_lower_bound(f, &ricci, mu, tol);
        if best.as_ref().is_none_or(|(_, b, _)| &lo > b) {
            best = Some((mu.clone(), lo, hi));
        }
    }
    let hyps = vec![
        ("dim VM = 1".to_string(), true),
        ("strictly normal (basic grading)".to_string(), geo.normality.strictly_normal),
        ("VM integrable".to_string(), geo.vm_integrable()),
    ];
    let mut constants = Vec::new();
    let mut notes = vec!["complete left-invariant metric; classical Myers theorem applies to g^lambda".to_string()];
    let certified = match &best {
        Some((mu, lo, hi)) => {
            constants.push(("mu".to_string(), mu.clone()));
            constants.push(("c".to_string(), lo.clone()));
            constants.push(("c_upper".to_string(), hi.clone()));
            lo.is_positive()
        }
        None => {
            notes.push("empty parameter grid".to_string());
            false
        }
    };
    if let Ok(m) = myers_certificate_from(geo, tol) {
        if let (Some(r1), Some(r2), Some(k)) = (m.constant("rho1"), m.constant("rho2"), m.constant("kappa")) {
            if let Some((mu, _, _)) = &best {
                let predicted = std::cmp::min(mu * r2, r1 - mu * k / int(2));
                constants.push(("c_predicted".to_string(), predicted));
            }
        }
    }
    Ok(Certificate::decide(CertKind::RiemannMyers, hyps, constants, certified, notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::catalog_entry;

    #[test]
    fn heisenberg_koszul() {
        let f = catalog_entry("heisenberg3").unwrap();
        let lc = lc_koszul(&f).at(&int(1));
        assert_eq!(lc[[0, 1, 2]], half());
        assert_eq!(lc[[0, 2, 1]], -half());
        let rc = rescaled_ricci(&f);
        assert_eq!(rc.m[0][0], Laurent::monomial(-half(), 1));
        assert_eq!(rc.m[2][2], Laurent::monomial(half(), 2));
        assert!(rc.m[0][2].is_zero());
    }
}
