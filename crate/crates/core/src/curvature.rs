//! Curvature of the canonical connection, Ricci contraction, second-order
//! torsion, and residuals of the curvature identities.

use num_traits::Zero;

use crate::checks::{Check, Residual};
use crate::connection::{cov_deriv_tensor, ConnCoeffs, NormalityFlags, TorsionTensor, Variance};
use crate::frame::GradedFrameSpec;
use crate::tensor::{MultiIndex, Tensor};
use crate::exactnum::Scalar;

use Variance::{Lower, Upper};

/// `R(E_a,E_b)E_c = Σ_d r[a][b][c][d] E_d`; `rm` is the lowered tensor
/// (identical components in an orthonormal frame).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvTensor {
    pub r: Tensor<Scalar>,
}

impl CurvTensor {
    pub fn rm(&self, a: usize, b: usize, c: usize, d: usize) -> &Scalar {
        &self.r[[a, b, c, d]]
    }
}

pub fn curvature(f: &GradedFrameSpec, conn: &ConnCoeffs) -> CurvTensor {
    let n = f.dim();
    let r = Tensor::from_fn(n, 4, |i| {
        let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
        let mut acc = Scalar::zero();
        for e in 0..n {
            let bc = conn.get(b, c, e);
            if !bc.is_zero() {
                acc += bc * conn.get(a, e, d);
            }
            let ac = conn.get(a, c, e);
            if !ac.is_zero() {
                acc -= ac * conn.get(b, e, d);
            }
            let ab = f.c(a, b, e);
            if !ab.is_zero() {
                acc -= ab * conn.get(e, c, d);
            }
        }
        acc
    });
    CurvTensor { r }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlatnessFlags {
    pub horizontally_flat: bool,
    pub vertically_flat: bool,
    pub flat: bool,
}

pub fn flatness_flags(f: &GradedFrameSpec, curv: &CurvTensor) -> FlatnessFlags {
    let vanishes_on = |horizontal: bool| {
        curv.r.nonzero_entries().all(|(i, _)| f.is_horizontal(i[2]) != horizontal)
    };
    FlatnessFlags {
        horizontally_flat: vanishes_on(true),
        vertically_flat: vanishes_on(false),
        flat: curv.r.is_zero(),
    }
}

/// Cyclic sum over the first three slots:
/// `𝒞F(a,b,c,…) = F(a,b,c,…) + F(b,c,a,…) + F(c,a,b,…)`.
pub fn cyclic(t: &Tensor<Scalar>) -> Tensor<Scalar> {
    assert!(t.rank() >= 3, "cyclic sum needs three slots");
    Tensor::from_fn(t.dim(), t.rank(), |i| {
        let mut p = i.to_vec();
        let mut acc = t.at(&p).clone();
        (p[0], p[1], p[2]) = (i[1], i[2], i[0]);
        acc += t.at(&p);
        (p[0], p[1], p[2]) = (i[2], i[0], i[1]);
        acc += t.at(&p);
        acc
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    pub antisym_last_pair: Check,
    pub antisym_first_pair: Check,
    pub horizontal_to_vertical: Check,
}

impl SymmetryReport {
    pub fn checks(&self) -> [&Check; 3] {
        [&self.antisym_last_pair, &self.antisym_first_pair, &self.horizontal_to_vertical]
    }
}

pub fn symmetry_residuals(f: &GradedFrameSpec, curv: &CurvTensor) -> SymmetryReport {
    let n = f.dim();
    let quads = || MultiIndex::new(n, 4);
    let last = Residual::from_entries(quads().map(|i| {
        let v = curv.rm(i[0], i[1], i[2], i[3]) + curv.rm(i[0], i[1], i[3], i[2]);
        (i, v)
    }));
    let first = Residual::from_entries(quads().map(|i| {
        let v = curv.rm(i[0], i[1], i[2], i[3]) + curv.rm(i[1], i[0], i[2], i[3]);
        (i, v)
    }));
    let hv = Residual::from_entries(quads().filter(|i| f.is_horizontal(i[2]) && !f.is_horizontal(i[3])).map(|i| {
        let v = curv.rm(i[0], i[1], i[2], i[3]).clone();
        (i, v)
    }));
    SymmetryReport {
        antisym_last_pair: Check::unconditional("Rm(A,B,C,D) = -Rm(A,B,D,C)", last),
        antisym_first_pair: Check::unconditional("Rm(A,B,C,D) = -Rm(B,A,C,D)", first),
        horizontal_to_vertical: Check::unconditional("Rm(TM,TM,HM,VM) = 0", hv),
    }
}

/// Torsion-derived tensors. Index conventions, all with the output vector
/// index last:
/// - `nabla_tor[a][b][c][k]`: `∇Tor(A,B,C) = (∇_C Tor)(A,B)`;
/// - `tor2[a][b][c][k]`: `TOR₂(A,B,C) = Tor(A, Tor(B,C))`;
/// - `j[a][b][k]`: `⟨J(A,B),C⟩ = ⟨Tor(A,C),B⟩`; `j0`/`j1` are its
///   horizontal and vertical projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorDerived {
    pub nabla_tor: Tensor<Scalar>,
    pub tor2: Tensor<Scalar>,
    pub j: Tensor<Scalar>,
    pub j0: Tensor<Scalar>,
    pub j1: Tensor<Scalar>,
}

impl TorDerived {
    /// `tr(∇Tor)(A) = Σ_i ∇Tor(A, E_i, E_i)` over a horizontal frame, as a
    /// vector for each basis `A`: `out[a][k]`.
    pub fn trace_nabla_tor(&self, f: &GradedFrameSpec) -> Tensor<Scalar> {
        let h = f.horizontal();
        Tensor::from_fn(f.dim(), 2, |i| h.iter().map(|&e| self.nabla_tor[[i[0], e, e, i[1]]].clone()).sum())
    }
}

pub fn tor_derived(f: &GradedFrameSpec, conn: &ConnCoeffs, t: &TorsionTensor) -> TorDerived {
    let n = f.dim();
    let d = cov_deriv_tensor(conn, &t.tor, &[Lower, Lower, Upper]).expect("torsion has rank 3");
    let nabla_tor = Tensor::from_fn(n, 4, |i| d[[i[0], i[1], i[3], i[2]]].clone());
    let tor2 = Tensor::from_fn(n, 4, |i| {
        (0..n)
            .filter(|&e| !t.get(i[1], i[2], e).is_zero())
            .map(|e| t.get(i[1], i[2], e) * t.get(i[0], e, i[3]))
            .sum()
    });
    let j = Tensor::from_fn(n, 3, |i| t.get(i[0], i[2], i[1]).clone());
    let j0 = Tensor::from_fn(n, 3, |i| if f.is_horizontal(i[2]) { j.at(i).clone() } else { Scalar::zero() });
    let j1 = Tensor::from_fn(n, 3, |i| if f.is_horizontal(i[2]) { Scalar::zero() } else { j.at(i).clone() });
    TorDerived { nabla_tor, tor2, j, j0, j1 }
}

/// `R(Tor(x,w),y)z` components, `[x][w][y][z][k]` flattened on demand.
fn r_of_torsion(curv: &CurvTensor, t: &TorsionTensor, x: usize, w: usize, y: usize, z: usize, k: usize) -> Scalar {
    let n = t.dim();
    (0..n)
        .filter(|&e| !t.get(x, w, e).is_zero())
        .map(|e| t.get(x, w, e) * curv.rm(e, y, z, k))
        .sum()
}

/// Whether `V̂⁽ʲ⁾` is closed under brackets.
pub fn complement_integrable(f: &GradedFrameSpec, j: usize) -> bool {
    let n = f.dim();
    MultiIndex::new(n, 3).all(|i| f.grade(i[0]) == j || f.grade(i[1]) == j || f.grade(i[2]) != j || f.c(i[0], i[1], i[2]).is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicBianchiReport {
    /// `𝒞R + 𝒞TOR₂ − 𝒞∇Tor` on all triples.
    pub unconditional: Check,
    /// `V⁽ʲ⁾` component of `𝒞∇Tor` on `V⁽ʲ⁾` triples, all `j`.
    pub part_a: Check,
    /// `V⁽ʲ⁾` component of `𝒞TOR₂` on `V⁽ʲ⁾` triples, for `j`-normal `j`.
    pub part_b: Vec<Check>,
    /// Same with only the first two arguments in `V⁽ʲ⁾`, when also
    /// `V̂⁽ʲ⁾` is integrable.
    pub part_c: Vec<Check>,
    /// `⟨𝒞R(X,Y)Z,W⟩ = 0` on horizontal quadruples (VM normal).
    pub horizontal: Check,
    /// Same with any three horizontal (VM normal and integrable).
    pub three_horizontal: Check,
}

impl AlgebraicBianchiReport {
    pub fn checks(&self) -> Vec<&Check> {
        let mut v = vec![&self.unconditional, &self.part_a];
        v.extend(self.part_b.iter());
        v.extend(self.part_c.iter());
        v.push(&self.horizontal);
        v.push(&self.three_horizontal);
        v
    }
}

pub fn algebraic_bianchi_residual(
    f: &GradedFrameSpec,
    curv: &CurvTensor,
    td: &TorDerived,
    nf: &NormalityFlags,
) -> AlgebraicBianchiReport {
    let n = f.dim();
    let cr = cyclic(&curv.r);
    let ct = cyclic(&td.tor2);
    let cn = cyclic(&td.nabla_tor);
    let quads = || MultiIndex::new(n, 4);
    let unconditional = Residual::from_entries(quads().map(|i| {
        let v = cr.at(&i) + ct.at(&i) - cn.at(&i);
        (i, v)
    }));
    let same_grade = |i: &[usize]| f.grade(i[0]) == f.grade(i[1]) && f.grade(i[1]) == f.grade(i[2]) && f.grade(i[3]) == f.grade(i[0]);
    let part_a = Residual::from_entries(quads().filter(|i| same_grade(i)).map(|i| {
        let v = cn.at(&i).clone();
        (i, v)
    }));
    let mut part_b = Vec::new();
    let mut part_c = Vec::new();
    for j in 0..=f.steps() {
        let in_j = |a: usize| f.grade(a) == j;
        let rb = Residual::from_entries(quads().filter(|i| i.iter().all(|&a| in_j(a))).map(|i| {
            let v = ct.at(&i).clone();
            (i, v)
        }));
        part_b.push(Check::conditional(format!("algebraic Bianchi, part (b) j={j}"), nf.j_normal[j], rb));
        let rc = Residual::from_entries(quads().filter(|i| in_j(i[0]) && in_j(i[1]) && in_j(i[3])).map(|i| {
            let v = ct.at(&i).clone();
            (i, v)
        }));
        part_c.push(Check::conditional(
            format!("algebraic Bianchi, part (c) j={j}"),
            nf.j_normal[j] && complement_integrable(f, j),
            rc,
        ));
    }
    let vm_integrable = complement_integrable(f, 0);
    let horizontal = Residual::from_entries(quads().filter(|i| i.iter().all(|&a| f.is_horizontal(a))).map(|i| {
        let v = cr.at(&i).clone();
        (i, v)
    }));
    let three = Residual::from_entries(quads().filter(|i| i.iter().filter(|&&a| f.is_horizontal(a)).count() >= 3).map(|i| {
        let v = cr.at(&i).clone();
        (i, v)
    }));
    AlgebraicBianchiReport {
        unconditional: Check::unconditional("algebraic Bianchi", unconditional),
        part_a: Check::unconditional("algebraic Bianchi, part (a)", part_a),
        part_b,
        part_c,
        horizontal: Check::conditional("horizontal algebraic Bianchi", nf.vm_normal(), horizontal),
        three_horizontal: Check::conditional(
            "horizontal algebraic Bianchi, three horizontal",
            nf.vm_normal() && vm_integrable,
            three,
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSymmetryReport {
    /// `2Rm(C,A,B,D) − 2Rm(B,D,C,A) = 𝒞⟨𝒞R(A,B)C,D⟩` (four-term cyclic sum).
    pub reduction: Check,
    pub horizontal: Check,
    pub three_horizontal: Check,
}

pub fn pair_symmetry(f: &GradedFrameSpec, curv: &CurvTensor, nf: &NormalityFlags) -> PairSymmetryReport {
    let n = f.dim();
    let cr = cyclic(&curv.r);
    let s = |a: usize, b: usize, c: usize, d: usize| cr[[a, b, c, d]].clone();
    let quads = || MultiIndex::new(n, 4);
    let reduction = Residual::from_entries(quads().map(|i| {
        let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
        let lhs = (curv.rm(c, a, b, d) - curv.rm(b, d, c, a)) * Scalar::from_integer(2.into());
        let rhs = s(a, b, c, d) + s(b, c, d, a) + s(c, d, a, b) + s(d, a, b, c);
        (i, lhs - rhs)
    }));
    let diff = |i: &[usize]| curv.rm(i[0], i[1], i[2], i[3]) - curv.rm(i[2], i[3], i[0], i[1]);
    let horizontal = Residual::from_entries(quads().filter(|i| i.iter().all(|&a| f.is_horizontal(a))).map(|i| {
        let v = diff(&i);
        (i, v)
    }));
    let three = Residual::from_entries(quads().filter(|i| i.iter().filter(|&&a| f.is_horizontal(a)).count() >= 3).map(|i| {
        let v = diff(&i);
        (i, v)
    }));
    PairSymmetryReport {
        reduction: Check::unconditional("pair-symmetry reduction identity", reduction),
        horizontal: Check::conditional("pair symmetry, horizontal", nf.vm_normal(), horizontal),
        three_horizontal: Check::conditional(
            "pair symmetry, three horizontal",
            nf.vm_normal() && complement_integrable(f, 0),
            three,
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialBianchiReport {
    /// `𝒞(∇_W R)(X,Y)Z − 𝒞R(Tor(X,W),Y)Z`, cyclic in `(X,Y,W)`.
    pub first: Check,
    /// `∇Rm(X,Y,Z,W,V) + ∇Rm(X,Y,W,V,Z) + ∇Rm(X,Y,V,Z,W)` on horizontal
    /// arguments (VM normal and integrable).
    pub second: Check,
}

/// `∇R` with the direction last: `out[a][b][c][k][d] = ((∇_{E_d} R)(E_a,E_b)E_c)_k`.
pub fn nabla_curvature(conn: &ConnCoeffs, curv: &CurvTensor) -> Tensor<Scalar> {
    cov_deriv_tensor(conn, &curv.r, &[Lower, Lower, Lower, Upper]).expect("curvature has rank 4")
}

pub fn differential_bianchi_residual(
    f: &GradedFrameSpec,
    conn: &ConnCoeffs,
    t: &TorsionTensor,
    curv: &CurvTensor,
    nf: &NormalityFlags,
) -> DifferentialBianchiReport {
    let n = f.dim();
    let nr = nabla_curvature(conn, curv);
    let first = Residual::from_entries(MultiIndex::new(n, 5).map(|i| {
        let (x, y, w, z, k) = (i[0], i[1], i[2], i[3], i[4]);
        let mut v = Scalar::zero();
        for (a, b, c) in [(x, y, w), (y, w, x), (w, x, y)] {
            v += &nr[[a, b, z, k, c]];
            v -= r_of_torsion(curv, t, a, c, b, z, k);
        }
        (i, v)
    }));
    let h = f.horizontal();
    let mut second_entries = Vec::new();
    for idx in MultiIndex::new(h.len(), 5) {
        let [x, y, z, w, v] = [h[idx[0]], h[idx[1]], h[idx[2]], h[idx[3]], h[idx[4]]];
        let val = &nr[[x, y, z, w, v]] + &nr[[x, y, w, v, z]] + &nr[[x, y, v, z, w]];
        second_entries.push((vec![x, y, z, w, v], val));
    }
    DifferentialBianchiReport {
        first: Check::unconditional("differential Bianchi", first),
        second: Check::conditional(
            "horizontal differential Bianchi",
            nf.vm_normal() && complement_integrable(f, 0),
            Residual::from_entries(second_entries),
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RicciData {
    /// `rc[a][b] = Σ_k Rm(E_a, X_k, X_k, E_b)` over horizontal `X_k`; not
    /// symmetric in general.
    pub rc: Tensor<Scalar>,
    pub s0: Scalar,
}

pub fn ricci(f: &GradedFrameSpec, curv: &CurvTensor) -> RicciData {
    let h = f.horizontal();
    let rc = Tensor::from_fn(f.dim(), 2, |i| h.iter().map(|&k| curv.rm(i[0], k, k, i[1]).clone()).sum::<Scalar>());
    let s0 = h.iter().map(|&k| rc[[k, k]].clone()).sum();
    RicciData { rc, s0 }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RicciChecks {
    pub horizontal_symmetry: Check,
    pub vertical_horizontal_vanishing: Check,
    pub contracted_bianchi: Check,
}

impl RicciChecks {
    pub fn checks(&self) -> [&Check; 3] {
        [&self.horizontal_symmetry, &self.vertical_horizontal_vanishing, &self.contracted_bianchi]
    }
}

pub fn ricci_checks(f: &GradedFrameSpec, conn: &ConnCoeffs, ric: &RicciData, nf: &NormalityFlags) -> RicciChecks {
    let h = f.horizontal();
    let v = f.vertical();
    let integrable = complement_integrable(f, 0);
    let sym = Residual::from_entries(
        h.iter().flat_map(|&x| h.iter().map(move |&y| (x, y))).map(|(x, y)| (vec![x, y], &ric.rc[[x, y]] - &ric.rc[[y, x]])),
    );
    let vh = Residual::from_entries(
        v.iter().flat_map(|&u| h.iter().map(move |&x| (u, x))).map(|(u, x)| (vec![u, x], ric.rc[[u, x]].clone())),
    );
    let nrc = cov_deriv_tensor(conn, &ric.rc, &[Lower, Lower]).expect("ricci has rank 2");
    // S₀ is constant, so ∇_X S₀ = 0 and only the trace term remains
    let contracted = Residual::from_entries(h.iter().map(|&x| {
        let tr: Scalar = h.iter().map(|&j| nrc[[j, x, j]].clone()).sum();
        (vec![x], tr * Scalar::from_integer((-2).into()))
    }));
    RicciChecks {
        horizontal_symmetry: Check::conditional("Ricci symmetric on HM", nf.vm_normal(), sym),
        vertical_horizontal_vanishing: Check::conditional("Ricci(VM,HM) = 0", nf.vm_normal() && integrable, vh),
        contracted_bianchi: Check::conditional("contracted Bianchi", nf.vm_normal() && integrable, contracted),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{normality_flags, ConnectionData};
    use crate::exactnum::{frac, int};
    use crate::frame::{builtin_catalog, catalog_entry};

    fn setup(name: &str) -> (GradedFrameSpec, ConnectionData, CurvTensor) {
        let f = catalog_entry(name).unwrap();
        let d = ConnectionData::new(&f).unwrap();
        let c = curvature(&f, &d.conn);
        (f, d, c)
    }

    #[test]
    fn carnot_entries_are_flat() {
        for name in ["c3", "c3_basic", "sn", "heisenberg3", "heisenberg5", "free23", "abelian3"] {
            let (f, _, c) = setup(name);
            assert!(flatness_flags(&f, &c).flat, "{name}");
        }
    }

    #[test]
    fn su2_curvature_and_ricci() {
        let (f, _, c) = setup("su2");
        assert_eq!(c.rm(0, 1, 1, 0), &int(1));
        let fl = flatness_flags(&f, &c);
        assert!(!fl.horizontally_flat && !fl.flat);
        let ric = ricci(&f, &c);
        assert_eq!(ric.rc[[0, 0]], int(1));
        assert_eq!(ric.rc[[1, 1]], int(1));
        assert_eq!(ric.s0, int(2));
    }

    #[test]
    fn tor_derived_examples() {
        let (f, d, _) = setup("c3_basic");
        let td = tor_derived(&f, &d.conn, &d.tor);
        // TOR₂(X,X,Y) = Tor(X,-T) = S/2
        assert_eq!(td.tor2[[0, 0, 1, 3]], frac(1, 2));
        let (f, d, _) = setup("heisenberg3");
        let td = tor_derived(&f, &d.conn, &d.tor);
        // ⟨J(X,T),Y⟩ = ⟨Tor(X,Y),T⟩ = -1, a horizontal output
        assert_eq!(td.j[[0, 2, 1]], int(-1));
        assert_eq!(td.j0[[0, 2, 1]], int(-1));
        assert!(td.j1.is_zero());
    }

    #[test]
    fn cyclic_of_totally_antisymmetric() {
        let eps = Tensor::from_fn(3, 3, |i| {
            let (a, b, c) = (i[0] as i64, i[1] as i64, i[2] as i64);
            int((a - b) * (b - c) * (c - a) / 2)
        });
        assert_eq!(cyclic(&eps), eps.map(|x| x * int(3)));
    }

    #[test]
    fn unconditional_identities_on_catalog() {
        for f in builtin_catalog() {
            let d = ConnectionData::new(&f).unwrap();
            let c = curvature(&f, &d.conn);
            let nf = normality_flags(&f);
            let td = tor_derived(&f, &d.conn, &d.tor);
            for ch in symmetry_residuals(&f, &c).checks() {
                assert!(ch.residual.is_zero(), "{} {}", f.name, ch.name);
            }
            let ab = algebraic_bianchi_residual(&f, &c, &td, &nf);
            for ch in ab.checks() {
                assert_ne!(ch.status, crate::checks::Status::Fail, "{} {}", f.name, ch.name);
            }
            let ps = pair_symmetry(&f, &c, &nf);
            assert!(ps.reduction.residual.is_zero());
            assert_ne!(ps.horizontal.status, crate::checks::Status::Fail, "{}", f.name);
            assert_ne!(ps.three_horizontal.status, crate::checks::Status::Fail, "{}", f.name);
            let db = differential_bianchi_residual(&f, &d.conn, &d.tor, &c, &nf);
            assert!(db.first.residual.is_zero(), "{}", f.name);
            assert_ne!(db.second.status, crate::checks::Status::Fail, "{}", f.name);
            let ric = ricci(&f, &c);
            for ch in ricci_checks(&f, &d.conn, &ric, &nf).checks() {
                assert_ne!(ch.status, crate::checks::Status::Fail, "{} {}", f.name, ch.name);
            }
        }
    }
}
