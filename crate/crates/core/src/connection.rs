//! The symmetrized Lie-derivative tensors B and C, normality, and the
//! canonical graded connection with its torsion.

use num_traits::Zero;
use thiserror::Error;

use crate::checks::{Check, Residual};
use crate::exactnum::{half, Scalar};
use crate::frame::{subgrading, validate_algebra, validate_grading, GradedFrameSpec};
use crate::tensor::{MultiIndex, Tensor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectionError {
    #[error("structure constants fail antisymmetry or the Jacobi identity")]
    InvalidAlgebra,
    #[error("grading axiom fails at j = {0}")]
    InvalidGrading(usize),
    #[error("variance signature has {given} slots but the tensor has rank {rank}")]
    SignatureMismatch { given: usize, rank: usize },
}

/// `B(E_a, E_b, E_c) = ⟨[E_a,E_c],E_b⟩ + ⟨[E_b,E_c],E_a⟩` (constant metric).
pub fn b_tensor(f: &GradedFrameSpec) -> Tensor<Scalar> {
    Tensor::from_fn(f.dim(), 3, |i| f.c(i[0], i[2], i[1]) + f.c(i[1], i[2], i[0]))
}

/// `B⁽ʲ⁾`: `B` on `V⁽ʲ⁾ × V⁽ʲ⁾ × V̂⁽ʲ⁾`, zero elsewhere.
pub fn b_j(f: &GradedFrameSpec, j: usize) -> Tensor<Scalar> {
    let b = b_tensor(f);
    Tensor::from_fn(f.dim(), 3, |i| {
        if f.grade(i[0]) == j && f.grade(i[1]) == j && f.grade(i[2]) != j {
            b.at(i).clone()
        } else {
            Scalar::zero()
        }
    })
}

/// `C⁽ʲ⁾[a][b][k] = B⁽ʲ⁾(E_a, E_k, E_b)` for `k ∈ V⁽ʲ⁾`.
pub fn c_tensor(f: &GradedFrameSpec, j: usize) -> Tensor<Scalar> {
    let bj = b_j(f, j);
    Tensor::from_fn(f.dim(), 3, |i| {
        if f.grade(i[2]) == j {
            bj[[i[0], i[2], i[1]]].clone()
        } else {
            Scalar::zero()
        }
    })
}

/// The j-trace `Σ_i B⁽ʲ⁾(E_i⁽ʲ⁾, E_i⁽ʲ⁾, ·)` as a covector.
pub fn trace_bj(f: &GradedFrameSpec, j: usize) -> Vec<Scalar> {
    let bj = b_j(f, j);
    (0..f.dim()).map(|c| f.indices_of_grade(j).into_iter().map(|i| bj[[i, i, c]].clone()).sum()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityFlags {
    pub j_normal: Vec<bool>,
    pub strictly_normal: bool,
    /// The rigidity 1-form on the frame; vertical components vanish.
    pub rigidity_form: Vec<Scalar>,
    /// Rigidity form vanishes for the frame metric (not quantified over
    /// other extensions).
    pub vertically_rigid_for_this_metric: bool,
}

impl NormalityFlags {
    /// `VM` is normal iff the grading is 0-normal (grading independent).
    pub fn vm_normal(&self) -> bool {
        self.j_normal[0]
    }
}

pub fn normality_flags(f: &GradedFrameSpec) -> NormalityFlags {
    let j_normal: Vec<bool> = (0..=f.steps()).map(|j| b_j(f, j).is_zero()).collect();
    let mut rigidity_form = vec![Scalar::zero(); f.dim()];
    for j in 1..=f.steps() {
        for (c, v) in trace_bj(f, j).into_iter().enumerate() {
            if f.is_horizontal(c) {
                rigidity_form[c] += v;
            }
        }
    }
    let vertically_rigid_for_this_metric = rigidity_form.iter().all(Zero::is_zero);
    NormalityFlags {
        strictly_normal: j_normal.iter().all(|&v| v),
        j_normal,
        rigidity_form,
        vertically_rigid_for_this_metric,
    }
}

/// `∇_{E_a} E_b = Σ_k gamma[a][b][k] E_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnCoeffs {
    pub gamma: Tensor<Scalar>,
}

impl ConnCoeffs {
    pub fn get(&self, a: usize, b: usize, k: usize) -> &Scalar {
        &self.gamma[[a, b, k]]
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }
}

/// `Tor(E_a, E_b) = Σ_k tor[a][b][k] E_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionTensor {
    pub tor: Tensor<Scalar>,
}

impl TorsionTensor {
    pub fn get(&self, a: usize, b: usize, k: usize) -> &Scalar {
        &self.tor[[a, b, k]]
    }

    pub fn dim(&self) -> usize {
        self.tor.dim()
    }
}

pub fn canonical_connection(f: &GradedFrameSpec) -> Result<ConnCoeffs, ConnectionError> {
    if !validate_algebra(f.sc()).passes() {
        return Err(ConnectionError::InvalidAlgebra);
    }
    let rep = validate_grading(f);
    if let Some(j) = rep.grading_valid.iter().position(|&v| !v) {
        return Err(ConnectionError::InvalidGrading(j));
    }
    Ok(canonical_connection_unchecked(f))
}

/// The canonical connection without validating the input first.
pub fn canonical_connection_unchecked(f: &GradedFrameSpec) -> ConnCoeffs {
    let b = b_tensor(f);
    let h = half();
    let gamma = Tensor::from_fn(f.dim(), 3, |i| {
        let (a, bb, k) = (i[0], i[1], i[2]);
        let g = f.grade(bb);
        if f.grade(k) != g {
            Scalar::zero()
        } else if f.grade(a) == g {
            // Koszul formula inside one grade
            (f.c(a, bb, k) - f.c(bb, k, a) - f.c(a, k, bb)) * &h
        } else {
            // projected bracket plus the C⁽ʲ⁾ correction
            f.c(a, bb, k) + &b[[bb, k, a]] * &h
        }
    });
    ConnCoeffs { gamma }
}

pub fn torsion(f: &GradedFrameSpec, conn: &ConnCoeffs) -> TorsionTensor {
    let tor = Tensor::from_fn(f.dim(), 3, |i| conn.get(i[0], i[1], i[2]) - conn.get(i[1], i[0], i[2]) - f.c(i[0], i[1], i[2]));
    TorsionTensor { tor }
}

/// Outcome of the four defining properties of the canonical connection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub metric_compatible: Check,
    pub grades_parallel: Check,
    pub torsion_in_complement: Check,
    pub torsion_symmetry: Check,
}

impl AxiomReport {
    pub fn checks(&self) -> [&Check; 4] {
        [&self.metric_compatible, &self.grades_parallel, &self.torsion_in_complement, &self.torsion_symmetry]
    }

    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|c| c.residual.is_zero())
    }
}

pub fn verify_axioms(f: &GradedFrameSpec, conn: &ConnCoeffs, t: &TorsionTensor) -> AxiomReport {
    let n = f.dim();
    let triples = || MultiIndex::new(n, 3);
    let metric = Residual::from_entries(triples().map(|i| {
        let v = conn.get(i[0], i[1], i[2]) + conn.get(i[0], i[2], i[1]);
        (i, v)
    }));
    let parallel = Residual::from_entries(
        triples().filter(|i| f.grade(i[1]) != f.grade(i[2])).map(|i| {
            let v = conn.get(i[0], i[1], i[2]).clone();
            (i, v)
        }),
    );
    let complement = Residual::from_entries(
        triples()
            .filter(|i| f.grade(i[0]) == f.grade(i[1]) && f.grade(i[1]) == f.grade(i[2]))
            .map(|i| {
                let v = t.get(i[0], i[1], i[2]).clone();
                (i, v)
            }),
    );
    // ⟨Tor(X⁽ʲ⁾,Y),Z⁽ʲ⁾⟩ = ⟨Tor(Z⁽ʲ⁾,Y),X⁽ʲ⁾⟩
    let symmetry = Residual::from_entries(
        triples().filter(|i| f.grade(i[0]) == f.grade(i[2])).map(|i| {
            let v = t.get(i[0], i[1], i[2]) - t.get(i[2], i[1], i[0]);
            (i, v)
        }),
    );
    AxiomReport {
        metric_compatible: Check::unconditional("metric compatibility", metric),
        grades_parallel: Check::unconditional("each grade parallel", parallel),
        torsion_in_complement: Check::unconditional("Tor(V_j,V_j) in complement of V_j", complement),
        torsion_symmetry: Check::unconditional("torsion symmetry", symmetry),
    }
}

/// Compares the canonical connections of every subgrading with that of
/// the full grading: `∇⁽ᵏ⁾ X⁽ⁱ⁾ = ∇ X⁽ⁱ⁾` for `i < k`, and horizontal
/// derivatives and torsions coincide across all gradings.
pub fn grading_independence_check(f: &GradedFrameSpec) -> Result<Check, ConnectionError> {
    let full = canonical_connection(f)?;
    let full_tor = torsion(f, &full);
    let n = f.dim();
    let mut res = Residual::zero();
    for k in 1..f.steps() {
        let sub = subgrading(f, k).map_err(|_| ConnectionError::InvalidGrading(k))?;
        let conn = canonical_connection(&sub)?;
        let tor = torsion(&sub, &conn);
        res = res.max(Residual::from_entries(
            MultiIndex::new(n, 3).filter(|i| f.grade(i[1]) < k).map(|i| {
                let v = conn.get(i[0], i[1], i[2]) - full.get(i[0], i[1], i[2]);
                (i, v)
            }),
        ));
        res = res.max(Residual::from_entries(
            MultiIndex::new(n, 3).filter(|i| f.is_horizontal(i[0]) && f.is_horizontal(i[1])).map(|i| {
                let v = tor.get(i[0], i[1], i[2]) - full_tor.get(i[0], i[1], i[2]);
                (i, v)
            }),
        ));
    }
    Ok(Check::unconditional("grading independence", res))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    /// Argument slot (covector index).
    Lower,
    /// Output slot (vector index).
    Upper,
}

/// Covariant derivative of a tensor with constant frame components. The
/// direction is appended as the last slot:
/// `out[i_1..i_k, d] = (∇_{E_d} τ)[i_1..i_k]`.
pub fn cov_deriv_tensor(
    conn: &ConnCoeffs,
    tau: &Tensor<Scalar>,
    variance: &[Variance],
) -> Result<Tensor<Scalar>, ConnectionError> {
    if variance.len() != tau.rank() {
        return Err(ConnectionError::SignatureMismatch { given: variance.len(), rank: tau.rank() });
    }
    let n = tau.dim();
    let rank = tau.rank();
    Ok(Tensor::from_fn(n, rank + 1, |idx| {
        let d = idx[rank];
        let mut acc = Scalar::zero();
        let mut probe = idx[..rank].to_vec();
        for (s, var) in variance.iter().enumerate() {
            let orig = idx[s];
            for e in 0..n {
                let g = match var {
                    Variance::Lower => conn.get(d, orig, e),
                    Variance::Upper => conn.get(d, e, orig),
                };
                if g.is_zero() {
                    continue;
                }
                probe[s] = e;
                let t = tau.at(&probe);
                if t.is_zero() {
                    continue;
                }
                match var {
                    Variance::Lower => acc -= g * t,
                    Variance::Upper => acc += g * t,
                }
            }
            probe[s] = orig;
        }
        acc
    }))
}

/// Canonical connection and torsion computed together.
#[derive(Clone, Debug)]
pub struct ConnectionData {
    pub conn: ConnCoeffs,
    pub tor: TorsionTensor,
}

impl ConnectionData {
    pub fn new(f: &GradedFrameSpec) -> Result<Self, ConnectionError> {
        let conn = canonical_connection(f)?;
        let tor = torsion(f, &conn);
        Ok(ConnectionData { conn, tor })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int};
    use crate::frame::catalog_entry;

    fn data(name: &str) -> (GradedFrameSpec, ConnectionData) {
        let f = catalog_entry(name).unwrap();
        let d = ConnectionData::new(&f).unwrap();
        (f, d)
    }

    #[test]
    fn c3_basic_values() {
        let (f, d) = data("c3_basic");
        let (x, y, t, s) = (0, 1, 2, 3);
        assert_eq!(d.conn.get(x, t, s), &frac(1, 2));
        assert_eq!(d.conn.get(x, s, t), &frac(-1, 2));
        assert_eq!(d.tor.get(x, y, t), &int(-1));
        assert_eq!(d.tor.get(x, t, s), &frac(-1, 2));
        assert_eq!(d.tor.get(x, s, t), &frac(-1, 2));
        assert_eq!(b_tensor(&f)[[t, s, x]], int(-1));
        let nonzero: Vec<_> = d.conn.gamma.nonzero_entries().map(|(i, _)| i).collect();
        assert_eq!(nonzero, vec![vec![x, t, s], vec![x, s, t]]);
    }

    #[test]
    fn c3_full_grading_is_parallel() {
        let (_, d) = data("c3");
        assert!(d.conn.gamma.is_zero());
        assert_eq!(d.tor.get(0, 1, 2), &int(-1));
        assert_eq!(d.tor.get(0, 2, 3), &int(-1));
        assert!((0..4).all(|k| d.tor.get(0, 3, k).is_zero()));
    }

    #[test]
    fn su2_connection() {
        let (_, d) = data("su2");
        let (x, y, t) = (0, 1, 2);
        assert_eq!(d.conn.get(t, x, y), &int(1));
        assert_eq!(d.conn.get(t, y, x), &int(-1));
        assert_eq!(d.conn.gamma.nonzero_entries().count(), 2);
    }

    #[test]
    fn sn_connection_sign() {
        let (f, d) = data("sn");
        let (x, t, s) = (0, 2, 3);
        assert_eq!(d.conn.get(x, t, s), &int(1));
        assert_eq!(d.conn.get(x, s, t), &int(-1));
        assert!(normality_flags(&f).strictly_normal);
    }

    #[test]
    fn normality_examples() {
        let c3 = normality_flags(&catalog_entry("c3").unwrap());
        assert!(c3.strictly_normal);
        let basic = normality_flags(&catalog_entry("c3_basic").unwrap());
        assert_eq!(basic.j_normal, vec![true, false]);
        assert!(!normality_flags(&catalog_entry("nonunimodular3").unwrap()).vertically_rigid_for_this_metric);
        assert!(!normality_flags(&catalog_entry("su2_squashed").unwrap()).vm_normal());
    }

    #[test]
    fn axioms_hold_and_perturbation_breaks_them() {
        let (f, mut d) = data("heisenberg3");
        assert!(verify_axioms(&f, &d.conn, &d.tor).all_pass());
        d.conn.gamma[[0, 0, 1]] += int(1);
        let rep = verify_axioms(&f, &d.conn, &torsion(&f, &d.conn));
        assert!(!rep.metric_compatible.residual.is_zero());
    }

    #[test]
    fn covariant_derivative_examples() {
        let (f, d) = data("c3_basic");
        let sig = [Variance::Lower, Variance::Lower, Variance::Upper];
        let nt = cov_deriv_tensor(&d.conn, &d.tor.tor, &sig).unwrap();
        // (∇_X Tor)(X, Y) = -S/2
        assert_eq!(nt[[0, 1, 3, 0]], frac(-1, 2));
        let metric = Tensor::from_fn(f.dim(), 2, |i| if i[0] == i[1] { int(1) } else { int(0) });
        assert!(cov_deriv_tensor(&d.conn, &metric, &[Variance::Lower, Variance::Lower]).unwrap().is_zero());
        assert_eq!(
            cov_deriv_tensor(&d.conn, &metric, &[Variance::Lower]),
            Err(ConnectionError::SignatureMismatch { given: 1, rank: 2 })
        );
    }

    #[test]
    fn grading_independence_on_c3() {
        assert!(grading_independence_check(&catalog_entry("c3").unwrap()).unwrap().residual.is_zero());
        assert!(grading_independence_check(&catalog_entry("heisenberg3").unwrap()).unwrap().residual.is_zero());
    }
}
