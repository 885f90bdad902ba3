//! Everything derived from a frame spec in one place, computed once.

use crate::checks::Check;
use crate::connection::{
    grading_independence_check, normality_flags, verify_axioms, ConnCoeffs, ConnectionData, ConnectionError,
    NormalityFlags, TorsionTensor,
};
use crate::curvature::{
    algebraic_bianchi_residual, curvature, differential_bianchi_residual, pair_symmetry, ricci, ricci_checks,
    symmetry_residuals, tor_derived, CurvTensor, RicciData, TorDerived,
};
use crate::frame::{validate_grading, GradedFrameSpec, GradingReport};

#[derive(Clone, Debug)]
pub struct Geometry {
    pub spec: GradedFrameSpec,
    pub grading: GradingReport,
    pub normality: NormalityFlags,
    pub conn: ConnCoeffs,
    pub tor: TorsionTensor,
    pub curv: CurvTensor,
    pub ricci: RicciData,
    pub td: TorDerived,
}

impl Geometry {
    pub fn new(spec: &GradedFrameSpec) -> Result<Self, ConnectionError> {
        let ConnectionData { conn, tor } = ConnectionData::new(spec)?;
        let curv = curvature(spec, &conn);
        let ric = ricci(spec, &curv);
        let td = tor_derived(spec, &conn, &tor);
        Ok(Geometry {
            spec: spec.clone(),
            grading: validate_grading(spec),
            normality: normality_flags(spec),
            conn,
            tor,
            curv,
            ricci: ric,
            td,
        })
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn vm_integrable(&self) -> bool {
        self.grading.vm_integrable
    }

    /// Connection axioms followed by every curvature identity. Conditional
    /// identities report `Unmet` when their hypotheses fail.
    pub fn identity_checks(&self) -> Vec<Check> {
        let f = &self.spec;
        let mut out: Vec<Check> = verify_axioms(f, &self.conn, &self.tor).checks().into_iter().cloned().collect();
        if let Ok(c) = grading_independence_check(f) {
            out.push(c);
        }
        out.extend(symmetry_residuals(f, &self.curv).checks().into_iter().cloned());
        out.extend(algebraic_bianchi_residual(f, &self.curv, &self.td, &self.normality).checks().into_iter().cloned());
        let ps = pair_symmetry(f, &self.curv, &self.normality);
        out.extend([ps.reduction, ps.horizontal, ps.three_horizontal]);
        let db = differential_bianchi_residual(f, &self.conn, &self.tor, &self.curv, &self.normality);
        out.extend([db.first, db.second]);
        out.extend(ricci_checks(f, &self.conn, &self.ricci, &self.normality).checks().into_iter().cloned());
        out
    }
}

/// Vector-level evaluation of the frame tensors, for checking identities
/// on arbitrary (not only basis) rational vectors.
pub mod vec {
    use num_traits::Zero;

    use crate::exactnum::Scalar;
    use crate::tensor::Tensor;

    /// Contracts the leading slots of `t` with `args`; the remaining slot
    /// (if any) is returned as a vector.
    pub fn contract(t: &Tensor<Scalar>, args: &[&[Scalar]]) -> Vec<Scalar> {
        let n = t.dim();
        let free = t.rank() - args.len();
        assert!(free <= 1, "at most one free slot");
        let mut out = vec![Scalar::zero(); if free == 1 { n } else { 1 }];
        let mut idx = vec![0usize; t.rank()];
        rec(t, args, 0, Scalar::from_integer(1.into()), &mut idx, &mut out, free == 1);
        out
    }

    fn rec(
        t: &Tensor<Scalar>,
        args: &[&[Scalar]],
        depth: usize,
        weight: Scalar,
        idx: &mut Vec<usize>,
        out: &mut [Scalar],
        has_free: bool,
    ) {
        if depth == args.len() {
            if has_free {
                for k in 0..t.dim() {
                    idx[depth] = k;
                    let v = t.at(idx);
                    if !v.is_zero() {
                        out[k] += &weight * v;
                    }
                }
            } else {
                out[0] += &weight * t.at(idx);
            }
            return;
        }
        for (i, a) in args[depth].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            idx[depth] = i;
            rec(t, args, depth + 1, &weight * a, idx, out, has_free);
        }
    }

    pub fn scalar(t: &Tensor<Scalar>, args: &[&[Scalar]]) -> Scalar {
        assert_eq!(t.rank(), args.len());
        contract(t, args).swap_remove(0)
    }

    pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
        a.iter().zip(b).filter(|(x, _)| !x.is_zero()).map(|(x, y)| x * y).sum()
    }

    pub fn norm2(a: &[Scalar]) -> Scalar {
        dot(a, a)
    }

    pub fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(a: &[Scalar], s: &Scalar) -> Vec<Scalar> {
        a.iter().map(|x| x * s).collect()
    }

    /// Keeps the components where `keep` is true.
    pub fn project(a: &[Scalar], keep: impl Fn(usize) -> bool) -> Vec<Scalar> {
        a.iter().enumerate().map(|(i, x)| if keep(i) { x.clone() } else { Scalar::zero() }).collect()
    }

    pub fn unit(n: usize, i: usize) -> Vec<Scalar> {
        (0..n).map(|k| if k == i { Scalar::from_integer(1.into()) } else { Scalar::zero() }).collect()
    }
}
