//! Truncated multivariate Taylor series ("jets") through total order 3 and
//! the pointwise differential identities evaluated with them on coordinate
//! models.

mod calculus;
mod expr;
mod model;
mod suite;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{to_f64, Scalar};

pub use calculus::{
    bochner_residual, cd_pointwise_check, com_check, divergence_check, gamma_forms, hessian, hgrad, hlap,
    hlap_finite_difference, structure_residual, BochnerVariant, CdConstants, GammaForms,
};
pub use expr::{parse_expr, Expr};
pub use model::{builtin_models, model, CoordModel, Mode};
pub use suite::{run_suite, test_functions, SuiteOptions, FD_TOL, FLOAT_TOL};

/// Highest total order carried by a jet.
pub const MAX_ORDER: u8 = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JetError {
    #[error("unsupported atom `{0}` in this numeric mode")]
    UnsupportedAtom(String),
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("hypotheses not met: {0}")]
    HypothesisNotMet(String),
    #[error("derivative order exhausted")]
    OrderExhausted,
}

/// Coefficient field of a jet: exact rationals or `f64`.
pub trait Num:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_scalar(s: &Scalar) -> Self;
    /// `(sin x, cos x)`, when representable.
    fn sin_cos(&self) -> Option<(Self, Self)>;
    fn as_f64(&self) -> f64;
    /// The value itself in exact mode.
    fn exact(&self) -> Option<Scalar>;
}

impl Num for Scalar {
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn sin_cos(&self) -> Option<(Self, Self)> {
        self.is_zero().then(|| (Scalar::zero(), Scalar::one()))
    }
    fn as_f64(&self) -> f64 {
        to_f64(self)
    }
    fn exact(&self) -> Option<Scalar> {
        Some(self.clone())
    }
}

impl Num for f64 {
    fn from_scalar(s: &Scalar) -> Self {
        to_f64(s)
    }
    fn sin_cos(&self) -> Option<(Self, Self)> {
        Some(f64::sin_cos(*self))
    }
    fn as_f64(&self) -> f64 {
        *self
    }
    fn exact(&self) -> Option<Scalar> {
        None
    }
}

/// Monomial bookkeeping for jets in `n` variables.
#[derive(Debug)]
pub struct JetSpace {
    n: usize,
    degree: Vec<u8>,
    index: HashMap<Vec<u8>, usize>,
    /// `(i, j, k)`: monomial `i` times monomial `j` is monomial `k`.
    products: Vec<(usize, usize, usize)>,
    /// Per variable `m`: `(target, source, factor)` with
    /// `∂_m x^source = factor · x^target`.
    derivs: Vec<Vec<(usize, usize, u8)>>,
}

impl JetSpace {
    pub fn new(n: usize) -> Arc<Self> {
        let mut monos: Vec<Vec<u8>> = vec![vec![0; n]];
        for d in 1..=MAX_ORDER {
            let prev: Vec<Vec<u8>> = monos.iter().filter(|m| m.iter().sum::<u8>() == d - 1).cloned().collect();
            for m in prev {
                // Extend only at or after the last nonzero slot so each
                // monomial is generated once.
                let start = m.iter().rposition(|&e| e > 0).unwrap_or(0);
                for v in start..n {
                    let mut next = m.clone();
                    next[v] += 1;
                    monos.push(next);
                }
            }
        }
        let index: HashMap<Vec<u8>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let degree: Vec<u8> = monos.iter().map(|m| m.iter().sum()).collect();
        let mut products = Vec::new();
        for (i, a) in monos.iter().enumerate() {
            for (j, b) in monos.iter().enumerate() {
                if degree[i] + degree[j] <= MAX_ORDER {
                    let s: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    products.push((i, j, index[&s]));
                }
            }
        }
        let derivs = (0..n)
            .map(|m| {
                monos
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a[m] > 0)
                    .map(|(src, a)| {
                        let mut t = a.clone();
                        t[m] -= 1;
                        (index[&t], src, a[m])
                    })
                    .collect()
            })
            .collect();
        Arc::new(JetSpace { n, degree, index, products, derivs })
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degree.is_empty()
    }
}

/// Taylor coefficients `f = Σ_α c_α (x − p)^α` valid through `order`.
#[derive(Clone, Debug)]
pub struct Jet<T: Num> {
    space: Arc<JetSpace>,
    order: u8,
    c: Vec<T>,
}

impl<T: Num> Jet<T> {
    pub fn constant(space: &Arc<JetSpace>, v: T) -> Self {
        let mut c = vec![T::zero(); space.len()];
        c[0] = v;
        Jet { space: space.clone(), order: MAX_ORDER, c }
    }

    /// The coordinate function `x_i` expanded at a point where it equals `at`.
    pub fn variable(space: &Arc<JetSpace>, i: usize, at: T) -> Self {
        let mut j = Self::constant(space, at);
        j.c[1 + i] = T::one();
        j
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn value(&self) -> T {
        self.c[0].clone()
    }

    /// Coefficient of a monomial given as an exponent vector.
    pub fn coeff(&self, exps: &[u8]) -> Option<T> {
        let deg: u8 = exps.iter().sum();
        if deg > self.order {
            return None;
        }
        self.space.index.get(exps).map(|&i| self.c[i].clone())
    }

    fn truncated(mut self) -> Self {
        for (x, &d) in self.c.iter_mut().zip(&self.space.degree) {
            if d > self.order {
                *x = T::zero();
            }
        }
        self
    }

    pub fn scale(&self, s: &T) -> Self {
        Jet { space: self.space.clone(), order: self.order, c: self.c.iter().map(|x| x.clone() * s.clone()).collect() }
    }

    /// `∂/∂x_m`; consumes one order.
    pub fn deriv(&self, m: usize) -> Result<Self, JetError> {
        if self.order == 0 {
            return Err(JetError::OrderExhausted);
        }
        let mut c = vec![T::zero(); self.c.len()];
        for &(t, s, k) in &self.space.derivs[m] {
            c[t] = self.c[s].clone() * T::from_scalar(&Scalar::from_integer(k.into()));
        }
        Ok(Jet { space: self.space.clone(), order: self.order - 1, c }.truncated())
    }

    pub fn sin_cos(&self) -> Result<(Self, Self), JetError> {
        let a = self.value();
        let (s, co) = a.sin_cos().ok_or_else(|| JetError::UnsupportedAtom("sin/cos".into()))?;
        let h = self.clone() - Jet::constant(&self.space, a);
        let h2 = h.clone() * h.clone();
        let h3 = h2.clone() * h.clone();
        let half = T::from_scalar(&crate::exactnum::half());
        let sixth = T::from_scalar(&crate::exactnum::frac(1, 6));
        let cos_h = Jet::constant(&self.space, T::one()) - h2.scale(&half);
        let sin_h = h - h3.scale(&sixth);
        let sin = cos_h.scale(&s) + sin_h.scale(&co);
        let cos = cos_h.scale(&co) - sin_h.scale(&s);
        Ok((sin, cos))
    }
}

impl<T: Num> Add for Jet<T> {
    type Output = Jet<T>;
    fn add(self, o: Jet<T>) -> Jet<T> {
        let order = self.order.min(o.order);
        let c = self.c.into_iter().zip(o.c).map(|(a, b)| a + b).collect();
        Jet { space: self.space, order, c }.truncated()
    }
}

impl<T: Num> Sub for Jet<T> {
    type Output = Jet<T>;
    fn sub(self, o: Jet<T>) -> Jet<T> {
        self + (-o)
    }
}

impl<T: Num> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        Jet { space: self.space, order: self.order, c: self.c.into_iter().map(|x| -x).collect() }
    }
}

impl<T: Num> Mul for Jet<T> {
    type Output = Jet<T>;
    fn mul(self, o: Jet<T>) -> Jet<T> {
        let order = self.order.min(o.order);
        let mut c = vec![T::zero(); self.c.len()];
        for &(i, j, k) in &self.space.products {
            if self.space.degree[k] <= order && !self.c[i].is_zero() && !o.c[j].is_zero() {
                c[k] = c[k].clone() + self.c[i].clone() * o.c[j].clone();
            }
        }
        Jet { space: self.space, order, c }
    }
}
