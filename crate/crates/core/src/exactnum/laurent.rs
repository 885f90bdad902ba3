use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use super::{fmt_scalar, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("coefficient of mu^{0} is nonzero; no finite limit at mu = 0")]
    NegativeExponentAtZero(i32),
    #[error("cannot evaluate a Laurent polynomial at mu = 0")]
    ZeroArgument,
}

/// Laurent polynomial in one variable `mu` with exact rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Laurent {
    terms: BTreeMap<i32, Scalar>,
}

impl Laurent {
    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Scalar, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Laurent { terms }
    }

    /// `mu^exp`
    pub fn mu(exp: i32) -> Self {
        Self::monomial(Scalar::one(), exp)
    }

    pub fn coeff(&self, exp: i32) -> Scalar {
        self.terms.get(&exp).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Scalar)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn lowest_exponent(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn highest_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn scale(&self, s: &Scalar) -> Laurent {
        if s.is_zero() {
            return Laurent::zero();
        }
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    /// Multiplies by `mu^k`.
    pub fn shift(&self, k: i32) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn eval(&self, mu: &Scalar) -> Result<Scalar, LaurentError> {
        if mu.is_zero() {
            return Err(LaurentError::ZeroArgument);
        }
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            acc += c * pow(mu, *e);
        }
        Ok(acc)
    }

    /// Value of the limit `mu -> 0`, defined when no negative powers remain.
    pub fn limit0(&self) -> Result<Scalar, LaurentError> {
        match self.lowest_exponent() {
            Some(e) if e < 0 => Err(LaurentError::NegativeExponentAtZero(e)),
            _ => Ok(self.coeff(0)),
        }
    }

    fn add_term(&mut self, exp: i32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }
}

fn pow(x: &Scalar, e: i32) -> Scalar {
    let mut acc = Scalar::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

impl Zero for Laurent {
    fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(self, rhs: Laurent) -> Laurent {
        &self + &rhs
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        &self * &rhs
    }
}

impl fmt::Display for Laurent {
    /// `Σ (p/q)·μ^k`, highest power first; `0` for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| if *e == 0 { format!("({})", fmt_scalar(c)) } else { format!("({})·μ^{}", fmt_scalar(c), e) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int};
    use proptest::prelude::*;

    #[test]
    fn product_and_evaluation() {
        let p = &(&Laurent::mu(1) + &Laurent::constant(int(1))) * &Laurent::mu(-1);
        assert_eq!(p, &Laurent::constant(int(1)) + &Laurent::mu(-1));
        assert_eq!(p.eval(&int(2)).unwrap(), frac(3, 2));
        assert_eq!(p.lowest_exponent(), Some(-1));
        assert_eq!(p.highest_exponent(), Some(0));
    }

    #[test]
    fn limits() {
        let p = &Laurent::constant(int(3)) + &Laurent::monomial(int(2), 1);
        assert_eq!(p.limit0().unwrap(), int(3));
        assert_eq!(Laurent::mu(-1).limit0(), Err(LaurentError::NegativeExponentAtZero(-1)));
        assert_eq!(Laurent::mu(2).eval(&int(0)), Err(LaurentError::ZeroArgument));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = &Laurent::mu(3) - &Laurent::mu(3);
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
        assert_eq!(Laurent::monomial(frac(-1, 2), -2).to_string(), "(-1/2)·μ^-2");
    }

    fn laurent() -> impl Strategy<Value = Laurent> {
        proptest::collection::vec((-3i32..4, -9i64..9, 1i64..6), 0..4).prop_map(|ts| {
            ts.into_iter().fold(Laurent::zero(), |acc, (e, p, q)| &acc + &Laurent::monomial(frac(p, q), e))
        })
    }

    proptest! {
        #[test]
        fn eval_is_ring_homomorphism(a in laurent(), b in laurent(), p in 1i64..20, q in 1i64..20, neg in any::<bool>()) {
            let mu = if neg { frac(-p, q) } else { frac(p, q) };
            let (ea, eb) = (a.eval(&mu).unwrap(), b.eval(&mu).unwrap());
            prop_assert_eq!((&a + &b).eval(&mu).unwrap(), &ea + &eb);
            prop_assert_eq!((&a * &b).eval(&mu).unwrap(), &ea * &eb);
        }
    }
}
