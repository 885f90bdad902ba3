//! Residuals and pass/fail bookkeeping shared by every identity suite.

use num_traits::{Signed, Zero};

use crate::exactnum::{fmt_scalar, Scalar};

/// Largest absolute component of a residual tensor, with the first index
/// where it is attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub max_abs: Scalar,
    pub witness: Option<Vec<usize>>,
}

impl Residual {
    pub fn zero() -> Self {
        Residual { max_abs: Scalar::zero(), witness: None }
    }

    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, Scalar)>,
    {
        let mut out = Residual::zero();
        for (idx, v) in entries {
            let a = v.abs();
            if a > out.max_abs {
                out.max_abs = a;
                out.witness = Some(idx);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.max_abs.is_zero()
    }

    /// Combines two residuals, keeping the worse one.
    pub fn max(self, other: Residual) -> Residual {
        if other.max_abs > self.max_abs {
            other
        } else {
            self
        }
    }

    pub fn describe(&self, labels: &[String]) -> String {
        match &self.witness {
            None => "0".to_string(),
            Some(idx) => {
                let names: Vec<&str> = idx.iter().map(|&i| labels.get(i).map_or("?", String::as_str)).collect();
                format!("{} at ({})", fmt_scalar(&self.max_abs), names.join(","))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    /// Hypotheses of a conditional statement do not hold; the value is
    /// reported without a guarantee.
    Unmet,
    /// Purely informational.
    Info,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Unmet => "hypothesis-unmet",
            Status::Info => "info",
            Status::Fail => "FAIL",
        }
    }

    /// Status of an identity that is guaranteed when `hypotheses` hold.
    pub fn conditional(hypotheses: bool, holds: bool) -> Status {
        match (hypotheses, holds) {
            (true, true) => Status::Pass,
            (true, false) => Status::Fail,
            (false, _) => Status::Unmet,
        }
    }

    pub fn unconditional(holds: bool) -> Status {
        if holds {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One named identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub residual: Residual,
    pub note: Option<String>,
}

impl Check {
    pub fn unconditional(name: impl Into<String>, residual: Residual) -> Self {
        let status = Status::unconditional(residual.is_zero());
        Check { name: name.into(), status, residual, note: None }
    }

    pub fn conditional(name: impl Into<String>, hypotheses: bool, residual: Residual) -> Self {
        let status = Status::conditional(hypotheses, residual.is_zero());
        let note = (!hypotheses).then(|| "hypotheses not met; no guarantee".to_string());
        Check { name: name.into(), status, residual, note }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Exit-code style aggregation: any failure dominates, then unmet hypotheses.
pub fn overall(statuses: impl IntoIterator<Item = Status>) -> Status {
    let mut worst = Status::Pass;
    for s in statuses {
        worst = match (worst, s) {
            (_, Status::Fail) | (Status::Fail, _) => Status::Fail,
            (_, Status::Unmet) | (Status::Unmet, _) => Status::Unmet,
            _ => Status::Pass,
        };
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int};

    #[test]
    fn residual_tracks_worst_entry() {
        let r = Residual::from_entries(vec![(vec![0], int(0)), (vec![1], frac(-3, 2)), (vec![2], int(1))]);
        assert_eq!(r.max_abs, frac(3, 2));
        assert_eq!(r.witness, Some(vec![1]));
        assert!(Residual::from_entries(Vec::new()).is_zero());
    }

    #[test]
    fn aggregation_order() {
        assert_eq!(overall([Status::Pass, Status::Info]), Status::Pass);
        assert_eq!(overall([Status::Pass, Status::Unmet]), Status::Unmet);
        assert_eq!(overall([Status::Unmet, Status::Fail, Status::Pass]), Status::Fail);
        assert_eq!(Status::conditional(false, false), Status::Unmet);
    }
}
