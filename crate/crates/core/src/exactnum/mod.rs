//! Exact scalar kernel: rationals, symmetric forms with certified
//! semidefiniteness tests, and Laurent polynomials in one variable.

mod laurent;
mod linalg;
mod symform;

pub use laurent::{Laurent, LaurentError};
pub use linalg::{nullspace, rank, rref};
pub use symform::{min_eig_bounds, psd_check, simplest_between, SymForm};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn half() -> Scalar {
    frac(1, 2)
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn fmt_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `-p`, or `p/q` with integer `p`, `q` (q nonzero).
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    if !is_integer_literal(num) || !is_integer_literal(den) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

fn is_integer_literal(s: &str) -> bool {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Nearest rational with denominator `2^bits`; used to turn float
/// search directions into exact test vectors.
pub fn from_f64_dyadic(x: f64, bits: u32) -> Scalar {
    let scale = (1u64 << bits) as f64;
    let n = (x * scale).round();
    BigRational::new(BigInt::from(n as i64), BigInt::from(1u64 << bits))
}

pub fn max_abs<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
    xs.into_iter()
        .map(|x| x.abs())
        .fold(Scalar::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders_and_parses() {
        assert_eq!(fmt_scalar(&frac(-3, 6)), "-1/2");
        assert_eq!(fmt_scalar(&int(4)), "4");
        assert_eq!(parse_scalar("-1/2"), Some(frac(-1, 2)));
        assert_eq!(parse_scalar(" 7 "), Some(int(7)));
        assert_eq!(parse_scalar("1.5x"), None);
        assert_eq!(parse_scalar("1/0"), None);
        assert_eq!(parse_scalar("/3"), None);
    }

    proptest! {
        #[test]
        fn addition_is_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = frac(a, b);
            let y = frac(c, d);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            prop_assert_eq!(parse_scalar(&fmt_scalar(&x)), Some(x));
        }
    }
}
