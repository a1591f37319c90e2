//! Scalar types shared by the solver, the empirical models and the builders.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, Num, One, Signed, Zero};

/// Exact arbitrary-precision rational used for every probability in the crate.
pub type Rational = BigRational;

/// Scalar field the simplex solver runs over.
///
/// Exact types compare against zero exactly; floating types use a small
/// absolute tolerance so that the same pivoting code can be reused.
pub trait LpScalar: Clone + Debug + Num + Signed + PartialOrd {
    fn is_zero_tol(&self) -> bool {
        self.is_zero()
    }

    fn is_positive_tol(&self) -> bool {
        self.is_positive()
    }

    fn is_negative_tol(&self) -> bool {
        self.is_negative()
    }
}

impl LpScalar for BigRational {}
impl LpScalar for Ratio<i64> {}

macro_rules! float_lp_scalar {
    ($t:ty, $eps:expr) => {
        impl LpScalar for $t {
            fn is_zero_tol(&self) -> bool {
                self.abs() <= $eps
            }

            fn is_positive_tol(&self) -> bool {
                *self > $eps
            }

            fn is_negative_tol(&self) -> bool {
                *self < -$eps
            }
        }
    };
}

float_lp_scalar!(f64, 1e-12);
float_lp_scalar!(f32, 1e-6);

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a plain integer string into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// `"p/q"` in lowest terms, `"p"` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Closest rational with denominator at most `max_denominator`, computed from
/// the exact binary value of `x` by continued fractions.
pub fn limit_denominator(value: &Rational, max_denominator: &BigInt) -> Rational {
    if value.denom() <= max_denominator {
        return value.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (
        BigInt::zero(),
        BigInt::one(),
        BigInt::one(),
        BigInt::zero(),
    );
    let mut n = value.numer().clone();
    let mut d = value.denom().clone();
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_denominator {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let rem = &n - &a * &d;
        n = std::mem::replace(&mut d, rem);
        if d.is_zero() {
            break;
        }
    }
    let k = (max_denominator - &q0).div_floor(&q1);
    let bound1 = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let bound2 = Rational::new(p1, q1);
    if (&bound2 - value).abs() <= (&bound1 - value).abs() {
        bound2
    } else {
        bound1
    }
}

/// Snaps a floating value onto the nearest rational with bounded denominator,
/// failing when that rational is farther than `tolerance` from `x`.
pub fn snap<F: Float>(x: F, tolerance: f64, max_denominator: u64) -> Option<Rational> {
    let x = x.to_f64()?;
    let exact = Rational::from_float(x)?;
    let snapped = limit_denominator(&exact, &BigInt::from(max_denominator));
    let back = rational_to_f64(&snapped);
    if (back - x).abs() <= tolerance {
        Some(snapped)
    } else {
        None
    }
}

pub fn rational_to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats() {
        assert_eq!(parse_rational("1/3"), Some(rational(1, 3)));
        assert_eq!(parse_rational(" 2/4 "), Some(rational(1, 2)));
        assert_eq!(parse_rational("0"), Some(rational_int(0)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&rational(3, 12)), "1/4");
        assert_eq!(format_rational(&rational(4, 4)), "1");
    }

    #[test]
    fn snaps_common_fractions() {
        assert_eq!(snap(1.0f64 / 3.0, 1e-9, 1_000_000), Some(rational(1, 3)));
        assert_eq!(snap(1.0f64 / 12.0, 1e-9, 1_000_000), Some(rational(1, 12)));
        assert_eq!(snap(0.75f32, 1e-6, 1_000_000), Some(rational(3, 4)));
        assert_eq!(snap(-0.5f64, 1e-9, 1_000_000), Some(rational(-1, 2)));
        // pi has no rational within 1e-14 under this bound
        assert_eq!(snap(std::f64::consts::PI, 1e-14, 1_000_000), None);
    }

    #[test]
    fn limit_denominator_matches_continued_fractions() {
        let pi = Rational::from_float(std::f64::consts::PI).unwrap();
        assert_eq!(limit_denominator(&pi, &BigInt::from(10)), rational(22, 7));
        assert_eq!(limit_denominator(&pi, &BigInt::from(1000)), rational(355, 113));
    }
}
