use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact ordered ring element. Implemented for `BigInt` and `BigRational`.
pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + Ord + Signed + Send + Sync + 'static
{
    fn from_int(v: &BigInt) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_int(&BigInt::from(v))
    }

    /// `max(self, 0)`.
    fn pos_part(&self) -> Self {
        if self.is_positive() {
            self.clone()
        } else {
            Self::zero()
        }
    }

    /// Sign as -1, 0 or 1.
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

/// A [`Scalar`] with exact division.
pub trait Field: Scalar {
    fn recip(&self) -> Self;
}

impl Scalar for BigInt {
    fn from_int(v: &BigInt) -> Self {
        v.clone()
    }
}

impl Scalar for BigRational {
    fn from_int(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

impl Field for BigRational {
    fn recip(&self) -> Self {
        BigRational::recip(self)
    }
}

/// Renders a rational as `p/q` with `q > 0`.
pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a plain integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Integer value of a rational, if it is one.
pub fn to_integer(r: &BigRational) -> Result<BigInt> {
    if r.denom().is_one() {
        Ok(r.numer().clone())
    } else {
        Err(Error::NonIntegral(fmt_rational(r)))
    }
}

pub fn to_rational_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(BigRational::from_int).collect()
}

pub fn to_integer_vec(v: &[BigRational]) -> Result<Vec<BigInt>> {
    v.iter().map(to_integer).collect()
}

pub fn is_zero_vec<T: Scalar>(v: &[T]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Scales a nonzero rational vector to the primitive integer vector pointing
/// the same way.
pub fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rvec};

    #[test]
    fn rational_round_trip() {
        for s in ["3/4", "-7/2", "0/1", "5/1"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 12 ").unwrap(), rat(12, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn primitive_vectors() {
        let v = vec![rat(1, 2), rat(-3, 4), rat(0, 1)];
        assert_eq!(primitive(&v), crate::ivec(&[2, -3, 0]));
        assert_eq!(primitive(&rvec(&[4, -2])), crate::ivec(&[2, -1]));
    }

    #[test]
    fn sign_and_positive_part() {
        assert_eq!(rat(-1, 3).sign(), -1);
        assert_eq!(Scalar::sign(&BigInt::from(0)), 0);
        assert_eq!(rat(-1, 3).pos_part(), rat(0, 1));
        assert_eq!(BigInt::from(5).pos_part(), BigInt::from(5));
    }
}
