use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::polynomial::IntPolynomial;
use crate::error::{Error, Result};

/// A quotient `p / q` of integer polynomials with `q != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: IntPolynomial,
    den: IntPolynomial,
}

impl RationalFunction {
    pub fn new(num: IntPolynomial, den: IntPolynomial) -> Result<Self> {
        if num.nvars() != den.nvars() {
            return Err(Error::InvalidArgument(format!(
                "numerator has {} variables, denominator {}",
                num.nvars(),
                den.nvars()
            )));
        }
        if den.is_zero() {
            return Err(Error::InvalidArgument("denominator is identically zero".into()));
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_polynomial(p: IntPolynomial) -> Self {
        let den = IntPolynomial::one(p.nvars());
        RationalFunction { num: p, den }
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &IntPolynomial {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    /// Maximum of the numerator and denominator degrees.
    pub fn degree(&self) -> u32 {
        self.num.degree().max(self.den.degree())
    }

    pub fn max_var_degree(&self) -> u32 {
        self.num.max_var_degree().max(self.den.max_var_degree())
    }

    /// Largest absolute coefficient of numerator and denominator.
    pub fn lc(&self) -> BigInt {
        self.num.lc().max(self.den.lc())
    }

    /// `None` where the denominator vanishes.
    pub fn evaluate(&self, z: &[BigInt]) -> Result<Option<BigRational>> {
        let q = self.den.evaluate(z)?;
        if q.is_zero() {
            return Ok(None);
        }
        Ok(Some(BigRational::new(self.num.evaluate(z)?, q)))
    }

    /// Sign of `p(z) q(z)`, which equals the sign of `r(z)` where it is defined.
    pub fn sign_at(&self, z: &[BigInt]) -> Result<Option<i8>> {
        let q = self.den.evaluate(z)?;
        if q.is_zero() {
            return Ok(None);
        }
        let p = self.num.evaluate(z)?;
        Ok(Some(if p.is_zero() {
            0
        } else if p.is_positive() == q.is_positive() {
            1
        } else {
            -1
        }))
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn negate_variables(&self) -> Self {
        RationalFunction {
            num: self.num.negate_variables(),
            den: self.den.negate_variables(),
        }
    }

    /// Equality as functions: `p1 q2 = p2 q1`.
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        Ok(self.num.mul(&other.den)? == other.num.mul(&self.den)?)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> IntPolynomial {
        IntPolynomial::var(1, 0)
    }

    #[test]
    fn evaluate_and_sign() {
        let r = RationalFunction::new(
            z().sub(&IntPolynomial::constant(1, 2)).unwrap(),
            z().add(&IntPolynomial::constant(1, 4)).unwrap(),
        )
        .unwrap();
        let v = r.evaluate(&[BigInt::from(3)]).unwrap().unwrap();
        assert_eq!(v, BigRational::new(1.into(), 7.into()));
        assert_eq!(r.sign_at(&[BigInt::from(3)]).unwrap(), Some(1));
        assert_eq!(r.sign_at(&[BigInt::from(-4)]).unwrap(), None);
        assert_eq!(r.sign_at(&[BigInt::from(0)]).unwrap(), Some(-1));
        assert_eq!(r.degree(), 1);
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(RationalFunction::new(z(), IntPolynomial::zero(1)).is_err());
        assert!(RationalFunction::new(z(), IntPolynomial::one(2)).is_err());
    }

    #[test]
    fn equivalence_ignores_common_factors() {
        let a = RationalFunction::new(z(), IntPolynomial::one(1)).unwrap();
        let b = RationalFunction::new(z().mul(&z()).unwrap(), z()).unwrap();
        assert!(a.equivalent(&b).unwrap());
        assert!(!a.equivalent(&a.neg()).unwrap());
    }
}
