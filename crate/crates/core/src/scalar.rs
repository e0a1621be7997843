//! Coefficient fields.
//!
//! Every algebra in the crate is generic over [`Scalar`]. The default is
//! [`Qi`], exact complex rationals with arbitrary-precision parts. The
//! machine-word rationals are faster but panic on overflow.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Ratio, Rational64};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
}

/// An exact field with conjugation.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn conj(&self) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError>;

    /// The imaginary unit, where the field has one.
    fn imag_unit() -> Option<Self>;

    fn render(&self) -> String;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

/// Exact complex rationals.
pub type Qi = Complex<BigRational>;
/// Exact real rationals.
pub type Q = BigRational;
/// Complex rationals over `i64`.
pub type SmallQi = Complex<Rational64>;

fn render_ratio<T: Clone + num_integer::Integer + std::fmt::Display>(r: &Ratio<T>) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Scalar for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn imag_unit() -> Option<Self> {
        None
    }

    fn render(&self) -> String {
        render_ratio(self)
    }
}

impl Scalar for Rational64 {
    fn conj(&self) -> Self {
        *self
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn imag_unit() -> Option<Self> {
        None
    }

    fn render(&self) -> String {
        render_ratio(self)
    }
}

macro_rules! complex_scalar {
    ($real:ty) => {
        impl Scalar for Complex<$real> {
            fn conj(&self) -> Self {
                Complex::new(self.re.clone(), -self.im.clone())
            }

            fn from_ratio(num: i64, den: i64) -> Self {
                Complex::new(<$real as Scalar>::from_ratio(num, den), <$real>::zero())
            }

            fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
                let norm = rhs.re.clone() * rhs.re.clone() + rhs.im.clone() * rhs.im.clone();
                if norm.is_zero() {
                    return Err(ScalarError::DivisionByZero);
                }
                let num = self.clone() * Scalar::conj(rhs);
                Ok(Complex::new(num.re / norm.clone(), num.im / norm))
            }

            fn imag_unit() -> Option<Self> {
                Some(Complex::new(<$real>::zero(), <$real>::one()))
            }

            fn render(&self) -> String {
                match (self.re.is_zero(), self.im.is_zero()) {
                    (_, true) => self.re.render(),
                    (true, false) => format!("{}i", self.im.render()),
                    (false, false) => {
                        let sign = if self.im.is_negative() { '-' } else { '+' };
                        format!("{}{}{}i", self.re.render(), sign, self.im.abs().render())
                    }
                }
            }
        }
    };
}

complex_scalar!(BigRational);
complex_scalar!(Rational64);

/// The four primitive scalar operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Mul,
    Conj,
    Div,
}

/// Applies `op` to `a` (and `b` for binary operations; `conj` ignores `b`).
pub fn scalar_arith<S: Scalar>(a: &S, b: &S, op: ScalarOp) -> Result<S, ScalarError> {
    match op {
        ScalarOp::Add => Ok(a.clone() + b.clone()),
        ScalarOp::Mul => Ok(a.clone() * b.clone()),
        ScalarOp::Conj => Ok(a.conj()),
        ScalarOp::Div => a.checked_div(b),
    }
}

/// Builds `re + im·i` from two `(num, den)` pairs.
pub fn qi(re: (i64, i64), im: (i64, i64)) -> Qi {
    Complex::new(Q::from_ratio(re.0, re.1), Q::from_ratio(im.0, im.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_operations() {
        let half = qi((1, 2), (0, 1));
        let i = qi((0, 1), (1, 1));
        assert_eq!(scalar_arith(&half, &i, ScalarOp::Mul).unwrap(), qi((0, 1), (1, 2)));
        let x = qi((1, 3), (-2, 1));
        assert_eq!(scalar_arith(&x, &x, ScalarOp::Conj).unwrap(), qi((1, 3), (2, 1)));
        let sixth = qi((1, 6), (0, 1));
        let third = scalar_arith(&sixth, &sixth, ScalarOp::Add).unwrap();
        assert_eq!(third, qi((1, 3), (0, 1)));
        assert_eq!(third.re.numer(), &BigInt::from(1));
        assert_eq!(third.re.denom(), &BigInt::from(3));
    }

    #[test]
    fn division() {
        let zero = Qi::zero();
        let one = Qi::one();
        assert_eq!(scalar_arith(&one, &zero, ScalarOp::Div), Err(ScalarError::DivisionByZero));
        let a = qi((1, 2), (3, 4));
        let b = qi((-2, 5), (1, 7));
        let q = a.checked_div(&b).unwrap();
        assert_eq!(q * b, a);
        assert_eq!(Q::from_int(1).checked_div(&Q::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn rendering() {
        assert_eq!(qi((1, 2), (0, 1)).render(), "1/2");
        assert_eq!(qi((0, 1), (-1, 3)).render(), "-1/3i");
        assert_eq!(qi((1, 1), (-2, 1)).render(), "1-2i");
        assert_eq!(Q::from_ratio(2, 4).render(), "1/2");
    }
}
