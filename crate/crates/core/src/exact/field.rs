use std::fmt;

use super::{ExactError, Rational};

/// Operations every exact scalar type offers to the series code.
///
/// Constants are built from an existing element (`proto.one()`,
/// `proto.embed_int(3)`) because some fields carry context, such as the
/// symbol set of a rational function.
pub trait ExactField: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero(&self) -> Self;
    fn one(&self) -> Self;
    fn embed_int(&self, n: i64) -> Self;
    fn embed_rational(&self, r: &Rational) -> Self;

    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn divide(&self, rhs: &Self) -> Result<Self, ExactError>;
    fn negate(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn plus_int(&self, n: i64) -> Self {
        self.plus(&self.embed_int(n))
    }

    fn scale_rational(&self, r: &Rational) -> Self {
        self.times(&self.embed_rational(r))
    }
}

impl ExactField for Rational {
    fn zero(&self) -> Self {
        Rational::zero()
    }

    fn one(&self) -> Self {
        Rational::one()
    }

    fn embed_int(&self, n: i64) -> Self {
        Rational::from(n)
    }

    fn embed_rational(&self, r: &Rational) -> Self {
        r.clone()
    }

    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn divide(&self, rhs: &Self) -> Result<Self, ExactError> {
        self.checked_div(rhs)
    }

    fn negate(&self) -> Self {
        -self
    }

    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}
