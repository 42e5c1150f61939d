use super::factor::{FactorBag, LinearFactor};
use super::poly::Polynomial;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Polynomial over a structural product of linear factors.
///
/// The denominator is never reduced against the numerator automatically;
/// [`RationalFn::cancel_factor`] is the only (explicit) way to shrink it.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn<S> {
    pub num: Polynomial<S>,
    pub den: FactorBag<S>,
}

impl<S: Scalar> RationalFn<S> {
    pub fn new(num: Polynomial<S>, den: FactorBag<S>) -> Self {
        Self { num, den }
    }

    pub fn polynomial(num: Polynomial<S>) -> Self {
        Self::new(num, FactorBag::new())
    }

    pub fn one() -> Self {
        Self::polynomial(Polynomial::one())
    }

    pub fn eval(&self, z: &S) -> Result<S> {
        let den = self.den.eval(z)?;
        Ok(self.num.eval(z) / den)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.num * &other.num, self.den.union(&other.den))
    }

    pub fn mul_poly(&self, p: &Polynomial<S>) -> Self {
        Self::new(&self.num * p, self.den.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }

    /// Divides by an extra denominator factor.
    pub fn over(&self, factor: LinearFactor<S>) -> Self {
        Self::new(self.num.clone(), self.den.clone().with(factor, 1))
    }

    /// Removes one copy of `factor` from both numerator and denominator.
    ///
    /// Fails with [`Error::NotDivisible`] unless the factor is present in the
    /// denominator and divides the numerator exactly.
    pub fn cancel_factor(&self, factor: &LinearFactor<S>) -> Result<Self> {
        let mut den = self.den.clone();
        den.remove_one(factor)?;
        let num = self
            .num
            .exact_div(&factor.to_poly())
            .ok_or(Error::NotDivisible)?;
        Ok(Self::new(num, den))
    }
}
