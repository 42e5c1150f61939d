use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;

/// Dense polynomial, `coeffs[k]` is the coefficient of `z^k`.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// no coefficients and [`Polynomial::degree`] returns `None` for it.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `c0 + c1 z`
    pub fn linear(c0: S, c1: S) -> Self {
        Self::new(vec![c0, c1])
    }

    /// `c z^k`
    pub fn monomial(c: S, k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` encodes the degree of the zero polynomial (minus infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn eval(&self, z: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![S::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Sum of coefficient magnitudes.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(Scalar::magnitude).sum()
    }

    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Long division, returning `(quotient, remainder)`.
    ///
    /// # Panics
    /// Panics if `divisor` is the zero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![S::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = rem[k + dd].clone() / lead.clone();
            for (i, b) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - q.clone() * b.clone();
            }
            // the top coefficient is eliminated by construction
            rem[k + dd] = S::zero();
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Quotient when `divisor` divides `self` (up to the backend's remainder
    /// tolerance), otherwise `None`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        let scale = self.max_norm();
        r.coeffs
            .iter()
            .all(|c| c.is_negligible(scale))
            .then_some(q)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }
}

impl<S: Scalar> Add for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn add(self, rhs: Self) -> Polynomial<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Sub for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn sub(self, rhs: Self) -> Polynomial<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Mul for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn mul(self, rhs: Self) -> Polynomial<S> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<S: Scalar> Neg for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn neg(self) -> Polynomial<S> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

/// Which arithmetic operation [`poly_arith`] applies.
#[derive(Debug, Clone, PartialEq)]
pub enum PolyOp<S> {
    Add,
    Sub,
    Mul,
    /// Scales the first operand, ignoring the second.
    Scale(S),
}

pub fn poly_arith<S: Scalar>(p: &Polynomial<S>, q: &Polynomial<S>, op: PolyOp<S>) -> Polynomial<S> {
    match op {
        PolyOp::Add => p + q,
        PolyOp::Sub => p - q,
        PolyOp::Mul => p * q,
        PolyOp::Scale(c) => p.scale(&c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{gauss_int, Exact};

    fn ip(cs: &[(i64, i64)]) -> Polynomial<Exact> {
        Polynomial::new(cs.iter().map(|&(re, im)| gauss_int(re, im)).collect())
    }

    #[test]
    fn mul_direct_expansion() {
        let p = ip(&[(1, 0), (2, 0)]);
        let q = ip(&[(2, 0), (-2, 0)]);
        assert_eq!(poly_arith(&p, &q, PolyOp::Mul), ip(&[(2, 0), (2, 0), (-4, 0)]));
    }

    #[test]
    fn add_zero_is_identity() {
        let p = ip(&[(1, 0), (2, 3)]);
        assert_eq!(poly_arith(&p, &Polynomial::zero(), PolyOp::Add), p);
    }

    #[test]
    fn mul_gaussian_expansion() {
        // (z - i)(-2z^2 - 2z + 2)
        let p = ip(&[(0, -1), (1, 0)]);
        let q = ip(&[(2, 0), (-2, 0), (-2, 0)]);
        let expected = ip(&[(0, -2), (2, 2), (-2, 2), (-2, 0)]);
        assert_eq!(&p * &q, expected);
    }

    #[test]
    fn cancellation_trims() {
        let p = ip(&[(1, 0), (1, 1)]);
        let d = &p - &p;
        assert!(d.is_zero());
        assert_eq!(d.degree(), None);
        assert_eq!(ip(&[(3, 0), (0, 0)]).degree(), Some(0));
    }

    #[test]
    fn division_round_trip() {
        let a = ip(&[(1, 1), (0, 2), (3, 0), (1, -1)]);
        let b = ip(&[(2, 0), (1, 1)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 1);
        assert_eq!((&a * &b).exact_div(&b), Some(a.clone()));
        assert_eq!(a.exact_div(&ip(&[(5, 0), (1, 0)])), None);
    }

    #[test]
    fn horner_eval() {
        let p = ip(&[(1, 0), (2, 0)]);
        assert_eq!(p.eval(&gauss_int(0, 0)), gauss_int(1, 0));
        assert_eq!(p.eval(&gauss_int(0, 1)), gauss_int(1, 2));
    }
}
