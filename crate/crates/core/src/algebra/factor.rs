use super::poly::Polynomial;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorKind {
    /// `z - a`
    ZMinus,
    /// `1 - z c`, with `c` stored already conjugated.
    OneMinusZ,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearFactor<S> {
    pub kind: FactorKind,
    pub param: S,
}

impl<S: Scalar> LinearFactor<S> {
    pub fn z_minus(a: S) -> Self {
        Self {
            kind: FactorKind::ZMinus,
            param: a,
        }
    }

    /// `1 - z c` where `c` is passed as is (callers conjugate).
    pub fn one_minus_z(c: S) -> Self {
        Self {
            kind: FactorKind::OneMinusZ,
            param: c,
        }
    }

    pub fn eval(&self, z: &S) -> S {
        match self.kind {
            FactorKind::ZMinus => z.clone() - self.param.clone(),
            FactorKind::OneMinusZ => S::one() - z.clone() * self.param.clone(),
        }
    }

    pub fn to_poly(&self) -> Polynomial<S> {
        match self.kind {
            FactorKind::ZMinus => Polynomial::linear(-self.param.clone(), S::one()),
            FactorKind::OneMinusZ => Polynomial::linear(S::one(), -self.param.clone()),
        }
    }

    pub fn matches(&self, other: &Self) -> bool {
        self.kind == other.kind && self.param.matches(&other.param)
    }
}

/// Multiset of linear factors, kept in first-insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorBag<S> {
    entries: Vec<(LinearFactor<S>, usize)>,
}

impl<S: Scalar> Default for FactorBag<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> FactorBag<S> {
    pub fn new() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = LinearFactor<S>>) -> Self {
        let mut bag = Self::new();
        for f in factors {
            bag.insert(f, 1);
        }
        bag
    }

    pub fn insert(&mut self, factor: LinearFactor<S>, multiplicity: usize) {
        if multiplicity == 0 {
            return;
        }
        match self.entries.iter_mut().find(|(f, _)| f.matches(&factor)) {
            Some((_, m)) => *m += multiplicity,
            None => self.entries.push((factor, multiplicity)),
        }
    }

    pub fn with(mut self, factor: LinearFactor<S>, multiplicity: usize) -> Self {
        self.insert(factor, multiplicity);
        self
    }

    pub fn entries(&self) -> &[(LinearFactor<S>, usize)] {
        &self.entries
    }

    pub fn multiplicity(&self, factor: &LinearFactor<S>) -> usize {
        self.entries
            .iter()
            .find(|(f, _)| f.matches(factor))
            .map_or(0, |(_, m)| *m)
    }

    /// Total number of factors counted with multiplicity.
    pub fn len(&self) -> usize {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Multiset sum.
    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, m) in &other.entries {
            out.insert(f.clone(), *m);
        }
        out
    }

    /// Whether `self` is contained in `target` as a multiset.
    pub fn is_subbag(&self, target: &Self) -> bool {
        self.entries
            .iter()
            .all(|(f, m)| target.multiplicity(f) >= *m)
    }

    /// Removes one copy of `factor`, failing if absent.
    pub fn remove_one(&mut self, factor: &LinearFactor<S>) -> Result<()> {
        let pos = self
            .entries
            .iter()
            .position(|(f, _)| f.matches(factor))
            .ok_or(Error::NotDivisible)?;
        self.entries[pos].1 -= 1;
        if self.entries[pos].1 == 0 {
            self.entries.remove(pos);
        }
        Ok(())
    }

    /// Product of all factors as a polynomial.
    pub fn expand(&self) -> Polynomial<S> {
        let mut acc = Polynomial::one();
        for (f, m) in &self.entries {
            let p = f.to_poly();
            for _ in 0..*m {
                acc = &acc * &p;
            }
        }
        acc
    }

    /// Product of factor values, or [`Error::PoleHit`] if any factor vanishes.
    pub fn eval(&self, z: &S) -> Result<S> {
        let mut acc = S::one();
        for (f, m) in &self.entries {
            let v = f.eval(z);
            if v.is_pole_zero() {
                return Err(Error::PoleHit);
            }
            acc = acc * v.powi(*m);
        }
        Ok(acc)
    }
}

/// Multiset difference `target - part`.
pub fn cofactor_divide<S: Scalar>(target: &FactorBag<S>, part: &FactorBag<S>) -> Result<FactorBag<S>> {
    if !part.is_subbag(target) {
        return Err(Error::NotDivisible);
    }
    let mut out = FactorBag::new();
    for (f, m) in &target.entries {
        out.insert(f.clone(), m - part.multiplicity(f));
    }
    Ok(out)
}

/// Polynomial product of a bag (free-function form of [`FactorBag::expand`]).
pub fn expand<S: Scalar>(bag: &FactorBag<S>) -> Polynomial<S> {
    bag.expand()
}
