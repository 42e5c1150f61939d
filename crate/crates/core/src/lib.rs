//! Orthogonal rational functions of R_II type: recurrences, tridiagonal
//! pencils, a moment functional with its biorthogonality relations, and a
//! Christoffel-type transform.
//!
//! Every computation is generic over [`algebra::Scalar`], so the same code
//! runs in double precision and in exact Gaussian-rational arithmetic.

pub mod algebra;
pub mod christoffel;
pub mod error;
pub mod fixtures;
pub mod functional;
pub mod pencil;
pub mod recurrence;
pub mod roots;
pub mod sampling;

pub use error::{Error, Result};

use algebra::Scalar;

/// Worst residual over a batch of identity checks.
///
/// `max_abs` is the largest `|sum| / (1 + sum of |terms|)`; `exact_zero`
/// records whether every sum was exactly zero (meaningful for the exact
/// backend).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub max_abs: f64,
    pub exact_zero: bool,
    pub count: usize,
}

impl Residual {
    pub fn zero() -> Self {
        Self {
            max_abs: 0.0,
            exact_zero: true,
            count: 0,
        }
    }

    /// Records one identity whose terms should sum to zero.
    pub fn record<S: Scalar>(&mut self, terms: &[S]) {
        let (total, rel) = recurrence::combine_terms(terms);
        self.record_value(&total, rel);
    }

    /// Records a value that should vanish, with its already-normalized size.
    pub fn record_value<S: Scalar>(&mut self, value: &S, normalized: f64) {
        self.max_abs = self.max_abs.max(normalized);
        self.exact_zero &= value.is_zero();
        self.count += 1;
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            max_abs: self.max_abs.max(other.max_abs),
            exact_zero: self.exact_zero && other.exact_zero,
            count: self.count + other.count,
        }
    }
}
