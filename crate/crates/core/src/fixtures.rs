//! Small hand-checkable instances.

use crate::algebra::scalar::{gauss_int, Exact};
use crate::recurrence::{ParamSeq, Validation};

fn ints(v: &[(i64, i64)]) -> Vec<Exact> {
    v.iter().map(|&(a, b)| gauss_int(a, b)).collect()
}

/// Depth 3: `alpha = (2, 3)`, `beta = (0, i, -1)`, `e = (1, 1, 0)`,
/// `d = (2, 1, 1)`, `c = (1, 2, 1)` with the unused `c_1` set to 1.
pub fn s1() -> ParamSeq<Exact> {
    ParamSeq::new(
        ints(&[(2, 0), (3, 0)]),
        ints(&[(0, 0), (0, 1), (-1, 0)]),
        ints(&[(1, 0), (1, 0), (0, 0)]),
        ints(&[(2, 0), (1, 0), (1, 0)]),
        ints(&[(1, 0), (2, 0), (1, 0)]),
        Validation::Full,
    )
    .expect("fixture is valid")
}

/// Depth 4 with a single pole `alpha = 2` and unimodular
/// `beta = (0, i, -1, -i)`; `e = (1, 1, 0, 1)`, `d = (2, 1, 1, 1)`,
/// `c = (1, 2, 1, 2)`.
pub fn s2() -> ParamSeq<Exact> {
    ParamSeq::new(
        ints(&[(2, 0); 4]),
        ints(&[(0, 0), (0, 1), (-1, 0), (0, -1)]),
        ints(&[(1, 0), (1, 0), (0, 0), (1, 0)]),
        ints(&[(2, 0), (1, 0), (1, 0), (1, 0)]),
        ints(&[(1, 0), (2, 0), (1, 0), (2, 0)]),
        Validation::Full,
    )
    .expect("fixture is valid")
}
