//! Seeded sampling of exact parameter values and evaluation points.
//!
//! The generator is SplitMix64. Integers in `[lo, hi]` are drawn as
//! `lo + next_u64() % (hi - lo + 1)`; everything below is built from that
//! single primitive so the stream is reproducible across platforms.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::algebra::scalar::{norm_sqr_exact, Exact};
use crate::error::{Error, Result};
use crate::recurrence::{check_regularity, gen_numerators, ParamSeq, Validation};

/// Grid step of sampled parameters is `1 / GRID`.
pub const GRID: i64 = 64;

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: SplitMix64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.rng.next_u64() % span) as i64
    }

    /// Gaussian rational on the `1/GRID` lattice with
    /// `min_abs <= |v| <= max_abs`, by rejection from the bounding square.
    pub fn annulus(&mut self, min_abs: f64, max_abs: f64) -> Exact {
        let lim = (max_abs * GRID as f64).floor() as i64;
        let lo2 = min_abs * min_abs * (GRID * GRID) as f64;
        let hi2 = max_abs * max_abs * (GRID * GRID) as f64;
        loop {
            let a = self.int_in(-lim, lim);
            let b = self.int_in(-lim, lim);
            let r2 = (a * a + b * b) as f64;
            if r2 >= lo2 && r2 <= hi2 {
                return grid_value(a, b);
            }
        }
    }

    /// Exact point on the unit circle: `t = k / GRID` with `|t| <= 2`,
    /// mapped through `((1 - t^2) + 2 t i) / (1 + t^2)`.
    pub fn unimodular(&mut self) -> Exact {
        let k = self.int_in(-2 * GRID, 2 * GRID);
        let t = BigRational::new(BigInt::from(k), BigInt::from(GRID));
        let one = BigRational::from_integer(1.into());
        let two = BigRational::from_integer(2.into());
        let den = one.clone() + t.clone() * t.clone();
        let v = Complex::new((one - t.clone() * t.clone()) / den.clone(), two * t / den);
        debug_assert!(norm_sqr_exact(&v) == BigRational::from_integer(1.into()));
        v
    }

    /// Evaluation point with parts `a / 61` and `b / 67`, `|a|, |b| <= 128`.
    ///
    /// The prime denominators keep these points off the parameter lattice
    /// and off the rational unit-circle points used by [`Sampler::unimodular`].
    pub fn eval_point(&mut self) -> Exact {
        let a = self.int_in(-128, 128);
        let b = self.int_in(-128, 128);
        Complex::new(
            BigRational::new(a.into(), 61.into()),
            BigRational::new(b.into(), 67.into()),
        )
    }
}

/// Attempt budget of [`random_params`].
pub const MAX_ATTEMPTS: usize = 100;

/// Shape of a random instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub depth: usize,
    pub min_abs: f64,
    pub max_abs: f64,
    /// Unimodular `beta_j` and one shared `alpha`.
    pub unimodular: bool,
}

impl RandomSpec {
    pub fn new(depth: usize, unimodular: bool) -> Self {
        Self {
            depth,
            min_abs: 0.5,
            max_abs: 2.0,
            unimodular,
        }
    }
}

/// Seeded instance of the requested depth that passes every regularity
/// condition, resampling from the same stream on failure.
///
/// Draw order per attempt: `alpha` (one value when unimodular, else
/// `ceil(depth/2)` values), then `beta_1..beta_{floor(depth/2)}`, then `e`,
/// `d`, `c` with `depth` values each.
pub fn random_params(seed: u64, spec: RandomSpec) -> Result<ParamSeq<Exact>> {
    let mut s = Sampler::new(seed);
    let n = spec.depth;
    for _ in 0..MAX_ATTEMPTS {
        let alpha = if spec.unimodular {
            vec![s.annulus(spec.min_abs, spec.max_abs); n.div_ceil(2).max(1)]
        } else {
            (0..n.div_ceil(2).max(1))
                .map(|_| s.annulus(spec.min_abs, spec.max_abs))
                .collect()
        };
        let mut beta = vec![grid_value(0, 0)];
        for _ in 0..n / 2 {
            beta.push(if spec.unimodular {
                s.unimodular()
            } else {
                s.annulus(spec.min_abs, spec.max_abs)
            });
        }
        let mut draw = |count: usize| -> Vec<Exact> {
            (0..count).map(|_| s.annulus(spec.min_abs, spec.max_abs)).collect()
        };
        let e = draw(n.max(1));
        let d = draw(n.max(1));
        let c = draw(n.max(1));
        let Ok(params) = ParamSeq::new(alpha, beta, e, d, c, Validation::Full) else {
            continue;
        };
        let rs = gen_numerators(&params, n)?;
        if check_regularity(&params, &rs).passes() {
            return Ok(params);
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_ATTEMPTS,
    })
}

fn grid_value(a: i64, b: i64) -> Exact {
    Complex::new(
        BigRational::new(a.into(), GRID.into()),
        BigRational::new(b.into(), GRID.into()),
    )
}
