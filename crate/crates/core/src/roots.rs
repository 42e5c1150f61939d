//! Simultaneous polynomial root finding (Aberth–Ehrlich) with Newton polish.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::Polynomial;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITER: usize = 200;

/// `|p(z)| / (sum |coeff| * max(1, |z|)^deg)`.
pub fn root_residual(p: &Polynomial<Complex64>, z: Complex64) -> f64 {
    let deg = p.degree().unwrap_or(0) as i32;
    let scale = p.l1_norm() * z.norm().max(1.0).powi(deg);
    if scale == 0.0 {
        return 0.0;
    }
    p.eval(&z).norm() / scale
}

fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of `p`, sorted by real then imaginary part.
///
/// Starting values sit on a circle of radius `1 + max|a_k| / |a_n|` with an
/// irrational angular offset, so the iteration is fully deterministic.
/// Converged means every root satisfies [`root_residual`]` <= tol`.
pub fn eigenvalues(p: &Polynomial<Complex64>, tol: f64) -> Result<Vec<Complex64>> {
    eigenvalues_with_budget(p, tol, DEFAULT_MAX_ITER)
}

pub fn eigenvalues_with_budget(p: &Polynomial<Complex64>, tol: f64, max_iter: usize) -> Result<Vec<Complex64>> {
    let Some(deg) = p.degree() else {
        return Ok(Vec::new());
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let coeffs = p.coeffs();
    let lead = coeffs[deg];
    let bound = 1.0
        + coeffs[..deg]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            / lead.norm();
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(bound, 2.0 * PI * k as f64 / deg as f64 + 0.4))
        .collect();

    let converged = |z: &[Complex64]| z.iter().all(|&x| root_residual(p, x) <= tol);
    let mut iterations = 0;
    while iterations < max_iter && !converged(&z) {
        iterations += 1;
        for i in 0..deg {
            let (v, dv) = eval_with_derivative(coeffs, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
            }
        }
    }
    // Newton polish against the original coefficients
    for x in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = eval_with_derivative(coeffs, *x);
            if dv.norm() == 0.0 {
                break;
            }
            let next = *x - v / dv;
            if next.is_finite() && root_residual(p, next) <= root_residual(p, *x) {
                *x = next;
            } else {
                break;
            }
        }
    }
    let worst = z.iter().map(|&x| root_residual(p, x)).fold(0.0, f64::max);
    if worst > tol || !worst.is_finite() {
        return Err(Error::NoConvergence {
            iterations,
            worst,
        });
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[f64]) -> Polynomial<Complex64> {
        Polynomial::new(cs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    #[test]
    fn linear_root() {
        let r = eigenvalues(&poly(&[1.0, 2.0]), 1e-10).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - Complex64::new(-0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn quadratic_matches_formula() {
        let r = eigenvalues(&poly(&[2.0, -2.0, -2.0]), 1e-10).unwrap();
        let s = 5f64.sqrt();
        assert!((r[0].re - (-1.0 - s) / 2.0).abs() < 1e-12);
        assert!((r[1].re - (-1.0 + s) / 2.0).abs() < 1e-12);
        assert!(r.iter().all(|x| x.im.abs() < 1e-12));
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(eigenvalues(&poly(&[3.0]), 1e-10).unwrap().is_empty());
        assert!(eigenvalues(&Polynomial::zero(), 1e-10).unwrap().is_empty());
    }

    #[test]
    fn roots_of_unity() {
        let mut cs = vec![0.0; 9];
        cs[0] = -1.0;
        cs[8] = 1.0;
        let r = eigenvalues(&poly(&cs), 1e-12).unwrap();
        assert_eq!(r.len(), 8);
        for x in r {
            assert!((x.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let p = poly(&[1.0, -3.0, 1.0, 5.0, 2.0, -1.0]);
        assert!(matches!(
            eigenvalues_with_budget(&p, 0.0, 0),
            Err(Error::NoConvergence { .. })
        ));
    }
}
