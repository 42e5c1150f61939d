//! Tridiagonal pencils `G - z H` whose characteristic polynomial is `r_j`.

use crate::algebra::{RationalFn, Scalar};
use crate::error::{Error, Result};
use crate::recurrence::{Families, ParamSeq};
use crate::Residual;

/// Free subdiagonal values `h_{i+1,i}`.
#[derive(Debug, Clone, PartialEq)]
pub enum HChoice<S> {
    /// The choice under which `(phi_0, ..., phi_{j-1})` is an eigenvector.
    EigenvectorDefault,
    /// `j - 1` explicit nonzero values, entry `i` sitting at `(i + 1, i)`.
    Explicit(Vec<S>),
}

/// A `j x j` pair of tridiagonal matrices stored by diagonals.
///
/// `*_sup[i]` is entry `(i, i + 1)` and `*_sub[i]` is entry `(i + 1, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil<S> {
    pub size: usize,
    pub h_diag: Vec<S>,
    pub h_sup: Vec<S>,
    pub h_sub: Vec<S>,
    pub g_diag: Vec<S>,
    pub g_sup: Vec<S>,
    pub g_sub: Vec<S>,
    /// The free values actually used.
    pub h_free: Vec<S>,
}

/// `h_{i+1,i}` under the default choice: `c_{2i}` on odd rows and
/// `-c_{2i+1} conj(alpha_i)` on even rows (row numbering `2i-1`, `2i`).
pub fn default_h<S: Scalar>(params: &ParamSeq<S>, j: usize) -> Vec<S> {
    (1..j)
        .map(|row| {
            if row % 2 == 1 {
                params.c(row + 1).clone()
            } else {
                -(params.c(row + 1).clone() * params.alpha(row / 2).conj())
            }
        })
        .collect()
}

pub fn build_pencil<S: Scalar>(params: &ParamSeq<S>, j: usize, h_choice: &HChoice<S>) -> Result<Pencil<S>> {
    params.require_depth(j)?;
    let h = match h_choice {
        HChoice::EigenvectorDefault => default_h(params, j),
        HChoice::Explicit(v) => {
            if v.len() + 1 != j.max(1) {
                return Err(Error::ParamOutOfRange {
                    what: "h",
                    index: v.len(),
                    len: j.saturating_sub(1),
                });
            }
            if let Some(i) = v.iter().position(Scalar::is_zero) {
                return Err(Error::ZeroFreeVariable { index: i });
            }
            v.clone()
        }
    };
    if let Some(i) = h.iter().position(Scalar::is_zero) {
        return Err(Error::ZeroFreeVariable { index: i });
    }

    let mut p = Pencil {
        size: j,
        h_diag: Vec::with_capacity(j),
        h_sup: Vec::new(),
        h_sub: Vec::new(),
        g_diag: Vec::with_capacity(j),
        g_sup: Vec::new(),
        g_sub: Vec::new(),
        h_free: h.clone(),
    };
    for i in 0..j {
        let k = i / 2;
        let (d, e) = (params.d(i + 1).clone(), params.e(i + 1).clone());
        if i % 2 == 0 {
            p.g_diag.push(-e + params.beta(k).clone() * d.clone());
            p.h_diag.push(d);
        } else {
            p.h_diag.push(-(d.clone() * params.alpha(k + 1).conj()));
            p.g_diag.push(-e - d);
        }
    }
    for (i, hh) in h.iter().enumerate() {
        let k = i / 2;
        let c = params.c(i + 2).clone();
        if i % 2 == 0 {
            let g = -(c / hh.clone());
            p.g_sup.push(params.alpha(k + 1).clone() * g.clone());
            p.h_sup.push(g);
            p.g_sub.push(hh.clone() * params.beta(k).clone());
        } else {
            let ab = params.alpha(k + 1).conj();
            let bb = params.beta(k + 1).conj();
            let g = -(c * bb.clone() / hh.clone());
            p.h_sup.push(ab.clone() * g.clone());
            p.g_sup.push(ab.clone() * g / bb);
            p.g_sub.push(hh.clone() / ab);
        }
        p.h_sub.push(hh.clone());
    }
    Ok(p)
}

impl<S: Scalar> Pencil<S> {
    /// Diagonals of `M = G - z H` as `(diag, sup, sub)`.
    pub fn shifted(&self, z: &S) -> (Vec<S>, Vec<S>, Vec<S>) {
        let comb = |g: &[S], h: &[S]| {
            g.iter()
                .zip(h)
                .map(|(a, b)| a.clone() - z.clone() * b.clone())
                .collect::<Vec<_>>()
        };
        (
            comb(&self.g_diag, &self.h_diag),
            comb(&self.g_sup, &self.h_sup),
            comb(&self.g_sub, &self.h_sub),
        )
    }

    /// Full `(H, G)` matrices, row-major.
    #[allow(clippy::type_complexity)]
    pub fn to_dense(&self) -> (Vec<Vec<S>>, Vec<Vec<S>>) {
        let fill = |diag: &[S], sup: &[S], sub: &[S]| {
            let mut m = vec![vec![S::zero(); self.size]; self.size];
            for i in 0..self.size {
                m[i][i] = diag[i].clone();
                if i + 1 < self.size {
                    m[i][i + 1] = sup[i].clone();
                    m[i + 1][i] = sub[i].clone();
                }
            }
            m
        };
        (
            fill(&self.h_diag, &self.h_sup, &self.h_sub),
            fill(&self.g_diag, &self.g_sup, &self.g_sub),
        )
    }

    /// `(G - z H) v`.
    pub fn apply(&self, z: &S, v: &[S]) -> Vec<S> {
        let (diag, sup, sub) = self.shifted(z);
        (0..self.size)
            .map(|i| {
                let mut x = diag[i].clone() * v[i].clone();
                if i > 0 {
                    x = x + sub[i - 1].clone() * v[i - 1].clone();
                }
                if i + 1 < self.size {
                    x = x + sup[i].clone() * v[i + 1].clone();
                }
                x
            })
            .collect()
    }
}

/// `det(G - z H)` by the three-term continuant.
pub fn det_pencil<S: Scalar>(p: &Pencil<S>, z: &S) -> S {
    let (diag, sup, sub) = p.shifted(z);
    let mut prev = S::one();
    let mut cur = S::one();
    for k in 0..p.size {
        let mut next = diag[k].clone() * cur.clone();
        if k >= 1 {
            next = next - sub[k - 1].clone() * sup[k - 1].clone() * prev.clone();
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Backward error of `(l, v)` with `v = (phi_0(l), ..., phi_{j-1}(l))`:
/// `||(G - l H) v||_inf / ((||G||_inf + |l| ||H||_inf) ||v||_inf)`.
///
/// Scaling by `||G - l H||` instead is degenerate for `j = 1`, where the
/// ratio is identically 1 unless the product rounds to exact zero; that
/// variant is still available as [`eig_residual_shift_scaled`].
pub fn eig_residual<S: Scalar>(p: &Pencil<S>, lambda: &S, phis: &[RationalFn<S>]) -> Result<f64> {
    let (norm_mv, norm_v) = eig_product(p, lambda, phis)?;
    let norm_g = tridiag_norm(&p.g_diag, &p.g_sup, &p.g_sub);
    let norm_h = tridiag_norm(&p.h_diag, &p.h_sup, &p.h_sub);
    let scale = (norm_g + lambda.magnitude() * norm_h) * norm_v;
    Ok(if scale == 0.0 { norm_mv } else { norm_mv / scale })
}

/// `||(G - l H) v||_inf / (||G - l H||_inf ||v||_inf)`.
pub fn eig_residual_shift_scaled<S: Scalar>(p: &Pencil<S>, lambda: &S, phis: &[RationalFn<S>]) -> Result<f64> {
    let (norm_mv, norm_v) = eig_product(p, lambda, phis)?;
    let (diag, sup, sub) = p.shifted(lambda);
    let scale = tridiag_norm(&diag, &sup, &sub) * norm_v;
    Ok(if scale == 0.0 { norm_mv } else { norm_mv / scale })
}

/// `(||(G - l H) v||_inf, ||v||_inf)`.
fn eig_product<S: Scalar>(p: &Pencil<S>, lambda: &S, phis: &[RationalFn<S>]) -> Result<(f64, f64)> {
    let v: Vec<S> = phis[..p.size]
        .iter()
        .map(|f| f.eval(lambda))
        .collect::<Result<_>>()?;
    let mv = p.apply(lambda, &v);
    let norm_v = v.iter().map(Scalar::magnitude).fold(0.0, f64::max);
    let norm_mv = mv.iter().map(Scalar::magnitude).fold(0.0, f64::max);
    Ok((norm_mv, norm_v))
}

/// Max absolute row sum of a tridiagonal matrix.
fn tridiag_norm<S: Scalar>(diag: &[S], sup: &[S], sub: &[S]) -> f64 {
    (0..diag.len())
        .map(|i| {
            let mut s = diag[i].magnitude();
            if i > 0 {
                s += sub[i - 1].magnitude();
            }
            if let Some(x) = sup.get(i) {
                s += x.magnitude();
            }
            s
        })
        .fold(0.0, f64::max)
}

/// The value left in the last row of `(G - z H) v` at a generic point:
/// `-(z - alpha_{n+1}) phi_{2n+1}(z)` for `j = 2n + 1` and
/// `-(1 - z conj(beta_n)) phi_{2n}(z)` for `j = 2n`.
pub fn truncation_term<S: Scalar>(fam: &Families<S>, j: usize, z: &S) -> Result<S> {
    let p = &fam.params;
    let phi_j = fam.phi_at(j, z)?;
    let n = j / 2;
    let factor = if j % 2 == 1 {
        z.clone() - p.alpha(n + 1).clone()
    } else {
        S::one() - z.clone() * p.beta(n).conj()
    };
    Ok(-(factor * phi_j))
}

/// Checks `(G - z H) v = t e_last` row by row at a generic point, where `t`
/// is [`truncation_term`]. Requires the default `h` choice and families up
/// to index `p.size`.
pub fn eigen_identity_residual<S: Scalar>(p: &Pencil<S>, fam: &Families<S>, z: &S) -> Result<Residual> {
    let j = p.size;
    let v: Vec<S> = (0..j).map(|k| fam.phi_at(k, z)).collect::<Result<_>>()?;
    let mv = p.apply(z, &v);
    let tail = truncation_term(fam, j, z)?;
    let mut res = Residual::zero();
    for (i, x) in mv.into_iter().enumerate() {
        if i + 1 == j {
            res.record(&[x, -tail.clone()]);
        } else {
            res.record(&[x]);
        }
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{gauss, gauss_int, Exact};
    use crate::fixtures;
    use crate::recurrence::{gen_numerators, PsiVariant};
    use num_complex::Complex64;

    fn int(a: i64) -> Exact {
        gauss_int(a, 0)
    }

    #[test]
    fn one_by_one_pencil() {
        let p = build_pencil(&fixtures::s1(), 1, &HChoice::EigenvectorDefault).unwrap();
        assert_eq!(p.h_diag, vec![int(2)]);
        assert_eq!(p.g_diag, vec![int(-1)]);
        assert_eq!(det_pencil(&p, &gauss_int(0, 0)), int(-1));
        let z = gauss(1, 3, 2, 5);
        let r1 = gen_numerators(&fixtures::s1(), 1).unwrap()[1].eval(&z);
        assert_eq!(det_pencil(&p, &z), -r1);
    }

    #[test]
    fn one_by_one_residual_near_a_root() {
        let params = fixtures::s1().map(Scalar::to_c64);
        let fam = Families::build(&params, 1, PsiVariant::default()).unwrap();
        let p = build_pencil(&params, 1, &HChoice::EigenvectorDefault).unwrap();
        let near = Complex64::new(-0.5 + 1e-15, 0.0);
        assert!(eig_residual(&p, &near, &fam.phi).unwrap() < 1e-14);
        // shift scaling cannot see how close the root is
        assert_eq!(eig_residual_shift_scaled(&p, &near, &fam.phi).unwrap(), 1.0);
        assert_eq!(eig_residual(&p, &Complex64::new(-0.5, 0.0), &fam.phi).unwrap(), 0.0);
    }

    #[test]
    fn two_by_two_default_pencil() {
        let p = build_pencil(&fixtures::s1(), 2, &HChoice::EigenvectorDefault).unwrap();
        let (h, g) = p.to_dense();
        assert_eq!(h, vec![vec![int(2), int(-1)], vec![int(2), int(-2)]]);
        assert_eq!(g, vec![vec![int(-1), int(-2)], vec![int(0), int(-2)]]);
        assert_eq!(det_pencil(&p, &int(0)), int(2));
        assert_eq!(det_pencil(&p, &int(1)), int(-2));
    }

    #[test]
    fn zero_free_value_rejected() {
        let err = build_pencil(&fixtures::s1(), 3, &HChoice::Explicit(vec![int(1), int(0)])).unwrap_err();
        assert_eq!(err, Error::ZeroFreeVariable { index: 1 });
    }

    #[test]
    fn default_h_gives_unit_g() {
        // g_{2k+1} = -1 and g_{2k+2} = conj(beta)/conj(alpha) under the default
        let params = fixtures::s2();
        let p = build_pencil(&params, 4, &HChoice::EigenvectorDefault).unwrap();
        assert_eq!(p.h_sup[0], int(-1));
        assert_eq!(p.h_sup[2], int(-1));
        // H stores conj(alpha) * g_2 = conj(beta_1)
        assert_eq!(p.h_sup[1], params.beta(1).conj());
    }

    #[test]
    fn eigen_identity_exact_on_s2() {
        let params = fixtures::s2();
        let fam = Families::build(&params, 4, PsiVariant::default()).unwrap();
        let z = gauss(2, 7, -3, 11);
        for j in 1..=4 {
            let p = build_pencil(&params, j, &HChoice::EigenvectorDefault).unwrap();
            assert!(eigen_identity_residual(&p, &fam, &z).unwrap().exact_zero, "j = {j}");
        }
    }
}
