//! The moment functional on the `O`-basis and the biorthogonality matrix.

use rayon::prelude::*;

use crate::algebra::{cofactor_divide, LinearFactor, Polynomial, RationalFn, Scalar};
use crate::error::{Error, Result};
use crate::recurrence::{Families, ParamSeq};
use crate::Residual;

/// Moments `m_n`, leading coefficients `kappa_n` and normalizations `chi_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable<S> {
    pub m: Vec<S>,
    pub kappa: Vec<S>,
    pub chi: Vec<S>,
}

impl<S: Scalar> MomentTable<S> {
    /// `m_1 kappa_0 - m_0 kappa_1`.
    pub fn gap(&self) -> S {
        self.m[1].clone() * self.kappa[0].clone() - self.m[0].clone() * self.kappa[1].clone()
    }
}

/// Default starting moments `(1, d_1 + 1)`.
pub fn default_moments<S: Scalar>(params: &ParamSeq<S>) -> (S, S) {
    (S::one(), params.d(1).clone() + S::one())
}

pub fn gen_moments<S: Scalar>(params: &ParamSeq<S>, m0: S, m1: S, n: usize) -> Result<MomentTable<S>> {
    params.require_depth(n.max(1))?;
    let gap = m1.clone() - params.d(1).clone() * m0.clone();
    let scale = m1.magnitude() + (params.d(1).clone() * m0.clone()).magnitude();
    if gap.is_zero() || gap.is_negligible(scale) {
        return Err(Error::DegenerateMoments);
    }
    let mut m = vec![m0, m1];
    let mut kappa = vec![S::one(), params.d(1).clone()];
    for k in 2..=n {
        if k % 2 == 0 {
            let j = k / 2;
            let ab = params.alpha(j).conj();
            let bb = params.beta(j).conj();
            let (c, d) = (params.c(k).clone(), params.d(k).clone());
            m.push(
                (c.clone() * m[k - 2].clone() - d.clone() * ab.clone() * m[k - 1].clone())
                    / (ab.clone() * bb),
            );
            kappa.push(c * kappa[k - 2].clone() - d * ab * kappa[k - 1].clone());
        } else {
            let j = (k - 1) / 2;
            let (c, d) = (params.c(k).clone(), params.d(k).clone());
            m.push(d.clone() * m[k - 1].clone() + c.clone() * m[k - 2].clone());
            let ab_bb = params.alpha(j).conj() * params.beta(j).conj();
            kappa.push(d * kappa[k - 1].clone() + ab_bb * c * kappa[k - 2].clone());
        }
    }
    m.truncate(n + 1);
    kappa.truncate(n + 1);
    let chi = (0..=n).map(|k| params.chi(k)).collect();
    Ok(MomentTable { m, kappa, chi })
}

/// Writes `f = O_n * p` with `deg p <= n`.
///
/// The cofactor `den(O_n) / den(f)` is expanded into the numerator, which
/// must then be an exact multiple of `r_n`.
pub fn express_in_o<S: Scalar>(f: &RationalFn<S>, n: usize, os: &[RationalFn<S>]) -> Result<Polynomial<S>> {
    let not = |reason: &str| Error::NotExpressible {
        index: n,
        reason: reason.to_string(),
    };
    let target = os.get(n).ok_or_else(|| not("O_n not generated"))?;
    let cof = cofactor_divide(&target.den, &f.den).map_err(|_| not("denominator is not a sub-bag"))?;
    let lifted = &f.num * &cof.expand();
    let p = lifted
        .exact_div(&target.num)
        .ok_or_else(|| not("numerator is not a multiple of r_n"))?;
    if p.degree().is_some_and(|d| d > n) {
        return Err(not("quotient degree exceeds n"));
    }
    Ok(p)
}

/// Value of the functional on `f`, reduced against `O_n`: only the `z^n`
/// coefficient survives and contributes `m_n`.
pub fn functional_value<S: Scalar>(
    f: &RationalFn<S>,
    n: usize,
    os: &[RationalFn<S>],
    mom: &MomentTable<S>,
) -> Result<S> {
    let p = express_in_o(f, n, os)?;
    Ok(p.coeff(n) * mom.m[n].clone())
}

/// The functional on `phi_n J~_m`.
pub fn pair_value<S: Scalar>(n: usize, m: usize, fam: &Families<S>, mom: &MomentTable<S>) -> Result<S> {
    let f = fam.phi[n].mul(&fam.j_tilde[m]);
    functional_value(&f, n.max(m), &fam.o, mom)
}

/// `B[n][m]`, the functional on `phi_n psi~_m`, for `n, m <= k`.
///
/// Needs families up to `k + 1` since `psi~_k` involves `J~_{k+1}`.
pub fn biorth_matrix<S: Scalar>(fam: &Families<S>, mom: &MomentTable<S>, k: usize) -> Result<Vec<Vec<S>>> {
    if fam.psi.len() <= k {
        return Err(Error::ParamOutOfRange {
            what: "psi",
            index: k,
            len: fam.psi.len(),
        });
    }
    let cells: Vec<(usize, usize)> = (0..=k).flat_map(|n| (0..=k).map(move |m| (n, m))).collect();
    let values: Vec<S> = cells
        .par_iter()
        .map(|&(n, m)| {
            fam.psi[m].iter().try_fold(S::zero(), |acc, (coeff, idx)| {
                Ok(acc + coeff.clone() * pair_value(n, *idx, fam, mom)?)
            })
        })
        .collect::<Result<_>>()?;
    Ok(values.chunks(k + 1).map(<[S]>::to_vec).collect())
}

/// Expected diagonal `B[k][k] = c_2 ... c_{k+1} (m_1 kappa_0 - m_0 kappa_1) / chi_{k+1}`.
pub fn closed_form_diag<S: Scalar>(params: &ParamSeq<S>, mom: &MomentTable<S>, k: usize) -> S {
    let prod = (2..=k + 1).fold(S::one(), |acc, i| acc * params.c(i).clone());
    prod * mom.gap() / params.chi(k + 1)
}

/// Deviation of `B` from the diagonal closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct BiorthCheck {
    pub residual: Residual,
    /// Largest `|B[n][n] - closed| / (1 + |closed|)`.
    pub max_diag_rel: f64,
    /// Largest `|B[n][m]|`, `n != m`.
    pub max_offdiag: f64,
}

pub fn check_biorth<S: Scalar>(params: &ParamSeq<S>, mom: &MomentTable<S>, b: &[Vec<S>]) -> BiorthCheck {
    let mut residual = Residual::zero();
    let mut max_diag_rel: f64 = 0.0;
    let mut max_offdiag: f64 = 0.0;
    for (n, row) in b.iter().enumerate() {
        for (m, v) in row.iter().enumerate() {
            if n == m {
                let closed = closed_form_diag(params, mom, n);
                let diff = v.clone() - closed.clone();
                let rel = diff.magnitude() / (1.0 + closed.magnitude());
                max_diag_rel = max_diag_rel.max(rel);
                residual.record_value(&diff, rel);
            } else {
                let mag = v.magnitude();
                max_offdiag = max_offdiag.max(mag);
                residual.record_value(v, mag);
            }
        }
    }
    BiorthCheck {
        residual,
        max_diag_rel,
        max_offdiag,
    }
}

/// The functional on `z^k O_n`.
pub fn shifted_o_value<S: Scalar>(n: usize, k: usize, fam: &Families<S>, mom: &MomentTable<S>) -> Result<S> {
    let f = fam.o[n].mul_poly(&Polynomial::monomial(S::one(), k));
    functional_value(&f, n, &fam.o, mom)
}

/// The functional on `z^k O_n` for every `k < n <= top`; all should vanish.
pub fn check_vanishing_moments<S: Scalar>(fam: &Families<S>, mom: &MomentTable<S>, top: usize) -> Result<Residual> {
    let mut res = Residual::zero();
    for n in 1..=top {
        for k in 0..n {
            let v = shifted_o_value(n, k, fam, mom)?;
            res.record_value(&v, v.magnitude());
        }
    }
    Ok(res)
}

/// Applies the functional to both sides of each `O`-recurrence multiplied by
/// `z^k`, for every `k` that keeps all three terms reducible. Each side is
/// reduced against a different `O_N`, so agreement checks that reductions at
/// different indices are mutually consistent.
pub fn check_cross_n<S: Scalar>(fam: &Families<S>, mom: &MomentTable<S>, top: usize) -> Result<Residual> {
    let p = &fam.params;
    let mut res = Residual::zero();
    for idx in 2..=top {
        let m = idx / 2;
        // the three pieces of the recurrence as (multiplier, O index)
        let pieces: [(Polynomial<S>, usize); 3] = if idx % 2 == 1 {
            let mm = (idx - 1) / 2;
            let zb = LinearFactor::z_minus(p.beta(mm).clone()).to_poly();
            let lhs = &LinearFactor::z_minus(p.alpha(mm + 1).clone()).to_poly() * &zb;
            let mid = &Polynomial::constant(p.e(idx).clone()) + &zb.scale(p.d(idx));
            [
                (lhs, idx),
                (-&mid, idx - 1),
                (Polynomial::constant(-p.c(idx).clone()), idx - 2),
            ]
        } else {
            let za = LinearFactor::one_minus_z(p.alpha(m).conj()).to_poly();
            let lhs = &za * &LinearFactor::one_minus_z(p.beta(m).conj()).to_poly();
            let mid = &Polynomial::constant(p.e(idx).clone()) + &za.scale(p.d(idx));
            [
                (lhs, idx),
                (-&mid, idx - 1),
                (Polynomial::constant(-p.c(idx).clone()), idx - 2),
            ]
        };
        // largest k with every multiplier degree + k within its index
        let kmax = pieces
            .iter()
            .map(|(q, i)| *i as isize - q.degree().unwrap_or(0) as isize)
            .min()
            .unwrap_or(-1);
        for k in 0..=kmax {
            let zk = Polynomial::monomial(S::one(), k as usize);
            let terms: Vec<S> = pieces
                .iter()
                .map(|(q, i)| functional_value(&fam.o[*i].mul_poly(&(&zk * q)), *i, &fam.o, mom))
                .collect::<Result<_>>()?;
            res.record(&terms);
        }
    }
    Ok(res)
}

/// For each pair `(n, m)`, reduces `phi_n J~_m` against every `O_N` with
/// `N >= max(n, m)` where the reduction is legal and compares the values.
/// Returns the residual and the number of pairs with two or more legal
/// reductions.
pub fn check_cross_n_pairs<S: Scalar>(fam: &Families<S>, mom: &MomentTable<S>, top: usize) -> (Residual, usize) {
    let mut res = Residual::zero();
    let mut multi = 0;
    for n in 0..=top {
        for m in 0..=top {
            let f = fam.phi[n].mul(&fam.j_tilde[m]);
            let values: Vec<S> = (n.max(m)..=top)
                .filter_map(|big| functional_value(&f, big, &fam.o, mom).ok())
                .collect();
            if values.len() >= 2 {
                multi += 1;
                for v in &values[1..] {
                    res.record(&[v.clone(), -values[0].clone()]);
                }
            }
        }
    }
    (res, multi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{gauss, gauss_int, Exact};
    use crate::algebra::FactorBag;
    use crate::fixtures;
    use crate::recurrence::PsiVariant;

    fn s1() -> (Families<Exact>, MomentTable<Exact>) {
        let p = fixtures::s1();
        let fam = Families::build(&p, 3, PsiVariant::default()).unwrap();
        let mom = gen_moments(&p, gauss_int(1, 0), gauss_int(3, 0), 3).unwrap();
        (fam, mom)
    }

    #[test]
    fn moments_on_s1() {
        let (fam, mom) = s1();
        assert_eq!(mom.m[2], gauss_int(0, -2));
        assert_eq!(mom.m[3], gauss_int(3, -2));
        assert_eq!(mom.kappa[2], gauss_int(-2, 0));
        assert_eq!(mom.kappa[3], gauss_int(-2, -4));
        for (k, r) in fam.r.iter().enumerate() {
            assert_eq!(r.leading().unwrap(), &mom.kappa[k]);
        }
    }

    #[test]
    fn degenerate_moments_rejected() {
        let p = fixtures::s1();
        assert_eq!(
            gen_moments(&p, gauss_int(1, 0), gauss_int(2, 0), 3),
            Err(Error::DegenerateMoments)
        );
    }

    #[test]
    fn reductions_on_s1() {
        let (fam, _) = s1();
        let z = Polynomial::monomial(gauss_int(1, 0), 1);
        assert_eq!(express_in_o(&fam.phi[1], 1, &fam.o).unwrap(), z);
        let f = fam.phi[0].mul(&fam.j_tilde[1]);
        assert_eq!(
            express_in_o(&f, 1, &fam.o).unwrap(),
            Polynomial::linear(gauss_int(-1, 0), gauss(1, 2, 0, 1))
        );
        // 1/(2z) as one function has lost its r_1 factor
        let combined = RationalFn::new(
            Polynomial::constant(gauss(1, 2, 0, 1)),
            FactorBag::from_factors([LinearFactor::z_minus(gauss_int(0, 0))]),
        );
        assert!(matches!(express_in_o(&combined, 1, &fam.o), Err(Error::NotExpressible { .. })));
    }

    #[test]
    fn pair_values_on_s1() {
        let (fam, mom) = s1();
        assert_eq!(pair_value(0, 0, &fam, &mom).unwrap(), gauss_int(1, 0));
        assert_eq!(pair_value(0, 1, &fam, &mom).unwrap(), gauss(3, 2, 0, 1));
        assert_eq!(pair_value(1, 2, &fam, &mom).unwrap(), gauss_int(0, -2));
    }

    #[test]
    fn biorthogonality_anchors_on_s1() {
        let (fam, mom) = s1();
        let b = biorth_matrix(&fam, &mom, 2).unwrap();
        assert_eq!(b[0][0], gauss(1, 2, 0, 1));
        assert_eq!(b[1][1], gauss_int(0, -1));
        assert_eq!(b[1][0], gauss_int(0, 0));
        assert_eq!(b[0][1], gauss_int(0, 0));
        let check = check_biorth(&fam.params, &mom, &b);
        assert!(check.residual.exact_zero);
    }

    #[test]
    fn literal_psi0_breaks_first_column() {
        let p = fixtures::s1();
        let variant = PsiVariant {
            literal_psi0: true,
            ..Default::default()
        };
        let fam = Families::build(&p, 3, variant).unwrap();
        let mom = gen_moments(&p, gauss_int(1, 0), gauss_int(3, 0), 3).unwrap();
        let b = biorth_matrix(&fam, &mom, 1).unwrap();
        // the functional on phi_1 alone is m_1
        assert_eq!(b[1][0], gauss_int(3, 0));
    }

    #[test]
    fn consistency_checks_on_s1() {
        let (fam, mom) = s1();
        assert!(check_vanishing_moments(&fam, &mom, 3).unwrap().exact_zero);
        let cross = check_cross_n(&fam, &mom, 3).unwrap();
        assert!(cross.exact_zero && cross.count > 0);
    }
}
