//! Christoffel-type transform for a single pole `alpha` and unimodular
//! `beta_j`.

use crate::algebra::{cofactor_divide, FactorBag, LinearFactor, Polynomial, RationalFn, Scalar};
use crate::error::{Error, Result};
use crate::functional::{functional_value, MomentTable};
use crate::recurrence::{sample_points, Families, ParamSeq};
use crate::sampling::Sampler;
use crate::Residual;

/// Magnitude below which a float `theta_j` makes the shift point inadmissible.
pub const FLOAT_ADMISSIBLE_EPS: f64 = 1e-8;

/// Coefficients of the three-term recurrences for `phi_k` in the special case.
#[derive(Debug, Clone, PartialEq)]
pub struct UvParams<S> {
    pub alpha: S,
    /// Includes `beta_0 = 0`.
    pub beta: Vec<S>,
    pub u: Vec<S>,
    pub nu: Vec<S>,
    pub lambda: Vec<S>,
}

impl<S: Scalar> UvParams<S> {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// `u_k nu_k`.
    pub fn pi(&self, k: usize) -> S {
        self.u[k].clone() * self.nu[k].clone()
    }
}

pub fn to_uv_params<S: Scalar>(params: &ParamSeq<S>) -> Result<UvParams<S>> {
    if !params.is_special_case() {
        return Err(Error::SpecialCaseViolation(
            "requires a single repeated alpha and |beta_j| = 1".to_string(),
        ));
    }
    let depth = params.depth();
    if let Some(k) = (1..=depth).find(|&k| params.d(k).is_zero()) {
        return Err(Error::InvalidParam {
            field: "d",
            index: k,
            reason: "must be nonzero for the reparameterization".to_string(),
        });
    }
    let alpha = params.alpha(1).clone();
    let ab = alpha.conj();
    let (mut u, mut nu, mut lambda) = (Vec::new(), Vec::new(), Vec::new());
    for k in 0..depth {
        let n = k / 2;
        let (d, e, c) = (params.d(k + 1).clone(), params.e(k + 1).clone(), params.c(k + 1).clone());
        if k % 2 == 0 {
            nu.push((d.clone() * params.beta(n).clone() - e) / d.clone());
            u.push(d);
            lambda.push(if k == 0 { S::zero() } else { -(c * ab.clone()) });
        } else {
            let b = params.beta(n + 1).clone();
            u.push(b.clone() * d.clone() * ab.clone());
            nu.push((e + d.clone()) / (d * ab.clone()));
            lambda.push(-(b * c));
        }
    }
    Ok(UvParams {
        alpha,
        beta: params.betas().to_vec(),
        u,
        nu,
        lambda,
    })
}

fn phi_values<S: Scalar>(fam: &Families<S>, top: usize, z: &S) -> Result<Vec<S>> {
    (0..=top).map(|k| fam.phi_at(k, z)).collect()
}

/// Rows of `Gamma rho = z Lambda rho` for the original system, evaluated at
/// `count` seeded points; rows `0..rows` need `phi` up to `rows`.
pub fn shift_residuals<S: Scalar>(
    uv: &UvParams<S>,
    fam: &Families<S>,
    rows: usize,
    seed: u64,
    count: usize,
) -> Result<Residual> {
    let rows = rows.min(uv.len()).min(fam.top());
    let dens: Vec<_> = fam.phi[..=rows].iter().map(|f| &f.den).collect();
    let points = sample_points(seed, count, &dens)?;
    let mut res = Residual::zero();
    let ab = uv.alpha.conj();
    for z in &points {
        let ph = phi_values(fam, rows, z)?;
        let prev = |k: usize| if k >= 1 { ph[k - 1].clone() } else { S::zero() };
        for k in 0..rows {
            let n = k / 2;
            let (u, lam) = (uv.u[k].clone(), uv.lambda[k].clone());
            let (lead, back) = if k % 2 == 0 {
                (uv.alpha.clone(), lam.clone() / ab.clone())
            } else {
                (uv.beta[n + 1].clone(), lam.clone() * uv.beta[n].clone())
            };
            res.record(&[
                lead * ph[k + 1].clone(),
                -(uv.pi(k) * ph[k].clone()),
                -(back * prev(k)),
                -(z.clone() * ph[k + 1].clone()),
                z.clone() * u * ph[k].clone(),
                z.clone() * lam * prev(k),
            ]);
        }
    }
    Ok(res)
}

/// Tables attached to one shift point `z_hat`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelContext<S> {
    pub z_hat: S,
    pub alpha: S,
    /// Includes `beta_0`.
    pub beta: Vec<S>,
    pub theta: Vec<S>,
    pub zeta: Vec<S>,
    pub eta: Vec<S>,
    pub hat_u: Vec<S>,
    /// `hat_u * hat_nu`, kept separately because `hat_u_1` vanishes.
    pub hat_pi: Vec<S>,
    pub hat_nu: Vec<Option<S>>,
    pub hat_lambda: Vec<S>,
    pub sigma: S,
    pub uv: UvParams<S>,
}

impl<S: Scalar> ChristoffelContext<S> {
    /// `hat beta_n = beta_{n+1}`, zero for negative `n`.
    pub fn hat_beta(&self, n: isize) -> S {
        if n < 0 {
            S::zero()
        } else {
            self.beta[n as usize + 1].clone()
        }
    }

    /// Number of hatted parameter indices.
    pub fn levels(&self) -> usize {
        self.hat_u.len()
    }
}

fn admissible<S: Scalar>(x: &S) -> bool {
    if S::EXACT {
        !x.is_zero()
    } else {
        x.magnitude() > FLOAT_ADMISSIBLE_EPS
    }
}

/// Builds `theta_0..theta_{n+1}`, `zeta` and `eta` up to `n`, and hatted
/// parameters for indices `0..n`.
pub fn build_context<S: Scalar>(
    uv: &UvParams<S>,
    fam: &Families<S>,
    z_hat: S,
    n: usize,
) -> Result<ChristoffelContext<S>> {
    fam.params.require_depth(n + 1)?;
    if uv.len() < n + 1 {
        return Err(Error::ParamOutOfRange {
            what: "uv",
            index: n,
            len: uv.len(),
        });
    }
    let theta: Vec<S> = (0..=n + 1)
        .map(|j| {
            fam.phi_at(j, &z_hat)
                .map_err(|_| Error::InadmissibleShift {
                    what: "denominator of phi",
                    index: j,
                })
        })
        .collect::<Result<_>>()?;
    if let Some(j) = theta.iter().position(|t| !admissible(t)) {
        return Err(Error::InadmissibleShift { what: "theta", index: j });
    }
    let th = |k: isize| if k < 0 { S::zero() } else { theta[k as usize].clone() };
    let zeta: Vec<S> = (0..=n).map(|k| -(theta[k + 1].clone() / theta[k].clone())).collect();
    // theta_{k+1} - u_k theta_k - lambda_k theta_{k-1}
    let lam_theta = |k: usize| {
        theta[k + 1].clone() - uv.u[k].clone() * theta[k].clone() - uv.lambda[k].clone() * th(k as isize - 1)
    };
    let mut eta = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let den = if k == 0 { theta[0].clone() } else { lam_theta(k - 1) };
        if !admissible(&den) {
            return Err(Error::InadmissibleShift {
                what: "eta denominator",
                index: k,
            });
        }
        eta.push(-(lam_theta(k) / den));
    }

    let alpha = uv.alpha.clone();
    let beta = uv.beta.clone();
    let (mut hat_u, mut hat_pi, mut hat_lambda) = (Vec::new(), Vec::new(), Vec::new());
    for k in 0..n {
        let m = k / 2;
        if k % 2 == 0 {
            hat_u.push(uv.u[k + 1].clone() - eta[k + 1].clone() + zeta[k + 1].clone());
            hat_pi.push(uv.pi(k + 1) + alpha.clone() * (zeta[k + 1].clone() - eta[k + 1].clone()));
            hat_lambda.push(if m == 0 {
                uv.lambda[0].clone()
            } else {
                eta[k + 1].clone() * uv.lambda[k].clone() / zeta[k - 1].clone()
            });
        } else {
            hat_u.push(uv.u[k - 1].clone() - eta[k - 1].clone() + zeta[k - 1].clone());
            hat_pi.push(
                uv.pi(k - 1) + beta[m + 1].clone() * zeta[k - 1].clone()
                    - beta[m].clone() * eta[k - 1].clone(),
            );
            hat_lambda.push(if m == 0 {
                S::zero()
            } else {
                eta[k - 1].clone() * uv.lambda[k - 2].clone() / zeta[k - 3].clone()
            });
        }
    }
    let hat_nu = hat_u
        .iter()
        .zip(&hat_pi)
        .map(|(u, p)| (!u.is_zero()).then(|| p.clone() / u.clone()))
        .collect();

    let sigma_den = uv.u[0].clone() * (uv.nu[0].clone() - alpha.clone());
    if sigma_den.is_zero() {
        return Err(Error::InadmissibleShift {
            what: "sigma denominator",
            index: 0,
        });
    }
    let sigma = (z_hat.clone() - alpha.clone()) / sigma_den;
    Ok(ChristoffelContext {
        z_hat,
        alpha,
        beta,
        theta,
        zeta,
        eta,
        hat_u,
        hat_pi,
        hat_nu,
        hat_lambda,
        sigma,
        uv: uv.clone(),
    })
}

/// Attempt budget of [`sample_shift_point`].
pub const SHIFT_ATTEMPTS: usize = 50;

/// Draws `z_hat` from `sampler` until the context and every transform up to
/// level `n` can be built, i.e. all `theta_j` and `eta` denominators are
/// nonzero and `z_hat` sits on no pole.
pub fn sample_shift_point<S: Scalar>(
    uv: &UvParams<S>,
    fam: &Families<S>,
    n: usize,
    sampler: &mut Sampler,
) -> Result<ChristoffelContext<S>> {
    let mut last = Error::InadmissibleShift { what: "z_hat", index: 0 };
    for _ in 0..SHIFT_ATTEMPTS {
        let z = S::from_exact(&sampler.eval_point());
        if z.matches(&uv.alpha) || uv.beta.get(1).is_some_and(|b| z.matches(b)) {
            continue;
        }
        match build_context(uv, fam, z, n).and_then(|ctx| transform_phi(&ctx, fam).map(|_| ctx)) {
            Ok(ctx) => return Ok(ctx),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Residuals of the relation between hatted and original parameters,
/// `conj(a)^2 hat_pi_{2n} zeta_{2n} + conj(a) hat_lambda_{2n}
///  = conj(a)^2 pi_{2n} eta_{2n+1} + conj(a) lambda_{2n+1}`, for `n >= 1`.
pub fn hat_consistency<S: Scalar>(ctx: &ChristoffelContext<S>) -> Residual {
    let ab = ctx.alpha.conj();
    let ab2 = ab.clone() * ab.clone();
    let mut res = Residual::zero();
    let mut n = 1;
    while 2 * n < ctx.levels() && 2 * n + 1 < ctx.eta.len() && 2 * n + 1 < ctx.uv.len() {
        let k = 2 * n;
        res.record(&[
            ab2.clone() * ctx.hat_pi[k].clone() * ctx.zeta[k].clone(),
            ab.clone() * ctx.hat_lambda[k].clone(),
            -(ab2.clone() * ctx.uv.pi(k) * ctx.eta[k + 1].clone()),
            -(ab.clone() * ctx.uv.lambda[k + 1].clone()),
        ]);
        n += 1;
    }
    res
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

/// One transformed function `phi^_m = Omega(z) (phi_{m+1} + zeta_m phi_m)`
/// with `Omega = sigma (z - beta_1) / (z - z_hat)` for odd `m` and
/// `sigma (z - alpha) / (z - z_hat)` for even `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct HatFunction<S> {
    pub index: usize,
    pub parity: Parity,
    /// `(coefficient, phi index)` inside the bracket.
    pub terms: [(S, usize); 2],
    /// Linear factor multiplying `sigma` in `Omega`.
    pub prefactor: LinearFactor<S>,
    pub sigma: S,
    /// Bracket over the common denominator `den(phi_{m+1})`.
    pub bracket: RationalFn<S>,
    /// Bracket numerator at `z_hat`; zero when the pole of `Omega` is
    /// removable.
    pub bracket_at_z_hat: S,
    /// `phi^_m` with `(z - z_hat)` divided out of the bracket numerator.
    pub reduced: RationalFn<S>,
}

fn hat_function<S: Scalar>(ctx: &ChristoffelContext<S>, fam: &Families<S>, m: usize) -> Result<HatFunction<S>> {
    let params = &fam.params;
    let zeta = ctx.zeta[m].clone();
    let hi = params.den_phi(m + 1);
    let cof = cofactor_divide(&hi, &params.den_phi(m))?;
    let num = &fam.r[m + 1] + &(&fam.r[m] * &cof.expand()).scale(&zeta);
    let bracket = RationalFn::new(num.clone(), hi.clone());
    let at = num.eval(&ctx.z_hat);
    let (parity, prefactor) = if m % 2 == 1 {
        (Parity::Odd, LinearFactor::z_minus(ctx.beta[1].clone()))
    } else {
        (Parity::Even, LinearFactor::z_minus(ctx.alpha.clone()))
    };
    let quotient = num
        .exact_div(&LinearFactor::z_minus(ctx.z_hat.clone()).to_poly())
        .ok_or(Error::InadmissibleShift {
            what: "removable singularity",
            index: m,
        })?;
    let reduced = RationalFn::new((&quotient * &prefactor.to_poly()).scale(&ctx.sigma), hi);
    Ok(HatFunction {
        index: m,
        parity,
        terms: [(S::one(), m + 1), (zeta, m)],
        prefactor,
        sigma: ctx.sigma.clone(),
        bracket,
        bracket_at_z_hat: at,
        reduced,
    })
}

/// `(odd transforms, even transforms)` for every index the context covers.
#[allow(clippy::type_complexity)]
pub fn transform_phi<S: Scalar>(
    ctx: &ChristoffelContext<S>,
    fam: &Families<S>,
) -> Result<(Vec<HatFunction<S>>, Vec<HatFunction<S>>)> {
    let top = ctx.zeta.len().min(fam.top());
    let mut odd = Vec::new();
    let mut even = Vec::new();
    for m in 0..top {
        let h = hat_function(ctx, fam, m)?;
        match h.parity {
            Parity::Odd => odd.push(h),
            Parity::Even => even.push(h),
        }
    }
    Ok((odd, even))
}

/// Value of one weighted orthogonality sum.
#[derive(Debug, Clone, PartialEq)]
pub struct HatOrthEntry<S> {
    pub parity: Parity,
    pub n: usize,
    pub j: usize,
    pub value: S,
}

/// Applies the transformed functionals to `z^j w_n(z) phi^` for every legal
/// `j`, term by term against the `O`-basis.
///
/// Odd `phi^_{2n+1}`: weight `1 / ((1 - z conj(a))^n prod_{k=0}^{n} (z - beta_k))`,
/// functional multiplied by `(z - z_hat) / (z - beta_1)`, `j = 0..=2n`.
/// Even `phi^_{2n}`: weight with `prod_{k=0}^{n-1}`, functional multiplied
/// by `(z - z_hat) / (z - alpha)`, `j = 0..2n`.
pub fn verify_hat_orthogonality<S: Scalar>(
    ctx: &ChristoffelContext<S>,
    hats: &[HatFunction<S>],
    fam: &Families<S>,
    mom: &MomentTable<S>,
    n_max: usize,
) -> Result<(Residual, Vec<HatOrthEntry<S>>)> {
    let mut res = Residual::zero();
    let mut entries = Vec::new();
    let shift = LinearFactor::z_minus(ctx.z_hat.clone());
    for h in hats {
        let (n, js, beta_count) = match h.parity {
            Parity::Odd => {
                let n = (h.index - 1) / 2;
                (n, 0..2 * n + 1, n + 1)
            }
            Parity::Even => {
                let n = h.index / 2;
                (n, 0..2 * n, n)
            }
        };
        if n > n_max || h.index + 1 > fam.top() || h.index + 1 >= mom.m.len() {
            continue;
        }
        let mut weight = FactorBag::new().with(LinearFactor::one_minus_z(ctx.alpha.conj()), n);
        for k in 0..beta_count {
            weight.insert(LinearFactor::z_minus(ctx.beta[k].clone()), 1);
        }
        for j in js {
            let mut terms = Vec::with_capacity(2);
            for (coeff, idx) in &h.terms {
                let num = Polynomial::monomial(h.sigma.clone(), j);
                let num = &(&(&num * &h.prefactor.to_poly()) * &shift.to_poly()) * &fam.r[*idx];
                let den = fam.params
                    .den_phi(*idx)
                    .union(&weight)
                    .with(shift.clone(), 1)
                    .with(h.prefactor.clone(), 1);
                let f = RationalFn::new(num, den)
                    .cancel_factor(&shift)?
                    .cancel_factor(&h.prefactor)?;
                terms.push(coeff.clone() * functional_value(&f, *idx, &fam.o, mom)?);
            }
            let (value, rel) = crate::recurrence::combine_terms(&terms);
            res.record_value(&value, rel);
            entries.push(HatOrthEntry {
                parity: h.parity,
                n,
                j,
                value,
            });
        }
    }
    Ok((res, entries))
}

/// Index reading of the subdiagonal `hat beta` in the odd-system rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Convention {
    /// `hat beta_{n-2}`, as printed.
    AsWritten,
    /// `hat beta_{n-1}`, matching the even system.
    IndexRepaired,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::AsWritten, Convention::IndexRepaired];

    pub fn label(&self) -> &'static str {
        match self {
            Self::AsWritten => "as_written",
            Self::IndexRepaired => "index_repaired",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HatShiftRow {
    pub system: Parity,
    pub row: usize,
    pub convention: Convention,
    pub residual: Residual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HatShiftReport {
    pub rows: Vec<HatShiftRow>,
}

impl HatShiftReport {
    /// Conventions with an exactly vanishing residual on `(system, row)`.
    pub fn winners(&self, system: Parity, row: usize) -> Vec<Convention> {
        self.rows
            .iter()
            .filter(|r| r.system == system && r.row == row && r.residual.exact_zero)
            .map(|r| r.convention)
            .collect()
    }

    /// Whether every row has at least one exactly vanishing convention.
    pub fn every_row_has_winner(&self) -> bool {
        self.rows
            .iter()
            .all(|r| !self.winners(r.system, r.row).is_empty())
    }
}

/// Rows of `Gamma^ rho^ = z Lambda^ rho^` for both transformed systems under
/// both conventions, at `count` seeded points.
///
/// `rho^_k = Omega (phi_{k+1} + zeta_k phi_k)`. Even rows `k = 2n` use
/// `lead * Y_{k+1} - hat_pi_{k+1} Y_k - sub * hat_lambda_{k+1} Y_{k-1}`
/// against `Y_{k+1} - hat_u_{k+1} Y_k - hat_lambda_{k+1} Y_{k-1}`, where the
/// odd system has `lead = hat beta_n` and `sub = hat beta_{n-2}` (literal)
/// or `hat beta_{n-1}` (repaired), and the even system has
/// `lead = hat beta_{n+1}`, `sub = hat beta_{n-1}`. Odd rows use
/// `alpha Y_{k+1} - hat_pi_{k-1} Y_k - (hat_lambda_{k-1} / conj(alpha)) Y_{k-1}`
/// against `Y_{k+1} - hat_u_{k-1} Y_k - hat_lambda_{k-1} Y_{k-1}`.
pub fn hat_shift_residuals<S: Scalar>(
    ctx: &ChristoffelContext<S>,
    fam: &Families<S>,
    seed: u64,
    count: usize,
) -> Result<HatShiftReport> {
    // rows need hatted index k+1, zeta_{k+1} and phi_{k+2}
    let rows = ctx
        .levels()
        .saturating_sub(1)
        .min(ctx.zeta.len().saturating_sub(2))
        .min(fam.top().saturating_sub(2) + 1);
    let shift = LinearFactor::z_minus(ctx.z_hat.clone());
    let mut dens: Vec<FactorBag<S>> = fam.phi[..=rows + 1].iter().map(|f| f.den.clone()).collect();
    dens.push(FactorBag::from_factors([shift.clone()]));
    let den_refs: Vec<_> = dens.iter().collect();
    let points = sample_points(seed, count, &den_refs)?;
    let ab = ctx.alpha.conj();

    let mut out = Vec::new();
    for system in [Parity::Odd, Parity::Even] {
        for convention in Convention::ALL {
            let mut per_row = vec![Residual::zero(); rows];
            for z in &points {
                let omega_factor = match system {
                    Parity::Odd => z.clone() - ctx.beta[1].clone(),
                    Parity::Even => z.clone() - ctx.alpha.clone(),
                };
                let omega = ctx.sigma.clone() * omega_factor / (z.clone() - ctx.z_hat.clone());
                let ph = phi_values(fam, rows + 1, z)?;
                let y = |k: isize| -> S {
                    if k < 0 {
                        S::zero()
                    } else {
                        let k = k as usize;
                        omega.clone() * (ph[k + 1].clone() + ctx.zeta[k].clone() * ph[k].clone())
                    }
                };
                for (k, slot) in per_row.iter_mut().enumerate() {
                    let ki = k as isize;
                    let n = ki / 2;
                    let (lead, pi, u, lam, sub) = if k % 2 == 0 {
                        let (lead, sub) = match (system, convention) {
                            (Parity::Odd, Convention::AsWritten) => (ctx.hat_beta(n), ctx.hat_beta(n - 2)),
                            (Parity::Odd, Convention::IndexRepaired) => (ctx.hat_beta(n), ctx.hat_beta(n - 1)),
                            (Parity::Even, _) => (ctx.hat_beta(n + 1), ctx.hat_beta(n - 1)),
                        };
                        let lam = ctx.hat_lambda[k + 1].clone();
                        (lead, ctx.hat_pi[k + 1].clone(), ctx.hat_u[k + 1].clone(), lam, sub)
                    } else {
                        let lam = ctx.hat_lambda[k - 1].clone();
                        (
                            ctx.alpha.clone(),
                            ctx.hat_pi[k - 1].clone(),
                            ctx.hat_u[k - 1].clone(),
                            lam,
                            ab.recip(),
                        )
                    };
                    slot.record(&[
                        lead * y(ki + 1),
                        -(pi * y(ki)),
                        -(sub * lam.clone() * y(ki - 1)),
                        -(z.clone() * y(ki + 1)),
                        z.clone() * u * y(ki),
                        z.clone() * lam * y(ki - 1),
                    ]);
                }
            }
            out.extend(per_row.into_iter().enumerate().map(|(row, residual)| HatShiftRow {
                system,
                row,
                convention,
                residual,
            }));
        }
    }
    out.sort_by_key(|r| (r.system, r.row, r.convention));
    Ok(HatShiftReport { rows: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{gauss, gauss_int, Exact};
    use crate::fixtures;
    use crate::functional::gen_moments;
    use crate::recurrence::PsiVariant;

    fn s2() -> (Families<Exact>, UvParams<Exact>) {
        let p = fixtures::s2();
        let fam = Families::build(&p, 4, PsiVariant::default()).unwrap();
        let uv = to_uv_params(&p).unwrap();
        (fam, uv)
    }

    #[test]
    fn uv_values_on_s2() {
        let (_, uv) = s2();
        assert_eq!(uv.u[0], gauss_int(2, 0));
        assert_eq!(uv.nu[0], gauss(-1, 2, 0, 1));
        assert_eq!(uv.lambda[0], gauss_int(0, 0));
        assert_eq!(uv.lambda[2], gauss_int(-2, 0));
        assert_eq!(uv.u[1], gauss_int(0, 2));
    }

    #[test]
    fn rejects_non_special_case() {
        assert!(matches!(
            to_uv_params(&fixtures::s1()),
            Err(Error::SpecialCaseViolation(_))
        ));
    }

    #[test]
    fn original_shift_rows_vanish_on_s2() {
        let (fam, uv) = s2();
        let res = shift_residuals(&uv, &fam, 4, 11, 5).unwrap();
        assert!(res.exact_zero);
        assert_eq!(res.count, 20);
    }

    #[test]
    fn context_on_s2() {
        let (fam, uv) = s2();
        let z_hat = gauss_int(1, 0);
        let ctx = build_context(&uv, &fam, z_hat.clone(), 3).unwrap();
        assert_eq!(ctx.sigma, gauss(1, 5, 0, 1));
        assert_eq!(ctx.theta[0], gauss_int(1, 0));
        assert_eq!(ctx.zeta[0], -fam.phi_at(1, &z_hat).unwrap());
        let expected = uv.u[0].clone() * (z_hat.clone() - uv.nu[0].clone()) / (z_hat - uv.alpha.clone());
        assert_eq!(ctx.theta[1].clone() / ctx.theta[0].clone(), expected);
        // zeta_0 zeta_1 = theta_2 / theta_0
        assert_eq!(
            ctx.zeta[0].clone() * ctx.zeta[1].clone(),
            ctx.theta[2].clone() / ctx.theta[0].clone()
        );
        assert!(ctx.hat_u[1].is_zero());
        assert_eq!(ctx.hat_nu[1], None);
    }

    #[test]
    fn transforms_have_removable_pole() {
        let (fam, uv) = s2();
        let ctx = build_context(&uv, &fam, gauss_int(1, 0), 3).unwrap();
        let (odd, even) = transform_phi(&ctx, &fam).unwrap();
        assert_eq!(odd.len() + even.len(), 4);
        for h in odd.iter().chain(&even) {
            assert!(h.bracket_at_z_hat.is_zero());
        }
        // phi^_0 = sigma (z - alpha)/(z - z_hat) (phi_1(z) - phi_1(z_hat))
        let z = gauss(1, 3, 1, 4);
        let direct = ctx.sigma.clone() * (z.clone() - gauss_int(2, 0)) / (z.clone() - gauss_int(1, 0))
            * (fam.phi_at(1, &z).unwrap() - ctx.theta[1].clone());
        assert_eq!(even[0].reduced.eval(&z).unwrap(), direct);
    }

    #[test]
    fn transformed_orthogonality_on_s2() {
        let (fam, uv) = s2();
        let ctx = build_context(&uv, &fam, gauss_int(1, 0), 3).unwrap();
        let (odd, even) = transform_phi(&ctx, &fam).unwrap();
        let mom = gen_moments(&fam.params, gauss_int(1, 0), gauss_int(3, 0), 4).unwrap();
        let (res, entries) = verify_hat_orthogonality(&ctx, &odd, &fam, &mom, 5).unwrap();
        assert!(res.exact_zero);
        assert!(entries.iter().any(|e| e.parity == Parity::Odd && e.n == 1));
        let (res, _) = verify_hat_orthogonality(&ctx, &even, &fam, &mom, 5).unwrap();
        assert!(res.exact_zero);
    }

    #[test]
    fn hat_shift_report_structure() {
        let (fam, uv) = s2();
        let ctx = build_context(&uv, &fam, gauss_int(1, 0), 3).unwrap();
        let report = hat_shift_residuals(&ctx, &fam, 3, 4).unwrap();
        assert!(!report.rows.is_empty());
        // row 0: the two conventions differ only in a term multiplying Y_{-1}
        let r0: Vec<_> = report
            .rows
            .iter()
            .filter(|r| r.system == Parity::Odd && r.row == 0)
            .collect();
        assert_eq!(r0.len(), 2);
        assert_eq!(r0[0].residual, r0[1].residual);
    }
}
