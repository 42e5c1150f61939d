//! Parameter sequences, numerator polynomials and the rational-function
//! families built from them.

use crate::algebra::{FactorBag, LinearFactor, Polynomial, RationalFn, Scalar};
use crate::error::{Error, Result};
use crate::sampling::Sampler;
use crate::Residual;

/// How strictly [`ParamSeq::new`] validates its input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Validation {
    /// Every constraint, including `d_j != 0` needed by the Christoffel
    /// reparameterization.
    #[default]
    Full,
    /// Skips the `d_j != 0` check; enough for recurrences, pencils and
    /// biorthogonality.
    Relaxed,
}

/// Defining sequences of one instance.
///
/// Indexing follows the usual one-based convention: `alpha(j)` for
/// `j >= 1`, `beta(j)` for `j >= 0` with `beta(0) = 0`, and `e(k)`, `d(k)`,
/// `c(k)` for `k >= 1`. `c(1)` is stored but never enters any formula.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSeq<S> {
    alpha: Vec<S>,
    beta: Vec<S>,
    e: Vec<S>,
    d: Vec<S>,
    c: Vec<S>,
}

impl<S: Scalar> ParamSeq<S> {
    /// `beta` includes the leading `beta_0`, which must be zero.
    pub fn new(
        alpha: Vec<S>,
        beta: Vec<S>,
        e: Vec<S>,
        d: Vec<S>,
        c: Vec<S>,
        validation: Validation,
    ) -> Result<Self> {
        let invalid = |field, index, reason: &str| Error::InvalidParam {
            field,
            index,
            reason: reason.to_string(),
        };
        match beta.first() {
            None => return Err(invalid("beta", 0, "beta_0 = 0 must be supplied")),
            Some(b0) if !b0.is_zero() => return Err(invalid("beta", 0, "beta_0 must be 0")),
            _ => {}
        }
        for (i, a) in alpha.iter().enumerate() {
            let m = a.magnitude();
            if a.is_zero() {
                return Err(invalid("alpha", i + 1, "must be nonzero"));
            }
            if !m.is_finite() {
                return Err(invalid("alpha", i + 1, "must be finite"));
            }
        }
        for (j, b) in beta.iter().enumerate().skip(1) {
            if b.is_zero() {
                return Err(invalid("beta", j, "must be nonzero"));
            }
        }
        for (i, x) in c.iter().enumerate().skip(1) {
            if x.is_zero() {
                return Err(invalid("c", i + 1, "must be nonzero"));
            }
        }
        if validation == Validation::Full {
            for (i, x) in d.iter().enumerate() {
                if x.is_zero() {
                    return Err(invalid("d", i + 1, "must be nonzero"));
                }
            }
        }
        for (name, v) in [("alpha", &alpha), ("beta", &beta), ("e", &e), ("d", &d), ("c", &c)] {
            if let Some(i) = v.iter().position(|x| !x.magnitude().is_finite()) {
                return Err(invalid(name, if name == "beta" { i } else { i + 1 }, "must be finite"));
            }
        }
        Ok(Self {
            alpha,
            beta,
            e,
            d,
            c,
        })
    }

    pub fn alpha(&self, j: usize) -> &S {
        &self.alpha[j - 1]
    }

    pub fn beta(&self, j: usize) -> &S {
        &self.beta[j]
    }

    pub fn e(&self, k: usize) -> &S {
        &self.e[k - 1]
    }

    pub fn d(&self, k: usize) -> &S {
        &self.d[k - 1]
    }

    pub fn c(&self, k: usize) -> &S {
        &self.c[k - 1]
    }

    pub fn alphas(&self) -> &[S] {
        &self.alpha
    }

    /// Includes `beta_0`.
    pub fn betas(&self) -> &[S] {
        &self.beta
    }

    pub fn es(&self) -> &[S] {
        &self.e
    }

    pub fn ds(&self) -> &[S] {
        &self.d
    }

    pub fn cs(&self) -> &[S] {
        &self.c
    }

    /// Largest `k` for which `r_k` and every family member of index `k` is
    /// defined: needs `alpha` up to `ceil(k/2)`, `beta` up to `floor(k/2)` and
    /// `e, d, c` up to `k`.
    pub fn depth(&self) -> usize {
        let coeffs = self.e.len().min(self.d.len()).min(self.c.len());
        let by_alpha = 2 * self.alpha.len();
        let by_beta = 2 * (self.beta.len() - 1) + 1;
        coeffs.min(by_alpha).min(by_beta)
    }

    pub fn require_depth(&self, n: usize) -> Result<()> {
        let depth = self.depth();
        if n > depth {
            return Err(Error::ParamOutOfRange {
                what: "family",
                index: n,
                len: depth,
            });
        }
        Ok(())
    }

    /// Converts every value into another backend.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ParamSeq<T> {
        let conv = |v: &[S]| v.iter().map(&f).collect::<Vec<_>>();
        ParamSeq {
            alpha: conv(&self.alpha),
            beta: conv(&self.beta),
            e: conv(&self.e),
            d: conv(&self.d),
            c: conv(&self.c),
        }
    }

    /// Keeps only what is needed for families up to index `n`.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        self.require_depth(n)?;
        Ok(Self {
            alpha: self.alpha[..n.div_ceil(2)].to_vec(),
            beta: self.beta[..=n / 2].to_vec(),
            e: self.e[..n].to_vec(),
            d: self.d[..n].to_vec(),
            c: self.c[..n].to_vec(),
        })
    }

    /// Whether every `beta_j` (`j >= 1`) has modulus one and all `alpha_j`
    /// coincide.
    pub fn is_special_case(&self) -> bool {
        let uni = self.beta[1..].iter().all(|b| {
            let n = b.clone() * b.conj();
            if S::EXACT {
                n == S::one()
            } else {
                (b.magnitude() - 1.0).abs() <= 1e-12
            }
        });
        let same = self
            .alpha
            .windows(2)
            .all(|w| w[0].matches(&w[1]));
        uni && same
    }

    /// `∏_{k=1}^{count} (z - alpha_k)` as factors.
    fn push_alpha_poles(&self, bag: &mut FactorBag<S>, count: usize) {
        for k in 1..=count {
            bag.insert(LinearFactor::z_minus(self.alpha(k).clone()), 1);
        }
    }

    /// `∏_{k=1}^{count} (1 - z conj(alpha_k))`
    fn push_alpha_reflected(&self, bag: &mut FactorBag<S>, count: usize) {
        for k in 1..=count {
            bag.insert(LinearFactor::one_minus_z(self.alpha(k).conj()), 1);
        }
    }

    /// `∏_{k=0}^{count-1} (z - beta_k)`, starting with the factor `z`.
    fn push_beta_poles(&self, bag: &mut FactorBag<S>, count: usize) {
        for k in 0..count {
            bag.insert(LinearFactor::z_minus(self.beta(k).clone()), 1);
        }
    }

    /// `∏_{k=1}^{count} (1 - z conj(beta_k))`
    fn push_beta_reflected(&self, bag: &mut FactorBag<S>, count: usize) {
        for k in 1..=count {
            bag.insert(LinearFactor::one_minus_z(self.beta(k).conj()), 1);
        }
    }

    /// Denominator of `phi_k`.
    pub fn den_phi(&self, k: usize) -> FactorBag<S> {
        let mut bag = FactorBag::new();
        self.push_alpha_poles(&mut bag, k.div_ceil(2));
        self.push_beta_reflected(&mut bag, k / 2);
        bag
    }

    /// Denominator of `phi~_k`.
    pub fn den_phi_tilde(&self, k: usize) -> FactorBag<S> {
        let mut bag = FactorBag::new();
        self.push_alpha_reflected(&mut bag, k / 2);
        self.push_beta_poles(&mut bag, k.div_ceil(2));
        bag
    }

    /// Denominator of `O_k`, the union of the two above.
    pub fn den_o(&self, k: usize) -> FactorBag<S> {
        self.den_phi(k).union(&self.den_phi_tilde(k))
    }

    /// Normalization `chi_k` of `J~_k = phi~_k / chi_k`.
    pub fn chi(&self, k: usize) -> S {
        let mut x = S::one();
        for i in 1..=k / 2 {
            x = x * self.alpha(i).conj() / self.beta(i).conj();
        }
        if k % 2 == 1 {
            x = x * self.alpha(k / 2 + 1).conj();
        }
        x
    }
}

/// `r_0, ..., r_n` from the two-step recurrence with `r_{-1} = 0`.
pub fn gen_numerators<S: Scalar>(params: &ParamSeq<S>, n: usize) -> Result<Vec<Polynomial<S>>> {
    params.require_depth(n)?;
    let mut rs = Vec::with_capacity(n + 1);
    rs.push(Polynomial::one());
    for k in 1..=n {
        let next = if k % 2 == 1 {
            let m = (k - 1) / 2;
            let beta = params.beta(m);
            // e_k + d_k (z - beta_m)
            let lead = Polynomial::linear(
                params.e(k).clone() - params.d(k).clone() * beta.clone(),
                params.d(k).clone(),
            );
            let mut t = &lead * &rs[k - 1];
            if m >= 1 {
                let q = &LinearFactor::one_minus_z(params.alpha(m).conj()).to_poly()
                    * &LinearFactor::one_minus_z(beta.conj()).to_poly();
                t = &t + &(&q * &rs[k - 2]).scale(params.c(k));
            }
            t
        } else {
            let m = (k - 2) / 2;
            let ab = params.alpha(m + 1).conj();
            // e_k + d_k (1 - z conj(alpha_{m+1}))
            let lead = Polynomial::linear(
                params.e(k).clone() + params.d(k).clone(),
                -(params.d(k).clone() * ab),
            );
            let q = &LinearFactor::z_minus(params.alpha(m + 1).clone()).to_poly()
                * &LinearFactor::z_minus(params.beta(m).clone()).to_poly();
            &(&lead * &rs[k - 1]) + &(&q * &rs[k - 2]).scale(params.c(k))
        };
        rs.push(next);
    }
    Ok(rs)
}

/// The eight non-vanishing conditions checked per level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegularityCondition {
    /// `r_{2n}(alpha_n)`
    EvenAtAlpha,
    /// `r_{2n}(1 / conj(beta_n))`
    EvenAtBetaReflected,
    /// `r_{2n+1}(alpha_{n+1})`
    OddAtAlpha,
    /// `r_{2n+1}(1 / conj(beta_n))`
    OddAtBetaReflected,
    /// `r_{2n}(beta_{n-1})`
    EvenAtBeta,
    /// `r_{2n}(1 / conj(alpha_n))`
    EvenAtAlphaReflected,
    /// `r_{2n+1}(beta_n)`
    OddAtBeta,
    /// `r_{2n+1}(1 / conj(alpha_n))`
    OddAtAlphaReflected,
}

impl RegularityCondition {
    pub fn label(&self) -> &'static str {
        match self {
            Self::EvenAtAlpha => "r_2n(alpha_n)",
            Self::EvenAtBetaReflected => "r_2n(1/conj(beta_n))",
            Self::OddAtAlpha => "r_2n+1(alpha_n+1)",
            Self::OddAtBetaReflected => "r_2n+1(1/conj(beta_n))",
            Self::EvenAtBeta => "r_2n(beta_n-1)",
            Self::EvenAtAlphaReflected => "r_2n(1/conj(alpha_n))",
            Self::OddAtBeta => "r_2n+1(beta_n)",
            Self::OddAtAlphaReflected => "r_2n+1(1/conj(alpha_n))",
        }
    }

    /// The four conditions that the construction of the families needs, as
    /// opposed to the auxiliary ones used by later arguments.
    pub fn is_primary(&self) -> bool {
        matches!(
            self,
            Self::EvenAtAlpha | Self::EvenAtBetaReflected | Self::OddAtAlpha | Self::OddAtBetaReflected
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityCheck<S> {
    pub n: usize,
    pub condition: RegularityCondition,
    pub value: S,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport<S> {
    pub checks: Vec<RegularityCheck<S>>,
}

impl<S: Scalar> RegularityReport<S> {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RegularityCheck<S>> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Evaluates every condition whose polynomial is available in `rs`.
pub fn check_regularity<S: Scalar>(params: &ParamSeq<S>, rs: &[Polynomial<S>]) -> RegularityReport<S> {
    use RegularityCondition::*;
    let top = rs.len().saturating_sub(1);
    let mut checks = Vec::new();
    let mut push = |n: usize, condition, k: usize, z: S| {
        let p = &rs[k];
        let value = p.eval(&z);
        let scale = p.l1_norm() * z.magnitude().max(1.0).powi(k as i32);
        let holds = !value.is_negligible(scale);
        checks.push(RegularityCheck {
            n,
            condition,
            value,
            holds,
        });
    };
    for n in 0..=top / 2 {
        let even = 2 * n;
        let odd = 2 * n + 1;
        if n >= 1 {
            push(n, EvenAtAlpha, even, params.alpha(n).clone());
            push(n, EvenAtBetaReflected, even, params.beta(n).conj().recip());
            push(n, EvenAtBeta, even, params.beta(n - 1).clone());
            push(n, EvenAtAlphaReflected, even, params.alpha(n).conj().recip());
        }
        if odd <= top {
            push(n, OddAtAlpha, odd, params.alpha(n + 1).clone());
            push(n, OddAtBeta, odd, params.beta(n).clone());
            if n >= 1 {
                push(n, OddAtBetaReflected, odd, params.beta(n).conj().recip());
                push(n, OddAtAlphaReflected, odd, params.alpha(n).conj().recip());
            }
        }
    }
    RegularityReport { checks }
}

/// `phi_0, ..., phi_n`.
pub fn gen_phi<S: Scalar>(params: &ParamSeq<S>, rs: &[Polynomial<S>], n: usize) -> Vec<RationalFn<S>> {
    (0..=n)
        .map(|k| RationalFn::new(rs[k].clone(), params.den_phi(k)))
        .collect()
}

/// `O_0, ..., O_n`.
pub fn gen_o<S: Scalar>(params: &ParamSeq<S>, rs: &[Polynomial<S>], n: usize) -> Vec<RationalFn<S>> {
    (0..=n)
        .map(|k| RationalFn::new(rs[k].clone(), params.den_o(k)))
        .collect()
}

/// Which form of `psi~` to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PsiVariant {
    /// Power of `conj(beta_j)` in the `J~_{2j-1}` coefficient of `psi~_{2j}`.
    pub beta_power: u32,
    /// Use the constant `psi~_0 = 1` instead of the general three-term form.
    pub literal_psi0: bool,
}

impl Default for PsiVariant {
    fn default() -> Self {
        Self {
            beta_power: 2,
            literal_psi0: false,
        }
    }
}

/// `psi~_m` as `(coefficient, J~ index)` terms.
pub type PsiTerms<S> = Vec<(S, usize)>;

/// All families up to a common index.
#[derive(Debug, Clone)]
pub struct Families<S> {
    pub params: ParamSeq<S>,
    pub r: Vec<Polynomial<S>>,
    pub phi: Vec<RationalFn<S>>,
    pub o: Vec<RationalFn<S>>,
    pub phi_tilde: Vec<RationalFn<S>>,
    pub chi: Vec<S>,
    pub j_tilde: Vec<RationalFn<S>>,
    /// One entry shorter than the others: `psi~_m` needs `J~_{m+1}`.
    pub psi: Vec<PsiTerms<S>>,
}

impl<S: Scalar> Families<S> {
    pub fn build(params: &ParamSeq<S>, n: usize, variant: PsiVariant) -> Result<Self> {
        let rs = gen_numerators(params, n)?;
        let (phi_tilde, j_tilde, chi, psi) = gen_tilde_families(params, &rs, n, variant);
        Ok(Self {
            params: params.clone(),
            phi: gen_phi(params, &rs, n),
            o: gen_o(params, &rs, n),
            r: rs,
            phi_tilde,
            chi,
            j_tilde,
            psi,
        })
    }

    /// Like [`Families::build`], but refuses instances that fail any
    /// regularity condition.
    pub fn build_strict(params: &ParamSeq<S>, n: usize, variant: PsiVariant) -> Result<Self> {
        let fam = Self::build(params, n, variant)?;
        let report = check_regularity(params, &fam.r);
        if let Some(bad) = report.failures().next() {
            return Err(Error::RegularityViolation {
                n: bad.n,
                condition: bad.condition.label().to_string(),
            });
        }
        Ok(fam)
    }

    /// Highest family index.
    pub fn top(&self) -> usize {
        self.r.len() - 1
    }

    pub fn phi_at(&self, k: usize, z: &S) -> Result<S> {
        self.phi[k].eval(z)
    }
}

/// `(phi~, J~, chi, psi~)` up to index `n` (`psi~` up to `n - 1`).
#[allow(clippy::type_complexity)]
pub fn gen_tilde_families<S: Scalar>(
    params: &ParamSeq<S>,
    rs: &[Polynomial<S>],
    n: usize,
    variant: PsiVariant,
) -> (Vec<RationalFn<S>>, Vec<RationalFn<S>>, Vec<S>, Vec<PsiTerms<S>>) {
    let phi_tilde: Vec<_> = (0..=n)
        .map(|k| RationalFn::new(rs[k].clone(), params.den_phi_tilde(k)))
        .collect();
    let chi: Vec<_> = (0..=n).map(|k| params.chi(k)).collect();
    let j_tilde = phi_tilde
        .iter()
        .zip(&chi)
        .map(|(f, x)| f.scale(&x.recip()))
        .collect();
    let psi = (0..n).map(|m| psi_terms(params, m, variant)).collect();
    (phi_tilde, j_tilde, chi, psi)
}

/// Coefficients of `psi~_m` over `J~_{m-1}, J~_m, J~_{m+1}`.
pub fn psi_terms<S: Scalar>(params: &ParamSeq<S>, m: usize, variant: PsiVariant) -> PsiTerms<S> {
    let j = m / 2;
    if m.is_multiple_of(2) {
        if m == 0 && variant.literal_psi0 {
            return vec![(S::one(), 0)];
        }
        let ab = params.alpha(j + 1).conj();
        let mut terms = Vec::with_capacity(3);
        if j >= 1 {
            let coeff = params.c(m + 1).clone() * params.beta(j).conj().powi(variant.beta_power as usize)
                / ab.clone();
            terms.push((coeff, m - 1));
        }
        terms.push((-(params.d(m + 1).clone() / ab), m));
        terms.push((S::one(), m + 1));
        terms
    } else {
        let ab = params.alpha(j + 1).conj();
        let bb = params.beta(j + 1).conj();
        vec![
            (params.c(m + 1).clone() * bb.clone() / ab.clone(), m - 1),
            (-(params.d(m + 1).clone() * ab.clone() * bb), m),
            (ab, m + 1),
        ]
    }
}

/// Deterministic stream of evaluation points that avoid every pole of the
/// given denominators, for identity checks.
pub fn sample_points<S: Scalar>(
    seed: u64,
    count: usize,
    dens: &[&FactorBag<S>],
) -> Result<Vec<S>> {
    let mut sampler = Sampler::new(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut found = None;
        for _ in 0..100 {
            let z = S::from_exact(&sampler.eval_point());
            if dens.iter().all(|b| b.eval(&z).is_ok()) {
                found = Some(z);
                break;
            }
        }
        out.push(found.ok_or(Error::PoleHit)?);
    }
    Ok(out)
}

/// Number of random points used by identity checks.
pub const CHECK_POINTS: usize = 20;
const CHECK_SEED: u64 = 0x5eed_0001;

/// Accumulates `|sum terms| / (1 + sum |terms|)`.
pub(crate) fn combine_terms<S: Scalar>(terms: &[S]) -> (S, f64) {
    let total = terms.iter().cloned().fold(S::zero(), |a, b| a + b);
    let scale: f64 = terms.iter().map(Scalar::magnitude).sum();
    let rel = total.magnitude() / (1.0 + scale);
    (total, rel)
}

/// Residuals of the three-term recurrences satisfied by `O_k`, at random
/// non-pole points.
pub fn check_o_recurrence<S: Scalar>(fam: &Families<S>, n: usize) -> Result<Residual> {
    let mut res = Residual::zero();
    if n < 2 {
        return Ok(res);
    }
    let p = &fam.params;
    let dens: Vec<_> = fam.o[..=n].iter().map(|f| &f.den).collect();
    let points = sample_points(CHECK_SEED, CHECK_POINTS, &dens)?;
    for z in &points {
        let o: Vec<S> = (0..=n).map(|k| fam.o[k].eval(z)).collect::<Result<_>>()?;
        for k in 2..=n {
            let terms = if k % 2 == 1 {
                let m = (k - 1) / 2;
                let zb = z.clone() - p.beta(m).clone();
                vec![
                    (z.clone() - p.alpha(m + 1).clone()) * zb.clone() * o[k].clone(),
                    -((p.e(k).clone() + p.d(k).clone() * zb) * o[k - 1].clone()),
                    -(p.c(k).clone() * o[k - 2].clone()),
                ]
            } else {
                let m = k / 2;
                let za = S::one() - z.clone() * p.alpha(m).conj();
                let zb = S::one() - z.clone() * p.beta(m).conj();
                vec![
                    za.clone() * zb * o[k].clone(),
                    -((p.e(k).clone() + p.d(k).clone() * za) * o[k - 1].clone()),
                    -(p.c(k).clone() * o[k - 2].clone()),
                ]
            };
            res.record(&terms);
        }
    }
    Ok(res)
}

/// Residuals of the recurrences satisfied by `phi_k` itself.
pub fn check_phi_recurrence<S: Scalar>(fam: &Families<S>, n: usize) -> Result<Residual> {
    let mut res = Residual::zero();
    if n < 1 {
        return Ok(res);
    }
    let p = &fam.params;
    let dens: Vec<_> = fam.phi[..=n].iter().map(|f| &f.den).collect();
    let points = sample_points(CHECK_SEED ^ 1, CHECK_POINTS, &dens)?;
    for z in &points {
        let ph: Vec<S> = (0..=n).map(|k| fam.phi[k].eval(z)).collect::<Result<_>>()?;
        let prev = |k: usize| if k >= 2 { ph[k - 2].clone() } else { S::zero() };
        for k in 1..=n {
            let terms = if k % 2 == 1 {
                let m = (k - 1) / 2;
                let back = if m >= 1 {
                    p.c(k).clone() * (S::one() - z.clone() * p.alpha(m).conj()) * prev(k)
                } else {
                    S::zero()
                };
                vec![
                    (z.clone() - p.alpha(m + 1).clone()) * ph[k].clone(),
                    -((p.e(k).clone() + p.d(k).clone() * (z.clone() - p.beta(m).clone()))
                        * ph[k - 1].clone()),
                    -back,
                ]
            } else {
                let m = k / 2;
                vec![
                    (S::one() - z.clone() * p.beta(m).conj()) * ph[k].clone(),
                    -((p.e(k).clone()
                        + p.d(k).clone() * (S::one() - z.clone() * p.alpha(m).conj()))
                        * ph[k - 1].clone()),
                    -(p.c(k).clone() * (z.clone() - p.beta(m - 1).clone()) * prev(k)),
                ]
            };
            res.record(&terms);
        }
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{gauss, gauss_int, Exact};
    use crate::fixtures;

    fn poly(cs: &[(i64, i64)]) -> Polynomial<Exact> {
        Polynomial::new(cs.iter().map(|&(a, b)| gauss_int(a, b)).collect())
    }

    #[test]
    fn first_numerators_match_hand_expansion() {
        let p = fixtures::s1();
        let rs = gen_numerators(&p, 3).unwrap();
        assert_eq!(rs[1], poly(&[(1, 0), (2, 0)]));
        assert_eq!(rs[2], poly(&[(2, 0), (-2, 0), (-2, 0)]));
        assert_eq!(rs[3], poly(&[(1, -2), (2, 3), (-6, 2), (-2, -4)]));
    }

    #[test]
    fn depth_limits_generation() {
        let p = fixtures::s1();
        assert_eq!(p.depth(), 3);
        assert!(matches!(gen_numerators(&p, 4), Err(Error::ParamOutOfRange { .. })));
    }

    #[test]
    fn regularity_values_on_s1() {
        let p = fixtures::s1();
        let rs = gen_numerators(&p, 3).unwrap();
        let report = check_regularity(&p, &rs);
        let find = |n, c| {
            report
                .checks
                .iter()
                .find(|x| x.n == n && x.condition == c)
                .unwrap()
                .clone()
        };
        assert_eq!(find(1, RegularityCondition::EvenAtAlpha).value, gauss_int(-10, 0));
        assert_eq!(find(0, RegularityCondition::OddAtAlpha).value, gauss_int(5, 0));
        // e_3 = 0 makes r_3(beta_1) = 0, an auxiliary condition
        let aux = find(1, RegularityCondition::OddAtBeta);
        assert!(!aux.holds && !aux.condition.is_primary());
    }

    #[test]
    fn flags_vanishing_witness() {
        // r_1 = e_1 + d_1 z vanishes at alpha_1 = -e_1/d_1
        let p = ParamSeq::new(
            vec![gauss(-1, 2, 0, 1)],
            vec![gauss_int(0, 0)],
            vec![gauss_int(1, 0)],
            vec![gauss_int(2, 0)],
            vec![gauss_int(1, 0)],
            Validation::Full,
        )
        .unwrap();
        let rs = gen_numerators(&p, 1).unwrap();
        let report = check_regularity(&p, &rs);
        let bad: Vec<_> = report.failures().collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].condition, RegularityCondition::OddAtAlpha);
        assert!(matches!(
            Families::build_strict(&p, 1, PsiVariant::default()),
            Err(Error::RegularityViolation { .. })
        ));
    }

    #[test]
    fn family_denominators_on_s1() {
        let p = fixtures::s1();
        let fam = Families::build(&p, 3, PsiVariant::default()).unwrap();
        let z = gauss(1, 3, 1, 5);
        let r1 = fam.r[1].eval(&z);
        let r2 = fam.r[2].eval(&z);
        let two = gauss_int(2, 0);
        let i = gauss_int(0, 1);
        let one = gauss_int(1, 0);
        assert_eq!(fam.phi[0], RationalFn::one());
        assert_eq!(fam.phi[1].eval(&z).unwrap(), r1.clone() / (z.clone() - two.clone()));
        assert_eq!(
            fam.phi[2].eval(&z).unwrap(),
            r2.clone() / ((z.clone() - two.clone()) * (one.clone() + i.clone() * z.clone()))
        );
        assert_eq!(fam.o[1].eval(&z).unwrap(), r1.clone() / ((z.clone() - two.clone()) * z.clone()));
        assert_eq!(
            fam.o[2].eval(&z).unwrap(),
            r2 / ((z.clone() - two.clone())
                * (one.clone() - two.clone() * z.clone())
                * z.clone()
                * (one + i * z.clone()))
        );
        assert_eq!(fam.chi[1], two.clone());
        assert_eq!(fam.chi[2], gauss_int(0, 2));
        assert_eq!(fam.j_tilde[1].eval(&z).unwrap(), r1 / (two * z));
    }

    #[test]
    fn psi_zero_reduces_to_reciprocal() {
        let p = fixtures::s1();
        let fam = Families::build(&p, 3, PsiVariant::default()).unwrap();
        let z = gauss(3, 7, -1, 2);
        let value = fam.psi[0].iter().fold(gauss_int(0, 0), |acc, (c, k)| {
            acc + c.clone() * fam.j_tilde[*k].eval(&z).unwrap()
        });
        assert_eq!(value, gauss_int(1, 0) / (gauss_int(2, 0) * z));
        let lit = psi_terms(&p, 0, PsiVariant { literal_psi0: true, ..Default::default() });
        assert_eq!(lit, vec![(gauss_int(1, 0), 0)]);
    }

    #[test]
    fn recurrences_hold_exactly_on_s1() {
        let p = fixtures::s1();
        let fam = Families::build(&p, 3, PsiVariant::default()).unwrap();
        assert!(check_o_recurrence(&fam, 3).unwrap().exact_zero);
        assert!(check_phi_recurrence(&fam, 3).unwrap().exact_zero);
        assert!(check_o_recurrence(&fam, 1).unwrap().exact_zero);
    }

    #[test]
    fn float_recurrences_are_small() {
        let p = fixtures::s1().map(Scalar::to_c64);
        let fam = Families::build(&p, 3, PsiVariant::default()).unwrap();
        assert!(check_o_recurrence(&fam, 3).unwrap().max_abs <= 1e-10);
        assert!(check_phi_recurrence(&fam, 3).unwrap().max_abs <= 1e-10);
    }

    #[test]
    fn validation_rejects_bad_input() {
        let err = ParamSeq::new(
            vec![gauss_int(2, 0)],
            vec![gauss_int(0, 0), gauss_int(0, 0)],
            vec![gauss_int(1, 0); 2],
            vec![gauss_int(1, 0); 2],
            vec![gauss_int(1, 0); 2],
            Validation::Full,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParam { field: "beta", index: 1, .. }));
        let zero_d = |v| {
            ParamSeq::new(
                vec![gauss_int(2, 0)],
                vec![gauss_int(0, 0)],
                vec![gauss_int(1, 0)],
                vec![gauss_int(0, 0)],
                vec![gauss_int(1, 0)],
                v,
            )
        };
        assert!(zero_d(Validation::Full).is_err());
        assert!(zero_d(Validation::Relaxed).is_ok());
    }
}
