//! Symmetric-square factors of principal series and Steinberg twists of
//! `GL(2)`: the analytic side built from Tate factors and the Artin side
//! built from Weil–Deligne parameters.
//!
//! `γ(s, π ⊗ χ, Sym², ψ)` is the multiplicative product
//! `γ(χ₁χ₂χ²) γ(χ₁²χ²) γ(χ₂²χ²)`; statements about it that are only known
//! up to a unit are tested as unit ratios.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lfactor::{ComplexJson, LFactor, LFactorJson, LaurentRational};
use crate::local_symbols::{hilbert, mu_psi, AdditiveChar, MultChar, MultCharJson};
use crate::padic::PadicNumber;
use crate::tate::{tate_gamma, tate_l};
use crate::Tolerances;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Outcome of a single check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Unchecked,
}

impl CheckStatus {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Unchecked => "unchecked",
        }
    }
}

/// Irreducible representations of `GL₂(Q_p)` covered here.
///
/// `PrincipalSeries` is the standard module `Ind(χ₁ ⊠ χ₂)` in Langlands
/// order `u₁ ≥ u₂` with `|χ_i(ϖ)| = q^{-u_i}`; at `χ₁/χ₂ = ν^{±1}` it stands
/// for its Langlands quotient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GL2Rep {
    PrincipalSeries(MultChar, MultChar),
    Steinberg(MultChar),
}

impl GL2Rep {
    /// `Ind(χ₁ ⊠ χ₂)`, swapping the characters if needed so that `u₁ ≥ u₂`.
    pub fn principal_series(chi1: MultChar, chi2: MultChar) -> Result<Self> {
        if chi1.p() != chi2.p() {
            return Err(Error::Domain("inducing characters over different fields".into()));
        }
        let tol = Tolerances::default().complex;
        if chi2.real_exponent() > chi1.real_exponent() + tol {
            Ok(Self::PrincipalSeries(chi2, chi1))
        } else {
            Ok(Self::PrincipalSeries(chi1, chi2))
        }
    }

    /// `St ⊗ χ`.
    pub fn steinberg(chi: MultChar) -> Self {
        Self::Steinberg(chi)
    }

    pub fn p(&self) -> u64 {
        match self {
            Self::PrincipalSeries(a, _) => a.p(),
            Self::Steinberg(c) => c.p(),
        }
    }

    pub fn central_character(&self) -> MultChar {
        match self {
            Self::PrincipalSeries(a, b) => a.mul(b),
            Self::Steinberg(c) => c.pow(2),
        }
    }

    /// Whether `Ind(χ₁ ⊠ χ₂)` itself is irreducible (always true for Steinberg).
    pub fn is_irreducible(&self) -> bool {
        match self {
            Self::PrincipalSeries(a, b) => !is_reducibility_ratio(a, b),
            Self::Steinberg(_) => true,
        }
    }

    pub fn contragredient(&self) -> Self {
        match self {
            Self::PrincipalSeries(a, b) => Self::principal_series(a.inv(), b.inv()).expect("same field"),
            Self::Steinberg(c) => Self::Steinberg(c.inv()),
        }
    }

    /// `π ⊗ χ`.
    pub fn twist(&self, chi: &MultChar) -> Result<Self> {
        if chi.p() != self.p() {
            return Err(Error::Domain("twist over a different field".into()));
        }
        Ok(match self {
            Self::PrincipalSeries(a, b) => Self::principal_series(a.mul(chi), b.mul(chi))?,
            Self::Steinberg(c) => Self::Steinberg(c.mul(chi)),
        })
    }

    /// The inducing characters of a principal series.
    pub fn inducing(&self) -> Result<(MultChar, MultChar)> {
        match self {
            Self::PrincipalSeries(a, b) => Ok((*a, *b)),
            Self::Steinberg(_) => Err(Error::Unsupported("Steinberg representations are not induced".into())),
        }
    }

    pub fn to_json(&self) -> GL2RepJson {
        match self {
            Self::PrincipalSeries(a, b) => GL2RepJson::Ps { chi1: a.to_json(), chi2: b.to_json() },
            Self::Steinberg(c) => GL2RepJson::Steinberg { twist: c.to_json() },
        }
    }

    pub fn from_json(j: &GL2RepJson) -> Result<Self> {
        match j {
            GL2RepJson::Ps { chi1, chi2 } => {
                Self::principal_series(MultChar::from_json(chi1)?, MultChar::from_json(chi2)?)
            }
            GL2RepJson::Steinberg { twist } => Ok(Self::Steinberg(MultChar::from_json(twist)?)),
        }
    }
}

impl fmt::Display for GL2Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PrincipalSeries(a, b) => write!(f, "Ind({a} ⊠ {b})"),
            Self::Steinberg(c) => write!(f, "St ⊗ {c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GL2RepJson {
    Ps { chi1: MultCharJson, chi2: MultCharJson },
    Steinberg { twist: MultCharJson },
}

fn is_reducibility_ratio(a: &MultChar, b: &MultChar) -> bool {
    let tol = Tolerances::default().complex;
    let nu = MultChar::nu(a.p());
    let r = a.mul(&b.inv());
    r.approx_eq(&nu, tol) || r.approx_eq(&nu.inv(), tol)
}

/// One summand of a Weil–Deligne parameter: a character, or `sp(n) ⊗ χ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WDSummand {
    Char(MultChar),
    Sp(u32, MultChar),
}

impl WDSummand {
    pub fn dimension(&self) -> u32 {
        match self {
            Self::Char(_) => 1,
            Self::Sp(n, _) => *n,
        }
    }
}

impl fmt::Display for WDSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Char(c) => write!(f, "{c}"),
            Self::Sp(n, c) => write!(f, "sp({n}) ⊗ {c}"),
        }
    }
}

/// Frobenius-semisimple Weil–Deligne parameter as a direct sum.
#[derive(Clone, Debug, PartialEq)]
pub struct WDParam {
    pub summands: Vec<WDSummand>,
}

impl WDParam {
    pub fn new(summands: Vec<WDSummand>) -> Self {
        Self { summands }
    }

    pub fn dimension(&self) -> u32 {
        self.summands.iter().map(WDSummand::dimension).sum()
    }

    /// Equality of summand multisets (characters compared within `tol`).
    pub fn approx_eq(&self, other: &WDParam, tol: f64) -> bool {
        if self.summands.len() != other.summands.len() {
            return false;
        }
        let mut used = vec![false; other.summands.len()];
        self.summands.iter().all(|a| {
            let hit = other.summands.iter().enumerate().position(|(i, b)| {
                !used[i]
                    && match (a, b) {
                        (WDSummand::Char(x), WDSummand::Char(y)) => x.approx_eq(y, tol),
                        (WDSummand::Sp(m, x), WDSummand::Sp(n, y)) => m == n && x.approx_eq(y, tol),
                        _ => false,
                    }
            });
            match hit {
                Some(i) => {
                    used[i] = true;
                    true
                }
                None => false,
            }
        })
    }
}

impl fmt::Display for WDParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// A point `(u₁, u₂)` of the deformation space; acts by `χ_i ↦ χ_i ν^{u_i}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeformationPoint {
    pub u1: Complex64,
    pub u2: Complex64,
}

impl DeformationPoint {
    pub fn new(u1: Complex64, u2: Complex64) -> Self {
        Self { u1, u2 }
    }

    pub fn real(u1: f64, u2: f64) -> Self {
        Self::new(Complex64::new(u1, 0.0), Complex64::new(u2, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0, 0.0)
    }

    /// `(χ₁ν^{u₁}, χ₂ν^{u₂})`.
    pub fn fold(&self, chi1: &MultChar, chi2: &MultChar) -> (MultChar, MultChar) {
        (chi1.twist_nu(self.u1), chi2.twist_nu(self.u2))
    }
}

/// The parameter of `π`: `χ₁ ⊕ χ₂` or `sp(2) ⊗ χ`.
pub fn llc(pi: &GL2Rep) -> WDParam {
    match pi {
        GL2Rep::PrincipalSeries(a, b) => WDParam::new(vec![WDSummand::Char(*a), WDSummand::Char(*b)]),
        GL2Rep::Steinberg(c) => WDParam::new(vec![WDSummand::Sp(2, *c)]),
    }
}

pub fn llc_inverse(rho: &WDParam) -> Result<GL2Rep> {
    match rho.summands.as_slice() {
        [WDSummand::Char(a), WDSummand::Char(b)] => GL2Rep::principal_series(*a, *b),
        [WDSummand::Sp(2, c)] => Ok(GL2Rep::Steinberg(*c)),
        _ => Err(Error::Unsupported(format!("no supported representation has parameter {rho}"))),
    }
}

fn require_dim_two(rho: &WDParam) -> Result<()> {
    if rho.dimension() != 2 {
        return Err(Error::Domain(format!("expected a 2-dimensional parameter, got dimension {}", rho.dimension())));
    }
    Ok(())
}

/// `Sym²(χ₁ ⊕ χ₂) = χ₁² ⊕ χ₁χ₂ ⊕ χ₂²`, `Sym²(sp(2) ⊗ χ) = sp(3) ⊗ χ²`.
pub fn artin_sym2(rho: &WDParam) -> Result<WDParam> {
    require_dim_two(rho)?;
    match rho.summands.as_slice() {
        [WDSummand::Char(a), WDSummand::Char(b)] => Ok(WDParam::new(vec![
            WDSummand::Char(a.pow(2)),
            WDSummand::Char(a.mul(b)),
            WDSummand::Char(b.pow(2)),
        ])),
        [WDSummand::Sp(2, c)] => Ok(WDParam::new(vec![WDSummand::Sp(3, c.pow(2))])),
        _ => Err(Error::Domain(format!("malformed parameter {rho}"))),
    }
}

/// `∧²(χ₁ ⊕ χ₂) = χ₁χ₂`, `∧²(sp(2) ⊗ χ) = det(sp(2) ⊗ χ) = χ²`.
pub fn artin_wedge2(rho: &WDParam) -> Result<WDParam> {
    require_dim_two(rho)?;
    match rho.summands.as_slice() {
        [WDSummand::Char(a), WDSummand::Char(b)] => Ok(WDParam::new(vec![WDSummand::Char(a.mul(b))])),
        [WDSummand::Sp(2, c)] => Ok(WDParam::new(vec![WDSummand::Char(c.pow(2))])),
        _ => Err(Error::Domain(format!("malformed parameter {rho}"))),
    }
}

/// Product over summands; `sp(n) ⊗ χ` contributes its monodromy invariants
/// `L(s, χ ν^{(n-1)/2})` when `χ` is unramified.
pub fn artin_l(rho: &WDParam) -> LFactor {
    rho.summands.iter().fold(LFactor::one(), |acc, s| {
        let f = match s {
            WDSummand::Char(c) => tate_l(c),
            WDSummand::Sp(n, c) if c.is_unramified() => {
                tate_l(&c.twist_nu(Complex64::new((*n as f64 - 1.0) / 2.0, 0.0)))
            }
            WDSummand::Sp(..) => LFactor::one(),
        };
        acc.mul(&f)
    })
}

/// `L(s, π, Sym²)`: `L(χ₁χ₂) L(χ₁²) L(χ₂²)` for principal series, the
/// Artin factor of `sp(3) ⊗ χ²` for `St ⊗ χ`.
pub fn sym2_l(pi: &GL2Rep) -> LFactor {
    match pi {
        GL2Rep::PrincipalSeries(a, b) => tate_l(&a.mul(b)).mul(&tate_l(&a.pow(2))).mul(&tate_l(&b.pow(2))),
        GL2Rep::Steinberg(c) => artin_l(&WDParam::new(vec![WDSummand::Sp(3, c.pow(2))])),
    }
}

/// `L(s, π, Sym²) = L(s, Sym²(ρ(π)))` as clustered root multisets.
pub fn equality_check(pi: &GL2Rep) -> Result<bool> {
    let artin = artin_l(&artin_sym2(&llc(pi))?);
    Ok(sym2_l(pi).approx_eq(&artin, Tolerances::default().cluster))
}

/// `L(s, π × π) = ∏_{i,j} L(s, χ_i χ_j)`.
pub fn rs_l_pair(pi: &GL2Rep) -> Result<LFactor> {
    let (a, b) = pi.inducing()?;
    let chars = [a, b];
    let mut l = LFactor::one();
    for x in &chars {
        for y in &chars {
            l = l.mul(&tate_l(&x.mul(y)));
        }
    }
    Ok(l)
}

/// `L(s, π × π) = L(s, π, ∧²) L(s, π, Sym²)` with `L(s, π, ∧²) = L(s, ω_π)`.
pub fn factorization_check(pi: &GL2Rep) -> Result<bool> {
    let tol = Tolerances::default().cluster;
    let wedge = artin_l(&artin_wedge2(&llc(pi))?);
    let omega = tate_l(&pi.central_character());
    let rhs = omega.mul(&sym2_l(pi));
    Ok(wedge.approx_eq(&omega, tol) && rs_l_pair(pi)?.approx_eq(&rhs, tol))
}

/// Conditions (1)–(4) of general position; (5) is not checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralPositionReport {
    pub irreducible: bool,
    pub distinct_characters: bool,
    pub sym2_disjoint: bool,
    pub sym2_rs_disjoint: bool,
    pub condition_5: CheckStatus,
}

impl GeneralPositionReport {
    /// Conditions (1)–(4).
    pub fn holds(&self) -> bool {
        self.irreducible && self.distinct_characters && self.sym2_disjoint && self.sym2_rs_disjoint
    }

    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.irreducible {
            v.push("(1) π_u reducible");
        }
        if !self.distinct_characters {
            v.push("(2) χ₁ν^{u₁} = χ₂ν^{u₂}");
        }
        if !self.sym2_disjoint {
            v.push("(3) L(s, χ₁ν^{u₁}, Sym²) and L(s, χ₂ν^{u₂}, Sym²) share a pole");
        }
        if !self.sym2_rs_disjoint {
            v.push("(4) some L(s, χ_iν^{u_i}, Sym²) shares a pole with L(s, χ₁ν^{u₁} × χ₂ν^{u₂})");
        }
        v
    }
}

pub fn general_position(pi: &GL2Rep, u: &DeformationPoint) -> Result<GeneralPositionReport> {
    let (a, b) = pi.inducing()?;
    let (a, b) = u.fold(&a, &b);
    let tol = Tolerances::default();
    let la = tate_l(&a.pow(2));
    let lb = tate_l(&b.pow(2));
    let lab = tate_l(&a.mul(&b));
    Ok(GeneralPositionReport {
        irreducible: !is_reducibility_ratio(&a, &b),
        distinct_characters: !a.approx_eq(&b, tol.complex),
        sym2_disjoint: la.common_roots(&lb, tol.cluster).is_empty(),
        sym2_rs_disjoint: la.common_roots(&lab, tol.cluster).is_empty() && lb.common_roots(&lab, tol.cluster).is_empty(),
        condition_5: CheckStatus::Unchecked,
    })
}

/// Exceptional and regular parts of `L(s, π_u, Sym²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sym2Decomposition {
    pub exceptional: LFactor,
    pub regular: LFactor,
}

impl Sym2Decomposition {
    pub fn product(&self) -> LFactor {
        self.exceptional.mul(&self.regular)
    }
}

/// `L_ex = L(χ₁χ₂ν^{u₁+u₂})`, `L_reg = lcm(L(χ₁²ν^{2u₁}), L(χ₂²ν^{2u₂}))`.
pub fn sym2_decompose(pi: &GL2Rep, u: &DeformationPoint) -> Result<Sym2Decomposition> {
    let report = general_position(pi, u)?;
    if !report.holds() {
        return Err(Error::Precondition(format!("not in general position: {}", report.violations().join("; "))));
    }
    let (a, b) = pi.inducing()?;
    let (a, b) = u.fold(&a, &b);
    let exceptional = tate_l(&a.mul(&b));
    let regular = LFactor::lcm(&[tate_l(&a.pow(2)), tate_l(&b.pow(2))], Tolerances::default().cluster);
    Ok(Sym2Decomposition { exceptional, regular })
}

/// `π_u`.
pub fn deform(pi: &GL2Rep, u: &DeformationPoint) -> Result<GL2Rep> {
    let (a, b) = pi.inducing()?;
    let (a, b) = u.fold(&a, &b);
    GL2Rep::principal_series(a, b)
}

fn twisted_triple(pi: &GL2Rep, chi: &MultChar) -> Result<[MultChar; 3]> {
    let (a, b) = pi.inducing()?;
    if chi.p() != a.p() {
        return Err(Error::Domain("twist over a different field".into()));
    }
    let c2 = chi.pow(2);
    Ok([a.mul(&b).mul(&c2), a.pow(2).mul(&c2), b.pow(2).mul(&c2)])
}

/// `γ(s, π ⊗ χ, Sym², ψ)` in its multiplicative normalization
/// `γ(χ₁χ₂χ²) γ(χ₁²χ²) γ(χ₂²χ²)`.
pub fn gamma_sym2(pi: &GL2Rep, chi: &MultChar, psi: &AdditiveChar) -> Result<LaurentRational> {
    let q = psi.field().q();
    twisted_triple(pi, chi)?
        .iter()
        .try_fold(LaurentRational::one(q), |acc, c| Ok(acc.mul(&tate_gamma(c, psi)?)))
}

/// `ε(s, π ⊗ χ, Sym², ψ) = γ L(s, π ⊗ χ, Sym²) / L(1 - s, π̃ ⊗ χ^{-1}, Sym²)`.
pub fn epsilon_sym2(pi: &GL2Rep, chi: &MultChar, psi: &AdditiveChar) -> Result<LaurentRational> {
    let q = psi.field().q();
    let l = sym2_l(&pi.twist(chi)?).to_laurent(q);
    let dual = sym2_l(&pi.contragredient().twist(&chi.inv())?).to_laurent(q).substitute(-1, one())?;
    gamma_sym2(pi, chi, psi)?.mul(&l).div(&dual)
}

/// `Γ(s) = γ(s, π ⊗ χ, Sym², ψ) / γ(2s - 1, ω²_{π⊗χ}, ψ)`.
pub fn big_gamma(pi: &GL2Rep, chi: &MultChar, psi: &AdditiveChar) -> Result<LaurentRational> {
    gamma_sym2(pi, chi, psi)?.div(&omega_squared_gamma(pi, chi, psi)?)
}

/// `γ(2s - 1, ω²_{π⊗χ}, ψ)`.
pub fn omega_squared_gamma(pi: &GL2Rep, chi: &MultChar, psi: &AdditiveChar) -> Result<LaurentRational> {
    let omega = pi.twist(chi)?.central_character();
    tate_gamma(&omega.pow(2), psi)?.substitute(2, Complex64::new(-1.0, 0.0))
}

/// The two sides of the Plancherel identity for `μ(s, η)^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlancherelSides {
    pub l_side: LaurentRational,
    pub gamma_side: LaurentRational,
}

/// `q^{𝔣(ψ) - 𝔣(η²)} L(s,η^{-2}) L(-s,η²) / (L(1-s,η²) L(1+s,η^{-2}))`
/// against `γ(s, η^{-2}, ψ)^{-1} γ(-s, η², ψ^{-1})^{-1}`.
pub fn plancherel_sides(eta: &MultChar, psi: &AdditiveChar) -> Result<PlancherelSides> {
    let q = psi.field().q();
    let e2 = eta.pow(2);
    let em2 = e2.inv();
    let zero = Complex64::new(0.0, 0.0);
    let l = |c: &MultChar| tate_l(c).to_laurent(q);
    let exponent = psi.conductor() - e2.conductor() as i64;
    let num = l(&em2).mul(&l(&e2).substitute(-1, zero)?);
    let den = l(&e2).substitute(-1, one())?.mul(&l(&em2).substitute(1, one())?);
    let l_side = num.div(&den)?.scale(Complex64::new((q as f64).powi(exponent as i32), 0.0));
    let g1 = tate_gamma(&em2, psi)?;
    let g2 = tate_gamma(&e2, &psi.inverse())?.substitute(-1, zero)?;
    let gamma_side = g1.mul(&g2).inv()?;
    Ok(PlancherelSides { l_side, gamma_side })
}

pub fn plancherel_check(eta: &MultChar, psi: &AdditiveChar, tol: f64) -> Result<bool> {
    let sides = plancherel_sides(eta, psi)?;
    Ok(sides.l_side.approx_eq(&sides.gamma_side, tol))
}

/// Measured dependence of `γ(s, π ⊗ χ, Sym², ψ_a)` on `a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiDependenceReport {
    pub valuation: i64,
    pub is_unit_monomial: bool,
    /// Measured ratio `c X^k` with `X = q^{-s/2}`.
    pub constant: Option<ComplexJson>,
    pub x_exponent: Option<i64>,
    /// Degree in `q^{-s}`; `3 v(a)` from `|a|^{3(s - 1/2)}`.
    pub degree: Option<i64>,
    pub expected_degree: i64,
    /// `ω(a)³ χ(a)⁶ |a|^{-3/2}`.
    pub tate_constant: ComplexJson,
    /// `μ_{ψ_a}(a)^{-1} ω(a)³ χ(a)⁶ |a|^{-3/2}` with `μ_{ψ_a}(a) = μ_ψ(a)(a, a)`.
    pub predicted_constant: ComplexJson,
    pub matches_tate_constant: bool,
    pub matches_predicted_constant: bool,
    /// `c / predicted`.
    pub discrepancy: Option<ComplexJson>,
}

impl PsiDependenceReport {
    /// Unit monomial with the expected degree.
    pub fn holds(&self) -> bool {
        self.is_unit_monomial && self.degree == Some(self.expected_degree)
    }
}

pub fn psi_dependence_check(
    pi: &GL2Rep,
    chi: &MultChar,
    psi: &AdditiveChar,
    a: &PadicNumber,
) -> Result<PsiDependenceReport> {
    let v = a.valuation().ok_or_else(|| Error::Domain("ψ_0 is trivial".into()))?;
    let q = psi.field().q();
    let tol = 1e-8;
    let psi_a = psi.scaled(a)?;
    let ratio = gamma_sym2(pi, chi, &psi_a)?.div(&gamma_sym2(pi, chi, psi)?)?;
    let omega = pi.central_character();
    let tate_c = omega.eval(a)?.powi(3) * chi.eval(a)?.powi(6) * (q as f64).powf(1.5 * v as f64);
    let mu = mu_psi(a, psi)? * hilbert(a, a)? as f64;
    let predicted = tate_c / mu;
    let unit = if ratio.is_unit() { Some(ratio.unit_part()) } else { None };
    let close = |x: Complex64, y: Complex64| (x - y).norm() <= tol * y.norm().max(1.0);
    Ok(PsiDependenceReport {
        valuation: v,
        is_unit_monomial: unit.is_some(),
        constant: unit.map(|(c, _)| c.into()),
        x_exponent: unit.map(|(_, k)| k),
        degree: unit.and_then(|(_, k)| (k % 2 == 0).then_some(k / 2)),
        expected_degree: 3 * v,
        tate_constant: tate_c.into(),
        predicted_constant: predicted.into(),
        matches_tate_constant: unit.is_some_and(|(c, _)| close(c, tate_c)),
        matches_predicted_constant: unit.is_some_and(|(c, _)| close(c, predicted)),
        discrepancy: unit.map(|(c, _)| (c / predicted).into()),
    })
}

/// Sample points `s` used for pointwise identity checks.
pub fn sample_points(count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|i| {
            let t = i as f64;
            Complex64::new(0.17 + 0.29 * (t * 0.7).sin() + 0.05 * t, 0.3 + 1.1 * t)
        })
        .collect()
}

/// `2 max(n(χ₁²), n(χ₂²), n(χ₁χ₂), n(μ₁²), n(μ₂²), n(μ₁μ₂)) + 1`.
pub fn stability_threshold(pi: &GL2Rep, sigma: &GL2Rep) -> Result<u32> {
    let (a, b) = pi.inducing()?;
    let (c, d) = sigma.inducing()?;
    let n = [a.pow(2), b.pow(2), a.mul(&b), c.pow(2), d.pow(2), c.mul(&d)]
        .iter()
        .map(MultChar::conductor)
        .max()
        .unwrap_or(0);
    Ok(2 * n + 1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub status: CheckStatus,
    pub threshold: u32,
    /// `n(χ²)`, the conductor the threshold is compared with.
    pub twist_conductor: u32,
    pub l_trivial: Option<bool>,
    pub gamma_ratio_max_deviation: Option<f64>,
    pub gamma_ratio_identity: Option<bool>,
    pub epsilon_equal: Option<bool>,
    pub note: String,
}

/// Compares `γ(s, π ⊗ χ, Sym², ψ)` and `γ(s, σ ⊗ χ, Sym², ψ)` for
/// `ω_π = ω_σ`; only asserts once `n(χ²)` reaches [`stability_threshold`].
pub fn stability_check(pi: &GL2Rep, sigma: &GL2Rep, chi: &MultChar, psi: &AdditiveChar) -> Result<StabilityReport> {
    let tol = 1e-8;
    let (wp, ws) = (pi.central_character(), sigma.central_character());
    if !wp.approx_eq(&ws, Tolerances::default().complex) {
        return Err(Error::Precondition(format!("central characters differ: {wp} versus {ws}")));
    }
    let threshold = stability_threshold(pi, sigma)?;
    let twist_conductor = chi.pow(2).conductor();
    if twist_conductor < threshold {
        return Ok(StabilityReport {
            status: CheckStatus::Unchecked,
            threshold,
            twist_conductor,
            l_trivial: None,
            gamma_ratio_max_deviation: None,
            gamma_ratio_identity: None,
            epsilon_equal: None,
            note: format!("below stability threshold: n(χ²) = {twist_conductor} < {threshold}"),
        });
    }
    let l_trivial = sym2_l(&pi.twist(chi)?).is_one() && sym2_l(&sigma.twist(chi)?).is_one();
    let ratio = gamma_sym2(pi, chi, psi)?.div(&gamma_sym2(sigma, chi, psi)?)?;
    let mut dev = 0.0f64;
    for s in sample_points(16) {
        dev = dev.max((ratio.eval(s)? - one()).norm());
    }
    let identity = ratio.approx_eq(&LaurentRational::one(psi.field().q()), tol);
    let eps_ratio = epsilon_sym2(pi, chi, psi)?.div(&epsilon_sym2(sigma, chi, psi)?)?;
    let epsilon_equal = eps_ratio.approx_eq(&LaurentRational::one(psi.field().q()), tol);
    let ok = l_trivial && dev <= tol && identity && epsilon_equal;
    Ok(StabilityReport {
        status: CheckStatus::from_bool(ok),
        threshold,
        twist_conductor,
        l_trivial: Some(l_trivial),
        gamma_ratio_max_deviation: Some(dev),
        gamma_ratio_identity: Some(identity),
        epsilon_equal: Some(epsilon_equal),
        note: if ok { "γ, ε and L agree".into() } else { "stability identity violated".into() },
    })
}

/// Wire form of an L-factor together with its rendering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderedLFactor {
    #[serde(flatten)]
    pub factor: LFactorJson,
    pub rendered: String,
}

impl From<&LFactor> for RenderedLFactor {
    fn from(l: &LFactor) -> Self {
        Self { factor: l.to_json(), rendered: l.render() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::FieldParams;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unr(p: u64, z: Complex64) -> MultChar {
        MultChar::unramified(p, z).unwrap()
    }

    #[test]
    fn langlands_order_is_enforced() {
        let a = unr(5, c(0.2, 0.0));
        let b = unr(5, c(3.0, 0.0));
        let pi = GL2Rep::principal_series(b, a).unwrap();
        let (x, y) = pi.inducing().unwrap();
        assert!(x.real_exponent() >= y.real_exponent());
        assert_eq!(x, a);
    }

    #[test]
    fn steinberg_sym2_is_shifted_trivial() {
        let st = GL2Rep::steinberg(MultChar::trivial(5));
        let l = sym2_l(&st);
        assert_eq!(l.degree(), 1);
        assert!((l.inverse_roots()[0] - c(0.2, 0.0)).norm() < 1e-12);
        assert!(equality_check(&st).unwrap());
    }

    #[test]
    fn wedge_of_dual_pair_is_trivial() {
        let chi = unr(7, c(0.3, 0.8));
        let rho = WDParam::new(vec![WDSummand::Char(chi), WDSummand::Char(chi.inv())]);
        let w = artin_wedge2(&rho).unwrap();
        assert!(w.approx_eq(&WDParam::new(vec![WDSummand::Char(MultChar::trivial(7))]), 1e-12));
    }

    #[test]
    fn llc_round_trip() {
        let pi = GL2Rep::principal_series(unr(3, c(2.0, 0.0)), unr(3, c(0.5, 0.1))).unwrap();
        assert_eq!(llc_inverse(&llc(&pi)).unwrap(), pi);
        let st = GL2Rep::steinberg(unr(3, c(-1.0, 0.0)));
        assert_eq!(llc_inverse(&llc(&st)).unwrap(), st);
        let bad = WDParam::new(vec![WDSummand::Sp(3, MultChar::trivial(3))]);
        assert!(matches!(llc_inverse(&bad), Err(Error::Unsupported(_))));
        assert!(artin_sym2(&bad).is_err());
    }

    #[test]
    fn general_position_flags() {
        let t = MultChar::trivial(5);
        let pi = GL2Rep::principal_series(t, t).unwrap();
        let r = general_position(&pi, &DeformationPoint::zero()).unwrap();
        assert!(!r.distinct_characters);
        let r = general_position(&pi, &DeformationPoint::real(0.3, 0.11)).unwrap();
        assert!(r.holds());
        let r = general_position(&pi, &DeformationPoint::real(1.0, 0.0)).unwrap();
        assert!(!r.irreducible);
        assert_eq!(r.condition_5, CheckStatus::Unchecked);
    }

    #[test]
    fn gamma_functional_equation_unramified() {
        let f = FieldParams::new(5, 6).unwrap();
        let psi = AdditiveChar::standard(&f);
        let pi = GL2Rep::principal_series(unr(5, c(0.7, 0.2)), unr(5, c(1.3, -0.4))).unwrap();
        let chi = MultChar::trivial(5);
        let g = gamma_sym2(&pi, &chi, &psi).unwrap();
        let gd = gamma_sym2(&pi.contragredient(), &chi.inv(), &psi.inverse())
            .unwrap()
            .substitute(-1, one())
            .unwrap();
        assert!(g.mul(&gd).approx_eq(&LaurentRational::one(5), 1e-9));
        assert!(epsilon_sym2(&pi, &chi, &psi).unwrap().is_unit());
    }

    #[test]
    fn json_round_trip() {
        let pi = GL2Rep::principal_series(unr(5, c(2.0, 0.0)), unr(5, c(0.5, 0.0))).unwrap();
        let s = serde_json::to_string(&pi.to_json()).unwrap();
        assert!(s.contains("\"kind\":\"ps\""));
        let back: GL2RepJson = serde_json::from_str(&s).unwrap();
        assert!(GL2Rep::from_json(&back).unwrap() == pi);
    }
}
