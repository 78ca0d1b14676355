//! `GL(1)` local factors `L(s, χ)`, `ε(s, χ, ψ)`, `γ(s, χ, ψ)`.
//!
//! Closed forms sit next to an independent oracle that evaluates Tate zeta
//! integrals of coset indicators exactly and reads `γ` off the functional
//! equation `Z(1 - s, φ̂, χ^{-1}) = γ(s, χ, ψ) Z(s, φ, χ)`.
//! Measures: `dx` self-dual for `ψ` (so `vol(O) = 1` when `ψ` is unramified)
//! and `d^×x = dx / |x|`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lfactor::{ComplexJson, LFactor, LFactorJson, LaurentRational, LaurentRationalJson};
use crate::local_symbols::{gauss_sum, AdditiveChar, MultChar};
use crate::padic::{FieldParams, PadicJson, PadicNumber};
use crate::Tolerances;

/// Largest number of cosets a single Fourier transform may expand into.
const MAX_COSETS: u64 = 1 << 20;

/// `Σ c_i 𝟙_{a_i + p^{k_i}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchwartzFn {
    field: FieldParams,
    terms: Vec<(PadicNumber, i64, Complex64)>,
}

impl SchwartzFn {
    pub fn zero(field: &FieldParams) -> Self {
        Self { field: *field, terms: Vec::new() }
    }

    /// `𝟙_{a + p^k}`.
    pub fn indicator(a: &PadicNumber, k: i64) -> Self {
        let mut f = Self::zero(&a.field());
        f.push(*a, k, Complex64::new(1.0, 0.0));
        f
    }

    pub fn push(&mut self, a: PadicNumber, k: i64, c: Complex64) {
        let a = if a.valuation().is_none_or(|v| v >= k) { self.field.zero() } else { a };
        self.terms.push((a, k, c));
    }

    pub fn terms(&self) -> &[(PadicNumber, i64, Complex64)] {
        &self.terms
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn eval(&self, x: &PadicNumber) -> Complex64 {
        self.terms
            .iter()
            .filter(|(a, k, _)| (*x - *a).valuation().is_none_or(|v| v >= *k))
            .map(|(_, _, c)| *c)
            .sum()
    }

    /// `φ̂(y) = ∫ φ(x) ψ(xy) dx` with `dx` self-dual for `ψ = ψ_a`:
    /// `𝟙_{b + p^k} ↦ |a|^{1/2} q^{-k} ψ(a b y) 𝟙_{p^{-k - v(a)}}(y)`,
    /// written as a combination of cosets on which `ψ(a b ·)` is constant.
    pub fn fourier(&self, psi: &AdditiveChar) -> Result<SchwartzFn> {
        let field = self.field;
        let p = field.p();
        let scale = psi.scale();
        let va = scale.valuation().expect("nonzero scale");
        let norm = scale.abs().sqrt();
        let mut out = SchwartzFn::zero(&field);
        for (b, k, c) in &self.terms {
            let coef = *c * norm * (p as f64).powi(-*k as i32);
            let low = -k - va;
            if b.is_zero() {
                out.push(field.zero(), low, coef);
                continue;
            }
            let vb = b.valuation().expect("nonzero");
            let m = (-(va + vb)).max(low);
            let count = p
                .checked_pow((m - low) as u32)
                .filter(|c| *c <= MAX_COSETS)
                .ok_or_else(|| Error::Precision("Fourier transform expands into too many cosets".into()))?;
            for j in 0..count {
                let y = if j == 0 { field.zero() } else { field.from_parts(low, j as i64)? };
                let phase = psi.eval(&(*b * y))?;
                out.push(y, m, coef * phase);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Vec<SchwartzTermJson> {
        self.terms
            .iter()
            .map(|(a, k, c)| SchwartzTermJson { a: PadicJson::from(*a), k: *k, c: (*c).into() })
            .collect()
    }

    pub fn from_json(field: &FieldParams, terms: &[SchwartzTermJson]) -> Result<Self> {
        let mut f = Self::zero(field);
        for t in terms {
            f.push(t.a.clone().into_padic(field)?, t.k, t.c.into());
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchwartzTermJson {
    pub a: PadicJson,
    pub k: i64,
    pub c: ComplexJson,
}

fn check_field(chi: &MultChar, field: &FieldParams) -> Result<()> {
    if chi.p() != field.p() {
        return Err(Error::Domain("character and test function live over different fields".into()));
    }
    Ok(())
}

/// `∫_{u + p^j} χ(x) dx` for a unit `u` and `j ≥ 1`, by summing over `p^j / p^n`.
fn unit_coset_integral(chi: &MultChar, u: &PadicNumber, j: i64) -> Result<Complex64> {
    let p = chi.p();
    let n = chi.conductor() as i64;
    if n <= j {
        return Ok(chi.eval(u)? * (p as f64).powi(-j as i32));
    }
    let modulus = p.pow(n as u32);
    let base = u.residue(n as u32)?;
    let step = p.pow(j as u32);
    let mut acc = Complex64::new(0.0, 0.0);
    for t in 0..(modulus / step) {
        let r = (base + t * step) % modulus;
        acc += crate::local_symbols::rotation_to_complex(chi.residue_rotation(r)?);
    }
    Ok(acc * (p as f64).powi(-n as i32))
}

/// `∫_{O^x} χ(u) du`.
fn unit_group_integral(chi: &MultChar) -> Result<Complex64> {
    let p = chi.p();
    let n = chi.conductor().max(1);
    let modulus = p.pow(n);
    let mut acc = Complex64::new(0.0, 0.0);
    for r in (1..modulus).filter(|r| r % p != 0) {
        acc += crate::local_symbols::rotation_to_complex(chi.residue_rotation(r)?);
    }
    Ok(acc / modulus as f64)
}

/// `Z(s, φ, χ) = ∫ φ(x) χ(x) |x|^s d^×x` as a rational function of `X = q^{-s/2}`.
pub fn tate_zeta(phi: &SchwartzFn, chi: &MultChar) -> Result<LaurentRational> {
    let field = phi.field();
    check_field(chi, &field)?;
    let q = field.q();
    let z = chi.z();
    let mut total = LaurentRational::zero(q);
    for (a, k, c) in phi.terms() {
        let term = if a.is_zero() {
            let s = unit_group_integral(chi)?;
            if s.norm() < Tolerances::default().complex {
                LaurentRational::zero(q)
            } else {
                let r = z.sqrt();
                LaurentRational::from_parts(q, s * z.powi(*k as i32), 2 * k, vec![], vec![r, -r])
            }
        } else {
            let w = a.valuation().expect("nonzero");
            let inner = unit_coset_integral(chi, &a.unit_part()?, k - w)?;
            LaurentRational::monomial(q, inner * z.powi(w as i32), 2 * w)
        };
        total = total.add(&term.scale(*c));
    }
    Ok(total)
}

/// `L`, `ε`, `γ` for one character and one additive character.
#[derive(Clone, Debug, PartialEq)]
pub struct TateTriple {
    pub l: LFactor,
    pub epsilon: LaurentRational,
    pub gamma: LaurentRational,
}

impl TateTriple {
    pub fn to_json(&self) -> TateTripleJson {
        TateTripleJson { l: self.l.to_json(), epsilon: self.epsilon.to_json(), gamma: self.gamma.to_json() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TateTripleJson {
    #[serde(rename = "L")]
    pub l: LFactorJson,
    pub epsilon: LaurentRationalJson,
    pub gamma: LaurentRationalJson,
}

/// `L(s, χ)`: `(1 - χ(ϖ) q^{-s})^{-1}` for unramified `χ`, else `1`.
pub fn tate_l(chi: &MultChar) -> LFactor {
    if chi.is_unramified() {
        LFactor::single(chi.z())
    } else {
        LFactor::one()
    }
}

/// `L(1 - s, χ^{-1})` as a function of `X = q^{-s/2}`.
pub fn dual_l(chi: &MultChar, q: u64) -> LaurentRational {
    tate_l(&chi.inv())
        .to_laurent(q)
        .substitute(-1, Complex64::new(1.0, 0.0))
        .expect("supported substitution")
}

/// `ε(s, χ, ψ)`: `1` for unramified `χ` and unramified `ψ`, else
/// `χ(ϖ)^n τ(χ, ψ) X^{2n}`; general `ψ_a` through [`tate_psi_scaling`].
pub fn tate_epsilon(chi: &MultChar, psi: &AdditiveChar) -> Result<LaurentRational> {
    let field = psi.field();
    check_field(chi, &field)?;
    let q = field.q();
    let base = AdditiveChar::standard(&field);
    let eps = if chi.is_unramified() {
        LaurentRational::one(q)
    } else {
        let n = chi.conductor() as i64;
        LaurentRational::monomial(q, chi.z().powi(n as i32) * gauss_sum(chi, &base)?, 2 * n)
    };
    Ok(eps.mul(&tate_psi_scaling(chi, &psi.scale())?))
}

/// `γ = ε L(1 - s, χ^{-1}) / L(s, χ)`.
pub fn tate_gamma(chi: &MultChar, psi: &AdditiveChar) -> Result<LaurentRational> {
    let q = psi.field().q();
    let eps = tate_epsilon(chi, psi)?;
    eps.mul(&dual_l(chi, q)).div(&tate_l(chi).to_laurent(q))
}

pub fn tate_triple(chi: &MultChar, psi: &AdditiveChar) -> Result<TateTriple> {
    Ok(TateTriple { l: tate_l(chi), epsilon: tate_epsilon(chi, psi)?, gamma: tate_gamma(chi, psi)? })
}

/// The unit `χ(a) |a|^{s - 1/2} = χ(a) q^{v/2} X^{2v}` with
/// `γ(s, χ, ψ_a) = unit · γ(s, χ, ψ)`.
pub fn tate_psi_scaling(chi: &MultChar, a: &PadicNumber) -> Result<LaurentRational> {
    let v = a.valuation().ok_or_else(|| Error::Domain("ψ_0 is trivial".into()))?;
    let q = a.field().q();
    let c = chi.eval(a)? * (q as f64).powf(v as f64 / 2.0);
    Ok(LaurentRational::monomial(q, c, 2 * v))
}

/// Test functions for the oracle: `𝟙_O` and `𝟙_{1 + p^{max(n(χ), 1)}}`.
pub fn oracle_test_functions(chi: &MultChar, field: &FieldParams) -> Vec<SchwartzFn> {
    let n = chi.conductor().max(1) as i64;
    vec![SchwartzFn::indicator(&field.zero(), 0), SchwartzFn::indicator(&field.one(), n)]
}

/// `γ` from the functional equation, for each test function with `Z(s, φ, χ) ≠ 0`.
pub fn tate_gamma_oracle(chi: &MultChar, psi: &AdditiveChar) -> Result<LaurentRational> {
    let field = psi.field();
    let tol = 1e-8;
    let mut found: Option<LaurentRational> = None;
    for phi in oracle_test_functions(chi, &field) {
        let z = tate_zeta(&phi, chi)?;
        if z.is_zero() {
            continue;
        }
        let dual = tate_zeta(&phi.fourier(psi)?, &chi.inv())?.substitute(-1, Complex64::new(1.0, 0.0))?;
        let gamma = dual.div(&z)?;
        match &found {
            None => found = Some(gamma),
            Some(g) if g.approx_eq(&gamma, tol) => {}
            Some(g) => {
                return Err(Error::Inconsistent(format!(
                    "test functions give different γ: {g} versus {gamma}"
                )))
            }
        }
    }
    found.ok_or_else(|| Error::Inconsistent("every test function has vanishing zeta integral".into()))
}

/// `(L, ε, γ)` read from the zeta integrals: `L` from the poles of the
/// test-function integrals, `γ` from the functional equation and `ε` as
/// `γ L(s, χ) / L(1 - s, χ^{-1})` with the oracle's own `L`.
pub fn tate_triple_oracle(chi: &MultChar, psi: &AdditiveChar) -> Result<TateTriple> {
    let field = psi.field();
    let q = field.q();
    let tol = Tolerances::default().cluster;
    let mut poles = Vec::new();
    for phi in oracle_test_functions(chi, &field) {
        let z = tate_zeta(&phi, chi)?;
        if !z.is_zero() {
            poles.push(z.denominator_as_lfactor()?);
        }
    }
    let l = LFactor::lcm(&poles, tol);
    let mut dual_poles = Vec::new();
    let inv = chi.inv();
    for phi in oracle_test_functions(&inv, &field) {
        let z = tate_zeta(&phi, &inv)?;
        if !z.is_zero() {
            dual_poles.push(z.denominator_as_lfactor()?);
        }
    }
    let l_dual = LFactor::lcm(&dual_poles, tol).to_laurent(q).substitute(-1, Complex64::new(1.0, 0.0))?;
    let gamma = tate_gamma_oracle(chi, psi)?;
    let epsilon = gamma.mul(&l.to_laurent(q)).div(&l_dual)?;
    Ok(TateTriple { l, epsilon, gamma })
}

/// For `n(χ) ≥ 2 n(η) + 1`: the constant `η(c)^{-1}`, where `c` has valuation
/// `-n(χ)` and `χ(1 + y) = ψ(c y)` for `y ∈ p^{⌈n/2⌉}`; found by search.
pub fn stability_constant(chi: &MultChar, eta: &MultChar, psi: &AdditiveChar) -> Result<Complex64> {
    let field = psi.field();
    check_field(chi, &field)?;
    let n = chi.conductor() as i64;
    if n < 2 * eta.conductor() as i64 + 1 {
        return Err(Error::Precondition(format!(
            "n(χ) = {n} is below 2 n(η) + 1 = {}",
            2 * eta.conductor() + 1
        )));
    }
    let p = field.p();
    let half = (n + 1) / 2;
    let digits = (n - half) as u32;
    let tol = Tolerances::default().complex;
    let ys: Vec<PadicNumber> = (1..p.pow(digits).max(2))
        .filter(|t| t % p != 0 || digits == 0)
        .map(|t| field.from_parts(half, t as i64))
        .collect::<Result<_>>()?;
    let psi_inv_scale = psi.scale().inv()?;
    for u in (1..p.pow(digits + 1)).filter(|u| u % p != 0) {
        let c = field.from_parts(-n, u as i64)? * psi_inv_scale;
        let matches = ys.iter().try_fold(true, |acc, y| -> Result<bool> {
            if !acc {
                return Ok(false);
            }
            let lhs = chi.eval(&(field.one() + *y))?;
            let rhs = psi.eval(&(c * *y))?;
            Ok((lhs - rhs).norm() < tol)
        })?;
        if matches {
            return Ok(eta.eval(&c)?.inv());
        }
    }
    Err(Error::Inconsistent("no c with χ(1 + y) = ψ(c y) on p^{⌈n/2⌉}".into()))
}
