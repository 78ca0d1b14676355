use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::local_symbols::characters::AdditiveChar;
use crate::padic::PadicNumber;
use crate::Tolerances;

/// Weil index of the character of second degree `x ↦ ψ(a x^2)`; an eighth root of unity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeilIndex(Complex64);

impl WeilIndex {
    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn is_eighth_root(&self, tol: f64) -> bool {
        (self.0.powi(8) - 1.0).norm() <= tol
    }
}

/// `γ(ψ_a)` as the limit of the normalized quadratic sums
/// `I_k = q^{-j} Σ_{x ∈ p^{-k}/p^j} ψ(a x^2)`, `j = max(k - v(a), 0) + 1`.
///
/// `a` is first moved by an even power of `p` to valuation 0 or 1; this is a
/// change of variables `x ↦ p^m x` and leaves the normalized value unchanged.
pub fn weil_index(a: &PadicNumber, psi: &AdditiveChar) -> Result<WeilIndex> {
    if a.is_zero() {
        return Err(Error::Domain("Weil index of ψ_0".into()));
    }
    let b = *a * psi.scale();
    let field = b.field();
    let p = field.p();
    let v = b.valuation().expect("nonzero").rem_euclid(2);
    let u = b.unit().expect("nonzero");
    let tol = Tolerances::default().complex;
    let max_k = v + field.precision() as i64;
    let mut prev: Option<Complex64> = None;
    for k in 0..=max_k {
        let j = (k - v).max(0) + 1;
        let d = 2 * k - v;
        let count = (p as f64).powi((k + j) as i32);
        let sum = if d <= 0 {
            Complex64::new(count, 0.0)
        } else {
            let m = p.pow(d as u32);
            let ur = (u % m) as u128;
            let mut acc = Complex64::new(0.0, 0.0);
            for y in 0..m {
                let r = (ur * (y as u128) * (y as u128) % m as u128) as f64;
                acc += Complex64::from_polar(1.0, 2.0 * PI * r / m as f64);
            }
            acc * (count / m as f64)
        };
        let ik = sum / (p as f64).powi(j as i32);
        if let Some(prev) = prev {
            if (ik - prev).norm() <= tol * ik.norm().max(1.0) {
                return Ok(WeilIndex(ik / ik.norm()));
            }
        }
        prev = Some(ik);
    }
    Err(Error::Precision(format!("quadratic sums for γ(ψ_a) did not stabilize by k = {max_k}")))
}

/// `μ_ψ(a) = γ(ψ_a) / γ(ψ)`.
pub fn mu_psi(a: &PadicNumber, psi: &AdditiveChar) -> Result<Complex64> {
    let one = a.field().one();
    Ok(weil_index(a, psi)?.value() / weil_index(&one, psi)?.value())
}
