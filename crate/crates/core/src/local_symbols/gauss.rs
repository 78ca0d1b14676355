use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::local_symbols::characters::{rotation_to_complex, AdditiveChar, MultChar};

/// `τ(χ, ψ) = Σ_{u ∈ (Z/p^n)^x} χ(u)^{-1} ψ(u ϖ^{-n})` with `n = n(χ) ≥ 1`.
pub fn gauss_sum(chi: &MultChar, psi: &AdditiveChar) -> Result<Complex64> {
    let n = chi.conductor();
    if n == 0 {
        return Err(Error::Domain("Gauss sum of an unramified character".into()));
    }
    let field = psi.field();
    if field.p() != chi.p() {
        return Err(Error::Domain("character and ψ live over different fields".into()));
    }
    if n > field.precision() {
        return Err(Error::Precision(format!("conductor {n} exceeds precision {}", field.precision())));
    }
    let p = field.p();
    let m = p.pow(n);
    let mut acc = Complex64::new(0.0, 0.0);
    for u in (1..m).filter(|u| u % p != 0) {
        let x = field.from_parts(-(n as i64), u as i64)?;
        acc += rotation_to_complex(-chi.residue_rotation(u)?) * psi.eval(&x)?;
    }
    Ok(acc)
}
