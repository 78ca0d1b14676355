//! The quadratic Hilbert symbol `(a, b)_F` on `Q_p`, `p` odd.

use crate::error::{Error, Result};
use crate::padic::{legendre, PadicNumber};

/// Hilbert symbol by the closed form for odd residual characteristic:
/// with `a = p^α u`, `b = p^β w`,
/// `(a,b) = (-1)^{αβ(p-1)/2} (u/p)^β (w/p)^α`.
pub fn hilbert(a: &PadicNumber, b: &PadicNumber) -> Result<i8> {
    let (alpha, u) = split(a)?;
    let (beta, w) = split(b)?;
    let p = a.field().p();
    let mut sign: i8 = 1;
    if (alpha * beta).rem_euclid(2) == 1 && ((p - 1) / 2) % 2 == 1 {
        sign = -sign;
    }
    if beta.rem_euclid(2) == 1 {
        sign *= legendre(u as i64, p)?;
    }
    if alpha.rem_euclid(2) == 1 {
        sign *= legendre(w as i64, p)?;
    }
    Ok(sign)
}

/// Independent Hilbert symbol: `+1` iff `z^2 = a x^2 + b y^2` has a primitive
/// solution mod `p^3` after scaling `a` and `b` by even powers of `p` into
/// valuations `{0, 1}`. For such coefficients a primitive solution mod `p^3`
/// lifts to `Z_p` by Hensel's lemma, so the search decides solvability.
pub fn hilbert_oracle(a: &PadicNumber, b: &PadicNumber) -> Result<i8> {
    let p = a.field().p();
    let modulus = p.pow(3);
    let reduce = |x: &PadicNumber| -> Result<u64> {
        let (v, u) = split(x)?;
        let shift = v.rem_euclid(2) as u32;
        Ok(p.pow(shift) * (u % p.pow(3 - shift)) % modulus)
    };
    let (ca, cb) = (reduce(a)?, reduce(b)?);
    let mut is_square = vec![false; modulus as usize];
    for z in 0..modulus {
        is_square[(z * z % modulus) as usize] = true;
    }
    for x in 0..modulus {
        let ax2 = ca * (x * x % modulus) % modulus;
        for y in 0..modulus {
            if x % p == 0 && y % p == 0 {
                continue;
            }
            let rhs = (ax2 + cb * (y * y % modulus)) % modulus;
            if is_square[rhs as usize] {
                return Ok(1);
            }
        }
    }
    Ok(-1)
}

fn split(a: &PadicNumber) -> Result<(i64, u64)> {
    match (a.valuation(), a.unit()) {
        (Some(v), Some(u)) => Ok((v, u % a.field().p())),
        _ => Err(Error::Domain("Hilbert symbol of zero".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{FieldParams, SquareClass};

    #[test]
    fn closed_form_examples() {
        let f = FieldParams::new(5, 4).unwrap();
        assert_eq!(hilbert(&f.from_i64(2), &f.from_i64(5)), Ok(-1));
        assert_eq!(hilbert(&f.from_i64(2), &f.from_i64(3)), Ok(1));
        assert_eq!(hilbert(&f.from_i64(5), &f.from_i64(5)), Ok(1));
        assert!(hilbert(&f.zero(), &f.one()).is_err());
    }

    #[test]
    fn oracle_examples() {
        let f = FieldParams::new(5, 4).unwrap();
        assert_eq!(hilbert_oracle(&f.one(), &f.from_i64(10)), Ok(1));
        assert_eq!(hilbert_oracle(&f.from_i64(2), &f.from_i64(5)), Ok(-1));
        assert_eq!(hilbert_oracle(&f.from_i64(5), &f.from_i64(5)), Ok(1));
    }

    #[test]
    fn p3_uniformizer_pair() {
        // (3,3)_3 = (3,-1)_3 = (-1/3) = -1.
        let f = FieldParams::new(3, 4).unwrap();
        let pi = SquareClass::Uniformizer.representative(&f);
        assert_eq!(hilbert(&pi, &pi), Ok(-1));
        assert_eq!(hilbert_oracle(&pi, &pi), Ok(-1));
    }
}
