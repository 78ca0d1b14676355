//! The metaplectic Bessel function in its asymptotic range
//!
//! `j(x) = ∫_{x u^{-2} ∈ 1 + p^{3m}} (-x, u) μ_ψ(u)^{-1} ψ(x u^{-1} + u) du`,
//! `|x| > q^{9m}`, evaluated as a finite coset sum.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lfactor::ComplexJson;
use crate::local_symbols::{hilbert, mu_psi, AdditiveChar};
use crate::padic::{FieldParams, PadicNumber};

/// A point `x` of the range `|x| > C_m = q^{9m}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselQuery {
    x: PadicNumber,
    m: u32,
}

impl BesselQuery {
    pub fn new(x: PadicNumber, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("range parameter m must be positive".into()));
        }
        let v = x.valuation().ok_or_else(|| Error::Domain("j is not defined at 0".into()))?;
        if v >= -9 * m as i64 {
            return Err(Error::Domain(format!("|x| = q^{} is not above C_m = q^{}", -v, 9 * m)));
        }
        Ok(Self { x, m })
    }

    pub fn x(&self) -> PadicNumber {
        self.x
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn c_m(&self) -> f64 {
        (self.x.field().q() as f64).powi(9 * self.m as i32)
    }

    /// `r` with `r² = x`, when `x` is a square.
    pub fn root(&self) -> Result<Option<PadicNumber>> {
        Ok(if self.x.is_square()? { Some(self.x.sqrt()?) } else { None })
    }

    /// Smallest `J` with the phase constant on `t + p^J`:
    /// `max(3m, -v(r) - 3m)`.
    pub fn resolution_bound(&self) -> Option<i64> {
        let v = self.x.valuation()?;
        (v % 2 == 0).then(|| {
            let m3 = 3 * self.m as i64;
            m3.max(-v / 2 - m3)
        })
    }

    /// `vol(±r(1 + p^{3m})) = 2|r| q^{-3m}`; zero for non-squares.
    pub fn volume(&self) -> Result<f64> {
        Ok(match self.root()? {
            Some(r) => 2.0 * r.abs() * (self.x.field().q() as f64).powi(-3 * self.m as i32),
            None => 0.0,
        })
    }
}

/// `j(x)` at the minimal resolution.
pub fn bessel_eval(query: &BesselQuery, psi: &AdditiveChar) -> Result<Complex64> {
    match query.resolution_bound() {
        Some(j) => bessel_eval_resolved(query, psi, j),
        None => Ok(Complex64::new(0.0, 0.0)),
    }
}

/// `j(x)` as the sum over `t ∈ p^{3m}/p^J` on both branches `u = ±r(1+t)`.
pub fn bessel_eval_resolved(query: &BesselQuery, psi: &AdditiveChar, j: i64) -> Result<Complex64> {
    let field = psi.field();
    if field != query.x.field() {
        return Err(Error::Domain("x and ψ live over different fields".into()));
    }
    if psi.conductor() != 0 {
        return Err(Error::Unsupported("ψ must have conductor O".into()));
    }
    let r = match query.root()? {
        Some(r) => r,
        None => return Ok(Complex64::new(0.0, 0.0)),
    };
    let bound = query.resolution_bound().expect("square");
    if j < bound {
        return Err(Error::Precondition(format!("resolution J = {j} is below {bound}")));
    }
    let e = -r.valuation().expect("nonzero");
    let n = field.precision() as i64;
    let m3 = 3 * query.m as i64;
    if e > n || j > n + m3 {
        return Err(Error::Precision(format!(
            "need precision at least {} for v(x) = {}, J = {j}",
            e.max(j - m3),
            -2 * e
        )));
    }
    let p = field.p();
    let step = field.p_pow(m3 as u32) as i64;
    let count = field.p_pow((j - m3) as u32);
    let one = field.one();
    let two = field.from_i64(2);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..count {
        let t = field.from_i64(k as i64 * step);
        let w = one + t;
        let phase = r * (two + t * t * w.inv()?);
        sum += psi.eval(&phase)?;
    }
    let neg_x = -query.x;
    let mut total = Complex64::new(0.0, 0.0);
    for (branch, s) in [(r, sum), (-r, sum.conj())] {
        let sign = hilbert(&neg_x, &branch)? as f64;
        total += s * sign / mu_psi(&branch, psi)?;
    }
    Ok(total * r.abs() * (p as f64).powi(-(j as i32)))
}

/// Smallest `i` with `x ∈ p^{-6i}`: `j(xa) = j(x)` for `a ∈ 1 + p^{3i}`.
pub fn smoothness_exponent(x: &PadicNumber) -> Result<u32> {
    let v = x.valuation().ok_or_else(|| Error::Domain("zero".into()))?;
    Ok(((-v).max(1) as u32).div_ceil(6))
}

/// One row of a scan: `x = p^v u` with `u` a class representative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesselRow {
    pub v: i64,
    pub class: String,
    pub j: ComplexJson,
}

/// `j` on `p^v · {1, u0}` for `v` in `vmin..=vmax` inside the range.
pub fn bessel_range_scan(field: &FieldParams, m: u32, vmin: i64, vmax: i64) -> Result<Vec<BesselRow>> {
    let psi = AdditiveChar::standard(field);
    let units = [field.one(), field.from_i64(field.nonresidue() as i64)];
    let mut rows = Vec::new();
    for v in vmin..=vmax.min(-9 * m as i64 - 1) {
        for u in &units {
            let x = field.from_parts(v, 1)? * *u;
            let q = BesselQuery::new(x, m)?;
            rows.push(BesselRow {
                v,
                class: x.square_class()?.label().to_string(),
                j: bessel_eval(&q, &psi)?.into(),
            });
        }
    }
    Ok(rows)
}
