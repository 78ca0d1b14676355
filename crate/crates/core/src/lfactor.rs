//! L-factors as multisets of inverse roots in `Y = q^{-s}`, and rational
//! functions of `X = q^{-s/2}` in factored form.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Tolerances;

/// `{"re": .., "im": ..}` wire form of a complex number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// `a` and `b` agree to relative tolerance `tol`.
pub fn roots_close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

/// `L(s) = ∏ (1 - α_i q^{-s})^{-1}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LFactor {
    roots: Vec<Complex64>,
}

impl LFactor {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(roots: Vec<Complex64>) -> Result<Self> {
        if roots.iter().any(|r| r.norm() == 0.0 || !r.is_finite()) {
            return Err(Error::Domain("inverse roots must be finite and nonzero".into()));
        }
        Ok(Self { roots })
    }

    pub fn single(alpha: Complex64) -> Self {
        Self::new(vec![alpha]).expect("nonzero inverse root")
    }

    pub fn inverse_roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn is_one(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn mul(&self, other: &LFactor) -> LFactor {
        let mut roots = self.roots.clone();
        roots.extend_from_slice(&other.roots);
        LFactor { roots }
    }

    /// Multiset equality up to relative tolerance.
    pub fn approx_eq(&self, other: &LFactor, tol: f64) -> bool {
        self.degree() == other.degree() && self.divides(other, tol)
    }

    /// `self | other`: every root of `self` is matched by a distinct root of `other`.
    pub fn divides(&self, other: &LFactor, tol: f64) -> bool {
        let mut used = vec![false; other.roots.len()];
        self.roots.iter().all(|a| {
            match other.roots.iter().enumerate().position(|(i, b)| !used[i] && roots_close(*a, *b, tol)) {
                Some(i) => {
                    used[i] = true;
                    true
                }
                None => false,
            }
        })
    }

    /// Least common multiple: for each root cluster the largest multiplicity
    /// occurring in a single input.
    pub fn lcm(factors: &[LFactor], tol: f64) -> LFactor {
        let mut reps: Vec<Complex64> = Vec::new();
        let mut mult: Vec<usize> = Vec::new();
        for f in factors {
            let mut counts = vec![0usize; reps.len()];
            for r in &f.roots {
                match reps.iter().position(|c| roots_close(*c, *r, tol)) {
                    Some(i) => counts[i] += 1,
                    None => {
                        reps.push(*r);
                        mult.push(0);
                        counts.push(1);
                    }
                }
            }
            for (m, c) in mult.iter_mut().zip(counts) {
                *m = (*m).max(c);
            }
        }
        let roots = reps.iter().zip(&mult).flat_map(|(r, m)| std::iter::repeat_n(*r, *m)).collect();
        LFactor { roots }
    }

    /// Common inverse roots of `self` and `other` (with multiplicity).
    pub fn common_roots(&self, other: &LFactor, tol: f64) -> Vec<Complex64> {
        let mut used = vec![false; other.roots.len()];
        let mut out = Vec::new();
        for a in &self.roots {
            if let Some(i) = (0..other.roots.len()).find(|&i| !used[i] && roots_close(*a, other.roots[i], tol)) {
                used[i] = true;
                out.push(*a);
            }
        }
        out
    }

    /// `L(s)` at `Y = q^{-s}`.
    pub fn eval(&self, s: Complex64, q: u64) -> Result<Complex64> {
        let y = (-s * (q as f64).ln()).exp();
        let tol = Tolerances::default().complex;
        let mut acc = Complex64::new(1.0, 0.0);
        for a in &self.roots {
            let f = Complex64::new(1.0, 0.0) - a * y;
            if f.norm() < tol {
                return Err(Error::Evaluation(format!("pole of L at s = {s}")));
            }
            acc /= f;
        }
        Ok(acc)
    }

    /// The same factor in `X = q^{-s/2}`: `1/∏(1 - √α X)(1 + √α X)`.
    pub fn to_laurent(&self, q: u64) -> LaurentRational {
        let den = self.roots.iter().flat_map(|a| {
            let r = a.sqrt();
            [r, -r]
        });
        LaurentRational::from_parts(q, Complex64::new(1.0, 0.0), 0, Vec::new(), den.collect())
    }

    /// `1 / L`, i.e. the polynomial `∏(1 - α Y)` as a rational function of `X`.
    pub fn to_laurent_inverse(&self, q: u64) -> LaurentRational {
        self.to_laurent(q).inv().expect("L-factors are nonzero")
    }

    /// `L(as + b)` for `a ∈ {1, -1}` is not an L-factor in general; this is
    /// `L(s + b)`: inverse roots scaled by `q^{-b}`.
    pub fn shift(&self, b: Complex64, q: u64) -> LFactor {
        let scale = (-b * (q as f64).ln()).exp();
        LFactor { roots: self.roots.iter().map(|a| a * scale).collect() }
    }

    /// Polynomial `∏(1 - α_i Y)` as ascending coefficients.
    pub fn polynomial(&self) -> Vec<Complex64> {
        poly_from_inverse_roots(&self.roots)
    }

    pub fn to_json(&self) -> LFactorJson {
        LFactorJson { inverse_roots: self.roots.iter().map(|r| (*r).into()).collect() }
    }

    pub fn from_json(j: &LFactorJson) -> Result<Self> {
        Self::new(j.inverse_roots.iter().map(|r| (*r).into()).collect())
    }

    /// `(1 - α q^{-s})^{-1}...` with roots printed to six decimals.
    pub fn render(&self) -> String {
        if self.roots.is_empty() {
            return "1".into();
        }
        self.roots.iter().map(|a| format!("(1 - {} q^{{-s}})^{{-1}}", fmt_complex(*a))).collect()
    }
}

impl fmt::Display for LFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LFactorJson {
    pub inverse_roots: Vec<ComplexJson>,
}

pub(crate) fn fmt_complex(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re:.6}")
    } else {
        format!("({re:.6}{im:+.6}i)")
    }
}

/// `c X^k ∏(1 - β_j X) / ∏(1 - α_i X)` in `X = q^{-s/2}`; the zero function has `c = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentRational {
    q: u64,
    c: Complex64,
    k: i64,
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

impl LaurentRational {
    pub fn one(q: u64) -> Self {
        Self::monomial(q, Complex64::new(1.0, 0.0), 0)
    }

    pub fn zero(q: u64) -> Self {
        Self { q, c: Complex64::new(0.0, 0.0), k: 0, num: Vec::new(), den: Vec::new() }
    }

    /// `c X^k`.
    pub fn monomial(q: u64, c: Complex64, k: i64) -> Self {
        if c.norm() == 0.0 {
            return Self::zero(q);
        }
        Self { q, c, k, num: Vec::new(), den: Vec::new() }
    }

    /// `c X^k ∏(1 - β X) / ∏(1 - α X)`, reduced.
    pub fn from_parts(q: u64, c: Complex64, k: i64, num: Vec<Complex64>, den: Vec<Complex64>) -> Self {
        if c.norm() == 0.0 {
            return Self::zero(q);
        }
        let mut r = Self { q, c, k, num, den };
        r.reduce(Tolerances::default().cluster);
        r
    }

    /// Rational function with ascending coefficient lists `num(X) / den(X)`.
    pub fn from_coefficients(q: u64, num: &[Complex64], den: &[Complex64]) -> Result<Self> {
        let (cd, kd, dr) = factor_polynomial(den);
        if cd.norm() == 0.0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        let (cn, kn, nr) = factor_polynomial(num);
        if cn.norm() == 0.0 {
            return Ok(Self::zero(q));
        }
        Ok(Self::from_parts(q, cn / cd, kn - kd, nr, dr))
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.c.norm() == 0.0
    }

    /// `(c, k)` of the leading monomial.
    pub fn unit_part(&self) -> (Complex64, i64) {
        (self.c, self.k)
    }

    pub fn numerator_roots(&self) -> &[Complex64] {
        &self.num
    }

    pub fn denominator_roots(&self) -> &[Complex64] {
        &self.den
    }

    /// A unit of `C[X, X^{-1}]`: nonzero monomial.
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.num.is_empty() && self.den.is_empty()
    }

    fn reduce(&mut self, tol: f64) {
        let tiny = 1e-13;
        self.num.retain(|b| b.norm() > tiny);
        self.den.retain(|a| a.norm() > tiny);
        let mut i = 0;
        while i < self.num.len() {
            let b = self.num[i];
            if let Some(j) = self.den.iter().position(|a| roots_close(*a, b, tol)) {
                self.den.remove(j);
                self.num.remove(i);
            } else {
                i += 1;
            }
        }
    }

    fn check_q(&self, other: &LaurentRational) {
        assert_eq!(self.q, other.q, "rational functions over different q");
    }

    pub fn mul(&self, other: &LaurentRational) -> LaurentRational {
        self.check_q(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.q);
        }
        let mut num = self.num.clone();
        num.extend_from_slice(&other.num);
        let mut den = self.den.clone();
        den.extend_from_slice(&other.den);
        Self::from_parts(self.q, self.c * other.c, self.k + other.k, num, den)
    }

    pub fn inv(&self) -> Result<LaurentRational> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of the zero function".into()));
        }
        Ok(Self { q: self.q, c: self.c.inv(), k: -self.k, num: self.den.clone(), den: self.num.clone() })
    }

    pub fn div(&self, other: &LaurentRational) -> Result<LaurentRational> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, c: Complex64) -> LaurentRational {
        self.mul(&Self::monomial(self.q, c, 0))
    }

    pub fn pow(&self, e: i64) -> Result<LaurentRational> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.q);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Sum over a common denominator. Denominator roots that also vanish on
    /// the new numerator are divided out exactly before the remaining
    /// numerator is factored.
    pub fn add(&self, other: &LaurentRational) -> LaurentRational {
        self.check_q(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // self = c1 X^k1 N1/D1, other = c2 X^k2 N2/D2.
        // Common denominator D = lcm-free product D1 * (D2 minus shared roots).
        let tol = Tolerances::default().cluster;
        let mut den = self.den.clone();
        let mut extra_for_self = Vec::new();
        let mut rest_of_d1 = self.den.clone();
        for a in &other.den {
            if let Some(j) = rest_of_d1.iter().position(|b| roots_close(*a, *b, tol)) {
                rest_of_d1.remove(j);
            } else {
                extra_for_self.push(*a);
                den.push(*a);
            }
        }
        let extra_for_other = rest_of_d1;
        let kmin = self.k.min(other.k);
        let mut p1: Vec<Complex64> = poly_from_inverse_roots(&[self.num.clone(), extra_for_self].concat());
        let mut p2: Vec<Complex64> = poly_from_inverse_roots(&[other.num.clone(), extra_for_other].concat());
        p1.iter_mut().for_each(|x| *x *= self.c);
        p2.iter_mut().for_each(|x| *x *= other.c);
        let p1 = shift_poly(&p1, (self.k - kmin) as usize);
        let p2 = shift_poly(&p2, (other.k - kmin) as usize);
        let mut sum = vec![Complex64::new(0.0, 0.0); p1.len().max(p2.len())];
        for (i, x) in p1.iter().enumerate() {
            sum[i] += x;
        }
        for (i, x) in p2.iter().enumerate() {
            sum[i] += x;
        }
        let scale = p1.iter().chain(p2.iter()).map(|x| x.norm()).fold(0.0, f64::max);
        for x in sum.iter_mut() {
            if x.norm() <= 1e-13 * scale {
                *x = Complex64::new(0.0, 0.0);
            }
        }
        if sum.iter().all(|x| x.norm() == 0.0) {
            return Self::zero(self.q);
        }
        // Divide out denominator factors that vanish on the numerator.
        let mut kept_den = Vec::new();
        for a in den {
            match deflate(&sum, a) {
                Some(quot) => sum = quot,
                None => kept_den.push(a),
            }
        }
        let (c, k, num) = factor_polynomial(&sum);
        Self::from_parts(self.q, c, kmin + k, num, kept_den)
    }

    pub fn sub(&self, other: &LaurentRational) -> LaurentRational {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `f(q^{-b/2} X^a)` for `a ∈ {1, -1, 2, -2}`, i.e. `f` at `s ↦ a s + b`.
    pub fn substitute(&self, a: i32, b: Complex64) -> Result<LaurentRational> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let lam = (-b * 0.5 * (self.q as f64).ln()).exp();
        let one = Complex64::new(1.0, 0.0);
        match a {
            1 => Ok(Self::from_parts(
                self.q,
                self.c * lam.powi(self.k as i32),
                self.k,
                self.num.iter().map(|x| x * lam).collect(),
                self.den.iter().map(|x| x * lam).collect(),
            )),
            -1 => {
                // 1 - ρλ X^{-1} = -ρλ X^{-1} (1 - X/(ρλ)).
                let mut c = self.c * lam.powi(self.k as i32);
                let mut k = -self.k;
                let num: Vec<Complex64> = self.num.iter().map(|x| one / (x * lam)).collect();
                let den: Vec<Complex64> = self.den.iter().map(|x| one / (x * lam)).collect();
                for x in &self.num {
                    c *= -x * lam;
                    k -= 1;
                }
                for x in &self.den {
                    c /= -x * lam;
                    k += 1;
                }
                Ok(Self::from_parts(self.q, c, k, num, den))
            }
            2 => {
                // 1 - ρλ X^2 = (1 - r X)(1 + r X), r^2 = ρλ.
                let split = |v: &[Complex64]| -> Vec<Complex64> {
                    v.iter()
                        .flat_map(|x| {
                            let r = (x * lam).sqrt();
                            [r, -r]
                        })
                        .collect()
                };
                Ok(Self::from_parts(
                    self.q,
                    self.c * lam.powi(self.k as i32),
                    2 * self.k,
                    split(&self.num),
                    split(&self.den),
                ))
            }
            -2 => self.substitute(-1, Complex64::new(0.0, 0.0))?.substitute(2, -b),
            _ => Err(Error::Unsupported(format!("substitution s -> {a}s + b"))),
        }
    }

    /// Value at `s`, with `X = q^{-s/2}`.
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        if self.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let x = (-s * 0.5 * (self.q as f64).ln()).exp();
        let one = Complex64::new(1.0, 0.0);
        let tol = Tolerances::default().complex;
        let mut acc = self.c * x.powi(self.k as i32);
        for b in &self.num {
            acc *= one - b * x;
        }
        for a in &self.den {
            let f = one - a * x;
            if f.norm() < tol {
                return Err(Error::Evaluation(format!("pole at s = {s}")));
            }
            acc /= f;
        }
        Ok(acc)
    }

    /// `Some((c, k))` when `self / other = c X^k`.
    pub fn ratio_is_unit(&self, other: &LaurentRational) -> Result<Option<(Complex64, i64)>> {
        let r = self.div(other)?;
        Ok(if r.is_unit() { Some(r.unit_part()) } else { None })
    }

    /// `(c, k, num, den)` with `num`, `den` ascending coefficient lists of
    /// constant term 1.
    pub fn coefficients(&self) -> (Complex64, i64, Vec<Complex64>, Vec<Complex64>) {
        (self.c, self.k, poly_from_inverse_roots(&self.num), poly_from_inverse_roots(&self.den))
    }

    /// Coefficientwise comparison of the canonical forms.
    pub fn approx_eq(&self, other: &LaurentRational, tol: f64) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let (c1, k1, n1, d1) = self.coefficients();
        let (c2, k2, n2, d2) = other.coefficients();
        let close = |a: &[Complex64], b: &[Complex64]| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol * x.norm().max(1.0))
        };
        k1 == k2 && (c1 - c2).norm() <= tol * c1.norm().max(1.0) && close(&n1, &n2) && close(&d1, &d2)
    }

    /// Reads `∏(1 - α_i X)` in the denominator as an L-factor in `Y = X^2`,
    /// pairing roots `±ρ` into `α = ρ^2`.
    pub fn denominator_as_lfactor(&self) -> Result<LFactor> {
        pair_roots(&self.den)
    }

    /// The numerator in the same sense.
    pub fn numerator_as_lfactor(&self) -> Result<LFactor> {
        pair_roots(&self.num)
    }

    pub fn to_json(&self) -> LaurentRationalJson {
        let (c, k, num, den) = self.coefficients();
        LaurentRationalJson {
            unit: UnitJson { c: c.into(), k },
            num: num.into_iter().map(Into::into).collect(),
            den: den.into_iter().map(Into::into).collect(),
        }
    }

    pub fn from_json(q: u64, j: &LaurentRationalJson) -> Result<Self> {
        let num: Vec<Complex64> = j.num.iter().map(|x| (*x).into()).collect();
        let den: Vec<Complex64> = j.den.iter().map(|x| (*x).into()).collect();
        let r = Self::from_coefficients(q, &num, &den)?;
        Ok(r.mul(&Self::monomial(q, j.unit.c.into(), j.unit.k)))
    }
}

impl fmt::Display for LaurentRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{} X^{}", fmt_complex(self.c), self.k)?;
        for b in &self.num {
            write!(f, " (1 - {} X)", fmt_complex(*b))?;
        }
        for a in &self.den {
            write!(f, " / (1 - {} X)", fmt_complex(*a))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitJson {
    pub c: ComplexJson,
    pub k: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentRationalJson {
    pub unit: UnitJson,
    pub num: Vec<ComplexJson>,
    pub den: Vec<ComplexJson>,
}

fn pair_roots(roots: &[Complex64]) -> Result<LFactor> {
    let tol = Tolerances::default().cluster;
    let mut rest: Vec<Complex64> = roots.to_vec();
    let mut out = Vec::new();
    while let Some(r) = rest.pop() {
        let j = rest
            .iter()
            .position(|x| roots_close(*x, -r, tol))
            .ok_or_else(|| Error::Domain(format!("root {r} has no partner -{r}; not a function of X^2")))?;
        rest.remove(j);
        out.push(r * r);
    }
    LFactor::new(out)
}

/// Ascending coefficients of `∏(1 - β_i X)`.
pub fn poly_from_inverse_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for b in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
        for (i, x) in p.iter().enumerate() {
            next[i] += x;
            next[i + 1] -= x * b;
        }
        p = next;
    }
    p
}

fn shift_poly(p: &[Complex64], by: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); by];
    out.extend_from_slice(p);
    out
}

/// Divide `p(X)` by `(1 - a X)` when the remainder vanishes to working accuracy.
fn deflate(p: &[Complex64], a: Complex64) -> Option<Vec<Complex64>> {
    if p.len() < 2 {
        return None;
    }
    // p(X) = (1 - aX) r(X): r_0 = p_0, r_i = p_i + a r_{i-1}.
    let n = p.len() - 1;
    let mut r = vec![Complex64::new(0.0, 0.0); n];
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        acc = p[i] + a * acc;
        r[i] = acc;
    }
    let remainder = p[n] + a * acc;
    let scale = p.iter().map(|x| x.norm()).fold(0.0, f64::max) * (1.0 + a.norm()).powi(n as i32);
    if remainder.norm() <= 1e-10 * scale {
        Some(r)
    } else {
        None
    }
}

/// Writes `p(X) = c X^k ∏(1 - β_i X)`; returns `c = 0` for the zero polynomial.
fn factor_polynomial(p: &[Complex64]) -> (Complex64, i64, Vec<Complex64>) {
    let scale = p.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return (Complex64::new(0.0, 0.0), 0, Vec::new());
    }
    let tiny = 1e-14 * scale;
    let lo = p.iter().position(|x| x.norm() > tiny).expect("nonzero polynomial");
    let hi = p.iter().rposition(|x| x.norm() > tiny).expect("nonzero polynomial");
    let core = &p[lo..=hi];
    let c = core[0];
    // β_i are the roots of the reversed polynomial c Y^d + p_1 Y^{d-1} + ... + p_d.
    let reversed: Vec<Complex64> = core.iter().rev().map(|x| x / c).collect();
    (c, lo as i64, polynomial_roots(&reversed))
}

/// Roots of `a_0 + a_1 Y + ... + a_d Y^d` (ascending, `a_d = 1` after
/// normalisation) by Aberth iteration followed by Newton polishing.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Vec::new();
    }
    let lead = coeffs[d];
    let a: Vec<Complex64> = coeffs.iter().map(|x| x / lead).collect();
    if d == 1 {
        return vec![-a[0]];
    }
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in a.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    // Cauchy bound for the initial circle.
    let radius = 1.0 + a[..d].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|i| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / d as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / z[i].norm().max(1e-300));
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval(*zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *zi -= step;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn lcm_examples() {
        let tol = 1e-6;
        let a = LFactor::single(c(0.5));
        assert!(LFactor::lcm(&[a.clone(), a.clone()], tol).approx_eq(&a, tol));
        let b = LFactor::single(c(0.25));
        assert_eq!(LFactor::lcm(&[a.clone(), b.clone()], tol).degree(), 2);
        let ab = LFactor::new(vec![c(1.0), c(0.25)]).unwrap();
        let l = LFactor::lcm(&[ab.clone(), LFactor::single(c(1.0))], tol);
        assert!(l.approx_eq(&ab, tol));
        let double = LFactor::single(c(1.0)).mul(&LFactor::single(c(1.0)));
        assert_eq!(LFactor::lcm(&[double.clone(), LFactor::single(c(1.0))], tol).degree(), 2);
    }

    #[test]
    fn eval_examples() {
        let l = LFactor::single(c(1.0));
        let v = l.eval(c(2.0), 5).unwrap();
        assert!((v - c(25.0 / 24.0)).norm() < 1e-12);
        let w = l.to_laurent(5).eval(c(2.0)).unwrap();
        assert!((w - v).norm() < 1e-12);
        let u = LaurentRational::monomial(5, Complex64::new(0.3, 0.4), 7);
        assert!((u.eval(c(0.0)).unwrap() - Complex64::new(0.3, 0.4)).norm() < 1e-12);
        assert!(l.eval(c(0.0), 5).is_err());
    }

    #[test]
    fn unit_ratio() {
        let a = LFactor::new(vec![c(0.3), Complex64::new(0.1, 0.2)]).unwrap().to_laurent(5);
        assert_eq!(a.ratio_is_unit(&a).unwrap(), Some((c(1.0), 0)));
        let x2a = a.mul(&LaurentRational::monomial(5, c(1.0), 2));
        let (u, k) = x2a.ratio_is_unit(&a).unwrap().unwrap();
        assert!((u - 1.0).norm() < 1e-12 && k == 2);
        let other = LFactor::single(c(0.7)).to_laurent(5);
        assert_eq!(a.ratio_is_unit(&other).unwrap(), None);
    }

    #[test]
    fn addition_cancels_shared_factors() {
        // 1/(1-X) - X/(1-X) = 1.
        let q = 5;
        let f = LaurentRational::from_parts(q, c(1.0), 0, vec![], vec![c(1.0)]);
        let g = LaurentRational::from_parts(q, c(1.0), 1, vec![], vec![c(1.0)]);
        let h = f.sub(&g);
        assert!(h.is_unit());
        assert!((h.unit_part().0 - 1.0).norm() < 1e-12);
        // 1/(1-X) + 1/(1+X) = 2/(1-X^2).
        let g = LaurentRational::from_parts(q, c(1.0), 0, vec![], vec![c(-1.0)]);
        let s = f.add(&g);
        assert_eq!(s.denominator_roots().len(), 2);
        assert!((s.unit_part().0 - 2.0).norm() < 1e-12);
        assert!(s.sub(&s).is_zero());
    }

    #[test]
    fn substitution_matches_evaluation() {
        let q = 7;
        let f = LaurentRational::from_parts(q, Complex64::new(0.5, 0.1), 3, vec![c(0.3)], vec![Complex64::new(0.2, -0.4), c(1.5)]);
        let b = Complex64::new(0.7, 0.2);
        for a in [1, -1, 2, -2] {
            let g = f.substitute(a, b).unwrap();
            for s in [Complex64::new(0.31, 0.4), Complex64::new(-1.2, 2.0)] {
                let lhs = g.eval(s).unwrap();
                let rhs = f.eval(s * a as f64 + b).unwrap();
                assert!((lhs - rhs).norm() < 1e-9 * rhs.norm().max(1.0), "a = {a}");
            }
        }
    }

    #[test]
    fn roots_of_products() {
        let roots = vec![c(0.5), Complex64::new(0.2, 0.9), c(-3.0), Complex64::new(-0.1, -0.1)];
        let p = poly_from_inverse_roots(&roots);
        let (cc, k, found) = factor_polynomial(&p);
        assert!((cc - 1.0).norm() < 1e-12 && k == 0);
        assert!(LFactor::new(found).unwrap().approx_eq(&LFactor::new(roots).unwrap(), 1e-9));
    }

    #[test]
    fn json_shapes() {
        let l = LFactor::single(c(1.0));
        assert_eq!(serde_json::to_string(&l.to_json()).unwrap(), r#"{"inverse_roots":[{"re":1.0,"im":0.0}]}"#);
        let r = l.to_laurent(5).mul(&LaurentRational::monomial(5, c(2.0), -1));
        let back = LaurentRational::from_json(5, &r.to_json()).unwrap();
        assert!(back.approx_eq(&r, 1e-12));
    }
}
