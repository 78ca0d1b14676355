//! Truncated arithmetic in `Q_p` for an odd prime `p`.
//!
//! A nonzero element is stored as `p^v * u` with `u` a unit residue mod `p^N`,
//! where `N` is the working precision fixed in [`FieldParams`]. Zero is a
//! distinguished value. When an addition cancels leading digits the unit is
//! known only modulo a smaller power of `p`; the missing high digits are
//! filled by the balanced lift of the known residue, which keeps every
//! computation on small exact integers exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest modulus `p^N` we accept; products are formed in `u128`.
const MAX_MODULUS: u64 = 1 << 62;

/// The base field `Q_p` together with the working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldParams {
    p: u64,
    precision: u32,
    modulus: u64,
}

impl FieldParams {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::Domain(format!("p = {p} is not an odd prime")));
        }
        if precision == 0 {
            return Err(Error::Domain("precision must be at least 1".into()));
        }
        let mut modulus: u64 = 1;
        for _ in 0..precision {
            modulus = modulus
                .checked_mul(p)
                .filter(|m| *m <= MAX_MODULUS)
                .ok_or_else(|| {
                    Error::Precision(format!("p^N = {p}^{precision} exceeds the supported modulus"))
                })?;
        }
        Ok(Self { p, precision, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Residue field cardinality; equal to `p` for `Q_p`.
    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `p^N`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `p^k` for `0 <= k <= N`.
    pub fn p_pow(&self, k: u32) -> u64 {
        debug_assert!(k <= self.precision);
        self.p.pow(k)
    }

    /// Smallest positive quadratic non-residue mod `p`.
    pub fn nonresidue(&self) -> u64 {
        (2..self.p)
            .find(|&u| legendre(u as i64, self.p) == Ok(-1))
            .expect("an odd prime has a quadratic non-residue")
    }

    pub fn zero(&self) -> PadicNumber {
        PadicNumber { field: *self, repr: Repr::Zero }
    }

    pub fn one(&self) -> PadicNumber {
        PadicNumber { field: *self, repr: Repr::Nonzero { v: 0, u: 1 % self.modulus } }
    }

    /// The uniformizer `p`.
    pub fn uniformizer(&self) -> PadicNumber {
        PadicNumber { field: *self, repr: Repr::Nonzero { v: 1, u: 1 % self.modulus } }
    }

    pub fn from_i64(&self, n: i64) -> PadicNumber {
        if n == 0 {
            return self.zero();
        }
        let mut m = n as i128;
        let mut v = 0i64;
        while m % self.p as i128 == 0 {
            m /= self.p as i128;
            v += 1;
        }
        let u = m.rem_euclid(self.modulus as i128) as u64;
        PadicNumber { field: *self, repr: Repr::Nonzero { v, u } }
    }

    /// `num / den` for integers, `den != 0`.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<PadicNumber> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        self.from_i64(num).div(&self.from_i64(den))
    }

    /// `p^v * u` where `u` may carry further factors of `p`.
    pub fn from_parts(&self, v: i64, u: i64) -> Result<PadicNumber> {
        if u.rem_euclid(self.modulus as i64) == 0 {
            return Err(Error::Domain(format!("unit part {u} vanishes mod p^N")));
        }
        let base = self.from_i64(u);
        Ok(base * self.uniformizer().pow(v))
    }

    /// Uniform unit `u` mod `p^N`.
    pub fn sample_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> PadicNumber {
        loop {
            let u = rng.gen_range(1..self.modulus);
            if u % self.p != 0 {
                return PadicNumber { field: *self, repr: Repr::Nonzero { v: 0, u } };
            }
        }
    }

    /// Nonzero element with valuation drawn uniformly from `vmin..=vmax`.
    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, vmin: i64, vmax: i64) -> PadicNumber {
        let v = rng.gen_range(vmin..=vmax);
        let unit = self.sample_unit(rng);
        PadicNumber { field: *self, repr: Repr::Nonzero { v, u: unit.unit().unwrap_or(1) } }
    }

    fn make(&self, v: i64, s: u64) -> PadicNumber {
        // s is a residue mod p^N representing p^v * s; strip factors of p.
        if s == 0 {
            return self.zero();
        }
        let mut k = 0u32;
        let mut t = s;
        while t.is_multiple_of(self.p) {
            t /= self.p;
            k += 1;
        }
        let u = if k == 0 {
            t
        } else {
            // Known mod p^(N-k); fill the high digits with the balanced lift.
            let known = self.p_pow(self.precision - k);
            if t > known / 2 {
                self.modulus - (known - t)
            } else {
                t
            }
        };
        PadicNumber { field: *self, repr: Repr::Nonzero { v: v + k as i64, u } }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Zero,
    Nonzero { v: i64, u: u64 },
}

/// Element of `Q_p` at fixed precision: `p^v * u` with `u` a unit mod `p^N`, or zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    field: FieldParams,
    repr: Repr,
}

impl PadicNumber {
    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero => None,
            Repr::Nonzero { v, .. } => Some(v),
        }
    }

    /// Unit part `u` mod `p^N`.
    pub fn unit(&self) -> Option<u64> {
        match self.repr {
            Repr::Zero => None,
            Repr::Nonzero { u, .. } => Some(u),
        }
    }

    /// `|a| = q^{-v}`, and `|0| = 0`.
    pub fn abs(&self) -> f64 {
        match self.repr {
            Repr::Zero => 0.0,
            Repr::Nonzero { v, .. } => (self.field.q() as f64).powi(-v as i32),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Unit part with the valuation removed, as an element of `O^x`.
    pub fn unit_part(&self) -> Result<PadicNumber> {
        match self.repr {
            Repr::Zero => Err(Error::Domain("zero has no unit part".into())),
            Repr::Nonzero { u, .. } => Ok(PadicNumber { field: self.field, repr: Repr::Nonzero { v: 0, u } }),
        }
    }

    /// Residue of an integral element mod `p^k`.
    pub fn residue(&self, k: u32) -> Result<u64> {
        match self.repr {
            Repr::Zero => Ok(0),
            Repr::Nonzero { v, u } => {
                if v < 0 {
                    return Err(Error::Domain("residue of a non-integral element".into()));
                }
                if v >= k as i64 {
                    return Ok(0);
                }
                let digits = k - v as u32;
                if digits > self.field.precision {
                    return Err(Error::Precision(format!(
                        "residue mod p^{k} needs {digits} unit digits, precision is {}",
                        self.field.precision
                    )));
                }
                let pk = self.field.p.pow(k);
                Ok(mul_mod(self.field.p.pow(v as u32), u % self.field.p.pow(digits), pk))
            }
        }
    }

    pub fn inv(&self) -> Result<PadicNumber> {
        match self.repr {
            Repr::Zero => Err(Error::Domain("inversion of zero".into())),
            Repr::Nonzero { v, u } => {
                let ui = inv_mod(u, self.field.modulus)
                    .ok_or_else(|| Error::Domain("unit part not invertible".into()))?;
                Ok(PadicNumber { field: self.field, repr: Repr::Nonzero { v: -v, u: ui } })
            }
        }
    }

    pub fn div(&self, other: &PadicNumber) -> Result<PadicNumber> {
        Ok(*self * other.inv()?)
    }

    /// Integer powers; `0^k` for `k > 0` is zero and `x^0 = 1`.
    pub fn pow(&self, e: i64) -> PadicNumber {
        match self.repr {
            Repr::Zero if e > 0 => *self,
            Repr::Zero => self.field.one(),
            Repr::Nonzero { v, u } => {
                let m = self.field.modulus;
                let base = if e >= 0 { u } else { inv_mod(u, m).expect("unit") };
                PadicNumber {
                    field: self.field,
                    repr: Repr::Nonzero { v: v * e, u: pow_mod(base, e.unsigned_abs(), m) },
                }
            }
        }
    }

    pub fn square_class(&self) -> Result<SquareClass> {
        match self.repr {
            Repr::Zero => Err(Error::Domain("zero has no square class".into())),
            Repr::Nonzero { v, u } => {
                let residue = legendre((u % self.field.p) as i64, self.field.p)? == 1;
                Ok(match (v.rem_euclid(2) == 1, residue) {
                    (false, true) => SquareClass::One,
                    (false, false) => SquareClass::NonResidue,
                    (true, true) => SquareClass::Uniformizer,
                    (true, false) => SquareClass::NonResidueUniformizer,
                })
            }
        }
    }

    pub fn is_square(&self) -> Result<bool> {
        Ok(self.square_class()? == SquareClass::One)
    }

    /// Square root by Hensel lifting. The branch is the one whose unit
    /// residue mod `p` lies in `1..=(p-1)/2`.
    pub fn sqrt(&self) -> Result<PadicNumber> {
        if !self.is_square()? {
            return Err(Error::Domain(format!("{self} is not a square")));
        }
        let (v, u) = match self.repr {
            Repr::Nonzero { v, u } => (v, u),
            Repr::Zero => unreachable!(),
        };
        let p = self.field.p;
        let m = self.field.modulus;
        let r0 = (1..=(p - 1) / 2)
            .find(|r| r * r % p == u % p)
            .expect("residue has a root");
        let mut r = r0;
        // Newton iteration: r <- r - (r^2 - u) / (2r); doubles the correct digits.
        let mut correct = 1u32;
        while correct < self.field.precision {
            let f = (mul_mod(r, r, m) + m - u) % m;
            let d = inv_mod(mul_mod(2, r, m), m).expect("2r is a unit");
            r = (r + m - mul_mod(f, d, m)) % m;
            correct *= 2;
        }
        Ok(PadicNumber { field: self.field, repr: Repr::Nonzero { v: v / 2, u: r } })
    }

    /// Sum that refuses to cancel leading digits, so the result keeps the full
    /// relative precision of its operands.
    pub fn add_exact(&self, rhs: &PadicNumber) -> Result<PadicNumber> {
        let sum = *self + *rhs;
        let floor = match (self.valuation(), rhs.valuation()) {
            (Some(a), Some(b)) => a.min(b),
            _ => return Ok(sum),
        };
        match sum.valuation() {
            Some(v) if v == floor => Ok(sum),
            _ => Err(Error::Precision(format!("cancellation in {self} + {rhs}"))),
        }
    }

    fn assert_same_field(&self, other: &PadicNumber) {
        assert_eq!(self.field, other.field, "p-adic operands from different fields");
    }
}

impl Mul for PadicNumber {
    type Output = PadicNumber;
    fn mul(self, rhs: PadicNumber) -> PadicNumber {
        self.assert_same_field(&rhs);
        match (self.repr, rhs.repr) {
            (Repr::Nonzero { v: v1, u: u1 }, Repr::Nonzero { v: v2, u: u2 }) => PadicNumber {
                field: self.field,
                repr: Repr::Nonzero { v: v1 + v2, u: mul_mod(u1, u2, self.field.modulus) },
            },
            _ => self.field.zero(),
        }
    }
}

impl Mul<&PadicNumber> for PadicNumber {
    type Output = PadicNumber;
    fn mul(self, rhs: &PadicNumber) -> PadicNumber {
        self * *rhs
    }
}

impl Add for PadicNumber {
    type Output = PadicNumber;
    fn add(self, rhs: PadicNumber) -> PadicNumber {
        self.assert_same_field(&rhs);
        let f = self.field;
        match (self.repr, rhs.repr) {
            (Repr::Zero, _) => rhs,
            (_, Repr::Zero) => self,
            (Repr::Nonzero { v: v1, u: u1 }, Repr::Nonzero { v: v2, u: u2 }) => {
                let (v, lo, hi, gap) = if v1 <= v2 { (v1, u1, u2, v2 - v1) } else { (v2, u2, u1, v1 - v2) };
                if gap >= f.precision as i64 {
                    return PadicNumber { field: f, repr: Repr::Nonzero { v, u: lo } };
                }
                let shifted = mul_mod(hi, f.p_pow(gap as u32), f.modulus);
                f.make(v, (lo + shifted) % f.modulus)
            }
        }
    }
}

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        match self.repr {
            Repr::Zero => self,
            Repr::Nonzero { v, u } => PadicNumber {
                field: self.field,
                repr: Repr::Nonzero { v, u: (self.field.modulus - u) % self.field.modulus },
            },
        }
    }
}

impl Sub for PadicNumber {
    type Output = PadicNumber;
    fn sub(self, rhs: PadicNumber) -> PadicNumber {
        self + (-rhs)
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Nonzero { v: 0, u } => write!(f, "{u}"),
            Repr::Nonzero { v, u } => write!(f, "{}^{}*{}", self.field.p, v, u),
        }
    }
}

impl Serialize for PadicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PadicJson::from(*self).serialize(s)
    }
}

/// Wire form of a [`PadicNumber`]: `"0"` or `{"v": int, "u": int}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PadicJson {
    Zero(String),
    Nonzero { v: i64, u: i64 },
}

impl From<PadicNumber> for PadicJson {
    fn from(a: PadicNumber) -> Self {
        match a.repr {
            Repr::Zero => PadicJson::Zero("0".into()),
            Repr::Nonzero { v, u } => PadicJson::Nonzero { v, u: u as i64 },
        }
    }
}

impl PadicJson {
    pub fn into_padic(self, field: &FieldParams) -> Result<PadicNumber> {
        match self {
            PadicJson::Zero(s) if s.trim() == "0" => Ok(field.zero()),
            PadicJson::Zero(s) => Err(Error::Parse(format!("expected \"0\" or an object, got {s:?}"))),
            PadicJson::Nonzero { v, u } => field.from_parts(v, u),
        }
    }
}

/// The four classes of `F^x / (F^x)^2` for odd `p`, with representatives
/// `1, u0, p, u0 p` where `u0` is the smallest non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SquareClass {
    One,
    NonResidue,
    Uniformizer,
    NonResidueUniformizer,
}

impl SquareClass {
    pub const ALL: [SquareClass; 4] = [
        SquareClass::One,
        SquareClass::NonResidue,
        SquareClass::Uniformizer,
        SquareClass::NonResidueUniformizer,
    ];

    pub fn representative(&self, field: &FieldParams) -> PadicNumber {
        let u0 = field.from_i64(field.nonresidue() as i64);
        match self {
            SquareClass::One => field.one(),
            SquareClass::NonResidue => u0,
            SquareClass::Uniformizer => field.uniformizer(),
            SquareClass::NonResidueUniformizer => u0 * field.uniformizer(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SquareClass::One => "1",
            SquareClass::NonResidue => "u0",
            SquareClass::Uniformizer => "p",
            SquareClass::NonResidueUniformizer => "u0*p",
        }
    }
}

/// Legendre symbol `(u / p)` by Euler's criterion.
pub fn legendre(u: i64, p: u64) -> Result<i8> {
    let r = u.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Err(Error::Domain(format!("{u} is divisible by {p}")));
    }
    Ok(if pow_mod(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
