//! Additive and multiplicative characters of `Q_p`.
//!
//! Multiplicative characters keep their restriction to `O^x` exact: the
//! group `Z_p^x` is topologically generated by one integer `g` (the smallest
//! positive primitive root mod `p^2`), so a continuous character is fixed by
//! the rotation `r ∈ Q/Z` with `χ(g) = e^{2πi r}`. The value `χ(p) = z` is an
//! arbitrary nonzero complex number so deformations `χ ν^u` stay in the type.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{is_prime, mul_mod, pow_mod, FieldParams, PadicNumber};
use crate::local_symbols::hilbert::hilbert;
use crate::Tolerances;

/// Rotation in `Q/Z`, kept reduced in `[0, 1)`.
pub type Rotation = Ratio<i64>;

pub(crate) fn reduce_rotation(r: Rotation) -> Rotation {
    let fl = r.floor();
    r - fl
}

pub(crate) fn rotation_to_complex(r: Rotation) -> Complex64 {
    let angle = 2.0 * PI * (*r.numer() as f64) / (*r.denom() as f64);
    Complex64::from_polar(1.0, angle)
}

/// Additive character `ψ_a(x) = ψ(a x)` where `ψ(x) = e^{2πi frac(x)}` is
/// trivial on `O` and nontrivial on `p^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdditiveChar {
    scale: PadicNumber,
}

impl AdditiveChar {
    /// The unramified character `ψ` (conductor 0).
    pub fn standard(field: &FieldParams) -> Self {
        Self { scale: field.one() }
    }

    /// `x ↦ ψ(a x)` relative to this character.
    pub fn scaled(&self, a: &PadicNumber) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Domain("ψ_0 is trivial".into()));
        }
        Ok(Self { scale: self.scale * *a })
    }

    pub fn inverse(&self) -> Self {
        Self { scale: -self.scale }
    }

    /// The `a` with this character equal to `ψ_a`.
    pub fn scale(&self) -> PadicNumber {
        self.scale
    }

    pub fn field(&self) -> FieldParams {
        self.scale.field()
    }

    /// Smallest `m` with the character trivial on `p^m`.
    pub fn conductor(&self) -> i64 {
        -self.scale.valuation().expect("nonzero scale")
    }

    /// Principal part of `a x` as `(numerator, p^d)`; `(0, 1)` when integral.
    pub fn phase(&self, x: &PadicNumber) -> Result<(u64, u64)> {
        let y = self.scale * *x;
        match (y.valuation(), y.unit()) {
            (Some(v), Some(u)) if v < 0 => {
                let d = (-v) as u32;
                let f = y.field();
                if d > f.precision() {
                    return Err(Error::Precision(format!(
                        "ψ needs {d} digits of a unit known to {} digits",
                        f.precision()
                    )));
                }
                let den = f.p_pow(d);
                Ok((u % den, den))
            }
            _ => Ok((0, 1)),
        }
    }

    pub fn eval(&self, x: &PadicNumber) -> Result<Complex64> {
        let (num, den) = self.phase(x)?;
        Ok(Complex64::from_polar(1.0, 2.0 * PI * num as f64 / den as f64))
    }
}

static GENERATORS: OnceLock<RwLock<HashMap<u64, u64>>> = OnceLock::new();
static DLOG_TABLES: OnceLock<RwLock<HashMap<(u64, u32), Arc<Vec<u32>>>>> = OnceLock::new();

/// Largest `p^n` for which a discrete-log table is built.
const MAX_DLOG_TABLE: u64 = 20_000_000;

/// The fixed topological generator of `Z_p^x`: the smallest positive
/// primitive root mod `p^2` (hence a primitive root mod every `p^n`).
pub fn unit_generator(p: u64) -> u64 {
    let cache = GENERATORS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(g) = cache.read().expect("generator cache").get(&p) {
        return *g;
    }
    let phi_p = p - 1;
    let primes: Vec<u64> = (2..=phi_p).filter(|l| phi_p.is_multiple_of(*l) && is_prime(*l)).collect();
    let p2 = p * p;
    let g = (2..p2)
        .find(|&g| {
            g % p != 0
                && primes.iter().all(|l| pow_mod(g, phi_p / l, p) != 1)
                && pow_mod(g, phi_p, p2) != 1
        })
        .expect("Z/p^2 has a primitive root");
    cache.write().expect("generator cache").insert(p, g);
    g
}

/// Discrete logarithms base [`unit_generator`] on `(Z/p^n)^x`; non-units map to `u32::MAX`.
pub(crate) fn dlog_table(p: u64, n: u32) -> Result<Arc<Vec<u32>>> {
    let cache = DLOG_TABLES.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().expect("dlog cache").get(&(p, n)) {
        return Ok(Arc::clone(t));
    }
    let m = p.checked_pow(n).filter(|m| *m <= MAX_DLOG_TABLE).ok_or_else(|| {
        Error::Precision(format!("discrete-log table for {p}^{n} is too large"))
    })?;
    let g = unit_generator(p) % m;
    let order = m / p * (p - 1);
    let mut table = vec![u32::MAX; m as usize];
    let mut x = 1 % m;
    for e in 0..order {
        table[x as usize] = e as u32;
        x = mul_mod(x, g, m);
    }
    let table = Arc::new(table);
    cache.write().expect("dlog cache").insert((p, n), Arc::clone(&table));
    Ok(table)
}

/// Character of `Q_p^x`: `χ(p^v u) = z^v e^{2πi r·log_g u}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultChar {
    p: u64,
    rot: Rotation,
    z: Complex64,
    conductor: u32,
}

impl MultChar {
    pub fn new(p: u64, rot: Rotation, z: Complex64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::Domain(format!("p = {p} is not an odd prime")));
        }
        if z.norm() == 0.0 || !z.is_finite() {
            return Err(Error::Domain("χ(ϖ) must be a finite nonzero complex number".into()));
        }
        let rot = reduce_rotation(rot);
        let conductor = rotation_conductor(p, &rot)?;
        Ok(Self { p, rot, z, conductor })
    }

    pub fn trivial(p: u64) -> Self {
        Self::new(p, Rotation::zero(), Complex64::new(1.0, 0.0)).expect("valid prime")
    }

    pub fn unramified(p: u64, z: Complex64) -> Result<Self> {
        Self::new(p, Rotation::zero(), z)
    }

    /// `ν = |·|`.
    pub fn nu(p: u64) -> Self {
        Self::unramified(p, Complex64::new(1.0 / p as f64, 0.0)).expect("valid prime")
    }

    /// The character with `χ(g_n) = e^{2πi e/φ(p^n)}` and `χ(ϖ) = z`.
    pub fn from_generator_exponent(p: u64, n: u32, e: i64, z: Complex64) -> Result<Self> {
        let phi = (p - 1) as i64 * (p as i64).pow(n.saturating_sub(1));
        Self::new(p, Rotation::new(e, phi.max(1)), z)
    }

    /// Random finite part of exact conductor `n`, with the given `χ(ϖ)`.
    pub fn random_of_conductor<R: Rng + ?Sized>(p: u64, n: u32, z: Complex64, rng: &mut R) -> Self {
        if n == 0 {
            return Self::unramified(p, z).expect("nonzero z");
        }
        let phi = (p - 1) as i64 * (p as i64).pow(n - 1);
        loop {
            let e = rng.gen_range(1..phi);
            let chi = Self::from_generator_exponent(p, n, e, z).expect("valid");
            if chi.conductor == n {
                return chi;
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Conductor exponent `n(χ)`.
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_unramified(&self) -> bool {
        self.conductor == 0
    }

    /// `χ(ϖ)`.
    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// Rotation `r` with `χ(g) = e^{2πi r}` on the fixed generator.
    pub fn rotation(&self) -> Rotation {
        self.rot
    }

    /// Real exponent `u` with `|χ(ϖ)| = q^{-u}`.
    pub fn real_exponent(&self) -> f64 {
        -self.z.norm().ln() / (self.p as f64).ln()
    }

    pub fn mul(&self, other: &MultChar) -> MultChar {
        assert_eq!(self.p, other.p, "characters of different fields");
        Self::new(self.p, self.rot + other.rot, self.z * other.z).expect("product of characters")
    }

    pub fn inv(&self) -> MultChar {
        Self::new(self.p, -self.rot, self.z.inv()).expect("inverse character")
    }

    pub fn pow(&self, k: i64) -> MultChar {
        Self::new(self.p, self.rot * Rotation::from_integer(k), self.z.powi(k as i32)).expect("power")
    }

    /// `χ ν^s`, i.e. `χ(ϖ) ↦ χ(ϖ) q^{-s}`.
    pub fn twist_nu(&self, s: Complex64) -> MultChar {
        let scale = (-s * (self.p as f64).ln()).exp();
        Self::new(self.p, self.rot, self.z * scale).expect("twisted character")
    }

    /// Finite part `χ(u)` on a unit as an exact rotation.
    pub fn unit_rotation(&self, u: &PadicNumber) -> Result<Rotation> {
        if !u.is_unit() {
            return Err(Error::Domain(format!("{u} is not a unit")));
        }
        if self.conductor == 0 {
            return Ok(Rotation::zero());
        }
        let field = u.field();
        if self.conductor > field.precision() {
            return Err(Error::Precision(format!(
                "conductor {} exceeds precision {}",
                self.conductor,
                field.precision()
            )));
        }
        let residue = u.residue(self.conductor)?;
        self.residue_rotation(residue)
    }

    /// Finite part on an integer residue coprime to `p`, read mod `p^{n(χ)}`.
    pub fn residue_rotation(&self, residue: u64) -> Result<Rotation> {
        if self.conductor == 0 {
            return Ok(Rotation::zero());
        }
        let m = self.p.pow(self.conductor);
        let table = dlog_table(self.p, self.conductor)?;
        let e = table[(residue % m) as usize];
        if e == u32::MAX {
            return Err(Error::Domain(format!("{residue} is not a unit mod {m}")));
        }
        Ok(reduce_rotation(self.rot * Rotation::from_integer(e as i64)))
    }

    pub fn eval(&self, a: &PadicNumber) -> Result<Complex64> {
        if a.field().p() != self.p {
            return Err(Error::Domain("character and element live over different fields".into()));
        }
        let v = a.valuation().ok_or_else(|| Error::Domain("χ(0) is undefined".into()))?;
        let rot = self.unit_rotation(&a.unit_part()?)?;
        Ok(self.z.powi(v as i32) * rotation_to_complex(rot))
    }

    /// Equality: finite parts exactly, `χ(ϖ)` within `tol`.
    pub fn approx_eq(&self, other: &MultChar, tol: f64) -> bool {
        self.p == other.p && self.rot == other.rot && (self.z - other.z).norm() <= tol * self.z.norm().max(1.0)
    }

    pub fn is_trivial(&self) -> bool {
        self.approx_eq(&MultChar::trivial(self.p), Tolerances::default().complex)
    }

    pub fn to_json(&self) -> MultCharJson {
        MultCharJson {
            p: self.p,
            n: self.conductor,
            gen_exp: format!("{}/{}", self.rot.numer(), self.rot.denom()),
            z: UnramifiedJson::Rect { re: self.z.re, im: self.z.im },
        }
    }

    pub fn from_json(j: &MultCharJson) -> Result<Self> {
        let rot = parse_rotation(&j.gen_exp)?;
        let z = match &j.z {
            UnramifiedJson::Rect { re, im } => Complex64::new(*re, *im),
            UnramifiedJson::Polar { rot, mag } => rotation_to_complex(parse_rotation(rot)?) * *mag,
        };
        let chi = Self::new(j.p, rot, z)?;
        if chi.conductor != j.n {
            return Err(Error::Parse(format!(
                "declared conductor {} but gen_exp {} has conductor {}",
                j.n, j.gen_exp, chi.conductor
            )));
        }
        Ok(chi)
    }
}

impl fmt::Display for MultChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "χ[p={}, n={}, r={}, z={:.6}{:+.6}i]",
            self.p, self.conductor, self.rot, self.z.re, self.z.im
        )
    }
}

fn rotation_conductor(p: u64, rot: &Rotation) -> Result<u32> {
    if rot.is_zero() {
        return Ok(0);
    }
    let mut d = *rot.denom() as u64;
    let mut k = 0u32;
    while d.is_multiple_of(p) {
        d /= p;
        k += 1;
    }
    if !(p - 1).is_multiple_of(d) {
        return Err(Error::Domain(format!(
            "rotation {rot} is not a character of Z_{p}^x (denominator must divide (p-1)p^k)"
        )));
    }
    Ok(k + 1)
}

fn parse_rotation(s: &str) -> Result<Rotation> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad rotation {s:?}")))?;
            let b: i64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad rotation {s:?}")))?;
            if b == 0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Rotation::new(a, b)
        }
        None => Rotation::from_integer(s.parse().map_err(|_| Error::Parse(format!("bad rotation {s:?}")))?),
    };
    Ok(reduce_rotation(r))
}

/// Wire form of a [`MultChar`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultCharJson {
    pub p: u64,
    pub n: u32,
    pub gen_exp: String,
    pub z: UnramifiedJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnramifiedJson {
    Rect { re: f64, im: f64 },
    Polar { rot: String, mag: f64 },
}

/// The quadratic character `χ_b(a) = (b, a)_F`.
pub fn chi_b(b: &PadicNumber) -> Result<MultChar> {
    let field = b.field();
    let p = field.p();
    let beta = b.valuation().ok_or_else(|| Error::Domain("χ_0 is undefined".into()))?;
    let rot = if beta.rem_euclid(2) == 1 { Rotation::new(1, 2) } else { Rotation::zero() };
    let z = hilbert(b, &field.uniformizer())? as f64;
    let chi = MultChar::new(p, rot, Complex64::new(z, 0.0))?;
    debug_assert!(Rotation::one() > chi.rot);
    Ok(chi)
}
