//! `GL_2(Q_p)`, its Bruhat decomposition and the metaplectic double cover
//! defined by the Kubota cocycle.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local_symbols::hilbert;
use crate::padic::{FieldParams, PadicJson, PadicNumber};

/// Invertible 2x2 matrix `[[a, b], [c, d]]` over `Q_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GL2Element {
    m: [PadicNumber; 4],
}

impl GL2Element {
    pub fn new(a: PadicNumber, b: PadicNumber, c: PadicNumber, d: PadicNumber) -> Result<Self> {
        let g = Self { m: [a, b, c, d] };
        if g.det().is_zero() {
            return Err(Error::Domain("singular matrix".into()));
        }
        Ok(g)
    }

    pub fn identity(field: &FieldParams) -> Self {
        Self { m: [field.one(), field.zero(), field.zero(), field.one()] }
    }

    /// `w_2 = [[0, 1], [1, 0]]`.
    pub fn w2(field: &FieldParams) -> Self {
        Self { m: [field.zero(), field.one(), field.one(), field.zero()] }
    }

    /// `n(x) = [[1, x], [0, 1]]`.
    pub fn n(x: &PadicNumber) -> Self {
        let f = x.field();
        Self { m: [f.one(), *x, f.zero(), f.one()] }
    }

    /// `n̄(x) = [[1, 0], [x, 1]]`.
    pub fn nbar(x: &PadicNumber) -> Self {
        let f = x.field();
        Self { m: [f.one(), f.zero(), *x, f.one()] }
    }

    /// `t(a, b) = diag(a, b)`.
    pub fn t(a: &PadicNumber, b: &PadicNumber) -> Result<Self> {
        let f = a.field();
        Self::new(*a, f.zero(), f.zero(), *b)
    }

    pub fn scalar(a: &PadicNumber) -> Result<Self> {
        Self::t(a, a)
    }

    pub fn field(&self) -> FieldParams {
        self.m[0].field()
    }

    pub fn a(&self) -> PadicNumber {
        self.m[0]
    }

    pub fn b(&self) -> PadicNumber {
        self.m[1]
    }

    pub fn c(&self) -> PadicNumber {
        self.m[2]
    }

    pub fn d(&self) -> PadicNumber {
        self.m[3]
    }

    pub fn entries(&self) -> [PadicNumber; 4] {
        self.m
    }

    pub fn det(&self) -> PadicNumber {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn is_diagonal(&self) -> bool {
        self.m[1].is_zero() && self.m[2].is_zero()
    }

    pub fn is_upper_unipotent(&self) -> bool {
        let one = self.field().one();
        self.m[0] == one && self.m[3] == one && self.m[2].is_zero()
    }

    /// Membership in `K = GL_2(O)`.
    pub fn is_in_k(&self) -> bool {
        self.m.iter().all(|x| x.is_integral()) && self.det().is_unit()
    }

    pub fn inverse(&self) -> Self {
        let di = self.det().inv().expect("invertible");
        let [a, b, c, d] = self.m;
        Self { m: [d * di, -b * di, -c * di, a * di] }
    }

    /// Product at working precision; cancellation silently loses digits.
    pub fn mul(&self, other: &GL2Element) -> GL2Element {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        Self { m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h] }
    }

    /// Product that fails instead of cancelling leading digits in any entry.
    pub fn mul_exact(&self, other: &GL2Element) -> Result<GL2Element> {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        let prod = Self {
            m: [
                (a * e).add_exact(&(b * g))?,
                (a * f).add_exact(&(b * h))?,
                (c * e).add_exact(&(d * g))?,
                (c * f).add_exact(&(d * h))?,
            ],
        };
        if prod.det().is_zero() {
            return Err(Error::Precision("product is singular at working precision".into()));
        }
        Ok(prod)
    }

    /// `ιg = w_2 (g^t)^{-1} w_2`, which is `det(g)^{-1} [[a, -b], [-c, d]]`.
    pub fn involution(&self) -> GL2Element {
        let di = self.det().inv().expect("invertible");
        let [a, b, c, d] = self.m;
        Self { m: [a * di, -b * di, -c * di, d * di] }
    }

    /// `X(g) = c` if `c != 0`, else `d`.
    pub fn kubota_x(&self) -> PadicNumber {
        if self.m[2].is_zero() {
            self.m[3]
        } else {
            self.m[2]
        }
    }

    pub fn to_json(&self) -> Vec<PadicJson> {
        self.m.iter().map(|x| PadicJson::from(*x)).collect()
    }

    pub fn from_json(field: &FieldParams, entries: &[PadicJson]) -> Result<Self> {
        if entries.len() != 4 {
            return Err(Error::Parse(format!("expected 4 matrix entries, got {}", entries.len())));
        }
        let e: Vec<PadicNumber> =
            entries.iter().map(|x| x.clone().into_padic(field)).collect::<Result<_>>()?;
        Self::new(e[0], e[1], e[2], e[3])
    }
}

impl fmt::Display for GL2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m[0], self.m[1], self.m[2], self.m[3])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weyl {
    Identity,
    W2,
}

/// `g = n(x1) t(t1, t2) w n(x2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruhatForm {
    pub x1: PadicNumber,
    pub t: (PadicNumber, PadicNumber),
    pub w: Weyl,
    pub x2: PadicNumber,
}

impl BruhatForm {
    pub fn torus(&self) -> GL2Element {
        GL2Element::t(&self.t.0, &self.t.1).expect("torus part is invertible")
    }

    pub fn recompose(&self) -> GL2Element {
        let field = self.x1.field();
        let w = match self.w {
            Weyl::Identity => GL2Element::identity(&field),
            Weyl::W2 => GL2Element::w2(&field),
        };
        GL2Element::n(&self.x1).mul(&self.torus()).mul(&w).mul(&GL2Element::n(&self.x2))
    }
}

pub fn bruhat_decompose(g: &GL2Element) -> BruhatForm {
    let field = g.field();
    let [a, b, c, d] = g.entries();
    if c.is_zero() {
        let x2 = b.div(&a).expect("a != 0 when c = 0");
        return BruhatForm { x1: field.zero(), t: (a, d), w: Weyl::Identity, x2 };
    }
    let ci = c.inv().expect("c != 0");
    BruhatForm { x1: a * ci, t: (-(g.det() * ci), c), w: Weyl::W2, x2: d * ci }
}

/// The torus part `𝔱(g)` of the Bruhat decomposition.
pub fn torus_part(g: &GL2Element) -> (PadicNumber, PadicNumber) {
    bruhat_decompose(g).t
}

/// Kubota cocycle
/// `σ₂(g₁,g₂) = (det g₁, X(g₁g₂)/X(g₁)) (X(g₁g₂)/X(g₁), X(g₁g₂)/X(g₂))`.
pub fn cocycle(g1: &GL2Element, g2: &GL2Element) -> Result<i8> {
    let x12 = g1.mul(g2).kubota_x();
    let r1 = x12.div(&g1.kubota_x())?;
    let r2 = x12.div(&g2.kubota_x())?;
    Ok(hilbert(&g1.det(), &r1)? * hilbert(&r1, &r2)?)
}

/// `σ₂` through the Bruhat reduction `σ₂(g, g') = σ₂(t, w n₂ g') σ₂(w, n₂ g')`,
/// with `σ₂(t, h) = σ₂(t, 𝔱(h))`, `σ₂(t(a,b), t(a',b')) = (a, b')` and
/// `σ₂(w, h) = σ₂(𝔱(wh)𝔱(h)^{-1}, -𝔱(h))`; `σ₂(I, h) = 1`.
///
/// The reduction rules hold for the Weyl representative `w₀ = [[0, -1], [1, 0]]`
/// and the torus map of the decomposition `g = n t w₀ n'`; with `w_2` the rule
/// for `σ₂(w, h)` is off by `(-1, -ac)`. This path therefore decomposes along `w₀`.
pub fn cocycle_bls(g1: &GL2Element, g2: &GL2Element) -> Result<i8> {
    let field = g1.field();
    let (_, t, has_w, x2) = bls_decompose(g1, g1.det());
    let h = GL2Element::n(&x2).mul(g2);
    // det(n h) = det(h); reading it off g2 avoids cancellation in h.
    let det_h = g2.det();
    if !has_w {
        return hilbert(&t.0, &bls_decompose(&h, det_h).1 .1);
    }
    let wh = w0(&field).mul(&h);
    let (b1, b2) = bls_decompose(&h, det_h).1;
    let (c1, c2) = bls_decompose(&wh, det_h).1;
    let alpha = c1.div(&b1)?;
    Ok(hilbert(&t.0, &c2)? * hilbert(&alpha, &-b2)?)
}

fn w0(field: &FieldParams) -> GL2Element {
    GL2Element { m: [field.zero(), -field.one(), field.one(), field.zero()] }
}

/// `g = n(x1) t w₀^ε n(x2)` with `ε ∈ {0, 1}`, given `det g`.
fn bls_decompose(g: &GL2Element, det: PadicNumber) -> (PadicNumber, (PadicNumber, PadicNumber), bool, PadicNumber) {
    let field = g.field();
    let [a, b, c, d] = g.entries();
    if c.is_zero() {
        return (field.zero(), (a, d), false, b.div(&a).expect("a != 0 when c = 0"));
    }
    let ci = c.inv().expect("c != 0");
    (a * ci, (det * ci, c), true, d * ci)
}

/// Whether `σ₂(g1, g2)` can be evaluated on both routes without losing
/// leading digits: `g1 g2` and `n(x2) g2` (with `x2` from the Bruhat form
/// of `g1`) multiply without cancellation.
pub fn well_conditioned(g1: &GL2Element, g2: &GL2Element) -> bool {
    let x2 = bruhat_decompose(g1).x2;
    g1.mul_exact(g2).is_ok() && GL2Element::n(&x2).mul_exact(g2).is_ok()
}

/// Element `(g, ξ)` of the metaplectic double cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetaElement {
    pub g: GL2Element,
    pub xi: i8,
}

impl MetaElement {
    pub fn new(g: GL2Element, xi: i8) -> Result<Self> {
        if xi != 1 && xi != -1 {
            return Err(Error::Domain(format!("ξ must be ±1, got {xi}")));
        }
        Ok(Self { g, xi })
    }

    /// The section `𝔰(g) = (g, 1)`.
    pub fn section(g: GL2Element) -> Self {
        Self { g, xi: 1 }
    }

    pub fn identity(field: &FieldParams) -> Self {
        Self::section(GL2Element::identity(field))
    }

    pub fn mul(&self, other: &MetaElement) -> Result<MetaElement> {
        let sigma = cocycle(&self.g, &other.g)?;
        Ok(Self { g: self.g.mul(&other.g), xi: sigma * self.xi * other.xi })
    }

    pub fn inverse(&self) -> Result<MetaElement> {
        let gi = self.g.inverse();
        Ok(Self { g: gi, xi: self.xi * cocycle(&self.g, &gi)? })
    }

    /// Lift of `ι` on the torus and on `N`: `ι𝔰(t(a,b)) = 𝔰(ιt(a,b)) (b,a)`
    /// and `ι𝔰(n) = 𝔰(ιn)`, extended by `ι(1, ξ) = (1, ξ)`.
    pub fn involution(&self) -> Result<MetaElement> {
        if self.g.is_diagonal() {
            let sign = hilbert(&self.g.d(), &self.g.a())?;
            Ok(Self { g: self.g.involution(), xi: self.xi * sign })
        } else if self.g.is_upper_unipotent() {
            Ok(Self { g: self.g.involution(), xi: self.xi })
        } else {
            Err(Error::Unsupported(format!(
                "the lift of ι is only modelled on the torus and on N, not at {}",
                self.g
            )))
        }
    }

    pub fn to_json(&self) -> MetaElementJson {
        MetaElementJson { g: self.g.to_json(), xi: self.xi }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetaElementJson {
    pub g: Vec<PadicJson>,
    pub xi: i8,
}

/// Subgroups whose splitting under `𝔰` can be tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subgroup {
    /// Upper unipotent matrices.
    N,
    /// `t(a, 1)`.
    A,
    /// Scalars `aI` with `a` a square.
    Z2,
    /// `{I, w_2}`.
    W,
    /// `GL_2(O)`.
    K,
}

impl Subgroup {
    pub const ALL: [Subgroup; 5] = [Subgroup::N, Subgroup::A, Subgroup::Z2, Subgroup::W, Subgroup::K];

    pub fn label(&self) -> &'static str {
        match self {
            Subgroup::N => "N",
            Subgroup::A => "A",
            Subgroup::Z2 => "Z^2",
            Subgroup::W => "W",
            Subgroup::K => "K",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplittingReport {
    pub subgroup: Subgroup,
    pub pairs_tested: usize,
    /// `σ₂ = 1` on every tested pair.
    pub trivial: bool,
    /// Expected answer when there is a closed-form predicate (`W`: `(-1,-1) = 1`).
    pub predicted: Option<bool>,
    pub counterexample: Option<(GL2Element, GL2Element)>,
}

impl SplittingReport {
    pub fn agrees_with_prediction(&self) -> bool {
        self.predicted.is_none_or(|p| p == self.trivial)
    }
}

/// Sample pairs from `subgroup` and test whether `σ₂` vanishes on them.
pub fn check_splitting<R: Rng + ?Sized>(
    subgroup: Subgroup,
    field: &FieldParams,
    samples: usize,
    rng: &mut R,
) -> Result<SplittingReport> {
    let pairs: Vec<(GL2Element, GL2Element)> = match subgroup {
        Subgroup::W => {
            let e = [GL2Element::identity(field), GL2Element::w2(field)];
            e.iter().flat_map(|x| e.iter().map(move |y| (*x, *y))).collect()
        }
        _ => (0..samples)
            .map(|_| (sample_subgroup(subgroup, field, rng), sample_subgroup(subgroup, field, rng)))
            .collect(),
    };
    let mut counterexample = None;
    for (g1, g2) in &pairs {
        if cocycle(g1, g2)? != 1 {
            counterexample = Some((*g1, *g2));
            break;
        }
    }
    let predicted = match subgroup {
        Subgroup::W => {
            let m1 = field.from_i64(-1);
            Some(hilbert(&m1, &m1)? == 1)
        }
        _ => None,
    };
    Ok(SplittingReport {
        subgroup,
        pairs_tested: pairs.len(),
        trivial: counterexample.is_none(),
        predicted,
        counterexample,
    })
}

pub fn sample_subgroup<R: Rng + ?Sized>(subgroup: Subgroup, field: &FieldParams, rng: &mut R) -> GL2Element {
    match subgroup {
        Subgroup::N => GL2Element::n(&sample_entry(field, rng, -2, 2)),
        Subgroup::A => GL2Element::t(&field.sample_nonzero(rng, -2, 2), &field.one()).expect("invertible"),
        Subgroup::Z2 => {
            let a = field.sample_nonzero(rng, -1, 1);
            GL2Element::scalar(&(a * a)).expect("invertible")
        }
        Subgroup::W => {
            if rng.gen_bool(0.5) {
                GL2Element::w2(field)
            } else {
                GL2Element::identity(field)
            }
        }
        Subgroup::K => sample_k(field, rng),
    }
}

/// Entry that is zero with probability 1/5, else `p^v u` with `v` in `vmin..=vmax`.
pub fn sample_entry<R: Rng + ?Sized>(field: &FieldParams, rng: &mut R, vmin: i64, vmax: i64) -> PadicNumber {
    if rng.gen_ratio(1, 5) {
        field.zero()
    } else {
        field.sample_nonzero(rng, vmin, vmax)
    }
}

/// Random element of `GL_2` with entry valuations in `[-2, 2]` whose
/// determinant is computed without cancellation.
pub fn sample_gl2<R: Rng + ?Sized>(field: &FieldParams, rng: &mut R) -> GL2Element {
    loop {
        let e: Vec<PadicNumber> = (0..4).map(|_| sample_entry(field, rng, -2, 2)).collect();
        let ad = e[0] * e[3];
        let bc = e[1] * e[2];
        if let Ok(det) = ad.add_exact(&-bc) {
            if !det.is_zero() {
                return GL2Element { m: [e[0], e[1], e[2], e[3]] };
            }
        }
    }
}

/// Random element of `K = GL_2(O)`.
pub fn sample_k<R: Rng + ?Sized>(field: &FieldParams, rng: &mut R) -> GL2Element {
    loop {
        let e: Vec<PadicNumber> = (0..4).map(|_| sample_entry(field, rng, 0, 2)).collect();
        let g = GL2Element { m: [e[0], e[1], e[2], e[3]] };
        if g.det().is_unit() {
            return g;
        }
    }
}
