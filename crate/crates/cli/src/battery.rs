//! Seeded default inputs for the subcommands.

use num_complex::Complex64;
use rand::Rng;
use symsq_core::local_symbols::{MultChar, Rotation};
use symsq_core::symsq::GL2Rep;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_unimodular<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn random_value<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(rng.gen_range(0.4..2.5), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Conductors `0..=2` against `χ(ϖ) ∈ {1, random unimodular, q^{-1/3}}`.
pub fn tate_characters<R: Rng>(p: u64, rng: &mut R) -> Vec<MultChar> {
    let mut out = Vec::new();
    for n in 0..=2u32 {
        for z in [c(1.0, 0.0), random_unimodular(rng), c((p as f64).powf(-1.0 / 3.0), 0.0)] {
            out.push(MultChar::random_of_conductor(p, n, z, rng));
        }
    }
    out
}

pub fn principal_series<R: Rng>(p: u64, rng: &mut R) -> Vec<GL2Rep> {
    let mut out = vec![GL2Rep::principal_series(MultChar::trivial(p), MultChar::trivial(p)).expect("same field")];
    for (n1, n2) in [(0u32, 0u32), (0, 1), (1, 1), (1, 2), (2, 2)] {
        for _ in 0..2 {
            let a = MultChar::random_of_conductor(p, n1, random_value(rng), rng);
            let b = MultChar::random_of_conductor(p, n2, random_value(rng), rng);
            out.push(GL2Rep::principal_series(a, b).expect("same field"));
        }
    }
    let eta = MultChar::random_of_conductor(p, 1, c(1.0, 0.0), rng);
    out.push(GL2Rep::principal_series(eta.twist_nu(c(0.2, 0.0)), eta.inv()).expect("same field"));
    out
}

pub fn steinberg<R: Rng>(p: u64, rng: &mut R) -> Vec<GL2Rep> {
    let mut out = vec![GL2Rep::steinberg(MultChar::trivial(p))];
    for n in 0..=2 {
        out.push(GL2Rep::steinberg(MultChar::random_of_conductor(p, n, random_value(rng), rng)));
    }
    let quadratic = MultChar::new(p, Rotation::new(1, 2), random_value(rng)).expect("valid prime");
    out.push(GL2Rep::steinberg(quadratic));
    out
}
