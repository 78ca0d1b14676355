use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use symsq_core::bessel::{bessel_eval, BesselQuery};
use symsq_core::local_symbols::{AdditiveChar, MultChar};
use symsq_core::symsq::{gamma_sym2, GL2Rep};
use symsq_core::tate::{tate_triple, tate_triple_oracle};
use symsq_core::FieldParams;

fn tate(c: &mut Criterion) {
    let f = FieldParams::new(5, 8).unwrap();
    let psi = AdditiveChar::standard(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [0, 2] {
        let chi = MultChar::random_of_conductor(5, n, num_one(), &mut rng);
        c.bench_function(&format!("tate closed form n={n}"), |b| b.iter(|| black_box(tate_triple(&chi, &psi))));
        c.bench_function(&format!("tate oracle n={n}"), |b| b.iter(|| black_box(tate_triple_oracle(&chi, &psi))));
    }
    let a = MultChar::random_of_conductor(5, 1, num_one(), &mut rng);
    let b2 = MultChar::random_of_conductor(5, 2, num_one(), &mut rng);
    let pi = GL2Rep::principal_series(a, b2).unwrap();
    let chi = MultChar::random_of_conductor(5, 1, num_one(), &mut rng);
    c.bench_function("gamma sym2", |b| b.iter(|| black_box(gamma_sym2(&pi, &chi, &psi))));
}

fn num_one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn bessel(c: &mut Criterion) {
    let mut group = c.benchmark_group("bessel");
    group.sample_size(20);
    for (p, v) in [(3, -14), (3, -24), (5, -20)] {
        let f = FieldParams::new(p, 16).unwrap();
        let psi = AdditiveChar::standard(&f);
        let q = BesselQuery::new(f.from_parts(v, 1).unwrap(), 1).unwrap();
        group.bench_function(format!("p={p} v={v}"), |b| b.iter(|| black_box(bessel_eval(&q, &psi))));
    }
    group.finish();
}

criterion_group!(benches, tate, bessel);
criterion_main!(benches);
