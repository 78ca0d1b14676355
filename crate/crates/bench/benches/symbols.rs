use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use symsq_core::local_symbols::{hilbert, hilbert_oracle, mu_psi, AdditiveChar};
use symsq_core::metaplectic::{cocycle, cocycle_bls, sample_gl2};
use symsq_core::FieldParams;

fn symbols(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [3, 7] {
        let f = FieldParams::new(p, 8).unwrap();
        let pairs: Vec<_> = (0..64).map(|_| (f.sample_nonzero(&mut rng, -3, 3), f.sample_nonzero(&mut rng, -3, 3))).collect();
        c.bench_function(&format!("hilbert p={p}"), |b| {
            b.iter(|| pairs.iter().map(|(x, y)| hilbert(x, y).unwrap() as i32).sum::<i32>())
        });
        c.bench_function(&format!("hilbert_oracle p={p}"), |b| {
            b.iter(|| pairs[..8].iter().map(|(x, y)| hilbert_oracle(x, y).unwrap() as i32).sum::<i32>())
        });
        let psi = AdditiveChar::standard(&f);
        c.bench_function(&format!("mu_psi p={p}"), |b| {
            b.iter(|| pairs[..8].iter().map(|(x, _)| mu_psi(x, &psi).unwrap().re).sum::<f64>())
        });
    }
}

fn cocycles(c: &mut Criterion) {
    let f = FieldParams::new(5, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    c.bench_function("cocycle kubota", |b| {
        b.iter_batched(
            || (sample_gl2(&f, &mut rng), sample_gl2(&f, &mut rng)),
            |(g1, g2)| black_box(cocycle(&g1, &g2)),
            BatchSize::SmallInput,
        )
    });
    c.bench_function("cocycle bls", |b| {
        b.iter_batched(
            || (sample_gl2(&f, &mut rng), sample_gl2(&f, &mut rng)),
            |(g1, g2)| black_box(cocycle_bls(&g1, &g2)),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, symbols, cocycles);
criterion_main!(benches);
