use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symsq_core::local_symbols::hilbert;
use symsq_core::metaplectic::{
    cocycle, cocycle_bls, sample_gl2, sample_k, well_conditioned, GL2Element, MetaElement,
};
use symsq_core::{FieldParams, PadicNumber};

fn field(p: u64) -> FieldParams {
    FieldParams::new(p, 8).unwrap()
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7])
}

fn element(f: &FieldParams, v: i64, u: i64) -> PadicNumber {
    let p = f.p() as i64;
    f.from_parts(v, if u % p == 0 { u + 1 } else { u }).unwrap()
}

/// Draw a pair whose products are computed without lost digits.
fn conditioned_pair(f: &FieldParams, rng: &mut ChaCha8Rng) -> (GL2Element, GL2Element) {
    loop {
        let (a, b) = (sample_gl2(f, rng), sample_gl2(f, rng));
        if well_conditioned(&a, &b) {
            return (a, b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn torus_cocycle_is_a_single_symbol(p in prime(), a1v in -3i64..4, a1u in 1i64..999, b1v in -3i64..4, b1u in 1i64..999,
                                        a2v in -3i64..4, a2u in 1i64..999, b2v in -3i64..4, b2u in 1i64..999) {
        let f = field(p);
        let (a1, b1) = (element(&f, a1v, a1u), element(&f, b1v, b1u));
        let (a2, b2) = (element(&f, a2v, a2u), element(&f, b2v, b2u));
        let t1 = GL2Element::t(&a1, &b1).unwrap();
        let t2 = GL2Element::t(&a2, &b2).unwrap();
        prop_assert_eq!(cocycle(&t1, &t2).unwrap(), hilbert(&a1, &b2).unwrap());
        prop_assert_eq!(cocycle_bls(&t1, &t2).unwrap(), hilbert(&a1, &b2).unwrap());
    }

    #[test]
    fn unipotent_factors_are_invisible(p in prime(), seed in any::<u64>(), xv in -2i64..3, xu in 1i64..999) {
        let f = field(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sample_gl2(&f, &mut rng);
        let n = GL2Element::n(&element(&f, xv, xu));
        prop_assert_eq!(cocycle(&n, &g).unwrap(), 1);
        prop_assert_eq!(cocycle(&g, &n).unwrap(), 1);
    }

    #[test]
    fn cocycle_identity_and_bls_route(p in prime(), seed in any::<u64>()) {
        let f = field(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g1, g2) = conditioned_pair(&f, &mut rng);
        prop_assert_eq!(cocycle(&g1, &g2).unwrap(), cocycle_bls(&g1, &g2).unwrap());
        let g12 = g1.mul_exact(&g2).unwrap();
        let g3 = sample_gl2(&f, &mut rng);
        prop_assume!(well_conditioned(&g12, &g3) && well_conditioned(&g2, &g3));
        let g23 = g2.mul_exact(&g3).unwrap();
        prop_assume!(well_conditioned(&g1, &g23));
        let lhs = cocycle(&g1, &g2).unwrap() * cocycle(&g12, &g3).unwrap();
        let rhs = cocycle(&g1, &g23).unwrap() * cocycle(&g2, &g3).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cover_multiplication_is_associative(p in prime(), seed in any::<u64>(), x1 in prop::bool::ANY, x2 in prop::bool::ANY) {
        let f = field(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g1, g2) = conditioned_pair(&f, &mut rng);
        let g3 = sample_gl2(&f, &mut rng);
        let g12 = g1.mul_exact(&g2).unwrap();
        prop_assume!(well_conditioned(&g12, &g3) && well_conditioned(&g2, &g3));
        prop_assume!(well_conditioned(&g1, &g2.mul_exact(&g3).unwrap()));
        let e1 = MetaElement::new(g1, if x1 { 1 } else { -1 }).unwrap();
        let e2 = MetaElement::new(g2, if x2 { 1 } else { -1 }).unwrap();
        let e3 = MetaElement::section(g3);
        let left = e1.mul(&e2).unwrap().mul(&e3).unwrap();
        let right = e1.mul(&e2.mul(&e3).unwrap()).unwrap();
        prop_assert_eq!(left.xi, right.xi);
        prop_assert_eq!(left.g, right.g);
    }

    #[test]
    fn inverse_lifts_to_identity(p in prime(), seed in any::<u64>()) {
        let f = field(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sample_k(&f, &mut rng);
        let e = MetaElement::section(g);
        let prod = e.mul(&e.inverse().unwrap()).unwrap();
        prop_assert_eq!(prod, MetaElement::identity(&f));
    }

    #[test]
    fn torus_involution_is_multiplicative(p in prime(), a1u in 1i64..999, b1v in -2i64..3, b1u in 1i64..999, a2v in -2i64..3, a2u in 1i64..999, b2u in 1i64..999) {
        let f = field(p);
        let t1 = MetaElement::section(GL2Element::t(&element(&f, 1, a1u), &element(&f, b1v, b1u)).unwrap());
        let t2 = MetaElement::section(GL2Element::t(&element(&f, a2v, a2u), &element(&f, 0, b2u)).unwrap());
        let lhs = t1.mul(&t2).unwrap().involution().unwrap();
        let rhs = t1.involution().unwrap().mul(&t2.involution().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
