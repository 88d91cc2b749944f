use latgate::catalog::standard_catalog;
use latgate::charvec::elkies_verdict;
use latgate::lattice::random_unimodular;
use latgate::manifold::{
    choose_line_bundle, donaldson_verdict, reduce_to_b1_zero, sw_boundary_number,
    virtual_dimension, weitzenbock_bound, ManifoldError,
};
use latgate::{catalog_get, Definiteness, ManifoldDescriptor, ModuliVerdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rat() -> impl Strategy<Value = BigRational> {
    (-1000i64..=1000, 1i64..=60).prop_map(|(a, b)| BigRational::new(a.into(), b.into()))
}

fn nonneg() -> impl Strategy<Value = BigRational> {
    (0i64..=1000, 1i64..=60).prop_map(|(a, b)| BigRational::new(a.into(), b.into()))
}

const NEGATED: &[&str] = &["Zn:2", "Zn:5", "Zn:9", "E8", "E8+Z1", "E8+Z3", "D12plus"];

proptest! {
    #[test]
    fn bound_properties(s in rat(), p in nonneg(), ds in nonneg(), dp in nonneg()) {
        let b = weitzenbock_bound(&s, &p).unwrap();
        let zero = BigRational::zero();
        let two = BigRational::from_integer(BigInt::from(2));
        prop_assert!(b >= zero);
        prop_assert!(weitzenbock_bound(&s, &(&p + &dp)).unwrap() >= b);
        prop_assert!(weitzenbock_bound(&(&s + &ds), &p).unwrap() <= b);
        prop_assert_eq!(b.is_zero(), s >= &two * &p);
        // At q = B > 0 the inequality 0 <= -(s/2) q - q^2/4 + p q is tight.
        if !b.is_zero() {
            let four = BigRational::from_integer(BigInt::from(4));
            let lhs = -(&s / &two) * &b - &b * &b / &four + &p * &b;
            prop_assert!(lhs.is_zero());
        }
    }

    #[test]
    fn negative_p_rejected(s in rat(), p in (1i64..=100)) {
        let p = BigRational::from_integer(BigInt::from(-p));
        prop_assert_eq!(weitzenbock_bound(&s, &p), Err(ManifoldError::NegativePerturbationNorm));
    }

    #[test]
    fn verdict_is_basis_and_surgery_invariant(
        id in prop::sample::select(NEGATED),
        b1 in 0u64..=3,
        seed in any::<u64>(),
    ) {
        let g = catalog_get(id).unwrap().gram.negate();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unimodular(&mut rng, g.rank(), 2);
        let h = g.basis_change(&u).unwrap();
        let a = donaldson_verdict(&ManifoldDescriptor::new(b1, g.clone())).unwrap();
        let b = donaldson_verdict(&ManifoldDescriptor::new(b1, h)).unwrap();
        prop_assert_eq!(&a.verdict, &b.verdict);
        prop_assert_eq!((a.k, a.virtual_dim, a.c1_squared), (b.k, b.virtual_dim, b.c1_squared));

        let (reduced, _) = reduce_to_b1_zero(&ManifoldDescriptor::new(b1, g.clone())).unwrap();
        let c = donaldson_verdict(&reduced).unwrap();
        prop_assert_eq!(&a.verdict, &c.verdict);
        let realizable = a.verdict == ModuliVerdict::Realizable;
        prop_assert_eq!(realizable, elkies_verdict(&g.negate()).unwrap().is_identity());
    }

    #[test]
    fn boundary_number_is_one(k in 1i64..=200) {
        let s = sw_boundary_number(k).unwrap();
        prop_assert_eq!(s.value, 1);
        prop_assert!(s.nonzero);
    }
}

#[test]
fn dimension_identity_over_catalog() {
    for e in standard_catalog() {
        let g = e.gram.negate();
        if g.definiteness() != Definiteness::NegativeDefinite || !g.is_unimodular() {
            continue;
        }
        for b1 in 0..=3u64 {
            let m = ManifoldDescriptor::new(b1, g.clone());
            let l = choose_line_bundle(&m).unwrap();
            let sigma = m.sigma().unwrap();
            assert_eq!(sigma, -(g.rank() as i64));
            // 2χ + 3σ = 4 - 4 b1 - b2 for negative definite forms
            assert_eq!(2 * m.chi() + 3 * sigma, 4 - 4 * b1 as i64 - g.rank() as i64);
            assert_eq!(l.c1_squared, -(g.rank() as i64) + 8 * l.k);
            let d = virtual_dimension(&m, &l).unwrap();
            assert_eq!(d, 2 * l.k - 1 + b1 as i64, "{} b1={b1}", e.id);
        }
    }
}

#[test]
fn surgery_preserves_everything_but_b1() {
    for e in standard_catalog() {
        for b1 in 0..=4u64 {
            let m = ManifoldDescriptor::new(b1, e.gram.clone());
            let (out, certs) = reduce_to_b1_zero(&m).unwrap();
            assert_eq!(out.form, e.gram);
            assert_eq!(out.b1, 0);
            assert_eq!(certs.len() as u64, b1);
            for (i, c) in certs.iter().enumerate() {
                assert_eq!(c.chi_after, m.chi() + 2 * (i as i64 + 1));
                assert_eq!(c.b2_before, c.b2_after);
                assert!(c.sequences.iter().all(|s| s.alternating_sum == 0));
            }
        }
    }
}
