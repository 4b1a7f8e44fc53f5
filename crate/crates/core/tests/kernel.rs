mod common;

use std::time::Instant;

use common::{check_against_oracle, oracle_hilbert_function, random_ideal};
use fsing::kernel::{is_groebner_basis, parse_polynomial, IdealHandle, PolyRing, Polynomial};
use proptest::prelude::*;

#[test]
fn membership_matches_graded_linear_algebra() {
    let start = Instant::now();
    let mut compared = 0;
    for seed in 0..120 {
        let ideal = random_ideal(seed);
        compared += check_against_oracle(&ideal, 8, 2, seed ^ 0xabcd).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
    assert!(compared > 1000, "only {compared} comparisons");
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn hilbert_numerator_reproduces_the_hilbert_function() {
    for seed in 200..240 {
        let ideal = random_ideal(seed);
        let handle = IdealHandle::new(&ideal.ring, ideal.gens.clone());
        let series = handle.hilbert_numerator().unwrap().series(ideal.ring.weights(), 8);
        for (d, &h) in series.iter().enumerate() {
            assert_eq!(
                h as usize,
                oracle_hilbert_function(&ideal.ring, &ideal.gens, d as u32),
                "seed {seed} degree {d}"
            );
        }
    }
}

#[test]
fn weighted_piece_matches_oracle() {
    let ring = PolyRing::new(
        fsing::kernel::FieldSpec::new(2).unwrap(),
        vec!["x".into(), "y".into(), "z".into()],
        vec![2, 2, 3],
        fsing::kernel::MonomialOrder::WeightedGrevlex,
    )
    .unwrap();
    let f = parse_polynomial(&ring, "z^2 + x^3 + y^3").unwrap();
    let g = parse_polynomial(&ring, "x*y").unwrap();
    let gens = vec![f, g];
    let handle = IdealHandle::new(&ring, gens.clone());
    for d in 0..=14 {
        let standard = handle.graded_piece_basis(d).unwrap().len();
        assert_eq!(standard, oracle_hilbert_function(&ring, &gens, d), "degree {d}");
    }
}

fn ideal_strategy() -> impl Strategy<Value = u64> {
    0u64..10_000
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn basis_is_groebner_and_contains_generators(seed in ideal_strategy()) {
        let ideal = random_ideal(seed);
        let handle = IdealHandle::new(&ideal.ring, ideal.gens.clone());
        let gb = handle.gb().unwrap();
        prop_assert!(is_groebner_basis(gb));
        for g in &ideal.gens {
            prop_assert!(handle.contains(g).unwrap());
        }
    }

    #[test]
    fn normal_form_is_idempotent_and_congruent(seed in ideal_strategy(), d in 0u32..6) {
        let ideal = random_ideal(seed);
        let handle = IdealHandle::new(&ideal.ring, ideal.gens.clone());
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let f = common::random_form(&ideal.ring, &mut rng, d, 0.7);
        let nf = handle.normal_form(&f).unwrap();
        prop_assert_eq!(handle.normal_form(&nf).unwrap(), nf.clone());
        prop_assert!(handle.contains(&f.try_sub(&nf).unwrap()).unwrap());
        // no term of the normal form is a leading monomial multiple
        let lms = handle.leading_monomials().unwrap();
        for (m, _) in nf.terms() {
            prop_assert!(!lms.iter().any(|l| l.divides(m)));
        }
    }

    #[test]
    fn basis_does_not_depend_on_generator_order(seed in ideal_strategy()) {
        let ideal = random_ideal(seed);
        let a = IdealHandle::new(&ideal.ring, ideal.gens.clone());
        let mut rev = ideal.gens.clone();
        rev.reverse();
        let b = IdealHandle::new(&ideal.ring, rev);
        prop_assert_eq!(a.gb().unwrap(), b.gb().unwrap());
    }

    #[test]
    fn colon_and_intersection_laws(seed in ideal_strategy()) {
        let ideal = random_ideal(seed);
        let i = IdealHandle::new(&ideal.ring, ideal.gens.clone());
        let x = Polynomial::var(&ideal.ring, 0);
        // I ⊆ I : x, and x (I : x) ⊆ I
        let colon = i.colon_poly(&x).unwrap();
        prop_assert!(colon.contains_ideal(&i).unwrap());
        for g in colon.gb().unwrap() {
            prop_assert!(i.contains(&(g * &x)).unwrap());
        }
        // I ∩ (x) ⊆ I and ⊆ (x)
        let xi = IdealHandle::new(&ideal.ring, vec![x.clone()]);
        let meet = i.intersect(&xi).unwrap();
        prop_assert!(i.contains_ideal(&meet).unwrap());
        prop_assert!(xi.contains_ideal(&meet).unwrap());
    }
}
