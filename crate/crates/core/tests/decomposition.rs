use std::time::{Duration, Instant};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wreath_core::commutator::{
    decompose_bk_with_gk_witness, decompose_derived_wreath, decompose_gk, residual_product,
};
use wreath_core::membership::{in_gk, random_member_with};
use wreath_core::{Error, Oracle, SubgroupKind, SubgroupSpec, TreeAutomorphism, WreathSignature};

fn spec(kind: SubgroupKind, sig: &WreathSignature) -> SubgroupSpec {
    SubgroupSpec::new(kind, sig.clone()).unwrap()
}

#[test]
fn decomposable_elements_are_exactly_the_derived_subgroup() {
    let o = Oracle::default();
    for arities in [
        vec![2, 2],
        vec![2, 2, 2],
        vec![3, 3],
        vec![2, 3],
        vec![3, 2],
        vec![2, 2, 3],
    ] {
        let sig = WreathSignature::new(arities).unwrap();
        let derived = o.enumerate(&spec(SubgroupKind::Derived, &sig)).unwrap();
        for g in TreeAutomorphism::all(&sig) {
            match decompose_derived_wreath(&g) {
                Ok(w) => {
                    assert!(derived.contains(&g), "{g:?}");
                    assert_eq!(w.target, g);
                    w.verify().unwrap();
                }
                Err(Error::NotInSubgroup { .. }) => assert!(!derived.contains(&g), "{g:?}"),
                Err(e) => panic!("{g:?}: {e}"),
            }
        }
    }
}

#[test]
fn b3_derived_elements_have_gk_left_witnesses() {
    let o = Oracle::default();
    let sig = WreathSignature::binary(3).unwrap();
    let derived = o.enumerate(&spec(SubgroupKind::Derived, &sig)).unwrap();
    assert_eq!(derived.len(), 16);
    for w in derived.iter() {
        let wit = decompose_bk_with_gk_witness(w).unwrap();
        assert!(in_gk(&wit.left).unwrap());
        assert_eq!(wit.left.commutator(&wit.right).unwrap(), *w);
    }
}

#[test]
fn g3_derived_elements_have_gk_witnesses() {
    let o = Oracle::default();
    let sig = WreathSignature::binary(3).unwrap();
    let derived = o
        .enumerate(&spec(SubgroupKind::SylowADerived, &sig))
        .unwrap();
    assert_eq!(derived.len(), 8);
    for w in derived.iter() {
        let wit = decompose_gk(w).unwrap();
        assert!(in_gk(&wit.left).unwrap() && in_gk(&wit.right).unwrap());
        assert_eq!(wit.left.commutator(&wit.right).unwrap(), *w);
    }
}

#[test]
fn depth_two_sylow_a_has_trivial_derived_subgroup() {
    let sig = WreathSignature::binary(2).unwrap();
    let ok: Vec<_> = TreeAutomorphism::all(&sig)
        .filter(|g| decompose_gk(g).is_ok())
        .collect();
    assert_eq!(ok, vec![TreeAutomorphism::identity(&sig)]);
}

#[test]
fn product_of_five_commutators_at_depth_eight() {
    let sig = WreathSignature::binary(8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut w = TreeAutomorphism::identity(&sig);
    for _ in 0..5 {
        let a = TreeAutomorphism::random_with(&sig, &mut rng);
        let c = TreeAutomorphism::random_with(&sig, &mut rng);
        w = &w * &a.commutator(&c).unwrap();
    }
    let start = Instant::now();
    let wit = decompose_derived_wreath(&w).unwrap();
    assert!(start.elapsed() < Duration::from_secs(1));
    assert_eq!(wit.left.commutator(&wit.right).unwrap(), w);

    // same in a mixed tower
    let sig = WreathSignature::new(vec![3, 2, 5, 2, 3, 2]).unwrap();
    let mut w = TreeAutomorphism::identity(&sig);
    for _ in 0..5 {
        let a = TreeAutomorphism::random_with(&sig, &mut rng);
        let c = TreeAutomorphism::random_with(&sig, &mut rng);
        w = &w * &a.commutator(&c).unwrap();
    }
    decompose_derived_wreath(&w).unwrap().verify().unwrap();
}

#[test]
fn scaling_to_depth_twelve() {
    let sig = WreathSignature::binary(12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for kind in [SubgroupKind::Derived, SubgroupKind::SylowADerived] {
        for _ in 0..5 {
            let w = random_member_with(&spec(kind, &sig), &mut rng);
            let start = Instant::now();
            let wit = match kind {
                SubgroupKind::Derived => decompose_bk_with_gk_witness(&w).unwrap(),
                _ => decompose_gk(&w).unwrap(),
            };
            assert!(start.elapsed() < Duration::from_secs(1));
            wit.verify().unwrap();
        }
    }
}

#[test]
fn residual_of_non_derived_element_is_not_derived() {
    let sig = WreathSignature::uniform(3, 2).unwrap();
    let w = TreeAutomorphism::parse(&sig, "0|100").unwrap();
    assert!(!residual_product(&w).unwrap().is_identity());
    assert!(decompose_derived_wreath(&w).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_derived_elements_decompose(
        arities in prop::collection::vec(2u32..=4, 1..=5),
        seed in any::<u64>(),
    ) {
        let sig = WreathSignature::new(arities).unwrap();
        let w = random_member_with(&spec(SubgroupKind::Derived, &sig), &mut ChaCha8Rng::seed_from_u64(seed));
        let wit = decompose_derived_wreath(&w).unwrap();
        prop_assert_eq!(wit.left.commutator(&wit.right).unwrap(), w);
    }

    #[test]
    fn random_gk_derived_elements_decompose(depth in 2usize..=9, seed in any::<u64>()) {
        let sig = WreathSignature::binary(depth).unwrap();
        let w = random_member_with(&spec(SubgroupKind::SylowADerived, &sig), &mut ChaCha8Rng::seed_from_u64(seed));
        let wit = decompose_gk(&w).unwrap();
        prop_assert!(in_gk(&wit.left).unwrap() && in_gk(&wit.right).unwrap());
        prop_assert_eq!(wit.left.commutator(&wit.right).unwrap(), w);
    }
}
