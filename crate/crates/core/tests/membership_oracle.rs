use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wreath_core::membership::{
    in_derived_bk, in_derived_gk, in_derived_gk_by_index, in_derived_wreath, in_gk,
    random_member_with,
};
use wreath_core::oracle::leaf_sign;
use wreath_core::{Oracle, SubgroupKind, SubgroupSpec, TreeAutomorphism, WreathSignature};

type Predicate<'a> = Box<dyn Fn(&TreeAutomorphism) -> bool + 'a>;

fn b(k: usize) -> WreathSignature {
    WreathSignature::binary(k).unwrap()
}

fn spec(kind: SubgroupKind, sig: &WreathSignature) -> SubgroupSpec {
    SubgroupSpec::new(kind, sig.clone()).unwrap()
}

#[test]
fn derived_wreath_matches_oracle_on_small_towers() {
    let o = Oracle::default();
    for arities in [
        vec![3, 3],
        vec![2, 3],
        vec![3, 2],
        vec![2, 2, 3],
        vec![4, 2],
        vec![5, 2],
    ] {
        let sig = WreathSignature::new(arities).unwrap();
        let full = o.enumerate(&spec(SubgroupKind::Full, &sig)).unwrap();
        let derived = o.derived_closure(&full).unwrap();
        for g in full.iter() {
            assert_eq!(in_derived_wreath(g), derived.contains(g), "{g:?}");
        }
    }
}

#[test]
fn section_product_order_does_not_matter() {
    // W' membership depends only on the product of sections up to order.
    let o = Oracle::default();
    let sig = WreathSignature::new(vec![3, 2, 2]).unwrap();
    let tail = sig.tail().unwrap();
    let tail_derived = o.enumerate(&spec(SubgroupKind::Derived, tail)).unwrap();
    let orders = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    for seed in 0..500 {
        let g = TreeAutomorphism::random(&sig, seed);
        let s = g.sections();
        let verdicts: Vec<bool> = orders
            .iter()
            .map(|o| tail_derived.contains(&(&(&s[o[0]] * &s[o[1]]) * &s[o[2]])))
            .collect();
        assert!(verdicts.iter().all(|&v| v == verdicts[0]));
    }
}

#[test]
fn chain_and_closure_exhaustive() {
    for k in 1..=4 {
        let sig = b(k);
        let full: Vec<_> = TreeAutomorphism::all(&sig).collect();
        for g in &full {
            let bd = in_derived_bk(g).unwrap();
            let gk = in_gk(g).unwrap();
            if bd {
                assert!(gk, "B_k' is contained in G_k: {g}");
            }
            if k >= 2 && in_derived_gk(g).unwrap() {
                assert!(bd && gk, "{g}");
            }
        }
        if k > 3 {
            continue;
        }
        let predicates: Vec<(&str, Predicate)> = vec![
            ("derived", Box::new(|g| in_derived_bk(g).unwrap())),
            ("sylow-a", Box::new(|g| in_gk(g).unwrap())),
            (
                "sylow-a-derived",
                Box::new(move |g| k >= 2 && in_derived_gk(g).unwrap()),
            ),
        ];
        for (name, pred) in predicates {
            let members: Vec<_> = full.iter().filter(|g| pred(g)).collect();
            if members.is_empty() {
                continue;
            }
            for x in &members {
                assert!(pred(&x.inverse()), "{name} not closed under inverse");
                for y in &members {
                    assert!(pred(&(*x * *y)), "{name} not closed under products");
                }
            }
        }
    }
}

#[test]
fn accepted_counts_match_subgroup_order() {
    for k in 1..=4 {
        let sig = b(k);
        let full: Vec<_> = TreeAutomorphism::all(&sig).collect();
        for kind in SubgroupKind::ALL {
            let Ok(s) = SubgroupSpec::new(kind, sig.clone()) else {
                continue;
            };
            let count = full.iter().filter(|g| s.contains(g).unwrap()).count();
            assert_eq!(
                BigUint::from(count),
                s.order().unwrap(),
                "{kind} at depth {k}"
            );
        }
    }
}

#[test]
fn even_leaf_action_is_gk() {
    for k in 1..=4 {
        for g in TreeAutomorphism::all(&b(k)) {
            assert_eq!(in_gk(&g).unwrap(), leaf_sign(&g) == 1, "{g}");
        }
    }
}

#[test]
fn index_characterization_agrees_on_samples() {
    // Draws from every kind plus single-label perturbations, so both answers occur often.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut agreements = [0usize; 2];
    for i in 0..100_000u64 {
        let k = 2 + (i % 7) as usize;
        let sig = b(k);
        let kind = SubgroupKind::ALL[(i / 7 % 4) as usize];
        let mut g = random_member_with(&spec(kind, &sig), &mut rng);
        if i % 3 == 0 {
            let pos = rng.gen_range(0..sig.label_count());
            let mut labels = g.labels().to_vec();
            labels[pos] ^= 1;
            let levels: Vec<Vec<u32>> = (0..k)
                .map(|l| {
                    let start: usize = (0..l).map(|m| sig.level_size(m)).sum();
                    labels[start..start + sig.level_size(l)].to_vec()
                })
                .collect();
            g = TreeAutomorphism::from_levels(&sig, &levels).unwrap();
        }
        let a = in_derived_gk(&g).unwrap();
        assert_eq!(a, in_derived_gk_by_index(&g).unwrap(), "{g:?}");
        agreements[usize::from(a)] += 1;
    }
    assert!(
        agreements[0] > 1000 && agreements[1] > 1000,
        "{agreements:?}"
    );
}

#[test]
fn gk_is_normal_in_bk() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..10_000 {
        let sig = b(1 + i % 8);
        let g = random_member_with(&spec(SubgroupKind::SylowA, &sig), &mut rng);
        let h = TreeAutomorphism::random_with(&sig, &mut rng);
        assert!(in_gk(&g.conjugate(&h).unwrap()).unwrap());
    }
}

#[test]
fn squares_land_in_derived_subgroups() {
    for k in 1..=4 {
        for g in TreeAutomorphism::all(&b(k)) {
            let sq = g.pow(2);
            assert!(in_derived_bk(&sq).unwrap(), "{g}");
            if k >= 2 && in_gk(&g).unwrap() {
                assert!(in_derived_gk(&sq).unwrap(), "{g}");
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..10_000 {
        let sig = b(2 + i % 7);
        let g = random_member_with(&spec(SubgroupKind::SylowA, &sig), &mut rng);
        assert!(in_derived_gk(&g.pow(2)).unwrap());
        let h = TreeAutomorphism::random_with(&sig, &mut rng);
        assert!(in_derived_bk(&h.pow(2)).unwrap());
    }
}

#[test]
fn samplers_agree_with_predicates() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..10_000 {
        let depth = 1 + i % 6;
        for kind in SubgroupKind::ALL {
            let Ok(s) = SubgroupSpec::new(kind, b(depth)) else {
                continue;
            };
            let g = random_member_with(&s, &mut rng);
            assert!(s.contains(&g).unwrap(), "{kind}: {g}");
        }
    }
    for arities in [vec![3, 3, 3], vec![2, 3, 4], vec![5, 2]] {
        let s = spec(
            SubgroupKind::Derived,
            &WreathSignature::new(arities).unwrap(),
        );
        for _ in 0..1000 {
            let g = random_member_with(&s, &mut rng);
            assert!(in_derived_wreath(&g), "{g:?}");
        }
    }
}

#[test]
fn non_binary_derived_sampler_is_roughly_uniform() {
    // (C_3 ≀ C_3)' has 9 elements
    let s = spec(
        SubgroupKind::Derived,
        &WreathSignature::uniform(3, 2).unwrap(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 9000;
    let mut counts = std::collections::HashMap::new();
    for _ in 0..n {
        *counts
            .entry(random_member_with(&s, &mut rng))
            .or_insert(0usize) += 1;
    }
    assert_eq!(counts.len(), 9);
    let p = 1.0 / 9.0;
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    for c in counts.values() {
        assert!((*c as f64 - n as f64 * p).abs() < 5.0 * sigma);
    }
}
