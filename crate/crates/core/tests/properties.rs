use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use laxcat::factorize::build_splitting_category;
use laxcat::format::{parse, serialize, CategoryDoc, Document, FunctorDoc, PreordDoc};
use laxcat::grp2::{enumerate_homs, small_groups};
use laxcat::laxepi::is_lax_epi;
use laxcat::orders::{coinserter_preord, is_lax_epi_preord, verify_coinserter_universal};
use laxcat::random::{
    random_category, random_equivalence, random_functor_between_random, random_monotone, random_preord, random_vcat,
    random_vfunctor_into, Bounds,
};
use laxcat::splitfib::is_dsb;
use laxcat::vquant::{is_vlax_epi_density, is_vlax_epi_meet, Frame};
use laxcat::Caps;

const SMALL: Bounds = Bounds {
    max_objects: 4,
    max_morphisms: 9,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative_and_unital(seed: u64) {
        let c = random_category(&mut rng(seed), SMALL);
        for f in c.morphisms() {
            prop_assert_eq!(c.compose(c.identity(c.src(f)), f), f);
            prop_assert_eq!(c.compose(f, c.identity(c.dst(f))), f);
            for g in c.morphisms().filter(|&g| c.src(g) == c.dst(f)) {
                for h in c.morphisms().filter(|&h| c.src(h) == c.dst(g)) {
                    prop_assert_eq!(c.compose(c.compose(f, g), h), c.compose(f, c.compose(g, h)));
                }
            }
        }
    }

    #[test]
    fn category_documents_round_trip(seed: u64) {
        let c = random_category(&mut rng(seed), SMALL);
        let doc = Document::Category(CategoryDoc::encode("c", &c));
        let text = serialize(&doc);
        let back = parse(&text).unwrap();
        prop_assert_eq!(serialize(&back), text);
        let Document::Category(d) = back else { unreachable!() };
        prop_assert_eq!(d.decode("").unwrap().to_raw(), c.to_raw());
    }

    #[test]
    fn functor_documents_round_trip(seed: u64) {
        let f = random_functor_between_random(&mut rng(seed), SMALL);
        let doc = FunctorDoc::encode("f", "a", "b", &f);
        let again = doc.decode("").unwrap();
        prop_assert_eq!(again.object_map(), f.object_map());
        prop_assert_eq!(again.morphism_map(), f.morphism_map());
    }

    #[test]
    fn lax_epi_verdicts_survive_a_recheck(seed: u64) {
        let f = random_functor_between_random(&mut rng(seed), SMALL);
        let v = is_lax_epi(&f, &Caps::default()).unwrap();
        prop_assert!(v.recheck(&f));
    }

    #[test]
    fn equivalences_are_lax_epi(seed: u64) {
        let mut r = rng(seed);
        let c = random_category(&mut r, SMALL);
        let e = random_equivalence(&mut r, &c);
        prop_assert!(is_lax_epi(&e, &Caps::default()).unwrap().lax_epi);
    }

    #[test]
    fn right_factor_is_a_dsb_and_factors_recompose(seed: u64) {
        let f = random_functor_between_random(&mut rng(seed), SMALL);
        let fact = build_splitting_category(&f, &Caps::default()).unwrap();
        prop_assert_eq!(fact.left.then(&fact.right).unwrap(), f);
        prop_assert!(is_dsb(&fact.right, &Caps::default()).unwrap().dsb);
    }

    #[test]
    fn surjective_monotone_maps_are_lax_epi(seed: u64, n in 1usize..5, m in 1usize..5) {
        let mut r = rng(seed);
        let p = Arc::new(random_preord(&mut r, n, 0.3));
        let q = Arc::new(random_preord(&mut r, m, 0.3));
        let f = random_monotone(&mut r, &p, &q);
        if f.is_surjective() {
            prop_assert!(is_lax_epi_preord(&f));
        }
    }

    #[test]
    fn preorder_coinserters_are_universal(seed: u64, n in 1usize..4, m in 1usize..5) {
        let mut r = rng(seed);
        let a = Arc::new(random_preord(&mut r, n, 0.3));
        let b = Arc::new(random_preord(&mut r, m, 0.3));
        let f = random_monotone(&mut r, &a, &b);
        let g = random_monotone(&mut r, &a, &b);
        let (_, q) = coinserter_preord(&f, &g).unwrap();
        prop_assert!(is_lax_epi_preord(&q));
        let probes: Vec<_> = (0..3)
            .map(|_| Arc::new(random_preord(&mut r, 3, 0.4)))
            .collect();
        prop_assert!(verify_coinserter_universal(&f, &g, &q, &probes));
    }

    #[test]
    fn preorder_documents_round_trip(seed: u64, n in 1usize..6) {
        let p = random_preord(&mut rng(seed), n, 0.35);
        let doc = PreordDoc::encode("p", &p);
        prop_assert_eq!(&*doc.decode("").unwrap(), &p);
    }

    #[test]
    fn density_and_meet_tests_agree(seed: u64, which in 0usize..4, n in 1usize..4, k in 1usize..3) {
        let mut r = rng(seed);
        let v = Frame::all_small().swap_remove(which % Frame::all_small().len());
        let y = Arc::new(random_vcat(&mut r, &v, n));
        let j = random_vfunctor_into(&mut r, &y, k);
        let dense = is_vlax_epi_density(&j);
        prop_assert_eq!(dense, is_vlax_epi_meet(&j, &Caps::default()).unwrap());
        prop_assert_eq!(dense, is_vlax_epi_density(&j.opposite()));
    }
}

#[test]
fn frame_arrows_are_right_adjoint_to_meets() {
    for v in Frame::all_small() {
        for a in 0..v.len() {
            for x in 0..v.len() {
                for y in 0..v.len() {
                    assert_eq!(v.leq(v.meet(a, x), y), v.leq(x, v.arrow(a, y)), "{}", v.name());
                }
            }
        }
    }
}

#[test]
fn homomorphisms_compose_to_homomorphisms() {
    let groups: Vec<_> = small_groups().into_iter().filter(|g| g.order() <= 6).collect();
    for a in &groups {
        for b in &groups {
            for f in enumerate_homs(a, b) {
                for c in &groups {
                    for g in enumerate_homs(b, c) {
                        let h = f.then(&g).unwrap();
                        for x in 0..a.order() {
                            for y in 0..a.order() {
                                assert_eq!(h.apply(a.mul(x, y)), c.mul(h.apply(x), h.apply(y)));
                            }
                        }
                    }
                }
            }
        }
    }
}
