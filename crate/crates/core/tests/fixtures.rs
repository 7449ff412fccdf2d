//! Verdicts on the shipped corpus.

use std::sync::Arc;

use laxcat::corpus;
use laxcat::factorize::{build_splitting_category, diagonal_fill_in, enumerate_diagonals, verify_orthogonal};
use laxcat::fincat::{enumerate_nat_trans, inserter, validate_nat_trans, FinCat};
use laxcat::format::{DocError, Value};
use laxcat::grp2::{enumerate_homs, hcompose_2cells, laxepi_condition_probe, small_groups, validate_2cell, GroupHom};
use laxcat::laxepi::{comma_over_morphism, is_lax_epi, CommaAtlas, LaxEpiWitness, Triple};
use laxcat::orders::{
    coinserter_preord, doubling, enumerate_monotone, inserter_preord, is_inserter_of, is_lax_epi_preord,
    is_lax_strong_mono_preord, monotone_as_functor, pushout_preord, MonotoneMap,
};
use laxcat::splitfib::{derived_properties, is_dsb, is_split_diagram, lift_split_diagram, PSplit};
use laxcat::vquant::{is_vlax_epi_density, is_vlax_epi_meet};
use laxcat::{Caps, Error, FinFunctor, NatTrans};

fn value(name: &str) -> Value {
    corpus::get(name)
        .unwrap_or_else(|| panic!("no corpus entry {name}"))
        .decode()
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn functor(name: &str) -> FinFunctor {
    match value(name) {
        Value::Functor(f) => f,
        other => panic!("{name} is {other:?}"),
    }
}

fn category(name: &str) -> Arc<FinCat> {
    match value(name) {
        Value::Category(c) => c,
        other => panic!("{name} is {other:?}"),
    }
}

fn monotone(name: &str) -> MonotoneMap {
    match value(name) {
        Value::Monotone(f) => f,
        other => panic!("{name} is {other:?}"),
    }
}

fn caps() -> Caps {
    Caps::default()
}

#[test]
fn target_of_the_two_cell_has_six_non_identity_arrows() {
    let d = category("coinserter_D");
    assert_eq!(d.num_objects(), 4);
    assert_eq!(d.num_morphisms(), 10);
    let (r, s) = (d.morphism_by_name("r").unwrap(), d.morphism_by_name("s").unwrap());
    assert_ne!(r, s);
    assert_eq!(d.src(r), d.src(s));
    assert_eq!(d.dst(r), d.dst(s));
}

#[test]
fn coinserter_inclusion_is_a_functor_into_the_walking_arrow() {
    let p = functor("coinserter_counterexample");
    assert_eq!(p.source().num_morphisms(), 2);
    assert_eq!(p.target().num_morphisms(), 3);
    assert_eq!(p.object_map().len(), 2);
}

#[test]
fn gamma_is_natural_after_the_inclusion_only() {
    let Value::NatTrans(gamma) = value("coinserter_gamma") else {
        panic!()
    };
    assert_eq!(gamma.components().len(), 2);
    match corpus::get("coinserter_gamma_on_C").unwrap().decode() {
        Err(DocError::Invalid {
            source: Error::NotNatural { morphism, .. },
            ..
        }) => assert_eq!(morphism, "α_A"),
        other => panic!("expected NotNatural, got {other:?}"),
    }
    let (j, k) = (functor("coinserter_J"), functor("coinserter_K"));
    assert!(enumerate_nat_trans(&j, &k, &caps()).unwrap().is_empty());
    let raw = vec![
        ("FA".to_string(), "γ_FA".to_string()),
        ("GA".to_string(), "γ_GA".to_string()),
    ];
    assert!(validate_nat_trans(&raw, &j, &k).is_err());
}

#[test]
fn coinserter_inclusion_is_not_lax_epi() {
    let p = functor("coinserter_counterexample");
    let v = is_lax_epi(&p, &caps()).unwrap();
    assert!(!v.lax_epi);
    assert!(v.recheck(&p));
    let alpha = p.target().morphism_by_name("α_A").unwrap();
    assert!(matches!(v.witness, Some(LaxEpiWitness::Disconnected { g, .. }) if g == alpha));

    let comma = comma_over_morphism(&p, alpha, &caps()).unwrap();
    assert_eq!(comma.objects().len(), 2);
    assert!(comma.edges().iter().all(|e| e.from == e.to));
    assert_eq!(comma.num_components(), 2);
}

#[test]
fn coinserter_inclusion_is_lax_epi_among_preorders_only() {
    let p = monotone("monotone_coinserter_P");
    assert!(is_lax_epi_preord(&p));
    assert!(!is_lax_epi(&monotone_as_functor(&p), &caps()).unwrap().lax_epi);
}

#[test]
fn equivalence_is_lax_epi_with_connected_commas() {
    let e = functor("equifier_E");
    assert!(e.is_equivalence());
    let v = is_lax_epi(&e, &caps()).unwrap();
    assert!(v.lax_epi && v.recheck(&e));
    for g in e.target().morphisms() {
        assert!(comma_over_morphism(&e, g, &caps()).unwrap().is_connected());
    }
}

#[test]
fn equivalence_is_not_a_dsb_nor_orthogonal_to_itself() {
    let e = functor("equifier_E");
    let verdict = is_dsb(&e, &caps()).unwrap();
    assert!(!verdict.dsb);
    let (_, lifts) = verdict.witness.unwrap();
    assert_ne!(lifts.len(), 1);
    assert!(!verify_orthogonal(&e, &e, &caps()).unwrap());
    let d = derived_properties(&e);
    assert!(d.faithful && d.conservative && d.reflects_identities);

    let Value::Square(square) = value("equifier_square") else {
        panic!()
    };
    assert!(enumerate_diagonals(&square, &caps()).unwrap().is_empty());
    assert!(diagonal_fill_in(&square, &caps()).is_err());
}

#[test]
fn equivalence_is_an_equalizer_of_the_constant_pair() {
    let (f, id) = (functor("equifier_F"), functor("equifier_id_B"));
    let e = functor("equifier_E");
    let b = e.target();
    let fixed: Vec<_> = b.objects().filter(|&x| f.ob(x) == id.ob(x)).collect();
    assert_eq!(fixed, vec![e.ob(e.source().objects().next().unwrap())]);
    let fixed_arrows = b.morphisms().filter(|&m| f.mor(m) == id.mor(m)).count();
    assert_eq!(fixed_arrows, e.source().num_morphisms());
}

#[test]
fn printed_equifier_cell_is_rejected() {
    let Value::NatTrans(alpha) = value("equifier_alpha") else {
        panic!()
    };
    let Value::NatTrans(beta) = value("equifier_beta") else {
        panic!()
    };
    assert_ne!(alpha, beta);
    assert!(matches!(
        corpus::get("equifier_beta_printed").unwrap().decode(),
        Err(DocError::Invalid {
            source: Error::NotNatural { .. },
            ..
        })
    ));
    let (r, s) = (functor("equifier_R"), functor("equifier_S"));
    let ins = inserter(&r, &s).unwrap();
    assert!(is_dsb(&ins.projection, &caps()).unwrap().dsb);
}

#[test]
fn splitting_category_morphisms_commute_with_components() {
    for (name, doc) in corpus::corpus() {
        let Ok(Value::Functor(f)) = doc.decode() else { continue };
        let fact = build_splitting_category(&f, &caps()).unwrap();
        let atlas = CommaAtlas::new(&f, &caps()).unwrap();
        let mid = &fact.mid;
        for g in mid.morphisms() {
            let (b, c) = (&fact.points[mid.src(g).0].1, &fact.points[mid.dst(g).0].1);
            let under = fact.right.mor(g);
            assert_eq!(
                atlas.postcompose(under, b),
                atlas.precompose(c, under),
                "{name}: {}",
                mid.morphism_name(g)
            );
        }
        // each member (h, a, k) of an object's component is k · C_a · h
        let t = f.target();
        for (_, comp) in &fact.points {
            for x in atlas.comma(comp.g).members(comp) {
                let one = t.identity(f.ob(x.a));
                let c_a = atlas.component(one, &Triple { h: one, a: x.a, k: one }).unwrap();
                assert_eq!(atlas.postcompose(x.k, &atlas.precompose(&c_a, x.h)), *comp, "{name}");
            }
        }
    }
}

#[test]
fn factorization_is_orthogonal_where_the_left_factor_is_lax_epi() {
    for (name, doc) in corpus::corpus() {
        let Ok(Value::Functor(f)) = doc.decode() else { continue };
        if f.source().num_morphisms() > 8 || f.target().num_morphisms() > 8 {
            continue;
        }
        let fact = build_splitting_category(&f, &caps()).unwrap();
        if is_lax_epi(&fact.left, &caps()).unwrap().lax_epi {
            assert!(verify_orthogonal(&fact.left, &fact.right, &caps()).unwrap(), "{name}");
        }
    }
}

#[test]
fn splitting_gap_left_factor_is_not_lax_epi() {
    let f = functor("splitting_gap");
    let fact = build_splitting_category(&f, &caps()).unwrap();
    assert_eq!(fact.left.then(&fact.right).unwrap(), f);
    assert!(is_dsb(&fact.right, &caps()).unwrap().dsb);
    let v = is_lax_epi(&fact.left, &caps()).unwrap();
    assert!(!v.lax_epi);
    assert!(v.recheck(&fact.left));
    assert!(!is_lax_epi(&f, &caps()).unwrap().lax_epi);
    assert!(!fact.right.is_isomorphism());
}

#[test]
fn identity_squares_over_a_dsb_are_split_diagrams() {
    let b = category("equifier_B");
    let p = FinFunctor::identity(&b);
    let atlas = CommaAtlas::new(&p, &caps()).unwrap();
    let unit = |x| PSplit {
        b: p.ob(x),
        e: x,
        h: b.identity(x),
        k: b.identity(x),
    };
    for f in b.morphisms() {
        let (x, y) = (b.src(f), b.dst(f));
        let d = is_split_diagram(&atlas, p.mor(f), &unit(x), &unit(y)).expect("identity splits form a diagram");
        let lifts = lift_split_diagram(&p, &d);
        assert_eq!(lifts.len(), 1);
        if let Some(inv) = b.inverse(f) {
            // the diagram over the inverse lifts to an inverse of f
            let d = is_split_diagram(&atlas, p.mor(inv), &unit(y), &unit(x)).unwrap();
            let lifts = lift_split_diagram(&p, &d);
            assert_eq!(lifts.len(), 1);
            let t0 = lifts[0].g0;
            assert!(b.is_identity(b.compose(f, t0)) && b.is_identity(b.compose(t0, f)));
        }
    }
}

#[test]
fn dsbs_in_the_corpus_have_the_derived_properties() {
    for (name, doc) in corpus::corpus() {
        let Ok(Value::Functor(f)) = doc.decode() else { continue };
        let fact = build_splitting_category(&f, &caps()).unwrap();
        for g in [&f, &fact.right] {
            if is_dsb(g, &caps()).unwrap().dsb {
                let d = derived_properties(g);
                assert!(d.faithful && d.conservative && d.reflects_identities, "{name}");
            }
        }
    }
}

#[test]
fn iso_collapse_is_a_preorder_lax_epi_but_not_surjective() {
    let f = monotone("monotone_iso_collapse");
    assert!(is_lax_epi_preord(&f));
    assert!(!f.is_surjective());
}

#[test]
fn discrete_coinserter_adds_one_relation() {
    let (f, g) = (monotone("monotone_coinserter_F"), monotone("monotone_coinserter_G"));
    let (bar, q) = coinserter_preord(&f, &g).unwrap();
    assert!(bar.leq(0, 1) && !bar.leq(1, 0));
    assert!(q.is_bijective() && is_lax_epi_preord(&q));
    let c = monotone("monotone_coinserter_P").target().clone();
    assert!((0..2).all(|x| (0..2).all(|y| bar.leq(x, y) == c.leq(x, y))));
}

#[test]
fn doubling_exhibits_embeddings_as_inserters() {
    for (name, doc) in corpus::corpus() {
        let Ok(Value::Monotone(m)) = doc.decode() else { continue };
        let (_, f1, f2) = doubling(&m).unwrap();
        let (_, inc) = inserter_preord(&f1, &f2).unwrap();
        assert!(is_lax_strong_mono_preord(&inc), "{name}");
        assert!(is_inserter_of(&inc, &f1, &f2).unwrap(), "{name}");
    }
}

#[test]
fn preorder_lax_epis_are_stable_under_pushout() {
    let maps: Vec<MonotoneMap> = corpus::corpus()
        .into_iter()
        .filter_map(|(_, d)| match d.decode() {
            Ok(Value::Monotone(m)) => Some(m),
            _ => None,
        })
        .collect();
    for f in maps.iter().filter(|f| is_lax_epi_preord(f)) {
        for g in &maps {
            if g.source().len() != f.source().len() {
                continue;
            }
            for g in enumerate_monotone(f.source(), g.target()) {
                let (_, _, along) = pushout_preord(f, &g).unwrap();
                assert!(is_lax_epi_preord(&along));
            }
        }
    }
}

#[test]
fn unit_cells_and_horizontal_composites() {
    for g in small_groups().into_iter().filter(|g| g.order() <= 6) {
        let id = GroupHom::identity(&g);
        let unit = validate_2cell(&id, &id, g.unit()).unwrap();
        for x in 0..g.order() {
            if g.is_central(x) {
                let c = validate_2cell(&id, &id, x).unwrap();
                hcompose_2cells(&c, &unit).unwrap();
            }
        }
    }
}

#[test]
fn surjections_pass_every_probe() {
    let groups = small_groups();
    let codomains: Vec<_> = groups.iter().filter(|c| c.order() <= 6).cloned().collect();
    for a in groups.iter().filter(|g| g.order() <= 6) {
        for b in groups.iter().filter(|g| g.order() <= 4) {
            for f in enumerate_homs(a, b).into_iter().filter(GroupHom::is_surjective) {
                for c in &codomains {
                    let homs = enumerate_homs(b, c);
                    for g in &homs {
                        for h in &homs {
                            for gamma in 0..c.order() {
                                assert!(laxepi_condition_probe(&f, g, h, gamma));
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn density_counterexample_agrees_across_tests_and_duals() {
    let Value::VFunctor(j) = value("vfunctor_density_3chain") else {
        panic!()
    };
    assert!(!is_vlax_epi_density(&j));
    assert!(!is_vlax_epi_meet(&j, &caps()).unwrap());
    assert_eq!(is_vlax_epi_density(&j.opposite()), is_vlax_epi_density(&j));
}

#[test]
fn corpus_has_the_headline_functors() {
    let functors: Vec<FinFunctor> = corpus::corpus()
        .into_iter()
        .filter_map(|(_, d)| match d.decode() {
            Ok(Value::Functor(f)) => Some(f),
            _ => None,
        })
        .collect();
    assert!(functors.iter().any(|f| !is_lax_epi(f, &caps()).unwrap().lax_epi));
    assert!(functors
        .iter()
        .any(|f| is_lax_epi(f, &caps()).unwrap().lax_epi && !is_dsb(f, &caps()).unwrap().dsb));
}

#[test]
fn natural_cells_between_parallel_functors_validate() {
    let Value::NatTrans(alpha) = value("equifier_alpha") else {
        panic!()
    };
    let again = NatTrans::new(alpha.from().clone(), alpha.to().clone(), alpha.components().to_vec()).unwrap();
    assert_eq!(again, alpha);
}
