//! The shipped fixture corpus: worked examples, counterexamples, standard
//! orders, groups and frames.
//!
//! Every document is built in code by [`build`] and stored as JSON under
//! `corpus/`. The stored files are what [`corpus`] returns; a test keeps the
//! two in sync, and setting `LAXCAT_REGENERATE_CORPUS=1` rewrites the files.

use std::collections::HashMap;
use std::sync::Arc;

use crate::concrete::ConcreteCategory;
use crate::factorize::build_splitting_category;
use crate::fincat::{Arrow, FinCat, FinFunctor, MorId, NatTrans, ObjId};
use crate::format::{
    parse, CategoryDoc, Document, FrameDoc, FunctorDoc, GroupDoc, HomDoc, MonotoneDoc, NatTransDoc, PreordDoc,
    SquareDoc, VFunctorDoc,
};
use crate::grp2::{enumerate_homs, probe_family, small_groups, FinGroup};
use crate::orders::{FinPreord, MonotoneMap};
use crate::vquant::{Frame, VCat, VFunctor};
use crate::Caps;

macro_rules! files {
    ($dir:literal: $($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../corpus/", $dir, $name, ".json")))),*]
    };
}

const ACCEPTED: &[(&str, &str)] = files!("":
    "coinserter_A", "coinserter_B", "coinserter_C", "coinserter_D", "coinserter_F", "coinserter_G", "coinserter_counterexample",
    "coinserter_J", "coinserter_K", "coinserter_gamma",
    "equifier_A", "equifier_B", "equifier_E", "equifier_F", "equifier_id_B", "equifier_C",
    "equifier_R", "equifier_S", "equifier_alpha", "equifier_beta", "equifier_square",
    "splitting_gap",
    "preord_coinserter_B", "preord_coinserter_C", "monotone_coinserter_F", "monotone_coinserter_G", "monotone_coinserter_P",
    "monotone_iso_collapse", "monotone_chain_bijection", "monotone_pos_surjection",
    "group_C1", "group_C2", "group_C3", "group_C4", "group_C5", "group_C6", "group_C7", "group_C8",
    "group_C9", "group_C10", "group_C11", "group_C12", "group_D2", "group_D3", "group_D4", "group_D5",
    "group_D6", "group_S1", "group_S2", "group_S3", "group_C2xC2", "group_C4xC2", "group_C2xC2xC2", "group_Q8",
    "hom_sign_S3", "hom_C2_into_S3",
    "frame_2", "frame_3chain", "frame_4chain", "frame_diamond",
    "vfunctor_density_3chain",
);

const REJECTED: &[(&str, &str)] = files!("rejects/":
    "equifier_beta_printed", "coinserter_gamma_on_C", "frame_M3",
);

fn load(files: &[(&str, &str)]) -> Vec<(String, Document)> {
    files
        .iter()
        .map(|(name, text)| {
            let doc = parse(text).unwrap_or_else(|e| panic!("corpus file {name} does not parse: {e}"));
            (name.to_string(), doc)
        })
        .collect()
}

/// Corpus documents that decode successfully.
pub fn corpus() -> Vec<(String, Document)> {
    load(ACCEPTED)
}

/// Documents that parse but must be rejected by validation.
pub fn rejects() -> Vec<(String, Document)> {
    load(REJECTED)
}

pub fn get(name: &str) -> Option<Document> {
    ACCEPTED
        .iter()
        .chain(REJECTED)
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse(text).expect("corpus files parse"))
}

/// The stored text of a corpus file, for tools that want a path-free copy.
pub fn raw_text(name: &str) -> Option<&'static str> {
    ACCEPTED
        .iter()
        .chain(REJECTED)
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
}

/// Files in `corpus/` (relative name without extension) paired with the
/// document they must contain.
pub fn build() -> Vec<(String, Document)> {
    let mut out = Vec::new();
    coinserter_example(&mut out);
    equifier_example(&mut out);
    out.push(("splitting_gap".into(), Document::Functor(splitting_gap())));
    orders(&mut out);
    groups(&mut out);
    frames(&mut out);
    out
}

/// A category presented by its non-identity arrows and the composites of
/// composable non-identity pairs `(f, g, g∘f)`. Identities are named `1_x`.
fn presented(objects: &[&str], arrows: &[(&str, &str, &str)], composites: &[(&str, &str, &str)]) -> FinCat {
    let obj = |n: &str| ObjId(objects.iter().position(|o| *o == n).expect("known object"));
    let mut all: Vec<Arrow> = objects
        .iter()
        .map(|o| Arrow {
            name: format!("1_{o}"),
            src: obj(o),
            dst: obj(o),
        })
        .collect();
    all.extend(arrows.iter().map(|(n, s, d)| Arrow {
        name: n.to_string(),
        src: obj(s),
        dst: obj(d),
    }));
    let by_name: HashMap<String, MorId> = all
        .iter()
        .enumerate()
        .map(|(i, a)| (a.name.clone(), MorId(i)))
        .collect();
    let table: HashMap<(MorId, MorId), MorId> = composites
        .iter()
        .map(|(f, g, h)| ((by_name[*f], by_name[*g]), by_name[*h]))
        .collect();
    let n = objects.len();
    let arrows_ref = all.clone();
    FinCat::from_parts(
        objects.iter().map(|s| s.to_string()).collect(),
        all,
        (0..n).map(MorId).collect(),
        |f, g| {
            if f.0 < n {
                Some(g)
            } else if g.0 < n {
                Some(f)
            } else {
                debug_assert_eq!(arrows_ref[f.0].dst, arrows_ref[g.0].src);
                table.get(&(f, g)).copied()
            }
        },
    )
    .expect("presented categories are lawful")
}

fn functor_by_names(
    source: &Arc<FinCat>,
    target: &Arc<FinCat>,
    objects: &[(&str, &str)],
    morphisms: &[(&str, &str)],
) -> FinFunctor {
    let ob = |n: &str, c: &FinCat| c.object_by_name(n).unwrap_or_else(|| panic!("no object {n}"));
    let mo = |n: &str, c: &FinCat| c.morphism_by_name(n).unwrap_or_else(|| panic!("no morphism {n}"));
    let mut omap = vec![ObjId(0); source.num_objects()];
    for (a, b) in objects {
        omap[ob(a, source).0] = ob(b, target);
    }
    let mut mmap: Vec<MorId> = source.objects().map(|o| target.identity(omap[o.0])).collect();
    mmap.resize(source.num_morphisms(), MorId(0));
    for o in source.objects() {
        mmap[source.identity(o).0] = target.identity(omap[o.0]);
    }
    for (f, g) in morphisms {
        mmap[mo(f, source).0] = mo(g, target);
    }
    FinFunctor::new(source.clone(), target.clone(), omap, mmap).expect("fixture functors are lawful")
}

fn coinserter_example(out: &mut Vec<(String, Document)>) {
    let a = Arc::new(FinCat::discrete(&["A"]));
    let b = Arc::new(FinCat::discrete(&["FA", "GA"]));
    let c = Arc::new(presented(&["FA", "GA"], &[("α_A", "FA", "GA")], &[]));
    let d = Arc::new(presented(
        &["JFA", "JGA", "KFA", "KGA"],
        &[
            ("Jα_A", "JFA", "JGA"),
            ("Kα_A", "KFA", "KGA"),
            ("γ_FA", "JFA", "KFA"),
            ("γ_GA", "JGA", "KGA"),
            ("r", "JFA", "KGA"),
            ("s", "JFA", "KGA"),
        ],
        &[("γ_FA", "Kα_A", "r"), ("Jα_A", "γ_GA", "s")],
    ));
    let f = functor_by_names(&a, &b, &[("A", "FA")], &[]);
    let g = functor_by_names(&a, &b, &[("A", "GA")], &[]);
    let p = functor_by_names(&b, &c, &[("FA", "FA"), ("GA", "GA")], &[]);
    let j = functor_by_names(&c, &d, &[("FA", "JFA"), ("GA", "JGA")], &[("α_A", "Jα_A")]);
    let k = functor_by_names(&c, &d, &[("FA", "KFA"), ("GA", "KGA")], &[("α_A", "Kα_A")]);
    let jp = p.then(&j).expect("composable");
    let kp = p.then(&k).expect("composable");
    let gamma_components = vec![
        d.morphism_by_name("γ_FA").expect("named"),
        d.morphism_by_name("γ_GA").expect("named"),
    ];
    let gamma = NatTrans::new(jp.clone(), kp.clone(), gamma_components).expect("γ is natural on B");

    for (name, cat, cname) in [
        ("coinserter_A", &a, "A"),
        ("coinserter_B", &b, "B"),
        ("coinserter_C", &c, "C"),
        ("coinserter_D", &d, "D"),
    ] {
        out.push((name.into(), Document::Category(CategoryDoc::encode(cname, cat))));
    }
    out.push((
        "coinserter_F".into(),
        Document::Functor(FunctorDoc::encode("F", "A", "B", &f)),
    ));
    out.push((
        "coinserter_G".into(),
        Document::Functor(FunctorDoc::encode("G", "A", "B", &g)),
    ));
    out.push((
        "coinserter_counterexample".into(),
        Document::Functor(FunctorDoc::encode("P", "B", "C", &p)),
    ));
    out.push((
        "coinserter_J".into(),
        Document::Functor(FunctorDoc::encode("J", "C", "D", &j)),
    ));
    out.push((
        "coinserter_K".into(),
        Document::Functor(FunctorDoc::encode("K", "C", "D", &k)),
    ));
    let gamma_doc = NatTransDoc::encode(
        "γ",
        FunctorDoc::encode("JP", "B", "D", &jp),
        FunctorDoc::encode("KP", "B", "D", &kp),
        &gamma,
    );
    out.push(("coinserter_gamma".into(), Document::NatTrans(gamma_doc.clone())));
    // the same components read as a transformation J ⇒ K on C
    let on_c = NatTransDoc {
        name: "γ on C".into(),
        from: FunctorDoc::encode("J", "C", "D", &j),
        to: FunctorDoc::encode("K", "C", "D", &k),
        components: [("FA", "γ_FA"), ("GA", "γ_GA")]
            .into_iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect(),
    };
    out.push(("rejects/coinserter_gamma_on_C".into(), Document::NatTrans(on_c)));
}

fn equifier_example(out: &mut Vec<(String, Document)>) {
    let a = Arc::new(FinCat::discrete(&["a"]));
    let b = Arc::new(presented(
        &["a", "b"],
        &[("f", "a", "b"), ("f⁻¹", "b", "a")],
        &[("f", "f⁻¹", "1_a"), ("f⁻¹", "f", "1_b")],
    ));
    let e = functor_by_names(&a, &b, &[("a", "a")], &[]);
    let constant = functor_by_names(&b, &b, &[("a", "a"), ("b", "a")], &[("f", "1_a"), ("f⁻¹", "1_a")]);
    let id_b = FinFunctor::identity(&b);

    // R and S are isomorphic pairs of two-element sets; α is the identity
    // function on each side and β the swap
    let mut cc = ConcreteCategory::new();
    let ra = cc.object("Ra", 2);
    let rb = cc.object("Rb", 2);
    let sa = cc.object("Sa", 2);
    let sb = cc.object("Sb", 2);
    let gens = [
        ("Rf", ra, rb, vec![0, 1]),
        ("Rf⁻¹", rb, ra, vec![0, 1]),
        ("Sf", sa, sb, vec![0, 1]),
        ("Sf⁻¹", sb, sa, vec![0, 1]),
        ("α_a", ra, sa, vec![0, 1]),
        ("α_b", rb, sb, vec![0, 1]),
        ("β_a", ra, sa, vec![1, 0]),
        ("β_b", rb, sb, vec![1, 0]),
    ];
    for (name, s, d, f) in gens {
        cc.generator(name, s, d, f).expect("well-formed generator");
    }
    let c = Arc::new(cc.close(64).expect("small").category);
    let r = functor_by_names(&b, &c, &[("a", "Ra"), ("b", "Rb")], &[("f", "Rf"), ("f⁻¹", "Rf⁻¹")]);
    let s = functor_by_names(&b, &c, &[("a", "Sa"), ("b", "Sb")], &[("f", "Sf"), ("f⁻¹", "Sf⁻¹")]);
    let m = |n: &str| c.morphism_by_name(n).unwrap_or_else(|| panic!("no morphism {n}"));
    let alpha = NatTrans::new(r.clone(), s.clone(), vec![m("α_a"), m("α_b")]).expect("α is natural");
    let beta = NatTrans::new(r.clone(), s.clone(), vec![m("β_a"), m("β_b")]).expect("β is natural");
    let r_doc = FunctorDoc::encode("R", "B", "C", &r);
    let s_doc = FunctorDoc::encode("S", "B", "C", &s);

    out.push(("equifier_A".into(), Document::Category(CategoryDoc::encode("A", &a))));
    out.push(("equifier_B".into(), Document::Category(CategoryDoc::encode("B", &b))));
    out.push((
        "equifier_E".into(),
        Document::Functor(FunctorDoc::encode("E", "A", "B", &e)),
    ));
    out.push((
        "equifier_F".into(),
        Document::Functor(FunctorDoc::encode("F", "B", "B", &constant)),
    ));
    out.push((
        "equifier_id_B".into(),
        Document::Functor(FunctorDoc::encode("Id_B", "B", "B", &id_b)),
    ));
    out.push(("equifier_C".into(), Document::Category(CategoryDoc::encode("C", &c))));
    out.push(("equifier_R".into(), Document::Functor(r_doc.clone())));
    out.push(("equifier_S".into(), Document::Functor(s_doc.clone())));
    out.push((
        "equifier_alpha".into(),
        Document::NatTrans(NatTransDoc::encode("α", r_doc.clone(), s_doc.clone(), &alpha)),
    ));
    out.push((
        "equifier_beta".into(),
        Document::NatTrans(NatTransDoc::encode("β", r_doc.clone(), s_doc.clone(), &beta)),
    ));
    let printed = NatTransDoc {
        name: "β with β_a = α_a".into(),
        from: r_doc,
        to: s_doc,
        components: [("a", "α_a"), ("b", "β_b")]
            .into_iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect(),
    };
    out.push(("rejects/equifier_beta_printed".into(), Document::NatTrans(printed)));
    let id_a = FinFunctor::identity(&a);
    out.push((
        "equifier_square".into(),
        Document::Square(SquareDoc {
            name: "E against itself".into(),
            top: FunctorDoc::encode("E", "A", "B", &e),
            bottom: FunctorDoc::encode("E", "A", "B", &e),
            left: FunctorDoc::encode("Id_A", "A", "A", &id_a),
            right: FunctorDoc::encode("Id_B", "B", "B", &id_b),
        }),
    ));
}

/// A functor whose splitting-category left factor is not a lax
/// epimorphism: `o0` is a retract of `o1` and the chain `p2 ≤ p0 ≤ p1`
/// maps onto the idempotent and the retraction.
pub fn splitting_gap() -> FunctorDoc {
    let a = Arc::new(presented(
        &["p2", "p0", "p1"],
        &[("p2≤p0", "p2", "p0"), ("p0≤p1", "p0", "p1"), ("p2≤p1", "p2", "p1")],
        &[("p2≤p0", "p0≤p1", "p2≤p1")],
    ));
    let b = Arc::new(presented(
        &["o0", "o1"],
        &[("g0", "o0", "o1"), ("g2", "o1", "o0"), ("e", "o1", "o1")],
        &[
            ("g0", "g2", "1_o0"),
            ("g2", "g0", "e"),
            ("e", "e", "e"),
            ("g0", "e", "g0"),
            ("e", "g2", "g2"),
        ],
    ));
    let f = functor_by_names(
        &a,
        &b,
        &[("p2", "o1"), ("p0", "o1"), ("p1", "o0")],
        &[("p2≤p0", "e"), ("p0≤p1", "g2"), ("p2≤p1", "g2")],
    );
    debug_assert!(build_splitting_category(&f, &Caps::default()).is_ok());
    FunctorDoc::encode("gap", "chain", "retract", &f)
}

fn orders(out: &mut Vec<(String, Document)>) {
    let one = Arc::new(FinPreord::discrete(&["A"]));
    let b = Arc::new(FinPreord::discrete(&["FA", "GA"]));
    let c = Arc::new(FinPreord::chain(&["FA", "GA"]));
    let mono = |s: &Arc<FinPreord>, t: &Arc<FinPreord>, map: Vec<usize>| {
        MonotoneMap::new(s.clone(), t.clone(), map).expect("fixture maps are monotone")
    };
    out.push((
        "preord_coinserter_B".into(),
        Document::Preord(PreordDoc::encode("B", &b)),
    ));
    out.push((
        "preord_coinserter_C".into(),
        Document::Preord(PreordDoc::encode("C", &c)),
    ));
    out.push((
        "monotone_coinserter_F".into(),
        Document::Monotone(MonotoneDoc::encode("F", "A", "B", &mono(&one, &b, vec![0]))),
    ));
    out.push((
        "monotone_coinserter_G".into(),
        Document::Monotone(MonotoneDoc::encode("G", "A", "B", &mono(&one, &b, vec![1]))),
    ));
    out.push((
        "monotone_coinserter_P".into(),
        Document::Monotone(MonotoneDoc::encode("P", "B", "C", &mono(&b, &c, vec![0, 1]))),
    ));

    let x = Arc::new(FinPreord::discrete(&["x"]));
    let yz = Arc::new(FinPreord::generated(vec!["y".into(), "z".into()], &[(0, 1), (1, 0)]).expect("in range"));
    out.push((
        "monotone_iso_collapse".into(),
        Document::Monotone(MonotoneDoc::encode(
            "iso collapse",
            "point",
            "isomorphic pair",
            &mono(&x, &yz, vec![0]),
        )),
    ));
    let d3 = Arc::new(FinPreord::discrete(&["0", "1", "2"]));
    let c3 = Arc::new(FinPreord::chain(&["0", "1", "2"]));
    out.push((
        "monotone_chain_bijection".into(),
        Document::Monotone(MonotoneDoc::encode(
            "bijection",
            "discrete3",
            "chain3",
            &mono(&d3, &c3, vec![0, 1, 2]),
        )),
    ));
    let c2 = Arc::new(FinPreord::chain(&["lo", "hi"]));
    out.push((
        "monotone_pos_surjection".into(),
        Document::Monotone(MonotoneDoc::encode(
            "surjection",
            "chain3",
            "chain2",
            &mono(&c3, &c2, vec![0, 1, 1]),
        )),
    ));
}

fn groups(out: &mut Vec<(String, Document)>) {
    let mut seen = Vec::new();
    let c2 = FinGroup::cyclic(2);
    let extra = [
        FinGroup::product(&FinGroup::cyclic(4), &c2),
        FinGroup::product(&FinGroup::product(&c2, &c2), &c2),
        FinGroup::quaternion(),
    ];
    let all = probe_family(12)
        .into_iter()
        .chain(small_groups())
        .chain(extra.into_iter().map(Arc::new));
    for g in all {
        let file = format!("group_{}", g.name().replace('×', "x"));
        if !seen.contains(&file) && g.order() <= 12 {
            seen.push(file.clone());
            out.push((file, Document::Group(GroupDoc::encode(&g))));
        }
    }
    let s3 = Arc::new(FinGroup::symmetric(3));
    let c2 = Arc::new(c2);
    let sign = enumerate_homs(&s3, &c2)
        .into_iter()
        .find(|h| h.is_surjective())
        .expect("S3 has a sign map");
    let incl = enumerate_homs(&c2, &s3)
        .into_iter()
        .find(|h| h.is_injective())
        .expect("S3 has involutions");
    out.push(("hom_sign_S3".into(), Document::Hom(HomDoc::encode("sign", &sign))));
    out.push((
        "hom_C2_into_S3".into(),
        Document::Hom(HomDoc::encode("transposition", &incl)),
    ));
}

fn frames(out: &mut Vec<(String, Document)>) {
    let named = [
        ("frame_2", Frame::boolean()),
        ("frame_3chain", Frame::chain(3)),
        ("frame_4chain", Frame::chain(4)),
        ("frame_diamond", Frame::powerset(2)),
    ];
    for (file, v) in named {
        out.push((file.into(), Document::Frame(FrameDoc::encode(&v))));
    }
    let m3 = FrameDoc {
        name: "M3".into(),
        elements: ["0", "a", "b", "c", "1"].into_iter().map(String::from).collect(),
        order: ["a", "b", "c"]
            .into_iter()
            .flat_map(|x| [["0".to_string(), x.to_string()], [x.to_string(), "1".to_string()]])
            .collect(),
    };
    out.push(("rejects/frame_M3".into(), Document::Frame(m3)));

    let v = Arc::new(Frame::chain(3));
    let (m, t) = (1, v.top());
    let y = Arc::new(
        VCat::new(
            v.clone(),
            vec!["y0".into(), "y1".into(), "y2".into()],
            vec![t, m, m, m, t, m, m, m, t],
        )
        .expect("homs compose"),
    );
    let x = Arc::new(VCat::new(v, vec!["x".into()], vec![t]).expect("one object"));
    let j = VFunctor::new(x, y, vec![0]).expect("bounded homs");
    out.push((
        "vfunctor_density_3chain".into(),
        Document::Vfunctor(VFunctorDoc::encode("j", "X", "Y", &j)),
    ));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{serialize, DocError, Value};
    use crate::Error;

    #[test]
    fn stored_files_match_the_builders() {
        let built = build();
        let regenerate = std::env::var("LAXCAT_REGENERATE_CORPUS").is_ok_and(|v| v == "1");
        if regenerate {
            let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
            std::fs::create_dir_all(dir.join("rejects")).unwrap();
            for (file, doc) in &built {
                std::fs::write(dir.join(format!("{file}.json")), serialize(doc)).unwrap();
            }
            return;
        }
        let stored: Vec<(String, &str)> = ACCEPTED
            .iter()
            .map(|(n, t)| (n.to_string(), *t))
            .chain(REJECTED.iter().map(|(n, t)| (format!("rejects/{n}"), *t)))
            .collect();
        assert_eq!(stored.len(), built.len(), "file list and builders disagree");
        for (file, doc) in &built {
            let (_, text) = stored
                .iter()
                .find(|(n, _)| n == file)
                .unwrap_or_else(|| panic!("{file} is not listed"));
            assert_eq!(
                *text,
                serialize(doc),
                "{file} is stale; rerun with LAXCAT_REGENERATE_CORPUS=1"
            );
        }
    }

    #[test]
    fn every_accepted_document_decodes_and_round_trips() {
        for (name, doc) in corpus() {
            doc.decode().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(serialize(&doc), raw_text(&name).unwrap(), "{name}");
        }
    }

    #[test]
    fn rejects_fail_for_the_documented_reason() {
        let reason = |name: &str| match get(name).unwrap().decode() {
            Err(DocError::Invalid { source, .. }) => source,
            other => panic!("{name} should be invalid, got {other:?}"),
        };
        assert!(
            matches!(reason("equifier_beta_printed"), Error::NotNatural { morphism, .. } if morphism == "f" || morphism == "f⁻¹")
        );
        assert!(matches!(reason("coinserter_gamma_on_C"), Error::NotNatural { morphism, .. } if morphism == "α_A"));
        assert!(matches!(reason("frame_M3"), Error::NotDistributive { .. }));
    }

    #[test]
    fn coinserter_counterexample_is_the_inclusion_of_the_discrete_pair() {
        let Value::Functor(p) = get("coinserter_counterexample").unwrap().decode().unwrap() else {
            panic!("expected a functor")
        };
        assert_eq!(p.source().object_names(), ["FA", "GA"]);
        assert_eq!(p.source().num_morphisms(), 2);
        assert_eq!(p.target().num_morphisms(), 3);
        assert!(p.target().morphism_by_name("α_A").is_some());
        assert!(p.is_faithful() && !p.is_full());
    }

    #[test]
    fn groups_cover_orders_up_to_twelve() {
        let orders: Vec<usize> = corpus()
            .into_iter()
            .filter_map(|(_, d)| match d.decode().unwrap() {
                Value::Group(g) => Some(g.order()),
                _ => None,
            })
            .collect();
        for n in 1..=12 {
            assert!(orders.contains(&n), "no group of order {n}");
        }
    }
}
