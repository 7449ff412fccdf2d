//! The acceptance suites, runnable from the library, the CLI and the test
//! harness. Each suite returns one [`Outcome`]; nothing here panics on a
//! failed check.

use std::fmt::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus;
use crate::error::Result;
use crate::factorize::{
    build_splitting_category, diagonal_fill_in, enumerate_diagonals, enumerate_squares, fill_in_2cell,
    verify_orthogonal, OrthSquare,
};
use crate::fincat::{enumerate_nat_trans, inserter, whisker_left, whisker_right};
use crate::format::Value;
use crate::grp2::{enumerate_homs, image_factorization, is_lax_epi_grp, probe_family, small_groups, ProbeSearch};
use crate::hunt::hunt;
use crate::laxepi::{is_lax_epi, LaxEpiWitness};
use crate::orders::{
    coinserter_preord, comma_preord, is_lax_epi_preord, monotone_as_functor, verify_coinserter_universal, FinPreord,
    MonotoneMap,
};
use crate::random::{
    random_category, random_equivalence, random_functor, random_functor_between_random, random_monotone, random_preord,
    random_vcat, random_vfunctor_into, Bounds,
};
use crate::splitfib::{derived_properties, is_dsb};
use crate::vquant::{is_vlax_epi_density, is_vlax_epi_meet, vfunctor_from_monotone, Frame, VCat, VFunctor};
use crate::{Caps, FinFunctor};

#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    pub random_cases: usize,
    pub probe_order: usize,
    pub caps: Caps,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 1,
            random_cases: 200,
            probe_order: 12,
            caps: Caps::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub criterion: u8,
    pub title: &'static str,
    pub passed: bool,
    /// Number of individual checks performed.
    pub checks: usize,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {} checks. {}",
            self.criterion,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.checks,
            self.detail
        )
    }
}

/// Collects check results for one suite.
struct Tally {
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, criterion: u8, title: &'static str, result: Result<()>) -> Outcome {
        let mut detail = String::new();
        let mut failures = self.failures;
        if let Err(e) = result {
            failures.push(format!("aborted: {e}"));
        }
        for n in &self.notes {
            write!(detail, "{n}. ").unwrap();
        }
        if !failures.is_empty() {
            let shown: Vec<&str> = failures.iter().take(8).map(String::as_str).collect();
            write!(detail, "{} failed: {}", failures.len(), shown.join("; ")).unwrap();
            if failures.len() > shown.len() {
                detail.push_str("; ...");
            }
        }
        Outcome {
            criterion,
            title,
            passed: failures.is_empty(),
            checks: self.checks,
            detail: detail.trim_end().to_string(),
        }
    }
}

fn corpus_functor(name: &str) -> FinFunctor {
    match corpus::get(name).map(|d| d.decode()) {
        Some(Ok(Value::Functor(f))) => f,
        other => panic!("corpus entry {name} is not a functor: {other:?}"),
    }
}

fn corpus_functors() -> Vec<(String, FinFunctor)> {
    corpus::corpus()
        .into_iter()
        .filter_map(|(name, doc)| match doc.decode() {
            Ok(Value::Functor(f)) => Some((name, f)),
            _ => None,
        })
        .collect()
}

fn corpus_monotones() -> Vec<(String, MonotoneMap)> {
    corpus::corpus()
        .into_iter()
        .filter_map(|(name, doc)| match doc.decode() {
            Ok(Value::Monotone(f)) => Some((name, f)),
            _ => None,
        })
        .collect()
}

/// The seeded random functor suite shared by several criteria.
pub fn random_suite(seed: u64, n: usize) -> Vec<FinFunctor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| random_functor_between_random(&mut rng, Bounds::default()))
        .collect()
}

pub fn run_all(cfg: &Config) -> Vec<Outcome> {
    vec![
        counterexample_fixtures(cfg),
        factorization_soundness(cfg),
        orthogonality(cfg),
        closure_laws(cfg),
        consistency(cfg),
        orders(cfg),
        inserters(cfg),
        quantale(cfg),
        groups(cfg),
    ]
}

pub fn counterexample_fixtures(cfg: &Config) -> Outcome {
    let mut t = Tally::new();
    let res = (|| {
        let caps = &cfg.caps;
        let p = corpus_functor("coinserter_counterexample");
        let v = is_lax_epi(&p, caps)?;
        t.check(!v.lax_epi, || "P is reported lax epi".into());
        let witness_g = match &v.witness {
            Some(LaxEpiWitness::Disconnected { g, .. }) | Some(LaxEpiWitness::Empty { g }) => {
                Some(p.target().morphism_name(*g).to_string())
            }
            None => None,
        };
        t.check(witness_g.as_deref() == Some("α_A"), || {
            format!("P witness is {witness_g:?}")
        });
        t.check(v.recheck(&p), || "P witness fails the brute-force recheck".into());

        let e = corpus_functor("equifier_E");
        let v = is_lax_epi(&e, caps)?;
        t.check(v.lax_epi, || "E is reported not lax epi".into());
        t.check(v.recheck(&e), || "E verdict fails the brute-force recheck".into());
        t.check(!is_dsb(&e, caps)?.dsb, || "E is reported a DSB".into());
        t.check(!verify_orthogonal(&e, &e, caps)?, || {
            "E is reported orthogonal to itself".into()
        });
        Ok(())
    })();
    t.finish(1, "counterexample fixtures", res)
}

pub fn factorization_soundness(cfg: &Config) -> Outcome {
    let mut t = Tally::new();
    let res = (|| {
        let caps = &cfg.caps;
        let mut cases: Vec<(String, FinFunctor)> = corpus_functors();
        let n_corpus = cases.len();
        cases.extend(
            random_suite(cfg.seed, cfg.random_cases)
                .into_iter()
                .enumerate()
                .map(|(i, f)| (format!("random#{i}"), f)),
        );
        for (name, f) in &cases {
            let fact = match build_splitting_category(f, caps) {
                Ok(fact) => fact,
                Err(e) => {
                    t.check(false, || format!("{name}: {e}"));
                    continue;
                }
            };
            t.check(fact.left.then(&fact.right)? == *f, || {
                format!("{name}: P ∘ E differs from F")
            });
            t.check(is_lax_epi(&fact.left, caps)?.lax_epi, || {
                format!("{name}: E is not lax epi")
            });
            t.check(is_dsb(&fact.right, caps)?.dsb, || format!("{name}: P is not a DSB"));
        }
        t.notes
            .push(format!("{n_corpus} corpus and {} random functors", cfg.random_cases));
        Ok(())
    })();
    t.finish(2, "factorization soundness", res)
}

/// `(e, m)` pairs with `e` lax epi and `m` a DSB, drawn from the corpus.
fn orthogonality_pairs(caps: &Caps) -> Result<Vec<(String, FinFunctor, String, FinFunctor)>> {
    let mut lefts = vec![("equifier_E".to_string(), corpus_functor("equifier_E"))];
    let mut rights = vec![(
        "coinserter_counterexample".to_string(),
        corpus_functor("coinserter_counterexample"),
    )];
    for (name, f) in corpus_functors() {
        if f.source().num_morphisms() > 8 || f.target().num_morphisms() > 8 {
            continue;
        }
        let fact = build_splitting_category(&f, caps)?;
        if is_lax_epi(&fact.left, caps)?.lax_epi {
            lefts.push((format!("E({name})"), fact.left.clone()));
        }
        rights.push((format!("P({name})"), fact.right.clone()));
        lefts.push((format!("Id({name} source)"), FinFunctor::identity(f.source())));
    }
    let f = corpus_functor("coinserter_F");
    let g = corpus_functor("coinserter_G");
    rights.push(("inserter(F, G)".into(), inserter(&f, &g)?.projection));
    rights.push(("inserter(G, F)".into(), inserter(&g, &f)?.projection));
    let mut out = Vec::new();
    for (en, e) in &lefts {
        for (mn, m) in &rights {
            if is_dsb(m, caps)?.dsb {
                out.push((en.clone(), e.clone(), mn.clone(), m.clone()));
            }
        }
    }
    Ok(out)
}

pub fn orthogonality(cfg: &Config) -> Outcome {
    let mut t = Tally::new();
    let res = (|| {
        // square enumeration may explode on the larger pairs; those are skipped
        let caps = Caps {
            max_results: 5_000,
            ..cfg.caps
        };
        let mut squares = 0;
        let mut cells = 0;
        for (en, e, mn, m) in orthogonality_pairs(&cfg.caps)? {
            let Ok(all) = enumerate_squares(&e, &m, &caps) else {
                continue;
            };
            let sample: Vec<&OrthSquare> = all.iter().take(12).collect();
            let mut diagonals = Vec::new();
            for sq in &sample {
                squares += 1;
                let d = diagonal_fill_in(sq, &caps);
                let all_d = enumerate_diagonals(sq, &caps)?;
                let ok = matches!(&d, Ok(d) if all_d.len() == 1 && all_d[0] == *d);
                t.check(ok, || {
                    format!(
                        "({en}, {mn}): fill-in {:?} against {} enumerated",
                        d.as_ref().err(),
                        all_d.len()
                    )
                });
                if let Ok(d) = d {
                    diagonals.push(d);
                }
            }
            // two-dimensional part over pairs of these squares
            for (i, s1) in sample.iter().enumerate().take(4) {
                for (j, s2) in sample.iter().enumerate().take(4) {
                    let (Some(t1), Some(t2)) = (diagonals.get(i), diagonals.get(j)) else {
                        continue;
                    };
                    for alpha in enumerate_nat_trans(&s1.left, &s2.left, &caps)? {
                        for beta in enumerate_nat_trans(&s1.right, &s2.right, &caps)? {
                            if whisker_left(&m, &alpha)? != whisker_right(&beta, &e)? {
                                continue;
                            }
                            cells += 1;
                            let theta = fill_in_2cell(&e, &m, t1, t2, &alpha, &beta, &caps);
                            t.check(theta.is_ok(), || {
                                format!("({en}, {mn}): 2-cell fill-in {:?}", theta.err())
                            });
                        }
                    }
                }
            }
        }
        t.check(squares >= 50, || format!("only {squares} squares generated"));
        t.notes
            .push(format!("{squares} squares, {cells} compatible 2-cell pairs"));
        Ok(())
    })();
    t.finish(3, "orthogonality", res)
}

pub fn closure_laws(cfg: &Config) -> Outcome {
    let mut t = Tally::new();
    let res = (|| {
        let caps = &cfg.caps;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
        let suite = random_suite(cfg.seed, cfg.random_cases);
        let (mut comp_e, mut cancel_e, mut comp_m, mut cancel_m, mut both, mut dsbs) = (0, 0, 0, 0, 0, 0);
        let mut seen: Vec<FinFunctor> = Vec::new();
        for f in &suite {
            let fact = build_splitting_category(f, caps)?;
            let (l, r) = (&fact.left, &fact.right);
            let l_epi = is_lax_epi(l, caps)?.lax_epi;

            // equivalences
            let eq = random_equivalence(&mut rng, f.target());
            t.check(is_lax_epi(&eq, caps)?.lax_epi, || {
                "an equivalence is not lax epi".into()
            });

            // lax epis compose: l then a functor out of the middle that is lax epi
            let mid = &fact.mid;
            let target = random_category(&mut rng, Bounds::default());
            if let Some(s) = random_functor(&mut rng, mid, &target) {
                let s_epi = is_lax_epi(&s, caps)?.lax_epi;
                let sr_epi = is_lax_epi(&l.then(&s)?, caps)?.lax_epi;
                if l_epi && s_epi {
                    comp_e += 1;
                    t.check(sr_epi, || "composite of lax epis is not lax epi".into());
                }
                if l_epi && sr_epi {
                    cancel_e += 1;
                    t.check(s_epi, || "lax epis are not right-cancellable".into());
                }
            }
            // the composite of an equivalence into the source with l
            let pre = random_equivalence(&mut rng, f.source());
            if l_epi {
                comp_e += 1;
                t.check(is_lax_epi(&pre.then(l)?, caps)?.lax_epi, || {
                    "equivalence then lax epi is not lax epi".into()
                });
            }

            // DSBs compose: right factor of a functor into the middle, then r
            let source = random_category(&mut rng, Bounds::default());
            let into_mid = random_functor(&mut rng, &source, mid);
            if let Some(q) = into_mid {
                let q_fact = build_splitting_category(&q, caps)?;
                let q_r = &q_fact.right;
                let r_dsb = is_dsb(r, caps)?.dsb;
                if r_dsb && is_dsb(q_r, caps)?.dsb {
                    comp_m += 1;
                    t.check(is_dsb(&q_r.then(r)?, caps)?.dsb, || {
                        "composite of DSBs is not a DSB".into()
                    });
                }
                if r_dsb && is_dsb(&q.then(r)?, caps)?.dsb {
                    cancel_m += 1;
                    t.check(is_dsb(&q, caps)?.dsb, || "DSBs are not left-cancellable".into());
                }
                seen.push(q);
            }
            seen.extend([f.clone(), l.clone(), r.clone(), eq]);
        }
        for g in &seen {
            let dsb = is_dsb(g, caps)?.dsb;
            if dsb {
                dsbs += 1;
                let d = derived_properties(g);
                t.check(d.faithful && d.conservative && d.reflects_identities, || {
                    format!("DSB with {d:?}")
                });
                if is_lax_epi(g, caps)?.lax_epi {
                    both += 1;
                    t.check(g.is_isomorphism(), || "a lax epi DSB is not an isomorphism".into());
                }
            }
        }
        t.notes.push(format!(
            "lax epi composites {comp_e}, cancellations {cancel_e}; DSB composites {comp_m}, cancellations {cancel_m}; {dsbs} DSBs, {both} also lax epi"
        ));
        Ok(())
    })();
    t.finish(4, "closure laws", res)
}

pub fn consistency(cfg: &Config) -> Outcome {
    let mut t = Tally::new();
    let res = (|| {
        let caps = &cfg.caps;
        for (i, f) in random_suite(cfg.seed, cfg.random_cases).iter().enumerate() {
            let fact = build_splitting_category(f, caps)?;
            let epi = is_lax_epi(f, caps)?.lax_epi;
            let iso = fact.right.is_isomorphism();
            t.check(epi == iso, || {
                format!("random#{i}: lax epi {epi}, right factor iso {iso}")
            });
        }
        Ok(())
    })();
    t.finish(5, "lax epi iff invertible right factor", res)
}

/// Whether two preorders on the same carrier have the same order.
fn same_order(p: &FinPreord, leq: impl Fn(usize, usize) -> bool) -> bool {
    (0..p.len()).all(|x| (0..p.len()).all(|y| p.leq(x, y) == leq(x, y)))
}

pub fn orders(cfg: &Config) -> Outcome {
    let mut t = Tally::new();
    let res = (|| {
        let caps = &cfg.caps;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x0bde);
        let probes: Vec<Arc<FinPreord>> = vec![
            Arc::new(FinPreord::chain(&["0", "1"])),
            Arc::new(FinPreord::discrete(&["0", "1"])),
            Arc::new(FinPreord::chain(&["0", "1", "2"])),
        ];
        for i in 0..60 {
            let n = rng.gen_range(1..=3);
            let a = Arc::new(random_preord(&mut rng, n, 0.3));
            let n = rng.gen_range(1..=4);
            let b = Arc::new(random_preord(&mut rng, n, 0.3));
            let f = random_monotone(&mut rng, &a, &b);
            let g = random_monotone(&mut rng, &a, &b);
            let (_, q) = coinserter_preord(&f, &g)?;
            t.check(q.is_bijective(), || {
                format!("pair {i}: coinserter map is not bijective")
            });
            t.check(is_lax_epi_preord(&q), || {
                format!("pair {i}: coinserter map is not a Preord lax epi")
            });
            // a bijection is the coinserter of its comma projections
            let (_, p1, p2) = comma_preord(&q)?;
            let (bar, _) = coinserter_preord(&p1, &p2)?;
            t.check(same_order(&bar, |x, y| q.target().leq(q.apply(x), q.apply(y))), || {
                format!("pair {i}: comma-coinserter differs from the coinserter")
            });
            if i < 10 {
                t.check(verify_coinserter_universal(&f, &g, &q, &probes), || {
                    format!("pair {i}: coinserter universal property fails")
                });
            }
        }
        for (name, h) in corpus_monotones() {
            if !h.is_bijective() {
                continue;
            }
            let (_, p1, p2) = comma_preord(&h)?;
            let (bar, _) = coinserter_preord(&p1, &p2)?;
            t.check(same_order(&bar, |x, y| h.target().leq(h.apply(x), h.apply(y))), || {
                format!("{name}: not the coinserter of its comma projections")
            });
        }
        let p = match corpus::get("monotone_coinserter_P").map(|d| d.decode()) {
            Some(Ok(Value::Monotone(p))) => p,
            other => panic!("corpus entry monotone_coinserter_P: {other:?}"),
        };
        t.check(is_lax_epi_preord(&p), || {
            "the coinserter inclusion is not a Preord lax epi".into()
        });
        t.check(!is_lax_epi(&monotone_as_functor(&p), caps)?.lax_epi, || {
            "the coinserter inclusion is a lax epi in Cat".into()
        });
        Ok(())
    })();
    t.finish(6, "orders", res)
}

pub fn inserters(cfg: &Config) -> Outcome {
    let mut t = Tally::new();
    let res = (|| {
        let caps = &cfg.caps;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x1175);
        let small = Bounds {
            max_objects: 3,
            max_morphisms: 6,
        };
        let mut pairs = 0;
        while pairs < 60 {
            let a = random_category(&mut rng, small);
            let b = random_category(&mut rng, small);
            let (Some(f), Some(g)) = (random_functor(&mut rng, &a, &b), random_functor(&mut rng, &a, &b)) else {
                continue;
            };
            pairs += 1;
            let ins = inserter(&f, &g)?;
            t.check(is_dsb(&ins.projection, caps)?.dsb, || {
                format!("pair {pairs}: inserter projection is not a DSB")
            });
        }
        let report = hunt(&mut rng, 40, small, 300, caps)?;
        t.notes.push(format!(
            "hunt: {} functors, {} DSBs, {} exhibited as inserters, {} unresolved",
            report.examined,
            report.dsbs(),
            report.dsbs() - report.candidates().count(),
            report.candidates().count()
        ));
        Ok(())
    })();
    t.finish(7, "inserters", res)
}

fn vcat_cases(v: &Arc<Frame>) -> Vec<VFunctor> {
    let n = v.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let y = Arc::new(
                VCat::new(v.clone(), vec!["y0".into(), "y1".into()], vec![v.top(), a, b, v.top()])
                    .expect("two objects always compose"),
            );
            let maps: [&[usize]; 6] = [&[0], &[1], &[0, 1], &[1, 0], &[0, 0], &[1, 1]];
            for map in maps {
                let m = map.len();
                let full: Vec<usize> = (0..m * m).map(|i| y.hom(map[i / m], map[i % m])).collect();
                let sparse: Vec<usize> = (0..m * m)
                    .map(|i| if i / m == i % m { v.top() } else { v.bottom() })
                    .collect();
                for hom in [full, sparse] {
                    let names = (0..m).map(|i| format!("x{i}")).collect();
                    let x = Arc::new(VCat::new(v.clone(), names, hom).expect("diagonal is top"));
                    out.push(VFunctor::new(x, y.clone(), map.to_vec()).expect("bounded by construction"));
                }
            }
        }
    }
    out
}

pub fn quantale(cfg: &Config) -> Outcome {
    let mut t = Tally::new();
    let res = (|| {
        let caps = &cfg.caps;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xf4a3);
        let mut cases = 0;
        let mut compare = |j: &VFunctor, label: &str, t: &mut Tally| -> Result<()> {
            cases += 1;
            let meet = is_vlax_epi_meet(j, caps)?;
            let dense = is_vlax_epi_density(j);
            let op = j.opposite();
            t.check(meet == dense, || format!("{label}: meet {meet}, density {dense}"));
            t.check(is_vlax_epi_meet(&op, caps)? == meet, || {
                format!("{label}: meet test changes under op")
            });
            t.check(is_vlax_epi_density(&op) == dense, || {
                format!("{label}: density test changes under op")
            });
            Ok(())
        };
        for v in Frame::all_small() {
            for (i, j) in vcat_cases(&v).iter().enumerate() {
                compare(j, &format!("{} exhaustive #{i}", v.name()), &mut t)?;
            }
            for i in 0..60 {
                let n = rng.gen_range(3..=4);
                let y = Arc::new(random_vcat(&mut rng, &v, n));
                let n = rng.gen_range(1..=4);
                let j = random_vfunctor_into(&mut rng, &y, n);
                compare(&j, &format!("{} random #{i}", v.name()), &mut t)?;
            }
        }
        t.check(cases >= 500, || format!("only {cases} cases"));
        let two = Arc::new(Frame::boolean());
        for i in 0..100 {
            let n = rng.gen_range(1..=3);
            let p = Arc::new(random_preord(&mut rng, n, 0.4));
            let n = rng.gen_range(1..=4);
            let q = Arc::new(random_preord(&mut rng, n, 0.4));
            let f = random_monotone(&mut rng, &p, &q);
            let j = vfunctor_from_monotone(&f, &two)?;
            let pre = is_lax_epi_preord(&f);
            t.check(
                is_vlax_epi_density(&j) == pre && is_vlax_epi_meet(&j, caps)? == pre,
                || format!("Boolean case {i}: V-verdicts differ from the Preord verdict {pre}"),
            );
        }
        t.notes.push(format!(
            "{cases} V-functor cases over {} frames",
            Frame::all_small().len()
        ));
        Ok(())
    })();
    t.finish(8, "quantale", res)
}

pub fn groups(cfg: &Config) -> Outcome {
    let mut t = Tally::new();
    let res = (|| {
        let family = probe_family(cfg.probe_order);
        let mut search = ProbeSearch::new();
        let (mut homs, mut detected) = (0, 0);
        let groups = small_groups();
        for a in &groups {
            for b in &groups {
                for f in enumerate_homs(a, b) {
                    homs += 1;
                    let onto = (0..b.order()).all(|y| (0..a.order()).any(|x| f.apply(x) == y));
                    t.check(is_lax_epi_grp(&f) == onto, || {
                        format!("{} → {}: verdict differs from surjectivity", a.name(), b.name())
                    });
                    let (q, m) = image_factorization(&f)?;
                    t.check(q.is_surjective() && m.is_injective() && q.then(&m)? == f, || {
                        format!("{} → {}: image factorization is wrong", a.name(), b.name())
                    });
                    let violation = search.find_violation(&f, &family);
                    if onto {
                        t.check(violation.is_none(), || {
                            format!("{} → {}: probe violation for a surjection", a.name(), b.name())
                        });
                    } else if violation.is_some() {
                        detected += 1;
                    }
                }
            }
        }
        t.notes.push(format!(
            "{homs} homomorphisms; probes refute {detected} non-surjective ones"
        ));
        Ok(())
    })();
    t.finish(9, "groups", res)
}
