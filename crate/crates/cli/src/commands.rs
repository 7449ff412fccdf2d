use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Value as Json};

use laxcat::dot::{category_dot, comma_dot};
use laxcat::factorize::{build_splitting_category, diagonal_fill_in, enumerate_diagonals};
use laxcat::fincat::{inserter, FinCat};
use laxcat::format::{parse, serialize, CategoryDoc, Document, FunctorDoc, MonotoneDoc, PreordDoc, Value};
use laxcat::grp2::{is_lax_epi_grp, probe_family, GroupHom, ProbeSearch};
use laxcat::laxepi::{comma_over_morphism, is_lax_epi, LaxEpiWitness, Triple};
use laxcat::orders::{
    as_category, coinserter_preord, inserter_preord, is_lax_epi_pos, is_lax_epi_preord, is_lax_strong_mono_preord,
    monotone_as_functor, verify_coinserter_universal, FinPreord, MonotoneMap,
};
use laxcat::selftest::{run_all, Config};
use laxcat::splitfib::{is_dsb, PSplit};
use laxcat::vquant::{is_vlax_epi_density, is_vlax_epi_meet, vfunctor_from_monotone, Frame, VFunctor};
use laxcat::{Caps, Error, FinFunctor};

use crate::report::{Report, Status};

/// A failure that maps to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<Report, InputError>;

struct Loaded {
    doc: Document,
    value: Value,
}

fn load(path: &str) -> Result<Loaded, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))?;
    let doc = parse(&text).map_err(|e| InputError(format!("{path}: {e}")))?;
    let value = doc.decode().map_err(|e| InputError(format!("{path}: {e}")))?;
    Ok(Loaded { doc, value })
}

fn wrong_kind(path: &str, doc: &Document, wanted: &str) -> InputError {
    InputError(format!("{path}: expected {wanted}, found a {} document", doc.kind()))
}

fn write(path: &Path, doc: &Document) -> Result<(), InputError> {
    fs::write(path, serialize(doc)).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn triple(f: &FinFunctor, x: &Triple) -> String {
    let b = f.target();
    format!(
        "({}, {}, {})",
        b.morphism_name(x.h),
        f.source().object_name(x.a),
        b.morphism_name(x.k)
    )
}

fn split(f: &FinFunctor, s: &PSplit) -> Json {
    let b = f.target();
    json!({
        "b": b.object_name(s.b),
        "e": f.source().object_name(s.e),
        "h": b.morphism_name(s.h),
        "k": b.morphism_name(s.k),
    })
}

fn cat_size(c: &FinCat) -> String {
    format!("{} objects, {} morphisms", c.num_objects(), c.num_morphisms())
}

pub fn validate(paths: &[String]) -> Outcome {
    let mut r = Report::new("validate", paths);
    let mut kinds = Vec::new();
    for path in paths {
        let loaded = load(path)?;
        let what = match &loaded.value {
            Value::Category(c) => cat_size(c),
            Value::Functor(f) => format!("{} → {}", cat_size(f.source()), cat_size(f.target())),
            Value::Preord(p) => format!("{} elements", p.len()),
            Value::Group(g) => format!("order {}", g.order()),
            Value::Frame(v) => format!("{} elements", v.len()),
            Value::VCat(y) => format!("{} objects over {}", y.len(), y.frame().name()),
            _ => "valid".to_string(),
        };
        r.line(format!("{path}: {} '{}': {what}", loaded.doc.kind(), loaded.doc.name()));
        kinds.push(json!({"path": path, "kind": loaded.doc.kind(), "name": loaded.doc.name()}));
    }
    r.summary = format!("{} document(s) valid", paths.len());
    r.detail("documents", kinds);
    Ok(r)
}

pub fn laxepi(path: &str, probe_order: usize, caps: &Caps) -> Outcome {
    let loaded = load(path)?;
    match loaded.value {
        Value::Functor(f) => laxepi_functor(path, &f, caps),
        Value::Monotone(f) => laxepi_monotone(path, &f, caps),
        Value::Hom(f) => laxepi_hom(path, &f, probe_order),
        Value::VFunctor(j) => vlaxepi_of(path, &j, caps),
        _ => Err(wrong_kind(
            path,
            &loaded.doc,
            "a functor, monotone map, homomorphism or V-functor",
        )),
    }
}

fn functor_witness(f: &FinFunctor, w: &LaxEpiWitness) -> (Json, String) {
    let b = f.target();
    match w {
        LaxEpiWitness::Empty { g } => (
            json!({"g": b.morphism_name(*g), "comma": "empty"}),
            format!("{}⇓F is empty", b.morphism_name(*g)),
        ),
        LaxEpiWitness::Disconnected { g, first, second } => (
            json!({
                "g": b.morphism_name(*g),
                "comma": "disconnected",
                "first": triple(f, first),
                "second": triple(f, second),
            }),
            format!(
                "{}⇓F is disconnected: {} and {} lie in different components",
                b.morphism_name(*g),
                triple(f, first),
                triple(f, second)
            ),
        ),
    }
}

fn laxepi_functor(path: &str, f: &FinFunctor, caps: &Caps) -> Outcome {
    let mut r = Report::new("laxepi", &[path.to_string()]);
    let v = is_lax_epi(f, caps)?;
    if !v.recheck(f) {
        return Err(InputError("witness failed its independent re-check".into()));
    }
    r.status = Status::from_verdict(v.lax_epi);
    r.detail("engine", "comma");
    match &v.witness {
        None => r.summary = "lax epimorphism: every g⇓F is connected".into(),
        Some(w) => {
            let (j, text) = functor_witness(f, w);
            r.summary = "not a lax epimorphism".into();
            r.line(format!("witness: {text}"));
            r.witness = Some(j);
        }
    }
    Ok(r)
}

fn laxepi_monotone(path: &str, f: &MonotoneMap, caps: &Caps) -> Outcome {
    let mut r = Report::new("laxepi", &[path.to_string()]);
    let preord = is_lax_epi_preord(f);
    r.status = Status::from_verdict(preord);
    r.detail("engine", "preord");
    let pos = is_lax_epi_pos(f).ok();
    r.detail("in_pos", pos.map_or(Json::Null, Json::Bool));
    let as_cat = monotone_as_functor(f);
    let cat = is_lax_epi(&as_cat, caps)?;
    r.detail("in_cat", cat.lax_epi);
    let t = f.target();
    match (0..t.len()).find(|&b| !f.map().iter().any(|&fa| t.iso(fa, b))) {
        None => r.summary = "lax epimorphism in Preord: every element is isomorphic to an image".into(),
        Some(b) => {
            r.summary = "not a lax epimorphism in Preord".into();
            r.line(format!("witness: {} is isomorphic to no image element", t.name(b)));
            r.witness = Some(json!({"element": t.name(b)}));
        }
    }
    if let Some(p) = pos {
        r.line(format!("in Pos: {p}"));
    }
    r.line(format!("as a functor in Cat: {}", cat.lax_epi));
    if let Some(w) = &cat.witness {
        r.line(format!("  Cat witness: {}", functor_witness(&as_cat, w).1));
    }
    Ok(r)
}

fn laxepi_hom(path: &str, f: &GroupHom, probe_order: usize) -> Outcome {
    let mut r = Report::new("laxepi", &[path.to_string()]);
    let surjective = is_lax_epi_grp(f);
    r.status = Status::from_verdict(surjective);
    r.detail("engine", "image");
    r.detail("probe_order", probe_order);
    let family = probe_family(probe_order);
    let violation = ProbeSearch::new().find_violation(f, &family);
    if surjective && violation.is_some() {
        return Err(InputError("a surjective homomorphism failed a probe".into()));
    }
    if surjective {
        r.summary = "lax epimorphism: the homomorphism is surjective".into();
        return Ok(r);
    }
    r.summary = "not a lax epimorphism: the homomorphism is not surjective".into();
    match violation {
        Some(w) => {
            let names = |h: &GroupHom| -> Vec<String> {
                h.map()
                    .iter()
                    .map(|&x| h.target().element_name(x).to_string())
                    .collect()
            };
            let c = w.g.target();
            r.line(format!(
                "witness: γ = {} in {} intertwines g∘f and h∘f but not g and h",
                c.element_name(w.gamma),
                c.name()
            ));
            r.witness = Some(json!({
                "codomain": c.name(),
                "g": names(&w.g),
                "h": names(&w.h),
                "gamma": c.element_name(w.gamma),
            }));
        }
        None => {
            r.line(format!("no probe up to order {probe_order} separates it"));
        }
    }
    Ok(r)
}

pub fn dsb(path: &str, caps: &Caps) -> Outcome {
    let loaded = load(path)?;
    let Value::Functor(f) = loaded.value else {
        return Err(wrong_kind(path, &loaded.doc, "a functor"));
    };
    let mut r = Report::new("dsb", &[path.to_string()]);
    let v = is_dsb(&f, caps)?;
    r.status = Status::from_verdict(v.dsb);
    match &v.witness {
        None => r.summary = "discrete splitting bifibration: every split diagram lifts uniquely".into(),
        Some((d, lifts)) => {
            let g = f.target().morphism_name(d.g);
            r.summary = "not a discrete splitting bifibration".into();
            r.line(format!("witness: the split diagram over {g} has {} lifts", lifts.len()));
            let s = f.source();
            r.witness = Some(json!({
                "g": g,
                "top": split(&f, &d.top),
                "bottom": split(&f, &d.bottom),
                "lifts": lifts.iter().map(|l| json!({
                    "from": s.object_name(l.b0),
                    "to": s.object_name(l.c0),
                    "via": s.morphism_name(l.g0),
                })).collect::<Vec<_>>(),
            }));
        }
    }
    Ok(r)
}

pub fn factorize(path: &str, out: &Path, caps: &Caps) -> Outcome {
    let loaded = load(path)?;
    let (Document::Functor(doc), Value::Functor(f)) = (&loaded.doc, &loaded.value) else {
        return Err(wrong_kind(path, &loaded.doc, "a functor"));
    };
    let fact = build_splitting_category(f, caps)?;
    fs::create_dir_all(out).map_err(|e| InputError(format!("{}: {e}", out.display())))?;
    let files: [(PathBuf, Document); 3] = [
        (
            out.join("mid.json"),
            Document::Category(CategoryDoc::encode("mid", &fact.mid)),
        ),
        (
            out.join("left.json"),
            Document::Functor(FunctorDoc::encode("left", &doc.source.name, "mid", &fact.left)),
        ),
        (
            out.join("right.json"),
            Document::Functor(FunctorDoc::encode("right", "mid", &doc.target.name, &fact.right)),
        ),
    ];
    for (p, d) in &files {
        write(p, d)?;
    }
    let mut r = Report::new("factorize", &[path.to_string()]);
    r.detail("mid_objects", fact.mid.num_objects());
    r.detail("mid_morphisms", fact.mid.num_morphisms());
    r.detail(
        "written",
        files.iter().map(|(p, _)| p.display().to_string()).collect::<Vec<_>>(),
    );
    for (p, _) in &files {
        r.line(format!("wrote {}", p.display()));
    }
    if fact.left.then(&fact.right)? != *f {
        return Err(InputError("the factors do not compose to the input".into()));
    }
    let left = is_lax_epi(&fact.left, caps)?;
    let right = is_dsb(&fact.right, caps)?;
    r.detail("left_lax_epi", left.lax_epi);
    r.detail("right_dsb", right.dsb);
    r.status = Status::from_verdict(left.lax_epi && right.dsb);
    r.summary = format!("factorized through a category with {}", cat_size(&fact.mid));
    if let Some(w) = &left.witness {
        let (j, text) = functor_witness(&fact.left, w);
        r.line(format!("left factor is not a lax epimorphism: {text}"));
        r.witness = Some(json!({"factor": "left", "lax_epi": j}));
    }
    if let Some((d, lifts)) = &right.witness {
        let g = fact.right.target().morphism_name(d.g);
        r.line(format!(
            "right factor is not a DSB: the split diagram over {g} has {} lifts",
            lifts.len()
        ));
        r.witness = Some(json!({"factor": "right", "g": g, "lifts": lifts.len()}));
    }
    Ok(r)
}

pub fn fillin(path: &str, caps: &Caps) -> Outcome {
    let loaded = load(path)?;
    let Value::Square(square) = loaded.value else {
        return Err(wrong_kind(path, &loaded.doc, "a square"));
    };
    let mut r = Report::new("fillin", &[path.to_string()]);
    let all = enumerate_diagonals(&square, caps)?;
    r.detail("diagonals_by_enumeration", all.len());
    let built = match diagonal_fill_in(&square, caps) {
        Ok(t) => Some(t),
        Err(e @ (Error::NotOrthogonalInput(_) | Error::NoSolution(_) | Error::MultipleSolutions { .. })) => {
            r.line(format!("construction: {e}"));
            r.detail("construction", e.to_string());
            None
        }
        Err(e) => return Err(e.into()),
    };
    match (built, all.as_slice()) {
        (Some(t), [only]) if t == *only => {
            let (b, c) = (t.source(), t.target());
            let objects: serde_json::Map<String, Json> = b
                .objects()
                .map(|o| (b.object_name(o).to_string(), json!(c.object_name(t.ob(o)))))
                .collect();
            r.summary = "unique diagonal".into();
            r.detail("diagonal", objects);
        }
        (Some(_), _) => {
            return Err(InputError(format!(
                "the constructed diagonal is not the unique enumerated one ({} found)",
                all.len()
            )))
        }
        (None, _) => {
            r.status = Status::False;
            r.summary = format!("no unique diagonal: enumeration finds {}", all.len());
            r.witness = Some(json!({"diagonals": all.len()}));
        }
    }
    Ok(r)
}

fn load_pair(f: &str, g: &str) -> Result<(Loaded, Loaded), InputError> {
    Ok((load(f)?, load(g)?))
}

pub fn inserter_cmd(f: &str, g: &str, out: Option<&Path>, caps: &Caps) -> Outcome {
    let (lf, lg) = load_pair(f, g)?;
    let mut r = Report::new("inserter", &[f.to_string(), g.to_string()]);
    match (&lf.value, &lg.value) {
        (Value::Functor(ff), Value::Functor(gg)) => {
            let ins = inserter(ff, gg)?;
            let v = is_dsb(&ins.projection, caps)?;
            r.status = Status::from_verdict(v.dsb);
            r.summary = format!(
                "inserter with {}; projection is {}a DSB",
                cat_size(&ins.category),
                if v.dsb { "" } else { "not " }
            );
            if let Some(out) = out {
                let Document::Functor(d) = &lf.doc else { unreachable!() };
                let doc = FunctorDoc::encode("projection", "inserter", &d.source.name, &ins.projection);
                write(out, &Document::Functor(doc))?;
                r.line(format!("wrote {}", out.display()));
            }
        }
        (Value::Monotone(ff), Value::Monotone(gg)) => {
            let (p, inc) = inserter_preord(ff, gg)?;
            let strong = is_lax_strong_mono_preord(&inc);
            r.status = Status::from_verdict(strong);
            r.summary = format!(
                "inserter with {} elements; inclusion is {}a lax strong mono",
                p.len(),
                if strong { "" } else { "not " }
            );
            if let Some(out) = out {
                let Document::Monotone(d) = &lf.doc else { unreachable!() };
                let doc = MonotoneDoc::encode("inclusion", "inserter", &d.source.name, &inc);
                write(out, &Document::Monotone(doc))?;
                r.line(format!("wrote {}", out.display()));
            }
        }
        _ => return Err(wrong_kind(f, &lf.doc, "two functors or two monotone maps")),
    }
    Ok(r)
}

fn probe_preorders() -> Vec<Arc<FinPreord>> {
    let mut probes = vec![
        FinPreord::discrete(&["p"]),
        FinPreord::discrete(&["p", "q"]),
        FinPreord::chain(&["p", "q"]),
        FinPreord::chain(&["p", "q", "r"]),
        FinPreord::discrete(&["p", "q", "r"]),
    ];
    probes.push(FinPreord::generated(vec!["p".into(), "q".into()], &[(0, 1), (1, 0)]).expect("in range"));
    probes.into_iter().map(Arc::new).collect()
}

pub fn coinserter_cmd(f: &str, g: &str, verify_universal: bool, out: Option<&Path>) -> Outcome {
    let (lf, lg) = load_pair(f, g)?;
    let (Value::Monotone(ff), Value::Monotone(gg)) = (&lf.value, &lg.value) else {
        return Err(wrong_kind(f, &lf.doc, "two monotone maps"));
    };
    let mut r = Report::new("coinserter", &[f.to_string(), g.to_string()]);
    let (bar, q) = coinserter_preord(ff, gg)?;
    let lax = is_lax_epi_preord(&q);
    r.detail("bijective", q.is_bijective());
    r.detail("lax_epi", lax);
    let mut ok = lax;
    if verify_universal {
        let universal = verify_coinserter_universal(ff, gg, &q, &probe_preorders());
        r.detail("universal", universal);
        r.line(format!("universal property against the probe preorders: {universal}"));
        ok &= universal;
    }
    r.status = Status::from_verdict(ok);
    r.summary = format!("coinserter with {} elements", bar.len());
    let relations: Vec<Json> = (0..bar.len())
        .flat_map(|x| (0..bar.len()).map(move |y| (x, y)))
        .filter(|&(x, y)| x != y && bar.leq(x, y))
        .map(|(x, y)| json!([bar.name(x), bar.name(y)]))
        .collect();
    r.detail("relations", relations);
    if !ok {
        r.witness = Some(json!({"lax_epi": lax}));
    }
    if let Some(out) = out {
        write(out, &Document::Preord(PreordDoc::encode("coinserter", &bar)))?;
        r.line(format!("wrote {}", out.display()));
    }
    Ok(r)
}

pub fn vlaxepi(path: &str, caps: &Caps) -> Outcome {
    let loaded = load(path)?;
    match loaded.value {
        Value::VFunctor(j) => vlaxepi_of(path, &j, caps),
        Value::Monotone(f) => {
            let j = vfunctor_from_monotone(&f, &Arc::new(Frame::boolean()))?;
            vlaxepi_of(path, &j, caps)
        }
        _ => Err(wrong_kind(path, &loaded.doc, "a V-functor or monotone map")),
    }
}

fn vlaxepi_of(path: &str, j: &VFunctor, caps: &Caps) -> Outcome {
    let mut r = Report::new("vlaxepi", &[path.to_string()]);
    let density = is_vlax_epi_density(j);
    let meet = is_vlax_epi_meet(j, caps)?;
    if density != meet {
        return Err(InputError(format!("engines disagree: density {density}, meet {meet}")));
    }
    r.status = Status::from_verdict(density);
    r.detail("frame", j.target().frame().name());
    r.detail("density", density);
    r.detail("meet", meet);
    r.summary = if density {
        "V-lax epimorphism: absolutely dense".into()
    } else {
        "not a V-lax epimorphism".into()
    };
    if !density {
        r.witness = Some(json!({"density": false, "meet": false}));
    }
    Ok(r)
}

/// Graphviz text for a category, preorder, or functor (its codomain, or
/// the comma over one morphism with `comma`).
pub fn dot(path: &str, comma: Option<&str>, caps: &Caps) -> Result<String, InputError> {
    let loaded = load(path)?;
    let name = loaded.doc.name().to_string();
    let functor = match loaded.value {
        Value::Category(c) if comma.is_none() => return Ok(category_dot(&name, &c)),
        Value::Preord(p) if comma.is_none() => return Ok(category_dot(&name, &as_category(&p))),
        Value::Functor(f) => f,
        Value::Monotone(f) => monotone_as_functor(&f),
        _ => {
            let wanted = if comma.is_some() {
                "a functor"
            } else {
                "a category, preorder or functor"
            };
            return Err(wrong_kind(path, &loaded.doc, wanted));
        }
    };
    match comma {
        None => Ok(category_dot(&name, functor.target())),
        Some(g) => {
            let m = functor
                .target()
                .morphism_by_name(g)
                .ok_or_else(|| InputError(format!("{path}: no morphism named {g} in the codomain")))?;
            Ok(comma_dot(&functor, &comma_over_morphism(&functor, m, caps)?))
        }
    }
}

pub fn selftest(seed: u64, cases: usize, probe_order: usize, caps: &Caps) -> Outcome {
    let mut r = Report::new("selftest", &[]);
    let outcomes = run_all(&Config {
        seed,
        random_cases: cases,
        probe_order,
        caps: *caps,
    });
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).collect();
    for o in &outcomes {
        r.line(o.line());
    }
    r.status = Status::from_verdict(failed.is_empty());
    r.summary = format!(
        "{} of {} criteria passed",
        outcomes.len() - failed.len(),
        outcomes.len()
    );
    r.detail(
        "criteria",
        outcomes
            .iter()
            .map(|o| json!({"criterion": o.criterion, "passed": o.passed, "checks": o.checks, "detail": o.detail}))
            .collect::<Vec<_>>(),
    );
    if !failed.is_empty() {
        r.witness = Some(json!(failed.iter().map(|o| o.criterion).collect::<Vec<_>>()));
    }
    Ok(r)
}
