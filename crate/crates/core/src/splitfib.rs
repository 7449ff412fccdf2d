//! Splits of identities through a functor, split diagrams, and the
//! discrete splitting bifibration (DSB) check.

use std::collections::HashMap;

use crate::caps::Caps;
use crate::error::Result;
use crate::fincat::{FinFunctor, MorId, ObjId};
use crate::laxepi::{CommaAtlas, Triple, ZigZag};

/// A factorization `k ∘ h = 1_b` through `Pe` whose two composite
/// factorizations of `h ∘ k` lie in one component of `(h ∘ k)⇓P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PSplit {
    pub b: ObjId,
    pub e: ObjId,
    pub h: MorId,
    pub k: MorId,
}

/// `g: b → c` with splits of `1_b` and `1_c` whose composites
/// `(h, e, g∘k)` and `(h'∘g, e', k')` are connected in `g⇓P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PSplitDiagram {
    pub g: MorId,
    pub top: PSplit,
    pub bottom: PSplit,
    pub zigzag: ZigZag,
}

/// A rectangle in the source lying over a split diagram, with the middle
/// objects fixed to the diagram's `e` and `e'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lift {
    pub b0: ObjId,
    pub c0: ObjId,
    pub g0: MorId,
    pub h0: MorId,
    pub k0: MorId,
    pub h0_prime: MorId,
    pub k0_prime: MorId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsbVerdict {
    pub dsb: bool,
    /// On failure: a split diagram and all of its lifts (never exactly one).
    pub witness: Option<(PSplitDiagram, Vec<Lift>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivedProperties {
    pub faithful: bool,
    pub conservative: bool,
    pub reflects_identities: bool,
}

fn endpoints_ok(atlas: &CommaAtlas, s: &PSplit) -> bool {
    let p = atlas.functor();
    let t = p.target();
    s.e.0 < p.source().num_objects()
        && t.src(s.h) == s.b
        && t.dst(s.h) == p.ob(s.e)
        && t.src(s.k) == p.ob(s.e)
        && t.dst(s.k) == s.b
}

pub fn is_p_split(atlas: &CommaAtlas, split: &PSplit) -> bool {
    if !endpoints_ok(atlas, split) {
        return false;
    }
    let t = atlas.functor().target();
    if t.compose(split.h, split.k) != t.identity(split.b) {
        return false;
    }
    let hk = t.compose(split.k, split.h);
    let one = t.identity(atlas.functor().ob(split.e));
    let left = Triple {
        h: one,
        a: split.e,
        k: hk,
    };
    let right = Triple {
        h: hk,
        a: split.e,
        k: one,
    };
    let comma = atlas.comma(hk);
    comma.component(&left).is_some() && comma.component(&left) == comma.component(&right)
}

/// All splits of `1_b`, ordered by `(e, h, k)`.
pub fn enumerate_splits(atlas: &CommaAtlas, b: ObjId) -> Vec<PSplit> {
    let p = atlas.functor();
    let t = p.target();
    let mut out = Vec::new();
    for e in p.source().objects() {
        for &h in t.hom(b, p.ob(e)) {
            for &k in t.hom(p.ob(e), b) {
                let split = PSplit { b, e, h, k };
                if is_p_split(atlas, &split) {
                    out.push(split);
                }
            }
        }
    }
    out
}

/// Check a candidate diagram; on success return it with its zig-zag.
pub fn is_split_diagram(atlas: &CommaAtlas, g: MorId, top: &PSplit, bottom: &PSplit) -> Option<PSplitDiagram> {
    let t = atlas.functor().target();
    if top.b != t.src(g) || bottom.b != t.dst(g) || !is_p_split(atlas, top) || !is_p_split(atlas, bottom) {
        return None;
    }
    let upper = Triple {
        h: top.h,
        a: top.e,
        k: t.compose(top.k, g),
    };
    let lower = Triple {
        h: t.compose(g, bottom.h),
        a: bottom.e,
        k: bottom.k,
    };
    let zigzag = atlas.comma(g).zigzag_witness(&upper, &lower)?;
    Some(PSplitDiagram {
        g,
        top: *top,
        bottom: *bottom,
        zigzag,
    })
}

/// Source morphisms grouped by their image.
pub(crate) fn fibers(p: &FinFunctor) -> Vec<Vec<MorId>> {
    let mut out = vec![Vec::new(); p.target().num_morphisms()];
    for m in p.source().morphisms() {
        out[p.mor(m).0].push(m);
    }
    out
}

/// All lifts of a split diagram, lexicographic.
pub fn lift_split_diagram(p: &FinFunctor, diagram: &PSplitDiagram) -> Vec<Lift> {
    lift_with_fibers(p, &fibers(p), diagram)
}

pub(crate) fn lift_with_fibers(p: &FinFunctor, fibers: &[Vec<MorId>], d: &PSplitDiagram) -> Vec<Lift> {
    let s = p.source();
    let (e, e2) = (d.top.e, d.bottom.e);
    let mut out = Vec::new();
    for &h0 in fibers[d.top.h.0].iter().filter(|&&m| s.dst(m) == e) {
        let b0 = s.src(h0);
        for &k0 in fibers[d.top.k.0].iter().filter(|&&m| s.src(m) == e && s.dst(m) == b0) {
            let top_loop = s.compose(h0, k0);
            for &h1 in fibers[d.bottom.h.0].iter().filter(|&&m| s.dst(m) == e2) {
                let c0 = s.src(h1);
                for &k1 in fibers[d.bottom.k.0]
                    .iter()
                    .filter(|&&m| s.src(m) == e2 && s.dst(m) == c0)
                {
                    let bottom_loop = s.compose(h1, k1);
                    for &g0 in fibers[d.g.0].iter().filter(|&&m| s.src(m) == b0 && s.dst(m) == c0) {
                        if s.compose(top_loop, g0) == s.compose(g0, bottom_loop) {
                            out.push(Lift {
                                b0,
                                c0,
                                g0,
                                h0,
                                k0,
                                h0_prime: h1,
                                k0_prime: k1,
                            });
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Decide whether `p` is a discrete splitting bifibration: every split
/// diagram, over every morphism including identities, has exactly one lift.
pub fn is_dsb(p: &FinFunctor, caps: &Caps) -> Result<DsbVerdict> {
    let atlas = CommaAtlas::new(p, caps)?;
    is_dsb_with(&atlas)
}

pub fn is_dsb_with(atlas: &CommaAtlas) -> Result<DsbVerdict> {
    let p = atlas.functor();
    let t = p.target();
    let fibers = fibers(p);
    let mut splits: HashMap<ObjId, Vec<PSplit>> = HashMap::new();
    for b in t.objects() {
        splits.insert(b, enumerate_splits(atlas, b));
    }
    for g in t.morphisms() {
        for top in &splits[&t.src(g)] {
            for bottom in &splits[&t.dst(g)] {
                if let Some(d) = is_split_diagram(atlas, g, top, bottom) {
                    let lifts = lift_with_fibers(p, &fibers, &d);
                    if lifts.len() != 1 {
                        return Ok(DsbVerdict {
                            dsb: false,
                            witness: Some((d, lifts)),
                        });
                    }
                }
            }
        }
    }
    Ok(DsbVerdict {
        dsb: true,
        witness: None,
    })
}

/// Faithfulness, conservativity and identity reflection, checked directly.
pub fn derived_properties(p: &FinFunctor) -> DerivedProperties {
    let (s, t) = (p.source(), p.target());
    DerivedProperties {
        faithful: p.is_faithful(),
        conservative: s.morphisms().all(|f| !t.is_iso(p.mor(f)) || s.is_iso(f)),
        reflects_identities: s.morphisms().all(|f| !t.is_identity(p.mor(f)) || s.is_identity(f)),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::concrete::ConcreteCategory;
    use crate::fincat::FinCat;

    fn iso_pair() -> Arc<FinCat> {
        // two objects joined by an isomorphism
        let mut c = ConcreteCategory::new();
        let a = c.object("a", 1);
        let b = c.object("b", 1);
        c.generator("f", a, b, vec![0]).unwrap();
        c.generator("f'", b, a, vec![0]).unwrap();
        Arc::new(c.close(16).unwrap().category)
    }

    #[test]
    fn identity_is_a_dsb() {
        let c = iso_pair();
        let id = FinFunctor::identity(&c);
        let verdict = is_dsb(&id, &Caps::default()).unwrap();
        assert!(verdict.dsb);
        let atlas = CommaAtlas::new(&id, &Caps::default()).unwrap();
        let splits = enumerate_splits(&atlas, ObjId(0));
        assert!(splits.contains(&PSplit {
            b: ObjId(0),
            e: ObjId(0),
            h: c.identity(ObjId(0)),
            k: c.identity(ObjId(0)),
        }));
        // splits through the other object via f and its inverse
        assert_eq!(splits.len(), 2);
        assert_eq!(
            derived_properties(&id),
            DerivedProperties {
                faithful: true,
                conservative: true,
                reflects_identities: true
            }
        );
    }

    #[test]
    fn identity_diagram_lifts_to_itself() {
        let c = iso_pair();
        let id = FinFunctor::identity(&c);
        let atlas = CommaAtlas::new(&id, &Caps::default()).unwrap();
        let one = c.identity(ObjId(0));
        let split = PSplit {
            b: ObjId(0),
            e: ObjId(0),
            h: one,
            k: one,
        };
        let d = is_split_diagram(&atlas, one, &split, &split).unwrap();
        let lifts = lift_split_diagram(&id, &d);
        assert_eq!(
            lifts,
            vec![Lift {
                b0: ObjId(0),
                c0: ObjId(0),
                g0: one,
                h0: one,
                k0: one,
                h0_prime: one,
                k0_prime: one
            }]
        );
    }

    #[test]
    fn non_split_factorization_is_rejected() {
        let c = iso_pair();
        let id = FinFunctor::identity(&c);
        let atlas = CommaAtlas::new(&id, &Caps::default()).unwrap();
        let f = c.morphism_by_name("f").unwrap();
        // f followed by f is not even composable, and (f, 1_b) lands in the wrong place
        assert!(!is_p_split(
            &atlas,
            &PSplit {
                b: ObjId(0),
                e: ObjId(1),
                h: f,
                k: c.identity(ObjId(1)),
            }
        ));
    }

    #[test]
    fn collapsing_an_isomorphism_is_not_a_dsb() {
        // iso_pair → terminal is an equivalence, hence lax epi but not a DSB
        let c = iso_pair();
        let t = Arc::new(FinCat::terminal());
        let p = FinFunctor::new(
            c.clone(),
            t,
            vec![ObjId(0), ObjId(0)],
            vec![MorId(0); c.num_morphisms()],
        )
        .unwrap();
        let verdict = is_dsb(&p, &Caps::default()).unwrap();
        assert!(!verdict.dsb);
        let (_, lifts) = verdict.witness.unwrap();
        assert_ne!(lifts.len(), 1);
        let props = derived_properties(&p);
        assert!(props.faithful);
        assert!(!props.reflects_identities);
    }
}
