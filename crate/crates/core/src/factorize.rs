//! The (lax epimorphism, DSB) factorization of a functor through its
//! splitting category, and diagonal fill-ins for squares of the two classes.

use std::collections::HashMap;
use std::sync::Arc;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fincat::{
    enumerate_functors, enumerate_functors_where, enumerate_nat_trans, whisker_left, whisker_right, Arrow, FinCat,
    FinFunctor, MorId, NatTrans, ObjId,
};
use crate::laxepi::{is_lax_epi, CommaAtlas, ComponentId, Triple};
use crate::splitfib::{self, is_dsb, is_p_split, is_split_diagram, PSplit};

/// `F = P ∘ E` with `E` a lax epimorphism and `P` a DSB.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub input: FinFunctor,
    pub mid: Arc<FinCat>,
    pub left: FinFunctor,
    pub right: FinFunctor,
    /// For each mid object: its base object and component of `1_b⇓F`.
    pub points: Vec<(ObjId, ComponentId)>,
}

impl Factorization {
    /// Re-check `P ∘ E = F`, lax epimorphy of `E` and the DSB property of `P`.
    pub fn audit(&self, caps: &Caps) -> Result<()> {
        if self.left.then(&self.right)? != self.input {
            return Err(Error::InternalCheckFailed("P ∘ E differs from F".into()));
        }
        let verdict = is_lax_epi(&self.left, caps)?;
        if !verdict.lax_epi {
            return Err(Error::InternalCheckFailed(format!(
                "left factor is not a lax epimorphism: {:?}",
                verdict.witness
            )));
        }
        let verdict = is_dsb(&self.right, caps)?;
        if !verdict.dsb {
            return Err(Error::InternalCheckFailed(format!(
                "right factor is not a DSB: {:?}",
                verdict.witness
            )));
        }
        Ok(())
    }
}

/// Build the splitting category of `F: A → B`.
///
/// Objects are pairs `(b, B)` with `B` a component of `1_b⇓F` holding some
/// F-split, named `b#n` with `n` the component's position. Morphisms
/// `(b, B) → (c, C)` are the `g: b → c` with `g·B = C·g` in `g⇓F`, named
/// `g@b#i->c#j`.
pub fn build_splitting_category(f: &FinFunctor, caps: &Caps) -> Result<Factorization> {
    let atlas = CommaAtlas::new(f, caps)?;
    let base = f.target().clone();
    let mut points: Vec<(ObjId, ComponentId)> = Vec::new();
    let mut names = Vec::new();
    let mut point_index: HashMap<ComponentId, usize> = HashMap::new();
    for b in base.objects() {
        let comma = atlas.comma(base.identity(b));
        for (n, comp) in comma.components().into_iter().enumerate() {
            let has_split = comma.members(&comp).iter().any(|x| {
                is_p_split(
                    &atlas,
                    &PSplit {
                        b,
                        e: x.a,
                        h: x.h,
                        k: x.k,
                    },
                )
            });
            if has_split {
                point_index.insert(comp, points.len());
                points.push((b, comp));
                names.push(format!("{}#{}", base.object_name(b), n));
            }
        }
    }
    let mut arrows = Vec::new();
    let mut under = Vec::new();
    let mut mor_index: HashMap<(usize, usize, MorId), MorId> = HashMap::new();
    for (i, (b, bc)) in points.iter().enumerate() {
        for (j, (c, cc)) in points.iter().enumerate() {
            for &g in base.hom(*b, *c) {
                if atlas.postcompose(g, bc) == atlas.precompose(cc, g) {
                    mor_index.insert((i, j, g), MorId(arrows.len()));
                    under.push(g);
                    arrows.push(Arrow {
                        name: format!("{}@{}->{}", base.morphism_name(g), names[i], names[j]),
                        src: ObjId(i),
                        dst: ObjId(j),
                    });
                }
            }
        }
    }
    let identities = points
        .iter()
        .enumerate()
        .map(|(i, (b, _))| {
            mor_index
                .get(&(i, i, base.identity(*b)))
                .copied()
                .ok_or_else(|| Error::InternalCheckFailed(format!("identity missing at {}", names[i])))
        })
        .collect::<Result<Vec<_>>>()?;
    let arrows_ref = arrows.clone();
    let mid = FinCat::from_parts(names.clone(), arrows, identities, |p, q| {
        let (s, d) = (arrows_ref[p.0].src.0, arrows_ref[q.0].dst.0);
        mor_index.get(&(s, d, base.compose(under[p.0], under[q.0]))).copied()
    })
    .map_err(|e| Error::InternalCheckFailed(format!("splitting category is not a category: {e}")))?;
    let mid = Arc::new(mid);
    let source = f.source();
    let mut left_objects = Vec::new();
    for a in source.objects() {
        let fa = f.ob(a);
        let one = base.identity(fa);
        let comp = atlas
            .component(one, &Triple { h: one, a, k: one })
            .expect("(1, a, 1) factors the identity");
        let i = point_index.get(&comp).copied().ok_or_else(|| {
            Error::InternalCheckFailed(format!("E({}) is not a splitting object", source.object_name(a)))
        })?;
        left_objects.push(ObjId(i));
    }
    let left_morphisms = source
        .morphisms()
        .map(|m| {
            let key = (
                left_objects[source.src(m).0].0,
                left_objects[source.dst(m).0].0,
                f.mor(m),
            );
            mor_index
                .get(&key)
                .copied()
                .ok_or_else(|| Error::InternalCheckFailed(format!("E({}) is not a morphism", source.morphism_name(m))))
        })
        .collect::<Result<Vec<_>>>()?;
    let left = FinFunctor::new(source.clone(), mid.clone(), left_objects, left_morphisms)
        .map_err(|e| Error::InternalCheckFailed(format!("E is not a functor: {e}")))?;
    let right = FinFunctor::new(mid.clone(), base.clone(), points.iter().map(|p| p.0).collect(), under)
        .map_err(|e| Error::InternalCheckFailed(format!("P is not a functor: {e}")))?;
    if left.then(&right)? != *f {
        return Err(Error::InternalCheckFailed("P ∘ E differs from F".into()));
    }
    Ok(Factorization {
        input: f.clone(),
        mid,
        left,
        right,
        points,
    })
}

/// A commutative square `M ∘ G = H ∘ Q` with `Q: A → B` and `M: C → D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthSquare {
    pub top: FinFunctor,
    pub bottom: FinFunctor,
    pub left: FinFunctor,
    pub right: FinFunctor,
}

impl OrthSquare {
    pub fn new(q: FinFunctor, m: FinFunctor, g: FinFunctor, h: FinFunctor) -> Result<OrthSquare> {
        let square = OrthSquare {
            top: q,
            bottom: m,
            left: g,
            right: h,
        };
        let lhs = square
            .left
            .then(&square.bottom)
            .map_err(|e| Error::NotOrthogonalInput(e.to_string()))?;
        let rhs = square
            .top
            .then(&square.right)
            .map_err(|e| Error::NotOrthogonalInput(e.to_string()))?;
        if lhs != rhs {
            return Err(Error::NotOrthogonalInput("M ∘ G differs from H ∘ Q".into()));
        }
        Ok(square)
    }
}

fn push_split(h: &FinFunctor, g: &FinFunctor, s: &PSplit) -> PSplit {
    PSplit {
        b: h.ob(s.b),
        e: g.ob(s.e),
        h: h.mor(s.h),
        k: h.mor(s.k),
    }
}

/// The unique diagonal `T: B → C` with `T ∘ Q = G` and `M ∘ T = H`,
/// constructed by lifting pushed-forward splits through `M`.
pub fn diagonal_fill_in(square: &OrthSquare, caps: &Caps) -> Result<FinFunctor> {
    let (q, m, g, h) = (&square.top, &square.bottom, &square.left, &square.right);
    if !is_lax_epi(q, caps)?.lax_epi {
        return Err(Error::NotOrthogonalInput("top functor is not a lax epimorphism".into()));
    }
    let m_atlas = CommaAtlas::new(m, caps)?;
    if !splitfib::is_dsb_with(&m_atlas)?.dsb {
        return Err(Error::NotOrthogonalInput("bottom functor is not a DSB".into()));
    }
    let q_atlas = CommaAtlas::new(q, caps)?;
    let b_cat = q.target();
    let fibers = splitfib::fibers(m);
    let unique_lift = |g_mor: MorId, top: &PSplit, bottom: &PSplit| -> Result<splitfib::Lift> {
        let d = is_split_diagram(&m_atlas, g_mor, top, bottom)
            .ok_or_else(|| Error::InternalCheckFailed("pushed split diagram is not an M-split diagram".into()))?;
        let lifts = splitfib::lift_with_fibers(m, &fibers, &d);
        match lifts.len() {
            1 => Ok(lifts[0]),
            0 => Err(Error::NoSolution("pushed split diagram has no lift".into())),
            n => Err(Error::MultipleSolutions {
                count: n,
                detail: "pushed split diagram".into(),
            }),
        }
    };
    // objects: canonical representative of 1_b⇓Q, pushed and lifted
    let mut splits = Vec::new();
    let mut objects = Vec::new();
    for b in b_cat.objects() {
        let one = b_cat.identity(b);
        let comma = q_atlas.comma(one);
        let members = comma.objects();
        let split_of = |x: &Triple| PSplit {
            b,
            e: x.a,
            h: x.h,
            k: x.k,
        };
        let split = split_of(&members[0]);
        let pushed = push_split(h, g, &split);
        let lift = unique_lift(m.target().identity(pushed.b), &pushed, &pushed)?;
        if cfg!(debug_assertions) && members.len() > 1 {
            let other = push_split(h, g, &split_of(&members[members.len() - 1]));
            let again = unique_lift(m.target().identity(other.b), &other, &other)?;
            debug_assert_eq!(again.b0, lift.b0, "diagonal depends on the representative");
        }
        splits.push(split);
        objects.push(lift.b0);
    }
    let mut morphisms = Vec::new();
    for gm in b_cat.morphisms() {
        let (b, c) = (b_cat.src(gm), b_cat.dst(gm));
        let tops = splitfib::enumerate_splits(&q_atlas, b);
        let bottoms = splitfib::enumerate_splits(&q_atlas, c);
        let diagram = tops
            .iter()
            .flat_map(|t| bottoms.iter().map(move |u| (t, u)))
            .find_map(|(t, u)| is_split_diagram(&q_atlas, gm, t, u))
            .ok_or_else(|| Error::NotOrthogonalInput(format!("no Q-split diagram over {}", b_cat.morphism_name(gm))))?;
        let lift = unique_lift(
            h.mor(gm),
            &push_split(h, g, &diagram.top),
            &push_split(h, g, &diagram.bottom),
        )?;
        if lift.b0 != objects[b.0] || lift.c0 != objects[c.0] {
            return Err(Error::InternalCheckFailed(format!(
                "lift over {} has endpoints off the diagonal",
                b_cat.morphism_name(gm)
            )));
        }
        morphisms.push(lift.g0);
    }
    let t = FinFunctor::new(b_cat.clone(), m.source().clone(), objects, morphisms)
        .map_err(|e| Error::InternalCheckFailed(format!("diagonal is not a functor: {e}")))?;
    if q.then(&t)? != *g || t.then(m)? != *h {
        return Err(Error::InternalCheckFailed("diagonal does not fill the square".into()));
    }
    Ok(t)
}

/// Every functor `T` with `T ∘ Q = G` and `M ∘ T = H`, by enumeration.
pub fn enumerate_diagonals(square: &OrthSquare, caps: &Caps) -> Result<Vec<FinFunctor>> {
    let (q, m, g, h) = (&square.top, &square.bottom, &square.left, &square.right);
    let candidates = enumerate_functors_where(
        q.target(),
        m.source(),
        caps,
        |b, x| m.ob(x) == h.ob(b),
        |f, x| m.mor(x) == h.mor(f),
    )?;
    let mut out = Vec::new();
    for t in candidates {
        if q.then(&t)? == *g {
            out.push(t);
        }
    }
    Ok(out)
}

/// Every commutative square over `(e, m)`.
pub fn enumerate_squares(e: &FinFunctor, m: &FinFunctor, caps: &Caps) -> Result<Vec<OrthSquare>> {
    let mut out = Vec::new();
    for g in enumerate_functors(e.source(), m.source(), caps)? {
        let mg = g.then(m)?;
        // H is forced on the image of e
        let hs = enumerate_functors_where(
            e.target(),
            m.target(),
            caps,
            |b, d| e.source().objects().all(|a| e.ob(a) != b || mg.ob(a) == d),
            |f, d| e.source().morphisms().all(|a| e.mor(a) != f || mg.mor(a) == d),
        )?;
        for h in hs {
            if e.then(&h)? == mg {
                out.push(OrthSquare::new(e.clone(), m.clone(), g.clone(), h)?);
            }
            caps.check_results(out.len(), "square enumeration")?;
        }
    }
    Ok(out)
}

/// Whether every commutative square over `(e, m)` has exactly one diagonal.
pub fn verify_orthogonal(e: &FinFunctor, m: &FinFunctor, caps: &Caps) -> Result<bool> {
    for square in enumerate_squares(e, m, caps)? {
        if enumerate_diagonals(&square, caps)?.len() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The unique `θ: t ⇒ t'` with `θ ∗ e = α` and `m ∗ θ = β`, given two
/// diagonals `t, t'` and 2-cells `α: G ⇒ G'`, `β: H ⇒ H'` with `m ∗ α = β ∗ e`.
pub fn fill_in_2cell(
    e: &FinFunctor,
    m: &FinFunctor,
    t: &FinFunctor,
    t_prime: &FinFunctor,
    alpha: &NatTrans,
    beta: &NatTrans,
    caps: &Caps,
) -> Result<NatTrans> {
    if whisker_left(m, alpha)? != whisker_right(beta, e)? {
        return Err(Error::NotOrthogonalInput("m ∗ α differs from β ∗ e".into()));
    }
    let mut found = Vec::new();
    for theta in enumerate_nat_trans(t, t_prime, caps)? {
        if whisker_right(&theta, e)? == *alpha && whisker_left(m, &theta)? == *beta {
            found.push(theta);
        }
    }
    match found.len() {
        1 => Ok(found.pop().expect("one element")),
        0 => Err(Error::NoSolution("no 2-cell between the diagonals fits".into())),
        n => Err(Error::MultipleSolutions {
            count: n,
            detail: "2-cells between the diagonals".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concrete::ConcreteCategory;
    use crate::fincat::NatTrans;

    fn chain3() -> Arc<FinCat> {
        let mut c = ConcreteCategory::new();
        let x = c.object("x", 1);
        let y = c.object("y", 1);
        let z = c.object("z", 1);
        c.generator("a", x, y, vec![0]).unwrap();
        c.generator("b", y, z, vec![0]).unwrap();
        Arc::new(c.close(16).unwrap().category)
    }

    #[test]
    fn identity_factors_through_an_isomorphism() {
        let c = chain3();
        let id = FinFunctor::identity(&c);
        let fact = build_splitting_category(&id, &Caps::default()).unwrap();
        assert!(fact.right.is_isomorphism());
        fact.audit(&Caps::default()).unwrap();
    }

    #[test]
    fn trivial_squares_fill_with_the_given_sides() {
        let c = chain3();
        let id = FinFunctor::identity(&c);
        let caps = Caps::default();
        for g in enumerate_functors(&c, &c, &caps).unwrap() {
            // Q = Id forces T = G; M = Id forces T = H
            let sq = OrthSquare::new(id.clone(), id.clone(), g.clone(), g.clone()).unwrap();
            assert_eq!(diagonal_fill_in(&sq, &caps).unwrap(), g);
            assert_eq!(enumerate_diagonals(&sq, &caps).unwrap(), vec![g]);
        }
        assert!(verify_orthogonal(&id, &id, &caps).unwrap());
    }

    #[test]
    fn identity_cells_fill_with_identity() {
        let c = chain3();
        let id = FinFunctor::identity(&c);
        let unit = NatTrans::identity(&id);
        let theta = fill_in_2cell(&id, &id, &id, &id, &unit, &unit, &Caps::default()).unwrap();
        assert!(theta.is_identity());
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let c = chain3();
        let id = FinFunctor::identity(&c);
        let all = enumerate_functors(&c, &c, &Caps::default()).unwrap();
        let other = all.iter().find(|f| **f != id).unwrap().clone();
        assert!(matches!(
            OrthSquare::new(id.clone(), id.clone(), id.clone(), other),
            Err(Error::NotOrthogonalInput(_))
        ));
    }
}
