//! Finite categories, functors and natural transformations.
//!
//! Composition is stored as a total table on composable pairs. Throughout the
//! crate `compose(f, g)` means "g after f" (first `f`, then `g`), so the
//! factorization `k ∘ h = g` is written `cat.compose(h, k) == g`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::caps::Caps;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorId(pub usize);

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: ObjId,
    pub dst: ObjId,
}

/// Unvalidated, name-based description of a category.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub objects: Vec<String>,
    /// `(id, source, target)`
    pub morphisms: Vec<(String, String, String)>,
    /// `(object, identity morphism)`
    pub identities: Vec<(String, String)>,
    /// `(f, g, h)` meaning `h = g ∘ f`
    pub compose: Vec<(String, String, String)>,
}

/// A law-checked finite category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<MorId>,
    table: Vec<Option<MorId>>,
    homs: Vec<Vec<MorId>>,
    outgoing: Vec<Vec<MorId>>,
}

impl FinCat {
    /// Assemble a category from indexed parts and check every law.
    /// `composite(f, g)` must return `g ∘ f` for composable pairs.
    pub fn from_parts(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<MorId>,
        mut composite: impl FnMut(MorId, MorId) -> Option<MorId>,
    ) -> Result<FinCat> {
        let n_obj = objects.len();
        let n_mor = arrows.len();
        if identities.len() != n_obj {
            return Err(Error::Malformed(format!(
                "{} identities for {} objects",
                identities.len(),
                n_obj
            )));
        }
        for a in &arrows {
            if a.src.0 >= n_obj || a.dst.0 >= n_obj {
                return Err(Error::Malformed(format!(
                    "morphism {} has an endpoint outside the object list",
                    a.name
                )));
            }
        }
        let mut homs = vec![Vec::new(); n_obj * n_obj];
        let mut outgoing = vec![Vec::new(); n_obj];
        for (i, a) in arrows.iter().enumerate() {
            homs[a.src.0 * n_obj + a.dst.0].push(MorId(i));
            outgoing[a.src.0].push(MorId(i));
        }
        let mut table = vec![None; n_mor * n_mor];
        for f in 0..n_mor {
            for g in 0..n_mor {
                if arrows[f].dst == arrows[g].src {
                    let h = composite(MorId(f), MorId(g)).ok_or_else(|| Error::MissingComposite {
                        f: arrows[f].name.clone(),
                        g: arrows[g].name.clone(),
                    })?;
                    if h.0 >= n_mor {
                        return Err(Error::Malformed(format!(
                            "composite of ({}, {}) is not a morphism",
                            arrows[f].name, arrows[g].name
                        )));
                    }
                    table[f * n_mor + g] = Some(h);
                }
            }
        }
        let cat = FinCat {
            objects,
            arrows,
            identities,
            table,
            homs,
            outgoing,
        };
        cat.check_laws()?;
        Ok(cat)
    }

    fn check_laws(&self) -> Result<()> {
        for (o, &id) in self.identities.iter().enumerate() {
            let bad = |reason: &str| Error::BadIdentity {
                object: self.objects[o].clone(),
                morphism: self.arrows.get(id.0).map_or("?".into(), |a| a.name.clone()),
                reason: reason.to_string(),
            };
            let arrow = self.arrows.get(id.0).ok_or_else(|| bad("unknown morphism"))?;
            if arrow.src.0 != o || arrow.dst.0 != o {
                return Err(bad("identity must be an endomorphism of its object"));
            }
        }
        let mut seen = vec![false; self.arrows.len()];
        for &id in &self.identities {
            if std::mem::replace(&mut seen[id.0], true) {
                return Err(Error::BadIdentity {
                    object: self.objects[self.arrows[id.0].src.0].clone(),
                    morphism: self.arrows[id.0].name.clone(),
                    reason: "assigned to two objects".into(),
                });
            }
        }
        for f in self.morphisms() {
            for &g in &self.outgoing[self.dst(f).0] {
                let h = self.compose(f, g);
                if self.src(h) != self.src(f) || self.dst(h) != self.dst(g) {
                    return Err(Error::Malformed(format!(
                        "composite {} of ({}, {}) lands in the wrong hom-set",
                        self.morphism_name(h),
                        self.morphism_name(f),
                        self.morphism_name(g)
                    )));
                }
            }
        }
        for f in self.morphisms() {
            let left = self.identity(self.src(f));
            let right = self.identity(self.dst(f));
            for (pair, unit) in [((left, f), left), ((f, right), right)] {
                if self.compose(pair.0, pair.1) != f {
                    return Err(Error::BadIdentity {
                        object: self.objects[self.src(unit).0].clone(),
                        morphism: self.morphism_name(unit).to_string(),
                        reason: format!("not a unit for {}", self.morphism_name(f)),
                    });
                }
            }
        }
        for f in self.morphisms() {
            for &g in &self.outgoing[self.dst(f).0] {
                let gf = self.compose(f, g);
                for &h in &self.outgoing[self.dst(g).0] {
                    if self.compose(gf, h) != self.compose(f, self.compose(g, h)) {
                        return Err(Error::NonAssociative {
                            f: self.morphism_name(f).into(),
                            g: self.morphism_name(g).into(),
                            h: self.morphism_name(h).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The category with one object and its identity.
    pub fn terminal() -> FinCat {
        FinCat::discrete(&["*"])
    }

    pub fn discrete(names: &[&str]) -> FinCat {
        let objects: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let arrows = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Arrow {
                name: format!("1_{o}"),
                src: ObjId(i),
                dst: ObjId(i),
            })
            .collect();
        let identities = (0..objects.len()).map(MorId).collect();
        FinCat::from_parts(objects, arrows, identities, |f, g| (f == g).then_some(f))
            .expect("discrete categories are lawful")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + Clone {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> + Clone {
        (0..self.arrows.len()).map(MorId)
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o.0]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_name(&self, m: MorId) -> &str {
        &self.arrows[m.0].name
    }

    pub fn arrow(&self, m: MorId) -> &Arrow {
        &self.arrows[m.0]
    }

    pub fn src(&self, m: MorId) -> ObjId {
        self.arrows[m.0].src
    }

    pub fn dst(&self, m: MorId) -> ObjId {
        self.arrows[m.0].dst
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o.0]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identities[self.src(m).0] == m
    }

    /// `g ∘ f`, or `None` when `f` and `g` are not composable.
    pub fn try_compose(&self, f: MorId, g: MorId) -> Option<MorId> {
        self.table[f.0 * self.arrows.len() + g.0]
    }

    /// `g ∘ f`. Panics if the pair is not composable.
    pub fn compose(&self, f: MorId, g: MorId) -> MorId {
        self.try_compose(f, g).unwrap_or_else(|| {
            panic!(
                "{} and {} are not composable",
                self.morphism_name(f),
                self.morphism_name(g)
            )
        })
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.homs[a.0 * self.objects.len() + b.0]
    }

    pub fn outgoing(&self, a: ObjId) -> &[MorId] {
        &self.outgoing[a.0]
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name).map(ObjId)
    }

    pub fn morphism_by_name(&self, name: &str) -> Option<MorId> {
        self.arrows.iter().position(|a| a.name == name).map(MorId)
    }

    pub fn inverse(&self, m: MorId) -> Option<MorId> {
        let (a, b) = (self.src(m), self.dst(m));
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&n| self.compose(m, n) == self.identity(a) && self.compose(n, m) == self.identity(b))
    }

    pub fn is_iso(&self, m: MorId) -> bool {
        self.inverse(m).is_some()
    }

    pub fn are_isomorphic(&self, a: ObjId, b: ObjId) -> bool {
        self.hom(a, b).iter().any(|&m| self.is_iso(m))
    }

    /// At most one morphism between any ordered pair of objects.
    pub fn is_thin(&self) -> bool {
        self.homs.iter().all(|h| h.len() <= 1)
    }

    /// Same objects, reversed morphisms, transposed composition.
    pub fn opposite(&self) -> FinCat {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                name: a.name.clone(),
                src: a.dst,
                dst: a.src,
            })
            .collect();
        FinCat::from_parts(self.objects.clone(), arrows, self.identities.clone(), |f, g| {
            self.try_compose(g, f)
        })
        .expect("the opposite of a lawful category is lawful")
    }

    /// The full subcategory on `objects` (in the given order) and its inclusion.
    pub fn full_subcategory(self: &Arc<Self>, objects: &[ObjId]) -> Result<(Arc<FinCat>, FinFunctor)> {
        let mut obj_index = HashMap::new();
        for (i, &o) in objects.iter().enumerate() {
            if obj_index.insert(o, i).is_some() {
                return Err(Error::Malformed(format!("object {} listed twice", self.object_name(o))));
            }
        }
        let mut arrows = Vec::new();
        let mut old_of = Vec::new();
        let mut new_of = HashMap::new();
        for m in self.morphisms() {
            if let (Some(&s), Some(&d)) = (obj_index.get(&self.src(m)), obj_index.get(&self.dst(m))) {
                new_of.insert(m, MorId(arrows.len()));
                old_of.push(m);
                arrows.push(Arrow {
                    name: self.morphism_name(m).to_string(),
                    src: ObjId(s),
                    dst: ObjId(d),
                });
            }
        }
        let names = objects.iter().map(|&o| self.object_name(o).to_string()).collect();
        let identities = objects.iter().map(|&o| new_of[&self.identity(o)]).collect();
        let sub = Arc::new(FinCat::from_parts(names, arrows, identities, |f, g| {
            self.try_compose(old_of[f.0], old_of[g.0]).map(|h| new_of[&h])
        })?);
        let inclusion = FinFunctor::new(sub.clone(), self.clone(), objects.to_vec(), old_of)?;
        Ok((sub, inclusion))
    }

    /// Name-based description with every composable pair listed.
    pub fn to_raw(&self) -> RawCategory {
        let mut compose = Vec::new();
        for f in self.morphisms() {
            for &g in self.outgoing(self.dst(f)) {
                compose.push((
                    self.morphism_name(f).to_string(),
                    self.morphism_name(g).to_string(),
                    self.morphism_name(self.compose(f, g)).to_string(),
                ));
            }
        }
        RawCategory {
            objects: self.objects.clone(),
            morphisms: self
                .arrows
                .iter()
                .map(|a| {
                    (
                        a.name.clone(),
                        self.objects[a.src.0].clone(),
                        self.objects[a.dst.0].clone(),
                    )
                })
                .collect(),
            identities: self
                .objects()
                .map(|o| {
                    (
                        self.object_name(o).to_string(),
                        self.morphism_name(self.identity(o)).to_string(),
                    )
                })
                .collect(),
            compose,
        }
    }
}

/// Check a raw description and build the category. Every composable pair
/// must appear in the composition list; nothing is inferred.
pub fn validate_category(raw: &RawCategory) -> Result<FinCat> {
    let mut obj_index = HashMap::new();
    for (i, o) in raw.objects.iter().enumerate() {
        if obj_index.insert(o.as_str(), ObjId(i)).is_some() {
            return Err(Error::Malformed(format!("duplicate object {o}")));
        }
    }
    let lookup_obj = |name: &str, ctx: &str| {
        obj_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Malformed(format!("{ctx}: unknown object {name}")))
    };
    let mut mor_index = HashMap::new();
    let mut arrows = Vec::new();
    for (id, s, d) in &raw.morphisms {
        if mor_index.insert(id.as_str(), MorId(arrows.len())).is_some() {
            return Err(Error::Malformed(format!("duplicate morphism {id}")));
        }
        arrows.push(Arrow {
            name: id.clone(),
            src: lookup_obj(s, id)?,
            dst: lookup_obj(d, id)?,
        });
    }
    let lookup_mor = |name: &str, ctx: &str| {
        mor_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Malformed(format!("{ctx}: unknown morphism {name}")))
    };
    let mut identities = vec![None; raw.objects.len()];
    for (o, m) in &raw.identities {
        let oi = lookup_obj(o, "identities")?;
        let mi = lookup_mor(m, "identities")?;
        if identities[oi.0].replace(mi).is_some() {
            return Err(Error::BadIdentity {
                object: o.clone(),
                morphism: m.clone(),
                reason: "object has two identities".into(),
            });
        }
    }
    let identities = identities
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            m.ok_or_else(|| Error::BadIdentity {
                object: raw.objects[i].clone(),
                morphism: "-".into(),
                reason: "no identity listed".into(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table: HashMap<(MorId, MorId), MorId> = HashMap::new();
    for (f, g, h) in &raw.compose {
        let ctx = format!("compose [{f}, {g}, {h}]");
        let (fi, gi, hi) = (lookup_mor(f, &ctx)?, lookup_mor(g, &ctx)?, lookup_mor(h, &ctx)?);
        if arrows[fi.0].dst != arrows[gi.0].src {
            return Err(Error::Malformed(format!("{ctx}: {f} and {g} are not composable")));
        }
        if let Some(prev) = table.insert((fi, gi), hi) {
            if prev != hi {
                return Err(Error::Malformed(format!("{ctx}: conflicting composite entries")));
            }
        }
    }
    FinCat::from_parts(raw.objects.clone(), arrows, identities, |f, g| {
        table.get(&(f, g)).copied()
    })
}

/// A law-checked functor between finite categories.
#[derive(Debug, Clone)]
pub struct FinFunctor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    objects: Vec<ObjId>,
    morphisms: Vec<MorId>,
}

fn same_cat(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for FinFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && same_cat(&self.source, &other.source)
            && same_cat(&self.target, &other.target)
    }
}

impl Eq for FinFunctor {}

/// Name-based object and morphism assignments for a functor.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawFunctor {
    pub objects: Vec<(String, String)>,
    pub morphisms: Vec<(String, String)>,
}

impl FinFunctor {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        objects: Vec<ObjId>,
        morphisms: Vec<MorId>,
    ) -> Result<FinFunctor> {
        if objects.len() != source.num_objects() || morphisms.len() != source.num_morphisms() {
            return Err(Error::NotAFunctor("maps are not total on the source".into()));
        }
        if objects.iter().any(|o| o.0 >= target.num_objects())
            || morphisms.iter().any(|m| m.0 >= target.num_morphisms())
        {
            return Err(Error::NotAFunctor("image outside the target".into()));
        }
        let f = FinFunctor {
            source,
            target,
            objects,
            morphisms,
        };
        f.check_laws()?;
        Ok(f)
    }

    fn check_laws(&self) -> Result<()> {
        let (s, t) = (&*self.source, &*self.target);
        for m in s.morphisms() {
            let fm = self.mor(m);
            if t.src(fm) != self.ob(s.src(m)) || t.dst(fm) != self.ob(s.dst(m)) {
                return Err(Error::NotAFunctor(format!(
                    "image {} of {} has the wrong endpoints",
                    t.morphism_name(fm),
                    s.morphism_name(m)
                )));
            }
        }
        for o in s.objects() {
            if self.mor(s.identity(o)) != t.identity(self.ob(o)) {
                return Err(Error::NotAFunctor(format!(
                    "identity of {} is not sent to an identity",
                    s.object_name(o)
                )));
            }
        }
        for f in s.morphisms() {
            for &g in s.outgoing(s.dst(f)) {
                if self.mor(s.compose(f, g)) != t.compose(self.mor(f), self.mor(g)) {
                    return Err(Error::NotAFunctor(format!(
                        "F({g} ∘ {f}) ≠ F({g}) ∘ F({f})",
                        f = s.morphism_name(f),
                        g = s.morphism_name(g)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(cat: &Arc<FinCat>) -> FinFunctor {
        FinFunctor {
            source: cat.clone(),
            target: cat.clone(),
            objects: cat.objects().collect(),
            morphisms: cat.morphisms().collect(),
        }
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn ob(&self, o: ObjId) -> ObjId {
        self.objects[o.0]
    }

    pub fn mor(&self, m: MorId) -> MorId {
        self.morphisms[m.0]
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.objects
    }

    pub fn morphism_map(&self) -> &[MorId] {
        &self.morphisms
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FinFunctor) -> Result<FinFunctor> {
        if !same_cat(&self.target, &next.source) {
            return Err(Error::ShapeMismatch(
                "functors are not composable: target and source differ".into(),
            ));
        }
        Ok(FinFunctor {
            source: self.source.clone(),
            target: next.target.clone(),
            objects: self.objects.iter().map(|&o| next.ob(o)).collect(),
            morphisms: self.morphisms.iter().map(|&m| next.mor(m)).collect(),
        })
    }

    pub fn is_parallel_to(&self, other: &FinFunctor) -> bool {
        same_cat(&self.source, &other.source) && same_cat(&self.target, &other.target)
    }

    fn hom_map_counts(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        // (source hom size, distinct images, target hom size) per ordered pair
        let s = &*self.source;
        s.objects().flat_map(move |a| {
            s.objects().map(move |b| {
                let mut images: Vec<MorId> = s.hom(a, b).iter().map(|&m| self.mor(m)).collect();
                images.sort();
                images.dedup();
                (
                    s.hom(a, b).len(),
                    images.len(),
                    self.target.hom(self.ob(a), self.ob(b)).len(),
                )
            })
        })
    }

    pub fn is_faithful(&self) -> bool {
        self.hom_map_counts().all(|(n, img, _)| n == img)
    }

    pub fn is_full(&self) -> bool {
        self.hom_map_counts().all(|(_, img, m)| img == m)
    }

    /// Every hom-map is a bijection.
    pub fn is_fully_faithful(&self) -> bool {
        self.hom_map_counts().all(|(n, img, m)| n == img && img == m)
    }

    pub fn is_essentially_surjective(&self) -> bool {
        let t = &*self.target;
        t.objects()
            .all(|b| self.objects.iter().any(|&fa| t.are_isomorphic(fa, b)))
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_fully_faithful() && self.is_essentially_surjective()
    }

    /// Bijective on objects and on morphisms.
    pub fn is_isomorphism(&self) -> bool {
        let mut objs = self.objects.clone();
        objs.sort();
        objs.dedup();
        let mut mors = self.morphisms.clone();
        mors.sort();
        mors.dedup();
        objs.len() == self.target.num_objects()
            && self.objects.len() == objs.len()
            && mors.len() == self.target.num_morphisms()
            && self.morphisms.len() == mors.len()
    }

    pub fn to_raw(&self) -> RawFunctor {
        let (s, t) = (&*self.source, &*self.target);
        RawFunctor {
            objects: s
                .objects()
                .map(|o| (s.object_name(o).to_string(), t.object_name(self.ob(o)).to_string()))
                .collect(),
            morphisms: s
                .morphisms()
                .map(|m| (s.morphism_name(m).to_string(), t.morphism_name(self.mor(m)).to_string()))
                .collect(),
        }
    }
}

pub fn validate_functor(raw: &RawFunctor, source: Arc<FinCat>, target: Arc<FinCat>) -> Result<FinFunctor> {
    let mut objects = vec![None; source.num_objects()];
    for (a, b) in &raw.objects {
        let ai = source
            .object_by_name(a)
            .ok_or_else(|| Error::NotAFunctor(format!("unknown source object {a}")))?;
        let bi = target
            .object_by_name(b)
            .ok_or_else(|| Error::NotAFunctor(format!("unknown target object {b}")))?;
        if objects[ai.0].replace(bi).is_some() {
            return Err(Error::NotAFunctor(format!("object {a} mapped twice")));
        }
    }
    let mut morphisms = vec![None; source.num_morphisms()];
    for (f, g) in &raw.morphisms {
        let fi = source
            .morphism_by_name(f)
            .ok_or_else(|| Error::NotAFunctor(format!("unknown source morphism {f}")))?;
        let gi = target
            .morphism_by_name(g)
            .ok_or_else(|| Error::NotAFunctor(format!("unknown target morphism {g}")))?;
        if morphisms[fi.0].replace(gi).is_some() {
            return Err(Error::NotAFunctor(format!("morphism {f} mapped twice")));
        }
    }
    let objects = objects
        .into_iter()
        .enumerate()
        .map(|(i, o)| {
            o.ok_or_else(|| Error::NotAFunctor(format!("object {} is not mapped", source.object_name(ObjId(i)))))
        })
        .collect::<Result<Vec<_>>>()?;
    let morphisms = morphisms
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            m.ok_or_else(|| Error::NotAFunctor(format!("morphism {} is not mapped", source.morphism_name(MorId(i)))))
        })
        .collect::<Result<Vec<_>>>()?;
    FinFunctor::new(source, target, objects, morphisms)
}

/// A natural transformation between parallel functors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    from: FinFunctor,
    to: FinFunctor,
    components: Vec<MorId>,
}

impl NatTrans {
    pub fn new(from: FinFunctor, to: FinFunctor, components: Vec<MorId>) -> Result<NatTrans> {
        if !from.is_parallel_to(&to) {
            return Err(Error::ShapeMismatch("functors are not parallel".into()));
        }
        let (s, t) = (from.source().clone(), from.target().clone());
        if components.len() != s.num_objects() {
            return Err(Error::ShapeMismatch("one component per source object required".into()));
        }
        for x in s.objects() {
            let c = components[x.0];
            if c.0 >= t.num_morphisms() || t.src(c) != from.ob(x) || t.dst(c) != to.ob(x) {
                return Err(Error::NotNatural {
                    morphism: s.morphism_name(s.identity(x)).to_string(),
                    detail: format!("component at {} has the wrong endpoints", s.object_name(x)),
                });
            }
        }
        for f in s.morphisms() {
            let (x, y) = (s.src(f), s.dst(f));
            let lhs = t.compose(components[x.0], to.mor(f));
            let rhs = t.compose(from.mor(f), components[y.0]);
            if lhs != rhs {
                return Err(Error::NotNatural {
                    morphism: s.morphism_name(f).to_string(),
                    detail: format!(
                        "G(f) ∘ α_{x} = {} but α_{y} ∘ F(f) = {}",
                        t.morphism_name(lhs),
                        t.morphism_name(rhs),
                        x = s.object_name(x),
                        y = s.object_name(y)
                    ),
                });
            }
        }
        Ok(NatTrans { from, to, components })
    }

    pub fn identity(f: &FinFunctor) -> NatTrans {
        let t = f.target();
        let components = f.object_map().iter().map(|&o| t.identity(o)).collect();
        NatTrans {
            from: f.clone(),
            to: f.clone(),
            components,
        }
    }

    pub fn from(&self) -> &FinFunctor {
        &self.from
    }

    pub fn to(&self) -> &FinFunctor {
        &self.to
    }

    pub fn component(&self, x: ObjId) -> MorId {
        self.components[x.0]
    }

    pub fn components(&self) -> &[MorId] {
        &self.components
    }

    pub fn is_identity(&self) -> bool {
        self.from == self.to && self.components.iter().all(|&c| self.from.target().is_identity(c))
    }

    pub fn to_raw(&self) -> Vec<(String, String)> {
        let (s, t) = (self.from.source(), self.from.target());
        s.objects()
            .map(|x| {
                (
                    s.object_name(x).to_string(),
                    t.morphism_name(self.component(x)).to_string(),
                )
            })
            .collect()
    }
}

pub fn validate_nat_trans(raw: &[(String, String)], from: &FinFunctor, to: &FinFunctor) -> Result<NatTrans> {
    if !from.is_parallel_to(to) {
        return Err(Error::ShapeMismatch("functors are not parallel".into()));
    }
    let (s, t) = (from.source(), from.target());
    let mut components = vec![None; s.num_objects()];
    for (x, m) in raw {
        let xi = s
            .object_by_name(x)
            .ok_or_else(|| Error::ShapeMismatch(format!("unknown object {x}")))?;
        let mi = t
            .morphism_by_name(m)
            .ok_or_else(|| Error::ShapeMismatch(format!("unknown morphism {m}")))?;
        components[xi.0] = Some(mi);
    }
    let components = components
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.ok_or_else(|| Error::ShapeMismatch(format!("missing component at {}", s.object_name(ObjId(i)))))
        })
        .collect::<Result<Vec<_>>>()?;
    NatTrans::new(from.clone(), to.clone(), components)
}

/// `H ∗ α`: post-whiskering, components `H(α_x)`.
pub fn whisker_left(h: &FinFunctor, alpha: &NatTrans) -> Result<NatTrans> {
    if !same_cat(h.source(), alpha.from.target()) {
        return Err(Error::ShapeMismatch("H must start where α lands".into()));
    }
    let components = alpha.components.iter().map(|&c| h.mor(c)).collect();
    NatTrans::new(alpha.from.then(h)?, alpha.to.then(h)?, components)
}

/// `α ∗ H`: pre-whiskering, components `α_{H x}`.
pub fn whisker_right(alpha: &NatTrans, h: &FinFunctor) -> Result<NatTrans> {
    if !same_cat(h.target(), alpha.from.source()) {
        return Err(Error::ShapeMismatch("H must land where α starts".into()));
    }
    let components = h.object_map().iter().map(|&o| alpha.component(o)).collect();
    NatTrans::new(h.then(&alpha.from)?, h.then(&alpha.to)?, components)
}

/// Vertical composite `β · α` for `α: F ⇒ G`, `β: G ⇒ H`.
pub fn vcompose(alpha: &NatTrans, beta: &NatTrans) -> Result<NatTrans> {
    if alpha.to != beta.from {
        return Err(Error::ShapeMismatch("α must end where β starts".into()));
    }
    let t = alpha.from.target();
    let components = alpha
        .components
        .iter()
        .zip(&beta.components)
        .map(|(&a, &b)| t.compose(a, b))
        .collect();
    NatTrans::new(alpha.from.clone(), beta.to.clone(), components)
}

/// Backtracking search over functors. Objects are assigned first, then
/// morphisms in id order; every composable triple is checked as soon as its
/// last member is assigned. Candidates are tried in the given orders, which
/// makes the default search lexicographic.
pub(crate) struct FunctorSearch<'a> {
    source: &'a FinCat,
    target: &'a FinCat,
    object_candidates: Vec<Vec<ObjId>>,
    morphism_rank: Option<Vec<usize>>,
    mor_ok: &'a dyn Fn(MorId, MorId) -> bool,
    triples_at: Vec<Vec<(MorId, MorId, MorId)>>,
    arrows_at: Vec<Vec<MorId>>,
}

impl<'a> FunctorSearch<'a> {
    pub(crate) fn new(
        source: &'a FinCat,
        target: &'a FinCat,
        obj_ok: &dyn Fn(ObjId, ObjId) -> bool,
        mor_ok: &'a dyn Fn(MorId, MorId) -> bool,
    ) -> Self {
        let object_candidates = source
            .objects()
            .map(|a| target.objects().filter(|&b| obj_ok(a, b)).collect())
            .collect();
        let mut triples_at = vec![Vec::new(); source.num_morphisms()];
        for f in source.morphisms() {
            for &g in source.outgoing(source.dst(f)) {
                let h = source.compose(f, g);
                let last = f.max(g).max(h);
                triples_at[last.0].push((f, g, h));
            }
        }
        let mut arrows_at = vec![Vec::new(); source.num_objects()];
        for m in source.morphisms() {
            let last = source.src(m).max(source.dst(m));
            arrows_at[last.0].push(m);
        }
        FunctorSearch {
            source,
            target,
            object_candidates,
            morphism_rank: None,
            mor_ok,
            triples_at,
            arrows_at,
        }
    }

    pub(crate) fn with_orders(mut self, object_candidates: Vec<Vec<ObjId>>, rank: Vec<usize>) -> Self {
        self.object_candidates = object_candidates;
        self.morphism_rank = Some(rank);
        self
    }

    pub(crate) fn object_candidates(&self) -> &[Vec<ObjId>] {
        &self.object_candidates
    }

    fn candidates(&self, objs: &[ObjId], m: MorId) -> Vec<MorId> {
        let (s, t) = (self.source, self.target);
        let (a, b) = (objs[s.src(m).0], objs[s.dst(m).0]);
        let mut c: Vec<MorId> = if s.is_identity(m) {
            vec![t.identity(a)]
        } else {
            t.hom(a, b).to_vec()
        };
        c.retain(|&x| (self.mor_ok)(m, x));
        if let Some(rank) = &self.morphism_rank {
            c.sort_by_key(|x| rank[x.0]);
        }
        c
    }

    /// Visit every functor; `visit` returns `false` to stop early.
    pub(crate) fn run(&self, visit: &mut dyn FnMut(&[ObjId], &[MorId]) -> bool) {
        let mut objs = vec![ObjId(0); self.source.num_objects()];
        let mut mors = vec![MorId(0); self.source.num_morphisms()];
        self.assign_object(0, &mut objs, &mut mors, visit);
    }

    fn assign_object(
        &self,
        i: usize,
        objs: &mut Vec<ObjId>,
        mors: &mut Vec<MorId>,
        visit: &mut dyn FnMut(&[ObjId], &[MorId]) -> bool,
    ) -> bool {
        if i == objs.len() {
            return self.assign_morphism(0, objs, mors, visit);
        }
        for &cand in &self.object_candidates[i] {
            objs[i] = cand;
            let feasible = self.arrows_at[i].iter().all(|&m| !self.candidates(objs, m).is_empty());
            if feasible && !self.assign_object(i + 1, objs, mors, visit) {
                return false;
            }
        }
        true
    }

    fn assign_morphism(
        &self,
        j: usize,
        objs: &mut Vec<ObjId>,
        mors: &mut Vec<MorId>,
        visit: &mut dyn FnMut(&[ObjId], &[MorId]) -> bool,
    ) -> bool {
        if j == mors.len() {
            return visit(objs, mors);
        }
        for cand in self.candidates(objs, MorId(j)) {
            mors[j] = cand;
            let ok = self.triples_at[j]
                .iter()
                .all(|&(f, g, h)| self.target.compose(mors[f.0], mors[g.0]) == mors[h.0]);
            if ok && !self.assign_morphism(j + 1, objs, mors, visit) {
                return false;
            }
        }
        true
    }
}

/// All functors `a → b`, lexicographic in (object map, morphism map).
pub fn enumerate_functors(a: &Arc<FinCat>, b: &Arc<FinCat>, caps: &Caps) -> Result<Vec<FinFunctor>> {
    enumerate_functors_where(a, b, caps, |_, _| true, |_, _| true)
}

/// All functors `a → b` whose object and morphism assignments pass the
/// given filters. Equivalent to filtering [`enumerate_functors`], but prunes.
pub fn enumerate_functors_where(
    a: &Arc<FinCat>,
    b: &Arc<FinCat>,
    caps: &Caps,
    obj_ok: impl Fn(ObjId, ObjId) -> bool,
    mor_ok: impl Fn(MorId, MorId) -> bool,
) -> Result<Vec<FinFunctor>> {
    caps.check_category(a, "functor source")?;
    caps.check_category(b, "functor target")?;
    let search = FunctorSearch::new(a, b, &obj_ok, &mor_ok);
    let mut out = Vec::new();
    let mut overflow = false;
    search.run(&mut |objs, mors| {
        if out.len() == caps.max_results {
            overflow = true;
            return false;
        }
        out.push(FinFunctor {
            source: a.clone(),
            target: b.clone(),
            objects: objs.to_vec(),
            morphisms: mors.to_vec(),
        });
        true
    });
    if overflow {
        caps.check_results(caps.max_results + 1, "functor enumeration")?;
    }
    Ok(out)
}

/// All natural transformations `f ⇒ g`, lexicographic in the components.
pub fn enumerate_nat_trans(f: &FinFunctor, g: &FinFunctor, caps: &Caps) -> Result<Vec<NatTrans>> {
    if !f.is_parallel_to(g) {
        return Err(Error::ShapeMismatch("functors are not parallel".into()));
    }
    let (s, t) = (f.source().clone(), f.target().clone());
    caps.check_category(&s, "transformation source")?;
    caps.check_category(&t, "transformation target")?;
    let mut check_at = vec![Vec::new(); s.num_objects()];
    for m in s.morphisms() {
        check_at[s.src(m).max(s.dst(m)).0].push(m);
    }
    let mut out = Vec::new();
    let mut comps = vec![MorId(0); s.num_objects()];
    fn go(
        i: usize,
        comps: &mut Vec<MorId>,
        f: &FinFunctor,
        g: &FinFunctor,
        check_at: &[Vec<MorId>],
        out: &mut Vec<NatTrans>,
        caps: &Caps,
    ) -> Result<()> {
        let (s, t) = (f.source(), f.target());
        if i == comps.len() {
            out.push(NatTrans {
                from: f.clone(),
                to: g.clone(),
                components: comps.clone(),
            });
            return caps.check_results(out.len(), "natural transformation enumeration");
        }
        let x = ObjId(i);
        for &c in t.hom(f.ob(x), g.ob(x)) {
            comps[i] = c;
            let natural = check_at[i]
                .iter()
                .all(|&m| t.compose(comps[s.src(m).0], g.mor(m)) == t.compose(f.mor(m), comps[s.dst(m).0]));
            if natural {
                go(i + 1, comps, f, g, check_at, out, caps)?;
            }
        }
        Ok(())
    }
    go(0, &mut comps, f, g, &check_at, &mut out, caps)?;
    Ok(out)
}

/// The inserter of a parallel pair `F, G: A → B`: its category, the
/// projection to `A`, and the universal 2-cell `F U ⇒ G U`.
#[derive(Debug, Clone)]
pub struct Inserter {
    pub category: Arc<FinCat>,
    pub projection: FinFunctor,
    pub cell: NatTrans,
}

pub fn inserter(f: &FinFunctor, g: &FinFunctor) -> Result<Inserter> {
    if !f.is_parallel_to(g) {
        return Err(Error::ShapeMismatch("inserter needs a parallel pair".into()));
    }
    let (a, b) = (f.source().clone(), f.target().clone());
    // objects: (x, φ: Fx → Gx)
    let mut objects = Vec::new();
    let mut points = Vec::new();
    for x in a.objects() {
        for &phi in b.hom(f.ob(x), g.ob(x)) {
            objects.push(format!("{}|{}", a.object_name(x), b.morphism_name(phi)));
            points.push((x, phi));
        }
    }
    let mut arrows = Vec::new();
    let mut under = Vec::new();
    let mut index = HashMap::new();
    for (i, &(x, phi)) in points.iter().enumerate() {
        for (j, &(y, psi)) in points.iter().enumerate() {
            for &m in a.hom(x, y) {
                if b.compose(phi, g.mor(m)) == b.compose(f.mor(m), psi) {
                    index.insert((i, j, m), MorId(arrows.len()));
                    under.push(m);
                    arrows.push(Arrow {
                        name: format!("{}:{}->{}", a.morphism_name(m), objects[i], objects[j]),
                        src: ObjId(i),
                        dst: ObjId(j),
                    });
                }
            }
        }
    }
    let identities = (0..points.len())
        .map(|i| index[&(i, i, a.identity(points[i].0))])
        .collect();
    let arrows_ref = arrows.clone();
    let category = Arc::new(FinCat::from_parts(objects, arrows, identities, |p, q| {
        let (s, d) = (arrows_ref[p.0].src.0, arrows_ref[q.0].dst.0);
        index.get(&(s, d, a.compose(under[p.0], under[q.0]))).copied()
    })?);
    let projection = FinFunctor::new(
        category.clone(),
        a.clone(),
        points.iter().map(|p| p.0).collect(),
        under.clone(),
    )?;
    let cell = NatTrans::new(
        projection.then(f)?,
        projection.then(g)?,
        points.iter().map(|p| p.1).collect(),
    )?;
    Ok(Inserter {
        category,
        projection,
        cell,
    })
}

/// Check the one-dimensional universal property of an inserter against
/// every probe category: each pair `(K: X → A, β: F K ⇒ G K)` must factor
/// through the projection by exactly one functor `L` with `α ∗ L = β`.
pub fn verify_inserter_universal(
    ins: &Inserter,
    f: &FinFunctor,
    g: &FinFunctor,
    probes: &[Arc<FinCat>],
    caps: &Caps,
) -> Result<bool> {
    let a = f.source();
    for x in probes {
        for k in enumerate_functors(x, a, caps)? {
            let fk = k.then(f)?;
            let gk = k.then(g)?;
            for beta in enumerate_nat_trans(&fk, &gk, caps)? {
                let lifts = enumerate_functors_where(
                    x,
                    &ins.category,
                    caps,
                    |o, p| ins.projection.ob(p) == k.ob(o),
                    |m, n| ins.projection.mor(n) == k.mor(m),
                )?;
                let mut count = 0;
                for l in lifts {
                    if whisker_right(&ins.cell, &l)? == beta {
                        count += 1;
                    }
                }
                if count != 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walking_arrow() -> FinCat {
        validate_category(&RawCategory {
            objects: vec!["x".into(), "y".into()],
            morphisms: vec![
                ("1x".into(), "x".into(), "x".into()),
                ("1y".into(), "y".into(), "y".into()),
                ("a".into(), "x".into(), "y".into()),
            ],
            identities: vec![("x".into(), "1x".into()), ("y".into(), "1y".into())],
            compose: vec![
                ("1x".into(), "1x".into(), "1x".into()),
                ("1x".into(), "a".into(), "a".into()),
                ("a".into(), "1y".into(), "a".into()),
                ("1y".into(), "1y".into(), "1y".into()),
            ],
        })
        .unwrap()
    }

    #[test]
    fn terminal_category_validates() {
        let t = FinCat::terminal();
        assert_eq!(t.num_objects(), 1);
        assert_eq!(t.num_morphisms(), 1);
        let again = validate_category(&t.to_raw()).unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn missing_composite_is_named() {
        let mut raw = walking_arrow().to_raw();
        raw.compose.retain(|(f, g, _)| !(f == "a" && g == "1y"));
        assert_eq!(
            validate_category(&raw),
            Err(Error::MissingComposite {
                f: "a".into(),
                g: "1y".into()
            })
        );
    }

    #[test]
    fn non_unit_identity_is_rejected() {
        // two endomorphisms e, 1 on x with e∘e = e, but 1∘e = 1 breaks the unit law
        let raw = RawCategory {
            objects: vec!["x".into()],
            morphisms: vec![
                ("1".into(), "x".into(), "x".into()),
                ("e".into(), "x".into(), "x".into()),
            ],
            identities: vec![("x".into(), "1".into())],
            compose: vec![
                ("1".into(), "1".into(), "1".into()),
                ("1".into(), "e".into(), "1".into()),
                ("e".into(), "1".into(), "e".into()),
                ("e".into(), "e".into(), "e".into()),
            ],
        };
        assert!(matches!(validate_category(&raw), Err(Error::BadIdentity { .. })));
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // monoid {1, a, b} with a∘a = b, a∘b = a, b∘a = b, b∘b = b:
        // (a a) b = b b = b but a (a b) = a a = b ... pick a table that fails instead
        let raw = RawCategory {
            objects: vec!["x".into()],
            morphisms: vec![
                ("1".into(), "x".into(), "x".into()),
                ("a".into(), "x".into(), "x".into()),
                ("b".into(), "x".into(), "x".into()),
            ],
            identities: vec![("x".into(), "1".into())],
            compose: vec![
                ("1".into(), "1".into(), "1".into()),
                ("1".into(), "a".into(), "a".into()),
                ("1".into(), "b".into(), "b".into()),
                ("a".into(), "1".into(), "a".into()),
                ("b".into(), "1".into(), "b".into()),
                ("a".into(), "a".into(), "b".into()),
                ("a".into(), "b".into(), "a".into()),
                ("b".into(), "a".into(), "b".into()),
                ("b".into(), "b".into(), "a".into()),
            ],
        };
        assert!(matches!(validate_category(&raw), Err(Error::NonAssociative { .. })));
    }

    #[test]
    fn identity_functor_is_an_isomorphism() {
        let c = Arc::new(walking_arrow());
        let id = FinFunctor::identity(&c);
        assert!(id.is_fully_faithful());
        assert!(id.is_equivalence());
        assert!(id.is_isomorphism());
        assert!(NatTrans::identity(&id).is_identity());
    }

    #[test]
    fn identity_to_non_identity_is_not_a_functor() {
        let c = Arc::new(walking_arrow());
        let t = Arc::new(FinCat::terminal());
        // a functor from the terminal category sending 1_* to a
        let err = FinFunctor::new(t, c.clone(), vec![ObjId(0)], vec![MorId(2)]);
        assert!(matches!(err, Err(Error::NotAFunctor(_))));
    }

    #[test]
    fn opposite_is_involutive() {
        let c = walking_arrow();
        let op = c.opposite();
        assert_eq!(op.hom(ObjId(1), ObjId(0)).len(), 1);
        assert_eq!(op.opposite(), c);
    }

    #[test]
    fn functors_from_terminal_pick_objects() {
        let c = Arc::new(walking_arrow());
        let t = Arc::new(FinCat::terminal());
        let all = enumerate_functors(&t, &c, &Caps::default()).unwrap();
        assert_eq!(all.len(), c.num_objects());
        assert_eq!(all[0].ob(ObjId(0)), ObjId(0));
    }

    #[test]
    fn walking_arrow_endofunctors() {
        // monotone maps of the 2-chain: three of them
        let c = Arc::new(walking_arrow());
        let all = enumerate_functors(&c, &c, &Caps::default()).unwrap();
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn result_cap_is_an_error() {
        let c = Arc::new(walking_arrow());
        let caps = Caps {
            max_results: 2,
            ..Caps::default()
        };
        assert!(matches!(
            enumerate_functors(&c, &c, &caps),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn whiskering_identities_gives_identities() {
        let c = Arc::new(walking_arrow());
        let id = FinFunctor::identity(&c);
        let unit = NatTrans::identity(&id);
        assert!(whisker_left(&id, &unit).unwrap().is_identity());
        assert!(whisker_right(&unit, &id).unwrap().is_identity());
        assert_eq!(vcompose(&unit, &unit).unwrap(), unit);
    }

    #[test]
    fn inserter_of_identities_on_discrete_is_the_source() {
        let d = Arc::new(FinCat::discrete(&["p", "q"]));
        let id = FinFunctor::identity(&d);
        let ins = inserter(&id, &id).unwrap();
        assert_eq!(ins.category.num_objects(), 2);
        assert!(ins.projection.is_isomorphism());
        assert!(ins.projection.is_faithful());
    }

    #[test]
    fn inserter_universal_property_holds() {
        let c = Arc::new(walking_arrow());
        let id = FinFunctor::identity(&c);
        let all = enumerate_functors(&c, &c, &Caps::default()).unwrap();
        let probes = vec![Arc::new(FinCat::terminal()), c.clone()];
        for f in &all {
            let ins = inserter(f, &id).unwrap();
            assert!(verify_inserter_universal(&ins, f, &id, &probes, &Caps::default()).unwrap());
        }
    }

    #[test]
    fn full_subcategory_inclusion_is_fully_faithful() {
        let c = Arc::new(walking_arrow());
        let (sub, inc) = c.full_subcategory(&[ObjId(1)]).unwrap();
        assert_eq!(sub.num_morphisms(), 1);
        assert!(inc.is_fully_faithful());
        assert!(!inc.is_equivalence());
    }
}
