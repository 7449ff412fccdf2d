//! The comma categories `g⇓F`, their connected components, and the
//! connectedness criterion for lax epimorphisms in Cat.
//!
//! An object of `g⇓F` is a triple `(h, a, k)` with `h: b → Fa`, `k: Fa → c`
//! and `k ∘ h = g`. A morphism `(h, a, k) → (h', a', k')` is an `f: a → a'`
//! with `Ff ∘ h = h'` and `k' ∘ Ff = k`.

use std::collections::{HashMap, VecDeque};

use petgraph::unionfind::UnionFind;

use crate::caps::Caps;
use crate::error::Result;
use crate::fincat::{FinFunctor, MorId, ObjId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub h: MorId,
    pub a: ObjId,
    pub k: MorId,
}

/// A morphism of the comma category between two stored triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommaEdge {
    pub from: usize,
    pub to: usize,
    pub via: MorId,
}

/// A connected component of `g⇓F`, named by its least triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentId {
    pub g: MorId,
    pub rep: Triple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigStep {
    pub via: MorId,
    /// `true` when `via` goes from the previous triple to `to`.
    pub forward: bool,
    pub to: Triple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigZag {
    pub g: MorId,
    pub start: Triple,
    pub steps: Vec<ZigStep>,
}

/// Whether `f` is a comma morphism `x → y` over `F`.
pub fn is_comma_morphism(functor: &FinFunctor, x: &Triple, f: MorId, y: &Triple) -> bool {
    let (s, t) = (functor.source(), functor.target());
    s.src(f) == x.a
        && s.dst(f) == y.a
        && t.try_compose(x.h, functor.mor(f)) == Some(y.h)
        && t.try_compose(functor.mor(f), y.k) == Some(x.k)
}

fn is_triple(functor: &FinFunctor, g: MorId, x: &Triple) -> bool {
    let t = functor.target();
    t.src(x.h) == t.src(g) && t.dst(x.h) == functor.ob(x.a) && t.try_compose(x.h, x.k) == Some(g)
}

impl ZigZag {
    pub fn end(&self) -> Triple {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    /// Re-check every step against the functor, independently of how the
    /// path was found.
    pub fn replay(&self, functor: &FinFunctor) -> bool {
        if !is_triple(functor, self.g, &self.start) {
            return false;
        }
        let mut here = self.start;
        for step in &self.steps {
            if !is_triple(functor, self.g, &step.to) {
                return false;
            }
            let ok = if step.forward {
                is_comma_morphism(functor, &here, step.via, &step.to)
            } else {
                is_comma_morphism(functor, &step.to, step.via, &here)
            };
            if !ok {
                return false;
            }
            here = step.to;
        }
        true
    }
}

/// The category `g⇓F`, fully materialized with its component partition.
#[derive(Debug, Clone)]
pub struct CommaOverMorphism {
    g: MorId,
    objects: Vec<Triple>,
    index: HashMap<Triple, usize>,
    edges: Vec<CommaEdge>,
    adjacency: Vec<Vec<usize>>,
    // index of the least triple in each object's component
    leader: Vec<usize>,
}

impl CommaOverMorphism {
    pub fn g(&self) -> MorId {
        self.g
    }

    /// Triples in lexicographic order.
    pub fn objects(&self) -> &[Triple] {
        &self.objects
    }

    pub fn edges(&self) -> &[CommaEdge] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn contains(&self, x: &Triple) -> bool {
        self.index.contains_key(x)
    }

    pub fn component(&self, x: &Triple) -> Option<ComponentId> {
        self.index.get(x).map(|&i| ComponentId {
            g: self.g,
            rep: self.objects[self.leader[i]],
        })
    }

    /// All components, ordered by representative.
    pub fn components(&self) -> Vec<ComponentId> {
        let mut reps: Vec<usize> = self.leader.clone();
        reps.sort();
        reps.dedup();
        reps.into_iter()
            .map(|i| ComponentId {
                g: self.g,
                rep: self.objects[i],
            })
            .collect()
    }

    pub fn num_components(&self) -> usize {
        self.components().len()
    }

    pub fn is_connected(&self) -> bool {
        !self.objects.is_empty() && self.leader.iter().all(|&l| l == self.leader[0])
    }

    pub fn members(&self, c: &ComponentId) -> Vec<Triple> {
        match self.index.get(&c.rep) {
            Some(&r) if c.g == self.g => self
                .leader
                .iter()
                .enumerate()
                .filter(|&(_, &l)| l == self.leader[r])
                .map(|(i, _)| self.objects[i])
                .collect(),
            _ => Vec::new(),
        }
    }

    /// A shortest zig-zag from `x` to `y`, found breadth-first.
    pub fn zigzag_witness(&self, x: &Triple, y: &Triple) -> Option<ZigZag> {
        let (&xi, &yi) = (self.index.get(x)?, self.index.get(y)?);
        let mut back: Vec<Option<(usize, usize)>> = vec![None; self.objects.len()];
        let mut seen = vec![false; self.objects.len()];
        seen[xi] = true;
        let mut queue = VecDeque::from([xi]);
        while let Some(i) = queue.pop_front() {
            if i == yi {
                break;
            }
            for &e in &self.adjacency[i] {
                let edge = self.edges[e];
                let j = if edge.from == i { edge.to } else { edge.from };
                if !seen[j] {
                    seen[j] = true;
                    back[j] = Some((i, e));
                    queue.push_back(j);
                }
            }
        }
        if !seen[yi] {
            return None;
        }
        let mut steps = Vec::new();
        let mut here = yi;
        while let Some((prev, e)) = back[here] {
            let edge = self.edges[e];
            steps.push(ZigStep {
                via: edge.via,
                forward: edge.from == prev && edge.to == here,
                to: self.objects[here],
            });
            here = prev;
        }
        steps.reverse();
        Some(ZigZag {
            g: self.g,
            start: *x,
            steps,
        })
    }
}

/// Build `g⇓F` with all triples, all connecting morphisms and its components.
pub fn comma_over_morphism(functor: &FinFunctor, g: MorId, caps: &Caps) -> Result<CommaOverMorphism> {
    let (s, t) = (functor.source(), functor.target());
    caps.check_category(s, "comma source")?;
    caps.check_category(t, "comma target")?;
    let (b, c) = (t.src(g), t.dst(g));
    let mut objects = Vec::new();
    for a in s.objects() {
        let fa = functor.ob(a);
        for &h in t.hom(b, fa) {
            for &k in t.hom(fa, c) {
                if t.compose(h, k) == g {
                    objects.push(Triple { h, a, k });
                }
            }
        }
    }
    objects.sort();
    caps.check_results(objects.len(), "comma objects")?;
    let index: HashMap<Triple, usize> = objects.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let mut edges = Vec::new();
    for (i, x) in objects.iter().enumerate() {
        for &f in s.outgoing(x.a) {
            let ff = functor.mor(f);
            let h2 = t.compose(x.h, ff);
            let a2 = s.dst(f);
            for &k2 in t.hom(functor.ob(a2), c) {
                if t.compose(ff, k2) != x.k {
                    continue;
                }
                if let Some(&j) = index.get(&Triple { h: h2, a: a2, k: k2 }) {
                    edges.push(CommaEdge { from: i, to: j, via: f });
                }
            }
        }
    }
    let mut uf = UnionFind::<usize>::new(objects.len());
    let mut adjacency = vec![Vec::new(); objects.len()];
    for (e, edge) in edges.iter().enumerate() {
        uf.union(edge.from, edge.to);
        adjacency[edge.from].push(e);
        if edge.to != edge.from {
            adjacency[edge.to].push(e);
        }
    }
    let labels = uf.into_labeling();
    let mut least: HashMap<usize, usize> = HashMap::new();
    for (i, &l) in labels.iter().enumerate() {
        least.entry(l).or_insert(i);
    }
    let leader = labels.iter().map(|l| least[l]).collect();
    Ok(CommaOverMorphism {
        g,
        objects,
        index,
        edges,
        adjacency,
        leader,
    })
}

/// Every `g⇓F` for one functor, built once and shared by the component
/// algebra and the splitting checks.
#[derive(Debug, Clone)]
pub struct CommaAtlas {
    functor: FinFunctor,
    commas: Vec<CommaOverMorphism>,
}

impl CommaAtlas {
    pub fn new(functor: &FinFunctor, caps: &Caps) -> Result<CommaAtlas> {
        let commas = functor
            .target()
            .morphisms()
            .map(|g| comma_over_morphism(functor, g, caps))
            .collect::<Result<Vec<_>>>()?;
        Ok(CommaAtlas {
            functor: functor.clone(),
            commas,
        })
    }

    pub fn functor(&self) -> &FinFunctor {
        &self.functor
    }

    pub fn comma(&self, g: MorId) -> &CommaOverMorphism {
        &self.commas[g.0]
    }

    pub fn component(&self, g: MorId, x: &Triple) -> Option<ComponentId> {
        self.comma(g).component(x)
    }

    /// `C·t = [(r∘t, a, s)]` in `(g∘t)⇓F`.
    pub fn precompose(&self, c: &ComponentId, t: MorId) -> ComponentId {
        let cat = self.functor.target();
        let gt = cat.compose(t, c.g);
        let move_rep = |x: &Triple| Triple {
            h: cat.compose(t, x.h),
            a: x.a,
            k: x.k,
        };
        let out = self
            .component(gt, &move_rep(&c.rep))
            .expect("precomposed triple factors the precomposed morphism");
        debug_assert!(self
            .comma(c.g)
            .members(c)
            .iter()
            .all(|x| self.component(gt, &move_rep(x)) == Some(out)));
        out
    }

    /// `u·C = [(r, a, u∘s)]` in `(u∘g)⇓F`.
    pub fn postcompose(&self, u: MorId, c: &ComponentId) -> ComponentId {
        let cat = self.functor.target();
        let ug = cat.compose(c.g, u);
        let move_rep = |x: &Triple| Triple {
            h: x.h,
            a: x.a,
            k: cat.compose(x.k, u),
        };
        let out = self
            .component(ug, &move_rep(&c.rep))
            .expect("postcomposed triple factors the postcomposed morphism");
        debug_assert!(self
            .comma(c.g)
            .members(c)
            .iter()
            .all(|x| self.component(ug, &move_rep(x)) == Some(out)));
        out
    }
}

/// `C·t`, building the needed comma on the fly.
pub fn component_precompose(functor: &FinFunctor, c: &ComponentId, t: MorId, caps: &Caps) -> Result<ComponentId> {
    let cat = functor.target();
    let gt = cat.compose(t, c.g);
    let comma = comma_over_morphism(functor, gt, caps)?;
    let rep = Triple {
        h: cat.compose(t, c.rep.h),
        a: c.rep.a,
        k: c.rep.k,
    };
    Ok(comma
        .component(&rep)
        .expect("precomposed triple factors the precomposed morphism"))
}

/// `u·C`, building the needed comma on the fly.
pub fn component_postcompose(functor: &FinFunctor, u: MorId, c: &ComponentId, caps: &Caps) -> Result<ComponentId> {
    let cat = functor.target();
    let ug = cat.compose(c.g, u);
    let comma = comma_over_morphism(functor, ug, caps)?;
    let rep = Triple {
        h: c.rep.h,
        a: c.rep.a,
        k: cat.compose(c.rep.k, u),
    };
    Ok(comma
        .component(&rep)
        .expect("postcomposed triple factors the postcomposed morphism"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LaxEpiWitness {
    /// `g⇓F` has no objects.
    Empty { g: MorId },
    /// Two triples of `g⇓F` in different components.
    Disconnected { g: MorId, first: Triple, second: Triple },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaxEpiVerdict {
    pub lax_epi: bool,
    pub witness: Option<LaxEpiWitness>,
}

impl LaxEpiVerdict {
    /// Re-derive the witness by brute force: no union-find, no stored edges.
    pub fn recheck(&self, functor: &FinFunctor) -> bool {
        let (s, t) = (functor.source(), functor.target());
        match &self.witness {
            None => self.lax_epi,
            Some(_) if self.lax_epi => false,
            Some(LaxEpiWitness::Empty { g }) => s.objects().all(|a| {
                t.hom(t.src(*g), functor.ob(a))
                    .iter()
                    .all(|&h| t.hom(functor.ob(a), t.dst(*g)).iter().all(|&k| t.compose(h, k) != *g))
            }),
            Some(LaxEpiWitness::Disconnected { g, first, second }) => {
                if !is_triple(functor, *g, first) || !is_triple(functor, *g, second) {
                    return false;
                }
                let mut seen = vec![*first];
                let mut stack = vec![*first];
                while let Some(x) = stack.pop() {
                    if x == *second {
                        return false;
                    }
                    for f in s.morphisms() {
                        let candidates: Vec<Triple> = if s.src(f) == x.a {
                            let h = t.compose(x.h, functor.mor(f));
                            t.hom(functor.ob(s.dst(f)), t.dst(*g))
                                .iter()
                                .map(|&k| Triple { h, a: s.dst(f), k })
                                .filter(|y| is_comma_morphism(functor, &x, f, y))
                                .collect()
                        } else if s.dst(f) == x.a {
                            let k = t.compose(functor.mor(f), x.k);
                            t.hom(t.src(*g), functor.ob(s.src(f)))
                                .iter()
                                .map(|&h| Triple { h, a: s.src(f), k })
                                .filter(|y| is_triple(functor, *g, y) && is_comma_morphism(functor, y, f, &x))
                                .collect()
                        } else {
                            Vec::new()
                        };
                        for y in candidates {
                            if !seen.contains(&y) {
                                seen.push(y);
                                stack.push(y);
                            }
                        }
                    }
                }
                true
            }
        }
    }
}

/// Decide lax epimorphy: every `g⇓F`, identities included, must be
/// nonempty and connected. The first failing `g` is reported.
pub fn is_lax_epi(functor: &FinFunctor, caps: &Caps) -> Result<LaxEpiVerdict> {
    for g in functor.target().morphisms() {
        let comma = comma_over_morphism(functor, g, caps)?;
        if comma.is_empty() {
            return Ok(LaxEpiVerdict {
                lax_epi: false,
                witness: Some(LaxEpiWitness::Empty { g }),
            });
        }
        let comps = comma.components();
        if comps.len() > 1 {
            return Ok(LaxEpiVerdict {
                lax_epi: false,
                witness: Some(LaxEpiWitness::Disconnected {
                    g,
                    first: comps[0].rep,
                    second: comps[1].rep,
                }),
            });
        }
    }
    Ok(LaxEpiVerdict {
        lax_epi: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fincat::{FinCat, RawCategory};

    fn walking_arrow() -> Arc<FinCat> {
        let raw = RawCategory {
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
        };
        Arc::new(crate::fincat::validate_category(&raw).unwrap())
    }

    fn discrete_inclusion() -> FinFunctor {
        let c = walking_arrow();
        let d = Arc::new(FinCat::discrete(&["x", "y"]));
        FinFunctor::new(d, c, vec![ObjId(0), ObjId(1)], vec![MorId(0), MorId(1)]).unwrap()
    }

    #[test]
    fn identity_comma_is_connected() {
        let c = walking_arrow();
        let id = FinFunctor::identity(&c);
        for g in c.morphisms() {
            let comma = comma_over_morphism(&id, g, &Caps::default()).unwrap();
            assert!(comma.is_connected());
        }
        let one = comma_over_morphism(&id, MorId(0), &Caps::default()).unwrap();
        assert!(one.contains(&Triple {
            h: MorId(0),
            a: ObjId(0),
            k: MorId(0)
        }));
        assert!(is_lax_epi(&id, &Caps::default()).unwrap().lax_epi);
    }

    #[test]
    fn discrete_inclusion_splits_the_arrow() {
        let p = discrete_inclusion();
        let comma = comma_over_morphism(&p, MorId(2), &Caps::default()).unwrap();
        assert_eq!(comma.objects().len(), 2);
        assert!(comma.edges().iter().all(|e| e.from == e.to));
        assert_eq!(comma.num_components(), 2);
        let (x, y) = (comma.objects()[0], comma.objects()[1]);
        assert!(comma.zigzag_witness(&x, &y).is_none());
        let verdict = is_lax_epi(&p, &Caps::default()).unwrap();
        assert!(!verdict.lax_epi);
        assert!(matches!(
            verdict.witness,
            Some(LaxEpiWitness::Disconnected { g: MorId(2), .. })
        ));
        assert!(verdict.recheck(&p));
    }

    #[test]
    fn zigzag_to_self_is_empty() {
        let c = walking_arrow();
        let id = FinFunctor::identity(&c);
        let comma = comma_over_morphism(&id, MorId(2), &Caps::default()).unwrap();
        let x = comma.objects()[0];
        let z = comma.zigzag_witness(&x, &x).unwrap();
        assert!(z.steps.is_empty());
        let y = comma.objects()[1];
        assert!(comma.zigzag_witness(&x, &y).unwrap().replay(&id));
    }

    #[test]
    fn identity_actions_fix_components() {
        let c = walking_arrow();
        let id = FinFunctor::identity(&c);
        let atlas = CommaAtlas::new(&id, &Caps::default()).unwrap();
        for g in c.morphisms() {
            for comp in atlas.comma(g).components() {
                let (b, d) = (c.src(g), c.dst(g));
                assert_eq!(atlas.precompose(&comp, c.identity(b)), comp);
                assert_eq!(atlas.postcompose(c.identity(d), &comp), comp);
            }
        }
    }

    #[test]
    fn forged_witness_fails_recheck() {
        let c = walking_arrow();
        let id = FinFunctor::identity(&c);
        let comma = comma_over_morphism(&id, MorId(2), &Caps::default()).unwrap();
        let forged = LaxEpiVerdict {
            lax_epi: false,
            witness: Some(LaxEpiWitness::Disconnected {
                g: MorId(2),
                first: comma.objects()[0],
                second: comma.objects()[1],
            }),
        };
        assert!(!forged.recheck(&id));
    }
}
