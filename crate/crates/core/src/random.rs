//! Seeded random generation of small categories, functors, preorders and
//! frame-enriched categories for the property suites.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::concrete::ConcreteCategory;
use crate::fincat::{FinCat, FinFunctor, FunctorSearch, MorId, ObjId};
use crate::orders::{as_category, FinPreord, MonotoneMap};
use crate::vquant::{Frame, VCat, VFunctor};

/// Bounds for generated categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_objects: usize,
    pub max_morphisms: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_objects: 5,
            max_morphisms: 12,
        }
    }
}

/// A category of functions between sets of size 1 to 3, generated by a few
/// random functions and closed under composition.
pub fn random_concrete(rng: &mut impl Rng, bounds: Bounds) -> Arc<FinCat> {
    loop {
        let n = rng.gen_range(1..=bounds.max_objects);
        let mut c = ConcreteCategory::new();
        let objs: Vec<ObjId> = (0..n)
            .map(|i| c.object(&format!("o{i}"), rng.gen_range(1..=3)))
            .collect();
        for g in 0..rng.gen_range(0..=4) {
            let (s, d) = (
                *objs.choose(rng).expect("nonempty"),
                *objs.choose(rng).expect("nonempty"),
            );
            let dn = c.size(d);
            let f = (0..c.size(s)).map(|_| rng.gen_range(0..dn)).collect();
            c.generator(&format!("g{g}"), s, d, f)
                .expect("random functions are well formed");
        }
        if let Ok(closed) = c.close(bounds.max_morphisms) {
            return Arc::new(closed.category);
        }
    }
}

pub fn random_preord(rng: &mut impl Rng, n: usize, density: f64) -> FinPreord {
    let mut pairs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y && rng.gen_bool(density) {
                pairs.push((x, y));
            }
        }
    }
    FinPreord::generated((0..n).map(|i| format!("p{i}")).collect(), &pairs).expect("in range")
}

/// A random finite preorder viewed as a thin category.
pub fn random_thin(rng: &mut impl Rng, bounds: Bounds) -> Arc<FinCat> {
    loop {
        let n = rng.gen_range(1..=bounds.max_objects);
        let p = random_preord(rng, n, 0.3);
        if p.pairs().len() <= bounds.max_morphisms {
            return Arc::new(as_category(&p));
        }
    }
}

/// Concrete or thin, about two to one.
pub fn random_category(rng: &mut impl Rng, bounds: Bounds) -> Arc<FinCat> {
    if rng.gen_bool(0.65) {
        random_concrete(rng, bounds)
    } else {
        random_thin(rng, bounds)
    }
}

/// A functor found by a search with shuffled candidate orders. One always
/// exists when `b` is nonempty (any constant functor).
pub fn random_functor(rng: &mut impl Rng, a: &Arc<FinCat>, b: &Arc<FinCat>) -> Option<FinFunctor> {
    let obj_ok = |_: ObjId, _: ObjId| true;
    let mor_ok = |_: MorId, _: MorId| true;
    let search = FunctorSearch::new(a, b, &obj_ok, &mor_ok);
    let mut candidates = search.object_candidates().to_vec();
    for c in &mut candidates {
        c.shuffle(rng);
    }
    let mut rank: Vec<usize> = (0..b.num_morphisms()).collect();
    rank.shuffle(rng);
    let search = search.with_orders(candidates, rank);
    let mut found = None;
    search.run(&mut |objs, mors| {
        found = Some((objs.to_vec(), mors.to_vec()));
        false
    });
    let (objs, mors) = found?;
    Some(FinFunctor::new(a.clone(), b.clone(), objs, mors).expect("search output is lawful"))
}

/// A random category and a random functor out of it into another one.
pub fn random_functor_between_random(rng: &mut impl Rng, bounds: Bounds) -> FinFunctor {
    let a = random_category(rng, bounds);
    let b = random_category(rng, bounds);
    random_functor(rng, &a, &b).expect("targets are nonempty")
}

/// The inclusion of a full subcategory meeting every isomorphism class,
/// which is an equivalence.
pub fn random_equivalence(rng: &mut impl Rng, c: &Arc<FinCat>) -> FinFunctor {
    let mut keep = Vec::new();
    for o in c.objects() {
        let first_in_class = c.objects().take_while(|&p| p != o).all(|p| !c.are_isomorphic(p, o));
        if first_in_class || rng.gen_bool(0.5) {
            keep.push(o);
        }
    }
    keep.shuffle(rng);
    c.full_subcategory(&keep).expect("distinct objects").1
}

pub fn random_monotone(rng: &mut impl Rng, p: &Arc<FinPreord>, q: &Arc<FinPreord>) -> MonotoneMap {
    fn go(i: usize, map: &mut Vec<usize>, p: &FinPreord, q: &FinPreord, order: &[Vec<usize>]) -> bool {
        if i == map.len() {
            return true;
        }
        for &y in &order[i] {
            map[i] = y;
            let ok = (0..i).all(|j| (!p.leq(i, j) || q.leq(y, map[j])) && (!p.leq(j, i) || q.leq(map[j], y)));
            if ok && go(i + 1, map, p, q, order) {
                return true;
            }
        }
        false
    }
    let order: Vec<Vec<usize>> = (0..p.len())
        .map(|_| {
            let mut v: Vec<usize> = (0..q.len()).collect();
            v.shuffle(rng);
            v
        })
        .collect();
    let mut map = vec![0; p.len()];
    assert!(go(0, &mut map, p, q, &order), "constant maps are monotone");
    MonotoneMap::new(p.clone(), q.clone(), map).expect("search output is monotone")
}

/// Close random hom values under composition: `X(x,z) ⊇ X(y,z) ∧ X(x,y)`.
fn close_vcat(v: &Frame, n: usize, hom: &mut [usize]) {
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let via = v.meet(hom[y * n + z], hom[x * n + y]);
                    let joined = v.join(hom[x * n + z], via);
                    if joined != hom[x * n + z] {
                        hom[x * n + z] = joined;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

pub fn random_vcat(rng: &mut impl Rng, v: &Arc<Frame>, n: usize) -> VCat {
    let mut hom: Vec<usize> = (0..n * n)
        .map(|i| {
            if i / n == i % n {
                v.top()
            } else {
                rng.gen_range(0..v.len())
            }
        })
        .collect();
    close_vcat(v, n, &mut hom);
    VCat::new(v.clone(), (0..n).map(|i| format!("y{i}")).collect(), hom).expect("closed homs compose")
}

/// A random V-functor into `y`: each hom of the source is a random element
/// below the corresponding hom of `y`, then closed under composition.
pub fn random_vfunctor_into(rng: &mut impl Rng, y: &Arc<VCat>, n: usize) -> VFunctor {
    let v = y.frame().clone();
    let map: Vec<usize> = (0..n).map(|_| rng.gen_range(0..y.len())).collect();
    let mut hom = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            hom[a * n + b] = if a == b {
                v.top()
            } else {
                let bound = y.hom(map[a], map[b]);
                let below: Vec<usize> = (0..v.len()).filter(|&e| v.leq(e, bound)).collect();
                *below.choose(rng).expect("bottom is below")
            };
        }
    }
    close_vcat(&v, n, &mut hom);
    let x = VCat::new(v, (0..n).map(|i| format!("x{i}")).collect(), hom).expect("closed homs compose");
    VFunctor::new(Arc::new(x), y.clone(), map).expect("homs bounded by the target")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_categories_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let c = random_category(&mut rng, Bounds::default());
            assert!(c.num_objects() <= 5 && c.num_morphisms() <= 12);
        }
    }

    #[test]
    fn generation_is_reproducible() {
        let a = random_functor_between_random(&mut ChaCha8Rng::seed_from_u64(3), Bounds::default());
        let b = random_functor_between_random(&mut ChaCha8Rng::seed_from_u64(3), Bounds::default());
        assert_eq!(a, b);
    }

    #[test]
    fn random_equivalences_are_equivalences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let c = random_category(&mut rng, Bounds::default());
            assert!(random_equivalence(&mut rng, &c).is_equivalence());
        }
    }

    #[test]
    fn random_vfunctors_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for v in Frame::all_small() {
            let y = Arc::new(random_vcat(&mut rng, &v, 3));
            let j = random_vfunctor_into(&mut rng, &y, 2);
            assert_eq!(j.map().len(), 2);
        }
    }
}
