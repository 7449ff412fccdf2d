//! Preorders and posets as locally thin categories: lax epimorphisms,
//! order-embeddings, inserters, coinserters, commas and pushouts.

use std::collections::HashMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::fincat::{Arrow, FinCat, FinFunctor, MorId, ObjId};

/// A finite preorder stored as a reflexive, transitive boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPreord {
    elements: Vec<String>,
    le: Vec<bool>,
}

fn close(n: usize, le: &mut [bool]) {
    for i in 0..n {
        le[i * n + i] = true;
    }
    // square until stable
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if le[i * n + j] {
                    continue;
                }
                if (0..n).any(|k| le[i * n + k] && le[k * n + j]) {
                    le[i * n + j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

impl FinPreord {
    /// The least preorder containing the given pairs `x ≤ y`.
    pub fn generated(elements: Vec<String>, pairs: &[(usize, usize)]) -> Result<FinPreord> {
        let n = elements.len();
        let mut le = vec![false; n * n];
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::NotAPreorder(format!("pair ({x}, {y}) is out of range")));
            }
            le[x * n + y] = true;
        }
        close(n, &mut le);
        Ok(FinPreord { elements, le })
    }

    /// Take a full relation matrix as given; reflexivity and transitivity are checked.
    pub fn from_matrix(elements: Vec<String>, le: Vec<bool>) -> Result<FinPreord> {
        let n = elements.len();
        if le.len() != n * n {
            return Err(Error::NotAPreorder("matrix has the wrong size".into()));
        }
        for i in 0..n {
            if !le[i * n + i] {
                return Err(Error::NotAPreorder(format!("{} ≰ {}", elements[i], elements[i])));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if le[i * n + j] && le[j * n + k] && !le[i * n + k] {
                        return Err(Error::NotAPreorder(format!(
                            "{} ≤ {} ≤ {} but not {} ≤ {}",
                            elements[i], elements[j], elements[k], elements[i], elements[k]
                        )));
                    }
                }
            }
        }
        Ok(FinPreord { elements, le })
    }

    pub fn discrete(names: &[&str]) -> FinPreord {
        FinPreord::generated(names.iter().map(|s| s.to_string()).collect(), &[]).expect("no pairs")
    }

    pub fn chain(names: &[&str]) -> FinPreord {
        let pairs: Vec<(usize, usize)> = (1..names.len()).map(|i| (i - 1, i)).collect();
        FinPreord::generated(names.iter().map(|s| s.to_string()).collect(), &pairs).expect("in range")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, x: usize) -> &str {
        &self.elements[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.le[x * self.len() + y]
    }

    pub fn iso(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) && self.leq(y, x)
    }

    /// All related pairs `x ≤ y`, row-major.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.leq(x, y))
            .collect()
    }

    pub fn check_antisymmetric(&self) -> Result<()> {
        for x in 0..self.len() {
            for y in x + 1..self.len() {
                if self.iso(x, y) {
                    return Err(Error::NotAntisymmetric {
                        x: self.elements[x].clone(),
                        y: self.elements[y].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_poset(&self) -> bool {
        self.check_antisymmetric().is_ok()
    }
}

/// A monotone map between finite preorders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    source: Arc<FinPreord>,
    target: Arc<FinPreord>,
    map: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: Arc<FinPreord>, target: Arc<FinPreord>, map: Vec<usize>) -> Result<MonotoneMap> {
        if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
            return Err(Error::NotMonotone("map is not a function between the carriers".into()));
        }
        for (x, y) in source.pairs() {
            if !target.leq(map[x], map[y]) {
                return Err(Error::NotMonotone(format!(
                    "{} ≤ {} but their images are unrelated",
                    source.name(x),
                    source.name(y)
                )));
            }
        }
        Ok(MonotoneMap { source, target, map })
    }

    pub fn identity(p: &Arc<FinPreord>) -> MonotoneMap {
        MonotoneMap {
            source: p.clone(),
            target: p.clone(),
            map: (0..p.len()).collect(),
        }
    }

    pub fn source(&self) -> &Arc<FinPreord> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinPreord> {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MonotoneMap) -> Result<MonotoneMap> {
        if *self.target != *next.source {
            return Err(Error::ShapeMismatch("monotone maps are not composable".into()));
        }
        Ok(MonotoneMap {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&y| next.map[y]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// The thin category of a preorder: one morphism `x≤y` per related pair.
pub fn as_category(p: &FinPreord) -> FinCat {
    let pairs = p.pairs();
    let index: HashMap<(usize, usize), MorId> = pairs.iter().enumerate().map(|(i, &xy)| (xy, MorId(i))).collect();
    let arrows = pairs
        .iter()
        .map(|&(x, y)| Arrow {
            name: format!("{}≤{}", p.name(x), p.name(y)),
            src: ObjId(x),
            dst: ObjId(y),
        })
        .collect();
    let identities = (0..p.len()).map(|x| index[&(x, x)]).collect();
    FinCat::from_parts(p.elements.clone(), arrows, identities, |f, g| {
        let (x, _) = pairs[f.0];
        let (_, z) = pairs[g.0];
        index.get(&(x, z)).copied()
    })
    .expect("a preorder is a lawful thin category")
}

pub fn as_preord(c: &FinCat) -> Result<FinPreord> {
    if !c.is_thin() {
        return Err(Error::NotThin("some hom-set has two morphisms".into()));
    }
    let pairs: Vec<(usize, usize)> = c.morphisms().map(|m| (c.src(m).0, c.dst(m).0)).collect();
    let n = c.num_objects();
    let mut le = vec![false; n * n];
    for (x, y) in pairs {
        le[x * n + y] = true;
    }
    FinPreord::from_matrix(c.object_names().to_vec(), le)
}

/// The functor between thin categories induced by a monotone map.
pub fn monotone_as_functor(f: &MonotoneMap) -> FinFunctor {
    let (s, t) = (Arc::new(as_category(&f.source)), Arc::new(as_category(&f.target)));
    let morphisms = s
        .morphisms()
        .map(|m| t.hom(ObjId(f.map[s.src(m).0]), ObjId(f.map[s.dst(m).0]))[0])
        .collect();
    FinFunctor::new(s, t, f.map.iter().map(|&y| ObjId(y)).collect(), morphisms).expect("monotone maps are functors")
}

/// Every target element is isomorphic to an image element.
pub fn is_lax_epi_preord(f: &MonotoneMap) -> bool {
    (0..f.target.len()).all(|b| f.map.iter().any(|&fa| f.target.iso(fa, b)))
}

/// Lax epimorphisms of posets are the surjections.
pub fn is_lax_epi_pos(f: &MonotoneMap) -> Result<bool> {
    f.source.check_antisymmetric()?;
    f.target.check_antisymmetric()?;
    Ok(f.is_surjective())
}

pub fn is_order_embedding(m: &MonotoneMap) -> bool {
    let n = m.source.len();
    m.is_injective() && (0..n).all(|x| (0..n).all(|y| m.source.leq(x, y) == m.target.leq(m.map[x], m.map[y])))
}

/// An order-embedding whose image is closed under isomorphic elements.
pub fn is_lax_strong_mono_preord(m: &MonotoneMap) -> bool {
    let mut in_image = vec![false; m.target.len()];
    for &y in &m.map {
        in_image[y] = true;
    }
    is_order_embedding(m) && (0..m.target.len()).all(|y| in_image[y] || !m.map.iter().any(|&my| m.target.iso(my, y)))
}

/// The coinserter of `f, g: A → B`: the carrier of `B` with the order
/// generated by `≤_B` and every `y ≤ f(x)`, `g(x) ≤ z`; the map is the identity.
pub fn coinserter_preord(f: &MonotoneMap, g: &MonotoneMap) -> Result<(Arc<FinPreord>, MonotoneMap)> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::ShapeMismatch("coinserter needs a parallel pair".into()));
    }
    let b = &f.target;
    let mut pairs = b.pairs();
    for x in 0..f.source.len() {
        for y in 0..b.len() {
            for z in 0..b.len() {
                if b.leq(y, f.map[x]) && b.leq(g.map[x], z) {
                    pairs.push((y, z));
                }
            }
        }
    }
    let bar = Arc::new(FinPreord::generated(b.elements.clone(), &pairs)?);
    let q = MonotoneMap::new(b.clone(), bar.clone(), (0..b.len()).collect())?;
    Ok((bar, q))
}

/// All monotone maps `p → q`, lexicographic.
pub fn enumerate_monotone(p: &Arc<FinPreord>, q: &Arc<FinPreord>) -> Vec<MonotoneMap> {
    let mut out = Vec::new();
    let mut map = vec![0; p.len()];
    fn go(i: usize, map: &mut Vec<usize>, p: &Arc<FinPreord>, q: &Arc<FinPreord>, out: &mut Vec<MonotoneMap>) {
        if i == map.len() {
            out.push(MonotoneMap {
                source: p.clone(),
                target: q.clone(),
                map: map.clone(),
            });
            return;
        }
        for y in 0..q.len() {
            map[i] = y;
            let ok = (0..=i).all(|j| (!p.leq(i, j) || q.leq(y, map[j])) && (!p.leq(j, i) || q.leq(map[j], y)));
            if ok {
                go(i + 1, map, p, q, out);
            }
        }
    }
    go(0, &mut map, p, q, &mut out);
    out
}

/// Check the coinserter's universal property against probe preorders: every
/// `h: B → X` with `h∘f ≤ h∘g` pointwise factors uniquely through `q`.
pub fn verify_coinserter_universal(
    f: &MonotoneMap,
    g: &MonotoneMap,
    q: &MonotoneMap,
    probes: &[Arc<FinPreord>],
) -> bool {
    for x in probes {
        for h in enumerate_monotone(&f.target, x) {
            let inserts = (0..f.source.len()).all(|a| x.leq(h.map[f.map[a]], h.map[g.map[a]]));
            let factors = enumerate_monotone(&q.target, x)
                .into_iter()
                .filter(|k| (0..q.source.len()).all(|b| k.map[q.map[b]] == h.map[b]))
                .count();
            if inserts != (factors == 1) || factors > 1 {
                return false;
            }
        }
    }
    true
}

/// The comma of `h` along itself, with its two projections.
pub fn comma_preord(h: &MonotoneMap) -> Result<(Arc<FinPreord>, MonotoneMap, MonotoneMap)> {
    let a = &h.source;
    let mut carrier = Vec::new();
    for x in 0..a.len() {
        for y in 0..a.len() {
            if h.target.leq(h.map[x], h.map[y]) {
                carrier.push((x, y));
            }
        }
    }
    let n = carrier.len();
    let mut le = vec![false; n * n];
    for (i, &(x, y)) in carrier.iter().enumerate() {
        for (j, &(x2, y2)) in carrier.iter().enumerate() {
            le[i * n + j] = a.leq(x, x2) && a.leq(y, y2);
        }
    }
    let names = carrier
        .iter()
        .map(|&(x, y)| format!("({},{})", a.name(x), a.name(y)))
        .collect();
    let p = Arc::new(FinPreord::from_matrix(names, le)?);
    let pi1 = MonotoneMap::new(p.clone(), a.clone(), carrier.iter().map(|c| c.0).collect())?;
    let pi2 = MonotoneMap::new(p.clone(), a.clone(), carrier.iter().map(|c| c.1).collect())?;
    Ok((p, pi1, pi2))
}

/// The pushout of a span `B ← A → C`: the set pushout with the least
/// preorder making both legs monotone.
pub fn pushout_preord(f: &MonotoneMap, g: &MonotoneMap) -> Result<(Arc<FinPreord>, MonotoneMap, MonotoneMap)> {
    if f.source != g.source {
        return Err(Error::ShapeMismatch("pushout needs a span".into()));
    }
    let (b, c) = (&f.target, &g.target);
    let nb = b.len();
    let mut uf = UnionFind::<usize>::new(nb + c.len());
    for x in 0..f.source.len() {
        uf.union(f.map[x], nb + g.map[x]);
    }
    let labels = uf.into_labeling();
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    let mut names = Vec::new();
    let mut index = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        let next = class_of.len();
        let cls = *class_of.entry(*l).or_insert_with(|| {
            names.push(if i < nb {
                b.name(i).to_string()
            } else {
                format!("{}'", c.name(i - nb))
            });
            next
        });
        index.push(cls);
    }
    let mut pairs: Vec<(usize, usize)> = b.pairs().into_iter().map(|(x, y)| (index[x], index[y])).collect();
    pairs.extend(c.pairs().into_iter().map(|(x, y)| (index[nb + x], index[nb + y])));
    let d = Arc::new(FinPreord::generated(names, &pairs)?);
    let to_d_b = MonotoneMap::new(b.clone(), d.clone(), (0..nb).map(|x| index[x]).collect())?;
    let to_d_c = MonotoneMap::new(c.clone(), d.clone(), (0..c.len()).map(|x| index[nb + x]).collect())?;
    Ok((d, to_d_b, to_d_c))
}

/// The inserter of `f1, f2: X → Y`: the elements with `f1(x) ≤ f2(x)` and
/// the induced order, with its inclusion.
pub fn inserter_preord(f1: &MonotoneMap, f2: &MonotoneMap) -> Result<(Arc<FinPreord>, MonotoneMap)> {
    if f1.source != f2.source || f1.target != f2.target {
        return Err(Error::ShapeMismatch("inserter needs a parallel pair".into()));
    }
    let x = &f1.source;
    let kept: Vec<usize> = (0..x.len()).filter(|&i| f1.target.leq(f1.map[i], f2.map[i])).collect();
    let n = kept.len();
    let mut le = vec![false; n * n];
    for (i, &a) in kept.iter().enumerate() {
        for (j, &b) in kept.iter().enumerate() {
            le[i * n + j] = x.leq(a, b);
        }
    }
    let names = kept.iter().map(|&i| x.name(i).to_string()).collect();
    let ins = Arc::new(FinPreord::from_matrix(names, le)?);
    let inc = MonotoneMap::new(ins.clone(), x.clone(), kept)?;
    Ok((ins, inc))
}

/// For `m: X → Y`, double every element of `Y` outside the image of `m`
/// and return the two maps `f1, f2: Y → Z` that agree on the image.
/// `Z` carries the least preorder making both maps monotone.
pub fn doubling(m: &MonotoneMap) -> Result<(Arc<FinPreord>, MonotoneMap, MonotoneMap)> {
    let y = &m.target;
    let mut in_image = vec![false; y.len()];
    for &v in &m.map {
        in_image[v] = true;
    }
    let mut names = Vec::new();
    let mut f1 = Vec::new();
    let mut f2 = Vec::new();
    for (v, &kept) in in_image.iter().enumerate() {
        if kept {
            f1.push(names.len());
            f2.push(names.len());
            names.push(y.name(v).to_string());
        } else {
            f1.push(names.len());
            names.push(format!("({},1)", y.name(v)));
            f2.push(names.len());
            names.push(format!("({},2)", y.name(v)));
        }
    }
    let mut pairs = Vec::new();
    for (u, v) in y.pairs() {
        pairs.push((f1[u], f1[v]));
        pairs.push((f2[u], f2[v]));
    }
    let z = Arc::new(FinPreord::generated(names, &pairs)?);
    let f1 = MonotoneMap::new(y.clone(), z.clone(), f1)?;
    let f2 = MonotoneMap::new(y.clone(), z.clone(), f2)?;
    Ok((z, f1, f2))
}

/// Whether `m` is (isomorphic over `Y` to) the inserter of `f1, f2`.
pub fn is_inserter_of(m: &MonotoneMap, f1: &MonotoneMap, f2: &MonotoneMap) -> Result<bool> {
    let (_, inc) = inserter_preord(f1, f2)?;
    let mut image: Vec<usize> = m.map.clone();
    image.sort();
    image.dedup();
    Ok(is_order_embedding(m) && image == inc.map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(p: FinPreord) -> Arc<FinPreord> {
        Arc::new(p)
    }

    #[test]
    fn singleton_is_the_terminal_category() {
        let p = FinPreord::discrete(&["*"]);
        let c = as_category(&p);
        assert_eq!(c.num_objects(), 1);
        assert_eq!(c.num_morphisms(), 1);
        assert_eq!(as_preord(&c).unwrap(), p);
    }

    #[test]
    fn walking_arrow_is_the_two_chain() {
        let two = FinPreord::chain(&["FA", "GA"]);
        let c = as_category(&two);
        assert_eq!(c.num_morphisms(), 3);
        assert_eq!(as_preord(&c).unwrap(), two);
    }

    #[test]
    fn non_thin_category_is_rejected() {
        let mut c = crate::concrete::ConcreteCategory::new();
        let x = c.object("x", 2);
        c.generator("s", x, x, vec![1, 0]).unwrap();
        assert!(matches!(
            as_preord(&c.close(8).unwrap().category),
            Err(Error::NotThin(_))
        ));
    }

    #[test]
    fn inclusion_into_isomorphic_pair() {
        let one = arc(FinPreord::discrete(&["x"]));
        let pair = arc(FinPreord::generated(vec!["x".into(), "y".into()], &[(0, 1), (1, 0)]).unwrap());
        let m = MonotoneMap::new(one, pair, vec![0]).unwrap();
        assert!(is_lax_epi_preord(&m));
        assert!(is_order_embedding(&m));
        assert!(!is_lax_strong_mono_preord(&m));
        assert!(matches!(is_lax_epi_pos(&m), Err(Error::NotAntisymmetric { .. })));
    }

    #[test]
    fn point_into_two_chain_is_not_lax_epi_in_pos() {
        let one = arc(FinPreord::discrete(&["x"]));
        let two = arc(FinPreord::chain(&["x", "y"]));
        let m = MonotoneMap::new(one, two, vec![0]).unwrap();
        assert!(!is_lax_epi_pos(&m).unwrap());
        assert!(!is_lax_epi_preord(&m));
    }

    #[test]
    fn coinserter_of_equal_maps_keeps_the_order() {
        let a = arc(FinPreord::discrete(&["a"]));
        let b = arc(FinPreord::chain(&["p", "q", "r"]));
        let f = MonotoneMap::new(a, b.clone(), vec![1]).unwrap();
        let (bar, q) = coinserter_preord(&f, &f).unwrap();
        assert_eq!(*bar, *b);
        assert!(q.is_bijective());
    }

    #[test]
    fn coinserter_of_the_discrete_pair_is_the_two_chain() {
        let a = arc(FinPreord::discrete(&["A"]));
        let b = arc(FinPreord::discrete(&["FA", "GA"]));
        let f = MonotoneMap::new(a.clone(), b.clone(), vec![0]).unwrap();
        let g = MonotoneMap::new(a, b, vec![1]).unwrap();
        let (bar, q) = coinserter_preord(&f, &g).unwrap();
        assert_eq!(*bar, FinPreord::chain(&["FA", "GA"]));
        assert!(is_lax_epi_preord(&q));
        let probes = vec![
            arc(FinPreord::chain(&["0", "1"])),
            arc(FinPreord::discrete(&["u", "v"])),
        ];
        assert!(verify_coinserter_universal(&f, &g, &q, &probes));
    }

    #[test]
    fn comma_of_chain_identity_has_three_pairs() {
        let two = arc(FinPreord::chain(&["0", "1"]));
        let (p, _, _) = comma_preord(&MonotoneMap::identity(&two)).unwrap();
        assert_eq!(p.len(), 3);
        let d = arc(FinPreord::discrete(&["u", "v"]));
        let (diag, _, _) = comma_preord(&MonotoneMap::identity(&d)).unwrap();
        assert_eq!(diag.len(), 2);
    }

    #[test]
    fn pushout_along_identity_is_the_other_leg() {
        let a = arc(FinPreord::chain(&["0", "1"]));
        let c = arc(FinPreord::chain(&["x", "y", "z"]));
        let g = MonotoneMap::new(a.clone(), c.clone(), vec![0, 2]).unwrap();
        let (d, _, leg) = pushout_preord(&MonotoneMap::identity(&a), &g).unwrap();
        assert_eq!(d.len(), 3);
        assert!(leg.is_bijective() && is_order_embedding(&leg));
    }

    #[test]
    fn doubling_presents_a_strong_mono_as_an_inserter() {
        let x = arc(FinPreord::chain(&["a", "b"]));
        let y = arc(FinPreord::chain(&["a", "m", "b"]));
        let m = MonotoneMap::new(x, y, vec![0, 2]).unwrap();
        assert!(is_lax_strong_mono_preord(&m));
        let (_, f1, f2) = doubling(&m).unwrap();
        assert!(is_inserter_of(&m, &f1, &f2).unwrap());
    }

    #[test]
    fn monotone_enumeration_counts() {
        // monotone self-maps of the 2-chain: 3
        let two = arc(FinPreord::chain(&["0", "1"]));
        assert_eq!(enumerate_monotone(&two, &two).len(), 3);
    }
}
