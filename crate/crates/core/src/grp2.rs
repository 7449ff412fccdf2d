//! Finite groups as one-object groupoids: homomorphisms, the 2-cells
//! between them, image factorization, and lax epimorphisms.
//!
//! Products are written `mul(x, y)` for `x∘y`; a 2-cell `α: f → g` is an
//! element with `f(x)∘α = α∘g(x)` for every `x`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroup {
    name: String,
    elements: Vec<String>,
    table: Vec<usize>,
    unit: usize,
    inverse: Vec<usize>,
}

impl FinGroup {
    /// `table[x * n + y]` is `x∘y`. All axioms are checked.
    pub fn new(name: &str, elements: Vec<String>, table: Vec<usize>) -> Result<FinGroup> {
        let n = elements.len();
        if n == 0 || table.len() != n * n || table.iter().any(|&z| z >= n) {
            return Err(Error::NotAGroup(
                "table is not a binary operation on the elements".into(),
            ));
        }
        let m = |x: usize, y: usize| table[x * n + y];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if m(m(x, y), z) != m(x, m(y, z)) {
                        return Err(Error::NotAGroup(format!(
                            "not associative on ({}, {}, {})",
                            elements[x], elements[y], elements[z]
                        )));
                    }
                }
            }
        }
        let unit = (0..n)
            .find(|&e| (0..n).all(|x| m(e, x) == x && m(x, e) == x))
            .ok_or_else(|| Error::NotAGroup("no neutral element".into()))?;
        let inverse = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| m(x, y) == unit && m(y, x) == unit)
                    .ok_or_else(|| Error::NotAGroup(format!("{} has no inverse", elements[x])))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinGroup {
            name: name.to_string(),
            elements,
            table,
            unit,
            inverse,
        })
    }

    fn from_closure(name: &str, elements: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> FinGroup {
        let n = elements.len();
        let table = (0..n * n).map(|i| mul(i / n, i % n)).collect();
        FinGroup::new(name, elements, table).expect("constructed groups satisfy the axioms")
    }

    pub fn trivial() -> FinGroup {
        FinGroup::cyclic(1)
    }

    /// `Z/n` with elements `0..n`.
    pub fn cyclic(n: usize) -> FinGroup {
        FinGroup::from_closure(&format!("C{n}"), (0..n).map(|i| i.to_string()).collect(), |x, y| {
            (x + y) % n
        })
    }

    /// The symmetries of a regular `n`-gon, order `2n`: `r^i` then `s r^i`.
    pub fn dihedral(n: usize) -> FinGroup {
        let names = (0..n)
            .map(|i| format!("r{i}"))
            .chain((0..n).map(|i| format!("sr{i}")))
            .collect();
        // element (f, i) = s^f r^i; r^i s = s r^{-i}
        FinGroup::from_closure(&format!("D{n}"), names, |x, y| {
            let (fx, ix) = (x / n, x % n);
            let (fy, iy) = (y / n, y % n);
            let i = if fy == 0 { (ix + iy) % n } else { (n - ix + iy) % n };
            ((fx + fy) % 2) * n + i
        })
    }

    /// All permutations of `0..n` in lexicographic order; `x∘y` applies `y` first.
    pub fn symmetric(n: usize) -> FinGroup {
        let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..n {
            let mut longer = Vec::new();
            for p in &perms {
                for v in (0..n).filter(|v| !p.contains(v)) {
                    let mut q = p.clone();
                    q.push(v);
                    longer.push(q);
                }
            }
            perms = longer;
        }
        let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let names = perms
            .iter()
            .map(|p| p.iter().map(|v| v.to_string()).collect::<String>())
            .collect();
        FinGroup::from_closure(&format!("S{n}"), names, |x, y| {
            let comp: Vec<usize> = (0..n).map(|i| perms[x][perms[y][i]]).collect();
            index[&comp]
        })
    }

    /// The quaternion group of order 8.
    pub fn quaternion() -> FinGroup {
        // ±1, ±i, ±j, ±k as (sign, unit) with unit 0=1, 1=i, 2=j, 3=k
        let names = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"].map(String::from).to_vec();
        let unit_mul = |a: usize, b: usize| -> (usize, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (0, x),
                (x, y) if x == y => (1, 0),
                (1, 2) => (0, 3),
                (2, 3) => (0, 1),
                (3, 1) => (0, 2),
                (2, 1) => (1, 3),
                (3, 2) => (1, 1),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            }
        };
        FinGroup::from_closure("Q8", names, |x, y| {
            let (sx, ux) = (x / 4, x % 4);
            let (sy, uy) = (y / 4, y % 4);
            let (s, u) = unit_mul(ux, uy);
            ((sx + sy + s) % 2) * 4 + u
        })
    }

    pub fn product(a: &FinGroup, b: &FinGroup) -> FinGroup {
        let nb = b.order();
        let names = (0..a.order() * nb)
            .map(|i| format!("({},{})", a.elements[i / nb], b.elements[i % nb]))
            .collect();
        FinGroup::from_closure(&format!("{}x{}", a.name, b.name), names, |x, y| {
            a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_name(&self, x: usize) -> &str {
        &self.elements[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order() + y]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn is_central(&self, x: usize) -> bool {
        (0..self.order()).all(|y| self.mul(x, y) == self.mul(y, x))
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut reached = self.subgroup_generated(&gens);
        for x in 0..self.order() {
            if !reached[x] {
                gens.push(x);
                reached = self.subgroup_generated(&gens);
            }
        }
        gens
    }

    /// Membership vector of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order()];
        inside[self.unit] = true;
        let mut stack = vec![self.unit];
        while let Some(x) = stack.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    stack.push(y);
                }
            }
        }
        inside
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: Arc<FinGroup>,
    target: Arc<FinGroup>,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: Arc<FinGroup>, target: Arc<FinGroup>, map: Vec<usize>) -> Result<GroupHom> {
        if map.len() != source.order() || map.iter().any(|&y| y >= target.order()) {
            return Err(Error::NotAHomomorphism(
                "map is not a function between the carriers".into(),
            ));
        }
        for x in 0..source.order() {
            for y in 0..source.order() {
                if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "f({x}∘{y}) ≠ f({x})∘f({y})",
                        x = source.element_name(x),
                        y = source.element_name(y)
                    )));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    pub fn identity(g: &Arc<FinGroup>) -> GroupHom {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            map: (0..g.order()).collect(),
        }
    }

    pub fn source(&self) -> &Arc<FinGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinGroup> {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if *self.target != *next.source {
            return Err(Error::ShapeMismatch("homomorphisms are not composable".into()));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&y| next.map[y]).collect(),
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &y in &self.map {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        self.map.iter().filter(|&&y| y == self.target.unit()).count() == 1
    }

    pub fn image(&self) -> Vec<bool> {
        let mut hit = vec![false; self.target.order()];
        for &y in &self.map {
            hit[y] = true;
        }
        hit
    }
}

/// All homomorphisms `a → b`, lexicographic in the images of `a`'s generators.
pub fn enumerate_homs(a: &Arc<FinGroup>, b: &Arc<FinGroup>) -> Vec<GroupHom> {
    let gens = a.generators();
    let mut out = Vec::new();
    let mut images = vec![0; gens.len()];
    loop {
        if let Some(map) = extend(a, b, &gens, &images) {
            out.push(GroupHom {
                source: a.clone(),
                target: b.clone(),
                map,
            });
        }
        // odometer over generator images
        let mut i = gens.len();
        loop {
            if i == 0 {
                out.sort_by(|x, y| x.map.cmp(&y.map));
                return out;
            }
            i -= 1;
            images[i] += 1;
            if images[i] < b.order() {
                break;
            }
            images[i] = 0;
        }
    }
}

fn extend(a: &FinGroup, b: &FinGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map: Vec<Option<usize>> = vec![None; a.order()];
    map[a.unit()] = Some(b.unit());
    let mut stack = vec![a.unit()];
    while let Some(x) = stack.pop() {
        let fx = map[x].expect("visited");
        for (&s, &fs) in gens.iter().zip(images) {
            let (y, fy) = (a.mul(x, s), b.mul(fx, fs));
            match map[y] {
                None => {
                    map[y] = Some(fy);
                    stack.push(y);
                }
                Some(v) if v != fy => return None,
                _ => {}
            }
        }
    }
    let map: Vec<usize> = map.into_iter().collect::<Option<_>>()?;
    let ok = (0..a.order()).all(|x| (0..a.order()).all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y])));
    ok.then_some(map)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrpTwoCell {
    pub from: GroupHom,
    pub to: GroupHom,
    pub alpha: usize,
}

pub fn validate_2cell(f: &GroupHom, g: &GroupHom, alpha: usize) -> Result<GrpTwoCell> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::ShapeMismatch("2-cell needs parallel homomorphisms".into()));
    }
    let b = &f.target;
    if alpha >= b.order() {
        return Err(Error::ShapeMismatch("2-cell element outside the codomain".into()));
    }
    for x in 0..f.source.order() {
        if b.mul(f.apply(x), alpha) != b.mul(alpha, g.apply(x)) {
            return Err(Error::NotIntertwining {
                element: b.element_name(alpha).to_string(),
                witness: f.source.element_name(x).to_string(),
            });
        }
    }
    Ok(GrpTwoCell {
        from: f.clone(),
        to: g.clone(),
        alpha,
    })
}

/// `β ∗ α = h(α)∘β`, from `h∘f` to `k∘g`; the equal form `β∘k(α)` is checked.
pub fn hcompose_2cells(beta: &GrpTwoCell, alpha: &GrpTwoCell) -> Result<GrpTwoCell> {
    if *alpha.from.target != *beta.from.source {
        return Err(Error::ShapeMismatch("2-cells are not horizontally composable".into()));
    }
    let c = beta.from.target.clone();
    let left = c.mul(beta.from.apply(alpha.alpha), beta.alpha);
    let right = c.mul(beta.alpha, beta.to.apply(alpha.alpha));
    if left != right {
        return Err(Error::InternalCheckFailed(format!(
            "h(α)∘β = {} but β∘k(α) = {}",
            c.element_name(left),
            c.element_name(right)
        )));
    }
    validate_2cell(&alpha.from.then(&beta.from)?, &alpha.to.then(&beta.to)?, left)
}

/// Vertical composite of `α: f → g` and `α': g → h`, the product `α∘α'`.
pub fn vcompose_2cells(alpha: &GrpTwoCell, next: &GrpTwoCell) -> Result<GrpTwoCell> {
    if alpha.to != next.from {
        return Err(Error::ShapeMismatch("2-cells are not vertically composable".into()));
    }
    let b = &alpha.from.target;
    validate_2cell(&alpha.from, &next.to, b.mul(alpha.alpha, next.alpha))
}

/// `f = m ∘ q` with `q` onto the image subgroup and `m` its inclusion.
pub fn image_factorization(f: &GroupHom) -> Result<(GroupHom, GroupHom)> {
    let b = &f.target;
    let kept: Vec<usize> = (0..b.order()).filter(|&y| f.image()[y]).collect();
    let pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &y)| (y, i)).collect();
    let names = kept.iter().map(|&y| b.element_name(y).to_string()).collect();
    let n = kept.len();
    let table = (0..n * n).map(|i| pos[&b.mul(kept[i / n], kept[i % n])]).collect();
    let image = Arc::new(FinGroup::new(&format!("im({})", b.name()), names, table)?);
    let q = GroupHom::new(f.source.clone(), image.clone(), f.map.iter().map(|y| pos[y]).collect())?;
    let m = GroupHom::new(image, b.clone(), kept)?;
    Ok((q, m))
}

/// Lax epimorphisms of groups are exactly the surjections.
pub fn is_lax_epi_grp(f: &GroupHom) -> bool {
    f.is_surjective()
}

/// Whether `g(f(x))∘γ = γ∘h(f(x))` for all `x` implies `g(y)∘γ = γ∘h(y)` for all `y`.
pub fn laxepi_condition_probe(f: &GroupHom, g: &GroupHom, h: &GroupHom, gamma: usize) -> bool {
    let c = &g.target;
    let holds = |y: usize| c.mul(g.apply(y), gamma) == c.mul(gamma, h.apply(y));
    let hypothesis = f.map.iter().all(|&y| holds(y));
    !hypothesis || (0..f.target.order()).all(holds)
}

/// Cyclic groups `C1..C12`, dihedral `D2..D6` and symmetric `S1..S3`,
/// restricted to order at most `max_order`.
pub fn probe_family(max_order: usize) -> Vec<Arc<FinGroup>> {
    (1..=12)
        .map(FinGroup::cyclic)
        .chain((2..=6).map(FinGroup::dihedral))
        .chain((1..=3).map(FinGroup::symmetric))
        .filter(|g| g.order() <= max_order)
        .map(Arc::new)
        .collect()
}

/// A counterexample to the probe implication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeWitness {
    pub g: GroupHom,
    pub h: GroupHom,
    pub gamma: usize,
}

/// Searches `(g, h, γ)` into each probe codomain. Results depend only on
/// the image of `f`, so they are memoized per (domain group, image, codomain).
type ProbeKey = (String, usize);

/// Indices of `g`, `h` and `γ`, with the mask of elements where they agree.
type AgreementRow = (usize, usize, usize, u64);

#[derive(Debug, Default)]
pub struct ProbeSearch {
    // per (group, codomain): homs and the agreement masks of each (g, h, γ)
    tables: HashMap<ProbeKey, Vec<AgreementRow>>,
    homs: HashMap<ProbeKey, Vec<GroupHom>>,
}

impl ProbeSearch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Find a violating triple for `f` among homomorphisms into `family`.
    pub fn find_violation(&mut self, f: &GroupHom, family: &[Arc<FinGroup>]) -> Option<ProbeWitness> {
        let b = f.target.clone();
        assert!(b.order() <= 64, "probe masks hold at most 64 elements");
        let image_mask = f.map.iter().fold(0u64, |acc, &y| acc | 1 << y);
        let full = if b.order() == 64 {
            u64::MAX
        } else {
            (1u64 << b.order()) - 1
        };
        for (ci, c) in family.iter().enumerate() {
            let key = (format!("{}:{:?}", b.name(), b.table), ci);
            if !self.tables.contains_key(&key) {
                let homs = enumerate_homs(&b, c);
                let mut rows = Vec::new();
                for (gi, g) in homs.iter().enumerate() {
                    for (hi, h) in homs.iter().enumerate() {
                        for gamma in 0..c.order() {
                            let mask = (0..b.order())
                                .filter(|&y| c.mul(g.apply(y), gamma) == c.mul(gamma, h.apply(y)))
                                .fold(0u64, |acc, y| acc | 1 << y);
                            if mask != full {
                                rows.push((gi, hi, gamma, mask));
                            }
                        }
                    }
                }
                self.tables.insert(key.clone(), rows);
                self.homs.insert(key.clone(), homs);
            }
            let hit = self.tables[&key].iter().find(|r| r.3 & image_mask == image_mask);
            if let Some(&(gi, hi, gamma, _)) = hit {
                let homs = &self.homs[&key];
                return Some(ProbeWitness {
                    g: homs[gi].clone(),
                    h: homs[hi].clone(),
                    gamma,
                });
            }
        }
        None
    }
}

/// Groups of order at most 8, one per isomorphism class.
pub fn small_groups() -> Vec<Arc<FinGroup>> {
    let c2 = FinGroup::cyclic(2);
    let klein = FinGroup::product(&c2, &c2);
    vec![
        FinGroup::trivial(),
        c2.clone(),
        FinGroup::cyclic(3),
        FinGroup::cyclic(4),
        klein.clone(),
        FinGroup::cyclic(5),
        FinGroup::cyclic(6),
        FinGroup::symmetric(3),
        FinGroup::cyclic(7),
        FinGroup::cyclic(8),
        FinGroup::product(&FinGroup::cyclic(4), &c2),
        FinGroup::product(&klein, &c2),
        FinGroup::dihedral(4),
        FinGroup::quaternion(),
    ]
    .into_iter()
    .map(Arc::new)
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructed_groups_have_the_right_orders() {
        assert_eq!(FinGroup::dihedral(3).order(), 6);
        assert_eq!(FinGroup::symmetric(3).order(), 6);
        assert_eq!(FinGroup::quaternion().order(), 8);
        assert_eq!(small_groups().len(), 14);
        assert_eq!(probe_family(12).len(), 20);
    }

    #[test]
    fn hom_counts_match_known_values() {
        // |Hom(C_m, C_n)| = gcd(m, n)
        let c4 = Arc::new(FinGroup::cyclic(4));
        let c6 = Arc::new(FinGroup::cyclic(6));
        assert_eq!(enumerate_homs(&c4, &c6).len(), 2);
        // endomorphisms of S3: 6 automorphisms, 3 onto subgroups of order 2, 1 trivial
        let s3 = Arc::new(FinGroup::symmetric(3));
        assert_eq!(enumerate_homs(&s3, &s3).len(), 10);
    }

    #[test]
    fn unit_is_a_two_cell_on_any_arrow() {
        let s3 = Arc::new(FinGroup::symmetric(3));
        let id = GroupHom::identity(&s3);
        let cell = validate_2cell(&id, &id, s3.unit()).unwrap();
        let both = hcompose_2cells(&cell, &cell).unwrap();
        assert_eq!(both.alpha, s3.unit());
    }

    #[test]
    fn non_central_element_does_not_intertwine_the_identity() {
        let s3 = Arc::new(FinGroup::symmetric(3));
        let id = GroupHom::identity(&s3);
        let x = (0..6).find(|&x| !s3.is_central(x)).unwrap();
        assert!(matches!(
            validate_2cell(&id, &id, x),
            Err(Error::NotIntertwining { .. })
        ));
    }

    #[test]
    fn z2_into_s3() {
        let c2 = Arc::new(FinGroup::cyclic(2));
        let s3 = Arc::new(FinGroup::symmetric(3));
        let emb = enumerate_homs(&c2, &s3).into_iter().find(|f| f.is_injective()).unwrap();
        let (_, m) = image_factorization(&emb).unwrap();
        assert_eq!(m.source().order(), 2);
        assert!(!is_lax_epi_grp(&emb));
        let mut search = ProbeSearch::new();
        let w = search.find_violation(&emb, &probe_family(12)).unwrap();
        assert!(!laxepi_condition_probe(&emb, &w.g, &w.h, w.gamma));
    }

    #[test]
    fn sign_map_is_a_lax_epi() {
        let s3 = Arc::new(FinGroup::symmetric(3));
        let c2 = Arc::new(FinGroup::cyclic(2));
        let sign = enumerate_homs(&s3, &c2)
            .into_iter()
            .find(|f| f.is_surjective())
            .unwrap();
        assert!(is_lax_epi_grp(&sign));
        let (_, m) = image_factorization(&sign).unwrap();
        assert!(m.is_surjective() && m.is_injective());
        let mut search = ProbeSearch::new();
        assert!(search.find_violation(&sign, &probe_family(12)).is_none());
    }

    #[test]
    fn trivial_map_has_trivial_image() {
        let s3 = Arc::new(FinGroup::symmetric(3));
        let c4 = Arc::new(FinGroup::cyclic(4));
        let triv = enumerate_homs(&s3, &c4).into_iter().next().unwrap();
        let (_, m) = image_factorization(&triv).unwrap();
        assert_eq!(m.source().order(), 1);
    }
}
