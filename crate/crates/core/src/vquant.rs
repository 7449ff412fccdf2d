//! Categories enriched in a finite frame `V` (tensor = meet, unit = top):
//! V-functors into `V`, and two independent lax epimorphism tests, one by
//! comparing hom-meets of functor categories and one by a density formula.

use std::sync::Arc;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::orders::{FinPreord, MonotoneMap};

/// A finite frame with precomputed meet, join and Heyting arrow tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    name: String,
    elements: Vec<String>,
    le: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    arrow: Vec<usize>,
    top: usize,
    bottom: usize,
}

/// Elements and generating pairs `x ≤ y` of a candidate frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawFrame {
    pub name: String,
    pub elements: Vec<String>,
    pub order: Vec<(String, String)>,
}

pub fn validate_frame(raw: &RawFrame) -> Result<Frame> {
    let idx = |s: &str| {
        raw.elements
            .iter()
            .position(|e| e == s)
            .ok_or_else(|| Error::NotALattice(format!("unknown element {s}")))
    };
    let pairs = raw
        .order
        .iter()
        .map(|(x, y)| Ok((idx(x)?, idx(y)?)))
        .collect::<Result<Vec<_>>>()?;
    let p = FinPreord::generated(raw.elements.clone(), &pairs).map_err(|e| Error::NotALattice(e.to_string()))?;
    p.check_antisymmetric()?;
    Frame::from_order(&raw.name, &p)
}

impl Frame {
    fn from_order(name: &str, p: &FinPreord) -> Result<Frame> {
        let n = p.len();
        if n == 0 {
            return Err(Error::NotALattice("empty carrier".into()));
        }
        let le: Vec<bool> = (0..n * n).map(|i| p.leq(i / n, i % n)).collect();
        let bound = |x: usize, y: usize, lower: bool| -> Result<usize> {
            let cands: Vec<usize> = (0..n)
                .filter(|&z| {
                    if lower {
                        p.leq(z, x) && p.leq(z, y)
                    } else {
                        p.leq(x, z) && p.leq(y, z)
                    }
                })
                .collect();
            cands
                .iter()
                .copied()
                .find(|&z| cands.iter().all(|&w| if lower { p.leq(w, z) } else { p.leq(z, w) }))
                .ok_or_else(|| {
                    Error::NotALattice(format!(
                        "{} and {} have no {}",
                        p.name(x),
                        p.name(y),
                        if lower { "meet" } else { "join" }
                    ))
                })
        };
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                meet[x * n + y] = bound(x, y, true)?;
                join[x * n + y] = bound(x, y, false)?;
            }
        }
        let top = (0..n)
            .find(|&t| (0..n).all(|x| p.leq(x, t)))
            .ok_or_else(|| Error::NotALattice("no top".into()))?;
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| p.leq(b, x)))
            .ok_or_else(|| Error::NotALattice("no bottom".into()))?;
        // On a finite lattice binary distributivity gives distributivity over
        // every (finite) join; the empty join is the bottom on both sides.
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = meet[a * n + join[b * n + c]];
                    let rhs = join[meet[a * n + b] * n + meet[a * n + c]];
                    if lhs != rhs {
                        return Err(Error::NotDistributive {
                            a: p.name(a).into(),
                            b: p.name(b).into(),
                            c: p.name(c).into(),
                        });
                    }
                }
            }
        }
        let mut arrow = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                arrow[a * n + b] = (0..n)
                    .filter(|&c| p.leq(meet[c * n + a], b))
                    .fold(bottom, |acc, c| join[acc * n + c]);
            }
        }
        let frame = Frame {
            name: name.to_string(),
            elements: p.elements().to_vec(),
            le,
            meet,
            join,
            arrow,
            top,
            bottom,
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if frame.leq(c, frame.arrow(a, b)) != frame.leq(frame.meet(c, a), b) {
                        return Err(Error::InternalCheckFailed(format!(
                            "Heyting adjunction fails at ({}, {}, {})",
                            p.name(a),
                            p.name(b),
                            p.name(c)
                        )));
                    }
                }
            }
        }
        Ok(frame)
    }

    /// `{0, 1}`.
    pub fn boolean() -> Frame {
        Frame::chain(2)
    }

    /// The chain `0 < 1 < … < n-1`; the 3-chain is named `0 < m < 1`.
    pub fn chain(n: usize) -> Frame {
        let names: Vec<&str> = match n {
            2 => vec!["0", "1"],
            3 => vec!["0", "m", "1"],
            _ => Vec::new(),
        };
        let names: Vec<String> = if names.is_empty() {
            (0..n).map(|i| i.to_string()).collect()
        } else {
            names.into_iter().map(String::from).collect()
        };
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        let p = FinPreord::generated(names, &pairs).expect("in range");
        Frame::from_order(&format!("chain{n}"), &p).expect("chains are frames")
    }

    /// Subsets of a `k`-element set under inclusion, named by bit strings.
    pub fn powerset(k: usize) -> Frame {
        let n = 1 << k;
        let names = (0..n).map(|s| format!("{:0width$b}", s, width = k.max(1))).collect();
        let mut pairs = Vec::new();
        for s in 0..n {
            for t in 0..n {
                if s & t == s {
                    pairs.push((s, t));
                }
            }
        }
        let p = FinPreord::generated(names, &pairs).expect("in range");
        Frame::from_order(&format!("powerset{k}"), &p).expect("powersets are frames")
    }

    /// Every distributive lattice with at most four elements, up to isomorphism.
    pub fn all_small() -> Vec<Arc<Frame>> {
        vec![
            Frame::chain(1),
            Frame::chain(2),
            Frame::chain(3),
            Frame::chain(4),
            Frame::powerset(2),
        ]
        .into_iter()
        .map(Arc::new)
        .collect()
    }

    pub fn name(&self) -> &str {
        &self.name
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

    pub fn element_name(&self, x: usize) -> &str {
        &self.elements[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.le[x * self.len() + y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    pub fn arrow(&self, x: usize, y: usize) -> usize {
        self.arrow[x * self.len() + y]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Generating order pairs, for serialization.
    pub fn to_raw(&self) -> RawFrame {
        let n = self.len();
        let mut order = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && self.leq(x, y) {
                    order.push((self.elements[x].clone(), self.elements[y].clone()));
                }
            }
        }
        RawFrame {
            name: self.name.clone(),
            elements: self.elements.clone(),
            order,
        }
    }
}

/// A category enriched in a frame: `⊤ ≤ X(x,x)` and `X(y,z) ∧ X(x,y) ≤ X(x,z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VCat {
    frame: Arc<Frame>,
    objects: Vec<String>,
    hom: Vec<usize>,
}

impl VCat {
    pub fn new(frame: Arc<Frame>, objects: Vec<String>, hom: Vec<usize>) -> Result<VCat> {
        let n = objects.len();
        if hom.len() != n * n || hom.iter().any(|&v| v >= frame.len()) {
            return Err(Error::NotAVCategory("hom matrix has the wrong shape".into()));
        }
        for x in 0..n {
            if hom[x * n + x] != frame.top() {
                return Err(Error::NotAVCategory(format!(
                    "X({o},{o}) is not the top",
                    o = objects[x]
                )));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !frame.leq(frame.meet(hom[y * n + z], hom[x * n + y]), hom[x * n + z]) {
                        return Err(Error::NotAVCategory(format!(
                            "composition fails on ({}, {}, {})",
                            objects[x], objects[y], objects[z]
                        )));
                    }
                }
            }
        }
        Ok(VCat { frame, objects, hom })
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn hom(&self, x: usize, y: usize) -> usize {
        self.hom[x * self.len() + y]
    }

    pub fn opposite(&self) -> VCat {
        let n = self.len();
        VCat {
            frame: self.frame.clone(),
            objects: self.objects.clone(),
            hom: (0..n * n).map(|i| self.hom[(i % n) * n + i / n]).collect(),
        }
    }
}

/// A V-functor: `X(x,x') ≤ Y(jx, jx')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VFunctor {
    source: Arc<VCat>,
    target: Arc<VCat>,
    map: Vec<usize>,
}

impl VFunctor {
    pub fn new(source: Arc<VCat>, target: Arc<VCat>, map: Vec<usize>) -> Result<VFunctor> {
        if *source.frame != *target.frame {
            return Err(Error::NotAVFunctor("source and target use different frames".into()));
        }
        if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
            return Err(Error::NotAVFunctor("map is not a function between the objects".into()));
        }
        let v = &source.frame;
        for x in 0..source.len() {
            for y in 0..source.len() {
                if !v.leq(source.hom(x, y), target.hom(map[x], map[y])) {
                    return Err(Error::NotAVFunctor(format!(
                        "X({}, {}) exceeds the image hom",
                        source.objects[x], source.objects[y]
                    )));
                }
            }
        }
        Ok(VFunctor { source, target, map })
    }

    pub fn source(&self) -> &Arc<VCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VCat> {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// The same object map between opposite categories.
    pub fn opposite(&self) -> VFunctor {
        VFunctor {
            source: Arc::new(self.source.opposite()),
            target: Arc::new(self.target.opposite()),
            map: self.map.clone(),
        }
    }
}

/// The largest `|V|^|Y|` for which functors into `V` are enumerated.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

/// All V-functors `Y → V`: maps with `Y(y,y') ∧ f(y) ≤ f(y')`, lexicographic.
pub fn enumerate_vfunctors_to_v(y: &VCat, caps: &Caps) -> Result<Vec<Vec<usize>>> {
    let v = &y.frame;
    let n = y.len();
    let candidates = (v.len() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if candidates > ENUMERATION_LIMIT {
        return Err(Error::SizeCapExceeded {
            what: "candidate V-functors into V".into(),
            actual: usize::try_from(candidates).unwrap_or(usize::MAX),
            cap: ENUMERATION_LIMIT as usize,
        });
    }
    let mut out = Vec::new();
    let mut f = vec![0; n];
    fn go(i: usize, f: &mut Vec<usize>, y: &VCat, out: &mut Vec<Vec<usize>>, caps: &Caps) -> Result<()> {
        let v = &y.frame;
        if i == f.len() {
            out.push(f.clone());
            return caps.check_results(out.len(), "V-functors into V");
        }
        for val in 0..v.len() {
            f[i] = val;
            let ok = (0..=i).all(|j| v.leq(v.meet(y.hom(i, j), f[i]), f[j]) && v.leq(v.meet(y.hom(j, i), f[j]), f[i]));
            if ok {
                go(i + 1, f, y, out, caps)?;
            }
        }
        Ok(())
    }
    go(0, &mut f, y, &mut out, caps)?;
    Ok(out)
}

/// Lax epimorphy via `⋀_y (f y → g y) = ⋀_x (f jx → g jx)` for every pair
/// of V-functors `f, g: Y → V`.
pub fn is_vlax_epi_meet(j: &VFunctor, caps: &Caps) -> Result<bool> {
    let y = &j.target;
    let v = &y.frame;
    let fs = enumerate_vfunctors_to_v(y, caps)?;
    for f in &fs {
        for g in &fs {
            let over_y = v.meet_all((0..y.len()).map(|b| v.arrow(f[b], g[b])));
            let over_x = v.meet_all(j.map.iter().map(|&b| v.arrow(f[b], g[b])));
            if over_y != over_x {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Lax epimorphy via density: `⋁_a Y(B, ja) ∧ Y(ja, b) = Y(B, b)` for all `B, b`.
pub fn is_vlax_epi_density(j: &VFunctor) -> bool {
    let y = &j.target;
    let v = &y.frame;
    (0..y.len()).all(|big| {
        (0..y.len()).all(|b| {
            let through = v.join_all(j.map.iter().map(|&ja| v.meet(y.hom(big, ja), y.hom(ja, b))));
            through == y.hom(big, b)
        })
    })
}

/// A preorder as a category enriched in the Boolean frame.
pub fn vcat_from_preord(p: &FinPreord, two: &Arc<Frame>) -> Result<VCat> {
    if two.len() != 2 {
        return Err(Error::ShapeMismatch("the Boolean frame has two elements".into()));
    }
    let n = p.len();
    let hom = (0..n * n)
        .map(|i| if p.leq(i / n, i % n) { two.top() } else { two.bottom() })
        .collect();
    VCat::new(two.clone(), p.elements().to_vec(), hom)
}

pub fn vfunctor_from_monotone(f: &MonotoneMap, two: &Arc<Frame>) -> Result<VFunctor> {
    VFunctor::new(
        Arc::new(vcat_from_preord(f.source(), two)?),
        Arc::new(vcat_from_preord(f.target(), two)?),
        f.map().to_vec(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(name: &str, elements: &[&str], order: &[(&str, &str)]) -> RawFrame {
        RawFrame {
            name: name.into(),
            elements: elements.iter().map(|s| s.to_string()).collect(),
            order: order.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        }
    }

    #[test]
    fn boolean_frame_validates() {
        let two = validate_frame(&raw("2", &["0", "1"], &[("0", "1")])).unwrap();
        assert_eq!(two.to_raw().order, Frame::boolean().to_raw().order);
        assert_eq!(two.arrow(1, 0), 0);
        assert_eq!(two.arrow(0, 0), 1);
    }

    #[test]
    fn three_chain_arrows() {
        let v = Frame::chain(3);
        let (z, m, one) = (0, 1, 2);
        assert_eq!(v.arrow(m, z), z);
        assert_eq!(v.arrow(z, m), one);
        assert_eq!(v.arrow(one, m), m);
    }

    #[test]
    fn m3_is_not_distributive() {
        let m3 = raw(
            "M3",
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        );
        assert!(matches!(validate_frame(&m3), Err(Error::NotDistributive { .. })));
    }

    #[test]
    fn single_object_functors_are_all_of_v() {
        let v = Arc::new(Frame::chain(3));
        let y = VCat::new(v.clone(), vec!["y".into()], vec![v.top()]).unwrap();
        assert_eq!(enumerate_vfunctors_to_v(&y, &Caps::default()).unwrap().len(), 3);
    }

    #[test]
    fn boolean_two_chain_has_three_functors() {
        let two = Arc::new(Frame::boolean());
        let y = vcat_from_preord(&FinPreord::chain(&["p", "q"]), &two).unwrap();
        assert_eq!(enumerate_vfunctors_to_v(&y, &Caps::default()).unwrap().len(), 3);
    }

    #[test]
    fn density_counterexample_over_the_three_chain() {
        let v = Arc::new(Frame::chain(3));
        let (m, t) = (1, v.top());
        let y = Arc::new(
            VCat::new(
                v.clone(),
                vec!["y0".into(), "y1".into(), "y2".into()],
                vec![t, m, m, m, t, m, m, m, t],
            )
            .unwrap(),
        );
        let x = Arc::new(VCat::new(v.clone(), vec!["x".into()], vec![t]).unwrap());
        let j = VFunctor::new(x, y, vec![0]).unwrap();
        assert!(!is_vlax_epi_density(&j));
        assert!(!is_vlax_epi_meet(&j, &Caps::default()).unwrap());
        assert!(!is_vlax_epi_density(&j.opposite()));
    }

    #[test]
    fn identity_is_dense() {
        let v = Arc::new(Frame::powerset(2));
        let y = Arc::new(VCat::new(v.clone(), vec!["a".into(), "b".into()], vec![3, 1, 2, 3]).unwrap());
        let id = VFunctor::new(y.clone(), y, vec![0, 1]).unwrap();
        assert!(is_vlax_epi_density(&id));
        assert!(is_vlax_epi_meet(&id, &Caps::default()).unwrap());
    }

    #[test]
    fn opposite_twice_is_identity() {
        let v = Arc::new(Frame::chain(4));
        let y = VCat::new(v, vec!["a".into(), "b".into()], vec![3, 1, 2, 3]).unwrap();
        assert_eq!(y.opposite().opposite(), y);
    }
}
