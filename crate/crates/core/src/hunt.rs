//! Search for discrete splitting bifibrations that are not inserters.
//!
//! Every inserter projection is a DSB; whether the converse holds is open.
//! For each small DSB `P: E → B` found at random, the hunt tries parallel
//! pairs `F, G: B → X` over a pool of small targets `X` and asks whether
//! `P` is isomorphic over `B` to the projection of their inserter. A DSB
//! with no matching pair is only a candidate: the pool is finite.

use std::sync::Arc;

use rand::Rng;

use crate::error::Result;
use crate::fincat::{enumerate_functors, enumerate_functors_where, inserter, FinCat};
use crate::random::{random_category, random_functor_between_random, Bounds};
use crate::splitfib::is_dsb;
use crate::{Caps, FinFunctor};

/// Whether `p` is isomorphic over its codomain to the inserter of `(f, g)`.
pub fn is_inserter_of(p: &FinFunctor, f: &FinFunctor, g: &FinFunctor, caps: &Caps) -> Result<bool> {
    if f.source() != p.target() {
        return Ok(false);
    }
    let ins = inserter(f, g)?;
    let (e, i) = (p.source(), &ins.category);
    if e.num_objects() != i.num_objects() || e.num_morphisms() != i.num_morphisms() {
        return Ok(false);
    }
    let proj = &ins.projection;
    let over = enumerate_functors_where(e, i, caps, |x, y| proj.ob(y) == p.ob(x), |m, n| proj.mor(n) == p.mor(m))?;
    Ok(over.iter().any(FinFunctor::is_isomorphism))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Found {
    pub dsb: FinFunctor,
    /// The pair exhibiting `dsb` as an inserter, if one was found.
    pub pair: Option<(FinFunctor, FinFunctor)>,
}

#[derive(Debug, Clone, Default)]
pub struct HuntReport {
    pub examined: usize,
    pub found: Vec<Found>,
    /// Pairs tried across all DSBs.
    pub pairs_tried: usize,
}

impl HuntReport {
    pub fn dsbs(&self) -> usize {
        self.found.len()
    }

    /// DSBs for which no pair in the pool worked.
    pub fn candidates(&self) -> impl Iterator<Item = &Found> {
        self.found.iter().filter(|f| f.pair.is_none())
    }
}

/// Run the hunt over `trials` random functors. `pairs_per_dsb` bounds the
/// number of parallel pairs tried for each DSB.
pub fn hunt(
    rng: &mut impl Rng,
    trials: usize,
    bounds: Bounds,
    pairs_per_dsb: usize,
    caps: &Caps,
) -> Result<HuntReport> {
    let mut report = HuntReport::default();
    for _ in 0..trials {
        let p = random_functor_between_random(rng, bounds);
        report.examined += 1;
        if !is_dsb(&p, caps)?.dsb {
            continue;
        }
        let b = p.target().clone();
        let mut pool: Vec<Arc<FinCat>> = vec![Arc::new(FinCat::terminal()), b.clone()];
        pool.extend((0..3).map(|_| random_category(rng, bounds)));
        let mut pair = None;
        let mut tried = 0;
        'pool: for x in &pool {
            let functors = enumerate_functors(&b, x, caps)?;
            for f in &functors {
                for g in &functors {
                    if tried == pairs_per_dsb {
                        break 'pool;
                    }
                    tried += 1;
                    if is_inserter_of(&p, f, g, caps)? {
                        pair = Some((f.clone(), g.clone()));
                        break 'pool;
                    }
                }
            }
        }
        report.pairs_tried += tried;
        report.found.push(Found { dsb: p, pair });
    }
    Ok(report)
}
