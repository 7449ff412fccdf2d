//! Categories of functions between small finite sets, closed under
//! composition. Used for corpus fixtures and random generation: lawfulness
//! is inherited from function composition.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fincat::{Arrow, FinCat, MorId, ObjId};

#[derive(Debug, Clone, Default)]
pub struct ConcreteCategory {
    objects: Vec<(String, usize)>,
    generators: Vec<(String, ObjId, ObjId, Vec<usize>)>,
}

/// A closed concrete category together with the function behind each morphism.
#[derive(Debug, Clone)]
pub struct Concrete {
    pub category: FinCat,
    pub functions: Vec<Vec<usize>>,
}

impl ConcreteCategory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: &str, size: usize) -> ObjId {
        self.objects.push((name.to_string(), size));
        ObjId(self.objects.len() - 1)
    }

    /// Add a named function. A generator equal to an earlier morphism with
    /// the same endpoints is merged into it, so the earlier name wins.
    pub fn generator(&mut self, name: &str, src: ObjId, dst: ObjId, function: Vec<usize>) -> Result<()> {
        let (sn, dn) = (self.objects[src.0].1, self.objects[dst.0].1);
        if function.len() != sn || function.iter().any(|&v| v >= dn) {
            return Err(Error::Malformed(format!(
                "{name} is not a function between its endpoints"
            )));
        }
        self.generators.push((name.to_string(), src, dst, function));
        Ok(())
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn size(&self, o: ObjId) -> usize {
        self.objects[o.0].1
    }

    /// Close under composition. Composites are named `g∘f`.
    pub fn close(&self, max_morphisms: usize) -> Result<Concrete> {
        let mut arrows: Vec<Arrow> = Vec::new();
        let mut functions: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<(ObjId, ObjId, Vec<usize>), MorId> = HashMap::new();
        let mut push = |name: String,
                        src: ObjId,
                        dst: ObjId,
                        f: Vec<usize>,
                        arrows: &mut Vec<Arrow>,
                        functions: &mut Vec<Vec<usize>>|
         -> Result<bool> {
            let key = (src, dst, f);
            if index.contains_key(&key) {
                return Ok(false);
            }
            if arrows.len() == max_morphisms {
                return Err(Error::SizeCapExceeded {
                    what: "morphisms of concrete closure".into(),
                    actual: max_morphisms + 1,
                    cap: max_morphisms,
                });
            }
            index.insert(key.clone(), MorId(arrows.len()));
            arrows.push(Arrow { name, src, dst });
            functions.push(key.2);
            Ok(true)
        };
        for (i, (name, size)) in self.objects.iter().enumerate() {
            let o = ObjId(i);
            push(
                format!("1_{name}"),
                o,
                o,
                (0..*size).collect(),
                &mut arrows,
                &mut functions,
            )?;
        }
        for (name, s, d, f) in &self.generators {
            push(name.clone(), *s, *d, f.clone(), &mut arrows, &mut functions)?;
        }
        let mut next = 0;
        while next < arrows.len() {
            let m = MorId(next);
            for (gname, s, d, gf) in &self.generators {
                if *s != arrows[m.0].dst {
                    continue;
                }
                let composite: Vec<usize> = functions[m.0].iter().map(|&x| gf[x]).collect();
                let name = format!("{gname}∘{}", arrows[m.0].name);
                let src = arrows[m.0].src;
                push(name, src, *d, composite, &mut arrows, &mut functions)?;
            }
            next += 1;
        }
        let identities = (0..self.objects.len()).map(MorId).collect();
        let names = self.objects.iter().map(|(n, _)| n.clone()).collect();
        let lookup = |f: MorId, g: MorId| -> Option<MorId> {
            let h: Vec<usize> = functions[f.0].iter().map(|&x| functions[g.0][x]).collect();
            index.get(&(arrows[f.0].src, arrows[g.0].dst, h)).copied()
        };
        let category = FinCat::from_parts(names, arrows.clone(), identities, lookup)?;
        Ok(Concrete { category, functions })
    }
}
