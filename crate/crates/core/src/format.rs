//! JSON documents for every kind of object the library handles.
//!
//! Documents are self-checking: identities and composites are listed
//! explicitly and nothing is inferred. `compose` entries `[f, g, h]` mean
//! `h = g ∘ f`.

use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::factorize::OrthSquare;
use crate::fincat::{validate_category, validate_functor, validate_nat_trans, RawCategory, RawFunctor};
use crate::grp2::{FinGroup, GroupHom};
use crate::orders::{FinPreord, MonotoneMap};
use crate::vquant::{validate_frame, Frame, RawFrame, VCat, VFunctor};
use crate::{FinCat, FinFunctor, NatTrans};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("invalid {path}: {source}")]
    Invalid {
        path: String,
        #[source]
        source: Error,
    },
}

fn schema(path: &str, message: impl Into<String>) -> DocError {
    DocError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

fn invalid(path: &str) -> impl FnOnce(Error) -> DocError + '_ {
    move |source| DocError::Invalid {
        path: path.to_string(),
        source,
    }
}

fn join(path: &str, field: &str) -> String {
    if path.is_empty() {
        field.to_string()
    } else {
        format!("{path}.{field}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    pub identities: IndexMap<String, String>,
    pub compose: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub name: String,
    pub source: CategoryDoc,
    pub target: CategoryDoc,
    pub objects: IndexMap<String, String>,
    pub morphisms: IndexMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NatTransDoc {
    pub name: String,
    pub from: FunctorDoc,
    pub to: FunctorDoc,
    pub components: IndexMap<String, String>,
}

/// `leq` lists every strict-or-isomorphic pair `x ≤ y` with `x ≠ y`; the
/// relation must already be transitive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreordDoc {
    pub name: String,
    pub elements: Vec<String>,
    pub leq: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonotoneDoc {
    pub name: String,
    pub source: PreordDoc,
    pub target: PreordDoc,
    pub map: IndexMap<String, String>,
}

/// `table[x][y]` is the product `x·y`, rows and columns in element order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub name: String,
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub name: String,
    pub source: GroupDoc,
    pub target: GroupDoc,
    pub map: IndexMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDoc {
    pub name: String,
    pub elements: Vec<String>,
    pub order: Vec<[String; 2]>,
}

/// `hom[x][y]` is the frame element `Y(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VCatDoc {
    pub name: String,
    pub frame: FrameDoc,
    pub objects: Vec<String>,
    pub hom: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VFunctorDoc {
    pub name: String,
    pub source: VCatDoc,
    pub target: VCatDoc,
    pub map: IndexMap<String, String>,
}

/// A commutative square `bottom ∘ left = right ∘ top`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareDoc {
    pub name: String,
    pub top: FunctorDoc,
    pub bottom: FunctorDoc,
    pub left: FunctorDoc,
    pub right: FunctorDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Document {
    Category(CategoryDoc),
    Functor(FunctorDoc),
    NatTrans(NatTransDoc),
    Preord(PreordDoc),
    Monotone(MonotoneDoc),
    Group(GroupDoc),
    Hom(HomDoc),
    Frame(FrameDoc),
    Vcat(VCatDoc),
    Vfunctor(VFunctorDoc),
    Square(SquareDoc),
}

/// A decoded, validated document.
#[derive(Debug, Clone)]
pub enum Value {
    Category(Arc<FinCat>),
    Functor(FinFunctor),
    NatTrans(NatTrans),
    Preord(Arc<FinPreord>),
    Monotone(MonotoneMap),
    Group(Arc<FinGroup>),
    Hom(GroupHom),
    Frame(Arc<Frame>),
    VCat(Arc<VCat>),
    VFunctor(VFunctor),
    Square(OrthSquare),
}

pub fn parse(text: &str) -> Result<Document, DocError> {
    serde_json::from_str(text).map_err(|e| DocError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline. `parse` followed by `serialize` is
/// the identity on anything `serialize` produced.
pub fn serialize(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

impl Document {
    pub fn name(&self) -> &str {
        match self {
            Document::Category(d) => &d.name,
            Document::Functor(d) => &d.name,
            Document::NatTrans(d) => &d.name,
            Document::Preord(d) => &d.name,
            Document::Monotone(d) => &d.name,
            Document::Group(d) => &d.name,
            Document::Hom(d) => &d.name,
            Document::Frame(d) => &d.name,
            Document::Vcat(d) => &d.name,
            Document::Vfunctor(d) => &d.name,
            Document::Square(d) => &d.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Category(_) => "category",
            Document::Functor(_) => "functor",
            Document::NatTrans(_) => "nat_trans",
            Document::Preord(_) => "preord",
            Document::Monotone(_) => "monotone",
            Document::Group(_) => "group",
            Document::Hom(_) => "hom",
            Document::Frame(_) => "frame",
            Document::Vcat(_) => "vcat",
            Document::Vfunctor(_) => "vfunctor",
            Document::Square(_) => "square",
        }
    }

    pub fn decode(&self) -> Result<Value, DocError> {
        Ok(match self {
            Document::Category(d) => Value::Category(d.decode("")?),
            Document::Functor(d) => Value::Functor(d.decode("")?),
            Document::NatTrans(d) => Value::NatTrans(d.decode("")?),
            Document::Preord(d) => Value::Preord(d.decode("")?),
            Document::Monotone(d) => Value::Monotone(d.decode("")?),
            Document::Group(d) => Value::Group(d.decode("")?),
            Document::Hom(d) => Value::Hom(d.decode("")?),
            Document::Frame(d) => Value::Frame(d.decode("")?),
            Document::Vcat(d) => Value::VCat(d.decode("")?),
            Document::Vfunctor(d) => Value::VFunctor(d.decode("")?),
            Document::Square(d) => Value::Square(d.decode("")?),
        })
    }
}

impl CategoryDoc {
    pub fn encode(name: &str, c: &FinCat) -> CategoryDoc {
        let raw = c.to_raw();
        CategoryDoc {
            name: name.to_string(),
            objects: raw.objects,
            morphisms: raw
                .morphisms
                .into_iter()
                .map(|(id, src, dst)| MorphismDoc { id, src, dst })
                .collect(),
            identities: raw.identities.into_iter().collect(),
            compose: raw.compose.into_iter().map(|(f, g, h)| vec![f, g, h]).collect(),
        }
    }

    pub fn decode(&self, path: &str) -> Result<Arc<FinCat>, DocError> {
        let mut compose = Vec::with_capacity(self.compose.len());
        for (i, entry) in self.compose.iter().enumerate() {
            match entry.as_slice() {
                [f, g, h] => compose.push((f.clone(), g.clone(), h.clone())),
                other => {
                    let pair = match other {
                        [] => "()".to_string(),
                        [f] => format!("({f})"),
                        [f, g, ..] => format!("({f}, {g})"),
                    };
                    return Err(schema(
                        &join(path, &format!("compose[{i}]")),
                        format!(
                            "entry for the pair {pair} has {} names, expected [f, g, h]",
                            other.len()
                        ),
                    ));
                }
            }
        }
        let raw = RawCategory {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| (m.id.clone(), m.src.clone(), m.dst.clone()))
                .collect(),
            identities: self.identities.iter().map(|(o, m)| (o.clone(), m.clone())).collect(),
            compose,
        };
        let p = if path.is_empty() { self.name.as_str() } else { path };
        validate_category(&raw).map(Arc::new).map_err(invalid(p))
    }
}

impl FunctorDoc {
    pub fn encode(name: &str, source_name: &str, target_name: &str, f: &FinFunctor) -> FunctorDoc {
        let raw = f.to_raw();
        FunctorDoc {
            name: name.to_string(),
            source: CategoryDoc::encode(source_name, f.source()),
            target: CategoryDoc::encode(target_name, f.target()),
            objects: raw.objects.into_iter().collect(),
            morphisms: raw.morphisms.into_iter().collect(),
        }
    }

    pub fn decode(&self, path: &str) -> Result<FinFunctor, DocError> {
        let source = self.source.decode(&join(path, "source"))?;
        let target = self.target.decode(&join(path, "target"))?;
        let raw = RawFunctor {
            objects: self.objects.iter().map(|(a, b)| (a.clone(), b.clone())).collect(),
            morphisms: self.morphisms.iter().map(|(a, b)| (a.clone(), b.clone())).collect(),
        };
        let p = if path.is_empty() { self.name.as_str() } else { path };
        validate_functor(&raw, source, target).map_err(invalid(p))
    }
}

impl NatTransDoc {
    pub fn encode(name: &str, from: FunctorDoc, to: FunctorDoc, alpha: &NatTrans) -> NatTransDoc {
        NatTransDoc {
            name: name.to_string(),
            from,
            to,
            components: alpha.to_raw().into_iter().collect(),
        }
    }

    pub fn decode(&self, path: &str) -> Result<NatTrans, DocError> {
        let from = self.from.decode(&join(path, "from"))?;
        let to = self.to.decode(&join(path, "to"))?;
        let raw: Vec<(String, String)> = self.components.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
        let p = if path.is_empty() { self.name.as_str() } else { path };
        validate_nat_trans(&raw, &from, &to).map_err(invalid(p))
    }
}

fn lookup(names: &[String], name: &str, path: &str) -> Result<usize, DocError> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| schema(path, format!("unknown name {name}")))
}

/// Resolve a name-to-name map into an index map over `source`, requiring
/// every source name exactly once.
fn resolve_map(
    map: &IndexMap<String, String>,
    source: &[String],
    target: &[String],
    path: &str,
) -> Result<Vec<usize>, DocError> {
    for key in map.keys() {
        lookup(source, key, path)?;
    }
    source
        .iter()
        .map(|x| {
            let y = map.get(x).ok_or_else(|| schema(path, format!("no image for {x}")))?;
            lookup(target, y, path)
        })
        .collect()
}

fn resolve_table(rows: &[Vec<String>], names: &[String], path: &str) -> Result<Vec<usize>, DocError> {
    if rows.len() != names.len() {
        return Err(schema(
            path,
            format!("{} rows for {} elements", rows.len(), names.len()),
        ));
    }
    let mut out = Vec::with_capacity(names.len() * names.len());
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        if row.len() != names.len() {
            return Err(schema(
                &rp,
                format!("{} entries for {} elements", row.len(), names.len()),
            ));
        }
        for v in row {
            out.push(lookup(names, v, &rp)?);
        }
    }
    Ok(out)
}

impl PreordDoc {
    pub fn encode(name: &str, p: &FinPreord) -> PreordDoc {
        PreordDoc {
            name: name.to_string(),
            elements: p.elements().to_vec(),
            leq: p
                .pairs()
                .into_iter()
                .filter(|(x, y)| x != y)
                .map(|(x, y)| [p.name(x).to_string(), p.name(y).to_string()])
                .collect(),
        }
    }

    pub fn decode(&self, path: &str) -> Result<Arc<FinPreord>, DocError> {
        let n = self.elements.len();
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        let lp = join(path, "leq");
        for [x, y] in &self.leq {
            le[lookup(&self.elements, x, &lp)? * n + lookup(&self.elements, y, &lp)?] = true;
        }
        let p = if path.is_empty() { self.name.as_str() } else { path };
        FinPreord::from_matrix(self.elements.clone(), le)
            .map(Arc::new)
            .map_err(invalid(p))
    }
}

impl MonotoneDoc {
    pub fn encode(name: &str, source_name: &str, target_name: &str, f: &MonotoneMap) -> MonotoneDoc {
        let (s, t) = (f.source(), f.target());
        MonotoneDoc {
            name: name.to_string(),
            source: PreordDoc::encode(source_name, s),
            target: PreordDoc::encode(target_name, t),
            map: (0..s.len())
                .map(|x| (s.name(x).to_string(), t.name(f.apply(x)).to_string()))
                .collect(),
        }
    }

    pub fn decode(&self, path: &str) -> Result<MonotoneMap, DocError> {
        let s = self.source.decode(&join(path, "source"))?;
        let t = self.target.decode(&join(path, "target"))?;
        let map = resolve_map(&self.map, s.elements(), t.elements(), &join(path, "map"))?;
        let p = if path.is_empty() { self.name.as_str() } else { path };
        MonotoneMap::new(s, t, map).map_err(invalid(p))
    }
}

impl GroupDoc {
    pub fn encode(g: &FinGroup) -> GroupDoc {
        let n = g.order();
        GroupDoc {
            name: g.name().to_string(),
            elements: g.elements().to_vec(),
            table: (0..n)
                .map(|x| (0..n).map(|y| g.element_name(g.mul(x, y)).to_string()).collect())
                .collect(),
        }
    }

    pub fn decode(&self, path: &str) -> Result<Arc<FinGroup>, DocError> {
        let table = resolve_table(&self.table, &self.elements, &join(path, "table"))?;
        let p = if path.is_empty() { self.name.as_str() } else { path };
        FinGroup::new(&self.name, self.elements.clone(), table)
            .map(Arc::new)
            .map_err(invalid(p))
    }
}

impl HomDoc {
    pub fn encode(name: &str, f: &GroupHom) -> HomDoc {
        let (s, t) = (f.source(), f.target());
        HomDoc {
            name: name.to_string(),
            source: GroupDoc::encode(s),
            target: GroupDoc::encode(t),
            map: (0..s.order())
                .map(|x| (s.element_name(x).to_string(), t.element_name(f.apply(x)).to_string()))
                .collect(),
        }
    }

    pub fn decode(&self, path: &str) -> Result<GroupHom, DocError> {
        let s = self.source.decode(&join(path, "source"))?;
        let t = self.target.decode(&join(path, "target"))?;
        let map = resolve_map(&self.map, s.elements(), t.elements(), &join(path, "map"))?;
        let p = if path.is_empty() { self.name.as_str() } else { path };
        GroupHom::new(s, t, map).map_err(invalid(p))
    }
}

impl FrameDoc {
    pub fn encode(v: &Frame) -> FrameDoc {
        let raw = v.to_raw();
        FrameDoc {
            name: raw.name,
            elements: raw.elements,
            order: raw.order.into_iter().map(|(x, y)| [x, y]).collect(),
        }
    }

    pub fn decode(&self, path: &str) -> Result<Arc<Frame>, DocError> {
        let raw = RawFrame {
            name: self.name.clone(),
            elements: self.elements.clone(),
            order: self.order.iter().map(|[x, y]| (x.clone(), y.clone())).collect(),
        };
        let p = if path.is_empty() { self.name.as_str() } else { path };
        validate_frame(&raw).map(Arc::new).map_err(invalid(p))
    }
}

impl VCatDoc {
    pub fn encode(name: &str, y: &VCat) -> VCatDoc {
        let v = y.frame();
        VCatDoc {
            name: name.to_string(),
            frame: FrameDoc::encode(v),
            objects: y.objects().to_vec(),
            hom: (0..y.len())
                .map(|a| (0..y.len()).map(|b| v.element_name(y.hom(a, b)).to_string()).collect())
                .collect(),
        }
    }

    pub fn decode(&self, path: &str) -> Result<Arc<VCat>, DocError> {
        let v = self.frame.decode(&join(path, "frame"))?;
        let hp = join(path, "hom");
        if self.hom.len() != self.objects.len() || self.hom.iter().any(|r| r.len() != self.objects.len()) {
            return Err(schema(&hp, "hom must be a square matrix over the objects"));
        }
        let mut hom = Vec::with_capacity(self.objects.len().pow(2));
        for (i, row) in self.hom.iter().enumerate() {
            for e in row {
                hom.push(lookup(v.elements(), e, &format!("{hp}[{i}]"))?);
            }
        }
        let p = if path.is_empty() { self.name.as_str() } else { path };
        VCat::new(v, self.objects.clone(), hom)
            .map(Arc::new)
            .map_err(invalid(p))
    }
}

impl VFunctorDoc {
    pub fn encode(name: &str, source_name: &str, target_name: &str, j: &VFunctor) -> VFunctorDoc {
        let (s, t) = (j.source(), j.target());
        VFunctorDoc {
            name: name.to_string(),
            source: VCatDoc::encode(source_name, s),
            target: VCatDoc::encode(target_name, t),
            map: (0..s.len())
                .map(|x| (s.objects()[x].clone(), t.objects()[j.apply(x)].clone()))
                .collect(),
        }
    }

    pub fn decode(&self, path: &str) -> Result<VFunctor, DocError> {
        let s = self.source.decode(&join(path, "source"))?;
        let t = self.target.decode(&join(path, "target"))?;
        let map = resolve_map(&self.map, s.objects(), t.objects(), &join(path, "map"))?;
        let p = if path.is_empty() { self.name.as_str() } else { path };
        VFunctor::new(s, t, map).map_err(invalid(p))
    }
}

impl SquareDoc {
    pub fn decode(&self, path: &str) -> Result<OrthSquare, DocError> {
        let q = self.top.decode(&join(path, "top"))?;
        let m = self.bottom.decode(&join(path, "bottom"))?;
        let g = self.left.decode(&join(path, "left"))?;
        let h = self.right.decode(&join(path, "right"))?;
        let p = if path.is_empty() { self.name.as_str() } else { path };
        OrthSquare::new(q, m, g, h).map_err(invalid(p))
    }
}
