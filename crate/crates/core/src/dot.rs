//! Graphviz output. Node order follows object order so the text is stable.

use std::fmt::Write;

use crate::fincat::FinCat;
use crate::laxepi::CommaOverMorphism;
use crate::FinFunctor;

const PALETTE: &[&str] = &[
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Objects as nodes and non-identity morphisms as labelled edges.
pub fn category_dot(name: &str, c: &FinCat) -> String {
    let mut s = format!("digraph {} {{\n", quote(name));
    for o in c.objects() {
        writeln!(s, "  n{} [label={}];", o.0, quote(c.object_name(o))).unwrap();
    }
    for m in c.morphisms().filter(|&m| !c.is_identity(m)) {
        writeln!(
            s,
            "  n{} -> n{} [label={}];",
            c.src(m).0,
            c.dst(m).0,
            quote(c.morphism_name(m))
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}

/// The comma category `g⇓F`: triples as nodes filled by component, edges
/// for the non-identity comma morphisms.
pub fn comma_dot(functor: &FinFunctor, comma: &CommaOverMorphism) -> String {
    let (a, b) = (functor.source(), functor.target());
    let components = comma.components();
    let title = format!("{}⇓F", b.morphism_name(comma.g()));
    let mut s = format!("digraph {} {{\n  node [style=filled];\n", quote(&title));
    for (i, x) in comma.objects().iter().enumerate() {
        let c = comma.component(x).expect("stored triple");
        let ci = components.iter().position(|k| *k == c).expect("listed component");
        let label = format!(
            "({}, {}, {})",
            b.morphism_name(x.h),
            a.object_name(x.a),
            b.morphism_name(x.k)
        );
        writeln!(
            s,
            "  t{i} [label={}, fillcolor={}, group=c{ci}];",
            quote(&label),
            quote(PALETTE[ci % PALETTE.len()])
        )
        .unwrap();
    }
    for e in comma.edges().iter().filter(|e| !a.is_identity(e.via)) {
        writeln!(
            s,
            "  t{} -> t{} [label={}];",
            e.from,
            e.to,
            quote(a.morphism_name(e.via))
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_are_suppressed() {
        let c = FinCat::discrete(&["x", "y"]);
        assert_eq!(
            category_dot("d", &c),
            "digraph \"d\" {\n  n0 [label=\"x\"];\n  n1 [label=\"y\"];\n}\n"
        );
    }

    #[test]
    fn labels_are_escaped() {
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }
}
