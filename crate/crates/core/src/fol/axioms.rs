//! The background theory of wrapped feature structures.

use super::{Fol, Pred};
use crate::model::{Label, Signature};

fn v(s: &str) -> String {
    s.to_string()
}

fn attr(a: &str, x: &str, y: &str) -> Fol {
    Fol::atom(Pred::Attr(a.to_string()), &[x, y])
}

fn inw(x: &str, w: &str) -> Fol {
    Fol::atom(Pred::In, &[x, w])
}

fn wr(x: &str) -> Fol {
    Fol::atom(Pred::Wr, &[x])
}

/// Every attribute path of length at most `depth`, shortest first.
fn paths(attrs: &[String], depth: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &layer {
            for a in attrs {
                let mut q: Vec<String> = p.clone();
                q.push(a.clone());
                next.push(q);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `p(from, to)` as an existential chain.
fn path_formula(p: &[String], from: &str, to: &str, tag: &str) -> Fol {
    if p.is_empty() {
        return Fol::eq(from, to);
    }
    let mids: Vec<String> = (0..p.len() - 1).map(|i| format!("{tag}{i}")).collect();
    let mut chain = Vec::new();
    let mut cur = from.to_string();
    for (i, a) in p.iter().enumerate() {
        let next = if i + 1 == p.len() { to.to_string() } else { mids[i].clone() };
        chain.push(attr(a, &cur, &next));
        cur = next;
    }
    Fol::exists(mids, Fol::and(chain))
}

/// Axiom families, one formula per instance. Reachability paths are
/// truncated at `depth`.
pub fn theory_axioms(sig: &Signature, depth: usize) -> Vec<Fol> {
    let mut out = Vec::new();
    let attrs: Vec<String> = sig.attributes.iter().cloned().collect();
    let node_labels: Vec<Label> = sig.labels().filter(Label::names_node).collect();

    // Attributes are functional.
    for a in &attrs {
        out.push(Fol::forall(
            vec![v("u"), v("w"), v("w2")],
            Fol::implies(Fol::and(vec![attr(a, "u", "w"), attr(a, "u", "w2")]), Fol::eq("w", "w2")),
        ));
    }
    // Labels denote at most one element.
    for l in sig.labels() {
        let p = Pred::Label(l);
        out.push(Fol::forall(
            vec![v("u"), v("u2")],
            Fol::implies(Fol::and(vec![Fol::atom(p.clone(), &["u"]), Fol::atom(p, &["u2"])]), Fol::eq("u", "u2")),
        ));
    }
    // Wrappings are not members.
    out.push(Fol::forall(vec![v("u"), v("w")], Fol::not(Fol::and(vec![inw("u", "w"), wr("u")]))));
    // Membership targets wrappings.
    out.push(Fol::forall(vec![v("u"), v("w")], Fol::implies(inw("u", "w"), wr("w"))));
    // Wrappings are non-empty.
    out.push(Fol::forall(vec![v("w")], Fol::implies(wr("w"), Fol::exists(vec![v("u")], inw("u", "w")))));
    // Wrappings are disjoint.
    out.push(Fol::forall(
        vec![v("u"), v("w"), v("w2")],
        Fol::implies(Fol::and(vec![inw("u", "w"), inw("u", "w2")]), Fol::eq("w", "w2")),
    ));
    // Label sorts.
    for l in sig.labels() {
        let on = Fol::atom(Pred::Label(l.clone()), &["u"]);
        let sort = if l.names_node() { Fol::not(wr("u")) } else { wr("u") };
        out.push(Fol::forall(vec![v("u")], Fol::implies(on, sort)));
    }
    // Attributes do not leave a wrapping.
    for a in &attrs {
        out.push(Fol::forall(
            vec![v("u"), v("u2"), v("w")],
            Fol::implies(Fol::and(vec![inw("u", "w"), attr(a, "u", "u2")]), inw("u2", "w")),
        ));
    }
    // Every node is reached from a label within its own W-set.
    let mut ways = Vec::new();
    for k in &node_labels {
        for p in paths(&attrs, depth) {
            ways.push(Fol::exists(
                vec![v("u2")],
                Fol::and(vec![
                    Fol::atom(Pred::Label(k.clone()), &["u2"]),
                    path_formula(&p, "u2", "u", "m"),
                    Fol::forall(
                        vec![v("w")],
                        Fol::and(vec![
                            Fol::implies(inw("u", "w"), inw("u2", "w")),
                            Fol::implies(inw("u2", "w"), inw("u", "w")),
                        ]),
                    ),
                ]),
            ));
        }
    }
    out.push(Fol::forall(vec![v("u")], Fol::implies(Fol::not(wr("u")), Fol::or(ways))));
    out
}
