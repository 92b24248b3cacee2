//! Describing a model by atoms, the inverse of the build step.

use std::collections::{BTreeMap, BTreeSet};

use crate::avl::{Atom, Term};
use crate::model::{Entity, Label, LabelSort, Model};

/// Prefix of synthetic labels given to unlabelled wrappings.
pub const SYNTHETIC_PREFIX: &str = "__w";

pub fn is_synthetic(l: &Label) -> bool {
    l.sort == LabelSort::WrapVar && l.name.starts_with(SYNTHETIC_PREFIX)
}

/// Shortest, then smallest, access term of every entity reachable from a label.
pub fn access_terms(m: &Model, extra: &BTreeMap<Entity, Label>) -> BTreeMap<Entity, Term> {
    let mut out: BTreeMap<Entity, Term> = BTreeMap::new();
    let seeds = m
        .label_index()
        .iter()
        .map(|(l, e)| (l.clone(), e.clone()))
        .chain(extra.iter().map(|(e, l)| (l.clone(), e.clone())));
    for (l, e) in seeds {
        let t = Term::at(l);
        match out.get(&e) {
            Some(old) if old.canon_key() <= t.canon_key() => {}
            _ => {
                out.insert(e, t);
            }
        }
    }
    let mut frontier: Vec<(Term, Entity)> = out.iter().map(|(e, t)| (t.clone(), e.clone())).collect();
    while !frontier.is_empty() {
        let mut next: BTreeMap<Entity, Term> = BTreeMap::new();
        for (t, e) in &frontier {
            let Entity::Node(n) = e else { continue };
            for (a, target) in m.out_edges(*n) {
                if out.contains_key(target) {
                    continue;
                }
                let cand = t.extend(a);
                match next.get(target) {
                    Some(old) if old.canon_key() <= cand.canon_key() => {}
                    _ => {
                        next.insert(target.clone(), cand);
                    }
                }
            }
        }
        frontier = next.iter().map(|(e, t)| (t.clone(), e.clone())).collect();
        out.extend(next);
    }
    out
}

/// Atoms whose deductive closure describes `m`. Unlabelled wrappings receive
/// synthetic labels `$__w<tag><id>`.
pub fn model_atoms(m: &Model, tag: &str) -> BTreeSet<Atom> {
    let mut extra = BTreeMap::new();
    for (w, d) in m.wrappings() {
        if d.labels.is_empty() {
            extra.insert(Entity::Wrap(w.clone()), Label::wvar(format!("{SYNTHETIC_PREFIX}{tag}{}", w.0)));
        }
    }
    let terms = access_terms(m, &extra);
    let mut out = BTreeSet::new();
    for (e, t) in &terms {
        out.insert(Atom::PathTop(t.clone()));
        let labels: Vec<Label> = m
            .labels_of(e)
            .into_iter()
            .flatten()
            .cloned()
            .chain(extra.get(e).cloned())
            .collect();
        for l in &labels {
            out.insert(Atom::eq(Term::at(l.clone()), t.clone()));
        }
        for ty in m.types_of(e).into_iter().flatten() {
            out.insert(Atom::PathType(t.clone(), ty.clone()));
        }
        match e {
            Entity::Node(n) => {
                for (a, target) in m.out_edges(*n) {
                    if let Some(tt) = terms.get(target) {
                        out.insert(Atom::eq(t.extend(a), tt.clone()));
                    }
                }
                if let (Some(w), Some(l)) = (m.container(*n), labels.first()) {
                    let we = Entity::Wrap(w.clone());
                    match terms.get(&we) {
                        Some(wt) if wt.path.is_empty() => out.insert(Atom::In(l.clone(), wt.label.clone())),
                        _ => out.insert(Atom::InWr(l.clone())),
                    };
                }
            }
            Entity::Wrap(_) => {
                if t.path.is_empty() {
                    out.insert(Atom::Wr(t.label.clone()));
                }
            }
        }
    }
    for (r, args) in m.rels() {
        let ts: Option<Vec<Term>> = args.iter().map(|a| terms.get(a).cloned()).collect();
        if let Some(ts) = ts {
            out.insert(Atom::Rel(r.clone(), ts));
        }
    }
    out
}
