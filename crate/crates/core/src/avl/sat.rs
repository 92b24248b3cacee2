//! Satisfaction of formulas, atoms and clause sets in a model.

use super::ast::{Atom, Clause, Cnf, Desc, Formula, Term};
use crate::model::{Entity, Model};

fn resolve(m: &Model, t: &Term) -> Option<Entity> {
    m.resolve(&t.label, &t.path)
}

/// Evaluates a description at an entity. Wrappings have types but no attributes.
pub fn satisfies_desc(m: &Model, at: &Entity, d: &Desc) -> bool {
    match d {
        Desc::Top => true,
        Desc::Type(t) => m.types_of(at).is_some_and(|ts| ts.contains(t)),
        Desc::Label(l) => m.lookup(l) == Some(at),
        Desc::Attr(a, inner) => match at {
            Entity::Node(n) => m.attr(*n, a).is_some_and(|t| satisfies_desc(m, t, inner)),
            Entity::Wrap(_) => false,
        },
        Desc::And(a, b) => satisfies_desc(m, at, a) && satisfies_desc(m, at, b),
        Desc::Or(a, b) => satisfies_desc(m, at, a) || satisfies_desc(m, at, b),
    }
}

pub fn satisfies(m: &Model, f: &Formula) -> bool {
    match f {
        Formula::Top => true,
        Formula::And(a, b) => satisfies(m, a) && satisfies(m, b),
        Formula::Not(a) => !satisfies(m, a),
        Formula::At(k, d) => match m.lookup(k) {
            Some(Entity::Node(n)) if m.container(*n).is_none() => satisfies_desc(m, &Entity::Node(*n), d),
            _ => false,
        },
        Formula::PathEq(a, b) => match (resolve(m, a), resolve(m, b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        },
        Formula::Rel(r, args) => {
            let vals: Option<Vec<Entity>> = args.iter().map(|t| resolve(m, t)).collect();
            vals.is_some_and(|v| m.has_rel(r, &v))
        }
        Formula::Wrap(t, x, d) => match (m.lookup(t), m.lookup(x)) {
            (Some(Entity::Wrap(w)), Some(Entity::Node(n))) => {
                m.container(*n) == Some(w) && satisfies_desc(m, &Entity::Node(*n), d)
            }
            _ => false,
        },
    }
}

pub fn satisfies_atom(m: &Model, a: &Atom) -> bool {
    match a {
        Atom::PathTop(t) => resolve(m, t).is_some(),
        Atom::PathType(t, ty) => {
            resolve(m, t).is_some_and(|e| m.types_of(&e).is_some_and(|ts| ts.contains(ty)))
        }
        Atom::PathEq(x, y) => match (resolve(m, x), resolve(m, y)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        },
        Atom::Rel(r, args) => {
            let vals: Option<Vec<Entity>> = args.iter().map(|t| resolve(m, t)).collect();
            vals.is_some_and(|v| m.has_rel(r, &v))
        }
        Atom::InWr(k) => matches!(m.lookup(k), Some(Entity::Node(n)) if m.container(*n).is_some()),
        Atom::In(k, t) => match (m.lookup(k), m.lookup(t)) {
            (Some(Entity::Node(n)), Some(Entity::Wrap(w))) => m.container(*n) == Some(w),
            _ => false,
        },
        Atom::Wr(k) => matches!(m.lookup(k), Some(Entity::Wrap(_))),
    }
}

pub fn satisfies_clause(m: &Model, c: &Clause) -> bool {
    !c.neg.iter().all(|a| satisfies_atom(m, a)) || c.pos.iter().any(|a| satisfies_atom(m, a))
}

pub fn satisfies_cnf(m: &Model, cnf: &Cnf) -> bool {
    cnf.clauses.iter().all(|c| satisfies_clause(m, c))
}
