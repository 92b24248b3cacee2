//! Rewriting formulas into clause sets.

use std::collections::BTreeSet;

use super::ast::{Atom, Clause, Cnf, Desc, Formula, Term};

/// Negation normal form over atoms.
#[derive(Debug, Clone)]
enum Nnf {
    Lit(bool, Atom),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    True,
    False,
}

impl Nnf {
    fn negate(self) -> Nnf {
        match self {
            Nnf::Lit(p, a) => Nnf::Lit(!p, a),
            Nnf::And(v) => Nnf::Or(v.into_iter().map(Nnf::negate).collect()),
            Nnf::Or(v) => Nnf::And(v.into_iter().map(Nnf::negate).collect()),
            Nnf::True => Nnf::False,
            Nnf::False => Nnf::True,
        }
    }
}

/// `k⦁φ`: pushes a description down to path atoms.
fn flatten(t: &Term, d: &Desc) -> Nnf {
    match d {
        Desc::Attr(a, inner) => flatten(&t.extend(a), inner),
        Desc::Type(ty) => Nnf::Lit(true, Atom::PathType(t.clone(), ty.clone())),
        Desc::Label(l) => Nnf::Lit(true, Atom::eq(t.clone(), Term::at(l.clone()))),
        Desc::Top => Nnf::Lit(true, Atom::PathTop(t.clone())),
        Desc::And(a, b) => Nnf::And(vec![flatten(t, a), flatten(t, b)]),
        Desc::Or(a, b) => Nnf::Or(vec![flatten(t, a), flatten(t, b)]),
    }
}

fn nnf(f: &Formula) -> Nnf {
    match f {
        Formula::Top => Nnf::True,
        Formula::And(a, b) => Nnf::And(vec![nnf(a), nnf(b)]),
        Formula::Not(a) => nnf(a).negate(),
        Formula::At(k, d) => Nnf::And(vec![
            Nnf::Lit(false, Atom::InWr(k.clone())),
            Nnf::Lit(false, Atom::Wr(k.clone())),
            flatten(&Term::at(k.clone()), d),
        ]),
        Formula::PathEq(a, b) => Nnf::Lit(true, Atom::eq(a.clone(), b.clone())),
        Formula::Rel(r, args) => Nnf::Lit(true, Atom::Rel(r.clone(), args.clone())),
        Formula::Wrap(t, x, d) => Nnf::And(vec![
            Nnf::Lit(true, Atom::In(x.clone(), t.clone())),
            flatten(&Term::at(x.clone()), d),
        ]),
    }
}

/// Clause sets; a tautology never enters, an empty clause means falsity.
fn clauses(n: Nnf) -> BTreeSet<Clause> {
    match n {
        Nnf::True => BTreeSet::new(),
        Nnf::False => [Clause::default()].into(),
        Nnf::Lit(true, a) => [Clause::unit(a)].into(),
        Nnf::Lit(false, a) => [Clause::integrity(a)].into(),
        Nnf::And(v) => v.into_iter().flat_map(clauses).collect(),
        Nnf::Or(v) => {
            let mut acc: BTreeSet<Clause> = [Clause::default()].into();
            for part in v {
                let cs = clauses(part);
                let mut next = BTreeSet::new();
                for a in &acc {
                    for c in &cs {
                        let mut merged = a.clone();
                        merged.neg.extend(c.neg.iter().cloned());
                        merged.pos.extend(c.pos.iter().cloned());
                        if !merged.is_tautology() {
                            next.insert(merged);
                        }
                    }
                }
                acc = next;
            }
            acc
        }
    }
}

pub fn to_cnf(f: &Formula) -> Cnf {
    Cnf { clauses: clauses(nnf(f)) }
}
