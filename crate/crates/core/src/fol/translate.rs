//! Descriptions and formulas to first-order logic.

use super::{Fol, Pred};
use crate::avl::{Desc, Formula, Term};

/// Source of fresh variable names `<prefix>0`, `<prefix>1`, ...
#[derive(Debug, Clone)]
pub struct Fresh {
    prefix: String,
    next: usize,
}

impl Default for Fresh {
    fn default() -> Self {
        Fresh::new("u")
    }
}

impl Fresh {
    pub fn new(prefix: impl Into<String>) -> Self {
        Fresh { prefix: prefix.into(), next: 0 }
    }
    pub fn var(&mut self) -> String {
        self.next += 1;
        format!("{}{}", self.prefix, self.next - 1)
    }
}

/// The description as a formula with `var` free.
pub fn translate_description(d: &Desc, var: &str, fresh: &mut Fresh) -> Fol {
    match d {
        Desc::Top => Fol::True,
        Desc::Type(t) => Fol::atom(Pred::Type(t.clone()), &[var]),
        Desc::Label(l) => Fol::atom(Pred::Label(l.clone()), &[var]),
        Desc::Attr(a, inner) => {
            let w = fresh.var();
            let body = translate_description(inner, &w, fresh);
            Fol::exists(vec![w.clone()], Fol::and(vec![Fol::atom(Pred::Attr(a.clone()), &[var, &w]), body]))
        }
        Desc::And(a, b) => Fol::and(vec![translate_description(a, var, fresh), translate_description(b, var, fresh)]),
        Desc::Or(a, b) => Fol::Or(vec![translate_description(a, var, fresh), translate_description(b, var, fresh)]),
    }
}

/// Follows `path` from `start` through a chain of existentials, then
/// hands the end variable to `body`.
fn along(start: &str, path: &[String], fresh: &mut Fresh, body: &mut dyn FnMut(&str, &mut Fresh) -> Fol) -> Fol {
    match path.split_first() {
        None => body(start, fresh),
        Some((a, rest)) => {
            let v = fresh.var();
            let inner = along(&v, rest, fresh, body);
            Fol::exists(vec![v.clone()], Fol::and(vec![Fol::atom(Pred::Attr(a.clone()), &[start, &v]), inner]))
        }
    }
}

/// Binds the label of `t`, walks its path, and continues with the end variable.
fn term(t: &Term, fresh: &mut Fresh, body: &mut dyn FnMut(&str, &mut Fresh) -> Fol) -> Fol {
    let u = fresh.var();
    let inner = along(&u, &t.path, fresh, body);
    Fol::exists(vec![u.clone()], Fol::and(vec![Fol::atom(Pred::Label(t.label.clone()), &[&u]), inner]))
}

fn terms(ts: &[Term], bound: &mut Vec<String>, fresh: &mut Fresh, last: &mut dyn FnMut(&[String]) -> Fol) -> Fol {
    match ts.split_first() {
        None => last(bound),
        Some((t, rest)) => term(t, fresh, &mut |v, fresh| {
            bound.push(v.to_string());
            let out = terms(rest, bound, fresh, last);
            bound.pop();
            out
        }),
    }
}

/// A closed formula equivalent to `f` over structures satisfying the theory.
pub fn translate_formula(f: &Formula, fresh: &mut Fresh) -> Fol {
    match f {
        Formula::Top => Fol::True,
        Formula::At(k, d) => {
            let u = fresh.var();
            let w = fresh.var();
            let body = translate_description(d, &u, fresh);
            Fol::exists(
                vec![u.clone()],
                Fol::and(vec![
                    Fol::not(Fol::atom(Pred::Wr, &[&u])),
                    Fol::forall(vec![w.clone()], Fol::not(Fol::atom(Pred::In, &[&u, &w]))),
                    Fol::atom(Pred::Label(k.clone()), &[&u]),
                    body,
                ]),
            )
        }
        Formula::Wrap(t, x, d) => {
            let u = fresh.var();
            let w = fresh.var();
            let body = translate_description(d, &u, fresh);
            Fol::exists(
                vec![u.clone(), w.clone()],
                Fol::and(vec![
                    Fol::atom(Pred::In, &[&u, &w]),
                    Fol::atom(Pred::Label(t.clone()), &[&w]),
                    Fol::atom(Pred::Label(x.clone()), &[&u]),
                    body,
                ]),
            )
        }
        Formula::PathEq(a, b) => {
            terms(&[a.clone(), b.clone()], &mut Vec::new(), fresh, &mut |vs| Fol::eq(vs[0].clone(), vs[1].clone()))
        }
        Formula::Rel(r, args) => terms(args, &mut Vec::new(), fresh, &mut |vs| {
            Fol::Atom(Pred::Rel(r.clone()), vs.to_vec())
        }),
        Formula::And(a, b) => Fol::and(vec![translate_formula(a, fresh), translate_formula(b, fresh)]),
        Formula::Not(a) => Fol::not(translate_formula(a, fresh)),
    }
}
