//! Equality up to bound-variable renaming, conjunct order and quantifier grouping.

use std::collections::BTreeMap;

use super::Fol;

/// Flattens nested connectives and merges adjacent quantifier blocks.
fn normalize(g: &Fol) -> Fol {
    match g {
        Fol::And(v) | Fol::Or(v) => {
            let is_and = matches!(g, Fol::And(_));
            let mut out = Vec::new();
            for x in v.iter().map(normalize) {
                match x {
                    Fol::And(inner) if is_and => out.extend(inner),
                    Fol::Or(inner) if !is_and => out.extend(inner),
                    Fol::True if is_and => {}
                    Fol::False if !is_and => {}
                    other => out.push(other),
                }
            }
            if is_and {
                Fol::and(out)
            } else {
                Fol::or(out)
            }
        }
        Fol::Not(a) => Fol::not(normalize(a)),
        Fol::Implies(a, b) => Fol::implies(normalize(a), normalize(b)),
        Fol::Exists(vs, b) | Fol::Forall(vs, b) => {
            let ex = matches!(g, Fol::Exists(..));
            let mut vars = vs.clone();
            let mut body = normalize(b);
            loop {
                match body {
                    Fol::Exists(more, inner) if ex => {
                        vars.extend(more);
                        body = *inner;
                    }
                    Fol::Forall(more, inner) if !ex => {
                        vars.extend(more);
                        body = *inner;
                    }
                    other => {
                        body = other;
                        break;
                    }
                }
            }
            if ex {
                Fol::exists(vars, body)
            } else {
                Fol::forall(vars, body)
            }
        }
        other => other.clone(),
    }
}

#[derive(Clone, Default)]
struct Binding {
    fwd: BTreeMap<String, String>,
    back: BTreeMap<String, String>,
}

impl Binding {
    fn same(&self, a: &str, b: &str) -> bool {
        match (self.fwd.get(a), self.back.get(b)) {
            (Some(x), Some(y)) => x == b && y == a,
            (None, None) => a == b,
            _ => false,
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn match_all(a: &[Fol], b: &[Fol], used: &mut Vec<bool>, bind: &Binding) -> bool {
    let Some((first, rest)) = a.split_first() else { return true };
    for j in 0..b.len() {
        if used[j] || !matches(first, &b[j], bind) {
            continue;
        }
        used[j] = true;
        let ok = match_all(rest, b, used, bind);
        used[j] = false;
        if ok {
            return true;
        }
    }
    false
}

fn matches(a: &Fol, b: &Fol, bind: &Binding) -> bool {
    match (a, b) {
        (Fol::True, Fol::True) | (Fol::False, Fol::False) => true,
        (Fol::Atom(p, xs), Fol::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| bind.same(x, y))
        }
        (Fol::Eq(x1, y1), Fol::Eq(x2, y2)) => {
            (bind.same(x1, x2) && bind.same(y1, y2)) || (bind.same(x1, y2) && bind.same(y1, x2))
        }
        (Fol::Not(x), Fol::Not(y)) => matches(x, y, bind),
        (Fol::Implies(x1, y1), Fol::Implies(x2, y2)) => matches(x1, x2, bind) && matches(y1, y2, bind),
        (Fol::And(xs), Fol::And(ys)) | (Fol::Or(xs), Fol::Or(ys)) => {
            xs.len() == ys.len() && match_all(xs, ys, &mut vec![false; ys.len()], bind)
        }
        (Fol::Exists(vs, x), Fol::Exists(ws, y)) | (Fol::Forall(vs, x), Fol::Forall(ws, y)) => {
            if vs.len() != ws.len() {
                return false;
            }
            permutations(ws.len()).into_iter().any(|perm| {
                let mut inner = bind.clone();
                for (i, v) in vs.iter().enumerate() {
                    let w = &ws[perm[i]];
                    inner.fwd.retain(|_, t| t != w);
                    inner.back.retain(|_, t| t != v);
                    inner.fwd.insert(v.clone(), w.clone());
                    inner.back.insert(w.clone(), v.clone());
                }
                matches(x, y, &inner)
            })
        }
        _ => false,
    }
}

/// Equal modulo renaming of bound variables. Conjunctions and disjunctions
/// are compared as multisets and nested quantifier blocks of one kind are
/// merged, so `exists x. exists y. f` equals `exists y, x. f`.
pub fn alpha_equivalent(a: &Fol, b: &Fol) -> bool {
    matches(&normalize(a), &normalize(b), &Binding::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::Pred;

    fn p(x: &str) -> Fol {
        Fol::atom(Pred::Type("t".into()), &[x])
    }

    #[test]
    fn renaming() {
        let a = Fol::exists(vec!["x".into()], p("x"));
        let b = Fol::exists(vec!["y".into()], p("y"));
        assert!(alpha_equivalent(&a, &b));
        assert!(!alpha_equivalent(&a, &p("x")));
    }

    #[test]
    fn free_variables_must_agree() {
        assert!(!alpha_equivalent(&p("x"), &p("y")));
        let a = Fol::exists(vec!["x".into()], Fol::eq("x", "z"));
        let b = Fol::exists(vec!["z".into()], Fol::eq("z", "z"));
        assert!(!alpha_equivalent(&a, &b));
    }
}
