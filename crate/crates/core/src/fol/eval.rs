//! Finite structures and model checking.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Fol, Pred};
use crate::model::{Entity, Model};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FolError {
    #[error("free variable {0} has no value")]
    FreeVariable(String),
}

/// Domain elements are indices; `names` prints them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Structure {
    pub names: Vec<String>,
    pub facts: BTreeMap<Pred, BTreeSet<Vec<usize>>>,
}

impl Structure {
    pub fn size(&self) -> usize {
        self.names.len()
    }
    pub fn holds(&self, p: &Pred, args: &[usize]) -> bool {
        self.facts.get(p).is_some_and(|s| s.contains(args))
    }
    pub fn add(&mut self, p: Pred, args: Vec<usize>) {
        self.facts.entry(p).or_default().insert(args);
    }
}

/// Nodes first, then wrappings, each in id order.
pub fn translate_model(m: &Model) -> Structure {
    let mut s = Structure::default();
    let mut index: BTreeMap<Entity, usize> = BTreeMap::new();
    for n in m.node_ids() {
        index.insert(Entity::Node(n), s.names.len());
        s.names.push(n.to_string());
    }
    for (w, _) in m.wrappings() {
        index.insert(Entity::Wrap(w.clone()), s.names.len());
        s.names.push(w.0.clone());
    }
    for (e, &i) in &index {
        for t in m.types_of(e).into_iter().flatten() {
            s.add(Pred::Type(t.clone()), vec![i]);
        }
        for l in m.labels_of(e).into_iter().flatten() {
            s.add(Pred::Label(l.clone()), vec![i]);
        }
        if let Entity::Wrap(w) = e {
            s.add(Pred::Wr, vec![i]);
            for n in &m.wrapping(w).expect("indexed").members {
                s.add(Pred::In, vec![index[&Entity::Node(*n)], i]);
            }
        }
    }
    for (n, a, t) in m.attrs() {
        s.add(Pred::Attr(a.to_string()), vec![index[&Entity::Node(n)], index[t]]);
    }
    for (r, args) in m.rels() {
        s.add(Pred::Rel(r.clone()), args.iter().map(|a| index[a]).collect());
    }
    s
}

type Env = Vec<(String, usize)>;

fn value(env: &Env, v: &str) -> Result<usize, FolError> {
    env.iter().rev().find(|(n, _)| n == v).map(|(_, e)| *e).ok_or_else(|| FolError::FreeVariable(v.to_string()))
}

/// Candidates for `v` read off a conjunct atom whose other arguments are bound.
fn candidates(s: &Structure, env: &Env, v: &str, pending: &[String], body: &Fol) -> Option<Vec<usize>> {
    let Fol::And(parts) = body else { return None };
    for p in parts {
        let Fol::Atom(pred, args) = p else { continue };
        if !args.iter().any(|a| a == v) {
            continue;
        }
        let bound: Option<Vec<Option<usize>>> = args
            .iter()
            .map(|a| {
                if a == v {
                    Some(None)
                } else if pending.contains(a) {
                    None
                } else {
                    value(env, a).ok().map(Some)
                }
            })
            .collect();
        let Some(bound) = bound else { continue };
        let mut out = BTreeSet::new();
        for fact in s.facts.get(pred).into_iter().flatten() {
            let mut pick = None;
            let ok = fact.iter().zip(&bound).all(|(x, b)| match b {
                Some(y) => x == y,
                None => match pick {
                    None => {
                        pick = Some(*x);
                        true
                    }
                    Some(p) => p == *x,
                },
            });
            if ok {
                out.extend(pick);
            }
        }
        return Some(out.into_iter().collect());
    }
    None
}

fn quant(s: &Structure, env: &mut Env, vars: &[String], body: &Fol, exists: bool) -> Result<bool, FolError> {
    let Some((v, rest)) = vars.split_first() else { return eval(s, env, body) };
    let cands = if exists { candidates(s, env, v, rest, body) } else { None };
    let range: Vec<usize> = cands.unwrap_or_else(|| (0..s.size()).collect());
    for e in range {
        env.push((v.clone(), e));
        let r = quant(s, env, rest, body, exists);
        env.pop();
        if r? == exists {
            return Ok(exists);
        }
    }
    Ok(!exists)
}

fn eval(s: &Structure, env: &mut Env, g: &Fol) -> Result<bool, FolError> {
    Ok(match g {
        Fol::True => true,
        Fol::False => false,
        Fol::Atom(p, args) => {
            let vals = args.iter().map(|a| value(env, a)).collect::<Result<Vec<_>, _>>()?;
            s.holds(p, &vals)
        }
        Fol::Eq(a, b) => value(env, a)? == value(env, b)?,
        Fol::Not(a) => !eval(s, env, a)?,
        Fol::And(v) => {
            for x in v {
                if !eval(s, env, x)? {
                    return Ok(false);
                }
            }
            true
        }
        Fol::Or(v) => {
            for x in v {
                if eval(s, env, x)? {
                    return Ok(true);
                }
            }
            false
        }
        Fol::Implies(a, b) => !eval(s, env, a)? || eval(s, env, b)?,
        Fol::Exists(vs, b) => quant(s, env, vs, b, true)?,
        Fol::Forall(vs, b) => quant(s, env, vs, b, false)?,
    })
}

/// Truth of a closed formula; free variables are an error.
pub fn fol_eval(s: &Structure, g: &Fol) -> Result<bool, FolError> {
    if let Some(v) = g.free_vars().into_iter().next() {
        return Err(FolError::FreeVariable(v));
    }
    eval(s, &mut Vec::new(), g)
}
