//! Readings to first-order formulas, and instance checking.

use std::collections::{BTreeMap, BTreeSet};

use super::complex::most_specific;
use super::{ConstraintSet, Reading, ScopeError};
use crate::fol::{fol_eval, translate_model, Fol, Pred};
use crate::model::{Entity, LabelSort, Model, NodeId};

/// Transcription rule for one determiner.
pub trait Determiner: Send + Sync {
    fn name(&self) -> &str;
    /// Node types selecting this rule.
    fn triggers(&self) -> &[&str];
    fn quantify(&self, var: String, restr: Fol, nscope: Fol) -> Fol;
}

struct Some_;
struct Every;
struct No;

impl Determiner for Some_ {
    fn name(&self) -> &str {
        "some"
    }
    fn triggers(&self) -> &[&str] {
        &["some", "a", "exist-quant"]
    }
    fn quantify(&self, var: String, restr: Fol, nscope: Fol) -> Fol {
        Fol::exists(vec![var], Fol::and(vec![restr, nscope]))
    }
}

impl Determiner for Every {
    fn name(&self) -> &str {
        "every"
    }
    fn triggers(&self) -> &[&str] {
        &["every", "univ-quant"]
    }
    fn quantify(&self, var: String, restr: Fol, nscope: Fol) -> Fol {
        Fol::forall(vec![var], Fol::implies(restr, nscope))
    }
}

impl Determiner for No {
    fn name(&self) -> &str {
        "no"
    }
    fn triggers(&self) -> &[&str] {
        &["no"]
    }
    fn quantify(&self, var: String, restr: Fol, nscope: Fol) -> Fol {
        Fol::not(Fol::exists(vec![var], Fol::and(vec![restr, nscope])))
    }
}

/// Determiner rules, tried in registration order.
pub struct DeterminerRegistry {
    rules: Vec<Box<dyn Determiner>>,
}

impl Default for DeterminerRegistry {
    fn default() -> Self {
        let mut r = DeterminerRegistry { rules: Vec::new() };
        r.register(Box::new(No));
        r.register(Box::new(Every));
        r.register(Box::new(Some_));
        r
    }
}

impl DeterminerRegistry {
    pub fn empty() -> Self {
        DeterminerRegistry { rules: Vec::new() }
    }
    pub fn register(&mut self, d: Box<dyn Determiner>) {
        self.rules.push(d);
    }
    pub fn names(&self) -> Vec<&str> {
        self.rules.iter().map(|d| d.name()).collect()
    }
    pub fn lookup(&self, types: &BTreeSet<String>) -> Option<&dyn Determiner> {
        self.rules.iter().find(|d| d.triggers().iter().any(|t| types.contains(*t))).map(|d| d.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcription {
    pub formula: Fol,
    /// Generalized-quantifier rendering, `det(u, restr, nscope)`.
    pub gqt: String,
}

struct Ctx<'a> {
    m: &'a Model,
    dets: &'a DeterminerRegistry,
    names: BTreeMap<NodeId, String>,
    used: BTreeSet<String>,
    next: usize,
}

impl Ctx<'_> {
    fn fresh(&mut self, prefix: &str) -> String {
        loop {
            let v = format!("{prefix}{}", self.next);
            self.next += 1;
            if self.used.insert(v.clone()) {
                return v;
            }
        }
    }

    fn var(&mut self, n: NodeId) -> String {
        if let Some(v) = self.names.get(&n) {
            return v.clone();
        }
        let labels = self.m.node(n).map(|d| d.labels.clone()).unwrap_or_default();
        let pick = labels
            .iter()
            .find(|l| l.sort == LabelSort::NodeVar)
            .or_else(|| labels.iter().find(|l| l.sort == LabelSort::Base))
            .map(|l| l.name.clone());
        let v = match pick {
            Some(v) => v,
            None => self.fresh("v"),
        };
        self.names.insert(n, v.clone());
        v
    }

    /// Existential closure of FACTS over `nodes`, plus the co-assignment equations.
    fn facts(&mut self, nodes: &BTreeSet<NodeId>, gamma: &BTreeMap<NodeId, String>) -> Fol {
        let vars: Vec<String> = nodes.iter().map(|n| self.var(*n)).collect();
        let mut parts = Vec::new();
        for n in nodes {
            let d = self.m.node(*n).expect("member exists");
            for t in &d.types {
                parts.push(Fol::Atom(Pred::Type(t.clone()), vec![self.var(*n)]));
            }
            let edges: Vec<(String, Entity)> = self.m.out_edges(*n).map(|(a, t)| (a.to_string(), t.clone())).collect();
            for (a, t) in edges {
                if let Some(t) = t.as_node().filter(|t| nodes.contains(t)) {
                    parts.push(Fol::Atom(Pred::Attr(a), vec![self.var(*n), self.var(t)]));
                }
            }
        }
        for (r, args) in self.m.rels() {
            let mut vs = Vec::new();
            for a in args {
                match a.as_node() {
                    Some(x) if nodes.contains(&x) => vs.push(self.var(x)),
                    Some(x) if gamma.contains_key(&x) => vs.push(gamma[&x].clone()),
                    _ => break,
                }
            }
            if vs.len() == args.len() && args.iter().any(|a| a.as_node().is_some_and(|x| nodes.contains(&x))) {
                parts.push(Fol::Atom(Pred::Rel(r.clone()), vs));
            }
        }
        for n in nodes {
            if let Some(u) = gamma.get(n) {
                parts.push(Fol::eq(self.var(*n), u.clone()));
            }
        }
        Fol::exists(vars, Fol::and(parts))
    }

    fn form(&mut self, e: &Entity, gamma: &BTreeMap<NodeId, String>) -> Result<(Fol, String), ScopeError> {
        match e {
            Entity::Wrap(w) => {
                let members = self.m.wrapping(w).expect("plug exists").members.clone();
                let f = self.facts(&members, gamma);
                let s = f.to_string();
                Ok((f, s))
            }
            Entity::Node(n) => {
                let m = self.m;
                let d = m.node(*n).expect("plug exists");
                let closed = ConstraintSet::quantifier_default().close_types(&d.types);
                let dets = self.dets;
                let det = match dets.lookup(&d.types).or_else(|| dets.lookup(&closed)) {
                    Some(det) => det,
                    None if closed.contains("quant") || closed.contains("conn") => {
                        return Err(ScopeError::Unsupported(most_specific(&ConstraintSet::quantifier_default(), &d.types)))
                    }
                    None => return Err(ScopeError::UnresolvedHole(*n)),
                };
                let sub = |attr: &str| -> Result<Entity, ScopeError> {
                    m.attr(*n, attr).cloned().ok_or(ScopeError::MissingAttr { node: *n, attr: attr.into() })
                };
                let (restr, nscope) = (sub("restr")?, sub("nscope")?);
                let rvar = m.attr(*n, "rvar").and_then(Entity::as_node);
                let nsvar = m.attr(*n, "nsvar").and_then(Entity::as_node);
                let name = det.name().to_string();
                let u = self.fresh("u");
                let mut g1 = gamma.clone();
                if let Some(r) = rvar {
                    g1.insert(r, u.clone());
                }
                let mut g2 = gamma.clone();
                if let Some(s) = nsvar {
                    g2.insert(s, u.clone());
                }
                let (rf, rs) = self.form(&restr, &g1)?;
                let (sf, ss) = self.form(&nscope, &g2)?;
                Ok((det.quantify(u.clone(), rf, sf), format!("{name}({u}, {rs}, {ss})")))
            }
        }
    }
}

/// Transcribes with the standard determiners.
pub fn transcribe(r: &Reading) -> Result<Fol, ScopeError> {
    Ok(transcribe_with(r, &DeterminerRegistry::default())?.formula)
}

pub fn transcribe_with(r: &Reading, dets: &DeterminerRegistry) -> Result<Transcription, ScopeError> {
    let m = &r.model;
    let used: BTreeSet<String> =
        m.label_index().keys().filter(|l| l.names_node()).map(|l| l.name.clone()).collect();
    let mut ctx = Ctx { m, dets, names: BTreeMap::new(), used, next: 0 };
    let (formula, gqt) = match &r.root {
        Some(root) => ctx.form(root, &BTreeMap::new())?,
        None => {
            let all: BTreeSet<NodeId> = m.node_ids().collect();
            let f = ctx.facts(&all, &BTreeMap::new());
            let s = f.to_string();
            (f, s)
        }
    };
    Ok(Transcription { formula, gqt })
}

/// Truth of a closed formula on a plain frame.
pub fn check_instance(f: &Fol, instance: &Model) -> Result<bool, ScopeError> {
    if instance.wrapping_count() > 0 {
        return Err(ScopeError::NotAnInstance("the instance has wrappings".into()));
    }
    let cs = ConstraintSet::quantifier_default();
    for (n, d) in instance.nodes() {
        if cs.close_types(&d.types).contains("logical") {
            return Err(ScopeError::NotAnInstance(format!("{n} carries a logical type")));
        }
    }
    Ok(fol_eval(&translate_model(instance), f)?)
}
