//! One-place Horn constraints over node descriptions.

use std::collections::BTreeSet;

use crate::model::{Entity, Model, ModelBuilder};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// `x.sub -> x.sup`
    Subtype { sub: String, sup: String },
    /// `x.when -> x.attr:TOP`, creating a fresh target when missing.
    Require { when: String, attr: String },
    /// `x.(when & attr:TOP) -> x.attr:then`
    Cascade { when: String, attr: String, then: String },
    /// `x.(t1 & ... & tn) -> FALSE`
    Incompatible(Vec<String>),
    /// Wrappings may carry no type but `hole`.
    OnlyHoleWrappings,
    /// `scope(a, b) & scope(b, c) -> scope(a, c)`; not one-place.
    ScopeTransitivity,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    pub rules: Vec<Rule>,
}

const HIERARCHY: &[(&str, &str)] = &[
    ("some", "exist-quant"),
    ("a", "exist-quant"),
    ("every", "univ-quant"),
    ("exist-quant", "quant"),
    ("univ-quant", "quant"),
    ("no", "quant"),
    ("most", "quant"),
    ("the", "quant"),
    ("conj", "conn"),
    ("neg", "conn"),
    ("always", "conn"),
    ("quant", "logical"),
    ("conn", "logical"),
    ("hole", "logical"),
];

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The logical type hierarchy, the restrictor and nuclear scope cascades,
    /// and the ext/logical incompatibility.
    pub fn quantifier_default() -> Self {
        let mut cs = ConstraintSet::new();
        for (sub, sup) in HIERARCHY {
            cs = cs.with_subtype(sub, sup);
        }
        for attr in ["restr", "nscope"] {
            cs.rules.push(Rule::Require { when: "quant".into(), attr: attr.into() });
            cs.rules.push(Rule::Cascade { when: "quant".into(), attr: attr.into(), then: "hole".into() });
        }
        cs.rules.push(Rule::Incompatible(vec!["ext".into(), "logical".into()]));
        cs
    }

    pub fn with_subtype(mut self, sub: &str, sup: &str) -> Self {
        self.rules.push(Rule::Subtype { sub: sub.into(), sup: sup.into() });
        self
    }

    pub fn with_rule(mut self, r: Rule) -> Self {
        self.rules.push(r);
        self
    }

    /// Upward closure of a type set under the subtype rules.
    pub fn close_types(&self, types: &BTreeSet<String>) -> BTreeSet<String> {
        let mut out = types.clone();
        loop {
            let before = out.len();
            for r in &self.rules {
                if let Rule::Subtype { sub, sup } = r {
                    if out.contains(sub) {
                        out.insert(sup.clone());
                    }
                }
            }
            if out.len() == before {
                return out;
            }
        }
    }
}

fn entities(b: &ModelBuilder) -> Vec<Entity> {
    b.node_ids().into_iter().map(Entity::Node).chain(b.wrap_ids().into_iter().map(Entity::Wrap)).collect()
}

/// Fixed point of the rules; `None` when an incompatibility fires.
pub fn apply_constraints(m: &Model, cs: &ConstraintSet) -> Option<Model> {
    let mut b = m.to_builder();
    let mut fired: BTreeSet<(usize, Entity)> = BTreeSet::new();
    loop {
        let mut changed = false;
        for e in entities(&b) {
            for (i, rule) in cs.rules.iter().enumerate() {
                let types = b.types(&e);
                match rule {
                    Rule::Subtype { sub, sup } => {
                        if types.contains(sub) && !types.contains(sup) {
                            b.add_type(&e, sup.clone()).expect("entity exists");
                            changed = true;
                        }
                    }
                    Rule::Require { when, attr } => {
                        let Entity::Node(n) = e else { continue };
                        if types.contains(when) && b.attr(n, attr).is_none() && fired.insert((i, e.clone())) {
                            let fresh = b.add_node();
                            b.set_attr(n, attr.clone(), Entity::Node(fresh)).expect("attribute was missing");
                            if let Some(c) = b.container(n) {
                                b.add_member(&c, fresh).expect("wrapping exists");
                            }
                            changed = true;
                        }
                    }
                    Rule::Cascade { when, attr, then } => {
                        let Entity::Node(n) = e else { continue };
                        if !types.contains(when) {
                            continue;
                        }
                        if let Some(t) = b.attr(n, attr).cloned() {
                            if b.add_type(&t, then.clone()).expect("target exists") {
                                changed = true;
                            }
                        }
                    }
                    Rule::Incompatible(ts) => {
                        if ts.iter().all(|t| types.contains(t)) {
                            return None;
                        }
                    }
                    Rule::OnlyHoleWrappings => {
                        if matches!(e, Entity::Wrap(_)) && types.iter().any(|t| t != "hole") {
                            return None;
                        }
                    }
                    Rule::ScopeTransitivity => {}
                }
            }
        }
        if cs.rules.contains(&Rule::ScopeTransitivity) {
            let scopes: Vec<Vec<Entity>> =
                b.rels().into_iter().filter(|(r, a)| r == "scope" && a.len() == 2).map(|(_, a)| a).collect();
            let have: BTreeSet<&Vec<Entity>> = scopes.iter().collect();
            let mut add = BTreeSet::new();
            for x in &scopes {
                for y in &scopes {
                    let z = vec![x[0].clone(), y[1].clone()];
                    if x[1] == y[0] && x[0] != y[1] && !have.contains(&z) {
                        add.insert(z);
                    }
                }
            }
            for z in add {
                b.add_rel("scope", z);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Some(b.build().expect("constraint application keeps references intact"))
}
