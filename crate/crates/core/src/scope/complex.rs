//! Fragments and dominance edges of a Quantified Complex.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{ConstraintSet, ScopeError};
use crate::model::{Entity, Label, Model, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub root: Entity,
    pub nodes: BTreeSet<NodeId>,
    pub holes: Vec<NodeId>,
    pub kind: String,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.root {
            Entity::Node(n) => write!(f, "{}@{n}", self.kind),
            Entity::Wrap(w) => write!(f, "wrapping {w}"),
        }
    }
}

/// A model split into fragments plus the top hole.
#[derive(Debug, Clone)]
pub struct QuantifiedComplex {
    model: Model,
    top: Option<NodeId>,
    fragments: Vec<Fragment>,
    /// `(hole, fragment index)` for every `scope` relation leaving a hole.
    dominance: Vec<(NodeId, usize)>,
    hole_owner: BTreeMap<NodeId, usize>,
}

fn is_logical(types: &BTreeSet<String>) -> bool {
    types.contains("logical")
}

/// The first type not implied by another type of the set.
pub(crate) fn most_specific(cs: &ConstraintSet, types: &BTreeSet<String>) -> String {
    let implied: BTreeSet<String> = types
        .iter()
        .flat_map(|t| {
            let mut up = cs.close_types(&BTreeSet::from([t.clone()]));
            up.remove(t);
            up
        })
        .collect();
    types.iter().find(|t| !implied.contains(*t)).cloned().unwrap_or_else(|| "logical".into())
}

impl QuantifiedComplex {
    pub fn new(model: Model) -> Result<Self, ScopeError> {
        Self::build(model, None)
    }

    /// Chooses the top hole by label when several candidates exist.
    pub fn with_top(model: Model, top: &Label) -> Result<Self, ScopeError> {
        Self::build(model, Some(top))
    }

    fn build(model: Model, top_label: Option<&Label>) -> Result<Self, ScopeError> {
        let cs = ConstraintSet::quantifier_default();
        let closed: BTreeMap<NodeId, BTreeSet<String>> =
            model.nodes().map(|(n, d)| (n, cs.close_types(&d.types))).collect();
        let hole = |n: &NodeId| closed[n].contains("hole");
        let root = |n: &NodeId| model.container(*n).is_none() && is_logical(&closed[n]) && !hole(n);

        let mut fragments = Vec::new();
        let mut owner: BTreeMap<NodeId, usize> = BTreeMap::new();
        for r in model.node_ids().filter(|n| root(n)) {
            let mut nodes = BTreeSet::from([r]);
            let mut stack = vec![r];
            while let Some(n) = stack.pop() {
                let mut next: Vec<NodeId> = model
                    .out_edges(n)
                    .filter_map(|(_, t)| t.as_node())
                    .filter(|t| model.container(*t).is_none() && !root(t))
                    .collect();
                if n == r {
                    // Connectives reach their holes through `scope` relations.
                    next.extend(
                        model
                            .rels()
                            .filter(|(name, a)| name == "scope" && a.len() == 2 && a[0] == Entity::Node(r))
                            .filter_map(|(_, a)| a[1].as_node())
                            .filter(|t| hole(t) && model.container(*t).is_none()),
                    );
                }
                for t in next {
                    if nodes.insert(t) {
                        stack.push(t);
                    }
                }
            }
            let holes: Vec<NodeId> = nodes.iter().copied().filter(|n| *n != r && hole(n)).collect();
            let idx = fragments.len();
            for n in &nodes {
                if let Some(old) = owner.insert(*n, idx) {
                    return Err(ScopeError::SharedNode { node: *n, fragments: (old, idx) });
                }
            }
            let kind = most_specific(&cs, &model.node(r).expect("root exists").types);
            fragments.push(Fragment { root: Entity::Node(r), nodes, holes, kind });
        }
        let mut wrap_frag = BTreeMap::new();
        for (w, d) in model.wrappings() {
            wrap_frag.insert(w.clone(), fragments.len());
            fragments.push(Fragment {
                root: Entity::Wrap(w.clone()),
                nodes: d.members.clone(),
                holes: Vec::new(),
                kind: "wrapping".into(),
            });
        }

        let mut candidates: Vec<NodeId> =
            model.node_ids().filter(|n| hole(n) && model.container(*n).is_none() && !owner.contains_key(n)).collect();
        if let Some(l) = top_label {
            let e = model.lookup(l).ok_or_else(|| ScopeError::UnknownTop(l.clone()))?;
            candidates.retain(|n| Entity::Node(*n) == *e);
            if candidates.is_empty() {
                return Err(ScopeError::UnknownTop(l.clone()));
            }
        }
        let top = match candidates.len() {
            0 if fragments.iter().any(|f| !f.holes.is_empty()) => return Err(ScopeError::NoTopHole),
            0 => None,
            1 => Some(candidates[0]),
            _ => return Err(ScopeError::AmbiguousTop(candidates)),
        };
        if top.is_some() {
            for n in model.node_ids() {
                if model.container(n).is_none() && !owner.contains_key(&n) && Some(n) != top {
                    return Err(ScopeError::StrayNode(n));
                }
            }
        }

        let mut hole_owner = BTreeMap::new();
        for (i, f) in fragments.iter().enumerate() {
            for h in &f.holes {
                hole_owner.insert(*h, i);
            }
        }
        let frag_of = |e: &Entity| -> Option<usize> {
            match e {
                Entity::Wrap(w) => wrap_frag.get(w).copied(),
                Entity::Node(n) => match model.container(*n) {
                    Some(w) => wrap_frag.get(w).copied(),
                    None => owner.get(n).copied(),
                },
            }
        };
        let mut dominance = Vec::new();
        for (name, args) in model.rels() {
            if name != "scope" || args.len() != 2 {
                continue;
            }
            let Some(h) = args[0].as_node().filter(|n| hole(n)) else { continue };
            let f = frag_of(&args[1]).ok_or_else(|| ScopeError::BadScope(args[1].clone()))?;
            if hole_owner.get(&h) == Some(&f) {
                return Err(ScopeError::BadScope(args[1].clone()));
            }
            dominance.push((h, f));
        }
        dominance.sort();
        dominance.dedup();
        Ok(QuantifiedComplex { model, top, fragments, dominance, hole_owner })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }
    pub fn top(&self) -> Option<NodeId> {
        self.top
    }
    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }
    pub fn dominance(&self) -> &[(NodeId, usize)] {
        &self.dominance
    }
    /// The fragment owning a hole; the top hole has none.
    pub fn hole_owner(&self, h: NodeId) -> Option<usize> {
        self.hole_owner.get(&h).copied()
    }
    /// The fragment whose root is `e`.
    pub fn fragment_at(&self, e: &Entity) -> Option<usize> {
        self.fragments.iter().position(|f| f.root == *e)
    }
}

/// Fragments of `within` with no ingoing scope relation from a hole of `within`.
pub fn free_fragments_in(g: &QuantifiedComplex, within: &BTreeSet<usize>) -> Vec<usize> {
    within
        .iter()
        .copied()
        .filter(|f| {
            !g.dominance
                .iter()
                .any(|(h, t)| t == f && g.hole_owner(*h).is_some_and(|o| within.contains(&o)))
        })
        .collect()
}

/// Free fragments of the whole complex, the top hole removed.
pub fn free_fragments(g: &QuantifiedComplex) -> Vec<usize> {
    free_fragments_in(g, &(0..g.fragments.len()).collect())
}
