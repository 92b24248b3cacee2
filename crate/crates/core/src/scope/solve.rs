//! Free-fragment enumeration of all tree-shaped readings.

use std::collections::{BTreeMap, BTreeSet};

use super::complex::{free_fragments_in, QuantifiedComplex};
use super::ScopeError;
use crate::model::{validate, Entity, Model, NodeId};
use crate::morphism::is_isomorphic;

/// One resolution: every hole merged with a fragment root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reading {
    pub model: Model,
    /// Fragments chosen, outermost first.
    pub provenance: Vec<String>,
    /// The plug of the top hole; `None` for a frame without logical content.
    pub root: Option<Entity>,
    /// Hole of the source complex to the fragment root it received.
    pub plugs: BTreeMap<NodeId, Entity>,
}

struct Partial {
    root: usize,
    plugs: Vec<(NodeId, usize)>,
    order: Vec<usize>,
}

fn components(g: &QuantifiedComplex, set: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let mut parent: BTreeMap<usize, usize> = set.iter().map(|f| (*f, *f)).collect();
    fn find(p: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let mut r = x;
        while p[&r] != r {
            r = p[&r];
        }
        p.insert(x, r);
        r
    }
    for (h, t) in g.dominance() {
        let Some(s) = g.hole_owner(*h) else { continue };
        if set.contains(&s) && set.contains(t) {
            let (a, b) = (find(&mut parent, s), find(&mut parent, *t));
            parent.insert(a.max(b), a.min(b));
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for f in set {
        let r = find(&mut parent, *f);
        groups.entry(r).or_default().insert(*f);
    }
    groups.into_values().collect()
}

fn enumerate(g: &QuantifiedComplex, set: &BTreeSet<usize>) -> Vec<Partial> {
    let mut out = Vec::new();
    for f in free_fragments_in(g, set) {
        let rest: BTreeSet<usize> = set.iter().copied().filter(|x| *x != f).collect();
        let holes = &g.fragments()[f].holes;
        let comps = components(g, &rest);
        // Each component hangs below exactly one hole and each hole gets exactly one component.
        let mut assignment: Vec<(NodeId, BTreeSet<usize>)> = Vec::new();
        let mut ok = true;
        for c in comps {
            let into: BTreeSet<NodeId> =
                g.dominance().iter().filter(|(h, t)| holes.contains(h) && c.contains(t)).map(|(h, _)| *h).collect();
            if into.len() != 1 {
                ok = false;
                break;
            }
            assignment.push((*into.iter().next().expect("one hole"), c));
        }
        let used: BTreeSet<NodeId> = assignment.iter().map(|(h, _)| *h).collect();
        if !ok || used.len() != assignment.len() || used.len() != holes.len() {
            continue;
        }
        let mut partials = vec![Partial { root: f, plugs: Vec::new(), order: vec![f] }];
        for (h, c) in &assignment {
            let subs = enumerate(g, c);
            let mut next = Vec::new();
            for p in &partials {
                for s in &subs {
                    let mut plugs = p.plugs.clone();
                    plugs.push((*h, s.root));
                    plugs.extend(s.plugs.iter().copied());
                    let mut order = p.order.clone();
                    order.extend(s.order.iter().copied());
                    next.push(Partial { root: f, plugs, order });
                }
            }
            partials = next;
        }
        out.extend(partials);
    }
    out
}

fn realize(g: &QuantifiedComplex, p: &Partial) -> Result<Reading, ScopeError> {
    let frags = g.fragments();
    let mut plugs: BTreeMap<NodeId, Entity> =
        p.plugs.iter().map(|(h, f)| (*h, frags[*f].root.clone())).collect();
    let top = g.top().expect("solving needs a top hole");
    plugs.insert(top, frags[p.root].root.clone());
    let mut b = g.model().to_builder();
    for (h, e) in &plugs {
        b.merge_into(&Entity::Node(*h), e)?;
    }
    let model = b.build()?;
    let bad = validate(&model);
    if !bad.is_empty() {
        return Err(ScopeError::InvalidReading(bad.iter().map(|v| v.to_string()).collect()));
    }
    Ok(Reading {
        model,
        provenance: p.order.iter().map(|f| frags[*f].to_string()).collect(),
        root: Some(frags[p.root].root.clone()),
        plugs,
    })
}

/// All readings, deduplicated up to isomorphism. A frame without a top hole
/// is its own single reading.
pub fn solve(g: &QuantifiedComplex) -> Result<Vec<Reading>, ScopeError> {
    if g.top().is_none() {
        return Ok(vec![Reading { model: g.model().clone(), provenance: Vec::new(), root: None, plugs: BTreeMap::new() }]);
    }
    let all: BTreeSet<usize> = (0..g.fragments().len()).collect();
    let mut out: Vec<Reading> = Vec::new();
    for p in enumerate(g, &all) {
        let r = realize(g, &p)?;
        if !out.iter().any(|o| is_isomorphic(&o.model, &r.model)) {
            out.push(r);
        }
    }
    Ok(out)
}
