//! Fact-set to model: paths, merges, decorations, wrappings.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::factset::FactSet;
use super::MinModelError;
use crate::avl::{Atom, Term};
use crate::model::{validate, Entity, Label, LabelSort, Model, ModelBuilder, NodeId, WrapId};

struct Proto {
    parent: Vec<usize>,
    edges: Vec<BTreeMap<String, usize>>,
    origin: Vec<Option<Term>>,
    labels: BTreeMap<Label, usize>,
}

impl Proto {
    fn fresh(&mut self, origin: Option<Term>) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.edges.push(BTreeMap::new());
        self.origin.push(origin);
        id
    }

    fn find(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut cur = c;
        while self.parent[cur] != r {
            let next = self.parent[cur];
            self.parent[cur] = r;
            cur = next;
        }
        r
    }

    fn label(&mut self, l: &Label) -> usize {
        if let Some(&n) = self.labels.get(l) {
            return n;
        }
        let n = self.fresh(Some(Term::at(l.clone())));
        self.labels.insert(l.clone(), n);
        n
    }

    /// Step 1: walks a path, creating missing nodes.
    fn path(&mut self, t: &Term) -> usize {
        let mut cur = self.label(&t.label);
        for (i, a) in t.path.iter().enumerate() {
            cur = self.find(cur);
            cur = match self.edges[cur].get(a) {
                Some(&n) => n,
                None => {
                    let n = self.fresh(Some(Term::new(t.label.clone(), t.path[..=i].to_vec())));
                    self.edges[cur].insert(a.clone(), n);
                    n
                }
            };
        }
        self.find(cur)
    }

    /// Step 2: merges with congruence cascade.
    fn merge(&mut self, a: usize, b: usize) {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            let (ra, rb) = (self.find(a), self.find(b));
            if ra == rb {
                continue;
            }
            let (keep, gone) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[gone] = keep;
            let moved = std::mem::take(&mut self.edges[gone]);
            for (attr, t) in moved {
                match self.edges[keep].get(&attr) {
                    Some(&e) => queue.push((e, t)),
                    None => {
                        self.edges[keep].insert(attr, t);
                    }
                }
            }
        }
    }
}

/// Rebuilds a model from a consistent fact-set.
pub fn model_from_factset(u: &FactSet) -> Result<Model, MinModelError> {
    if let Some(r) = u.contradiction() {
        return Err(MinModelError::Contradictory(r.to_string()));
    }
    model_from_atoms(&u.basis())
}

/// The four-step construction over a generating atom set.
pub fn model_from_atoms(atoms: &BTreeSet<Atom>) -> Result<Model, MinModelError> {
    let mut p = Proto { parent: Vec::new(), edges: Vec::new(), origin: Vec::new(), labels: BTreeMap::new() };
    for a in atoms {
        for t in a.terms() {
            p.path(t);
        }
        for l in a.labels() {
            p.label(l);
        }
    }
    for a in atoms {
        if let Atom::PathEq(x, y) = a {
            let (cx, cy) = (p.path(x), p.path(y));
            p.merge(cx, cy);
        }
    }

    let n = p.parent.len();
    let roots: Vec<usize> = (0..n).filter(|&i| p.find(i) == i).collect();
    let mut labels: BTreeMap<usize, BTreeSet<Label>> = BTreeMap::new();
    for (l, &c) in p.labels.clone().iter() {
        let r = p.find(c);
        labels.entry(r).or_default().insert(l.clone());
    }
    let mut key: BTreeMap<usize, Term> = BTreeMap::new();
    for i in 0..n {
        let r = p.find(i);
        if let Some(t) = p.origin[i].clone() {
            match key.get(&r) {
                Some(old) if old.canon_key() <= t.canon_key() => {}
                _ => {
                    key.insert(r, t);
                }
            }
        }
    }

    // Step 3: decorations.
    let mut types: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    let mut rels: BTreeSet<(String, Vec<usize>)> = BTreeSet::new();
    let mut is_wrapping: BTreeSet<usize> = BTreeSet::new();
    for (r, ls) in &labels {
        if ls.iter().any(|l| l.sort == LabelSort::WrapVar) {
            is_wrapping.insert(*r);
        }
    }
    let mut in_atoms = Vec::new();
    let mut inwr = Vec::new();
    for a in atoms {
        match a {
            Atom::PathType(t, ty) => {
                let c = p.path(t);
                types.entry(c).or_default().insert(ty.clone());
            }
            Atom::Rel(name, args) => {
                let ids = args.iter().map(|t| p.path(t)).collect();
                rels.insert((name.clone(), ids));
            }
            Atom::Wr(k) => {
                let c = p.label(k);
                is_wrapping.insert(p.find(c));
            }
            Atom::In(k, t) => {
                let (ck, ct) = (p.label(k), p.label(t));
                let (ck, ct) = (p.find(ck), p.find(ct));
                is_wrapping.insert(ct);
                in_atoms.push((ck, ct));
            }
            Atom::InWr(k) => {
                let c = p.label(k);
                inwr.push(p.find(c));
            }
            _ => {}
        }
    }

    // Step 4: wrappings. Anonymous wrappings get keys past the proto range.
    let mut container: BTreeMap<usize, usize> = BTreeMap::new();
    let inconsistent = |what: String| MinModelError::Inconsistent(what);
    for (k, t) in in_atoms {
        if let Some(&old) = container.get(&k) {
            if old != t {
                return Err(inconsistent(format!("a node is in two wrappings ({old} and {t})")));
            }
        }
        container.insert(k, t);
    }
    let mut next_anon = n;
    for k in inwr {
        container.entry(k).or_insert_with(|| {
            next_anon += 1;
            next_anon - 1
        });
    }
    let mut queue: VecDeque<usize> = container.keys().copied().collect();
    while let Some(v) = queue.pop_front() {
        let w = container[&v];
        let targets: Vec<usize> = p.edges[v].values().copied().collect();
        for t in targets {
            let t = p.find(t);
            if is_wrapping.contains(&t) {
                return Err(inconsistent("a wrapped node points at a wrapping".into()));
            }
            match container.get(&t) {
                None => {
                    container.insert(t, w);
                    queue.push_back(t);
                }
                Some(&x) if x != w => {
                    return Err(inconsistent("attributes cross a wrapping boundary".into()));
                }
                _ => {}
            }
        }
    }

    let node_roots: Vec<usize> = {
        let mut v: Vec<usize> = roots.iter().copied().filter(|r| !is_wrapping.contains(r)).collect();
        v.sort_by(|a, b| key[a].canon_key().cmp(&key[b].canon_key()));
        v
    };
    let node_id: BTreeMap<usize, NodeId> =
        node_roots.iter().enumerate().map(|(i, r)| (*r, NodeId(i as u32))).collect();
    let mut wrap_keys: Vec<usize> = is_wrapping.iter().copied().collect();
    wrap_keys.sort_by(|a, b| key[a].canon_key().cmp(&key[b].canon_key()));
    let mut anon: Vec<(NodeId, usize)> = container
        .iter()
        .filter(|(_, w)| **w >= n)
        .map(|(v, w)| (node_id[v], *w))
        .collect();
    anon.sort();
    for (_, w) in anon {
        if !wrap_keys.contains(&w) {
            wrap_keys.push(w);
        }
    }
    let wrap_id: BTreeMap<usize, WrapId> =
        wrap_keys.iter().enumerate().map(|(i, w)| (*w, WrapId(format!("w{i}")))).collect();
    let entity = |r: usize| -> Entity {
        match wrap_id.get(&r) {
            Some(w) => Entity::Wrap(w.clone()),
            None => Entity::Node(node_id[&r]),
        }
    };

    let mut b = ModelBuilder::new();
    for r in &node_roots {
        let id = b.add_node_with_id(node_id[r])?;
        let e = Entity::Node(id);
        for l in labels.get(r).into_iter().flatten() {
            b.add_label(&e, l.clone())?;
        }
        for t in types.get(r).into_iter().flatten() {
            b.add_type(&e, t.clone())?;
        }
    }
    for w in &wrap_keys {
        let id = b.add_wrapping_with_id(wrap_id[w].clone())?;
        let e = Entity::Wrap(id);
        for l in labels.get(w).into_iter().flatten() {
            b.add_label(&e, l.clone())?;
        }
        for t in types.get(w).into_iter().flatten() {
            b.add_type(&e, t.clone())?;
        }
    }
    for (v, w) in &container {
        b.add_member(&wrap_id[w], node_id[v])?;
    }
    for r in &roots {
        let edges: Vec<(String, usize)> = p.edges[*r].iter().map(|(a, t)| (a.clone(), *t)).collect();
        if !edges.is_empty() && is_wrapping.contains(r) {
            return Err(inconsistent("a wrapping carries attributes".into()));
        }
        for (a, t) in edges {
            let t = p.find(t);
            b.set_attr(node_id[r], a, entity(t))?;
        }
    }
    for (name, args) in rels {
        let args = args.into_iter().map(|a| entity(p.find(a))).collect();
        b.add_rel(name, args);
    }
    let m = b.build()?;
    if m.node_count() == 0 {
        return Err(MinModelError::NoLabelledContent);
    }
    let empty: Vec<String> = m
        .wrappings()
        .filter(|(_, d)| d.members.is_empty())
        .map(|(w, d)| match d.labels.iter().next() {
            Some(l) => l.to_string(),
            None => w.0.clone(),
        })
        .collect();
    if !empty.is_empty() {
        return Err(MinModelError::EmptyWrapping(empty));
    }
    let violations = validate(&m);
    if !violations.is_empty() {
        return Err(MinModelError::Invalid(violations.iter().map(|v| v.to_string()).collect()));
    }
    Ok(m)
}
