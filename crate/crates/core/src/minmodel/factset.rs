//! Fact-sets kept as a congruence-closed term graph.
//!
//! Every class is a set of access terms denoting the same entity. Equality,
//! prefix closure, substitution and the membership schemata are all realized
//! by the graph shape, so an atom is in the fact-set iff it evaluates to true
//! on the graph and stays within the budget.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::avl::{Atom, Term};
use crate::model::{Label, LabelSort};

type ClassId = usize;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct ClassData {
    labels: BTreeSet<Label>,
    edges: BTreeMap<String, ClassId>,
    types: BTreeSet<String>,
    wrapping: bool,
    inwr: bool,
    container: Option<ClassId>,
    anon: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Closure {
    parent: Vec<ClassId>,
    data: Vec<ClassData>,
    label_map: BTreeMap<Label, ClassId>,
    rels: BTreeSet<(String, Vec<ClassId>)>,
    pending: Vec<(ClassId, ClassId)>,
    bottom: Option<String>,
}

impl Closure {
    pub(crate) fn new() -> Self {
        Closure {
            parent: Vec::new(),
            data: Vec::new(),
            label_map: BTreeMap::new(),
            rels: BTreeSet::new(),
            pending: Vec::new(),
            bottom: None,
        }
    }

    fn find(&self, mut c: ClassId) -> ClassId {
        while self.parent[c] != c {
            c = self.parent[c];
        }
        c
    }

    fn find_mut(&mut self, c: ClassId) -> ClassId {
        let root = self.find(c);
        let mut cur = c;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn fresh(&mut self) -> ClassId {
        let id = self.parent.len();
        self.parent.push(id);
        self.data.push(ClassData::default());
        id
    }

    fn roots(&self) -> impl Iterator<Item = ClassId> + '_ {
        (0..self.parent.len()).filter(|&c| self.parent[c] == c)
    }

    fn label_class(&mut self, l: &Label) -> ClassId {
        if let Some(&c) = self.label_map.get(l) {
            return self.find_mut(c);
        }
        let c = self.fresh();
        self.data[c].labels.insert(l.clone());
        self.label_map.insert(l.clone(), c);
        c
    }

    fn term_class(&mut self, t: &Term) -> ClassId {
        let mut c = self.label_class(&t.label);
        for a in &t.path {
            let r = self.find_mut(c);
            c = match self.data[r].edges.get(a) {
                Some(&n) => self.find_mut(n),
                None => {
                    let n = self.fresh();
                    self.data[r].edges.insert(a.clone(), n);
                    n
                }
            };
        }
        c
    }

    fn resolve(&self, t: &Term) -> Option<ClassId> {
        let mut c = self.find(*self.label_map.get(&t.label)?);
        for a in &t.path {
            c = self.find(*self.data[c].edges.get(a)?);
        }
        Some(c)
    }

    fn union(&mut self, a: ClassId, b: ClassId) {
        self.pending.push((a, b));
    }

    fn process_pending(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let (ra, rb) = (self.find_mut(a), self.find_mut(b));
            if ra == rb {
                continue;
            }
            let (keep, gone) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[gone] = keep;
            let g = std::mem::take(&mut self.data[gone]);
            let k = &mut self.data[keep];
            k.labels.extend(g.labels);
            k.types.extend(g.types);
            k.wrapping |= g.wrapping;
            k.inwr |= g.inwr;
            k.anon &= g.anon;
            for (attr, t) in g.edges {
                match k.edges.get(&attr) {
                    Some(&existing) => self.pending.push((existing, t)),
                    None => {
                        k.edges.insert(attr, t);
                    }
                }
            }
            let k = &mut self.data[keep];
            match (k.container, g.container) {
                (Some(x), Some(y)) => self.pending.push((x, y)),
                (None, Some(y)) => k.container = Some(y),
                _ => {}
            }
        }
    }

    fn check_bottom(&mut self) {
        for c in self.roots().collect::<Vec<_>>() {
            let d = &self.data[c];
            if !d.wrapping {
                continue;
            }
            let reason = if let Some(l) = d.labels.iter().find(|l| l.names_node()) {
                Some(format!("{l} names a node but is identified with a wrapping"))
            } else if d.inwr {
                Some("a wrapping would be embedded in a wrapping".to_string())
            } else if let Some(a) = d.edges.keys().next() {
                Some(format!("a wrapping would carry the attribute {a}"))
            } else {
                None
            };
            if let Some(r) = reason {
                self.bottom = Some(r);
                return;
            }
        }
    }

    /// Runs the wrapping schemata to a fixpoint.
    fn normalize(&mut self) {
        loop {
            self.process_pending();
            self.check_bottom();
            if self.bottom.is_some() {
                return;
            }
            let mut changed = false;
            for c in self.roots().collect::<Vec<_>>() {
                if self.parent[c] != c {
                    continue;
                }
                if !self.data[c].wrapping && self.data[c].labels.iter().any(|l| l.sort == LabelSort::WrapVar) {
                    self.data[c].wrapping = true;
                    changed = true;
                }
                if self.data[c].container.is_some() && !self.data[c].inwr {
                    self.data[c].inwr = true;
                    changed = true;
                }
                if self.data[c].inwr && self.data[c].container.is_none() {
                    let w = self.fresh();
                    self.data[w].wrapping = true;
                    self.data[w].anon = true;
                    self.data[c].container = Some(w);
                    changed = true;
                }
                let Some(w) = self.data[c].container else { continue };
                let rw = self.find_mut(w);
                if self.data[c].container != Some(rw) {
                    self.data[c].container = Some(rw);
                }
                if !self.data[rw].wrapping {
                    self.data[rw].wrapping = true;
                    changed = true;
                }
                let targets: Vec<ClassId> = self.data[c].edges.values().copied().collect();
                for t in targets {
                    let rt = self.find_mut(t);
                    match self.data[rt].container {
                        None => {
                            self.data[rt].container = Some(rw);
                            changed = true;
                        }
                        Some(x) if self.find(x) != rw => {
                            self.pending.push((x, rw));
                            changed = true;
                        }
                        _ => {}
                    }
                }
            }
            if !changed && self.pending.is_empty() {
                self.check_bottom();
                return;
            }
        }
    }

    pub(crate) fn add(&mut self, a: &Atom) {
        if self.bottom.is_some() {
            return;
        }
        match a {
            Atom::PathTop(t) => {
                self.term_class(t);
            }
            Atom::PathType(t, ty) => {
                let c = self.term_class(t);
                self.data[c].types.insert(ty.clone());
            }
            Atom::PathEq(x, y) => {
                let (cx, cy) = (self.term_class(x), self.term_class(y));
                self.union(cx, cy);
            }
            Atom::Rel(r, args) => {
                let ids: Vec<ClassId> = args.iter().map(|t| self.term_class(t)).collect();
                self.rels.insert((r.clone(), ids));
            }
            Atom::InWr(k) => {
                let c = self.label_class(k);
                self.data[c].inwr = true;
            }
            Atom::In(k, t) => {
                let ck = self.label_class(k);
                let ct = self.label_class(t);
                self.data[ct].wrapping = true;
                let ck = self.find_mut(ck);
                match self.data[ck].container {
                    Some(x) => self.union(x, ct),
                    None => self.data[ck].container = Some(ct),
                }
            }
            Atom::Wr(k) => {
                let c = self.label_class(k);
                self.data[c].wrapping = true;
            }
        }
        self.normalize();
    }

    fn container_of(&self, c: ClassId) -> Option<ClassId> {
        self.data[c].container.map(|w| self.find(w))
    }

    fn holds(&self, a: &Atom) -> bool {
        match a {
            Atom::PathTop(t) => self.resolve(t).is_some(),
            Atom::PathType(t, ty) => self.resolve(t).is_some_and(|c| self.data[c].types.contains(ty)),
            Atom::PathEq(x, y) => match (self.resolve(x), self.resolve(y)) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
            Atom::Rel(r, args) => {
                let Some(ids) = args.iter().map(|t| self.resolve(t)).collect::<Option<Vec<_>>>() else {
                    return false;
                };
                self.rels.iter().any(|(name, raw)| {
                    name == r && raw.len() == ids.len() && raw.iter().zip(&ids).all(|(x, y)| self.find(*x) == *y)
                })
            }
            Atom::InWr(k) => self.resolve(&Term::at(k.clone())).is_some_and(|c| self.data[c].inwr),
            Atom::In(k, t) => match (self.resolve(&Term::at(k.clone())), self.resolve(&Term::at(t.clone()))) {
                (Some(ck), Some(ct)) => self.container_of(ck) == Some(ct),
                _ => false,
            },
            Atom::Wr(k) => self.resolve(&Term::at(k.clone())).is_some_and(|c| self.data[c].wrapping),
        }
    }

    /// Shortest, then smallest, access term of every reachable class.
    fn canonical_terms(&self) -> BTreeMap<ClassId, Term> {
        let mut out: BTreeMap<ClassId, Term> = BTreeMap::new();
        for (l, &c) in &self.label_map {
            let r = self.find(c);
            let t = Term::at(l.clone());
            match out.get(&r) {
                Some(old) if old.canon_key() <= t.canon_key() => {}
                _ => {
                    out.insert(r, t);
                }
            }
        }
        let mut frontier: Vec<(Term, ClassId)> = out.iter().map(|(c, t)| (t.clone(), *c)).collect();
        while !frontier.is_empty() {
            let mut next: BTreeMap<ClassId, Term> = BTreeMap::new();
            for (t, c) in &frontier {
                for (a, target) in &self.data[*c].edges {
                    let rt = self.find(*target);
                    if out.contains_key(&rt) {
                        continue;
                    }
                    let cand = t.extend(a);
                    match next.get(&rt) {
                        Some(old) if old.canon_key() <= cand.canon_key() => {}
                        _ => {
                            next.insert(rt, cand);
                        }
                    }
                }
            }
            frontier = next.iter().map(|(c, t)| (t.clone(), *c)).collect();
            out.extend(next);
        }
        out
    }

    fn basis(&self) -> BTreeSet<Atom> {
        let terms = self.canonical_terms();
        let mut out = BTreeSet::new();
        for (&c, tc) in &terms {
            let d = &self.data[c];
            out.insert(Atom::PathTop(tc.clone()));
            for ty in &d.types {
                out.insert(Atom::PathType(tc.clone(), ty.clone()));
            }
            for l in &d.labels {
                let lt = Term::at(l.clone());
                if lt != *tc {
                    out.insert(Atom::eq(lt, tc.clone()));
                }
            }
            for (a, t) in &d.edges {
                let x = tc.extend(a);
                let tt = &terms[&self.find(*t)];
                if x != *tt {
                    out.insert(Atom::eq(x, tt.clone()));
                }
            }
            if d.wrapping && tc.path.is_empty() {
                out.insert(Atom::Wr(tc.label.clone()));
            }
            if let (Some(w), true) = (self.container_of(c), tc.path.is_empty()) {
                match terms.get(&w) {
                    Some(wt) if wt.path.is_empty() => out.insert(Atom::In(tc.label.clone(), wt.label.clone())),
                    _ => out.insert(Atom::InWr(tc.label.clone())),
                };
            }
        }
        for (r, raw) in &self.rels {
            let args: Option<Vec<Term>> = raw.iter().map(|x| terms.get(&self.find(*x)).cloned()).collect();
            if let Some(args) = args {
                out.insert(Atom::Rel(r.clone(), args));
            }
        }
        out
    }

    /// All access terms of length at most `max`, grouped by class.
    fn terms_up_to(&self, max: usize) -> BTreeMap<ClassId, Vec<Term>> {
        let mut out: BTreeMap<ClassId, Vec<Term>> = BTreeMap::new();
        let mut frontier: Vec<(Term, ClassId)> = self
            .label_map
            .iter()
            .map(|(l, &c)| (Term::at(l.clone()), self.find(c)))
            .collect();
        for _ in 0..=max {
            let mut next = Vec::new();
            for (t, c) in frontier {
                if t.path.len() < max {
                    for (a, target) in &self.data[c].edges {
                        next.push((t.extend(a), self.find(*target)));
                    }
                }
                out.entry(c).or_default().push(t);
            }
            frontier = next;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SaturationBudget {
    pub c0: usize,
}

/// A C0-saturated set of positive atoms.
#[derive(Debug, Clone)]
pub struct FactSet {
    closure: Closure,
    budget: usize,
}

impl FactSet {
    pub fn new(budget: &SaturationBudget) -> Self {
        FactSet { closure: Closure::new(), budget: budget.c0 }
    }

    pub fn budget(&self) -> SaturationBudget {
        SaturationBudget { c0: self.budget }
    }

    pub fn add(&mut self, a: &Atom) {
        self.closure.add(a);
    }

    pub fn with(&self, a: &Atom) -> FactSet {
        let mut u = self.clone();
        u.add(a);
        u
    }

    pub fn is_contradictory(&self) -> bool {
        self.closure.bottom.is_some()
    }

    pub fn contradiction(&self) -> Option<&str> {
        self.closure.bottom.as_deref()
    }

    /// Membership: the atom follows and fits the budget.
    pub fn contains(&self, a: &Atom) -> bool {
        a.attr_count() <= self.budget && (self.is_contradictory() || self.closure.holds(a))
    }

    /// Like [`contains`](Self::contains) but ignoring the budget.
    pub fn entails(&self, a: &Atom) -> bool {
        self.is_contradictory() || self.closure.holds(a)
    }

    /// A canonical generating set; equal fact-sets have equal bases.
    pub fn basis(&self) -> BTreeSet<Atom> {
        self.closure.basis()
    }

    pub fn is_subset_of(&self, other: &FactSet) -> bool {
        if other.is_contradictory() {
            return true;
        }
        if self.is_contradictory() {
            return false;
        }
        self.basis().iter().all(|a| other.entails(a))
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        self.closure.label_map.keys().cloned().collect()
    }

    /// Every atom of the fact-set with at most `max` attribute symbols.
    pub fn atoms_up_to(&self, max: usize) -> BTreeSet<Atom> {
        let c = &self.closure;
        let terms = c.terms_up_to(max);
        let mut out = BTreeSet::new();
        for (&cls, ts) in &terms {
            let d = &c.data[cls];
            for t in ts {
                out.insert(Atom::PathTop(t.clone()));
                for ty in &d.types {
                    out.insert(Atom::PathType(t.clone(), ty.clone()));
                }
                for u in ts {
                    if t < u && t.path.len() + u.path.len() <= max {
                        out.insert(Atom::PathEq(t.clone(), u.clone()));
                    }
                }
                if t.path.is_empty() {
                    if d.wrapping {
                        out.insert(Atom::Wr(t.label.clone()));
                    }
                    if d.inwr {
                        out.insert(Atom::InWr(t.label.clone()));
                    }
                    if let Some(w) = c.container_of(cls) {
                        for wt in terms.get(&w).into_iter().flatten() {
                            if wt.path.is_empty() {
                                out.insert(Atom::In(t.label.clone(), wt.label.clone()));
                            }
                        }
                    }
                }
            }
        }
        for (r, raw) in &c.rels {
            let mut combos: Vec<Vec<Term>> = vec![Vec::new()];
            for x in raw {
                let options = terms.get(&c.find(*x)).cloned().unwrap_or_default();
                combos = combos
                    .into_iter()
                    .flat_map(|pre| {
                        options.iter().filter_map(move |o| {
                            let mut v = pre.clone();
                            v.push(o.clone());
                            (v.iter().map(|t| t.path.len()).sum::<usize>() <= max).then_some(v)
                        })
                    })
                    .collect();
            }
            for args in combos {
                out.insert(Atom::Rel(r.clone(), args));
            }
        }
        out
    }
}

impl PartialEq for FactSet {
    fn eq(&self, other: &Self) -> bool {
        self.is_contradictory() == other.is_contradictory() && self.basis() == other.basis()
    }
}

impl Eq for FactSet {}

/// One atom per line, canonical order.
impl fmt::Display for FactSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.contradiction() {
            return writeln!(f, "BOTTOM ({r})");
        }
        for a in self.basis() {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Closes a set of atoms under the deduction schemata.
pub fn deduce<'a>(facts: impl IntoIterator<Item = &'a Atom>, budget: &SaturationBudget) -> FactSet {
    let mut u = FactSet::new(budget);
    for a in facts {
        u.add(a);
        if u.is_contradictory() {
            break;
        }
    }
    u
}
