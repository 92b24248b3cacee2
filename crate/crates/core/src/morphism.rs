//! Homomorphisms, subsumption, juxtaposition and unification.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::avl::Atom;
use crate::minmodel::{deduce, is_synthetic, FactSet, model_atoms, model_from_factset, MinModelError, SaturationBudget};
use crate::model::{Entity, Label, Model, ModelBuilder, ModelError, NodeId, WrapId};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Homomorphism {
    pub node_map: BTreeMap<NodeId, Entity>,
    pub wrap_map: BTreeMap<WrapId, WrapId>,
}

impl Homomorphism {
    pub fn image(&self, e: &Entity) -> Option<Entity> {
        match e {
            Entity::Node(n) => self.node_map.get(n).cloned(),
            Entity::Wrap(w) => self.wrap_map.get(w).cloned().map(Entity::Wrap),
        }
    }
}

/// Checks every homomorphism condition directly.
pub fn is_homomorphism(src: &Model, dst: &Model, h: &Homomorphism) -> bool {
    for (n, d) in src.nodes() {
        let Some(img) = h.node_map.get(&n) else { return false };
        if !dst.contains_entity(img) {
            return false;
        }
        let Some(img_types) = dst.types_of(img) else { return false };
        if !d.types.is_subset(img_types) {
            return false;
        }
        for (a, t) in src.out_edges(n) {
            let Some(ti) = h.image(t) else { return false };
            let Some(n2) = img.as_node() else { return false };
            if dst.attr(n2, a) != Some(&ti) {
                return false;
            }
        }
        if let Some(w) = src.container(n) {
            let (Some(wi), Some(n2)) = (h.wrap_map.get(w), img.as_node()) else { return false };
            if dst.container(n2) != Some(wi) {
                return false;
            }
        }
    }
    for (w, d) in src.wrappings() {
        let Some(wi) = h.wrap_map.get(w) else { return false };
        let Some(wd) = dst.wrapping(wi) else { return false };
        if !d.types.is_subset(&wd.types) {
            return false;
        }
    }
    for (r, args) in src.rels() {
        let Some(img): Option<Vec<Entity>> = args.iter().map(|a| h.image(a)).collect() else { return false };
        if !dst.has_rel(r, &img) {
            return false;
        }
    }
    for (l, e) in src.label_index() {
        match (h.image(e), dst.lookup(l)) {
            (Some(x), Some(y)) if x == *y => {}
            _ => return false,
        }
    }
    true
}

/// The unique homomorphism, found by propagating from labels.
pub fn find_homomorphism(src: &Model, dst: &Model) -> Option<Homomorphism> {
    let mut h = Homomorphism::default();
    let mut queue: VecDeque<NodeId> = VecDeque::new();

    fn bind(h: &mut Homomorphism, queue: &mut VecDeque<NodeId>, e: &Entity, img: &Entity) -> bool {
        match e {
            Entity::Node(n) => match h.node_map.get(n) {
                Some(old) => old == img,
                None => {
                    h.node_map.insert(*n, img.clone());
                    queue.push_back(*n);
                    true
                }
            },
            Entity::Wrap(w) => match img {
                Entity::Wrap(wi) => match h.wrap_map.get(w) {
                    Some(old) => old == wi,
                    None => {
                        h.wrap_map.insert(w.clone(), wi.clone());
                        true
                    }
                },
                Entity::Node(_) => false,
            },
        }
    }

    for (l, e) in src.label_index() {
        let img = dst.lookup(l)?;
        if !bind(&mut h, &mut queue, e, img) {
            return None;
        }
    }
    while let Some(n) = queue.pop_front() {
        let img = h.node_map[&n].clone();
        for (a, t) in src.out_edges(n) {
            let n2 = img.as_node()?;
            let ti = dst.attr(n2, a)?.clone();
            if !bind(&mut h, &mut queue, t, &ti) {
                return None;
            }
        }
        if let Some(w) = src.container(n) {
            let n2 = img.as_node()?;
            let wi = dst.container(n2)?.clone();
            if !bind(&mut h, &mut queue, &Entity::Wrap(w.clone()), &Entity::Wrap(wi)) {
                return None;
            }
        }
    }
    is_homomorphism(src, dst, &h).then_some(h)
}

pub fn subsumes(a: &Model, b: &Model) -> bool {
    find_homomorphism(a, b).is_some()
}

pub fn is_isomorphic(a: &Model, b: &Model) -> bool {
    a.node_count() == b.node_count()
        && a.wrapping_count() == b.wrapping_count()
        && subsumes(a, b)
        && subsumes(b, a)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("label {0} occurs in more than one model; use unify to identify shared labels")]
    SharedLabel(Label),
    #[error("unification failed: {0}")]
    Clash(String),
    #[error("equations must be path equalities, found {0}")]
    NotAnEquation(Atom),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Build(#[from] MinModelError),
}

/// Disjoint union; node ids are renumbered in input order.
pub fn juxtapose(models: &[Model]) -> Result<Model, MorphismError> {
    let mut seen: BTreeSet<Label> = BTreeSet::new();
    let mut b = ModelBuilder::new();
    for (i, m) in models.iter().enumerate() {
        for l in m.label_index().keys() {
            if !seen.insert(l.clone()) {
                return Err(MorphismError::SharedLabel(l.clone()));
            }
        }
        let mut nmap = BTreeMap::new();
        for (n, d) in m.nodes() {
            let id = b.add_node();
            nmap.insert(n, id);
            let e = Entity::Node(id);
            for l in &d.labels {
                b.add_label(&e, l.clone())?;
            }
            for t in &d.types {
                b.add_type(&e, t.clone())?;
            }
        }
        let mut wmap = BTreeMap::new();
        for (w, d) in m.wrappings() {
            let id = b.add_wrapping_with_id(WrapId(format!("m{i}{}", w.0)))?;
            let e = Entity::Wrap(id.clone());
            for l in &d.labels {
                b.add_label(&e, l.clone())?;
            }
            for t in &d.types {
                b.add_type(&e, t.clone())?;
            }
            for n in &d.members {
                b.add_member(&id, nmap[n])?;
            }
            wmap.insert(w.clone(), id);
        }
        let map = |e: &Entity| match e {
            Entity::Node(n) => Entity::Node(nmap[n]),
            Entity::Wrap(w) => Entity::Wrap(wmap[w].clone()),
        };
        for (n, a, t) in m.attrs() {
            b.set_attr(nmap[&n], a, map(t))?;
        }
        for (r, args) in m.rels() {
            b.add_rel(r.clone(), args.iter().map(map).collect());
        }
    }
    Ok(b.build()?)
}

fn strip_synthetic(m: Model) -> Result<Model, MorphismError> {
    let mut b = m.to_builder();
    for (w, d) in m.wrappings() {
        for l in d.labels.iter().filter(|l| is_synthetic(l)) {
            b.remove_label(&Entity::Wrap(w.clone()), l)?;
        }
    }
    Ok(b.build()?)
}

fn unify_atoms(mut atoms: BTreeSet<Atom>, eqs: &[Atom]) -> Result<Model, MorphismError> {
    for e in eqs {
        if !matches!(e, Atom::PathEq(..) | Atom::PathTop(..)) {
            return Err(MorphismError::NotAnEquation(e.clone()));
        }
        atoms.insert(e.clone());
    }
    let labels: BTreeSet<&Label> = atoms.iter().flat_map(Atom::labels).collect();
    let attrs: usize = atoms.iter().map(Atom::attr_count).sum();
    let u = deduce(&atoms, &SaturationBudget { c0: labels.len() + attrs });
    if let Some(r) = u.contradiction() {
        return Err(MorphismError::Clash(r.to_string()));
    }
    strip_synthetic(model_from_factset(&u)?)
}

/// Least upper bound of several models under path equations.
pub fn unify_all(models: &[Model], eqs: &[Atom]) -> Result<Model, MorphismError> {
    let mut atoms: BTreeSet<Atom> = BTreeSet::new();
    for (i, m) in models.iter().enumerate() {
        atoms.extend(model_atoms(m, &format!("m{i}x")));
    }
    unify_atoms(atoms, eqs)
}

/// Unification of fact-sets that need not describe valid models on their own,
/// such as lexical entries naming a wrapping only through a relation.
pub fn unify_factsets(sets: &[&FactSet], eqs: &[Atom]) -> Result<Model, MorphismError> {
    unify_atoms(sets.iter().flat_map(|u| u.basis()).collect(), eqs)
}

pub fn unify(a: &Model, b: &Model, eqs: &[Atom]) -> Result<Model, MorphismError> {
    unify_all(&[a.clone(), b.clone()], eqs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelBuilder;

    fn edge(a: &str, attr: &str, b: Option<&str>) -> Model {
        let mut m = ModelBuilder::new();
        let x = m.add_node();
        m.add_label(&Entity::Node(x), Label::base(a)).unwrap();
        let y = m.add_node();
        if let Some(b) = b {
            m.add_label(&Entity::Node(y), Label::base(b)).unwrap();
        }
        m.set_attr(x, attr, Entity::Node(y)).unwrap();
        m.build().unwrap()
    }

    #[test]
    fn identity() {
        let m = edge("a", "P", None);
        let h = find_homomorphism(&m, &m).unwrap();
        assert!(h.node_map.iter().all(|(n, e)| *e == Entity::Node(*n)));
    }

    #[test]
    fn labels_must_be_preserved() {
        assert!(subsumes(&edge("a", "P", None), &edge("a", "P", Some("b"))));
        assert!(!subsumes(&edge("a", "P", Some("b")), &edge("a", "P", None)));
    }

    #[test]
    fn juxtaposition_rejects_shared_labels() {
        let m = edge("a", "P", None);
        assert!(matches!(juxtapose(&[m.clone(), m]), Err(MorphismError::SharedLabel(_))));
        let j = juxtapose(&[edge("a", "P", None), edge("c", "Q", None)]).unwrap();
        assert_eq!(j.node_count(), 4);
    }

    #[test]
    fn unify_is_idempotent() {
        let m = edge("a", "P", Some("b"));
        assert!(is_isomorphic(&unify(&m, &m, &[]).unwrap(), &m));
    }
}
