//! The FSW data model: nodes, wrappings, labels and their well-formedness.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// The three label sorts. Ordering is significant: it drives canonical naming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelSort {
    Base,
    NodeVar,
    WrapVar,
}

impl LabelSort {
    pub fn sigil(self) -> char {
        match self {
            LabelSort::Base => '@',
            LabelSort::NodeVar => '?',
            LabelSort::WrapVar => '$',
        }
    }

    pub fn from_sigil(c: char) -> Option<Self> {
        match c {
            '@' => Some(LabelSort::Base),
            '?' => Some(LabelSort::NodeVar),
            '$' => Some(LabelSort::WrapVar),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub sort: LabelSort,
    pub name: String,
}

impl Label {
    pub fn new(sort: LabelSort, name: impl Into<String>) -> Self {
        Label { sort, name: name.into() }
    }
    pub fn base(name: impl Into<String>) -> Self {
        Self::new(LabelSort::Base, name)
    }
    pub fn var(name: impl Into<String>) -> Self {
        Self::new(LabelSort::NodeVar, name)
    }
    pub fn wvar(name: impl Into<String>) -> Self {
        Self::new(LabelSort::WrapVar, name)
    }
    /// Base labels and node variables name nodes; wrapping variables name wrappings.
    pub fn names_node(&self) -> bool {
        self.sort != LabelSort::WrapVar
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sort.sigil(), self.name)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed label {0:?}: expected a sigil (@, ? or $) followed by a name")]
pub struct LabelParseError(pub String);

impl FromStr for Label {
    type Err = LabelParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let sort = chars
            .next()
            .and_then(LabelSort::from_sigil)
            .ok_or_else(|| LabelParseError(s.to_string()))?;
        let name: String = chars.collect();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-') {
            return Err(LabelParseError(s.to_string()));
        }
        Ok(Label { sort, name })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WrapId(pub String);

impl fmt::Display for WrapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Anything an attribute or relation may point at.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Entity {
    Node(NodeId),
    Wrap(WrapId),
}

impl Entity {
    pub fn as_node(&self) -> Option<NodeId> {
        match self {
            Entity::Node(n) => Some(*n),
            Entity::Wrap(_) => None,
        }
    }
    pub fn as_wrap(&self) -> Option<&WrapId> {
        match self {
            Entity::Wrap(w) => Some(w),
            Entity::Node(_) => None,
        }
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entity::Node(n) => write!(f, "{n}"),
            Entity::Wrap(w) => write!(f, "wrapping {w}"),
        }
    }
}

/// Declared vocabularies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub types: BTreeSet<String>,
    pub attributes: BTreeSet<String>,
    pub relations: BTreeMap<String, usize>,
    pub base_labels: BTreeSet<String>,
    pub node_vars: BTreeSet<String>,
    pub wrapping_vars: BTreeSet<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("label name {0:?} is used with more than one sort")]
    SortOverlap(String),
    #[error("relation {name} has arity {arity}; relations need at least two arguments")]
    Arity { name: String, arity: usize },
    #[error("empty symbol name")]
    EmptyName,
}

impl Signature {
    pub fn check(&self) -> Result<(), SignatureError> {
        for n in &self.base_labels {
            if self.node_vars.contains(n) || self.wrapping_vars.contains(n) {
                return Err(SignatureError::SortOverlap(n.clone()));
            }
        }
        for n in &self.node_vars {
            if self.wrapping_vars.contains(n) {
                return Err(SignatureError::SortOverlap(n.clone()));
            }
        }
        for (name, &arity) in &self.relations {
            if arity < 2 {
                return Err(SignatureError::Arity { name: name.clone(), arity });
            }
        }
        let all = self
            .types
            .iter()
            .chain(&self.attributes)
            .chain(self.relations.keys())
            .chain(&self.base_labels)
            .chain(&self.node_vars)
            .chain(&self.wrapping_vars);
        for n in all {
            if n.is_empty() {
                return Err(SignatureError::EmptyName);
            }
        }
        Ok(())
    }

    pub fn add_label(&mut self, l: &Label) {
        let set = match l.sort {
            LabelSort::Base => &mut self.base_labels,
            LabelSort::NodeVar => &mut self.node_vars,
            LabelSort::WrapVar => &mut self.wrapping_vars,
        };
        set.insert(l.name.clone());
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.base_labels
            .iter()
            .map(Label::base)
            .chain(self.node_vars.iter().map(Label::var))
            .chain(self.wrapping_vars.iter().map(Label::wvar))
    }

    pub fn has_label(&self, l: &Label) -> bool {
        match l.sort {
            LabelSort::Base => self.base_labels.contains(&l.name),
            LabelSort::NodeVar => self.node_vars.contains(&l.name),
            LabelSort::WrapVar => self.wrapping_vars.contains(&l.name),
        }
    }

    pub fn merge(&mut self, other: &Signature) {
        self.types.extend(other.types.iter().cloned());
        self.attributes.extend(other.attributes.iter().cloned());
        for (k, v) in &other.relations {
            self.relations.insert(k.clone(), *v);
        }
        self.base_labels.extend(other.base_labels.iter().cloned());
        self.node_vars.extend(other.node_vars.iter().cloned());
        self.wrapping_vars.extend(other.wrapping_vars.iter().cloned());
    }

    /// The smallest signature a model lives in.
    pub fn of_model(m: &Model) -> Signature {
        let mut sig = Signature::default();
        for d in m.nodes.values() {
            sig.types.extend(d.types.iter().cloned());
            d.labels.iter().for_each(|l| sig.add_label(l));
        }
        for d in m.wrappings.values() {
            sig.types.extend(d.types.iter().cloned());
            d.labels.iter().for_each(|l| sig.add_label(l));
        }
        for (_, a) in m.attrs.keys() {
            sig.attributes.insert(a.clone());
        }
        for (r, args) in &m.rels {
            sig.relations.insert(r.clone(), args.len());
        }
        sig
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeData {
    pub labels: BTreeSet<Label>,
    pub types: BTreeSet<String>,
}

/// A wrapping. `types` is empty except for wrappings that absorbed a typed hole.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WrapData {
    pub labels: BTreeSet<Label>,
    pub types: BTreeSet<String>,
    pub members: BTreeSet<NodeId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown wrapping {0}")]
    UnknownWrapping(WrapId),
    #[error("node {node} already has a different {attr} edge")]
    AttrConflict { node: NodeId, attr: String },
    #[error("duplicate id {0}")]
    DuplicateId(String),
}

/// A model: an FSW together with its label interpretation.
///
/// Immutable once built; use [`ModelBuilder`] to make changed copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    nodes: BTreeMap<NodeId, NodeData>,
    wrappings: BTreeMap<WrapId, WrapData>,
    attrs: BTreeMap<(NodeId, String), Entity>,
    rels: BTreeSet<(String, Vec<Entity>)>,
    label_index: BTreeMap<Label, Entity>,
    member_of: BTreeMap<NodeId, WrapId>,
}

/// A block of the partition of nodes into wrappings plus the complement.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WSetRef {
    Complement,
    Wrapping(WrapId),
}

impl Model {
    pub fn empty() -> Model {
        ModelBuilder::new().build().expect("empty model builds")
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &NodeData)> + '_ {
        self.nodes.iter().map(|(k, v)| (*k, v))
    }
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }
    pub fn node(&self, id: NodeId) -> Option<&NodeData> {
        self.nodes.get(&id)
    }
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
    pub fn wrappings(&self) -> impl Iterator<Item = (&WrapId, &WrapData)> + '_ {
        self.wrappings.iter()
    }
    pub fn wrapping(&self, id: &WrapId) -> Option<&WrapData> {
        self.wrappings.get(id)
    }
    pub fn wrapping_count(&self) -> usize {
        self.wrappings.len()
    }
    pub fn attr(&self, node: NodeId, attr: &str) -> Option<&Entity> {
        self.attrs.get(&(node, attr.to_string()))
    }
    pub fn attrs(&self) -> impl Iterator<Item = (NodeId, &str, &Entity)> + '_ {
        self.attrs.iter().map(|((n, a), t)| (*n, a.as_str(), t))
    }
    pub fn out_edges(&self, node: NodeId) -> impl Iterator<Item = (&str, &Entity)> + '_ {
        self.attrs
            .range((node, String::new())..)
            .take_while(move |((n, _), _)| *n == node)
            .map(|((_, a), t)| (a.as_str(), t))
    }
    pub fn rels(&self) -> impl Iterator<Item = &(String, Vec<Entity>)> + '_ {
        self.rels.iter()
    }
    pub fn has_rel(&self, name: &str, args: &[Entity]) -> bool {
        self.rels.contains(&(name.to_string(), args.to_vec()))
    }
    pub fn lookup(&self, label: &Label) -> Option<&Entity> {
        self.label_index.get(label)
    }
    pub fn label_index(&self) -> &BTreeMap<Label, Entity> {
        &self.label_index
    }
    /// The wrapping a node belongs to, if any.
    pub fn container(&self, node: NodeId) -> Option<&WrapId> {
        self.member_of.get(&node)
    }
    pub fn contains_entity(&self, e: &Entity) -> bool {
        match e {
            Entity::Node(n) => self.nodes.contains_key(n),
            Entity::Wrap(w) => self.wrappings.contains_key(w),
        }
    }
    pub fn types_of(&self, e: &Entity) -> Option<&BTreeSet<String>> {
        match e {
            Entity::Node(n) => self.nodes.get(n).map(|d| &d.types),
            Entity::Wrap(w) => self.wrappings.get(w).map(|d| &d.types),
        }
    }
    pub fn labels_of(&self, e: &Entity) -> Option<&BTreeSet<Label>> {
        match e {
            Entity::Node(n) => self.nodes.get(n).map(|d| &d.labels),
            Entity::Wrap(w) => self.wrappings.get(w).map(|d| &d.labels),
        }
    }

    /// Follows an attribute path from an entity; wrappings carry no attributes.
    pub fn follow(&self, start: &Entity, path: &[String]) -> Option<Entity> {
        let mut cur = start.clone();
        for a in path {
            let n = cur.as_node()?;
            cur = self.attrs.get(&(n, a.clone()))?.clone();
        }
        Some(cur)
    }

    pub fn resolve(&self, label: &Label, path: &[String]) -> Option<Entity> {
        self.follow(self.lookup(label)?, path)
    }

    pub fn to_builder(&self) -> ModelBuilder {
        let next_node = self.nodes.keys().map(|n| n.0 + 1).max().unwrap_or(0);
        ModelBuilder {
            nodes: self.nodes.clone(),
            wrappings: self.wrappings.clone(),
            attrs: self.attrs.clone(),
            rels: self.rels.clone(),
            next_node,
        }
    }
}

/// Single-owner mutable staging area for a [`Model`].
#[derive(Debug, Clone, Default)]
pub struct ModelBuilder {
    nodes: BTreeMap<NodeId, NodeData>,
    wrappings: BTreeMap<WrapId, WrapData>,
    attrs: BTreeMap<(NodeId, String), Entity>,
    rels: BTreeSet<(String, Vec<Entity>)>,
    next_node: u32,
}

impl ModelBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self) -> NodeId {
        let id = NodeId(self.next_node);
        self.next_node += 1;
        self.nodes.insert(id, NodeData::default());
        id
    }

    pub fn add_node_with_id(&mut self, id: NodeId) -> Result<NodeId, ModelError> {
        if self.nodes.contains_key(&id) {
            return Err(ModelError::DuplicateId(id.to_string()));
        }
        self.nodes.insert(id, NodeData::default());
        self.next_node = self.next_node.max(id.0 + 1);
        Ok(id)
    }

    /// Adds a wrapping with the first free id of the form `w<k>`.
    pub fn add_wrapping(&mut self) -> WrapId {
        let mut k = self.wrappings.len();
        loop {
            let id = WrapId(format!("w{k}"));
            if !self.wrappings.contains_key(&id) {
                self.wrappings.insert(id.clone(), WrapData::default());
                return id;
            }
            k += 1;
        }
    }

    pub fn add_wrapping_with_id(&mut self, id: WrapId) -> Result<WrapId, ModelError> {
        if self.wrappings.contains_key(&id) {
            return Err(ModelError::DuplicateId(id.0));
        }
        self.wrappings.insert(id.clone(), WrapData::default());
        Ok(id)
    }

    pub fn has_node(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn node_ids(&self) -> Vec<NodeId> {
        self.nodes.keys().copied().collect()
    }

    pub fn wrap_ids(&self) -> Vec<WrapId> {
        self.wrappings.keys().cloned().collect()
    }

    pub fn types(&self, e: &Entity) -> BTreeSet<String> {
        match e {
            Entity::Node(n) => self.nodes.get(n).map(|d| d.types.clone()),
            Entity::Wrap(w) => self.wrappings.get(w).map(|d| d.types.clone()),
        }
        .unwrap_or_default()
    }

    pub fn attr(&self, node: NodeId, attr: &str) -> Option<&Entity> {
        self.attrs.get(&(node, attr.to_string()))
    }

    pub fn container(&self, node: NodeId) -> Option<WrapId> {
        self.wrappings
            .iter()
            .find(|(_, d)| d.members.contains(&node))
            .map(|(w, _)| w.clone())
    }

    fn labels_mut(&mut self, e: &Entity) -> Result<&mut BTreeSet<Label>, ModelError> {
        match e {
            Entity::Node(n) => self
                .nodes
                .get_mut(n)
                .map(|d| &mut d.labels)
                .ok_or(ModelError::UnknownNode(*n)),
            Entity::Wrap(w) => self
                .wrappings
                .get_mut(w)
                .map(|d| &mut d.labels)
                .ok_or_else(|| ModelError::UnknownWrapping(w.clone())),
        }
    }

    fn types_mut(&mut self, e: &Entity) -> Result<&mut BTreeSet<String>, ModelError> {
        match e {
            Entity::Node(n) => self
                .nodes
                .get_mut(n)
                .map(|d| &mut d.types)
                .ok_or(ModelError::UnknownNode(*n)),
            Entity::Wrap(w) => self
                .wrappings
                .get_mut(w)
                .map(|d| &mut d.types)
                .ok_or_else(|| ModelError::UnknownWrapping(w.clone())),
        }
    }

    pub fn add_label(&mut self, e: &Entity, l: Label) -> Result<&mut Self, ModelError> {
        self.labels_mut(e)?.insert(l);
        Ok(self)
    }

    pub fn remove_label(&mut self, e: &Entity, l: &Label) -> Result<bool, ModelError> {
        Ok(self.labels_mut(e)?.remove(l))
    }

    pub fn add_type(&mut self, e: &Entity, t: impl Into<String>) -> Result<bool, ModelError> {
        Ok(self.types_mut(e)?.insert(t.into()))
    }

    pub fn remove_type(&mut self, e: &Entity, t: &str) -> Result<bool, ModelError> {
        Ok(self.types_mut(e)?.remove(t))
    }

    pub fn add_member(&mut self, w: &WrapId, n: NodeId) -> Result<&mut Self, ModelError> {
        if !self.nodes.contains_key(&n) {
            return Err(ModelError::UnknownNode(n));
        }
        self.wrappings
            .get_mut(w)
            .ok_or_else(|| ModelError::UnknownWrapping(w.clone()))?
            .members
            .insert(n);
        Ok(self)
    }

    pub fn remove_member(&mut self, w: &WrapId, n: NodeId) -> bool {
        self.wrappings.get_mut(w).map(|d| d.members.remove(&n)).unwrap_or(false)
    }

    /// Sets an attribute edge; an existing edge to a different target is a conflict.
    pub fn set_attr(
        &mut self,
        from: NodeId,
        attr: impl Into<String>,
        to: Entity,
    ) -> Result<&mut Self, ModelError> {
        let attr = attr.into();
        if !self.nodes.contains_key(&from) {
            return Err(ModelError::UnknownNode(from));
        }
        match self.attrs.get(&(from, attr.clone())) {
            Some(t) if *t != to => return Err(ModelError::AttrConflict { node: from, attr }),
            _ => {}
        }
        self.attrs.insert((from, attr), to);
        Ok(self)
    }

    pub fn remove_attr(&mut self, from: NodeId, attr: &str) -> Option<Entity> {
        self.attrs.remove(&(from, attr.to_string()))
    }

    pub fn add_rel(&mut self, name: impl Into<String>, args: Vec<Entity>) -> &mut Self {
        self.rels.insert((name.into(), args));
        self
    }

    pub fn remove_rel(&mut self, name: &str, args: &[Entity]) -> bool {
        self.rels.remove(&(name.to_string(), args.to_vec()))
    }

    pub fn rels(&self) -> Vec<(String, Vec<Entity>)> {
        self.rels.iter().cloned().collect()
    }

    pub fn attrs(&self) -> Vec<(NodeId, String, Entity)> {
        self.attrs.iter().map(|((n, a), t)| (*n, a.clone(), t.clone())).collect()
    }

    /// Deletes a node with every edge, relation tuple and membership touching it.
    pub fn remove_node(&mut self, n: NodeId) {
        self.nodes.remove(&n);
        let e = Entity::Node(n);
        self.attrs.retain(|(from, _), to| *from != n && *to != e);
        self.rels.retain(|(_, args)| !args.contains(&e));
        for d in self.wrappings.values_mut() {
            d.members.remove(&n);
        }
    }

    /// Deletes a wrapping; its members fall back to the complement.
    pub fn remove_wrapping(&mut self, w: &WrapId) {
        self.wrappings.remove(w);
        let e = Entity::Wrap(w.clone());
        self.attrs.retain(|_, to| *to != e);
        self.rels.retain(|(_, args)| !args.contains(&e));
    }

    /// Identifies `from` with `into`: labels, types, incoming and outgoing edges and
    /// relation arguments move over, then `from` disappears.
    pub fn merge_into(&mut self, from: &Entity, into: &Entity) -> Result<(), ModelError> {
        if from == into {
            return Ok(());
        }
        let labels = std::mem::take(self.labels_mut(from)?);
        self.labels_mut(into)?.extend(labels);
        let types = std::mem::take(self.types_mut(from)?);
        self.types_mut(into)?.extend(types);
        for t in self.attrs.values_mut() {
            if t == from {
                *t = into.clone();
            }
        }
        let rels = std::mem::take(&mut self.rels);
        self.rels = rels
            .into_iter()
            .map(|(r, args)| {
                let args = args
                    .into_iter()
                    .map(|a| if &a == from { into.clone() } else { a })
                    .collect();
                (r, args)
            })
            .collect();
        match from {
            Entity::Node(n) => {
                let outgoing: Vec<(String, Entity)> = self
                    .attrs
                    .iter()
                    .filter(|((f, _), _)| f == n)
                    .map(|((_, a), t)| (a.clone(), t.clone()))
                    .collect();
                for (a, _) in &outgoing {
                    self.attrs.remove(&(*n, a.clone()));
                }
                if let Some(c) = self.container(*n) {
                    self.remove_member(&c, *n);
                    if let Entity::Node(m) = into {
                        self.add_member(&c, *m)?;
                    }
                }
                match into {
                    Entity::Node(m) => {
                        for (a, t) in outgoing {
                            self.set_attr(*m, a, t)?;
                        }
                    }
                    Entity::Wrap(w) => {
                        if let Some((a, _)) = outgoing.first() {
                            return Err(ModelError::AttrConflict { node: *n, attr: format!("{a} (onto wrapping {w})") });
                        }
                    }
                }
                self.nodes.remove(n);
            }
            Entity::Wrap(w) => {
                let members = self.wrappings.remove(w).map(|d| d.members).unwrap_or_default();
                if let Entity::Wrap(w2) = into {
                    for m in members {
                        self.add_member(w2, m)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Drops nodes not attribute-reachable from a labelled node of their own w-set,
    /// and wrappings left empty.
    pub fn prune_unreachable(&mut self) {
        loop {
            let model = match self.clone().build() {
                Ok(m) => m,
                Err(_) => return,
            };
            let reach = reachable_nodes(&model);
            let dead: Vec<NodeId> = model.node_ids().filter(|n| !reach.contains(n)).collect();
            let empty: Vec<WrapId> = self
                .wrappings
                .iter()
                .filter(|(_, d)| d.members.iter().all(|m| dead.contains(m)))
                .map(|(w, _)| w.clone())
                .collect();
            if dead.is_empty() && empty.is_empty() {
                return;
            }
            for n in dead {
                self.remove_node(n);
            }
            for w in empty {
                self.remove_wrapping(&w);
            }
        }
    }

    /// Checks referential integrity and freezes the model.
    pub fn build(self) -> Result<Model, ModelError> {
        let check = |e: &Entity| -> Result<(), ModelError> {
            match e {
                Entity::Node(n) if !self.nodes.contains_key(n) => Err(ModelError::UnknownNode(*n)),
                Entity::Wrap(w) if !self.wrappings.contains_key(w) => {
                    Err(ModelError::UnknownWrapping(w.clone()))
                }
                _ => Ok(()),
            }
        };
        for ((from, _), to) in &self.attrs {
            check(&Entity::Node(*from))?;
            check(to)?;
        }
        for (_, args) in &self.rels {
            for a in args {
                check(a)?;
            }
        }
        let mut member_of = BTreeMap::new();
        for (w, d) in &self.wrappings {
            for m in &d.members {
                check(&Entity::Node(*m))?;
                member_of.entry(*m).or_insert_with(|| w.clone());
            }
        }
        let mut label_index = BTreeMap::new();
        for (n, d) in &self.nodes {
            for l in &d.labels {
                label_index.entry(l.clone()).or_insert(Entity::Node(*n));
            }
        }
        for (w, d) in &self.wrappings {
            for l in &d.labels {
                label_index.entry(l.clone()).or_insert_with(|| Entity::Wrap(w.clone()));
            }
        }
        Ok(Model {
            nodes: self.nodes,
            wrappings: self.wrappings,
            attrs: self.attrs,
            rels: self.rels,
            label_index,
            member_of,
        })
    }
}

/// One broken invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyModel,
    EmptyWrapping(WrapId),
    OverlappingWrappings { node: NodeId, first: WrapId, second: WrapId },
    LabelSort { label: Label, entity: Entity },
    DuplicateLabel { label: Label, first: Entity, second: Entity },
    Unreachable(NodeId),
    Escape { node: NodeId, attr: String, target: Entity },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyModel => write!(f, "non-emptiness: the model has no nodes"),
            Violation::EmptyWrapping(w) => write!(f, "non-emptiness: wrapping {w} has no members"),
            Violation::OverlappingWrappings { node, first, second } => {
                write!(f, "disjointness: {node} belongs to both {first} and {second}")
            }
            Violation::LabelSort { label, entity } => {
                write!(f, "label sort: {label} cannot name {entity}")
            }
            Violation::DuplicateLabel { label, first, second } => {
                write!(f, "label functionality: {label} names both {first} and {second}")
            }
            Violation::Unreachable(n) => write!(
                f,
                "reachability: {n} is not accessible from a labelled node of its w-set"
            ),
            Violation::Escape { node, attr, target } => write!(
                f,
                "non-escapability: {node} is wrapped but its {attr} edge leads to {target} outside its wrapping"
            ),
        }
    }
}

/// Nodes accessible from a labelled node (base label or node variable) of the same w-set.
pub(crate) fn reachable_nodes(m: &Model) -> BTreeSet<NodeId> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<NodeId> = m
        .nodes()
        .filter(|(_, d)| d.labels.iter().any(Label::names_node))
        .map(|(n, _)| n)
        .collect();
    seen.extend(queue.iter().copied());
    while let Some(n) = queue.pop_front() {
        let home = m.container(n);
        for (_, t) in m.out_edges(n) {
            if let Entity::Node(t) = t {
                if m.container(*t) == home && seen.insert(*t) {
                    queue.push_back(*t);
                }
            }
        }
    }
    seen
}

/// Reports every violated invariant; an empty list means the model is valid.
pub fn validate(m: &Model) -> Vec<Violation> {
    let mut out = Vec::new();
    if m.nodes.is_empty() {
        out.push(Violation::EmptyModel);
    }
    let mut owner: BTreeMap<NodeId, &WrapId> = BTreeMap::new();
    for (w, d) in &m.wrappings {
        if d.members.is_empty() {
            out.push(Violation::EmptyWrapping(w.clone()));
        }
        for n in &d.members {
            if let Some(first) = owner.insert(*n, w) {
                out.push(Violation::OverlappingWrappings {
                    node: *n,
                    first: first.clone(),
                    second: w.clone(),
                });
            }
        }
    }
    let mut seen: BTreeMap<&Label, Entity> = BTreeMap::new();
    let entities = m
        .nodes
        .iter()
        .map(|(n, d)| (Entity::Node(*n), &d.labels))
        .chain(m.wrappings.iter().map(|(w, d)| (Entity::Wrap(w.clone()), &d.labels)));
    for (e, labels) in entities {
        for l in labels {
            let ok = matches!(e, Entity::Node(_)) == l.names_node();
            if !ok {
                out.push(Violation::LabelSort { label: l.clone(), entity: e.clone() });
            }
            if let Some(first) = seen.get(l) {
                out.push(Violation::DuplicateLabel {
                    label: l.clone(),
                    first: first.clone(),
                    second: e.clone(),
                });
            } else {
                seen.insert(l, e.clone());
            }
        }
    }
    let reach = reachable_nodes(m);
    for n in m.nodes.keys() {
        if !reach.contains(n) {
            out.push(Violation::Unreachable(*n));
        }
    }
    for ((n, a), t) in &m.attrs {
        if let Some(w) = m.container(*n) {
            let inside = match t {
                Entity::Node(t) => m.container(*t) == Some(w),
                Entity::Wrap(_) => false,
            };
            if !inside {
                out.push(Violation::Escape { node: *n, attr: a.clone(), target: t.clone() });
            }
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown node {0}")]
pub struct UnknownNode(pub NodeId);

/// The w-set a node lives in.
pub fn w_set_of(m: &Model, node: NodeId) -> Result<WSetRef, UnknownNode> {
    if m.node(node).is_none() {
        return Err(UnknownNode(node));
    }
    Ok(match m.container(node) {
        Some(w) => WSetRef::Wrapping(w.clone()),
        None => WSetRef::Complement,
    })
}
