//! Model JSON documents.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Entity, Label, Model, ModelBuilder, ModelError, NodeId, WrapId};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("empty document")]
    Empty,
    #[error("schema error at line {line}, column {column}: {msg}")]
    Schema { line: usize, column: usize, msg: String },
    #[error("field {field}: {msg}")]
    Field { field: String, msg: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    #[serde(default)]
    attrs: Vec<AttrDoc>,
    nodes: Vec<NodeDoc>,
    #[serde(default)]
    rels: Vec<RelDoc>,
    #[serde(default)]
    wrappings: Vec<WrapDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: u32,
    #[serde(default)]
    labels: Vec<String>,
    #[serde(default)]
    types: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttrDoc {
    attr: String,
    from: u32,
    to: EntityDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelDoc {
    args: Vec<EntityDoc>,
    name: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WrapDoc {
    id: String,
    #[serde(default)]
    labels: Vec<String>,
    members: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    types: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum EntityDoc {
    Node(u32),
    Wrap {
        wrap: String,
    },
}

impl From<&Entity> for EntityDoc {
    fn from(e: &Entity) -> Self {
        match e {
            Entity::Node(n) => EntityDoc::Node(n.0),
            Entity::Wrap(w) => EntityDoc::Wrap { wrap: w.0.clone() },
        }
    }
}

impl From<EntityDoc> for Entity {
    fn from(e: EntityDoc) -> Self {
        match e {
            EntityDoc::Node(n) => Entity::Node(NodeId(n)),
            EntityDoc::Wrap { wrap } => Entity::Wrap(WrapId(wrap)),
        }
    }
}

fn to_doc(m: &Model) -> Doc {
    Doc {
        attrs: m
            .attrs()
            .map(|(n, a, t)| AttrDoc { attr: a.to_string(), from: n.0, to: t.into() })
            .collect(),
        nodes: m
            .nodes()
            .map(|(id, d)| NodeDoc {
                id: id.0,
                labels: d.labels.iter().map(Label::to_string).collect(),
                types: d.types.iter().cloned().collect(),
            })
            .collect(),
        rels: m
            .rels()
            .map(|(name, args)| RelDoc { args: args.iter().map(EntityDoc::from).collect(), name: name.clone() })
            .collect(),
        wrappings: m
            .wrappings()
            .map(|(id, d)| WrapDoc {
                id: id.0.clone(),
                labels: d.labels.iter().map(Label::to_string).collect(),
                members: d.members.iter().map(|n| n.0).collect(),
                types: d.types.iter().cloned().collect(),
            })
            .collect(),
    }
}

/// Deterministic pretty JSON.
pub fn to_json(m: &Model) -> String {
    serde_json::to_string_pretty(&to_doc(m)).expect("model documents always serialize")
}

fn label(field: String, s: &str) -> Result<Label, JsonError> {
    s.parse().map_err(|e: crate::model::LabelParseError| JsonError::Field { field, msg: e.to_string() })
}

pub fn from_json(text: &str) -> Result<Model, JsonError> {
    if text.trim().is_empty() {
        return Err(JsonError::Empty);
    }
    let doc: Doc = serde_json::from_str(text).map_err(|e| JsonError::Schema {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let mut b = ModelBuilder::new();
    for (i, n) in doc.nodes.iter().enumerate() {
        let id = b.add_node_with_id(NodeId(n.id))?;
        for l in &n.labels {
            b.add_label(&Entity::Node(id), label(format!("nodes[{i}].labels"), l)?)?;
        }
        for t in &n.types {
            b.add_type(&Entity::Node(id), t.clone())?;
        }
    }
    for (i, w) in doc.wrappings.iter().enumerate() {
        let id = b.add_wrapping_with_id(WrapId(w.id.clone()))?;
        let e = Entity::Wrap(id.clone());
        for l in &w.labels {
            b.add_label(&e, label(format!("wrappings[{i}].labels"), l)?)?;
        }
        for t in &w.types {
            b.add_type(&e, t.clone())?;
        }
        for m in &w.members {
            b.add_member(&id, NodeId(*m))?;
        }
    }
    for a in doc.attrs {
        b.set_attr(NodeId(a.from), a.attr, a.to.into())?;
    }
    for r in doc.rels {
        if r.args.len() < 2 {
            return Err(JsonError::Field {
                field: format!("rels.{}", r.name),
                msg: "relations need at least two arguments".into(),
            });
        }
        b.add_rel(r.name, r.args.into_iter().map(Entity::from).collect());
    }
    Ok(b.build()?)
}
