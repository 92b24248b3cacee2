//! Feature structures with wrappings.
//!
//! Models, extended attribute-value logic, minimal model sets, unification,
//! first-order translation and quantifier-scope solving.

pub mod avl;
pub mod dot;
pub mod fol;
pub mod json;
pub mod minmodel;
pub mod model;
pub mod morphism;
pub mod pipeline;
pub mod scope;

pub use model::{validate, w_set_of, Entity, Label, LabelSort, Model, ModelBuilder, NodeId, Signature, Violation, WSetRef, WrapId};
