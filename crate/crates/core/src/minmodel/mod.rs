//! Canonical minimal model sets.

mod build;
mod factset;
mod present;
mod saturate;

use thiserror::Error;

pub use build::{model_from_atoms, model_from_factset};
pub use factset::{deduce, FactSet, SaturationBudget};
pub use present::{access_terms, is_synthetic, model_atoms, SYNTHETIC_PREFIX};
pub use saturate::{antichain_reduce, c0_bound, c0_bound_formula, saturate, saturate_ordered};

use crate::avl::{to_cnf, Clause, Formula};
use crate::json::to_json;
use crate::model::{Model, ModelError};
use crate::morphism::{is_isomorphic, subsumes};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinModelError {
    #[error("no labelled content: the formula does not force any node to exist")]
    NoLabelledContent,
    /// Wrappings are named but nothing is forced into them.
    #[error("no content forced into wrapping {}", .0.join(", "))]
    EmptyWrapping(Vec<String>),
    #[error("contradictory fact-set: {0}")]
    Contradictory(String),
    #[error("inconsistent fact-set: {0}")]
    Inconsistent(String),
    #[error("built model is invalid: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Removes strictly subsumed-from-below models and isomorphic duplicates,
/// then sorts by canonical JSON.
pub fn model_antichain(models: Vec<Model>) -> Vec<Model> {
    let n = models.len();
    let keep: Vec<bool> = (0..n)
        .map(|i| {
            !(0..n).any(|j| j != i && subsumes(&models[j], &models[i]) && !subsumes(&models[i], &models[j]))
        })
        .collect();
    let mut out: Vec<Model> = Vec::new();
    for (m, k) in models.into_iter().zip(keep) {
        if k && !out.iter().any(|o| is_isomorphic(o, &m)) {
            out.push(m);
        }
    }
    out.sort_by_cached_key(to_json);
    out
}

fn models_of(factsets: Vec<FactSet>) -> Result<Vec<Model>, MinModelError> {
    let reduced = antichain_reduce(factsets);
    let models = reduced.iter().map(model_from_factset).collect::<Result<Vec<_>, _>>()?;
    Ok(model_antichain(models))
}

pub fn minimal_model_set(f: &Formula) -> Result<Vec<Model>, MinModelError> {
    models_of(saturate(&to_cnf(f)))
}

/// The pipeline with an explicit clause order.
pub fn minimal_model_set_ordered(clauses: &[Clause], budget: &SaturationBudget) -> Result<Vec<Model>, MinModelError> {
    models_of(saturate_ordered(clauses, budget))
}
