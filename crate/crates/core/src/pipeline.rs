//! Lexicon entries, derivation specs and the end-to-end pipeline.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::avl::{parse, parse_atom, satisfies_clause, to_cnf, Atom, Clause, ParseError};
use crate::json::{from_json, JsonError};
use crate::minmodel::{antichain_reduce, model_antichain, model_from_factset, saturate, FactSet, MinModelError};
use crate::model::{Label, Model};
use crate::morphism::unify_factsets;
use crate::scope::{
    apply_constraints, check_instance, solve, transcribe_with, ConstraintSet, DeterminerRegistry, QuantifiedComplex,
    Reading, Rule, Transcription,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("derivation spec: {0}")]
    Spec(#[from] toml::de::Error),
    #[error("entry {entry}: {source}")]
    Parse { entry: String, source: ParseError },
    #[error("entry {0} has no minimal model")]
    Unsatisfiable(String),
    #[error("entry {0} needs exactly one of `file` or `formula`")]
    EntrySource(String),
    #[error("entries {0} and {1} share label {2}")]
    SharedLabel(String, String, Label),
    #[error("equation {text:?}: {source}")]
    Equation { text: String, source: ParseError },
    #[error("equation {0} is not a path equality")]
    NotAnEquation(String),
    #[error("equation {0} mentions label {1}, which no entry introduces")]
    UnknownLabel(String, Label),
    #[error("unknown constraint preset {0:?}")]
    Preset(String),
    #[error("bad top label {0:?}")]
    Top(String),
    #[error("instance: {0}")]
    Instance(#[from] JsonError),
}

/// A named formula with its canonical fact-sets. Entries are combined at
/// fact-set level because a lexical entry may mention a wrapping whose
/// content only arrives through unification.
#[derive(Debug, Clone)]
pub struct LexiconEntry {
    pub name: String,
    pub source: String,
    pub factsets: Vec<FactSet>,
    /// Purely negative clauses, such as base labels staying unwrapped.
    /// Fact-sets drop them, so they are rechecked after unification.
    pub integrity: Vec<Clause>,
}

impl LexiconEntry {
    pub fn from_source(name: &str, source: &str) -> Result<Self, PipelineError> {
        let f = parse(source).map_err(|e| PipelineError::Parse { entry: name.into(), source: e })?;
        let cnf = to_cnf(&f);
        let factsets = antichain_reduce(saturate(&cnf));
        if factsets.is_empty() {
            return Err(PipelineError::Unsatisfiable(name.into()));
        }
        let integrity = cnf.clauses.into_iter().filter(|c| c.pos.is_empty()).collect();
        Ok(LexiconEntry { name: name.into(), source: source.into(), factsets, integrity })
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        self.factsets.iter().flat_map(|u| u.labels()).collect()
    }

    /// The entry's own minimal models, when they are valid on their own.
    pub fn models(&self) -> Result<Vec<Model>, MinModelError> {
        let ms = self.factsets.iter().map(model_from_factset).collect::<Result<Vec<_>, _>>()?;
        Ok(model_antichain(ms))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub name: String,
    pub file: Option<PathBuf>,
    pub formula: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    pub preset: Option<String>,
    #[serde(default)]
    pub subtypes: Vec<(String, String)>,
    #[serde(default)]
    pub only_hole_wrappings: bool,
    #[serde(default)]
    pub scope_transitivity: bool,
}

impl ConstraintSpec {
    pub fn build(&self) -> Result<ConstraintSet, PipelineError> {
        let mut cs = match self.preset.as_deref() {
            None | Some("quantifier") => ConstraintSet::quantifier_default(),
            Some("none") => ConstraintSet::new(),
            Some(other) => return Err(PipelineError::Preset(other.into())),
        };
        for (sub, sup) in &self.subtypes {
            cs = cs.with_subtype(sub, sup);
        }
        if self.only_hole_wrappings {
            cs = cs.with_rule(Rule::OnlyHoleWrappings);
        }
        if self.scope_transitivity {
            cs = cs.with_rule(Rule::ScopeTransitivity);
        }
        Ok(cs)
    }
}

/// The TOML derivation spec. Paths are relative to the spec file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationSpec {
    #[serde(rename = "entry")]
    pub entries: Vec<EntrySpec>,
    #[serde(default)]
    pub equations: Vec<String>,
    pub top: Option<String>,
    pub instance: Option<PathBuf>,
    #[serde(default)]
    pub constraints: ConstraintSpec,
}

impl DerivationSpec {
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        Ok(toml::from_str(text)?)
    }
}

fn read(path: &Path) -> Result<String, PipelineError> {
    std::fs::read_to_string(path).map_err(|e| PipelineError::Io { path: path.to_path_buf(), source: e })
}

/// A loaded, checked derivation.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub entries: Vec<LexiconEntry>,
    pub equations: Vec<Atom>,
    pub top: Option<Label>,
    pub constraints: ConstraintSet,
    pub instance: Option<Model>,
}

impl Pipeline {
    pub fn load(spec_path: &Path) -> Result<Self, PipelineError> {
        let spec = DerivationSpec::from_toml(&read(spec_path)?)?;
        Self::from_spec(&spec, spec_path.parent().unwrap_or(Path::new(".")))
    }

    pub fn from_spec(spec: &DerivationSpec, base: &Path) -> Result<Self, PipelineError> {
        let mut entries = Vec::new();
        for e in &spec.entries {
            let src = match (&e.file, &e.formula) {
                (Some(f), None) => read(&base.join(f))?,
                (None, Some(src)) => src.clone(),
                _ => return Err(PipelineError::EntrySource(e.name.clone())),
            };
            entries.push(LexiconEntry::from_source(&e.name, &src)?);
        }
        let instance = match &spec.instance {
            Some(p) => Some(from_json(&read(&base.join(p))?)?),
            None => None,
        };
        let top = match &spec.top {
            Some(t) => Some(t.parse::<Label>().map_err(|_| PipelineError::Top(t.clone()))?),
            None => None,
        };
        let mut equations = Vec::new();
        for text in &spec.equations {
            let a = parse_atom(text).map_err(|e| PipelineError::Equation { text: text.clone(), source: e })?;
            equations.push(a);
        }
        Self::new(entries, equations, top, spec.constraints.build()?, instance)
    }

    pub fn new(
        entries: Vec<LexiconEntry>,
        equations: Vec<Atom>,
        top: Option<Label>,
        constraints: ConstraintSet,
        instance: Option<Model>,
    ) -> Result<Self, PipelineError> {
        let mut owner: BTreeMap<Label, String> = BTreeMap::new();
        for e in &entries {
            for l in e.labels() {
                if let Some(prev) = owner.insert(l.clone(), e.name.clone()) {
                    return Err(PipelineError::SharedLabel(prev, e.name.clone(), l));
                }
            }
        }
        for a in &equations {
            if !matches!(a, Atom::PathEq(..) | Atom::PathTop(..)) {
                return Err(PipelineError::NotAnEquation(a.to_string()));
            }
            for l in a.labels() {
                if !owner.contains_key(l) {
                    return Err(PipelineError::UnknownLabel(a.to_string(), l.clone()));
                }
            }
        }
        Ok(Pipeline { entries, equations, top, constraints, instance })
    }

    /// Indices into each entry's fact-set list, in lexicographic order.
    pub fn combinations(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for e in &self.entries {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..e.factsets.len()).map(move |i| {
                        let mut p = prefix.clone();
                        p.push(i);
                        p
                    })
                })
                .collect();
        }
        out
    }

    pub fn run(&self) -> PipelineReport {
        self.run_with(&DeterminerRegistry::default())
    }

    pub fn run_with(&self, dets: &DeterminerRegistry) -> PipelineReport {
        let combinations = self
            .combinations()
            .into_iter()
            .map(|index| {
                let outcome = self.run_one(&index, dets);
                CombinationReport { index, outcome }
            })
            .collect();
        PipelineReport { combinations }
    }

    fn run_one(&self, index: &[usize], dets: &DeterminerRegistry) -> Outcome {
        let sets: Vec<&FactSet> = self.entries.iter().zip(index).map(|(e, i)| &e.factsets[*i]).collect();
        let pruned = |stage: Stage, reason: String| Outcome::Pruned { stage, reason };
        let unified = match unify_factsets(&sets, &self.equations) {
            Ok(m) => m,
            Err(e) => return pruned(Stage::Unification, e.to_string()),
        };
        for e in &self.entries {
            if let Some(c) = e.integrity.iter().find(|c| !satisfies_clause(&unified, c)) {
                return pruned(Stage::Unification, format!("entry {} forbids {c}", e.name));
            }
        }
        let Some(constrained) = apply_constraints(&unified, &self.constraints) else {
            return pruned(Stage::Constraints, "an incompatibility constraint fired".into());
        };
        let complex = match &self.top {
            Some(t) => QuantifiedComplex::with_top(constrained.clone(), t),
            None => QuantifiedComplex::new(constrained.clone()),
        };
        let complex = match complex {
            Ok(c) => c,
            Err(e) => return pruned(Stage::Complex, e.to_string()),
        };
        let readings = match solve(&complex) {
            Ok(rs) if rs.is_empty() => return pruned(Stage::Solving, "no free fragment at some step".into()),
            Ok(rs) => rs,
            Err(e) => return pruned(Stage::Solving, e.to_string()),
        };
        let readings = readings
            .into_iter()
            .map(|reading| {
                let transcription = transcribe_with(&reading, dets).map_err(|e| e.to_string());
                let verdict = match (&transcription, &self.instance) {
                    (Ok(t), Some(inst)) => Some(check_instance(&t.formula, inst).map_err(|e| e.to_string())),
                    _ => None,
                };
                ReadingReport { reading, transcription, verdict }
            })
            .collect();
        Outcome::Solved { complex: constrained, readings }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Unification,
    Constraints,
    Complex,
    Solving,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Unification => "unification",
            Stage::Constraints => "constraints",
            Stage::Complex => "complex",
            Stage::Solving => "solving",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct ReadingReport {
    pub reading: Reading,
    pub transcription: Result<Transcription, String>,
    pub verdict: Option<Result<bool, String>>,
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Pruned { stage: Stage, reason: String },
    Solved { complex: Model, readings: Vec<ReadingReport> },
}

#[derive(Debug, Clone)]
pub struct CombinationReport {
    pub index: Vec<usize>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub combinations: Vec<CombinationReport>,
}

impl PipelineReport {
    pub fn readings(&self) -> impl Iterator<Item = &ReadingReport> {
        self.combinations.iter().flat_map(|c| match &c.outcome {
            Outcome::Solved { readings, .. } => readings.as_slice(),
            Outcome::Pruned { .. } => &[],
        })
    }
}
