//! Output formats, looked up by name.

use anyhow::{bail, Result};
use wrapframe::fol::{to_smtlib, Fol};
use wrapframe::{dot, json, Model};

/// What a command hands to an emitter. Fields a command cannot supply stay empty.
#[derive(Default)]
pub struct Artifact<'a> {
    pub model: Option<&'a Model>,
    pub formulas: Vec<Fol>,
    pub gqt: Option<String>,
}

pub trait Emitter {
    fn name(&self) -> &'static str;
    fn emit(&self, a: &Artifact) -> Result<String>;
}

fn need_model<'a>(a: &Artifact<'a>, fmt: &str) -> Result<&'a Model> {
    match a.model {
        Some(m) => Ok(m),
        None => bail!("this command has no model to emit as {fmt}"),
    }
}

fn need_formulas(a: &Artifact, fmt: &str) -> Result<()> {
    if a.formulas.is_empty() {
        bail!("this command has no formula to emit as {fmt}");
    }
    Ok(())
}

struct Json;
struct Dot;
struct FolText;
struct Smt;
struct Gqt;

impl Emitter for Json {
    fn name(&self) -> &'static str {
        "json"
    }
    fn emit(&self, a: &Artifact) -> Result<String> {
        Ok(json::to_json(need_model(a, "json")?))
    }
}

impl Emitter for Dot {
    fn name(&self) -> &'static str {
        "dot"
    }
    fn emit(&self, a: &Artifact) -> Result<String> {
        Ok(dot::to_dot(need_model(a, "dot")?))
    }
}

impl Emitter for FolText {
    fn name(&self) -> &'static str {
        "fol"
    }
    fn emit(&self, a: &Artifact) -> Result<String> {
        need_formulas(a, "fol")?;
        Ok(a.formulas.iter().map(|f| format!("{f}\n")).collect())
    }
}

impl Emitter for Smt {
    fn name(&self) -> &'static str {
        "smt"
    }
    fn emit(&self, a: &Artifact) -> Result<String> {
        need_formulas(a, "smt")?;
        Ok(to_smtlib(&a.formulas))
    }
}

impl Emitter for Gqt {
    fn name(&self) -> &'static str {
        "gqt"
    }
    fn emit(&self, a: &Artifact) -> Result<String> {
        match &a.gqt {
            Some(s) => Ok(format!("{s}\n")),
            None => bail!("this command has no transcription to emit as gqt"),
        }
    }
}

pub struct Registry {
    emitters: Vec<Box<dyn Emitter>>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry { emitters: Vec::new() };
        r.register(Box::new(Json));
        r.register(Box::new(Dot));
        r.register(Box::new(FolText));
        r.register(Box::new(Smt));
        r.register(Box::new(Gqt));
        r
    }
}

impl Registry {
    pub fn register(&mut self, e: Box<dyn Emitter>) {
        self.emitters.push(e);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.emitters.iter().map(|e| e.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Emitter> {
        match self.emitters.iter().find(|e| e.name() == name) {
            Some(e) => Ok(e.as_ref()),
            None => bail!("unknown output format {name:?}; expected one of {}", self.names().join(", ")),
        }
    }
}
