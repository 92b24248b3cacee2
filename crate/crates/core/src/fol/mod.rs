//! First-order translation, finite structures and evaluation.

mod alpha;
mod axioms;
mod eval;
mod translate;

use std::collections::BTreeSet;
use std::fmt;

pub use alpha::alpha_equivalent;
pub use axioms::theory_axioms;
pub use eval::{fol_eval, translate_model, FolError, Structure};
pub use translate::{translate_description, translate_formula, Fresh};

use crate::model::Label;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pred {
    Type(String),
    Attr(String),
    Rel(String),
    Label(Label),
    Wr,
    In,
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::Type(t) => write!(f, "{t}"),
            Pred::Attr(a) => write!(f, "{a}"),
            Pred::Rel(r) => write!(f, "{r}"),
            Pred::Label(l) => write!(f, "{l}"),
            Pred::Wr => write!(f, "WR"),
            Pred::In => write!(f, "IN"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fol {
    True,
    False,
    Atom(Pred, Vec<String>),
    Eq(String, String),
    Not(Box<Fol>),
    And(Vec<Fol>),
    Or(Vec<Fol>),
    Implies(Box<Fol>, Box<Fol>),
    Exists(Vec<String>, Box<Fol>),
    Forall(Vec<String>, Box<Fol>),
}

impl Fol {
    pub fn atom(p: Pred, args: &[&str]) -> Fol {
        Fol::Atom(p, args.iter().map(|s| s.to_string()).collect())
    }
    pub fn eq(a: impl Into<String>, b: impl Into<String>) -> Fol {
        Fol::Eq(a.into(), b.into())
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Fol) -> Fol {
        Fol::Not(Box::new(f))
    }
    pub fn implies(a: Fol, b: Fol) -> Fol {
        Fol::Implies(Box::new(a), Box::new(b))
    }
    pub fn exists(vars: Vec<String>, body: Fol) -> Fol {
        if vars.is_empty() {
            body
        } else {
            Fol::Exists(vars, Box::new(body))
        }
    }
    pub fn forall(vars: Vec<String>, body: Fol) -> Fol {
        if vars.is_empty() {
            body
        } else {
            Fol::Forall(vars, Box::new(body))
        }
    }
    /// Conjunction dropping `True` parts; a single part stays bare.
    pub fn and(parts: Vec<Fol>) -> Fol {
        let mut v: Vec<Fol> = parts.into_iter().filter(|p| *p != Fol::True).collect();
        match v.len() {
            0 => Fol::True,
            1 => v.pop().expect("one part"),
            _ => Fol::And(v),
        }
    }
    pub fn or(parts: Vec<Fol>) -> Fol {
        let mut v: Vec<Fol> = parts.into_iter().filter(|p| *p != Fol::False).collect();
        match v.len() {
            0 => Fol::False,
            1 => v.pop().expect("one part"),
            _ => Fol::Or(v),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Fol::True | Fol::False => {}
            Fol::Atom(_, args) => {
                for a in args {
                    if !bound.contains(a) {
                        out.insert(a.clone());
                    }
                }
            }
            Fol::Eq(a, b) => {
                for a in [a, b] {
                    if !bound.contains(a) {
                        out.insert(a.clone());
                    }
                }
            }
            Fol::Not(a) => a.collect_free(bound, out),
            Fol::And(v) | Fol::Or(v) => v.iter().for_each(|f| f.collect_free(bound, out)),
            Fol::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Fol::Exists(vs, body) | Fol::Forall(vs, body) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                body.collect_free(bound, out);
                bound.truncate(n);
            }
        }
    }

    /// S-expression form.
    pub fn to_prefix(&self) -> String {
        match self {
            Fol::True => "true".into(),
            Fol::False => "false".into(),
            Fol::Atom(p, args) => format!("({p} {})", args.join(" ")),
            Fol::Eq(a, b) => format!("(= {a} {b})"),
            Fol::Not(a) => format!("(not {})", a.to_prefix()),
            Fol::And(v) => format!("(and {})", v.iter().map(Fol::to_prefix).collect::<Vec<_>>().join(" ")),
            Fol::Or(v) => format!("(or {})", v.iter().map(Fol::to_prefix).collect::<Vec<_>>().join(" ")),
            Fol::Implies(a, b) => format!("(=> {} {})", a.to_prefix(), b.to_prefix()),
            Fol::Exists(vs, b) => format!("(exists ({}) {})", vs.join(" "), b.to_prefix()),
            Fol::Forall(vs, b) => format!("(forall ({}) {})", vs.join(" "), b.to_prefix()),
        }
    }
}

fn write_inner(f: &mut fmt::Formatter<'_>, g: &Fol) -> fmt::Result {
    match g {
        Fol::And(_) | Fol::Or(_) | Fol::Implies(..) | Fol::Exists(..) | Fol::Forall(..) => write!(f, "({g})"),
        _ => write!(f, "{g}"),
    }
}

impl fmt::Display for Fol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fol::True => write!(f, "true"),
            Fol::False => write!(f, "false"),
            Fol::Atom(p, args) => write!(f, "{p}({})", args.join(", ")),
            Fol::Eq(a, b) => write!(f, "{a} = {b}"),
            Fol::Not(a) => {
                write!(f, "~")?;
                write_inner(f, a)
            }
            Fol::And(v) | Fol::Or(v) => {
                let op = if matches!(self, Fol::And(_)) { " & " } else { " | " };
                for (i, g) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    write_inner(f, g)?;
                }
                Ok(())
            }
            Fol::Implies(a, b) => {
                write_inner(f, a)?;
                write!(f, " -> ")?;
                write_inner(f, b)
            }
            Fol::Exists(vs, b) => {
                write!(f, "exists {}. ", vs.join(", "))?;
                write_inner(f, b)
            }
            Fol::Forall(vs, b) => {
                write!(f, "forall {}. ", vs.join(", "))?;
                write_inner(f, b)
            }
        }
    }
}

fn smt_symbol(p: &Pred) -> String {
    let clean = |s: &str| s.chars().map(|c| if c.is_alphanumeric() { c } else { '_' }).collect::<String>();
    match p {
        Pred::Type(t) => format!("type_{}", clean(t)),
        Pred::Attr(a) => format!("attr_{}", clean(a)),
        Pred::Rel(r) => format!("rel_{}", clean(r)),
        Pred::Label(l) => {
            let sort = match l.sort {
                crate::model::LabelSort::Base => "base",
                crate::model::LabelSort::NodeVar => "nvar",
                crate::model::LabelSort::WrapVar => "wvar",
            };
            format!("label_{sort}_{}", clean(&l.name))
        }
        Pred::Wr => "WR".into(),
        Pred::In => "IN".into(),
    }
}

fn smt_term(g: &Fol, preds: &mut std::collections::BTreeMap<String, usize>) -> String {
    let vars = |vs: &[String]| vs.iter().map(|v| format!("({v} E)")).collect::<Vec<_>>().join(" ");
    match g {
        Fol::True => "true".into(),
        Fol::False => "false".into(),
        Fol::Atom(p, args) => {
            let s = smt_symbol(p);
            preds.insert(s.clone(), args.len());
            format!("({s} {})", args.join(" "))
        }
        Fol::Eq(a, b) => format!("(= {a} {b})"),
        Fol::Not(a) => format!("(not {})", smt_term(a, preds)),
        Fol::And(v) => format!("(and {})", v.iter().map(|x| smt_term(x, preds)).collect::<Vec<_>>().join(" ")),
        Fol::Or(v) => format!("(or {})", v.iter().map(|x| smt_term(x, preds)).collect::<Vec<_>>().join(" ")),
        Fol::Implies(a, b) => format!("(=> {} {})", smt_term(a, preds), smt_term(b, preds)),
        Fol::Exists(vs, b) => format!("(exists ({}) {})", vars(vs), smt_term(b, preds)),
        Fol::Forall(vs, b) => format!("(forall ({}) {})", vars(vs), smt_term(b, preds)),
    }
}

/// SMT-LIB script asserting every formula over one uninterpreted sort.
pub fn to_smtlib(formulas: &[Fol]) -> String {
    let mut preds = std::collections::BTreeMap::new();
    let bodies: Vec<String> = formulas.iter().map(|g| smt_term(g, &mut preds)).collect();
    let mut out = String::from("(set-logic UF)\n(declare-sort E 0)\n");
    for (p, arity) in &preds {
        out.push_str(&format!("(declare-fun {p} ({}) Bool)\n", vec!["E"; *arity].join(" ")));
    }
    for b in bodies {
        out.push_str(&format!("(assert {b})\n"));
    }
    out.push_str("(check-sat)\n");
    out
}
