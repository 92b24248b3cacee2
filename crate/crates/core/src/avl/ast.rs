use std::collections::BTreeSet;
use std::fmt;

use crate::model::Label;

/// `k·p`: a label followed by an attribute path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub label: Label,
    pub path: Vec<String>,
}

impl Term {
    pub fn new(label: Label, path: Vec<String>) -> Self {
        Term { label, path }
    }
    pub fn at(label: Label) -> Self {
        Term { label, path: Vec::new() }
    }
    pub fn extend(&self, attr: &str) -> Term {
        let mut path = self.path.clone();
        path.push(attr.to_string());
        Term { label: self.label.clone(), path }
    }
    pub fn prefixes(&self) -> impl Iterator<Item = Term> + '_ {
        (0..=self.path.len()).map(|i| Term::new(self.label.clone(), self.path[..i].to_vec()))
    }
    /// Ordering used to pick canonical access terms: shorter first.
    pub fn canon_key(&self) -> (usize, &Label, &[String]) {
        (self.path.len(), &self.label, &self.path)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        for a in &self.path {
            write!(f, ".{a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Desc {
    Attr(String, Box<Desc>),
    Type(String),
    Label(Label),
    And(Box<Desc>, Box<Desc>),
    Or(Box<Desc>, Box<Desc>),
    Top,
}

impl Desc {
    pub fn attr(a: impl Into<String>, d: Desc) -> Desc {
        Desc::Attr(a.into(), Box::new(d))
    }
    pub fn ty(t: impl Into<String>) -> Desc {
        Desc::Type(t.into())
    }
    pub fn and(a: Desc, b: Desc) -> Desc {
        Desc::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Desc, b: Desc) -> Desc {
        Desc::Or(Box::new(a), Box::new(b))
    }
    /// Left-nested conjunction; `Top` when empty.
    pub fn all(ds: impl IntoIterator<Item = Desc>) -> Desc {
        let mut it = ds.into_iter();
        match it.next() {
            None => Desc::Top,
            Some(first) => it.fold(first, Desc::and),
        }
    }
    pub fn is_compound(&self) -> bool {
        matches!(self, Desc::And(..) | Desc::Or(..))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    At(Label, Desc),
    PathEq(Term, Term),
    Rel(String, Vec<Term>),
    Wrap(Label, Label, Desc),
    And(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Top,
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }
    pub fn all(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::Top,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Top-level conjuncts, left to right.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(a, b) => {
                let mut v = a.conjuncts();
                v.extend(b.conjuncts());
                v
            }
            f => vec![f],
        }
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        collect_formula_labels(self, &mut out);
        out
    }

    pub fn has_negation(&self) -> bool {
        match self {
            Formula::Not(_) => true,
            Formula::And(a, b) => a.has_negation() || b.has_negation(),
            _ => false,
        }
    }
}

fn collect_desc_labels(d: &Desc, out: &mut BTreeSet<Label>) {
    match d {
        Desc::Attr(_, d) => collect_desc_labels(d, out),
        Desc::Label(l) => {
            out.insert(l.clone());
        }
        Desc::And(a, b) | Desc::Or(a, b) => {
            collect_desc_labels(a, out);
            collect_desc_labels(b, out);
        }
        Desc::Type(_) | Desc::Top => {}
    }
}

fn collect_formula_labels(f: &Formula, out: &mut BTreeSet<Label>) {
    match f {
        Formula::At(k, d) => {
            out.insert(k.clone());
            collect_desc_labels(d, out);
        }
        Formula::PathEq(a, b) => {
            out.insert(a.label.clone());
            out.insert(b.label.clone());
        }
        Formula::Rel(_, args) => out.extend(args.iter().map(|t| t.label.clone())),
        Formula::Wrap(t, x, d) => {
            out.insert(t.clone());
            out.insert(x.clone());
            collect_desc_labels(d, out);
        }
        Formula::And(a, b) => {
            collect_formula_labels(a, out);
            collect_formula_labels(b, out);
        }
        Formula::Not(a) => collect_formula_labels(a, out),
        Formula::Top => {}
    }
}

/// Flat atoms. Build equalities with [`Atom::eq`] so they stay normalized.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    PathTop(Term),
    PathType(Term, String),
    PathEq(Term, Term),
    Rel(String, Vec<Term>),
    InWr(Label),
    In(Label, Label),
    Wr(Label),
}

impl Atom {
    /// Ordered equality; `t == t` degenerates to `t:TOP`.
    pub fn eq(a: Term, b: Term) -> Atom {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Less => Atom::PathEq(a, b),
            Greater => Atom::PathEq(b, a),
            Equal => Atom::PathTop(a),
        }
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::PathTop(t) | Atom::PathType(t, _) => vec![t],
            Atom::PathEq(a, b) => vec![a, b],
            Atom::Rel(_, args) => args.iter().collect(),
            _ => Vec::new(),
        }
    }

    pub fn labels(&self) -> Vec<&Label> {
        match self {
            Atom::InWr(k) | Atom::Wr(k) => vec![k],
            Atom::In(k, t) => vec![k, t],
            _ => self.terms().into_iter().map(|t| &t.label).collect(),
        }
    }

    /// Number of attribute symbol occurrences.
    pub fn attr_count(&self) -> usize {
        self.terms().iter().map(|t| t.path.len()).sum()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::PathTop(t) => write!(f, "{t}:TOP"),
            Atom::PathType(t, ty) => write!(f, "{t}:{ty}"),
            Atom::PathEq(a, b) => write!(f, "{a} == {b}"),
            Atom::Rel(r, args) => {
                write!(f, "{r}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Atom::InWr(k) => write!(f, "INWR({k})"),
            Atom::In(k, t) => write!(f, "IN({k}, {t})"),
            Atom::Wr(k) => write!(f, "WR({k})"),
        }
    }
}

/// `neg ⇒ pos`: the conjunction of `neg` implies the disjunction of `pos`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    pub neg: BTreeSet<Atom>,
    pub pos: BTreeSet<Atom>,
}

impl Clause {
    pub fn unit(a: Atom) -> Clause {
        Clause { neg: BTreeSet::new(), pos: [a].into() }
    }
    pub fn integrity(a: Atom) -> Clause {
        Clause { neg: [a].into(), pos: BTreeSet::new() }
    }
    pub fn is_horn(&self) -> bool {
        self.pos.len() <= 1
    }
    pub fn is_tautology(&self) -> bool {
        self.neg.iter().any(|a| self.pos.contains(a))
    }
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> + '_ {
        self.neg.iter().chain(&self.pos)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &BTreeSet<Atom>| s.iter().map(Atom::to_string).collect::<Vec<_>>().join(", ");
        write!(f, "{{{}}} => {{{}}}", side(&self.neg), side(&self.pos))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cnf {
    pub clauses: BTreeSet<Clause>,
}

impl Cnf {
    pub fn len(&self) -> usize {
        self.clauses.len()
    }
    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> + '_ {
        self.clauses.iter().flat_map(Clause::atoms)
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
