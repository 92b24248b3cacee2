//! Concrete `.avl` syntax.

use std::collections::BTreeMap;

use thiserror::Error;

use super::ast::{Atom, Desc, Formula, Term};
use crate::model::{Label, LabelSort, Signature};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Label(Label),
    Ident(String),
    Dot,
    Colon,
    Amp,
    Bar,
    Bang,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    EqEq,
    Hash,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Label(l) => format!("label {l}"),
            Tok::Ident(s) => format!("{s:?}"),
            Tok::Dot => "'.'".into(),
            Tok::Colon => "':'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Bar => "'|'".into(),
            Tok::Bang => "'!'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrack => "'['".into(),
            Tok::RBrack => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::EqEq => "'=='".into(),
            Tok::Hash => "'#'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line_no = li + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let err = |msg: String| ParseError { line: line_no, column, msg };
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '/' && chars.get(i + 1) == Some(&'/') {
                break;
            }
            let simple = match c {
                '.' => Some(Tok::Dot),
                ':' => Some(Tok::Colon),
                '&' => Some(Tok::Amp),
                '|' => Some(Tok::Bar),
                '!' => Some(Tok::Bang),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '[' => Some(Tok::LBrack),
                ']' => Some(Tok::RBrack),
                ',' => Some(Tok::Comma),
                '#' => Some(Tok::Hash),
                _ => None,
            };
            if let Some(tok) = simple {
                out.push(Spanned { tok, line: line_no, column });
                i += 1;
                continue;
            }
            if c == '=' {
                if chars.get(i + 1) == Some(&'=') {
                    out.push(Spanned { tok: Tok::EqEq, line: line_no, column });
                    i += 2;
                    continue;
                }
                return Err(err("expected '=='".into()));
            }
            if let Some(sort) = LabelSort::from_sigil(c) {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                if j == start {
                    return Err(err(format!("label sigil {c:?} must be followed by a name")));
                }
                let name: String = chars[start..j].iter().collect();
                out.push(Spanned { tok: Tok::Label(Label::new(sort, name)), line: line_no, column });
                i = j;
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                out.push(Spanned { tok: Tok::Ident(chars[i..j].iter().collect()), line: line_no, column });
                i = j;
                continue;
            }
            return Err(err(format!("unexpected character {c:?}")));
        }
    }
    let (line, column) = out.last().map(|s| (s.line, s.column + 1)).unwrap_or((1, 1));
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

/// Vocabulary declared in a preamble; `None` means "not declared, accept anything".
#[derive(Debug, Clone, Default)]
struct Declared {
    types: Option<Vec<String>>,
    attrs: Option<Vec<String>>,
    rels: Option<BTreeMap<String, usize>>,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    declared: Declared,
    arities: BTreeMap<String, usize>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }
    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }
    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }
    fn error_at(&self, pos: usize, msg: impl Into<String>) -> ParseError {
        let s = &self.toks[pos.min(self.toks.len() - 1)];
        ParseError { line: s.line, column: s.column, msg: msg.into() }
    }
    fn error(&self, msg: impl Into<String>) -> ParseError {
        self.error_at(self.pos, msg)
    }
    fn expect(&mut self, t: Tok) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", t.describe(), self.peek().describe())))
        }
    }
    fn expect_label(&mut self) -> PResult<Label> {
        match self.peek().clone() {
            Tok::Label(l) => {
                self.bump();
                Ok(l)
            }
            t => Err(self.error(format!("expected a label, found {}", t.describe()))),
        }
    }

    fn check_type(&self, pos: usize, t: &str) -> PResult<()> {
        match &self.declared.types {
            Some(ts) if !ts.iter().any(|x| x == t) => Err(self.error_at(pos, format!("unknown type {t:?}"))),
            _ => Ok(()),
        }
    }
    fn check_attr(&self, pos: usize, a: &str) -> PResult<()> {
        match &self.declared.attrs {
            Some(ts) if !ts.iter().any(|x| x == a) => {
                Err(self.error_at(pos, format!("unknown attribute {a:?}")))
            }
            _ => Ok(()),
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut f = self.term()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let g = self.term()?;
            f = Formula::and(f, g);
        }
        Ok(f)
    }

    fn term(&mut self) -> PResult<Formula> {
        let start = self.pos;
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.term()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) if s == "TOP" => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Err(self.error_at(
                        start,
                        format!("expected a label, '!', '(' or TOP at the start of a conjunct; {name:?} is not followed by '('"),
                    ));
                }
                self.bump();
                let mut args = vec![self.path_term()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.path_term()?);
                }
                self.expect(Tok::RParen)?;
                self.check_rel(start, &name, args.len())?;
                Ok(Formula::Rel(name, args))
            }
            Tok::Label(l) => {
                if l.sort == LabelSort::WrapVar && *self.peek_at(1) == Tok::Colon {
                    return self.wrap();
                }
                if let Some(f) = self.try_path_eq()? {
                    return Ok(f);
                }
                self.pos = start;
                self.bump();
                self.expect(Tok::Dot)?;
                let d = self.unary()?;
                Ok(Formula::At(l, d))
            }
            t => Err(self.error(format!("unexpected {}", t.describe()))),
        }
    }

    fn check_rel(&mut self, pos: usize, name: &str, arity: usize) -> PResult<()> {
        if arity < 2 {
            return Err(self.error_at(pos, format!("relation {name} needs at least two arguments")));
        }
        if let Some(rels) = &self.declared.rels {
            match rels.get(name) {
                None => return Err(self.error_at(pos, format!("unknown relation {name:?}"))),
                Some(&a) if a != arity => {
                    return Err(self.error_at(
                        pos,
                        format!("relation {name} is declared with arity {a} but used with {arity} arguments"),
                    ))
                }
                _ => {}
            }
        }
        match self.arities.get(name) {
            Some(&a) if a != arity => Err(self.error_at(
                pos,
                format!("relation {name} used with arity {arity} after arity {a}"),
            )),
            _ => {
                self.arities.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    fn path_term(&mut self) -> PResult<Term> {
        let label = self.expect_label()?;
        let mut path = Vec::new();
        while *self.peek() == Tok::Dot {
            if let Tok::Ident(a) = self.peek_at(1).clone() {
                let p = self.pos + 1;
                self.check_attr(p, &a)?;
                self.bump();
                self.bump();
                path.push(a);
            } else {
                break;
            }
        }
        Ok(Term::new(label, path))
    }

    fn try_path_eq(&mut self) -> PResult<Option<Formula>> {
        let start = self.pos;
        let save_arities = self.arities.clone();
        let lhs = match self.path_term() {
            Ok(t) => t,
            Err(_) => {
                self.pos = start;
                return Ok(None);
            }
        };
        if *self.peek() != Tok::EqEq {
            self.pos = start;
            self.arities = save_arities;
            return Ok(None);
        }
        self.bump();
        let rhs = self.path_term()?;
        Ok(Some(Formula::PathEq(lhs, rhs)))
    }

    fn wrap(&mut self) -> PResult<Formula> {
        let t = self.expect_label()?;
        self.expect(Tok::Colon)?;
        self.expect(Tok::LBrack)?;
        let xpos = self.pos;
        let x = self.expect_label()?;
        if x.sort != LabelSort::NodeVar {
            return Err(self.error_at(xpos, format!("wrapping content must be labelled by a node variable, found {x}")));
        }
        self.expect(Tok::Dot)?;
        let d = self.desc()?;
        self.expect(Tok::RBrack)?;
        Ok(Formula::Wrap(t, x, d))
    }

    /// desc := conj ('|' conj)*
    fn desc(&mut self) -> PResult<Desc> {
        let mut d = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let e = self.conj()?;
            d = Desc::or(d, e);
        }
        Ok(d)
    }

    fn conj(&mut self) -> PResult<Desc> {
        let mut d = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let e = self.unary()?;
            d = Desc::and(d, e);
        }
        Ok(d)
    }

    fn unary(&mut self) -> PResult<Desc> {
        match self.peek().clone() {
            Tok::Bang => Err(self.error("negation is not allowed inside descriptions")),
            Tok::LParen => {
                self.bump();
                let d = self.desc()?;
                self.expect(Tok::RParen)?;
                Ok(d)
            }
            Tok::Hash => {
                self.bump();
                Ok(Desc::Label(self.expect_label()?))
            }
            Tok::Label(l) => {
                self.bump();
                Ok(Desc::Label(l))
            }
            Tok::Ident(s) if s == "TOP" => {
                self.bump();
                Ok(Desc::Top)
            }
            Tok::Ident(_) => {
                let start = self.pos;
                let mut names = Vec::new();
                while let Tok::Ident(s) = self.peek().clone() {
                    if s == "TOP" {
                        break;
                    }
                    names.push((self.pos, s));
                    self.bump();
                }
                if *self.peek() == Tok::Colon {
                    self.bump();
                    let inner = self.unary()?;
                    for (p, a) in &names {
                        self.check_attr(*p, a)?;
                    }
                    Ok(names.into_iter().rev().fold(inner, |d, (_, a)| Desc::attr(a, d)))
                } else if names.len() == 1 {
                    let (p, t) = names.pop().expect("one name");
                    self.check_type(p, &t)?;
                    Ok(Desc::Type(t))
                } else {
                    Err(self.error_at(start, "attribute chain must end with ':'"))
                }
            }
            t => Err(self.error(format!("expected a description, found {}", t.describe()))),
        }
    }
}

/// Splits preamble declarations from the formula text. Declaration lines are
/// blanked out so positions in the rest stay accurate.
fn split_preamble(text: &str) -> Result<(Declared, String), ParseError> {
    let mut declared = Declared::default();
    let mut body = String::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        let decl = ["types:", "attrs:", "rels:"].iter().find(|k| trimmed.starts_with(**k));
        if let Some(k) = decl {
            let rest = trimmed[k.len()..].split("//").next().unwrap_or("");
            let items: Vec<String> = rest
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
            match *k {
                "types:" => declared.types.get_or_insert_with(Vec::new).extend(items),
                "attrs:" => declared.attrs.get_or_insert_with(Vec::new).extend(items),
                _ => {
                    let rels = declared.rels.get_or_insert_with(BTreeMap::new);
                    for it in items {
                        let (name, arity) = it.split_once('/').ok_or_else(|| ParseError {
                            line: i + 1,
                            column: 1,
                            msg: format!("relation declaration {it:?} must look like name/arity"),
                        })?;
                        let arity: usize = arity.parse().map_err(|_| ParseError {
                            line: i + 1,
                            column: 1,
                            msg: format!("bad arity in {it:?}"),
                        })?;
                        rels.insert(name.to_string(), arity);
                    }
                }
            }
            body.push('\n');
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    Ok((declared, body))
}

fn finish<T>(p: &mut Parser, v: T) -> PResult<T> {
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("unexpected {} after the end of the formula", p.peek().describe())));
    }
    Ok(v)
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let (declared, body) = split_preamble(text)?;
    let toks = lex(&body)?;
    let mut p = Parser { toks, pos: 0, declared, arities: BTreeMap::new() };
    if *p.peek() == Tok::Eof {
        return Err(p.error("empty formula"));
    }
    let f = p.formula()?;
    finish(&mut p, f)
}

/// Parses and checks every symbol against a signature.
pub fn parse_with_signature(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let (_, body) = split_preamble(text)?;
    let declared = Declared {
        types: Some(sig.types.iter().cloned().collect()),
        attrs: Some(sig.attributes.iter().cloned().collect()),
        rels: Some(sig.relations.clone()),
    };
    let toks = lex(&body)?;
    let mut p = Parser { toks, pos: 0, declared, arities: BTreeMap::new() };
    let f = p.formula()?;
    let f = finish(&mut p, f)?;
    for l in f.labels() {
        if !sig.has_label(&l) {
            return Err(ParseError { line: 1, column: 1, msg: format!("unknown label {l}") });
        }
    }
    Ok(f)
}

/// Parses the display form of one atom, e.g. `?x.P == ?y` or `IN(?x, $T1)`.
pub fn parse_atom(text: &str) -> Result<Atom, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, declared: Declared::default(), arities: BTreeMap::new() };
    let atom = match p.peek().clone() {
        Tok::Ident(k) if ["IN", "INWR", "WR"].contains(&k.as_str()) && *p.peek_at(1) == Tok::LParen => {
            p.bump();
            p.bump();
            let a = p.expect_label()?;
            let atom = if k == "IN" {
                p.expect(Tok::Comma)?;
                Atom::In(a, p.expect_label()?)
            } else if k == "INWR" {
                Atom::InWr(a)
            } else {
                Atom::Wr(a)
            };
            p.expect(Tok::RParen)?;
            atom
        }
        Tok::Ident(_) => match p.term()? {
            Formula::Rel(r, args) => Atom::Rel(r, args),
            _ => return Err(p.error("expected an atom")),
        },
        _ => {
            let t = p.path_term()?;
            match p.bump() {
                Tok::EqEq => Atom::eq(t, p.path_term()?),
                Tok::Colon => match p.bump() {
                    Tok::Ident(s) if s == "TOP" => Atom::PathTop(t),
                    Tok::Ident(s) => Atom::PathType(t, s),
                    other => return Err(p.error(format!("expected a type or TOP, found {}", other.describe()))),
                },
                other => return Err(p.error(format!("expected '==' or ':', found {}", other.describe()))),
            }
        }
    };
    finish(&mut p, atom)
}
