//! Printer inverse to the parser.

use std::fmt;

use super::ast::{Desc, Formula, Term};

fn write_desc(f: &mut fmt::Formatter<'_>, d: &Desc) -> fmt::Result {
    match d {
        Desc::Attr(a, inner) => {
            write!(f, "{a}:")?;
            write_unary(f, inner)
        }
        Desc::Type(t) => write!(f, "{t}"),
        Desc::Label(l) => write!(f, "#{l}"),
        Desc::Top => write!(f, "TOP"),
        Desc::And(a, b) => {
            if matches!(**a, Desc::Or(..)) {
                write!(f, "(")?;
                write_desc(f, a)?;
                write!(f, ")")?;
            } else {
                write_desc(f, a)?;
            }
            write!(f, " & ")?;
            write_unary(f, b)
        }
        Desc::Or(a, b) => {
            write_desc(f, a)?;
            write!(f, " | ")?;
            if matches!(**b, Desc::Or(..)) {
                write_unary(f, b)
            } else {
                write_desc(f, b)
            }
        }
    }
}

fn write_unary(f: &mut fmt::Formatter<'_>, d: &Desc) -> fmt::Result {
    if d.is_compound() {
        write!(f, "(")?;
        write_desc(f, d)?;
        write!(f, ")")
    } else {
        write_desc(f, d)
    }
}

impl fmt::Display for Desc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_desc(f, self)
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

fn write_term(f: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
    if let Formula::And(..) = g {
        write!(f, "(")?;
        write_formula(f, g)?;
        write!(f, ")")
    } else {
        write_formula(f, g)
    }
}

fn write_formula(f: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
    match g {
        Formula::At(k, d) => {
            write!(f, "{k} . ")?;
            write_unary(f, d)
        }
        Formula::PathEq(a, b) => write!(f, "{a} == {b}"),
        Formula::Rel(r, args) => {
            write!(f, "{r}(")?;
            write_args(f, args)?;
            write!(f, ")")
        }
        Formula::Wrap(t, x, d) => write!(f, "{t}:[{x} . {d}]"),
        Formula::And(a, b) => {
            write_formula(f, a)?;
            write!(f, " & ")?;
            write_term(f, b)
        }
        Formula::Not(a) => {
            write!(f, "!")?;
            write_term(f, a)
        }
        Formula::Top => write!(f, "TOP"),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}
