//! Extended attribute-value logic: syntax, satisfaction and clausal form.

mod ast;
mod cnf;
mod parse;
mod print;
mod sat;

pub use ast::{Atom, Clause, Cnf, Desc, Formula, Term};
pub use cnf::to_cnf;
pub use parse::{parse, parse_atom, parse_with_signature, ParseError};
pub use sat::{satisfies, satisfies_atom, satisfies_clause, satisfies_cnf, satisfies_desc};
