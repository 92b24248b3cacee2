use std::collections::{BTreeMap, BTreeSet};

use super::factset::{FactSet, SaturationBudget};
use crate::avl::{Atom, Clause, Cnf, Desc, Formula};

/// Distinct labels plus attribute occurrences in the clause set.
pub fn c0_bound(cnf: &Cnf) -> SaturationBudget {
    let labels: BTreeSet<_> = cnf.atoms().flat_map(Atom::labels).collect();
    let attrs: usize = cnf.atoms().map(Atom::attr_count).sum();
    SaturationBudget { c0: labels.len() + attrs }
}

fn desc_attrs(d: &Desc) -> usize {
    match d {
        Desc::Attr(_, inner) => 1 + desc_attrs(inner),
        Desc::And(a, b) | Desc::Or(a, b) => desc_attrs(a) + desc_attrs(b),
        Desc::Type(_) | Desc::Label(_) | Desc::Top => 0,
    }
}

fn formula_attrs(f: &Formula) -> usize {
    match f {
        Formula::At(_, d) | Formula::Wrap(_, _, d) => desc_attrs(d),
        Formula::PathEq(a, b) => a.path.len() + b.path.len(),
        Formula::Rel(_, args) => args.iter().map(|t| t.path.len()).sum(),
        Formula::And(a, b) => formula_attrs(a) + formula_attrs(b),
        Formula::Not(a) => formula_attrs(a),
        Formula::Top => 0,
    }
}

/// The same count taken on the source formula instead of its clause set.
pub fn c0_bound_formula(f: &Formula) -> SaturationBudget {
    SaturationBudget { c0: f.labels().len() + formula_attrs(f) }
}

pub fn saturate(cnf: &Cnf) -> Vec<FactSet> {
    let clauses: Vec<Clause> = cnf.clauses.iter().cloned().collect();
    saturate_ordered(&clauses, &c0_bound(cnf))
}

/// Branching Horn saturation; clauses are tried in the given order.
pub fn saturate_ordered(clauses: &[Clause], budget: &SaturationBudget) -> Vec<FactSet> {
    let mut done: BTreeMap<BTreeSet<Atom>, FactSet> = BTreeMap::new();
    let mut seen: BTreeSet<BTreeSet<Atom>> = BTreeSet::new();
    let start = FactSet::new(budget);
    seen.insert(start.basis());
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        let firing = clauses.iter().find(|c| {
            c.neg.iter().all(|a| u.contains(a)) && !c.pos.iter().any(|a| u.contains(a))
        });
        match firing {
            None => {
                done.insert(u.basis(), u);
            }
            Some(c) if c.pos.is_empty() => {}
            Some(c) => {
                for rho in &c.pos {
                    let next = u.with(rho);
                    if next.is_contradictory() {
                        continue;
                    }
                    if seen.insert(next.basis()) {
                        stack.push(next);
                    }
                }
            }
        }
    }
    done.into_values().collect()
}

/// Drops every fact-set that strictly contains another one.
pub fn antichain_reduce(factsets: Vec<FactSet>) -> Vec<FactSet> {
    let n = factsets.len();
    let keep: Vec<bool> = (0..n)
        .map(|i| {
            !(0..n).any(|j| {
                j != i && factsets[j].is_subset_of(&factsets[i]) && !factsets[i].is_subset_of(&factsets[j])
            })
        })
        .collect();
    let mut out: Vec<FactSet> = Vec::new();
    for (u, k) in factsets.into_iter().zip(keep) {
        if k && !out.iter().any(|v| *v == u) {
            out.push(u);
        }
    }
    out
}
