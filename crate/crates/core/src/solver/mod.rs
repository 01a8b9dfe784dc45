//! Inclusion-constraint solving by rewriting: solvability, solved forms,
//! least-solution extraction and a ground checker.

mod check;
mod least;
mod present;
mod solve;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::types::{Constraint, Substitution, Type};

pub use check::{check_inductive, check_solution};
pub use least::{least_solution, LeastSolution};
pub use present::{present_scheme, Presented};
pub use solve::solve;

/// Bounds gathered for each type variable once no rewrite applies.
#[derive(Debug, Clone, Default)]
pub struct SolvedForm {
    /// Topology unifier accumulated by the collection rule.
    pub topo: Substitution,
    pub lower: BTreeMap<String, Vec<Type>>,
    pub upper: BTreeMap<String, Vec<Type>>,
    /// `(guard, bound)`: `bound` is a lower bound whenever `guard` is
    /// non-empty.
    pub guarded: BTreeMap<String, Vec<(Type, Type)>>,
    /// Constraints that hold but have no bound form (e.g. `a & int <= 0`).
    pub residual: Vec<Constraint>,
}

impl SolvedForm {
    /// The bounds as constraints, deduplicated.
    pub fn constraints(&self) -> Vec<Constraint> {
        let mut out: Vec<Constraint> = Vec::new();
        let mut push = |c: Constraint| {
            let c = self.topo.apply_constraint(&c);
            if c.lhs != c.rhs && !out.contains(&c) {
                out.push(c);
            }
        };
        for (v, ls) in &self.lower {
            for l in ls {
                push(Constraint::new(l.clone(), Type::var(v)));
            }
        }
        for (v, us) in &self.upper {
            for u in us {
                push(Constraint::new(Type::var(v), u.clone()));
            }
        }
        for (v, gs) in &self.guarded {
            for (g, b) in gs {
                push(Constraint::new(Type::cond(b.clone(), g.clone()), Type::var(v)));
            }
        }
        for c in &self.residual {
            push(c.clone());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveError {
    /// The system has no solution. `trace` runs from an input constraint to
    /// the contradiction it reduced to.
    Unsolvable { trace: Vec<Constraint>, reason: String },
    /// The input is outside the accepted form.
    NotInductive { constraint: Constraint, reason: String },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Unsolvable { trace, reason } => {
                write!(f, "unsolvable constraints: {reason}")?;
                for c in trace {
                    write!(f, "\n  from {c}")?;
                }
                Ok(())
            }
            SolveError::NotInductive { constraint, reason } => {
                write!(f, "constraint `{constraint}` is outside the solvable form: {reason}")
            }
        }
    }
}
