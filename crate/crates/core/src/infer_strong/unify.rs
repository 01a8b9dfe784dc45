use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::types::{Substitution, Topology, Type};

#[derive(Debug, Clone, PartialEq)]
pub enum UnifyError {
    Mismatch(Type, Type),
    TopologyMismatch(Topology, Topology),
    /// The variable occurs in the type it would be bound to.
    Occurs(String, Type),
}

impl fmt::Display for UnifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnifyError::Mismatch(a, b) => write!(f, "cannot unify `{a}` with `{b}`"),
            UnifyError::TopologyMismatch(a, b) => write!(f, "topology `{a}` does not match `{b}`"),
            UnifyError::Occurs(v, t) => write!(f, "infinite type: `{v}` occurs in `{t}`"),
        }
    }
}

pub fn unify_topo(a: &Topology, b: &Topology) -> Result<Substitution, UnifyError> {
    match (a, b) {
        _ if a == b => Ok(Substitution::new()),
        (Topology::Var(v), r) | (r, Topology::Var(v)) => Ok(Substitution::single_topo(v, r.clone())),
        _ => Err(UnifyError::TopologyMismatch(a.clone(), b.clone())),
    }
}

/// Most general unifier of two types of the strong fragment.
pub fn unify(a: &Type, b: &Type) -> Result<Substitution, UnifyError> {
    unify_all(alloc::vec![(a.clone(), b.clone())])
}

pub fn unify_all(mut work: Vec<(Type, Type)>) -> Result<Substitution, UnifyError> {
    let mut s = Substitution::new();
    work.reverse();
    while let Some((x, y)) = work.pop() {
        let (x, y) = (s.apply(&x), s.apply(&y));
        match (x, y) {
            (Type::Var(a), Type::Var(b)) if a == b => {}
            (Type::Var(a), t) | (t, Type::Var(a)) => {
                if t.occurs(&a) {
                    return Err(UnifyError::Occurs(a, t));
                }
                s = Substitution::single_type(&a, t).compose(&s);
            }
            (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => {
                work.push((*b1, *b2));
                work.push((*a1, *a2));
            }
            (Type::Coll(r1, e1), Type::Coll(r2, e2)) => {
                s = unify_topo(&r1, &r2)?.compose(&s);
                work.push((*e1, *e2));
            }
            (x, y) if x == y => {}
            (x, y) => return Err(UnifyError::Mismatch(x, y)),
        }
    }
    Ok(s)
}
