use alloc::string::String;

use super::SolveError;
use crate::types::oracle::FiniteUniverse;
use crate::types::{Constraint, Substitution, Type};

fn not_inductive(c: &Constraint, reason: &str) -> Result<(), SolveError> {
    Err(SolveError::NotInductive { constraint: c.clone(), reason: String::from(reason) })
}

fn arrow_intersection(t: &Type) -> bool {
    match t {
        Type::Inter(ts) => ts.iter().filter(|t| matches!(t, Type::Arrow(..))).count() > 1 || ts.iter().any(arrow_intersection),
        Type::Arrow(a, b) | Type::Cond(a, b) => arrow_intersection(a) || arrow_intersection(b),
        Type::Coll(_, e) => arrow_intersection(e),
        Type::Union(ts) => ts.iter().any(arrow_intersection),
        _ => false,
    }
}

/// Guards are built from variables and ground types by intersection and
/// nested conditionals.
fn good_guard(g: &Type) -> bool {
    match g {
        Type::Var(_) => true,
        Type::Inter(ts) => ts.iter().all(|t| matches!(t, Type::Var(_)) || t.is_ground()),
        Type::Cond(a, b) => good_guard(a) && good_guard(b),
        t => t.is_ground(),
    }
}

fn guards_ok(t: &Type) -> bool {
    match t {
        Type::Cond(a, g) => good_guard(g) && guards_ok(a),
        Type::Arrow(a, b) => guards_ok(a) && guards_ok(b),
        Type::Coll(_, e) => guards_ok(e),
        Type::Union(ts) | Type::Inter(ts) => ts.iter().all(guards_ok),
        _ => true,
    }
}

/// The accepted input form: no intersection of arrow types on a left-hand
/// side, conditional guards made of variables and ground types, and unions
/// on the right only as upper bounds of a variable or between ground types.
pub fn check_inductive(c: &Constraint) -> Result<(), SolveError> {
    if arrow_intersection(&c.lhs) {
        return not_inductive(c, "intersection of arrow types on the left");
    }
    if !guards_ok(&c.lhs) || !guards_ok(&c.rhs) {
        return not_inductive(c, "conditional guard is not built from variables and ground types");
    }
    if matches!(c.rhs, Type::Union(_)) && !matches!(c.lhs, Type::Var(_)) && !(c.lhs.is_ground() && c.rhs.is_ground()) {
        return not_inductive(c, "union on the right of a non-variable");
    }
    Ok(())
}

/// Whether the ground instance `s(S)` holds in the universe: first-order
/// constraints extensionally, arrows structurally.
pub fn check_solution(system: &[Constraint], s: &Substitution, u: &FiniteUniverse) -> bool {
    system.iter().all(|c| {
        let c = s.apply_constraint(c);
        c.lhs.is_ground() && c.rhs.is_ground() && u.includes(&c.lhs, &c.rhs).unwrap_or(false)
    })
}
