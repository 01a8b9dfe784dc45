use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::solve::solve_unchecked;
use super::{least_solution, solve, SolveError, SolvedForm};
use crate::types::{normalize, rename_scheme, Constraint, Substitution, Type, TypeScheme};

#[derive(Debug, Clone)]
pub struct Presented {
    /// Canonically renamed scheme with the least solution substituted.
    pub scheme: TypeScheme,
    /// Substitution taking the generated result type to the scheme body
    /// (before renaming).
    pub solution: Substitution,
}

fn structural(t: &Type) -> bool {
    matches!(t, Type::Arrow(..) | Type::Coll(..))
}

/// Solves `system` and presents `ty` under its least solution:
///
/// * a variable used only negatively whose single upper bound is an arrow or
///   collection type is replaced by that bound;
/// * variables not occurring negatively get their least solution, with
///   internal unbounded ones mapped to `0`;
/// * constraints still needed after substitution are kept in the scheme.
pub fn present_scheme(ty: &Type, system: &[Constraint]) -> Result<Presented, SolveError> {
    let mut f = solve(system)?;
    let mut ty = ty.clone();
    let mut system = system.to_vec();
    let mut expansion = Substitution::new();
    loop {
        let t = f.topo.apply(&ty);
        let (mut pos, mut neg) = (BTreeSet::new(), BTreeSet::new());
        t.polar_vars(true, &mut pos, &mut neg);
        let pick = neg.iter().filter(|v| !pos.contains(*v) && !f.lower.contains_key(*v)).find_map(|v| {
            let ups: Vec<&Type> = f.upper.get(v)?.iter().filter(|u| structural(u)).collect();
            match ups.as_slice() {
                [u] if !u.occurs(v) => Some((v.clone(), f.topo.apply(u))),
                _ => None,
            }
        });
        let Some((v, bound)) = pick else { break };
        let s = Substitution::single_type(&v, bound);
        ty = s.apply(&ty);
        system = system.iter().map(|c| s.apply_constraint(c)).collect();
        expansion = s.compose(&expansion);
        f = solve_unchecked(&system)?;
    }
    let ty = f.topo.apply(&ty);

    let (mut pos, mut neg) = (BTreeSet::new(), BTreeSet::new());
    ty.polar_vars(true, &mut pos, &mut neg);
    let in_type = ty.free_vars().types;
    let mut all = in_type.clone();
    for c in &system {
        all.extend(c.lhs.free_vars().types);
        all.extend(c.rhs.free_vars().types);
    }
    let targets: Vec<String> = all.iter().filter(|v| !neg.contains(*v)).cloned().collect();
    let least = least_solution(&f, &targets);

    let mut zero = Substitution::new();
    for v in &targets {
        if !in_type.contains(v) && !f.lower.contains_key(v) && !f.guarded.contains_key(v) {
            zero.types.insert(v.clone(), Type::Zero);
        }
    }
    let sol = zero.compose(&least.subst);
    let body = normalize(&sol.apply(&ty));

    let mut rest: Vec<Constraint> = system.iter().map(|c| f.topo.apply_constraint(&sol.apply_constraint(c))).collect();
    rest.extend(least.recursive.iter().cloned());
    let f2 = solve_unchecked(&rest)?;
    let kept = needed(&f2, &body, &least.recursive);

    let mut scheme = TypeScheme { type_vars: Vec::new(), topo_vars: Vec::new(), body, constraints: kept };
    let fv = scheme.free_vars();
    scheme.type_vars = fv.types.into_iter().collect();
    scheme.topo_vars = fv.topos.into_iter().collect();
    Ok(Presented { scheme: rename_scheme(&scheme), solution: sol.compose(&expansion) })
}

/// Constraints of the re-solved system that mention only variables of the
/// body and are not absorbed (`l | r = r`).
fn needed(f: &SolvedForm, body: &Type, recursive: &[Constraint]) -> Vec<Constraint> {
    let mut vars = body.free_vars().types;
    for c in recursive {
        vars.extend(c.lhs.free_vars().types);
    }
    let mut out: Vec<Constraint> = recursive.to_vec();
    for c in f.constraints() {
        let (l, r) = (normalize(&c.lhs), normalize(&c.rhs));
        let mut cv = l.free_vars().types;
        cv.extend(r.free_vars().types);
        if cv.is_empty() || !cv.is_subset(&vars) {
            continue;
        }
        if normalize(&Type::union(l.clone(), r.clone())) == r {
            continue;
        }
        let c = Constraint::new(l, r);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}
