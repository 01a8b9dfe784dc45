//! Semantics-preserving simplification of types and three-valued emptiness.
//!
//! The canonical form keeps union and intersection operands flattened,
//! duplicate-free and sorted, so structural equality of normal forms is
//! syntactic equality.

use alloc::vec::Vec;

use super::{Topology, Type};

/// Outcome of an emptiness test: a type is empty when its meaning is `{⊥}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emptiness {
    Empty,
    NonEmpty,
    Unknown,
}

pub fn normalize(t: &Type) -> Type {
    let mut cur = step(t);
    loop {
        let next = step(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

pub fn is_empty(t: &Type) -> Emptiness {
    emptiness_of_normal(&normalize(t))
}

fn emptiness_of_normal(t: &Type) -> Emptiness {
    match t {
        Type::Zero => Emptiness::Empty,
        Type::Base(_) | Type::One | Type::Arrow(..) | Type::Coll(..) => Emptiness::NonEmpty,
        Type::Var(_) => Emptiness::Unknown,
        Type::Union(ts) => {
            let mut all_empty = true;
            for t in ts {
                match emptiness_of_normal(t) {
                    Emptiness::NonEmpty => return Emptiness::NonEmpty,
                    Emptiness::Unknown => all_empty = false,
                    Emptiness::Empty => {}
                }
            }
            if all_empty {
                Emptiness::Empty
            } else {
                Emptiness::Unknown
            }
        }
        // Disjoint heads were already collapsed to 0; what is left is either
        // a family of arrow types (all share `λx.⊥`) or depends on variables.
        Type::Inter(ts) => {
            if ts.iter().all(|t| matches!(t, Type::Arrow(..))) {
                Emptiness::NonEmpty
            } else {
                Emptiness::Unknown
            }
        }
        Type::Cond(a, g) => match emptiness_of_normal(g) {
            Emptiness::Empty => Emptiness::Empty,
            Emptiness::NonEmpty => emptiness_of_normal(a),
            Emptiness::Unknown => match emptiness_of_normal(a) {
                Emptiness::Empty => Emptiness::Empty,
                _ => Emptiness::Unknown,
            },
        },
    }
}

fn step(t: &Type) -> Type {
    match t {
        Type::Base(_) | Type::Var(_) | Type::Zero | Type::One => t.clone(),
        Type::Arrow(a, b) => Type::arrow(step(a), step(b)),
        Type::Coll(r, e) => Type::coll(r.clone(), step(e)),
        Type::Cond(a, g) => make_cond(step(a), step(g)),
        Type::Union(ts) => make_union(ts.iter().map(step).collect()),
        Type::Inter(ts) => make_inter(ts.iter().map(step).collect()),
    }
}

fn make_cond(a: Type, g: Type) -> Type {
    if a == Type::Zero {
        return Type::Zero;
    }
    // a non-empty `a` inside `g` makes `g` non-empty
    if within(&a, &g) {
        return a;
    }
    match emptiness_of_normal(&g) {
        Emptiness::Empty => Type::Zero,
        Emptiness::NonEmpty => a,
        Emptiness::Unknown => Type::cond(a, g),
    }
}

/// Syntactic containment through shared intersection operands.
fn within(a: &Type, g: &Type) -> bool {
    let ops = |t: &Type| match t {
        Type::Inter(ts) => ts.clone(),
        t => alloc::vec![t.clone()],
    };
    let (xs, ys) = (ops(a), ops(g));
    a == g || ys.iter().all(|y| xs.contains(y))
}

fn make_union(items: Vec<Type>) -> Type {
    let mut flat = Vec::new();
    for t in items {
        match t {
            Type::Union(ts) => flat.extend(ts),
            Type::Zero => {}
            Type::One => return Type::One,
            other => flat.push(other),
        }
    }
    flat.sort();
    flat.dedup();
    let members = flat.clone();
    flat.retain(|m| !absorbed(m, &members));
    match flat.len() {
        0 => Type::Zero,
        1 => flat.pop().unwrap(),
        _ => Type::Union(flat),
    }
}

/// Whether a union member is redundant next to the other members:
/// `X ∪ (X ∩ Y) = X`, `X ∪ (X ? g) = X`, and `X ∪ (b ? (X ∩ b ∩ …)) = X`
/// for a base type `b` (a base type is atomic, so a non-empty `X ∩ b`
/// means all of `b` is in `X`).
fn absorbed(m: &Type, members: &[Type]) -> bool {
    let other = |x: &Type| x != m && members.contains(x);
    match m {
        Type::Inter(ops) => ops.iter().any(other),
        Type::Cond(a, g) => {
            if other(a) {
                return true;
            }
            if let (Type::Base(_), Type::Inter(ops)) = (a.as_ref(), g.as_ref()) {
                return ops.contains(a) && ops.iter().any(|o| o != a.as_ref() && other(o));
            }
            false
        }
        _ => false,
    }
}

#[derive(PartialEq)]
enum Head<'a> {
    Base(super::BaseType),
    Coll(&'a Topology),
    Arrow,
    Other,
}

fn head(t: &Type) -> Head<'_> {
    match t {
        Type::Base(b) => Head::Base(*b),
        Type::Coll(r, _) => Head::Coll(r),
        Type::Arrow(..) => Head::Arrow,
        _ => Head::Other,
    }
}

fn disjoint(a: &Type, b: &Type) -> bool {
    match (head(a), head(b)) {
        (Head::Base(x), Head::Base(y)) => x != y,
        (Head::Base(_), Head::Coll(_) | Head::Arrow) | (Head::Coll(_) | Head::Arrow, Head::Base(_)) => true,
        (Head::Coll(_), Head::Arrow) | (Head::Arrow, Head::Coll(_)) => true,
        (Head::Coll(Topology::Sym(x)), Head::Coll(Topology::Sym(y))) => x != y,
        _ => false,
    }
}

fn make_inter(items: Vec<Type>) -> Type {
    let mut flat = Vec::new();
    for t in items {
        match t {
            Type::Inter(ts) => flat.extend(ts),
            Type::One => {}
            Type::Zero => return Type::Zero,
            other => flat.push(other),
        }
    }
    flat.sort();
    flat.dedup();

    // (A ∪ B) ∩ C = (A ∩ C) ∪ (B ∩ C)
    if let Some(i) = flat.iter().position(|t| matches!(t, Type::Union(_))) {
        let Type::Union(alts) = flat.remove(i) else { unreachable!() };
        return make_union(
            alts.into_iter()
                .map(|a| {
                    let mut ops = flat.clone();
                    ops.push(a);
                    make_inter(ops)
                })
                .collect(),
        );
    }
    // (a ? g) ∩ C = (a ∩ C) ? g
    if let Some(i) = flat.iter().position(|t| matches!(t, Type::Cond(..))) {
        let Type::Cond(a, g) = flat.remove(i) else { unreachable!() };
        flat.push(*a);
        return make_cond(make_inter(flat), *g);
    }

    for i in 0..flat.len() {
        for j in i + 1..flat.len() {
            if disjoint(&flat[i], &flat[j]) {
                return Type::Zero;
            }
        }
    }

    // [r] a ∩ [r] b = [r] (a ∩ b)
    let mut merged: Vec<Type> = Vec::new();
    for t in flat {
        if let Type::Coll(r, e) = &t {
            if let Some(Type::Coll(_, e0)) =
                merged.iter_mut().find(|m| matches!(m, Type::Coll(r0, _) if r0 == r))
            {
                let joined = make_inter(alloc::vec![(**e0).clone(), (**e).clone()]);
                **e0 = joined;
                continue;
            }
        }
        merged.push(t);
    }
    merged.sort();
    match merged.len() {
        0 => Type::One,
        1 => merged.pop().unwrap(),
        _ => Type::Inter(merged),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse_type;

    fn n(s: &str) -> Type {
        normalize(&parse_type(s).unwrap())
    }

    #[test]
    fn disjoint_bases_meet_at_zero() {
        assert_eq!(n("int & bool"), Type::Zero);
    }

    #[test]
    fn conditional_on_non_empty_guard() {
        assert_eq!(n("bool ? (int & int)"), Type::BOOL);
    }

    #[test]
    fn conditional_within_its_guard() {
        assert_eq!(n("(a & int) ? (int & a)"), n("a & int"));
        assert_eq!(n("a | ((int & a) ? a)"), Type::var("a"));
        assert_ne!(n("a ? (a & int)"), Type::var("a"));
    }

    #[test]
    fn zero_is_union_unit() {
        assert_eq!(n("a | 0"), Type::var("a"));
    }

    #[test]
    fn variables_block_intersection() {
        assert_eq!(n("a & int"), Type::inter(Type::INT, Type::var("a")));
        assert_eq!(is_empty(&parse_type("a & int").unwrap()), Emptiness::Unknown);
    }

    #[test]
    fn empty_collection_inhabits() {
        assert_eq!(is_empty(&parse_type("[set] 0").unwrap()), Emptiness::NonEmpty);
        assert_eq!(is_empty(&Type::Zero), Emptiness::Empty);
    }

    #[test]
    fn tautological_conditional_is_absorbed() {
        assert_eq!(n("a | (int ? (a & int))"), Type::var("a"));
        // not absorbed when the guarded type is not the tested base type
        assert_ne!(n("a | (bool ? (a & int))"), Type::var("a"));
    }

    #[test]
    fn distributes_over_unions() {
        assert_eq!(n("(int | bool) & float"), Type::Zero);
        assert_eq!(n("(int | bool) & int"), Type::INT);
    }

    #[test]
    fn collection_heads() {
        assert_eq!(n("[set] int & [grid] int"), Type::Zero);
        assert_eq!(n("[set] (int | bool) & [set] int"), n("[set] int"));
        assert_eq!(n("int & (int -> int)"), Type::Zero);
    }

    #[test]
    fn canonical_order() {
        assert_eq!(n("bool | int"), n("int | bool"));
        assert_eq!(n("int | (int | bool)"), n("bool | int"));
    }
}
