//! Soft-system constraint generation: pattern compatibility types, pattern
//! bindings, and inclusion constraints for every typing rule.

mod generate;

use alloc::vec::Vec;

pub use generate::{generate, generate_program, infer_soft, GenError, GenOptions, Generated, Origin, SoftTyping};

use crate::syntax::{ElemKind, ElemPattern};
use crate::types::{TopoSym, Topology, Type};

fn elem_comp(e: &ElemKind, tau: &Type) -> Type {
    match e {
        ElemKind::Plain(_) => tau.clone(),
        ElemKind::Typed(_, b) | ElemKind::TypedStar(b, _) => Type::inter(tau.clone(), Type::Base(*b)),
        ElemKind::Star(_) => Type::One,
    }
}

/// Compatibility type of a pattern against content type `tau`; empty
/// exactly when the pattern can never match.
pub fn comp(m: &[ElemPattern], tau: &Type) -> Type {
    match m {
        [] => Type::One,
        [e] => elem_comp(&e.kind, tau),
        [e, rest @ ..] => match &e.kind {
            ElemKind::Plain(_) | ElemKind::Star(_) => comp(rest, tau),
            _ => Type::cond(elem_comp(&e.kind, tau), comp(rest, tau)),
        },
    }
}

/// Types bound to the pattern variables.
pub fn gamma(m: &[ElemPattern], tau: &Type) -> Vec<(alloc::string::String, Type)> {
    let seq = |t: Type| Type::coll(Topology::Sym(TopoSym::Seq), t);
    m.iter()
        .map(|e| {
            let t = match &e.kind {
                ElemKind::Plain(_) => tau.clone(),
                ElemKind::Typed(_, b) => Type::inter(tau.clone(), Type::Base(*b)),
                ElemKind::Star(_) => seq(tau.clone()),
                ElemKind::TypedStar(b, _) => seq(Type::inter(tau.clone(), Type::Base(*b))),
            };
            (e.kind.var().into(), t)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{normalize, parse_type, BaseType};
    use alloc::string::ToString;

    fn pat(kinds: Vec<ElemKind>) -> Vec<ElemPattern> {
        kinds.into_iter().map(ElemPattern::new).collect()
    }

    #[test]
    fn comp_of_typed_pair() {
        let m = pat(alloc::vec![ElemKind::Typed("x1".into(), BaseType::Int), ElemKind::Typed("x2".into(), BaseType::Float)]);
        assert_eq!(comp(&m, &Type::var("t")).to_string(), "(t & int) ? (t & float)");
    }

    #[test]
    fn comp_of_variable() {
        assert_eq!(comp(&pat(alloc::vec![ElemKind::Plain("x".into())]), &Type::var("t")), Type::var("t"));
    }

    #[test]
    fn comp_is_empty_for_incompatible_type() {
        let m = pat(alloc::vec![ElemKind::Typed("x".into(), BaseType::Int), ElemKind::Plain("y".into())]);
        assert_eq!(normalize(&comp(&m, &Type::BOOL)), Type::Zero);
    }

    #[test]
    fn comp_of_stars() {
        let m = pat(alloc::vec![ElemKind::Star("r".into())]);
        assert_eq!(comp(&m, &Type::BOOL), Type::One);
        let m = pat(alloc::vec![ElemKind::TypedStar(BaseType::Int, "r".into())]);
        assert_eq!(normalize(&comp(&m, &Type::BOOL)), Type::Zero);
    }

    #[test]
    fn gamma_bindings() {
        let g = gamma(&pat(alloc::vec![ElemKind::Typed("x".into(), BaseType::Int)]), &Type::var("a"));
        assert_eq!(g, [("x".into(), parse_type("a & int").unwrap())]);
        let g = gamma(&pat(alloc::vec![ElemKind::Plain("x".into()), ElemKind::Plain("y".into())]), &Type::var("t"));
        assert_eq!(g, [("x".into(), Type::var("t")), ("y".into(), Type::var("t"))]);
        let g = gamma(&pat(alloc::vec![ElemKind::TypedStar(BaseType::Int, "xs".into())]), &Type::var("a"));
        assert_eq!(g[0].1.to_string(), "[seq] (a & int)");
    }
}
