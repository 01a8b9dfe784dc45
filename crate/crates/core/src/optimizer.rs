//! Rewrites of transformations justified by the content type of the
//! collections they are applied to.

use alloc::vec::Vec;

use crate::constraints::comp;
use crate::syntax::{ElemKind, Rule};
use crate::types::{normalize, Type};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Elimination {
    /// Rule at this index (in the input) can never match.
    DeadRule(usize),
    /// Type test on element `element` of rule `rule` always succeeds.
    TypeTest { rule: usize, element: usize },
}

/// Drops the rules whose pattern can never match an element of type `tau`.
pub fn eliminate_dead_rules(rules: &[Rule], tau: &Type) -> (Vec<Rule>, Vec<Elimination>) {
    let mut kept = Vec::new();
    let mut report = Vec::new();
    for (i, r) in rules.iter().enumerate() {
        if normalize(&comp(&r.pattern.elements, tau)) == Type::Zero {
            report.push(Elimination::DeadRule(i));
        } else {
            kept.push(r.clone());
        }
    }
    (kept, report)
}

/// Removes type tests every element of type `tau` passes. `tau` must be
/// variable-free, otherwise nothing changes.
pub fn eliminate_type_tests(rules: &[Rule], tau: &Type) -> (Vec<Rule>, Vec<Elimination>) {
    let mut report = Vec::new();
    if !tau.free_vars().is_empty() {
        return (rules.to_vec(), report);
    }
    let tau_n = normalize(tau);
    let out = rules
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            for (j, el) in r.pattern.elements.iter_mut().enumerate() {
                let Some(b) = el.kind.type_test() else { continue };
                if normalize(&Type::inter(tau.clone(), Type::Base(b))) != tau_n {
                    continue;
                }
                el.kind = match &el.kind {
                    ElemKind::Typed(x, _) => ElemKind::Plain(x.clone()),
                    ElemKind::TypedStar(_, x) => ElemKind::Star(x.clone()),
                    k => k.clone(),
                };
                report.push(Elimination::TypeTest { rule: i, element: j });
            }
            r
        })
        .collect();
    (out, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Expr, ExprKind};
    use crate::types::{parse_type, Dialect};
    use alloc::string::ToString;

    fn rules(src: &str) -> Vec<Rule> {
        match parse(src, Dialect::Soft).unwrap().kind {
            ExprKind::Trans(rs) => rs,
            _ => panic!(),
        }
    }

    fn show(rs: Vec<Rule>) -> alloc::string::String {
        Expr::trans(rs).to_string()
    }

    #[test]
    fn int_rule_is_dead_on_bools() {
        let (rs, rep) = eliminate_dead_rules(&rules("{x:int => [x + 1]}"), &Type::BOOL);
        assert!(rs.is_empty());
        assert_eq!(rep, [Elimination::DeadRule(0)]);
    }

    #[test]
    fn plain_rule_survives() {
        let r = rules("{x => [x]}");
        assert_eq!(eliminate_dead_rules(&r, &Type::var("a")).0, r);
        assert_eq!(eliminate_dead_rules(&r, &Type::INT).0, r);
    }

    #[test]
    fn float_rule_removed_on_ints() {
        let (rs, rep) = eliminate_dead_rules(&rules("{x:int => [x]; x:float => [x]}"), &Type::INT);
        assert_eq!(show(rs), "{x:int => [x]}");
        assert_eq!(rep, [Elimination::DeadRule(1)]);
    }

    #[test]
    fn useless_test_removed() {
        let (rs, _) = eliminate_type_tests(&rules("{x:int => [x + 1]}"), &Type::INT);
        assert_eq!(show(rs), "{x => [(x + 1)]}");
    }

    #[test]
    fn needed_test_kept() {
        let r = rules("{x:int => [x]}");
        let (rs, rep) = eliminate_type_tests(&r, &parse_type("int | bool").unwrap());
        assert_eq!(rs, r);
        assert!(rep.is_empty());
        assert_eq!(eliminate_type_tests(&r, &Type::var("a")).0, r);
    }

    #[test]
    fn typed_star_relaxed() {
        let (rs, rep) = eliminate_type_tests(&rules("{int* as xs => [xs]}"), &Type::INT);
        assert_eq!(show(rs), "{* as xs => [xs]}");
        assert_eq!(rep, [Elimination::TypeTest { rule: 0, element: 0 }]);
    }

    #[test]
    fn idempotent() {
        let r = rules("{x:int, y:float => [x]; z:int => [z]; w => [w]}");
        let t = Type::INT;
        let once = eliminate_dead_rules(&r, &t).0;
        assert_eq!(eliminate_dead_rules(&once, &t).0, once);
        let once = eliminate_type_tests(&r, &t).0;
        assert_eq!(eliminate_type_tests(&once, &t).0, once);
    }
}
