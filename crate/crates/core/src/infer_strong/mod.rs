//! Hindley/Milner inference for the strong language: Robinson unification
//! over types and topologies, and algorithm W with a case for
//! transformations.

mod unify;
mod w;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use unify::{unify, unify_all, unify_topo, UnifyError};

use crate::syntax::{desugar_directions, Expr, ExprKind, Span};
use crate::types::{
    generalize, is_instance, rename_scheme, tc, Dialect, FreshSupply, Substitution, TopoSym, Topology, Type,
    TypeScheme, TypingContext,
};

#[derive(Debug, Clone, PartialEq)]
pub enum InferErrorKind {
    Unify(UnifyError),
    Unbound(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InferError {
    pub kind: InferErrorKind,
    /// The smallest expression whose typing failed.
    pub span: Span,
}

impl fmt::Display for InferError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            InferErrorKind::Unify(e) => write!(f, "{e}"),
            InferErrorKind::Unbound(x) => write!(f, "unbound variable `{x}`"),
        }
    }
}

/// A typing derivation: the rule used, the type of the conclusion, and the
/// premises in source order (lambda body; function then argument; bound
/// expression then body; guard and replacement of each rule in turn).
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub rule: String,
    pub ty: Type,
    pub premises: Vec<Derivation>,
}

/// Algorithm W. Direction tags in patterns are desugared first.
pub fn infer_w(ctx: &TypingContext, e: &Expr) -> Result<(Substitution, Type), InferError> {
    let e = desugar_directions(e);
    let (s, t, _) = w::W { fresh: FreshSupply::new() }.infer(ctx, &e)?;
    Ok((s, t))
}

#[derive(Debug, Clone)]
pub struct StrongTyping {
    /// Principal scheme, canonically renamed.
    pub scheme: TypeScheme,
    /// The expression after direction desugaring, as typed.
    pub expr: Expr,
    /// Derivation with the final substitution applied.
    pub derivation: Derivation,
}

/// Infers the principal scheme of a closed program.
pub fn infer_program(e: &Expr) -> Result<StrongTyping, InferError> {
    let expr = desugar_directions(e);
    let ctx = TypingContext::new();
    let (s, t, d) = w::W { fresh: FreshSupply::new() }.infer(&ctx, &expr)?;
    let scheme = rename_scheme(&generalize(&ctx, t, Vec::new()));
    Ok(StrongTyping { scheme, expr, derivation: d.apply(&s) })
}

/// Checks a derivation rule by rule against the expression it claims to type.
pub fn check_derivation(ctx: &TypingContext, e: &Expr, d: &Derivation) -> Result<(), String> {
    let bad = |why: &str| Err(format!("{} at {}..{}: {why}", d.rule, e.span.start, e.span.end));
    let arity = |n: usize| d.premises.len() == n;
    match &e.kind {
        ExprKind::Var(x) => {
            let Some(sc) = ctx.get(x) else { return bad("unbound variable") };
            if d.rule != "var-inst" || !arity(0) || !is_instance(sc, &d.ty) {
                return bad("not an instance of the variable's scheme");
            }
        }
        ExprKind::Const(c) => {
            if d.rule != "const-inst" || !arity(0) || !is_instance(&tc(c, Dialect::Strong), &d.ty) {
                return bad("not an instance of the constant's scheme");
            }
        }
        ExprKind::Lambda(x, body) => {
            let Type::Arrow(a, b) = &d.ty else { return bad("lambda without arrow type") };
            if d.rule != "fun" || !arity(1) || d.premises[0].ty != **b {
                return bad("body type differs from codomain");
            }
            check_derivation(&ctx.with(x, TypeScheme::mono((**a).clone())), body, &d.premises[0])?;
        }
        ExprKind::App(f, a) => {
            if d.rule != "app" || !arity(2) {
                return bad("malformed application");
            }
            if d.premises[0].ty != Type::arrow(d.premises[1].ty.clone(), d.ty.clone()) {
                return bad("function type does not match argument and result");
            }
            check_derivation(ctx, f, &d.premises[0])?;
            check_derivation(ctx, a, &d.premises[1])?;
        }
        ExprKind::Let(x, bound, body) => {
            if d.rule != "let" || !arity(2) || d.premises[1].ty != d.ty {
                return bad("malformed let");
            }
            check_derivation(ctx, bound, &d.premises[0])?;
            let sc = generalize(ctx, d.premises[0].ty.clone(), Vec::new());
            check_derivation(&ctx.with(x, sc), body, &d.premises[1])?;
        }
        ExprKind::Trans(rules) => {
            let Type::Arrow(a, b) = &d.ty else { return bad("transformation without arrow type") };
            let (Type::Coll(r1, tau), Type::Coll(r2, tau2)) = (&**a, &**b) else {
                return bad("transformation type is not collection to collection");
            };
            if d.rule != "trans" || r1 != r2 || !arity(2 * rules.len()) {
                return bad("topology not preserved");
            }
            let seq = Type::coll(Topology::Sym(TopoSym::Seq), (**tau2).clone());
            for (i, r) in rules.iter().enumerate() {
                let mut c = ctx.with("self", TypeScheme::mono(Type::coll(r1.clone(), (**tau).clone())));
                for el in &r.pattern.elements {
                    c.insert(el.kind.var(), TypeScheme::mono((**tau).clone()));
                }
                let (dg, de) = (&d.premises[2 * i], &d.premises[2 * i + 1]);
                if dg.ty != Type::BOOL || de.ty != seq {
                    return bad("guard must be bool and replacement a sequence of the result content");
                }
                check_derivation(&c, &r.pattern.guard, dg)?;
                check_derivation(&c, &r.replacement, de)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use alloc::string::ToString;

    fn scheme(src: &str) -> String {
        let e = parse(src, Dialect::Strong).unwrap();
        let r = infer_program(&e).unwrap();
        check_derivation(&TypingContext::new(), &r.expr, &r.derivation).unwrap();
        r.scheme.to_string()
    }

    #[test]
    fn sort_like_transformation() {
        assert_eq!(scheme("{ x,y / x>y => [x, y, (x-y)] ; x => [x] }"), "forall t. [t] int -> [t] int");
    }

    #[test]
    fn identity_on_collections() {
        assert_eq!(scheme("{ x => [x] }"), "forall a,t. [t] a -> [t] a");
    }

    #[test]
    fn map() {
        assert_eq!(scheme("\\f. { x => [f x] }"), "forall a,b,t. (a -> b) -> [t] a -> [t] b");
    }

    #[test]
    fn grid_construction() {
        assert_eq!(scheme("1 est 2 nord 3 -est 4 :: empty_grid"), "[grid] int");
    }

    #[test]
    fn increment() {
        assert_eq!(scheme("{ x => [x+1] }"), "forall t. [t] int -> [t] int");
    }

    #[test]
    fn let_polymorphism() {
        assert_eq!(scheme("let id = \\x. x in if (id true) (id 1) 2"), "int");
    }

    #[test]
    fn errors_point_at_the_failing_expression() {
        let e = parse("1 + true", Dialect::Strong).unwrap();
        let err = infer_program(&e).unwrap_err();
        assert!(matches!(err.kind, InferErrorKind::Unify(_)));
        assert_eq!((err.span.start, err.span.end), (0, 8));
        let e = parse("{ x => [y] }", Dialect::Strong).unwrap();
        assert_eq!(infer_program(&e).unwrap_err().kind, InferErrorKind::Unbound("y".into()));
    }

    #[test]
    fn self_is_bound_in_rules() {
        assert_eq!(scheme("{ x |nord> y => [x] ; z => [z] }"), "forall a. [grid] a -> [grid] a");
    }

    #[test]
    fn checker_rejects_tampered_derivation() {
        let e = parse("\\x. x + 1", Dialect::Strong).unwrap();
        let r = infer_program(&e).unwrap();
        let mut d = r.derivation.clone();
        d.ty = Type::arrow(Type::BOOL, Type::INT);
        assert!(check_derivation(&TypingContext::new(), &r.expr, &d).is_err());
    }
}
