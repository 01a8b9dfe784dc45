use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{comp, gamma};
use crate::solver::{present_scheme, solve, Presented, SolveError};
use crate::syntax::{desugar_directions, Expr, ExprKind, Span};
use crate::types::{
    generalize, instantiate, normalize, tc, Constraint, Dialect, FreshSupply, TopoSym, Topology, Type, TypeScheme,
    TypingContext,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenOptions {
    /// Drop `t <= t'` for transformations that have a catch-all rule.
    pub refine_catch_all: bool,
}

/// Where a constraint comes from: the expression and the typing rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Origin {
    pub span: Span,
    pub rule: &'static str,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub ty: Type,
    pub constraints: Vec<(Constraint, Origin)>,
}

impl Generated {
    pub fn system(&self) -> Vec<Constraint> {
        self.constraints.iter().map(|(c, _)| c.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenError {
    Unbound { name: String, span: Span },
    SchemeUnsolvable { span: Span, error: SolveError },
}

impl GenError {
    pub fn span(&self) -> Span {
        match self {
            GenError::Unbound { span, .. } | GenError::SchemeUnsolvable { span, .. } => *span,
        }
    }
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::Unbound { name, .. } => write!(f, "unbound variable `{name}`"),
            GenError::SchemeUnsolvable { error, .. } => write!(f, "constraints cannot be satisfied: {error}"),
        }
    }
}

struct Gen {
    fresh: FreshSupply,
    opts: GenOptions,
    out: Vec<(Constraint, Origin)>,
}

impl Gen {
    fn emit(&mut self, lhs: Type, rhs: Type, span: Span, rule: &'static str) {
        self.out.push((Constraint::new(lhs, rhs), Origin { span, rule }));
    }

    fn inst(&mut self, sc: &TypeScheme, span: Span, rule: &'static str) -> Type {
        let (t, cs) = instantiate(sc, &mut self.fresh);
        for c in cs {
            self.emit(c.lhs, c.rhs, span, rule);
        }
        t
    }

    fn gen(&mut self, ctx: &TypingContext, e: &Expr) -> Result<Type, GenError> {
        match &e.kind {
            ExprKind::Var(x) => {
                let sc = ctx.get(x).ok_or_else(|| GenError::Unbound { name: x.clone(), span: e.span })?;
                let sc = sc.clone();
                Ok(self.inst(&sc, e.span, "var"))
            }
            ExprKind::Const(c) => Ok(self.inst(&tc(c, Dialect::Soft), e.span, "const")),
            ExprKind::Lambda(x, body) => {
                let a = self.fresh.type_var();
                let tb = self.gen(&ctx.with(x, TypeScheme::mono(a.clone())), body)?;
                Ok(Type::arrow(a, tb))
            }
            ExprKind::App(f, arg) => {
                let t1 = self.gen(ctx, f)?;
                let t2 = self.gen(ctx, arg)?;
                let t3 = self.fresh.type_var();
                let t4 = self.fresh.type_var();
                self.emit(t2, t3.clone(), e.span, "app");
                self.emit(t1, Type::arrow(t3, t4.clone()), e.span, "app");
                Ok(t4)
            }
            ExprKind::Let(x, bound, body) => {
                let mark = self.out.len();
                let t1 = self.gen(ctx, bound)?;
                let s1: Vec<Constraint> = self.out[mark..].iter().map(|(c, _)| c.clone()).collect();
                solve(&s1).map_err(|error| GenError::SchemeUnsolvable { span: bound.span, error })?;
                let sc = generalize(ctx, t1, s1);
                self.gen(&ctx.with(x, sc), body)
            }
            ExprKind::Trans(rules) => {
                let tau = self.fresh.type_var();
                let tau2 = self.fresh.type_var();
                let rho = self.fresh.topo_var();
                let self_ty = TypeScheme::mono(Type::coll(rho.clone(), tau.clone()));
                for r in rules {
                    let mut c = ctx.with("self", self_ty.clone());
                    for (x, t) in gamma(&r.pattern.elements, &tau) {
                        c.insert(&x, TypeScheme::mono(t));
                    }
                    let tg = self.gen(&c, &r.pattern.guard)?;
                    self.emit(tg, Type::BOOL, r.pattern.guard.span, "trans-guard");
                    let te = self.gen(&c, &r.replacement)?;
                    let ti = self.fresh.type_var();
                    let seq = Type::coll(Topology::Sym(TopoSym::Seq), ti.clone());
                    self.emit(te, seq, r.replacement.span, "trans-rhs");
                    self.emit(Type::cond(ti, comp(&r.pattern.elements, &tau)), tau2.clone(), e.span, "trans");
                }
                let filtered = self.opts.refine_catch_all && rules.iter().any(|r| r.pattern.is_catch_all());
                if !filtered {
                    self.emit(tau.clone(), tau2.clone(), e.span, "trans");
                }
                Ok(Type::arrow(Type::coll(rho.clone(), tau), Type::coll(rho, tau2)))
            }
        }
    }
}

/// Removes constraints equal to an earlier one under canonical form; the
/// first origin is kept.
fn dedup(cs: Vec<(Constraint, Origin)>) -> Vec<(Constraint, Origin)> {
    let mut seen: Vec<Constraint> = Vec::new();
    let mut out = Vec::new();
    for (c, o) in cs {
        let key = Constraint::new(normalize(&c.lhs), normalize(&c.rhs));
        if !seen.contains(&key) {
            seen.push(key);
            out.push((c, o));
        }
    }
    out
}

/// Generates the type and constraint set of `e` under `ctx`. Direction
/// tags are desugared first.
pub fn generate(ctx: &TypingContext, e: &Expr, opts: GenOptions) -> Result<Generated, GenError> {
    let e = desugar_directions(e);
    let mut g = Gen { fresh: FreshSupply::new(), opts, out: Vec::new() };
    let ty = g.gen(ctx, &e)?;
    Ok(Generated { ty, constraints: dedup(g.out) })
}

/// `generate` in the empty context, followed by a solvability check of the
/// whole set.
pub fn generate_program(e: &Expr, opts: GenOptions) -> Result<Generated, GenError> {
    let g = generate(&TypingContext::new(), e, opts)?;
    solve(&g.system()).map_err(|error| GenError::SchemeUnsolvable { span: e.span, error })?;
    Ok(g)
}

#[derive(Debug, Clone)]
pub struct SoftTyping {
    pub generated: Generated,
    /// Scheme presented under the least solution.
    pub presented: Presented,
}

pub fn infer_soft(e: &Expr, opts: GenOptions) -> Result<SoftTyping, GenError> {
    let generated = generate(&TypingContext::new(), e, opts)?;
    let presented = present_scheme(&generated.ty, &generated.system())
        .map_err(|error| GenError::SchemeUnsolvable { span: e.span, error })?;
    Ok(SoftTyping { generated, presented })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use crate::types::parse_scheme;
    use alloc::string::ToString;

    fn soft(src: &str, refine: bool) -> SoftTyping {
        let e = parse(src, Dialect::Soft).unwrap();
        infer_soft(&e, GenOptions { refine_catch_all: refine }).unwrap()
    }

    fn scheme(src: &str, refine: bool) -> String {
        soft(src, refine).presented.scheme.to_string()
    }

    #[test]
    fn int_test_keeps_content() {
        assert_eq!(scheme("{x:int => [x;1]}", false), "forall a,t. [t] a -> [t] a");
    }

    #[test]
    fn boolify() {
        let got = soft("{x:int => [true]}", false).presented.scheme;
        let want = parse_scheme("forall a,t. [t] a -> [t] (a | (bool ? (a & int)))").unwrap();
        assert_eq!(normalize(&got.body), normalize(&want.body));
        assert!(got.constraints.is_empty());
    }

    #[test]
    fn map_without_refinement() {
        assert_eq!(scheme("fun f -> {x => [f x]}", false), "forall a,b,t. (a -> b) -> [t] a -> [t] (a | b)");
    }

    #[test]
    fn map_with_refinement() {
        assert_eq!(scheme("fun f -> {x => [f x]}", true), "forall a,b,t. (a -> b) -> [t] a -> [t] b");
    }

    #[test]
    fn origins_point_into_source() {
        let src = "{x:int => [true]}";
        let g = soft(src, false).generated;
        assert!(!g.constraints.is_empty());
        for (_, o) in &g.constraints {
            assert!(o.span.end <= src.len() && o.span.start <= o.span.end);
        }
    }

    #[test]
    fn raw_boolify_constraints() {
        let g = soft("{x:int => [true]}", false).generated;
        let rendered: Vec<String> = g.system().iter().map(|c| c.to_string()).collect();
        assert!(rendered.iter().any(|c| c.contains("? (") && c.contains("& int")), "{rendered:?}");
    }

    #[test]
    fn unbound_variable() {
        let e = parse("{x => [y]}", Dialect::Soft).unwrap();
        let err = generate(&TypingContext::new(), &e, GenOptions::default()).unwrap_err();
        assert!(matches!(err, GenError::Unbound { ref name, .. } if name == "y"));
    }

    #[test]
    fn unsolvable_let() {
        let e = parse("let f = 1 2 in f", Dialect::Soft).unwrap();
        assert!(matches!(generate(&TypingContext::new(), &e, GenOptions::default()), Err(GenError::SchemeUnsolvable { .. })));
    }

    #[test]
    fn deterministic() {
        let a = soft("fun f -> {x, y / x > y => [f x]; z => [z]}", false);
        let b = soft("fun f -> {x, y / x > y => [f x]; z => [z]}", false);
        assert_eq!(a.generated.system(), b.generated.system());
        assert_eq!(a.presented.scheme, b.presented.scheme);
    }

    #[test]
    fn overloaded_plus() {
        assert_eq!(scheme("{x:int => [x + 1]; y => [y]}", false).contains("[t]"), true);
    }
}
