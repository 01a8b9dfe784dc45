use alloc::string::String;
use alloc::vec::Vec;

use super::unify::unify;
use super::{Derivation, InferError, InferErrorKind};
use crate::syntax::{ElemKind, Expr, ExprKind};
use crate::types::{
    generalize, instantiate, tc, Dialect, FreshSupply, Substitution, TopoSym, Topology, Type, TypeScheme,
    TypingContext,
};

pub(super) struct W {
    pub fresh: FreshSupply,
}

fn mismatch(e: &Expr, err: super::UnifyError) -> InferError {
    InferError { kind: InferErrorKind::Unify(err), span: e.span }
}

impl W {
    fn unify_at(&self, e: &Expr, a: &Type, b: &Type) -> Result<Substitution, InferError> {
        unify(a, b).map_err(|err| mismatch(e, err))
    }

    pub fn infer(&mut self, ctx: &TypingContext, e: &Expr) -> Result<(Substitution, Type, Derivation), InferError> {
        match &e.kind {
            ExprKind::Var(x) => {
                let sc = ctx.get(x).ok_or_else(|| InferError {
                    kind: InferErrorKind::Unbound(x.clone()),
                    span: e.span,
                })?;
                let (t, _) = instantiate(sc, &mut self.fresh);
                Ok((Substitution::new(), t.clone(), Derivation::leaf("var-inst", t)))
            }
            ExprKind::Const(c) => {
                let (t, _) = instantiate(&tc(c, Dialect::Strong), &mut self.fresh);
                Ok((Substitution::new(), t.clone(), Derivation::leaf("const-inst", t)))
            }
            ExprKind::Lambda(x, body) => {
                let a = self.fresh.type_var();
                let (s, tb, d) = self.infer(&ctx.with(x, TypeScheme::mono(a.clone())), body)?;
                let t = Type::arrow(s.apply(&a), tb);
                Ok((s, t.clone(), Derivation::node("fun", t, alloc::vec![d])))
            }
            ExprKind::App(f, arg) => {
                let (s1, tf, d1) = self.infer(ctx, f)?;
                let (s2, ta, d2) = self.infer(&ctx.apply(&s1), arg)?;
                let b = self.fresh.type_var();
                let s3 = self.unify_at(e, &s2.apply(&tf), &Type::arrow(ta, b.clone()))?;
                let t = s3.apply(&b);
                Ok((s3.compose(&s2.compose(&s1)), t.clone(), Derivation::node("app", t, alloc::vec![d1, d2])))
            }
            ExprKind::Let(x, bound, body) => {
                let (s1, t1, d1) = self.infer(ctx, bound)?;
                let ctx1 = ctx.apply(&s1);
                let sc = generalize(&ctx1, t1, Vec::new());
                let (s2, t2, d2) = self.infer(&ctx1.with(x, sc), body)?;
                Ok((s2.compose(&s1), t2.clone(), Derivation::node("let", t2, alloc::vec![d1, d2])))
            }
            ExprKind::Trans(rules) => {
                let tau = self.fresh.type_var();
                let tau2 = self.fresh.type_var();
                let rho = self.fresh.topo_var();
                let mut s = Substitution::new();
                let mut premises = Vec::new();
                for r in rules {
                    let rule_ctx = |s: &Substitution| {
                        let t = s.apply(&tau);
                        let mut c = ctx.apply(s).with("self", TypeScheme::mono(Type::coll(s.apply_topo(&rho), t.clone())));
                        for el in &r.pattern.elements {
                            debug_assert!(matches!(el.kind, ElemKind::Plain(_)));
                            c.insert(el.kind.var(), TypeScheme::mono(t.clone()));
                        }
                        c
                    };
                    let (sg, tg, dg) = self.infer(&rule_ctx(&s), &r.pattern.guard)?;
                    s = sg.compose(&s);
                    let u = self.unify_at(&r.pattern.guard, &tg, &Type::BOOL)?;
                    s = u.compose(&s);
                    let (se, te, de) = self.infer(&rule_ctx(&s), &r.replacement)?;
                    s = se.compose(&s);
                    let want = Type::coll(Topology::Sym(TopoSym::Seq), s.apply(&tau2));
                    let u = self.unify_at(&r.replacement, &te, &want)?;
                    s = u.compose(&s);
                    premises.push(dg);
                    premises.push(de);
                }
                let t = s.apply(&Type::arrow(Type::coll(rho.clone(), tau), Type::coll(rho, tau2)));
                Ok((s, t.clone(), Derivation::node("trans", t, premises)))
            }
        }
    }
}

impl Derivation {
    fn leaf(rule: &'static str, ty: Type) -> Self {
        Derivation { rule: String::from(rule), ty, premises: Vec::new() }
    }

    fn node(rule: &'static str, ty: Type, premises: Vec<Derivation>) -> Self {
        Derivation { rule: String::from(rule), ty, premises }
    }

    /// Applies `s` to every judgement of the tree.
    pub fn apply(&self, s: &Substitution) -> Derivation {
        Derivation {
            rule: self.rule.clone(),
            ty: s.apply(&self.ty),
            premises: self.premises.iter().map(|d| d.apply(s)).collect(),
        }
    }
}
