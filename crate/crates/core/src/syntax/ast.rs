use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::types::BaseType;

/// Byte range into the source text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span { start: self.start.min(other.start), end: self.end.max(other.end) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Var(String),
    Const(Constant),
    Lambda(String, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Let(String, Box<Expr>, Box<Expr>),
    Trans(Vec<Rule>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Constant {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    Prim(Prim),
}

/// Built-in operators and constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prim {
    Cons,
    Nord,
    NegNord,
    Est,
    NegEst,
    EmptySeq,
    EmptySet,
    EmptyBag,
    EmptyGrid,
    If,
    Gt,
    Lt,
    Eq,
    Add,
    Sub,
    Mul,
    Mod,
    And,
    Or,
    NordNb,
    NegNordNb,
    EstNb,
    NegEstNb,
}

impl Prim {
    pub const ALL: [Prim; 23] = [
        Prim::Cons,
        Prim::Nord,
        Prim::NegNord,
        Prim::Est,
        Prim::NegEst,
        Prim::EmptySeq,
        Prim::EmptySet,
        Prim::EmptyBag,
        Prim::EmptyGrid,
        Prim::If,
        Prim::Gt,
        Prim::Lt,
        Prim::Eq,
        Prim::Add,
        Prim::Sub,
        Prim::Mul,
        Prim::Mod,
        Prim::And,
        Prim::Or,
        Prim::NordNb,
        Prim::NegNordNb,
        Prim::EstNb,
        Prim::NegEstNb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Prim::Cons => "::",
            Prim::Nord => "nord",
            Prim::NegNord => "-nord",
            Prim::Est => "est",
            Prim::NegEst => "-est",
            Prim::EmptySeq => "empty_seq",
            Prim::EmptySet => "empty_set",
            Prim::EmptyBag => "empty_bag",
            Prim::EmptyGrid => "empty_grid",
            Prim::If => "if",
            Prim::Gt => ">",
            Prim::Lt => "<",
            Prim::Eq => "=",
            Prim::Add => "+",
            Prim::Sub => "-",
            Prim::Mul => "*",
            Prim::Mod => "mod",
            Prim::And => "&&",
            Prim::Or => "||",
            Prim::NordNb => "nord_nb",
            Prim::NegNordNb => "-nord_nb",
            Prim::EstNb => "est_nb",
            Prim::NegEstNb => "-est_nb",
        }
    }

    pub fn from_name(s: &str) -> Option<Prim> {
        Prim::ALL.iter().copied().find(|p| p.name() == s)
    }

    /// Number of arguments before the builtin fires.
    pub fn arity(self) -> usize {
        match self {
            Prim::EmptySeq | Prim::EmptySet | Prim::EmptyBag | Prim::EmptyGrid => 0,
            Prim::If | Prim::NordNb | Prim::NegNordNb | Prim::EstNb | Prim::NegEstNb => 3,
            _ => 2,
        }
    }

    /// Operators written infix in source.
    pub fn is_infix(self) -> bool {
        !matches!(
            self,
            Prim::EmptySeq
                | Prim::EmptySet
                | Prim::EmptyBag
                | Prim::EmptyGrid
                | Prim::If
                | Prim::NordNb
                | Prim::NegNordNb
                | Prim::EstNb
                | Prim::NegEstNb
        )
    }

    pub fn direction(self) -> Option<Direction> {
        match self {
            Prim::Nord | Prim::NordNb => Some(Direction::Nord),
            Prim::NegNord | Prim::NegNordNb => Some(Direction::NegNord),
            Prim::Est | Prim::EstNb => Some(Direction::Est),
            Prim::NegEst | Prim::NegEstNb => Some(Direction::NegEst),
            _ => None,
        }
    }
}

/// Grid directions. `nord` is `(0, +1)`, `est` is `(+1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Nord,
    NegNord,
    Est,
    NegEst,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Nord => "nord",
            Direction::NegNord => "-nord",
            Direction::Est => "est",
            Direction::NegEst => "-est",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "nord" => Direction::Nord,
            "-nord" => Direction::NegNord,
            "est" => Direction::Est,
            "-est" => Direction::NegEst,
            _ => return None,
        })
    }

    pub fn offset(self) -> (i64, i64) {
        match self {
            Direction::Nord => (0, 1),
            Direction::NegNord => (0, -1),
            Direction::Est => (1, 0),
            Direction::NegEst => (-1, 0),
        }
    }

    /// The neighbourhood predicate used when the direction is desugared.
    pub fn predicate(self) -> Prim {
        match self {
            Direction::Nord => Prim::NordNb,
            Direction::NegNord => Prim::NegNordNb,
            Direction::Est => Prim::EstNb,
            Direction::NegEst => Prim::NegEstNb,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub pattern: Pattern,
    pub replacement: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub elements: Vec<ElemPattern>,
    pub guard: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElemPattern {
    pub kind: ElemKind,
    /// Direction written in place of the comma preceding this element.
    pub dir: Option<Direction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElemKind {
    Plain(String),
    Typed(String, BaseType),
    Star(String),
    TypedStar(BaseType, String),
}

impl ElemKind {
    pub fn var(&self) -> &str {
        match self {
            ElemKind::Plain(x) | ElemKind::Typed(x, _) | ElemKind::Star(x) | ElemKind::TypedStar(_, x) => x,
        }
    }

    pub fn type_test(&self) -> Option<BaseType> {
        match self {
            ElemKind::Typed(_, b) | ElemKind::TypedStar(b, _) => Some(*b),
            _ => None,
        }
    }

    pub fn is_star(&self) -> bool {
        matches!(self, ElemKind::Star(_) | ElemKind::TypedStar(..))
    }
}

impl ElemPattern {
    pub fn new(kind: ElemKind) -> Self {
        ElemPattern { kind, dir: None }
    }
}

impl Pattern {
    pub fn new(elements: Vec<ElemPattern>) -> Self {
        Pattern { elements, guard: Expr::constant(Constant::Bool(true)) }
    }

    pub fn bound_vars(&self) -> Vec<&str> {
        self.elements.iter().map(|e| e.kind.var()).collect()
    }

    pub fn has_guard(&self) -> bool {
        !matches!(self.guard.kind, ExprKind::Const(Constant::Bool(true)))
    }

    /// A single untyped, unguarded variable: matches every element.
    pub fn is_catch_all(&self) -> bool {
        self.elements.len() == 1
            && matches!(self.elements[0].kind, ElemKind::Plain(_))
            && self.elements[0].dir.is_none()
            && !self.has_guard()
    }

    pub fn has_directions(&self) -> bool {
        self.elements.iter().any(|e| e.dir.is_some())
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    pub fn var(name: &str) -> Self {
        Expr::new(ExprKind::Var(name.into()), Span::default())
    }

    pub fn constant(c: Constant) -> Self {
        Expr::new(ExprKind::Const(c), Span::default())
    }

    pub fn prim(p: Prim) -> Self {
        Expr::constant(Constant::Prim(p))
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(Constant::Int(n))
    }

    pub fn app(f: Expr, a: Expr) -> Self {
        let span = f.span.join(a.span);
        Expr::new(ExprKind::App(Box::new(f), Box::new(a)), span)
    }

    pub fn apps(f: Expr, args: impl IntoIterator<Item = Expr>) -> Self {
        args.into_iter().fold(f, Expr::app)
    }

    pub fn binop(p: Prim, a: Expr, b: Expr) -> Self {
        Expr::app(Expr::app(Expr::prim(p), a), b)
    }

    pub fn lambda(x: &str, body: Expr) -> Self {
        let span = body.span;
        Expr::new(ExprKind::Lambda(x.into(), Box::new(body)), span)
    }

    pub fn let_in(x: &str, bound: Expr, body: Expr) -> Self {
        let span = bound.span.join(body.span);
        Expr::new(ExprKind::Let(x.into(), Box::new(bound), Box::new(body)), span)
    }

    pub fn trans(rules: Vec<Rule>) -> Self {
        Expr::new(ExprKind::Trans(rules), Span::default())
    }

    /// `[e1, …, en]` as `e1 :: … :: en :: empty_seq`.
    pub fn seq(items: Vec<Expr>) -> Self {
        items.into_iter().rev().fold(Expr::prim(Prim::EmptySeq), |acc, e| Expr::binop(Prim::Cons, e, acc))
    }

    /// If this is `op a b` for a binary infix operator, returns its parts.
    pub fn as_binop(&self) -> Option<(Prim, &Expr, &Expr)> {
        if let ExprKind::App(f, b) = &self.kind {
            if let ExprKind::App(op, a) = &f.kind {
                if let ExprKind::Const(Constant::Prim(p)) = op.kind {
                    if p.is_infix() {
                        return Some((p, a, b));
                    }
                }
            }
        }
        None
    }

    /// If this is a `[…]` literal, returns its items.
    pub fn as_seq_literal(&self) -> Option<Vec<&Expr>> {
        let mut items = Vec::new();
        let mut cur = self;
        loop {
            match &cur.kind {
                ExprKind::Const(Constant::Prim(Prim::EmptySeq)) => return Some(items),
                _ => match cur.as_binop() {
                    Some((Prim::Cons, h, t)) => {
                        items.push(h);
                        cur = t;
                    }
                    _ => return None,
                },
            }
        }
    }

    /// Structural equality up to renaming of bound variables, ignoring spans.
    pub fn alpha_eq(&self, other: &Expr) -> bool {
        alpha(self, other, &mut Vec::new())
    }

    /// Variables occurring free.
    pub fn free_vars(&self) -> alloc::collections::BTreeSet<String> {
        let mut out = alloc::collections::BTreeSet::new();
        free(self, &mut Vec::new(), &mut out);
        out
    }
}

fn free(e: &Expr, bound: &mut Vec<String>, out: &mut alloc::collections::BTreeSet<String>) {
    match &e.kind {
        ExprKind::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        ExprKind::Const(_) => {}
        ExprKind::Lambda(x, b) => {
            bound.push(x.clone());
            free(b, bound, out);
            bound.pop();
        }
        ExprKind::App(f, a) => {
            free(f, bound, out);
            free(a, bound, out);
        }
        ExprKind::Let(x, e1, e2) => {
            free(e1, bound, out);
            bound.push(x.clone());
            free(e2, bound, out);
            bound.pop();
        }
        ExprKind::Trans(rules) => {
            for r in rules {
                let n = bound.len();
                bound.push("self".into());
                bound.extend(r.pattern.bound_vars().into_iter().map(String::from));
                free(&r.pattern.guard, bound, out);
                free(&r.replacement, bound, out);
                bound.truncate(n);
            }
        }
    }
}

/// Pairs of bound names, innermost last.
type Binders = Vec<(String, String)>;

fn same_var(x: &str, y: &str, env: &Binders) -> bool {
    for (a, b) in env.iter().rev() {
        if a == x || b == y {
            return a == x && b == y;
        }
    }
    x == y
}

fn alpha(a: &Expr, b: &Expr, env: &mut Binders) -> bool {
    match (&a.kind, &b.kind) {
        (ExprKind::Var(x), ExprKind::Var(y)) => same_var(x, y, env),
        (ExprKind::Const(c), ExprKind::Const(d)) => match (c, d) {
            (Constant::Float(x), Constant::Float(y)) => x.to_bits() == y.to_bits(),
            _ => c == d,
        },
        (ExprKind::Lambda(x, e1), ExprKind::Lambda(y, e2)) => {
            env.push((x.clone(), y.clone()));
            let r = alpha(e1, e2, env);
            env.pop();
            r
        }
        (ExprKind::App(f1, a1), ExprKind::App(f2, a2)) => alpha(f1, f2, env) && alpha(a1, a2, env),
        (ExprKind::Let(x, b1, e1), ExprKind::Let(y, b2, e2)) => {
            if !alpha(b1, b2, env) {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let r = alpha(e1, e2, env);
            env.pop();
            r
        }
        (ExprKind::Trans(r1), ExprKind::Trans(r2)) => {
            r1.len() == r2.len() && r1.iter().zip(r2).all(|(x, y)| alpha_rule(x, y, env))
        }
        _ => false,
    }
}

fn alpha_rule(r1: &Rule, r2: &Rule, env: &mut Binders) -> bool {
    let (p1, p2) = (&r1.pattern, &r2.pattern);
    if p1.elements.len() != p2.elements.len() {
        return false;
    }
    let n = env.len();
    env.push(("self".into(), "self".into()));
    for (e1, e2) in p1.elements.iter().zip(&p2.elements) {
        let shape_ok = e1.dir == e2.dir
            && match (&e1.kind, &e2.kind) {
                (ElemKind::Plain(_), ElemKind::Plain(_)) | (ElemKind::Star(_), ElemKind::Star(_)) => true,
                (ElemKind::Typed(_, b1), ElemKind::Typed(_, b2))
                | (ElemKind::TypedStar(b1, _), ElemKind::TypedStar(b2, _)) => b1 == b2,
                _ => false,
            };
        if !shape_ok {
            env.truncate(n);
            return false;
        }
        env.push((e1.kind.var().into(), e2.kind.var().into()));
    }
    let r = alpha(&p1.guard, &p2.guard, env) && alpha(&r1.replacement, &r2.replacement, env);
    env.truncate(n);
    r
}

/// Bindings introduced by a pattern, by name.
pub fn pattern_bindings<T: Clone>(p: &Pattern, f: impl Fn(&ElemKind) -> T) -> BTreeMap<String, T> {
    p.elements.iter().map(|e| (String::from(e.kind.var()), f(&e.kind))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_equivalence_renames_binders() {
        let a = Expr::lambda("x", Expr::var("x"));
        let b = Expr::lambda("y", Expr::var("y"));
        assert!(a.alpha_eq(&b));
        let c = Expr::lambda("y", Expr::var("x"));
        assert!(!a.alpha_eq(&c));
    }

    #[test]
    fn seq_literal_roundtrip() {
        let e = Expr::seq(alloc::vec![Expr::int(1), Expr::int(2)]);
        assert_eq!(e.as_seq_literal().unwrap().len(), 2);
    }

    #[test]
    fn prim_names_are_unique() {
        for p in Prim::ALL {
            assert_eq!(Prim::from_name(p.name()), Some(p));
        }
    }
}
