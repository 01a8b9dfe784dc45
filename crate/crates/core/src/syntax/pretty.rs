use core::fmt;

use super::ast::*;

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Int(n) => write!(f, "{n}"),
            Constant::Float(x) => {
                if x.is_finite() && x.abs() < 1e15 && *x == (*x as i64) as f64 {
                    write!(f, "{x:.1}")
                } else {
                    write!(f, "{x}")
                }
            }
            Constant::Bool(b) => write!(f, "{b}"),
            Constant::Str(s) => write!(f, "{s:?}"),
            Constant::Prim(p) if p.is_infix() => write!(f, "({})", p.name()),
            Constant::Prim(p) => f.write_str(p.name()),
        }
    }
}

impl fmt::Display for ElemPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ElemKind::Plain(x) => f.write_str(x),
            ElemKind::Typed(x, b) => write!(f, "{x}:{}", b.name()),
            ElemKind::Star(x) => write!(f, "* as {x}"),
            ElemKind::TypedStar(b, x) => write!(f, "{}* as {x}", b.name()),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, el) in self.pattern.elements.iter().enumerate() {
            match el.dir {
                Some(d) => write!(f, " |{}> ", d.name())?,
                None if i > 0 => f.write_str(", ")?,
                None => {}
            }
            write!(f, "{el}")?;
        }
        if self.pattern.has_guard() {
            write!(f, " / {}", self.pattern.guard)?;
        }
        write!(f, " => {}", self.replacement)
    }
}

fn atomic(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Var(_) | ExprKind::Trans(_) => true,
        ExprKind::Const(Constant::Int(n)) => *n >= 0,
        ExprKind::Const(Constant::Float(x)) => *x >= 0.0,
        ExprKind::Const(_) => true,
        _ => e.as_seq_literal().is_some() || e.as_binop().is_some(),
    }
}

fn write_arg(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    if atomic(e) {
        write!(f, "{e}")
    } else {
        write!(f, "({e})")
    }
}

/// Binary applications print fully bracketed, so operands only need brackets
/// when they would swallow the operator (λ, let).
fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    if atomic(e) || (matches!(e.kind, ExprKind::App(..)) && e.as_binop().is_none()) {
        write!(f, "{e}")
    } else {
        write!(f, "({e})")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(items) = self.as_seq_literal() {
            f.write_str("[")?;
            for (i, it) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{it}")?;
            }
            return f.write_str("]");
        }
        if let Some((p, a, b)) = self.as_binop() {
            f.write_str("(")?;
            write_operand(f, a)?;
            write!(f, " {} ", p.name())?;
            write_operand(f, b)?;
            return f.write_str(")");
        }
        match &self.kind {
            ExprKind::Var(x) => f.write_str(x),
            ExprKind::Const(c) => write!(f, "{c}"),
            ExprKind::Lambda(x, b) => write!(f, "\\{x}. {b}"),
            ExprKind::App(g, a) => {
                if matches!(g.kind, ExprKind::App(..)) && g.as_binop().is_none() || atomic(g) {
                    write!(f, "{g}")?;
                } else {
                    write!(f, "({g})")?;
                }
                f.write_str(" ")?;
                write_arg(f, a)
            }
            ExprKind::Let(x, a, b) => write!(f, "let {x} = {a} in {b}"),
            ExprKind::Trans(rules) => {
                f.write_str("{")?;
                for (i, r) in rules.iter().enumerate() {
                    f.write_str(if i > 0 { "; " } else { "" })?;
                    write!(f, "{r}")?;
                }
                f.write_str("}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::parse;
    use crate::types::Dialect;

    fn roundtrip(src: &str) -> alloc::string::String {
        let e = parse(src, Dialect::Soft).unwrap();
        let printed = alloc::format!("{e}");
        let again = parse(&printed, Dialect::Soft).unwrap();
        assert!(e.alpha_eq(&again), "{printed}");
        printed
    }

    #[test]
    fn swap_prints_with_brackets() {
        assert_eq!(roundtrip("{ x,y / x>y => [y,x] }"), "{x, y / (x > y) => [y, x]}");
    }

    #[test]
    fn nested_operators() {
        assert_eq!(roundtrip("1 + 2 * 3"), "(1 + (2 * 3))");
        assert_eq!(roundtrip("{ x,y / x>y => [x,y,(x-y)] ; x => [x] }"), "{x, y / (x > y) => [x, y, (x - y)]; x => [x]}");
        assert_eq!(roundtrip("(+)"), "(+)");
        roundtrip("\\f. fun x -> f (f x) :: empty_set");
        roundtrip("let g = { x:int |nord> y => [x + y]; * as r => r } in g (1 est empty_grid)");
        roundtrip("if (x > 0 - 1) \"a\\\"b\" 2.0");
    }
}
