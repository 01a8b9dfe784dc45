use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::ParseError;
use crate::types::{BaseType, Dialect};

const KEYWORDS: &[&str] = &["let", "in", "fun", "as", "true", "false", "mod"];

pub fn parse(src: &str, dialect: Dialect) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    let e = p.expr()?;
    p.expect_eof()?;
    check_dialect(src, &e, dialect)?;
    Ok(e)
}

/// Rejects constructs outside the strong language: transformations must end
/// with an unguarded catch-all and patterns are untyped, star-free tuples.
pub fn check_dialect(src: &str, e: &Expr, dialect: Dialect) -> Result<(), ParseError> {
    match &e.kind {
        ExprKind::Var(_) | ExprKind::Const(_) => Ok(()),
        ExprKind::Lambda(_, b) => check_dialect(src, b, dialect),
        ExprKind::App(f, a) => {
            check_dialect(src, f, dialect)?;
            check_dialect(src, a, dialect)
        }
        ExprKind::Let(_, a, b) => {
            check_dialect(src, a, dialect)?;
            check_dialect(src, b, dialect)
        }
        ExprKind::Trans(rules) => {
            if dialect == Dialect::Strong {
                match rules.last() {
                    Some(r) if r.pattern.is_catch_all() => {}
                    _ => {
                        return Err(ParseError::dialect(
                            src,
                            e.span.start,
                            "a strong transformation must end with a catch-all rule `x => e`",
                        ))
                    }
                }
                for r in rules {
                    if r.pattern.elements.iter().any(|el| !matches!(el.kind, ElemKind::Plain(_))) {
                        return Err(ParseError::dialect(
                            src,
                            e.span.start,
                            "typed and star patterns are not part of the strong language",
                        ));
                    }
                }
            }
            for r in rules {
                check_dialect(src, &r.pattern.guard, dialect)?;
                check_dialect(src, &r.replacement, dialect)?;
            }
            Ok(())
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

fn infix_level(t: &Tok) -> Option<(u8, Prim)> {
    match t {
        Tok::Sym("||") => Some((1, Prim::Or)),
        Tok::Sym("&&") => Some((2, Prim::And)),
        Tok::Sym(">") => Some((3, Prim::Gt)),
        Tok::Sym("<") => Some((3, Prim::Lt)),
        Tok::Sym("=") => Some((3, Prim::Eq)),
        Tok::Sym("+") => Some((4, Prim::Add)),
        Tok::Sym("-") => Some((4, Prim::Sub)),
        Tok::Sym("*") => Some((5, Prim::Mul)),
        Tok::Ident(s) if s == "mod" => Some((5, Prim::Mod)),
        _ => None,
    }
}

fn cons_op(t: &Tok) -> Option<Prim> {
    match t {
        Tok::Sym("::") => Some(Prim::Cons),
        Tok::Ident(s) => match s.as_str() {
            "nord" => Some(Prim::Nord),
            "-nord" => Some(Prim::NegNord),
            "est" => Some(Prim::Est),
            "-est" => Some(Prim::NegEst),
            _ => None,
        },
        _ => None,
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn start(&self) -> usize {
        self.toks[self.pos].start
    }

    fn last_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].end
        }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        let found = match self.peek() {
            Tok::Eof => String::from("end of input"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Float(x) => format!("`{x}`"),
            Tok::Str(_) => String::from("string literal"),
        };
        Err(ParseError::syntax(self.src, self.start(), &format!("{msg}, found {found}")))
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(&format!("expected `{s}`"))
        }
    }

    fn expect_kw(&mut self, s: &str) -> Result<(), ParseError> {
        if self.is_kw(s) {
            self.bump();
            Ok(())
        } else {
            self.err(&format!("expected `{s}`"))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if matches!(self.peek(), Tok::Eof) {
            Ok(())
        } else {
            self.err("expected end of input")
        }
    }

    /// A name that may be bound by λ, let or a pattern.
    fn binder(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s)
                if !KEYWORDS.contains(&s.as_str())
                    && Prim::from_name(&s).is_none()
                    && s != "self"
                    && BaseType::from_name(&s).is_none() =>
            {
                self.bump();
                Ok(s)
            }
            _ => self.err("expected a variable name"),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let start = self.start();
        if self.is_kw("fun") {
            self.bump();
            let mut params = alloc::vec![self.binder()?];
            while !self.is_sym("->") {
                params.push(self.binder()?);
            }
            self.expect("->")?;
            let body = self.expr()?;
            return Ok(params.into_iter().rev().fold(body, |b, x| {
                let span = Span::new(start, b.span.end);
                Expr::new(ExprKind::Lambda(x, Box::new(b)), span)
            }));
        }
        if self.eat("\\") {
            let x = self.binder()?;
            self.expect(".")?;
            let body = self.expr()?;
            let span = Span::new(start, body.span.end);
            return Ok(Expr::new(ExprKind::Lambda(x, Box::new(body)), span));
        }
        if self.is_kw("let") {
            self.bump();
            let x = self.binder()?;
            self.expect("=")?;
            let bound = self.expr()?;
            self.expect_kw("in")?;
            let body = self.expr()?;
            let span = Span::new(start, body.span.end);
            return Ok(Expr::new(ExprKind::Let(x, Box::new(bound), Box::new(body)), span));
        }
        self.cons()
    }

    fn cons(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.binary(1)?;
        if let Some(p) = cons_op(self.peek()) {
            let op_span = Span::new(self.start(), self.toks[self.pos].end);
            self.bump();
            let rhs = if self.is_kw("fun") || self.is_kw("let") || self.is_sym("\\") { self.expr()? } else { self.cons()? };
            let op = Expr::new(ExprKind::Const(Constant::Prim(p)), op_span);
            return Ok(Expr::app(Expr::app(op, lhs), rhs));
        }
        Ok(lhs)
    }

    fn binary(&mut self, min: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.app()?;
        while let Some((lvl, p)) = infix_level(self.peek()) {
            if lvl < min {
                break;
            }
            let op_span = Span::new(self.start(), self.toks[self.pos].end);
            self.bump();
            let rhs = self.binary(lvl + 1)?;
            let op = Expr::new(ExprKind::Const(Constant::Prim(p)), op_span);
            lhs = Expr::app(Expr::app(op, lhs), rhs);
            if lvl == 3 && infix_level(self.peek()).is_some_and(|(l, _)| l == 3) {
                return self.err("comparison operators do not associate");
            }
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Int(_) | Tok::Float(_) | Tok::Str(_) => true,
            Tok::Sym(s) => matches!(*s, "(" | "[" | "{"),
            Tok::Ident(s) => {
                !matches!(s.as_str(), "let" | "in" | "fun" | "as" | "mod") && cons_op(self.peek()).is_none()
            }
            Tok::Eof => false,
        }
    }

    fn app(&mut self) -> Result<Expr, ParseError> {
        let mut f = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            f = Expr::app(f, a);
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let start = self.start();
        let end = self.toks[self.pos].end;
        let span = Span::new(start, end);
        match self.peek().clone() {
            // negative literal in operand position
            Tok::Sym("-") if matches!(self.peek_at(1), Tok::Int(_) | Tok::Float(_)) => {
                self.bump();
                let c = match self.bump() {
                    Tok::Int(n) => Constant::Int(n.wrapping_neg()),
                    Tok::Float(x) => Constant::Float(-x),
                    _ => unreachable!(),
                };
                Ok(Expr::new(ExprKind::Const(c), Span::new(start, self.last_end())))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::new(ExprKind::Const(Constant::Int(n)), span))
            }
            Tok::Float(x) => {
                self.bump();
                Ok(Expr::new(ExprKind::Const(Constant::Float(x)), span))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Expr::new(ExprKind::Const(Constant::Str(s)), span))
            }
            Tok::Ident(s) => {
                if s == "true" || s == "false" {
                    self.bump();
                    return Ok(Expr::new(ExprKind::Const(Constant::Bool(s == "true")), span));
                }
                if let Some(p) = Prim::from_name(&s) {
                    if p.is_infix() {
                        return self.err("infix operator used as a value; write it in parentheses");
                    }
                    self.bump();
                    return Ok(Expr::new(ExprKind::Const(Constant::Prim(p)), span));
                }
                if KEYWORDS.contains(&s.as_str()) {
                    return self.err("expected an expression");
                }
                self.bump();
                Ok(Expr::new(ExprKind::Var(s), span))
            }
            Tok::Sym("(") => {
                // operator section: `(+)`, `(::)`, `(nord)`, …
                if matches!(self.peek_at(2), Tok::Sym(")")) {
                    let op = match self.peek_at(1) {
                        t @ Tok::Sym(_) | t @ Tok::Ident(_) => infix_level(t).map(|(_, p)| p).or_else(|| cons_op(t)),
                        _ => None,
                    };
                    if let Some(p) = op {
                        self.bump();
                        self.bump();
                        self.bump();
                        return Ok(Expr::new(ExprKind::Const(Constant::Prim(p)), Span::new(start, self.last_end())));
                    }
                }
                self.bump();
                let mut e = self.expr()?;
                self.expect(")")?;
                e.span = Span::new(start, self.last_end());
                Ok(e)
            }
            Tok::Sym("[") => {
                self.bump();
                let mut items = Vec::new();
                if !self.eat("]") {
                    loop {
                        items.push(self.expr()?);
                        if self.eat("]") {
                            break;
                        }
                        if !(self.eat(",") || self.eat(";")) {
                            return self.err("expected `,` or `]`");
                        }
                    }
                }
                let mut e = Expr::seq(items);
                e.span = Span::new(start, self.last_end());
                Ok(e)
            }
            Tok::Sym("{") => {
                self.bump();
                let mut rules = Vec::new();
                loop {
                    rules.push(self.rule()?);
                    if self.eat("}") {
                        break;
                    }
                    self.expect(";")?;
                    if self.eat("}") {
                        break;
                    }
                }
                Ok(Expr::new(ExprKind::Trans(rules), Span::new(start, self.last_end())))
            }
            _ => self.err("expected an expression"),
        }
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let pat_start = self.start();
        let mut elements = alloc::vec![self.elem()?];
        loop {
            if self.eat(",") {
                elements.push(self.elem()?);
            } else if self.eat("|") {
                let dir = match self.peek() {
                    Tok::Ident(s) => Direction::from_name(s),
                    _ => None,
                };
                let Some(dir) = dir else {
                    return self.err("expected a direction (nord, -nord, est, -est)");
                };
                self.bump();
                self.expect(">")?;
                let mut el = self.elem()?;
                el.dir = Some(dir);
                elements.push(el);
            } else {
                break;
            }
        }
        let mut seen: Vec<&str> = Vec::new();
        for el in &elements {
            if seen.contains(&el.kind.var()) {
                return Err(ParseError::syntax(
                    self.src,
                    pat_start,
                    &format!("variable `{}` bound twice in pattern", el.kind.var()),
                ));
            }
            seen.push(el.kind.var());
        }
        let mut pattern = Pattern::new(elements);
        if self.eat("/") {
            pattern.guard = self.expr()?;
        }
        self.expect("=>")?;
        let replacement = self.expr()?;
        Ok(Rule { pattern, replacement })
    }

    fn elem(&mut self) -> Result<ElemPattern, ParseError> {
        if self.eat("*") {
            self.expect_kw("as")?;
            return Ok(ElemPattern::new(ElemKind::Star(self.binder()?)));
        }
        if let Tok::Ident(s) = self.peek() {
            if let Some(b) = BaseType::from_name(s) {
                self.bump();
                self.expect("*")?;
                self.expect_kw("as")?;
                return Ok(ElemPattern::new(ElemKind::TypedStar(b, self.binder()?)));
            }
        }
        let x = self.binder()?;
        if self.eat(":") {
            let b = match self.peek() {
                Tok::Ident(s) => BaseType::from_name(s),
                _ => None,
            };
            let Some(b) = b else {
                return self.err("expected a base type (int, bool, float, string)");
            };
            self.bump();
            return Ok(ElemPattern::new(ElemKind::Typed(x, b)));
        }
        Ok(ElemPattern::new(ElemKind::Plain(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ParseErrorKind;

    #[test]
    fn swap_rule() {
        let e = parse("{ x,y / x>y => [y,x] }", Dialect::Soft).unwrap();
        let ExprKind::Trans(rules) = &e.kind else { panic!() };
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].pattern.elements.len(), 2);
        let expected = Expr::binop(Prim::Gt, Expr::var("x"), Expr::var("y"));
        assert!(rules[0].pattern.guard.alpha_eq(&expected));
    }

    #[test]
    fn lambda_forms() {
        let id = Expr::lambda("x", Expr::var("x"));
        assert!(parse("\\x.x", Dialect::Strong).unwrap().alpha_eq(&id));
        assert!(parse("λx.x", Dialect::Strong).unwrap().alpha_eq(&id));
        assert!(parse("fun x -> x", Dialect::Strong).unwrap().alpha_eq(&id));
    }

    #[test]
    fn strong_requires_catch_all() {
        assert!(parse("{ x => [x] }", Dialect::Strong).is_ok());
        let e = parse("{ x:int => [x] }", Dialect::Strong).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Dialect);
        let e = parse("{ x, y => [x] }", Dialect::Strong).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Dialect);
        assert!(parse("{ x:int => [x] }", Dialect::Soft).is_ok());
    }

    #[test]
    fn grid_constructors_are_right_associative() {
        let e = parse("1 est 2 nord 3 -est 4 :: empty_grid", Dialect::Strong).unwrap();
        let expected = Expr::binop(
            Prim::Est,
            Expr::int(1),
            Expr::binop(
                Prim::Nord,
                Expr::int(2),
                Expr::binop(Prim::NegEst, Expr::int(3), Expr::binop(Prim::Cons, Expr::int(4), Expr::prim(Prim::EmptyGrid))),
            ),
        );
        assert!(e.alpha_eq(&expected));
    }

    #[test]
    fn precedence() {
        let e = parse("f x + 1 > 2 && b :: s", Dialect::Soft).unwrap();
        let fx1 = Expr::binop(Prim::Add, Expr::app(Expr::var("f"), Expr::var("x")), Expr::int(1));
        let cmp = Expr::binop(Prim::Gt, fx1, Expr::int(2));
        let and = Expr::binop(Prim::And, cmp, Expr::var("b"));
        assert!(e.alpha_eq(&Expr::binop(Prim::Cons, and, Expr::var("s"))));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse("let x = 1 in\n  x +", Dialect::Soft).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!((e.line, e.column), (2, 6));
    }

    #[test]
    fn patterns() {
        let e = parse("{ int* as xs, * as ys, z:float |nord> w => xs }", Dialect::Soft).unwrap();
        let ExprKind::Trans(rules) = &e.kind else { panic!() };
        let els = &rules[0].pattern.elements;
        assert_eq!(els[0].kind, ElemKind::TypedStar(BaseType::Int, "xs".into()));
        assert_eq!(els[1].kind, ElemKind::Star("ys".into()));
        assert_eq!(els[3].dir, Some(Direction::Nord));
        assert!(parse("{ x, x => [x] }", Dialect::Soft).is_err());
    }

    #[test]
    fn negative_literals() {
        let e = parse("f (-1) (-2.5)", Dialect::Soft).unwrap();
        assert_eq!(alloc::format!("{e}"), "f (-1) (-2.5)");
        assert_eq!(alloc::format!("{}", parse("3 - 1", Dialect::Soft).unwrap()), "(3 - 1)");
        assert_eq!(alloc::format!("{}", parse("-1 + 2", Dialect::Soft).unwrap()), "((-1) + 2)");
    }

    #[test]
    fn semicolon_lists() {
        let a = parse("[x;1]", Dialect::Soft).unwrap();
        let b = parse("[x, 1]", Dialect::Soft).unwrap();
        assert!(a.alpha_eq(&b));
    }
}
