//! Expressions, patterns and transformations: AST, parser and printer.

mod ast;
mod lexer;
mod parser;
mod pretty;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use ast::*;
pub use parser::{check_dialect, parse};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    /// Well-formed, but outside the requested language.
    Dialect,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, col)
}

impl ParseError {
    pub fn syntax(src: &str, offset: usize, msg: &str) -> Self {
        let (line, column) = line_col(src, offset);
        ParseError { kind: ParseErrorKind::Syntax, line, column, message: msg.into() }
    }

    pub fn dialect(src: &str, offset: usize, msg: &str) -> Self {
        let (line, column) = line_col(src, offset);
        ParseError { kind: ParseErrorKind::Dialect, line, column, message: msg.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Dialect => "not in this language",
        };
        write!(f, "{}:{}: {what}: {}", self.line, self.column, self.message)
    }
}

/// Replaces `x |d> y` in patterns by a plain comma and a guard conjunct
/// `d_nb self x y`. Applied everywhere in the expression.
pub fn desugar_directions(e: &Expr) -> Expr {
    let kind = match &e.kind {
        ExprKind::Var(_) | ExprKind::Const(_) => return e.clone(),
        ExprKind::Lambda(x, b) => ExprKind::Lambda(x.clone(), b.clone_map(desugar_directions)),
        ExprKind::App(f, a) => ExprKind::App(f.clone_map(desugar_directions), a.clone_map(desugar_directions)),
        ExprKind::Let(x, a, b) => {
            ExprKind::Let(x.clone(), a.clone_map(desugar_directions), b.clone_map(desugar_directions))
        }
        ExprKind::Trans(rules) => ExprKind::Trans(rules.iter().map(desugar_rule).collect()),
    };
    Expr::new(kind, e.span)
}

fn desugar_rule(r: &Rule) -> Rule {
    let mut conjuncts: Vec<Expr> = Vec::new();
    let mut elements = Vec::with_capacity(r.pattern.elements.len());
    for (i, el) in r.pattern.elements.iter().enumerate() {
        if let (Some(d), Some(prev)) = (el.dir, i.checked_sub(1)) {
            let x = r.pattern.elements[prev].kind.var();
            conjuncts.push(Expr::apps(
                Expr::prim(d.predicate()),
                [Expr::var("self"), Expr::var(x), Expr::var(el.kind.var())],
            ));
        }
        elements.push(ElemPattern::new(el.kind.clone()));
    }
    let mut guard = desugar_directions(&r.pattern.guard);
    if !conjuncts.is_empty() {
        let mut it = conjuncts.into_iter();
        let first = it.next().unwrap();
        let dirs = it.fold(first, |acc, c| Expr::binop(Prim::And, acc, c));
        guard = if r.pattern.has_guard() { Expr::binop(Prim::And, dirs, guard) } else { dirs };
    }
    Rule { pattern: Pattern { elements, guard }, replacement: desugar_directions(&r.replacement) }
}

trait CloneMap {
    fn clone_map(&self, f: fn(&Expr) -> Expr) -> alloc::boxed::Box<Expr>;
}

impl CloneMap for alloc::boxed::Box<Expr> {
    fn clone_map(&self, f: fn(&Expr) -> Expr) -> alloc::boxed::Box<Expr> {
        alloc::boxed::Box::new(f(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Dialect;

    #[test]
    fn direction_becomes_guard() {
        let e = parse("{ x |nord> y => [y] ; z => [z] }", Dialect::Soft).unwrap();
        let d = desugar_directions(&e);
        let expected = parse("{ x, y / nord_nb self x y => [y] ; z => [z] }", Dialect::Soft).unwrap();
        assert!(d.alpha_eq(&expected));
    }

    #[test]
    fn direction_joins_existing_guard() {
        let e = parse("{ x |est> y / x > y => [y] }", Dialect::Soft).unwrap();
        let expected = parse("{ x, y / est_nb self x y && x > y => [y] }", Dialect::Soft).unwrap();
        assert!(desugar_directions(&e).alpha_eq(&expected));
    }

    #[test]
    fn line_and_column() {
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
        assert_eq!(line_col("", 0), (1, 1));
    }
}
