//! Concrete syntax for types, constraints and schemes:
//!
//! ```text
//! forall a,b,t. [t] a -> [t] b where {a <= b, (bool ? (a & int)) <= b}
//! ```

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{BaseType, Constraint, TopoSym, Topology, Type, TypeScheme};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeSyntaxError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for TypeSyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type syntax error at offset {}: {}", self.offset, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, TypeSyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
            continue;
        }
        let two = if i + 1 < bytes.len() { &src[i..i + 2] } else { "" };
        let sym: &'static str = match two {
            "->" => "->",
            "<=" => "<=",
            _ => match c {
                b'[' => "[",
                b']' => "]",
                b'(' => "(",
                b')' => ")",
                b'|' => "|",
                b'&' => "&",
                b'?' => "?",
                b'0' => "0",
                b'1' => "1",
                b',' => ",",
                b'.' => ".",
                b'{' => "{",
                b'}' => "}",
                b'=' => "=",
                _ => {
                    return Err(TypeSyntaxError { offset: i, message: alloc::format!("unexpected `{}`", c as char) })
                }
            },
        };
        out.push((i, Tok::Sym(sym)));
        i += sym.len();
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, TypeSyntaxError> {
        Ok(Parser { toks: lex(src)?, pos: 0, end: src.len() })
    }

    fn err<T>(&self, message: &str) -> Result<T, TypeSyntaxError> {
        let offset = self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end);
        Err(TypeSyntaxError { offset, message: message.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(x)) if *x == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(x)) if x == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), TypeSyntaxError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(&alloc::format!("expected `{s}`"))
        }
    }

    fn ident(&mut self) -> Result<String, TypeSyntaxError> {
        match self.peek() {
            Some(Tok::Ident(x)) => {
                let x = x.clone();
                self.pos += 1;
                Ok(x)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn ty(&mut self) -> Result<Type, TypeSyntaxError> {
        let lhs = self.union()?;
        if self.eat("->") {
            Ok(Type::arrow(lhs, self.ty()?))
        } else {
            Ok(lhs)
        }
    }

    fn union(&mut self) -> Result<Type, TypeSyntaxError> {
        let mut items = alloc::vec![self.inter()?];
        while self.eat("|") {
            items.push(self.inter()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Type::Union(items) })
    }

    fn inter(&mut self) -> Result<Type, TypeSyntaxError> {
        let mut items = alloc::vec![self.cond()?];
        while self.eat("&") {
            items.push(self.cond()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Type::Inter(items) })
    }

    fn cond(&mut self) -> Result<Type, TypeSyntaxError> {
        let t = self.prefix()?;
        if self.eat("?") {
            Ok(Type::cond(t, self.prefix()?))
        } else {
            Ok(t)
        }
    }

    fn prefix(&mut self) -> Result<Type, TypeSyntaxError> {
        if self.eat("[") {
            let name = self.ident()?;
            self.expect("]")?;
            let topo = match TopoSym::from_name(&name) {
                Some(s) => Topology::Sym(s),
                None => Topology::Var(name),
            };
            return Ok(Type::coll(topo, self.prefix()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Type, TypeSyntaxError> {
        if self.eat("0") {
            return Ok(Type::Zero);
        }
        if self.eat("1") {
            return Ok(Type::One);
        }
        if self.eat("(") {
            let t = self.ty()?;
            self.expect(")")?;
            return Ok(t);
        }
        let name = self.ident()?;
        if name == "forall" || name == "where" {
            return self.err("unexpected keyword");
        }
        Ok(match BaseType::from_name(&name) {
            Some(b) => Type::Base(b),
            None => Type::Var(name),
        })
    }

    fn constraints_into(&mut self, out: &mut Vec<Constraint>) -> Result<(), TypeSyntaxError> {
        loop {
            let l = self.ty()?;
            if self.eat("<=") {
                out.push(Constraint::new(l, self.ty()?));
            } else if self.eat("=") {
                out.extend(Constraint::equal(l, self.ty()?));
            } else {
                return self.err("expected `<=` or `=`");
            }
            if !self.eat(",") {
                return Ok(());
            }
        }
    }

    fn done(&self) -> Result<(), TypeSyntaxError> {
        if self.pos < self.toks.len() {
            self.err("trailing input")
        } else {
            Ok(())
        }
    }
}

pub fn parse_type(src: &str) -> Result<Type, TypeSyntaxError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.done()?;
    Ok(t)
}

/// A comma-separated list of `t <= t'` or `t = t'`; surrounding braces are
/// optional.
pub fn parse_constraints(src: &str) -> Result<Vec<Constraint>, TypeSyntaxError> {
    let mut p = Parser::new(src)?;
    let braced = p.eat("{");
    let mut out = Vec::new();
    if !(braced && p.eat("}")) && !p.toks.is_empty() {
        p.constraints_into(&mut out)?;
        if braced {
            p.expect("}")?;
        }
    }
    p.done()?;
    Ok(out)
}

pub fn parse_scheme(src: &str) -> Result<TypeScheme, TypeSyntaxError> {
    let mut p = Parser::new(src)?;
    let mut names = Vec::new();
    if p.eat_kw("forall") {
        loop {
            names.push(p.ident()?);
            if !p.eat(",") {
                break;
            }
        }
        p.expect(".")?;
    }
    let body = p.ty()?;
    let mut constraints = Vec::new();
    if p.eat_kw("where") {
        p.expect("{")?;
        if !p.eat("}") {
            p.constraints_into(&mut constraints)?;
            p.expect("}")?;
        }
    }
    p.done()?;
    let mut fv = body.free_vars();
    for c in &constraints {
        c.collect_free(&mut fv);
    }
    let (mut type_vars, mut topo_vars) = (Vec::new(), Vec::new());
    for n in names {
        if fv.topos.contains(&n) {
            topo_vars.push(n);
        } else {
            type_vars.push(n);
        }
    }
    Ok(TypeScheme { type_vars, topo_vars, body, constraints })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrow_is_right_associative() {
        let t = parse_type("a -> b -> c").unwrap();
        assert_eq!(t, Type::arrow(Type::var("a"), Type::arrow(Type::var("b"), Type::var("c"))));
    }

    #[test]
    fn prefix_binds_tighter_than_arrow() {
        let t = parse_type("[t] a -> [grid] int").unwrap();
        assert_eq!(
            t,
            Type::arrow(
                Type::coll(Topology::var("t"), Type::var("a")),
                Type::coll(Topology::Sym(TopoSym::Grid), Type::INT)
            )
        );
    }

    #[test]
    fn scheme_splits_topology_variables() {
        let sc = parse_scheme("forall a,b,t. [t] a -> [t] b where {a <= b, (bool ? (a & int)) <= b}").unwrap();
        assert_eq!(sc.type_vars, ["a", "b"]);
        assert_eq!(sc.topo_vars, ["t"]);
        assert_eq!(sc.constraints.len(), 2);
    }

    #[test]
    fn equality_is_two_inclusions() {
        let cs = parse_constraints("{a = [bag] a | int}").unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].lhs, cs[1].rhs);
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_type("a -> ").unwrap_err();
        assert_eq!(e.offset, 5);
        assert!(parse_type("a $ b").is_err());
    }
}
