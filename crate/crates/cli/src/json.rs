//! JSON encodings of expressions, types and constraints. Every node is an
//! object whose `kind` field names the constructor.

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value as J};

use topo_core::constraints::Origin;
use topo_core::syntax::{Constant, Direction, ElemKind, ElemPattern, Expr, ExprKind, Pattern, Prim, Rule, Span};
use topo_core::types::{parse_constraints, BaseType, Constraint, TopoSym, Topology, Type, TypeScheme};

fn field<'a>(o: &'a J, name: &str) -> Result<&'a J> {
    o.get(name).ok_or_else(|| anyhow!("missing field `{name}` in {o}"))
}

fn string<'a>(o: &'a J, name: &str) -> Result<&'a str> {
    field(o, name)?.as_str().ok_or_else(|| anyhow!("field `{name}` must be a string"))
}

fn kind(o: &J) -> Result<&str> {
    string(o, "kind")
}

fn list<'a>(o: &'a J, name: &str) -> Result<&'a Vec<J>> {
    field(o, name)?.as_array().ok_or_else(|| anyhow!("field `{name}` must be an array"))
}

pub fn topology_to_json(r: &Topology) -> J {
    match r {
        Topology::Sym(s) => json!({"kind": "sym", "name": s.name()}),
        Topology::Var(v) => json!({"kind": "var", "name": v}),
    }
}

pub fn topology_from_json(o: &J) -> Result<Topology> {
    let name = string(o, "name")?;
    match kind(o)? {
        "sym" => TopoSym::from_name(name).map(Topology::Sym).ok_or_else(|| anyhow!("unknown topology `{name}`")),
        "var" => Ok(Topology::var(name)),
        k => bail!("unknown topology kind `{k}`"),
    }
}

pub fn type_to_json(t: &Type) -> J {
    match t {
        Type::Base(b) => json!({"kind": "base", "name": b.name()}),
        Type::Var(v) => json!({"kind": "var", "name": v}),
        Type::Arrow(a, b) => json!({"kind": "arrow", "from": type_to_json(a), "to": type_to_json(b)}),
        Type::Coll(r, e) => json!({"kind": "coll", "topology": topology_to_json(r), "elem": type_to_json(e)}),
        Type::Union(ts) => json!({"kind": "union", "types": ts.iter().map(type_to_json).collect::<Vec<_>>()}),
        Type::Inter(ts) => json!({"kind": "inter", "types": ts.iter().map(type_to_json).collect::<Vec<_>>()}),
        Type::Zero => json!({"kind": "zero"}),
        Type::One => json!({"kind": "one"}),
        Type::Cond(a, g) => json!({"kind": "cond", "type": type_to_json(a), "guard": type_to_json(g)}),
    }
}

pub fn type_from_json(o: &J) -> Result<Type> {
    let types = |name| -> Result<Vec<Type>> { list(o, name)?.iter().map(type_from_json).collect() };
    let sub = |name| type_from_json(field(o, name)?);
    Ok(match kind(o)? {
        "base" => {
            let n = string(o, "name")?;
            Type::Base(BaseType::from_name(n).ok_or_else(|| anyhow!("unknown base type `{n}`"))?)
        }
        "var" => Type::var(string(o, "name")?),
        "arrow" => Type::arrow(sub("from")?, sub("to")?),
        "coll" => Type::coll(topology_from_json(field(o, "topology")?)?, sub("elem")?),
        "union" => Type::Union(types("types")?),
        "inter" => Type::Inter(types("types")?),
        "zero" => Type::Zero,
        "one" => Type::One,
        "cond" => Type::cond(sub("type")?, sub("guard")?),
        k => bail!("unknown type kind `{k}`"),
    })
}

pub fn constraint_to_json(c: &Constraint) -> J {
    json!({"lhs": type_to_json(&c.lhs), "rhs": type_to_json(&c.rhs)})
}

pub fn constraint_with_origin(c: &Constraint, o: &Origin) -> J {
    let mut j = constraint_to_json(c);
    j["origin"] = json!({"rule": o.rule, "start": o.span.start, "end": o.span.end});
    j
}

/// Objects with `lhs`/`rhs`, or strings in the concrete syntax
/// (`"a <= int | bool"`; `=` stands for both inclusions).
pub fn constraints_from_json(items: &[J]) -> Result<Vec<Constraint>> {
    let mut out = Vec::new();
    for it in items {
        match it {
            J::String(s) => out.extend(parse_constraints(s).map_err(|e| anyhow!("`{s}`: {e}"))?),
            _ => out.push(Constraint::new(type_from_json(field(it, "lhs")?)?, type_from_json(field(it, "rhs")?)?)),
        }
    }
    Ok(out)
}

/// Reads `{"constraints": [...]}` or a bare array.
pub fn system_from_json(doc: &J) -> Result<Vec<Constraint>> {
    let items = match doc {
        J::Array(a) => a,
        _ => list(doc, "constraints")?,
    };
    constraints_from_json(items)
}

pub fn scheme_to_json(s: &TypeScheme) -> J {
    json!({
        "type_vars": s.type_vars,
        "topo_vars": s.topo_vars,
        "body": type_to_json(&s.body),
        "constraints": s.constraints.iter().map(constraint_to_json).collect::<Vec<_>>(),
    })
}

pub fn scheme_from_json(o: &J) -> Result<TypeScheme> {
    let names = |f| -> Result<Vec<String>> {
        list(o, f)?.iter().map(|v| v.as_str().map(String::from).ok_or_else(|| anyhow!("`{f}` holds names"))).collect()
    };
    Ok(TypeScheme {
        type_vars: names("type_vars")?,
        topo_vars: names("topo_vars")?,
        body: type_from_json(field(o, "body")?)?,
        constraints: constraints_from_json(list(o, "constraints")?)?,
    })
}

fn constant_to_json(c: &Constant) -> J {
    match c {
        Constant::Int(n) => json!({"kind": "int", "value": n}),
        Constant::Float(x) => json!({"kind": "float", "value": x}),
        Constant::Bool(b) => json!({"kind": "bool", "value": b}),
        Constant::Str(s) => json!({"kind": "string", "value": s}),
        Constant::Prim(p) => json!({"kind": "prim", "name": p.name()}),
    }
}

fn constant_from_json(o: &J) -> Result<Constant> {
    let v = || field(o, "value");
    Ok(match kind(o)? {
        "int" => Constant::Int(v()?.as_i64().context("int constant")?),
        "float" => Constant::Float(v()?.as_f64().context("float constant")?),
        "bool" => Constant::Bool(v()?.as_bool().context("bool constant")?),
        "string" => Constant::Str(v()?.as_str().context("string constant")?.into()),
        "prim" => {
            let n = string(o, "name")?;
            Constant::Prim(Prim::from_name(n).ok_or_else(|| anyhow!("unknown builtin `{n}`"))?)
        }
        k => bail!("unknown constant kind `{k}`"),
    })
}

fn element_to_json(e: &ElemPattern) -> J {
    let mut o = match &e.kind {
        ElemKind::Plain(x) => json!({"kind": "plain", "var": x}),
        ElemKind::Typed(x, b) => json!({"kind": "typed", "var": x, "type": b.name()}),
        ElemKind::Star(x) => json!({"kind": "star", "var": x}),
        ElemKind::TypedStar(b, x) => json!({"kind": "typed_star", "var": x, "type": b.name()}),
    };
    if let Some(d) = e.dir {
        o["dir"] = json!(d.name());
    }
    o
}

fn element_from_json(o: &J) -> Result<ElemPattern> {
    let x = string(o, "var")?.to_string();
    let b = || -> Result<BaseType> {
        let n = string(o, "type")?;
        BaseType::from_name(n).ok_or_else(|| anyhow!("unknown base type `{n}`"))
    };
    let kind = match kind(o)? {
        "plain" => ElemKind::Plain(x),
        "typed" => ElemKind::Typed(x, b()?),
        "star" => ElemKind::Star(x),
        "typed_star" => ElemKind::TypedStar(b()?, x),
        k => bail!("unknown pattern element kind `{k}`"),
    };
    let dir = match o.get("dir") {
        None | Some(J::Null) => None,
        Some(d) => {
            let n = d.as_str().context("`dir` must be a string")?;
            Some(Direction::from_name(n).ok_or_else(|| anyhow!("unknown direction `{n}`"))?)
        }
    };
    Ok(ElemPattern { kind, dir })
}

pub fn expr_to_json(e: &Expr) -> J {
    let mut o = match &e.kind {
        ExprKind::Var(x) => json!({"kind": "var", "name": x}),
        ExprKind::Const(c) => json!({"kind": "const", "value": constant_to_json(c)}),
        ExprKind::Lambda(x, b) => json!({"kind": "lambda", "param": x, "body": expr_to_json(b)}),
        ExprKind::App(f, a) => json!({"kind": "app", "fn": expr_to_json(f), "arg": expr_to_json(a)}),
        ExprKind::Let(x, b, body) => {
            json!({"kind": "let", "name": x, "bound": expr_to_json(b), "body": expr_to_json(body)})
        }
        ExprKind::Trans(rules) => {
            let rs: Vec<J> = rules
                .iter()
                .map(|r| {
                    json!({
                        "pattern": {
                            "elements": r.pattern.elements.iter().map(element_to_json).collect::<Vec<_>>(),
                            "guard": expr_to_json(&r.pattern.guard),
                        },
                        "replacement": expr_to_json(&r.replacement),
                    })
                })
                .collect();
            json!({"kind": "trans", "rules": rs})
        }
    };
    o["span"] = json!([e.span.start, e.span.end]);
    o
}

pub fn expr_from_json(o: &J) -> Result<Expr> {
    let sub = |name| expr_from_json(field(o, name)?).map(Box::new);
    let kind = match kind(o)? {
        "var" => ExprKind::Var(string(o, "name")?.into()),
        "const" => ExprKind::Const(constant_from_json(field(o, "value")?)?),
        "lambda" => ExprKind::Lambda(string(o, "param")?.into(), sub("body")?),
        "app" => ExprKind::App(sub("fn")?, sub("arg")?),
        "let" => ExprKind::Let(string(o, "name")?.into(), sub("bound")?, sub("body")?),
        "trans" => {
            let mut rules = Vec::new();
            for r in list(o, "rules")? {
                let p = field(r, "pattern")?;
                let elements = list(p, "elements")?.iter().map(element_from_json).collect::<Result<Vec<_>>>()?;
                let guard = expr_from_json(field(p, "guard")?)?;
                rules.push(Rule { pattern: Pattern { elements, guard }, replacement: expr_from_json(field(r, "replacement")?)? });
            }
            ExprKind::Trans(rules)
        }
        k => bail!("unknown expression kind `{k}`"),
    };
    let span = match o.get("span").and_then(J::as_array).map(Vec::as_slice) {
        Some([s, e]) => Span::new(s.as_u64().unwrap_or(0) as usize, e.as_u64().unwrap_or(0) as usize),
        _ => Span::default(),
    };
    Ok(Expr::new(kind, span))
}
