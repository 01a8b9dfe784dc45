use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{Substitution, Topology, Type, TypeScheme};

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Sym(s) => f.write_str(s.name()),
            Topology::Var(v) => f.write_str(v),
        }
    }
}

const ARROW: u8 = 0;
const UNION: u8 = 1;
const INTER: u8 = 2;
const COND: u8 = 3;
const PREFIX: u8 = 4;

fn level(t: &Type) -> u8 {
    match t {
        Type::Arrow(..) => ARROW,
        Type::Union(_) => UNION,
        Type::Inter(_) => INTER,
        Type::Cond(..) => COND,
        Type::Coll(..) => PREFIX,
        _ => PREFIX + 1,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, t: &Type, min: u8) -> fmt::Result {
    if level(t) < min {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

fn write_member(f: &mut fmt::Formatter<'_>, t: &Type, min: u8) -> fmt::Result {
    if matches!(t, Type::Cond(..)) {
        write!(f, "({t})")
    } else {
        write_at(f, t, min)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Base(b) => f.write_str(b.name()),
            Type::Var(v) => f.write_str(v),
            Type::Zero => f.write_str("0"),
            Type::One => f.write_str("1"),
            Type::Arrow(a, b) => {
                write_at(f, a, UNION)?;
                f.write_str(" -> ")?;
                write_at(f, b, ARROW)
            }
            Type::Coll(r, e) => {
                write!(f, "[{r}] ")?;
                write_at(f, e, PREFIX)
            }
            Type::Union(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    write_member(f, t, INTER)?;
                }
                Ok(())
            }
            Type::Inter(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    write_member(f, t, COND)?;
                }
                Ok(())
            }
            Type::Cond(a, g) => {
                write_at(f, a, PREFIX)?;
                f.write_str(" ? ")?;
                write_at(f, g, PREFIX)
            }
        }
    }
}

impl fmt::Display for TypeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_mono() {
            f.write_str("forall ")?;
            let names: Vec<&String> = self.type_vars.iter().chain(self.topo_vars.iter()).collect();
            for (i, n) in names.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                f.write_str(n)?;
            }
            f.write_str(". ")?;
        }
        write!(f, "{}", self.body)?;
        if !self.constraints.is_empty() {
            f.write_str(" where {")?;
            for (i, c) in self.constraints.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

fn type_name(i: usize) -> String {
    const LETTERS: &[u8] = b"abcdefghijklmnopqrs";
    if i < LETTERS.len() {
        String::from(LETTERS[i] as char)
    } else {
        format!("a{}", i - LETTERS.len() + 1)
    }
}

fn topo_name(i: usize) -> String {
    const LETTERS: &[u8] = b"tuvw";
    if i < LETTERS.len() {
        String::from(LETTERS[i] as char)
    } else {
        format!("t{}", i - LETTERS.len() + 1)
    }
}

/// Renaming of the given variables (in order) to `a, b, c, …` and `t, u, …`,
/// skipping names in `avoid`.
pub fn canonical_names(
    type_vars: &[String],
    topo_vars: &[String],
    avoid: &BTreeSet<String>,
) -> Substitution {
    let mut s = Substitution::new();
    let mut i = 0;
    for v in type_vars {
        let mut n = type_name(i);
        while avoid.contains(&n) {
            i += 1;
            n = type_name(i);
        }
        i += 1;
        s.types.insert(v.clone(), Type::Var(n));
    }
    let mut j = 0;
    for v in topo_vars {
        let mut n = topo_name(j);
        while avoid.contains(&n) {
            j += 1;
            n = topo_name(j);
        }
        j += 1;
        s.topos.insert(v.clone(), Topology::Var(n));
    }
    s
}

/// Renames the quantified variables of a scheme canonically, in order of
/// first occurrence in the body and then the constraints.
pub fn rename_scheme(sc: &TypeScheme) -> TypeScheme {
    let (mut tys, mut topos) = (Vec::new(), Vec::new());
    sc.body.vars_in_order(&mut tys, &mut topos);
    for c in &sc.constraints {
        c.lhs.vars_in_order(&mut tys, &mut topos);
        c.rhs.vars_in_order(&mut tys, &mut topos);
    }
    tys.retain(|v| sc.type_vars.contains(v));
    topos.retain(|v| sc.topo_vars.contains(v));
    for v in &sc.type_vars {
        if !tys.contains(v) {
            tys.push(v.clone());
        }
    }
    for v in &sc.topo_vars {
        if !topos.contains(v) {
            topos.push(v.clone());
        }
    }
    let free = sc.free_vars();
    let mut avoid = free.types.clone();
    avoid.extend(free.topos.iter().cloned());
    let ren = canonical_names(&tys, &topos, &avoid);
    let name_of_ty = |v: &String| match ren.types.get(v) {
        Some(Type::Var(n)) => n.clone(),
        _ => v.clone(),
    };
    let name_of_topo = |v: &String| match ren.topos.get(v) {
        Some(Topology::Var(n)) => n.clone(),
        _ => v.clone(),
    };
    TypeScheme {
        type_vars: tys.iter().map(name_of_ty).collect(),
        topo_vars: topos.iter().map(name_of_topo).collect(),
        body: ren.apply(&sc.body),
        constraints: sc.constraints.iter().map(|c| ren.apply_constraint(c)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::types::{parse_type, TopoSym};

    #[test]
    fn grid_of_int() {
        assert_eq!(Type::coll(Topology::Sym(TopoSym::Grid), Type::INT).to_string(), "[grid] int");
    }

    #[test]
    fn scheme_text() {
        let sc = TypeScheme {
            type_vars: alloc::vec!["_a3".into()],
            topo_vars: alloc::vec!["_t9".into()],
            body: parse_type("[_t9] _a3 -> [_t9] _a3").unwrap(),
            constraints: Vec::new(),
        };
        assert_eq!(rename_scheme(&sc).to_string(), "forall a,t. [t] a -> [t] a");
    }

    #[test]
    fn conditionals_are_bracketed() {
        let t = parse_type("a | (bool ? (a & int))").unwrap();
        assert_eq!(t.to_string(), "a | (bool ? (a & int))");
        assert_eq!(parse_type("(a -> b) -> [t] (a | b)").unwrap().to_string(), "(a -> b) -> [t] (a | b)");
    }
}
