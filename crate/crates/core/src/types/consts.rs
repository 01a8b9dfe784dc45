//! Type schemes of the language constants.

use core::fmt;

use alloc::string::String;

use super::{parse_scheme, TypeScheme};
use crate::syntax::{Constant, Prim};

/// Which of the two languages a program is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    /// Fully static, homogeneous collections.
    Strong,
    /// Static typing with residual dynamic type tests.
    Soft,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownConstant(pub String);

impl fmt::Display for UnknownConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown constant `{}`", self.0)
    }
}

pub fn tc_by_name(name: &str, dialect: Dialect) -> Result<TypeScheme, UnknownConstant> {
    Prim::from_name(name)
        .map(|p| tc(&Constant::Prim(p), dialect))
        .ok_or_else(|| UnknownConstant(name.into()))
}

pub fn tc(c: &Constant, dialect: Dialect) -> TypeScheme {
    let src = match c {
        Constant::Int(_) => "int",
        Constant::Float(_) => "float",
        Constant::Bool(_) => "bool",
        Constant::Str(_) => "string",
        Constant::Prim(p) => prim_scheme(*p, dialect),
    };
    parse_scheme(src).expect("constant table entries parse")
}

fn prim_scheme(p: Prim, dialect: Dialect) -> &'static str {
    use Prim::*;
    match p {
        Cons => "forall a,t. a -> [t] a -> [t] a",
        Nord | NegNord | Est | NegEst => "forall a. a -> [grid] a -> [grid] a",
        EmptySeq => "forall a. [seq] a",
        EmptySet => "forall a. [set] a",
        EmptyBag => "forall a. [bag] a",
        EmptyGrid => "forall a. [grid] a",
        If => match dialect {
            Dialect::Strong => "forall a. bool -> a -> a -> a",
            Dialect::Soft => "forall a,b. bool -> a -> b -> (a | b)",
        },
        Gt | Lt | Eq => "forall a. a -> a -> bool",
        Add | Sub | Mul => match dialect {
            Dialect::Strong => "int -> int -> int",
            Dialect::Soft => {
                "forall a. a -> a -> ((int ? (a & int)) | (float ? (a & float))) where {a <= int | float}"
            }
        },
        And | Or => "bool -> bool -> bool",
        NordNb | NegNordNb | EstNb | NegEstNb => "forall a. [grid] a -> a -> a -> bool",
        Mod => "int -> int -> int",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::types::{Constraint, Type};

    #[test]
    fn cons_is_polytypic() {
        let sc = tc_by_name("::", Dialect::Strong).unwrap();
        assert_eq!(sc.type_vars, ["a"]);
        assert_eq!(sc.topo_vars, ["t"]);
        assert_eq!(sc.body.to_string(), "a -> [t] a -> [t] a");
    }

    #[test]
    fn empty_grid() {
        assert_eq!(tc_by_name("empty_grid", Dialect::Soft).unwrap().body.to_string(), "[grid] a");
    }

    #[test]
    fn unknown() {
        assert_eq!(tc_by_name("nosuch", Dialect::Soft), Err(UnknownConstant("nosuch".into())));
    }

    #[test]
    fn soft_plus_is_overloaded() {
        let sc = tc_by_name("+", Dialect::Soft).unwrap();
        assert_eq!(
            sc.constraints,
            [Constraint::new(Type::var("a"), Type::union(Type::INT, Type::FLOAT))]
        );
    }
}
