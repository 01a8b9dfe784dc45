//! The type algebra shared by both inference engines.
//!
//! Strong inference only ever builds the `Base`/`Var`/`Arrow`/`Coll`
//! fragment. Soft inference uses the whole grammar: unions, intersections,
//! the empty type `0`, the universal type `1` and conditional types
//! `t ? g` (read "t if g").

mod consts;
mod context;
mod normalize;
pub mod oracle;
mod parse;
mod pretty;
mod subst;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use consts::{tc, tc_by_name, Dialect, UnknownConstant};
pub use context::{generalize, instantiate, is_instance, match_type, TypingContext};
pub use normalize::{is_empty, normalize, Emptiness};
pub use parse::{parse_constraints, parse_scheme, parse_type, TypeSyntaxError};
pub use pretty::{canonical_names, rename_scheme};
pub use subst::{FreshSupply, Substitution};

/// Base types. The set is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseType {
    Int,
    Bool,
    Float,
    String,
}

impl BaseType {
    pub const ALL: [BaseType; 4] = [BaseType::Int, BaseType::Bool, BaseType::Float, BaseType::String];

    pub fn name(self) -> &'static str {
        match self {
            BaseType::Int => "int",
            BaseType::Bool => "bool",
            BaseType::Float => "float",
            BaseType::String => "string",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "int" => BaseType::Int,
            "bool" => BaseType::Bool,
            "float" => BaseType::Float,
            "string" => BaseType::String,
            _ => return None,
        })
    }
}

/// Topology symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TopoSym {
    Set,
    Bag,
    Seq,
    Grid,
}

impl TopoSym {
    pub const ALL: [TopoSym; 4] = [TopoSym::Set, TopoSym::Bag, TopoSym::Seq, TopoSym::Grid];

    pub fn name(self) -> &'static str {
        match self {
            TopoSym::Set => "set",
            TopoSym::Bag => "bag",
            TopoSym::Seq => "seq",
            TopoSym::Grid => "grid",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "set" => TopoSym::Set,
            "bag" => TopoSym::Bag,
            "seq" => TopoSym::Seq,
            "grid" => TopoSym::Grid,
            _ => return None,
        })
    }
}

/// A topology: a symbol or a topology variable. Topology variables and type
/// variables live in separate namespaces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Topology {
    Sym(TopoSym),
    Var(String),
}

impl Topology {
    pub fn var(name: &str) -> Self {
        Topology::Var(name.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Base(BaseType),
    Var(String),
    Arrow(Box<Type>, Box<Type>),
    Coll(Topology, Box<Type>),
    /// Flattened operand list; canonical after `normalize`.
    Union(Vec<Type>),
    Inter(Vec<Type>),
    Zero,
    One,
    /// `Cond(t, g)` is `t ? g`: `t` when `g` is non-empty, `0` otherwise.
    Cond(Box<Type>, Box<Type>),
}

impl Type {
    pub const INT: Type = Type::Base(BaseType::Int);
    pub const BOOL: Type = Type::Base(BaseType::Bool);
    pub const FLOAT: Type = Type::Base(BaseType::Float);
    pub const STRING: Type = Type::Base(BaseType::String);

    pub fn var(name: &str) -> Type {
        Type::Var(name.into())
    }

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    pub fn coll(topo: Topology, elem: Type) -> Type {
        Type::Coll(topo, Box::new(elem))
    }

    pub fn union(a: Type, b: Type) -> Type {
        Type::Union(alloc::vec![a, b])
    }

    pub fn inter(a: Type, b: Type) -> Type {
        Type::Inter(alloc::vec![a, b])
    }

    pub fn cond(t: Type, guard: Type) -> Type {
        Type::Cond(Box::new(t), Box::new(guard))
    }

    /// True for the strong fragment: no union, intersection, conditional,
    /// `0` or `1` anywhere.
    pub fn is_simple(&self) -> bool {
        match self {
            Type::Base(_) | Type::Var(_) => true,
            Type::Arrow(a, b) => a.is_simple() && b.is_simple(),
            Type::Coll(_, t) => t.is_simple(),
            _ => false,
        }
    }

    pub fn is_ground(&self) -> bool {
        let mut fv = FreeVars::default();
        self.collect_free(&mut fv);
        fv.types.is_empty() && fv.topos.is_empty()
    }

    pub fn has_arrow(&self) -> bool {
        match self {
            Type::Arrow(..) => true,
            Type::Coll(_, t) => t.has_arrow(),
            Type::Union(ts) | Type::Inter(ts) => ts.iter().any(Type::has_arrow),
            Type::Cond(a, b) => a.has_arrow() || b.has_arrow(),
            _ => false,
        }
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        self.collect_free(&mut fv);
        fv
    }

    pub fn collect_free(&self, fv: &mut FreeVars) {
        match self {
            Type::Var(v) => {
                fv.types.insert(v.clone());
            }
            Type::Arrow(a, b) | Type::Cond(a, b) => {
                a.collect_free(fv);
                b.collect_free(fv);
            }
            Type::Coll(r, t) => {
                if let Topology::Var(v) = r {
                    fv.topos.insert(v.clone());
                }
                t.collect_free(fv);
            }
            Type::Union(ts) | Type::Inter(ts) => ts.iter().for_each(|t| t.collect_free(fv)),
            Type::Base(_) | Type::Zero | Type::One => {}
        }
    }

    pub fn occurs(&self, var: &str) -> bool {
        match self {
            Type::Var(v) => v == var,
            Type::Arrow(a, b) | Type::Cond(a, b) => a.occurs(var) || b.occurs(var),
            Type::Coll(_, t) => t.occurs(var),
            Type::Union(ts) | Type::Inter(ts) => ts.iter().any(|t| t.occurs(var)),
            _ => false,
        }
    }

    /// Type variables in order of first occurrence (left to right).
    pub fn vars_in_order(&self, tys: &mut Vec<String>, topos: &mut Vec<String>) {
        match self {
            Type::Var(v) => {
                if !tys.contains(v) {
                    tys.push(v.clone());
                }
            }
            Type::Arrow(a, b) | Type::Cond(a, b) => {
                a.vars_in_order(tys, topos);
                b.vars_in_order(tys, topos);
            }
            Type::Coll(r, t) => {
                if let Topology::Var(v) = r {
                    if !topos.contains(v) {
                        topos.push(v.clone());
                    }
                }
                t.vars_in_order(tys, topos);
            }
            Type::Union(ts) | Type::Inter(ts) => ts.iter().for_each(|t| t.vars_in_order(tys, topos)),
            _ => {}
        }
    }

    /// Collects the type variables occurring at the given polarity
    /// (`positive = true` for covariant positions).
    pub fn polar_vars(&self, positive: bool, pos: &mut BTreeSet<String>, neg: &mut BTreeSet<String>) {
        match self {
            Type::Var(v) => {
                if positive {
                    pos.insert(v.clone());
                } else {
                    neg.insert(v.clone());
                }
            }
            Type::Arrow(a, b) => {
                a.polar_vars(!positive, pos, neg);
                b.polar_vars(positive, pos, neg);
            }
            Type::Coll(_, t) => t.polar_vars(positive, pos, neg),
            Type::Union(ts) | Type::Inter(ts) => ts.iter().for_each(|t| t.polar_vars(positive, pos, neg)),
            Type::Cond(a, g) => {
                a.polar_vars(positive, pos, neg);
                g.polar_vars(positive, pos, neg);
            }
            _ => {}
        }
    }

    /// Number of constructors; the measure used by fuzzers and termination
    /// arguments.
    pub fn size(&self) -> usize {
        match self {
            Type::Arrow(a, b) | Type::Cond(a, b) => 1 + a.size() + b.size(),
            Type::Coll(_, t) => 1 + t.size(),
            Type::Union(ts) | Type::Inter(ts) => 1 + ts.iter().map(Type::size).sum::<usize>(),
            _ => 1,
        }
    }
}

/// Free type and topology variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub types: BTreeSet<String>,
    pub topos: BTreeSet<String>,
}

impl FreeVars {
    pub fn extend(&mut self, other: &FreeVars) {
        self.types.extend(other.types.iter().cloned());
        self.topos.extend(other.topos.iter().cloned());
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty() && self.topos.is_empty()
    }
}

/// An inclusion `lhs ⊆ rhs`, read over the ideal semantics.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub lhs: Type,
    pub rhs: Type,
}

impl Constraint {
    pub fn new(lhs: Type, rhs: Type) -> Self {
        Constraint { lhs, rhs }
    }

    /// `a = b` as the pair of inclusions.
    pub fn equal(a: Type, b: Type) -> [Constraint; 2] {
        [Constraint::new(a.clone(), b.clone()), Constraint::new(b, a)]
    }

    pub fn collect_free(&self, fv: &mut FreeVars) {
        self.lhs.collect_free(fv);
        self.rhs.collect_free(fv);
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

/// `forall types, topos. body where constraints`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeScheme {
    pub type_vars: Vec<String>,
    pub topo_vars: Vec<String>,
    pub body: Type,
    pub constraints: Vec<Constraint>,
}

impl TypeScheme {
    pub fn mono(body: Type) -> Self {
        TypeScheme { type_vars: Vec::new(), topo_vars: Vec::new(), body, constraints: Vec::new() }
    }

    pub fn is_mono(&self) -> bool {
        self.type_vars.is_empty() && self.topo_vars.is_empty()
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut fv = self.body.free_vars();
        for c in &self.constraints {
            c.collect_free(&mut fv);
        }
        for v in &self.type_vars {
            fv.types.remove(v);
        }
        for v in &self.topo_vars {
            fv.topos.remove(v);
        }
        fv
    }
}
