//! Finite-universe semantics for first-order types: membership of values,
//! enumeration of the inhabitants of a ground type, and extensional
//! inclusion between ground types.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{normalize, BaseType, Substitution, TopoSym, Topology, Type};
use crate::runtime::{Collection, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// Closures are not decided by the oracle.
    UnsupportedValue,
    /// The type still contains this variable after substitution.
    FreeVariable(String),
    /// Enumeration of arrow types is not supported.
    ArrowType,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::UnsupportedValue => f.write_str("functional values are outside the oracle"),
            OracleError::FreeVariable(v) => write!(f, "type variable `{v}` is not bound"),
            OracleError::ArrowType => f.write_str("arrow types cannot be enumerated"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FiniteUniverse {
    pub max_depth: usize,
    pub max_collection_size: usize,
    pub ints: Vec<i64>,
    pub floats: Vec<f64>,
    pub strings: Vec<String>,
    /// Bound on the element pool used to build collections of a type with
    /// many inhabitants.
    pub max_pool: usize,
}

impl Default for FiniteUniverse {
    fn default() -> Self {
        FiniteUniverse {
            max_depth: 2,
            max_collection_size: 3,
            ints: alloc::vec![0, 3],
            floats: alloc::vec![0.5],
            strings: alloc::vec![String::from("a")],
            max_pool: 8,
        }
    }
}

impl FiniteUniverse {
    pub fn base_values(&self, b: BaseType) -> Vec<Value> {
        match b {
            BaseType::Int => self.ints.iter().map(|&n| Value::Int(n)).collect(),
            BaseType::Float => self.floats.iter().map(|&x| Value::Float(x)).collect(),
            BaseType::Bool => alloc::vec![Value::Bool(false), Value::Bool(true)],
            BaseType::String => self.strings.iter().map(|s| Value::Str(s.clone())).collect(),
        }
    }

    fn all_base(&self) -> Vec<Value> {
        BaseType::ALL.iter().flat_map(|&b| self.base_values(b)).collect()
    }

    /// Inhabitants of the ground type `t` in this universe.
    pub fn values(&self, t: &Type) -> Result<Vec<Value>, OracleError> {
        self.values_at(&normalize(t), self.max_depth)
    }

    fn values_at(&self, t: &Type, depth: usize) -> Result<Vec<Value>, OracleError> {
        Ok(match t {
            Type::Zero => Vec::new(),
            Type::Base(b) => self.base_values(*b),
            Type::Var(v) => return Err(OracleError::FreeVariable(v.clone())),
            Type::Arrow(..) => return Err(OracleError::ArrowType),
            Type::One => {
                let mut out = self.all_base();
                if depth > 0 {
                    for s in TopoSym::ALL {
                        out.extend(self.collections(s, &Type::One, depth)?);
                    }
                }
                out
            }
            Type::Coll(r, e) => {
                let Topology::Sym(s) = r else {
                    let Topology::Var(v) = r else { unreachable!() };
                    return Err(OracleError::FreeVariable(v.clone()));
                };
                if depth == 0 {
                    Vec::new()
                } else {
                    self.collections(*s, e, depth)?
                }
            }
            Type::Union(ts) => {
                let mut out: Vec<Value> = Vec::new();
                for t in ts {
                    for v in self.values_at(t, depth)? {
                        if !out.iter().any(|w| w.same(&v)) {
                            out.push(v);
                        }
                    }
                }
                out
            }
            Type::Inter(ts) => {
                let first = ts.iter().min_by_key(|t| matches!(t, Type::One | Type::Union(_)) as u8).unwrap();
                let mut out = Vec::new();
                for v in self.values_at(first, depth)? {
                    if ts.iter().all(|t| self.member_ground(&v, t).unwrap_or(false)) {
                        out.push(v);
                    }
                }
                out
            }
            Type::Cond(a, g) => {
                if self.inhabited(g)? {
                    self.values_at(a, depth)?
                } else {
                    Vec::new()
                }
            }
        })
    }

    fn collections(&self, s: TopoSym, elem: &Type, depth: usize) -> Result<Vec<Value>, OracleError> {
        let mut pool = self.values_at(elem, depth - 1)?;
        if pool.len() > self.max_pool {
            pool = spread(pool, self.max_pool);
        }
        let k = self.max_collection_size;
        let mut out = Vec::new();
        match s {
            TopoSym::Seq | TopoSym::Grid => {
                let mut idx: Vec<Vec<usize>> = alloc::vec![Vec::new()];
                let mut frontier = idx.clone();
                for _ in 0..k {
                    let mut next = Vec::new();
                    for w in &frontier {
                        for i in 0..pool.len() {
                            let mut w2 = w.clone();
                            w2.push(i);
                            next.push(w2);
                        }
                    }
                    idx.extend(next.iter().cloned());
                    frontier = next;
                }
                for w in idx {
                    let vs = w.iter().map(|&i| pool[i].clone()).collect();
                    out.push(Value::Coll(Collection::from_values(s, vs)));
                }
            }
            TopoSym::Set | TopoSym::Bag => {
                // non-decreasing index lists; strictly increasing for sets
                let strict = s == TopoSym::Set;
                let mut stack: Vec<Vec<usize>> = alloc::vec![Vec::new()];
                while let Some(w) = stack.pop() {
                    let vs = w.iter().map(|&i| pool[i].clone()).collect();
                    out.push(Value::Coll(Collection::from_values(s, vs)));
                    if w.len() < k {
                        let from = w.last().map_or(0, |&l| if strict { l + 1 } else { l });
                        for i in from..pool.len() {
                            let mut w2 = w.clone();
                            w2.push(i);
                            stack.push(w2);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Whether the ground type has an inhabitant in the universe.
    pub fn inhabited(&self, t: &Type) -> Result<bool, OracleError> {
        let t = normalize(t);
        Ok(match &t {
            Type::Zero => false,
            Type::Base(_) | Type::One | Type::Arrow(..) => true,
            Type::Coll(Topology::Sym(_), _) => true,
            Type::Union(ts) => {
                for u in ts {
                    if self.inhabited(u)? {
                        return Ok(true);
                    }
                }
                false
            }
            Type::Cond(a, g) => self.inhabited(g)? && self.inhabited(a)?,
            _ => !self.values_at(&t, self.max_depth)?.is_empty(),
        })
    }

    /// Membership of `v` in `s(t)`.
    pub fn member(&self, v: &Value, t: &Type, s: &Substitution) -> Result<bool, OracleError> {
        self.member_ground(v, &s.apply(t))
    }

    pub fn member_ground(&self, v: &Value, t: &Type) -> Result<bool, OracleError> {
        if !v.is_first_order() {
            return Err(OracleError::UnsupportedValue);
        }
        Ok(match t {
            Type::Zero => false,
            Type::One => true,
            Type::Var(x) => return Err(OracleError::FreeVariable(x.clone())),
            Type::Base(b) => v.tag() == Some(*b),
            Type::Arrow(..) => false,
            Type::Coll(r, e) => {
                let Value::Coll(c) = v else { return Ok(false) };
                match r {
                    Topology::Var(x) => return Err(OracleError::FreeVariable(x.clone())),
                    Topology::Sym(s) if *s != c.topology() => false,
                    Topology::Sym(_) => {
                        for w in c.elements() {
                            if !self.member_ground(w, e)? {
                                return Ok(false);
                            }
                        }
                        true
                    }
                }
            }
            Type::Union(ts) => {
                for u in ts {
                    if self.member_ground(v, u)? {
                        return Ok(true);
                    }
                }
                false
            }
            Type::Inter(ts) => {
                for u in ts {
                    if !self.member_ground(v, u)? {
                        return Ok(false);
                    }
                }
                true
            }
            Type::Cond(a, g) => self.inhabited(g)? && self.member_ground(v, a)?,
        })
    }

    /// Inclusion of ground types. First-order types are compared on their
    /// inhabitants; arrows structurally (contravariant on the left).
    pub fn includes(&self, lhs: &Type, rhs: &Type) -> Result<bool, OracleError> {
        let (l, r) = (normalize(lhs), normalize(rhs));
        if !l.has_arrow() && !r.has_arrow() {
            for v in self.values(&l)? {
                if !self.member_ground(&v, &r)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        Ok(match (&l, &r) {
            (Type::Zero, _) | (_, Type::One) => true,
            (Type::Union(ls), _) => {
                for t in ls {
                    if !self.includes(t, &r)? {
                        return Ok(false);
                    }
                }
                true
            }
            (_, Type::Inter(rs)) => {
                for t in rs {
                    if !self.includes(&l, t)? {
                        return Ok(false);
                    }
                }
                true
            }
            (Type::Cond(a, g), _) => !self.inhabited(g)? || self.includes(a, &r)?,
            (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => self.includes(a2, a1)? && self.includes(b1, b2)?,
            (Type::Coll(r1, e1), Type::Coll(r2, e2)) => r1 == r2 && self.includes(e1, e2)?,
            (_, Type::Union(rs)) => {
                for t in rs {
                    if self.includes(&l, t)? {
                        return Ok(true);
                    }
                }
                false
            }
            (Type::Inter(ls), _) => {
                for t in ls {
                    if self.includes(t, &r)? {
                        return Ok(true);
                    }
                }
                false
            }
            _ => false,
        })
    }
}

/// Picks `n` items spread evenly over `items`.
fn spread(items: Vec<Value>, n: usize) -> Vec<Value> {
    let len = items.len();
    items.into_iter().enumerate().filter(|(i, _)| (i * n) % len < n).map(|(_, v)| v).take(n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse_type;

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn set(vs: Vec<Value>) -> Value {
        Value::Coll(Collection::from_values(TopoSym::Set, vs))
    }

    #[test]
    fn set_of_int_or_bool() {
        let u = FiniteUniverse::default();
        let v = set(alloc::vec![Value::Int(1), Value::Bool(true)]);
        assert!(u.member_ground(&v, &ty("[set] (int | bool)")).unwrap());
        assert!(!u.member_ground(&v, &ty("[set] int")).unwrap());
    }

    #[test]
    fn zero_has_no_members() {
        let u = FiniteUniverse::default();
        assert!(!u.member_ground(&Value::Int(3), &Type::Zero).unwrap());
        assert!(u.values(&Type::Zero).unwrap().is_empty());
    }

    #[test]
    fn empty_grid_inhabits_every_grid_type() {
        let u = FiniteUniverse::default();
        let g = Value::Coll(Collection::empty(TopoSym::Grid));
        assert!(u.member_ground(&g, &ty("[grid] int")).unwrap());
        assert!(u.member_ground(&g, &ty("[grid] 0")).unwrap());
        assert!(u.inhabited(&ty("[set] 0")).unwrap());
    }

    #[test]
    fn conditional_follows_guard() {
        let u = FiniteUniverse::default();
        assert!(u.member_ground(&Value::Bool(true), &ty("bool ? (int & int)")).unwrap());
        assert!(!u.member_ground(&Value::Bool(true), &ty("bool ? (int & float)")).unwrap());
    }

    #[test]
    fn closures_are_rejected() {
        let u = FiniteUniverse::default();
        let f = Value::Builtin(crate::syntax::Prim::Add, Vec::new());
        assert_eq!(u.member_ground(&f, &Type::One), Err(OracleError::UnsupportedValue));
    }

    #[test]
    fn enumeration_sizes() {
        let u = FiniteUniverse::default();
        // sequences of length ≤ 3 over {0, 3}
        assert_eq!(u.values(&ty("[seq] int")).unwrap().len(), 15);
        assert_eq!(u.values(&ty("[set] int")).unwrap().len(), 4);
        assert_eq!(u.values(&ty("[bag] int")).unwrap().len(), 10);
    }

    #[test]
    fn inclusion() {
        let u = FiniteUniverse::default();
        assert!(u.includes(&ty("int"), &ty("int | bool")).unwrap());
        assert!(!u.includes(&ty("[set] (int | bool)"), &ty("[set] int | [set] bool")).unwrap());
        assert!(u.includes(&ty("(int | bool) -> int"), &ty("int -> (int | float)")).unwrap());
        assert!(!u.includes(&ty("int -> int"), &ty("(int | bool) -> int")).unwrap());
    }
}
