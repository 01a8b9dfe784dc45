use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::syntax::{Expr, Prim, Rule};
use crate::types::{BaseType, TopoSym};

#[derive(Clone, Debug)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    Closure(Arc<Closure>),
    /// A builtin with the arguments received so far.
    Builtin(Prim, Vec<Value>),
    Coll(Collection),
}

#[derive(Debug)]
pub enum Closure {
    Lambda { param: String, body: Expr, env: Env },
    Trans { rules: Vec<Rule>, env: Env },
}

/// Persistent environment; extension shares the tail.
#[derive(Clone, Debug, Default)]
pub struct Env(Option<Arc<EnvNode>>);

#[derive(Debug)]
struct EnvNode {
    name: String,
    value: Value,
    next: Env,
}

impl Env {
    pub fn new() -> Self {
        Env(None)
    }

    pub fn extend(&self, name: &str, value: Value) -> Env {
        Env(Some(Arc::new(EnvNode { name: name.into(), value, next: self.clone() })))
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        let mut cur = &self.0;
        while let Some(node) = cur {
            if node.name == name {
                return Some(&node.value);
            }
            cur = &node.next.0;
        }
        None
    }
}

#[derive(Clone, Debug)]
pub enum Collection {
    Seq(Vec<Value>),
    /// Duplicate-free, in insertion order.
    Set(Vec<Value>),
    Bag(Vec<Value>),
    Grid(Grid),
}

/// Partial map from `(x, y)` coordinates to values. Stored keyed by `(y, x)`
/// so that iteration is row-major.
#[derive(Clone, Debug, Default)]
pub struct Grid {
    cells: BTreeMap<(i64, i64), Value>,
    cursor: Option<(i64, i64)>,
}

impl Grid {
    pub fn new() -> Self {
        Grid::default()
    }

    pub fn get(&self, x: i64, y: i64) -> Option<&Value> {
        self.cells.get(&(y, x))
    }

    /// Inserts at `(x, y)`; `false` if the cell is already occupied.
    pub fn insert(&mut self, x: i64, y: i64, v: Value) -> bool {
        if self.cells.contains_key(&(y, x)) {
            return false;
        }
        self.cells.insert((y, x), v);
        self.cursor = Some((x, y));
        true
    }

    pub fn cursor(&self) -> Option<(i64, i64)> {
        self.cursor
    }

    pub fn reset_cursor(&mut self) {
        self.cursor = self.cells.keys().next_back().map(|&(y, x)| (x, y));
    }

    /// Occupied coordinates `(x, y)` in canonical order.
    pub fn coords(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.cells.keys().map(|&(y, x)| (x, y))
    }

    pub fn values(&self) -> impl Iterator<Item = &Value> {
        self.cells.values()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub(crate) fn set_cell(&mut self, x: i64, y: i64, v: Value) {
        self.cells.insert((y, x), v);
    }
}

impl Collection {
    pub fn empty(t: TopoSym) -> Self {
        match t {
            TopoSym::Seq => Collection::Seq(Vec::new()),
            TopoSym::Set => Collection::Set(Vec::new()),
            TopoSym::Bag => Collection::Bag(Vec::new()),
            TopoSym::Grid => Collection::Grid(Grid::new()),
        }
    }

    /// Builds a collection from values in order; sets drop duplicates and
    /// grids lay elements along the `est` axis from the origin.
    pub fn from_values(t: TopoSym, vs: Vec<Value>) -> Self {
        match t {
            TopoSym::Seq => Collection::Seq(vs),
            TopoSym::Bag => Collection::Bag(vs),
            TopoSym::Set => {
                let mut out: Vec<Value> = Vec::new();
                for v in vs {
                    if !out.iter().any(|w| w.same(&v)) {
                        out.push(v);
                    }
                }
                Collection::Set(out)
            }
            TopoSym::Grid => {
                let mut g = Grid::new();
                for (i, v) in vs.into_iter().enumerate() {
                    g.insert(i as i64, 0, v);
                }
                Collection::Grid(g)
            }
        }
    }

    pub fn topology(&self) -> TopoSym {
        match self {
            Collection::Seq(_) => TopoSym::Seq,
            Collection::Set(_) => TopoSym::Set,
            Collection::Bag(_) => TopoSym::Bag,
            Collection::Grid(_) => TopoSym::Grid,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Collection::Seq(v) | Collection::Set(v) | Collection::Bag(v) => v.len(),
            Collection::Grid(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Elements in canonical position order.
    pub fn elements(&self) -> Vec<&Value> {
        match self {
            Collection::Seq(v) | Collection::Set(v) | Collection::Bag(v) => v.iter().collect(),
            Collection::Grid(g) => g.values().collect(),
        }
    }

    /// Collection equality: seqs are ordered, sets and bags extensional, grids
    /// compared cell by cell.
    pub fn same(&self, other: &Collection) -> bool {
        match (self, other) {
            (Collection::Seq(a), Collection::Seq(b)) => a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same(y)),
            (Collection::Set(a), Collection::Set(b)) => {
                a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| x.same(y)))
            }
            (Collection::Bag(a), Collection::Bag(b)) => {
                if a.len() != b.len() {
                    return false;
                }
                let mut used = alloc::vec![false; b.len()];
                a.iter().all(|x| match (0..b.len()).find(|&j| !used[j] && x.same(&b[j])) {
                    Some(j) => {
                        used[j] = true;
                        true
                    }
                    None => false,
                })
            }
            (Collection::Grid(a), Collection::Grid(b)) => {
                a.cells.len() == b.cells.len()
                    && a.cells.iter().all(|(k, v)| b.cells.get(k).is_some_and(|w| v.same(w)))
            }
            _ => false,
        }
    }
}

impl Value {
    pub fn tag(&self) -> Option<BaseType> {
        match self {
            Value::Int(_) => Some(BaseType::Int),
            Value::Float(_) => Some(BaseType::Float),
            Value::Bool(_) => Some(BaseType::Bool),
            Value::Str(_) => Some(BaseType::String),
            _ => None,
        }
    }

    pub fn is_function(&self) -> bool {
        matches!(self, Value::Closure(_) | Value::Builtin(..))
    }

    /// No closures or builtins anywhere inside.
    pub fn is_first_order(&self) -> bool {
        match self {
            Value::Closure(_) | Value::Builtin(..) => false,
            Value::Coll(c) => c.elements().iter().all(|v| v.is_first_order()),
            _ => true,
        }
    }

    /// Structural equality; tags must agree and functions are never equal.
    pub fn same(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Float(a), Value::Float(b)) => a == b,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Str(a), Value::Str(b)) => a == b,
            (Value::Coll(a), Value::Coll(b)) => a.same(b),
            _ => false,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Int(_) | Value::Float(_) => 0,
            Value::Bool(_) => 1,
            Value::Str(_) => 2,
            Value::Coll(_) => 3,
            Value::Closure(_) | Value::Builtin(..) => 4,
        }
    }

    /// Ordering used by `<`, `>` and `=`. Numbers compare numerically across
    /// int and float, other kinds are ranked, collections compare by topology
    /// then elementwise. `None` when a function is involved.
    pub fn compare(&self, other: &Value) -> Option<Ordering> {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => Some(a.cmp(b)),
            (Value::Int(a), Value::Float(b)) => (*a as f64).partial_cmp(b),
            (Value::Float(a), Value::Int(b)) => a.partial_cmp(&(*b as f64)),
            (Value::Float(a), Value::Float(b)) => a.partial_cmp(b),
            (Value::Bool(a), Value::Bool(b)) => Some(a.cmp(b)),
            (Value::Str(a), Value::Str(b)) => Some(a.cmp(b)),
            (Value::Coll(a), Value::Coll(b)) => {
                let t = (a.topology() as u8).cmp(&(b.topology() as u8));
                if t != Ordering::Equal {
                    return Some(t);
                }
                let (xs, ys) = (a.elements(), b.elements());
                for (x, y) in xs.iter().zip(&ys) {
                    match x.compare(y)? {
                        Ordering::Equal => {}
                        o => return Some(o),
                    }
                }
                Some(xs.len().cmp(&ys.len()))
            }
            _ if self.is_function() || other.is_function() => None,
            _ => Some(self.rank().cmp(&other.rank())),
        }
    }
}

fn write_items<'a>(f: &mut fmt::Formatter<'_>, items: impl Iterator<Item = &'a Value>) -> fmt::Result {
    for (i, v) in items.enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Float(x) => write!(f, "{}", crate::syntax::Constant::Float(*x)),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => write!(f, "{s:?}"),
            Value::Closure(c) => match **c {
                Closure::Lambda { .. } => f.write_str("<fun>"),
                Closure::Trans { .. } => f.write_str("<transformation>"),
            },
            Value::Builtin(p, _) => write!(f, "<builtin {}>", p.name()),
            Value::Coll(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Collection::Seq(v) => {
                f.write_str("[")?;
                write_items(f, v.iter())?;
                f.write_str("]")
            }
            Collection::Set(v) => {
                f.write_str("set{")?;
                write_items(f, v.iter())?;
                f.write_str("}")
            }
            Collection::Bag(v) => {
                f.write_str("bag{")?;
                write_items(f, v.iter())?;
                f.write_str("}")
            }
            Collection::Grid(g) => {
                f.write_str("grid{")?;
                for (i, ((x, y), v)) in g.coords().zip(g.values()).enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "({x},{y}): {v}")?;
                }
                f.write_str("}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_never_overwrites() {
        let mut g = Grid::new();
        assert!(g.insert(0, 0, Value::Int(1)));
        assert!(!g.insert(0, 0, Value::Int(2)));
        assert!(g.get(0, 0).unwrap().same(&Value::Int(1)));
    }

    #[test]
    fn set_equality_is_extensional() {
        let a = Collection::from_values(TopoSym::Set, alloc::vec![Value::Int(1), Value::Bool(true)]);
        let b = Collection::from_values(TopoSym::Set, alloc::vec![Value::Bool(true), Value::Int(1), Value::Int(1)]);
        assert!(a.same(&b));
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn bag_counts_multiplicity() {
        let a = Collection::Bag(alloc::vec![Value::Int(1), Value::Int(1), Value::Int(2)]);
        let b = Collection::Bag(alloc::vec![Value::Int(1), Value::Int(2), Value::Int(2)]);
        assert!(!a.same(&b));
    }

    #[test]
    fn env_shadows() {
        let e = Env::new().extend("x", Value::Int(1)).extend("x", Value::Int(2));
        assert!(e.lookup("x").unwrap().same(&Value::Int(2)));
        assert!(e.lookup("y").is_none());
    }

    #[test]
    fn mixed_numbers_compare() {
        assert_eq!(Value::Int(1).compare(&Value::Float(1.5)), Some(Ordering::Less));
        assert_eq!(Value::Int(5).compare(&Value::Bool(false)), Some(Ordering::Less));
    }
}
