use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::matching::{match_in, Match, Positions};
use super::value::{Closure, Collection, Env, Grid, Value};
use crate::syntax::{Constant, Direction, Expr, ExprKind, Prim, Rule};
use crate::types::TopoSym;

/// Abnormal outcomes of evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum RuntimeError {
    /// A run-time type error.
    Wrong(String),
    /// A grid replacement that would change the shape of the grid.
    ShapeErr(String),
    OutOfFuel,
}

impl RuntimeError {
    pub fn name(&self) -> &'static str {
        match self {
            RuntimeError::Wrong(_) => "wrong",
            RuntimeError::ShapeErr(_) => "shape_err",
            RuntimeError::OutOfFuel => "out_of_fuel",
        }
    }
}

impl fmt::Display for RuntimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuntimeError::Wrong(m) | RuntimeError::ShapeErr(m) => write!(f, "{}: {m}", self.name()),
            RuntimeError::OutOfFuel => f.write_str(self.name()),
        }
    }
}

fn wrong<T>(msg: String) -> Result<T, RuntimeError> {
    Err(RuntimeError::Wrong(msg))
}

/// Step budget shared by a whole run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fuel(pub u64);

impl Fuel {
    pub fn tick(&mut self) -> Result<(), RuntimeError> {
        if self.0 == 0 {
            return Err(RuntimeError::OutOfFuel);
        }
        self.0 -= 1;
        Ok(())
    }
}

pub fn eval(e: &Expr, env: &Env, fuel: &mut Fuel) -> Result<Value, RuntimeError> {
    match &e.kind {
        ExprKind::Var(x) => env.lookup(x).cloned().ok_or_else(|| RuntimeError::Wrong(format!("unbound variable `{x}`"))),
        ExprKind::Const(c) => Ok(constant(c)),
        ExprKind::Lambda(x, body) => {
            Ok(Value::Closure(Arc::new(Closure::Lambda { param: x.clone(), body: (**body).clone(), env: env.clone() })))
        }
        ExprKind::App(f, a) => {
            let f = eval(f, env, fuel)?;
            let a = eval(a, env, fuel)?;
            apply(&f, a, fuel)
        }
        ExprKind::Let(x, bound, body) => {
            let v = eval(bound, env, fuel)?;
            eval(body, &env.extend(x, v), fuel)
        }
        ExprKind::Trans(rules) => Ok(Value::Closure(Arc::new(Closure::Trans { rules: rules.clone(), env: env.clone() }))),
    }
}

/// Evaluates a closed program.
pub fn run(e: &Expr, fuel: u64) -> Result<Value, RuntimeError> {
    eval(e, &Env::new(), &mut Fuel(fuel))
}

fn constant(c: &Constant) -> Value {
    match c {
        Constant::Int(n) => Value::Int(*n),
        Constant::Float(x) => Value::Float(*x),
        Constant::Bool(b) => Value::Bool(*b),
        Constant::Str(s) => Value::Str(s.clone()),
        Constant::Prim(p) => match p {
            Prim::EmptySeq => Value::Coll(Collection::empty(TopoSym::Seq)),
            Prim::EmptySet => Value::Coll(Collection::empty(TopoSym::Set)),
            Prim::EmptyBag => Value::Coll(Collection::empty(TopoSym::Bag)),
            Prim::EmptyGrid => Value::Coll(Collection::empty(TopoSym::Grid)),
            p => Value::Builtin(*p, Vec::new()),
        },
    }
}

pub fn apply(f: &Value, a: Value, fuel: &mut Fuel) -> Result<Value, RuntimeError> {
    fuel.tick()?;
    match f {
        Value::Closure(c) => match &**c {
            Closure::Lambda { param, body, env } => eval(body, &env.extend(param, a), fuel),
            Closure::Trans { .. } => match a {
                Value::Coll(coll) => Ok(Value::Coll(apply_transformation(f, &coll, fuel)?)),
                v => wrong(format!("transformation applied to {v}, not a collection")),
            },
        },
        Value::Builtin(p, args) => {
            let mut args = args.clone();
            args.push(a);
            if args.len() < p.arity() {
                Ok(Value::Builtin(*p, args))
            } else {
                builtin(*p, args)
            }
        }
        v => wrong(format!("{v} is not a function")),
    }
}

fn arith(p: Prim, a: &Value, b: &Value) -> Result<Value, RuntimeError> {
    let float = |x: f64, y: f64| match p {
        Prim::Add => x + y,
        Prim::Sub => x - y,
        _ => x * y,
    };
    Ok(match (a, b) {
        (Value::Int(x), Value::Int(y)) => Value::Int(match p {
            Prim::Add => x.wrapping_add(*y),
            Prim::Sub => x.wrapping_sub(*y),
            _ => x.wrapping_mul(*y),
        }),
        (Value::Int(x), Value::Float(y)) => Value::Float(float(*x as f64, *y)),
        (Value::Float(x), Value::Int(y)) => Value::Float(float(*x, *y as f64)),
        (Value::Float(x), Value::Float(y)) => Value::Float(float(*x, *y)),
        _ => return wrong(format!("`{}` applied to {a} and {b}", p.name())),
    })
}

fn as_grid(v: &Value, p: Prim) -> Result<&Grid, RuntimeError> {
    match v {
        Value::Coll(Collection::Grid(g)) => Ok(g),
        v => wrong(format!("`{}` expects a grid, got {v}", p.name())),
    }
}

fn place(g: &Grid, x: i64, y: i64, v: Value) -> Result<Value, RuntimeError> {
    let mut g = g.clone();
    if !g.insert(x, y, v) {
        return Err(RuntimeError::ShapeErr(format!("grid cell ({x},{y}) is already occupied")));
    }
    Ok(Value::Coll(Collection::Grid(g)))
}

/// Grid insertion relative to the cursor; the first cell goes to the origin.
fn grid_insert(g: &Grid, d: Direction, v: Value) -> Result<Value, RuntimeError> {
    match g.cursor() {
        None => place(g, 0, 0, v),
        Some((x, y)) => {
            let (dx, dy) = d.offset();
            place(g, x + dx, y + dy, v)
        }
    }
}

fn cons(v: Value, c: &Collection) -> Result<Value, RuntimeError> {
    let c = match c {
        Collection::Seq(xs) => Collection::Seq(prepend(v, xs)),
        Collection::Bag(xs) => Collection::Bag(prepend(v, xs)),
        Collection::Set(xs) if xs.iter().any(|x| x.same(&v)) => c.clone(),
        Collection::Set(xs) => Collection::Set(prepend(v, xs)),
        Collection::Grid(g) => return grid_insert(g, Direction::Est, v),
    };
    Ok(Value::Coll(c))
}

fn prepend(v: Value, xs: &[Value]) -> Vec<Value> {
    let mut out = Vec::with_capacity(xs.len() + 1);
    out.push(v);
    out.extend(xs.iter().cloned());
    out
}

/// Whether values `a` and `b` sit at neighboring cells `p`, `p + d`.
fn neighbors_toward(g: &Grid, d: Direction, a: &Value, b: &Value) -> bool {
    let (dx, dy) = d.offset();
    g.coords().zip(g.values()).any(|((x, y), v)| v.same(a) && g.get(x + dx, y + dy).is_some_and(|w| w.same(b)))
}

fn builtin(p: Prim, args: Vec<Value>) -> Result<Value, RuntimeError> {
    let bool_arg = |v: &Value| match v {
        Value::Bool(b) => Ok(*b),
        v => wrong(format!("`{}` expects a boolean, got {v}", p.name())),
    };
    match p {
        Prim::Cons => match &args[1] {
            Value::Coll(c) => cons(args[0].clone(), c),
            v => wrong(format!("`::` expects a collection, got {v}")),
        },
        Prim::Nord | Prim::NegNord | Prim::Est | Prim::NegEst => {
            let g = as_grid(&args[1], p)?;
            grid_insert(g, p.direction().unwrap(), args[0].clone())
        }
        Prim::If => Ok(if bool_arg(&args[0])? { args[1].clone() } else { args[2].clone() }),
        Prim::Gt | Prim::Lt => match args[0].compare(&args[1]) {
            Some(o) => Ok(Value::Bool(o == if p == Prim::Gt { Ordering::Greater } else { Ordering::Less })),
            None => wrong(format!("cannot compare {} and {}", args[0], args[1])),
        },
        Prim::Eq => match (&args[0], &args[1]) {
            (Value::Coll(a), Value::Coll(b)) if a.topology() == b.topology() => Ok(Value::Bool(a.same(b))),
            (a, b) => match a.compare(b) {
                Some(o) => Ok(Value::Bool(o == Ordering::Equal)),
                None => wrong(format!("cannot compare {a} and {b}")),
            },
        },
        Prim::Add | Prim::Sub | Prim::Mul => arith(p, &args[0], &args[1]),
        Prim::Mod => match (&args[0], &args[1]) {
            (Value::Int(_), Value::Int(0)) => Ok(Value::Int(0)),
            (Value::Int(x), Value::Int(y)) => Ok(Value::Int(x.wrapping_rem_euclid(*y))),
            (a, b) => wrong(format!("`mod` applied to {a} and {b}")),
        },
        Prim::And => Ok(Value::Bool(bool_arg(&args[0])? && bool_arg(&args[1])?)),
        Prim::Or => Ok(Value::Bool(bool_arg(&args[0])? || bool_arg(&args[1])?)),
        Prim::NordNb | Prim::NegNordNb | Prim::EstNb | Prim::NegEstNb => {
            let g = as_grid(&args[0], p)?;
            Ok(Value::Bool(neighbors_toward(g, p.direction().unwrap(), &args[1], &args[2])))
        }
        Prim::EmptySeq | Prim::EmptySet | Prim::EmptyBag | Prim::EmptyGrid => unreachable!("constants take no arguments"),
    }
}

/// Applies a transformation value to a collection: maximal disjoint
/// matching rule by rule, then replacement of every matched path.
pub fn apply_transformation(t: &Value, coll: &Collection, fuel: &mut Fuel) -> Result<Collection, RuntimeError> {
    let Value::Closure(c) = t else { return wrong(format!("{t} is not a transformation")) };
    let Closure::Trans { rules, env } = &**c else { return wrong(format!("{t} is not a transformation")) };
    let env = env.extend("self", Value::Coll(coll.clone()));
    let pos = Positions::new(coll);
    let mut consumed = alloc::vec![false; pos.len()];
    let mut found: Vec<(&Rule, Match)> = Vec::new();
    for r in rules {
        while let Some(m) = match_in(&r.pattern, &pos, &consumed, &env, fuel)? {
            for &p in &m.positions {
                consumed[p] = true;
            }
            found.push((r, m));
        }
    }
    let mut replaced: Vec<(Vec<usize>, Vec<Value>)> = Vec::with_capacity(found.len());
    for (r, m) in found {
        let mut renv = env.clone();
        for (x, v) in m.bindings {
            renv = renv.extend(&x, v);
        }
        match eval(&r.replacement, &renv, fuel)? {
            Value::Coll(Collection::Seq(vs)) => replaced.push((m.positions, vs)),
            v => return wrong(format!("rule replacement evaluated to {v}, not a sequence")),
        }
    }
    substitute(coll, &pos, &consumed, replaced)
}

fn substitute(
    coll: &Collection,
    pos: &Positions<'_>,
    consumed: &[bool],
    replaced: Vec<(Vec<usize>, Vec<Value>)>,
) -> Result<Collection, RuntimeError> {
    let kept = || (0..pos.len()).filter(|&i| !consumed[i]).map(|i| pos.value(i).clone());
    Ok(match coll {
        Collection::Seq(_) => {
            // paths in a sequence are runs of consecutive positions
            let mut at: Vec<Option<Vec<Value>>> = alloc::vec![None; pos.len()];
            for (ps, vs) in replaced {
                at[*ps.iter().min().unwrap()] = Some(vs);
            }
            let mut out = Vec::new();
            for (i, slot) in at.into_iter().enumerate() {
                match slot {
                    Some(vs) => out.extend(vs),
                    None if !consumed[i] => out.push(pos.value(i).clone()),
                    None => {}
                }
            }
            Collection::Seq(out)
        }
        Collection::Bag(_) => {
            let mut out: Vec<Value> = kept().collect();
            out.extend(replaced.into_iter().flat_map(|(_, vs)| vs));
            Collection::Bag(out)
        }
        Collection::Set(_) => {
            let mut vs: Vec<Value> = kept().collect();
            vs.extend(replaced.into_iter().flat_map(|(_, vs)| vs));
            Collection::from_values(TopoSym::Set, vs)
        }
        Collection::Grid(g) => {
            let mut g = g.clone();
            for (ps, vs) in replaced {
                if ps.len() != vs.len() {
                    return Err(RuntimeError::ShapeErr(format!(
                        "a path of {} cells cannot be replaced by {} values in a grid",
                        ps.len(),
                        vs.len()
                    )));
                }
                for (p, v) in ps.into_iter().zip(vs) {
                    let (x, y) = pos.coord(p);
                    g.set_cell(x, y, v);
                }
            }
            g.reset_cursor();
            Collection::Grid(g)
        }
    })
}

/// Applies `t` until the collection no longer changes.
pub fn fixpoint(t: &Value, coll: &Collection, fuel: &mut Fuel) -> Result<Collection, RuntimeError> {
    let mut cur = coll.clone();
    loop {
        fuel.tick()?;
        let next = apply_transformation(t, &cur, fuel)?;
        if next.same(&cur) {
            return Ok(next);
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use crate::types::Dialect;
    use alloc::string::ToString;

    fn eval_src(src: &str) -> Result<Value, RuntimeError> {
        run(&parse(src, Dialect::Soft).unwrap(), 100_000)
    }

    fn show(src: &str) -> String {
        eval_src(src).unwrap().to_string()
    }

    #[test]
    fn cons_into_set() {
        assert_eq!(show("1 :: empty_set"), "set{1}");
        assert_eq!(show("1 :: 1 :: empty_set"), "set{1}");
        assert_eq!(show("1 :: 1 :: empty_bag"), "bag{1, 1}");
    }

    #[test]
    fn beta() {
        assert_eq!(show("(fun x -> x) 5"), "5");
    }

    #[test]
    fn bool_plus_is_wrong() {
        assert!(matches!(eval_src("true + 1"), Err(RuntimeError::Wrong(_))));
    }

    #[test]
    fn square_grid() {
        let Value::Coll(Collection::Grid(g)) = eval_src("1 est 2 nord 3 -est 4 :: empty_grid").unwrap() else {
            panic!()
        };
        assert_eq!(g.len(), 4);
        assert!(g.get(0, 0).unwrap().same(&Value::Int(4)));
        assert!(g.get(-1, 0).unwrap().same(&Value::Int(3)));
        assert!(g.get(-1, 1).unwrap().same(&Value::Int(2)));
        assert!(g.get(0, 1).unwrap().same(&Value::Int(1)));
    }

    #[test]
    fn occupied_cell_is_shape_error() {
        assert!(matches!(eval_src("1 -est 2 est 3 :: empty_grid"), Err(RuntimeError::ShapeErr(_))));
    }

    #[test]
    fn swap_once() {
        assert_eq!(show("{x, y / x > y => [y, x]} [3, 1, 2]"), "[1, 3, 2]");
    }

    #[test]
    fn identity() {
        assert_eq!(show("{x => [x]} (1 :: 2 :: 2 :: empty_bag)"), "bag{1, 2, 2}");
        assert_eq!(show("{x => [x]} [1, 2]"), "[1, 2]");
    }

    #[test]
    fn doubling() {
        assert_eq!(show("{x => [x, x]} [1, 2]"), "[1, 1, 2, 2]");
        assert!(matches!(eval_src("{x => [x, x]} (1 :: empty_grid)"), Err(RuntimeError::ShapeErr(_))));
    }

    #[test]
    fn typed_pattern_on_set() {
        assert_eq!(show("{x:int / x mod 2 = 0 => [true]} (1 :: 2 :: empty_set)"), "set{1, true}");
    }

    #[test]
    fn bubble_sort() {
        let e = parse("{x, y / x > y => [y, x]}", Dialect::Soft).unwrap();
        let t = run(&e, 100).unwrap();
        let c = Collection::Seq([3, 2, 4, 2].iter().map(|&n| Value::Int(n)).collect());
        assert_eq!(fixpoint(&t, &c, &mut Fuel(100_000)).unwrap().to_string(), "[2, 2, 3, 4]");
    }

    #[test]
    fn bag_swap_is_fixed_at_once() {
        let t = eval_src("{x, y / x > y => [y, x]}").unwrap();
        let c = Collection::Bag(alloc::vec![Value::Int(2), Value::Int(1)]);
        let mut fuel = Fuel(10_000);
        assert!(fixpoint(&t, &c, &mut fuel).unwrap().same(&c));
        assert!(fuel.0 > 9_990);
    }

    #[test]
    fn seq_swap_cycle_runs_out() {
        let t = eval_src("{x, y / x > y || y > x => [y, x]}").unwrap();
        let c = Collection::Seq(alloc::vec![Value::Int(2), Value::Int(1)]);
        assert_eq!(fixpoint(&t, &c, &mut Fuel(10_000)).unwrap_err(), RuntimeError::OutOfFuel);
    }

    #[test]
    fn empty_collection_is_fixed() {
        let t = eval_src("{x => [x, x]}").unwrap();
        assert!(fixpoint(&t, &Collection::empty(TopoSym::Seq), &mut Fuel(100)).unwrap().is_empty());
    }

    #[test]
    fn stars() {
        assert_eq!(show("{int* as xs => [xs]} [1, 2, true]"), "[[1, 2], true]");
        assert_eq!(show("{x, * as r => [r]} [1, 2, 3]"), "[[2, 3]]");
    }

    #[test]
    fn typed_pair_on_set() {
        assert_eq!(show("{x:int, y:float => [x]} (1 :: 2.0 :: empty_set)"), "set{1}");
    }

    #[test]
    fn grid_swap_keeps_shape() {
        let v = show("{x, y / x > y => [y, x]} (1 est 2 nord 3 -est 4 :: empty_grid)");
        assert!(v.starts_with("grid{"), "{v}");
    }

    #[test]
    fn directions_match_natively() {
        // 1 at (0,0), 2 at (1,0), 3 at (1,1)
        let v = show("{x |nord> y => [y, x]} (3 nord 2 est 1 :: empty_grid)");
        assert_eq!(v, "grid{(0,0): 1, (1,0): 3, (1,1): 2}");
    }

    #[test]
    fn non_boolean_guard_is_wrong() {
        assert!(matches!(eval_src("{x / 1 => [x]} [1]"), Err(RuntimeError::Wrong(_))));
    }

    #[test]
    fn fuel_runs_out() {
        let e = parse("(fun x -> x) 1", Dialect::Soft).unwrap();
        assert_eq!(run(&e, 0).unwrap_err(), RuntimeError::OutOfFuel);
    }

    #[test]
    fn mod_by_zero() {
        assert_eq!(show("7 mod 0"), "0");
        assert_eq!(show("1 + 0.5"), "1.5");
    }
}
