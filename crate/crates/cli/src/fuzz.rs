//! Seeded generators for types, constraint systems, patterns,
//! transformations and collections.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use topo_core::runtime::{Collection, Value};
use topo_core::syntax::{parse, ElemKind, ElemPattern, Expr, Pattern, Rule};
use topo_core::types::oracle::FiniteUniverse;
use topo_core::types::{BaseType, Constraint, Dialect, TopoSym, Topology, Type};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const NAMES: [&str; 4] = ["x", "y", "z", "w"];

fn base(r: &mut Rng8) -> BaseType {
    *BaseType::ALL.choose(r).unwrap()
}

fn topo_sym(r: &mut Rng8) -> TopoSym {
    *TopoSym::ALL.choose(r).unwrap()
}

pub fn int_seq(r: &mut Rng8, max_len: usize) -> Vec<i64> {
    let n = r.gen_range(0..=max_len);
    (0..n).map(|_| r.gen_range(-50..50)).collect()
}

/// First-order ground types built from every constructor.
pub fn ground_type(r: &mut Rng8, depth: u32) -> Type {
    if depth == 0 || r.gen_bool(0.35) {
        return match r.gen_range(0..6) {
            0 => Type::Zero,
            1 => Type::One,
            _ => Type::Base(base(r)),
        };
    }
    match r.gen_range(0..4) {
        0 => Type::coll(Topology::Sym(topo_sym(r)), ground_type(r, depth - 1)),
        1 => Type::union(ground_type(r, depth - 1), ground_type(r, depth - 1)),
        2 => Type::inter(ground_type(r, depth - 1), ground_type(r, depth - 1)),
        _ => Type::cond(ground_type(r, depth - 1), ground_type(r, depth - 1)),
    }
}

/// Types of the strong fragment over the variables `a`, `b`, `c` and the
/// topology variables `t`, `u`.
pub fn simple_type(r: &mut Rng8, depth: u32) -> Type {
    if depth == 0 || r.gen_bool(0.3) {
        return if r.gen_bool(0.5) {
            Type::Base(base(r))
        } else {
            Type::var(["a", "b", "c"].choose(r).unwrap())
        };
    }
    if r.gen_bool(0.5) {
        Type::arrow(simple_type(r, depth - 1), simple_type(r, depth - 1))
    } else {
        let topo = if r.gen_bool(0.5) { Topology::Sym(topo_sym(r)) } else { Topology::var(["t", "u"].choose(r).unwrap()) };
        Type::coll(topo, simple_type(r, depth - 1))
    }
}

fn seq(t: Type) -> Type {
    Type::coll(Topology::Sym(TopoSym::Seq), t)
}

/// Systems over `a` and `b` in the accepted input form: variable bounds,
/// guarded lower bounds `t ? (v & b)`, collection bounds and unions as
/// upper bounds of a variable.
pub fn system(r: &mut Rng8) -> Vec<Constraint> {
    let atoms = [Type::INT, Type::BOOL, seq(Type::INT)];
    let atom = |r: &mut Rng8| atoms.choose(r).unwrap().clone();
    let var = |r: &mut Rng8| Type::var(["a", "b"].choose(r).unwrap());
    let n = r.gen_range(1..=4);
    (0..n)
        .map(|_| {
            if r.gen_bool(0.15) {
                return Constraint::new(var(r), Type::union(atom(r), atom(r)));
            }
            let lhs = match r.gen_range(0..4) {
                0 => atom(r),
                1 => var(r),
                2 => Type::cond(atom(r), Type::inter(var(r), atom(r))),
                _ => seq(var(r)),
            };
            let rhs = match r.gen_range(0..3) {
                0 => atom(r),
                1 => var(r),
                _ => seq(var(r)),
            };
            Constraint::new(lhs, rhs)
        })
        .collect()
}

/// Ground types a variable of a fuzzed system is enumerated over: `1` and
/// every union of the atoms below (the empty union is `0`).
pub fn ground_candidates() -> Vec<Type> {
    let atoms = [Type::INT, Type::BOOL, Type::STRING, seq(Type::INT), seq(Type::BOOL)];
    let mut out: Vec<Type> = (0..1u32 << atoms.len())
        .map(|m| match (0..atoms.len()).filter(|i| m & (1 << i) != 0).map(|i| atoms[i].clone()).collect::<Vec<_>>() {
            ts if ts.is_empty() => Type::Zero,
            mut ts if ts.len() == 1 => ts.pop().unwrap(),
            ts => Type::Union(ts),
        })
        .collect();
    out.push(Type::One);
    out
}

pub fn element_kind(r: &mut Rng8, x: &str) -> ElemKind {
    let x = x.to_string();
    match r.gen_range(0..6) {
        0 | 1 => ElemKind::Plain(x),
        2 | 3 => ElemKind::Typed(x, base(r)),
        4 => ElemKind::Star(x),
        _ => ElemKind::TypedStar(base(r), x),
    }
}

pub fn pattern_elements(r: &mut Rng8) -> Vec<ElemPattern> {
    let n = r.gen_range(1..=3);
    (0..n).map(|i| ElemPattern::new(element_kind(r, NAMES[i]))).collect()
}

const GUARDS: [&str; 4] = ["true", "x > 0", "x = x", "false || true"];
const REPLACEMENTS: [&str; 6] = ["[x]", "[x, 1]", "[]", "[true]", "[x, x]", "[\"s\"]"];

fn expr(src: &str) -> Expr {
    parse(src, Dialect::Soft).expect("fixed fuzzer fragments parse")
}

/// Rule lists for the optimizer check. The first element of every pattern
/// is named `x`, which the guards and replacements refer to.
pub fn rules(r: &mut Rng8) -> Vec<Rule> {
    let n = r.gen_range(1..=3);
    (0..n)
        .map(|_| {
            let mut p = Pattern::new(pattern_elements(r));
            p.guard = expr(GUARDS.choose(r).unwrap());
            Rule { pattern: p, replacement: expr(REPLACEMENTS.choose(r).unwrap()) }
        })
        .collect()
}

/// A collection of up to `max_len` values drawn from `pool`.
pub fn collection_from(r: &mut Rng8, pool: &[Value], max_len: usize) -> Collection {
    let s = topo_sym(r);
    let n = if pool.is_empty() { 0 } else { r.gen_range(0..=max_len) };
    let vs = (0..n).map(|_| pool.choose(r).unwrap().clone()).collect();
    Collection::from_values(s, vs)
}

/// Inhabitants of a ground type in the default universe.
pub fn members(t: &Type) -> Vec<Value> {
    FiniteUniverse::default().values(t).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generators_repeat() {
        let (mut a, mut b) = (rng(7), rng(7));
        for _ in 0..20 {
            assert_eq!(system(&mut a), system(&mut b));
            assert_eq!(ground_type(&mut a, 3), ground_type(&mut b, 3));
        }
    }

    #[test]
    fn candidates_cover_zero_and_one() {
        let c = ground_candidates();
        assert_eq!(c.len(), 33);
        assert!(c.contains(&Type::Zero) && c.contains(&Type::One));
    }

    #[test]
    fn simple_types_stay_in_fragment() {
        let mut r = rng(1);
        for _ in 0..100 {
            assert!(simple_type(&mut r, 4).is_simple());
        }
    }
}
