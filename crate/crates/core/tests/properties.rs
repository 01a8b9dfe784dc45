use proptest::prelude::*;

use topo_core::constraints::{comp, infer_soft, GenOptions};
use topo_core::infer_strong::{infer_program, unify};
use topo_core::optimizer::{eliminate_dead_rules, eliminate_type_tests};
use topo_core::runtime::{apply_transformation, match_paths, run, Closure, Collection, Env, Fuel, Value};
use topo_core::solver::{check_solution, least_solution, solve, SolveError};
use topo_core::syntax::{parse, Constant, ElemKind, ElemPattern, Expr, Pattern, Prim, Rule};
use topo_core::types::oracle::FiniteUniverse;
use topo_core::types::{normalize, BaseType, Constraint, Dialect, Substitution, TopoSym, Topology, Type};

fn base() -> impl Strategy<Value = BaseType> {
    prop::sample::select(BaseType::ALL.to_vec())
}

fn topo_sym() -> impl Strategy<Value = TopoSym> {
    prop::sample::select(TopoSym::ALL.to_vec())
}

fn ground_type() -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![base().prop_map(Type::Base), Just(Type::Zero), Just(Type::One)];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (topo_sym(), inner.clone()).prop_map(|(s, t)| Type::coll(Topology::Sym(s), t)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::union(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::inter(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Type::cond(a, b)),
        ]
    })
}

/// Types of the strong fragment over a few variables.
fn simple_type() -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![
        base().prop_map(Type::Base),
        prop::sample::select(vec!["a", "b", "c"]).prop_map(Type::var),
    ];
    let topo = prop_oneof![topo_sym().prop_map(Topology::Sym), prop::sample::select(vec!["t", "u"]).prop_map(Topology::var)];
    leaf.prop_recursive(3, 10, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::arrow(a, b)),
            (topo.clone(), inner).prop_map(|(r, t)| Type::coll(r, t)),
        ]
    })
}

fn universe_values() -> Vec<Value> {
    let u = FiniteUniverse { max_depth: 1, ..FiniteUniverse::default() };
    u.values(&Type::One).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalize_is_idempotent(t in ground_type()) {
        let n = normalize(&t);
        prop_assert_eq!(normalize(&n), n);
    }

    #[test]
    fn normalize_preserves_membership(t in ground_type()) {
        let u = FiniteUniverse::default();
        let n = normalize(&t);
        for v in universe_values() {
            prop_assert_eq!(u.member_ground(&v, &t).unwrap(), u.member_ground(&v, &n).unwrap(), "{} vs {}", t, n);
        }
    }

    #[test]
    fn mgu_unifies_and_is_idempotent(a in simple_type(), b in simple_type()) {
        if let Ok(s) = unify(&a, &b) {
            prop_assert_eq!(s.apply(&a), s.apply(&b));
            prop_assert_eq!(s.apply(&s.apply(&a)), s.apply(&a));
        }
    }

    #[test]
    fn unification_failure_is_symmetric(a in simple_type(), b in simple_type()) {
        prop_assert_eq!(unify(&a, &b).is_ok(), unify(&b, &a).is_ok());
    }

    #[test]
    fn mgu_factors_instances(a in simple_type(), fill in simple_type(), pick in 0usize..3) {
        // b is an instance of a, so any unifier factors through the mgu
        let v = ["a", "b", "c"][pick];
        if fill.occurs(v) {
            return Ok(());
        }
        let theta = Substitution::single_type(v, fill);
        let b = theta.apply(&a);
        let s = unify(&a, &b).expect("an instance always unifies with its pattern");
        prop_assert_eq!(theta.apply(&s.apply(&a)), theta.apply(&a));
    }
}

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

fn leaf_expr() -> impl Strategy<Value = Expr> {
    prop_oneof![
        prop::sample::select(NAMES.to_vec()).prop_map(Expr::var),
        (-5i64..20).prop_map(Expr::int),
        prop::sample::select(vec![0.5, 2.0, 3.25]).prop_map(|x| Expr::constant(Constant::Float(x))),
        any::<bool>().prop_map(|b| Expr::constant(Constant::Bool(b))),
        "[a-z]{0,3}".prop_map(|s| Expr::constant(Constant::Str(s))),
        prop::sample::select(Prim::ALL.to_vec()).prop_map(Expr::prim),
    ]
}

fn elem() -> impl Strategy<Value = ElemKind> {
    prop_oneof![
        Just(0u8).prop_map(|_| ElemKind::Plain(String::new())),
        base().prop_map(|b| ElemKind::Typed(String::new(), b)),
        Just(0u8).prop_map(|_| ElemKind::Star(String::new())),
        base().prop_map(|b| ElemKind::TypedStar(b, String::new())),
    ]
}

fn name_elements(kinds: Vec<ElemKind>) -> Vec<ElemPattern> {
    kinds
        .into_iter()
        .enumerate()
        .map(|(i, k)| {
            let x = NAMES[i].to_string();
            ElemPattern::new(match k {
                ElemKind::Plain(_) => ElemKind::Plain(x),
                ElemKind::Typed(_, b) => ElemKind::Typed(x, b),
                ElemKind::Star(_) => ElemKind::Star(x),
                ElemKind::TypedStar(b, _) => ElemKind::TypedStar(b, x),
            })
        })
        .collect()
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf_expr().prop_recursive(4, 24, 3, |inner| {
        let rule = (prop::collection::vec(elem(), 1..4), prop::option::of(inner.clone()), inner.clone()).prop_map(
            |(ks, g, r)| {
                let mut p = Pattern::new(name_elements(ks));
                if let Some(g) = g {
                    p.guard = g;
                }
                Rule { pattern: p, replacement: r }
            },
        );
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Expr::app(f, a)),
            (prop::sample::select(NAMES.to_vec()), inner.clone()).prop_map(|(x, b)| Expr::lambda(x, b)),
            (prop::sample::select(NAMES.to_vec()), inner.clone(), inner.clone())
                .prop_map(|(x, a, b)| Expr::let_in(x, a, b)),
            prop::collection::vec(inner, 0..3).prop_map(Expr::seq),
            prop::collection::vec(rule, 1..3).prop_map(Expr::trans),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_then_parse_round_trips(e in expr()) {
        let printed = e.to_string();
        let back = parse(&printed, Dialect::Soft).map_err(|err| TestCaseError::fail(format!("{printed}: {err}")))?;
        prop_assert!(e.alpha_eq(&back), "{}", printed);
    }
}

/// Systems over `a`, `b` in the accepted input form.
fn system() -> impl Strategy<Value = Vec<Constraint>> {
    let atom = prop_oneof![
        Just(Type::INT),
        Just(Type::BOOL),
        Just(Type::coll(Topology::Sym(TopoSym::Seq), Type::INT)),
    ];
    let var = prop::sample::select(vec!["a", "b"]).prop_map(Type::var);
    let lhs = prop_oneof![
        atom.clone(),
        var.clone(),
        (atom.clone(), var.clone(), atom.clone()).prop_map(|(t, v, b)| Type::cond(t, Type::inter(v, b))),
        var.clone().prop_map(|v| Type::coll(Topology::Sym(TopoSym::Seq), v)),
    ];
    let rhs = prop_oneof![
        atom.clone(),
        var.clone(),
        var.clone().prop_map(|v| Type::coll(Topology::Sym(TopoSym::Seq), v)),
    ];
    let c = prop_oneof![
        (lhs, rhs).prop_map(|(l, r)| Constraint::new(l, r)),
        (var, atom.clone(), atom).prop_map(|(v, x, y)| Constraint::new(v, Type::union(x, y))),
    ];
    prop::collection::vec(c, 1..5)
}

fn candidates() -> Vec<Type> {
    let atoms = [Type::INT, Type::BOOL, Type::coll(Topology::Sym(TopoSym::Seq), Type::INT)];
    (0..8u8)
        .map(|m| Type::Union((0..3).filter(|i| m & (1 << i) != 0).map(|i| atoms[i].clone()).collect()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_verdicts_are_sound(sys in system()) {
        let u = FiniteUniverse::default();
        match solve(&sys) {
            Ok(f) => {
                let targets = vec!["a".to_string(), "b".to_string()];
                let l = least_solution(&f, &targets);
                if !l.recursive.is_empty() {
                    return Ok(());
                }
                let mut s = Substitution::new();
                for v in &targets {
                    let t = l.subst.apply(&Type::var(v));
                    s.types.insert(v.clone(), t);
                }
                let mut zero = Substitution::new();
                zero.types.insert("a".into(), Type::Zero);
                zero.types.insert("b".into(), Type::Zero);
                let s = zero.compose(&s);
                prop_assert!(check_solution(&sys, &s, &u), "{:?}", sys.iter().map(|c| c.to_string()).collect::<Vec<_>>());
            }
            Err(SolveError::Unsolvable { .. }) => {
                for ta in candidates() {
                    for tb in candidates() {
                        let mut s = Substitution::single_type("a", ta.clone());
                        s.types.insert("b".into(), tb.clone());
                        prop_assert!(!check_solution(&sys, &s, &u), "solution a={} b={} missed", ta, tb);
                    }
                }
            }
            Err(SolveError::NotInductive { .. }) => {}
        }
    }
}

fn first_order_value(depth: u32) -> BoxedStrategy<Value> {
    let leaf = prop_oneof![
        (-3i64..4).prop_map(Value::Int),
        prop::sample::select(vec![0.5, 1.0]).prop_map(Value::Float),
        any::<bool>().prop_map(Value::Bool),
    ];
    if depth == 0 {
        return leaf.boxed();
    }
    prop_oneof![4 => leaf, 1 => collection(depth - 1).prop_map(Value::Coll)].boxed()
}

fn collection(depth: u32) -> BoxedStrategy<Collection> {
    (topo_sym(), prop::collection::vec(first_order_value(depth), 0..6))
        .prop_map(|(s, vs)| Collection::from_values(s, vs))
        .boxed()
}

fn transformation(src: &str) -> Value {
    run(&parse(src, Dialect::Soft).unwrap(), 1000).unwrap()
}

const TRANSFORMATIONS: [&str; 6] = [
    "{x => [x]}",
    "{x, y / x > y => [y, x]}",
    "{x:int => [x + 1]; y => [y]}",
    "{x:int, y:int => [y, x]}",
    "{int* as xs => [0]}",
    "{x:bool => [x, x]}",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn identity_transformation(c in collection(1)) {
        let id = transformation("{x => [x]}");
        let out = apply_transformation(&id, &c, &mut Fuel(100_000)).unwrap();
        prop_assert!(out.same(&c));
    }

    #[test]
    fn application_preserves_topology_and_is_deterministic(c in collection(1), i in 0..TRANSFORMATIONS.len()) {
        let t = transformation(TRANSFORMATIONS[i]);
        let a = apply_transformation(&t, &c, &mut Fuel(100_000));
        let b = apply_transformation(&t, &c, &mut Fuel(100_000));
        match (&a, &b) {
            (Ok(x), Ok(y)) => {
                prop_assert_eq!(x.topology(), c.topology());
                prop_assert!(x.same(y));
            }
            (Err(x), Err(y)) => prop_assert_eq!(x, y),
            _ => prop_assert!(false, "runs disagree"),
        }
    }

    #[test]
    fn empty_compatibility_means_no_match(
        ks in prop::collection::vec(elem(), 1..3),
        tau in ground_type(),
        seed in prop::collection::vec(first_order_value(1), 0..6),
        s in topo_sym(),
    ) {
        let elements = name_elements(ks);
        if normalize(&comp(&elements, &tau)) != Type::Zero {
            return Ok(());
        }
        let u = FiniteUniverse::default();
        let members: Vec<Value> = seed.into_iter().filter(|v| u.member_ground(v, &tau).unwrap_or(false)).collect();
        let c = Collection::from_values(s, members);
        let p = Pattern::new(elements);
        let consumed = vec![false; c.len()];
        let m = match_paths(&p, &c, &consumed, &Env::new(), &mut Fuel(100_000)).unwrap();
        prop_assert!(m.is_none());
    }

    #[test]
    fn optimized_transformations_agree(
        i in 0..TRANSFORMATIONS.len(),
        b in base(),
        vs in prop::collection::vec(-3i64..4, 0..6),
        s in topo_sym(),
    ) {
        let tau = Type::Base(b);
        let u = FiniteUniverse::default();
        let pool = u.base_values(b);
        let c = Collection::from_values(s, vs.iter().map(|&n| pool[n.unsigned_abs() as usize % pool.len()].clone()).collect());
        let t = transformation(TRANSFORMATIONS[i]);
        let Value::Closure(cl) = &t else { unreachable!() };
        let Closure::Trans { rules, env } = &**cl else { unreachable!() };
        let (r1, _) = eliminate_dead_rules(rules, &tau);
        let (r2, _) = eliminate_type_tests(&r1, &tau);
        prop_assert!(r2.len() <= rules.len());
        let opt = Value::Closure(std::sync::Arc::new(Closure::Trans { rules: r2, env: env.clone() }));
        let a = apply_transformation(&t, &c, &mut Fuel(100_000));
        let o = apply_transformation(&opt, &c, &mut Fuel(100_000));
        match (a, o) {
            (Ok(x), Ok(y)) => prop_assert!(x.same(&y), "{} vs {}", x, y),
            (Err(x), Err(y)) => prop_assert_eq!(x.name(), y.name()),
            (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
        }
    }
}

#[test]
fn inference_is_deterministic() {
    for src in ["{x, y / x > y => [x, y, (x - y)]; x => [x]}", "fun f -> {x => [f x]}", "let id = fun x -> x in id 3"] {
        let e = parse(src, Dialect::Soft).unwrap();
        let a = infer_soft(&e, GenOptions::default()).unwrap();
        let b = infer_soft(&e, GenOptions::default()).unwrap();
        assert_eq!(a.presented.scheme, b.presented.scheme);
        if let Ok(e) = parse(src, Dialect::Strong) {
            assert_eq!(infer_program(&e).unwrap().scheme, infer_program(&e).unwrap().scheme);
        }
    }
}
