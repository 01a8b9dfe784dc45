//! The acceptance suite. Each criterion is a function returning a
//! [`Verdict`]; `check-corpus` and the `acceptance` test target both run
//! them through [`run_all`].

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::Rng;

use topo_core::constraints::{comp, generate_program, infer_soft, GenOptions};
use topo_core::infer_strong::{infer_program, unify};
use topo_core::optimizer::{eliminate_dead_rules, eliminate_type_tests};
use topo_core::runtime::{apply_transformation, fixpoint, match_paths, run, Closure, Collection, Env, Fuel, RuntimeError, Value};
use topo_core::solver::{check_solution, least_solution, solve, SolveError};
use topo_core::syntax::{parse, Pattern};
use topo_core::types::oracle::FiniteUniverse;
use topo_core::types::{
    normalize, parse_scheme, BaseType, Constraint, Dialect, Substitution, TopoSym, Topology, Type, TypeScheme,
};

use crate::commands::{typecheck, Mode};
use crate::fuzz;

#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn line(&self) -> String {
        format!("criterion {:>2} {} {}: {}", self.id, if self.passed { "PASS" } else { "FAIL" }, self.title, self.detail)
    }
}

fn verdict(id: u8, title: &'static str, failures: Vec<String>, summary: String) -> Verdict {
    let passed = failures.is_empty();
    let detail = if passed { summary } else { format!("{summary}; {}", failures.join("; ")) };
    Verdict { id, title, passed, detail }
}

fn soft_scheme(src: &str, refine_catch_all: bool) -> Result<TypeScheme, String> {
    let e = parse(src, Dialect::Soft).map_err(|e| e.to_string())?;
    infer_soft(&e, GenOptions { refine_catch_all }).map(|t| t.presented.scheme).map_err(|e| e.to_string())
}

/// Equality up to a bijective renaming of variables and the canonical order
/// of unions and intersections.
pub fn alpha_equivalent(a: &TypeScheme, b: &TypeScheme) -> bool {
    if a.constraints.len() != b.constraints.len() {
        return false;
    }
    let (fa, fb) = (scheme_vars(a), scheme_vars(b));
    if fa.0.len() != fb.0.len() || fa.1.len() != fb.1.len() {
        return false;
    }
    let norm = |sc: &TypeScheme, s: &Substitution| -> (Type, BTreeSet<(Type, Type)>) {
        let cs = sc.constraints.iter().map(|c| (normalize(&s.apply(&c.lhs)), normalize(&s.apply(&c.rhs)))).collect();
        (normalize(&s.apply(&sc.body)), cs)
    };
    let target = norm(b, &Substitution::new());
    fa.0.iter().permutations(fa.0.len()).any(|tys| {
        fa.1.iter().permutations(fa.1.len()).any(|tps| {
            let mut s = Substitution::new();
            for (v, w) in tys.iter().zip(&fb.0) {
                s.types.insert((*v).clone(), Type::var(w));
            }
            for (v, w) in tps.iter().zip(&fb.1) {
                s.topos.insert((*v).clone(), Topology::var(w));
            }
            norm(a, &s) == target
        })
    })
}

fn scheme_vars(sc: &TypeScheme) -> (Vec<String>, Vec<String>) {
    let mut fv = sc.body.free_vars();
    for c in &sc.constraints {
        c.collect_free(&mut fv);
    }
    (fv.types.into_iter().collect(), fv.topos.into_iter().collect())
}

fn expect_scheme(src: &str, refine: bool, expected: &str, failures: &mut Vec<String>) -> String {
    let want = parse_scheme(expected).expect("expected schemes parse");
    match soft_scheme(src, refine) {
        Ok(got) if alpha_equivalent(&got, &want) => got.to_string(),
        Ok(got) => {
            failures.push(format!("`{src}` gave {got}, expected {expected}"));
            got.to_string()
        }
        Err(e) => {
            failures.push(format!("`{src}` rejected: {e}"));
            String::new()
        }
    }
}

pub fn strong_derivation() -> Verdict {
    let src = "{x,y/x>y => [x,y,(x-y)]; x => [x]}";
    let t0 = Instant::now();
    let out = typecheck("criterion", src, Mode::Strong, false);
    let took = t0.elapsed();
    let mut failures = Vec::new();
    let got = out.stdout.trim();
    match parse_scheme(got) {
        Ok(sc) if alpha_equivalent(&sc, &parse_scheme("forall t. [t] int -> [t] int").unwrap()) => {}
        _ => failures.push(format!("got `{got}` {}", out.stderr.trim())),
    }
    if took >= Duration::from_secs(1) {
        failures.push(format!("took {took:?}"));
    }
    verdict(1, "strong derivation", failures, format!("{got} in {:.1} ms", took.as_secs_f64() * 1e3))
}

pub fn soft_derivation() -> Verdict {
    let mut failures = Vec::new();
    let a = expect_scheme("{x:int => [x;1]}", false, "forall a,t. [t] a -> [t] a", &mut failures);
    let b = expect_scheme("{x:int => [true]}", false, "forall a,t. [t] a -> [t] (a | (bool ? (a & int)))", &mut failures);
    verdict(2, "soft derivations", failures, format!("{a}; {b}"))
}

pub fn map_refinement() -> Verdict {
    let mut failures = Vec::new();
    let src = "fun f -> {x => [f x]}";
    let a = expect_scheme(src, false, "forall a,b,t. (a -> b) -> [t] a -> [t] (a | b)", &mut failures);
    let b = expect_scheme(src, true, "forall a,b,t. (a -> b) -> [t] a -> [t] b", &mut failures);
    verdict(3, "map refinement", failures, format!("{a}; with refinement {b}"))
}

#[derive(Default)]
struct CorpusStats {
    programs: usize,
    values: usize,
    checked: usize,
    shape_errs: usize,
    out_of_fuel: usize,
}

fn corpus_files(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map(|rd| rd.filter_map(Result::ok).map(|e| e.path()).filter(|p| p.extension().is_some_and(|x| x == "mgs")).collect())
        .unwrap_or_default();
    files.sort();
    files
}

/// Free variables of a result type are instantiated with `0` and topology
/// variables with `seq`: a closed program's value must lie in every
/// instance.
fn ground_result(t: &Type) -> Type {
    let fv = t.free_vars();
    let mut s = Substitution::new();
    for v in fv.types {
        s.types.insert(v, Type::Zero);
    }
    for v in fv.topos {
        s.topos.insert(v, Topology::Sym(TopoSym::Seq));
    }
    s.apply(t)
}

fn corpus_dialect(dir: &Path, dialect: Dialect, stats: &mut CorpusStats, failures: &mut Vec<String>) {
    let u = FiniteUniverse::default();
    for path in corpus_files(dir) {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let Ok(src) = std::fs::read_to_string(&path) else {
            failures.push(format!("{name}: unreadable"));
            continue;
        };
        let e = match parse(&src, dialect) {
            Ok(e) => e,
            Err(err) => {
                failures.push(format!("{name}: {err}"));
                continue;
            }
        };
        let ty = match dialect {
            Dialect::Strong => infer_program(&e).map(|t| t.scheme.body).map_err(|e| e.to_string()),
            Dialect::Soft => infer_soft(&e, GenOptions::default()).map(|t| t.presented.scheme.body).map_err(|e| e.to_string()),
        };
        let ty = match ty {
            Ok(t) => t,
            Err(err) => {
                failures.push(format!("{name}: does not type-check: {err}"));
                continue;
            }
        };
        stats.programs += 1;
        match run(&e, 100_000) {
            Ok(v) => {
                stats.values += 1;
                if v.is_first_order() {
                    stats.checked += 1;
                    let t = ground_result(&ty);
                    match u.member_ground(&v, &t) {
                        Ok(true) => {}
                        Ok(false) => failures.push(format!("{name}: {v} is not in {t}")),
                        Err(err) => failures.push(format!("{name}: membership of {v} in {t}: {err}")),
                    }
                }
            }
            Err(RuntimeError::Wrong(m)) => failures.push(format!("{name}: wrong: {m}")),
            Err(RuntimeError::ShapeErr(_)) => stats.shape_errs += 1,
            Err(RuntimeError::OutOfFuel) => stats.out_of_fuel += 1,
        }
    }
}

pub fn soundness(corpus: &Path) -> Verdict {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for (sub, dialect) in [("strong", Dialect::Strong), ("soft", Dialect::Soft)] {
        let mut stats = CorpusStats::default();
        corpus_dialect(&corpus.join(sub), dialect, &mut stats, &mut failures);
        if stats.programs < 30 {
            failures.push(format!("only {} well-typed {sub} programs", stats.programs));
        }
        parts.push(format!(
            "{sub}: {} programs, {} values ({} checked for membership), {} shape_err, {} out_of_fuel",
            stats.programs, stats.values, stats.checked, stats.shape_errs, stats.out_of_fuel
        ));
    }
    let took = t0.elapsed();
    if took >= Duration::from_secs(30) {
        failures.push(format!("took {took:?}"));
    }
    verdict(4, "soundness on the corpus", failures, format!("{} in {:.2} s", parts.join(", "), took.as_secs_f64()))
}

fn transformation(src: &str) -> Value {
    run(&parse(src, Dialect::Soft).expect("fixed source parses"), 1000).expect("transformation literal evaluates")
}

fn ints(ns: &[i64]) -> Vec<Value> {
    ns.iter().map(|&n| Value::Int(n)).collect()
}

/// Multiplicity of `v` in `c`.
fn count(c: &Collection, v: &Value) -> usize {
    c.elements().iter().filter(|w| w.same(v)).count()
}

/// Outcome of `{x => [x,x]}` on a three-element collection of each
/// topology: whether it meets the criterion, and what happened.
pub fn doubling_outcomes() -> Vec<(TopoSym, bool, String)> {
    let t = transformation("{x => [x,x]}");
    [TopoSym::Grid, TopoSym::Seq, TopoSym::Set, TopoSym::Bag]
        .into_iter()
        .map(|s| {
            let c = Collection::from_values(s, ints(&[1, 2, 3]));
            let r = apply_transformation(&t, &c, &mut Fuel(100_000));
            let (ok, what) = match (s, r) {
                (TopoSym::Grid, Err(RuntimeError::ShapeErr(_))) => (true, "shape_err".to_string()),
                (TopoSym::Grid, other) => (false, format!("expected shape_err, got {other:?}")),
                (_, Ok(out)) => {
                    let doubled =
                        out.len() == 2 * c.len() && c.elements().iter().all(|v| count(&out, v) == 2 * count(&c, v));
                    let note = if doubled { String::new() } else { format!(", size {} -> {}, not doubled", c.len(), out.len()) };
                    (doubled, format!("{c} -> {out}{note}"))
                }
                (_, Err(e)) => (false, e.to_string()),
            };
            (s, ok, format!("{}: {what}", s.name()))
        })
        .collect()
}

pub fn newtonian_shapes() -> Verdict {
    let outcomes = doubling_outcomes();
    let failures = outcomes.iter().filter(|o| !o.1).map(|o| format!("{} fails", o.0.name())).collect();
    verdict(5, "newtonian shape errors", failures, outcomes.into_iter().map(|o| o.2).join(", "))
}

pub fn bubble_sort() -> Verdict {
    let t = transformation("{x,y/x>y => [y,x]}");
    let mut r = fuzz::rng(6);
    let mut ok = 0;
    let mut failures = Vec::new();
    for _ in 0..100 {
        let xs = fuzz::int_seq(&mut r, 20);
        let mut sorted = xs.clone();
        sorted.sort();
        let c = Collection::Seq(ints(&xs));
        match fixpoint(&t, &c, &mut Fuel(100_000)) {
            Ok(out) if out.same(&Collection::Seq(ints(&sorted))) => ok += 1,
            Ok(out) => failures.push(format!("{xs:?} sorted to {out}")),
            Err(e) => failures.push(format!("{xs:?}: {e}")),
        }
    }
    let grid = transformation("1 est 2 nord 3 -est 4 :: empty_grid");
    let Value::Coll(g) = grid else { unreachable!() };
    let coords = |c: &Collection| match c {
        Collection::Grid(g) => g.coords().collect::<Vec<_>>(),
        _ => Vec::new(),
    };
    let grid_note = match apply_transformation(&t, &g, &mut Fuel(100_000)) {
        Ok(out) => {
            let mut before: Vec<String> = g.elements().iter().map(|v| v.to_string()).collect();
            let mut after: Vec<String> = out.elements().iter().map(|v| v.to_string()).collect();
            before.sort();
            after.sort();
            if out.topology() != TopoSym::Grid || coords(&out) != coords(&g) || before != after {
                failures.push(format!("grid {g} became {out}"));
            }
            format!("grid {g} -> {out}")
        }
        Err(e) => {
            failures.push(format!("grid: {e}"));
            String::new()
        }
    };
    verdict(6, "bubble sort", failures, format!("{ok}/100 seqs sorted; {grid_note}"))
}

/// Instantiates recursive least solutions `a = t(a)` by unrolling from `0`
/// deeper than the universe can observe.
fn unroll(s: &Substitution, recursive: &[Constraint], depth: usize) -> Substitution {
    let eqs: Vec<(String, Type)> = recursive
        .iter()
        .filter_map(|c| match &c.lhs {
            Type::Var(v) if c.rhs.occurs(v) => Some((v.clone(), s.apply(&c.rhs))),
            _ => None,
        })
        .collect();
    let mut u = Substitution::new();
    for (v, _) in &eqs {
        u.types.insert(v.clone(), Type::Zero);
    }
    for _ in 0..depth + 2 {
        let mut next = Substitution::new();
        for (v, t) in &eqs {
            next.types.insert(v.clone(), normalize(&u.apply(t)));
        }
        u = next;
    }
    u.compose(s)
}

fn system_vars(sys: &[Constraint]) -> (Vec<String>, Vec<String>) {
    let mut fv = topo_core::types::FreeVars::default();
    for c in sys {
        c.collect_free(&mut fv);
    }
    (fv.types.into_iter().collect(), fv.topos.into_iter().collect())
}

/// Every ground assignment of `vars` (and of `topos`) drawn from the
/// candidate family.
fn assignments(vars: &[String], topos: &[String]) -> Vec<Substitution> {
    let cands = fuzz::ground_candidates();
    let mut out = vec![Substitution::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|s| {
                cands.iter().map(move |t| {
                    let mut s = s.clone();
                    s.types.insert(v.clone(), t.clone());
                    s
                })
            })
            .collect();
    }
    for v in topos {
        out = out
            .into_iter()
            .flat_map(|s| {
                TopoSym::ALL.iter().map(move |&r| {
                    let mut s = s.clone();
                    s.topos.insert(v.clone(), Topology::Sym(r));
                    s
                })
            })
            .collect();
    }
    out
}

/// Checks the least solution of a solvable system. Variables in `params`
/// are left open and range over every ground candidate; the others get
/// their least solution, `0` when they have no lower bound.
fn least_solution_holds(sys: &[Constraint], params: &[String], u: &FiniteUniverse) -> Result<(), String> {
    let f = solve(sys).map_err(|e| e.to_string())?;
    let (vars, topos) = system_vars(sys);
    let targets: Vec<String> = vars.iter().filter(|v| !params.contains(v)).cloned().collect();
    let least = least_solution(&f, &targets);
    let mut s = unroll(&least.subst, &least.recursive, u.max_depth);
    let mut zero = Substitution::new();
    for v in &targets {
        if s.apply(&Type::var(v)) == Type::var(v) {
            zero.types.insert(v.clone(), Type::Zero);
        }
    }
    s = zero.compose(&s);
    for g in assignments(params, &topos) {
        let full = g.compose(&s);
        if !check_solution(sys, &full, u) {
            let shown = vars.iter().map(|v| format!("{v} := {}", full.apply(&Type::var(v)))).join(", ");
            return Err(format!("least solution {shown} fails"));
        }
    }
    Ok(())
}

/// Type variables at negative positions of `t`.
fn negative_vars(t: &Type) -> Vec<String> {
    let (mut pos, mut neg) = (BTreeSet::new(), BTreeSet::new());
    t.polar_vars(true, &mut pos, &mut neg);
    neg.into_iter().collect()
}

pub fn solver_soundness() -> Verdict {
    let u = FiniteUniverse { max_depth: 2, max_collection_size: 3, ..FiniteUniverse::default() };
    let mut failures = Vec::new();
    for src in ["{x:int => [x;1]}", "{x:int => [true]}"] {
        let e = parse(src, Dialect::Soft).unwrap();
        match generate_program(&e, GenOptions::default()) {
            Ok(g) => {
                if let Err(m) = least_solution_holds(&g.system(), &negative_vars(&g.ty), &u) {
                    failures.push(format!("`{src}`: {m}"));
                }
            }
            Err(e) => failures.push(format!("`{src}`: {e}")),
        }
    }
    let mut r = fuzz::rng(7);
    let (mut solvable, mut unsolvable) = (0, 0);
    for _ in 0..200 {
        let sys = fuzz::system(&mut r);
        let shown = || sys.iter().map(|c| c.to_string()).join(", ");
        match solve(&sys) {
            Ok(_) => {
                solvable += 1;
                if let Err(m) = least_solution_holds(&sys, &[], &u) {
                    failures.push(format!("{{{}}}: {m}", shown()));
                }
            }
            Err(SolveError::Unsolvable { .. }) => {
                unsolvable += 1;
                let (vars, topos) = system_vars(&sys);
                if let Some(s) = assignments(&vars, &topos).into_iter().find(|s| check_solution(&sys, s, &u)) {
                    let shown_s = vars.iter().map(|v| format!("{v} := {}", s.apply(&Type::var(v)))).join(", ");
                    failures.push(format!("{{{}}} declared unsolvable but {shown_s} solves it", shown()));
                }
            }
            Err(e) => failures.push(format!("{{{}}}: {e}", shown())),
        }
    }
    verdict(
        7,
        "solver ground soundness",
        failures,
        format!("2 fixed systems, 200 fuzzed: {solvable} solvable, {unsolvable} unsolvable"),
    )
}

pub fn comp_runtime_agreement() -> Verdict {
    let mut r = fuzz::rng(8);
    let mut failures = Vec::new();
    let (mut pairs, mut tries, mut runs) = (0, 0, 0);
    while pairs < 100 && tries < 1_000_000 {
        tries += 1;
        let elements = fuzz::pattern_elements(&mut r);
        let tau = fuzz::ground_type(&mut r, 3);
        if normalize(&comp(&elements, &tau)) != Type::Zero {
            continue;
        }
        let pool = fuzz::members(&tau);
        if pool.is_empty() {
            continue;
        }
        pairs += 1;
        let p = Pattern::new(elements);
        for _ in 0..100 {
            let c = fuzz::collection_from(&mut r, &pool, 5);
            runs += 1;
            match match_paths(&p, &c, &vec![false; c.len()], &Env::new(), &mut Fuel(100_000)) {
                Ok(None) => {}
                Ok(Some(m)) => failures.push(format!("pattern {p:?} with content type {tau} matched {c} at {:?}", m.positions)),
                Err(e) => failures.push(format!("{tau}, {c}: {e}")),
            }
        }
    }
    if pairs < 100 {
        failures.push(format!("only {pairs} empty-compatibility pairs with inhabited content type found"));
    }
    verdict(8, "compatibility agrees with matching", failures, format!("{pairs} pairs with inhabited content type, {runs} collections, 0 matches expected"))
}

pub fn optimizer_equivalence() -> Verdict {
    let mut r = fuzz::rng(9);
    let mut failures = Vec::new();
    let (mut dead, mut tests) = (0, 0);
    for _ in 0..50 {
        let rules = fuzz::rules(&mut r);
        let tau = match r.gen_range(0..3) {
            0 => Type::Base(BaseType::ALL[r.gen_range(0..4)]),
            1 => Type::union(Type::Base(BaseType::ALL[r.gen_range(0..4)]), Type::Base(BaseType::ALL[r.gen_range(0..4)])),
            _ => fuzz::ground_type(&mut r, 2),
        };
        let c = fuzz::collection_from(&mut r, &fuzz::members(&tau), 6);
        let (r1, e1) = eliminate_dead_rules(&rules, &tau);
        let (r2, e2) = eliminate_type_tests(&r1, &tau);
        dead += e1.len();
        tests += e2.len();
        let close = |rules| Value::Closure(Arc::new(Closure::Trans { rules, env: Env::new() }));
        let (orig, opt) = (close(rules.clone()), close(r2.clone()));
        let a = apply_transformation(&orig, &c, &mut Fuel(100_000));
        let b = apply_transformation(&opt, &c, &mut Fuel(100_000));
        let same = match (&a, &b) {
            (Ok(x), Ok(y)) => x.same(y),
            (Err(x), Err(y)) => x.name() == y.name(),
            _ => false,
        };
        if !same {
            let t = topo_core::syntax::Expr::trans;
            failures.push(format!("{} vs {} on {c} ({tau}): {a:?} vs {b:?}", t(rules), t(r2)));
        }
    }
    verdict(9, "optimizer equivalence", failures, format!("50 triples; {dead} dead rules and {tests} type tests removed"))
}

pub fn unifier_properties() -> Verdict {
    let mut r = fuzz::rng(10);
    let mut failures = Vec::new();
    let mut unified = 0;
    for i in 0..500 {
        let a = fuzz::simple_type(&mut r, 3);
        let b = if i % 2 == 0 {
            // an instance of `a`
            let v = ["a", "b", "c"][r.gen_range(0..3)];
            let fill = fuzz::simple_type(&mut r, 2);
            if fill.occurs(v) {
                fuzz::simple_type(&mut r, 3)
            } else {
                let theta = Substitution::single_type(v, fill);
                let b = theta.apply(&a);
                match unify(&a, &b) {
                    Ok(s) if theta.apply(&s.apply(&a)) == theta.apply(&a) => {}
                    other => failures.push(format!("{a} vs its instance {b}: {other:?}")),
                }
                b
            }
        } else {
            fuzz::simple_type(&mut r, 3)
        };
        let (ab, ba) = (unify(&a, &b), unify(&b, &a));
        if ab.is_ok() != ba.is_ok() {
            failures.push(format!("{a} and {b}: failure is not symmetric"));
        }
        if let Ok(s) = ab {
            unified += 1;
            let t = s.apply(&a);
            if t != s.apply(&b) || s.apply(&t) != t {
                failures.push(format!("{a} and {b}: mgu does not unify or is not idempotent"));
            }
        }
    }
    let grid = Type::coll(Topology::Sym(TopoSym::Grid), Type::INT);
    match unify(&Type::coll(Topology::var("t"), Type::var("a")), &grid) {
        Ok(s) => {
            let exact = s.types.len() == 1
                && s.types.get("a") == Some(&Type::INT)
                && s.topos.len() == 1
                && s.topos.get("t") == Some(&Topology::Sym(TopoSym::Grid));
            if !exact {
                failures.push(format!("unify([t] a, [grid] int) = {s:?}"));
            }
        }
        Err(e) => failures.push(format!("unify([t] a, [grid] int) failed: {e}")),
    }
    verdict(10, "unifier properties", failures, format!("500 pairs, {unified} unifiable; [t] a ~ [grid] int gives t := grid, a := int"))
}

pub fn tautology() -> Verdict {
    let u = FiniteUniverse::default();
    let mut failures = Vec::new();
    let cands = fuzz::ground_candidates();
    for alpha in &cands {
        let lhs = Type::cond(Type::INT, Type::inter(alpha.clone(), Type::INT));
        match u.includes(&lhs, alpha) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("fails for {alpha}")),
            Err(e) => failures.push(format!("{alpha}: {e}")),
        }
    }
    verdict(11, "tautology", failures, format!("(int ? (a & int)) <= a for {} ground a", cands.len()))
}

/// All criteria, in order. Independent criteria run on separate threads.
pub fn run_all(corpus: &Path) -> Vec<Verdict> {
    type Check<'a> = Box<dyn Fn() -> Verdict + Send + Sync + 'a>;
    let checks: Vec<Check> = vec![
        Box::new(strong_derivation),
        Box::new(soft_derivation),
        Box::new(map_refinement),
        Box::new(move || soundness(corpus)),
        Box::new(newtonian_shapes),
        Box::new(bubble_sort),
        Box::new(solver_soundness),
        Box::new(comp_runtime_agreement),
        Box::new(optimizer_equivalence),
        Box::new(unifier_properties),
        Box::new(tautology),
    ];
    std::thread::scope(|s| {
        let handles: Vec<_> = checks
            .iter()
            .map(|c| {
                s.spawn(move || {
                    let t0 = Instant::now();
                    let mut v = c();
                    v.detail = format!("{} [{:.2} s]", v.detail, t0.elapsed().as_secs_f64());
                    v
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    })
}
