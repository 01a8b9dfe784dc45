//! The subcommands as functions from inputs to an [`Output`], so that the
//! binary and the tests share one code path.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::json;

use topo_core::constraints::{generate, infer_soft, GenOptions};
use topo_core::infer_strong::infer_program;
use topo_core::optimizer::{eliminate_dead_rules, eliminate_type_tests, Elimination};
use topo_core::runtime::{apply_transformation, eval, fixpoint, Env, Fuel, RuntimeError, Value};
use topo_core::solver::{least_solution, solve, SolveError};
use topo_core::syntax::{parse, Expr, ExprKind, ParseError, ParseErrorKind};
use topo_core::types::{parse_type, Dialect, Type, TypingContext};

use crate::json;

pub const DEFAULT_FUEL: u64 = 100_000;

/// Exit code for unreadable input: I/O, syntax or malformed JSON.
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: 0, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Output { code, stdout: String::new(), stderr }
    }
}

/// `TOPOCHECK_FUEL`, or the built-in default.
pub fn default_fuel() -> u64 {
    std::env::var("TOPOCHECK_FUEL").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_FUEL)
}

fn parse_error(name: &str, e: &ParseError) -> Output {
    let code = if e.kind == ParseErrorKind::Dialect { 1 } else { EXIT_INPUT };
    Output::fail(code, format!("{name}:{e}\n"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Strong,
    Soft,
}

/// Prints the principal scheme (strong) or the solved scheme (soft).
pub fn typecheck(name: &str, src: &str, mode: Mode, refine_catch_all: bool) -> Output {
    match mode {
        Mode::Strong => {
            let e = match parse(src, Dialect::Strong) {
                Ok(e) => e,
                Err(e) => return parse_error(name, &e),
            };
            match infer_program(&e) {
                Ok(t) => Output::ok(format!("{}\n", t.scheme)),
                Err(err) => Output::fail(1, format!("{name}: {}: type error: {err}\n", span_text(src, err.span.start))),
            }
        }
        Mode::Soft => {
            let e = match parse(src, Dialect::Soft) {
                Ok(e) => e,
                Err(e) => return parse_error(name, &e),
            };
            match infer_soft(&e, GenOptions { refine_catch_all }) {
                Ok(t) => Output::ok(format!("{}\n", t.presented.scheme)),
                Err(err) => Output::fail(1, format!("{name}: {}: type error: {err}\n", span_text(src, err.span().start))),
            }
        }
    }
}

fn span_text(src: &str, offset: usize) -> String {
    let e = ParseError::syntax(src, offset, "");
    format!("{}:{}", e.line, e.column)
}

/// Generated type and constraint set of a soft program.
pub fn constraints(name: &str, src: &str, refine_catch_all: bool, as_json: bool) -> Output {
    let e = match parse(src, Dialect::Soft) {
        Ok(e) => e,
        Err(e) => return parse_error(name, &e),
    };
    let g = match generate(&TypingContext::new(), &e, GenOptions { refine_catch_all }) {
        Ok(g) => g,
        Err(err) => return Output::fail(1, format!("{name}: {}: {err}\n", span_text(src, err.span().start))),
    };
    if as_json {
        let doc = json!({
            "type": json::type_to_json(&g.ty),
            "constraints": g.constraints.iter().map(|(c, o)| json::constraint_with_origin(c, o)).collect::<Vec<_>>(),
        });
        return Output::ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()));
    }
    let mut out = format!("type: {}\nconstraints:\n", g.ty);
    for (c, o) in &g.constraints {
        let _ = writeln!(out, "  {c}    [{} at {}]", o.rule, span_text(src, o.span.start));
    }
    Output::ok(out)
}

/// Solves a system read from JSON (see [`json::system_from_json`]).
pub fn solve_json(name: &str, doc: &str, as_json: bool) -> Output {
    let sys = match serde_json::from_str(doc).map_err(anyhow::Error::from).and_then(|d| json::system_from_json(&d)) {
        Ok(s) => s,
        Err(e) => return Output::fail(EXIT_INPUT, format!("{name}: {e}\n")),
    };
    match solve(&sys) {
        Ok(f) => {
            let mut vars = std::collections::BTreeSet::new();
            for c in &sys {
                vars.extend(c.lhs.free_vars().types);
                vars.extend(c.rhs.free_vars().types);
            }
            let vars: Vec<String> = vars.into_iter().collect();
            let least = least_solution(&f, &vars);
            let value = |v: &String| least.subst.apply(&Type::var(v));
            if as_json {
                let doc = json!({
                    "verdict": "solvable",
                    "bounds": f.constraints().iter().map(json::constraint_to_json).collect::<Vec<_>>(),
                    "least": vars.iter().map(|v| (v.clone(), json::type_to_json(&value(v)))).collect::<serde_json::Map<_, _>>(),
                    "recursive": least.recursive.iter().map(json::constraint_to_json).collect::<Vec<_>>(),
                });
                return Output::ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()));
            }
            let mut out = String::from("solvable\nbounds:\n");
            for c in f.constraints() {
                let _ = writeln!(out, "  {c}");
            }
            out.push_str("least solution:\n");
            for v in &vars {
                let _ = writeln!(out, "  {v} := {}", value(v));
            }
            for c in &least.recursive {
                let _ = writeln!(out, "  {c}");
            }
            Output::ok(out)
        }
        Err(e @ SolveError::Unsolvable { .. }) => Output { code: 1, stdout: "unsolvable\n".into(), stderr: format!("{e}\n") },
        Err(e @ SolveError::NotInductive { .. }) => Output::fail(2, format!("{name}: {e}\n")),
    }
}

fn outcome(r: Result<Value, RuntimeError>) -> Output {
    match r {
        Ok(v) => Output::ok(format!("{v}\n")),
        Err(e) => {
            let code = match e {
                RuntimeError::Wrong(_) => 1,
                RuntimeError::ShapeErr(_) => 2,
                RuntimeError::OutOfFuel => 3,
            };
            Output { code, stdout: format!("{}\n", e.name()), stderr: format!("{e}\n") }
        }
    }
}

/// Evaluates a program. With `input`, the program must denote a
/// transformation, which is applied to the collection `input` evaluates to.
/// With `fix`, the application is iterated to a fixpoint; without `input`
/// the program itself must then be an application `t c`.
pub fn run(name: &str, src: &str, fuel: u64, fix: bool, input: Option<&str>) -> Output {
    let e = match parse(src, Dialect::Soft) {
        Ok(e) => e,
        Err(e) => return parse_error(name, &e),
    };
    let arg = match input.map(|i| parse(i, Dialect::Soft)) {
        None => None,
        Some(Ok(a)) => Some(a),
        Some(Err(e)) => return parse_error("--input", &e),
    };
    let mut fuel = Fuel(fuel);
    let (f, a): (&Expr, &Expr) = match (&arg, &e.kind) {
        (Some(a), _) => (&e, a),
        (None, ExprKind::App(f, a)) if fix => (f, a),
        (None, _) if fix => {
            return Output::fail(EXIT_INPUT, format!("{name}: --fix needs a transformation applied to a collection, or --input\n"))
        }
        (None, _) => return outcome(eval(&e, &Env::new(), &mut fuel)),
    };
    let r = (|| {
        let t = eval(f, &Env::new(), &mut fuel)?;
        let c = match eval(a, &Env::new(), &mut fuel)? {
            Value::Coll(c) => c,
            v => return Err(RuntimeError::Wrong(format!("{v} is not a collection"))),
        };
        let out = if fix { fixpoint(&t, &c, &mut fuel)? } else { apply_transformation(&t, &c, &mut fuel)? };
        Ok(Value::Coll(out))
    })();
    outcome(r)
}

/// Dead-rule and type-test elimination for a transformation applied to
/// collections of content type `content_type`.
pub fn optimize(name: &str, src: &str, content_type: &str) -> Output {
    let e = match parse(src, Dialect::Soft) {
        Ok(e) => e,
        Err(e) => return parse_error(name, &e),
    };
    let tau = match parse_type(content_type) {
        Ok(t) => t,
        Err(err) => return Output::fail(EXIT_INPUT, format!("--content-type: {err}\n")),
    };
    let ExprKind::Trans(rules) = &e.kind else {
        return Output::fail(EXIT_INPUT, format!("{name}: the program must be a transformation\n"));
    };
    let (rules, mut report) = eliminate_dead_rules(rules, &tau);
    let (rules, tests) = eliminate_type_tests(&rules, &tau);
    report.extend(tests);
    let mut stderr = String::new();
    for r in report {
        let _ = match r {
            Elimination::DeadRule(i) => writeln!(stderr, "removed rule {} (never matches)", i + 1),
            Elimination::TypeTest { rule, element } => {
                writeln!(stderr, "removed type test on element {} of rule {}", element + 1, rule + 1)
            }
        };
    }
    Output { code: 0, stdout: format!("{}\n", Expr::trans(rules)), stderr }
}

/// The AST as JSON.
pub fn parse_to_json(name: &str, src: &str, mode: Mode) -> Output {
    let dialect = if mode == Mode::Strong { Dialect::Strong } else { Dialect::Soft };
    match parse(src, dialect) {
        Ok(e) => Output::ok(format!("{}\n", serde_json::to_string_pretty(&json::expr_to_json(&e)).unwrap())),
        Err(e) => parse_error(name, &e),
    }
}

/// Runs the acceptance suite with the corpus under `dir` and prints a table.
pub fn check_corpus(dir: &Path) -> Output {
    let results = crate::acceptance::run_all(dir);
    let mut out = String::new();
    for r in &results {
        let _ = writeln!(out, "{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(out, "{} passed, {failed} failed", results.len() - failed);
    Output { code: i32::from(failed > 0), stdout: out, stderr: String::new() }
}

pub fn read(path: &Path) -> Result<String, Output> {
    std::fs::read_to_string(path).map_err(|e| Output::fail(EXIT_INPUT, format!("{}: {e}\n", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use topo_core::constraints::generate_program;

    const SORT: &str = "{x, y / x - y > 0 => [y, x]; x => [x]}";

    #[test]
    fn strong_scheme() {
        let o = typecheck("sort", SORT, Mode::Strong, false);
        assert_eq!((o.code, o.stdout.as_str()), (0, "forall t. [t] int -> [t] int\n"));
        let o = typecheck("swap", "{x, y / x > y => [y, x]; x => [x]}", Mode::Strong, false);
        assert_eq!(o.stdout, "forall a,t. [t] a -> [t] a\n");
    }

    #[test]
    fn strong_rejects_missing_catch_all() {
        let o = typecheck("p", "{x:int => [x]}", Mode::Strong, false);
        assert_eq!(o.code, 1);
    }

    #[test]
    fn type_error_exit() {
        let o = typecheck("p", "1 2", Mode::Strong, false);
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("type error"), "{}", o.stderr);
        assert_eq!(typecheck("p", "(", Mode::Soft, false).code, EXIT_INPUT);
    }

    #[test]
    fn run_with_fix() {
        let o = run("sort", SORT, 10_000, true, Some("[3, 2, 4, 2]"));
        assert_eq!(o.stdout, "[2, 2, 3, 4]\n");
        let o = run("sort", &format!("{SORT} [3, 2, 4, 2]"), 10_000, true, None);
        assert_eq!(o.stdout, "[2, 2, 3, 4]\n");
    }

    #[test]
    fn run_exit_codes() {
        assert_eq!(run("p", "true + 1", 100, false, None).code, 1);
        let o = run("p", "{x => [x, x]} (1 :: empty_grid)", 100, false, None);
        assert_eq!((o.code, o.stdout.as_str()), (2, "shape_err\n"));
        assert_eq!(run("p", "{x, y => [y, x]} [1, 2]", 50, true, None).code, 3);
        assert_eq!(run("p", "1", 100, true, None).code, EXIT_INPUT);
    }

    #[test]
    fn optimize_reports() {
        let o = optimize("p", "{x:int => [x + 1]; y:float => [y]}", "int");
        assert_eq!(o.stdout, "{x => [(x + 1)]}\n");
        assert!(o.stderr.contains("removed rule 2"));
    }

    #[test]
    fn constraints_json_round_trips() {
        let o = constraints("p", "{x:int => [true]}", false, true);
        let doc: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        let sys = json::system_from_json(&doc).unwrap();
        let e = parse("{x:int => [true]}", Dialect::Soft).unwrap();
        assert_eq!(sys, generate_program(&e, GenOptions::default()).unwrap().system());
        assert_eq!(json::type_from_json(&doc["type"]).unwrap().to_string(), constraints_type("{x:int => [true]}"));
        let s = solve_json("p", &o.stdout, false);
        assert_eq!(s.code, 0, "{}", s.stderr);
    }

    fn constraints_type(src: &str) -> String {
        let o = constraints("p", src, false, false);
        o.stdout.lines().next().unwrap().trim_start_matches("type: ").to_string()
    }

    #[test]
    fn solve_verdicts() {
        assert_eq!(solve_json("s", r#"["int <= a", "a <= bool"]"#, false).code, 1);
        let o = solve_json("s", r#"{"constraints": ["int <= a", "a <= int | bool"]}"#, false);
        assert!(o.stdout.contains("a := int"), "{}", o.stdout);
        assert_eq!(solve_json("s", "{", false).code, EXIT_INPUT);
    }
}
