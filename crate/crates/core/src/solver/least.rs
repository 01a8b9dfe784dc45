use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::SolvedForm;
use crate::types::{normalize, Constraint, Substitution, Type};

#[derive(Debug, Clone, Default)]
pub struct LeastSolution {
    pub subst: Substitution,
    /// `a = t` for variables whose least solution refers to itself through
    /// a type constructor; `a` is left in place.
    pub recursive: Vec<Constraint>,
}

/// Least solution for `targets`: each gets the union of its lower bounds and
/// of `bound ? guard` for its guarded bounds. Variables outside `targets`
/// stay as they are, and targets without bounds map to themselves.
pub fn least_solution(f: &SolvedForm, targets: &[String]) -> LeastSolution {
    let targets: BTreeSet<&str> = targets.iter().map(String::as_str).collect();
    let lower = |v: &str| -> Vec<Type> {
        f.lower.get(v).map(|ls| ls.iter().map(|l| f.topo.apply(l)).collect()).unwrap_or_default()
    };

    // Strongly connected components of the variable-to-variable lower bounds.
    let edges: BTreeMap<&str, Vec<String>> = targets
        .iter()
        .map(|&v| {
            let succ = lower(v)
                .into_iter()
                .filter_map(|l| match l {
                    Type::Var(u) if targets.contains(u.as_str()) => Some(u),
                    _ => None,
                })
                .collect();
            (v, succ)
        })
        .collect();
    let comp = components(&targets, &edges);

    let mut ex = Extract { f, targets: &targets, comp: &comp, memo: BTreeMap::new(), active: BTreeSet::new(), recursive: BTreeMap::new() };
    let mut subst = Substitution::new();
    for &v in &targets {
        let t = ex.solve(v);
        if t != Type::Var(v.into()) {
            subst.types.insert(v.into(), t);
        }
    }
    for (v, r) in &f.topo.topos {
        subst.topos.insert(v.clone(), r.clone());
    }
    let recursive = ex.recursive.into_iter().map(|(v, t)| Constraint::new(Type::Var(v), t)).flat_map(|c| Constraint::equal(c.lhs, c.rhs)).collect();
    LeastSolution { subst, recursive }
}

/// Representative of each variable's component (the smallest name).
fn components<'a>(vars: &BTreeSet<&'a str>, edges: &BTreeMap<&'a str, Vec<String>>) -> BTreeMap<&'a str, &'a str> {
    let reach = |from: &'a str| -> BTreeSet<&'a str> {
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![from];
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                for u in edges.get(v).into_iter().flatten() {
                    if let Some(&u) = vars.get(u.as_str()) {
                        stack.push(u);
                    }
                }
            }
        }
        seen
    };
    let reachable: BTreeMap<&str, BTreeSet<&str>> = vars.iter().map(|&v| (v, reach(v))).collect();
    vars.iter()
        .map(|&v| {
            let rep = reachable[v].iter().copied().find(|&u| reachable[u].contains(v)).unwrap_or(v);
            (v, rep)
        })
        .collect()
}

struct Extract<'a> {
    f: &'a SolvedForm,
    targets: &'a BTreeSet<&'a str>,
    comp: &'a BTreeMap<&'a str, &'a str>,
    memo: BTreeMap<String, Type>,
    active: BTreeSet<String>,
    recursive: BTreeMap<String, Type>,
}

impl Extract<'_> {
    fn solve(&mut self, v: &str) -> Type {
        let rep = self.comp.get(v).copied().unwrap_or(v);
        if let Some(t) = self.memo.get(rep) {
            return t.clone();
        }
        if self.active.contains(rep) {
            // reached again through a type constructor
            self.recursive.entry(rep.into()).or_insert(Type::Zero);
            return Type::var(rep);
        }
        let members: Vec<&str> = self.comp.iter().filter(|(_, &r)| r == rep).map(|(&m, _)| m).collect();
        let mut bounds = Vec::new();
        let mut guarded = Vec::new();
        for m in &members {
            for l in self.f.lower.get(*m).into_iter().flatten() {
                let l = self.f.topo.apply(l);
                if let Type::Var(u) = &l {
                    if self.comp.get(u.as_str()) == Some(&rep) {
                        continue;
                    }
                }
                bounds.push(l);
            }
            for (g, b) in self.f.guarded.get(*m).into_iter().flatten() {
                guarded.push((self.f.topo.apply(g), self.f.topo.apply(b)));
            }
        }
        if bounds.is_empty() && guarded.is_empty() {
            let t = Type::var(v);
            self.memo.insert(rep.into(), t.clone());
            return t;
        }
        self.active.insert(rep.into());
        let mut parts: Vec<Type> = bounds.iter().map(|b| self.subst(b)).collect();
        for (g, b) in &guarded {
            let g2 = normalize(&self.subst(g));
            let b2 = self.subst(b);
            // a bare variable guard is read as inhabited
            parts.push(if matches!(g2, Type::Var(_)) { b2 } else { Type::cond(b2, g2) });
        }
        self.active.remove(rep);
        let body = normalize(&Type::Union(parts));
        let t = if self.recursive.contains_key(rep) {
            self.recursive.insert(rep.into(), body);
            Type::var(rep)
        } else {
            body
        };
        self.memo.insert(rep.into(), t.clone());
        t
    }

    fn subst(&mut self, t: &Type) -> Type {
        let mut s = Substitution::new();
        for v in t.free_vars().types {
            if self.targets.contains(v.as_str()) {
                let sol = self.solve(&v);
                s.types.insert(v, sol);
            }
        }
        s.apply(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve;
    use crate::types::{parse_constraints, parse_type};
    use alloc::string::ToString;

    fn least(src: &str, targets: &[&str]) -> LeastSolution {
        let f = solve(&parse_constraints(src).unwrap()).unwrap();
        let ts: Vec<String> = targets.iter().map(|s| s.to_string()).collect();
        least_solution(&f, &ts)
    }

    #[test]
    fn boolify_system() {
        let l = least("a <= b, (bool ? (a & int)) <= b", &["b"]);
        assert_eq!(l.subst.types["b"], normalize(&parse_type("a | (bool ? (a & int))").unwrap()));
    }

    #[test]
    fn empty_form_is_identity() {
        let l = least_solution(&SolvedForm::default(), &[]);
        assert!(l.subst.is_empty());
        assert!(l.recursive.is_empty());
    }

    #[test]
    fn cycles_collapse() {
        let l = least("a <= b, b <= a, int <= a", &["a", "b"]);
        assert_eq!(l.subst.types["a"], Type::INT);
        assert_eq!(l.subst.types["b"], Type::INT);
    }

    #[test]
    fn recursive_binding() {
        let l = least("a = [bag] a | int", &["a"]);
        assert!(!l.subst.types.contains_key("a"));
        assert_eq!(l.recursive.len(), 2);
        assert_eq!(l.recursive[0].rhs.to_string(), "int | [bag] a");
    }

    #[test]
    fn unbounded_targets_stay() {
        let l = least("a <= b", &["a", "b"]);
        assert_eq!(l.subst.types["b"], Type::var("a"));
        assert!(!l.subst.types.contains_key("a"));
    }
}
