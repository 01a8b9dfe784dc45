use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::check::check_inductive;
use super::{SolveError, SolvedForm};
use crate::infer_strong::unify_topo;
use crate::types::oracle::FiniteUniverse;
use crate::types::{is_empty, normalize, Constraint, Emptiness, Substitution, Type};

/// A constraint with a link to the one it was derived from.
#[derive(Clone)]
struct Item {
    c: Constraint,
    parent: Option<usize>,
}

/// `lhs <= rhs` whenever every guard is non-empty; the guards are not yet
/// known to be empty or inhabited.
#[derive(Clone)]
struct Pending {
    guards: Vec<Type>,
    lhs: Type,
    rhs: Type,
    origin: usize,
}

/// Splits `((t ? g1) ? g2) …` into `t` and its guards.
fn peel(t: &Type) -> (Type, Vec<Type>) {
    let mut gs = Vec::new();
    let mut cur = t;
    while let Type::Cond(a, g) = cur {
        gs.push((**g).clone());
        cur = a;
    }
    (cur.clone(), gs)
}

fn wrap(t: Type, gs: &[Type]) -> Type {
    gs.iter().fold(t, |acc, g| Type::cond(acc, g.clone()))
}

#[derive(Clone)]
struct State {
    form: SolvedForm,
    log: Vec<Item>,
    work: Vec<usize>,
    seen: BTreeSet<Constraint>,
    pending: Vec<Pending>,
    settled: BTreeSet<(Vec<Type>, Constraint)>,
}

struct Contradiction {
    at: usize,
    reason: String,
}

/// Rewrites the system to a solved form, or reports it unsolvable.
pub fn solve(system: &[Constraint]) -> Result<SolvedForm, SolveError> {
    for c in system {
        check_inductive(c)?;
    }
    solve_unchecked(system)
}

/// [`solve`] without the input form check, for systems obtained by
/// substituting a solution back into a generated one.
pub(crate) fn solve_unchecked(system: &[Constraint]) -> Result<SolvedForm, SolveError> {
    let mut st = State {
        form: SolvedForm::default(),
        log: Vec::new(),
        work: Vec::new(),
        seen: BTreeSet::new(),
        pending: Vec::new(),
        settled: BTreeSet::new(),
    };
    for c in system.iter().rev() {
        st.push(c.clone(), None);
    }
    st.run().map_err(|e| st.fail(e))?;
    st.settle_guards().map_err(|e| st.fail(e))?;
    Ok(st.form)
}

fn ground_lower(form: &SolvedForm, v: &str) -> Type {
    let zero_vars = |t: &Type| {
        let mut s = Substitution::new();
        for x in t.free_vars().types {
            s.types.insert(x, Type::Zero);
        }
        s.apply(t)
    };
    let ls = form.lower.get(v).map(|ls| ls.iter().map(|l| zero_vars(&form.topo.apply(l))).collect()).unwrap_or_default();
    normalize(&Type::Union(ls))
}

impl State {
    fn push(&mut self, c: Constraint, parent: Option<usize>) {
        self.log.push(Item { c, parent });
        self.work.push(self.log.len() - 1);
    }

    fn fail(&self, e: Contradiction) -> SolveError {
        let mut trace = Vec::new();
        let mut cur = Some(e.at);
        while let Some(i) = cur {
            trace.push(self.log[i].c.clone());
            cur = self.log[i].parent;
        }
        trace.reverse();
        SolveError::Unsolvable { trace, reason: e.reason }
    }

    fn run(&mut self) -> Result<(), Contradiction> {
        while let Some(i) = self.work.pop() {
            self.step(i)?;
        }
        Ok(())
    }

    fn step(&mut self, i: usize) -> Result<(), Contradiction> {
        let topo = &self.form.topo;
        let l = normalize(&topo.apply(&self.log[i].c.lhs));
        let r = normalize(&topo.apply(&self.log[i].c.rhs));
        let key = Constraint::new(l.clone(), r.clone());
        if !self.seen.insert(key) {
            return Ok(());
        }
        let here = Some(i);
        let clash = |reason: String| Err(Contradiction { at: i, reason });

        if l == r || l == Type::Zero || r == Type::One {
            return Ok(());
        }
        if matches!(r, Type::Union(_)) && normalize(&Type::union(l.clone(), r.clone())) == r {
            return Ok(());
        }
        match (&l, &r) {
            (Type::Union(ls), _) => {
                for t in ls.iter().rev() {
                    self.push(Constraint::new(t.clone(), r.clone()), here);
                }
                return Ok(());
            }
            (_, Type::Inter(rs)) => {
                for t in rs.iter().rev() {
                    self.push(Constraint::new(l.clone(), t.clone()), here);
                }
                return Ok(());
            }
            (Type::Cond(..), _) => {
                let (t, gs) = peel(&l);
                let mut open = Vec::new();
                for g in gs {
                    match is_empty(&g) {
                        Emptiness::Empty => return Ok(()),
                        Emptiness::NonEmpty => {}
                        Emptiness::Unknown => open.push(normalize(&g)),
                    }
                }
                open.sort();
                open.dedup();
                if open.is_empty() {
                    self.push(Constraint::new(t, r.clone()), here);
                } else if let Type::Var(v) = &r {
                    let entry = (open[0].clone(), wrap(t, &open[1..]));
                    let gs = self.form.guarded.entry(v.clone()).or_default();
                    if !gs.contains(&entry) {
                        gs.push(entry.clone());
                        for ub in self.form.upper.get(v).cloned().unwrap_or_default() {
                            self.push(Constraint::new(Type::cond(entry.1.clone(), entry.0.clone()), ub), here);
                        }
                    }
                } else {
                    self.add_pending(Pending { guards: open, lhs: t, rhs: r.clone(), origin: i });
                }
                return Ok(());
            }
            _ => {}
        }
        if let Type::Var(a) = &l {
            push_bound(&mut self.form.upper, a, r.clone());
            for lb in self.form.lower.get(a).cloned().unwrap_or_default() {
                self.push(Constraint::new(lb, r.clone()), here);
            }
            for (g, b) in self.form.guarded.get(a).cloned().unwrap_or_default() {
                self.push(Constraint::new(Type::cond(b, g), r.clone()), here);
            }
        }
        if let Type::Var(b) = &r {
            push_bound(&mut self.form.lower, b, l.clone());
            for ub in self.form.upper.get(b).cloned().unwrap_or_default() {
                self.push(Constraint::new(l.clone(), ub), here);
            }
        }
        if matches!(l, Type::Var(_)) || matches!(r, Type::Var(_)) {
            return Ok(());
        }
        match (&l, &r) {
            (Type::Coll(r1, e1), Type::Coll(r2, e2)) => {
                match unify_topo(r1, r2) {
                    Ok(s) => self.form.topo = s.compose(&self.form.topo),
                    Err(e) => return clash(format!("{e}")),
                }
                self.push(Constraint::new((**e1).clone(), (**e2).clone()), here);
                Ok(())
            }
            (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => {
                self.push(Constraint::new((**b1).clone(), (**b2).clone()), here);
                self.push(Constraint::new((**a2).clone(), (**a1).clone()), here);
                Ok(())
            }
            _ if head_clash(&l, &r) => clash(format!("`{l}` is not included in `{r}`")),
            (_, Type::Union(rs)) => {
                let cands: Vec<&Type> = rs.iter().filter(|m| compatible(&l, m)).collect();
                match cands.as_slice() {
                    [] => clash(format!("`{l}` fits no member of `{r}`")),
                    [m] => {
                        self.push(Constraint::new(l.clone(), (*m).clone()), here);
                        Ok(())
                    }
                    _ => self.residual(i, l, r),
                }
            }
            (_, Type::Cond(t, g)) => match is_empty(g) {
                Emptiness::NonEmpty => {
                    self.push(Constraint::new(l.clone(), (**t).clone()), here);
                    Ok(())
                }
                Emptiness::Empty => {
                    self.push(Constraint::new(l.clone(), Type::Zero), here);
                    Ok(())
                }
                Emptiness::Unknown => self.residual(i, l, r),
            },
            (Type::Inter(ls), _) if ls.iter().any(|m| *m == r) => Ok(()),
            _ => self.residual(i, l, r),
        }
    }

    /// Keeps a constraint that has no bound form. Ground ones are decided now.
    fn residual(&mut self, i: usize, l: Type, r: Type) -> Result<(), Contradiction> {
        let ground = l.free_vars().is_empty() && r.free_vars().is_empty();
        if ground {
            let u = FiniteUniverse::default();
            return match u.includes(&l, &r) {
                Ok(true) => Ok(()),
                _ => Err(Contradiction { at: i, reason: format!("`{l}` is not included in `{r}`") }),
            };
        }
        if is_empty(&l) == Emptiness::NonEmpty && r == Type::Zero {
            return Err(Contradiction { at: i, reason: format!("`{l}` is inhabited") });
        }
        let c = Constraint::new(l, r);
        if !self.form.residual.contains(&c) {
            self.form.residual.push(c);
        }
        Ok(())
    }

    fn add_pending(&mut self, p: Pending) {
        let key = (p.guards.clone(), Constraint::new(p.lhs.clone(), p.rhs.clone()));
        if !self.settled.contains(&key) && !self.pending.iter().any(|q| q.guards == p.guards && q.lhs == p.lhs && q.rhs == p.rhs) {
            self.pending.push(p);
        }
    }

    /// Whether a guard is inhabited under the lower bounds gathered so far,
    /// hence in every solution.
    fn surely_inhabited(&self, g: &Type) -> bool {
        let mut s = Substitution::new();
        for v in g.free_vars().types {
            let l = ground_lower(&self.form, &v);
            s.types.insert(v, l);
        }
        is_empty(&s.apply(&self.form.topo.apply(g))) == Emptiness::NonEmpty
    }

    /// Decides the deferred conditional constraints. One whose guards are all
    /// surely inhabited applies outright. The others are tried on a copy: if
    /// the copy stays consistent the bounds it adds are kept under the
    /// guards, otherwise one of the guards is forced empty.
    fn settle_guards(&mut self) -> Result<(), Contradiction> {
        loop {
            if let Some(i) = self.pending.iter().position(|p| p.guards.iter().all(|g| self.surely_inhabited(g))) {
                let p = self.pending.remove(i);
                self.push(Constraint::new(p.lhs, p.rhs), Some(p.origin));
                self.run()?;
                continue;
            }
            if self.pending.is_empty() {
                return Ok(());
            }
            let p = self.pending.remove(0);
            self.settled.insert((p.guards.clone(), Constraint::new(p.lhs.clone(), p.rhs.clone())));
            let mut fork = self.clone();
            fork.pending.clear();
            fork.push(Constraint::new(p.lhs.clone(), p.rhs.clone()), Some(p.origin));
            if fork.run().is_ok() {
                self.merge_guarded(&p.guards, fork);
                continue;
            }
            let mut last = None;
            let mut adopted = false;
            for g in p.guards.iter().filter(|g| !self.surely_inhabited(g)) {
                let mut alt = self.clone();
                alt.push(Constraint::new(g.clone(), Type::Zero), Some(p.origin));
                match alt.run() {
                    Ok(()) => {
                        *self = alt;
                        adopted = true;
                        break;
                    }
                    Err(e) => last = Some(e),
                }
            }
            if !adopted {
                return Err(last.unwrap_or(Contradiction { at: p.origin, reason: String::from("guard cannot be empty") }));
            }
        }
    }

    fn merge_guarded(&mut self, guards: &[Type], fork: State) {
        let record = |form: &mut SolvedForm, v: &String, b: Type| {
            let entry = (guards[0].clone(), wrap(b, &guards[1..]));
            let gs = form.guarded.entry(v.clone()).or_default();
            if !gs.contains(&entry) {
                gs.push(entry);
            }
        };
        for (v, ls) in &fork.form.lower {
            let have = self.form.lower.get(v).cloned().unwrap_or_default();
            for l in ls {
                if !have.contains(l) {
                    record(&mut self.form, v, l.clone());
                }
            }
        }
        for (v, gs) in &fork.form.guarded {
            for (g, b) in gs {
                if !self.form.guarded.get(v).is_some_and(|h| h.contains(&(g.clone(), b.clone()))) {
                    record(&mut self.form, v, Type::cond(b.clone(), g.clone()));
                }
            }
        }
        self.form.topo = fork.form.topo;
        for p in fork.pending {
            let mut gs = guards.to_vec();
            gs.extend(p.guards);
            gs.sort();
            gs.dedup();
            self.add_pending(Pending { guards: gs, lhs: p.lhs, rhs: p.rhs, origin: p.origin });
        }
    }
}

fn push_bound(map: &mut BTreeMap<String, Vec<Type>>, v: &str, t: Type) {
    let bs = map.entry(v.into()).or_default();
    if !bs.contains(&t) {
        bs.push(t);
    }
}

fn head_clash(l: &Type, r: &Type) -> bool {
    match (l, r) {
        (Type::Base(a), Type::Base(b)) => a != b,
        (Type::Base(_), Type::Coll(..) | Type::Arrow(..))
        | (Type::Coll(..), Type::Base(_) | Type::Arrow(..))
        | (Type::Arrow(..), Type::Base(_) | Type::Coll(..)) => true,
        _ => false,
    }
}

/// Whether a union member could contain (part of) `l`.
fn compatible(l: &Type, m: &Type) -> bool {
    match (l, m) {
        (_, Type::Var(_) | Type::One | Type::Inter(_) | Type::Cond(..)) => true,
        (Type::Base(a), Type::Base(b)) => a == b,
        (Type::Coll(..), Type::Coll(..)) | (Type::Arrow(..), Type::Arrow(..)) => true,
        (Type::Inter(ls), _) => ls.iter().any(|x| compatible(x, m)),
        (Type::Var(_), _) => true,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse_constraints;

    fn solve_src(s: &str) -> Result<SolvedForm, SolveError> {
        solve(&parse_constraints(s).unwrap())
    }

    #[test]
    fn tautology_discharges() {
        let f = solve_src("(int ? (a & int)) <= a").unwrap();
        assert!(f.constraints().iter().all(|c| c.lhs == Type::INT || c.lhs == c.rhs || c.lhs.size() > 1),);
    }

    #[test]
    fn topology_clash() {
        assert!(matches!(solve_src("[set] int <= [grid] int"), Err(SolveError::Unsolvable { .. })));
    }

    #[test]
    fn recursive_equality_is_solved() {
        assert!(solve_src("a = [bag] a | int").is_ok());
    }

    #[test]
    fn transitive_contradiction_has_trace() {
        let e = solve_src("int <= a, a <= b, b <= bool").unwrap_err();
        let SolveError::Unsolvable { trace, .. } = e else { panic!() };
        assert!(trace.len() >= 2);
    }

    #[test]
    fn overloading_bound() {
        assert!(solve_src("int <= a, a <= int | float").is_ok());
        assert!(solve_src("bool <= a, a <= int | float").is_err());
    }

    #[test]
    fn arrows_are_contravariant() {
        assert!(solve_src("int -> int <= (int | bool) -> int").is_err());
        assert!(solve_src("(int | bool) -> int <= int -> (int | float)").is_ok());
    }

    #[test]
    fn guard_recorded() {
        let f = solve_src("a <= b, (bool ? (a & int)) <= b").unwrap();
        assert_eq!(f.guarded["b"], [(normalize(&crate::types::parse_type("a & int").unwrap()), Type::BOOL)]);
    }
}
