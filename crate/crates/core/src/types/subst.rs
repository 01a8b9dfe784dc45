use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Constraint, FreeVars, Topology, Type, TypeScheme};

/// Simultaneous substitution of type variables by types and topology
/// variables by topologies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    pub types: BTreeMap<String, Type>,
    pub topos: BTreeMap<String, Topology>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty() && self.topos.is_empty()
    }

    pub fn single_type(var: &str, ty: Type) -> Self {
        let mut s = Self::new();
        s.types.insert(var.into(), ty);
        s
    }

    pub fn single_topo(var: &str, topo: Topology) -> Self {
        let mut s = Self::new();
        s.topos.insert(var.into(), topo);
        s
    }

    pub fn apply_topo(&self, r: &Topology) -> Topology {
        match r {
            Topology::Var(v) => self.topos.get(v).cloned().unwrap_or_else(|| r.clone()),
            Topology::Sym(_) => r.clone(),
        }
    }

    pub fn apply(&self, t: &Type) -> Type {
        if self.is_empty() {
            return t.clone();
        }
        match t {
            Type::Var(v) => self.types.get(v).cloned().unwrap_or_else(|| t.clone()),
            Type::Base(_) | Type::Zero | Type::One => t.clone(),
            Type::Arrow(a, b) => Type::arrow(self.apply(a), self.apply(b)),
            Type::Cond(a, b) => Type::cond(self.apply(a), self.apply(b)),
            Type::Coll(r, e) => Type::coll(self.apply_topo(r), self.apply(e)),
            Type::Union(ts) => Type::Union(ts.iter().map(|t| self.apply(t)).collect()),
            Type::Inter(ts) => Type::Inter(ts.iter().map(|t| self.apply(t)).collect()),
        }
    }

    pub fn apply_constraint(&self, c: &Constraint) -> Constraint {
        Constraint::new(self.apply(&c.lhs), self.apply(&c.rhs))
    }

    /// Applies to the free variables of a scheme. Quantified variables are
    /// shielded; a quantified variable that would capture a variable of the
    /// substitution's range is renamed first.
    pub fn apply_scheme(&self, sc: &TypeScheme) -> TypeScheme {
        let mut inner = self.clone();
        for v in &sc.type_vars {
            inner.types.remove(v);
        }
        for v in &sc.topo_vars {
            inner.topos.remove(v);
        }
        if inner.is_empty() {
            return sc.clone();
        }
        let range = inner.range_vars();
        let mut rename = Substitution::new();
        let mut taken = range.clone();
        taken.extend(&sc.free_vars());
        let mut type_vars = Vec::new();
        for v in &sc.type_vars {
            if range.types.contains(v) {
                let nv = fresh_name(v, &taken.types);
                taken.types.insert(nv.clone());
                rename.types.insert(v.clone(), Type::Var(nv.clone()));
                type_vars.push(nv);
            } else {
                type_vars.push(v.clone());
            }
        }
        let mut topo_vars = Vec::new();
        for v in &sc.topo_vars {
            if range.topos.contains(v) {
                let nv = fresh_name(v, &taken.topos);
                taken.topos.insert(nv.clone());
                rename.topos.insert(v.clone(), Topology::Var(nv.clone()));
                topo_vars.push(nv);
            } else {
                topo_vars.push(v.clone());
            }
        }
        let body = inner.apply(&rename.apply(&sc.body));
        let constraints = sc
            .constraints
            .iter()
            .map(|c| inner.apply_constraint(&rename.apply_constraint(c)))
            .collect();
        TypeScheme { type_vars, topo_vars, body, constraints }
    }

    fn range_vars(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        for t in self.types.values() {
            t.collect_free(&mut fv);
        }
        for r in self.topos.values() {
            if let Topology::Var(v) = r {
                fv.topos.insert(v.clone());
            }
        }
        fv
    }

    /// `self ∘ earlier`: applying the result equals applying `earlier`
    /// and then `self`.
    pub fn compose(&self, earlier: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (k, v) in &earlier.types {
            out.types.insert(k.clone(), self.apply(v));
        }
        for (k, v) in &earlier.topos {
            out.topos.insert(k.clone(), self.apply_topo(v));
        }
        for (k, v) in &self.types {
            out.types.entry(k.clone()).or_insert_with(|| v.clone());
        }
        for (k, v) in &self.topos {
            out.topos.entry(k.clone()).or_insert_with(|| v.clone());
        }
        out.types.retain(|k, v| !matches!(v, Type::Var(n) if n == k));
        out.topos.retain(|k, v| !matches!(v, Topology::Var(n) if n == k));
        out
    }
}

fn fresh_name(base: &str, taken: &alloc::collections::BTreeSet<String>) -> String {
    let mut i = 1;
    loop {
        let cand = format!("{base}{i}");
        if !taken.contains(&cand) {
            return cand;
        }
        i += 1;
    }
}

/// Source of fresh type and topology variable names, private to one
/// inference run. Generated names carry a `_` prefix so they never clash
/// with names written in source type syntax.
#[derive(Debug, Clone, Default)]
pub struct FreshSupply {
    next: u32,
}

impl FreshSupply {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn type_var(&mut self) -> Type {
        Type::Var(self.type_name())
    }

    pub fn type_name(&mut self) -> String {
        self.next += 1;
        format!("_a{}", self.next)
    }

    pub fn topo_var(&mut self) -> Topology {
        self.next += 1;
        Topology::Var(format!("_t{}", self.next))
    }
}
