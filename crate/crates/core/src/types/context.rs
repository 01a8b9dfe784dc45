use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Constraint, FreeVars, FreshSupply, Substitution, Topology, Type, TypeScheme};

/// Variable name to scheme.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TypingContext {
    vars: BTreeMap<String, TypeScheme>,
}

impl TypingContext {
    pub fn new() -> Self {
        TypingContext::default()
    }

    pub fn get(&self, x: &str) -> Option<&TypeScheme> {
        self.vars.get(x)
    }

    pub fn insert(&mut self, x: &str, sc: TypeScheme) {
        self.vars.insert(x.into(), sc);
    }

    pub fn with(&self, x: &str, sc: TypeScheme) -> Self {
        let mut c = self.clone();
        c.insert(x, sc);
        c
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &TypeScheme)> {
        self.vars.iter()
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        for sc in self.vars.values() {
            fv.extend(&sc.free_vars());
        }
        fv
    }

    pub fn apply(&self, s: &Substitution) -> Self {
        if s.is_empty() {
            return self.clone();
        }
        TypingContext { vars: self.vars.iter().map(|(k, v)| (k.clone(), s.apply_scheme(v))).collect() }
    }
}

/// Quantifies the variables of `body` and `constraints` that are not free in
/// `ctx`.
pub fn generalize(ctx: &TypingContext, body: Type, constraints: Vec<Constraint>) -> TypeScheme {
    let blocked = ctx.free_vars();
    let (mut tys, mut topos) = (Vec::new(), Vec::new());
    body.vars_in_order(&mut tys, &mut topos);
    for c in &constraints {
        c.lhs.vars_in_order(&mut tys, &mut topos);
        c.rhs.vars_in_order(&mut tys, &mut topos);
    }
    tys.retain(|v| !blocked.types.contains(v));
    topos.retain(|v| !blocked.topos.contains(v));
    TypeScheme { type_vars: tys, topo_vars: topos, body, constraints }
}

/// Replaces the quantified variables by fresh ones.
pub fn instantiate(sc: &TypeScheme, fresh: &mut FreshSupply) -> (Type, Vec<Constraint>) {
    if sc.is_mono() {
        return (sc.body.clone(), sc.constraints.clone());
    }
    let mut s = Substitution::new();
    for v in &sc.type_vars {
        s.types.insert(v.clone(), fresh.type_var());
    }
    for v in &sc.topo_vars {
        s.topos.insert(v.clone(), fresh.topo_var());
    }
    (s.apply(&sc.body), sc.constraints.iter().map(|c| s.apply_constraint(c)).collect())
}

/// One-way matching: extends `s` so that `s(pattern) = target`, binding only
/// the variables listed in `bindable`.
pub fn match_type(pattern: &Type, target: &Type, bindable: &FreeVars, s: &mut Substitution) -> bool {
    match (pattern, target) {
        (Type::Var(v), _) if bindable.types.contains(v) => match s.types.get(v) {
            Some(t) => t == target,
            None => {
                s.types.insert(v.clone(), target.clone());
                true
            }
        },
        (Type::Coll(r1, e1), Type::Coll(r2, e2)) => {
            let topo_ok = match r1 {
                Topology::Var(v) if bindable.topos.contains(v) => match s.topos.get(v) {
                    Some(r) => r == r2,
                    None => {
                        s.topos.insert(v.clone(), r2.clone());
                        true
                    }
                },
                _ => r1 == r2,
            };
            topo_ok && match_type(e1, e2, bindable, s)
        }
        (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => {
            match_type(a1, a2, bindable, s) && match_type(b1, b2, bindable, s)
        }
        (Type::Union(xs), Type::Union(ys)) | (Type::Inter(xs), Type::Inter(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_type(x, y, bindable, s))
        }
        (Type::Cond(a1, g1), Type::Cond(a2, g2)) => {
            match_type(a1, a2, bindable, s) && match_type(g1, g2, bindable, s)
        }
        _ => pattern == target,
    }
}

/// Whether `t` is an instance of `sc` (ignoring constraints).
pub fn is_instance(sc: &TypeScheme, t: &Type) -> bool {
    let mut bindable = FreeVars::default();
    bindable.types.extend(sc.type_vars.iter().cloned());
    bindable.topos.extend(sc.topo_vars.iter().cloned());
    match_type(&sc.body, t, &bindable, &mut Substitution::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{parse_scheme, parse_type, rename_scheme};
    use alloc::string::ToString;

    #[test]
    fn generalize_closed_identity() {
        let sc = generalize(&TypingContext::new(), parse_type("[th] al -> [th] al").unwrap(), Vec::new());
        assert_eq!(rename_scheme(&sc).to_string(), "forall a,t. [t] a -> [t] a");
    }

    #[test]
    fn context_blocks_generalization() {
        let ctx = TypingContext::new().with("y", TypeScheme::mono(Type::var("a")));
        let sc = generalize(&ctx, parse_type("a -> b").unwrap(), Vec::new());
        assert_eq!(sc.type_vars, ["b"]);
    }

    #[test]
    fn generalize_keeps_constraints() {
        let cs = crate::types::parse_constraints("a <= b, (bool ? (a & int)) <= b").unwrap();
        let sc = generalize(&TypingContext::new(), parse_type("[t] a -> [t] b").unwrap(), cs);
        assert_eq!(sc.type_vars, ["a", "b"]);
        assert_eq!(sc.topo_vars, ["t"]);
        assert_eq!(sc.constraints.len(), 2);
    }

    #[test]
    fn instantiate_cons() {
        let sc = parse_scheme("forall a,t. a -> [t] a -> [t] a").unwrap();
        let mut fresh = FreshSupply::new();
        let (t, cs) = instantiate(&sc, &mut fresh);
        assert!(cs.is_empty());
        assert!(is_instance(&sc, &t));
        assert!(!t.free_vars().types.contains("a"));
    }

    #[test]
    fn instantiate_overloaded_plus() {
        let sc = crate::types::tc_by_name("+", crate::types::Dialect::Soft).unwrap();
        let (t, cs) = instantiate(&sc, &mut FreshSupply::new());
        let Type::Arrow(a, _) = &t else { panic!() };
        assert_eq!(cs.len(), 1);
        assert_eq!(&cs[0].lhs, &**a);
        assert_eq!(cs[0].rhs, Type::union(Type::INT, Type::FLOAT));
    }

    #[test]
    fn instance_check() {
        let sc = parse_scheme("forall a. a -> a").unwrap();
        assert!(is_instance(&sc, &parse_type("int -> int").unwrap()));
        assert!(!is_instance(&sc, &parse_type("int -> bool").unwrap()));
    }
}
