use alloc::string::String;
use alloc::vec::Vec;

use super::eval::{eval, Fuel, RuntimeError};
use super::value::{Collection, Env, Value};
use crate::syntax::{Direction, ElemKind, Pattern};
use crate::types::BaseType;

/// One instance of a pattern: positions in path order (indices into the
/// canonical element order) and the variable bindings.
#[derive(Debug, Clone)]
pub struct Match {
    pub positions: Vec<usize>,
    pub bindings: Vec<(String, Value)>,
}

/// Positions of a collection with their neighborhood.
pub(crate) struct Positions<'c> {
    coll: &'c Collection,
    values: Vec<&'c Value>,
    coords: Vec<(i64, i64)>,
}

impl<'c> Positions<'c> {
    pub fn new(coll: &'c Collection) -> Self {
        let coords = match coll {
            Collection::Grid(g) => g.coords().collect(),
            _ => Vec::new(),
        };
        Positions { coll, values: coll.elements(), coords }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, i: usize) -> &'c Value {
        self.values[i]
    }

    pub fn coord(&self, i: usize) -> (i64, i64) {
        self.coords[i]
    }

    fn at(&self, x: i64, y: i64) -> Option<usize> {
        self.coords.binary_search_by(|&(cx, cy)| (cy, cx).cmp(&(y, x))).ok()
    }

    /// Neighbors of `i` in canonical order.
    fn neighbors(&self, i: usize) -> Vec<usize> {
        match self.coll {
            Collection::Seq(_) => (i + 1 < self.len()).then_some(i + 1).into_iter().collect(),
            Collection::Set(_) | Collection::Bag(_) => (0..self.len()).filter(|&j| j != i).collect(),
            Collection::Grid(_) => {
                let (x, y) = self.coords[i];
                let mut ns: Vec<usize> =
                    [(0, -1), (-1, 0), (1, 0), (0, 1)].iter().filter_map(|(dx, dy)| self.at(x + dx, y + dy)).collect();
                ns.sort_unstable();
                ns
            }
        }
    }

    fn toward(&self, i: usize, d: Direction) -> Option<usize> {
        if !matches!(self.coll, Collection::Grid(_)) {
            return None;
        }
        let (x, y) = self.coords[i];
        let (dx, dy) = d.offset();
        self.at(x + dx, y + dy)
    }

    fn unordered(&self) -> bool {
        matches!(self.coll, Collection::Set(_) | Collection::Bag(_))
    }
}

fn tag_ok(v: &Value, b: Option<BaseType>) -> bool {
    b.is_none_or(|b| v.tag() == Some(b))
}

struct Search<'a, 'c> {
    pattern: &'a Pattern,
    pos: &'a Positions<'c>,
    consumed: &'a [bool],
    env: &'a Env,
    fuel: &'a mut Fuel,
    path: Vec<usize>,
    binds: Vec<(String, Value)>,
}

impl Search<'_, '_> {
    fn free(&self, p: usize) -> bool {
        !self.consumed[p] && !self.path.contains(&p)
    }

    /// Where the element after the current path end may sit.
    fn candidates(&self, dir: Option<Direction>) -> Vec<usize> {
        let out: Vec<usize> = match (self.path.last(), dir) {
            (None, _) => (0..self.pos.len()).collect(),
            (Some(&p), Some(d)) => self.pos.toward(p, d).into_iter().collect(),
            (Some(&p), None) => self.pos.neighbors(p),
        };
        out.into_iter().filter(|&p| self.free(p)).collect()
    }

    fn elements(&mut self, k: usize) -> Result<bool, RuntimeError> {
        let pattern = self.pattern;
        let elems = &pattern.elements;
        if k == elems.len() {
            if self.path.is_empty() {
                return Ok(false);
            }
            let mut env = self.env.clone();
            for (x, v) in &self.binds {
                env = env.extend(x, v.clone());
            }
            return match eval(&self.pattern.guard, &env, self.fuel)? {
                Value::Bool(b) => Ok(b),
                v => Err(RuntimeError::Wrong(alloc::format!("guard evaluated to {v}, not a boolean"))),
            };
        }
        let el = &elems[k];
        match &el.kind {
            ElemKind::Plain(x) | ElemKind::Typed(x, _) => {
                for p in self.candidates(el.dir) {
                    let v = self.pos.value(p);
                    if !tag_ok(v, el.kind.type_test()) {
                        continue;
                    }
                    self.path.push(p);
                    self.binds.push((x.clone(), v.clone()));
                    if self.elements(k + 1)? {
                        return Ok(true);
                    }
                    self.path.pop();
                    self.binds.pop();
                }
                Ok(false)
            }
            ElemKind::Star(_) | ElemKind::TypedStar(..) => self.star(k, Vec::new()),
        }
    }

    /// Non-empty runs, longest first: extend while possible, then stop and
    /// continue with the rest of the pattern.
    fn star(&mut self, k: usize, run: Vec<usize>) -> Result<bool, RuntimeError> {
        let pattern = self.pattern;
        let el = &pattern.elements[k];
        let cands = if run.is_empty() {
            self.candidates(el.dir)
        } else {
            let last = *run.last().unwrap();
            let mut cs = self.candidates(None);
            if self.pos.unordered() {
                cs.retain(|&p| p > last);
            }
            cs
        };
        for p in cands {
            if !tag_ok(self.pos.value(p), el.kind.type_test()) {
                continue;
            }
            self.path.push(p);
            let mut longer = run.clone();
            longer.push(p);
            if self.star(k, longer)? {
                return Ok(true);
            }
            self.path.pop();
        }
        if run.is_empty() {
            return Ok(false);
        }
        let xs = run.iter().map(|&p| self.pos.value(p).clone()).collect();
        self.binds.push((el.kind.var().into(), Value::Coll(Collection::Seq(xs))));
        if self.elements(k + 1)? {
            return Ok(true);
        }
        self.binds.pop();
        Ok(false)
    }
}

/// First instance of `pattern` in canonical order among positions not yet
/// consumed, with the guard evaluated under `env` extended by the bindings.
pub fn match_paths(
    pattern: &Pattern,
    coll: &Collection,
    consumed: &[bool],
    env: &Env,
    fuel: &mut Fuel,
) -> Result<Option<Match>, RuntimeError> {
    let pos = Positions::new(coll);
    match_in(pattern, &pos, consumed, env, fuel)
}

pub(crate) fn match_in(
    pattern: &Pattern,
    pos: &Positions<'_>,
    consumed: &[bool],
    env: &Env,
    fuel: &mut Fuel,
) -> Result<Option<Match>, RuntimeError> {
    let mut s = Search { pattern, pos, consumed, env, fuel, path: Vec::new(), binds: Vec::new() };
    if s.elements(0)? {
        Ok(Some(Match { positions: s.path, bindings: s.binds }))
    } else {
        Ok(None)
    }
}
