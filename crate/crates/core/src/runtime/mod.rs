//! Reference interpreter: values, collections with their neighborhoods,
//! path matching, transformation application and fuel-bounded evaluation.

mod eval;
mod matching;
mod value;

pub use eval::{apply, apply_transformation, eval, fixpoint, run, Fuel, RuntimeError};
pub use matching::{match_paths, Match};
pub use value::{Closure, Collection, Env, Grid, Value};
