//! Type inference and a reference interpreter for a small functional language
//! over topological collections (sequences, sets, bags and grids) rewritten by
//! pattern-matching transformations.
//!
//! Two type systems share one surface syntax: a strong Hindley/Milner system
//! with topology variables, and a soft system with union, intersection and
//! conditional types solved through inclusion constraints.

#![no_std]

extern crate alloc;

pub mod constraints;
pub mod infer_strong;
pub mod optimizer;
pub mod runtime;
pub mod solver;
pub mod syntax;
pub mod types;
