//! Fixed-width bit-vector semantics and mechanical checking of
//! invertibility conditions.
//!
//! An *invertibility condition* for a literal `l[x, s, t]` — a constraint
//! such as `x + s = t` with a single occurrence of the unknown `x` — is a
//! formula `IC[s, t]` intended to hold exactly when some `x` satisfies the
//! literal. This crate provides:
//!
//! * [`bitvec`]: arbitrary-width bit-vectors with the standard operations,
//!   including deliberately redundant routes (iterative as well as splice
//!   shifts, lexicographic as well as word-order unsigned comparison) that
//!   can be played against each other;
//! * [`term`]: the expression language for literals and conditions, with
//!   evaluation under a width-carrying assignment;
//! * [`syntax`]: the s-expression surface syntax and catalog file format;
//! * [`catalog`]: named, validated literal/condition entries plus the
//!   built-in seed set;
//! * [`verify`]: exhaustive equivalence checking at small widths and
//!   seeded randomized probing at large ones;
//! * [`sampling`]: the deterministic per-task random streams that make
//!   campaign results independent of thread scheduling.

pub mod bitvec;
pub mod catalog;
pub mod sampling;
pub mod syntax;
pub mod term;
pub mod verify;

pub use bitvec::{BitVec, WidthMismatch};
pub use catalog::{Catalog, CatalogError, ICEntry};
pub use syntax::{parse_atom, parse_catalog, parse_cond, parse_term, print_entry, ParseError};
pub use term::{Assignment, Atom, BinOp, Cond, EvalError, Pred, ShapeViolation, Term, UnOp, Var, VarSet};
pub use verify::{
    Counterexample, Mode, PairSet, Status, Verdict, VerdictStats, VerifyConfig, VerifyError,
    MAX_EXHAUSTIVE_WIDTH,
};
