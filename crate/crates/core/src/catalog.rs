//! Named invertibility entries and catalogs of them.
//!
//! An [`ICEntry`] pairs a literal — a single-occurrence constraint on the
//! unknown `x` such as `(= (bvadd x s) t)` — with its candidate
//! invertibility condition over `s` and `t`. The claim a verifier checks is:
//! for every `s` and `t`, the condition holds exactly when some `x`
//! satisfies the literal. Entries may also carry *witness hints*: terms in
//! `s` and `t` that are expected to produce such an `x` directly.
//!
//! Construction validates every entry:
//!
//! * the literal passes the shape check (`x` exactly once, right-hand side
//!   is `t`),
//! * the condition mentions only `s` and `t`, and
//! * every witness hint mentions only `s` and `t`.
//!
//! [`Catalog::seed`] returns the built-in entries that cover one operator of
//! each flavor (arithmetic, multiplication, bitwise, left shift by `x`, and
//! arithmetic shift of `s` by `x`); additional entries can be merged in from
//! parsed catalog files with [`Catalog::load`].

use std::collections::HashMap;

use thiserror::Error;

use crate::syntax;
use crate::term::{Atom, Cond, ShapeViolation, Term, Var, VarSet};

/// A named literal/condition pair with optional witness hints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ICEntry {
    name: String,
    literal: Atom,
    ic: Cond,
    provenance: String,
    witness_hints: Vec<Term>,
}

/// Entry or catalog construction failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("entry {name:?}: {violation}")]
    BadLiteral {
        name: String,
        violation: ShapeViolation,
    },
    #[error("entry {name:?}: the invertibility condition may only mention s and t")]
    CondMentionsX { name: String },
    #[error("entry {name:?}: witness hint {hint} may only mention s and t")]
    HintMentionsX { name: String, hint: String },
    #[error("duplicate entry name {name:?}")]
    DuplicateName { name: String },
}

impl ICEntry {
    /// Builds and validates an entry.
    pub fn new(
        name: impl Into<String>,
        literal: Atom,
        ic: Cond,
        provenance: impl Into<String>,
        witness_hints: Vec<Term>,
    ) -> Result<ICEntry, CatalogError> {
        let name = name.into();
        if let Err(violation) = literal.check_literal_shape() {
            return Err(CatalogError::BadLiteral { name, violation });
        }
        let st = VarSet::of(&[Var::S, Var::T]);
        if !ic.vars().is_subset_of(st) {
            return Err(CatalogError::CondMentionsX { name });
        }
        if let Some(hint) = witness_hints.iter().find(|h| !h.vars().is_subset_of(st)) {
            let hint = hint.to_string();
            return Err(CatalogError::HintMentionsX { name, hint });
        }
        Ok(ICEntry {
            name,
            literal,
            ic,
            provenance: provenance.into(),
            witness_hints,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn literal(&self) -> &Atom {
        &self.literal
    }

    pub fn ic(&self) -> &Cond {
        &self.ic
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn witness_hints(&self) -> &[Term] {
        &self.witness_hints
    }

    /// The same entry with a different condition; used to study how a
    /// deliberately wrong condition is refuted.
    pub fn with_ic(&self, ic: Cond) -> Result<ICEntry, CatalogError> {
        ICEntry::new(
            self.name.clone(),
            self.literal.clone(),
            ic,
            self.provenance.clone(),
            self.witness_hints.clone(),
        )
    }
}

/// An ordered collection of uniquely named entries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<ICEntry>,
    by_name: HashMap<String, usize>,
}

impl Catalog {
    pub fn new() -> Catalog {
        Catalog::default()
    }

    /// The built-in entries, in a fixed order.
    pub fn seed() -> Catalog {
        let entry = |name: &str, literal: &str, ic: &str, hints: &[&str]| {
            let hints = hints
                .iter()
                .map(|h| syntax::parse_term(h).expect("seed hint parses"))
                .collect();
            ICEntry::new(
                name,
                syntax::parse_atom(literal).expect("seed literal parses"),
                syntax::parse_cond(ic).expect("seed condition parses"),
                "seed",
                hints,
            )
            .expect("seed entry is valid")
        };
        let mut catalog = Catalog::new();
        catalog
            .load(vec![
                entry("add-eq", "(= (bvadd x s) t)", "true", &["(bvsub t s)"]),
                entry(
                    "mul-eq",
                    "(= (bvmul x s) t)",
                    "(= (bvand (bvor (bvneg s) s) t) t)",
                    &[],
                ),
                entry("and-eq", "(= (bvand x s) t)", "(= (bvand t s) t)", &[]),
                entry(
                    "shl-ugt",
                    "(bvugt (bvshl x s) t)",
                    "(bvult t (bvshl ones s))",
                    &["ones"],
                ),
                entry(
                    "ashr-ult",
                    "(bvult (bvashr s x) t)",
                    "(and (or (bvult s t) (not (bvslt s zero))) (distinct t zero))",
                    &[],
                ),
            ])
            .expect("seed names are unique");
        catalog
    }

    /// Appends entries, rejecting any whose name is already present. The
    /// first offending entry aborts the merge and leaves the catalog
    /// unchanged.
    pub fn load(&mut self, entries: Vec<ICEntry>) -> Result<(), CatalogError> {
        for entry in &entries {
            if self.by_name.contains_key(entry.name()) {
                return Err(CatalogError::DuplicateName {
                    name: entry.name().to_owned(),
                });
            }
        }
        let mut fresh = HashMap::new();
        for (i, entry) in entries.iter().enumerate() {
            if fresh.insert(entry.name().to_owned(), i).is_some() {
                return Err(CatalogError::DuplicateName {
                    name: entry.name().to_owned(),
                });
            }
        }
        for entry in entries {
            self.by_name.insert(entry.name().to_owned(), self.entries.len());
            self.entries.push(entry);
        }
        Ok(())
    }

    pub fn entries(&self) -> &[ICEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&ICEntry> {
        self.by_name.get(name).map(|&i| &self.entries[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_atom, parse_cond, parse_term};

    #[test]
    fn seed_has_the_expected_entries() {
        let catalog = Catalog::seed();
        let names: Vec<&str> = catalog.entries().iter().map(ICEntry::name).collect();
        assert_eq!(names, ["add-eq", "mul-eq", "and-eq", "shl-ugt", "ashr-ult"]);
        assert_eq!(catalog.len(), 5);

        let add = catalog.get("add-eq").unwrap();
        assert_eq!(add.literal().to_string(), "(= (bvadd x s) t)");
        assert_eq!(add.ic().to_string(), "true");
        assert_eq!(add.witness_hints()[0].to_string(), "(bvsub t s)");

        let mul = catalog.get("mul-eq").unwrap();
        assert_eq!(mul.ic().to_string(), "(= (bvand (bvor (bvneg s) s) t) t)");

        let and = catalog.get("and-eq").unwrap();
        assert_eq!(and.ic().to_string(), "(= (bvand t s) t)");

        let shl = catalog.get("shl-ugt").unwrap();
        assert_eq!(shl.literal().to_string(), "(bvugt (bvshl x s) t)");
        assert_eq!(shl.ic().to_string(), "(bvult t (bvshl ones s))");
        assert_eq!(shl.witness_hints()[0].to_string(), "ones");

        let ashr = catalog.get("ashr-ult").unwrap();
        assert_eq!(ashr.literal().to_string(), "(bvult (bvashr s x) t)");
        assert_eq!(
            ashr.ic().to_string(),
            "(and (or (bvult s t) (not (bvslt s zero))) (distinct t zero))"
        );
    }

    #[test]
    fn entry_validation_rejects_x_in_condition() {
        let err = ICEntry::new(
            "bad",
            parse_atom("(= (bvadd x s) t)").unwrap(),
            parse_cond("(= x t)").unwrap(),
            "",
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, CatalogError::CondMentionsX { .. }));
    }

    #[test]
    fn entry_validation_rejects_x_in_hints() {
        let err = ICEntry::new(
            "bad",
            parse_atom("(= (bvadd x s) t)").unwrap(),
            Cond::True,
            "",
            vec![parse_term("(bvadd x t)").unwrap()],
        )
        .unwrap_err();
        assert!(matches!(err, CatalogError::HintMentionsX { .. }));
    }

    #[test]
    fn entry_validation_rejects_bad_literal_shape() {
        let err = ICEntry::new(
            "bad",
            parse_atom("(= (bvadd x x) t)").unwrap(),
            Cond::True,
            "",
            vec![],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            CatalogError::BadLiteral {
                violation: ShapeViolation::XOccurrences(2),
                ..
            }
        ));
    }

    #[test]
    fn load_rejects_duplicates_and_leaves_catalog_unchanged() {
        let mut catalog = Catalog::seed();
        let clash = ICEntry::new(
            "add-eq",
            parse_atom("(= (bvor x s) t)").unwrap(),
            Cond::True,
            "",
            vec![],
        )
        .unwrap();
        let err = catalog.load(vec![clash]).unwrap_err();
        assert!(matches!(err, CatalogError::DuplicateName { name } if name == "add-eq"));
        assert_eq!(catalog.len(), 5);
        assert_eq!(
            catalog.get("add-eq").unwrap().literal().to_string(),
            "(= (bvadd x s) t)"
        );
    }

    #[test]
    fn load_rejects_duplicates_within_the_batch() {
        let mk = |name: &str| {
            ICEntry::new(
                name,
                parse_atom("(= (bvadd x s) t)").unwrap(),
                Cond::True,
                "",
                vec![],
            )
            .unwrap()
        };
        let mut catalog = Catalog::new();
        assert!(catalog.load(vec![mk("a"), mk("a")]).is_err());
        assert!(catalog.is_empty());
    }

    #[test]
    fn with_ic_revalidates() {
        let entry = Catalog::seed().get("and-eq").unwrap().clone();
        let swapped = entry.with_ic(Cond::True).unwrap();
        assert_eq!(swapped.name(), "and-eq");
        assert_eq!(swapped.ic(), &Cond::True);
        assert!(entry.with_ic(parse_cond("(= x t)").unwrap()).is_err());
    }
}
