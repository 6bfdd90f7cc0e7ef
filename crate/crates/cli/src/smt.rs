//! SMT-LIB 2 benchmark emission.
//!
//! For an entry with condition `IC[s, t]` and literal `l[x, s, t]`, the
//! emitted script asserts the *negation* of the equivalence at a fixed
//! width:
//!
//! ```text
//! (set-logic BV)
//! (declare-const s (_ BitVec 4))
//! (declare-const t (_ BitVec 4))
//! (assert (distinct <IC> (exists ((x (_ BitVec 4))) <literal>)))
//! (check-sat)
//! ```
//!
//! so a solver answering `unsat` confirms the equivalence at that width and
//! `sat` refutes it. Terms render with SMT-LIB operator names; the `zero`
//! and `ones` constants become explicit binary literals of the right width.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use bvic_core::term::{Atom, Cond, Term};
use bvic_core::ICEntry;

fn render_term(term: &Term, width: u32, out: &mut String) {
    match term {
        Term::Var(v) => out.push_str(v.name()),
        Term::Zero => {
            out.push_str("#b");
            out.extend(std::iter::repeat_n('0', width as usize));
        }
        Term::Ones => {
            out.push_str("#b");
            out.extend(std::iter::repeat_n('1', width as usize));
        }
        Term::Unary(op, a) => {
            let _ = write!(out, "({} ", op.keyword());
            render_term(a, width, out);
            out.push(')');
        }
        Term::Binary(op, a, b) => {
            let _ = write!(out, "({} ", op.keyword());
            render_term(a, width, out);
            out.push(' ');
            render_term(b, width, out);
            out.push(')');
        }
    }
}

fn render_atom(atom: &Atom, width: u32, out: &mut String) {
    let _ = write!(out, "({} ", atom.pred.keyword());
    render_term(&atom.lhs, width, out);
    out.push(' ');
    render_term(&atom.rhs, width, out);
    out.push(')');
}

fn render_cond(cond: &Cond, width: u32, out: &mut String) {
    match cond {
        Cond::True => out.push_str("true"),
        Cond::Atom(a) => render_atom(a, width, out),
        Cond::Not(c) => {
            out.push_str("(not ");
            render_cond(c, width, out);
            out.push(')');
        }
        Cond::And(a, b) => {
            out.push_str("(and ");
            render_cond(a, width, out);
            out.push(' ');
            render_cond(b, width, out);
            out.push(')');
        }
        Cond::Or(a, b) => {
            out.push_str("(or ");
            render_cond(a, width, out);
            out.push(' ');
            render_cond(b, width, out);
            out.push(')');
        }
    }
}

/// The benchmark script for one entry at one width.
pub fn emit_smtlib(entry: &ICEntry, width: u32) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "; entry {:?} at width {width}", entry.name());
    let _ = writeln!(
        out,
        "; sat refutes the invertibility equivalence, unsat confirms it"
    );
    let _ = writeln!(out, "(set-logic BV)");
    let _ = writeln!(out, "(declare-const s (_ BitVec {width}))");
    let _ = writeln!(out, "(declare-const t (_ BitVec {width}))");
    out.push_str("(assert (distinct ");
    render_cond(entry.ic(), width, &mut out);
    let _ = write!(out, " (exists ((x (_ BitVec {width}))) ");
    render_atom(entry.literal(), width, &mut out);
    out.push_str(")))\n");
    out.push_str("(check-sat)\n");
    out
}

/// The file name for one entry's benchmark, with path-hostile characters
/// in the entry name replaced.
pub fn benchmark_file_name(entry: &ICEntry, width: u32) -> String {
    let safe: String = entry
        .name()
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{safe}_w{width}.smt2")
}

/// Writes one benchmark per (entry, width) into `dir`, creating it if
/// needed, and returns the paths in emission order.
pub fn write_benchmarks(
    entries: &[&ICEntry],
    widths: &[u32],
    dir: &Path,
) -> anyhow::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating benchmark directory {}", dir.display()))?;
    let mut paths = Vec::new();
    for entry in entries {
        for &width in widths {
            let path = dir.join(benchmark_file_name(entry, width));
            fs::write(&path, emit_smtlib(entry, width))
                .with_context(|| format!("writing {}", path.display()))?;
            paths.push(path);
        }
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bvic_core::Catalog;

    #[test]
    fn add_eq_benchmark_is_exactly_this() {
        let catalog = Catalog::seed();
        let script = emit_smtlib(catalog.get("add-eq").unwrap(), 4);
        let expected = "\
; entry \"add-eq\" at width 4
; sat refutes the invertibility equivalence, unsat confirms it
(set-logic BV)
(declare-const s (_ BitVec 4))
(declare-const t (_ BitVec 4))
(assert (distinct true (exists ((x (_ BitVec 4))) (= (bvadd x s) t))))
(check-sat)
";
        assert_eq!(script, expected);
    }

    #[test]
    fn constants_render_at_the_requested_width() {
        let catalog = Catalog::seed();
        let shl = emit_smtlib(catalog.get("shl-ugt").unwrap(), 3);
        assert!(shl.contains("(bvult t (bvshl #b111 s))"), "{shl}");
        let ashr = emit_smtlib(catalog.get("ashr-ult").unwrap(), 5);
        assert!(ashr.contains("(bvslt s #b00000)"), "{ashr}");
        assert!(ashr.contains("(distinct t #b00000)"), "{ashr}");
    }

    #[test]
    fn emission_is_deterministic() {
        let catalog = Catalog::seed();
        for entry in catalog.entries() {
            assert_eq!(emit_smtlib(entry, 7), emit_smtlib(entry, 7));
        }
    }

    #[test]
    fn file_names_are_sanitized() {
        let entry = bvic_core::ICEntry::new(
            "weird name/слэш",
            bvic_core::syntax::parse_atom("(= (bvadd x s) t)").unwrap(),
            bvic_core::Cond::True,
            "",
            vec![],
        )
        .unwrap();
        assert_eq!(benchmark_file_name(&entry, 9), "weird_name______w9.smt2");
    }

    #[test]
    fn write_benchmarks_creates_files() {
        let dir = tempfile::tempdir().unwrap();
        let catalog = Catalog::seed();
        let entries: Vec<&ICEntry> = catalog.entries().iter().collect();
        let paths = write_benchmarks(&entries, &[1, 2], dir.path()).unwrap();
        assert_eq!(paths.len(), 10);
        for path in &paths {
            let text = fs::read_to_string(path).unwrap();
            assert!(text.ends_with("(check-sat)\n"));
        }
        assert!(dir.path().join("mul-eq_w2.smt2").exists());
    }
}
