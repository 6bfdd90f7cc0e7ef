//! Textual form for terms, atoms, conditions and catalog records.
//!
//! The syntax is a small s-expression language using the usual bit-vector
//! operator names:
//!
//! ```text
//! term  :=  x | s | t | zero | ones
//!        |  (bvnot term) | (bvneg term)
//!        |  (bvand term term) | (bvor term term)
//!        |  (bvadd term term) | (bvsub term term) | (bvmul term term)
//!        |  (bvshl term term) | (bvlshr term term) | (bvashr term term)
//! atom  :=  (= term term) | (distinct term term)
//!        |  (bvult term term) | (bvugt term term) | (bvule term term) | (bvuge term term)
//!        |  (bvslt term term) | (bvsgt term term) | (bvsle term term) | (bvsge term term)
//! cond  :=  true | atom | (not cond) | (and cond cond+) | (or cond cond+)
//! ```
//!
//! `and` and `or` accept two or more arguments and fold left-associatively
//! into the binary connectives; printing never re-flattens, so the canonical
//! form of `(and a b c)` is `(and (and a b) c)`. `;` starts a comment that
//! runs to the end of the line. Strings are double-quoted with `""` as the
//! escape for a literal quote.
//!
//! A catalog file is a sequence of records:
//!
//! ```text
//! (entry :name "add-eq"
//!        :literal (= (bvadd x s) t)
//!        :ic true
//!        :provenance "seed"
//!        :witness-hints ((bvsub t s)))
//! ```
//!
//! `:name`, `:literal` and `:ic` are required; `:provenance` defaults to the
//! empty string and `:witness-hints` to the empty list. Fields may appear in
//! any order but at most once, and entry names must be unique within a file.
//!
//! All parse failures carry the byte offset, 1-based line and column, a
//! message, and usually a hint describing what was expected.

use std::collections::BTreeSet;
use std::fmt;

use crate::catalog::ICEntry;
use crate::term::{Atom, BinOp, Cond, Pred, Term, UnOp, Var};

/// A positioned parse failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source.
    pub offset: usize,
    /// 1-based line number.
    pub line: u32,
    /// 1-based column number (in characters).
    pub column: u32,
    pub message: String,
    /// What the parser was looking for, when that is meaningful.
    pub expected: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if let Some(expected) = &self.expected {
            write!(f, " (expected {expected})")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    offset: usize,
    line: u32,
    column: u32,
}

impl Pos {
    fn error(self, message: impl Into<String>, expected: Option<&str>) -> ParseError {
        ParseError {
            offset: self.offset,
            line: self.line,
            column: self.column,
            message: message.into(),
            expected: expected.map(str::to_owned),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    LParen,
    RParen,
    /// A bare symbol such as `bvadd` or `=`.
    Sym(&'a str),
    /// A keyword such as `:name`, stored without the colon.
    Key(&'a str),
    /// A string literal, with escapes decoded.
    Str(String),
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "'('".to_owned(),
            Tok::RParen => "')'".to_owned(),
            Tok::Sym(s) => format!("symbol {s:?}"),
            Tok::Key(k) => format!("keyword :{k}"),
            Tok::Str(_) => "a string".to_owned(),
        }
    }
}

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c)
}

fn lex(src: &str) -> Result<(Vec<(Tok<'_>, Pos)>, Pos), ParseError> {
    let mut toks = Vec::new();
    let mut chars = src.char_indices().peekable();
    let mut line = 1u32;
    let mut column = 1u32;
    while let Some(&(offset, c)) = chars.peek() {
        let pos = Pos {
            offset,
            line,
            column,
        };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
            }
            _ if c.is_whitespace() => {
                chars.next();
                column += 1;
            }
            ';' => {
                // Comment to end of line; the newline is handled above.
                while let Some(&(_, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    column += 1;
                }
            }
            '(' => {
                chars.next();
                column += 1;
                toks.push((Tok::LParen, pos));
            }
            ')' => {
                chars.next();
                column += 1;
                toks.push((Tok::RParen, pos));
            }
            '"' => {
                chars.next();
                column += 1;
                let mut text = String::new();
                loop {
                    match chars.next() {
                        None => {
                            return Err(pos.error("unterminated string", Some("a closing '\"'")));
                        }
                        Some((_, '"')) => {
                            column += 1;
                            // A doubled quote is an escaped quote.
                            if matches!(chars.peek(), Some(&(_, '"'))) {
                                chars.next();
                                column += 1;
                                text.push('"');
                            } else {
                                break;
                            }
                        }
                        Some((_, '\n')) => {
                            line += 1;
                            column = 1;
                            text.push('\n');
                        }
                        Some((_, c)) => {
                            column += 1;
                            text.push(c);
                        }
                    }
                }
                toks.push((Tok::Str(text), pos));
            }
            ':' => {
                chars.next();
                column += 1;
                let start = offset + 1;
                let mut end = start;
                while let Some(&(i, c)) = chars.peek() {
                    if !is_symbol_char(c) {
                        break;
                    }
                    chars.next();
                    column += 1;
                    end = i + c.len_utf8();
                }
                if end == start {
                    return Err(pos.error("':' must introduce a keyword", Some("a keyword name")));
                }
                toks.push((Tok::Key(&src[start..end]), pos));
            }
            _ if is_symbol_char(c) => {
                let start = offset;
                let mut end = start;
                while let Some(&(i, c)) = chars.peek() {
                    if !is_symbol_char(c) {
                        break;
                    }
                    chars.next();
                    column += 1;
                    end = i + c.len_utf8();
                }
                toks.push((Tok::Sym(&src[start..end]), pos));
            }
            other => {
                return Err(pos.error(format!("unexpected character {other:?}"), None));
            }
        }
    }
    let eof = Pos {
        offset: src.len(),
        line,
        column,
    };
    Ok((toks, eof))
}

fn unop_named(name: &str) -> Option<UnOp> {
    match name {
        "bvnot" => Some(UnOp::Not),
        "bvneg" => Some(UnOp::Neg),
        _ => None,
    }
}

fn binop_named(name: &str) -> Option<BinOp> {
    match name {
        "bvand" => Some(BinOp::And),
        "bvor" => Some(BinOp::Or),
        "bvadd" => Some(BinOp::Add),
        "bvsub" => Some(BinOp::Sub),
        "bvmul" => Some(BinOp::Mul),
        "bvshl" => Some(BinOp::Shl),
        "bvlshr" => Some(BinOp::Lshr),
        "bvashr" => Some(BinOp::Ashr),
        _ => None,
    }
}

fn pred_named(name: &str) -> Option<Pred> {
    match name {
        "=" => Some(Pred::Eq),
        "distinct" => Some(Pred::Neq),
        "bvult" => Some(Pred::Ult),
        "bvugt" => Some(Pred::Ugt),
        "bvule" => Some(Pred::Ule),
        "bvuge" => Some(Pred::Uge),
        "bvslt" => Some(Pred::Slt),
        "bvsgt" => Some(Pred::Sgt),
        "bvsle" => Some(Pred::Sle),
        "bvsge" => Some(Pred::Sge),
        _ => None,
    }
}

struct Parser<'a> {
    toks: Vec<(Tok<'a>, Pos)>,
    next: usize,
    eof: Pos,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Parser<'a>, ParseError> {
        let (toks, eof) = lex(src)?;
        Ok(Parser { toks, next: 0, eof })
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.next).map(|(t, _)| t)
    }

    /// The token after the next one, used to dispatch on the head of a list.
    fn peek2(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.next + 1).map(|(t, _)| t)
    }

    fn here(&self) -> Pos {
        self.toks.get(self.next).map_or(self.eof, |&(_, p)| p)
    }

    fn advance(&mut self) -> Option<(Tok<'a>, Pos)> {
        let item = self.toks.get(self.next).cloned();
        if item.is_some() {
            self.next += 1;
        }
        item
    }

    fn take(&mut self, expected: &str) -> Result<(Tok<'a>, Pos), ParseError> {
        self.advance()
            .ok_or_else(|| self.eof.error("unexpected end of input", Some(expected)))
    }

    fn expect_lparen(&mut self, expected: &str) -> Result<Pos, ParseError> {
        match self.take(expected)? {
            (Tok::LParen, pos) => Ok(pos),
            (tok, pos) => Err(pos.error(format!("found {}", tok.describe()), Some(expected))),
        }
    }

    fn expect_rparen(&mut self, expected: &str) -> Result<(), ParseError> {
        match self.take(expected)? {
            (Tok::RParen, _) => Ok(()),
            (tok, pos) => Err(pos.error(format!("found {}", tok.describe()), Some(expected))),
        }
    }

    fn expect_sym(&mut self, name: &str) -> Result<(), ParseError> {
        let expected = format!("{name:?}");
        match self.take(&expected)? {
            (Tok::Sym(s), _) if s == name => Ok(()),
            (tok, pos) => Err(pos.error(format!("found {}", tok.describe()), Some(&expected))),
        }
    }

    fn string(&mut self, expected: &str) -> Result<String, ParseError> {
        match self.take(expected)? {
            (Tok::Str(s), _) => Ok(s),
            (tok, pos) => Err(pos.error(format!("found {}", tok.describe()), Some(expected))),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.toks.get(self.next) {
            None => Ok(()),
            Some((tok, pos)) => Err(pos.error(
                format!("trailing input: found {}", tok.describe()),
                Some("end of input"),
            )),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.take("a term")? {
            (Tok::Sym("x"), _) => Ok(Term::Var(Var::X)),
            (Tok::Sym("s"), _) => Ok(Term::Var(Var::S)),
            (Tok::Sym("t"), _) => Ok(Term::Var(Var::T)),
            (Tok::Sym("zero"), _) => Ok(Term::Zero),
            (Tok::Sym("ones"), _) => Ok(Term::Ones),
            (Tok::Sym(other), pos) => Err(pos.error(
                format!("unknown term {other:?}"),
                Some("x, s, t, zero, or ones"),
            )),
            (Tok::LParen, _) => {
                let (head, head_pos) = self.take("an operator name")?;
                let Tok::Sym(name) = head else {
                    return Err(
                        head_pos.error(format!("found {}", head.describe()), Some("an operator name"))
                    );
                };
                let term = if let Some(op) = unop_named(name) {
                    Term::unary(op, self.term()?)
                } else if let Some(op) = binop_named(name) {
                    let lhs = self.term()?;
                    let rhs = self.term()?;
                    Term::binary(op, lhs, rhs)
                } else {
                    return Err(head_pos.error(
                        format!("unknown operator {name:?}"),
                        Some("a bit-vector operator such as bvadd"),
                    ));
                };
                self.expect_rparen("')' closing the operator application")?;
                Ok(term)
            }
            (tok, pos) => Err(pos.error(format!("found {}", tok.describe()), Some("a term"))),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        self.expect_lparen("'(' starting an atom")?;
        let (head, head_pos) = self.take("a predicate name")?;
        let Tok::Sym(name) = head else {
            return Err(
                head_pos.error(format!("found {}", head.describe()), Some("a predicate name"))
            );
        };
        let Some(pred) = pred_named(name) else {
            return Err(head_pos.error(
                format!("unknown predicate {name:?}"),
                Some("a predicate such as = or bvult"),
            ));
        };
        let lhs = self.term()?;
        let rhs = self.term()?;
        self.expect_rparen("')' closing the atom")?;
        Ok(Atom::new(pred, lhs, rhs))
    }

    fn cond(&mut self) -> Result<Cond, ParseError> {
        match self.peek() {
            Some(Tok::Sym("true")) => {
                self.advance();
                Ok(Cond::True)
            }
            Some(Tok::LParen) => match self.peek2() {
                Some(Tok::Sym("not")) => {
                    self.advance();
                    self.advance();
                    let inner = self.cond()?;
                    self.expect_rparen("')' closing the not")?;
                    Ok(Cond::not(inner))
                }
                Some(Tok::Sym(name @ ("and" | "or"))) => {
                    let fold: fn(Cond, Cond) -> Cond = if *name == "and" { Cond::and } else { Cond::or };
                    let closing = format!("')' closing the {name}");
                    self.advance();
                    self.advance();
                    // Two or more arguments, folded left-associatively.
                    let first = self.cond()?;
                    let second = self.cond()?;
                    let mut acc = fold(first, second);
                    while !matches!(self.peek(), Some(Tok::RParen) | None) {
                        acc = fold(acc, self.cond()?);
                    }
                    self.expect_rparen(&closing)?;
                    Ok(acc)
                }
                Some(Tok::Sym(name)) if pred_named(name).is_some() => Ok(Cond::Atom(self.atom()?)),
                Some(tok) => {
                    let pos = self.toks[self.next + 1].1;
                    Err(pos.error(
                        format!("found {}", tok.describe()),
                        Some("not, and, or, or a predicate"),
                    ))
                }
                None => Err(self.eof.error(
                    "unexpected end of input",
                    Some("not, and, or, or a predicate"),
                )),
            },
            Some(Tok::Sym(other)) => {
                let pos = self.here();
                Err(pos.error(format!("unknown condition {other:?}"), Some("a condition")))
            }
            Some(tok) => {
                let msg = format!("found {}", tok.describe());
                Err(self.here().error(msg, Some("a condition")))
            }
            None => Err(self.eof.error("unexpected end of input", Some("a condition"))),
        }
    }
}

/// Parses a single term; the whole input must be consumed.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let term = p.term()?;
    p.finish()?;
    Ok(term)
}

/// Parses a single atom; the whole input must be consumed.
pub fn parse_atom(src: &str) -> Result<Atom, ParseError> {
    let mut p = Parser::new(src)?;
    let atom = p.atom()?;
    p.finish()?;
    Ok(atom)
}

/// Parses a single condition; the whole input must be consumed.
pub fn parse_cond(src: &str) -> Result<Cond, ParseError> {
    let mut p = Parser::new(src)?;
    let cond = p.cond()?;
    p.finish()?;
    Ok(cond)
}

/// Parses a catalog file: a sequence of `(entry ...)` records. Entries are
/// validated as they are built, and invariant violations (bad literal shape,
/// `x` in the condition, a repeated name, ...) are reported as positioned
/// errors at the offending record.
pub fn parse_catalog(src: &str) -> Result<Vec<ICEntry>, ParseError> {
    let mut p = Parser::new(src)?;
    let mut entries: Vec<ICEntry> = Vec::new();
    let mut names = BTreeSet::new();
    while p.peek().is_some() {
        let record_pos = p.here();
        p.expect_lparen("'(' starting an entry record")?;
        p.expect_sym("entry")?;
        let mut name: Option<String> = None;
        let mut literal: Option<Atom> = None;
        let mut ic: Option<Cond> = None;
        let mut provenance: Option<String> = None;
        let mut hints: Option<Vec<Term>> = None;
        loop {
            match p.take("a field keyword or ')'")? {
                (Tok::RParen, _) => break,
                (Tok::Key(key), key_pos) => {
                    fn dup<T>(slot: &Option<T>, key: &str, pos: Pos) -> Result<(), ParseError> {
                        if slot.is_some() {
                            Err(pos.error(format!("duplicate field :{key}"), None))
                        } else {
                            Ok(())
                        }
                    }
                    match key {
                        "name" => {
                            dup(&name, key, key_pos)?;
                            name = Some(p.string("the entry name as a string")?);
                        }
                        "literal" => {
                            dup(&literal, key, key_pos)?;
                            literal = Some(p.atom()?);
                        }
                        "ic" => {
                            dup(&ic, key, key_pos)?;
                            ic = Some(p.cond()?);
                        }
                        "provenance" => {
                            dup(&provenance, key, key_pos)?;
                            provenance = Some(p.string("the provenance as a string")?);
                        }
                        "witness-hints" => {
                            dup(&hints, key, key_pos)?;
                            p.expect_lparen("'(' starting the hint list")?;
                            let mut list = Vec::new();
                            while !matches!(p.peek(), Some(Tok::RParen) | None) {
                                list.push(p.term()?);
                            }
                            p.expect_rparen("')' closing the hint list")?;
                            hints = Some(list);
                        }
                        other => {
                            return Err(key_pos.error(
                                format!("unknown field :{other}"),
                                Some(":name, :literal, :ic, :provenance, or :witness-hints"),
                            ));
                        }
                    }
                }
                (tok, pos) => {
                    return Err(
                        pos.error(format!("found {}", tok.describe()), Some("a field keyword or ')'"))
                    );
                }
            }
        }
        let name =
            name.ok_or_else(|| record_pos.error("entry is missing the :name field", None))?;
        let literal =
            literal.ok_or_else(|| record_pos.error("entry is missing the :literal field", None))?;
        let ic = ic.ok_or_else(|| record_pos.error("entry is missing the :ic field", None))?;
        if !names.insert(name.clone()) {
            return Err(record_pos.error(format!("duplicate entry name {name:?}"), None));
        }
        let entry = ICEntry::new(
            name,
            literal,
            ic,
            provenance.unwrap_or_default(),
            hints.unwrap_or_default(),
        )
        .map_err(|e| record_pos.error(e.to_string(), None))?;
        entries.push(entry);
    }
    Ok(entries)
}

// ----------------------------------------------------------------------
// Printing
// ----------------------------------------------------------------------

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Zero => f.write_str("zero"),
            Term::Ones => f.write_str("ones"),
            Term::Unary(op, a) => write!(f, "({} {a})", op.keyword()),
            Term::Binary(op, a, b) => write!(f, "({} {a} {b})", op.keyword()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.pred.keyword(), self.lhs, self.rhs)
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cond::True => f.write_str("true"),
            Cond::Atom(a) => write!(f, "{a}"),
            Cond::Not(c) => write!(f, "(not {c})"),
            Cond::And(a, b) => write!(f, "(and {a} {b})"),
            Cond::Or(a, b) => write!(f, "(or {a} {b})"),
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// Prints an entry as a catalog record that parses back to the same entry.
/// Empty provenance and empty hint lists are omitted.
pub fn print_entry(entry: &ICEntry) -> String {
    let mut out = format!(
        "(entry :name {} :literal {} :ic {}",
        quote(entry.name()),
        entry.literal(),
        entry.ic()
    );
    if !entry.provenance().is_empty() {
        out.push_str(&format!(" :provenance {}", quote(entry.provenance())));
    }
    if !entry.witness_hints().is_empty() {
        let hints: Vec<String> = entry.witness_hints().iter().map(Term::to_string).collect();
        out.push_str(&format!(" :witness-hints ({})", hints.join(" ")));
    }
    out.push(')');
    out
}
