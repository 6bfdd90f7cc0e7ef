//! Expression representation for literals and invertibility conditions.
//!
//! Terms are bit-vector expressions over the three variables `x`, `s` and
//! `t`; atoms compare two terms under one of ten predicates; conditions are
//! boolean combinations of atoms. Terms carry no widths of their own: an
//! [`Assignment`] fixes a width and (optionally) values for the variables,
//! and evaluation instantiates the expression at that width.
//!
//! The *literal shape* check enforces the form required of an invertibility
//! entry's literal: a single atom `x <> s |><| t`, `s <> x |><| t` or
//! `op(x) |><| t` where `x` occurs exactly once and the right-hand side is
//! the bare variable `t`.

use std::fmt;

use thiserror::Error;

use crate::bitvec::BitVec;

/// The three distinguished variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    S,
    T,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::S => "s",
            Var::T => "t",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unary bit-vector operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Not,
    Neg,
}

impl UnOp {
    /// The operator's name in the surface syntax.
    pub fn keyword(self) -> &'static str {
        match self {
            UnOp::Not => "bvnot",
            UnOp::Neg => "bvneg",
        }
    }
}

/// Binary bit-vector operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Add,
    Sub,
    Mul,
    Shl,
    Lshr,
    Ashr,
}

impl BinOp {
    pub fn keyword(self) -> &'static str {
        match self {
            BinOp::And => "bvand",
            BinOp::Or => "bvor",
            BinOp::Add => "bvadd",
            BinOp::Sub => "bvsub",
            BinOp::Mul => "bvmul",
            BinOp::Shl => "bvshl",
            BinOp::Lshr => "bvlshr",
            BinOp::Ashr => "bvashr",
        }
    }
}

/// Comparison predicates. `Neq` is a primitive; it must always evaluate
/// exactly like the negation of `Eq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pred {
    Eq,
    Neq,
    Ult,
    Ugt,
    Ule,
    Uge,
    Slt,
    Sgt,
    Sle,
    Sge,
}

impl Pred {
    pub fn keyword(self) -> &'static str {
        match self {
            Pred::Eq => "=",
            Pred::Neq => "distinct",
            Pred::Ult => "bvult",
            Pred::Ugt => "bvugt",
            Pred::Ule => "bvule",
            Pred::Uge => "bvuge",
            Pred::Slt => "bvslt",
            Pred::Sgt => "bvsgt",
            Pred::Sle => "bvsle",
            Pred::Sge => "bvsge",
        }
    }
}

/// A bit-vector expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    /// All-zeros constant at the assignment width.
    Zero,
    /// All-ones constant at the assignment width.
    Ones,
    Unary(UnOp, Box<Term>),
    Binary(BinOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn unary(op: UnOp, operand: Term) -> Term {
        Term::Unary(op, Box::new(operand))
    }

    pub fn binary(op: BinOp, lhs: Term, rhs: Term) -> Term {
        Term::Binary(op, Box::new(lhs), Box::new(rhs))
    }
}

/// A comparison between two terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pred: Pred,
    pub lhs: Term,
    pub rhs: Term,
}

impl Atom {
    pub fn new(pred: Pred, lhs: Term, rhs: Term) -> Atom {
        Atom { pred, lhs, rhs }
    }
}

/// A boolean combination of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cond {
    True,
    Atom(Atom),
    Not(Box<Cond>),
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
}

impl Cond {
    // An associated constructor, deliberately named after the connective
    // keyword like `and` and `or` below; it is not an `ops::Not` candidate.
    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Cond) -> Cond {
        Cond::Not(Box::new(c))
    }

    pub fn and(a: Cond, b: Cond) -> Cond {
        Cond::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Cond, b: Cond) -> Cond {
        Cond::Or(Box::new(a), Box::new(b))
    }
}

/// A small set of [`Var`]s, stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct VarSet(u8);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    fn bit(v: Var) -> u8 {
        1 << v as u8
    }

    pub fn of(vars: &[Var]) -> VarSet {
        let mut set = VarSet::EMPTY;
        for &v in vars {
            set.insert(v);
        }
        set
    }

    pub fn insert(&mut self, v: Var) {
        self.0 |= Self::bit(v);
    }

    pub fn contains(self, v: Var) -> bool {
        self.0 & Self::bit(v) != 0
    }

    pub fn is_subset_of(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Var> {
        [Var::X, Var::S, Var::T]
            .into_iter()
            .filter(move |&v| self.contains(v))
    }
}

/// A width together with optional values for `x`, `s` and `t`. Every bound
/// value has exactly the assignment's width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    width: u32,
    x: Option<BitVec>,
    s: Option<BitVec>,
    t: Option<BitVec>,
}

impl Assignment {
    /// An assignment with no variables bound.
    ///
    /// Panics if `width == 0`.
    pub fn new(width: u32) -> Assignment {
        assert!(width >= 1, "assignment width must be at least 1");
        Assignment {
            width,
            x: None,
            s: None,
            t: None,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Binds a variable, builder style. Fails if the value's width differs
    /// from the assignment's.
    pub fn bind(mut self, var: Var, value: BitVec) -> Result<Assignment, WidthMismatch> {
        self.set(var, value)?;
        Ok(self)
    }

    /// Binds or rebinds a variable in place.
    pub fn set(&mut self, var: Var, value: BitVec) -> Result<(), WidthMismatch> {
        if value.width() != self.width {
            return Err(WidthMismatch {
                left: self.width,
                right: value.width(),
            });
        }
        let slot = match var {
            Var::X => &mut self.x,
            Var::S => &mut self.s,
            Var::T => &mut self.t,
        };
        *slot = Some(value);
        Ok(())
    }

    pub fn get(&self, var: Var) -> Option<&BitVec> {
        match var {
            Var::X => self.x.as_ref(),
            Var::S => self.s.as_ref(),
            Var::T => self.t.as_ref(),
        }
    }
}

pub use crate::bitvec::WidthMismatch;

/// Evaluation failure: the expression mentions a variable the assignment
/// does not bind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {} is not bound in the assignment", .0.name())]
    Unbound(Var),
}

impl Term {
    /// Evaluates the term under `env`. All operator applications are at the
    /// assignment width, so width mismatches cannot occur.
    pub fn eval(&self, env: &Assignment) -> Result<BitVec, EvalError> {
        match self {
            Term::Var(v) => env.get(*v).cloned().ok_or(EvalError::Unbound(*v)),
            Term::Zero => Ok(BitVec::zeros(env.width())),
            Term::Ones => Ok(BitVec::ones(env.width())),
            Term::Unary(op, a) => {
                let a = a.eval(env)?;
                Ok(match op {
                    UnOp::Not => a.bvnot(),
                    UnOp::Neg => a.bvneg(),
                })
            }
            Term::Binary(op, a, b) => {
                let a = a.eval(env)?;
                let b = b.eval(env)?;
                let r = match op {
                    BinOp::And => a.bvand(&b),
                    BinOp::Or => a.bvor(&b),
                    BinOp::Add => a.bvadd(&b),
                    BinOp::Sub => a.bvsub(&b),
                    BinOp::Mul => a.bvmul(&b),
                    BinOp::Shl => a.bvshl(&b),
                    BinOp::Lshr => a.bvlshr(&b),
                    BinOp::Ashr => a.bvashr(&b),
                };
                Ok(r.expect("assignment invariant keeps operand widths equal"))
            }
        }
    }

    /// The set of variables occurring in the term.
    pub fn vars(&self) -> VarSet {
        match self {
            Term::Var(v) => VarSet::of(&[*v]),
            Term::Zero | Term::Ones => VarSet::EMPTY,
            Term::Unary(_, a) => a.vars(),
            Term::Binary(_, a, b) => a.vars().union(b.vars()),
        }
    }

    /// How many times `var` occurs in the term.
    pub fn count_var(&self, var: Var) -> usize {
        match self {
            Term::Var(v) => usize::from(*v == var),
            Term::Zero | Term::Ones => 0,
            Term::Unary(_, a) => a.count_var(var),
            Term::Binary(_, a, b) => a.count_var(var) + b.count_var(var),
        }
    }
}

impl Atom {
    /// Evaluates the comparison under `env`.
    pub fn eval(&self, env: &Assignment) -> Result<bool, EvalError> {
        let l = self.lhs.eval(env)?;
        let r = self.rhs.eval(env)?;
        let result = match self.pred {
            Pred::Eq => l.bveq(&r),
            Pred::Neq => l.bveq(&r).map(|eq| !eq),
            Pred::Ult => l.bvult(&r),
            Pred::Ugt => l.bvugt(&r),
            Pred::Ule => l.bvule(&r),
            Pred::Uge => l.bvuge(&r),
            Pred::Slt => l.bvslt(&r),
            Pred::Sgt => l.bvsgt(&r),
            Pred::Sle => l.bvsle(&r),
            Pred::Sge => l.bvsge(&r),
        };
        Ok(result.expect("assignment invariant keeps operand widths equal"))
    }

    pub fn vars(&self) -> VarSet {
        self.lhs.vars().union(self.rhs.vars())
    }

    pub fn count_var(&self, var: Var) -> usize {
        self.lhs.count_var(var) + self.rhs.count_var(var)
    }
}

impl Cond {
    /// Evaluates the condition under `env`.
    pub fn eval(&self, env: &Assignment) -> Result<bool, EvalError> {
        match self {
            Cond::True => Ok(true),
            Cond::Atom(a) => a.eval(env),
            Cond::Not(c) => Ok(!c.eval(env)?),
            Cond::And(a, b) => Ok(a.eval(env)? && b.eval(env)?),
            Cond::Or(a, b) => Ok(a.eval(env)? || b.eval(env)?),
        }
    }

    pub fn vars(&self) -> VarSet {
        match self {
            Cond::True => VarSet::EMPTY,
            Cond::Atom(a) => a.vars(),
            Cond::Not(c) => c.vars(),
            Cond::And(a, b) | Cond::Or(a, b) => a.vars().union(b.vars()),
        }
    }
}

/// Why an atom fails the literal shape check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ShapeViolation {
    #[error("x occurs {0} times in the literal, expected exactly once")]
    XOccurrences(usize),
    #[error("the literal's right-hand side must be the bare variable t")]
    RhsNotT,
    #[error("the literal's left-hand side must be x <> s, s <> x, or a unary operator applied to x")]
    UnsupportedLhs,
}

impl Atom {
    /// Checks that the atom has the shape required of an invertibility
    /// entry's literal: `x` appears exactly once, the right-hand side is the
    /// bare variable `t`, and the left-hand side combines `x` with `s` under
    /// a binary operator (either operand order) or applies a unary operator
    /// to `x`.
    pub fn check_literal_shape(&self) -> Result<(), ShapeViolation> {
        let x_count = self.count_var(Var::X);
        if x_count != 1 {
            return Err(ShapeViolation::XOccurrences(x_count));
        }
        if self.rhs != Term::Var(Var::T) {
            return Err(ShapeViolation::RhsNotT);
        }
        match &self.lhs {
            Term::Binary(_, a, b) => match (a.as_ref(), b.as_ref()) {
                (Term::Var(Var::X), Term::Var(Var::S)) | (Term::Var(Var::S), Term::Var(Var::X)) => {
                    Ok(())
                }
                _ => Err(ShapeViolation::UnsupportedLhs),
            },
            Term::Unary(_, a) => match a.as_ref() {
                Term::Var(Var::X) => Ok(()),
                _ => Err(ShapeViolation::UnsupportedLhs),
            },
            _ => Err(ShapeViolation::UnsupportedLhs),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::Var(Var::X)
    }
    fn s() -> Term {
        Term::Var(Var::S)
    }
    fn t() -> Term {
        Term::Var(Var::T)
    }

    fn env(width: u32, x: u64, s: u64, t: u64) -> Assignment {
        Assignment::new(width)
            .bind(Var::X, BitVec::from_u64(x, width))
            .unwrap()
            .bind(Var::S, BitVec::from_u64(s, width))
            .unwrap()
            .bind(Var::T, BitVec::from_u64(t, width))
            .unwrap()
    }

    #[test]
    fn eval_follows_the_operations() {
        // (ones << s) at width 4 with s = 1.
        let term = Term::binary(BinOp::Shl, Term::Ones, s());
        let env = env(4, 0, 1, 0);
        assert_eq!(term.eval(&env).unwrap(), BitVec::from_u64(0b1110, 4));
    }

    #[test]
    fn eval_unbound_variable_fails() {
        let env = Assignment::new(4);
        assert_eq!(x().eval(&env), Err(EvalError::Unbound(Var::X)));
        // Constants still evaluate without any bindings.
        assert_eq!(Term::Ones.eval(&env).unwrap(), BitVec::ones(4));
        assert_eq!(Term::Zero.eval(&env).unwrap(), BitVec::zeros(4));
    }

    #[test]
    fn assignment_rejects_width_mismatch() {
        let a = Assignment::new(4);
        assert!(a.bind(Var::X, BitVec::from_u64(0, 5)).is_err());
    }

    #[test]
    fn atom_eval_and_neq_primitive() {
        let eq = Atom::new(Pred::Eq, x(), t());
        let neq = Atom::new(Pred::Neq, x(), t());
        for (xv, tv) in [(3u64, 3u64), (3, 5)] {
            let e = env(4, xv, 0, tv);
            assert_eq!(neq.eval(&e).unwrap(), !eq.eval(&e).unwrap());
        }
    }

    #[test]
    fn signed_predicate_eval() {
        // 8 is -8 and 1 is 1 at width 4.
        let a = Atom::new(Pred::Slt, s(), t());
        assert!(a.eval(&env(4, 0, 8, 1)).unwrap());
        assert!(!a.eval(&env(4, 0, 1, 8)).unwrap());
    }

    #[test]
    fn cond_connectives() {
        let yes = Cond::True;
        let no = Cond::not(Cond::True);
        let e = Assignment::new(1);
        assert!(Cond::or(no.clone(), yes.clone()).eval(&e).unwrap());
        assert!(!Cond::and(no.clone(), yes.clone()).eval(&e).unwrap());
        assert!(!no.eval(&e).unwrap());
    }

    #[test]
    fn var_sets() {
        let term = Term::binary(BinOp::Add, x(), s());
        assert_eq!(term.vars(), VarSet::of(&[Var::X, Var::S]));
        assert!(term.vars().is_subset_of(VarSet::of(&[Var::X, Var::S, Var::T])));
        assert!(!VarSet::of(&[Var::T]).is_subset_of(term.vars()));
        assert_eq!(
            VarSet::of(&[Var::S, Var::X]).iter().collect::<Vec<_>>(),
            vec![Var::X, Var::S]
        );
        assert!(VarSet::EMPTY.is_empty());
    }

    #[test]
    fn literal_shape_accepts_table_forms() {
        let ok = [
            Atom::new(Pred::Eq, Term::binary(BinOp::Add, x(), s()), t()),
            Atom::new(Pred::Ult, Term::binary(BinOp::Ashr, s(), x()), t()),
            Atom::new(Pred::Sgt, Term::unary(UnOp::Not, x()), t()),
            Atom::new(Pred::Neq, Term::unary(UnOp::Neg, x()), t()),
        ];
        for atom in ok {
            assert_eq!(atom.check_literal_shape(), Ok(()), "{atom:?}");
        }
    }

    #[test]
    fn literal_shape_rejections() {
        let twice = Atom::new(Pred::Eq, Term::binary(BinOp::Add, x(), x()), t());
        assert_eq!(
            twice.check_literal_shape(),
            Err(ShapeViolation::XOccurrences(2))
        );
        let zero = Atom::new(Pred::Eq, Term::binary(BinOp::Add, s(), s()), t());
        assert_eq!(
            zero.check_literal_shape(),
            Err(ShapeViolation::XOccurrences(0))
        );
        let bad_rhs = Atom::new(Pred::Eq, Term::binary(BinOp::Add, x(), s()), s());
        assert_eq!(bad_rhs.check_literal_shape(), Err(ShapeViolation::RhsNotT));
        let bad_lhs = Atom::new(
            Pred::Eq,
            Term::binary(BinOp::Add, Term::unary(UnOp::Neg, x()), s()),
            t(),
        );
        assert_eq!(
            bad_lhs.check_literal_shape(),
            Err(ShapeViolation::UnsupportedLhs)
        );
        // x combined with t on the left is not a recognized shape.
        let x_with_t = Atom::new(Pred::Eq, Term::binary(BinOp::Add, x(), t()), t());
        assert_eq!(
            x_with_t.check_literal_shape(),
            Err(ShapeViolation::UnsupportedLhs)
        );
    }
}
