//! Equivalence checking between literals and their invertibility conditions.
//!
//! For an entry with literal `l[x, s, t]` and condition `IC[s, t]`, the
//! claim under test is: for every `s` and `t` at a given width, `IC` holds
//! exactly when some `x` satisfies `l`. Two regimes are provided.
//!
//! **Exhaustive.** For widths up to [`MAX_EXHAUSTIVE_WIDTH`], both sides are
//! computed in full: [`exact_invertibility_set`] enumerates, for each pair
//! `(s, t)`, the candidate witnesses `x` in ascending unsigned order (with
//! short-circuiting), and [`ic_truth_set`] evaluates the condition on every
//! pair. Equal sets decide the claim at that width; a difference yields the
//! canonical counterexample — the differing pair smallest in the `(s, t)`
//! ordering with `s` most significant — plus a witness `x` whenever the
//! literal side is the satisfiable one.
//!
//! **Sampled.** For larger widths the claim is probed randomly in both
//! directions. The forward direction looks for an outright refutation: a
//! sampled triple `(x, s, t)` satisfying the literal while the condition is
//! false. The backward direction samples pairs with the condition true and
//! tries to produce a witness, first from the entry's hints, then from a
//! fixed ladder of constants, then from randomly drawn candidates up to the
//! witness budget. A pair that defeats all of these yields
//! [`Status::ForwardOnly`] — the equivalence survived forward falsification
//! but backward witness search gave out, which is evidence, not proof, of a
//! gap. Sampling can never return [`Status::Valid`]; only exhaustive
//! enumeration can.
//!
//! Campaigns run every catalog entry at every configured width. Results are
//! deterministic functions of the catalog, the configuration and the seed:
//! each task derives its own random stream from `(seed, entry, width)`, so
//! the worker count influences wall-clock time only, never verdicts.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::bitvec::BitVec;
use crate::catalog::{Catalog, ICEntry};
use crate::sampling;
use crate::term::{Assignment, Atom, Cond, ShapeViolation, Var, VarSet};

/// Exhaustive enumeration walks `4^width` pairs with up to `2^width`
/// witness candidates each; beyond 16 bits that is out of reach.
pub const MAX_EXHAUSTIVE_WIDTH: u32 = 16;

/// Campaign configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Widths checked by full enumeration. Every width must be between 1
    /// and [`MAX_EXHAUSTIVE_WIDTH`].
    pub exhaustive_widths: BTreeSet<u32>,
    /// Widths checked by sampling. A width also listed for exhaustive
    /// checking is checked exhaustively only.
    pub sampled_widths: BTreeSet<u32>,
    /// Sampling effort per width, for each direction.
    pub samples_per_width: u64,
    /// Random witness candidates tried per backward pair after the hints
    /// and the constant ladder.
    pub witness_budget: u64,
    /// Seed from which every task's random stream is derived.
    pub rng_seed: u64,
    /// Worker threads for campaigns. Affects wall-clock time only.
    pub workers: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            exhaustive_widths: (1..=8).collect(),
            sampled_widths: [16, 32, 65].into_iter().collect(),
            samples_per_width: 100_000,
            witness_budget: 4096,
            rng_seed: 0,
            workers: 1,
        }
    }
}

/// Configuration rejection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("width 0 is not a valid bit-vector width")]
    ZeroWidth,
    #[error("exhaustive width {0} exceeds the limit of {MAX_EXHAUSTIVE_WIDTH} bits")]
    ExhaustiveWidthTooLarge(u32),
    #[error("samples_per_width must be at least 1")]
    NoSamples,
    #[error("witness_budget must be at least 1")]
    NoWitnessBudget,
    #[error("workers must be at least 1")]
    NoWorkers,
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.exhaustive_widths.contains(&0) || self.sampled_widths.contains(&0) {
            return Err(ConfigError::ZeroWidth);
        }
        if let Some(&w) = self
            .exhaustive_widths
            .iter()
            .find(|&&w| w > MAX_EXHAUSTIVE_WIDTH)
        {
            return Err(ConfigError::ExhaustiveWidthTooLarge(w));
        }
        if self.samples_per_width == 0 {
            return Err(ConfigError::NoSamples);
        }
        if self.witness_budget == 0 {
            return Err(ConfigError::NoWitnessBudget);
        }
        if self.workers == 0 {
            return Err(ConfigError::NoWorkers);
        }
        Ok(())
    }
}

/// Verification failure (as opposed to a negative verdict).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("width {0} exceeds the exhaustive enumeration limit of {MAX_EXHAUSTIVE_WIDTH} bits")]
    WidthTooLarge(u32),
    #[error("literal is not in the required shape: {0}")]
    BadLiteral(#[from] ShapeViolation),
    #[error("the condition may only mention s and t")]
    CondMentionsX,
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("failed to build the worker pool: {0}")]
    Pool(String),
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

/// The outcome of checking one entry at one width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// Every pair agrees; only exhaustive checking can conclude this.
    Valid,
    /// A concrete pair refutes the equivalence (exhaustive), or a sampled
    /// triple satisfied the literal while the condition was false.
    CounterexampleFound,
    /// Sampling only: a pair with the condition true defeated the entire
    /// witness search. Suspicious, but not a proof of failure.
    ForwardOnly,
    /// Sampling only: no discrepancy was observed within the budget.
    Inconclusive,
}

/// A pair refuting (or, for [`Status::ForwardOnly`], resisting) the claim.
/// `x` is a witness satisfying the literal when the refutation is on the
/// condition-false side, and `None` when no witness exists or none was
/// found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub s: BitVec,
    pub t: BitVec,
    pub x: Option<BitVec>,
}

/// Work counters for one verdict.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerdictStats {
    /// Exhaustive: size of the `(s, t)` domain compared.
    pub pairs_checked: u64,
    /// Sampled: forward triples drawn.
    pub forward_samples: u64,
    /// Sampled: backward pairs drawn.
    pub backward_pairs: u64,
    /// Sampled: backward pairs on which the condition held.
    pub backward_ic_true: u64,
    /// Sampled: witnesses produced by a hint term.
    pub witnesses_via_hint: u64,
    /// Sampled: witnesses produced by the constant ladder or random search.
    pub witnesses_via_search: u64,
    /// Wall-clock time. Informational only; excluded from serialized
    /// reports so that equal-seed runs compare byte-for-byte equal.
    pub elapsed: Duration,
}

/// The result of checking one entry at one width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub entry: String,
    pub width: u32,
    pub mode: Mode,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub stats: VerdictStats,
}

/// The set of pairs `(s, t)` at a fixed width for which some property
/// holds, stored as a bitmap indexed by `s * 2^width + t`. That index order
/// makes "first difference" mean the canonical smallest pair: minimal `s`,
/// then minimal `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSet {
    width: u32,
    words: Box<[u64]>,
}

impl PairSet {
    fn new(width: u32) -> PairSet {
        debug_assert!((1..=MAX_EXHAUSTIVE_WIDTH).contains(&width));
        let bits = 1usize << (2 * width);
        PairSet {
            width,
            words: vec![0u64; bits.div_ceil(64)].into_boxed_slice(),
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Number of `(s, t)` pairs at this width.
    pub fn domain_size(&self) -> u64 {
        1u64 << (2 * self.width)
    }

    fn place(&self, s: u64, t: u64) -> (usize, u64) {
        debug_assert!(s < (1 << self.width) && t < (1 << self.width));
        let index = (s << self.width) | t;
        ((index / 64) as usize, 1u64 << (index % 64))
    }

    pub fn contains(&self, s: u64, t: u64) -> bool {
        let (word, mask) = self.place(s, t);
        self.words[word] & mask != 0
    }

    fn insert(&mut self, s: u64, t: u64) {
        let (word, mask) = self.place(s, t);
        self.words[word] |= mask;
    }

    /// Number of member pairs.
    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// The smallest pair (by `s`, then `t`) on which the two sets disagree.
    ///
    /// Panics if the widths differ.
    pub fn first_difference(&self, other: &PairSet) -> Option<(u64, u64)> {
        assert_eq!(self.width, other.width, "pair sets must share a width");
        for (i, (&a, &b)) in self.words.iter().zip(other.words.iter()).enumerate() {
            let diff = a ^ b;
            if diff != 0 {
                let index = i as u64 * 64 + diff.trailing_zeros() as u64;
                return Some((index >> self.width, index & ((1 << self.width) - 1)));
            }
        }
        None
    }

    /// Member pairs in ascending `(s, t)` order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let n = 1u64 << self.width;
        (0..n).flat_map(move |s| (0..n).filter_map(move |t| self.contains(s, t).then_some((s, t))))
    }
}

fn check_width(width: u32) -> Result<(), VerifyError> {
    if width == 0 {
        return Err(ConfigError::ZeroWidth.into());
    }
    if width > MAX_EXHAUSTIVE_WIDTH {
        return Err(VerifyError::WidthTooLarge(width));
    }
    Ok(())
}

/// One stratum (fixed `s`) of the invertibility set, as `2^width` bits
/// indexed by `t`. Witness candidates are tried in ascending unsigned order
/// and the scan stops at the first hit.
fn literal_stratum(literal: &Atom, width: u32, s: u64) -> Vec<u64> {
    let n = 1u64 << width;
    let mut words = vec![0u64; (n as usize).div_ceil(64)];
    let mut env = Assignment::new(width);
    env.set(Var::S, BitVec::from_u64(s, width)).unwrap();
    for t in 0..n {
        env.set(Var::T, BitVec::from_u64(t, width)).unwrap();
        for x in 0..n {
            env.set(Var::X, BitVec::from_u64(x, width)).unwrap();
            if literal.eval(&env).expect("x, s and t are bound") {
                words[(t / 64) as usize] |= 1 << (t % 64);
                break;
            }
        }
    }
    words
}

/// One stratum (fixed `s`) of the condition's truth set.
fn cond_stratum(cond: &Cond, width: u32, s: u64) -> Vec<u64> {
    let n = 1u64 << width;
    let mut words = vec![0u64; (n as usize).div_ceil(64)];
    let mut env = Assignment::new(width);
    env.set(Var::S, BitVec::from_u64(s, width)).unwrap();
    for t in 0..n {
        env.set(Var::T, BitVec::from_u64(t, width)).unwrap();
        if cond.eval(&env).expect("s and t are bound") {
            words[(t / 64) as usize] |= 1 << (t % 64);
        }
    }
    words
}

/// Assembles a [`PairSet`] from per-stratum fills, in parallel when the
/// strata are at least a word wide.
fn build_pair_set(width: u32, fill: impl Fn(u64) -> Vec<u64> + Send + Sync) -> PairSet {
    let n = 1u64 << width;
    let mut set = PairSet::new(width);
    if width >= 6 {
        // Each stratum is a whole number of words; copy them into place.
        let strata: Vec<Vec<u64>> = (0..n).into_par_iter().map(fill).collect();
        let words_per_stratum = (n / 64) as usize;
        for (s, words) in strata.iter().enumerate() {
            set.words[s * words_per_stratum..(s + 1) * words_per_stratum].copy_from_slice(words);
        }
    } else {
        for s in 0..n {
            let words = fill(s);
            for t in 0..n {
                if words[(t / 64) as usize] >> (t % 64) & 1 == 1 {
                    set.insert(s, t);
                }
            }
        }
    }
    set
}

/// The pairs `(s, t)` for which some `x` satisfies the literal, computed by
/// full enumeration.
pub fn exact_invertibility_set(literal: &Atom, width: u32) -> Result<PairSet, VerifyError> {
    check_width(width)?;
    literal.check_literal_shape()?;
    Ok(build_pair_set(width, |s| literal_stratum(literal, width, s)))
}

/// The pairs `(s, t)` for which the condition holds, computed by full
/// enumeration. The condition must mention only `s` and `t`.
pub fn ic_truth_set(cond: &Cond, width: u32) -> Result<PairSet, VerifyError> {
    check_width(width)?;
    if !cond.vars().is_subset_of(VarSet::of(&[Var::S, Var::T])) {
        return Err(VerifyError::CondMentionsX);
    }
    Ok(build_pair_set(width, |s| cond_stratum(cond, width, s)))
}

/// The smallest witness `x` (in unsigned order) satisfying the literal at
/// `(s, t)`, if any. Only usable at exhaustively enumerable widths.
pub fn find_witness(literal: &Atom, s: &BitVec, t: &BitVec) -> Option<BitVec> {
    let width = s.width();
    let mut env = Assignment::new(width);
    env.set(Var::S, s.clone()).ok()?;
    env.set(Var::T, t.clone()).ok()?;
    for x in 0..(1u64 << width) {
        let x = BitVec::from_u64(x, width);
        env.set(Var::X, x.clone()).unwrap();
        if literal.eval(&env).ok()? {
            return Some(x);
        }
    }
    None
}

/// Decides the equivalence at `width` by comparing the full invertibility
/// set against the full condition truth set. On failure the counterexample
/// is canonical: the smallest differing pair, carrying a witness whenever
/// the literal side is the satisfiable one.
pub fn verify_exhaustive(entry: &ICEntry, width: u32) -> Result<Verdict, VerifyError> {
    let start = Instant::now();
    let invertible = exact_invertibility_set(entry.literal(), width)?;
    let ic_true = ic_truth_set(entry.ic(), width)?;
    let mut stats = VerdictStats {
        pairs_checked: invertible.domain_size(),
        ..VerdictStats::default()
    };
    let (status, counterexample) = match invertible.first_difference(&ic_true) {
        None => (Status::Valid, None),
        Some((s, t)) => {
            let s = BitVec::from_u64(s, width);
            let t = BitVec::from_u64(t, width);
            // A witness exists exactly when the literal side is satisfiable
            // at the differing pair (and then the condition is wrongly
            // false there).
            let x = find_witness(entry.literal(), &s, &t);
            (Status::CounterexampleFound, Some(Counterexample { s, t, x }))
        }
    };
    stats.elapsed = start.elapsed();
    Ok(Verdict {
        entry: entry.name().to_owned(),
        width,
        mode: Mode::Exhaustive,
        status,
        counterexample,
        stats,
    })
}

enum WitnessOutcome {
    ViaHint,
    ViaSearch,
    Exhausted,
}

/// Tries to produce a witness for `(s, t)`: hints first, then a fixed
/// ladder of constants, then random candidates up to `budget`.
fn seek_witness(
    entry: &ICEntry,
    s: &BitVec,
    t: &BitVec,
    budget: u64,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> WitnessOutcome {
    let width = s.width();
    let mut env = Assignment::new(width);
    env.set(Var::S, s.clone()).unwrap();
    env.set(Var::T, t.clone()).unwrap();
    let holds = |env: &mut Assignment, x: BitVec| {
        env.set(Var::X, x).unwrap();
        entry.literal().eval(env).expect("x, s and t are bound")
    };
    for hint in entry.witness_hints() {
        let x = hint.eval(&env).expect("hints mention only s and t");
        if holds(&mut env, x) {
            return WitnessOutcome::ViaHint;
        }
    }
    let ladder = [
        BitVec::zeros(width),
        BitVec::ones(width),
        s.clone(),
        t.clone(),
        s.bvneg(),
        t.bvsub(s).unwrap(),
        t.bvadd(s).unwrap(),
    ];
    for x in ladder {
        if holds(&mut env, x) {
            return WitnessOutcome::ViaSearch;
        }
    }
    for _ in 0..budget {
        let x = sampling::bitvec(rng, width);
        if holds(&mut env, x) {
            return WitnessOutcome::ViaSearch;
        }
    }
    WitnessOutcome::Exhausted
}

/// Probes the equivalence at `width` by random sampling, in both
/// directions. See the module documentation for the regime. The verdict is
/// a deterministic function of `(entry, width, config)`.
pub fn verify_sampled(entry: &ICEntry, width: u32, config: &VerifyConfig) -> Verdict {
    let start = Instant::now();
    let mut rng = sampling::stream(config.rng_seed, entry.name(), width);
    let mut stats = VerdictStats::default();
    let mut env = Assignment::new(width);
    let verdict = |status, counterexample, mut stats: VerdictStats| {
        stats.elapsed = start.elapsed();
        Verdict {
            entry: entry.name().to_owned(),
            width,
            mode: Mode::Sampled,
            status,
            counterexample,
            stats,
        }
    };

    // Forward: a triple satisfying the literal while the condition is false
    // refutes the equivalence outright.
    for _ in 0..config.samples_per_width {
        let x = sampling::bitvec(&mut rng, width);
        let s = sampling::bitvec(&mut rng, width);
        let t = sampling::bitvec(&mut rng, width);
        stats.forward_samples += 1;
        env.set(Var::X, x.clone()).unwrap();
        env.set(Var::S, s.clone()).unwrap();
        env.set(Var::T, t.clone()).unwrap();
        let literal_holds = entry.literal().eval(&env).expect("x, s and t are bound");
        if literal_holds && !entry.ic().eval(&env).expect("s and t are bound") {
            return verdict(
                Status::CounterexampleFound,
                Some(Counterexample { s, t, x: Some(x) }),
                stats,
            );
        }
    }

    // Backward: every sampled pair with the condition true must yield a
    // witness, or the run stops at the offending pair.
    for _ in 0..config.samples_per_width {
        let s = sampling::bitvec(&mut rng, width);
        let t = sampling::bitvec(&mut rng, width);
        stats.backward_pairs += 1;
        env.set(Var::S, s.clone()).unwrap();
        env.set(Var::T, t.clone()).unwrap();
        if !entry.ic().eval(&env).expect("s and t are bound") {
            continue;
        }
        stats.backward_ic_true += 1;
        match seek_witness(entry, &s, &t, config.witness_budget, &mut rng) {
            WitnessOutcome::ViaHint => stats.witnesses_via_hint += 1,
            WitnessOutcome::ViaSearch => stats.witnesses_via_search += 1,
            WitnessOutcome::Exhausted => {
                return verdict(
                    Status::ForwardOnly,
                    Some(Counterexample { s, t, x: None }),
                    stats,
                );
            }
        }
    }

    verdict(Status::Inconclusive, None, stats)
}

/// Checks every entry at every configured width. Widths listed for both
/// regimes are checked exhaustively only. Verdicts are ordered by catalog
/// position, then ascending width, and are independent of the worker count.
pub fn verify_campaign(catalog: &Catalog, config: &VerifyConfig) -> Result<Vec<Verdict>, VerifyError> {
    config.validate()?;
    let mut widths: Vec<(u32, Mode)> = config
        .exhaustive_widths
        .iter()
        .map(|&w| (w, Mode::Exhaustive))
        .chain(
            config
                .sampled_widths
                .iter()
                .filter(|w| !config.exhaustive_widths.contains(w))
                .map(|&w| (w, Mode::Sampled)),
        )
        .collect();
    widths.sort_by_key(|&(w, _)| w);

    let tasks: Vec<(&ICEntry, u32, Mode)> = catalog
        .entries()
        .iter()
        .flat_map(|entry| widths.iter().map(move |&(w, m)| (entry, w, m)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| VerifyError::Pool(e.to_string()))?;
    pool.install(|| {
        tasks
            .par_iter()
            .map(|&(entry, width, mode)| match mode {
                Mode::Exhaustive => verify_exhaustive(entry, width),
                Mode::Sampled => Ok(verify_sampled(entry, width, config)),
            })
            .collect()
    })
}
