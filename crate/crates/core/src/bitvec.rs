//! Arbitrary-width bit-vectors with two's-complement semantics.
//!
//! A [`BitVec`] is a vector of `width >= 1` bits. Bit index 0 is the least
//! significant bit; index `width - 1` is the most significant. Values are
//! stored packed into 64-bit words (little-endian word order) and every
//! operation keeps the representation canonical: bits at positions `>= width`
//! are always zero.
//!
//! All binary operations require both operands to have the same width and
//! report a [`WidthMismatch`] otherwise; there is no implicit extension or
//! truncation. Arithmetic is modulo `2^width`. The unsigned value of a vector
//! is `sum b_i * 2^i`; the signed value reinterprets the most significant bit
//! with weight `-2^(width-1)`.
//!
//! Shifts interpret the second operand as an unsigned shift amount and
//! saturate once the amount reaches the width: left and logical right shifts
//! produce all zeros, arithmetic right shift fills with copies of the sign
//! bit. Each shift is provided along two independent routes that must agree:
//!
//! * the default *splice* route ([`BitVec::bvshl`] and friends) builds the
//!   result directly from a run of fill bits and a contiguous slice of the
//!   operand, and
//! * the *iterative* route ([`BitVec::bvshl_iter`] and friends) applies a
//!   single-bit shift step `min(amount, width)` times.
//!
//! The textual form is `#b` followed by the bits from most to least
//! significant, e.g. `#b1101` for the four-bit vector with unsigned value 13.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use smallvec::{smallvec, SmallVec};
use thiserror::Error;

/// Bits per storage word.
const WORD_BITS: u32 = 64;

/// Inline storage covers widths up to 128 without heap allocation.
type Words = SmallVec<[u64; 2]>;

/// A fixed-width bit-vector. See the module documentation for the
/// representation contract.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    width: u32,
    words: Words,
}

/// Error returned by binary operations whose operands differ in width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("width mismatch: left operand has {left} bits, right operand has {right} bits")]
pub struct WidthMismatch {
    pub left: u32,
    pub right: u32,
}

/// Error produced when parsing the `#b...` textual form fails.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitVecParseError {
    #[error("binary literal must start with '#b'")]
    MissingPrefix,
    #[error("binary literal has no digits")]
    Empty,
    #[error("invalid binary digit {0:?}")]
    BadDigit(char),
}

fn words_for(width: u32) -> usize {
    width.div_ceil(WORD_BITS) as usize
}

/// Mask selecting the valid bits of the top storage word.
fn top_mask(width: u32) -> u64 {
    match width % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

impl BitVec {
    fn assert_width(width: u32) {
        assert!(width >= 1, "bit-vector width must be at least 1");
    }

    /// Constructs from raw words, masking any bits beyond `width`.
    pub(crate) fn from_raw_words(mut words: Words, width: u32) -> Self {
        Self::assert_width(width);
        words.truncate(words_for(width));
        words.resize(words_for(width), 0);
        if let Some(top) = words.last_mut() {
            *top &= top_mask(width);
        }
        BitVec { width, words }
    }

    /// The all-zeros vector of the given width.
    ///
    /// Panics if `width == 0`; zero-width vectors do not exist.
    pub fn zeros(width: u32) -> Self {
        Self::assert_width(width);
        BitVec {
            width,
            words: smallvec![0; words_for(width)],
        }
    }

    /// The all-ones vector of the given width (unsigned `2^width - 1`,
    /// signed `-1`).
    pub fn ones(width: u32) -> Self {
        Self::from_raw_words(smallvec![u64::MAX; words_for(width)], width)
    }

    /// Builds the vector of the given width whose unsigned value is
    /// `value mod 2^width`.
    pub fn from_u64(value: u64, width: u32) -> Self {
        let mut words = smallvec![0; words_for(width)];
        words[0] = value;
        Self::from_raw_words(words, width)
    }

    /// Builds the vector of the given width whose unsigned value is
    /// `value mod 2^width`.
    pub fn from_biguint(value: &BigUint, width: u32) -> Self {
        Self::assert_width(width);
        let mut words: Words = value.iter_u64_digits().collect();
        words.truncate(words_for(width));
        Self::from_raw_words(words, width)
    }

    /// Builds a vector from bits listed least significant first. The width is
    /// the slice length, which must be at least 1.
    pub fn from_bits(bits: &[bool]) -> Self {
        Self::assert_width(bits.len() as u32);
        let width = bits.len() as u32;
        let mut words: Words = smallvec![0; words_for(width)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1u64 << (i % 64);
            }
        }
        BitVec { width, words }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// The bit at position `i` (0 = least significant).
    ///
    /// Panics if `i >= width`.
    pub fn bit(&self, i: u32) -> bool {
        assert!(i < self.width, "bit index {i} out of range for width {}", self.width);
        (self.words[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }

    /// The most significant bit, i.e. the sign bit under the signed reading.
    pub fn msb(&self) -> bool {
        self.bit(self.width - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// The bits as a vector, least significant first.
    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.width).map(|i| self.bit(i)).collect()
    }

    /// The unsigned value, `sum b_i * 2^i`.
    pub fn to_biguint(&self) -> BigUint {
        let mut bytes = Vec::with_capacity(self.words.len() * 8);
        for w in &self.words {
            bytes.extend_from_slice(&w.to_le_bytes());
        }
        BigUint::from_bytes_le(&bytes)
    }

    /// The two's-complement signed value, in `[-2^(width-1), 2^(width-1))`.
    pub fn to_bigint(&self) -> BigInt {
        let unsigned = BigInt::from_biguint(Sign::Plus, self.to_biguint());
        if self.msb() {
            unsigned - (BigInt::from(1) << self.width)
        } else {
            unsigned
        }
    }

    /// The unsigned value if it fits in a `u64`.
    pub fn to_u64(&self) -> Option<u64> {
        if self.words.iter().skip(1).any(|&w| w != 0) {
            None
        } else {
            Some(self.words[0])
        }
    }

    fn check_same_width(&self, rhs: &Self) -> Result<(), WidthMismatch> {
        if self.width == rhs.width {
            Ok(())
        } else {
            Err(WidthMismatch {
                left: self.width,
                right: rhs.width,
            })
        }
    }

    // ------------------------------------------------------------------
    // Bitwise operations
    // ------------------------------------------------------------------

    /// Bitwise complement.
    pub fn bvnot(&self) -> Self {
        let words = self.words.iter().map(|&w| !w).collect();
        Self::from_raw_words(words, self.width)
    }

    /// Bitwise and.
    pub fn bvand(&self, rhs: &Self) -> Result<Self, WidthMismatch> {
        self.check_same_width(rhs)?;
        let words = self
            .words
            .iter()
            .zip(&rhs.words)
            .map(|(&a, &b)| a & b)
            .collect();
        Ok(BitVec {
            width: self.width,
            words,
        })
    }

    /// Bitwise or.
    pub fn bvor(&self, rhs: &Self) -> Result<Self, WidthMismatch> {
        self.check_same_width(rhs)?;
        let words = self
            .words
            .iter()
            .zip(&rhs.words)
            .map(|(&a, &b)| a | b)
            .collect();
        Ok(BitVec {
            width: self.width,
            words,
        })
    }

    // ------------------------------------------------------------------
    // Arithmetic, modulo 2^width
    // ------------------------------------------------------------------

    /// Addition modulo `2^width`.
    pub fn bvadd(&self, rhs: &Self) -> Result<Self, WidthMismatch> {
        self.check_same_width(rhs)?;
        let mut words: Words = smallvec![0; self.words.len()];
        let mut carry = 0u64;
        for i in 0..self.words.len() {
            let (sum, c1) = self.words[i].overflowing_add(rhs.words[i]);
            let (sum, c2) = sum.overflowing_add(carry);
            words[i] = sum;
            carry = u64::from(c1) + u64::from(c2);
        }
        Ok(Self::from_raw_words(words, self.width))
    }

    fn sub_words(a: &[u64], b: &[u64], width: u32) -> Self {
        let mut words: Words = smallvec![0; a.len()];
        let mut borrow = false;
        for i in 0..a.len() {
            let (diff, b1) = a[i].overflowing_sub(b[i]);
            let (diff, b2) = diff.overflowing_sub(u64::from(borrow));
            words[i] = diff;
            borrow = b1 | b2;
        }
        Self::from_raw_words(words, width)
    }

    /// Subtraction modulo `2^width`.
    pub fn bvsub(&self, rhs: &Self) -> Result<Self, WidthMismatch> {
        self.check_same_width(rhs)?;
        Ok(Self::sub_words(&self.words, &rhs.words, self.width))
    }

    /// Two's-complement negation: `0 - v` modulo `2^width`.
    pub fn bvneg(&self) -> Self {
        let zero = vec![0u64; self.words.len()];
        Self::sub_words(&zero, &self.words, self.width)
    }

    /// Multiplication modulo `2^width`.
    pub fn bvmul(&self, rhs: &Self) -> Result<Self, WidthMismatch> {
        self.check_same_width(rhs)?;
        let n = self.words.len();
        let mut words: Words = smallvec![0; n];
        for i in 0..n {
            if self.words[i] == 0 {
                continue;
            }
            let mut carry = 0u128;
            for j in 0..n - i {
                let acc =
                    words[i + j] as u128 + self.words[i] as u128 * rhs.words[j] as u128 + carry;
                words[i + j] = acc as u64;
                carry = acc >> 64;
            }
        }
        Ok(Self::from_raw_words(words, self.width))
    }

    // ------------------------------------------------------------------
    // Shifts, splice route (default)
    // ------------------------------------------------------------------

    /// Reads `self` as a shift amount capped at `cap`. Amounts that exceed
    /// the width all behave identically, so the cap loses nothing.
    fn shift_amount(&self, cap: u32) -> u32 {
        if self.words.iter().skip(1).any(|&w| w != 0) {
            return cap;
        }
        self.words[0].min(cap as u64) as u32
    }

    fn shl_words(&self, k: u32) -> Words {
        let n = self.words.len();
        let mut out: Words = smallvec![0; n];
        let word_off = (k / 64) as usize;
        let bit_off = k % 64;
        for i in (word_off..n).rev() {
            let mut v = self.words[i - word_off] << bit_off;
            if bit_off != 0 && i - word_off > 0 {
                v |= self.words[i - word_off - 1] >> (64 - bit_off);
            }
            out[i] = v;
        }
        out
    }

    fn lshr_words(&self, k: u32) -> Words {
        let n = self.words.len();
        let mut out: Words = smallvec![0; n];
        let word_off = (k / 64) as usize;
        let bit_off = k % 64;
        for i in 0..n - word_off {
            let mut v = self.words[i + word_off] >> bit_off;
            if bit_off != 0 && i + word_off + 1 < n {
                v |= self.words[i + word_off + 1] << (64 - bit_off);
            }
            out[i] = v;
        }
        out
    }

    /// Left shift: `k` zeros spliced below the low `width - k` bits of
    /// `self`; all zeros when the amount reaches the width.
    pub fn bvshl(&self, amount: &Self) -> Result<Self, WidthMismatch> {
        self.check_same_width(amount)?;
        let k = amount.shift_amount(self.width);
        if k >= self.width {
            return Ok(Self::zeros(self.width));
        }
        Ok(Self::from_raw_words(self.shl_words(k), self.width))
    }

    /// Logical right shift: the high `width - k` bits of the result are the
    /// top bits of `self`, with `k` zeros above; all zeros when the amount
    /// reaches the width.
    pub fn bvlshr(&self, amount: &Self) -> Result<Self, WidthMismatch> {
        self.check_same_width(amount)?;
        let k = amount.shift_amount(self.width);
        if k >= self.width {
            return Ok(Self::zeros(self.width));
        }
        Ok(Self::from_raw_words(self.lshr_words(k), self.width))
    }

    /// Arithmetic right shift: like [`BitVec::bvlshr`] but the vacated high
    /// bits are copies of the sign bit.
    pub fn bvashr(&self, amount: &Self) -> Result<Self, WidthMismatch> {
        self.check_same_width(amount)?;
        let k = amount.shift_amount(self.width);
        let sign = self.msb();
        if k >= self.width {
            return Ok(if sign {
                Self::ones(self.width)
            } else {
                Self::zeros(self.width)
            });
        }
        let mut out = Self::from_raw_words(self.lshr_words(k), self.width);
        if sign {
            for i in self.width - k..self.width {
                out.words[(i / 64) as usize] |= 1u64 << (i % 64);
            }
        }
        Ok(out)
    }

    // ------------------------------------------------------------------
    // Shifts, iterative route
    // ------------------------------------------------------------------

    /// Left shift computed by repeating a single-bit step: drop the most
    /// significant bit and insert a zero at the bottom. Must agree with
    /// [`BitVec::bvshl`] everywhere.
    pub fn bvshl_iter(&self, amount: &Self) -> Result<Self, WidthMismatch> {
        self.check_same_width(amount)?;
        let steps = amount.shift_amount(self.width);
        #[cfg(feature = "fault-injection")]
        let steps = steps & !1; // deliberately wrong for odd amounts
        let mut bits = self.to_bits();
        for _ in 0..steps {
            bits.pop();
            bits.insert(0, false);
        }
        Ok(Self::from_bits(&bits))
    }

    /// Logical right shift by repeated single-bit steps: drop the least
    /// significant bit and append a zero at the top.
    pub fn bvlshr_iter(&self, amount: &Self) -> Result<Self, WidthMismatch> {
        self.check_same_width(amount)?;
        let steps = amount.shift_amount(self.width);
        let mut bits = self.to_bits();
        for _ in 0..steps {
            bits.remove(0);
            bits.push(false);
        }
        Ok(Self::from_bits(&bits))
    }

    /// Arithmetic right shift by repeated single-bit steps: drop the least
    /// significant bit and append a copy of the current sign bit.
    pub fn bvashr_iter(&self, amount: &Self) -> Result<Self, WidthMismatch> {
        self.check_same_width(amount)?;
        let steps = amount.shift_amount(self.width);
        let mut bits = self.to_bits();
        for _ in 0..steps {
            let sign = *bits.last().expect("width >= 1");
            bits.remove(0);
            bits.push(sign);
        }
        Ok(Self::from_bits(&bits))
    }

    // ------------------------------------------------------------------
    // Comparisons
    // ------------------------------------------------------------------

    fn cmp_unsigned(&self, rhs: &Self) -> Ordering {
        for i in (0..self.words.len()).rev() {
            match self.words[i].cmp(&rhs.words[i]) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    fn cmp_signed(&self, rhs: &Self) -> Ordering {
        match (self.msb(), rhs.msb()) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            // Same sign: two's-complement order agrees with unsigned order
            // within each half of the value space.
            _ => self.cmp_unsigned(rhs),
        }
    }

    /// Equality as a checked operation (same-width precondition applies,
    /// unlike the `PartialEq` impl which just answers `false` across widths).
    pub fn bveq(&self, rhs: &Self) -> Result<bool, WidthMismatch> {
        self.check_same_width(rhs)?;
        Ok(self == rhs)
    }

    /// Unsigned less-than.
    pub fn bvult(&self, rhs: &Self) -> Result<bool, WidthMismatch> {
        self.check_same_width(rhs)?;
        Ok(self.cmp_unsigned(rhs) == Ordering::Less)
    }

    /// Unsigned less-or-equal.
    pub fn bvule(&self, rhs: &Self) -> Result<bool, WidthMismatch> {
        self.check_same_width(rhs)?;
        Ok(self.cmp_unsigned(rhs) != Ordering::Greater)
    }

    /// Unsigned greater-than.
    pub fn bvugt(&self, rhs: &Self) -> Result<bool, WidthMismatch> {
        self.check_same_width(rhs)?;
        Ok(self.cmp_unsigned(rhs) == Ordering::Greater)
    }

    /// Unsigned greater-or-equal.
    pub fn bvuge(&self, rhs: &Self) -> Result<bool, WidthMismatch> {
        self.check_same_width(rhs)?;
        Ok(self.cmp_unsigned(rhs) != Ordering::Less)
    }

    /// Signed less-than.
    pub fn bvslt(&self, rhs: &Self) -> Result<bool, WidthMismatch> {
        self.check_same_width(rhs)?;
        Ok(self.cmp_signed(rhs) == Ordering::Less)
    }

    /// Signed less-or-equal.
    pub fn bvsle(&self, rhs: &Self) -> Result<bool, WidthMismatch> {
        self.check_same_width(rhs)?;
        Ok(self.cmp_signed(rhs) != Ordering::Greater)
    }

    /// Signed greater-than.
    pub fn bvsgt(&self, rhs: &Self) -> Result<bool, WidthMismatch> {
        self.check_same_width(rhs)?;
        Ok(self.cmp_signed(rhs) == Ordering::Greater)
    }

    /// Signed greater-or-equal.
    pub fn bvsge(&self, rhs: &Self) -> Result<bool, WidthMismatch> {
        self.check_same_width(rhs)?;
        Ok(self.cmp_signed(rhs) != Ordering::Less)
    }

    /// Unsigned less-or-equal computed lexicographically over the bits,
    /// most significant first: an independent route that must agree with
    /// [`BitVec::bvule`] everywhere.
    pub fn ule_lex(&self, rhs: &Self) -> Result<bool, WidthMismatch> {
        self.check_same_width(rhs)?;
        // Compare big-endian: reverse the little-endian bit lists, then
        // recurse from the head.
        let mut a = self.to_bits();
        let mut b = rhs.to_bits();
        a.reverse();
        b.reverse();
        fn lex(a: &[bool], b: &[bool]) -> bool {
            match (a.split_first(), b.split_first()) {
                (None, None) => true,
                (Some((&x, rest_a)), Some((&y, rest_b))) => {
                    (x == y && lex(rest_a, rest_b)) || (!x && y)
                }
                // Unreachable under the equal-width precondition.
                _ => false,
            }
        }
        Ok(lex(&a, &b))
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("#b")?;
        for i in (0..self.width).rev() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = BitVecParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s.strip_prefix("#b").ok_or(BitVecParseError::MissingPrefix)?;
        if digits.is_empty() {
            return Err(BitVecParseError::Empty);
        }
        let mut bits = Vec::with_capacity(digits.len());
        // The textual form is most significant first.
        for c in digits.chars().rev() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(BitVecParseError::BadDigit(other)),
            }
        }
        Ok(BitVec::from_bits(&bits))
    }
}
