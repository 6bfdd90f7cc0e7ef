//! Differential properties for the bit-vector kernels against big-integer
//! oracles: every operation is replayed in arbitrary-precision arithmetic
//! and reduced modulo 2^width.

use bvic_core::BitVec;
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

const MAX_WIDTH: u32 = 130;

fn arb_width() -> impl Strategy<Value = u32> {
    1u32..=MAX_WIDTH
}

fn bitvec_at(width: u32) -> impl Strategy<Value = BitVec> {
    proptest::collection::vec(any::<bool>(), width as usize)
        .prop_map(|bits| BitVec::from_bits(&bits))
}

fn arb_single() -> impl Strategy<Value = BitVec> {
    arb_width().prop_flat_map(bitvec_at)
}

fn arb_pair() -> impl Strategy<Value = (BitVec, BitVec)> {
    arb_width().prop_flat_map(|w| (bitvec_at(w), bitvec_at(w)))
}

fn modulus(width: u32) -> BigUint {
    BigUint::from(1u8) << width
}

fn uint(v: &BitVec) -> BigUint {
    v.to_biguint()
}

/// The width when the shift amount saturates, otherwise the amount itself.
fn effective_shift(amount: &BitVec) -> Option<usize> {
    let width = BigUint::from(amount.width());
    if uint(amount) >= width {
        None
    } else {
        Some(amount.to_u64().expect("small amount fits") as usize)
    }
}

proptest! {
    #[test]
    fn value_round_trips((v, _) in arb_pair()) {
        prop_assert_eq!(BitVec::from_biguint(&uint(&v), v.width()), v.clone());
        prop_assert_eq!(BitVec::from_bits(&v.to_bits()), v.clone());
        prop_assert_eq!(v.to_string().parse::<BitVec>().unwrap(), v.clone());
        // The signed and unsigned readings agree modulo 2^width.
        let m = BigInt::from(modulus(v.width()));
        let signed = ((v.to_bigint() % &m) + &m) % &m;
        prop_assert_eq!(signed.to_biguint().unwrap(), uint(&v));
    }

    #[test]
    fn add_matches_oracle((a, b) in arb_pair()) {
        let m = modulus(a.width());
        prop_assert_eq!(uint(&a.bvadd(&b).unwrap()), (uint(&a) + uint(&b)) % m);
    }

    #[test]
    fn sub_matches_oracle((a, b) in arb_pair()) {
        let m = modulus(a.width());
        let oracle = (uint(&a) + &m - uint(&b)) % &m;
        prop_assert_eq!(uint(&a.bvsub(&b).unwrap()), oracle);
    }

    #[test]
    fn neg_matches_oracle(a in arb_single()) {
        let m = modulus(a.width());
        prop_assert_eq!(uint(&a.bvneg()), (&m - uint(&a)) % &m);
        // And the defining identity: -a = 0 - a.
        let zero = BitVec::zeros(a.width());
        prop_assert_eq!(a.bvneg(), zero.bvsub(&a).unwrap());
    }

    #[test]
    fn mul_matches_oracle((a, b) in arb_pair()) {
        let m = modulus(a.width());
        prop_assert_eq!(uint(&a.bvmul(&b).unwrap()), (uint(&a) * uint(&b)) % m);
    }

    #[test]
    fn bitwise_matches_oracle((a, b) in arb_pair()) {
        prop_assert_eq!(uint(&a.bvand(&b).unwrap()), uint(&a) & uint(&b));
        prop_assert_eq!(uint(&a.bvor(&b).unwrap()), uint(&a) | uint(&b));
        let full = modulus(a.width()) - 1u8;
        prop_assert_eq!(uint(&a.bvnot()), full - uint(&a));
    }

    #[test]
    fn shl_matches_oracle((a, k) in arb_pair()) {
        let oracle = match effective_shift(&k) {
            None => BigUint::from(0u8),
            Some(shift) => (uint(&a) << shift) % modulus(a.width()),
        };
        prop_assert_eq!(uint(&a.bvshl(&k).unwrap()), oracle);
    }

    #[test]
    fn lshr_matches_oracle((a, k) in arb_pair()) {
        let oracle = match effective_shift(&k) {
            None => BigUint::from(0u8),
            Some(shift) => uint(&a) >> shift,
        };
        prop_assert_eq!(uint(&a.bvlshr(&k).unwrap()), oracle);
    }

    #[test]
    fn ashr_matches_oracle((a, k) in arb_pair()) {
        let m = BigInt::from(modulus(a.width()));
        let oracle = match effective_shift(&k) {
            // Saturation: all copies of the sign bit.
            None if a.msb() => modulus(a.width()) - 1u8,
            None => BigUint::from(0u8),
            // BigInt's shift right rounds toward negative infinity, which
            // is exactly the arithmetic-shift semantics.
            Some(shift) => (((a.to_bigint() >> shift) % &m + &m) % &m)
                .to_biguint()
                .unwrap(),
        };
        prop_assert_eq!(uint(&a.bvashr(&k).unwrap()), oracle);
    }

    // Meaningless under fault injection, which breaks this very agreement.
    #[cfg(not(feature = "fault-injection"))]
    #[test]
    fn iterative_shifts_agree_with_splice((a, k) in arb_pair()) {
        prop_assert_eq!(a.bvshl(&k).unwrap(), a.bvshl_iter(&k).unwrap());
        prop_assert_eq!(a.bvlshr(&k).unwrap(), a.bvlshr_iter(&k).unwrap());
        prop_assert_eq!(a.bvashr(&k).unwrap(), a.bvashr_iter(&k).unwrap());
    }

    #[test]
    fn unsigned_comparisons_match_integer_order((a, b) in arb_pair()) {
        let (ua, ub) = (uint(&a), uint(&b));
        prop_assert_eq!(a.bvult(&b).unwrap(), ua < ub);
        prop_assert_eq!(a.bvule(&b).unwrap(), ua <= ub);
        prop_assert_eq!(a.bvugt(&b).unwrap(), ua > ub);
        prop_assert_eq!(a.bvuge(&b).unwrap(), ua >= ub);
        prop_assert_eq!(a.bveq(&b).unwrap(), ua == ub);
    }

    #[test]
    fn signed_comparisons_match_integer_order((a, b) in arb_pair()) {
        let (sa, sb) = (a.to_bigint(), b.to_bigint());
        prop_assert_eq!(a.bvslt(&b).unwrap(), sa < sb);
        prop_assert_eq!(a.bvsle(&b).unwrap(), sa <= sb);
        prop_assert_eq!(a.bvsgt(&b).unwrap(), sa > sb);
        prop_assert_eq!(a.bvsge(&b).unwrap(), sa >= sb);
    }

    #[test]
    fn lexicographic_ule_is_the_unsigned_order((a, b) in arb_pair()) {
        prop_assert_eq!(a.ule_lex(&b).unwrap(), uint(&a) <= uint(&b));
        prop_assert_eq!(a.ule_lex(&b).unwrap(), a.bvule(&b).unwrap());
    }

    #[test]
    fn everything_is_below_the_all_ones_vector(a in arb_single()) {
        prop_assert!(a.bvule(&BitVec::ones(a.width())).unwrap());
    }

    #[test]
    fn shifting_preserves_all_ones_dominance((x, s) in arb_pair()) {
        let top = BitVec::ones(x.width()).bvshl(&s).unwrap();
        prop_assert!(x.bvshl(&s).unwrap().bvule(&top).unwrap());
    }

    #[test]
    fn signed_reading_is_in_range(a in arb_single()) {
        let half = BigInt::from(1) << (a.width() - 1);
        let v = a.to_bigint();
        prop_assert!(v >= -half.clone() && v < half);
        prop_assert_eq!(v < BigInt::from(0), a.msb());
    }

    #[test]
    fn mismatched_widths_always_error(a in arb_single(), b in arb_single()) {
        prop_assume!(a.width() != b.width());
        prop_assert!(a.bvadd(&b).is_err());
        prop_assert!(a.bvmul(&b).is_err());
        prop_assert!(a.bvshl(&b).is_err());
        prop_assert!(a.bvult(&b).is_err());
        prop_assert!(a.ule_lex(&b).is_err());
    }

    #[test]
    fn sub_is_add_of_negation((a, b) in arb_pair()) {
        prop_assert_eq!(a.bvsub(&b).unwrap(), a.bvadd(&b.bvneg()).unwrap());
    }
}
