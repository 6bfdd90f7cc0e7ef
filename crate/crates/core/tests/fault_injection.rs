//! Runs only with `--features fault-injection`, which deliberately corrupts
//! the iterative left shift. These tests pin down that the corruption is
//! observable, i.e. that the dual-route comparison has real teeth.

#![cfg(feature = "fault-injection")]

use bvic_core::BitVec;

#[test]
fn iterative_shl_diverges_from_splice_under_injection() {
    // The injected fault drops the low bit of the shift amount, so an odd
    // amount is off by one position.
    let a = BitVec::from_u64(0b0011, 4);
    let k = BitVec::from_u64(1, 4);
    assert_eq!(a.bvshl(&k).unwrap(), BitVec::from_u64(0b0110, 4));
    assert_eq!(a.bvshl_iter(&k).unwrap(), a.clone());
    assert_ne!(a.bvshl(&k).unwrap(), a.bvshl_iter(&k).unwrap());
}

#[test]
fn even_amounts_and_other_routes_are_untouched() {
    let a = BitVec::from_u64(0b0011, 4);
    let two = BitVec::from_u64(2, 4);
    assert_eq!(a.bvshl_iter(&two).unwrap(), a.bvshl(&two).unwrap());
    let k = BitVec::from_u64(1, 4);
    assert_eq!(a.bvlshr_iter(&k).unwrap(), a.bvlshr(&k).unwrap());
    assert_eq!(a.bvashr_iter(&k).unwrap(), a.bvashr(&k).unwrap());
}
