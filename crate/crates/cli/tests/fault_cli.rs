//! Runs only with `--features fault-injection`: the corrupted iterative
//! left shift must be caught by the self-check campaign, end to end.

#![cfg(feature = "fault-injection")]

use std::process::Command;

#[test]
fn check_core_catches_the_injected_shift_fault() {
    let output = Command::new(env!("CARGO_BIN_EXE_bvic"))
        .args([
            "check-core",
            "--max-width",
            "4",
            "--rand-widths",
            "64",
            "--rand-cases",
            "100",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let text = String::from_utf8(output.stdout).unwrap();
    // The corrupted route ignores the low bit of the shift amount; the
    // exhaustive tier reports the earliest divergence with the concrete
    // operands.
    assert!(text.contains("[FAIL] shl-dual"), "{text}");
    assert!(text.contains("width 1: a=#b1 k=#b1"), "{text}");
    assert!(text.contains("[PASS] lshr-dual"), "{text}");
    assert!(text.contains("[PASS] ashr-dual"), "{text}");
    assert!(text.contains("core checks FAILED"), "{text}");
}
