//! Larger truncation orders. Run with `cargo test --release -- --ignored`.

use qcong_core::congruence::mod8::{mod8_cases, mod8_route};
use qcong_core::congruence::{claim_catalog, verify_claim};
use qcong_core::identities::check_all;

#[test]
#[ignore = "slow: N = 5000"]
fn catalog_at_5000() {
    for c in claim_catalog() {
        let r = verify_claim(&c, 5000).unwrap();
        assert!(r.holds, "{c}: {:?}", r.first_counterexample);
    }
}

#[test]
#[ignore = "slow: N = 5000"]
fn mod8_route_at_5000() {
    for (c, a, targets) in mod8_cases() {
        assert!(mod8_route(c, a, &targets, 5000).unwrap().holds());
    }
}

#[test]
#[ignore = "slow: N = 1500"]
fn identities_at_1500() {
    for r in check_all(1500).unwrap() {
        assert!(r.holds, "{r:?}");
    }
}
