//! Closed-form counts against the enumeration oracles.

use wdfa::census::{count_all_m, count_wdfa, count_wdfa_noneffective, BigCount};
use wdfa::oracle::{enumerate_direct, enumerate_via_r};

#[test]
fn count_matches_decoded_family() {
    for n in 2..=5u64 {
        for sigma in 1..=3.min(n - 1) {
            for m in (n - 1)..=n * sigma {
                let family = enumerate_via_r(n, m, sigma).unwrap();
                assert_eq!(BigCount::from(family.len()), count_wdfa(n, m, sigma).unwrap(), "n={n} m={m} sigma={sigma}");
            }
        }
    }
}

#[test]
fn count_matches_direct_enumeration() {
    for n in 2..=4u64 {
        for sigma in 1..=2.min(n - 1) {
            for m in (n - 1)..=6.min(n * sigma) {
                let family = enumerate_direct(n, m, sigma).unwrap();
                assert_eq!(BigCount::from(family.len()), count_wdfa(n, m, sigma).unwrap(), "n={n} m={m} sigma={sigma}");
            }
        }
    }
}

#[test]
fn all_m_sums_enumerations() {
    for (n, sigma) in [(3u64, 2u64), (4, 2), (4, 3), (5, 2)] {
        let total: usize = ((n - 1)..=n * sigma).map(|m| enumerate_via_r(n, m, sigma).unwrap().len()).sum();
        assert_eq!(BigCount::from(total), count_all_m(n, sigma).unwrap());
    }
}

#[test]
fn noneffective_counts_label_subsets() {
    // Choose which labels appear, then a Wheeler DFA over exactly those.
    for (n, m, sigma) in [(4u64, 4u64, 2u64), (4, 5, 3), (5, 6, 3), (5, 4, 4)] {
        let mut expected = 0usize;
        for used in 1u64..(1 << sigma) {
            let k = used.count_ones() as u64;
            if k < n && m <= n * k {
                expected += enumerate_via_r(n, m, k).unwrap().len();
            }
        }
        assert_eq!(BigCount::from(expected), count_wdfa_noneffective(n, m, sigma).unwrap(), "n={n} m={m} sigma={sigma}");
    }
}
