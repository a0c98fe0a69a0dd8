mod common;

use std::time::Duration;

use edp_core::constructions::is_completely_multiplicative;
use edp_core::search::{
    count_sequences, longest_multiplicative_with_discrepancy, longest_with_discrepancy, modular_avoiding_length,
    modular_min_horizon, prove_no_extension, Checkpoint, Options, SearchConfig, SearchState, ValueOrder,
    DEFAULT_NODE_CAP,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn reference_options(prefix: &[i8], bound: u64, multiplicative: bool) -> Options {
    let n = prefix.len() + 1;
    let implied = if multiplicative && n > 1 {
        (2..n).find(|p| n % p == 0).map(|p| prefix[p - 1] * prefix[n / p - 1])
    } else if multiplicative {
        Some(1)
    } else {
        None
    };
    let ok: Vec<i8> = [1i8, -1]
        .into_iter()
        .filter(|&x| implied.is_none_or(|v| v == x))
        .filter(|&x| {
            let mut ext = prefix.to_vec();
            ext.push(x);
            common::naive_discrepancy(&ext) <= bound
        })
        .collect();
    match ok.as_slice() {
        [_, _] => Options::Free,
        [x] => Options::Forced(*x),
        _ => Options::Dead,
    }
}

fn propagation_agrees(multiplicative: bool, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = 0;
    while states < 5_000 {
        let bound = rng.random_range(1..=3u32);
        let mut st = SearchState::new(bound, multiplicative);
        loop {
            let got = st.options();
            assert_eq!(got, reference_options(st.sequence(), bound as u64, multiplicative), "prefix {:?}", st.sequence());
            states += 1;
            let x = match got {
                Options::Dead => break,
                Options::Forced(x) => x,
                Options::Free => {
                    if rng.random() {
                        1
                    } else {
                        -1
                    }
                }
            };
            st.push(x);
            if st.len() >= 150 {
                break;
            }
            if rng.random_range(0..20) == 0 && !st.is_empty() {
                st.pop();
            }
        }
    }
    states
}

#[test]
fn forced_sign_propagation_matches_reference() {
    assert!(propagation_agrees(false, 1) >= 5_000);
    assert!(propagation_agrees(true, 2) >= 5_000);
}

#[test]
fn counts_match_exhaustive_enumeration() {
    for c in 1..=2u32 {
        for len in 1..=12 {
            assert_eq!(count_sequences(c, len, DEFAULT_NODE_CAP).unwrap(), common::exhaustive_count(c as u64, len));
        }
    }
    assert_eq!(count_sequences(1, 11, DEFAULT_NODE_CAP).unwrap(), common::goldens().count_sequences_c1_len11);
    assert!(prove_no_extension(1, 12, DEFAULT_NODE_CAP).unwrap());
    assert!(!prove_no_extension(1, 11, DEFAULT_NODE_CAP).unwrap());
}

#[test]
fn multiplicative_goldens() {
    let g = common::goldens();
    for (c, expected) in [(1, g.longest_multiplicative_c1), (2, g.longest_multiplicative_c2)] {
        let res = longest_multiplicative_with_discrepancy(&SearchConfig { multiplicative_only: true, ..SearchConfig::new(c) }).unwrap();
        assert!(res.exhausted);
        assert_eq!(res.best_length, expected);
        assert!(is_completely_multiplicative(&res.best_sequence).unwrap());
        assert!(common::naive_discrepancy(res.best_sequence.as_slice()) <= c as u64);
    }
}

#[test]
fn every_value_order_finds_the_record_length() {
    for order in [ValueOrder::Balanced, ValueOrder::PlusFirst, ValueOrder::MinusFirst, ValueOrder::Seeded] {
        let res = longest_with_discrepancy(&SearchConfig { value_order: order, seed: 9, ..SearchConfig::new(1) }).unwrap();
        assert_eq!(res.best_length, common::goldens().longest_c1);
        assert!(res.exhausted);
    }
}

#[test]
fn checkpoint_file_resume() {
    let config = SearchConfig {
        value_order: ValueOrder::Seeded,
        seed: 4,
        max_length: Some(300),
        time_budget: Duration::from_secs(30),
        ..SearchConfig::new(2)
    };
    let direct = longest_with_discrepancy(&config).unwrap();

    let partial = longest_with_discrepancy(&SearchConfig { node_budget: Some(2_000), ..config.clone() }).unwrap();
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("search_checkpoint.json");
    partial.checkpoint.as_ref().unwrap().save(&path).unwrap();
    let loaded = Checkpoint::load(&path).unwrap();
    assert_eq!(&loaded, partial.checkpoint.as_ref().unwrap());

    let resumed = longest_with_discrepancy(&SearchConfig { resume: Some(loaded.clone()), ..config.clone() }).unwrap();
    assert_eq!(resumed.best_sequence, direct.best_sequence);
    assert_eq!(resumed.nodes_visited, direct.nodes_visited);

    let wrong = SearchConfig { resume: Some(loaded), seed: 5, ..config };
    assert!(longest_with_discrepancy(&wrong).is_err());
}

/// Whether some sequence over `1..p` of length `n` never hits residue `r`
/// with a HAP partial sum.
fn brute_avoids(p: u64, r: u64, n: usize) -> bool {
    let total = (p - 1).pow(n as u32);
    (0..total).any(|mut code| {
        let x: Vec<u64> = (0..n)
            .map(|_| {
                let v = code % (p - 1) + 1;
                code /= p - 1;
                v
            })
            .collect();
        (1..=n).all(|d| {
            let mut s = 0;
            (1..=n / d).all(|m| {
                s = (s + x[m * d - 1]) % p;
                s != r
            })
        })
    })
}

#[test]
fn modular_results_match_brute_force() {
    let mut golden = None;
    for n in 1..=12 {
        if (0..3).all(|r| !brute_avoids(3, r, n)) {
            golden = Some(n);
            break;
        }
    }
    assert_eq!(golden, Some(common::goldens().modular_min_horizon_p3_nmax20));
    assert_eq!(modular_min_horizon(3, 20, DEFAULT_NODE_CAP).unwrap(), golden);

    for r in 0..5u32 {
        let longest = modular_avoiding_length(5, r, 7, DEFAULT_NODE_CAP).unwrap();
        for n in 1..=7 {
            assert_eq!(brute_avoids(5, r as u64, n), n <= longest, "p=5 r={r} n={n}");
        }
    }
}
