mod common;

use edp_core::roth::{
    behrend_optimize, behrend_set, capset_power, count_k_aps, density_report, embed_digits, find_5term_solution,
    has_affine_line, parse_integer_set, predicted_deletion_size, random_deletion_ap3_free, read_integer_set,
    sphere_points, write_integer_set, CapSet, IntegerSet,
};
use proptest::prelude::*;

fn naive_k_aps(xs: &[u64], k: usize) -> u64 {
    let set: std::collections::HashSet<u64> = xs.iter().copied().collect();
    let mut count = 0;
    for (i, &a) in xs.iter().enumerate() {
        for &b in &xs[i + 1..] {
            let step = b - a;
            if (2..k as u64).all(|j| set.contains(&(a + j * step))) {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn behrend_density_tracks_the_exponential_root_law() {
    for n in [1_000u64, 10_000, 100_000, 1_000_000] {
        let (set, params) = behrend_optimize(n).unwrap();
        assert!(!common::naive_has_ap3(set.elements()), "n={n}");
        assert!(params.n <= n && set.elements().iter().all(|&x| x >= 1 && x <= n));
        let ratio = (1.0 / set.density()).ln() / (n as f64).ln().sqrt();
        assert!((1.5..=3.0).contains(&ratio), "n={n}: ratio {ratio}");
    }
}

#[test]
fn behrend_sets_are_the_largest_shell() {
    for (m, d) in [(2, 2), (3, 3), (4, 3), (3, 4)] {
        let (set, params) = behrend_set(m, d).unwrap();
        let best = (0..=d as u64 * m * m).map(|r2| sphere_points(m, d, r2).unwrap().len()).max().unwrap();
        assert_eq!(set.len(), best);
        assert_eq!(params.n, (2 * m).pow(d));
        assert_eq!(count_k_aps(&set, 3).unwrap(), 0);
    }
}

#[test]
fn deletion_size_and_freeness() {
    for n in [1_000u64, 50_000] {
        let sizes: Vec<f64> = (0..10)
            .map(|seed| {
                let s = random_deletion_ap3_free(n, seed).unwrap();
                assert!(!common::naive_has_ap3(s.elements()));
                s.len() as f64
            })
            .collect();
        let mean = sizes.iter().sum::<f64>() / sizes.len() as f64;
        let predicted = predicted_deletion_size(n);
        assert!(mean >= predicted && mean <= 2.0 * predicted, "n={n}: mean {mean}, predicted {predicted}");
    }
}

#[test]
fn capset_powers_against_brute_force() {
    let base = CapSet::new(2, &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
    for k in 1..=3 {
        let p = capset_power(&base, k).unwrap();
        assert_eq!(p.len(), 4usize.pow(k as u32));
        assert!(!naive_line(&p.points()));
        assert!(has_affine_line(&p).unwrap().is_none());
    }
}

fn naive_line(points: &[Vec<u8>]) -> bool {
    let n = points.len();
    (0..n).any(|i| {
        (i + 1..n).any(|j| {
            (j + 1..n).any(|k| points[i].iter().zip(&points[j]).zip(&points[k]).all(|((a, b), c)| (a + b + c) % 3 == 0))
        })
    })
}

#[test]
fn sphere_sets_have_no_five_term_solution() {
    for (m, d) in [(3, 3), (4, 3), (3, 4)] {
        let r2 = (0..=d as u64 * m * m).max_by_key(|&r2| sphere_points(m, d, r2).unwrap().len()).unwrap();
        let pts: Vec<u64> =
            sphere_points(m, d, r2).unwrap().iter().map(|p| embed_digits(p, 5 * m).unwrap()).collect();
        let n = (5 * m).pow(d);
        let set = IntegerSet::from_unsorted(pts, n).unwrap();
        assert!(find_5term_solution(&set).unwrap().is_none(), "m={m} d={d}");
    }
    let (xs, y) = find_5term_solution(&IntegerSet::interval(10)).unwrap().unwrap();
    assert_eq!(xs.iter().sum::<u64>(), 5 * y);
    let mut all: Vec<u64> = xs.to_vec();
    all.push(y);
    all.sort_unstable();
    all.dedup();
    assert_eq!(all.len(), 6);
    assert!(find_5term_solution(&IntegerSet::interval(65)).is_err());
}

#[test]
fn density_identity_on_constructions() {
    let (behrend, _) = behrend_optimize(100_000).unwrap();
    for set in [behrend, random_deletion_ap3_free(100_000, 1).unwrap(), IntegerSet::interval(1000)] {
        let report = density_report(&set);
        assert!(report.identity_holds);
        let direct: f64 = set.elements().iter().map(|&a| 1.0 / a as f64).sum();
        assert!((report.reciprocal_sum - direct).abs() < 1e-9);
        let &(last_n, last_d) = report.densities.last().unwrap();
        assert_eq!(last_n, set.ambient_n());
        assert!((last_d - set.density()).abs() < 1e-15);
    }
}

#[test]
fn set_files_round_trip() {
    let set = random_deletion_ap3_free(20_000, 5).unwrap();
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("deletion.txt");
    write_integer_set(&path, &set).unwrap();
    assert_eq!(read_integer_set(&path).unwrap(), set);
    assert!(parse_integer_set("# ambient 5\n1\n7\n").is_err());
}

proptest! {
    #[test]
    fn ap_counts_match_naive(raw in prop::collection::btree_set(1u64..300, 0..60), k in 3usize..6) {
        let xs: Vec<u64> = raw.into_iter().collect();
        let set = IntegerSet::new(xs.clone(), 300).unwrap();
        let count = count_k_aps(&set, k).unwrap();
        prop_assert_eq!(count, naive_k_aps(&xs, k));
        if k == 3 {
            prop_assert_eq!(count == 0, edp_core::roth::is_ap3_free(&set));
            prop_assert_eq!(count == 0, !common::naive_has_ap3(&xs));
        }
    }

    #[test]
    fn affine_lines_match_naive(raw in prop::collection::btree_set(0u8..81, 0..25)) {
        let points: Vec<Vec<u8>> = raw.iter().map(|&v| vec![v % 3, v / 3 % 3, v / 9 % 3, v / 27]).collect();
        let set = CapSet::new(4, &points).unwrap();
        prop_assert_eq!(has_affine_line(&set).unwrap().is_some(), naive_line(&points));
    }
}
