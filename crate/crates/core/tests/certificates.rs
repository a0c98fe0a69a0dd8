mod common;

use edp_core::certificates::{
    load_certificate, minimize_vector_discrepancy, parse_certificate, quadratic_form_matrix, save_certificate,
    search_diagonal_representation, search_quadratic_certificate, verify_diagonal_representation,
    verify_quadratic_certificate, Certificate, HapFamily, HapMatrixCertificate, HapMatrixTerm, LpConfig,
    QuadraticCertificate, SdpConfig, VectorOptConfig,
};
use edp_core::seq::{all_haps, vector_discrepancy};
use edp_core::{Error, Hap};
use proptest::prelude::*;

fn hap_sum(x: &[f64], h: Hap) -> f64 {
    (1..=h.m).map(|j| x[j * h.d - 1]).sum()
}

/// Squared discrepancy of every sign pattern is at least the certified value.
fn holds_for_all_signs(n: usize, certified_c: f64) -> bool {
    (0..1u64 << n).all(|mask| {
        let x = common::signs_from_mask(mask, n);
        let d = common::naive_discrepancy(&x) as f64;
        d * d >= certified_c
    })
}

#[test]
fn certified_values_hold_against_every_sign_pattern() {
    for n in 1..=11 {
        let sdp = search_quadratic_certificate::<f64>(n, &SdpConfig::default()).unwrap();
        let q = verify_quadratic_certificate(&sdp.certificate).unwrap();
        assert!(holds_for_all_signs(n, q.certified_c), "quadratic N={n}");
        let lp = search_diagonal_representation::<f64>(n, &HapFamily::AllPairs, &LpConfig::default()).unwrap();
        let d = verify_diagonal_representation(&lp.certificate).unwrap();
        assert!(holds_for_all_signs(n, d.certified_c), "diagonal N={n}");
        assert!((q.bound - 1.0).abs() < 1e-6 && (d.bound - 1.0).abs() < 1e-6, "N={n}: {} {}", q.bound, d.bound);
    }
}

#[test]
fn lp_optimum_is_monotone_in_n() {
    let mut prev = 0.0;
    for n in 1..=16 {
        let lp = search_diagonal_representation::<f64>(n, &HapFamily::AllPairs, &LpConfig::default()).unwrap();
        assert!(lp.trace >= prev - 1e-9, "N={n}: {} < {prev}", lp.trace);
        prev = lp.trace;
    }
}

#[test]
fn restricted_families_certify_no_more() {
    for n in 2..=8 {
        let full = search_diagonal_representation::<f64>(n, &HapFamily::AllPairs, &LpConfig::default()).unwrap();
        let diag = search_diagonal_representation::<f64>(n, &HapFamily::Diagonal, &LpConfig::default()).unwrap();
        assert!(diag.trace <= full.trace + 1e-9);
        verify_diagonal_representation(&diag.certificate).unwrap();
    }
}

#[test]
fn size_guard_is_inconclusive() {
    let config = LpConfig { max_full_family_n: 5, ..LpConfig::default() };
    let err = search_diagonal_representation::<f64>(6, &HapFamily::AllPairs, &config).unwrap_err();
    assert!(matches!(err, Error::Inconclusive(_)));
}

#[test]
fn tampered_certificates_are_rejected() {
    let mut q = search_quadratic_certificate::<f64>(6, &SdpConfig::default()).unwrap().certificate;
    q.weights[2] += 0.5;
    match verify_quadratic_certificate(&q) {
        Err(Error::Rejected(r)) => {
            assert_eq!(r.constraint, "psd");
            assert_eq!(r.witness.unwrap().len(), 6);
        }
        other => panic!("expected a psd rejection, got {other:?}"),
    }
    q.weights[2] -= 0.5;
    q.coeffs[0].1 += 0.1;
    assert!(matches!(verify_quadratic_certificate(&q), Err(Error::Rejected(r)) if r.constraint == "simplex"));

    let mut d = search_diagonal_representation::<f64>(6, &HapFamily::AllPairs, &LpConfig::default()).unwrap().certificate;
    for t in &mut d.terms {
        t.lambda *= 2.0;
    }
    assert!(matches!(verify_diagonal_representation(&d), Err(Error::Rejected(r)) if r.constraint == "convex-hull"));
    for t in &mut d.terms {
        t.lambda *= 0.45;
    }
    d.terms.push(HapMatrixTerm { p: Hap::new(1, 2).unwrap(), q: Hap::new(2, 1).unwrap(), lambda: 0.05 });
    match verify_diagonal_representation(&d) {
        Err(Error::Rejected(r)) => {
            assert_eq!(r.constraint, "offdiagonal");
            assert_eq!(r.witness.unwrap().len(), 3);
        }
        other => panic!("expected an off-diagonal rejection, got {other:?}"),
    }
}

#[test]
fn hand_written_certificates() {
    let one = Hap::new(1, 1).unwrap();
    let q = QuadraticCertificate { n: 1, coeffs: vec![(one, 1.0)], weights: vec![1.0], psd_tolerance: 0.0 };
    assert_eq!(verify_quadratic_certificate(&q).unwrap().bound, 1.0);

    let d = HapMatrixCertificate {
        n: 2,
        terms: vec![HapMatrixTerm { p: Hap::new(2, 1).unwrap(), q: Hap::new(2, 1).unwrap(), lambda: 1.0 }],
        offdiag_tolerance: 0.0,
    };
    assert_eq!(verify_diagonal_representation(&d).unwrap().bound, 1.0);

    let outside = HapMatrixCertificate {
        n: 2,
        terms: vec![HapMatrixTerm { p: Hap::new(3, 1).unwrap(), q: Hap::new(3, 1).unwrap(), lambda: 1.0 }],
        offdiag_tolerance: 0.0,
    };
    assert!(verify_diagonal_representation(&outside).is_err());
}

#[test]
fn files_round_trip() {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let q = Certificate::Quadratic(search_quadratic_certificate::<f64>(7, &SdpConfig::default()).unwrap().certificate);
    let d = Certificate::Diagonal(
        search_diagonal_representation::<f64>(7, &HapFamily::AllPairs, &LpConfig::default()).unwrap().certificate,
    );
    for (name, cert) in [("q.json", q), ("d.json", d)] {
        let path = dir.join(name);
        save_certificate(&path, &cert).unwrap();
        let back = load_certificate(&path).unwrap();
        assert_eq!(back.n(), 7);
        assert_eq!(back.verify().unwrap().bound, cert.verify().unwrap().bound);
        assert_eq!(parse_certificate(&cert.to_json().unwrap()).unwrap().verify().unwrap(), cert.verify().unwrap());
    }
    assert!(parse_certificate("{\"kind\":\"spectral\",\"n\":3}").is_err());
}

#[test]
fn single_precision_sdp() {
    let out = search_quadratic_certificate::<f32>(6, &SdpConfig { psd_tolerance: 1e-4, ..SdpConfig::default() }).unwrap();
    let bound = verify_quadratic_certificate(&out.certificate).unwrap().bound;
    assert!(bound > 0.99 && bound <= 1.0 + 1e-4, "f32 bound {bound}");
}

#[test]
fn vector_optimizer_upper_bounds() {
    for n in [3, 7, 10] {
        let (vs, value) = minimize_vector_discrepancy::<f64>(n, 1, &VectorOptConfig { seed: 3, ..Default::default() }).unwrap();
        assert_eq!(vector_discrepancy(&vs).unwrap(), value);
        assert!(value >= common::exhaustive_min_discrepancy(n) as f64 - 1e-12);
        let (_, wide) = minimize_vector_discrepancy::<f64>(n, n, &VectorOptConfig::default()).unwrap();
        assert!(wide <= 1.0 + 1e-6, "N={n} dim={n}: {wide}");
    }
}

proptest! {
    #[test]
    fn quadratic_form_expands_to_hap_sums(
        n in 1usize..14,
        seed_c in prop::collection::vec(0.0f64..1.0, 60),
        seed_b in prop::collection::vec(-1.0f64..1.0, 14),
        x in prop::collection::vec(-2.0f64..2.0, 14),
    ) {
        let haps = all_haps(n);
        let coeffs: Vec<(Hap, f64)> = haps.iter().zip(seed_c.iter().cycle()).map(|(&h, &c)| (h, c)).collect();
        let weights = seed_b[..n].to_vec();
        let x = &x[..n];
        let m = quadratic_form_matrix(n, &coeffs, &weights);
        let mut xmx = 0.0;
        for i in 0..n {
            for j in 0..n {
                xmx += x[i] * m[(i, j)] * x[j];
            }
        }
        let direct: f64 = coeffs.iter().map(|&(h, c)| c * hap_sum(x, h).powi(2)).sum::<f64>()
            - weights.iter().zip(x).map(|(b, v)| b * v * v).sum::<f64>();
        prop_assert!((xmx - direct).abs() < 1e-9 * (1.0 + direct.abs()));
    }
}
