//! Checks over the shipped data files.

use std::path::PathBuf;

use ecparity::arith::{mod_u64, primes_up_to};
use ecparity::io::{parse_corpus, parse_jobs, Corpus, Sidecar};
use ecparity::local_reduction::{conductor, local_minimal_model};
use ecparity::weierstrass::{trace_at_bad, trace_of_frobenius};
use ecparity::EllipticCurve;
use num_bigint::BigInt;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn corpus() -> Corpus {
    parse_corpus(data("corpus.csv")).unwrap()
}

/// Points on the reduction mod `ell`, found by trying every affine pair.
fn brute_force_count(e: &EllipticCurve, ell: u64) -> u64 {
    let a: Vec<u64> = e.coefficients().iter().map(|c| mod_u64(c, ell)).collect();
    let mut n = 1;
    for x in 0..ell {
        let rhs = (x * x % ell * x + a[1] * x % ell * x + a[3] * x + a[4]) % ell;
        for y in 0..ell {
            let lhs = (y * y + a[0] * x % ell * y + a[2] * y) % ell;
            n += (lhs == rhs) as u64;
        }
    }
    n
}

fn label_conductor(label: &str) -> BigInt {
    let digits: String = label.chars().take_while(char::is_ascii_digit).collect();
    digits.parse().unwrap()
}

#[test]
fn conductors_match_labels() {
    for r in corpus().records() {
        assert_eq!(
            conductor(&r.curve).unwrap(),
            label_conductor(&r.label),
            "{}",
            r.label
        );
    }
}

#[test]
fn traces_match_brute_force() {
    for r in corpus().records() {
        let bad = r.curve.discriminant_primes().unwrap();
        let n = label_conductor(&r.label);
        for ell in primes_up_to(100) {
            if bad.contains(&ell) && mod_u64(&n, ell) == 0 {
                continue;
            }
            // A good prime of a non-minimal model: count on the minimal one.
            let (m, _) = local_minimal_model(&r.curve, ell).unwrap();
            let expected = ell as i64 + 1 - brute_force_count(&m, ell) as i64;
            assert_eq!(
                trace_of_frobenius(&r.curve, ell).unwrap(),
                expected,
                "{} at {ell}",
                r.label
            );
        }
    }
}

/// `a = 1, -1, 0` at split, non-split and additive primes, counting the
/// singular point of the reduced minimal model.
#[test]
fn bad_traces_match_brute_force() {
    for r in corpus().records() {
        for ell in r.curve.discriminant_primes().unwrap() {
            let (m, red) = local_minimal_model(&r.curve, ell).unwrap();
            if red.f_v == 0 {
                continue;
            }
            let count = brute_force_count(&m, ell) as i64;
            assert_eq!(
                trace_at_bad(&red).unwrap(),
                ell as i64 + 1 - count,
                "{} at {ell}",
                r.label
            );
        }
    }
}

#[test]
fn jobs_and_sidecar_refer_to_corpus() {
    let corpus = corpus();
    let text = std::fs::read_to_string(data("jobs.txt")).unwrap();
    let jobs = parse_jobs(&text, "jobs.txt").unwrap();
    assert!(jobs.len() >= 90);
    for j in &jobs {
        corpus.get(&j.labels.0).unwrap();
        corpus.get(&j.labels.1).unwrap();
    }
    let sidecar = Sidecar::load(data("sidecar.json")).unwrap();
    let ranks: Vec<_> = sidecar.ranks().collect();
    assert!(ranks.len() >= 20);
    for r in ranks {
        corpus.get(&r.label).unwrap();
    }
}
