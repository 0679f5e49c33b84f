//! End-to-end acceptance checks, one line per criterion.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use ecparity::arith::mod_u64;
use ecparity::io::{parse_corpus, parse_jobs, Corpus, Sidecar, VerificationJob};
use ecparity::parity::{SelmerInput, Verdict};
use ecparity::report::{run_batch, run_job, AnalysisOptions, BatchItem, ParityReport};
use ecparity::root_numbers::global_root_number;
use ecparity::weierstrass::{count_points_mod, PointCountConfig};
use ecparity::{selftest, BaseField, EllipticCurve, LocalCache, ReductionClass};
use serde_json::Value;

type Check = Result<String, String>;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn data(name: &str) -> PathBuf {
    root().join("data").join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

fn ecparity(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ecparity"));
    cmd.current_dir(root())
        .env_remove("ECPARITY_CACHE")
        .args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(
        elapsed < Duration::from_secs(limit_s),
        format!("took {elapsed:.2?}, limit {limit_s} s"),
    )
}

fn place<'a>(r: &'a Value, name: &str) -> Result<&'a Value, String> {
    r["places"]
        .as_array()
        .and_then(|ps| ps.iter().find(|p| p["place"] == name))
        .ok_or(format!("no place {name}"))
}

fn classes(row: &Value) -> (String, String) {
    let c = |i: usize| row["curves"][i]["class"].as_str().unwrap_or("").to_string();
    (c(0), c(1))
}

fn set(r: &Value, key: &str) -> Vec<String> {
    r["sets"][key]
        .as_array()
        .map(|a| {
            a.iter()
                .filter_map(|x| x.as_str().map(String::from))
                .collect()
        })
        .unwrap_or_default()
}

fn compare_golden(args: &[&str], fixture: &str) -> Result<(Value, Duration), String> {
    let start = Instant::now();
    let out = ecparity(args, &[]);
    let elapsed = start.elapsed();
    ensure(
        out.status.success(),
        format!(
            "exit {:?}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ),
    )?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    ensure(
        text == golden(fixture),
        format!("output differs from {fixture}"),
    )?;
    let r = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    Ok((r, elapsed))
}

fn criterion_1() -> Check {
    let (r, t) = compare_golden(
        &["compare", "11a1", "121c1", "--field", "Q", "--p", "3"],
        "11a1_121c1_Q_3.json",
    )?;
    let v11 = place(&r, "11")?;
    ensure(
        classes(v11) == ("split_multiplicative".into(), "additive".into()),
        "classes at 11",
    )?;
    ensure(
        r["congruence"]["status"] == "consistent_up_to_bound",
        "congruence status",
    )?;
    ensure(set(&r, "sigma0") == ["11"], "sigma0")?;
    ensure(set(&r, "s1") == ["11"], "S1")?;
    ensure(set(&r, "s2").is_empty(), "S2")?;
    ensure(set(&r, "t") == ["11"], "T")?;
    let s = &r["selmer_parity"];
    ensure(s["verdict"] == "holds", "selmer verdict")?;
    ensure(
        s["lhs_mod_2"] == 1 && s["rhs_mod_2"] == 1,
        "0 + 1 = 0 + 0 + 1",
    )?;
    within(t, 5)?;
    Ok(format!("golden match, {t:.2?}"))
}

fn criterion_2() -> Check {
    let (r, t) = compare_golden(
        &["compare", "4400m2", "48400ch1", "--field", "Q", "--p", "3"],
        "4400m2_48400ch1_Q_3.json",
    )?;
    ensure(
        classes(place(&r, "11")?) == ("nonsplit_multiplicative".into(), "additive".into()),
        "classes at 11",
    )?;
    for v in ["2", "5"] {
        ensure(
            classes(place(&r, v)?) == ("additive".into(), "additive".into()),
            format!("classes at {v}"),
        )?;
    }
    ensure(set(&r, "t") == ["11"], "T")?;
    ensure(r["selmer_parity"]["verdict"] == "holds", "selmer verdict")?;
    let g = &r["global_root_ratio"];
    ensure(
        g["expected"] == -1 && g["local_product"] == -1,
        "root number ratio",
    )?;
    within(t, 10)?;
    Ok(format!("golden match, ratio -1, {t:.2?}"))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let s = selftest::check_case_table().map_err(|e| e.to_string())?;
    let t = start.elapsed();
    ensure(
        s.passed(),
        format!(
            "{} failing cases: {:?}",
            s.failures.len(),
            s.failures.first()
        ),
    )?;
    ensure(s.determined > 0, "no determined cases")?;
    within(t, 1)?;
    Ok(format!(
        "{} cases, {} determined, {} inadmissible, {t:.2?}",
        s.cases, s.determined, s.inadmissible
    ))
}

struct Batch {
    corpus: Corpus,
    reports: Vec<ParityReport>,
}

fn batch() -> Batch {
    let corpus = parse_corpus(data("corpus.csv")).unwrap();
    let sidecar = Sidecar::load(data("sidecar.json")).unwrap();
    let text = std::fs::read_to_string(data("jobs.txt")).unwrap();
    let jobs = parse_jobs(&text, "jobs.txt").unwrap();
    let b = run_batch(
        &jobs,
        &corpus,
        &sidecar,
        AnalysisOptions::default(),
        &LocalCache::in_memory(),
    );
    let reports = b
        .results
        .into_iter()
        .filter_map(|i| match i {
            BatchItem::Report(r) => Some(*r),
            BatchItem::Error { .. } => None,
        })
        .collect();
    Batch { corpus, reports }
}

fn criterion_4(b: &Batch) -> Check {
    let consistent: Vec<_> = b
        .reports
        .iter()
        .filter(|r| {
            r.p == 5 && r.congruence.is_consistent() && r.curves[0].label != r.curves[1].label
        })
        .collect();
    ensure(
        consistent.len() >= 50,
        format!("only {} consistent pairs at p = 5", consistent.len()),
    )?;
    let mut violations = Vec::new();
    for r in &consistent {
        for row in &r.places {
            let (a, b) = (row.curves[0].class, row.curves[1].class);
            let bad = |x: ReductionClass, y: ReductionClass| {
                y == ReductionClass::Additive
                    && (x == ReductionClass::Good || x.is_multiplicative())
            };
            if bad(a, b) || bad(b, a) {
                violations.push(format!("{} at {}", r.pair, row.place.name()));
            }
        }
        if !r.internal_checks.impossible_pairs.is_empty() {
            violations.push(format!(
                "{} flagged {:?}",
                r.pair, r.internal_checks.impossible_pairs
            ));
        }
    }
    ensure(violations.is_empty(), violations.join("; "))?;
    Ok(format!(
        "{} distinct consistent pairs, no impossible pairs",
        consistent.len()
    ))
}

fn euler_symbol(a: u64, ell: u64) -> i64 {
    let mut r = 1u128;
    let (mut b, mut e, m) = (a as u128 % ell as u128, (ell - 1) / 2, ell as u128);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// `-sum chi(f(x))` for a model `y^2 = f(x)` over F_ell.
fn character_sum(f: impl Fn(u64) -> u64, ell: u64) -> i64 {
    -(0..ell).map(|x| euler_symbol(f(x) % ell, ell)).sum::<i64>()
}

fn legendre_trace(e: &EllipticCurve, ell: u64) -> i64 {
    let inv = e.invariants();
    if ell >= 5 {
        // y^2 = x^3 - 27 c4 x - 54 c6
        let a = (ell - 27 % ell) * mod_u64(&inv.c4, ell) % ell;
        let b = (ell - 54 % ell) * mod_u64(&inv.c6, ell) % ell;
        character_sum(|x| (x * x % ell * x + a * x + b) % ell, ell)
    } else {
        // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
        let c = e.coefficients();
        let r = |n| mod_u64(n, ell);
        let (a1, a2, a3, a4, a6) = (r(&c[0]), r(&c[1]), r(&c[2]), r(&c[3]), r(&c[4]));
        let b2 = (a1 * a1 + 4 * a2) % ell;
        let b4 = (2 * a4 + a1 * a3) % ell;
        let b6 = (a3 * a3 + 4 * a6) % ell;
        character_sum(
            |x| 4 * x * x % ell * x + b2 * x % ell * x + 2 * b4 * x + b6,
            ell,
        )
    }
}

fn label_conductor(label: &str) -> u64 {
    label
        .chars()
        .take_while(char::is_ascii_digit)
        .collect::<String>()
        .parse()
        .unwrap()
}

fn criterion_5(b: &Batch) -> Check {
    let start = Instant::now();
    let mut checked = 0;
    let curves: Vec<_> = b.corpus.records().iter().take(10).collect();
    for rec in &curves {
        let n = label_conductor(&rec.label);
        for ell in ecparity::arith::primes_up_to(100)
            .into_iter()
            .filter(|&l| l > 2 && !n.is_multiple_of(l))
        {
            let a = count_points_mod(&rec.curve, ell, PointCountConfig::default())
                .map_err(|e| e.to_string())?
                .trace;
            let expected = if mod_u64(&rec.curve.discriminant(), ell) == 0 {
                // Non-minimal at ell: compare on the model the library reduces to.
                let (m, _) = ecparity::local_reduction::local_minimal_model(&rec.curve, ell)
                    .map_err(|e| e.to_string())?;
                legendre_trace(&m, ell)
            } else {
                legendre_trace(&rec.curve, ell)
            };
            ensure(
                a == expected,
                format!("{} at {ell}: {a} vs {expected}", rec.label),
            )?;
            checked += 1;
        }
    }
    let t = start.elapsed();
    within(t, 5)?;
    Ok(format!(
        "{} curves, {checked} traces, {t:.2?}",
        curves.len()
    ))
}

/// Points on the reduction of the given model, including the singular point.
fn brute_force_count(e: &EllipticCurve, ell: u64) -> u64 {
    let a: Vec<u64> = e.coefficients().iter().map(|c| mod_u64(c, ell)).collect();
    let mut n = 1;
    for x in 0..ell {
        let rhs = (x * x % ell * x + a[1] * x % ell * x + a[3] * x + a[4]) % ell;
        for y in 0..ell {
            n += ((y * y + a[0] * x % ell * y + a[2] * y) % ell == rhs) as u64;
        }
    }
    n
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Over Q a semistable curve has `w = -prod_{l | N} (-a_l)`, with `a_l = +-1`
/// counted on the (globally minimal) corpus model.
fn criterion_6(b: &Batch) -> Check {
    let sidecar = Sidecar::load(data("sidecar.json")).map_err(|e| e.to_string())?;
    let cache = LocalCache::in_memory();
    let mut checked = Vec::new();
    for rank in sidecar.ranks() {
        let n = label_conductor(&rank.label);
        let primes = prime_factors(n);
        if primes.iter().product::<u64>() != n {
            continue;
        }
        let e = b.corpus.get(&rank.label).map_err(|e| e.to_string())?;
        let mut w = -1i64;
        for &ell in &primes {
            let a = ell as i64 + 1 - brute_force_count(e, ell) as i64;
            ensure(
                a.abs() == 1,
                format!("{} not multiplicative at {ell}", rank.label),
            )?;
            w *= -a;
        }
        let lib = global_root_number(e, BaseField::Rationals, &cache).map_err(|e| e.to_string())?;
        ensure(
            lib.root_number.value == Some(w as i8),
            format!(
                "{}: library {:?}, closed form {w}",
                rank.label, lib.root_number.value
            ),
        )?;
        let parity = if rank.analytic_rank % 2 == 0 { 1 } else { -1 };
        ensure(
            parity == w,
            format!("{}: rank {} but w = {w}", rank.label, rank.analytic_rank),
        )?;
        checked.push(rank.label.clone());
    }
    ensure(
        checked.len() >= 20,
        format!("only {} semistable curves with ranks", checked.len()),
    )?;
    Ok(format!(
        "{} semistable curves; closed form and rank parity agree",
        checked.len()
    ))
}

fn criterion_7(b: &Batch) -> Check {
    let mut compared = 0;
    let mut bad = Vec::new();
    for r in b.reports.iter().filter(|r| r.congruence.is_consistent()) {
        compared += r.internal_checks.epsilon0_compared;
        for m in &r.internal_checks.epsilon0_mismatches {
            bad.push(format!("{} at {m}", r.pair));
        }
    }
    ensure(bad.is_empty(), bad.join("; "))?;
    ensure(compared > 0, "nothing compared")?;
    Ok(format!(
        "{compared} places of Sigma_0 compared, zero exceptions"
    ))
}

fn example_1(sidecar: &Sidecar) -> Result<ParityReport, String> {
    let corpus = parse_corpus(data("corpus.csv")).map_err(|e| e.to_string())?;
    let job = VerificationJob::new("11a1", "121c1", BaseField::Rationals, 3)
        .map_err(|e| e.to_string())?;
    run_job(
        &job,
        &corpus,
        sidecar,
        AnalysisOptions::default(),
        &LocalCache::in_memory(),
    )
    .map_err(|e| e.to_string())
}

/// Selmer ranks and lambda-invariants are read, never computed; p-parity is
/// reported but never decides the outcome.
fn criterion_8() -> Check {
    let with = example_1(&Sidecar::load(data("sidecar.json")).map_err(|e| e.to_string())?)?;
    ensure(
        with.selmer_parity.verdict == Verdict::Holds,
        "verdict with ingested data",
    )?;
    ensure(
        with.selmer_parity
            .inputs
            .is_some_and(|i| i.iter().all(|(_, src)| *src == "lambda")),
        "inputs not taken from the sidecar",
    )?;
    let without = example_1(&Sidecar::default())?;
    ensure(
        without.selmer_parity.verdict == Verdict::NotApplicable,
        "verdict without data",
    )?;
    ensure(!without.has_failure(), "missing data counted as failure")?;
    ensure(
        !without.places.is_empty() && without.congruence.is_consistent(),
        "local analysis lost without data",
    )?;

    // Coranks of odd parity against root numbers +1: p-parity fails for both
    // curves, the Selmer identity still holds and nothing is flagged.
    let mut odd = Sidecar::default();
    for label in ["11a1", "121c1"] {
        let s = SelmerInput {
            s_p: Some(1),
            provenance: "test".into(),
            ..Default::default()
        };
        odd.insert_selmer(label, BaseField::Rationals, 3, s);
    }
    let r = example_1(&odd)?;
    ensure(
        r.p_parity.consistent == [Some(false), Some(false)],
        format!("p_parity {:?}", r.p_parity.consistent),
    )?;
    ensure(!r.has_failure(), "p-parity affected the outcome")?;
    Ok("Selmer data ingested; NotApplicable without it; p-parity informational".into())
}

fn criterion_9() -> Check {
    let jobs = data("jobs.txt");
    let jobs = jobs.to_str().unwrap();
    let dir = std::env::temp_dir().join(format!("ecparity-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let cache = dir.join("cache.json");
    let cache = cache.to_str().unwrap();
    let runs = [
        ecparity(&["batch", jobs], &[("RAYON_NUM_THREADS", "1")]),
        ecparity(
            &["batch", jobs],
            &[("RAYON_NUM_THREADS", "4"), ("ECPARITY_CACHE", cache)],
        ),
        ecparity(
            &["batch", jobs],
            &[("RAYON_NUM_THREADS", "3"), ("ECPARITY_CACHE", cache)],
        ),
    ];
    let _ = std::fs::remove_dir_all(&dir);
    for r in &runs {
        ensure(r.status.success(), format!("batch exit {:?}", r.status))?;
    }
    ensure(
        runs.iter().all(|r| r.stdout == runs[0].stdout),
        "reports differ between runs",
    )?;
    Ok(format!(
        "3 runs byte-identical ({} bytes; 1/4/3 threads, cold and warm cache)",
        runs[0].stdout.len()
    ))
}

fn main() {
    let b = batch();
    let results: Vec<(u32, Check)> = vec![
        (1, criterion_1()),
        (2, criterion_2()),
        (3, criterion_3()),
        (4, criterion_4(&b)),
        (5, criterion_5(&b)),
        (6, criterion_6(&b)),
        (7, criterion_7(&b)),
        (8, criterion_8()),
        (9, criterion_9()),
    ];
    let mut failed = 0;
    for (n, r) in &results {
        match r {
            Ok(msg) => println!("criterion {n}: PASS ({msg})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: FAIL ({msg})");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
