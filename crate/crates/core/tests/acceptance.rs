//! Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers
//! as arguments to run a subset (`cargo test --test acceptance -- 3 9`).
//! Failing criteria are reported, and the exit status is non-zero only with
//! `ACCEPTANCE_STRICT=1`.

use std::process::ExitCode;
use std::time::Instant;

use drinfeld_core::hecke::{
    eigenform_check, hecke_matrix, hecke_mod_t_on_power, hecke_product_mod_t, is_minus_identity_plus_nilpotent,
    required_input_precision, EigenVerdict, ModTCache,
};
use drinfeld_core::modforms::{mod_t_exponents, type_rep, FormCache};
use drinfeld_core::polyring::primes_up_to_degree;
use drinfeld_core::scan::{scan_separability, ScanConfig, ScanReport};
use drinfeld_core::verify::{self, SuiteReport};
use drinfeld_core::{ring_a, Fq, FqElem, PrimePoly, RatField, Ring};

type Outcome = (bool, String);

fn suites(reports: Vec<SuiteReport>) -> Outcome {
    let total: usize = reports.iter().map(|r| r.checks.len()).sum();
    let bad: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failures().map(move |c| format!("q={} {}: {}", r.q, c.name, c.detail)))
        .collect();
    if bad.is_empty() {
        (true, format!("{total} checks"))
    } else {
        (false, format!("{} of {total} checks failed: {}", bad.len(), bad.join("; ")))
    }
}

fn fq(q: u32) -> Fq {
    Fq::from_order(q).unwrap()
}

fn criterion_1() -> Outcome {
    suites([2, 3].iter().map(|&q| verify::eigenforms(&fq(q), 3, 50).unwrap()).collect())
}

fn criterion_2() -> Outcome {
    suites([2, 3, 4].iter().map(|&q| verify::mod_t_structure(&fq(q), 40, 3).unwrap()).collect())
}

const GOLDEN_WEIGHTS: [u64; 14] = [9, 13, 15, 16, 17, 18, 19, 21, 23, 24, 25, 26, 27, 28];
const GOLDEN_DIMS: [usize; 14] = [4, 5, 6, 6, 6, 7, 7, 8, 8, 9, 9, 9, 10, 10];

fn run_scan(deg: usize, jobs: usize) -> (ScanReport, f64) {
    let t = Instant::now();
    let r = scan_separability(&fq(2), &ScanConfig { k_max: 28, prime_deg_max: deg, m: 0, jobs }).unwrap();
    (r, t.elapsed().as_secs_f64())
}

fn golden(r: &ScanReport) -> Result<(), String> {
    let dims: Vec<usize> = r.summary.iter().map(|s| s.dim).collect();
    if r.failures() > 0 {
        return Err(format!("{} failed tasks", r.failures()));
    }
    if r.summary_weights() != GOLDEN_WEIGHTS || dims != GOLDEN_DIMS {
        return Err(format!("weights {:?}, dims {:?}", r.summary_weights(), dims));
    }
    Ok(())
}

fn criterion_3_and_9() -> (Outcome, Outcome) {
    let (r3, t3) = run_scan(3, 8);
    let (r5, t5) = run_scan(5, 8);
    let c3 = match (golden(&r3), golden(&r5)) {
        (Ok(()), Ok(())) if t3 < 120.0 && t5 < 1800.0 => {
            (true, format!("weights and dims match; deg<=3 in {t3:.1}s, deg<=5 in {t5:.1}s"))
        }
        (Ok(()), Ok(())) => (false, format!("table matches but too slow: deg<=3 {t3:.1}s, deg<=5 {t5:.1}s")),
        (a, b) => (false, format!("deg<=3: {a:?}; deg<=5: {b:?}")),
    };
    let (r1, _) = run_scan(5, 1);
    let same = r1.to_csv().unwrap() == r5.to_csv().unwrap() && r1.to_json() == r5.to_json();
    let c9 = (same, format!("CSV and JSON of the deg<=5 scan, {} rows, 1 vs 8 workers", r5.rows.len()));
    (c3, c9)
}

/// The stated identity `T_P h~^{q+j} = P~^j a1 h~^{j+1} + P~^{j+1} h~^{q+j}`, coordinate by coordinate.
fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for q in [2u32, 3] {
        let f = fq(q);
        let a = ring_a(&f);
        let cache = ModTCache::direct(&f, required_input_precision(2 * q as usize, q as u64, 3));
        let primes: Vec<PrimePoly> = primes_up_to_degree(&a, 3).unwrap().into_iter().filter(|p| !p.is_t()).collect();
        if q == 2 {
            let names: Vec<String> = primes.iter().map(|p| a.fmt_elem(p.poly())).collect();
            assert!(names.contains(&"T^2+T+1".to_string()) && names.contains(&"T^3+T^2+1".to_string()));
        }
        for p in &primes {
            let (wp, a1) = (p.residue(), p.alpha_i(1));
            for j in 1..q as usize {
                let n = q as usize + j;
                count += 1;
                let coords = hecke_mod_t_on_power(&cache, n, p).unwrap();
                let expected = |e: usize| match e {
                    e if e == j + 1 => f.mul(&f.pow(&wp, j as u64), &a1),
                    e if e == n => f.pow(&wp, j as u64 + 1),
                    _ => FqElem::ZERO,
                };
                if let Some((e, c)) = coords.iter().find(|(e, c)| *c != expected(*e)) {
                    bad.push(format!(
                        "q={q} P={} j={j}: coordinate on h~^{e} is {}, stated {}",
                        a.fmt_elem(p.poly()),
                        f.fmt_elem(c),
                        f.fmt_elem(&expected(*e))
                    ));
                }
            }
        }
    }
    if bad.is_empty() {
        (true, format!("{count} cases"))
    } else {
        (false, format!("{} of {count} cases differ (computed value is j P~^j a1): {}", bad.len(), bad.join("; ")))
    }
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for q in [2u32, 3] {
        let f = fq(q);
        let a = ring_a(&f);
        let field = RatField::new(&f);
        let qq = q as usize;
        let cache = ModTCache::direct(&f, required_input_precision(qq * qq + qq, q as u64, 2));
        let forms = FormCache::new(&f, required_input_precision(qq * qq + qq, q as u64, 2));
        for p in primes_up_to_degree(&a, 2).unwrap().into_iter().filter(|p| !p.is_t()) {
            let d = p.degree() as u32;
            for j in 1..qq {
                count += 1;
                let n = qq.pow(d) + j;
                let coords = hecke_mod_t_on_power(&cache, n, &p).unwrap();
                let c = coords.iter().find(|(e, _)| *e == j + 1).map_or(FqElem::ZERO, |x| x.1);
                let expected = f.mul(&f.from_int(j as i64), &f.pow(&p.residue(), j as u64));
                let k = (n * (qq + 1)) as u64;
                let m = hecke_matrix(&forms, k, type_rep(q as u64, n as i64), &p).unwrap();
                let mut v = vec![field.zero(); m.basis.len()];
                v[m.basis.iter().position(|b| b.i == 0 && b.j == n).unwrap()] = field.one();
                let verdict = eigenform_check(&field, &m, &v).unwrap();
                if c != expected || f.is_zero(&c) || matches!(verdict, EigenVerdict::Eigenform { .. }) {
                    bad.push(format!("q={q} P={} j={j}: coordinate {}, verdict {verdict:?}", a.fmt_elem(p.poly()), f.fmt_elem(&c)));
                }
            }
        }
    }
    if bad.is_empty() {
        (true, format!("{count} cases, none an eigenform"))
    } else {
        (false, bad.join("; "))
    }
}

fn criterion_6() -> Outcome {
    suites([2, 3, 5].iter().map(|&q| verify::vanishing_coefficients(&fq(q)).unwrap()).collect())
}

/// The stated `prod T_{P_i} + I` nilpotent on `M_{k,0}`, `k <= 30`.
fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for (q, names) in [(3u32, vec!["T+1", "T+2"]), (2, vec!["T+1"])] {
        let f = fq(q);
        let a = ring_a(&f);
        let primes: Vec<PrimePoly> = names.iter().map(|s| PrimePoly::parse(&a, s).unwrap()).collect();
        let cache = ModTCache::direct(&f, ModTCache::precision_for(q as u64, 30, 1));
        for k in 0..=30u64 {
            if mod_t_exponents(q as u64, k, 0).is_empty() {
                continue;
            }
            count += 1;
            let prod = hecke_product_mod_t(&cache, &primes, k, 0).unwrap();
            if !is_minus_identity_plus_nilpotent(&f, &prod) {
                bad.push(format!("q={q} k={k}"));
            }
        }
    }
    if bad.is_empty() {
        (true, format!("{count} spaces"))
    } else {
        (
            false,
            format!(
                "{} of {count} spaces fail (diagonal of the product is (-1)^m = 1 at m = 0): {}",
                bad.len(),
                bad.join(", ")
            ),
        )
    }
}

fn criterion_8() -> Outcome {
    let mut reports = Vec::new();
    for q in [2u32, 3] {
        let f = fq(q);
        reports.push(verify::goss_oracle(&f, 3, 50).unwrap());
        reports.push(verify::goss_order(&f, 3, 50).unwrap());
        reports.push(verify::serre_derivative_suite(&f, 100));
        reports.push(verify::theta_h(&f, 100));
        reports.push(verify::e_congruence(&f, 100));
        reports.push(verify::commutation(&f, 2, 20).unwrap());
        reports.push(verify::t_expansion_integrality(&f, 3, 60).unwrap());
    }
    suites(reports)
}

fn main() -> ExitCode {
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let want = |n: u32| wanted.is_empty() || wanted.contains(&n);
    let mut failed = Vec::new();
    let mut report = |n: u32, (pass, detail): Outcome, secs: f64| {
        if !pass {
            failed.push(n);
        }
        println!("criterion {n}: {} ({secs:.1}s) {detail}", if pass { "PASS" } else { "FAIL" });
    };
    let timed = |f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        (o, t.elapsed().as_secs_f64())
    };
    let mut deferred_9 = None;
    let criteria: [(u32, fn() -> Outcome); 7] = [
        (1, criterion_1),
        (2, criterion_2),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    for (n, f) in criteria {
        if n == 4 && (want(3) || want(9)) {
            let t = Instant::now();
            let (c3, c9) = criterion_3_and_9();
            let secs = t.elapsed().as_secs_f64();
            if want(3) {
                report(3, c3, secs);
            }
            deferred_9 = want(9).then_some((c9, secs));
        }
        if want(n) {
            let (o, secs) = timed(&f);
            report(n, o, secs);
        }
    }
    if let Some((c9, secs)) = deferred_9 {
        report(9, c9, secs);
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        return ExitCode::SUCCESS;
    }
    println!("acceptance: FAIL on criteria {failed:?}");
    if std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
