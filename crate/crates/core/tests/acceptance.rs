//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Three sub-checks are known to fail because the statements they test are
//! false; the suite asserts that they fail for the documented reason and that
//! everything else passes.

use std::time::{Duration, Instant};

use aprime::arith::checks::{divisor_bound_sweep, exp_sum_bound_check, mertens_product, zeta_real};
use aprime::arith::constants::{explicit_constant, ConstantName, ConstantOptions};
use aprime::bounds::{cusp_check, theorem_certificate, Verdict};
use aprime::density::{
    beta_closed_2, beta_closed_odd, beta_oracle, eisenstein_coefficient, two_range_holds,
    LocalDensityInput,
};
use aprime::interval::{bits_for_digits, q_dec, q_frac, q_int, DEFAULT_DIGITS, Q};
use aprime::qform::{jacobi_r4, representation_count, DiagonalForm, ScaledForm};
use aprime::sieve::{
    frak_c, fundamental_sandwich_sweep, sigma_chain_check, vector_sandwich, SieveContext,
};
use aprime::universality::{
    corollary_check, escalator_catalog, fifteen_first_miss, threshold_demo, DEFAULT_EXCEPTIONAL,
};
use aprime::Error;
use num_bigint::BigInt;
use rayon::prelude::*;

/// Sub-checks expected to fail, by criterion and label.
const KNOWN_FAILURES: [(u32, &str); 3] = [
    (3, "2-adic range [1/2, 3/2]"),
    (5, "E_1/2 below 1.614"),
    (10, "fifteen over the catalogue"),
];

struct Check {
    label: &'static str,
    ok: bool,
    detail: String,
}

fn check(label: &'static str, ok: bool, detail: impl Into<String>) -> Check {
    Check {
        label,
        ok,
        detail: detail.into(),
    }
}

fn budget(limit: Duration, spent: Duration) -> Check {
    check(
        "time budget",
        spent <= limit,
        format!("{:.1}s of {}s", spent.as_secs_f64(), limit.as_secs()),
    )
}

fn bits() -> u64 {
    bits_for_digits(DEFAULT_DIGITS)
}

fn unscaled(a: &[u64]) -> ScaledForm {
    ScaledForm::unscaled(DiagonalForm::new(a.to_vec()).unwrap())
}

fn pow(b: i64, e: u32) -> Q {
    Q::from_integer(BigInt::from(b).pow(e))
}

fn criterion_1() -> Vec<Check> {
    let t = Instant::now();
    let f = unscaled(&[1, 1, 1, 1]);
    let bad: Vec<u64> = (0..=10_000)
        .filter(|&n| representation_count(&f, n).unwrap() != jacobi_r4(n))
        .collect();
    vec![
        check(
            "jacobi equals enumeration for n <= 10^4",
            bad.is_empty(),
            format!("mismatches {bad:?}"),
        ),
        budget(Duration::from_secs(30), t.elapsed()),
    ]
}

fn criterion_2() -> Vec<Check> {
    let t = Instant::now();
    let mut out = Vec::new();
    for r in 0..=3 {
        let rep = threshold_demo(r).unwrap();
        out.push(check(
            "threshold reproduced",
            rep.holds(),
            format!(
                "r={r}: count {} at {}, gap {:?}",
                rep.count, rep.threshold, rep.first_gap
            ),
        ));
    }
    out.push(budget(Duration::from_secs(120), t.elapsed()));
    out
}

fn criterion_3() -> Vec<Check> {
    let t = Instant::now();
    let catalog = escalator_catalog();
    let mut jobs = Vec::new();
    for a in &catalog {
        for p in [3u64, 5, 7, 11, 13] {
            for mask in 0..16u32 {
                jobs.push((a.clone(), p, mask));
            }
        }
    }
    let d_of = |p: u64, mask: u32| -> Vec<u64> {
        (0..4)
            .map(|j| if mask >> j & 1 == 1 { p } else { 1 })
            .collect()
    };
    // (compared, mismatches)
    let (odd_n, odd_bad) = jobs
        .par_iter()
        .map(|(a, p, mask)| {
            let f = ScaledForm::new(a.clone(), d_of(*p, *mask)).unwrap();
            let mut n = 0u64;
            let mut bad = 0u64;
            for m in 1..=2000 {
                let input = LocalDensityInput::new(f.clone(), *p, m).unwrap();
                match beta_closed_odd(&input) {
                    Ok(v) => {
                        n += 1;
                        if v != beta_oracle(&input).unwrap() {
                            bad += 1;
                        }
                    }
                    Err(Error::CaseNotCovered(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
            (n, bad)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    let two_jobs: Vec<(DiagonalForm, u32)> = catalog
        .iter()
        .flat_map(|a| (0..16u32).map(move |mask| (a.clone(), mask)))
        .collect();
    // (compared, mismatches, range applicable, range violations)
    let (two_n, two_bad, range_n, range_bad) = two_jobs
        .par_iter()
        .map(|(a, mask)| {
            let f = ScaledForm::new(a.clone(), d_of(2, *mask)).unwrap();
            let mut acc = (0u64, 0u64, 0u64, 0u64);
            for m in 1..=512 {
                let input = LocalDensityInput::new(f.clone(), 2, m).unwrap();
                match beta_closed_2(&f, m) {
                    Ok(v) => {
                        acc.0 += 1;
                        if v != beta_oracle(&input).unwrap() {
                            acc.1 += 1;
                        }
                        match two_range_holds(input.alpha(), input.r(), &v) {
                            Some(true) => acc.2 += 1,
                            Some(false) => {
                                acc.2 += 1;
                                acc.3 += 1;
                            }
                            None => {}
                        }
                    }
                    Err(Error::CaseNotCovered(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
            acc
        })
        .reduce(
            || (0, 0, 0, 0),
            |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2, x.3 + y.3),
        );
    let low = beta_closed_2(&unscaled(&[1, 1, 1, 5]), 4).unwrap();
    vec![
        check("odd closed form equals oracle", odd_n > 0 && odd_bad == 0, format!("{odd_n} compared, {odd_bad} mismatches")),
        check("2-adic closed form equals oracle", two_n > 0 && two_bad == 0, format!("{two_n} compared, {two_bad} mismatches")),
        check(
            "2-adic range [1/2, 3/2]",
            range_bad == 0,
            format!("{range_bad} of {range_n} applicable values outside; e.g. (1,1,1,5) at m=4 gives {low}"),
        ),
        budget(Duration::from_secs(600), t.elapsed()),
    ]
}

fn criterion_4() -> Vec<Check> {
    let t = Instant::now();
    let f = unscaled(&[1, 1, 1, 1]);
    let b = bits();
    let bad: Vec<u64> = (1..=500u64)
        .into_par_iter()
        .filter(|&m| {
            let e = eisenstein_coefficient(&f, m, 100_000, b).unwrap();
            !(e.contains(&q_int(jacobi_r4(m) as i64)) && e.width() < q_int(1))
        })
        .collect();
    vec![
        check(
            "Euler product encloses r_4(m), width < 1",
            bad.is_empty(),
            format!("failing m {bad:?}"),
        ),
        budget(Duration::from_secs(300), t.elapsed()),
    ]
}

fn criterion_5() -> Vec<Check> {
    let t = Instant::now();
    let opts = ConstantOptions::default();
    let cases: [(ConstantName, Q, &str); 8] = [
        (ConstantName::CAlpha, q_frac(1, 10), "4.175e10"),
        (ConstantName::CAlpha, q_frac(1, 14), "2.634e71"),
        (ConstantName::CAlpha, q_frac(1, 15), "2.751e120"),
        (ConstantName::GAlpha, q_frac(1, 50), "3.466"),
        (ConstantName::GAlpha, q_frac(1, 100), "4.369"),
        (ConstantName::DAlpha, q_frac(1, 10), "1.110e9"),
        (ConstantName::EAlpha, q_frac(1, 2), "1.614"),
        (ConstantName::CDelta, q_dec("1e-6"), "11.3"),
    ];
    let mut out = Vec::new();
    for (name, param, stated) in cases {
        let v = explicit_constant(name, &param, &opts).unwrap();
        let mut ok = *v.value.hi() < q_dec(stated);
        if name == ConstantName::CDelta {
            ok &= v.p0 == Some(87853);
        }
        let label = if name == ConstantName::EAlpha {
            "E_1/2 below 1.614"
        } else {
            "constant below stated value"
        };
        out.push(check(
            label,
            ok,
            format!("{name}({param}) <= {:.6e} < {stated}", v.value.hi_f64()),
        ));
    }
    let z = zeta_real(&(q_int(1) + q_dec("4e-6")), opts.bits).unwrap();
    out.push(check(
        "zeta(1 + 4e-6) < 250000.6",
        *z.hi() < q_dec("250000.6"),
        format!("{:.4}", z.hi_f64()),
    ));
    out.push(budget(Duration::from_secs(60), t.elapsed()));
    out
}

fn criterion_6() -> Vec<Check> {
    let t = Instant::now();
    let opts = ConstantOptions::default();
    let sweep = divisor_bound_sweep(5, 1_000_000, &opts).unwrap();
    let mertens: Vec<u64> = [10u64, 100, 1000, 10_000]
        .into_iter()
        .filter(|&z| !mertens_product(z, opts.bits).unwrap().holds())
        .collect();
    let mut exp_bad = Vec::new();
    for k in 0..=6 {
        for n in [1u64, 2, 3, 4, 10, 100] {
            if !exp_sum_bound_check(k, n, opts.bits).unwrap().holds {
                exp_bad.push((k, n));
            }
        }
    }
    vec![
        check(
            "divisor-function sweeps on [5, 10^6]",
            sweep.failures.is_empty(),
            format!(
                "{} checked, {} exact fallbacks, failures {:?}",
                sweep.checked, sweep.exact_fallbacks, sweep.failures
            ),
        ),
        check(
            "Mertens two-sided bound",
            mertens.is_empty(),
            format!("failing z {mertens:?}"),
        ),
        check(
            "exponential-sum bounds",
            exp_bad.is_empty(),
            format!("failing (k, N) {exp_bad:?}"),
        ),
        budget(Duration::from_secs(300), t.elapsed()),
    ]
}

fn criterion_7() -> Vec<Check> {
    let t = Instant::now();
    let b = bits();
    let mut out = Vec::new();
    for (level, beta) in [(q_int(1_000_000), 5), (pow(12, 25), 10)] {
        let ctx = SieveContext::standard(level.clone(), 30, q_int(beta)).unwrap();
        let bad = fundamental_sandwich_sweep(&ctx);
        out.push(check(
            "fundamental sandwich over l | P_7(30)",
            bad.is_empty(),
            format!(
                "D={level}, beta={beta}: {} divisors, failing {bad:?}",
                1usize << ctx.primes().len()
            ),
        ));
    }
    let ctx = SieveContext::standard(pow(12, 25), 12, q_int(10)).unwrap();
    let targets: Vec<u64> = (1..=500)
        .filter(|m| m % 8 != 0 && m % 27 != 0 && m % 25 != 0)
        .collect();
    let catalog = escalator_catalog();
    let jobs: Vec<(usize, u64)> = (0..catalog.len())
        .flat_map(|i| targets.iter().map(move |&m| (i, m)))
        .collect();
    let (sandwich_bad, chain_bad): (Vec<_>, Vec<_>) = jobs
        .par_iter()
        .map(|&(i, m)| {
            let a = &catalog[i];
            let v = vector_sandwich(&ctx, a, m).unwrap().holds();
            let c = sigma_chain_check(&ctx, a, m, b).unwrap().holds;
            (
                (!v).then(|| (a.to_string(), m)),
                (!c).then(|| (a.to_string(), m)),
            )
        })
        .unzip();
    let sandwich_bad: Vec<_> = sandwich_bad.into_iter().flatten().collect();
    let chain_bad: Vec<_> = chain_bad.into_iter().flatten().collect();
    out.push(check(
        "vector sandwich with exact #A_d",
        sandwich_bad.is_empty(),
        format!("{} (form, m) pairs, failing {sandwich_bad:?}", jobs.len()),
    ));
    out.push(check(
        "Sigma chain",
        chain_bad.is_empty(),
        format!("{} (form, m) pairs, failing {chain_bad:?}", jobs.len()),
    ));
    let c = frak_c(&q_int(10), &q_int(25), b).unwrap();
    out.push(check(
        "c_10(25) <= 3/80",
        *c.hi() <= q_frac(3, 80),
        format!("{:.6e}", c.hi_f64()),
    ));
    out.push(budget(Duration::from_secs(900), t.elapsed()));
    out
}

fn criterion_8() -> Vec<Check> {
    let t = Instant::now();
    let b = bits();
    let catalog = escalator_catalog();
    let jobs: Vec<(usize, u64)> = (0..catalog.len())
        .flat_map(|i| (1..=2000u64).map(move |m| (i, m)))
        .collect();
    let results: Vec<(Verdict, bool)> = jobs
        .par_iter()
        .map(|&(i, m)| {
            let r = cusp_check(&ScaledForm::unscaled(catalog[i].clone()), m, 2003, b).unwrap();
            (r.verdict, r.bits == b)
        })
        .collect();
    let violated = results.iter().filter(|r| r.0 == Verdict::Violated).count();
    let indeterminate = results
        .iter()
        .filter(|r| r.0 == Verdict::Indeterminate || !r.1)
        .count();
    vec![
        check(
            "cusp bound for every catalogue form, m <= 2000",
            violated == 0 && indeterminate == 0,
            format!(
                "{} checks, {violated} violated, {indeterminate} needing more than 60 digits",
                jobs.len()
            ),
        ),
        budget(Duration::from_secs(600), t.elapsed()),
    ]
}

fn criterion_9() -> Vec<Check> {
    let t = Instant::now();
    let b = bits();
    let bad: Vec<u32> = (0..=18)
        .filter(|&k| theorem_certificate(10u64.pow(k), b).unwrap().verdict != Verdict::Holds)
        .collect();
    let notes = theorem_certificate(1, b).unwrap().notes;
    vec![
        check(
            "certificate holds at 10^k, k <= 18",
            bad.is_empty(),
            format!("failing k {bad:?}; {}", notes[0]),
        ),
        budget(Duration::from_secs(10), t.elapsed()),
    ]
}

fn criterion_10() -> Vec<Check> {
    let t = Instant::now();
    let misses: Vec<String> = escalator_catalog()
        .iter()
        .filter_map(|a| {
            fifteen_first_miss(a)
                .unwrap()
                .map(|m| format!("({a}) misses {m}"))
        })
        .collect();
    let rep = corollary_check(100_000, 694, &DEFAULT_EXCEPTIONAL).unwrap();
    let truant = fifteen_first_miss(&DiagonalForm::new(vec![1, 1, 1, 8]).unwrap()).unwrap();
    vec![
        check(
            "fifteen over the catalogue",
            misses.is_empty(),
            format!("{} of 60 fail: {}", misses.len(), misses.join(", ")),
        ),
        check(
            "truant (1,1,1,8) misses 7",
            truant == Some(7),
            format!("{truant:?}"),
        ),
        check(
            "four squares of P_{694,{2,3,5}} up to 10^5",
            rep.passed() && rep.max_multiplicity <= 8,
            format!(
                "max minimal multiplicity {} at {:?}",
                rep.max_multiplicity,
                rep.witness.as_ref().map(|w| (w.n, &w.x))
            ),
        ),
        budget(Duration::from_secs(300), t.elapsed()),
    ]
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Vec<Check>); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (n, run) in criteria {
        let checks = run();
        let pass = checks.iter().all(|c| c.ok);
        println!("criterion {n}: {}", if pass { "PASS" } else { "FAIL" });
        for c in &checks {
            println!(
                "    [{}] {}: {}",
                if c.ok { "ok" } else { "FAIL" },
                c.label,
                c.detail
            );
            let known = KNOWN_FAILURES.contains(&(n, c.label));
            if c.ok == known {
                unexpected.push(format!("criterion {n}, {}: ok = {}", c.label, c.ok));
            }
        }
    }
    assert!(unexpected.is_empty(), "unexpected outcomes: {unexpected:?}");
}
