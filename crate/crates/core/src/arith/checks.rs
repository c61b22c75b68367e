//! Verifiers for the elementary analytic bounds: Mertens products, the
//! exponential-sum bound, zeta near one and the divisor-function sweeps.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::constants::{explicit_constant, ConstantName, ConstantOptions};
use super::{primes_up_to, SpfTable};
use crate::error::{invalid, Result};
use crate::interval::{self, bernoulli, q_dec, q_frac, q_int, RationalInterval, Q};

/// Exact Mertens product together with the Rosser-Schoenfeld enclosure.
#[derive(Clone, Debug)]
pub struct MertensReport {
    pub z: u64,
    pub product: Q,
    /// `e^{-gamma}/log z * (1 + 1/log^2 z)^{-1}`
    pub lower_bound: RationalInterval,
    /// `e^{-gamma}/log z * (1 + 1/(2 log^2 z))`
    pub upper_bound: RationalInterval,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl MertensReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

/// `mertens_product(z)`: exact `prod_{p <= z} (1 - 1/p)` and both bounds.
pub fn mertens_product(z: u64, bits: u64) -> Result<MertensReport> {
    if z < 2 {
        return invalid("mertens_product needs z >= 2");
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for p in primes_up_to(z) {
        num *= p - 1;
        den *= p;
    }
    let product = BigRational::new(num, den);
    let lz = interval::ln(&RationalInterval::int(z as i64), bits)?;
    let lz2 = &lz * &lz;
    let base = interval::exp(&-&interval::euler_gamma(), bits).div(&lz)?;
    let one = RationalInterval::int(1);
    let lower_bound = base.div(&(&one + &lz2.recip()?))?;
    let upper_bound = &base * &(&one + &lz2.scale(&q_int(2)).recip()?);
    let p = RationalInterval::point(product.clone());
    Ok(MertensReport {
        z,
        lower_holds: lower_bound.certainly_lt(&p),
        upper_holds: p.certainly_lt(&upper_bound),
        product,
        lower_bound,
        upper_bound,
    })
}

/// Outcome of the exponential-sum comparison.
#[derive(Clone, Debug)]
pub struct ExpSumReport {
    pub k: u32,
    pub n: u64,
    pub sum: RationalInterval,
    pub geometric_bound: RationalInterval,
    pub linear_bound: RationalInterval,
    pub holds: bool,
}

fn delta_n(n: u64) -> Q {
    match n {
        1 => q_frac(1, 4),
        2 | 3 => q_frac(1, 2),
        _ => q_int(1),
    }
}

/// `sum_{n>=1} n^k e^{-2 pi n/N}` against `k!/(1-e^{-2pi/N})^{k+1}` and
/// `k!/(delta_N pi)^{k+1} N^{k+1}`.
pub fn exp_sum_bound_check(k: u32, n: u64, bits: u64) -> Result<ExpSumReport> {
    if k > 12 || n == 0 || n > 10_000 {
        return invalid("exp_sum_bound_check needs k <= 12 and 1 <= N <= 10^4");
    }
    let pi = interval::pi();
    let q = interval::exp(&pi.scale(&q_frac(-2, n as i64)), bits);
    // terms n^k q^n; once the ratio r of consecutive terms is below 1 and
    // the current term is negligible, the tail is at most term * r/(1-r)
    let mut sum = RationalInterval::int(0);
    let mut qn = RationalInterval::int(1);
    let tiny = q_dec("1e-45");
    let one = RationalInterval::int(1);
    let mut j: u64 = 0;
    loop {
        j += 1;
        qn = (&qn * &q).round_out(bits);
        let term = qn.scale(&q_int(j as i64).pow(k as i32));
        sum = (&sum + &term).round_out(bits);
        let next = Q::new(BigInt::from(j + 2), BigInt::from(j + 1));
        let ratio = q.scale(&num_traits::pow(next, k as usize));
        if ratio.certainly_lt(&one) && term.hi() < &(sum.lo() * &tiny) {
            let tail_hi = term.hi() * ratio.hi() / (Q::one() - ratio.hi());
            sum = &sum + &RationalInterval::new(Q::zero(), tail_hi)?;
            break;
        }
    }
    let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
    let fact = RationalInterval::point(Q::from_integer(fact));
    let geometric_bound = fact.div(&(&one - &q).powi(k + 1))?;
    let linear_bound = fact
        .div(&pi.scale(&delta_n(n)).powi(k + 1))?
        .scale(&q_int(n as i64).pow(k as i32 + 1));
    let holds = sum.certainly_le(&geometric_bound) && sum.certainly_le(&linear_bound);
    Ok(ExpSumReport {
        k,
        n,
        sum,
        geometric_bound,
        linear_bound,
        holds,
    })
}

/// `zeta(s)` for real rational `s > 1` by Euler-Maclaurin with `N = 10`
/// and twelve correction terms; the remainder is bounded by twice the first
/// omitted term.
pub fn zeta_real(s: &Q, bits: u64) -> Result<RationalInterval> {
    if *s <= q_int(1) {
        return invalid("zeta_real needs s > 1");
    }
    let n_cut: i64 = 10;
    let terms = 12usize;
    let b = bernoulli(2 * terms + 2);
    let sm1 = s - q_int(1);
    let npow = |n: i64, e: &Q| -> Result<RationalInterval> {
        // n^{-e}
        let l = interval::ln(&RationalInterval::int(n), bits)?;
        Ok(interval::exp(&l.scale(&-e), bits))
    };
    let mut acc = RationalInterval::int(0);
    for n in 1..n_cut {
        acc = (&acc + &npow(n, s)?).round_out(bits);
    }
    let n_s = npow(n_cut, s)?;
    acc = &acc + &npow(n_cut, &sm1)?.scale(&sm1.recip());
    acc = &acc + &n_s.scale(&q_frac(1, 2));
    // sum_k B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    let mut rising = s.clone();
    let mut fact = BigInt::from(2);
    let nq = q_int(n_cut);
    let mut npk = n_s.scale(&nq.recip());
    let mut last = RationalInterval::int(0);
    for k in 1..=terms + 1 {
        if k > 1 {
            rising = rising * (s + q_int(2 * k as i64 - 3)) * (s + q_int(2 * k as i64 - 2));
            fact = fact * BigInt::from(2 * k as i64 - 1) * BigInt::from(2 * k as i64);
            npk = npk.scale(&(&nq * &nq).recip());
        }
        let coeff = &b[2 * k] / Q::from_integer(fact.clone()) * &rising;
        let t = npk.scale(&coeff);
        if k <= terms {
            acc = (&acc + &t).round_out(bits);
        } else {
            last = t.abs();
        }
    }
    let r = last.hi().clone() * q_int(2);
    Ok(&acc + &RationalInterval::new(-r.clone(), r)?)
}

/// One violated inequality from a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepFailure {
    pub bound: &'static str,
    pub n: u64,
}

/// Summary of the divisor-function sweeps over an integer range.
#[derive(Clone, Debug)]
pub struct DivisorSweepReport {
    pub lo: u64,
    pub hi: u64,
    pub checked: u64,
    pub exact_fallbacks: u64,
    pub failures: Vec<SweepFailure>,
}

/// Natural-log enclosure decided in floating point unless the margin is
/// below `1e-9`, in which case the caller's exact fallback is used.
fn decide(lhs_ln: f64, rhs_ln: f64, exact: impl FnOnce() -> bool, fallbacks: &mut u64) -> bool {
    let margin = rhs_ln - lhs_ln;
    if margin > 1e-9 {
        true
    } else if margin < -1e-9 {
        false
    } else {
        *fallbacks += 1;
        exact()
    }
}

/// Checks, for every `n` in `[lo, hi]`:
/// `sigma_0(n) <= C_{1/10} n^{1/10}`, `sigma_{-1}(n) <= G_{1/50} n^{1/50}`,
/// `2^omega(n) <= D_{1/10} n^{1/10}`, `3^omega(n) <= E_{1/2} n^{1/2}` (for
/// `n >= 5`), and `prod_{p|n}(1+1/p) <= 11.3 n^{1e-6}`,
/// `prod_{p|n}(1-1/p) >= n^{-1e-6}/20` (for `n >= 1`).
pub fn divisor_bound_sweep(lo: u64, hi: u64, opts: &ConstantOptions) -> Result<DivisorSweepReport> {
    if lo < 1 || hi < lo || hi > 50_000_000 {
        return invalid("sweep range must satisfy 1 <= lo <= hi <= 5e7");
    }
    let c10 = explicit_constant(ConstantName::CAlpha, &q_frac(1, 10), opts)?.value;
    let g50 = explicit_constant(ConstantName::GAlpha, &q_frac(1, 50), opts)?.value;
    let d10 = explicit_constant(ConstantName::DAlpha, &q_frac(1, 10), opts)?.value;
    let e2 = explicit_constant(ConstantName::EAlpha, &q_frac(1, 2), opts)?.value;
    let ln_hi = |c: &RationalInterval| c.hi_f64().ln();
    let (lc, lg, ld, le) = (ln_hi(&c10), ln_hi(&g50), ln_hi(&d10), ln_hi(&e2));
    let l113 = 11.3f64.ln();
    let l20 = 20f64.ln();
    let table = SpfTable::new(hi as u32);
    let mut failures = Vec::new();
    let mut fallbacks = 0u64;
    let bits = 128;
    for n in lo..=hi {
        let f = table.factor(n as u32);
        let ln_n = (n as f64).ln();
        let nq = q_int(n as i64);
        if n >= 5 {
            let s0: u64 = f.iter().map(|&(_, e)| e as u64 + 1).product();
            // sigma_0^10 <= C^10 n
            let ok = decide(
                (s0 as f64).ln(),
                lc + ln_n / 10.0,
                || q_int(s0 as i64).pow(10) <= c10.hi().pow(10) * &nq,
                &mut fallbacks,
            );
            if !ok {
                failures.push(SweepFailure {
                    bound: "sigma_0",
                    n,
                });
            }
            let sm1: Q = f
                .iter()
                .map(|&(p, e)| {
                    let p = q_int(p as i64);
                    (Q::one() - p.recip().pow(e as i32 + 1)) / (Q::one() - p.recip())
                })
                .product();
            let ok = decide(
                sm1.to_f64().unwrap_or(f64::MAX).ln(),
                lg + ln_n / 50.0,
                || sm1.pow(50) <= g50.hi().pow(50) * &nq,
                &mut fallbacks,
            );
            if !ok {
                failures.push(SweepFailure {
                    bound: "sigma_-1",
                    n,
                });
            }
            let w = f.len() as i32;
            let ok = decide(
                w as f64 * 2f64.ln(),
                ld + ln_n / 10.0,
                || q_int(2).pow(10 * w) <= d10.hi().pow(10) * &nq,
                &mut fallbacks,
            );
            if !ok {
                failures.push(SweepFailure {
                    bound: "2^omega",
                    n,
                });
            }
            let ok = decide(
                w as f64 * 3f64.ln(),
                le + ln_n / 2.0,
                || q_int(3).pow(2 * w) <= e2.hi().pow(2) * &nq,
                &mut fallbacks,
            );
            if !ok {
                failures.push(SweepFailure {
                    bound: "3^omega",
                    n,
                });
            }
        }
        let plus: Q = f
            .iter()
            .map(|&(p, _)| Q::new(BigInt::from(p + 1), BigInt::from(p)))
            .product();
        let minus: Q = f
            .iter()
            .map(|&(p, _)| Q::new(BigInt::from(p - 1), BigInt::from(p)))
            .product();
        let eps = 1e-6 * ln_n;
        let exact_pow = |x: &Q, factor: &Q, sign: i32| -> bool {
            // ln x <= ln factor + sign * 1e-6 ln n, by intervals
            let lx = interval::ln(&RationalInterval::point(x.clone()), bits).expect("positive");
            let lf =
                interval::ln(&RationalInterval::point(factor.clone()), bits).expect("positive");
            let ln_n = interval::ln(&RationalInterval::point(nq.clone()), bits).expect("positive");
            let rhs = &lf + &ln_n.scale(&q_frac(sign as i64, 1_000_000));
            if sign > 0 {
                lx.certainly_le(&rhs)
            } else {
                rhs.certainly_le(&lx)
            }
        };
        let ok = decide(
            plus.to_f64().unwrap_or(f64::MAX).ln(),
            l113 + eps,
            || exact_pow(&plus, &q_dec("11.3"), 1),
            &mut fallbacks,
        );
        if !ok {
            failures.push(SweepFailure {
                bound: "prod(1+1/p)",
                n,
            });
        }
        let ok = decide(
            -l20 - eps,
            minus.to_f64().unwrap_or(0.0).ln(),
            || exact_pow(&minus, &q_frac(1, 20), -1),
            &mut fallbacks,
        );
        if !ok {
            failures.push(SweepFailure {
                bound: "prod(1-1/p)",
                n,
            });
        }
    }
    Ok(DivisorSweepReport {
        lo,
        hi,
        checked: hi - lo + 1,
        exact_fallbacks: fallbacks,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mertens_small() {
        let r = mertens_product(2, 200).unwrap();
        assert_eq!(r.product, q_frac(1, 2));
        assert!(r.holds());
        let r = mertens_product(10, 200).unwrap();
        assert_eq!(r.product, q_frac(8, 35));
        assert!(r.holds());
        assert!(mertens_product(100, 200).unwrap().holds());
    }

    #[test]
    fn exp_sum_examples() {
        for (k, n) in [(0, 1), (1, 4), (3, 100)] {
            assert!(exp_sum_bound_check(k, n, 200).unwrap().holds, "k={k} N={n}");
        }
        // k = 0, N = 1 has the closed form q/(1-q) with q = e^{-2 pi}
        let r = exp_sum_bound_check(0, 1, 200).unwrap();
        let v = (-2.0 * std::f64::consts::PI).exp();
        let closed = v / (1.0 - v);
        assert!((r.sum.lo_f64() - closed).abs() < 1e-15);
    }

    #[test]
    fn zeta_values() {
        let z2 = zeta_real(&q_int(2), 200).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!((z2.lo_f64() - exact).abs() < 1e-14 && (z2.hi_f64() - exact).abs() < 1e-14);
        let z = zeta_real(&(q_int(1) + q_dec("4e-6")), 200).unwrap();
        assert!(z.hi() < &q_dec("250000.6"));
        // 1/(s-1) + gamma is the leading behaviour
        assert!((z.lo_f64() - 250000.5772).abs() < 1e-3);
    }

    #[test]
    fn sweep_small_range() {
        let r = divisor_bound_sweep(1, 20_000, &ConstantOptions::default()).unwrap();
        assert!(r.failures.is_empty(), "{:?}", r.failures);
    }
}
