//! Integer arithmetic: primes, factorization, multiplicative functions,
//! almost-prime classes, congruence-subgroup indices and cusp counts.

mod almost;
pub mod checks;
pub mod constants;

pub use almost::{is_member, AlmostPrimeClass};

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{invalid, Error, Result};

/// Trial division bound used before switching to Pollard rho.
const TRIAL_LIMIT: u64 = 100_000;

/// Primes up to `n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn small_primes() -> &'static [u64] {
    static P: OnceLock<Vec<u64>> = OnceLock::new();
    P.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

/// Primes in the half-open range `[lo, hi)`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi <= TRIAL_LIMIT {
        return small_primes()
            .iter()
            .copied()
            .filter(|&p| p >= lo && p < hi)
            .collect();
    }
    primes_up_to(hi.saturating_sub(1))
        .into_iter()
        .filter(|&p| p >= lo)
        .collect()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; `n` must be odd and composite.
fn rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = 2u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime-power decomposition, primes strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.pairs.len() as u32
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.pairs.iter().map(|&(_, e)| e).sum()
    }

    pub fn reconstruct(&self) -> u128 {
        self.pairs
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.pairs
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut ds = vec![1u64];
        for &(p, e) in &self.pairs {
            let len = ds.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    ds.push(ds[i] * pk);
                }
            }
        }
        ds.sort_unstable();
        ds
    }
}

/// Factors `n >= 1`: trial division below 10^5, then Miller-Rabin and rho.
pub fn factor(n: u64) -> Result<Factorization> {
    if n == 0 {
        return invalid("factor(0) is undefined");
    }
    let mut rest = n;
    let mut pairs = Vec::new();
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
    }
    if rest > 1 {
        let mut big = Vec::new();
        split_into(rest, &mut big);
        big.sort_unstable();
        for p in big {
            match pairs.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => pairs.push((p, 1)),
            }
        }
    }
    Ok(Factorization { pairs })
}

/// `p`-adic valuation of a non-zero integer.
pub fn ord_p(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

/// Exact divisor power sum `sigma_k(n)` for any integer `k`.
pub fn sigma(k: i32, n: u64) -> Result<BigRational> {
    if n == 0 {
        return invalid("sigma requires n >= 1");
    }
    let f = factor(n)?;
    let mut acc = BigRational::one();
    for &(p, e) in f.pairs() {
        let base = if k >= 0 {
            BigRational::from_integer(num_traits::pow(BigInt::from(p), k as usize))
        } else {
            BigRational::new(
                BigInt::one(),
                num_traits::pow(BigInt::from(p), k.unsigned_abs() as usize),
            )
        };
        let mut term = BigRational::one();
        let mut s = BigRational::one();
        for _ in 0..e {
            term *= &base;
            s += &term;
        }
        acc *= s;
    }
    Ok(acc)
}

/// Moebius function.
pub fn mobius(n: u64) -> i32 {
    if n == 0 {
        return 0;
    }
    let f = factor(n).expect("n >= 1");
    if f.pairs().iter().any(|&(_, e)| e > 1) {
        0
    } else if f.omega() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && mobius(n) != 0
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let f = factor(n.max(1)).expect("n >= 1");
    f.pairs().iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// `[SL2(Z) : Gamma0(N)] = N prod_{p | N} (1 + 1/p)`.
pub fn index_gamma0(n: u64) -> Result<u64> {
    if n == 0 {
        return invalid("level must be positive");
    }
    let f = factor(n)?;
    Ok(f.pairs().iter().fold(n, |acc, &(p, _)| acc / p * (p + 1)))
}

/// `[SL2(Z) : Gamma(N)] = N^3 prod_{p | N} (1 - 1/p^2)`.
pub fn index_gamma(n: u64) -> Result<u128> {
    if n == 0 {
        return invalid("level must be positive");
    }
    let f = factor(n)?;
    let n3 = (n as u128).pow(3);
    Ok(f.pairs().iter().fold(n3, |acc, &(p, _)| {
        acc / (p as u128 * p as u128) * (p as u128 * p as u128 - 1)
    }))
}

/// Number of cusps of Gamma0(N) with denominator `delta`, times `N/delta`
/// copies: `phi(N/delta) phi(delta) N / delta`.
pub fn cusp_count(n: u64, delta: u64) -> Result<u64> {
    if delta == 0 || n == 0 || n % delta != 0 {
        return Err(Error::InvalidArgument(format!(
            "{delta} does not divide {n}"
        )));
    }
    let q = n / delta;
    Ok(euler_phi(q) * euler_phi(delta) * q)
}

/// Smallest-prime-factor table for fast factorization of all `n <= limit`.
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(limit: u32) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    /// `(p, e)` pairs of `n` for `1 <= n <= limit`.
    pub fn factor(&self, mut n: u32) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize];
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }
}

/// Greatest common divisor helper for `u64`.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}
