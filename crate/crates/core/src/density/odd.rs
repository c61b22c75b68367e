//! Local densities at odd primes from the Gauss-sum expansion.
//!
//! With `alpha_j = ord_p(c_j)`, `u_j = c_j / p^{alpha_j}` and `R = ord_p(m)`,
//!
//! `beta = sum_{k=0}^{R+1} p^{(A_l - l k)/2} prod_{j in J} (u_j/p) eps_p
//!         tau(chi, psi_{-m, p^k})`,
//!
//! where `l` counts the `alpha_j < k`, `A_l` is their sum, `J` is the set of
//! those `j` with `k - alpha_j` odd, and `chi` is the quadratic character
//! mod `p^k` when `|J|` is odd and the principal one otherwise. Every term is
//! evaluated in `Q(i, sqrt p)`; the sum must come out rational.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use super::oracle::DensityKey;
use super::LocalDensityInput;
use crate::arith::{is_prime, ord_p};
use crate::error::{invalid, Error, Result};
use crate::gauss::{epsilon, kronecker, tau, CharacterKind, CharacterSpec, CyclotomicValue};
use crate::interval::{q_int, Q};

/// `p^{e/2}` as an element of `Q(sqrt p)`.
fn half_power(p: u64, e: i64) -> CyclotomicValue {
    let whole = e.div_euclid(2);
    let base = if whole >= 0 {
        q_int(p as i64).pow(whole as i32)
    } else {
        Q::one() / q_int(p as i64).pow((-whole) as i32)
    };
    if e.rem_euclid(2) == 0 {
        CyclotomicValue::rational(base)
    } else {
        CyclotomicValue::sqrt(p).scale(&base)
    }
}

/// Local density at an odd prime for any diagonal form in up to four
/// variables, from the expansion above.
pub fn beta_gauss_odd(coeffs: &[u64], p: u64, m: u64) -> Result<Q> {
    if p == 2 || !is_prime(p) {
        return invalid(format!("beta_gauss_odd needs an odd prime, got {p}"));
    }
    if m == 0 || coeffs.is_empty() || coeffs.contains(&0) {
        return invalid("beta_gauss_odd needs m >= 1 and positive coefficients");
    }
    let r = ord_p(m, p);
    let parts: Vec<(u32, i32)> = coeffs
        .iter()
        .map(|&c| {
            let a = ord_p(c, p);
            let u = c / p.pow(a);
            (a, kronecker((u % p) as i64, p as i64).expect("p > 0"))
        })
        .collect();
    let eps = epsilon(p as i64)?;
    let mut total = CyclotomicValue::one();
    for k in 1..=r + 1 {
        let modulus = p.pow(k);
        let mut l = 0i64;
        let mut a_sum = 0i64;
        let mut odd = 0u32;
        let mut sign = 1i64;
        for &(a, leg) in &parts {
            if a < k {
                l += 1;
                a_sum += a as i64;
                if (k - a) % 2 == 1 {
                    odd += 1;
                    sign *= leg as i64;
                }
            }
        }
        let kind = if odd % 2 == 1 {
            CharacterKind::Quadratic
        } else {
            CharacterKind::Principal
        };
        let t = tau(&CharacterSpec::new(p, k, kind)?, (m % modulus) as i64)?;
        if t.is_zero() {
            continue;
        }
        let mut term = &t * &half_power(p, a_sum - l * k as i64);
        for _ in 0..odd {
            term = &term * &eps;
        }
        total = &total + &term.scale(&q_int(sign));
    }
    total.as_rational().ok_or_else(|| {
        Error::Inconsistent(format!(
            "density of {coeffs:?} at p={p}, m={m} is not rational: {total:?}"
        ))
    })
}

/// Whether the valuation pattern lies in the closed-form hypothesis set:
/// at most one odd `alpha_j`, or `alpha = (0, 0, 1, 1)`.
pub fn odd_case_covered(alpha: &[u32]) -> bool {
    alpha.len() == 4
        && (alpha.iter().filter(|&&a| a % 2 == 1).count() <= 1 || alpha == [0, 0, 1, 1])
}

/// `beta_closed_odd`: the quaternary closed form on its hypothesis set.
/// Values are memoized by the square-class data they depend on.
pub fn beta_closed_odd(input: &LocalDensityInput) -> Result<Q> {
    let p = input.p();
    if p == 2 {
        return invalid("beta_closed_odd needs an odd prime");
    }
    if input.r() < input.alpha()[0] {
        // every coefficient is divisible by a higher power of p than m
        return Ok(Q::zero());
    }
    if !odd_case_covered(input.alpha()) {
        return Err(Error::CaseNotCovered(format!(
            "valuation pattern {:?} at p={p}",
            input.alpha()
        )));
    }
    static MEMO: OnceLock<Mutex<HashMap<DensityKey, Q>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    let key = DensityKey::new(input.coefficients(), p, input.m())?;
    if let Some(v) = memo.lock().expect("closed-form memo").get(&key) {
        return Ok(v.clone());
    }
    let v = beta_gauss_odd(input.coefficients(), p, input.m())?;
    memo.lock()
        .expect("closed-form memo")
        .insert(key, v.clone());
    Ok(v)
}
