//! The local density at 2 from the Gauss-sum expansion
//!
//! `beta_2 = sum_{k=0}^{R+3} 2^{-n k} sum_{v odd mod 2^k} e(-v m / 2^k)
//!           prod_j G(v c_j, 2^k)`,
//!
//! with `G(2^a u, 2^k) = 2^k` for `a >= k` and `2^a G(u, 2^{k-a})` otherwise,
//! `G(u, 2) = 0` and `G(u, 2^e) = (1 + i) eps_u^{-1} sqrt(2^e) (2^e/u)` for
//! `e >= 2`. The product depends on `v` only modulo 8, so for `k >= 4` the
//! sum over `v` collapses to four terms times `2^{k-3} [2^{k-3} | m]`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;

use super::oracle::DensityKey;
use crate::arith::ord_p;
use crate::error::{invalid, Error, Result};
use crate::interval::{q_frac, Q};
use crate::qform::ScaledForm;

/// Elements of `Z[zeta_8]` in the basis `1, z, z^2, z^3` with `z^4 = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Z8([i128; 4]);

impl Z8 {
    const ONE: Z8 = Z8([1, 0, 0, 0]);
    const ZERO: Z8 = Z8([0, 0, 0, 0]);

    /// `z^j`.
    fn root(j: i64) -> Z8 {
        let j = j.rem_euclid(8) as usize;
        let mut c = [0; 4];
        if j < 4 {
            c[j] = 1;
        } else {
            c[j - 4] = -1;
        }
        Z8(c)
    }

    fn mul(self, o: Z8) -> Option<Z8> {
        let mut c = [0i128; 4];
        for i in 0..4 {
            for j in 0..4 {
                let t = self.0[i].checked_mul(o.0[j])?;
                let (k, t) = if i + j < 4 {
                    (i + j, t)
                } else {
                    (i + j - 4, -t)
                };
                c[k] = c[k].checked_add(t)?;
            }
        }
        Some(Z8(c))
    }

    fn add(self, o: Z8) -> Option<Z8> {
        let mut c = [0i128; 4];
        for (k, slot) in c.iter_mut().enumerate() {
            *slot = self.0[k].checked_add(o.0[k])?;
        }
        Some(Z8(c))
    }

    fn scale(self, f: i128) -> Option<Z8> {
        let mut c = [0i128; 4];
        for (k, slot) in c.iter_mut().enumerate() {
            *slot = self.0[k].checked_mul(f)?;
        }
        Some(Z8(c))
    }
}

/// `G(u, 2^e)` for odd `u`.
fn gauss_unit(u: u64, e: u32) -> Z8 {
    match e {
        0 => Z8::ONE,
        1 => Z8::ZERO,
        _ => {
            let sign = if e % 2 == 1 && matches!(u % 8, 3 | 5) {
                -1
            } else {
                1
            };
            let one_plus_i = Z8([1, 0, 1, 0]);
            let eps_inv = if u % 4 == 1 {
                Z8::ONE
            } else {
                Z8([0, 0, -1, 0])
            };
            let root = if e % 2 == 0 {
                Z8([1i128 << (e / 2), 0, 0, 0])
            } else {
                // sqrt 2 = z - z^3
                Z8([0, 1 << (e / 2), 0, -(1 << (e / 2))])
            };
            one_plus_i
                .mul(eps_inv)
                .and_then(|v| v.mul(root))
                .and_then(|v| v.scale(sign))
                .expect("small")
        }
    }
}

/// `G(v c, 2^k)` for odd `v`, with `c = 2^a u`.
fn gauss_coeff(v: u64, a: u32, u: u64, k: u32) -> Option<Z8> {
    if a >= k {
        return Some(Z8([1i128 << k, 0, 0, 0]));
    }
    gauss_unit(v * u % 8, k - a).scale(1i128 << a)
}

/// Local density at 2 for any diagonal form in up to four variables.
pub fn beta_gauss_2(coeffs: &[u64], m: u64) -> Result<Q> {
    if m == 0 || coeffs.is_empty() || coeffs.len() > 4 || coeffs.contains(&0) {
        return invalid("beta_gauss_2 needs m >= 1 and 1 to 4 positive coefficients");
    }
    let n = coeffs.len() as u32;
    let r = ord_p(m, 2);
    let top = r + 3;
    let overflow = || Error::CapExceeded {
        what: "2-adic Gauss expansion",
        needed: format!("ord_2(m) = {r}"),
        cap: "128-bit intermediates".into(),
    };
    if n * top + top + 8 > 126 {
        return Err(overflow());
    }
    let parts: Vec<(u32, u64)> = coeffs
        .iter()
        .map(|&c| {
            let a = ord_p(c, 2);
            (a, (c >> a) % 8)
        })
        .collect();
    let product = |v: u64, k: u32| -> Option<Z8> {
        parts
            .iter()
            .try_fold(Z8::ONE, |acc, &(a, u)| acc.mul(gauss_coeff(v, a, u, k)?))
    };
    let term = |v: u64, k: u32, j: i64| -> Option<Z8> { Z8::root(j).mul(product(v, k)?) };
    // total scaled by 2^{n top}
    let mut total = Z8([1i128 << (n * top), 0, 0, 0]);
    for k in 1..=top {
        let mut s = Z8::ZERO;
        if k <= 3 {
            let q = 1u64 << k;
            for v in (1..q).step_by(2) {
                // e(-v m / 2^k) = z^{-v m 2^{3-k}}
                let j = -((v * (m % q)) as i64) * (1i64 << (3 - k));
                s = term(v, k, j).and_then(|t| s.add(t)).ok_or_else(overflow)?;
            }
        } else {
            let shift = k - 3;
            if m % (1u64 << shift) != 0 {
                continue;
            }
            let mq = ((m >> shift) % 8) as i64;
            for v in [1u64, 3, 5, 7] {
                s = term(v, k, -(v as i64) * mq)
                    .and_then(|t| s.add(t))
                    .ok_or_else(overflow)?;
            }
            s = s.scale(1i128 << shift).ok_or_else(overflow)?;
        }
        total = s
            .scale(1i128 << (n * (top - k)))
            .and_then(|t| total.add(t))
            .ok_or_else(overflow)?;
    }
    if total.0[1..] != [0, 0, 0] {
        return Err(Error::Inconsistent(format!(
            "2-adic density of {coeffs:?} at m={m} is not rational: {:?}",
            total.0
        )));
    }
    Ok(Q::new(
        BigInt::from(total.0[0]),
        BigInt::from(1) << (n * top),
    ))
}

/// Valuation patterns of the 2-adic closed form.
pub fn two_case_covered(alpha: &[u32]) -> bool {
    if alpha.len() != 4 {
        return false;
    }
    let a = alpha;
    a[0] <= 1
        && a[0] <= a[1]
        && a[1] <= 2
        && a[1] <= a[2]
        && a[2] <= 3
        && a[2] <= a[3]
        && a[3] <= 4
        && a[1] - a[0] <= 2
        && a[2] - a[1] <= 2
        && a[3] - a[2] <= 3
}

/// Patterns `(alpha_2, alpha_3, alpha_4)` (with `alpha_1 = 0`) for which the
/// density at 2 is claimed to lie in `[1/2, 3/2]` when `ord_2(m) <= 2`.
pub const BOUNDED_TWO_PATTERNS: [[u32; 3]; 10] = [
    [0, 0, 0],
    [0, 0, 1],
    [0, 0, 2],
    [0, 1, 1],
    [0, 1, 2],
    [0, 1, 3],
    [1, 1, 1],
    [1, 1, 2],
    [1, 2, 2],
    [1, 2, 3],
];

/// Whether the `[1/2, 3/2]` range statement applies to this pattern and `R`.
pub fn two_bounds_apply(alpha: &[u32], r: u32) -> bool {
    alpha.len() == 4
        && alpha[0] == 0
        && r <= 2
        && BOUNDED_TWO_PATTERNS.iter().any(|p| p[..] == alpha[1..])
}

/// Whether a density at 2 satisfies the `[1/2, 3/2]` range statement;
/// `None` when the statement does not apply to the pattern and `R`.
pub fn two_range_holds(alpha: &[u32], r: u32, value: &Q) -> Option<bool> {
    two_bounds_apply(alpha, r).then(|| *value >= q_frac(1, 2) && *value <= q_frac(3, 2))
}

/// `beta_closed_2`: the density at 2 on the closed-form hypothesis set.
///
/// The range statement is not enforced here: it fails for some admissible
/// forms (`(1, 1, 1, 5)` at `m = 4` has density `1/4`), so it is reported
/// separately by [`two_range_holds`].
pub fn beta_closed_2(form: &ScaledForm, m: u64) -> Result<Q> {
    let c = form.coefficients();
    if c.len() != 4 || m == 0 {
        return invalid("beta_closed_2 needs a quaternary form and m >= 1");
    }
    let mut alpha: Vec<u32> = c.iter().map(|&x| ord_p(x, 2)).collect();
    alpha.sort_unstable();
    if !two_case_covered(&alpha) {
        return Err(Error::CaseNotCovered(format!(
            "2-adic valuation pattern {alpha:?}"
        )));
    }
    static MEMO: OnceLock<Mutex<HashMap<DensityKey, Q>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    let key = DensityKey::new(c, 2, m)?;
    if let Some(v) = memo.lock().expect("2-adic memo").get(&key) {
        return Ok(v.clone());
    }
    let v = beta_gauss_2(c, m)?;
    memo.lock().expect("2-adic memo").insert(key, v.clone());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::oracle::local_density_direct;
    use crate::qform::DiagonalForm;
    use num_traits::One;

    #[test]
    fn expansion_matches_counting() {
        let forms: &[&[u64]] = &[
            &[1, 1, 1, 1],
            &[1, 1, 2, 4],
            &[1, 2, 3, 4],
            &[1, 2, 5, 15],
            &[3, 6, 12, 40],
            &[1, 1, 1, 16],
            &[5, 7],
            &[3],
            &[1, 2, 4],
        ];
        for c in forms {
            for m in 1..=70 {
                assert_eq!(
                    beta_gauss_2(c, m).unwrap(),
                    local_density_direct(c, 2, m).unwrap(),
                    "{c:?} m={m}"
                );
            }
        }
    }

    #[test]
    fn closed_examples() {
        let f = |a: &[u64]| ScaledForm::unscaled(DiagonalForm::new(a.to_vec()).unwrap());
        assert_eq!(beta_closed_2(&f(&[1, 1, 1, 1]), 1).unwrap(), Q::one());
        assert_eq!(beta_closed_2(&f(&[1, 1, 1, 1]), 2).unwrap(), q_frac(3, 2));
        let v = beta_closed_2(&f(&[1, 1, 2, 4]), 3).unwrap();
        assert_eq!(v, local_density_direct(&[1, 1, 2, 4], 2, 3).unwrap());
        assert!(matches!(
            beta_closed_2(&f(&[4, 4, 4, 4]), 1),
            Err(Error::CaseNotCovered(_))
        ));
        let low = beta_closed_2(&f(&[1, 1, 1, 5]), 4).unwrap();
        assert_eq!(low, q_frac(1, 4));
        assert_eq!(low, local_density_direct(&[1, 1, 1, 5], 2, 4).unwrap());
        assert_eq!(two_range_holds(&[0, 0, 0, 0], 2, &low), Some(false));
        assert_eq!(two_range_holds(&[0, 0, 0, 0], 3, &low), None);
    }
}
