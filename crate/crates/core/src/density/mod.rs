//! Local densities of diagonal quaternary forms, the Siegel Eisenstein
//! coefficient as an Euler product, and the sieve weights built from ratios of
//! local densities.
//!
//! The counting oracle is the reference engine. The Gauss-sum evaluations in
//! [`odd`] and [`two`] are accelerators that are checked against it.

pub mod odd;
pub mod oracle;
pub mod two;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::arith::{factor, is_prime, ord_p, primes_up_to};
use crate::error::{invalid, Error, Result};
use crate::gauss::kronecker;
use crate::interval::{pi_series, q_frac, q_int, sqrt, RationalInterval, Q};
use crate::qform::{DiagonalForm, ScaledForm};

pub use odd::{beta_closed_odd, beta_gauss_odd, odd_case_covered};
pub use oracle::{
    count_mod_prime_power, count_mod_prime_power_naive, density_for_key, local_density_direct,
    local_density_oracle, normalized_count, stabilization_level, DensityKey, MODULUS_CAP,
    NAIVE_CAP,
};
pub use two::{
    beta_closed_2, beta_gauss_2, two_bounds_apply, two_case_covered, two_range_holds,
    BOUNDED_TWO_PATTERNS,
};

/// Lower prime of the sieve range: primes `p >= SIEVE_PRIME_FLOOR` are sifted.
pub const SIEVE_PRIME_FLOOR: u64 = 7;

/// A quaternary scaled form, a prime and a target, with the `p`-adic data the
/// density formulas are stated in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDensityInput {
    form: ScaledForm,
    p: u64,
    m: u64,
    alpha: Vec<u32>,
    units: Vec<u64>,
    r: u32,
    m_prime: u64,
}

impl LocalDensityInput {
    pub fn new(form: ScaledForm, p: u64, m: u64) -> Result<Self> {
        if form.coefficients().len() != 4 {
            return invalid(format!(
                "local densities need a quaternary form, got {}",
                form.coefficients().len()
            ));
        }
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if m == 0 {
            return invalid("local densities need m >= 1");
        }
        let mut pairs: Vec<(u32, u64)> = form
            .coefficients()
            .iter()
            .map(|&c| {
                let a = ord_p(c, p);
                (a, c / p.pow(a))
            })
            .collect();
        pairs.sort_unstable();
        let r = ord_p(m, p);
        Ok(Self {
            p,
            m,
            alpha: pairs.iter().map(|x| x.0).collect(),
            units: pairs.iter().map(|x| x.1).collect(),
            r,
            m_prime: m / p.pow(r),
            form,
        })
    }

    pub fn form(&self) -> &ScaledForm {
        &self.form
    }

    pub fn coefficients(&self) -> &[u64] {
        self.form.coefficients()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `ord_p` of the scaled coefficients, ascending.
    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    /// Prime-to-`p` parts of the scaled coefficients, in the order of `alpha`.
    pub fn units(&self) -> &[u64] {
        &self.units
    }

    /// `R = ord_p(m)`.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// `m / p^R`.
    pub fn m_prime(&self) -> u64 {
        self.m_prime
    }

    /// Partial sums `alpha_1 + ... + alpha_j` for `j = 1..4`.
    pub fn partial_sums(&self) -> Vec<u32> {
        self.alpha
            .iter()
            .scan(0, |s, &a| {
                *s += a;
                Some(*s)
            })
            .collect()
    }
}

/// The local density by counting solutions modulo prime powers.
pub fn beta_oracle(input: &LocalDensityInput) -> Result<Q> {
    local_density_oracle(input.coefficients(), input.p(), input.m())
}

/// Local density at any prime from the Gauss-sum expansions, memoized by
/// the square-class data it depends on. Used inside the Euler product, where
/// primes can exceed the oracle's modulus cap.
fn beta_fast(coeffs: &[u64], p: u64, m: u64) -> Result<Q> {
    static MEMO: OnceLock<Mutex<HashMap<DensityKey, Q>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    let key = DensityKey::new(coeffs, p, m)?;
    if let Some(v) = memo.lock().expect("density memo").get(&key) {
        return Ok(v.clone());
    }
    let v = if p == 2 {
        beta_gauss_2(coeffs, m)?
    } else {
        beta_gauss_odd(coeffs, p, m)?
    };
    memo.lock().expect("density memo").insert(key, v.clone());
    Ok(v)
}

/// Enclosure of the archimedean density `4 pi^2 m / sqrt(Delta)`.
pub fn beta_infinity(form: &ScaledForm, m: u64, bits: u64) -> Result<RationalInterval> {
    if m == 0 {
        return invalid("beta_infinity needs m >= 1");
    }
    let disc = form.discriminant();
    let root = sqrt(&RationalInterval::point(Q::from_integer(disc.into())), bits)?;
    let pi = pi_series(bits);
    let num = (&pi * &pi).scale(&q_int(4 * m as i64));
    Ok(num.div(&root)?.round_out(bits))
}

/// The generic Euler factor `1 - (prod c / p) p^{-2}` at `p` not dividing `2 m prod c`.
fn generic_factor(det: u128, p: u64) -> Q {
    let chi = kronecker((det % p as u128) as i64, p as i64).expect("p > 0");
    Q::one() - q_frac(chi as i64, (p * p) as i64)
}

/// Generic product over primes `p <= cutoff` not dividing `2 det`, cached by
/// `(det, cutoff, bits)`.
fn generic_product(det: u128, cutoff: u64, bits: u64) -> Arc<RationalInterval> {
    type Cache = Mutex<HashMap<(u128, u64, u64), Arc<RationalInterval>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("euler cache").get(&(det, cutoff, bits)) {
        return v.clone();
    }
    let mut acc = RationalInterval::int(1);
    for p in primes_up_to(cutoff) {
        if p == 2 || det % p as u128 == 0 {
            continue;
        }
        acc = acc.scale(&generic_factor(det, p)).round_out(bits);
    }
    let v = Arc::new(acc);
    cache
        .lock()
        .expect("euler cache")
        .insert((det, cutoff, bits), v.clone());
    v
}

/// Enclosure of the Siegel Eisenstein coefficient `a_E(m) = beta_inf prod_p beta_p`.
///
/// Primes up to `cutoff` are taken exactly. Beyond it every factor is
/// `1 +- p^{-2}`, and the tail is enclosed in `[1 - 2/P, 1 + 2/P]`.
pub fn eisenstein_coefficient(
    form: &ScaledForm,
    m: u64,
    cutoff: u64,
    bits: u64,
) -> Result<RationalInterval> {
    if form.coefficients().len() != 4 {
        return invalid("eisenstein_coefficient needs a quaternary form");
    }
    if m == 0 || m > 1_000_000 {
        return invalid(format!(
            "eisenstein_coefficient needs 1 <= m <= 10^6, got {m}"
        ));
    }
    if cutoff < 2 {
        return invalid("cutoff must be at least 2");
    }
    let det = form.scaled().determinant();
    let mut bad: Vec<u64> = vec![2];
    for c in form.coefficients() {
        bad.extend(factor(*c)?.primes());
    }
    let bad_det = bad.clone();
    bad.extend(factor(m)?.primes());
    bad.sort_unstable();
    bad.dedup();
    let largest = *bad.last().expect("contains 2");
    if cutoff < largest {
        return Err(Error::InvalidArgument(format!(
            "cutoff {cutoff} is below the largest prime {largest} of 2 Delta m"
        )));
    }
    let mut acc = (*generic_product(det, cutoff, bits)).clone();
    let mut exact = Q::one();
    for &p in &bad {
        let beta = beta_fast(form.coefficients(), p, m)?;
        if bad_det.contains(&p) {
            exact *= beta;
        } else {
            exact *= beta / generic_factor(det, p);
        }
    }
    acc = acc.scale(&exact);
    let tail = RationalInterval::new(
        Q::one() - q_frac(2, cutoff as i64),
        Q::one() + q_frac(2, cutoff as i64),
    )?;
    let inf = beta_infinity(form, m, bits)?;
    Ok((&(&acc * &tail) * &inf).round_out(bits))
}

/// `omega_nu(p) = beta_{a d^2, p}(m) / beta_{a, p}(m)` for a scaling vector
/// `d`. Only the `p`-part of `d` matters.
pub fn omega_nu(a: &DiagonalForm, d: &[u64], p: u64, m: u64) -> Result<Q> {
    if a.dim() != 4 || d.len() != 4 {
        return invalid("omega_nu needs a quaternary form and four scalings");
    }
    let scaled: Vec<u64> = a
        .coefficients()
        .iter()
        .zip(d)
        .map(|(&c, &dj)| if dj % p == 0 { c * p * p } else { c })
        .collect();
    let base = local_density_oracle(a.coefficients(), p, m)?;
    if base.is_zero() {
        return Err(Error::ZeroDensity(format!(
            "{a} does not represent {m} over Z_{p}"
        )));
    }
    Ok(local_density_oracle(&scaled, p, m)? / base)
}

/// `omega(d, m) = prod_{p | prod d_j} omega_nu(p)` for squarefree `d_j`.
pub fn omega_weight(a: &DiagonalForm, d: &[u64], m: u64) -> Result<Q> {
    if d.len() != 4 || d.contains(&0) {
        return invalid("omega_weight needs four positive scalings");
    }
    let mut primes: Vec<u64> = Vec::new();
    for &dj in d {
        let f = factor(dj)?;
        if f.pairs().iter().any(|&(_, e)| e > 1) {
            return invalid(format!("scaling {dj} is not squarefree"));
        }
        primes.extend(f.primes());
    }
    primes.sort_unstable();
    primes.dedup();
    let mut w = Q::one();
    for p in primes {
        w *= omega_nu(a, d, p, m)?;
        if w.is_zero() {
            break;
        }
    }
    Ok(w)
}

/// The sieve density
/// `Omega(p) = sum_{S nonempty} (-1)^{|S|+1} omega_S(p) / p^{|S|-1}`,
/// where `omega_S` scales the coordinates in `S` by `p`.
pub fn big_omega_weight(p: u64, a: &DiagonalForm, m: u64) -> Result<Q> {
    if a.dim() != 4 {
        return invalid("big_omega_weight needs a quaternary form");
    }
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    let mut total = Q::zero();
    for mask in 1u32..16 {
        let d: Vec<u64> = (0..4)
            .map(|j| if mask >> j & 1 == 1 { p } else { 1 })
            .collect();
        let size = mask.count_ones();
        let w = omega_nu(a, &d, p, m)? / q_int(p as i64).pow(size as i32 - 1);
        if size % 2 == 1 {
            total += w;
        } else {
            total -= w;
        }
    }
    Ok(total)
}

/// `W(z) = prod_{7 <= p < z} (1 - Omega(p)/p)`, exact.
pub fn sifting_product(a: &DiagonalForm, m: u64, z: u64) -> Result<Q> {
    let mut w = Q::one();
    for p in primes_up_to(z.saturating_sub(1)) {
        if p < SIEVE_PRIME_FLOOR {
            continue;
        }
        w *= Q::one() - big_omega_weight(p, a, m)? / q_int(p as i64);
    }
    Ok(w)
}

/// Whether an exact value is a nonnegative rational, as densities must be.
pub fn is_admissible_density(v: &Q) -> bool {
    !v.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qform::{jacobi_r4, representation_count};

    fn form(a: &[u64]) -> DiagonalForm {
        DiagonalForm::new(a.to_vec()).unwrap()
    }

    #[test]
    fn input_fields() {
        let f = ScaledForm::new(form(&[1, 2, 3, 4]), vec![1, 1, 3, 1]).unwrap();
        let i = LocalDensityInput::new(f, 3, 18).unwrap();
        assert_eq!(i.alpha(), &[0, 0, 0, 3]);
        assert_eq!(i.units(), &[1, 2, 4, 1]);
        assert_eq!(i.r(), 2);
        assert_eq!(i.m_prime(), 2);
        assert_eq!(i.partial_sums(), vec![0, 0, 0, 3]);
        assert!(LocalDensityInput::new(ScaledForm::unscaled(form(&[1, 1, 1])), 3, 1).is_err());
    }

    #[test]
    fn oracle_examples() {
        let f =
            |p, m| LocalDensityInput::new(ScaledForm::unscaled(form(&[1, 1, 1, 1])), p, m).unwrap();
        assert_eq!(beta_oracle(&f(3, 1)).unwrap(), q_frac(8, 9));
        assert_eq!(beta_oracle(&f(5, 1)).unwrap(), q_frac(24, 25));
        assert_eq!(beta_oracle(&f(7, 7)).unwrap(), q_frac(384, 343));
    }

    #[test]
    fn archimedean_density() {
        let one = ScaledForm::unscaled(form(&[1, 1, 1, 1]));
        let b = beta_infinity(&one, 1, 128).unwrap();
        let pi = pi_series(128);
        assert!(b.overlaps(&(&pi * &pi)));
        let b = beta_infinity(&ScaledForm::unscaled(form(&[1, 2, 3, 4])), 1, 128).unwrap();
        let f = 4.0 * std::f64::consts::PI.powi(2) / 384f64.sqrt();
        assert!((b.lo_f64() - f).abs() < 1e-12);
    }

    #[test]
    fn eisenstein_matches_class_number_one_forms() {
        // sum of four squares and x^2 + y^2 + 2z^2 + 2w^2 have one class per genus
        for a in [[1u64, 1, 1, 1], [1, 1, 2, 2]] {
            let f = ScaledForm::unscaled(form(&a));
            for m in 1..=60 {
                let e = eisenstein_coefficient(&f, m, 10_000, 96).unwrap();
                let r = representation_count(&f, m).unwrap();
                assert!(e.contains(&q_int(r as i64)), "{a:?} m={m} r={r} e={e:?}");
            }
        }
        let f = ScaledForm::unscaled(form(&[1, 1, 1, 1]));
        assert!(eisenstein_coefficient(&f, 8, 10_000, 96)
            .unwrap()
            .contains(&q_int(24)));
        assert_eq!(jacobi_r4(8), 24);
        assert!(eisenstein_coefficient(&f, 101, 100, 96).is_err());
    }

    #[test]
    fn scaled_eisenstein_identity() {
        let a = form(&[1, 2, 3, 5]);
        for (d, m) in [
            ([7u64, 1, 1, 1], 3u64),
            ([7, 11, 1, 1], 10),
            ([1, 1, 7, 7], 14),
            ([77, 1, 1, 13], 6),
        ] {
            let scaled = ScaledForm::new(a.clone(), d.to_vec()).unwrap();
            let lhs = eisenstein_coefficient(&scaled, m, 5_000, 96).unwrap();
            let x = eisenstein_coefficient(&ScaledForm::unscaled(a.clone()), m, 5_000, 96).unwrap();
            let prod: u64 = d.iter().product();
            let w = omega_weight(&a, &d, m).unwrap();
            let rhs = x.scale(&(w / q_int(prod as i64)));
            assert!(lhs.overlaps(&rhs), "d={d:?} m={m}");
        }
    }

    #[test]
    fn omega_examples() {
        let a = form(&[1, 1, 1, 1]);
        assert_eq!(omega_nu(&a, &[1, 1, 1, 1], 7, 3).unwrap(), Q::one());
        assert_eq!(omega_nu(&a, &[7, 7, 7, 7], 7, 3).unwrap(), Q::zero());
        let direct = local_density_direct(&[49, 1, 1, 1], 7, 3).unwrap()
            / local_density_direct(&[1, 1, 1, 1], 7, 3).unwrap();
        assert_eq!(omega_nu(&a, &[7, 1, 1, 1], 7, 3).unwrap(), direct);
        // multiplicativity over composite scalings
        let d = [7u64 * 11, 11, 1, 13];
        let w = omega_weight(&a, &d, 5).unwrap();
        let parts = omega_nu(&a, &d, 7, 5).unwrap()
            * omega_nu(&a, &d, 11, 5).unwrap()
            * omega_nu(&a, &d, 13, 5).unwrap();
        assert_eq!(w, parts);
    }

    #[test]
    fn omega_one_bound_and_big_omega_bounds() {
        let a = form(&[1, 2, 3, 5]);
        for p in [7u64, 11, 13, 17, 19] {
            for m in [1u64, 2, 4, 6] {
                let w1 = omega_nu(&a, &[p, 1, 1, 1], p, m).unwrap();
                assert!(w1 <= Q::one() + q_frac(2, p as i64));
                let o = big_omega_weight(p, &a, m).unwrap();
                if p >= 11 {
                    assert!(o <= q_int(4), "p={p} m={m} Omega={o}");
                }
            }
        }
        assert!(big_omega_weight(5, &form(&[1, 1, 1, 1]), 1).unwrap() <= q_frac(9, 2));
        let o = big_omega_weight(7, &form(&[1, 1, 2, 7]), 7).unwrap();
        assert!(o <= q_frac(687, 100), "Omega(7) = {o}");
    }

    #[test]
    fn sifting_product_positive() {
        for a in [[1u64, 1, 1, 1], [1, 2, 3, 5], [1, 2, 5, 10]] {
            for m in [1u64, 3, 30] {
                let w = sifting_product(&form(&a), m, 200).unwrap();
                assert!(w.is_positive(), "{a:?} m={m}");
            }
        }
        assert_eq!(
            sifting_product(&form(&[1, 1, 1, 1]), 1, 7).unwrap(),
            Q::one()
        );
    }
}
