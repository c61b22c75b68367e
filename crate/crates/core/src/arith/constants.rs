//! Rigorous enclosures of the explicit product constants bounding divisor
//! functions: `C_alpha`, `G_alpha`, `D_alpha`, `E_alpha` and `c_delta`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::{is_prime, primes_up_to};
use crate::error::{invalid, Error, Result};
use crate::interval::{self, bits_for_digits, q_int, RationalInterval, DEFAULT_DIGITS, Q};

/// Which product constant to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstantName {
    /// `prod_{p < 2^{1/a}} max_{j>=1} (j+1)/p^{ja}` (divisor count).
    CAlpha,
    /// `prod_{p^a (p-1) < p} max_{j>=0} sigma_{-1}(p^j)/p^{ja}`.
    GAlpha,
    /// `prod_{p < 2^{1/a}} 2/p^a`.
    DAlpha,
    /// `prod_{p < 3^{1/a}} 3/p^a`.
    EAlpha,
    /// `prod_{p < p0} (1+1/p)/p^d` with `p0` the least admissible prime.
    CDelta,
}

impl ConstantName {
    pub const ALL: [ConstantName; 5] = [
        ConstantName::CAlpha,
        ConstantName::GAlpha,
        ConstantName::DAlpha,
        ConstantName::EAlpha,
        ConstantName::CDelta,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConstantName::CAlpha => "C_alpha",
            ConstantName::GAlpha => "G_alpha",
            ConstantName::DAlpha => "D_alpha",
            ConstantName::EAlpha => "E_alpha",
            ConstantName::CDelta => "c_delta",
        }
    }
}

impl fmt::Display for ConstantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstantName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ConstantName::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown constant {s:?}")))
    }
}

/// Evaluation settings.
#[derive(Clone, Debug)]
pub struct ConstantOptions {
    /// Maximum number of primes a product may range over.
    pub prime_cap: usize,
    /// Binary working precision.
    pub bits: u64,
}

impl Default for ConstantOptions {
    fn default() -> Self {
        Self {
            prime_cap: 2_000_000,
            bits: bits_for_digits(DEFAULT_DIGITS),
        }
    }
}

/// Evaluated constant with the primes it ranged over.
#[derive(Clone, Debug)]
pub struct ConstantValue {
    pub name: ConstantName,
    pub parameter: Q,
    pub value: RationalInterval,
    pub prime_count: usize,
    /// Largest prime included in the product.
    pub largest_prime: u64,
    /// For `c_delta`, the cut-off prime `p0` (excluded from the product).
    pub p0: Option<u64>,
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn ipow(b: &BigInt, e: &BigInt) -> BigInt {
    num_traits::pow(b.clone(), e.to_usize().expect("small exponent"))
}

/// Ascending primes while `keep(p)` holds; `keep` must be monotone
/// (true on an initial segment).
fn initial_segment(keep: impl Fn(u64) -> bool, cap: usize, what: &'static str) -> Result<Vec<u64>> {
    let mut limit = 1024u64;
    loop {
        let ps = primes_up_to(limit);
        if let Some(i) = ps.iter().position(|&p| !keep(p)) {
            let out = ps[..i].to_vec();
            if out.len() > cap {
                return Err(cap_error(what, out.len(), cap));
            }
            return Ok(out);
        }
        if ps.len() > cap {
            return Err(cap_error(what, ps.len(), cap));
        }
        limit = limit
            .checked_mul(2)
            .ok_or_else(|| cap_error(what, usize::MAX, cap))?;
        if limit > 1 << 36 {
            return Err(cap_error(what, ps.len(), cap));
        }
    }
}

fn cap_error(what: &'static str, needed: usize, cap: usize) -> Error {
    Error::CapExceeded {
        what,
        needed: if needed == usize::MAX {
            "more primes than addressable".into()
        } else {
            format!("more than {needed} primes")
        },
        cap: format!("{cap} primes"),
    }
}

/// Least prime `p0` with `p0 > (1 + 1/p0)^{1/delta}`.
pub fn c_delta_p0(delta: &Q, opts: &ConstantOptions) -> Result<u64> {
    if !delta.is_positive() {
        return invalid("delta must be positive");
    }
    let d = delta.to_f64().unwrap_or(0.0);
    if d <= 0.0 {
        return invalid("delta underflows");
    }
    // g(p) = ln p - ln(1+1/p)/delta is increasing in p
    let g = |p: u64| (p as f64).ln() - (1.0 / p as f64).ln_1p() / d;
    let mut lo = 2u64;
    let mut hi = 2u64;
    while g(hi) <= 0.0 {
        lo = hi;
        hi = hi
            .checked_mul(2)
            .ok_or_else(|| invalid::<()>("delta too small").unwrap_err())?;
        if hi > 1 << 40 {
            return Err(cap_error(
                "c_delta cut-off search",
                usize::MAX,
                opts.prime_cap,
            ));
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut p = hi.saturating_sub(64).max(2);
    // exact confirmation near the float root
    let ok = |p: u64| -> Result<Option<bool>> {
        let mut bits = opts.bits;
        for _ in 0..5 {
            let lp = interval::ln(&RationalInterval::int(p as i64), bits)?;
            let rhs = interval::ln(&RationalInterval::point(Q::new(big(p + 1), big(p))), bits)?
                .scale(&delta.recip());
            if rhs.certainly_lt(&lp) {
                return Ok(Some(true));
            }
            if lp.certainly_le(&rhs) {
                return Ok(Some(false));
            }
            bits *= 2;
        }
        Ok(None)
    };
    loop {
        if is_prime(p) {
            match ok(p)? {
                Some(true) => break,
                Some(false) => {}
                None => {
                    return Err(Error::Inconsistent(format!(
                        "cannot decide the c_delta hypothesis at p = {p}"
                    )))
                }
            }
        }
        p += 1;
    }
    // every smaller prime must fail; g is monotone, so checking the previous
    // prime suffices
    let mut q = p - 1;
    while q >= 2 && !is_prime(q) {
        q -= 1;
    }
    if q >= 2 && ok(q)? != Some(false) {
        return Err(Error::Inconsistent(format!(
            "prime {q} below p0 = {p} also qualifies"
        )));
    }
    Ok(p)
}

/// `p^{-a}` as an interval.
fn inv_power(p: u64, a: &Q, bits: u64) -> Result<RationalInterval> {
    let l = interval::ln(&RationalInterval::int(p as i64), bits + 16)?;
    Ok(interval::exp(&l.scale(&-a), bits + 16))
}

/// Maximum over `j in [j0, ...)` of a unimodal sequence given by `value`,
/// using `ratio(j) = value(j+1)/value(j)` (decreasing in `j`) to stop once the
/// sequence certainly decreases.
fn unimodal_max(
    j0: u32,
    value: impl Fn(u32) -> RationalInterval,
    ratio: impl Fn(u32) -> RationalInterval,
) -> RationalInterval {
    let mut best = value(j0);
    let mut j = j0;
    while !ratio(j).certainly_lt(&RationalInterval::int(1)) {
        j += 1;
        best = best.max(&value(j));
        assert!(j < 100_000, "unimodal search did not terminate");
    }
    best
}

/// `explicit_constant(name, parameter)`: rigorous enclosure of the product.
pub fn explicit_constant(
    name: ConstantName,
    param: &Q,
    opts: &ConstantOptions,
) -> Result<ConstantValue> {
    if !param.is_positive() {
        return invalid("parameter must be positive");
    }
    let bits = opts.bits;
    let (num, den) = (param.numer().clone(), param.denom().clone());
    let mut p0 = None;
    let primes = match name {
        // p < r^{1/a}  <=>  p^num < r^den
        ConstantName::CAlpha | ConstantName::DAlpha | ConstantName::EAlpha => {
            let r = if name == ConstantName::EAlpha {
                3u64
            } else {
                2
            };
            let rhs = ipow(&big(r), &den);
            if num > BigInt::from(64) {
                return invalid("parameter numerator too large");
            }
            initial_segment(|p| ipow(&big(p), &num) < rhs, opts.prime_cap, name.as_str())?
        }
        // p^a (p - 1) < p  <=>  p^num (p-1)^den < p^den
        ConstantName::GAlpha => initial_segment(
            |p| ipow(&big(p), &num) * ipow(&big(p - 1), &den) < ipow(&big(p), &den),
            opts.prime_cap,
            name.as_str(),
        )?,
        ConstantName::CDelta => {
            let p = c_delta_p0(param, opts)?;
            p0 = Some(p);
            initial_segment(|q| q < p, opts.prime_cap, name.as_str())?
        }
    };
    let mut acc = RationalInterval::int(1);
    for &p in &primes {
        let x = inv_power(p, param, bits)?;
        let factor = match name {
            ConstantName::CAlpha => unimodal_max(
                1,
                |j| x.powi(j).scale(&q_int(j as i64 + 1)),
                |j| x.scale(&Q::new(big(j as u64 + 2), big(j as u64 + 1))),
            ),
            ConstantName::GAlpha => {
                let pq = q_int(p as i64);
                let s = |j: u32| -> Q {
                    // sigma_{-1}(p^j) = (1 - p^{-j-1}) / (1 - p^{-1})
                    (Q::one() - num_traits::pow(pq.recip(), j as usize + 1))
                        / (Q::one() - pq.recip())
                };
                unimodal_max(
                    0,
                    |j| x.powi(j).scale(&s(j)),
                    |j| x.scale(&(s(j + 1) / s(j))),
                )
            }
            ConstantName::DAlpha => x.scale(&q_int(2)),
            ConstantName::EAlpha => x.scale(&q_int(3)),
            ConstantName::CDelta => x.scale(&Q::new(big(p + 1), big(p))),
        };
        acc = (&acc * &factor).round_out(bits);
    }
    Ok(ConstantValue {
        name,
        parameter: param.clone(),
        value: acc,
        prime_count: primes.len(),
        largest_prime: primes.last().copied().unwrap_or(1),
        p0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{q_dec, q_frac};

    fn eval(name: ConstantName, p: Q) -> ConstantValue {
        explicit_constant(name, &p, &ConstantOptions::default()).unwrap()
    }

    #[test]
    fn small_products_by_hand() {
        // E_{1/2}: primes below 9 are 2,3,5,7 -> 81 / sqrt(210)
        let v = eval(ConstantName::EAlpha, q_frac(1, 2));
        assert_eq!(v.prime_count, 4);
        let exact = 81.0 / 210f64.sqrt();
        assert!((v.value.lo_f64() - exact).abs() < 1e-12);
        // D_1: only p = 2 lies below 2, giving nothing -> empty product 1
        let d = eval(ConstantName::DAlpha, q_int(1));
        assert_eq!(d.prime_count, 0);
        assert_eq!(d.value, RationalInterval::int(1));
    }

    #[test]
    fn c_delta_cutoff() {
        let p0 = c_delta_p0(&q_dec("1e-6"), &ConstantOptions::default()).unwrap();
        assert_eq!(p0, 87853);
        assert_eq!(
            c_delta_p0(&q_frac(1, 2), &ConstantOptions::default()).unwrap(),
            3
        );
    }

    #[test]
    fn cap_exceeded_is_reported() {
        let opts = ConstantOptions {
            prime_cap: 100,
            ..Default::default()
        };
        let e = explicit_constant(ConstantName::CAlpha, &q_frac(1, 15), &opts).unwrap_err();
        assert!(matches!(e, Error::CapExceeded { .. }));
    }

    #[test]
    fn names_parse() {
        for n in ConstantName::ALL {
            assert_eq!(n.as_str().parse::<ConstantName>().unwrap(), n);
        }
        assert!("zeta".parse::<ConstantName>().is_err());
    }
}
