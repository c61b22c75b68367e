//! Direct counting of `sum c_j x_j^2 = m (mod p^r)`.
//!
//! The count vectors are invariant under `t -> v^2 t` for units `v`, so they
//! are stored per orbit of that action. Orbits of `Z/p^r` are `{0}` and, for
//! `t = p^k u`, the square class of `u` modulo `p^{r-k}`: two classes for odd
//! `p` and up to four for `p = 2`. Convolution then needs only the structure
//! constants `N_o[o1][o2] = #{s : s in o1, t_o - s in o2}`, computed once per
//! `(p, r)`.
//!
//! Only levels up to the stabilization point are needed: every term of the
//! Gauss-sum expansion of level `k > R + 1` (odd `p`) or `k > R + 3`
//! (`p = 2`) vanishes, `R = ord_p(m)`, so the normalized count is constant
//! from that level on.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::arith::{is_prime, ord_p, pow_mod};
use crate::error::{invalid, Error, Result};
use crate::interval::Q;

/// Largest modulus `p^r` the oracle will count over.
pub const MODULUS_CAP: u64 = 100_000_000;

/// Largest modulus for the uncompressed full-convolution oracle.
pub const NAIVE_CAP: u64 = 5_000;

/// Orbit decomposition of `Z/p^r` under multiplication by unit squares.
struct Orbits {
    q: u64,
    count: usize,
    oid: Vec<u8>,
    sizes: Vec<u64>,
    /// `n[o][o1 * count + o2]`
    n: Vec<Vec<u64>>,
}

/// 0 for squares and 1 for non-squares modulo an odd prime.
fn nonresidue_table(p: u64) -> Vec<u8> {
    let mut t = vec![1u8; p as usize];
    for x in 1..p {
        t[(x * x % p) as usize] = 0;
    }
    t[0] = 0;
    t
}

fn orbit_count(p: u64, r: u32) -> usize {
    if p == 2 {
        1 + 4 * r as usize
    } else {
        1 + 2 * r as usize
    }
}

fn orbit_id(t: u64, p: u64, r: u32, table: &[u8]) -> usize {
    if t == 0 {
        return 0;
    }
    let k = ord_p(t, p);
    let u = t / p.pow(k);
    if p == 2 {
        let e = (r - k).min(3);
        1 + 4 * k as usize + ((u % (1 << e)) >> 1) as usize
    } else {
        1 + 2 * k as usize + table[(u % p) as usize] as usize
    }
}

impl Orbits {
    fn build(p: u64, r: u32) -> Self {
        let q = p.pow(r);
        let count = orbit_count(p, r);
        let table = if p == 2 {
            Vec::new()
        } else {
            nonresidue_table(p)
        };
        let oid: Vec<u8> = (0..q).map(|t| orbit_id(t, p, r, &table) as u8).collect();
        let mut reps = vec![u64::MAX; count];
        let mut sizes = vec![0u64; count];
        for (t, &o) in oid.iter().enumerate() {
            let o = o as usize;
            if reps[o] == u64::MAX {
                reps[o] = t as u64;
            }
            sizes[o] += 1;
        }
        let n = (0..count)
            .into_par_iter()
            .map(|o| {
                let mut row = vec![0u64; count * count];
                if sizes[o] == 0 {
                    return row;
                }
                let t = reps[o];
                for s in 0..q {
                    let d = if t >= s { t - s } else { t + q - s };
                    row[oid[s as usize] as usize * count + oid[d as usize] as usize] += 1;
                }
                row
            })
            .collect();
        Self {
            q,
            count,
            oid,
            sizes,
            n,
        }
    }

    fn get(p: u64, r: u32) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<Orbits>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(o) = cache.lock().expect("orbit cache").get(&(p, r)) {
            return o.clone();
        }
        let built = Arc::new(Self::build(p, r));
        cache
            .lock()
            .expect("orbit cache")
            .entry((p, r))
            .or_insert(built)
            .clone()
    }

    /// Per-orbit values of `t -> #{x mod q : c x^2 = t}`.
    fn single(&self, c: u64) -> Vec<u128> {
        let q = self.q as u128;
        let c = c as u128 % q;
        let mut cnt = vec![0u128; self.count];
        for x in 0..self.q as u128 {
            let t = c * (x * x % q) % q;
            cnt[self.oid[t as usize] as usize] += 1;
        }
        cnt.iter()
            .zip(&self.sizes)
            .map(|(&c, &s)| {
                if s == 0 {
                    0
                } else {
                    debug_assert_eq!(c % s as u128, 0);
                    c / s as u128
                }
            })
            .collect()
    }

    fn convolve(&self, f: &[u128], g: &[u128]) -> Vec<u128> {
        let k = self.count;
        (0..k)
            .map(|o| {
                if self.sizes[o] == 0 {
                    return 0;
                }
                let row = &self.n[o];
                let mut acc = 0u128;
                for (o1, &a) in f.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    for (o2, &b) in g.iter().enumerate() {
                        let c = row[o1 * k + o2];
                        if b != 0 && c != 0 {
                            acc += a * b * c as u128;
                        }
                    }
                }
                acc
            })
            .collect()
    }
}

fn check_modulus(p: u64, r: u32) -> Result<u64> {
    match p.checked_pow(r) {
        Some(q) if q <= MODULUS_CAP => Ok(q),
        _ => Err(Error::CapExceeded {
            what: "local density oracle modulus p^r",
            needed: format!("{p}^{r}"),
            cap: MODULUS_CAP.to_string(),
        }),
    }
}

fn check_inputs(coeffs: &[u64], p: u64) -> Result<()> {
    if coeffs.is_empty() || coeffs.len() > 4 {
        return invalid("the oracle handles 1 to 4 variables");
    }
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    Ok(())
}

/// `#{x mod p^r : sum c_j x_j^2 = m (mod p^r)}` via orbit compression.
pub fn count_mod_prime_power(coeffs: &[u64], p: u64, r: u32, m: u64) -> Result<u128> {
    check_inputs(coeffs, p)?;
    let q = check_modulus(p, r)?;
    if r == 0 {
        return Ok(1);
    }
    let orb = Orbits::get(p, r);
    let mut acc = orb.single(coeffs[0]);
    for &c in &coeffs[1..] {
        acc = orb.convolve(&acc, &orb.single(c));
    }
    Ok(acc[orb.oid[(m % q) as usize] as usize])
}

/// Same count by full cyclic convolution of the value histograms.
pub fn count_mod_prime_power_naive(coeffs: &[u64], p: u64, r: u32, m: u64) -> Result<u128> {
    check_inputs(coeffs, p)?;
    let q = p
        .checked_pow(r)
        .filter(|&q| q <= NAIVE_CAP)
        .ok_or_else(|| Error::CapExceeded {
            what: "naive oracle modulus p^r",
            needed: format!("{p}^{r}"),
            cap: NAIVE_CAP.to_string(),
        })?;
    let hist = |c: u64| {
        let mut h = vec![0u128; q as usize];
        for x in 0..q {
            h[(c % q * (x * x % q) % q) as usize] += 1;
        }
        h
    };
    let mut acc = hist(coeffs[0]);
    for &c in &coeffs[1..] {
        let h = hist(c);
        let mut out = vec![0u128; q as usize];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in h.iter().enumerate() {
                out[(i + j) % q as usize] += a * b;
            }
        }
        acc = out;
    }
    Ok(acc[(m % q) as usize])
}

/// Level from which the normalized count is constant.
pub fn stabilization_level(p: u64, r_m: u32) -> u32 {
    if p == 2 {
        r_m + 3
    } else {
        r_m + 1
    }
}

/// Normalized count `R(p^r) / p^{(l-1) r}` at one level.
pub fn normalized_count(coeffs: &[u64], p: u64, r: u32, m: u64) -> Result<Q> {
    let n = count_mod_prime_power(coeffs, p, r, m)?;
    let den = num_traits::pow(BigInt::from(p), (coeffs.len() - 1) * r as usize);
    Ok(Q::new(BigInt::from(n), den))
}

/// Local density by counting at the stabilization level `r*` and at
/// `r* + 1`; the two normalized counts must agree.
pub fn local_density_direct(coeffs: &[u64], p: u64, m: u64) -> Result<Q> {
    check_inputs(coeffs, p)?;
    if m == 0 {
        return invalid("local densities are computed for m >= 1");
    }
    let rs = stabilization_level(p, ord_p(m, p));
    check_modulus(p, rs + 1)?;
    let a = normalized_count(coeffs, p, rs, m)?;
    let b = normalized_count(coeffs, p, rs + 1, m)?;
    if a != b {
        return Err(Error::Inconsistent(format!(
            "density of {coeffs:?} at p={p}, m={m} not stable: {a} at level {rs}, {b} at level {}",
            rs + 1
        )));
    }
    Ok(a)
}

/// Square-class invariant of a unit: the Legendre class for odd `p`, the
/// residue mod 8 for `p = 2`.
fn unit_class(u: u64, p: u64) -> u8 {
    if p == 2 {
        (u % 8) as u8
    } else if pow_mod(u % p, (p - 1) / 2, p) == 1 {
        1
    } else {
        0
    }
}

fn class_rep(class: u8, p: u64) -> u64 {
    if p == 2 {
        return class as u64;
    }
    if class == 1 {
        return 1;
    }
    (2..p)
        .find(|&n| pow_mod(n, (p - 1) / 2, p) != 1)
        .expect("odd primes have non-residues")
}

/// Canonical data on which the density depends: `p`, the sorted pairs
/// (valuation, unit square class) of the coefficients, `ord_p(m)` and the
/// class of `m / p^R`. Valuations are capped at the last level counted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DensityKey {
    pub p: u64,
    pub parts: Vec<(u32, u8)>,
    pub r: u32,
    pub m_class: u8,
}

impl DensityKey {
    pub fn new(coeffs: &[u64], p: u64, m: u64) -> Result<Self> {
        check_inputs(coeffs, p)?;
        if m == 0 || coeffs.contains(&0) {
            return invalid("density keys need positive coefficients and m");
        }
        let r = ord_p(m, p);
        let top = stabilization_level(p, r) + 1;
        let mut parts: Vec<(u32, u8)> = coeffs
            .iter()
            .map(|&c| {
                let a = ord_p(c, p);
                if a >= top {
                    (top, 1)
                } else {
                    (a, unit_class(c / p.pow(a), p))
                }
            })
            .collect();
        parts.sort_unstable();
        let m_class = unit_class(m / p.pow(r), p);
        Ok(Self {
            p,
            parts,
            r,
            m_class,
        })
    }

    /// Coefficients and target realizing this key.
    pub fn representative(&self) -> Result<(Vec<u64>, u64)> {
        let p = self.p;
        let pw = |e: u32| {
            p.checked_pow(e).ok_or_else(|| Error::CapExceeded {
                what: "density key representative",
                needed: format!("{p}^{e}"),
                cap: u64::MAX.to_string(),
            })
        };
        let mut c = Vec::with_capacity(self.parts.len());
        for &(a, cl) in &self.parts {
            c.push(pw(a)? * class_rep(cl, p));
        }
        Ok((c, pw(self.r)? * class_rep(self.m_class, p)))
    }
}

/// Memoized oracle value for a canonical key.
pub fn density_for_key(key: &DensityKey) -> Result<Q> {
    static MEMO: OnceLock<Mutex<HashMap<DensityKey, Q>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(v) = memo.lock().expect("density memo").get(key) {
        return Ok(v.clone());
    }
    let (c, m) = key.representative()?;
    let v = local_density_direct(&c, key.p, m)?;
    memo.lock()
        .expect("density memo")
        .insert(key.clone(), v.clone());
    Ok(v)
}

/// Local density of `sum c_j x_j^2` at `p` for target `m`, by counting.
pub fn local_density_oracle(coeffs: &[u64], p: u64, m: u64) -> Result<Q> {
    density_for_key(&DensityKey::new(coeffs, p, m)?)
}
