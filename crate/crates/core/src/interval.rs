//! Exact rational intervals with outward rounding, plus rigorous enclosures of
//! `exp`, `ln`, `sqrt`, real powers and the constants pi, gamma and e.
//!
//! Transcendental functions work in binary fixed point with an explicit count
//! of rounding errors; the result is always widened by that count, so every
//! returned interval contains the true value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

pub type Q = BigRational;

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 60;

/// Binary precision used for a given number of decimal digits.
pub fn bits_for_digits(digits: u32) -> u64 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u64 + 16
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_big(n: BigInt) -> Q {
    Q::from_integer(n)
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses a plain decimal literal such as `-12.5e-3` into an exact rational.
pub fn q_dec(s: &str) -> Q {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (
            &s[..i],
            s[i + 1..].parse::<i64>().expect("decimal exponent"),
        ),
        None => (s, 0),
    };
    let neg = mant.starts_with('-');
    let mant = mant.trim_start_matches(['-', '+']);
    let (int, frac) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    let digits: BigInt = format!("{int}{frac}").parse().expect("decimal digits");
    let e = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut v = if e >= 0 {
        q_big(digits * num_traits::pow(ten, e as usize))
    } else {
        Q::new(digits, num_traits::pow(ten, (-e) as usize))
    };
    if neg {
        v = -v;
    }
    v
}

/// Rough `log2 |v|`, exact to within one.
fn log2_estimate(v: &Q) -> i64 {
    v.numer().bits() as i64 - v.denom().bits() as i64
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn floor_scaled(v: &Q, k: i64) -> BigInt {
    // floor(v * 2^k)
    if k >= 0 {
        (v.numer() << k as u64).div_floor(v.denom())
    } else {
        v.numer().div_floor(&(v.denom() << (-k) as u64))
    }
}

fn from_scaled(n: BigInt, k: i64) -> Q {
    if k >= 0 {
        Q::new(n, pow2(k as u64))
    } else {
        q_big(n << (-k) as u64)
    }
}

fn round_down(v: &Q, bits: u64) -> Q {
    if v.is_zero() {
        return v.clone();
    }
    let k = bits as i64 - log2_estimate(v);
    from_scaled(floor_scaled(v, k), k)
}

fn round_up(v: &Q, bits: u64) -> Q {
    -round_down(&-v, bits)
}

/// A closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: Q,
    hi: Q,
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", self.lo_f64(), self.hi_f64())
    }
}

impl RationalInterval {
    pub fn new(lo: Q, hi: Q) -> Result<Self> {
        if lo > hi {
            return invalid(format!("interval endpoints reversed: {lo} > {hi}"));
        }
        Ok(Self { lo, hi })
    }

    fn raw(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(v: Q) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn int(n: i64) -> Self {
        Self::point(q_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::point(q_frac(n, d))
    }

    /// Interval from decimal literals for the two endpoints.
    pub fn dec(lo: &str, hi: &str) -> Self {
        Self::raw(q_dec(lo), q_dec(hi))
    }

    pub fn lo(&self) -> &Q {
        &self.lo
    }

    pub fn hi(&self) -> &Q {
        &self.hi
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) / q_int(2)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    pub fn contains(&self, v: &Q) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// True when every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    /// True when every point of `self` is at most every point of `other`.
    pub fn certainly_le(&self, other: &Self) -> bool {
        self.hi <= other.lo
    }

    /// Three-way comparison; `None` when the intervals overlap.
    pub fn compare(&self, other: &Self) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self::raw(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    /// Pointwise maximum of two quantities.
    pub fn max(&self, other: &Self) -> Self {
        Self::raw(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    /// Pointwise minimum of two quantities.
    pub fn min(&self, other: &Self) -> Self {
        Self::raw(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
        )
    }

    pub fn abs(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            Self::raw(Q::zero(), (-&self.lo).max(self.hi.clone()))
        } else if self.hi.is_negative() || self.hi.is_zero() {
            Self::raw(-&self.hi, -&self.lo)
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            Self::raw(b, a)
        } else {
            Self::raw(a, b)
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if !self.lo.is_positive() && !self.hi.is_negative() {
            return invalid("reciprocal of an interval containing zero");
        }
        Ok(Self::raw(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Self::int(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        if e % 2 == 0 {
            // even powers are non-negative even when the base straddles zero
            let lo = acc.lo.clone().max(Q::zero());
            return Self::raw(lo, acc.hi);
        }
        acc
    }

    /// Widens the endpoints to dyadic rationals carrying about `bits`
    /// significant bits, keeping representations small.
    pub fn round_out(&self, bits: u64) -> Self {
        let big = |v: &Q| v.numer().bits() + v.denom().bits() > 2 * bits + 64;
        let lo = if big(&self.lo) {
            round_down(&self.lo, bits)
        } else {
            self.lo.clone()
        };
        let hi = if big(&self.hi) {
            round_up(&self.hi, bits)
        } else {
            self.hi.clone()
        };
        Self::raw(lo, hi)
    }

    /// Formats both endpoints as `num/den` strings.
    pub fn to_strings(&self) -> (String, String) {
        (rational_string(&self.lo), rational_string(&self.hi))
    }
}

/// `num/den` rendering used in machine-readable output.
pub fn rational_string(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

impl<'a> Add<&'a RationalInterval> for &'a RationalInterval {
    type Output = RationalInterval;
    fn add(self, o: &RationalInterval) -> RationalInterval {
        RationalInterval::raw(&self.lo + &o.lo, &self.hi + &o.hi)
    }
}

impl<'a> Sub<&'a RationalInterval> for &'a RationalInterval {
    type Output = RationalInterval;
    fn sub(self, o: &RationalInterval) -> RationalInterval {
        RationalInterval::raw(&self.lo - &o.hi, &self.hi - &o.lo)
    }
}

impl<'a> Mul<&'a RationalInterval> for &'a RationalInterval {
    type Output = RationalInterval;
    fn mul(self, o: &RationalInterval) -> RationalInterval {
        if !self.lo.is_negative() && !o.lo.is_negative() {
            return RationalInterval::raw(&self.lo * &o.lo, &self.hi * &o.hi);
        }
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().cloned().expect("four products");
        let hi = c.iter().max().cloned().expect("four products");
        RationalInterval::raw(lo, hi)
    }
}

impl Neg for &RationalInterval {
    type Output = RationalInterval;
    fn neg(self) -> RationalInterval {
        RationalInterval::raw(-&self.hi, -&self.lo)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalInterval> for RationalInterval {
            type Output = RationalInterval;
            fn $m(self, o: RationalInterval) -> RationalInterval {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

// ---------------------------------------------------------------------------
// Fixed-point kernels. A value X at scale W stands for X / 2^W.

/// exp(q) for a rational point, enclosed to about `bits` bits.
fn exp_point(q: &Q, bits: u64) -> RationalInterval {
    if q.is_zero() {
        return RationalInterval::int(1);
    }
    let s = (log2_estimate(q) + 2).max(0) as u64;
    let w = bits + 2 * s + 48;
    // t = q / 2^s, |t| <= 1/2
    let t = floor_scaled(q, w as i64 - s as i64);
    let one = pow2(w);
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut k: u64 = 0;
    loop {
        k += 1;
        term = (&term * &t).div_floor(&(BigInt::from(k) << w));
        sum += &term;
        if term.abs() <= BigInt::from(2) {
            break;
        }
    }
    // per-term rounding (<= 2 ulp each), truncated tail, error in t
    let err = BigInt::from(2 * k + 16);
    let base = RationalInterval::raw(
        from_scaled(&sum - &err, w as i64),
        from_scaled(&sum + &err, w as i64),
    );
    let mut acc = base;
    for _ in 0..s {
        acc = (&acc * &acc).round_out(w);
    }
    acc.round_out(bits + 8)
}

/// 2·atanh(t) for |t| <= 1/3, enclosed at fixed scale `w`.
fn two_atanh_fixed(t: &Q, w: u64) -> (BigInt, BigInt) {
    let tf = floor_scaled(t, w as i64);
    let t2 = (&tf * &tf) >> w;
    let mut pw = tf.clone();
    let mut sum = tf;
    let mut j: u64 = 0;
    loop {
        j += 1;
        pw = (&pw * &t2) >> w;
        let term = pw.div_floor(&BigInt::from(2 * j + 1));
        sum += &term;
        if pw.abs() <= BigInt::from(1) {
            break;
        }
    }
    let err = BigInt::from(4 * j + 16);
    (sum << 1u32, err << 1u32)
}

fn ln2_fixed(w: u64) -> (BigInt, BigInt) {
    two_atanh_fixed(&q_frac(1, 3), w)
}

/// ln(x) for a positive rational point.
fn ln_point(x: &Q, bits: u64) -> RationalInterval {
    if x.is_one() {
        return RationalInterval::int(0);
    }
    let mut k = log2_estimate(x);
    let mut y = if k >= 0 {
        x / q_big(pow2(k as u64))
    } else {
        x * q_big(pow2((-k) as u64))
    };
    // bring y into [1/2, 2]
    while y > q_int(2) {
        y /= q_int(2);
        k += 1;
    }
    while y < q_frac(1, 2) {
        y *= q_int(2);
        k -= 1;
    }
    let w = bits + 64 + (k.unsigned_abs().max(1)).ilog2() as u64 + 8;
    let t = (&y - q_int(1)) / (&y + q_int(1));
    let (s, es) = two_atanh_fixed(&t, w);
    let (l2, el2) = ln2_fixed(w);
    let kk = BigInt::from(k);
    let center = s + &kk * l2;
    let err = es + kk.abs() * el2 + 2;
    RationalInterval::raw(
        from_scaled(&center - &err, w as i64),
        from_scaled(&center + &err, w as i64),
    )
    .round_out(bits + 8)
}

/// Enclosure of exp over an interval (monotone).
pub fn exp(x: &RationalInterval, bits: u64) -> RationalInterval {
    let lo = exp_point(&x.lo, bits);
    if x.lo == x.hi {
        return lo;
    }
    let hi = exp_point(&x.hi, bits);
    RationalInterval::raw(lo.lo, hi.hi)
}

/// Enclosure of the natural logarithm; the argument must be positive.
pub fn ln(x: &RationalInterval, bits: u64) -> Result<RationalInterval> {
    if !x.lo.is_positive() {
        return invalid("logarithm of a non-positive interval");
    }
    let lo = ln_point(&x.lo, bits);
    if x.lo == x.hi {
        return Ok(lo);
    }
    let hi = ln_point(&x.hi, bits);
    Ok(RationalInterval::raw(lo.lo, hi.hi))
}

/// Enclosure of `x^y = exp(y ln x)` for positive `x`.
pub fn pow(x: &RationalInterval, y: &RationalInterval, bits: u64) -> Result<RationalInterval> {
    let g = bits + 32;
    let l = ln(x, g)?;
    Ok(exp(&(y * &l).round_out(g), g).round_out(bits))
}

/// `x^y` with an exact rational exponent.
pub fn pow_q(x: &RationalInterval, y: &Q, bits: u64) -> Result<RationalInterval> {
    pow(x, &RationalInterval::point(y.clone()), bits)
}

fn sqrt_point(v: &Q, bits: u64) -> RationalInterval {
    let w = bits + 16 + (log2_estimate(v).unsigned_abs() / 2);
    let n = v.numer() * v.denom();
    let r = (n << (2 * w)).sqrt();
    let den = v.denom() << w;
    let lo = Q::new(r.clone(), den.clone());
    let hi = Q::new(r + 1, den);
    RationalInterval::raw(lo, hi)
}

/// Enclosure of the square root of a non-negative interval.
pub fn sqrt(x: &RationalInterval, bits: u64) -> Result<RationalInterval> {
    if x.lo.is_negative() {
        return invalid("square root of a negative interval");
    }
    let lo = sqrt_point(&x.lo, bits);
    let hi = sqrt_point(&x.hi, bits);
    Ok(RationalInterval::raw(lo.lo, hi.hi).round_out(bits + 8))
}

/// Fixed-point `cos(2 pi f)`, `sin(2 pi f)` at scale `2^w`: returns
/// `(c, s, err)` with both true values within `err` units of `c`, `s`.
/// The argument is reduced to within an eighth of a turn of a quarter-turn
/// multiple, so the Taylor series runs on `|theta| <= pi/4`.
pub(crate) fn cos_sin_turns_fixed(f: &Q, w: u64) -> (BigInt, BigInt, BigInt) {
    let r = f - f.floor();
    let quarter = (&r * q_int(4) + q_frac(1, 2)).floor();
    let g = &r - &quarter / q_int(4);
    let quadrant = quarter.to_integer().to_i64().expect("quadrant fits") % 4;
    let one = pow2(w);
    let (c, s, err) = if g.is_zero() {
        (one, BigInt::zero(), BigInt::zero())
    } else {
        let pi = if w <= 1000 {
            static WIDE: OnceLock<RationalInterval> = OnceLock::new();
            WIDE.get_or_init(|| pi_series(1040)).lo.clone()
        } else {
            pi_series(w + 40).lo.clone()
        };
        // theta within 3 units; |theta| < 1
        let theta = floor_scaled(&(pi * g * q_int(2)), w as i64);
        let t2 = (&theta * &theta) >> w;
        let mut cos = one.clone();
        let mut sin = theta.clone();
        let mut ct = one;
        let mut st = theta;
        let mut n: i64 = 1;
        while !ct.is_zero() || !st.is_zero() {
            ct = -((&ct * &t2) >> w) / BigInt::from((2 * n - 1) * (2 * n));
            st = -((&st * &t2) >> w) / BigInt::from((2 * n) * (2 * n + 1));
            cos += &ct;
            sin += &st;
            n += 1;
        }
        // each term is off by at most 2 units per step already taken, the
        // argument error propagates with Lipschitz constant 1
        let err = BigInt::from((n + 2) * (n + 2) + 8);
        (cos, sin, err)
    };
    let (c, s) = match quadrant {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    };
    (c, s, err)
}

/// Enclosures of `cos(2 pi f)` and `sin(2 pi f)` for a rational number of
/// turns `f`.
pub fn cos_sin_turns(f: &Q, bits: u64) -> (RationalInterval, RationalInterval) {
    let w = bits + 32;
    let (c, s, err) = cos_sin_turns_fixed(f, w);
    let iv = |v: BigInt| {
        RationalInterval::raw(
            from_scaled(&v - &err, w as i64),
            from_scaled(&v + &err, w as i64),
        )
    };
    (iv(c), iv(s))
}

// ---------------------------------------------------------------------------
// Constants.

const PI_LO: &str = "3.1415926535897932384626433832795028841971";
const PI_HI: &str = "3.1415926535897932384626433832795028841972";
const GAMMA_LO: &str = "0.5772156649015328606065120900824024310421";
const GAMMA_HI: &str = "0.5772156649015328606065120900824024310422";
const E_LO: &str = "2.7182818284590452353602874713526624977572";
const E_HI: &str = "2.7182818284590452353602874713526624977573";

fn cached(cell: &'static OnceLock<RationalInterval>, lo: &str, hi: &str) -> RationalInterval {
    cell.get_or_init(|| RationalInterval::dec(lo, hi)).clone()
}

/// Stored 40-digit enclosure of pi.
pub fn pi() -> RationalInterval {
    static C: OnceLock<RationalInterval> = OnceLock::new();
    cached(&C, PI_LO, PI_HI)
}

/// Stored 40-digit enclosure of the Euler-Mascheroni constant.
pub fn euler_gamma() -> RationalInterval {
    static C: OnceLock<RationalInterval> = OnceLock::new();
    cached(&C, GAMMA_LO, GAMMA_HI)
}

/// Stored 40-digit enclosure of e.
pub fn e() -> RationalInterval {
    static C: OnceLock<RationalInterval> = OnceLock::new();
    cached(&C, E_LO, E_HI)
}

/// Independent series enclosure of pi (Machin's formula).
pub fn pi_series(bits: u64) -> RationalInterval {
    // pi = 16 atan(1/5) - 4 atan(1/239)
    fn atan_inv(n: i64, w: u64) -> (BigInt, BigInt) {
        let one = pow2(w);
        let n2 = BigInt::from(n * n);
        let mut pw = one / n;
        let mut sum = pw.clone();
        let mut j: u64 = 0;
        while !pw.is_zero() {
            j += 1;
            pw = pw.div_floor(&n2);
            let term = pw.div_floor(&BigInt::from(2 * j + 1));
            if j % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
        }
        (sum, BigInt::from(2 * j + 4))
    }
    let w = bits + 32;
    let (a, ea) = atan_inv(5, w);
    let (b, eb) = atan_inv(239, w);
    let c = a * 16 - b * 4;
    let err = ea * 16 + eb * 4;
    RationalInterval::raw(
        from_scaled(&c - &err, w as i64),
        from_scaled(&c + &err, w as i64),
    )
}

/// Bernoulli numbers B_0..B_n as exact rationals.
pub fn bernoulli(n: usize) -> Vec<Q> {
    let mut b = vec![Q::zero(); n + 1];
    b[0] = Q::one();
    for m in 1..=n {
        let mut s = Q::zero();
        let mut binom = BigInt::one();
        for k in 0..m {
            s += q_big(binom.clone()) * &b[k];
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b[m] = -s / q_int(m as i64 + 1);
    }
    b
}

/// Independent enclosure of the Euler-Mascheroni constant by Euler-Maclaurin
/// summation of the harmonic numbers with the first omitted term as bound.
pub fn euler_gamma_series(bits: u64) -> RationalInterval {
    let n: i64 = 64;
    let terms = 24;
    let b = bernoulli(2 * terms + 2);
    let mut h = Q::zero();
    for j in 1..=n {
        h += q_frac(1, j);
    }
    let nq = q_int(n);
    // gamma = H_n - ln n - 1/(2n) + sum_{k>=1} B_{2k} / (2k n^{2k})
    let mut s = h - q_frac(1, 2 * n);
    for k in 1..=terms {
        let kk = 2 * k as i64;
        s += &b[2 * k] / (q_int(kk) * num_traits::pow(nq.clone(), 2 * k));
    }
    let kk = 2 * terms as i64 + 2;
    let rem = (&b[2 * terms + 2] / (q_int(kk) * num_traits::pow(nq.clone(), 2 * terms + 2))).abs();
    let lnn = ln_point(&nq, bits + 16);
    let base = RationalInterval::raw(&s - &rem, &s + &rem);
    (&base - &lnn).round_out(bits)
}

/// Checks the stored 40-digit constants against independent series.
pub fn validate_constants() -> Result<()> {
    let bits = 160;
    let checks = [
        ("pi", pi(), pi_series(bits)),
        ("gamma", euler_gamma(), euler_gamma_series(bits)),
        ("e", e(), exp_point(&q_int(1), bits)),
    ];
    for (name, stored, series) in checks {
        if !stored.contains_interval(&series) {
            return Err(crate::error::Error::Inconsistent(format!(
                "stored enclosure of {name} does not contain its series value"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(iv: &RationalInterval, v: f64, rel: f64) -> bool {
        let lo = iv.lo_f64();
        let hi = iv.hi_f64();
        (lo - v).abs() <= rel * v.abs().max(1e-300) && (hi - v).abs() <= rel * v.abs().max(1e-300)
    }

    #[test]
    fn cos_sin_match_float() {
        for (n, d) in [
            (0, 1),
            (1, 12),
            (1, 8),
            (1, 3),
            (5, 7),
            (-3, 11),
            (7, 4),
            (123, 1000),
        ] {
            let f = q_frac(n, d);
            let (c, s) = cos_sin_turns(&f, 200);
            let a = 2.0 * std::f64::consts::PI * n as f64 / d as f64;
            assert!((c.lo_f64() - a.cos()).abs() < 1e-14 && (c.hi_f64() - a.cos()).abs() < 1e-14);
            assert!((s.lo_f64() - a.sin()).abs() < 1e-14 && (s.hi_f64() - a.sin()).abs() < 1e-14);
            assert!(c.width() < q_dec("1e-50"));
        }
        // cos(pi/3) = 1/2 exactly lies inside the enclosure
        let (c, _) = cos_sin_turns(&q_frac(1, 6), 200);
        assert!(c.contains(&q_frac(1, 2)));
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(q_dec("1.25"), q_frac(5, 4));
        assert_eq!(q_dec("-3e2"), q_int(-300));
        assert_eq!(q_dec("4.175e10"), q_int(41_750_000_000));
        assert_eq!(q_dec("2.5e-1"), q_frac(1, 4));
    }

    #[test]
    fn stored_constants_match_series() {
        validate_constants().unwrap();
        assert!(pi_series(200).width() < q_dec("1e-55"));
    }

    #[test]
    fn exp_and_ln_enclose_float_values() {
        let b = 200;
        for &x in &[-30.5f64, -1.0, -0.001, 0.3, 1.0, 7.25, 100.0] {
            let q = q_dec(&format!("{x}"));
            let iv = exp(&RationalInterval::point(q), b);
            assert!(close(&iv, x.exp(), 1e-14), "exp({x}) -> {iv:?}");
            assert!(iv.width() < iv.hi().abs() * q_dec("1e-55"));
        }
        for &x in &[1e-9f64, 0.5, 2.0, 3.0, 87853.0, 1e18] {
            let q = q_dec(&format!("{x:e}"));
            let iv = ln(&RationalInterval::point(q), b).unwrap();
            assert!(close(&iv, x.ln(), 1e-14), "ln({x}) -> {iv:?}");
            assert!(iv.width() < q_dec("1e-55"));
        }
    }

    #[test]
    fn exp_ln_roundtrip_contains_argument() {
        let x = RationalInterval::frac(355, 113);
        let back = exp(&ln(&x, 200).unwrap(), 200);
        assert!(back.contains(x.lo()));
    }

    #[test]
    fn sqrt_encloses() {
        let s = sqrt(&RationalInterval::int(2), 200).unwrap();
        assert!((s.lo() * s.lo()) <= q_int(2) && (s.hi() * s.hi()) >= q_int(2));
        assert!(s.width() < q_dec("1e-55"));
        let t = sqrt(&RationalInterval::int(16), 100).unwrap();
        assert!(t.contains(&q_int(4)));
    }

    #[test]
    fn pow_matches_integer_power() {
        let x = RationalInterval::int(7);
        let p = pow_q(&x, &q_int(5), 200).unwrap();
        assert!(p.contains(&q_int(16807)));
        let r = pow_q(&RationalInterval::int(4), &q_frac(3, 2), 200).unwrap();
        assert!(r.contains(&q_int(8)));
    }

    #[test]
    fn interval_ops_are_outward() {
        let a = RationalInterval::new(q_int(-1), q_int(2)).unwrap();
        let b = RationalInterval::new(q_int(3), q_int(4)).unwrap();
        let p = &a * &b;
        assert_eq!(p.lo(), &q_int(-4));
        assert_eq!(p.hi(), &q_int(8));
        assert_eq!((&a - &b).lo(), &q_int(-5));
        assert_eq!(a.powi(2).lo(), &q_int(0));
        assert!(a.recip().is_err());
    }

    #[test]
    fn rounding_keeps_containment() {
        let x = RationalInterval::point(q_frac(1, 3));
        let r = x.powi(200).round_out(64);
        assert!(r.contains(&num_traits::pow(q_frac(1, 3), 200)));
    }

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli(8);
        assert_eq!(b[1], q_frac(-1, 2));
        assert_eq!(b[2], q_frac(1, 6));
        assert_eq!(b[4], q_frac(-1, 30));
        assert_eq!(b[8], q_frac(-1, 30));
    }
}
