//! Quadratic Gauss sums, Kronecker symbols, the characters modulo prime
//! powers used by the local-density formulas, and exact arithmetic in
//! `Q(i, sqrt r)`.
//!
//! Closed forms are exact. Direct summation is done with rigorous numeric
//! enclosures of the roots of unity, so the two paths can be compared.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{factor, gcd};
use crate::error::{invalid, Error, Result};
use crate::interval::{self, q_int, RationalInterval, Q};

/// An element `c0 + c1 i + c2 sqrt(r) + c3 i sqrt(r)` of `Q(i, sqrt r)` for a
/// squarefree radicand `r >= 1`. With `r = 1` the radical parts are folded
/// into the Gaussian-rational parts, so every value has a unique form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicValue {
    radicand: u64,
    c: [Q; 4],
}

impl fmt::Debug for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) + ({})i + ({})√{} + ({})i√{}",
            self.c[0], self.c[1], self.c[2], self.radicand, self.c[3], self.radicand
        )
    }
}

fn squarefree_split(n: u64) -> (u64, u64) {
    // n = k^2 * r with r squarefree
    let f = factor(n).expect("positive");
    let mut k = 1;
    let mut r = 1;
    for &(p, e) in f.pairs() {
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            r *= p;
        }
    }
    (k, r)
}

impl CyclotomicValue {
    /// Builds a value from its four coordinates; `radicand` must be a
    /// squarefree positive integer.
    pub fn new(radicand: u64, c: [Q; 4]) -> Result<Self> {
        if radicand == 0 || squarefree_split(radicand).0 != 1 {
            return invalid(format!("radicand {radicand} is not squarefree"));
        }
        Ok(Self::normalized(radicand, c))
    }

    fn normalized(radicand: u64, c: [Q; 4]) -> Self {
        let [c0, c1, c2, c3] = c;
        if radicand == 1 {
            return Self {
                radicand: 1,
                c: [c0 + c2, c1 + c3, Q::zero(), Q::zero()],
            };
        }
        if c2.is_zero() && c3.is_zero() {
            return Self {
                radicand: 1,
                c: [c0, c1, c2, c3],
            };
        }
        Self {
            radicand,
            c: [c0, c1, c2, c3],
        }
    }

    pub fn rational(q: Q) -> Self {
        Self::gaussian(q, Q::zero())
    }

    pub fn int(n: i64) -> Self {
        Self::rational(q_int(n))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn i() -> Self {
        Self::gaussian(Q::zero(), Q::one())
    }

    /// The Gaussian rational `re + im i`.
    pub fn gaussian(re: Q, im: Q) -> Self {
        Self {
            radicand: 1,
            c: [re, im, Q::zero(), Q::zero()],
        }
    }

    /// `sqrt(n)` written as `k sqrt(r)` with `r` squarefree.
    pub fn sqrt(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let (k, r) = squarefree_split(n);
        Self::normalized(r, [Q::zero(), Q::zero(), q_int(k as i64), Q::zero()])
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    /// Coordinates `(c0, c1, c2, c3)` in the basis `1, i, sqrt r, i sqrt r`.
    pub fn coords(&self) -> &[Q; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// The value as a rational, if its imaginary and radical parts vanish.
    pub fn as_rational(&self) -> Option<Q> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Complex conjugate (`i -> -i`, `sqrt r` fixed since `r > 0`).
    pub fn conj(&self) -> Self {
        Self {
            radicand: self.radicand,
            c: [
                self.c[0].clone(),
                -&self.c[1],
                self.c[2].clone(),
                -&self.c[3],
            ],
        }
    }

    /// `|z|^2 = z conj(z)`, an element of `Q(sqrt r)`.
    pub fn abs_squared(&self) -> Self {
        self * &self.conj()
    }

    pub fn scale(&self, q: &Q) -> Self {
        Self::normalized(self.radicand, self.c.clone().map(|v| v * q))
    }

    /// Rigorous numeric enclosure of the real and imaginary parts.
    pub fn enclosure(&self, bits: u64) -> ComplexEnclosure {
        let s = interval::sqrt(&RationalInterval::int(self.radicand as i64), bits)
            .expect("positive radicand");
        let p = |a: &Q, b: &Q| &RationalInterval::point(a.clone()) + &s.scale(b);
        ComplexEnclosure {
            re: p(&self.c[0], &self.c[2]),
            im: p(&self.c[1], &self.c[3]),
        }
    }

    fn common_radicand(&self, other: &Self) -> u64 {
        match (self.radicand, other.radicand) {
            (1, r) | (r, 1) => r,
            (a, b) if a == b => a,
            (a, b) => panic!("values from Q(i,√{a}) and Q(i,√{b}) cannot be combined"),
        }
    }
}

impl Add for &CyclotomicValue {
    type Output = CyclotomicValue;
    fn add(self, o: &CyclotomicValue) -> CyclotomicValue {
        let r = self.common_radicand(o);
        let c = [0, 1, 2, 3].map(|k| &self.c[k] + &o.c[k]);
        CyclotomicValue::normalized(r, c)
    }
}

impl Sub for &CyclotomicValue {
    type Output = CyclotomicValue;
    fn sub(self, o: &CyclotomicValue) -> CyclotomicValue {
        self + &-o
    }
}

impl Neg for &CyclotomicValue {
    type Output = CyclotomicValue;
    fn neg(self) -> CyclotomicValue {
        CyclotomicValue {
            radicand: self.radicand,
            c: self.c.clone().map(|v| -v),
        }
    }
}

impl Mul for &CyclotomicValue {
    type Output = CyclotomicValue;
    fn mul(self, o: &CyclotomicValue) -> CyclotomicValue {
        let r = self.common_radicand(o);
        let p = q_int(r as i64);
        let [a0, a1, a2, a3] = &self.c;
        let [b0, b1, b2, b3] = &o.c;
        let c = [
            a0 * b0 - a1 * b1 + &p * (a2 * b2) - &p * (a3 * b3),
            a0 * b1 + a1 * b0 + &p * (a2 * b3 + a3 * b2),
            a0 * b2 + a2 * b0 - a1 * b3 - a3 * b1,
            a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
        ];
        CyclotomicValue::normalized(r, c)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for CyclotomicValue {
            type Output = CyclotomicValue;
            fn $m(self, o: CyclotomicValue) -> CyclotomicValue {
                (&self).$m(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

/// Interval enclosure of a complex number.
#[derive(Clone, Debug)]
pub struct ComplexEnclosure {
    pub re: RationalInterval,
    pub im: RationalInterval,
}

impl ComplexEnclosure {
    /// Whether both coordinates of the two enclosures intersect.
    pub fn overlaps(&self, other: &Self) -> bool {
        let meet =
            |a: &RationalInterval, b: &RationalInterval| a.lo() <= b.hi() && b.lo() <= a.hi();
        meet(&self.re, &other.re) && meet(&self.im, &other.im)
    }

    /// Largest coordinate width.
    pub fn width(&self) -> Q {
        self.re.width().max(self.im.width())
    }

    /// Whether the enclosure agrees with an exact value and is tighter than
    /// `tol`.
    pub fn agrees_with(&self, v: &CyclotomicValue, tol: &Q, bits: u64) -> bool {
        let e = v.enclosure(bits);
        self.overlaps(&e) && &self.width() <= tol && &e.width() <= tol
    }
}

/// Fixed-point enclosures of `e(j/q) = exp(2 pi i j/q)` for `0 <= j < q`.
pub struct RootTable {
    q: u64,
    w: u64,
    roots: Vec<(BigInt, BigInt)>,
    err: BigInt,
}

impl RootTable {
    pub fn new(q: u64, bits: u64) -> Result<Self> {
        if q == 0 || q > 100_000 {
            return invalid("root table modulus must lie in [1, 10^5]");
        }
        let w = bits + 32;
        let mut err = BigInt::zero();
        let roots = (0..q)
            .map(|j| {
                let (c, s, e) = interval::cos_sin_turns_fixed(&Q::new(j.into(), q.into()), w);
                err = err.clone().max(e);
                (c, s)
            })
            .collect();
        Ok(Self { q, w, roots, err })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `sum_j weight_j e(j/q)` for integer weights indexed by residue.
    pub fn weighted_sum(&self, weights: &[i64]) -> ComplexEnclosure {
        let mut re = BigInt::zero();
        let mut im = BigInt::zero();
        let mut total: u64 = 0;
        for (j, &w) in weights.iter().enumerate() {
            if w != 0 {
                re += &self.roots[j].0 * w;
                im += &self.roots[j].1 * w;
                total += w.unsigned_abs();
            }
        }
        let err = &self.err * total;
        let den = BigInt::one() << self.w;
        let iv = |v: BigInt| {
            RationalInterval::new(
                Q::new(&v - &err, den.clone()),
                Q::new(&v + &err, den.clone()),
            )
            .expect("ordered")
        };
        ComplexEnclosure {
            re: iv(re),
            im: iv(im),
        }
    }
}

/// Kronecker symbol `(a/n)`.
pub fn kronecker(a: i64, n: i64) -> Result<i32> {
    if a == 0 && n == 0 {
        return invalid("kronecker symbol (0/0) is undefined");
    }
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return Ok(if a == 1 || a == -1 { 1 } else { 0 });
    }
    let mut t = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            t = -t;
        }
    }
    let v = n.trailing_zeros();
    n >>= v;
    if v > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            t = -t;
        }
    }
    // Jacobi symbol (a/n) for odd n > 0
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    Ok(if n == 1 { t } else { 0 })
}

/// `epsilon_d`: 1 if `d = 1 (mod 4)` and `i` if `d = 3 (mod 4)`.
pub fn epsilon(d: i64) -> Result<CyclotomicValue> {
    match d.rem_euclid(4) {
        1 => Ok(CyclotomicValue::one()),
        3 => Ok(CyclotomicValue::i()),
        _ => invalid(format!("epsilon_d needs odd d, got {d}")),
    }
}

fn inv_mod(a: i64, m: i64) -> i64 {
    let (mut r0, mut r1) = (a.rem_euclid(m) as i128, m as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m as i128) as i64
}

/// Gaussian rational times `sqrt(n)`, the shape of every closed-form value.
struct RadicalForm {
    re: Q,
    im: Q,
    n: u64,
}

impl RadicalForm {
    fn one() -> Self {
        Self {
            re: Q::one(),
            im: Q::zero(),
            n: 1,
        }
    }

    fn zero() -> Self {
        Self {
            re: Q::zero(),
            im: Q::zero(),
            n: 1,
        }
    }

    fn times_gaussian(mut self, re: Q, im: Q) -> Self {
        let r = &self.re * &re - &self.im * &im;
        let i = &self.re * &im + &self.im * &re;
        self.re = r;
        self.im = i;
        self
    }

    fn times_i_pow(self, k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => self,
            1 => self.times_gaussian(Q::zero(), Q::one()),
            2 => self.times_gaussian(-Q::one(), Q::zero()),
            _ => self.times_gaussian(Q::zero(), -Q::one()),
        }
    }

    /// Multiplies by `e(k/8)`.
    fn times_zeta8(self, k: i64) -> Self {
        let k = k.rem_euclid(8);
        let mut s = self.times_i_pow(k / 2);
        if k % 2 == 1 {
            // e(1/8) = (1 + i) sqrt(2) / 2
            s = s.times_gaussian(Q::new(1.into(), 2.into()), Q::new(1.into(), 2.into()));
            s.n *= 2;
        }
        s
    }

    fn value(self) -> CyclotomicValue {
        let (k, r) = squarefree_split(self.n);
        let kq = q_int(k as i64);
        CyclotomicValue::normalized(r, [Q::zero(), Q::zero(), self.re * &kq, self.im * kq])
    }
}

/// Closed form of `G(u, b, c)` with `c` odd and `gcd(u, c) = 1`.
fn gauss_odd(u: i64, b: i64, c: i64) -> Result<RadicalForm> {
    if c == 1 {
        return Ok(RadicalForm::one());
    }
    // u x^2 + b x = u (x + b/(2u))^2 - b^2/(4u)
    let k = (-(inv_mod(4 * u.rem_euclid(c), c) as i128) * (b as i128 * b as i128))
        .rem_euclid(c as i128);
    if k != 0 {
        return Err(Error::CaseNotCovered(format!(
            "G(·,{b},{c}) carries a root of unity of order {} outside Q(i, sqrt c)",
            c as i128 / gcd(k as u64, c as u64) as i128
        )));
    }
    let sign = kronecker(u, c)?;
    let mut f = RadicalForm {
        re: q_int(sign as i64),
        im: Q::zero(),
        n: c as u64,
    };
    if c % 4 == 3 {
        f = f.times_i_pow(1);
    }
    Ok(f)
}

/// Closed form of `G(u, b, 2^e)` with `u` odd.
fn gauss_two(u: i64, b: i64, e: u32) -> Result<RadicalForm> {
    match e {
        0 => Ok(RadicalForm::one()),
        1 => Ok(if b % 2 == 0 {
            RadicalForm::zero()
        } else {
            RadicalForm {
                re: q_int(2),
                im: Q::zero(),
                n: 1,
            }
        }),
        _ => {
            if b % 2 != 0 {
                return Ok(RadicalForm::zero());
            }
            let c = 1i64 << e;
            let h = b / 2;
            // u x^2 + 2 h x = u (x + h/u)^2 - h^2/u
            let k =
                (-(inv_mod(u, c) as i128) * (h as i128 * h as i128)).rem_euclid(c as i128) as i64;
            if (8 * k) % c != 0 {
                return Err(Error::CaseNotCovered(format!(
                    "G(·,{b},{c}) carries a root of unity of order above 8"
                )));
            }
            // (1 + i) epsilon_u^{-1} sqrt(c) (c/u)
            let sign = kronecker(c, u)?;
            let mut f = RadicalForm {
                re: q_int(sign as i64),
                im: q_int(sign as i64),
                n: c as u64,
            };
            if u.rem_euclid(4) == 3 {
                f = f.times_i_pow(-1);
            }
            Ok(f.times_zeta8(8 * k / c))
        }
    }
}

/// `G(A, B, C) = sum_{x mod C} e((A x^2 + B x)/C)` in closed form.
///
/// The value is reduced with `G(gA, gB, gC) = g G(A, B, C)`, split over the
/// odd and 2-power parts of `C`, and evaluated by completing the square.
/// Returns `CaseNotCovered` when the result involves a root of unity that is
/// not in `Q(i, sqrt r)`; [`gauss_sum_direct`] covers those inputs.
pub fn gauss_sum(a: i64, b: i64, c: i64) -> Result<CyclotomicValue> {
    if c <= 0 {
        return invalid("gauss_sum needs C > 0");
    }
    let a = a.rem_euclid(c);
    let b = b.rem_euclid(c);
    let g = gcd(a as u64, c as u64) as i64;
    if b % g != 0 {
        return Ok(CyclotomicValue::zero());
    }
    let (a, b, c) = (a / g, b / g, c / g);
    let e = c.trailing_zeros();
    let c2 = 1i64 << e;
    let c1 = c >> e;
    // G(a, b, c1 c2) = G(a c2, b, c1) G(a c1, b, c2)
    let odd = gauss_odd(
        (a as i128 * c2 as i128).rem_euclid(c1 as i128) as i64,
        b.rem_euclid(c1),
        c1,
    )?;
    let two = gauss_two(
        (a as i128 * c1 as i128).rem_euclid(c2 as i128) as i64,
        b.rem_euclid(c2),
        e,
    )?;
    let prod = RadicalForm {
        re: &odd.re * &two.re - &odd.im * &two.im,
        im: &odd.re * &two.im + &odd.im * &two.re,
        n: odd.n * two.n,
    };
    Ok(prod.value().scale(&q_int(g)))
}

/// Direct summation of `G(A, B, C)` with rigorous enclosures, `C <= 10^5`.
pub fn gauss_sum_direct(a: i64, b: i64, c: i64, bits: u64) -> Result<ComplexEnclosure> {
    if c <= 0 || c > 100_000 {
        return invalid("gauss_sum_direct needs 1 <= C <= 10^5");
    }
    gauss_sum_direct_in(&RootTable::new(c as u64, bits)?, a, b)
}

/// Direct summation of `G(A, B, C)` using a prepared root table for `C`.
pub fn gauss_sum_direct_in(table: &RootTable, a: i64, b: i64) -> Result<ComplexEnclosure> {
    let c = table.modulus() as i128;
    let mut w = vec![0i64; c as usize];
    for x in 0..c {
        let r = (a as i128 * x * x + b as i128 * x).rem_euclid(c);
        w[r as usize] += 1;
    }
    Ok(table.weighted_sum(&w))
}

/// Kind of a character modulo `p^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharacterKind {
    /// The principal character `chi_{1, p^k}`.
    Principal,
    /// The Legendre symbol mod `p` lifted to modulus `p^k`.
    Quadratic,
}

/// A character of modulus `p^k`, principal or induced from the Legendre
/// symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CharacterSpec {
    p: u64,
    k: u32,
    kind: CharacterKind,
}

impl CharacterSpec {
    pub fn new(p: u64, k: u32, kind: CharacterKind) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if kind == CharacterKind::Quadratic && (p == 2 || k == 0) {
            return invalid("quadratic characters need odd p and k >= 1");
        }
        p.checked_pow(k)
            .ok_or_else(|| Error::InvalidArgument("modulus p^k overflows".into()))?;
        Ok(Self { p, k, kind })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn kind(&self) -> CharacterKind {
        self.kind
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }

    /// `chi(x)`.
    pub fn value(&self, x: i64) -> i32 {
        if self.k == 0 {
            return 1;
        }
        if x.rem_euclid(self.p as i64) == 0 {
            return 0;
        }
        match self.kind {
            CharacterKind::Principal => 1,
            CharacterKind::Quadratic => kronecker(x, self.p as i64).expect("p > 0"),
        }
    }
}

/// `tau(chi, psi_{-m}) = sum_{x mod p^k} chi(x) e(-m x / p^k)` for odd `p`.
pub fn tau(chi: &CharacterSpec, m: i64) -> Result<CyclotomicValue> {
    let p = chi.p;
    if p == 2 {
        return invalid("tau is evaluated for odd p only");
    }
    let k = chi.k;
    if k == 0 {
        return Ok(CyclotomicValue::one());
    }
    let pk = chi.modulus() as i64;
    let pk1 = pk / p as i64;
    let divides = |d: i64| m.rem_euclid(d) == 0;
    match chi.kind {
        CharacterKind::Principal => Ok(CyclotomicValue::int(if divides(pk) {
            pk - pk1
        } else if divides(pk1) {
            -pk1
        } else {
            0
        })),
        CharacterKind::Quadratic => {
            if !divides(pk1) || divides(pk) {
                return Ok(CyclotomicValue::zero());
            }
            // epsilon_p p^{k - 1/2} chi_p(-m / p^{k-1})
            let s = kronecker(-(m / pk1), p as i64)?;
            let v = &epsilon(p as i64)? * &CyclotomicValue::sqrt(p);
            Ok(v.scale(&q_int(s as i64 * pk1)))
        }
    }
}

/// Direct summation of `tau(chi, psi_{-m})` with rigorous enclosures, given
/// a root table for the modulus `p^k`.
pub fn tau_direct(chi: &CharacterSpec, m: i64, table: &RootTable) -> Result<ComplexEnclosure> {
    let q = chi.modulus();
    if table.modulus() != q {
        return invalid("root table modulus does not match the character");
    }
    let mut w = vec![0i64; q as usize];
    for x in 0..q as i128 {
        let c = chi.value(x as i64);
        if c != 0 {
            let r = (-(m as i128) * x).rem_euclid(q as i128);
            w[r as usize] += i64::from(c);
        }
    }
    Ok(table.weighted_sum(&w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::q_dec;
    use proptest::prelude::*;

    const BITS: u64 = 140;

    fn tol() -> Q {
        q_dec("1e-30")
    }

    fn legendre_by_squares(a: i64, p: i64) -> i32 {
        if a.rem_euclid(p) == 0 {
            return 0;
        }
        if (1..p).any(|x| (x * x - a).rem_euclid(p) == 0) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(1, 9).unwrap(), 1);
        assert_eq!(kronecker(2, 7).unwrap(), 1);
        assert_eq!(kronecker(-4, 3).unwrap(), -1);
        assert_eq!(kronecker(3, 8).unwrap(), -1);
        assert_eq!(kronecker(5, -1).unwrap(), 1);
        assert_eq!(kronecker(-5, -1).unwrap(), -1);
        assert!(kronecker(0, 0).is_err());
        for p in [3, 5, 7, 11, 13, 97] {
            for a in -30..30 {
                assert_eq!(
                    kronecker(a, p).unwrap(),
                    legendre_by_squares(a, p),
                    "({a}/{p})"
                );
            }
        }
    }

    #[test]
    fn field_arithmetic() {
        let s = CyclotomicValue::sqrt(12);
        assert_eq!(s.radicand(), 3);
        assert_eq!((&s * &s).as_rational(), Some(q_int(12)));
        let i = CyclotomicValue::i();
        assert_eq!((&i * &i).as_rational(), Some(q_int(-1)));
        let z = &CyclotomicValue::int(2) + &(&i * &s);
        assert_eq!(z.abs_squared().as_rational(), Some(q_int(16)));
    }

    #[test]
    fn gauss_sum_examples() {
        assert_eq!(gauss_sum(1, 0, 1).unwrap(), CyclotomicValue::one());
        let two_two_i = CyclotomicValue::gaussian(q_int(2), q_int(2));
        assert_eq!(gauss_sum(1, 0, 4).unwrap(), two_two_i);
        assert_eq!(
            gauss_sum(2, 0, 8).unwrap(),
            CyclotomicValue::gaussian(q_int(4), q_int(4))
        );
        for a in [1, 3, 5, -7] {
            assert!(gauss_sum(a, 0, 2).unwrap().is_zero());
        }
        assert!(gauss_sum(1, 0, 0).is_err());
    }

    #[test]
    fn closed_form_matches_direct_sum() {
        let mut checked = 0;
        for c in 1..=64i64 {
            let table = RootTable::new(c as u64, BITS).unwrap();
            for a in -3..=c.min(24) {
                for b in [0, 1, 2, 4, c / 2, c] {
                    match gauss_sum(a, b, c) {
                        Ok(v) => {
                            let d = gauss_sum_direct_in(&table, a, b).unwrap();
                            assert!(
                                d.agrees_with(&v, &tol(), BITS),
                                "G({a},{b},{c}) = {v:?} vs {d:?}"
                            );
                            checked += 1;
                        }
                        Err(Error::CaseNotCovered(_)) => {}
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
        assert!(checked > 2000, "{checked}");
    }

    #[test]
    fn modulus_norm() {
        for c in (1..200i64).filter(|c| c % 2 == 1 || c % 4 == 0) {
            for a in (1..c.min(40)).filter(|&a| gcd(a as u64, c as u64) == 1) {
                let g = gauss_sum(a, 0, c).unwrap();
                assert_eq!(
                    g.abs_squared().as_rational(),
                    Some(q_int(2 * c - c * (c % 2))),
                    "a={a} c={c}"
                );
            }
        }
    }

    #[test]
    fn tau_examples() {
        let principal = |p, k| CharacterSpec::new(p, k, CharacterKind::Principal).unwrap();
        assert_eq!(tau(&principal(7, 0), 12).unwrap(), CyclotomicValue::one());
        assert_eq!(tau(&principal(5, 1), 5).unwrap(), CyclotomicValue::int(4));
        let chi = CharacterSpec::new(5, 1, CharacterKind::Quadratic).unwrap();
        assert_eq!(tau(&chi, 1).unwrap(), CyclotomicValue::sqrt(5));
        assert!(CharacterSpec::new(2, 3, CharacterKind::Quadratic).is_err());
        assert!(tau(&principal(2, 2), 1).is_err());
    }

    #[test]
    fn tau_matches_direct_sum() {
        for (p, kmax) in [(3u64, 7u32), (5, 4), (7, 3), (11, 2), (13, 2)] {
            for k in 0..=kmax {
                let q = p.pow(k);
                let table = RootTable::new(q, BITS).unwrap();
                let kinds: &[CharacterKind] = if k == 0 {
                    &[CharacterKind::Principal]
                } else {
                    &[CharacterKind::Principal, CharacterKind::Quadratic]
                };
                for &kind in kinds {
                    let chi = CharacterSpec::new(p, k, kind).unwrap();
                    // every residue for small moduli, a spread sample for 3^6, 3^7
                    let step = if q > 300 { 7 } else { 1 };
                    for m in (0..q as i64)
                        .step_by(step)
                        .chain([q as i64 - 1, (q / p) as i64])
                    {
                        let exact = tau(&chi, m).unwrap();
                        let direct = tau_direct(&chi, m, &table).unwrap();
                        assert!(
                            direct.agrees_with(&exact, &tol(), BITS),
                            "p={p} k={k} {kind:?} m={m}"
                        );
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn kronecker_multiplicative(a in -200i64..200, b in -200i64..200, n in 1i64..300) {
            prop_assert_eq!(
                kronecker(a * b, n).unwrap(),
                kronecker(a, n).unwrap() * kronecker(b, n).unwrap()
            );
        }

        #[test]
        fn change_of_variables(a in 1i64..50, b in 0i64..50, t in 1i64..50, c in 1i64..80) {
            prop_assume!(gcd(t as u64, c as u64) == 1);
            // G(A t^2, B, C) = G(A, B t^{-1}, C)
            let tinv = inv_mod(t, c);
            let lhs = gauss_sum_direct(a * t * t % c, b, c, 100).unwrap();
            let rhs = gauss_sum_direct(a, b * tinv % c, c, 100).unwrap();
            prop_assert!(lhs.overlaps(&rhs));
        }
    }
}
