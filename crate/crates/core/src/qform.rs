//! Diagonal quadratic forms: exact representation counts (unrestricted,
//! coprime-restricted and almost-prime-restricted), Jacobi's four-square
//! formula, lattice-point counts and the sieve inclusion-exclusion identity.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::arith::{
    gcd, is_member, is_squarefree, isqrt, lcm, mobius, primes_up_to, sigma, AlmostPrimeClass,
};
use crate::error::{invalid, Error, Result};
use crate::interval::{self, q_int, RationalInterval};

/// Largest target accepted by the enumerators.
pub const MAX_TARGET: u64 = 1_000_000_000;

/// A positive diagonal form `sum a_j x_j^2` in one to four variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalForm {
    a: Vec<u64>,
}

impl DiagonalForm {
    pub fn new(a: impl Into<Vec<u64>>) -> Result<Self> {
        let a = a.into();
        if a.is_empty() || a.len() > 4 {
            return invalid(format!("forms have 1 to 4 variables, got {}", a.len()));
        }
        if a.contains(&0) {
            return invalid("coefficients must be positive");
        }
        Ok(Self { a })
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Gram determinant of `2Q`: `2^l prod a_j`.
    pub fn discriminant(&self) -> u128 {
        self.a
            .iter()
            .fold(1u128 << self.a.len(), |acc, &x| acc * x as u128)
    }

    /// `4 lcm(a_j)`.
    pub fn level(&self) -> u128 {
        4 * self.a.iter().fold(1u128, |acc, &x| {
            let g = gcd((acc % x as u128) as u64, x) as u128;
            acc / g * x as u128
        })
    }

    /// Determinant of the coefficient matrix of `Q` itself, `prod a_j`.
    pub fn determinant(&self) -> u128 {
        self.a.iter().map(|&x| x as u128).product()
    }

    /// `Q(x)` for a coordinate vector.
    pub fn eval(&self, x: &[i64]) -> u128 {
        self.a
            .iter()
            .zip(x)
            .map(|(&a, &v)| a as u128 * (v.unsigned_abs() as u128).pow(2))
            .sum()
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for DiagonalForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let a: std::result::Result<Vec<u64>, _> =
            s.split(',').map(|t| t.trim().parse::<u64>()).collect();
        match a {
            Ok(a) => Self::new(a),
            Err(_) => invalid(format!("cannot parse form '{s}'")),
        }
    }
}

/// The form `sum a_j (d_j x_j)^2` for squarefree `d_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScaledForm {
    base: DiagonalForm,
    d: Vec<u64>,
    scaled: DiagonalForm,
}

impl ScaledForm {
    pub fn new(base: DiagonalForm, d: impl Into<Vec<u64>>) -> Result<Self> {
        let d = d.into();
        if d.len() != base.dim() {
            return invalid("scaling vector length differs from the form dimension");
        }
        if let Some(&bad) = d.iter().find(|&&x| x == 0 || !is_squarefree(x)) {
            return invalid(format!(
                "scaling entry {bad} is not a positive squarefree integer"
            ));
        }
        let c: Option<Vec<u64>> = base
            .a
            .iter()
            .zip(&d)
            .map(|(&a, &dj)| dj.checked_mul(dj).and_then(|s| s.checked_mul(a)))
            .collect();
        let c =
            c.ok_or_else(|| Error::InvalidArgument("scaled coefficient overflows 64 bits".into()))?;
        Ok(Self {
            base,
            d,
            scaled: DiagonalForm { a: c },
        })
    }

    /// The form itself with `d = (1, ..., 1)`.
    pub fn unscaled(base: DiagonalForm) -> Self {
        let d = vec![1; base.dim()];
        Self {
            scaled: base.clone(),
            base,
            d,
        }
    }

    pub fn base(&self) -> &DiagonalForm {
        &self.base
    }

    pub fn d(&self) -> &[u64] {
        &self.d
    }

    /// The diagonal form with coefficients `a_j d_j^2`.
    pub fn scaled(&self) -> &DiagonalForm {
        &self.scaled
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.scaled.a
    }

    pub fn discriminant(&self) -> u128 {
        self.scaled.discriminant()
    }

    pub fn level(&self) -> u128 {
        self.scaled.level()
    }
}

impl From<DiagonalForm> for ScaledForm {
    fn from(base: DiagonalForm) -> Self {
        Self::unscaled(base)
    }
}

/// One sign class of solutions: non-negative coordinates and the number
/// `2^{#nonzero}` of signed vectors it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub x: Vec<u64>,
    pub weight: u64,
}

/// Sign-folded solutions of `Q(x) = m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationSet {
    pub m: u64,
    pub vectors: Vec<Representation>,
    pub total: u64,
}

fn check_target(m: u64) -> Result<()> {
    if m > MAX_TARGET {
        return Err(Error::CapExceeded {
            what: "representation enumeration target",
            needed: m.to_string(),
            cap: MAX_TARGET.to_string(),
        });
    }
    Ok(())
}

/// Visits every non-negative solution of `sum c_j x_j^2 = m`. The largest
/// coefficient is the outermost loop; the last coordinate is solved directly.
fn visit_solutions(c: &[u64], m: u64, f: &mut impl FnMut(&[u64])) {
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&i, &j| c[j].cmp(&c[i]).then(i.cmp(&j)));
    let mut x = vec![0u64; c.len()];
    fn rec(
        c: &[u64],
        order: &[usize],
        k: usize,
        rest: u64,
        x: &mut [u64],
        f: &mut impl FnMut(&[u64]),
    ) {
        let j = order[k];
        let cj = c[j];
        if k + 1 == order.len() {
            if rest % cj == 0 {
                let q = rest / cj;
                let r = isqrt(q);
                if r * r == q {
                    x[j] = r;
                    f(x);
                }
            }
            return;
        }
        let top = isqrt(rest / cj);
        for v in 0..=top {
            x[j] = v;
            rec(c, order, k + 1, rest - cj * v * v, x, f);
        }
        x[j] = 0;
    }
    rec(c, &order, 0, m, &mut x, f);
}

fn weight(x: &[u64]) -> u64 {
    1 << x.iter().filter(|&&v| v != 0).count()
}

/// `r_Q(m)` without materializing the solutions; parallel over the outer
/// coordinate for large targets.
pub fn representation_count(form: &ScaledForm, m: u64) -> Result<u64> {
    check_target(m)?;
    let c = form.coefficients();
    if m < 100_000 || c.len() == 1 {
        let mut total = 0;
        visit_solutions(c, m, &mut |x| total += weight(x));
        return Ok(total);
    }
    let outer = (0..c.len())
        .max_by(|&i, &j| c[i].cmp(&c[j]).then(j.cmp(&i)))
        .expect("nonempty");
    let rest: Vec<u64> = c
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != outer)
        .map(|(_, &v)| v)
        .collect();
    let top = isqrt(m / c[outer]);
    Ok((0..=top)
        .into_par_iter()
        .map(|v| {
            let mut t = 0;
            visit_solutions(&rest, m - c[outer] * v * v, &mut |x| t += weight(x));
            if v == 0 {
                t
            } else {
                2 * t
            }
        })
        .sum())
}

/// `count_representations`: the exact count `r_Q(m)` together with the
/// sign-folded solution list.
pub fn count_representations(form: &ScaledForm, m: u64) -> Result<(u64, RepresentationSet)> {
    check_target(m)?;
    let mut vectors = Vec::new();
    let mut total = 0;
    visit_solutions(form.coefficients(), m, &mut |x| {
        let w = weight(x);
        total += w;
        vectors.push(Representation {
            x: x.to_vec(),
            weight: w,
        });
    });
    vectors.sort_by(|a, b| a.x.cmp(&b.x));
    Ok((total, RepresentationSet { m, vectors, total }))
}

/// Condition imposed on every coordinate of a representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// `gcd(x, M) = 1`; the coordinate 0 qualifies only when `M = 1`.
    CoprimeTo(u64),
    /// Membership in `P_{r,S}`; the coordinate 0 always qualifies.
    AlmostPrime(AlmostPrimeClass),
}

impl Restriction {
    pub fn admits(&self, x: u64) -> bool {
        match self {
            Restriction::CoprimeTo(m) => gcd(x, *m) == 1,
            Restriction::AlmostPrime(cls) => is_member(x as u128, cls),
        }
    }
}

/// Representations whose coordinates all satisfy `restriction`.
pub fn count_restricted(form: &ScaledForm, m: u64, restriction: &Restriction) -> Result<u64> {
    check_target(m)?;
    let mut memo: HashMap<u64, bool> = HashMap::new();
    let mut total = 0;
    visit_solutions(form.coefficients(), m, &mut |x| {
        let ok = x
            .iter()
            .all(|&v| *memo.entry(v).or_insert_with(|| restriction.admits(v)));
        if ok {
            total += weight(x);
        }
    });
    Ok(total)
}

/// `r_Q(n) = 8 sum_{d | n, 4 ∤ d} d`, the four-squares count; `r(0) = 1`.
pub fn jacobi_r4(n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let s = |k: u64| sigma(1, k).expect("positive").to_integer();
    let total = if n % 4 == 0 {
        s(n) - 4 * s(n / 4)
    } else {
        s(n)
    };
    8 * u64::try_from(total).expect("fits")
}

/// Both sides of the inclusion-exclusion identity
/// `#{x : Q(x) = m, gcd(x_j, P(z)) = 1} = sum_d mu(d) r_{Q_{d^2}}(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionExclusion {
    pub filtered: i128,
    pub mobius_sum: i128,
    /// Number of grouped `d`-vector classes summed on the right.
    pub classes: u64,
}

impl InclusionExclusion {
    pub fn holds(&self) -> bool {
        self.filtered == self.mobius_sum
    }
}

/// Evaluates both sides of the identity independently. `P(z)` is the product
/// of the primes below `z`. On the right, divisors `d_j` of `P(z)` with
/// `c_j d_j^2 > m` force `x_j = 0` and are summed as one class.
pub fn inclusion_exclusion(form: &ScaledForm, m: u64, z: u64) -> Result<InclusionExclusion> {
    if m > 1_000_000 || z > 30 {
        return invalid("inclusion_exclusion needs m <= 10^6 and z <= 30");
    }
    let primes = primes_up_to(z.saturating_sub(1));
    let pz: u64 = primes.iter().product();
    let filtered = count_restricted(form, m, &Restriction::CoprimeTo(pz))? as i128;
    let mut divisors: Vec<u64> = vec![1];
    for &p in &primes {
        let more: Vec<u64> = divisors.iter().map(|&d| d * p).collect();
        divisors.extend(more);
    }
    divisors.sort_unstable();
    let c = form.coefficients();
    // per coordinate: small divisors with their Möbius value and the
    // aggregated weight of the large ones (coded as d = 0)
    let options: Vec<Vec<(u64, i64)>> = c
        .iter()
        .map(|&cj| {
            let mut small = Vec::new();
            let mut large = 0i64;
            for &d in &divisors {
                let mu = mobius(d) as i64;
                if (d as u128).pow(2) * cj as u128 <= m as u128 {
                    small.push((d, mu));
                } else {
                    large += mu;
                }
            }
            if large != 0 {
                small.push((0, large));
            }
            small
        })
        .collect();
    let classes: u64 = options.iter().map(|o| o.len() as u64).product();
    if classes == 0 {
        // some coordinate's Möbius weights cancel entirely
        return Ok(InclusionExclusion {
            filtered,
            mobius_sum: 0,
            classes,
        });
    }
    if classes > 5_000_000 {
        return Err(Error::CapExceeded {
            what: "inclusion-exclusion divisor classes",
            needed: classes.to_string(),
            cap: "5000000".into(),
        });
    }
    let mut mobius_sum = 0i128;
    let mut pick = vec![0usize; c.len()];
    loop {
        let mut sign = 1i64;
        let mut coeffs = Vec::with_capacity(c.len());
        for (j, &k) in pick.iter().enumerate() {
            let (d, mu) = options[j][k];
            sign *= mu;
            if d != 0 {
                coeffs.push(c[j] * d * d);
            }
        }
        if sign != 0 {
            let r = if coeffs.is_empty() {
                u64::from(m == 0)
            } else {
                let mut t = 0;
                visit_solutions(&coeffs, m, &mut |x| t += weight(x));
                t
            };
            mobius_sum += sign as i128 * r as i128;
        }
        // next combination
        let mut j = 0;
        loop {
            if j == pick.len() {
                return Ok(InclusionExclusion {
                    filtered,
                    mobius_sum,
                    classes,
                });
            }
            pick[j] += 1;
            if pick[j] < options[j].len() {
                break;
            }
            pick[j] = 0;
            j += 1;
        }
    }
}

/// `inclusion_exclusion_check`: whether the two sides agree.
pub fn inclusion_exclusion_check(form: &ScaledForm, m: u64, z: u64) -> Result<bool> {
    Ok(inclusion_exclusion(form, m, z)?.holds())
}

/// `#{x in Z^l : Q(x) <= n}`.
pub fn count_lattice_points_below(form: &DiagonalForm, n: u64) -> Result<u64> {
    if n > 1_000_000 {
        return invalid("lattice-point counts are limited to n <= 10^6");
    }
    let a = form.coefficients();
    let len = n as usize + 1;
    // exact counts of each value for one coordinate, then for pairs
    let single = |c: u64| {
        let mut v = vec![0u64; len];
        let mut x = 0u64;
        while c * x * x <= n {
            v[(c * x * x) as usize] += if x == 0 { 1 } else { 2 };
            x += 1;
        }
        v
    };
    let conv = |u: &[u64], v: &[u64]| {
        let mut w = vec![0u64; len];
        let nz: Vec<usize> = (0..len).filter(|&i| u[i] != 0).collect();
        for (j, &vj) in v.iter().enumerate() {
            if vj == 0 {
                continue;
            }
            for &i in &nz {
                if i + j >= len {
                    break;
                }
                w[i + j] += u[i] * vj;
            }
        }
        w
    };
    let vecs: Vec<Vec<u64>> = a.iter().map(|&c| single(c)).collect();
    let (left, right) = match vecs.len() {
        1 => (vecs[0].clone(), None),
        2 => (vecs[0].clone(), Some(vecs[1].clone())),
        3 => (conv(&vecs[0], &vecs[1]), Some(vecs[2].clone())),
        _ => (conv(&vecs[0], &vecs[1]), Some(conv(&vecs[2], &vecs[3]))),
    };
    Ok(match right {
        None => left.iter().sum(),
        Some(r) => {
            let mut prefix = vec![0u64; len];
            let mut acc = 0;
            for (i, &v) in r.iter().enumerate() {
                acc += v;
                prefix[i] = acc;
            }
            left.iter()
                .enumerate()
                .map(|(t, &v)| v * prefix[len - 1 - t])
                .sum()
        }
    })
}

/// Lattice-point count against `(3 sqrt n)^l / sqrt(det) + l (3 sqrt n)^{l-1}`.
#[derive(Clone, Debug)]
pub struct LatticeBound {
    pub count: u64,
    pub bound: RationalInterval,
    pub holds: bool,
}

pub fn lattice_bound_check(form: &DiagonalForm, n: u64) -> Result<LatticeBound> {
    let count = count_lattice_points_below(form, n)?;
    let bits = 128;
    let l = form.dim() as u32;
    let root = interval::sqrt(&RationalInterval::int(9 * n as i64), bits)?;
    let det = interval::sqrt(
        &RationalInterval::point(q_int(form.determinant() as i64)),
        bits,
    )?;
    let bound = &root.powi(l).div(&det)? + &root.powi(l - 1).scale(&q_int(l as i64));
    let holds = RationalInterval::int(count as i64).certainly_le(&bound);
    Ok(LatticeBound {
        count,
        bound,
        holds,
    })
}

/// Least common multiple of a list.
pub fn lcm_all(d: &[u64]) -> u64 {
    d.iter().fold(1, |acc, &x| lcm(acc, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn form(a: &[u64]) -> ScaledForm {
        DiagonalForm::new(a.to_vec()).unwrap().into()
    }

    /// Signed nested loops without any folding.
    fn brute(a: &[u64], m: u64) -> u64 {
        let b: Vec<i64> = a.iter().map(|&c| isqrt(m / c) as i64).collect();
        let mut count = 0;
        let mut x = vec![0i64; a.len()];
        fn rec(a: &[u64], b: &[i64], k: usize, m: u64, x: &mut Vec<i64>, count: &mut u64) {
            if k == a.len() {
                let v: u64 = a
                    .iter()
                    .zip(x.iter())
                    .map(|(&c, &v)| c * (v * v) as u64)
                    .sum();
                if v == m {
                    *count += 1;
                }
                return;
            }
            for v in -b[k]..=b[k] {
                x[k] = v;
                rec(a, b, k + 1, m, x, count);
            }
        }
        rec(a, &b, 0, m, &mut x, &mut count);
        count
    }

    /// Points of the box with `Q(x) <= n`.
    fn brute_le(a: &[u64], n: u64) -> u64 {
        let b: Vec<i64> = a.iter().map(|&c| isqrt(n / c) as i64).collect();
        let mut pts: Vec<u64> = vec![0];
        for (k, &c) in a.iter().enumerate() {
            let mut next = Vec::new();
            for &p in &pts {
                for v in -b[k]..=b[k] {
                    let t = p + c * (v * v) as u64;
                    if t <= n {
                        next.push(t);
                    }
                }
            }
            pts = next;
        }
        pts.len() as u64
    }

    #[test]
    fn representation_examples() {
        let q = form(&[1, 1, 1, 1]);
        assert_eq!(count_representations(&q, 0).unwrap().0, 1);
        assert_eq!(count_representations(&q, 1).unwrap().0, 8);
        let (n, set) = count_representations(&q, 8).unwrap();
        assert_eq!(n, 24);
        assert_eq!(set.vectors.iter().map(|r| r.weight).sum::<u64>(), 24);
        for r in &set.vectors {
            assert_eq!(r.x.iter().map(|v| v * v).sum::<u64>(), 8);
        }
        assert_eq!(
            count_representations(&form(&[1, 2, 3, 4]), 10).unwrap().0,
            brute(&[1, 2, 3, 4], 10)
        );
        assert!(count_representations(&q, MAX_TARGET + 1).is_err());
    }

    #[test]
    fn jacobi_agrees_with_enumeration() {
        let q = form(&[1, 1, 1, 1]);
        assert_eq!(jacobi_r4(1), 8);
        assert_eq!(jacobi_r4(8), 24);
        for n in 1..=2000 {
            assert_eq!(jacobi_r4(n), representation_count(&q, n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn parallel_path_matches_serial() {
        let q = form(&[1, 2, 3, 5]);
        for m in [100_000, 123_457] {
            let mut serial = 0;
            visit_solutions(q.coefficients(), m, &mut |x| serial += weight(x));
            assert_eq!(representation_count(&q, m).unwrap(), serial);
        }
    }

    #[test]
    fn restricted_examples() {
        let q = form(&[1, 1, 1, 1]);
        let p = |r| Restriction::AlmostPrime(AlmostPrimeClass::plain(r));
        assert_eq!(count_restricted(&q, 32, &p(1)).unwrap(), 0);
        assert_eq!(count_restricted(&q, 32, &p(2)).unwrap(), 24);
        assert_eq!(count_restricted(&q, 1, &p(0)).unwrap(), 8);
        // zero is coprime only to 1
        assert_eq!(
            count_restricted(&q, 1, &Restriction::CoprimeTo(1)).unwrap(),
            8
        );
        assert_eq!(
            count_restricted(&q, 1, &Restriction::CoprimeTo(7)).unwrap(),
            0
        );
        assert_eq!(
            count_restricted(&q, 4, &Restriction::CoprimeTo(7)).unwrap(),
            16
        );
    }

    #[test]
    fn inclusion_exclusion_examples() {
        assert!(inclusion_exclusion_check(&form(&[1, 1, 1, 1]), 25, 5).unwrap());
        assert!(inclusion_exclusion_check(&form(&[1, 2, 3, 4]), 100, 7).unwrap());
        for z in [2, 3, 5, 11] {
            assert!(inclusion_exclusion_check(&form(&[1, 2, 5, 7]), 0, z).unwrap());
        }
        let r = inclusion_exclusion(&form(&[1, 1, 2, 3]), 1000, 14).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn lattice_examples() {
        let f = |a: &[u64]| DiagonalForm::new(a.to_vec()).unwrap();
        let r = lattice_bound_check(&f(&[5]), 4).unwrap();
        assert_eq!(r.count, 1);
        assert!(r.holds);
        let r = lattice_bound_check(&f(&[1]), 9).unwrap();
        assert_eq!(r.count, 7);
        assert!(r.bound.contains(&q_int(10)));
        assert!(r.holds);
        let r = lattice_bound_check(&f(&[1, 1, 1, 1]), 10).unwrap();
        assert_eq!(r.count, brute_le(&[1, 1, 1, 1], 10));
        assert!(r.holds);
        for (a, n) in [
            (&[1u64, 2, 3][..], 500),
            (&[2, 3][..], 999),
            (&[1, 2, 5, 7][..], 3000),
        ] {
            let r = lattice_bound_check(&f(a), n).unwrap();
            assert_eq!(r.count, brute_le(a, n));
            assert!(r.holds);
        }
    }

    #[test]
    fn discriminant_and_level() {
        let f = DiagonalForm::new(vec![1, 2, 3, 4]).unwrap();
        assert_eq!(f.discriminant(), 384);
        assert_eq!(f.level(), 48);
        let s = ScaledForm::new(f, vec![1, 7, 1, 1]).unwrap();
        assert_eq!(s.coefficients(), &[1, 98, 3, 4]);
        assert_eq!(s.level(), 4 * 588);
        assert!(ScaledForm::new(DiagonalForm::new(vec![1, 1]).unwrap(), vec![1, 4]).is_err());
        assert_eq!(
            "1, 2,5,15".parse::<DiagonalForm>().unwrap().discriminant(),
            2400
        );
    }

    proptest! {
        #[test]
        fn matches_brute_force(a in prop::collection::vec(1u64..8, 1..=4), m in 0u64..150) {
            prop_assert_eq!(count_representations(&form(&a), m).unwrap().0, brute(&a, m));
        }

        #[test]
        fn permutation_invariant(a in prop::collection::vec(1u64..6, 4), m in 0u64..400, k in 0usize..24) {
            let mut b = a.clone();
            // a fixed permutation indexed by k
            let mut idx: Vec<usize> = (0..4).collect();
            let mut kk = k;
            for i in (1..4).rev() {
                idx.swap(i, kk % (i + 1));
                kk /= i + 1;
            }
            for (i, &j) in idx.iter().enumerate() {
                b[i] = a[j];
            }
            prop_assert_eq!(
                representation_count(&form(&a), m).unwrap(),
                representation_count(&form(&b), m).unwrap()
            );
        }

        #[test]
        fn unbounded_class_is_unrestricted(a in prop::collection::vec(1u64..6, 4), m in 0u64..400) {
            let all = Restriction::AlmostPrime(AlmostPrimeClass::plain(1000));
            prop_assert_eq!(
                count_restricted(&form(&a), m, &all).unwrap(),
                representation_count(&form(&a), m).unwrap()
            );
        }

        #[test]
        fn scaling_is_divisibility_filter(d in prop::collection::vec(prop::sample::select(vec![1u64, 2, 3, 5, 6]), 4), m in 0u64..600) {
            let base = DiagonalForm::new(vec![1, 1, 2, 3]).unwrap();
            let scaled = ScaledForm::new(base.clone(), d.clone()).unwrap();
            let (_, set) = count_representations(&ScaledForm::unscaled(base), m).unwrap();
            let filtered: u64 = set
                .vectors
                .iter()
                .filter(|r| r.x.iter().zip(&d).all(|(x, dj)| x % dj == 0))
                .map(|r| r.weight)
                .sum();
            prop_assert_eq!(representation_count(&scaled, m).unwrap(), filtered);
        }
    }
}
