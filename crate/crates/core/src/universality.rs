//! Finite checks of the universality statements: the threshold for plain
//! almost-prime variables, the fifteen criterion over the escalator
//! catalogue, the scaling step by 2, 3 and 5, and the four-squares sweep with
//! nearly almost-prime coordinates.

use rayon::prelude::*;

use crate::arith::{isqrt, AlmostPrimeClass};
use crate::error::{invalid, Error, Result};
use crate::qform::{count_representations, representation_count, DiagonalForm, ScaledForm};

/// Coefficient families `(a1, a2, a3)` with the inclusive range of `a4`.
pub const CATALOG_FAMILIES: [([u64; 3], u64, u64); 7] = [
    ([1, 1, 1], 1, 7),
    ([1, 1, 2], 2, 14),
    ([1, 1, 3], 3, 6),
    ([1, 2, 2], 2, 7),
    ([1, 2, 3], 3, 10),
    ([1, 2, 4], 4, 14),
    ([1, 2, 5], 5, 15),
];

/// The escalator catalogue: 60 sorted quaternary diagonal forms.
pub fn escalator_catalog() -> Vec<DiagonalForm> {
    let mut out = Vec::new();
    for (head, lo, hi) in CATALOG_FAMILIES {
        for k in lo..=hi {
            let c = vec![head[0], head[1], head[2], k];
            out.push(DiagonalForm::new(c).expect("catalogue entries are positive"));
        }
    }
    out
}

/// Whether the sorted coefficients of `a` are a catalogue member.
pub fn in_catalog(a: &DiagonalForm) -> bool {
    let mut c = a.coefficients().to_vec();
    c.sort_unstable();
    c.len() == 4
        && CATALOG_FAMILIES
            .iter()
            .any(|(h, lo, hi)| c[..3] == h[..] && (*lo..=*hi).contains(&c[3]))
}

/// The exceptional primes of the nearly almost-prime classes.
pub const DEFAULT_EXCEPTIONAL: [u64; 3] = [2, 3, 5];

/// Outcome of the four-squares threshold demonstration for `P_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdReport {
    pub r: u32,
    /// `2^{2r+3}`.
    pub threshold: u64,
    /// `r_{I_4}(2^{2r+3})`.
    pub count: u64,
    /// Every representation of the threshold has nonzero coordinates `±2^{r+1}`.
    pub coordinates_ok: bool,
    /// The first `n <= 2^{2r+2}` without a `P_r` representation, if any.
    pub first_gap: Option<u64>,
    /// Whether the threshold itself has a `P_r` representation.
    pub threshold_represented: bool,
}

impl ThresholdReport {
    pub fn holds(&self) -> bool {
        self.count == 24
            && self.coordinates_ok
            && self.first_gap.is_none()
            && !self.threshold_represented
    }
}

fn four_squares() -> ScaledForm {
    ScaledForm::unscaled(DiagonalForm::new(vec![1, 1, 1, 1]).expect("positive"))
}

/// Whether some representation of `n` by `form` has every coordinate in `cls`.
pub fn has_restricted_representation(
    form: &ScaledForm,
    n: u64,
    cls: &AlmostPrimeClass,
) -> Result<bool> {
    let (_, set) = count_representations(form, n)?;
    Ok(set
        .vectors
        .iter()
        .any(|v| v.x.iter().all(|&x| cls.contains(x as u128))))
}

/// Checks that `2^{2r+3}` has exactly 24 representations as a sum of four
/// squares, all built from `±2^{r+1}`, that it has none in `P_r`, and that
/// every `n <= 2^{2r+2}` has one.
pub fn threshold_demo(r: u32) -> Result<ThresholdReport> {
    if r > 5 {
        return Err(Error::CapExceeded {
            what: "threshold demonstration",
            needed: format!("r = {r}"),
            cap: "r <= 5".into(),
        });
    }
    let form = four_squares();
    let cls = AlmostPrimeClass::plain(r as u64);
    let threshold = 1u64 << (2 * r + 3);
    let (count, set) = count_representations(&form, threshold)?;
    let big = 1u64 << (r + 1);
    let coordinates_ok = set
        .vectors
        .iter()
        .all(|v| v.x.iter().all(|&x| x == 0 || x == big));
    let first_gap = (1..=threshold / 2)
        .into_par_iter()
        .map(|n| has_restricted_representation(&form, n, &cls).map(|ok| (!ok).then_some(n)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .min();
    let threshold_represented = has_restricted_representation(&form, threshold, &cls)?;
    Ok(ThresholdReport {
        r,
        threshold,
        count,
        coordinates_ok,
        first_gap,
        threshold_represented,
    })
}

/// The least `m` in `1..=15` not represented by `a`.
pub fn fifteen_first_miss(a: &DiagonalForm) -> Result<Option<u64>> {
    if a.dim() != 4 {
        return invalid("fifteen_check needs a quaternary form");
    }
    let f = ScaledForm::unscaled(a.clone());
    for m in 1..=15 {
        if representation_count(&f, m)? == 0 {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// `r_Q(m) > 0` for every `1 <= m <= 15`.
pub fn fifteen_check(a: &DiagonalForm) -> Result<bool> {
    Ok(fifteen_first_miss(a)?.is_none())
}

/// Non-`S` multiplicities of `0..=top`.
fn multiplicities(top: u64, cls: &AlmostPrimeClass) -> Vec<u64> {
    (0..=top)
        .into_par_iter()
        .map(|x| cls.outside_multiplicity(x as u128))
        .collect()
}

/// A representation and the largest non-`S` multiplicity among its coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalRepresentation {
    pub n: u64,
    pub x: Vec<u64>,
    pub multiplicity: u64,
}

/// Among the non-negative representations of `n` by `form`, one minimizing
/// the largest non-`S` multiplicity, the lexicographically least on ties.
pub fn minimal_representation(
    form: &ScaledForm,
    n: u64,
    cls: &AlmostPrimeClass,
) -> Result<Option<MinimalRepresentation>> {
    let (_, set) = count_representations(form, n)?;
    let mut best: Option<MinimalRepresentation> = None;
    for v in set.vectors {
        let mult =
            v.x.iter()
                .map(|&x| cls.outside_multiplicity(x as u128))
                .max()
                .unwrap_or(0);
        let better = match &best {
            None => true,
            Some(b) => (mult, &v.x) < (b.multiplicity, &b.x),
        };
        if better {
            best = Some(MinimalRepresentation {
                n,
                x: v.x,
                multiplicity: mult,
            });
        }
    }
    Ok(best)
}

/// A representation of `m` and its lifts to `4m`, `9m`, `25m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub m: u64,
    pub base: Option<MinimalRepresentation>,
    /// `(k, k x, Q(k x) == k^2 m, every coordinate of k x in the class)`.
    pub lifts: Vec<(u64, Vec<u64>, bool, bool)>,
}

impl ReductionReport {
    pub fn holds(&self) -> bool {
        self.base.is_some() && self.lifts.iter().all(|l| l.2 && l.3)
    }
}

/// Lifts a minimal `P_{r,S}` representation of `m` by the exceptional primes.
pub fn reduction_check_with(
    form: &ScaledForm,
    m: u64,
    cls: &AlmostPrimeClass,
) -> Result<ReductionReport> {
    if m == 0 || m > 100_000 {
        return invalid(format!("reduction_check needs 1 <= m <= 10^5, got {m}"));
    }
    let base = minimal_representation(form, m, cls)?.filter(|b| b.multiplicity <= cls.r());
    let mut lifts = Vec::new();
    if let Some(b) = &base {
        for &k in cls.exceptional() {
            let x: Vec<u64> = b.x.iter().map(|&v| v * k).collect();
            let value: u128 = form
                .coefficients()
                .iter()
                .zip(&x)
                .map(|(&c, &v)| c as u128 * (v as u128).pow(2))
                .sum();
            let eq = value == (k * k) as u128 * m as u128;
            let member = x.iter().all(|&v| cls.contains(v as u128));
            lifts.push((k, x, eq, member));
        }
    }
    Ok(ReductionReport { m, base, lifts })
}

/// The scaling step for sums of four squares with `P_{694, {2,3,5}}` coordinates.
pub fn reduction_check(m: u64) -> Result<ReductionReport> {
    let cls = AlmostPrimeClass::new(694, DEFAULT_EXCEPTIONAL)?;
    reduction_check_with(&four_squares(), m, &cls)
}

/// Outcome of the four-squares sweep with `P_{r,S}` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorollaryReport {
    pub n_max: u64,
    pub r: u64,
    pub exceptional: Vec<u64>,
    pub first_failure: Option<u64>,
    /// Largest over `n` of the minimal achievable non-`S` multiplicity.
    pub max_multiplicity: u64,
    /// The least `n` attaining it, with its minimal representation.
    pub witness: Option<MinimalRepresentation>,
}

impl CorollaryReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// For every `1 <= n <= n_max`, the minimal largest non-`S` multiplicity over
/// its four-square representations; passes when it never exceeds `r`.
pub fn corollary_check(n_max: u64, r: u64, s: &[u64]) -> Result<CorollaryReport> {
    if n_max == 0 || n_max > 1_000_000 {
        return invalid(format!(
            "corollary_check needs 1 <= n_max <= 10^6, got {n_max}"
        ));
    }
    let cls = AlmostPrimeClass::new(r, s.iter().copied())?;
    let top = isqrt(n_max);
    let mult = multiplicities(top, &cls);
    let levels = *mult.iter().max().expect("nonempty");
    // for each level t: the admissible coordinates and their pairwise square sums
    let mut admissible: Vec<Vec<u64>> = Vec::new();
    let mut pair_sums: Vec<Vec<bool>> = Vec::new();
    for t in 0..=levels {
        let a: Vec<u64> = (0..=top).filter(|&x| mult[x as usize] <= t).collect();
        let mut b = vec![false; n_max as usize + 1];
        for (i, &x) in a.iter().enumerate() {
            for &y in &a[i..] {
                let s = x * x + y * y;
                if s > n_max {
                    break;
                }
                b[s as usize] = true;
            }
        }
        admissible.push(a);
        pair_sums.push(b);
    }
    let minimal = |n: u64| -> u64 {
        for t in 0..=levels as usize {
            let a = &admissible[t];
            let b = &pair_sums[t];
            for (i, &x) in a.iter().enumerate() {
                if x * x > n {
                    break;
                }
                for &y in &a[i..] {
                    let s = x * x + y * y;
                    if s > n {
                        break;
                    }
                    if b[(n - s) as usize] {
                        return t as u64;
                    }
                }
            }
        }
        u64::MAX
    };
    let per_n: Vec<u64> = (1..=n_max).into_par_iter().map(minimal).collect();
    if let Some(i) = per_n.iter().position(|&t| t == u64::MAX) {
        return Err(Error::Inconsistent(format!(
            "{} has no four-square representation",
            i + 1
        )));
    }
    let first_failure = per_n.iter().position(|&t| t > r).map(|i| i as u64 + 1);
    let max_multiplicity = *per_n.iter().max().expect("nonempty");
    let arg = per_n
        .iter()
        .position(|&t| t == max_multiplicity)
        .expect("attained") as u64
        + 1;
    let witness = minimal_representation(&four_squares(), arg, &cls)?;
    if witness.as_ref().map(|w| w.multiplicity) != Some(max_multiplicity) {
        return Err(Error::Inconsistent(format!(
            "minimal multiplicity of {arg} disagrees between searches"
        )));
    }
    Ok(CorollaryReport {
        n_max,
        r,
        exceptional: s.to_vec(),
        first_failure,
        max_multiplicity,
        witness,
    })
}
