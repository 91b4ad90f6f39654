//! Exact sieving of short intervals and counts of rough numbers.
//!
//! [`sieve_interval`] returns the offsets `j ∈ [1, y]` with `x + j` coprime
//! to every prime `<= z`, for an arbitrary-precision base `x`. Each prime
//! costs one big-integer reduction; everything after that is machine-word
//! striding over a bitmap.
//!
//! [`rough_counts`] and the `pi_k*` family enumerate `n <= x` whose prime
//! factors all exceed `z`, recording Ω(n) (with multiplicity) for each.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{invalid, Error, Result};
use crate::primes::{gcd, isqrt, primes_up_to};

/// The interval `(x, x + y]` sieved by the primes `<= z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSpec {
    #[serde(with = "crate::decimal")]
    pub x: BigUint,
    pub y: u64,
    pub z: u64,
}

/// Offsets `j` (ascending, `1 <= j <= y`) with `gcd(x + j, P(z)) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivorSet {
    pub spec: IntervalSpec,
    pub offsets: Vec<u64>,
}

impl SurvivorSet {
    /// S(x, y, z).
    pub fn count(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
}

/// Knobs for [`sieve_interval_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SieveOptions {
    /// Offsets per independently sieved segment; `None` picks a default.
    pub segment: Option<u64>,
    pub budget: Budget,
}

const DEFAULT_SEGMENT: u64 = 1 << 20;

pub fn sieve_interval(x: &BigUint, y: u64, z: u64) -> Result<SurvivorSet> {
    sieve_interval_with(x, y, z, &SieveOptions::default())
}

pub fn sieve_interval_with(x: &BigUint, y: u64, z: u64, opts: &SieveOptions) -> Result<SurvivorSet> {
    if y == 0 {
        return Err(invalid("interval length y must be >= 1"));
    }
    opts.budget.check_interval(y)?;
    opts.budget.check_sieve_limit(z)?;
    let table = primes_up_to(z);
    let offsets = survivors_by_primes(x, y, table.primes(), opts.segment.unwrap_or(DEFAULT_SEGMENT))?;
    Ok(SurvivorSet {
        spec: IntervalSpec { x: x.clone(), y, z },
        offsets,
    })
}

/// Survivor offsets of `(x, x+y]` after striking multiples of `primes`.
pub(crate) fn survivors_by_primes(x: &BigUint, y: u64, primes: &[u64], segment: u64) -> Result<Vec<u64>> {
    if segment == 0 {
        return Err(invalid("segment size must be >= 1"));
    }
    // first offset j >= 1 with p | x + j
    let small = x.to_u128();
    let first: Vec<u64> = primes
        .par_iter()
        .map(|&p| {
            let r = match small {
                Some(v) => (v % p as u128) as u64,
                None => (x % p).to_u64().expect("residue below a 64-bit modulus"),
            };
            let j = (p - r) % p;
            if j == 0 {
                p
            } else {
                j
            }
        })
        .collect();

    let segments = y.div_ceil(segment);
    let parts: Vec<Vec<u64>> = (0..segments)
        .into_par_iter()
        .map(|s| {
            let lo = 1 + s * segment; // inclusive
            let hi = (lo + segment).min(y + 1); // exclusive
            let mut struck = vec![false; (hi - lo) as usize];
            for (&p, &j0) in primes.iter().zip(&first) {
                let mut j = if j0 >= lo { j0 } else { j0 + (lo - j0).div_ceil(p) * p };
                while j < hi {
                    struck[(j - lo) as usize] = true;
                    j += p;
                }
            }
            struck
                .iter()
                .enumerate()
                .filter(|(_, &hit)| !hit)
                .map(|(i, _)| lo + i as u64)
                .collect()
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

/// N(x, z) split by the sign of λ, and by Ω.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoughCounts {
    pub x: u64,
    pub z: u64,
    /// Integers `n <= x` with every prime factor `> z` (including `n = 1`).
    pub n: u64,
    /// Those with λ(n) = −1.
    pub n_plus: u64,
    /// Those with λ(n) = +1.
    pub n_minus: u64,
    /// k ↦ π_k(x, z), for every k with a nonzero count.
    pub by_k: BTreeMap<u32, u64>,
}

const ROUGH_SEGMENT: u64 = 1 << 16;

/// Folds `visit(acc, n, Ω(n))` over every z-rough `n` in `[1, x]`.
///
/// Segments are processed in parallel; `merge` must be associative and
/// commutative for the result to be deterministic.
pub(crate) fn fold_rough<A, I, V, M>(x: u64, z: u64, budget: &Budget, init: I, visit: V, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, u64, u32) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    budget.check_enumeration(x)?;
    if x == 0 {
        return Ok(init());
    }
    let strike_limit = z.min(x);
    let root = isqrt(x);
    let table = primes_up_to(strike_limit.max(root));
    let primes = table.primes();
    let split = primes.partition_point(|&p| p <= strike_limit);
    let (strikers, dividers) = primes.split_at(split);

    let segments = x.div_ceil(ROUGH_SEGMENT);
    let acc = (0..segments)
        .into_par_iter()
        .map(|s| {
            let lo = 1 + s * ROUGH_SEGMENT;
            let hi = (lo + ROUGH_SEGMENT).min(x + 1);
            let len = (hi - lo) as usize;
            let mut rough = vec![true; len];
            for &p in strikers {
                let mut m = lo.div_ceil(p) * p;
                while m < hi {
                    rough[(m - lo) as usize] = false;
                    m += p;
                }
            }
            let mut rest: Vec<u64> = (lo..hi).collect();
            let mut omega = vec![0u32; len];
            for &p in dividers {
                if p > root {
                    break;
                }
                let mut m = lo.div_ceil(p) * p;
                while m < hi {
                    let i = (m - lo) as usize;
                    if rough[i] {
                        while rest[i].is_multiple_of(p) {
                            rest[i] /= p;
                            omega[i] += 1;
                        }
                    }
                    m += p;
                }
            }
            let mut acc = init();
            for i in 0..len {
                if rough[i] {
                    let k = omega[i] + u32::from(rest[i] > 1);
                    visit(&mut acc, lo + i as u64, k);
                }
            }
            acc
        })
        .reduce(&init, &merge);
    Ok(acc)
}

pub fn rough_counts(x: u64, z: u64) -> Result<RoughCounts> {
    rough_counts_with(x, z, &Budget::default())
}

pub fn rough_counts_with(x: u64, z: u64, budget: &Budget) -> Result<RoughCounts> {
    let by_k: BTreeMap<u32, u64> = fold_rough(
        x,
        z,
        budget,
        BTreeMap::new,
        |acc: &mut BTreeMap<u32, u64>, _n, k| *acc.entry(k).or_insert(0) += 1,
        |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            a
        },
    )?;
    let n = by_k.values().sum();
    let n_minus = by_k.iter().filter(|(k, _)| *k % 2 == 0).map(|(_, c)| c).sum();
    let mut by_k = by_k;
    by_k.remove(&0);
    Ok(RoughCounts {
        x,
        z,
        n,
        n_plus: n - n_minus,
        n_minus,
        by_k,
    })
}

/// A residue class `a (mod q)` with `gcd(a, q) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progression {
    pub q: u64,
    pub a: u64,
}

impl Progression {
    pub fn new(q: u64, a: u64) -> Result<Self> {
        if q == 0 {
            return Err(invalid("modulus q must be >= 1"));
        }
        let a = a % q;
        let g = gcd(a, q);
        if g != 1 {
            return Err(Error::NotCoprime { a, q, gcd: g });
        }
        Ok(Progression { q, a })
    }

    pub fn contains(&self, n: u64) -> bool {
        n % self.q == self.a
    }
}

/// π_k(x, z), or π_k(x, z; q, a) when a progression is given.
///
/// Counts `n <= x` with Ω(n) = k, every prime factor `> z`.
pub fn pi_k(x: u64, z: u64, k: u32, ap: Option<Progression>) -> Result<u64> {
    if k == 0 {
        return Err(invalid("pi_k: k must be >= 1"));
    }
    fold_rough(
        x,
        z,
        &Budget::default(),
        || 0u64,
        |acc: &mut u64, n, omega| {
            if omega == k && ap.is_none_or(|ap| ap.contains(n)) {
                *acc += 1;
            }
        },
        |a, b| a + b,
    )
}

/// π_{k,q}(x, z): the members of π_k(x, z) that are coprime to `q`.
pub fn pi_k_coprime(x: u64, z: u64, k: u32, q: u64) -> Result<u64> {
    Ok(pi_k_by_residue(x, z, k, q)?
        .iter()
        .enumerate()
        .filter(|&(a, _)| gcd(a as u64, q) == 1)
        .map(|(_, c)| c)
        .sum())
}

/// Counts of π_k(x, z) members in each residue class mod `q` (index = residue).
pub fn pi_k_by_residue(x: u64, z: u64, k: u32, q: u64) -> Result<Vec<u64>> {
    by_residue(x, z, Some(k), q)
}

/// N(x, z; q, a).
pub fn residue_survivors(x: u64, z: u64, q: u64, a: u64) -> Result<u64> {
    let ap = Progression::new(q, a)?;
    Ok(by_residue(x, z, None, q)?[ap.a as usize])
}

/// Rough counts in each residue class mod `q`; `k = None` counts all Ω.
pub fn rough_by_residue(x: u64, z: u64, q: u64) -> Result<Vec<u64>> {
    by_residue(x, z, None, q)
}

fn by_residue(x: u64, z: u64, k: Option<u32>, q: u64) -> Result<Vec<u64>> {
    if q == 0 {
        return Err(invalid("modulus q must be >= 1"));
    }
    if k == Some(0) {
        return Err(invalid("pi_k: k must be >= 1"));
    }
    let budget = Budget::default();
    if q > budget.max_enumeration {
        return Err(Error::BudgetExceeded {
            what: "modulus q",
            requested: q as u128,
            limit: budget.max_enumeration as u128,
        });
    }
    fold_rough(
        x,
        z,
        &budget,
        || vec![0u64; q as usize],
        |acc: &mut Vec<u64>, n, omega| {
            if k.is_none_or(|k| k == omega) {
                acc[(n % q) as usize] += 1;
            }
        },
        |mut a, b| {
            for (s, t) in a.iter_mut().zip(b) {
                *s += t;
            }
            a
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::{factorize, liouville, primorial};
    use num_integer::Integer;
    use proptest::prelude::*;

    fn brute_survivors(x: &BigUint, y: u64, z: u64) -> Vec<u64> {
        let pz = primorial(z);
        (1..=y).filter(|&j| (x + j).gcd(&pz) == BigUint::from(1u32)).collect()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn interval_examples() {
        let s = sieve_interval(&big(0), 30, 5).unwrap();
        assert_eq!(s.offsets, vec![1, 7, 11, 13, 17, 19, 23, 29]);
        let s = sieve_interval(&big(100), 20, 3).unwrap();
        assert_eq!(s.offsets, vec![1, 3, 7, 9, 13, 15, 19]);
        assert!(sieve_interval(&big(510), 10, 11).unwrap().is_empty());
        assert!(sieve_interval(&big(0), 0, 5).is_err());
    }

    #[test]
    fn huge_base() {
        let x = primorial(200) * 7u32 + 1u32;
        let s = sieve_interval(&x, 500, 97).unwrap();
        assert_eq!(s.offsets, brute_survivors(&x, 500, 97));
    }

    #[test]
    fn z_below_two_keeps_everything() {
        let s = sieve_interval(&big(41), 5, 1).unwrap();
        assert_eq!(s.offsets, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn budget_is_enforced() {
        let opts = SieveOptions {
            segment: None,
            budget: Budget {
                max_sieve_limit: 1000,
                ..Budget::default()
            },
        };
        assert!(matches!(
            sieve_interval_with(&big(0), 10, 1001, &opts),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn rough_examples() {
        let r = rough_counts(30, 5).unwrap();
        assert_eq!((r.n, r.n_minus, r.n_plus), (8, 1, 7));
        let r = rough_counts(100, 9).unwrap();
        assert_eq!((r.n, r.n_plus, r.n_minus), (22, 21, 1));
        let r = rough_counts(30, 29).unwrap();
        assert_eq!((r.n, r.n_minus, r.n_plus), (1, 1, 0));
        assert!(r.by_k.is_empty());
    }

    #[test]
    fn pi_k_examples() {
        assert_eq!(pi_k(30, 5, 1, None).unwrap(), 7);
        assert_eq!(pi_k(100, 3, 2, None).unwrap(), 9);
        assert_eq!(pi_k(30, 5, 1, Some(Progression::new(7, 4).unwrap())).unwrap(), 1);
        assert!(Progression::new(6, 4).is_err());
        assert!(pi_k(30, 5, 0, None).is_err());
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue_survivors(30, 5, 1, 0).unwrap(), 8);
        assert_eq!(residue_survivors(30, 5, 7, 4).unwrap(), 1);
        // 1 together with 13, 17, 29, 37, 41, 53, 61, 73, 89, 97
        assert_eq!(residue_survivors(100, 9, 4, 1).unwrap(), 11);
        assert!(matches!(residue_survivors(100, 9, 4, 2), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn rough_counts_match_factorization() {
        for &(x, z) in &[(5000u64, 3u64), (5000, 10), (20_000, 30), (1000, 0), (1000, 1)] {
            let r = rough_counts(x, z).unwrap();
            let mut n = 0;
            let mut minus = 0;
            let mut by_k = BTreeMap::new();
            for m in 1..=x {
                let f = factorize(m).unwrap();
                if f.factors().iter().all(|&(p, _)| p > z) {
                    n += 1;
                    let k = f.big_omega();
                    assert_eq!(liouville(m).unwrap(), if k.is_multiple_of(2) { 1 } else { -1 });
                    if k.is_multiple_of(2) {
                        minus += 1;
                    }
                    if k > 0 {
                        *by_k.entry(k).or_insert(0u64) += 1;
                    }
                }
            }
            assert_eq!((r.n, r.n_minus, r.n_plus), (n, minus, n - minus), "x={x} z={z}");
            assert_eq!(r.by_k, by_k);
            assert_eq!(r.n, 1 + r.by_k.values().sum::<u64>());
        }
    }

    #[test]
    fn progressions_partition_pi_k() {
        for q in [1u64, 3, 4, 10, 12] {
            for k in 1..=3 {
                let total = pi_k_coprime(20_000, 5, k, q).unwrap();
                let mut sum = 0;
                for a in (0..q).filter(|&a| gcd(a, q) == 1) {
                    sum += pi_k(20_000, 5, k, Some(Progression::new(q, a).unwrap())).unwrap();
                }
                assert_eq!(sum, total, "q={q} k={k}");
            }
        }
    }

    #[test]
    fn residue_classes_partition_rough() {
        let q = 12;
        let all = rough_by_residue(10_000, 3, q).unwrap();
        let coprime_total: u64 = (0..q)
            .filter(|&a| gcd(a, q) == 1)
            .map(|a| residue_survivors(10_000, 3, q, a).unwrap())
            .sum();
        let expected: u64 = all
            .iter()
            .enumerate()
            .filter(|&(a, _)| gcd(a as u64, q) == 1)
            .map(|(_, c)| c)
            .sum();
        assert_eq!(coprime_total, expected);
        // z = 3 makes every survivor coprime to 12
        assert_eq!(expected, rough_counts(10_000, 3).unwrap().n);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_gcd_oracle(x in 0u64..1_000_000, y in 1u64..1000, z in 0u64..100) {
            prop_assert_eq!(sieve_interval(&big(x), y, z).unwrap().offsets, brute_survivors(&big(x), y, z));
        }

        #[test]
        fn segment_size_is_invisible(x in any::<u64>(), y in 1u64..3000, z in 0u64..300, seg in 1u64..200) {
            let base = sieve_interval(&big(x), y, z).unwrap();
            let opts = SieveOptions { segment: Some(seg), ..Default::default() };
            prop_assert_eq!(sieve_interval_with(&big(x), y, z, &opts).unwrap(), base);
        }

        #[test]
        fn survivors_shrink_with_z(x in 0u64..1_000_000, y in 1u64..500, z1 in 0u64..60, dz in 0u64..60) {
            let wide = sieve_interval(&big(x), y, z1).unwrap().offsets;
            let narrow = sieve_interval(&big(x), y, z1 + dz).unwrap().offsets;
            prop_assert!(narrow.iter().all(|j| wide.binary_search(j).is_ok()));
        }
    }
}
