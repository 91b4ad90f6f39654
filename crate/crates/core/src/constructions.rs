//! Residue-class constructions: greedy thinning, CRT assembly, admissible
//! sets, prime-gap certificates and Jacobsthal's function.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{invalid, Error, Result};
use crate::interval::{sieve_interval, sieve_interval_with, SieveOptions};
use crate::primes::{factorize, for_each_prime, primes_up_to, primorial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThinMode {
    /// Remove the least populated class (keeps as much as possible).
    Min,
    /// Remove the most populated class.
    Max,
}

impl std::str::FromStr for ThinMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(ThinMode::Min),
            "max" => Ok(ThinMode::Max),
            other => Err(invalid(format!(
                "unknown thinning mode {other:?} (expected min or max)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThinStep {
    pub prime: u64,
    pub residue: u64,
    pub before: usize,
    pub after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClassPlan {
    pub mode: ThinMode,
    pub steps: Vec<ThinStep>,
}

/// For each prime in order, removes one residue class from `set`: the class
/// with the fewest (`Min`) or most (`Max`) members, ties going to the
/// smallest residue.
pub fn greedy_thin(set: &[u64], primes: &[u64], mode: ThinMode) -> Result<(Vec<u64>, ResidueClassPlan)> {
    if primes.is_empty() {
        return Err(invalid("greedy_thin needs at least one prime"));
    }
    if primes.windows(2).any(|w| w[0] >= w[1]) || primes[0] < 2 {
        return Err(invalid("greedy_thin primes must be ascending and >= 2"));
    }
    let mut current: Vec<u64> = set.to_vec();
    current.sort_unstable();
    current.dedup();
    let mut steps = Vec::with_capacity(primes.len());
    for &p in primes {
        let residue = choose_class(&current, p, mode);
        let before = current.len();
        current.retain(|&s| s % p != residue);
        steps.push(ThinStep {
            prime: p,
            residue,
            before,
            after: current.len(),
        });
    }
    Ok((current, ResidueClassPlan { mode, steps }))
}

fn choose_class(set: &[u64], p: u64, mode: ThinMode) -> u64 {
    let dense = p <= 4 * set.len() as u64 + 64;
    if dense {
        let mut counts = vec![0usize; p as usize];
        for &s in set {
            counts[(s % p) as usize] += 1;
        }
        let pick = match mode {
            // min_by_key/max_by_key return the first/last extremum; reverse for max
            ThinMode::Min => counts.iter().enumerate().min_by_key(|&(_, c)| *c).map(|(r, _)| r),
            ThinMode::Max => counts
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                .map(|(r, _)| r),
        };
        return pick.unwrap_or(0) as u64;
    }
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for &s in set {
        *counts.entry(s % p).or_insert(0) += 1;
    }
    match mode {
        // more classes than elements: some class is empty
        ThinMode::Min => {
            let mut r = 0;
            for &occupied in counts.keys() {
                if occupied != r {
                    break;
                }
                r += 1;
            }
            r
        }
        ThinMode::Max => counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(&r, _)| r)
            .unwrap_or(0),
    }
}

/// A list of congruences and their combined solution `R (mod M)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceSystem {
    pub congruences: Vec<Congruence>,
    #[serde(with = "crate::decimal")]
    pub modulus: BigUint,
    #[serde(with = "crate::decimal")]
    pub residue: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    #[serde(with = "crate::decimal")]
    pub modulus: BigUint,
    #[serde(with = "crate::decimal")]
    pub residue: BigUint,
}

impl Congruence {
    pub fn new(modulus: impl Into<BigUint>, residue: impl Into<BigUint>) -> Self {
        Congruence {
            modulus: modulus.into(),
            residue: residue.into(),
        }
    }
}

impl CongruenceSystem {
    /// Every input congruence holds for the combined residue.
    pub fn is_sound(&self) -> bool {
        self.congruences
            .iter()
            .all(|c| &self.residue % &c.modulus == &c.residue % &c.modulus)
            && self.residue < self.modulus
    }
}

fn pair_consistent(a: &Congruence, b: &Congruence) -> bool {
    let g = a.modulus.gcd(&b.modulus);
    &a.residue % &g == &b.residue % &g
}

/// Minimal nonnegative `R` with `R ≡ r_i (mod m_i)` for all `i`, modulo
/// `M = lcm(m_i)`. Moduli need not be coprime.
pub fn crt_combine(congruences: &[Congruence]) -> Result<CongruenceSystem> {
    let mut modulus = BigInt::one();
    let mut residue = BigInt::zero();
    for (j, c) in congruences.iter().enumerate() {
        if c.modulus.is_zero() {
            return Err(invalid(format!("congruence #{j} has modulus 0")));
        }
        let m = BigInt::from(c.modulus.clone());
        let r = BigInt::from(c.residue.clone()).mod_floor(&m);
        let ext = modulus.extended_gcd(&m);
        let g = ext.gcd;
        let diff = &r - &residue;
        if !diff.mod_floor(&g).is_zero() {
            let first = congruences[..j]
                .iter()
                .position(|earlier| !pair_consistent(earlier, c))
                .unwrap_or(0);
            return Err(Error::InconsistentCongruences {
                first,
                second: j,
                first_modulus: congruences[first].modulus.to_string(),
                second_modulus: c.modulus.to_string(),
            });
        }
        // residue + modulus·t ≡ r (mod m), with modulus·x ≡ g (mod m)
        let step = &m / &g;
        let t = ((&diff / &g) * &ext.x).mod_floor(&step);
        residue += &modulus * t;
        modulus *= step;
        residue = residue.mod_floor(&modulus);
    }
    Ok(CongruenceSystem {
        congruences: congruences.to_vec(),
        modulus: modulus.abs().to_biguint().expect("positive modulus"),
        residue: residue.to_biguint().expect("reduced residue is nonnegative"),
    })
}

/// An admissible set inside `[0, y]` and the thinning that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleSet {
    pub y: u64,
    pub elements: Vec<u64>,
    pub plan: ResidueClassPlan,
}

/// Starts from `[0, y]` and, for each prime `p <= y + 1`, removes the least
/// populated class mod `p`.
///
/// Primes up to `y + 1` rather than `y` are needed: `[0, y]` has `y + 1`
/// elements and so covers every class of a prime `p = y + 1`.
pub fn build_admissible(y: u64) -> Result<AdmissibleSet> {
    if y == 0 {
        return Err(invalid("build_admissible: y must be >= 1"));
    }
    Budget::default().check_enumeration(y)?;
    let start: Vec<u64> = (0..=y).collect();
    let primes = primes_up_to(y + 1);
    let (elements, plan) = greedy_thin(&start, primes.primes(), ThinMode::Min)?;
    Ok(AdmissibleSet { y, elements, plan })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityCheck {
    pub admissible: bool,
    /// Smallest prime all of whose classes meet the set.
    pub witness: Option<u64>,
}

/// Checks that some class mod `p` misses `set` for every prime `p`. Only
/// primes `p <= |set|` can fail.
pub fn verify_admissible(set: &[u64], y: u64) -> Result<AdmissibilityCheck> {
    if let Some(&bad) = set.iter().find(|&&s| s > y) {
        return Err(invalid(format!("element {bad} lies outside [0, {y}]")));
    }
    let mut distinct = set.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for &p in primes_up_to(distinct.len() as u64).iter() {
        let mut hit = vec![false; p as usize];
        for &s in &distinct {
            hit[(s % p) as usize] = true;
        }
        if hit.iter().all(|&h| h) {
            return Ok(AdmissibilityCheck {
                admissible: false,
                witness: Some(p),
            });
        }
    }
    Ok(AdmissibilityCheck {
        admissible: true,
        witness: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapMatch {
    pub offset: u64,
    pub prime: u64,
}

/// A base `x` such that every `n ∈ (x, x+y]` has a prime factor `<= Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapCertificate {
    #[serde(with = "crate::decimal")]
    pub x: BigUint,
    pub y: u64,
    pub z: u64,
    #[serde(rename = "Z")]
    pub cover_limit: u64,
    pub matches: Vec<GapMatch>,
    #[serde(with = "crate::decimal")]
    pub modulus: BigUint,
}

impl GapCertificate {
    /// The congruences `x ≡ X (mod P(z))`, `x ≡ −a_i (mod p_i)` the base
    /// was assembled from.
    pub fn congruences(&self) -> Vec<Congruence> {
        let pz = primorial(self.z);
        let mut out = vec![Congruence::new(pz.clone(), &self.x % &pz)];
        out.extend(
            self.matches
                .iter()
                .map(|m| Congruence::new(m.prime, (m.prime - m.offset % m.prime) % m.prime)),
        );
        out
    }

    /// Re-sieves `(x, x+y]` up to `Z` and re-combines the congruences.
    pub fn verify(&self) -> Result<bool> {
        let survivors = sieve_interval(&self.x, self.y, self.cover_limit)?;
        let system = crt_combine(&self.congruences())?;
        let primes_ok = self.matches.windows(2).all(|w| w[0].prime < w[1].prime)
            && self
                .matches
                .iter()
                .all(|m| m.prime > self.z && m.prime <= self.cover_limit);
        Ok(survivors.is_empty()
            && system.is_sound()
            && system.modulus == self.modulus
            && system.residue == self.x
            && primes_ok)
    }
}

/// Erdős–Rankin covering: matches each survivor `a_i` of `(X, X+y]` at
/// level `z` to the `i`-th prime above `z` and solves `x ≡ X (mod P(z))`,
/// `x ≡ −a_i (mod p_i)`.
pub fn gap_construct(z: u64, y: u64, base: &BigUint) -> Result<GapCertificate> {
    gap_construct_with(z, y, base, &Budget::default())
}

pub fn gap_construct_with(z: u64, y: u64, base: &BigUint, budget: &Budget) -> Result<GapCertificate> {
    let opts = SieveOptions {
        segment: None,
        budget: *budget,
    };
    let survivors = sieve_interval_with(base, y, z, &opts)?;
    let primes = primes_above(z, survivors.count(), budget)?;
    let cover_limit = primes.last().copied().unwrap_or(z);

    let pz = primorial(z);
    let mut congruences = vec![Congruence::new(pz.clone(), base % &pz)];
    let matches: Vec<GapMatch> = survivors
        .offsets
        .iter()
        .zip(&primes)
        .map(|(&offset, &prime)| GapMatch { offset, prime })
        .collect();
    congruences.extend(
        matches
            .iter()
            .map(|m| Congruence::new(m.prime, (m.prime - m.offset % m.prime) % m.prime)),
    );
    let system = crt_combine(&congruences)?;

    let cert = GapCertificate {
        x: system.residue,
        y,
        z,
        cover_limit,
        matches,
        modulus: system.modulus,
    };
    let check = sieve_interval_with(&cert.x, y, cover_limit, &opts)?;
    debug_assert!(check.is_empty(), "covering construction left survivors");
    if !check.is_empty() {
        return Err(invalid("covering construction left survivors"));
    }
    Ok(cert)
}

/// The `count` smallest primes greater than `z`.
fn primes_above(z: u64, count: usize, budget: &Budget) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(count);
    let mut lo = z.saturating_add(1);
    let mut width = (count as u64 * 4).max(1024);
    while out.len() < count {
        let hi = lo.saturating_add(width);
        budget.check_sieve_limit(hi)?;
        for_each_prime(lo, hi, |p| {
            if out.len() < count {
                out.push(p);
            }
        });
        lo = hi;
        width *= 2;
    }
    Ok(out)
}

const JACOBSTHAL_SEGMENT: u64 = 1 << 20;

/// J(m): the least `J` such that every `J` consecutive integers contain one
/// coprime to `m`, i.e. the largest difference of consecutive integers
/// coprime to `m`.
pub fn jacobsthal(m: u64) -> Result<u64> {
    jacobsthal_with(m, &Budget::default())
}

pub fn jacobsthal_with(m: u64, budget: &Budget) -> Result<u64> {
    if m == 0 {
        return Err(invalid("jacobsthal: m must be >= 1"));
    }
    let f = factorize(m)?;
    let primes: Vec<u64> = f.factors().iter().map(|&(p, _)| p).collect();
    let rad = f.radical();
    if rad == 1 {
        return Ok(1);
    }
    budget.check_enumeration(rad)?;
    // Coprime residues are symmetric under n ↦ rad − n, so the gaps in
    // [1, rad/2 + 1] plus the one straddling rad/2 cover a full period.
    // rad/2 + J(m) is enough; J(m) <= 2^ω(m) is a safe overshoot.
    let overshoot = 1u64 << primes.len().min(40);
    let end = (rad / 2 + 1).saturating_add(overshoot).min(rad + 1) + 1; // exclusive
    let segments = (end - 1).div_ceil(JACOBSTHAL_SEGMENT);

    // per segment: (first coprime, last coprime, largest inner gap)
    let parts: Vec<Option<(u64, u64, u64)>> = (0..segments)
        .into_par_iter()
        .map(|s| {
            let lo = 1 + s * JACOBSTHAL_SEGMENT;
            let hi = (lo + JACOBSTHAL_SEGMENT).min(end);
            let mut struck = vec![false; (hi - lo) as usize];
            for &p in &primes {
                let mut n = lo.div_ceil(p) * p;
                while n < hi {
                    struck[(n - lo) as usize] = true;
                    n += p;
                }
            }
            let mut first = None;
            let mut last = 0;
            let mut gap = 0;
            for (i, &hit) in struck.iter().enumerate() {
                if !hit {
                    let n = lo + i as u64;
                    if first.is_none() {
                        first = Some(n);
                    } else {
                        gap = gap.max(n - last);
                    }
                    last = n;
                }
            }
            first.map(|f| (f, last, gap))
        })
        .collect();

    // the gap (−1, 1) around the non-coprime 0
    let mut best = 2u64;
    let mut prev_last: Option<u64> = None;
    for (first, last, gap) in parts.into_iter().flatten() {
        best = best.max(gap);
        if let Some(pl) = prev_last {
            best = best.max(first - pl);
        }
        prev_last = Some(last);
    }
    Ok(best)
}

/// Exhaustive J(m) over a full period; reference for small `m`.
pub fn jacobsthal_exhaustive(m: u64) -> u64 {
    let coprime: Vec<u64> = (1..=m + 1).filter(|&n| crate::primes::gcd(n, m) == 1).collect();
    coprime.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(1)
}

/// Decimal `R%M` rendering of a residue class, as accepted on the command line.
pub fn format_class(residue: &BigUint, modulus: &BigUint) -> String {
    format!("{residue}%{modulus}")
}

/// Parses a decimal integer or an `R%M` class (returning `R mod M`).
pub fn parse_base(text: &str) -> Result<BigUint> {
    let parse = |s: &str| -> Result<BigUint> {
        s.trim()
            .parse::<BigUint>()
            .map_err(|_| invalid(format!("{s:?} is not a nonnegative decimal integer")))
    };
    match text.split_once('%') {
        Some((r, m)) => {
            let m = parse(m)?;
            if m.is_zero() {
                return Err(invalid("modulus in R%M must be positive"));
            }
            Ok(parse(r)? % m)
        }
        None => parse(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    const SAMPLE: [u64; 8] = [1, 7, 11, 13, 17, 19, 23, 29];

    #[test]
    fn thin_examples() {
        let (left, plan) = greedy_thin(&SAMPLE, &[7], ThinMode::Min).unwrap();
        assert_eq!(left, vec![1, 11, 13, 17, 19, 23, 29]);
        assert_eq!(plan.steps[0].residue, 0);
        let (left, plan) = greedy_thin(&SAMPLE, &[7], ThinMode::Max).unwrap();
        assert_eq!(left, vec![7, 11, 13, 17, 19, 23]);
        assert_eq!(plan.steps[0].residue, 1);
        let (left, plan) = greedy_thin(&[], &[2, 3], ThinMode::Min).unwrap();
        assert!(left.is_empty());
        assert!(plan.steps.iter().all(|s| s.residue == 0));
        assert!(greedy_thin(&SAMPLE, &[], ThinMode::Min).is_err());
        assert!(greedy_thin(&SAMPLE, &[5, 3], ThinMode::Min).is_err());
    }

    #[test]
    fn sparse_counting_matches_dense() {
        let set: Vec<u64> = vec![3, 1000, 1_000_003, 5_000_000_029];
        for p in [1_000_003u64, 1_000_000_007] {
            for mode in [ThinMode::Min, ThinMode::Max] {
                let counts = |r: u64| set.iter().filter(|&&s| s % p == r).count();
                let expect = match mode {
                    ThinMode::Min => (0..).find(|&r| counts(r) == 0).unwrap(),
                    ThinMode::Max => {
                        let mut rs: Vec<u64> = set.iter().map(|s| s % p).collect();
                        rs.sort_unstable();
                        *rs.iter()
                            .max_by(|a, b| counts(**a).cmp(&counts(**b)).then(b.cmp(a)))
                            .unwrap()
                    }
                };
                assert_eq!(choose_class(&set, p, mode), expect, "p={p} {mode:?}");
            }
        }
    }

    #[test]
    fn crt_examples() {
        let sys = crt_combine(&[
            Congruence::new(30u32, 0u32),
            Congruence::new(7u32, 6u32),
            Congruence::new(11u32, 4u32),
        ])
        .unwrap();
        assert_eq!((sys.modulus.clone(), sys.residue.clone()), (big(2310), big(510)));
        assert!(sys.is_sound());
        let single = crt_combine(&[Congruence::new(9u32, 31u32)]).unwrap();
        assert_eq!((single.modulus, single.residue), (big(9), big(4)));
        let shared = crt_combine(&[Congruence::new(4u32, 1u32), Congruence::new(6u32, 3u32)]).unwrap();
        assert_eq!((shared.modulus, shared.residue), (big(12), big(9)));
        match crt_combine(&[
            Congruence::new(5u32, 1u32),
            Congruence::new(4u32, 1u32),
            Congruence::new(6u32, 2u32),
        ]) {
            Err(Error::InconsistentCongruences { first, second, .. }) => assert_eq!((first, second), (1, 2)),
            other => panic!("expected inconsistency, got {other:?}"),
        }
        assert!(crt_combine(&[Congruence::new(0u32, 1u32)]).is_err());
        let empty = crt_combine(&[]).unwrap();
        assert_eq!((empty.modulus, empty.residue), (big(1), big(0)));
    }

    #[test]
    fn admissible_examples() {
        assert_eq!(build_admissible(10).unwrap().elements, vec![2, 4, 8, 10]);
        let one = build_admissible(1).unwrap();
        assert!(!one.elements.is_empty());
        assert!(verify_admissible(&one.elements, 1).unwrap().admissible);
        assert!(verify_admissible(&[2, 4, 8, 10], 10).unwrap().admissible);
        assert_eq!(
            verify_admissible(&[0, 1, 2], 3).unwrap(),
            AdmissibilityCheck {
                admissible: false,
                witness: Some(2)
            }
        );
        assert!(verify_admissible(&[], 100).unwrap().admissible);
        assert!(verify_admissible(&[5], 3).is_err());
    }

    #[test]
    fn admissible_sets_verify() {
        for y in [2u64, 3, 17, 100, 1000] {
            let a = build_admissible(y).unwrap();
            assert!(verify_admissible(&a.elements, y).unwrap().admissible, "y={y}");
            for step in &a.plan.steps {
                let floor = step.before - step.before.div_ceil(step.prime as usize);
                assert!(step.after >= floor);
            }
        }
    }

    #[test]
    fn gap_examples() {
        let c = gap_construct(5, 10, &big(0)).unwrap();
        assert_eq!(
            c.matches,
            vec![GapMatch { offset: 1, prime: 7 }, GapMatch { offset: 7, prime: 11 }]
        );
        assert_eq!(
            (c.x.clone(), c.modulus.clone(), c.cover_limit),
            (big(510), big(2310), 11)
        );
        assert!(c.verify().unwrap());

        let c = gap_construct(3, 4, &big(0)).unwrap();
        assert_eq!(c.matches, vec![GapMatch { offset: 1, prime: 5 }]);
        assert_eq!((c.x.clone(), c.modulus.clone()), (big(24), big(30)));
        assert!(c.verify().unwrap());

        let c = gap_construct(2, 1, &big(0)).unwrap();
        assert_eq!(c.matches, vec![GapMatch { offset: 1, prime: 3 }]);
        assert_eq!((c.x.clone(), c.modulus.clone()), (big(2), big(6)));
        assert!(c.verify().unwrap());
    }

    #[test]
    fn gap_certificate_round_trips() {
        let c = gap_construct(13, 60, &big(12345)).unwrap();
        assert!(c.verify().unwrap());
        let sys = crt_combine(&c.congruences()).unwrap();
        assert_eq!(sys.residue, c.x);
        for cong in c.congruences() {
            assert_eq!(&c.x % &cong.modulus, cong.residue);
        }
        let mut broken = c.clone();
        broken.x += 1u32;
        assert!(!broken.verify().unwrap());
    }

    #[test]
    fn jacobsthal_examples() {
        assert_eq!(jacobsthal(1).unwrap(), 1);
        assert_eq!(jacobsthal(2).unwrap(), 2);
        assert_eq!(jacobsthal(6).unwrap(), 4);
        assert_eq!(jacobsthal(30).unwrap(), 6);
        assert_eq!(jacobsthal(210).unwrap(), 10);
        assert_eq!(jacobsthal(12).unwrap(), jacobsthal(6).unwrap());
        assert!(jacobsthal(0).is_err());
        let tight = Budget {
            max_enumeration: 1000,
            ..Budget::default()
        };
        assert!(matches!(
            jacobsthal_with(2310, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn jacobsthal_primorials() {
        // J(P(p)) for p = 2, 3, …, 23
        let known = [2u64, 4, 6, 10, 14, 22, 26, 34, 40];
        for (&p, &j) in primes_up_to(23).iter().zip(&known) {
            let value = jacobsthal(primorial(p).to_u64().unwrap()).unwrap();
            assert_eq!(value, j, "P({p})");
            assert!(value <= p * p, "J(P({p})) = {value} > {p}^2");
        }
    }

    #[test]
    fn parse_bases() {
        assert_eq!(parse_base("510%2310").unwrap(), big(510));
        assert_eq!(parse_base("2830%2310").unwrap(), big(520));
        assert_eq!(
            parse_base("123456789012345678901234567890").unwrap().to_string(),
            "123456789012345678901234567890"
        );
        assert!(parse_base("-3").is_err());
        assert!(parse_base("1%0").is_err());
        assert_eq!(format_class(&big(510), &big(2310)), "510%2310");
    }

    proptest! {
        #[test]
        fn jacobsthal_matches_exhaustive(m in 1u64..5000) {
            prop_assert_eq!(jacobsthal(m).unwrap(), jacobsthal_exhaustive(m));
        }

        #[test]
        fn jacobsthal_depends_on_radical(m in 1u64..3000) {
            let rad = factorize(m).unwrap().radical();
            prop_assert_eq!(jacobsthal(m).unwrap(), jacobsthal(rad).unwrap());
        }

        #[test]
        fn crt_solutions_are_sound(
            raw in proptest::collection::vec((1u64..500, 0u64..10_000), 1..6)
        ) {
            // derive a consistent system from a hidden solution
            let hidden = raw[0].1;
            let congs: Vec<Congruence> = raw.iter().map(|&(m, _)| Congruence::new(m, hidden % m)).collect();
            let sys = crt_combine(&congs).unwrap();
            prop_assert!(sys.is_sound());
            let lcm = raw.iter().fold(BigUint::one(), |acc, &(m, _)| acc.lcm(&BigUint::from(m)));
            prop_assert_eq!(&sys.modulus, &lcm);
            prop_assert_eq!(sys.residue, BigUint::from(hidden) % lcm);
        }

        #[test]
        fn min_thinning_keeps_enough(
            set in proptest::collection::btree_set(0u64..2000, 0..300),
            pick in proptest::collection::btree_set(0usize..40, 1..8),
        ) {
            let table = primes_up_to(200);
            let primes: Vec<u64> = pick.iter().map(|&i| table.primes()[i]).collect();
            let set: Vec<u64> = set.into_iter().collect();
            let (_, plan) = greedy_thin(&set, &primes, ThinMode::Min).unwrap();
            for step in plan.steps {
                prop_assert!(step.after >= step.before - step.before.div_ceil(step.prime as usize));
            }
        }

        #[test]
        fn certificates_verify(z in 2u64..40, y in 1u64..120, base in 0u64..1_000_000) {
            let c = gap_construct(z, y, &big(base)).unwrap();
            prop_assert!(c.verify().unwrap());
        }
    }
}
