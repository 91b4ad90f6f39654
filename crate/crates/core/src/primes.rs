//! Prime generation, Liouville's function, Mertens products, primorials and
//! 64-bit factorization.
//!
//! Everything else in the crate sits on top of [`PrimeTable`] and
//! [`for_each_prime`]. The flat table uses an odd-only bitmap; the range
//! iterator is a segmented sieve so that scans up to `1e9` stay inside a
//! cache-sized working set.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{invalid, Result};

/// Ascending list of every prime `<= limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u64> {
        self.primes.iter()
    }

    /// Primes `<= bound`, a prefix of the table.
    pub fn up_to(&self, bound: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..end]
    }

    /// Number of primes `<= bound` (bound must not exceed the table limit).
    pub fn count_up_to(&self, bound: u64) -> usize {
        self.up_to(bound).len()
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.primes
    }
}

impl<'a> IntoIterator for &'a PrimeTable {
    type Item = &'a u64;
    type IntoIter = std::slice::Iter<'a, u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.primes.iter()
    }
}

/// Sieve of Eratosthenes over odd numbers, one bit per odd `n`.
pub fn primes_up_to(limit: u64) -> PrimeTable {
    if limit < 2 {
        return PrimeTable {
            limit,
            primes: Vec::new(),
        };
    }
    // bit i stands for 2i + 1
    let odd_count = (limit - 1) / 2 + 1;
    let words = odd_count.div_ceil(64) as usize;
    let mut composite = vec![0u64; words];
    composite[0] |= 1; // 1 is not prime

    let mut i = 1u64;
    loop {
        let p = 2 * i + 1;
        if p.saturating_mul(p) > limit {
            break;
        }
        if composite[(i / 64) as usize] >> (i % 64) & 1 == 0 {
            let mut j = (p * p) / 2;
            while j < odd_count {
                composite[(j / 64) as usize] |= 1 << (j % 64);
                j += p;
            }
        }
        i += 1;
    }

    let estimate = (limit as f64 / (limit as f64).ln() * 1.2) as usize + 8;
    let mut primes = Vec::with_capacity(estimate);
    primes.push(2);
    for (w, &word) in composite.iter().enumerate() {
        let mut free = !word;
        while free != 0 {
            let bit = free.trailing_zeros() as u64;
            let idx = w as u64 * 64 + bit;
            if idx >= odd_count {
                break;
            }
            primes.push(2 * idx + 1);
            free &= free - 1;
        }
    }
    PrimeTable { limit, primes }
}

const SEGMENT_ODDS: u64 = 1 << 18;

/// Calls `visit` for every prime in `[lo, hi)` in ascending order.
///
/// Segmented over odd numbers; only primes up to `sqrt(hi)` are held in
/// memory.
pub fn for_each_prime(lo: u64, hi: u64, mut visit: impl FnMut(u64)) {
    if hi <= lo || hi <= 2 {
        return;
    }
    if lo <= 2 {
        visit(2);
    }
    let base = primes_up_to(isqrt(hi - 1));
    // first odd >= max(lo, 3)
    let mut start = lo.max(3) | 1;
    let mut flags = vec![false; SEGMENT_ODDS as usize];
    while start < hi {
        let count = ((hi - start).div_ceil(2)).min(SEGMENT_ODDS);
        let end = start + 2 * count; // exclusive, odd
        let seg = &mut flags[..count as usize];
        seg.fill(false);
        for &p in base.iter().skip(1) {
            if p * p >= end {
                break;
            }
            let mut m = (p * p).max(start.div_ceil(p) * p);
            if m % 2 == 0 {
                m += p;
            }
            while m < end {
                seg[((m - start) / 2) as usize] = true;
                m += 2 * p;
            }
        }
        for (k, &hit) in seg.iter().enumerate() {
            let n = start + 2 * k as u64;
            if !hit && n > 1 && n < hi {
                visit(n);
            }
        }
        start = end;
    }
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Prime factorization with primes ascending and exponents `>= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Ω(n): prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// ω(n): number of distinct prime factors.
    pub fn distinct(&self) -> usize {
        self.factors.len()
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> u64 {
        self.factors.iter().map(|&(p, _)| p).product()
    }
}

const TRIAL_LIMIT: u64 = 1 << 12;

/// Full factorization of a 64-bit integer.
///
/// Trial division by small primes, then a deterministic Miller–Rabin test on
/// the cofactor; composite cofactors are split with Pollard–Brent rho.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(invalid("factorize: n must be >= 1"));
    }
    let mut rest = n;
    let mut found: Vec<u64> = Vec::new();
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        while rest.is_multiple_of(p) {
            found.push(p);
            rest /= p;
        }
    }
    if rest > 1 {
        split_into(rest, &mut found);
    }
    found.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in found {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { n, factors })
}

fn small_primes() -> &'static [u64] {
    static TABLE: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| primes_up_to(TRIAL_LIMIT).into_vec())
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut ys = 2u64;
        let mut r = 1u64;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// λ(n) = (−1)^Ω(n).
pub fn liouville(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(invalid("liouville: n must be >= 1"));
    }
    Ok(if factorize(n)?.big_omega() % 2 == 0 { 1 } else { -1 })
}

/// G(z) = ∏_{p <= z} (1 − 1/p).
///
/// Summed as `log1p(−1/p)` with Neumaier compensation, then exponentiated.
pub fn mertens_product(z: u64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for_each_prime(2, z.saturating_add(1), |p| {
        let term = (-1.0 / p as f64).ln_1p();
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    });
    sum.exp() * (1.0 + comp)
}

/// P(z): the product of all primes `<= z`.
pub fn primorial(z: u64) -> BigUint {
    let mut acc = BigUint::one();
    // multiply in u64 chunks to keep the big-number work small
    let mut chunk = 1u64;
    for_each_prime(2, z.saturating_add(1), |p| match chunk.checked_mul(p) {
        Some(c) => chunk = c,
        None => {
            acc *= chunk;
            chunk = p;
        }
    });
    acc * chunk
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division_primes(limit: u64) -> Vec<u64> {
        (2..=limit)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect()
    }

    #[test]
    fn small_tables() {
        assert!(primes_up_to(0).is_empty());
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(2).primes(), &[2]);
        assert_eq!(primes_up_to(10).primes(), &[2, 3, 5, 7]);
        assert_eq!(primes_up_to(100).len(), 25);
        assert_eq!(primes_up_to(100).primes(), &trial_division_primes(100)[..]);
    }

    #[test]
    fn segmented_matches_flat() {
        let flat = primes_up_to(200_000).into_vec();
        let mut seg = Vec::new();
        for_each_prime(0, 200_001, |p| seg.push(p));
        assert_eq!(flat, seg);

        let mut window = Vec::new();
        for_each_prime(1000, 1100, |p| window.push(p));
        let expect: Vec<u64> = flat.iter().copied().filter(|&p| (1000..1100).contains(&p)).collect();
        assert_eq!(window, expect);
    }

    #[test]
    fn liouville_values() {
        assert_eq!(liouville(1).unwrap(), 1);
        assert_eq!(liouville(12).unwrap(), -1);
        assert_eq!(liouville(36).unwrap(), 1);
        assert!(liouville(0).is_err());
    }

    #[test]
    fn mertens_values() {
        assert_eq!(mertens_product(0), 1.0);
        assert_eq!(mertens_product(1), 1.0);
        assert!((mertens_product(2) - 0.5).abs() < 1e-16);
        assert!((mertens_product(10) - 8.0 / 35.0).abs() < 1e-15);
    }

    #[test]
    fn mertens_telescopes() {
        for &p in primes_up_to(20_000).iter() {
            let lhs = mertens_product(p);
            let rhs = mertens_product(p - 1) * (1.0 - 1.0 / p as f64);
            assert!(((lhs - rhs) / lhs).abs() <= 1e-15, "p = {p}");
        }
    }

    #[test]
    fn primorial_values() {
        assert_eq!(primorial(1), BigUint::from(1u32));
        assert_eq!(primorial(10), BigUint::from(210u32));
        assert_eq!(primorial(30), BigUint::from(6_469_693_230u64));
        let direct: BigUint = trial_division_primes(200).iter().map(|&p| BigUint::from(p)).product();
        assert_eq!(primorial(200), direct);
    }

    #[test]
    fn primorial_divisibility() {
        for z in 0..=100u64 {
            let pz = primorial(z);
            for p in trial_division_primes(2 * z) {
                let divides = (&pz % p) == BigUint::from(0u32);
                assert_eq!(divides, p <= z, "z = {z}, p = {p}");
            }
        }
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(210).unwrap().factors(), &[(2, 1), (3, 1), (5, 1), (7, 1)]);
        let f = factorize(6_469_693_230).unwrap();
        let ps: Vec<u64> = f.factors().iter().map(|&(p, _)| p).collect();
        assert_eq!(ps, trial_division_primes(29));
        assert!(f.factors().iter().all(|&(_, e)| e == 1));
        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorize_hard_cofactors() {
        // product of two primes near 2^32
        let (p, q) = (4_294_967_291u64, 4_294_967_279u64);
        assert_eq!(factorize(p * q).unwrap().factors(), &[(q, 1), (p, 1)]);
        assert_eq!(factorize(u64::MAX).unwrap().factors().len(), 7);
        let f = factorize(18_446_744_073_709_551_557).unwrap(); // largest 64-bit prime
        assert_eq!(f.factors(), &[(18_446_744_073_709_551_557, 1)]);
    }

    proptest! {
        #[test]
        fn table_agrees_with_trial_division(limit in 0u64..3000) {
            prop_assert_eq!(primes_up_to(limit).into_vec(), trial_division_primes(limit));
        }

        #[test]
        fn liouville_completely_multiplicative(m in 1u64..1_000_000, n in 1u64..1_000_000) {
            prop_assert_eq!(
                liouville(m * n).unwrap(),
                liouville(m).unwrap() * liouville(n).unwrap()
            );
        }

        #[test]
        fn factorization_multiplies_back(n in 1u64..u64::MAX) {
            let f = factorize(n).unwrap();
            let mut prod = 1u128;
            for &(p, e) in f.factors() {
                prop_assert!(e >= 1);
                prop_assert!(is_prime_u64(p));
                prod *= (p as u128).pow(e);
            }
            prop_assert_eq!(prod, n as u128);
            prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        }
    }
}
