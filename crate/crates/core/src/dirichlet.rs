//! Real primitive characters, `L(s, χ_d)` at real `s`, and prime counts in
//! arithmetic progressions.
//!
//! A real primitive character of conductor `q` is the Kronecker symbol
//! `(d | ·)` of a fundamental discriminant `d` with `|d| = q`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::interval::{pi_k_by_residue, Progression};
use crate::primes::{for_each_prime, gcd};

/// Kronecker symbol `(d | n)`.
pub fn kronecker(d: i64, n: i64) -> i8 {
    const TAB: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    let (mut a, mut b) = (d as i128, n as i128);
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let v = b.trailing_zeros();
    b >>= v;
    let mut k: i8 = if v % 2 == 0 { 1 } else { TAB[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        // b is odd and positive here
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TAB[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

fn squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// `d ≠ 1` with `d ≡ 1 (mod 4)` squarefree, or `d = 4m` with `m ≡ 2, 3
/// (mod 4)` squarefree.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 || d == i64::MIN {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// The real primitive character `(d | ·)` modulo `q = |d|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadChar {
    d: i64,
}

impl QuadChar {
    pub fn new(d: i64) -> Result<Self> {
        if !is_fundamental(d) {
            return Err(Error::NotFundamental(d));
        }
        Ok(QuadChar { d })
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.d.unsigned_abs()
    }

    pub fn eval(&self, n: i64) -> i8 {
        kronecker(self.d, n)
    }

    /// χ(0), χ(1), …, χ(q − 1).
    pub fn table(&self) -> Vec<i8> {
        (0..self.modulus()).map(|a| kronecker(self.d, a as i64)).collect()
    }
}

// B_2, B_4, …, B_20
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const HURWITZ_SHIFT: usize = 16;

/// `(e^t − 1)/t`, continuous at 0.
fn expm1_ratio(t: f64) -> f64 {
    if t.abs() < 1e-300 {
        1.0
    } else {
        t.exp_m1() / t
    }
}

/// ζ(s, α) − 1/(s − 1), finite at `s = 1`, for `s > 0`, `0 < α <= 1`.
fn hurwitz_regularized(s: f64, alpha: f64) -> f64 {
    let mut sum = 0.0;
    for k in 0..HURWITZ_SHIFT {
        sum += (k as f64 + alpha).powf(-s);
    }
    let big = HURWITZ_SHIFT as f64 + alpha;
    let log_big = big.ln();
    // ((N+α)^{1−s} − 1)/(s − 1)
    sum += -log_big * expm1_ratio((1.0 - s) * log_big);
    let pow = big.powf(-s);
    sum += pow / 2.0;
    // s(s+1)…(s+2j−2)/(2j)! · (N+α)^{−s−2j+1}
    let mut coeff = s / big * pow; // j = 1: s · (N+α)^{−s−1}
    let mut fact = 2.0;
    for (j, &b) in BERNOULLI.iter().enumerate() {
        let j = j as f64 + 1.0;
        sum += b / fact * coeff;
        // advance to j + 1
        coeff *= (s + 2.0 * j - 1.0) * (s + 2.0 * j) / (big * big);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    }
    sum
}

/// `L(s, χ_d)` for real `s > 0`, via `q^{−s} Σ_a χ(a) ζ(s, a/q)`.
pub fn l_real(d: i64, s: f64) -> Result<f64> {
    let chi = QuadChar::new(d)?;
    check_s(s)?;
    Ok(LSeries::new(chi).eval(s))
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(invalid(format!("s must be a positive real, got {s}")));
    }
    Ok(())
}

/// A character with its values cached for repeated evaluation.
#[derive(Debug, Clone)]
pub struct LSeries {
    chi: QuadChar,
    support: Vec<(f64, f64)>, // (χ(a), a/q) for χ(a) ≠ 0
}

impl LSeries {
    pub fn new(chi: QuadChar) -> Self {
        let q = chi.modulus() as f64;
        let support = chi
            .table()
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(a, c)| (c as f64, a as f64 / q))
            .collect();
        LSeries { chi, support }
    }

    pub fn character(&self) -> QuadChar {
        self.chi
    }

    pub fn eval(&self, s: f64) -> f64 {
        let q = self.chi.modulus() as f64;
        let sum: f64 = self
            .support
            .iter()
            .map(|&(c, alpha)| c * hurwitz_regularized(s, alpha))
            .sum();
        sum * q.powf(-s)
    }
}

/// `L(s, χ_d)` by direct summation over `n <= Kq` with an Euler–Maclaurin
/// correction for the tail, applied to whole periods `g(m) = Σ_a χ(a)(mq + a)^{−s}`.
///
/// Independent of the Hurwitz route in [`l_real`]; slower, useful as a check.
pub fn l_real_direct(d: i64, s: f64) -> Result<f64> {
    let chi = QuadChar::new(d)?;
    check_s(s)?;
    let q = chi.modulus();
    let table = chi.table();
    let periods: u64 = 40;
    let mut head = 0.0;
    for n in 1..periods * q {
        let c = table[(n % q) as usize];
        if c != 0 {
            head += c as f64 * (n as f64).powf(-s);
        }
    }
    let qf = q as f64;
    let k = periods as f64;
    // ∫_K^∞ g(m) dm = Σ_a χ(a) (Kq + a)^{1−s} / ((s − 1) q)
    let mut integral = 0.0;
    let mut g_at_k = 0.0;
    for a in 1..q {
        let c = table[a as usize] as f64;
        if c == 0.0 {
            continue;
        }
        let n = k * qf + a as f64;
        let ln = n.ln();
        // (n^{1−s} − 1)/(s − 1); the constant cancels because Σ χ(a) = 0
        integral += c * (-ln * expm1_ratio((1.0 - s) * ln)) / qf;
        g_at_k += c * n.powf(-s);
    }
    // g^{(r)}(m) = Σ_a χ(a) (−s)(−s−1)…(−s−r+1) q^r (mq + a)^{−s−r}
    let derivative = |r: u32| -> f64 {
        let mut rising = 1.0;
        for i in 0..r {
            rising *= -s - i as f64;
        }
        let mut acc = 0.0;
        for a in 1..q {
            let c = table[a as usize] as f64;
            if c != 0.0 {
                acc += c * (k * qf + a as f64).powf(-s - r as f64);
            }
        }
        rising * qf.powi(r as i32) * acc
    };
    let mut tail = integral + g_at_k / 2.0;
    let mut fact = 2.0;
    for (j, &b) in BERNOULLI.iter().take(6).enumerate() {
        let j = j as u32 + 1;
        tail -= b / fact * derivative(2 * j - 1);
        fact *= (2 * j + 1) as f64 * (2 * j + 2) as f64;
    }
    Ok(head + tail)
}

/// Sign changes of `s ↦ L(s, χ_d)` on a grid, refined by bisection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroScanReport {
    pub d: i64,
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    /// `(β, half-width of the bracketing interval)`, ascending.
    pub zeros: Vec<(f64, f64)>,
    pub evaluations: u64,
}

pub const ZERO_ACCURACY: f64 = 1e-9;

/// Scans `[lo, hi]` (`0 < lo < hi < 1`) at spacing `step`. An empty result
/// means no sign change was seen, not that no zero exists.
pub fn scan_real_zeros(d: i64, lo: f64, hi: f64, step: f64) -> Result<ZeroScanReport> {
    let chi = QuadChar::new(d)?;
    if !(0.0 < lo && lo < hi && hi < 1.0) {
        return Err(invalid(format!(
            "scan interval must satisfy 0 < lo < hi < 1, got ({lo}, {hi})"
        )));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(invalid(format!("scan step must be positive, got {step}")));
    }
    let series = LSeries::new(chi);
    let mut evaluations = 0u64;
    let mut eval = |s: f64| {
        evaluations += 1;
        series.eval(s)
    };

    let steps = ((hi - lo) / step).floor() as u64;
    let mut grid: Vec<f64> = (0..=steps).map(|i| lo + i as f64 * step).filter(|&s| s < hi).collect();
    grid.push(hi);

    let mut zeros = Vec::new();
    let mut prev = (grid[0], eval(grid[0]));
    if prev.1 == 0.0 {
        zeros.push((prev.0, 0.0));
    }
    for &s in &grid[1..] {
        let value = eval(s);
        if value == 0.0 {
            zeros.push((s, 0.0));
        } else if prev.1 != 0.0 && (prev.1 < 0.0) != (value < 0.0) {
            let (mut a, mut fa, mut b) = (prev.0, prev.1, s);
            while b - a > 2.0 * ZERO_ACCURACY {
                let mid = 0.5 * (a + b);
                let fm = eval(mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if (fm < 0.0) == (fa < 0.0) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            zeros.push((0.5 * (a + b), 0.5 * (b - a)));
        }
        prev = (s, value);
    }
    Ok(ZeroScanReport {
        d,
        lo,
        hi,
        step,
        zeros,
        evaluations,
    })
}

/// π(x; q, a) and ψ(x; q, a).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApCounts {
    pub x: u64,
    pub q: u64,
    pub a: u64,
    pub pi: u64,
    pub psi: f64,
}

pub fn prime_counts_ap(x: u64, q: u64, a: u64) -> Result<ApCounts> {
    let ap = Progression::new(q, a)?;
    crate::Budget::default().check_enumeration(x)?;
    let mut pi = 0u64;
    let mut psi = 0.0f64;
    for_each_prime(2, x.saturating_add(1), |p| {
        if ap.contains(p) {
            pi += 1;
        }
        let ln = (p as f64).ln();
        let mut pk = p;
        loop {
            if ap.contains(pk) {
                psi += ln;
            }
            match pk.checked_mul(p) {
                Some(next) if next <= x => pk = next,
                _ => break,
            }
        }
    });
    Ok(ApCounts { x, q, a: ap.a, pi, psi })
}

/// Euler's φ.
pub fn euler_phi(q: u64) -> u64 {
    let mut n = q;
    let mut phi = q;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasRow {
    pub a: u64,
    pub chi: i8,
    pub count: u64,
    /// `count · φ(q) / π_{k,q}(x, z)`
    pub normalized: f64,
}

/// Per-residue almost-prime counts against a quadratic character.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasTable {
    pub x: u64,
    pub z: u64,
    pub k: u32,
    pub d: i64,
    /// π_{k,q}(x, z)
    pub total: u64,
    /// Set when `q > z`, where rough numbers need not be coprime to `q`.
    pub q_exceeds_z: bool,
    pub rows: Vec<BiasRow>,
}

impl BiasTable {
    /// `1 + (−1)^k χ(a)`, the limiting value of `normalized` in the
    /// presence of an exceptional zero.
    pub fn predicted(&self, row: &BiasRow) -> f64 {
        let sign = if self.k.is_multiple_of(2) { 1.0 } else { -1.0 };
        1.0 + sign * row.chi as f64
    }
}

pub fn bias_report(x: u64, z: u64, k: u32, d: i64) -> Result<BiasTable> {
    let chi = QuadChar::new(d)?;
    let q = chi.modulus();
    let counts = pi_k_by_residue(x, z, k, q)?;
    let phi = euler_phi(q) as f64;
    let coprime: Vec<u64> = (1..q).filter(|&a| gcd(a, q) == 1).collect();
    let total: u64 = coprime.iter().map(|&a| counts[a as usize]).sum();
    let rows = coprime
        .into_iter()
        .map(|a| {
            let count = counts[a as usize];
            BiasRow {
                a,
                chi: chi.eval(a as i64),
                count,
                normalized: if total == 0 {
                    0.0
                } else {
                    count as f64 * phi / total as f64
                },
            }
        })
        .collect();
    Ok(BiasTable {
        x,
        z,
        k,
        d,
        total,
        q_exceeds_z: q > z,
        rows,
    })
}
