//! Closed-form sieve bounds, the F/f envelope check against exact interval
//! counts, and maximal prime gaps.
//!
//! Every `o(1)`/`O(1)` term is taken as zero unless the caller passes a
//! constant. Quantities depending on an exceptional zero `β` are evaluated
//! for caller-supplied hypothetical `(q, β)`; nothing here asserts such a
//! zero exists.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::interval::{rough_counts, sieve_interval};
use crate::primes::{for_each_prime, mertens_product};
use crate::sieve_functions::{default_grid, EULER_GAMMA};

pub const CONDITIONAL_BANNER: &str = "conditional on the supplied (q, beta); no such zero is known to exist";

/// Hypothetical exceptional-zero data and the free constants of the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeuristicParams {
    pub q: f64,
    pub beta: f64,
    pub epsilon: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    /// δ in `1 − β <= δ²/log q`.
    pub delta: Option<f64>,
    /// κ in `1 − β <= (log q)^{−κ}`.
    pub kappa: Option<f64>,
    /// τ in `1 − β <= exp(−(log q)^{1/τ})`.
    pub tau: Option<f64>,
    /// The unspecified constant `C_κ(u)`; 1 unless overridden.
    pub c_kappa: f64,
    /// The unspecified constant `c_τ`; 1 unless overridden.
    pub c_tau: f64,
}

impl HeuristicParams {
    pub fn new(q: f64, beta: f64) -> Result<Self> {
        if !(0.0 < beta && beta < 1.0) {
            return Err(invalid(format!("beta must lie in (0, 1), got {beta}")));
        }
        if !(q >= 1.0) {
            return Err(invalid(format!("q must be >= 1, got {q}")));
        }
        Ok(HeuristicParams {
            q,
            beta,
            epsilon: None,
            a: None,
            b: None,
            delta: None,
            kappa: None,
            tau: None,
            c_kappa: 1.0,
            c_tau: 1.0,
        })
    }

    /// Δ_β(x) = (1 − β) log x.
    pub fn delta_beta(&self, log_x: f64) -> f64 {
        (1.0 - self.beta) * log_x
    }
}

/// `max(0, log t)`.
pub fn log_plus(t: f64) -> f64 {
    t.ln().max(0.0)
}

/// λ(z, x) = 1/log x + z/x, the error scale in the progression estimates.
/// Unrelated to Liouville's λ.
pub fn lambda_err(z: f64, x: f64) -> f64 {
    1.0 / x.ln() + z / x
}

/// `4y/(log y)² · (log(y/z²) − c)`, floored at 0.
pub fn iwaniec_lower(y: f64, z: f64, c_const: f64) -> Result<f64> {
    if !(z >= 2.0 && y > z) {
        return Err(invalid(format!("iwaniec_lower needs y > z >= 2, got y={y}, z={z}")));
    }
    let ly = y.ln();
    Ok((4.0 * y / (ly * ly) * ((y / (z * z)).ln() - c_const)).max(0.0))
}

/// `4y/(log y)² · log⁺(qy/z²) + (1 − β) y`.
pub fn prop2_upper(q: f64, y: f64, z: f64, beta: f64) -> Result<f64> {
    if !(0.0 < beta && beta < 1.0) {
        return Err(invalid(format!("beta must lie in (0, 1), got {beta}")));
    }
    if !(q >= 2.0 && y >= 2.0 && z >= 2.0) {
        return Err(invalid("prop2_upper needs q, y, z >= 2"));
    }
    let ly = y.ln();
    Ok(4.0 * y / (ly * ly) * log_plus(q * y / (z * z)) + (1.0 - beta) * y)
}

/// C(u) = √(2(1 − log⁺(u − 1))).
pub fn c_of_u(u: f64) -> f64 {
    let inner = 1.0 - if u > 1.0 { log_plus(u - 1.0) } else { 0.0 };
    (2.0 * inner).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Prop3Case {
    /// `1 − β <= δ²/log q`
    Delta = 1,
    /// `1 − β <= (log q)^{−κ}`
    Kappa = 2,
    /// `1 − β <= exp(−(log q)^{1/τ})`
    Tau = 3,
    /// `1 − β <= q^{−ε}`
    Epsilon = 4,
}

impl TryFrom<u8> for Prop3Case {
    type Error = crate::Error;

    fn try_from(v: u8) -> Result<Self> {
        Ok(match v {
            1 => Prop3Case::Delta,
            2 => Prop3Case::Kappa,
            3 => Prop3Case::Tau,
            4 => Prop3Case::Epsilon,
            _ => return Err(invalid(format!("prop3 case must be 1..=4, got {v}"))),
        })
    }
}

/// Lower bounds for `S(X, y, z)` with `z = y^u`, `1 <= u <= 3`, in the four
/// regimes of `1 − β`.
pub fn prop3_bound(case: Prop3Case, u: f64, y: f64, params: &HeuristicParams) -> Result<f64> {
    if !(1.0..=3.0).contains(&u) {
        return Err(invalid(format!("prop3 needs 1 <= u <= 3, got {u}")));
    }
    if !(y > std::f64::consts::E) {
        return Err(invalid(format!("prop3 needs y > e, got {y}")));
    }
    let missing = |name: &str| invalid(format!("prop3 case {} needs {name}", case as u8));
    let ly = y.ln();
    let main = 2.0 * y / ly;
    Ok(match case {
        Prop3Case::Delta => {
            let delta = params.delta.ok_or_else(|| missing("delta"))?;
            main - 2.0 * delta * c_of_u(u) * y / ly
        }
        Prop3Case::Kappa => {
            let kappa = params.kappa.ok_or_else(|| missing("kappa"))?;
            main - params.c_kappa * ly.powf(2.0 / (kappa + 1.0)) * y / (ly * ly)
        }
        Prop3Case::Tau => {
            let tau = params.tau.ok_or_else(|| missing("tau"))?;
            main - params.c_tau * ly.ln().powf(tau) * y / (ly * ly)
        }
        Prop3Case::Epsilon => {
            let eps = params.epsilon.ok_or_else(|| missing("epsilon"))?;
            main - (2.0 / eps) * y * ly.ln() / (ly * ly)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CramerPrediction {
    pub log_q: f64,
    pub one_minus_beta: f64,
    /// log y = 2√(log q / (1 − β))
    pub log_y: f64,
    /// e^{−γ} log y / (4 log q)
    pub w_lower: f64,
    /// 2e^{−γ} log y / (4 log q + (1 − β)(log y)²), before simplification
    pub w_unsimplified: f64,
}

/// Optimized gap scale and the lower bound for `w = y/(log x)²`.
pub fn cramer_predict(log_q: f64, one_minus_beta: f64) -> Result<CramerPrediction> {
    if !(log_q >= 3f64.ln()) {
        return Err(invalid(format!("need q >= 3, got log q = {log_q}")));
    }
    if !(0.0 < one_minus_beta && one_minus_beta < 1.0) {
        return Err(invalid(format!("1 - beta must lie in (0, 1), got {one_minus_beta}")));
    }
    let log_y = 2.0 * (log_q / one_minus_beta).sqrt();
    let e_gamma = (-EULER_GAMMA).exp();
    Ok(CramerPrediction {
        log_q,
        one_minus_beta,
        log_y,
        w_lower: e_gamma * log_y / (4.0 * log_q),
        w_unsimplified: 2.0 * e_gamma * log_y / (4.0 * log_q + one_minus_beta * log_y * log_y),
    })
}

/// `A^{−B} · log x · (log log x)^{B−1}`.
pub fn gap_scale(log_x: f64, a: f64, b: f64) -> Result<f64> {
    if !(log_x > std::f64::consts::E) {
        return Err(invalid(format!("gap_scale needs log x > e, got {log_x}")));
    }
    if !(a >= 1.0 && b >= 1.0) {
        return Err(invalid("gap_scale needs A >= 1 and B >= 1"));
    }
    Ok(a.powf(-b) * log_x * log_x.ln().powf(b - 1.0))
}

/// `(1 + ε)(1 − β) y log y`, the analytic choice of the covering limit Z.
pub fn analytic_cover_limit(y: f64, beta: f64, epsilon: f64) -> f64 {
    (1.0 + epsilon) * (1.0 - beta) * y * y.ln()
}

/// `S(x, y, z)` against `f(u)·G(z)y` and `F(u)·G(z)y`, `u = log y / log z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    #[serde(with = "crate::decimal")]
    pub x: BigUint,
    pub y: u64,
    pub z: u64,
    pub u: f64,
    pub s: u64,
    pub g: f64,
    /// S / (G y)
    pub ratio: f64,
    pub f_u: f64,
    #[serde(rename = "F_u")]
    pub upper_u: f64,
    pub slack: f64,
    pub within: bool,
    /// `u < 1`: the interval is shorter than the sieve level.
    pub degenerate: bool,
}

pub fn envelope_check(x: &BigUint, y: u64, z: u64, slack: f64) -> Result<EnvelopeReport> {
    if y < 2 || z < 2 {
        return Err(invalid("envelope_check needs y >= 2 and z >= 2"));
    }
    if !(slack >= 0.0) {
        return Err(invalid(format!("slack must be >= 0, got {slack}")));
    }
    let survivors = sieve_interval(x, y, z)?;
    let s = survivors.count() as u64;
    let g = mertens_product(z);
    let u = (y as f64).ln() / (z as f64).ln();
    let grid = default_grid();
    let f_u = grid.lower(u)?;
    let upper_u = grid.upper(u)?;
    let ratio = s as f64 / (g * y as f64);
    Ok(EnvelopeReport {
        x: x.clone(),
        y,
        z,
        u,
        s,
        g,
        ratio,
        f_u,
        upper_u,
        slack,
        within: f_u - slack <= ratio && ratio <= upper_u + slack,
        degenerate: u < 1.0,
    })
}

/// The parity example: rough numbers `n <= x` split by λ(n), normalized as
/// `2N^∓ / (G(z) x)`, which tend to f(u) and F(u) respectively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityReport {
    pub x: u64,
    pub z: u64,
    pub u: f64,
    pub n_minus: u64,
    pub n_plus: u64,
    pub g: f64,
    pub ratio_minus: f64,
    pub ratio_plus: f64,
    pub f_u: f64,
    #[serde(rename = "F_u")]
    pub upper_u: f64,
}

/// Uses `z = round(x^{1/u})`; the reported `u` is `log x / log z`.
pub fn parity_check(x: u64, u: f64) -> Result<ParityReport> {
    if !(u > 1.0) {
        return Err(invalid(format!("parity_check needs u > 1, got {u}")));
    }
    let z = (x as f64).powf(1.0 / u).round() as u64;
    if z < 2 {
        return Err(invalid("x^{1/u} must be at least 2"));
    }
    let counts = rough_counts(x, z)?;
    let g = mertens_product(z);
    let actual_u = (x as f64).ln() / (z as f64).ln();
    let grid = default_grid();
    let scale = g * x as f64;
    Ok(ParityReport {
        x,
        z,
        u: actual_u,
        n_minus: counts.n_minus,
        n_plus: counts.n_plus,
        g,
        ratio_minus: 2.0 * counts.n_minus as f64 / scale,
        ratio_plus: 2.0 * counts.n_plus as f64 / scale,
        f_u: grid.lower(actual_u)?,
        upper_u: grid.upper(actual_u)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapRecord {
    pub prime: u64,
    pub next_prime: u64,
    pub gap: u64,
}

/// Successive record gaps `p_{n+1} − p_n` over primes `p_n <= limit`.
pub fn max_gap_scan(limit: u64) -> Result<Vec<GapRecord>> {
    max_gap_scan_with(limit, &crate::Budget::default())
}

pub fn max_gap_scan_with(limit: u64, budget: &crate::Budget) -> Result<Vec<GapRecord>> {
    budget.check_enumeration(limit)?;
    let mut records: Vec<GapRecord> = Vec::new();
    let mut prev: Option<u64> = None;
    let push = |p: u64, records: &mut Vec<GapRecord>, prev: &mut Option<u64>| {
        if let Some(q) = *prev {
            let gap = p - q;
            if records.last().is_none_or(|r| gap > r.gap) {
                records.push(GapRecord {
                    prime: q,
                    next_prime: p,
                    gap,
                });
            }
        }
        *prev = Some(p);
    };
    for_each_prime(2, limit.saturating_add(1), |p| push(p, &mut records, &mut prev));
    // close the last gap with the first prime above the limit
    if prev.is_some() {
        let mut lo = limit.saturating_add(1);
        let mut next = None;
        while next.is_none() {
            let hi = lo.saturating_add(4096);
            for_each_prime(lo, hi, |p| {
                if next.is_none() {
                    next = Some(p);
                }
            });
            lo = hi;
        }
        push(next.expect("a prime follows every bound"), &mut records, &mut prev);
    }
    Ok(records)
}
