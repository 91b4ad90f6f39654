//! Dickman's ρ, Buchstab's ω and the linear sieve functions F and f.
//!
//! All four satisfy delay-integral equations with unit delay:
//!
//! ```text
//! ρ(u) = 1                     (0 <= u <= 1)      ρ(u) = ρ(k) − ∫_k^u ρ(t−1)/t dt
//! ω(u) = 1/u                   (1 <= u <= 2)      uω(u) = kω(k) + ∫_k^u ω(t−1) dt
//! F(u) = 2e^γ/u, f(u) = 0      (0 <  u <= 2)      uf(u) = ∫_1^{u−1} F(t) dt
//!                                                 uF(u) = 2e^γ + ∫_2^{u−1} f(t) dt
//! ```
//!
//! The solver marches one unit interval at a time on a grid aligned with the
//! integers. On each interval `[k, k+1]` the integrands are already known
//! (they live on `[k−1, k]`) and are smooth there, so a fourth-order
//! cumulative Newton–Cotes rule integrates them to ~h⁴. Points between grid
//! nodes are recovered with cubic Lagrange interpolation that never crosses
//! an integer, where the functions lose smoothness.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Euler–Mascheroni constant to 30 digits.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577215664901532860606512090082;

pub fn exp_gamma() -> f64 {
    EULER_GAMMA.exp()
}

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_U_MAX: f64 = 20.0;

/// Tabulated ρ, ω, F and f on `u = i·h`, `0 <= u <= u_max`.
#[derive(Debug, Clone)]
pub struct SieveFunctionGrid {
    per_unit: usize,
    units: usize,
    rho: Vec<f64>,
    omega: Vec<f64>,
    upper: Vec<f64>,
    lower: Vec<f64>,
}

impl SieveFunctionGrid {
    /// `1/step` must be an integer `>= 4` and `u_max` an integer `>= 3`.
    pub fn new(step: f64, u_max: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(invalid(format!("grid step must be positive, got {step}")));
        }
        let per_unit = (1.0 / step).round();
        if per_unit < 4.0 || ((1.0 / step) - per_unit).abs() > 1e-9 * per_unit {
            return Err(invalid(format!(
                "grid step must be 1/n for an integer n >= 4, got {step}"
            )));
        }
        if !(u_max >= 3.0) || u_max.fract() != 0.0 || u_max > 1e4 {
            return Err(invalid(format!("u_max must be an integer in [3, 1e4], got {u_max}")));
        }
        let per_unit = per_unit as usize;
        let units = u_max as usize;
        let len = units * per_unit + 1;
        let h = 1.0 / per_unit as f64;
        let u_at = |i: usize| i as f64 * h;
        let two_eg = 2.0 * exp_gamma();

        let mut rho = vec![f64::NAN; len];
        let mut omega = vec![f64::NAN; len];
        let mut upper = vec![f64::NAN; len];
        let mut lower = vec![f64::NAN; len];

        rho[..=per_unit].fill(1.0);
        for (i, w) in omega.iter_mut().enumerate().take(2 * per_unit + 1).skip(per_unit) {
            *w = 1.0 / u_at(i);
        }
        for i in 1..=2 * per_unit {
            upper[i] = two_eg / u_at(i);
            lower[i] = 0.0;
        }

        let mut integrand = vec![0.0; per_unit + 1];
        let mut cumulative = vec![0.0; per_unit + 1];

        // ρ on [k, k+1] for k >= 1
        for k in 1..units {
            let base = k * per_unit;
            for j in 0..=per_unit {
                integrand[j] = rho[base - per_unit + j] / u_at(base + j);
            }
            cumulate(&integrand, h, &mut cumulative);
            for j in 1..=per_unit {
                rho[base + j] = rho[base] - cumulative[j];
            }
        }

        // ω on [k, k+1] for k >= 2
        for k in 2..units {
            let base = k * per_unit;
            for j in 0..=per_unit {
                integrand[j] = omega[base - per_unit + j];
            }
            cumulate(&integrand, h, &mut cumulative);
            let start = k as f64 * omega[base];
            for j in 1..=per_unit {
                omega[base + j] = (start + cumulative[j]) / u_at(base + j);
            }
        }

        // F and f on [k, k+1] for k >= 2; at u = 2 the recurrences give
        // 2f(2) = 0 and 2F(2) = 2e^γ, matching the boundary data.
        let mut other = vec![0.0; per_unit + 1];
        for k in 2..units {
            let base = k * per_unit;
            for j in 0..=per_unit {
                integrand[j] = upper[base - per_unit + j];
            }
            cumulate(&integrand, h, &mut cumulative);
            for j in 0..=per_unit {
                integrand[j] = lower[base - per_unit + j];
            }
            cumulate(&integrand, h, &mut other);
            let start_lower = k as f64 * lower[base];
            let start_upper = k as f64 * upper[base];
            for j in 1..=per_unit {
                let u = u_at(base + j);
                lower[base + j] = (start_lower + cumulative[j]) / u;
                upper[base + j] = (start_upper + other[j]) / u;
            }
        }

        Ok(SieveFunctionGrid {
            per_unit,
            units,
            rho,
            omega,
            upper,
            lower,
        })
    }

    pub fn step(&self) -> f64 {
        1.0 / self.per_unit as f64
    }

    pub fn u_max(&self) -> f64 {
        self.units as f64
    }

    /// Grid abscissae `u_i = i·h`.
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.rho.len()).map(move |i| i as f64 * h)
    }

    /// Dickman–de Bruijn ρ(u), `u >= 0`.
    pub fn rho(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) {
            return Err(invalid(format!("rho: u must be >= 0, got {u}")));
        }
        if u <= 1.0 {
            return Ok(1.0);
        }
        if u >= self.u_max() {
            // ρ(20) < 1e-25
            return Ok(if u == self.u_max() {
                self.rho[self.rho.len() - 1]
            } else {
                0.0
            });
        }
        Ok(self.interpolate(&self.rho, u))
    }

    /// Buchstab ω(u), `u >= 1`.
    pub fn omega(&self, u: f64) -> Result<f64> {
        if !(u >= 1.0) {
            return Err(invalid(format!("omega: u must be >= 1, got {u}")));
        }
        if u <= 2.0 {
            return Ok(1.0 / u);
        }
        if u >= self.u_max() {
            return Ok(if u == self.u_max() {
                self.omega[self.omega.len() - 1]
            } else {
                (-EULER_GAMMA).exp()
            });
        }
        Ok(self.interpolate(&self.omega, u))
    }

    /// Upper linear sieve function F(u), `u > 0`.
    pub fn upper(&self, u: f64) -> Result<f64> {
        if !(u > 0.0) {
            return Err(invalid(format!("F: u must be > 0, got {u}")));
        }
        if u <= 2.0 {
            return Ok(2.0 * exp_gamma() / u);
        }
        if u >= self.u_max() {
            return Ok(if u == self.u_max() {
                self.upper[self.upper.len() - 1]
            } else {
                1.0
            });
        }
        Ok(self.interpolate(&self.upper, u))
    }

    /// Lower linear sieve function f(u), `u > 0`.
    pub fn lower(&self, u: f64) -> Result<f64> {
        if !(u > 0.0) {
            return Err(invalid(format!("f: u must be > 0, got {u}")));
        }
        if u <= 2.0 {
            return Ok(0.0);
        }
        if u >= self.u_max() {
            return Ok(if u == self.u_max() {
                self.lower[self.lower.len() - 1]
            } else {
                1.0
            });
        }
        Ok(self.interpolate(&self.lower, u))
    }

    /// All four values at `u`; ω is `None` below 1.
    pub fn row(&self, u: f64) -> Result<SieveFunctionRow> {
        Ok(SieveFunctionRow {
            u,
            rho: self.rho(u)?,
            omega: if u >= 1.0 { Some(self.omega(u)?) } else { None },
            upper: self.upper(u)?,
            lower: self.lower(u)?,
        })
    }

    /// Largest change of any tabulated value at the shared nodes when the
    /// step is halved (a Richardson-style refinement check).
    pub fn refinement_delta(&self) -> Result<f64> {
        let fine = SieveFunctionGrid::new(self.step() / 2.0, self.u_max())?;
        let mut worst = 0.0f64;
        for i in self.per_unit..self.rho.len() {
            let j = 2 * i;
            for (a, b) in [
                (self.rho[i], fine.rho[j]),
                (self.omega[i], fine.omega[j]),
                (self.upper[i], fine.upper[j]),
                (self.lower[i], fine.lower[j]),
            ] {
                worst = worst.max((a - b).abs());
            }
        }
        Ok(worst)
    }

    fn interpolate(&self, values: &[f64], u: f64) -> f64 {
        let n = self.per_unit;
        let k = u.floor() as usize;
        let pos = (u - k as f64) * n as f64;
        let mut j = pos.floor() as usize;
        let frac = pos - j as f64;
        if frac == 0.0 {
            return values[k * n + j];
        }
        // stencil j-1..j+2 kept inside [k, k+1]
        j = j.clamp(1, n - 2);
        let t = pos - j as f64; // position relative to node j
        let base = k * n + j - 1;
        let (y0, y1, y2, y3) = (values[base], values[base + 1], values[base + 2], values[base + 3]);
        let (a, b, c, d) = (t + 1.0, t, t - 1.0, t - 2.0);
        -y0 * b * c * d / 6.0 + y1 * a * c * d / 2.0 - y2 * a * b * d / 2.0 + y3 * a * b * c / 6.0
    }
}

/// Fourth-order cumulative integral of equally spaced samples:
/// `out[j] = ∫ from node 0 to node j`.
fn cumulate(g: &[f64], h: f64, out: &mut [f64]) {
    let n = g.len() - 1;
    let w = h / 24.0;
    out[0] = 0.0;
    out[1] = w * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3]);
    for j in 1..n - 1 {
        out[j + 1] = out[j] + w * (-g[j - 1] + 13.0 * g[j] + 13.0 * g[j + 1] - g[j + 2]);
    }
    out[n] = out[n - 1] + w * (g[n - 3] - 5.0 * g[n - 2] + 19.0 * g[n - 1] + 9.0 * g[n]);
}

/// One evaluation of all four functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SieveFunctionRow {
    pub u: f64,
    pub rho: f64,
    /// Undefined below 1.
    pub omega: Option<f64>,
    #[serde(rename = "F")]
    pub upper: f64,
    #[serde(rename = "f")]
    pub lower: f64,
}

/// Shared grid at the default step and range.
pub fn default_grid() -> &'static SieveFunctionGrid {
    static GRID: OnceLock<SieveFunctionGrid> = OnceLock::new();
    GRID.get_or_init(|| SieveFunctionGrid::new(DEFAULT_STEP, DEFAULT_U_MAX).expect("default grid parameters are valid"))
}

pub fn dickman_rho(u: f64) -> Result<f64> {
    default_grid().rho(u)
}

pub fn buchstab_omega(u: f64) -> Result<f64> {
    default_grid().omega(u)
}

/// F(u).
pub fn linear_sieve_upper(u: f64) -> Result<f64> {
    default_grid().upper(u)
}

/// f(u).
pub fn linear_sieve_lower(u: f64) -> Result<f64> {
    default_grid().lower(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson with `panels` (even) subintervals.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut s = f(a) + f(b);
        for i in 1..panels {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn gamma_constant() {
        assert!((exp_gamma() - 1.781_072_417_990_198).abs() < 1e-15);
    }

    #[test]
    fn rho_values() {
        assert_eq!(dickman_rho(0.5).unwrap(), 1.0);
        assert!((dickman_rho(2.0).unwrap() - (1.0 - 2f64.ln())).abs() < 1e-12);
        // ρ(3) = ρ(2) − ∫_2^3 (1 − ln(t−1))/t dt
        let oracle = 1.0 - 2f64.ln() - simpson(|t| (1.0 - (t - 1.0).ln()) / t, 2.0, 3.0, 100_000);
        assert!((oracle - 0.048_608_4).abs() < 1e-7);
        assert!((dickman_rho(3.0).unwrap() - oracle).abs() < 1e-10);
        // ρ(1.5) between nodes and ρ on [1,2] is 1 − ln u
        assert!((dickman_rho(1.2345).unwrap() - (1.0 - 1.2345f64.ln())).abs() < 1e-12);
        assert!(dickman_rho(-0.1).is_err());
    }

    #[test]
    fn omega_values() {
        assert!((buchstab_omega(1.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let closed = (1.0 + 1.5f64.ln()) / 2.5;
        assert!((closed - 0.562_186_04).abs() < 1e-8);
        assert!((buchstab_omega(2.5).unwrap() - closed).abs() < 1e-10);
        assert!((buchstab_omega(10.0).unwrap() - (-EULER_GAMMA).exp()).abs() < 1e-6);
        assert!(buchstab_omega(0.99).is_err());
    }

    #[test]
    fn upper_values() {
        let eg = exp_gamma();
        assert!((linear_sieve_upper(2.0).unwrap() - eg).abs() < 1e-12);
        assert!((linear_sieve_upper(3.0).unwrap() - 2.0 * eg / 3.0).abs() < 1e-10);
        assert!((2.0 * eg / 3.0 - 1.187_381_6).abs() < 1e-7);
        let oracle = 2.0 * eg / 4.0 + simpson(|t| 2.0 * eg * (t - 1.0).ln() / t, 2.0, 3.0, 100_000) / 4.0;
        assert!((linear_sieve_upper(4.0).unwrap() - oracle).abs() < 1e-9);
        assert!(linear_sieve_upper(0.0).is_err());
    }

    #[test]
    fn lower_values() {
        let eg = exp_gamma();
        assert_eq!(linear_sieve_lower(2.0).unwrap(), 0.0);
        assert_eq!(linear_sieve_lower(0.3).unwrap(), 0.0);
        let closed = 2.0 * eg * 1.5f64.ln() / 2.5;
        assert!((closed - 0.577_730).abs() < 1e-6);
        assert!((linear_sieve_lower(2.5).unwrap() - closed).abs() < 1e-10);
        // f(3) via the recurrence (1/3)∫_1^2 F(t) dt, with F = 2e^γ/t there
        let oracle = simpson(|t| 2.0 * eg / t, 1.0, 2.0, 10_000) / 3.0;
        assert!((oracle - 2.0 * eg * 2f64.ln() / 3.0).abs() < 1e-12);
        assert!((linear_sieve_lower(3.0).unwrap() - oracle).abs() < 1e-10);
        assert!(linear_sieve_lower(-1.0).is_err());
    }

    #[test]
    fn identities_and_limits() {
        let g = default_grid();
        let two_eg = 2.0 * exp_gamma();
        for u in g.nodes().filter(|&u| (2.0..=10.0).contains(&u)) {
            let (up, lo) = (g.upper(u).unwrap(), g.lower(u).unwrap());
            assert!((up + lo - two_eg * g.omega(u).unwrap()).abs() <= 1e-6, "u = {u}");
            assert!(
                (up - lo - two_eg * g.rho(u - 1.0).unwrap() / u).abs() <= 1e-6,
                "u = {u}"
            );
        }
        assert!((g.upper(20.0).unwrap() - 1.0).abs() <= 1e-6);
        assert!((g.lower(20.0).unwrap() - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn monotone_and_ordered() {
        let g = default_grid();
        let mut prev: Option<(f64, f64)> = None;
        for u in g.nodes().filter(|&u| u >= 2.0) {
            let (up, lo) = (g.upper(u).unwrap(), g.lower(u).unwrap());
            assert!(lo <= up, "u = {u}");
            if let Some((pu, pl)) = prev {
                assert!(up <= pu + 1e-15, "F increases at {u}");
                assert!(lo >= pl - 1e-15, "f decreases at {u}");
            }
            prev = Some((up, lo));
        }
    }

    #[test]
    fn refinement_is_stable() {
        let delta = default_grid().refinement_delta().unwrap();
        assert!(delta <= 1e-8, "halving h moved a value by {delta}");
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(SieveFunctionGrid::new(0.3, 20.0).is_err());
        assert!(SieveFunctionGrid::new(0.0, 20.0).is_err());
        assert!(SieveFunctionGrid::new(1e-3, 2.5).is_err());
        assert!(SieveFunctionGrid::new(0.25, 3.0).is_ok());
    }
}
