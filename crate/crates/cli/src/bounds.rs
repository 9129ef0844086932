//! Closed-form bound expressions reported next to experimental results.
//!
//! All logarithms are natural. The lower-bound entries are shape functions
//! without their leading constants.

use serde::Serialize;
use theta_lab::combinatorics::ln_binomial;
use theta_lab::randcover::{BalancedConfig, GeneralConfig};
use theta_lab::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    /// `2^(k+2) k^(k+1) d^(k/(k-1)) ln n`
    pub upper_balanced: f64,
    /// `(2k / delta^k) d^(k/2) ln n`
    pub upper_general: f64,
    /// `d^(k/(k-1)) / ln d * ln(n^(k-1) / d)`
    pub lower_balanced_form: f64,
    /// `d^2 / ln d * ln(2n / (k d))`
    pub lower_even_form: f64,
    /// `n^(k/(k-1)) / (ln n)^(1/(k-1))`
    pub steiner_lower_form: f64,
    /// `t (1 + log2 C(n, alpha))`, present when both `alpha` and `t` are given.
    pub log_f: Option<f64>,
}

/// `t (1 + log2 C(n, alpha))`, the log2 of `(2 C(n, alpha))^t`.
pub fn log_f(n: u64, alpha: u64, t: u64) -> Result<f64> {
    if alpha > n {
        return Err(Error::Input(format!("alpha = {alpha} exceeds n = {n}")));
    }
    Ok(t as f64 * (1.0 + ln_binomial(n, alpha) / std::f64::consts::LN_2))
}

pub fn compute_bounds(n: u64, d: u64, k: u64, alpha: Option<u64>, t: Option<u64>) -> Result<BoundReport> {
    if d < 2 || n <= d || k < 2 {
        return Err(Error::Input(format!(
            "bounds need n > d >= 2 and k >= 2, got n = {n}, d = {d}, k = {k}"
        )));
    }
    let (nf, df, kf) = (n as f64, d as f64, k as f64);
    let (ln_n, ln_d) = (nf.ln(), df.ln());
    let ku = k as usize;
    let balanced_exp = kf / (kf - 1.0);
    let report = BoundReport {
        upper_balanced: BalancedConfig::constant(ku) * df.powf(balanced_exp) * ln_n,
        upper_general: GeneralConfig::constant(ku) * df.powf(kf / 2.0) * ln_n,
        lower_balanced_form: df.powf(balanced_exp) / ln_d * ((kf - 1.0) * ln_n - ln_d),
        lower_even_form: df * df / ln_d * (2.0 * nf / (kf * df)).ln(),
        steiner_lower_form: nf.powf(balanced_exp) / ln_n.powf(1.0 / (kf - 1.0)),
        log_f: match (alpha, t) {
            (Some(a), Some(t)) => Some(log_f(n, a, t)?),
            _ => None,
        },
    };
    let values = [
        report.upper_balanced,
        report.upper_general,
        report.lower_balanced_form,
        report.lower_even_form,
        report.steiner_lower_form,
        report.log_f.unwrap_or(0.0),
    ];
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input(format!("bounds overflow for n = {n}, d = {d}, k = {k}")));
    }
    Ok(report)
}
