//! Legendre functions of the first and second kind.
//!
//! `Q_nu` is parameterised by the radius ratio `rho = r_< / r_>` in `(0, 1)`,
//! with argument `t = (1 + rho^2) / (2 rho)`. In that variable
//!
//! ```text
//! Q_nu = g_nu rho^(nu+1) 2F1(1/2, nu+1; nu+3/2; rho^2),  g_nu = sqrt(pi) Gamma(nu+1) / Gamma(nu+3/2)
//! ```
//!
//! and the logarithmic connection formula (`c - a - b = 0`) takes over as
//! `rho -> 1`. The caller passes `1 - rho^2` separately so the logarithm keeps
//! full relative accuracy on the diagonal.

use std::f64::consts::LN_2;

use super::{NumericsError, Result};

/// Legendre polynomial `P_l(x)` by the three-term recurrence.
pub fn legendre_p(l: u32, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(NumericsError::domain("legendre_p", x, "|x| <= 1"));
    }
    Ok(legendre_p_unchecked(l, x))
}

pub(crate) fn legendre_p_unchecked(l: u32, x: f64) -> f64 {
    let mut p_prev = 1.0;
    if l == 0 {
        return p_prev;
    }
    let mut p = x;
    for k in 1..l {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    p
}

/// Legendre function of the second kind `Q_nu(t)` for `t > 1`.
pub fn legendre_q(nu: u32, t: f64) -> Result<f64> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(NumericsError::domain("legendre_q", t, "1 < t < inf"));
    }
    let root = ((t - 1.0) * (t + 1.0)).sqrt();
    let rho = 1.0 / (t + root);
    Ok(q_ratio_unchecked(nu, rho, 2.0 * rho * root))
}

/// `Q_nu((1 + rho^2) / (2 rho))` given `rho` in `(0, 1)` and `1 - rho^2`.
pub fn legendre_q_ratio(nu: u32, rho: f64, one_minus_rho2: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(NumericsError::domain("legendre_q_ratio", rho, "0 < rho < 1"));
    }
    if !(one_minus_rho2 > 0.0 && one_minus_rho2 <= 1.0) {
        return Err(NumericsError::domain(
            "legendre_q_ratio",
            one_minus_rho2,
            "0 < 1 - rho^2 <= 1",
        ));
    }
    Ok(q_ratio_unchecked(nu, rho, one_minus_rho2))
}

pub(crate) fn q_ratio_unchecked(nu: u32, rho: f64, one_minus_w: f64) -> f64 {
    let w = rho * rho;
    let nu1 = nu as f64 + 1.0;
    if w > 0.5 && nu1 * one_minus_w <= 6.0 {
        (nu1 * rho.ln()).exp() * log_branch(nu, one_minus_w)
    } else {
        let g = (std::f64::consts::PI.sqrt().ln() + super::ln_gamma(nu1)
            - super::ln_gamma(nu1 + 0.5))
        .exp();
        let prefactor = nu1 * rho.ln() + g.ln();
        if prefactor < -745.0 {
            return 0.0;
        }
        prefactor.exp() * direct_series(nu, w)
    }
}

fn direct_series(nu: u32, w: f64) -> f64 {
    let b = nu as f64 + 1.0;
    let c = b + 0.5;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        term *= (0.5 + k) * (b + k) / ((c + k) * (k + 1.0)) * w;
        sum += term;
        k += 1.0;
        if term < 1e-17 * sum || k > 1e6 {
            break;
        }
    }
    sum
}

fn log_branch(nu: u32, one_minus_w: f64) -> f64 {
    let b = nu as f64 + 1.0;
    let log_v = one_minus_w.ln();
    let mut c = 1.0;
    let mut power = 1.0;
    let mut harmonic_k = 0.0;
    let mut odd_sum = 0.0;
    // H_{nu + k}
    let mut harmonic_nuk: f64 = (1..=nu).map(|j| 1.0 / j as f64).sum();
    let mut sum = 0.0;
    for k in 0..100_000u32 {
        if k > 0 {
            let kf = k as f64;
            c *= (kf - 0.5) * (b + kf - 1.0) / (kf * kf);
            power *= one_minus_w;
            harmonic_k += 1.0 / kf;
            odd_sum += 2.0 / (2.0 * kf - 1.0);
            harmonic_nuk += 1.0 / (nu as f64 + kf);
        }
        let d = 2.0 * harmonic_k + 2.0 * LN_2 - odd_sum - harmonic_nuk;
        let term = c * power * (d - log_v);
        sum += term;
        if k > 2 && (c * power) * (1.0 + (d - log_v).abs()) < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}
