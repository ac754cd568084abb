//! The constants `C(nu, q)`, `c(l)` and `B(n, p, p')`.
//!
//! With `rho = exp(-eta)` the defining integral becomes
//!
//! ```text
//! C(nu, q) = (1 / (alpha pi)) [int_0^inf 2 cosh(eta) Q_nu(t(rho))^q d eta]^(1/q)
//! ```
//!
//! which is finite unless `q (nu + 1) <= 1`, i.e. `(nu, q) = (0, 1)`.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{check_alpha, BoundsError, Result};
use crate::numerics::{hurwitz_zeta, integrate, ln_gamma, q_ratio_unchecked, QuadratureSpec, Upper};

/// `C(nu, q)` for `q >= 1`, excluding the divergent `(0, 1)`.
pub fn const_c_nu_q(nu: u32, q: f64, alpha: u8) -> Result<f64> {
    check_alpha(alpha)?;
    if !(q >= 1.0) {
        return Err(BoundsError::Domain(format!("C(nu, q) needs q >= 1, got {q}")));
    }
    if nu == 0 && q == 1.0 {
        return Err(BoundsError::Divergent("C(0, 1) diverges".into()));
    }
    if q.is_infinite() {
        // sup of Q_nu is infinite on the diagonal
        return Err(BoundsError::Divergent(format!("C({nu}, inf) diverges")));
    }
    let integral = q_power_integral(nu, q)?;
    Ok((integral.ln() / q).exp() / (f64::from(alpha) * PI))
}

/// `int_0^inf 2 cosh(eta) Q_nu(e^-eta)^q d eta`, split at `eta = 1/kappa`
/// with `kappa = q(nu+1) - 1`, the decay rate of the integrand.
fn q_power_integral(nu: u32, q: f64) -> Result<f64> {
    let kappa = q * (nu as f64 + 1.0) - 1.0;
    let integrand = |eta: f64| -> f64 {
        let rho = (-eta).exp();
        let one_minus = -(-2.0 * eta).exp_m1();
        if !(one_minus > 0.0) {
            return 0.0;
        }
        let qv = q_ratio_unchecked(nu, rho, one_minus);
        if qv <= 0.0 {
            return 0.0;
        }
        let log_cosh2 = eta + (-2.0 * eta).exp().ln_1p();
        (q * qv.ln() + log_cosh2).exp()
    };
    let eta0 = 1.0 / kappa;
    // eta = eta0 e^-s on the logarithmic end
    let near = integrate(
        |s| {
            let eta = eta0 * (-s).exp();
            integrand(eta) * eta
        },
        &QuadratureSpec::new(0.0, Upper::Infinite)
            .with_rel_tol(1e-12)
            .with_abs_tol(1e-300),
    )?;
    // eta = eta0 (1 + t) on the exponentially decaying side
    let far = integrate(
        |t| integrand(eta0 * (1.0 + t)) * eta0,
        &QuadratureSpec::new(0.0, Upper::Infinite)
            .with_rel_tol(1e-12)
            .with_abs_tol(1e-300),
    )?;
    let total = near.value + far.value;
    if !(total.is_finite() && total > 0.0) {
        return Err(BoundsError::Divergent(format!(
            "integral for C({nu}, {q}) is not finite"
        )));
    }
    Ok(total)
}

/// `c(l) = sqrt(pi) (Gamma(l+3/2)/Gamma(l+1)) sqrt(2l+1) alpha C(l, 1)`,
/// independent of `alpha`.
pub fn const_c_ell(ell: u32) -> Result<f64> {
    if ell == 0 {
        return Err(BoundsError::Domain("c(0) is infinite; need l >= 1".into()));
    }
    let l = ell as f64;
    let c1 = const_c_nu_q(ell, 1.0, 1)?;
    Ok(PI.sqrt() * gamma_ratio(l) * (2.0 * l + 1.0).sqrt() * c1)
}

/// `Gamma(x + 3/2) / Gamma(x + 1)`.
pub fn gamma_ratio(x: f64) -> f64 {
    (ln_gamma(x + 1.5) - ln_gamma(x + 1.0)).exp()
}

/// Conjugate exponent `p / (p - 1)`, with `p = inf` mapping to 1.
pub(crate) fn conjugate(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `C(l, p/(p-1))^(n-1) C(l, p p'/(p'-1))` for a single wave.
pub fn const_b_tilde(n: u32, ell: u32, p: f64, pp: f64, alpha: u8) -> Result<f64> {
    check_exponents(p, pp)?;
    let c1 = const_c_nu_q(ell, conjugate(p), alpha)?;
    let c2 = const_c_nu_q(ell, p * conjugate(pp), alpha)?;
    Ok(c1.powi(n as i32 - 1) * c2)
}

/// Partial sum of the `nu` series plus a fitted power-law tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Last index summed explicitly.
    pub truncation_index: u32,
    /// Fitted remainder included in `value`.
    pub tail: f64,
    /// Spread of the tail under two different fits.
    pub tail_error: f64,
}

const B_BLOCK: u32 = 16;
const B_CAP: u32 = 128;

/// `B(n, p, p') = sum_nu (2nu+1) C(nu, p/(p-1))^(n-1) C(nu, p p'/(p'-1))`.
///
/// Terms are summed until one drops below `tol` times the running sum with
/// three consecutive decreasing terms. Series that are still running at
/// index 128 get their remainder from a power law `A (nu + 1/2)^-s` fitted
/// to the last terms and summed with the Hurwitz zeta function.
pub fn const_b(n: u32, p: f64, pp: f64, alpha: u8, tol: f64) -> Result<SeriesSum> {
    check_alpha(alpha)?;
    check_exponents(p, pp)?;
    if n < 2 {
        return Err(BoundsError::Domain(format!("B(n, p, p') needs n >= 2, got {n}")));
    }
    let q1 = conjugate(p);
    let q2 = p * conjugate(pp);
    let term = |nu: u32| -> Result<f64> {
        let c1 = const_c_nu_q(nu, q1, alpha)?;
        let c2 = const_c_nu_q(nu, q2, alpha)?;
        Ok((2.0 * nu as f64 + 1.0) * c1.powi(n as i32 - 1) * c2)
    };
    let mut terms: Vec<f64> = Vec::new();
    let mut sum = 0.0;
    let mut decreasing = 0;
    loop {
        let start = terms.len() as u32;
        let block: Vec<f64> = (start..start + B_BLOCK)
            .into_par_iter()
            .map(term)
            .collect::<Result<_>>()?;
        for t in block {
            let nu = terms.len();
            if nu > 0 && t < terms[nu - 1] {
                decreasing += 1;
            } else {
                decreasing = 0;
            }
            terms.push(t);
            sum += t;
            if decreasing >= 3 && t < tol * sum {
                return Ok(SeriesSum {
                    value: sum,
                    truncation_index: nu as u32,
                    tail: 0.0,
                    tail_error: 0.0,
                });
            }
        }
        let last = terms.len() as u32 - 1;
        if last + 1 >= B_CAP {
            if decreasing < 3 {
                return Err(BoundsError::Divergent(format!(
                    "B({n}, {p}, {pp}) terms are not decreasing at nu = {last}"
                )));
            }
            let (tail, tail_error) = power_law_tail(&terms)?;
            return Ok(SeriesSum {
                value: sum + tail,
                truncation_index: last,
                tail,
                tail_error,
            });
        }
    }
}

/// Remainder `sum_{k > N} t_N ((k + 1/2)/(N + 1/2))^-s` of a series whose
/// terms `t_0..t_N` decay like a power; `s` is fitted from `t_{N/2}, t_N`
/// and, for the error estimate, from `t_{N/4}, t_N`.
pub(crate) fn power_law_tail(terms: &[f64]) -> Result<(f64, f64)> {
    let n = terms.len() - 1;
    let fit = |m: usize| -> f64 {
        let x_n = n as f64 + 0.5;
        let x_m = m as f64 + 0.5;
        (terms[m] / terms[n]).ln() / (x_n / x_m).ln()
    };
    let s_half = fit(n / 2);
    let s_quarter = fit(n / 4);
    let remainder = |s: f64| -> Result<f64> {
        if !(s > 1.0 + 1e-3) {
            return Err(BoundsError::Divergent(format!(
                "terms decay like nu^-{s:.4}, the series does not converge"
            )));
        }
        let x_n = n as f64 + 0.5;
        Ok(terms[n] * x_n.powf(s) * hurwitz_zeta(s, x_n + 1.0)?)
    };
    let tail = remainder(s_half)?;
    let alternative = remainder(s_quarter).unwrap_or(tail * 2.0);
    Ok((tail, (tail - alternative).abs()))
}

pub(crate) fn check_exponents(p: f64, pp: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() && pp > 1.0 {
        Ok(())
    } else {
        Err(BoundsError::Domain(format!(
            "Holder exponents need finite p > 1 and p' > 1, got p = {p}, p' = {pp}"
        )))
    }
}
