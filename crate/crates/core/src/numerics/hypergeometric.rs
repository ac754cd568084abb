//! `2F1(n, n; 2n; z)`, the only hypergeometric family the kernels need.
//!
//! The Gauss series is summed directly for small `z`. Close to `z = 1`, where
//! `c - a - b = 0`, the connection formula with an explicit `ln(1 - z)` is used:
//!
//! ```text
//! F = Gamma(2n)/Gamma(n)^2 sum_k [(n)_k / k!]^2 [2 psi(k+1) - 2 psi(n+k) - ln(1-z)] (1-z)^k
//! ```
//!
//! The value grows like `4^n`, so overflow sets in for `n` in the hundreds;
//! the partial-wave kernels therefore go through `legendre_q_ratio`, which is
//! the same function with the growth divided out.

use super::{ln_gamma, NumericsError, Result, EULER_GAMMA};

const SWITCH_Z: f64 = 0.75;

/// `F(n, n; 2n; z)` for `n >= 1` and `0 <= z < 1`.
pub fn hyp2f1_equal_params(n: u32, z: f64) -> Result<f64> {
    if n == 0 {
        return Err(NumericsError::domain("hyp2f1_equal_params", 0.0, "n >= 1"));
    }
    if !(0.0..1.0).contains(&z) {
        return Err(NumericsError::domain("hyp2f1_equal_params", z, "0 <= z < 1"));
    }
    hyp2f1_equal_params_complement(n, z, 1.0 - z)
}

/// As [`hyp2f1_equal_params`] but with `1 - z` supplied by the caller, which
/// keeps the logarithm accurate when `z` is rounded to 1.
pub fn hyp2f1_equal_params_complement(n: u32, z: f64, one_minus_z: f64) -> Result<f64> {
    if n == 0 {
        return Err(NumericsError::domain("hyp2f1_equal_params", 0.0, "n >= 1"));
    }
    if !(one_minus_z > 0.0 && one_minus_z <= 1.0) {
        return Err(NumericsError::domain(
            "hyp2f1_equal_params",
            one_minus_z,
            "0 < 1 - z <= 1",
        ));
    }
    let nf = n as f64;
    // Past the switch point, fall back to the positive series when the
    // connection sum would cancel badly (large n, moderate 1 - z).
    if z > SWITCH_Z && nf * nf * one_minus_z <= 2.0 {
        Ok(log_branch(n, one_minus_z))
    } else {
        Ok(direct_series(nf, z))
    }
}

fn direct_series(n: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        term *= (n + k) * (n + k) / ((2.0 * n + k) * (k + 1.0)) * z;
        sum += term;
        k += 1.0;
        if term <= 1e-17 * sum || k > 1e8 {
            break;
        }
    }
    sum
}

fn log_branch(n: u32, one_minus_z: f64) -> f64 {
    let nf = n as f64;
    let prefactor = (ln_gamma(2.0 * nf) - 2.0 * ln_gamma(nf)).exp();
    let log_v = one_minus_z.ln();
    // psi(k+1) = H_k - gamma, psi(n+k) = H_{n+k-1} - gamma
    let mut harmonic_k = 0.0;
    let mut harmonic_nk: f64 = (1..n).map(|j| 1.0 / j as f64).sum();
    let mut coef = 1.0;
    let mut sum = 0.0;
    for k in 0..100_000u32 {
        if k > 0 {
            let kf = k as f64;
            coef *= (nf + kf - 1.0) * (nf + kf - 1.0) / (kf * kf) * one_minus_z;
            harmonic_k += 1.0 / kf;
            harmonic_nk += 1.0 / (nf + kf - 1.0);
        }
        let psi_part = 2.0 * (harmonic_k - EULER_GAMMA) - 2.0 * (harmonic_nk - EULER_GAMMA);
        let bracket = psi_part - log_v;
        sum += coef * bracket;
        if k > 2 && coef * (1.0 + bracket.abs()) < 1e-17 * sum.abs() {
            break;
        }
    }
    prefactor * sum
}
