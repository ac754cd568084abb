//! Airy function `Ai` on a bounded range and the zeros of `Ai` on the
//! negative axis.

use super::{NumericsError, Result};

const MAX_ZEROS: usize = 50;
// Ai(0) and -Ai'(0)
const AI0: f64 = 0.355_028_053_887_817_239_260_063_186_004;
const AIP0: f64 = 0.258_819_403_792_806_798_405_183_560_189;

/// `Ai(x)` from its Maclaurin series, valid for `-8 <= x <= 3`.
///
/// Accuracy degrades from about 1e-15 near the origin to about 1e-9 at the
/// ends of the range because of cancellation between growing terms.
pub fn airy_ai(x: f64) -> Result<f64> {
    if !(-8.0..=3.0).contains(&x) {
        return Err(NumericsError::domain("airy_ai", x, "-8 <= x <= 3"));
    }
    Ok(maclaurin(x).0)
}

/// `(Ai(x), Ai'(x))` by the Maclaurin series `Ai = c1 f - c2 g`.
fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f = sum_k f_k with f_k ~ x^{3k}, g = sum_k g_k with g_k ~ x^{3k+1}
    let mut f_term = 1.0;
    let mut g_term = x;
    let (mut f, mut g) = (f_term, g_term);
    // derivatives: f_k' = 3k f_k / x, g_k' = (3k+1) g_k / x
    let (mut df, mut dg) = (0.0, 1.0);
    for k in 1..200 {
        let kf = k as f64;
        f_term *= x3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        g_term *= x3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        f += f_term;
        g += g_term;
        if x != 0.0 {
            df += f_term * 3.0 * kf / x;
            dg += g_term * (3.0 * kf + 1.0) / x;
        }
        if k > 3 && f_term.abs() + g_term.abs() < 1e-18 * (f.abs() + g.abs()) {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * df - AIP0 * dg)
}

/// Asymptotic zero `T(t)` with `t = 3 pi (4k - 1) / 8`.
fn asymptotic_zero(k: usize) -> f64 {
    let t = 3.0 * std::f64::consts::PI * (4.0 * k as f64 - 1.0) / 8.0;
    let u = 1.0 / (t * t);
    t.powf(2.0 / 3.0)
        * (1.0
            + u * (5.0 / 48.0
                + u * (-5.0 / 36.0
                    + u * (77125.0 / 82944.0
                        + u * (-108_056_875.0 / 6_967_296.0
                            + u * (162_375_596_875.0 / 334_430_208.0))))))
}

/// Magnitudes `lambda_1 < lambda_2 < ...` of the first `count` zeros of `Ai`.
pub fn airy_negative_zeros(count: usize) -> Result<Vec<f64>> {
    if count == 0 || count > MAX_ZEROS {
        return Err(NumericsError::domain(
            "airy_negative_zeros",
            count as f64,
            "1 <= count <= 50",
        ));
    }
    Ok((1..=count)
        .map(|k| {
            let mut lambda = asymptotic_zero(k);
            if lambda < 8.0 {
                for _ in 0..8 {
                    let (ai, aip) = maclaurin(-lambda);
                    // d Ai(-lambda) / d lambda = -Ai'(-lambda)
                    let step = ai / aip;
                    lambda += step;
                    if step.abs() < 1e-15 * lambda {
                        break;
                    }
                }
            }
            lambda
        })
        .collect())
}
