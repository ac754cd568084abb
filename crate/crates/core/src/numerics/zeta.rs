//! Riemann and Hurwitz zeta functions for real `s > 1` by Euler–Maclaurin
//! summation.

use super::{NumericsError, Result};

/// `B_{2j} / (2j)!` for j = 1..=10.
const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
];

const DIRECT_TERMS: usize = 24;

/// `zeta(s, a) = sum_{k >= 0} (k + a)^(-s)` for `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(NumericsError::domain("hurwitz_zeta", s, "s > 1"));
    }
    if !(a > 0.0) {
        return Err(NumericsError::domain("hurwitz_zeta", a, "a > 0"));
    }
    let mut sum = 0.0;
    for k in (0..DIRECT_TERMS).rev() {
        sum += (k as f64 + a).powf(-s);
    }
    let big_n = DIRECT_TERMS as f64 + a;
    sum += big_n.powf(1.0 - s) / (s - 1.0) + 0.5 * big_n.powf(-s);
    // s (s+1) ... (s + 2j - 2) N^{-s-2j+1}
    let mut rising = s * big_n.powf(-s - 1.0);
    let inv_n2 = 1.0 / (big_n * big_n);
    for (j, coef) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let correction = coef * rising;
        sum += correction;
        if correction.abs() < 1e-17 * sum {
            break;
        }
        let jf = j as f64 + 1.0;
        rising *= (s + 2.0 * jf - 1.0) * (s + 2.0 * jf) * inv_n2;
    }
    Ok(sum)
}

pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(NumericsError::domain("riemann_zeta", s, "s > 1"));
    }
    hurwitz_zeta(s, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn classical_values() {
        assert!((riemann_zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((riemann_zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((riemann_zeta(3.0).unwrap() - 1.202_056_903_159_594_2).abs() < 1e-14);
    }

    #[test]
    fn near_pole_and_far_out() {
        let s = 1.0 + 1e-4;
        // zeta(s) = 1/(s-1) + gamma + O(s-1)
        let approx = 1.0 / (s - 1.0) + crate::numerics::EULER_GAMMA;
        assert!((riemann_zeta(s).unwrap() - approx).abs() < 1e-4);
        assert!((riemann_zeta(60.0).unwrap() - 1.0).abs() < 1e-17);
    }

    #[test]
    fn alternating_combination_at_four_thirds() {
        let s = 4.0 / 3.0;
        let value = (1.0 - 2f64.powf(-s)) * riemann_zeta(s).unwrap();
        assert!((value - 2.172).abs() < 5e-3, "{value}");
    }

    #[test]
    fn hurwitz_shift_identity() {
        // zeta(s, a) = a^{-s} + zeta(s, a + 1)
        for &(s, a) in &[(1.3, 0.5), (2.5, 1.5), (4.0 / 3.0, 7.5), (3.0, 0.01)] {
            let lhs = hurwitz_zeta(s, a).unwrap();
            let rhs = a.powf(-s) + hurwitz_zeta(s, a + 1.0).unwrap();
            assert!(((lhs - rhs) / lhs).abs() < 1e-13);
        }
        // zeta(s, 1/2) = (2^s - 1) zeta(s)
        let s = 2.7;
        let half = hurwitz_zeta(s, 0.5).unwrap();
        assert!((half - (2f64.powf(s) - 1.0) * riemann_zeta(s).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(riemann_zeta(1.0).is_err());
        assert!(hurwitz_zeta(2.0, 0.0).is_err());
    }
}
