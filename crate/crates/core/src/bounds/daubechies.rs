//! The semiclassical-type bound `N <= K int d^3r [|W|(|W| + 2m)]^(3/2)`.
//!
//! For `alpha = 2` the two-body equation `[2 sqrt(p^2 + m^2) + V] psi = M psi`
//! is divided by two, so the bound is applied to `W = V / alpha` with the
//! mass unchanged.

use std::f64::consts::PI;

use super::{
    check_alpha, check_mass, reference_strength, BoundMethod, BoundParams, BoundReport,
    BoundsError, Result,
};
use crate::numerics::Upper;
use crate::potentials::RadialPotential;

const K_MASSIVE: f64 = 0.239;
const K_MASSLESS: f64 = 0.103;

pub fn bound_daubechies(v: &RadialPotential, m: f64, alpha: u8) -> Result<BoundReport> {
    check_alpha(alpha)?;
    check_mass(m)?;
    let params = BoundParams::default();
    let Some(support) = v.support() else {
        return Ok(BoundReport::new(BoundMethod::Daubechies, 0.0, params, 0.0));
    };
    let a = f64::from(alpha);
    let k = if m == 0.0 { K_MASSLESS } else { K_MASSIVE };
    let f = move |r: f64, w: f64| {
        let w = w / a;
        r * r * (w * (w + 2.0 * m)).powf(1.5)
    };
    if support.upper == Upper::Infinite {
        v.check_tail(f)?;
    }
    let integral = v.radial_integral(f, 1e-11)?;
    let raw = k * 4.0 * PI * integral;
    Ok(BoundReport::new(BoundMethod::Daubechies, raw, params, 1e-10 * raw))
}

/// Strength at which the bound equals one, by bisection on the logarithm of
/// a multiplier of the potential (the bound is not homogeneous when `m > 0`).
pub fn critical_daubechies(v: &RadialPotential, m: f64, alpha: u8) -> Result<f64> {
    let at = |factor: f64| -> Result<f64> {
        Ok(bound_daubechies(&v.scaled(factor)?, m, alpha)?.raw_bound)
    };
    if !(at(1.0)? > 0.0) {
        return Err(BoundsError::Domain("potential has no attractive part".into()));
    }
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    while at(lo)? >= 1.0 {
        lo *= 0.5;
        if lo < 1e-12 {
            return Err(BoundsError::Domain("no subcritical strength found".into()));
        }
    }
    while at(hi)? < 1.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(BoundsError::Domain("no supercritical strength found".into()));
        }
    }
    while hi / lo - 1.0 > 1e-12 {
        let mid = (lo * hi).sqrt();
        if at(mid)? < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(reference_strength(v) * (lo * hi).sqrt())
}
