//! Massless-limit results: Holder-type bounds, existence conditions for the
//! first bound state of a wave, caps on the angular momentum and the
//! central-potential bound built from them.
//!
//! The Holder bounds multiply a constant by four radial moments of `|V^-|`:
//!
//! ```text
//! [int r^(2(p-1)/p) |V|] [int |V|^(p p')]^(1/(p p')) [int r^((p'-1)/p') |V|^p]^(1/p) [int r^(p-1) |V|^p]^((n-3)/p)
//! ```
//!
//! The powers of `|V|` add up to `n` and the product is invariant under
//! `r -> lambda r, V -> V / lambda`.

use std::f64::consts::PI;

use super::constants::{check_exponents, conjugate};
use super::{
    check_alpha, const_b, const_b_tilde, const_c_ell, const_c_nu_q,
    reference_strength, BoundMethod, BoundParams, BoundReport, BoundsError, Result,
};
use crate::numerics::{golden_section_max, Upper};
use crate::potentials::RadialPotential;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExistenceMethod {
    PCondition,
    MaxCondition,
}

impl ExistenceMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ExistenceMethod::PCondition => "p_condition",
            ExistenceMethod::MaxCondition => "max_condition",
        }
    }
}

/// Lower limit on the strength at which a first `l`-wave state appears.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExistenceResult {
    pub g_crit: f64,
    pub p_star: Option<f64>,
    pub ell: u32,
    pub method: ExistenceMethod,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMomentumLimit {
    /// Largest `l >= 1` with `C(l, 1) M >= 1`, or 0.
    pub l_plus: u32,
    /// Closed-form cap using `c(1)`.
    pub l_plus_plus: u32,
    /// Closed-form cap with `c(1)` replaced by `c(L)` at the fixed point.
    pub l_plus_plus_iterated: u32,
    /// `s = c(1) M / (alpha sqrt(pi))`.
    pub s_value: f64,
}

const P_MIN: f64 = 1.02;
const P_MAX: f64 = 64.0;

/// Holder bound on the total number of bound states, `n >= 5`.
pub fn bound_total_holder(
    v: &RadialPotential,
    n: u32,
    p: f64,
    pp: f64,
    alpha: u8,
) -> Result<BoundReport> {
    check_alpha(alpha)?;
    check_exponents(p, pp)?;
    if n < 5 {
        return Err(BoundsError::Domain(format!(
            "total Holder bound needs n >= 5, got {n}"
        )));
    }
    let mut params = BoundParams {
        n: Some(n),
        p: Some(p),
        pp: Some(pp),
        ..BoundParams::default()
    };
    if v.support().is_none() {
        return Ok(BoundReport::new(BoundMethod::HolderTotal, 0.0, params, 0.0));
    }
    let series = const_b(n, p, pp, alpha, 1e-10)?;
    params.truncation_index = Some(series.truncation_index);
    let moments = holder_moments(v, n, p, pp)?;
    Ok(BoundReport::new(
        BoundMethod::HolderTotal,
        series.value * moments,
        params,
        series.tail_error * moments,
    ))
}

/// Holder bound on the number of `l`-wave bound states, `n >= 2`.
pub fn bound_lwave_holder(
    v: &RadialPotential,
    ell: u32,
    n: u32,
    p: f64,
    pp: f64,
    alpha: u8,
) -> Result<BoundReport> {
    check_alpha(alpha)?;
    check_exponents(p, pp)?;
    if n < 2 {
        return Err(BoundsError::Domain(format!(
            "partial-wave Holder bound needs n >= 2, got {n}"
        )));
    }
    let params = BoundParams {
        n: Some(n),
        p: Some(p),
        pp: Some(pp),
        ell: Some(ell),
        ..BoundParams::default()
    };
    if v.support().is_none() {
        return Ok(BoundReport::new(BoundMethod::HolderLwave, 0.0, params, 0.0));
    }
    let constant = const_b_tilde(n, ell, p, pp, alpha)?;
    let moments = holder_moments(v, n, p, pp)?;
    let raw = constant * moments;
    Ok(BoundReport::new(BoundMethod::HolderLwave, raw, params, 1e-9 * raw))
}

/// The product of the four radial moments; `pp = inf` takes the limit
/// (maximum of `|V^-|`, weight `r`).
fn holder_moments(v: &RadialPotential, n: u32, p: f64, pp: f64) -> Result<f64> {
    let a = 2.0 * (p - 1.0) / p;
    let f1 = moment(v, |r, w| r.powf(a) * w)?;
    let (f2, f3) = if pp.is_infinite() {
        let vmax = v.moments()?.vmax;
        (vmax, moment(v, |r, w| r * w.powf(p))?.powf(1.0 / p))
    } else {
        let vmax = v.radial_max(|_, w| w);
        let e = p * pp;
        let scaled = moment(v, |_, w| (w / vmax).powf(e))?;
        let b = (pp - 1.0) / pp;
        (vmax * scaled.powf(1.0 / e), moment(v, |r, w| r.powf(b) * w.powf(p))?.powf(1.0 / p))
    };
    let f4 = moment(v, |r, w| r.powf(p - 1.0) * w.powf(p))?.powf((n as f64 - 3.0) / p);
    let product = f1 * f2 * f3 * f4;
    if !product.is_finite() {
        return Err(BoundsError::Divergent("Holder moment product is not finite".into()));
    }
    Ok(product)
}

fn moment(v: &RadialPotential, f: impl Fn(f64, f64) -> f64 + Copy) -> Result<f64> {
    if let Some(support) = v.support() {
        if support.upper == Upper::Infinite {
            v.check_tail(f)?;
        }
    }
    Ok(v.radial_integral(f, 1e-10)?)
}

/// Left side of the existence condition
/// `int (dr/r) [C(l, p/(p-1)) r |V^-(r)|]^p >= 1`.
pub fn existence_condition_p(v: &RadialPotential, ell: u32, p: f64, alpha: u8) -> Result<f64> {
    check_alpha(alpha)?;
    if !(p > 1.0 && p.is_finite()) {
        return Err(BoundsError::Domain(format!("p must be finite and > 1, got {p}")));
    }
    let c = const_c_nu_q(ell, conjugate(p), alpha)?;
    let integral = moment(v, |r, w| r.powf(p - 1.0) * w.powf(p))?;
    Ok(c.powf(p) * integral)
}

/// Critical strength implied by the condition at a single `p`; the left side
/// scales like `g^p`.
fn critical_at_p(v: &RadialPotential, ell: u32, p: f64, alpha: u8) -> Result<f64> {
    let lhs = existence_condition_p(v, ell, p, alpha)?;
    if !(lhs > 0.0) {
        return Err(BoundsError::Domain("potential has no attractive part".into()));
    }
    Ok(reference_strength(v) * lhs.powf(-1.0 / p))
}

/// The existence condition maximised over `p`: a coarse scan of `ln p` over
/// `[ln 1.02, ln 64]` refined by golden-section search. Values of `p` at
/// which a moment diverges are skipped.
pub fn existence_critical_p(v: &RadialPotential, ell: u32, alpha: u8) -> Result<ExistenceResult> {
    check_alpha(alpha)?;
    if v.support().is_none() {
        return Err(BoundsError::Domain("potential has no attractive part".into()));
    }
    let g_of = |ln_p: f64| critical_at_p(v, ell, ln_p.exp(), alpha).unwrap_or(0.0);
    let (a, b) = (P_MIN.ln(), P_MAX.ln());
    let points = 24;
    let grid: Vec<f64> = (0..=points).map(|i| a + (b - a) * i as f64 / points as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&x| g_of(x)).collect();
    let (best, &best_value) = values
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .unwrap();
    if !(best_value > 0.0) {
        return Err(BoundsError::Divergent(
            "existence condition diverges for every p in the search range".into(),
        ));
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(points)];
    let (x, g) = golden_section_max(g_of, lo, hi, 1e-7);
    let (p_star, g_crit) = if g >= best_value {
        (x.exp(), g)
    } else {
        (grid[best].exp(), best_value)
    };
    Ok(ExistenceResult {
        g_crit,
        p_star: Some(p_star),
        ell,
        method: ExistenceMethod::PCondition,
    })
}

/// Critical strength from `C(l, 1) M >= 1` with `M = max r |V^-(r)|`.
pub fn existence_critical_max(v: &RadialPotential, ell: u32, alpha: u8) -> Result<ExistenceResult> {
    check_alpha(alpha)?;
    if ell == 0 {
        return Err(BoundsError::Domain(
            "the maximum condition needs l >= 1: C(0, 1) diverges".into(),
        ));
    }
    let m = v.radial_max(|r, w| r * w);
    if !(m > 0.0) {
        return Err(BoundsError::Domain("potential has no attractive part".into()));
    }
    let c = const_c_nu_q(ell, 1.0, alpha)?;
    Ok(ExistenceResult {
        g_crit: reference_strength(v) / (c * m),
        p_star: None,
        ell,
        method: ExistenceMethod::MaxCondition,
    })
}

fn closed_form_cap(s: f64) -> u32 {
    let l = ((1.0 + 8.0 * s * s).sqrt() - 1.0) / 4.0;
    l.floor().max(0.0) as u32
}

/// Caps on the largest angular momentum that can carry a bound state.
pub fn l_plus(v: &RadialPotential, alpha: u8) -> Result<AngularMomentumLimit> {
    check_alpha(alpha)?;
    let m = v.radial_max(|r, w| r * w);
    let a = f64::from(alpha);
    let s_of = |c: f64| c * m / (a * PI.sqrt());
    let c1 = const_c_ell(1)?;
    let s_value = s_of(c1);
    let l_plus_plus = closed_form_cap(s_value);
    if !(m > 0.0) || l_plus_plus == 0 {
        return Ok(AngularMomentumLimit {
            l_plus: 0,
            l_plus_plus,
            l_plus_plus_iterated: l_plus_plus,
            s_value,
        });
    }

    // C(l, 1) decreases with l, so bisect on [1, L++].
    let passes = |ell: u32| -> Result<bool> { Ok(const_c_nu_q(ell, 1.0, alpha)? * m >= 1.0) };
    let l_plus = if !passes(1)? {
        0
    } else {
        let (mut good, mut bad) = (1u32, l_plus_plus + 1);
        while bad - good > 1 {
            let mid = good + (bad - good) / 2;
            if passes(mid)? {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    };

    // Replace c(1) by c(L) until the cap stops moving; on a 2-cycle keep the
    // larger value.
    let mut current = l_plus_plus;
    let mut previous = u32::MAX;
    for _ in 0..50 {
        let next = closed_form_cap(s_of(const_c_ell(current.max(1))?));
        if next == current {
            break;
        }
        if next == previous {
            current = current.max(next);
            break;
        }
        previous = current;
        current = next;
    }
    Ok(AngularMomentumLimit {
        l_plus,
        l_plus_plus,
        l_plus_plus_iterated: current.max(l_plus),
        s_value,
    })
}

/// Massless central-potential bound `(L+ + 1) Mtilde I / alpha^2`, with the
/// large-coupling form `M Mtilde I / alpha^3` in `params.asymptotic`.
pub fn bound_total_central_ur(v: &RadialPotential, alpha: u8) -> Result<BoundReport> {
    check_alpha(alpha)?;
    if v.support().is_none() {
        let params = BoundParams {
            l_plus: Some(0),
            asymptotic: Some(0.0),
            ..BoundParams::default()
        };
        return Ok(BoundReport::new(BoundMethod::CentralUr, 0.0, params, 0.0));
    }
    let moments = v.moments()?;
    let limit = l_plus(v, alpha)?;
    let a = f64::from(alpha);
    let per_wave = moments.vmax * moments.i_rint / (a * a);
    let raw = (limit.l_plus as f64 + 1.0) * per_wave;
    let params = BoundParams {
        l_plus: Some(limit.l_plus),
        asymptotic: Some(moments.m_rmax * moments.vmax * moments.i_rint / (a * a * a)),
        ..BoundParams::default()
    };
    Ok(BoundReport::new(BoundMethod::CentralUr, raw, params, 1e-9 * raw))
}
