//! Cyclic-trace bounds `N < int |V^-(r_1)| ... |V^-(r_n)| K(r_1, r_2) ... K(r_n, r_1)`.
//!
//! `n = 2` is a nested adaptive quadrature over the triangle `y < x`; longer
//! chains use randomised quasi-Monte Carlo and report `estimate + 3 sigma`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::constants::power_law_tail;
use super::{
    check_alpha, check_mass, reference_strength, BoundMethod, BoundParams, BoundReport,
    BoundsError, Result,
};
use crate::kernels::{q_of_radii, KernelContext, KernelError};
use crate::numerics::{integrate, integrate_nd_vec, QuadratureSpec, Upper};
use crate::potentials::{RadialPotential, Support};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSettings {
    /// Monte Carlo sample budget for chains longer than two.
    pub samples: u64,
    pub seed: u64,
    /// Relative tolerance of the outer quadrature for `n = 2`.
    pub rel_tol: f64,
}

impl Default for TraceSettings {
    fn default() -> Self {
        Self {
            samples: 1 << 20,
            seed: 0,
            rel_tol: 1e-8,
        }
    }
}

/// Partial-wave trace bound with the kernel `T_l`.
pub fn bound_lwave_trace(
    v: &RadialPotential,
    ell: u32,
    m: f64,
    alpha: u8,
    n: u32,
    settings: &TraceSettings,
) -> Result<BoundReport> {
    check_alpha(alpha)?;
    check_mass(m)?;
    if !(2..=8).contains(&n) {
        return Err(BoundsError::Domain(format!(
            "trace bound supports chain lengths 2 to 8, got {n}"
        )));
    }
    let ctx = KernelContext::new(m, alpha, ell)?;
    let mut params = BoundParams {
        n: Some(n),
        ell: Some(ell),
        ..BoundParams::default()
    };
    let Some(support) = v.support() else {
        return Ok(BoundReport::new(BoundMethod::TraceLwave, 0.0, params, 0.0));
    };
    if n == 2 {
        let (value, error) = two_fold_trace(v, &support, |x, y| ctx.kernel_t(x, y), settings.rel_tol)?;
        return Ok(BoundReport::new(BoundMethod::TraceLwave, value, params, error));
    }
    params.samples = Some(settings.samples);
    params.seed = Some(settings.seed);
    let outputs = 1;
    let first_error: OnceLock<KernelError> = OnceLock::new();
    let estimates = chain_monte_carlo(v, &support, n as usize, outputs, settings, |r, out| {
        let mut product = 1.0;
        for i in 0..r.len() {
            match ctx.kernel_t(r[i], r[(i + 1) % r.len()]) {
                Ok(t) => product *= t,
                Err(e) => {
                    let _ = first_error.set(e);
                    return;
                }
            }
        }
        out[0] = product;
    })?;
    if let Some(e) = first_error.into_inner() {
        return Err(e.into());
    }
    let est = estimates[0];
    Ok(BoundReport::new(
        BoundMethod::TraceLwave,
        est.value + 3.0 * est.std_error,
        params,
        3.0 * est.std_error,
    ))
}

/// Total-count trace bound `sum_nu (2 nu + 1) tr(A_nu^n)` for `n >= 4`,
/// with the `nu` series summed to `nu_max` and a fitted power-law remainder.
pub fn bound_total_trace(
    v: &RadialPotential,
    m: f64,
    alpha: u8,
    n: u32,
    nu_max: u32,
    settings: &TraceSettings,
) -> Result<BoundReport> {
    check_alpha(alpha)?;
    check_mass(m)?;
    if !(4..=8).contains(&n) {
        return Err(BoundsError::Domain(format!(
            "total trace bound needs 4 <= n <= 8, got {n}"
        )));
    }
    if nu_max < 8 {
        return Err(BoundsError::Domain(format!("nu_max must be at least 8, got {nu_max}")));
    }
    let params = BoundParams {
        n: Some(n),
        nu_max: Some(nu_max),
        samples: Some(settings.samples),
        seed: Some(settings.seed),
        truncation_index: Some(nu_max),
        ..BoundParams::default()
    };
    let Some(support) = v.support() else {
        return Ok(BoundReport::new(BoundMethod::TraceTotal, 0.0, params, 0.0));
    };
    let waves = nu_max as usize + 1;
    let inv_alpha = 1.0 / f64::from(alpha);
    let estimates = chain_monte_carlo(v, &support, n as usize, waves + 1, settings, |r, out| {
        let mut q = vec![0.0; waves];
        let mut chain = vec![1.0; waves];
        for i in 0..r.len() {
            let (a, b) = (r[i], r[(i + 1) % r.len()]);
            q_sequence(nu_max, a, b, &mut q);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let ratio = lo / hi;
            let mut s = 2.0 * m * lo;
            for nu in 0..waves {
                // S_nu = (2m/(2nu+1)) r_< (r_</r_>)^nu
                let s_nu = if m == 0.0 { 0.0 } else { s / (2.0 * nu as f64 + 1.0) };
                chain[nu] *= (s_nu + q[nu] / PI) * inv_alpha;
                s *= ratio;
            }
        }
        let mut total = 0.0;
        for nu in 0..waves {
            let term = (2.0 * nu as f64 + 1.0) * chain[nu];
            out[nu] = term;
            total += term;
        }
        out[waves] = total;
    })?;
    let terms: Vec<f64> = estimates[..waves].iter().map(|e| e.value).collect();
    let total = estimates[waves];
    let tail_start = waves - 4;
    let decreasing = terms[tail_start..].windows(2).all(|w| w[1] < w[0]);
    let (tail, tail_error, warning) = match (decreasing, power_law_tail(&terms)) {
        (true, Ok((tail, err))) => (tail, err, None),
        (_, Err(e)) => (
            0.0,
            0.0,
            Some(format!("nu series not converged by nu_max = {nu_max}: {e}")),
        ),
        (false, _) => (
            0.0,
            0.0,
            Some(format!("nu terms still increasing at nu_max = {nu_max}")),
        ),
    };
    let sigma3 = 3.0 * total.std_error;
    Ok(BoundReport::new(
        BoundMethod::TraceTotal,
        total.value + tail + sigma3,
        params,
        sigma3 + tail_error,
    )
    .with_warning(warning))
}

/// Bound on the number of `l`-wave states at or below `E = -kappa^2` (or at
/// or below `+kappa^2` for a confining potential): the two-fold trace of the
/// energy-truncated potential.
pub fn bound_below_energy(
    v: &RadialPotential,
    ell: u32,
    m: f64,
    alpha: u8,
    kappa2: f64,
    settings: &TraceSettings,
) -> Result<BoundReport> {
    let truncated = v.truncate_at_energy(kappa2)?;
    let mut report = bound_lwave_trace(&truncated, ell, m, alpha, 2, settings)?;
    report.method = BoundMethod::BelowEnergy;
    report.params.kappa2 = Some(kappa2);
    Ok(report)
}

/// Critical strength from the two-fold trace bound, which is quadratic in
/// the potential.
pub fn critical_trace_lwave(
    v: &RadialPotential,
    ell: u32,
    m: f64,
    alpha: u8,
    settings: &TraceSettings,
) -> Result<f64> {
    let report = bound_lwave_trace(v, ell, m, alpha, 2, settings)?;
    if !(report.raw_bound > 0.0) {
        return Err(BoundsError::Domain("potential has no attractive part".into()));
    }
    Ok(report.critical_strength(reference_strength(v), 2.0))
}

/// `2 int dx |V(x)| int_{lower}^{x} dy |V(y)| K(x, y)^2` for a symmetric `K`.
fn two_fold_trace(
    v: &RadialPotential,
    support: &Support,
    kernel: impl Fn(f64, f64) -> std::result::Result<f64, KernelError>,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    let first_error: OnceLock<BoundsError> = OnceLock::new();
    let inner = |x: f64| -> f64 {
        if x <= support.lower {
            return 0.0;
        }
        let spec = QuadratureSpec::finite(support.lower, x)
            .with_singular_points(support.breakpoints.iter().copied().filter(|&b| b < x))
            .with_rel_tol(rel_tol * 0.1)
            .with_abs_tol(1e-300)
            .with_max_subdivisions(4000);
        let integral = integrate(
            |y| {
                let w = v.negative_part(y);
                if w == 0.0 {
                    return 0.0;
                }
                match kernel(x, y) {
                    Ok(k) => w * k * k,
                    Err(e) => {
                        let _ = first_error.set(e.into());
                        0.0
                    }
                }
            },
            &spec,
        );
        match integral {
            Ok(est) => est.value,
            Err(e) => {
                let _ = first_error.set(e.into());
                0.0
            }
        }
    };
    let spec = QuadratureSpec::new(support.lower, support.upper)
        .with_singular_points(support.breakpoints.iter().copied())
        .with_rel_tol(rel_tol)
        .with_abs_tol(1e-300)
        .with_max_subdivisions(4000);
    let outer = integrate(
        |x| {
            let w = v.negative_part(x);
            if w == 0.0 {
                0.0
            } else {
                w * inner(x)
            }
        },
        &spec,
    )?;
    if let Some(e) = first_error.into_inner() {
        return Err(e);
    }
    let value = 2.0 * outer.value;
    if !value.is_finite() {
        return Err(BoundsError::Divergent("two-fold trace integral is not finite".into()));
    }
    Ok((value, 2.0 * outer.abs_error + rel_tol * value))
}

/// Quasi-Monte Carlo over the `n`-fold product of the support. `f` receives
/// radii and adds kernel-chain values into `out`; the weights
/// `|V^-(r_1)| ... |V^-(r_n)|` are applied here. Coordinates are measured in
/// units of the potential's length scale.
fn chain_monte_carlo<F>(
    v: &RadialPotential,
    support: &Support,
    n: usize,
    outputs: usize,
    settings: &TraceSettings,
    f: F,
) -> Result<Vec<crate::numerics::MCEstimate>>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let scale = v.length_scale();
    let upper = match support.upper {
        Upper::Finite(b) => Upper::Finite(b / scale),
        Upper::Infinite => Upper::Infinite,
    };
    let bounds = vec![(support.lower / scale, upper); n];
    let jacobian = scale.powi(n as i32);
    let estimates = integrate_nd_vec(
        |x, out| {
            let mut weight = jacobian;
            let mut r = [0.0; 8];
            for (ri, &xi) in r.iter_mut().zip(x) {
                *ri = xi * scale;
                weight *= v.negative_part(*ri);
                if weight == 0.0 || !(*ri > 0.0) {
                    return;
                }
            }
            f(&r[..n], out);
            out.iter_mut().for_each(|o| *o *= weight);
        },
        outputs,
        &bounds,
        settings.samples,
        settings.seed,
    )?;
    Ok(estimates)
}

/// `Q_0 .. Q_N` at `t = (r^2 + r'^2)/(2 r r')` by backward recurrence, which
/// is stable for this minimal solution.
pub(crate) fn q_sequence(nu_max: u32, r: f64, rp: f64, out: &mut [f64]) {
    let top = nu_max as usize;
    if r == rp {
        out[..=top].iter_mut().for_each(|q| *q = f64::INFINITY);
        return;
    }
    out[top] = q_of_radii(nu_max, r, rp);
    if top == 0 {
        return;
    }
    out[top - 1] = q_of_radii(nu_max - 1, r, rp);
    if out[top] < 1e-200 {
        for nu in 0..top - 1 {
            out[nu] = q_of_radii(nu as u32, r, rp);
        }
        return;
    }
    let t = (r * r + rp * rp) / (2.0 * r * rp);
    for nu in (1..top).rev() {
        let nf = nu as f64;
        out[nu - 1] = ((2.0 * nf + 1.0) * t * out[nu] - (nf + 1.0) * out[nu + 1]) / nf;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::bessel_k0;

    fn exp_pot(g: f64) -> RadialPotential {
        RadialPotential::exponential(g, 1.0).unwrap()
    }

    fn pt_pot(g: f64) -> RadialPotential {
        RadialPotential::poschl_teller(g, 1.0).unwrap()
    }

    /// The massive S-wave integrand written out with Bessel functions and
    /// integrated over the full quadrant with the diagonal declared.
    fn s_wave_trace_oracle(v: fn(f64) -> f64, beta: f64, alpha: f64) -> f64 {
        let kernel = |x: f64, y: f64| {
            let d = (x - y).abs();
            let s = x + y;
            let bracket = if beta == 0.0 {
                (s / d).ln()
            } else {
                bessel_k0(beta * d).unwrap() - bessel_k0(beta * s).unwrap() + PI * beta * (s - d)
            };
            bracket * bracket
        };
        let outer = QuadratureSpec::new(0.0, Upper::Infinite).with_rel_tol(1e-9);
        let value = integrate(
            |x| {
                let spec = QuadratureSpec::new(0.0, Upper::Infinite)
                    .with_singular_points([x])
                    .with_rel_tol(1e-10)
                    .with_abs_tol(1e-300);
                v(x) * integrate(|y| v(y) * kernel(x, y), &spec).unwrap().value
            },
            &outer,
        )
        .unwrap()
        .value;
        value / (PI * alpha).powi(2)
    }

    #[test]
    fn s_wave_trace_matches_bessel_oracle() {
        let settings = TraceSettings::default();
        for &beta in &[0.0, 1.0, 3.0] {
            let ours = bound_lwave_trace(&exp_pot(1.0), 0, beta, 2, 2, &settings).unwrap();
            let oracle = s_wave_trace_oracle(|x| (-x).exp(), beta, 2.0);
            assert!(((ours.raw_bound - oracle) / oracle).abs() < 1e-6, "beta {beta}");
        }
    }

    #[test]
    fn critical_couplings_of_s_wave_trace() {
        let settings = TraceSettings::default();
        let exp0 = critical_trace_lwave(&exp_pot(1.0), 0, 0.0, 2, &settings).unwrap();
        assert!((exp0 / 4.443 - 1.0).abs() < 5e-3, "{exp0}");
        let pt3 = critical_trace_lwave(&pt_pot(1.0), 0, 3.0, 2, &settings).unwrap();
        assert!((pt3 / 0.6233 - 1.0).abs() < 5e-3, "{pt3}");
    }

    #[test]
    fn quadratic_in_strength() {
        let settings = TraceSettings::default();
        let a = bound_lwave_trace(&exp_pot(1.0), 0, 1.0, 2, 2, &settings).unwrap();
        let b = bound_lwave_trace(&exp_pot(2.0), 0, 1.0, 2, 2, &settings).unwrap();
        assert!((b.raw_bound / a.raw_bound - 4.0).abs() < 1e-7);
    }

    #[test]
    fn massless_scale_invariance() {
        let settings = TraceSettings::default();
        let a = bound_lwave_trace(&pt_pot(3.0), 1, 0.0, 2, 2, &settings).unwrap();
        let wide = RadialPotential::poschl_teller(3.0, 2.0).unwrap();
        let b = bound_lwave_trace(&wide, 1, 0.0, 2, 2, &settings).unwrap();
        assert!((a.raw_bound / b.raw_bound - 1.0).abs() < 1e-6);
    }

    #[test]
    fn zero_potential_gives_zero() {
        let settings = TraceSettings::default();
        let zero = exp_pot(0.0);
        assert_eq!(bound_lwave_trace(&zero, 0, 1.0, 2, 2, &settings).unwrap().raw_bound, 0.0);
        let r = bound_total_trace(&zero, 0.0, 2, 4, 16, &settings).unwrap();
        assert_eq!(r.raw_bound, 0.0);
        assert_eq!(r.implied_count, 0);
    }

    #[test]
    fn backward_recurrence_matches_direct() {
        let mut q = vec![0.0; 31];
        for &(r, rp) in &[(1.0, 1.3), (0.2, 5.0), (1.0, 1.0 + 1e-9), (3.0, 0.01)] {
            q_sequence(30, r, rp, &mut q);
            for nu in 0..=30u32 {
                let direct = q_of_radii(nu, r, rp);
                let err = (q[nu as usize] - direct).abs();
                assert!(err <= 1e-10 * direct.abs() + 1e-300, "nu {nu} r {r} rp {rp}");
            }
        }
    }

    #[test]
    fn three_fold_chain_matches_nested_quadrature() {
        // For a square well the massless three-fold trace can be nested
        // directly; compare to the Monte Carlo estimate.
        let v = RadialPotential::square_well(1.0, 0.5, 1.5).unwrap();
        let settings = TraceSettings {
            samples: 1 << 18,
            seed: 3,
            rel_tol: 1e-8,
        };
        let mc = bound_lwave_trace(&v, 1, 0.0, 2, 3, &settings).unwrap();
        let ctx = KernelContext::new(0.0, 2, 1).unwrap();
        let t = |a: f64, b: f64| ctx.kernel_t(a, b).unwrap();
        let spec = |x: f64, y: f64| {
            QuadratureSpec::finite(0.5, 1.5)
                .with_singular_points([x, y])
                .with_rel_tol(1e-4)
                .with_abs_tol(1e-8)
        };
        let nested = integrate(
            |x| {
                integrate(
                    |y| {
                        t(x, y)
                            * integrate(|z| t(y, z) * t(z, x), &spec(x, y)).unwrap().value
                    },
                    &spec(x, x),
                )
                .unwrap()
                .value
            },
            &QuadratureSpec::finite(0.5, 1.5).with_rel_tol(1e-4),
        )
        .unwrap()
        .value;
        let estimate = mc.raw_bound - mc.err_estimate;
        assert!((estimate - nested).abs() < mc.err_estimate.max(1e-3 * nested), "{mc:?} vs {nested}");
    }

    #[test]
    fn monte_carlo_replay_and_homogeneity() {
        let settings = TraceSettings {
            samples: 1 << 16,
            seed: 9,
            rel_tol: 1e-8,
        };
        let a = bound_total_trace(&exp_pot(1.0), 0.0, 2, 4, 12, &settings).unwrap();
        let b = bound_total_trace(&exp_pot(1.0), 0.0, 2, 4, 12, &settings).unwrap();
        assert_eq!(a.raw_bound.to_bits(), b.raw_bound.to_bits());
        // same points, so every piece of the bound scales exactly like g^4
        let c = bound_total_trace(&exp_pot(2.0), 0.0, 2, 4, 12, &settings).unwrap();
        assert!((c.raw_bound / a.raw_bound - 16.0).abs() < 1e-9);
        assert!(a.raw_bound > 0.0 && a.err_estimate >= 0.0);
    }

    #[test]
    fn below_energy_monotone_in_kappa2() {
        let settings = TraceSettings::default();
        let v = exp_pot(5.0);
        let mut previous = f64::INFINITY;
        for &k2 in &[0.0, 0.1, 0.5, 1.0, 3.0, 4.9, 6.0] {
            let r = bound_below_energy(&v, 0, 0.0, 2, k2, &settings).unwrap();
            assert!(r.raw_bound <= previous * (1.0 + 1e-9), "kappa2 {k2}");
            previous = r.raw_bound;
        }
        assert_eq!(previous, 0.0);

        // a confining potential is truncated at +kappa^2, so the region grows
        let osc = RadialPotential::harmonic_oscillator(1.0).unwrap();
        let mut previous = 0.0;
        for &k2 in &[0.5, 1.0, 2.0, 4.0] {
            let r = bound_below_energy(&osc, 0, 0.0, 1, k2, &settings).unwrap();
            assert!(r.raw_bound >= previous, "kappa2 {k2}");
            previous = r.raw_bound;
        }
    }
}
