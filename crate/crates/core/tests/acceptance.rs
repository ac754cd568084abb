//! Acceptance suite: published constants, critical couplings, angular-momentum
//! caps, the oscillator counting check, constant identities, the square-shell
//! crossover, the heavy-mass limits and a set of property checks.
//!
//! Every test prints one `PASS`/`FAIL` line to stderr before asserting.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::io::Write;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rayon::prelude::*;

use salpeter::bounds::{
    bound_below_energy, bound_daubechies, bound_lwave_trace, bound_total_central_ur,
    bound_total_trace, const_b, const_c_ell, const_c_nu_q, critical_daubechies,
    critical_trace_lwave, existence_critical_max, existence_critical_p, l_plus, TraceSettings,
};
use salpeter::kernels::KernelContext;
use salpeter::numerics::{
    airy_negative_zeros, integrate, legendre_p, riemann_zeta, QuadratureSpec,
};
use salpeter::potentials::RadialPotential;
use salpeter::reference::*;
use salpeter::solver::{count_states_below, critical_coupling_exact, l_exact};

fn report(criterion: u32, name: &str, failures: &[String]) {
    let mut err = std::io::stderr();
    if failures.is_empty() {
        let _ = writeln!(err, "criterion {criterion:>2} PASS {name}");
    } else {
        let _ = writeln!(err, "criterion {criterion:>2} FAIL {name}: {}", failures.join("; "));
    }
    assert!(failures.is_empty(), "criterion {criterion} ({name}): {failures:?}");
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn exponential(g: f64) -> RadialPotential {
    RadialPotential::exponential(g, 1.0).unwrap()
}

fn poschl_teller(g: f64) -> RadialPotential {
    RadialPotential::poschl_teller(g, 1.0).unwrap()
}

type Shape = fn(f64) -> RadialPotential;
const SHAPES: [(&str, Shape); 2] = [("exponential", exponential), ("poschl-teller", poschl_teller)];

fn check_rel(failures: &mut Vec<String>, label: String, got: f64, want: f64, tol: f64) {
    if !(rel(got, want) <= tol) {
        failures.push(format!("{label}: {got:.6} vs {want} ({:.3}%)", 100.0 * rel(got, want)));
    }
}

#[test]
fn criterion_01_c_ell_table() {
    let failures: Vec<String> = C_ELL
        .par_iter()
        .filter_map(|&(ell, want)| {
            let got = const_c_ell(ell).unwrap();
            ((got - want).abs() > 0.002).then(|| format!("l {ell}: {got:.5} vs {want}"))
        })
        .collect();
    report(1, "c(l) for all 28 tabulated waves within 0.002", &failures);
}

#[test]
fn criterion_02_s_wave_critical_couplings() {
    let rows: Vec<(&str, Shape, SWaveRow)> = SHAPES
        .iter()
        .flat_map(|&(name, shape)| {
            let table = if name == "exponential" {
                SWAVE_EXPONENTIAL
            } else {
                SWAVE_POSCHL_TELLER
            };
            table.into_iter().map(move |row| (name, shape, row))
        })
        .collect();
    let failures: Vec<String> = rows
        .par_iter()
        .flat_map(|&(name, shape, row)| {
            let v = shape(1.0);
            let mut f = Vec::new();
            let trace = critical_trace_lwave(&v, 0, row.beta, 2, &TraceSettings::default()).unwrap();
            check_rel(&mut f, format!("{name} beta {} trace", row.beta), trace, row.g_trace, 5e-3);
            let daub = critical_daubechies(&v, row.beta, 2).unwrap();
            check_rel(&mut f, format!("{name} beta {} daubechies", row.beta), daub, row.g_daubechies, 5e-3);
            let exact = critical_coupling_exact(&v, 0, row.beta, 2, 1e-3).unwrap().g_c_exact;
            check_rel(&mut f, format!("{name} beta {} exact", row.beta), exact, row.g_exact, 1e-2);
            f
        })
        .collect();
    report(2, "S-wave trace, Daubechies and exact critical couplings", &failures);
}

#[test]
fn criterion_03_massless_higher_waves() {
    let rows: Vec<(&str, Shape, WaveRow)> = SHAPES
        .iter()
        .flat_map(|&(name, shape)| {
            let table = if name == "exponential" {
                MASSLESS_EXPONENTIAL
            } else {
                MASSLESS_POSCHL_TELLER
            };
            table.into_iter().map(move |row| (name, shape, row))
        })
        .collect();
    let failures: Vec<String> = rows
        .par_iter()
        .flat_map(|&(name, shape, row)| {
            let v = shape(1.0);
            let l = row.ell;
            let mut f = Vec::new();
            let p = existence_critical_p(&v, l, 2).unwrap().g_crit;
            check_rel(&mut f, format!("{name} l {l} p-condition"), p, row.g_p_condition, 1e-2);
            let max = existence_critical_max(&v, l, 2).unwrap().g_crit;
            check_rel(&mut f, format!("{name} l {l} max-condition"), max, row.g_max_condition, 5e-3);
            let exact = critical_coupling_exact(&v, l, 0.0, 2, 1e-3).unwrap().g_c_exact;
            check_rel(&mut f, format!("{name} l {l} exact"), exact, row.g_exact, 1e-2);
            f
        })
        .collect();
    report(3, "massless l = 1..5 existence limits and exact couplings", &failures);
}

#[test]
fn criterion_04_angular_momentum_caps() {
    let rows: Vec<(&str, Shape, (f64, u32, u32))> = SHAPES
        .iter()
        .flat_map(|&(name, shape)| {
            let table = if name == "exponential" {
                LMAX_EXPONENTIAL
            } else {
                LMAX_POSCHL_TELLER
            };
            table.into_iter().map(move |row| (name, shape, row))
        })
        .collect();
    let failures: Vec<String> = rows
        .par_iter()
        .flat_map(|&(name, shape, (g, want_plus, want_exact))| {
            let mut f = Vec::new();
            let plus = l_plus(&shape(g), 2).unwrap().l_plus;
            if plus != want_plus {
                f.push(format!("{name} g {g}: L+ {plus} vs {want_plus}"));
            }
            let exact = l_exact(&shape(1.0), g, 0.0, 2).unwrap();
            if exact != Some(want_exact) {
                f.push(format!("{name} g {g}: L {exact:?} vs {want_exact}"));
            }
            f
        })
        .collect();
    report(4, "L+ and exact L for both potentials", &failures);
}

#[test]
fn criterion_05_s_wave_existence_constants() {
    let mut f = Vec::new();
    let e = existence_critical_p(&exponential(1.0), 0, 2).unwrap().g_crit;
    check_rel(&mut f, "exponential".into(), e, SWAVE_EXISTENCE_EXPONENTIAL, 2e-3);
    let p = existence_critical_p(&poschl_teller(1.0), 0, 2).unwrap().g_crit;
    check_rel(&mut f, "poschl-teller".into(), p, SWAVE_EXISTENCE_POSCHL_TELLER, 2e-3);
    report(5, "massless S-wave existence limits", &f);
}

#[test]
fn criterion_06_oscillator_below_energy() {
    let osc = RadialPotential::harmonic_oscillator(1.0).unwrap();
    let levels = airy_negative_zeros(3).unwrap();
    let mut f = Vec::new();
    let mut implied = Vec::new();
    let mut exact = Vec::new();
    for &e in &levels {
        implied.push(
            bound_below_energy(&osc, 0, 0.0, 1, e, &TraceSettings::default())
                .unwrap()
                .implied_count,
        );
        exact.push(count_states_below(&osc, 0, 0.0, 1, e).unwrap());
    }
    if implied != [1, 8, 21] {
        f.push(format!("implied counts {implied:?}"));
    }
    if exact != [0, 1, 2] {
        f.push(format!("exact counts {exact:?}"));
    }
    report(6, "oscillator counts below the first three levels", &f);
}

#[test]
fn criterion_07_constant_identities() {
    let mut f: Vec<String> = (0u32..=100)
        .into_par_iter()
        .flat_map(|nu| {
            [1u8, 2]
                .into_iter()
                .filter_map(|alpha| {
                    let c = const_c_nu_q(nu, 2.0, alpha).unwrap();
                    let exact = 1.0 / (f64::from(alpha) * (2.0 * f64::from(nu) + 1.0).sqrt());
                    (rel(c, exact) > 1e-6).then(|| format!("nu {nu} alpha {alpha}: {c} vs {exact}"))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let zeta_value = (1.0 - 2f64.powf(-4.0 / 3.0)) * riemann_zeta(4.0 / 3.0).unwrap();
    if (zeta_value - B_ZETA_VALUE).abs() > 5e-3 {
        f.push(format!("zeta value {zeta_value}"));
    }
    let b = const_b(5, 2.0, 3.0, 1, 1e-10).unwrap().value;
    if b > B_ZETA_VALUE {
        f.push(format!("B(5,2,3) = {b}"));
    }
    report(7, "square-integral identity, B(5,2,3) and its zeta bound", &f);
}

#[test]
fn criterion_08_square_shell_crossover() {
    // Large-coupling central bound minus the Daubechies bound, both cubic in V0.
    let gap = |ratio: f64| {
        let v = RadialPotential::square_well(1.0, ratio, 1.0).unwrap();
        let central = bound_total_central_ur(&v, 2).unwrap().params.asymptotic.unwrap();
        let daub = bound_daubechies(&v, 0.0, 2).unwrap().raw_bound;
        central - daub
    };
    let (mut lo, mut hi) = (0.1, 0.9);
    let mut f = Vec::new();
    if !(gap(lo) > 0.0 && gap(hi) < 0.0) {
        f.push(format!("no sign change: {} {}", gap(lo), gap(hi)));
    } else {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if gap(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        check_rel(&mut f, "crossover".into(), 0.5 * (lo + hi), SQUARE_SHELL_CROSSOVER, 1e-2);
    }
    report(8, "square-shell crossover of the central and Daubechies bounds", &f);
}

#[test]
fn criterion_09_heavy_mass_limit() {
    let beta = 50.0;
    let cases = [
        ("exponential", exponential as Shape, HEAVY_TRACE_EXPONENTIAL, HEAVY_EXACT_EXPONENTIAL),
        ("poschl-teller", poschl_teller as Shape, HEAVY_TRACE_POSCHL_TELLER, HEAVY_EXACT_POSCHL_TELLER),
    ];
    let failures: Vec<String> = cases
        .par_iter()
        .flat_map(|&(name, shape, want_trace, want_exact)| {
            let v = shape(1.0);
            let mut f = Vec::new();
            let trace = critical_trace_lwave(&v, 0, beta, 2, &TraceSettings::default()).unwrap();
            check_rel(&mut f, format!("{name} trace"), beta * trace, want_trace, 2e-2);
            let exact = critical_coupling_exact(&v, 0, beta, 2, 1e-3).unwrap().g_c_exact;
            check_rel(&mut f, format!("{name} exact"), beta * exact, want_exact, 2e-2);
            f
        })
        .collect();
    report(9, "beta g_c at beta = 50", &failures);
}

/// Runs a property over random cases and records the first failure.
fn property<S: Strategy>(
    failures: &mut Vec<String>,
    name: &str,
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) {
    let mut runner = TestRunner::new(Config {
        cases,
        ..Config::default()
    });
    if let Err(e) = runner.run(&strategy, test) {
        failures.push(format!("{name}: {e}"));
    }
}

/// Radial Fourier inversion of `1/(sqrt(p^2+m^2) - m)`, with the alternating
/// tail of half-period pieces removed by repeated averaging.
fn green_fourier(m: f64, delta: f64) -> f64 {
    let h = |p: f64| {
        if p == 0.0 {
            return 0.0;
        }
        (p * delta).sin() * m * m / (p * ((p * p + m * m).sqrt() + p))
    };
    let half = PI / delta;
    let mut partial = Vec::new();
    let mut sum = 0.0;
    for k in 0..400 {
        let spec = QuadratureSpec::finite(k as f64 * half, (k + 1) as f64 * half)
            .with_rel_tol(1e-13)
            .with_abs_tol(1e-16);
        sum += integrate(h, &spec).unwrap().value;
        partial.push(sum);
    }
    let mut level: Vec<f64> = partial[partial.len() - 40..].to_vec();
    while level.len() > 1 {
        level = level.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    (1.0 / delta + m * PI / 2.0 + level[0]) / (2.0 * PI * PI * delta)
}

/// `int_{|r-r'|}^{r+r'} P_l((r^2 + r'^2 - y^2) / (2 r r')) dy / y`.
fn massless_wave_integral(l: u32, r: f64, rp: f64) -> f64 {
    let scale = ((r + rp) / (r - rp).abs()).ln();
    let spec = QuadratureSpec::finite((r - rp).abs(), r + rp)
        .with_rel_tol(1e-11)
        .with_abs_tol(1e-12 * scale);
    integrate(
        |y| legendre_p(l, ((r * r + rp * rp - y * y) / (2.0 * r * rp)).clamp(-1.0, 1.0)).unwrap() / y,
        &spec,
    )
    .unwrap()
    .value
}

#[test]
fn criterion_10_property_suites() {
    let mut f = Vec::new();

    property(&mut f, "green majorization", 64, (0.01f64..10.0, 0.01f64..10.0), |(m, d)| {
        let c = KernelContext::new(m, 1, 0).unwrap();
        let (g, g1, g2) = (c.green(d).unwrap(), c.green_g1(d).unwrap(), c.green_g2(d).unwrap());
        prop_assert!(0.0 < g && g <= g1 * (1.0 + 1e-12) && g1 <= g2 * (1.0 + 1e-12));
        Ok(())
    });

    property(
        &mut f,
        "kernel symmetry",
        64,
        (0u32..6, 0.0f64..3.0, 0.05f64..5.0, 0.05f64..5.0),
        |(l, m, r, rp)| {
            prop_assume!((r - rp).abs() > 1e-6);
            let c = KernelContext::new(m, 2, l).unwrap();
            let (t1, t2) = (c.kernel_t(r, rp).unwrap(), c.kernel_t(rp, r).unwrap());
            prop_assert!((t1 - t2).abs() <= 1e-10 * t1.abs());
            let (a1, a2) = (c.partial_wave_a(r, rp).unwrap(), c.partial_wave_a(rp, r).unwrap());
            prop_assert!((a1 - a2).abs() <= 1e-10 * a1.abs());
            Ok(())
        },
    );

    property(
        &mut f,
        "massless T equals A",
        32,
        (0u32..8, prop_oneof![Just(1u8), Just(2u8)], 0.05f64..5.0, 0.05f64..5.0),
        |(l, alpha, r, rp)| {
            prop_assume!((r - rp).abs() > 1e-3);
            let c = KernelContext::new(0.0, alpha, l).unwrap();
            let t = c.kernel_t(r, rp).unwrap();
            let a = c.partial_wave_a(r, rp).unwrap();
            let norm = PI * f64::from(alpha);
            let oracle = massless_wave_integral(l, r, rp) / norm;
            // The integral cancels for small radius ratios, so the tolerance
            // follows the integral of |P_l| / y.
            let scale = ((r + rp) / (r - rp).abs()).ln() / norm;
            prop_assert!((t - a).abs() <= 1e-12 * a.abs());
            prop_assert!((t - oracle).abs() <= 1e-9 * scale, "{} vs {}", t, oracle);
            Ok(())
        },
    );

    for &(m, d) in &[(1.0, 1.0), (0.5, 0.3), (2.0, 1.5), (1.0, 0.05), (3.0, 2.0)] {
        let g = KernelContext::new(m, 1, 0).unwrap().green(d).unwrap();
        let oracle = green_fourier(m, d);
        if rel(g, oracle) > 1e-4 {
            f.push(format!("green m {m} d {d}: {g} vs {oracle}"));
        }
    }

    // Validity: the implied count never falls below the exact count.
    let wells: [(&str, Shape); 3] = [
        ("exponential", exponential),
        ("poschl-teller", poschl_teller),
        ("square well", |g| RadialPotential::square_well(g, 0.0, 1.0).unwrap()),
    ];
    let grid: Vec<(&str, Shape, f64, u32)> = wells
        .iter()
        .flat_map(|&(name, shape)| {
            [2.0, 8.0, 30.0]
                .into_iter()
                .flat_map(move |g| [0u32, 1].into_iter().map(move |l| (name, shape, g, l)))
        })
        .collect();
    let validity: Vec<String> = grid
        .par_iter()
        .filter_map(|&(name, shape, g, l)| {
            let v = shape(g);
            let beta = 1.0;
            let implied = bound_lwave_trace(&v, l, beta, 2, 2, &TraceSettings::default())
                .unwrap()
                .implied_count;
            let exact = count_states_below(&v, l, beta, 2, 0.0).unwrap() as u64;
            (implied < exact).then(|| format!("{name} g {g} l {l}: bound {implied} < exact {exact}"))
        })
        .collect();
    f.extend(validity);

    // Homogeneity and replay with a fixed seed.
    let settings = TraceSettings {
        samples: 1 << 15,
        seed: 17,
        rel_tol: 1e-8,
    };
    for (name, shape) in SHAPES {
        let two = |g: f64| bound_lwave_trace(&shape(g), 1, 0.5, 2, 2, &settings).unwrap().raw_bound;
        if rel(two(3.0) / two(1.0), 9.0) > 1e-6 {
            f.push(format!("{name}: two-fold trace not quadratic"));
        }
        let three = |g: f64| bound_lwave_trace(&shape(g), 0, 1.0, 2, 3, &settings).unwrap();
        let (a, b) = (three(1.0), three(2.0));
        if rel(b.raw_bound / a.raw_bound, 8.0) > 1e-9 {
            f.push(format!("{name}: three-fold trace not cubic"));
        }
        if three(1.0).raw_bound.to_bits() != a.raw_bound.to_bits() {
            f.push(format!("{name}: three-fold trace not replayed"));
        }
        let total = |g: f64| bound_total_trace(&shape(g), 0.0, 2, 4, 10, &settings).unwrap();
        let (a, b) = (total(1.0), total(2.0));
        if rel(b.raw_bound / a.raw_bound, 16.0) > 1e-9 {
            f.push(format!("{name}: total trace not quartic"));
        }
        if total(1.0).raw_bound.to_bits() != a.raw_bound.to_bits() || !(a.raw_bound > 0.0) {
            f.push(format!("{name}: total trace not replayed or not positive"));
        }
        let other = bound_total_trace(&shape(1.0), 0.0, 2, 4, 10, &TraceSettings { seed: 18, ..settings })
            .unwrap();
        if other.raw_bound == a.raw_bound {
            f.push(format!("{name}: seed has no effect"));
        }
    }

    report(10, "kernel, validity, homogeneity and replay properties", &f);
}
