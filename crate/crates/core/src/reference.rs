//! Published reference values for the exponential and Poschl-Teller test
//! potentials, used by the acceptance suite and the `table` command.
//!
//! All couplings are for the two-body case `alpha = 2`, with `beta = m R`.

/// `(l, c(l))` for the constant in the angular-momentum existence condition.
pub const C_ELL: [(u32, f64); 28] = [
    (1, 3.205),
    (2, 2.795),
    (3, 2.678),
    (4, 2.625),
    (5, 2.596),
    (6, 2.578),
    (7, 2.566),
    (8, 2.557),
    (9, 2.550),
    (10, 2.545),
    (11, 2.541),
    (12, 2.538),
    (13, 2.535),
    (14, 2.533),
    (15, 2.531),
    (16, 2.529),
    (17, 2.528),
    (18, 2.526),
    (19, 2.525),
    (20, 2.524),
    (30, 2.518),
    (40, 2.515),
    (50, 2.513),
    (60, 2.512),
    (70, 2.511),
    (80, 2.511),
    (90, 2.510),
    (100, 2.510),
];

/// S-wave critical couplings against `beta = 0..=5`: the two-fold trace
/// lower limit, the semiclassical-type lower limit and the exact value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SWaveRow {
    pub beta: f64,
    pub g_trace: f64,
    pub g_daubechies: f64,
    pub g_exact: f64,
}

const fn swave(beta: f64, g_trace: f64, g_daubechies: f64, g_exact: f64) -> SWaveRow {
    SWaveRow {
        beta,
        g_trace,
        g_daubechies,
        g_exact,
    }
}

pub const SWAVE_EXPONENTIAL: [SWaveRow; 6] = [
    swave(0.0, 4.443, 4.370, 5.574),
    swave(1.0, 1.223, 0.6574, 1.361),
    swave(2.0, 0.6739, 0.3374, 0.7133),
    swave(3.0, 0.4604, 0.2261, 0.4804),
    swave(4.0, 0.3487, 0.1698, 0.3616),
    swave(5.0, 0.2803, 0.1360, 0.2898),
];

pub const SWAVE_POSCHL_TELLER: [SWaveRow; 6] = [
    swave(0.0, 4.126, 3.886, 5.008),
    swave(1.0, 1.512, 0.8631, 1.742),
    swave(2.0, 0.8912, 0.4582, 0.9598),
    swave(3.0, 0.6233, 0.3092, 0.6549),
    swave(4.0, 0.4769, 0.2329, 0.4956),
    swave(5.0, 0.3854, 0.1867, 0.3981),
];

/// Massless critical couplings for `l = 1..=5`: the existence condition
/// optimised over `p`, the condition with `M = max r |V|`, and the exact value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveRow {
    pub ell: u32,
    pub g_p_condition: f64,
    pub g_max_condition: f64,
    pub g_exact: f64,
}

const fn wave(ell: u32, g_p_condition: f64, g_max_condition: f64, g_exact: f64) -> WaveRow {
    WaveRow {
        ell,
        g_p_condition,
        g_max_condition,
        g_exact,
    }
}

pub const MASSLESS_EXPONENTIAL: [WaveRow; 5] = [
    wave(1, 8.524, 6.922, 10.98),
    wave(2, 13.67, 12.81, 16.39),
    wave(3, 19.03, 18.46, 21.81),
    wave(4, 24.44, 24.02, 27.24),
    wave(5, 29.88, 29.53, 32.67),
];

pub const MASSLESS_POSCHL_TELLER: [WaveRow; 5] = [
    wave(1, 7.437, 5.687, 9.545),
    wave(2, 11.59, 10.53, 14.04),
    wave(3, 15.91, 15.17, 18.52),
    wave(4, 20.30, 19.73, 22.99),
    wave(5, 24.73, 24.27, 27.46),
];

/// Massless angular-momentum caps: `(g, L+, exact L)`.
pub const LMAX_EXPONENTIAL: [(f64, u32, u32); 8] = [
    (10.0, 1, 0),
    (20.0, 3, 2),
    (30.0, 5, 4),
    (40.0, 6, 6),
    (50.0, 8, 8),
    (100.0, 17, 17),
    (150.0, 27, 26),
    (200.0, 36, 35),
];

pub const LMAX_POSCHL_TELLER: [(f64, u32, u32); 8] = [
    (10.0, 1, 1),
    (20.0, 4, 3),
    (30.0, 6, 5),
    (40.0, 8, 7),
    (50.0, 10, 10),
    (100.0, 21, 21),
    (150.0, 33, 32),
    (200.0, 44, 43),
];

/// Zeros of the Airy function: the massless oscillator levels `E_n / k`.
pub const AIRY_LEVELS: [f64; 3] = [2.33811, 4.08795, 5.52056];

/// Heavy-mass coefficients `beta g_c` of the two-fold trace limit.
#[allow(clippy::approx_constant)] // tabulated to four digits
pub const HEAVY_TRACE_EXPONENTIAL: f64 = 1.4142;
pub const HEAVY_TRACE_POSCHL_TELLER: f64 = 1.9663;
/// Heavy-mass coefficients `beta g_c` of the exact critical coupling.
pub const HEAVY_EXACT_EXPONENTIAL: f64 = 1.4458;
pub const HEAVY_EXACT_POSCHL_TELLER: f64 = 2.0;

/// Massless S-wave critical couplings from the existence condition.
pub const SWAVE_EXISTENCE_EXPONENTIAL: f64 = 4.000;
pub const SWAVE_EXISTENCE_POSCHL_TELLER: f64 = 3.685;

/// `R1 / R2` at which the massless square-shell trace limit equals the
/// semiclassical-type limit.
pub const SQUARE_SHELL_CROSSOVER: f64 = 0.4859;

/// `(1 - 2^(-4/3)) zeta(4/3)`, the value that bounds `B(5, 2, 3)`.
pub const B_ZETA_VALUE: f64 = 2.172;
