//! Matrix elements in the basis `phi_i(r) = N_i r^(l+1) exp(-a_i r^2)`.
//!
//! Every element is the overlap `S_ij` times an average over the normalised
//! radial density `(2/Gamma(l+3/2)) x^(2l+2) exp(-x^2)` evaluated at
//! `r = x / sqrt(a_i + a_j)`. The momentum-space transform has the same form
//! with `a -> 1/(4a)` and the same overlap, so the kinetic element is an
//! average of `sqrt(p^2 + m^2) - m` over the same density.

use nalgebra::DMatrix;
use statrs::function::gamma::gamma_lr;

use crate::numerics::ln_gamma;
use crate::potentials::{PotentialForm, RadialPotential};

/// Trapezoid rule in `s = ln x` for averages over the normalised density.
pub(crate) struct DensityRule {
    ell: u32,
    x: Vec<f64>,
    w: Vec<f64>,
}

impl DensityRule {
    pub(crate) fn new(ell: u32) -> Self {
        let l = f64::from(ell);
        let k = 2.0 * l + 3.0;
        let ln_norm = std::f64::consts::LN_2 - ln_gamma(l + 1.5);
        let log_density = |s: f64| ln_norm + k * s - (2.0 * s).exp();
        let peak = 0.5 * (l + 1.5).ln();
        let sigma = 1.0 / (2.0 * k).sqrt();
        // exp(2s) stops decaying at Im s = pi/4, which bounds the step.
        let h = (0.5 * sigma).min(0.12);
        let floor = log_density(peak) - 46.0;
        let mut s_max = peak;
        while log_density(s_max) > floor {
            s_max += h;
        }
        let mut s_min = peak;
        while log_density(s_min) > floor {
            s_min -= h;
        }
        let nodes = ((s_max - s_min) / h).ceil() as usize + 1;
        let mut x = Vec::with_capacity(nodes);
        let mut w = Vec::with_capacity(nodes);
        for i in 0..nodes {
            let s = s_min + h * i as f64;
            x.push(s.exp());
            w.push(h * log_density(s).exp());
        }
        Self { ell, x, w }
    }

    pub(crate) fn ell(&self) -> u32 {
        self.ell
    }

    /// Average of `f(x / sqrt(big_a))` over the density.
    pub(crate) fn average(&self, big_a: f64, f: impl Fn(f64) -> f64) -> f64 {
        let c = 1.0 / big_a.sqrt();
        self.x.iter().zip(&self.w).map(|(&x, &w)| w * f(c * x)).sum()
    }
}

/// Overlap, kinetic and potential matrices for a set of exponents `a_i`.
pub(crate) struct Matrices {
    pub s: DMatrix<f64>,
    pub t: DMatrix<f64>,
    pub v: DMatrix<f64>,
}

pub(crate) fn assemble(
    rule: &DensityRule,
    exponents: &[f64],
    v: &RadialPotential,
    mass: f64,
    alpha: f64,
) -> Matrices {
    let n = exponents.len();
    let l = f64::from(rule.ell());
    let mut s = DMatrix::zeros(n, n);
    let mut t = DMatrix::zeros(n, n);
    let mut w = DMatrix::zeros(n, n);
    let potential = PotentialAverage::new(v);
    let p_mean = (ln_gamma(l + 2.0) - ln_gamma(l + 1.5)).exp();
    for i in 0..n {
        for j in 0..=i {
            let (ai, aj) = (exponents[i], exponents[j]);
            let big_a = ai + aj;
            let overlap = (2.0 * (ai * aj).sqrt() / big_a).powf(l + 1.5);
            let big_ap = 0.25 / ai + 0.25 / aj;
            let kinetic = if mass == 0.0 {
                p_mean / big_ap.sqrt()
            } else {
                rule.average(big_ap, |p| p * p / ((p * p + mass * mass).sqrt() + mass))
            };
            let pot = potential.average(rule, big_a);
            s[(i, j)] = overlap;
            t[(i, j)] = alpha * overlap * kinetic;
            w[(i, j)] = overlap * pot;
            s[(j, i)] = s[(i, j)];
            t[(j, i)] = t[(i, j)];
            w[(j, i)] = w[(i, j)];
        }
    }
    Matrices { s, t, v: w }
}

/// Closed forms where the potential has one, quadrature otherwise.
enum PotentialAverage<'a> {
    Oscillator { k3: f64 },
    Step { depth: f64, r1: f64, r2: f64 },
    Zero,
    General(&'a RadialPotential),
}

impl<'a> PotentialAverage<'a> {
    fn new(v: &'a RadialPotential) -> Self {
        match (v.form(), v.energy()) {
            (PotentialForm::HarmonicOscillator { k }, None) => Self::Oscillator { k3: k * k * k },
            (PotentialForm::SquareWell { v0, r1, r2 }, e) if e.is_none_or(|e| e <= 0.0) => {
                let depth = v0 + e.unwrap_or(0.0);
                if depth > 0.0 {
                    Self::Step {
                        depth,
                        r1: *r1,
                        r2: *r2,
                    }
                } else {
                    Self::Zero
                }
            }
            _ => Self::General(v),
        }
    }

    fn average(&self, rule: &DensityRule, big_a: f64) -> f64 {
        let l = f64::from(rule.ell());
        match self {
            Self::Oscillator { k3 } => k3 * (l + 1.5) / big_a,
            Self::Step { depth, r1, r2 } => {
                let upper = gamma_lr(l + 1.5, big_a * r2 * r2);
                let lower = if *r1 > 0.0 {
                    gamma_lr(l + 1.5, big_a * r1 * r1)
                } else {
                    0.0
                };
                -depth * (upper - lower)
            }
            Self::Zero => 0.0,
            Self::General(v) => rule.average(big_a, |r| v.eval_unchecked(r)),
        }
    }
}
