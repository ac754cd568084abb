//! Upper limits on bound-state counts, the constants they use, existence
//! conditions for the first bound state and caps on the angular momentum.
//!
//! Every counting bound returns a [`BoundReport`] whose `raw_bound` is the
//! right-hand side of a strict inequality `N < raw_bound`.

mod asymptotics;
mod constants;
mod daubechies;
mod trace;
mod ultrarelativistic;

pub use asymptotics::{nr_reference, NrAsymptotes};
pub use constants::{const_b, const_b_tilde, const_c_ell, const_c_nu_q, gamma_ratio, SeriesSum};
pub use daubechies::{bound_daubechies, critical_daubechies};
pub use trace::{
    bound_below_energy, bound_lwave_trace, bound_total_trace, critical_trace_lwave, TraceSettings,
};
pub use ultrarelativistic::{
    bound_lwave_holder, bound_total_central_ur, bound_total_holder, existence_condition_p,
    existence_critical_max, existence_critical_p, l_plus, AngularMomentumLimit, ExistenceMethod,
    ExistenceResult,
};

use crate::kernels::KernelError;
use crate::numerics::NumericsError;
use crate::potentials::{PotentialError, RadialPotential};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error("{0}")]
    Domain(String),
    #[error("divergent: {0}")]
    Divergent(String),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, BoundsError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundMethod {
    TraceTotal,
    TraceLwave,
    HolderTotal,
    HolderLwave,
    CentralUr,
    Daubechies,
    BelowEnergy,
}

impl BoundMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundMethod::TraceTotal => "trace_total",
            BoundMethod::TraceLwave => "trace_lwave",
            BoundMethod::HolderTotal => "holder_total",
            BoundMethod::HolderLwave => "holder_lwave",
            BoundMethod::CentralUr => "central_ur",
            BoundMethod::Daubechies => "daubechies",
            BoundMethod::BelowEnergy => "below_energy",
        }
    }
}

impl std::fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Settings a bound was computed with; unused entries stay `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundParams {
    pub n: Option<u32>,
    pub p: Option<f64>,
    pub pp: Option<f64>,
    pub ell: Option<u32>,
    pub nu_max: Option<u32>,
    pub kappa2: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    /// Last explicitly summed wave of a `nu` series.
    pub truncation_index: Option<u32>,
    /// Angular-momentum cap used by the central bound.
    pub l_plus: Option<u32>,
    /// Large-coupling form of the central bound.
    pub asymptotic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub method: BoundMethod,
    /// Right-hand side of `N < raw_bound`.
    pub raw_bound: f64,
    /// Largest integer strictly below `raw_bound`, and never negative.
    pub implied_count: u64,
    pub params: BoundParams,
    pub err_estimate: f64,
    pub warning: Option<String>,
}

impl BoundReport {
    pub fn new(method: BoundMethod, raw_bound: f64, params: BoundParams, err_estimate: f64) -> Self {
        Self {
            method,
            raw_bound,
            implied_count: implied_count(raw_bound),
            params,
            err_estimate,
            warning: None,
        }
    }

    fn with_warning(mut self, warning: Option<String>) -> Self {
        self.warning = warning;
        self
    }

    /// Strength at which a bound homogeneous of degree `power` in the
    /// potential equals one, given the strength it was evaluated at.
    pub fn critical_strength(&self, strength: f64, power: f64) -> f64 {
        strength * self.raw_bound.powf(-1.0 / power)
    }
}

/// `ceil(raw) - 1` for non-integers and `raw - 1` for integers, clamped at 0:
/// the number of states allowed by the strict inequality `N < raw`.
pub fn implied_count(raw_bound: f64) -> u64 {
    if !(raw_bound > 0.0) {
        return 0;
    }
    if raw_bound >= u64::MAX as f64 {
        return u64::MAX;
    }
    (raw_bound.ceil() - 1.0).max(0.0) as u64
}

/// Strength `g` of the potential, or 1 for forms without one; critical
/// values of such forms are multipliers on the potential as given.
pub(crate) fn reference_strength(v: &RadialPotential) -> f64 {
    v.strength().unwrap_or(1.0)
}

pub(crate) fn check_alpha(alpha: u8) -> Result<()> {
    if alpha == 1 || alpha == 2 {
        Ok(())
    } else {
        Err(BoundsError::Domain(format!("alpha must be 1 or 2, got {alpha}")))
    }
}

pub(crate) fn check_mass(m: f64) -> Result<()> {
    if m >= 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(BoundsError::Domain(format!("mass must be finite and >= 0, got {m}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn strict_integer_semantics() {
        assert_eq!(implied_count(0.0), 0);
        assert_eq!(implied_count(0.3), 0);
        assert_eq!(implied_count(1.0), 0);
        assert_eq!(implied_count(1.0001), 1);
        assert_eq!(implied_count(3.0), 2);
        assert_eq!(implied_count(7.5), 7);
        assert_eq!(implied_count(f64::NAN), 0);
    }

    #[test]
    fn critical_strength_of_quadratic_bound() {
        let report = BoundReport::new(BoundMethod::TraceLwave, 4.0, BoundParams::default(), 0.0);
        assert_eq!(report.critical_strength(3.0, 2.0), 1.5);
    }

    proptest! {
        #[test]
        fn implied_count_contract(raw in 0.0f64..1e6) {
            let k = implied_count(raw);
            if raw > 1.0 {
                prop_assert!(k >= 1);
            }
            if raw > 0.0 && raw <= 1.0 {
                prop_assert_eq!(k, 0);
            }
            prop_assert!((k as f64) < raw.max(1.0));
            prop_assert!((k as f64) + 1.0 >= raw);
        }
    }
}
