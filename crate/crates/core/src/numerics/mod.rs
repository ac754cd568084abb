//! Special functions and integration engines shared by the kernels, the
//! bounds and the variational solver.

mod airy;
mod bessel;
mod hypergeometric;
mod legendre;
mod montecarlo;
mod quadrature;
mod zeta;

pub use airy::{airy_ai, airy_negative_zeros};
pub use bessel::{bessel_k0, bessel_k0_integral, bessel_k1, bessel_k1_integral_f};
pub(crate) use bessel::{k0_unchecked, k1_regular, k1_unchecked};
pub(crate) use legendre::{legendre_p_unchecked, q_ratio_unchecked};
pub use hypergeometric::{hyp2f1_equal_params, hyp2f1_equal_params_complement};
pub use legendre::{legendre_p, legendre_q, legendre_q_ratio};
pub use montecarlo::{integrate_nd, integrate_nd_vec, MCEstimate};
pub use quadrature::{golden_section_max, integrate, QuadEstimate, QuadratureSpec, Upper};
pub use zeta::{hurwitz_zeta, riemann_zeta};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("{function}: argument {value} is outside the domain {domain}")]
    Domain {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error(
        "quadrature did not converge: estimate {estimate:e}, error {error:e} after {subdivisions} subdivisions"
    )]
    NoConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },
    #[error("invalid quadrature setup: {0}")]
    InvalidSpec(String),
}

impl NumericsError {
    pub(crate) fn domain(function: &'static str, value: f64, domain: &'static str) -> Self {
        NumericsError::Domain {
            function,
            value,
            domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, NumericsError>;

/// Natural log of the gamma function for positive arguments.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}
