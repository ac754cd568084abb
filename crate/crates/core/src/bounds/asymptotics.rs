//! Heavy-mass behaviour `beta g_c -> const` of S-wave critical couplings.
//!
//! As `beta -> inf` the kernel `T_0` tends to `S_0 / alpha = 2 beta r_< / alpha`,
//! so the two-fold trace bound gives `beta g_c -> alpha / (2 sqrt(J))` with
//! `J = int int v(x) v(y) min(x, y)^2 = 2 int y^2 v(y) (int_y^inf v) dy`.

use super::{check_alpha, BoundsError, Result};
use crate::numerics::{integrate, QuadratureSpec, Upper};
use crate::potentials::{PotentialForm, RadialPotential};

/// First zero of the Bessel function `J0`.
const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

/// Coefficients `c` in `g_c ~ c / beta`, for the given `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NrAsymptotes {
    /// From the two-fold trace bound.
    pub this_work: f64,
    /// The best previously published nonrelativistic lower limit.
    pub previous_bound: f64,
    /// Exact nonrelativistic critical coupling.
    pub exact: f64,
}

pub fn nr_reference(v: &RadialPotential, alpha: u8) -> Result<NrAsymptotes> {
    check_alpha(alpha)?;
    let half_alpha = f64::from(alpha) / 2.0;
    let (profile, tail, previous, exact): (fn(f64) -> f64, fn(f64) -> f64, f64, f64) = match v.form()
    {
        PotentialForm::Exponential { .. } => (
            |y| (-y).exp(),
            |y| (-y).exp(),
            1.4383,
            J0_FIRST_ZERO * J0_FIRST_ZERO / 4.0,
        ),
        PotentialForm::PoschlTeller { .. } => (
            |y| {
                let c = y.cosh();
                1.0 / (c * c)
            },
            // 1 - tanh(y) without cancellation
            |y| 2.0 / ((2.0 * y).exp() + 1.0),
            1.9910,
            2.0,
        ),
        _ => {
            return Err(BoundsError::Domain(
                "asymptotic reference values exist only for the exponential and Poschl-Teller forms"
                    .into(),
            ))
        }
    };
    let spec = QuadratureSpec::new(0.0, Upper::Infinite).with_rel_tol(1e-12);
    let j = 2.0 * integrate(|y| y * y * profile(y) * tail(y), &spec)?.value;
    Ok(NrAsymptotes {
        this_work: half_alpha * 2.0 / (2.0 * j.sqrt()),
        previous_bound: half_alpha * previous,
        exact: half_alpha * exact,
    })
}
