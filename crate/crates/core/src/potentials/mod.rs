//! Central potentials, their attractive parts, energy-truncated variants and
//! the radial moments consumed by the bounds.
//!
//! Natural units throughout: lengths are inverse energies, and for the
//! `-g v(r/R) / R` family the strength `g` is dimensionless.

mod tabulated;

pub use tabulated::Tabulated;

use crate::numerics::{golden_section_max, integrate, NumericsError, QuadratureSpec, Upper};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PotentialError {
    #[error("invalid potential parameter: {0}")]
    InvalidParameter(String),
    #[error("radius {0} is negative")]
    NegativeRadius(f64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("radial integral diverges: {0}")]
    Divergent(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, PotentialError>;

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialForm {
    /// `-(g/R) exp(-r/R)`
    Exponential { g: f64, range: f64 },
    /// `-(g/R) / cosh^2(r/R)`
    PoschlTeller { g: f64, range: f64 },
    /// `-V0` on `R1 <= r <= R2`, zero elsewhere.
    SquareWell { v0: f64, r1: f64, r2: f64 },
    /// `k^3 r^2`
    HarmonicOscillator { k: f64 },
    Tabulated(Tabulated),
}

/// A central potential, optionally truncated at an energy `E`:
/// `V_E(r) = min(V(r) - E, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPotential {
    form: PotentialForm,
    energy: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialMoments {
    /// `max_r r |V^-(r)|`, dimensionless.
    pub m_rmax: f64,
    /// `max_r |V^-(r)|`, an energy.
    pub vmax: f64,
    /// `int_0^inf r |V^-(r)| dr`, an inverse energy.
    pub i_rint: f64,
}

/// Where `|V^-|` can be non-zero, with the abscissae at which it is not smooth.
#[derive(Debug, Clone, PartialEq)]
pub struct Support {
    pub lower: f64,
    pub upper: Upper,
    pub breakpoints: Vec<f64>,
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(PotentialError::InvalidParameter(format!("{name} must be positive, got {value}")))
    }
}

fn check_strength(g: f64) -> Result<()> {
    if g >= 0.0 && g.is_finite() {
        Ok(())
    } else {
        Err(PotentialError::InvalidParameter(format!("strength must be >= 0, got {g}")))
    }
}

impl RadialPotential {
    pub fn exponential(g: f64, range: f64) -> Result<Self> {
        check_strength(g)?;
        check_positive("range", range)?;
        Ok(Self::from_form(PotentialForm::Exponential { g, range }))
    }

    pub fn poschl_teller(g: f64, range: f64) -> Result<Self> {
        check_strength(g)?;
        check_positive("range", range)?;
        Ok(Self::from_form(PotentialForm::PoschlTeller { g, range }))
    }

    pub fn square_well(v0: f64, r1: f64, r2: f64) -> Result<Self> {
        check_positive("V0", v0)?;
        if !(r1 >= 0.0 && r2 >= r1 && r2.is_finite()) {
            return Err(PotentialError::InvalidParameter(format!(
                "square well radii need 0 <= R1 <= R2, got R1 = {r1}, R2 = {r2}"
            )));
        }
        Ok(Self::from_form(PotentialForm::SquareWell { v0, r1, r2 }))
    }

    pub fn harmonic_oscillator(k: f64) -> Result<Self> {
        check_positive("k", k)?;
        Ok(Self::from_form(PotentialForm::HarmonicOscillator { k }))
    }

    pub fn tabulated(table: Tabulated) -> Self {
        Self::from_form(PotentialForm::Tabulated(table))
    }

    fn from_form(form: PotentialForm) -> Self {
        Self { form, energy: None }
    }

    pub fn form(&self) -> &PotentialForm {
        &self.form
    }

    /// Truncation energy, if any.
    pub fn energy(&self) -> Option<f64> {
        self.energy
    }

    /// Confining potentials grow without bound, so their spectrum is purely
    /// discrete and positive energies are meaningful truncation points.
    pub fn is_confining(&self) -> bool {
        matches!(self.form, PotentialForm::HarmonicOscillator { .. })
    }

    /// Strength `g` of the `-g v(r/R)/R` family, `None` for other forms.
    pub fn strength(&self) -> Option<f64> {
        match self.form {
            PotentialForm::Exponential { g, .. } | PotentialForm::PoschlTeller { g, .. } => Some(g),
            _ => None,
        }
    }

    pub fn range(&self) -> Option<f64> {
        match self.form {
            PotentialForm::Exponential { range, .. } | PotentialForm::PoschlTeller { range, .. } => {
                Some(range)
            }
            _ => None,
        }
    }

    /// Characteristic length used to lay out search grids.
    pub fn length_scale(&self) -> f64 {
        match &self.form {
            PotentialForm::Exponential { range, .. } | PotentialForm::PoschlTeller { range, .. } => {
                *range
            }
            PotentialForm::SquareWell { r2, .. } => r2.max(f64::MIN_POSITIVE),
            PotentialForm::HarmonicOscillator { k } => 1.0 / k,
            PotentialForm::Tabulated(t) => *t.radii().last().unwrap(),
        }
    }

    /// The same shape with `V` multiplied by `factor >= 0`. Truncation is kept.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        check_strength(factor)?;
        let form = match &self.form {
            PotentialForm::Exponential { g, range } => PotentialForm::Exponential {
                g: g * factor,
                range: *range,
            },
            PotentialForm::PoschlTeller { g, range } => PotentialForm::PoschlTeller {
                g: g * factor,
                range: *range,
            },
            PotentialForm::SquareWell { v0, r1, r2 } => PotentialForm::SquareWell {
                v0: v0 * factor,
                r1: *r1,
                r2: *r2,
            },
            PotentialForm::HarmonicOscillator { k } => PotentialForm::HarmonicOscillator {
                k: k * factor.cbrt(),
            },
            PotentialForm::Tabulated(t) => {
                let samples: Vec<(f64, f64)> = t
                    .radii()
                    .iter()
                    .zip(t.values())
                    .map(|(&r, &v)| (r, v * factor))
                    .collect();
                PotentialForm::Tabulated(Tabulated::new(&samples)?)
            }
        };
        Ok(Self {
            form,
            energy: self.energy,
        })
    }

    /// `V(r)`, or `V_kappa(r)` for a truncated potential.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(PotentialError::NegativeRadius(r));
        }
        Ok(self.eval_unchecked(r))
    }

    pub(crate) fn eval_unchecked(&self, r: f64) -> f64 {
        let base = self.base(r);
        match self.energy {
            Some(e) => (base - e).min(0.0),
            None => base,
        }
    }

    fn base(&self, r: f64) -> f64 {
        match &self.form {
            PotentialForm::Exponential { g, range } => -(g / range) * (-r / range).exp(),
            PotentialForm::PoschlTeller { g, range } => {
                let c = (r / range).cosh();
                if c.is_finite() {
                    -(g / range) / (c * c)
                } else {
                    0.0
                }
            }
            PotentialForm::SquareWell { v0, r1, r2 } => {
                if r >= *r1 && r <= *r2 {
                    -v0
                } else {
                    0.0
                }
            }
            PotentialForm::HarmonicOscillator { k } => k * k * k * r * r,
            PotentialForm::Tabulated(t) => t.eval(r),
        }
    }

    /// `|V^-(r)| = max(0, -V(r))`; zero for negative radii.
    pub fn negative_part(&self, r: f64) -> f64 {
        if !(r >= 0.0) {
            return 0.0;
        }
        (-self.eval_unchecked(r)).max(0.0)
    }

    /// `V_kappa = min(V + kappa^2, 0)`, the comparison potential for states at
    /// or below `E = -kappa^2`.
    ///
    /// A confining potential has only positive eigenvalues, so there
    /// `kappa^2` is read as the positive energy itself: `|V_kappa| =
    /// max(0, kappa^2 - V)`.
    pub fn truncate_at_energy(&self, kappa2: f64) -> Result<Self> {
        if !(kappa2 >= 0.0 && kappa2.is_finite()) {
            return Err(PotentialError::InvalidParameter(format!(
                "kappa^2 must be >= 0, got {kappa2}"
            )));
        }
        let energy = if self.is_confining() { kappa2 } else { -kappa2 };
        self.truncate_below(energy)
    }

    /// `V_E = min(V - E, 0)`. Positive `E` is only accepted for confining
    /// potentials; elsewhere it would leave an attractive region of infinite
    /// extent.
    pub fn truncate_below(&self, energy: f64) -> Result<Self> {
        if !energy.is_finite() || (energy > 0.0 && !self.is_confining()) {
            return Err(PotentialError::InvalidParameter(format!(
                "truncation energy {energy} must be finite and <= 0 for this potential"
            )));
        }
        if self.energy.is_some() {
            return Err(PotentialError::InvalidParameter(
                "potential is already truncated".into(),
            ));
        }
        Ok(Self {
            form: self.form.clone(),
            energy: Some(energy),
        })
    }

    /// Region carrying `|V^-|`, or `None` when the potential has no
    /// attractive part.
    pub fn support(&self) -> Option<Support> {
        // V_E < 0 where V < E; k2 = -E is the depth the well must exceed.
        let k2 = -self.energy.unwrap_or(0.0);
        let finite = |lower: f64, upper: f64, breakpoints: Vec<f64>| {
            (upper > lower).then_some(Support {
                lower,
                upper: Upper::Finite(upper),
                breakpoints,
            })
        };
        match &self.form {
            PotentialForm::Exponential { g, range } => {
                let depth = g / range;
                if depth <= 0.0 || depth <= k2 {
                    None
                } else if k2 == 0.0 {
                    Some(Support {
                        lower: 0.0,
                        upper: Upper::Infinite,
                        breakpoints: vec![],
                    })
                } else {
                    finite(0.0, range * (depth / k2).ln(), vec![])
                }
            }
            PotentialForm::PoschlTeller { g, range } => {
                let depth = g / range;
                if depth <= 0.0 || depth <= k2 {
                    None
                } else if k2 == 0.0 {
                    Some(Support {
                        lower: 0.0,
                        upper: Upper::Infinite,
                        breakpoints: vec![],
                    })
                } else {
                    finite(0.0, range * (depth / k2).sqrt().acosh(), vec![])
                }
            }
            PotentialForm::SquareWell { v0, r1, r2 } => {
                if *v0 <= k2 {
                    None
                } else {
                    finite(*r1, *r2, vec![])
                }
            }
            PotentialForm::HarmonicOscillator { k } => {
                if k2 >= 0.0 {
                    None
                } else {
                    finite(0.0, (-k2).sqrt() / k.powf(1.5), vec![])
                }
            }
            PotentialForm::Tabulated(t) => {
                let radii = t.radii();
                let last = *radii.last().unwrap();
                if radii.iter().all(|&r| self.negative_part(r) == 0.0)
                    && t.values().iter().all(|&v| v + k2 >= 0.0)
                {
                    return None;
                }
                let interior: Vec<f64> = radii.iter().copied().filter(|&r| r > 0.0 && r < last).collect();
                finite(0.0, last, interior)
            }
        }
    }

    /// `int f(r, |V^-(r)|) dr` over the attractive region.
    pub fn radial_integral(
        &self,
        f: impl Fn(f64, f64) -> f64,
        rel_tol: f64,
    ) -> Result<f64> {
        let Some(support) = self.support() else {
            return Ok(0.0);
        };
        let spec = QuadratureSpec::new(support.lower, support.upper)
            .with_singular_points(support.breakpoints.iter().copied())
            .with_rel_tol(rel_tol)
            .with_abs_tol(1e-300)
            .with_max_subdivisions(4000);
        let value = integrate(
            |r| {
                let v = self.negative_part(r);
                if v == 0.0 {
                    0.0
                } else {
                    f(r, v)
                }
            },
            &spec,
        )?
        .value;
        if !value.is_finite() {
            return Err(PotentialError::Divergent("non-finite radial integral".into()));
        }
        Ok(value)
    }

    /// Maximum of `f(r, |V^-(r)|)` over the attractive region: a log-grid scan
    /// (64 points over `r/scale` in `[1e-4, 50]`, plus `r = 0` and the
    /// breakpoints) refined by golden-section search around the best point.
    pub fn radial_max(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let Some(support) = self.support() else {
            return 0.0;
        };
        let scale = self.length_scale();
        let upper = match support.upper {
            Upper::Finite(b) => b,
            Upper::Infinite => f64::INFINITY,
        };
        let mut grid: Vec<f64> = (0..64)
            .map(|i| scale * 10f64.powf(-4.0 + (50f64.log10() + 4.0) * i as f64 / 63.0))
            .chain([support.lower, 0.0])
            .chain(support.breakpoints.iter().copied())
            .chain(upper.is_finite().then_some(upper))
            .filter(|&r| r >= support.lower && r <= upper)
            .collect();
        if let Upper::Finite(b) = support.upper {
            // Finer coverage of short supports.
            grid.extend((1..64).map(|i| support.lower + (b - support.lower) * i as f64 / 64.0));
        }
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let h = |r: f64| {
            let v = self.negative_part(r);
            if v == 0.0 {
                0.0
            } else {
                f(r, v)
            }
        };
        let values: Vec<f64> = grid.iter().map(|&r| h(r)).collect();
        let (best, &best_value) = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        let lo = grid[best.saturating_sub(1)];
        let hi = grid[(best + 1).min(grid.len() - 1)];
        if hi > lo {
            let (_, refined) = golden_section_max(h, lo, hi, 1e-10 * scale.max(hi - lo).min(1.0));
            refined.max(best_value)
        } else {
            best_value
        }
    }

    /// The three radial moments of `|V^-|`.
    pub fn moments(&self) -> Result<PotentialMoments> {
        let m_rmax = self.radial_max(|r, v| r * v);
        let vmax = self.radial_max(|_, v| v);
        let i_rint = self.radial_integral(|r, v| r * v, 1e-11)?;
        self.check_tail(|r, v| r * v)?;
        Ok(PotentialMoments {
            m_rmax,
            vmax,
            i_rint,
        })
    }

    /// Divergence guard for integrals over an unbounded support: successive
    /// doublings of the cut-off must add ever smaller contributions.
    pub fn check_tail(&self, f: impl Fn(f64, f64) -> f64) -> Result<()> {
        let Some(support) = self.support() else {
            return Ok(());
        };
        if support.upper != Upper::Infinite {
            return Ok(());
        }
        let scale = self.length_scale();
        let piece = |a: f64, b: f64| -> Result<f64> {
            let spec = QuadratureSpec::finite(a, b).with_rel_tol(1e-8).with_abs_tol(1e-300);
            Ok(integrate(|r| f(r, self.negative_part(r)), &spec)?.value)
        };
        let first = piece(25.0 * scale, 50.0 * scale)?;
        let second = piece(50.0 * scale, 100.0 * scale)?;
        let third = piece(100.0 * scale, 200.0 * scale)?;
        let shrinking = third <= 0.7 * second && second <= 0.7 * first;
        if shrinking || third.abs() < 1e-14 {
            Ok(())
        } else {
            Err(PotentialError::Divergent(format!(
                "tail contributions {first:e}, {second:e}, {third:e} do not shrink"
            )))
        }
    }

    /// Short human-readable tag.
    pub fn label(&self) -> String {
        let base = match &self.form {
            PotentialForm::Exponential { g, range } => format!("exponential(g={g}, R={range})"),
            PotentialForm::PoschlTeller { g, range } => format!("poschl_teller(g={g}, R={range})"),
            PotentialForm::SquareWell { v0, r1, r2 } => {
                format!("square_well(V0={v0}, R1={r1}, R2={r2})")
            }
            PotentialForm::HarmonicOscillator { k } => format!("harmonic_oscillator(k={k})"),
            PotentialForm::Tabulated(t) => format!("tabulated({} samples)", t.radii().len()),
        };
        match self.energy {
            Some(e) => format!("{base} truncated at E={e}"),
            None => base,
        }
    }
}
