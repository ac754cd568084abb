//! Variational eigensolver for `H = alpha (sqrt(p^2 + m^2) - m) + V` in a
//! single partial wave.
//!
//! The radial basis is a geometric family of Gaussians
//! `r^(l+1) exp(-r^2 / (2 b_i^2))`. Their momentum transforms are Gaussians of
//! the same kind, so the kinetic matrix is a one-dimensional average in
//! momentum space. Rayleigh-Ritz eigenvalues are upper bounds on the exact
//! ones, and the critical strength of a fixed basis is an upper bound on the
//! exact critical strength.

mod matrices;

use nalgebra::{DMatrix, SymmetricEigen};

use matrices::{assemble, DensityRule, Matrices};

use crate::numerics::golden_section_max;
use crate::potentials::{PotentialError, RadialPotential};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("{0}")]
    Domain(String),
    #[error("eigenproblem failed: {0}")]
    Eigen(String),
    #[error("basis not converged: change {delta:e} exceeds tolerance {tol:e}")]
    NoConvergence { delta: f64, tol: f64 },
    #[error("no bound state below strength {0}")]
    NoBoundState(f64),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

pub type Result<T> = std::result::Result<T, SolverError>;

pub const MIN_SIZE: usize = 8;
pub const MAX_SIZE: usize = 400;
/// Default ratio of neighbouring Gaussian widths.
pub const DEFAULT_RATIO: f64 = 1.3;

/// Geometric Gaussian basis `b_i = scale * ratio^(i - size/2)`.
///
/// Doubling `size` at fixed `scale` and `ratio` gives a superset of the
/// widths, so the lowest eigenvalue cannot rise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalBasis {
    pub ell: u32,
    pub size: usize,
    pub scale: f64,
    pub ratio: f64,
}

impl VariationalBasis {
    pub fn new(ell: u32, size: usize, scale: f64) -> Result<Self> {
        Self::with_ratio(ell, size, scale, DEFAULT_RATIO)
    }

    pub fn with_ratio(ell: u32, size: usize, scale: f64, ratio: f64) -> Result<Self> {
        if !(MIN_SIZE..=MAX_SIZE).contains(&size) {
            return Err(SolverError::InvalidBasis(format!(
                "size must lie in [{MIN_SIZE}, {MAX_SIZE}], got {size}"
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(SolverError::InvalidBasis(format!("scale must be positive, got {scale}")));
        }
        if !(ratio > 1.0 && ratio.is_finite()) {
            return Err(SolverError::InvalidBasis(format!("ratio must exceed 1, got {ratio}")));
        }
        Ok(Self {
            ell,
            size,
            scale,
            ratio,
        })
    }

    /// Gaussian widths `b_i`, ascending.
    pub fn widths(&self) -> Vec<f64> {
        let half = (self.size / 2) as i32;
        (0..self.size as i32)
            .map(|i| self.scale * self.ratio.powi(i - half))
            .collect()
    }

    fn exponents(&self) -> Vec<f64> {
        self.widths().iter().map(|b| 0.5 / (b * b)).collect()
    }

    fn resized(&self, size: usize) -> Result<Self> {
        Self::with_ratio(self.ell, size, self.scale, self.ratio)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// `E = M - alpha m`, ascending; negative entries are bound states.
    pub binding_energies: Vec<f64>,
    pub basis: VariationalBasis,
    /// Change of the lowest eigenvalue when the basis size is doubled (or
    /// halved when doubling would exceed the size limit).
    pub convergence_delta: f64,
}

impl SpectrumResult {
    pub fn is_converged(&self, tol: f64) -> bool {
        self.convergence_delta <= tol
    }
}

fn check_alpha(alpha: u8) -> Result<f64> {
    match alpha {
        1 | 2 => Ok(f64::from(alpha)),
        _ => Err(SolverError::Domain(format!("alpha must be 1 or 2, got {alpha}"))),
    }
}

/// Mass from `beta = m R`, with `R` the potential's length scale.
fn mass_of(v: &RadialPotential, beta: f64) -> Result<f64> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(SolverError::Domain(format!("beta must be finite and >= 0, got {beta}")));
    }
    Ok(beta / v.length_scale())
}

/// `X` with `X^T S X = 1` on the numerically independent part of the basis.
fn orthogonalizer(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(s.clone());
    let max = eig.eigenvalues.max();
    if !(max > 0.0) {
        return Err(SolverError::Eigen("metric matrix is not positive".into()));
    }
    orthogonalizer_from(&eig, 1e-10 * max)
        .ok_or_else(|| SolverError::Eigen("metric matrix is not positive".into()))
}

fn orthogonalizer_from(eig: &SymmetricEigen<f64, nalgebra::Dyn>, cutoff: f64) -> Option<DMatrix<f64>> {
    let keep: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&k| eig.eigenvalues[k] > cutoff)
        .collect();
    if keep.is_empty() {
        return None;
    }
    let n = eig.eigenvectors.nrows();
    let mut x = DMatrix::zeros(n, keep.len());
    for (c, &k) in keep.iter().enumerate() {
        let f = 1.0 / eig.eigenvalues[k].sqrt();
        for r in 0..n {
            x[(r, c)] = eig.eigenvectors[(r, k)] * f;
        }
    }
    Some(x)
}

/// As [`orthogonalizer`], but `None` when the matrix has a clearly negative
/// direction.
fn positive_orthogonalizer(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let eig = SymmetricEigen::new(m.clone());
    let max = eig.eigenvalues.max();
    if !(max > 0.0) || eig.eigenvalues.min() < -1e-10 * max {
        return None;
    }
    orthogonalizer_from(&eig, 1e-10 * max)
}

fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut values: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

struct Problem<'a> {
    v: &'a RadialPotential,
    rule: DensityRule,
    mass: f64,
    alpha: f64,
}

impl<'a> Problem<'a> {
    fn new(v: &'a RadialPotential, ell: u32, beta: f64, alpha: u8) -> Result<Self> {
        Ok(Self {
            v,
            rule: DensityRule::new(ell),
            mass: mass_of(v, beta)?,
            alpha: check_alpha(alpha)?,
        })
    }

    fn matrices(&self, basis: &VariationalBasis) -> Matrices {
        assemble(&self.rule, &basis.exponents(), self.v, self.mass, self.alpha)
    }

    /// Eigenvalues of `H x = E S x`, solved in the metric `M = H + kappa S`
    /// with `kappa` above the depth of the well. Scaled to unit diagonal, `M`
    /// keeps every element of order one however wide the basis is; with
    /// `X^T M X = 1` the energies are `E = 1/mu - kappa` for the eigenvalues
    /// `mu` of `X^T S X`.
    fn energies(&self, basis: &VariationalBasis) -> Result<Vec<f64>> {
        let m = self.matrices(basis);
        let n = m.s.nrows();
        let h = &m.t + &m.v;
        let depth = (0..n).map(|i| -m.v[(i, i)] / m.s[(i, i)]).fold(0.0, f64::max);
        let mut kappa = 2.0 * depth + self.alpha / basis.scale;
        for _ in 0..8 {
            let metric = &h + &m.s * kappa;
            let diag = metric.diagonal();
            if diag.iter().all(|&x| x > 0.0) {
                let d = DMatrix::from_diagonal(&diag.map(|x| 1.0 / x.sqrt()));
                let scaled = &d * &metric * &d;
                if let Some(x) = positive_orthogonalizer(&scaled) {
                    let x = &d * x;
                    let b = x.transpose() * &m.s * &x;
                    let b = (&b + b.transpose()) * 0.5;
                    let mut energies: Vec<f64> = sorted_eigenvalues(b)
                        .into_iter()
                        .filter(|&mu| mu > 0.0)
                        .map(|mu| 1.0 / mu - kappa)
                        .collect();
                    energies.sort_by(f64::total_cmp);
                    return Ok(energies);
                }
            }
            kappa *= 4.0;
        }
        Err(SolverError::Eigen("Hamiltonian is not bounded below in this basis".into()))
    }

    /// Eigenvalues `mu` of `-V x = mu (T - E S) x`, for `E <= 0`, in
    /// descending order. `T - E S` is positive definite there; it is scaled
    /// to unit diagonal before it is orthonormalised.
    fn pencil(&self, basis: &VariationalBasis, energy: f64) -> Result<Vec<f64>> {
        let m = self.matrices(basis);
        let p = &m.t - &m.s * energy;
        let d = DMatrix::from_diagonal(&p.diagonal().map(|x| 1.0 / x.sqrt()));
        let x = &d * orthogonalizer(&(&d * &p * &d))?;
        let c = -(x.transpose() * m.v * &x);
        let c = (&c + c.transpose()) * 0.5;
        let mut mu = sorted_eigenvalues(c);
        mu.reverse();
        Ok(mu)
    }

    /// Smallest multiplier `lambda` of the potential at which the basis
    /// holds a state with `E <= 0`; infinite when it never does.
    fn critical_multiplier(&self, basis: &VariationalBasis) -> Result<f64> {
        let mu = self.pencil(basis, 0.0)?.first().copied().unwrap_or(0.0);
        Ok(if mu > 0.0 { 1.0 / mu } else { f64::INFINITY })
    }

    /// Number of variational eigenvalues below `energy`. For `energy <= 0`
    /// this is the number of pencil eigenvalues above one (Sylvester's law
    /// of inertia), which stays reliable next to the continuum.
    fn count_below(&self, basis: &VariationalBasis, energy: f64) -> Result<usize> {
        if energy <= 0.0 {
            Ok(self.pencil(basis, energy)?.iter().filter(|&&mu| mu > 1.0).count())
        } else {
            Ok(self.energies(basis)?.iter().filter(|&&e| e < energy).count())
        }
    }
}

/// Rayleigh-Ritz energies in the given basis.
pub fn solve_spectrum(
    v: &RadialPotential,
    ell: u32,
    beta: f64,
    alpha: u8,
    basis: &VariationalBasis,
) -> Result<SpectrumResult> {
    if basis.ell != ell {
        return Err(SolverError::InvalidBasis(format!(
            "basis is for l = {}, requested l = {ell}",
            basis.ell
        )));
    }
    let problem = Problem::new(v, ell, beta, alpha)?;
    let energies = problem.energies(basis)?;
    let other = if 2 * basis.size <= MAX_SIZE {
        basis.resized(2 * basis.size)?
    } else {
        basis.resized((basis.size / 2).max(MIN_SIZE))?
    };
    let reference = problem.energies(&other)?;
    let convergence_delta = (energies[0] - reference[0]).abs();
    Ok(SpectrumResult {
        binding_energies: energies,
        basis: *basis,
        convergence_delta,
    })
}


/// Critical strength of the potential in a fixed basis: the smallest
/// strength at which the basis holds a state with `E <= 0`. It is an upper
/// bound on the exact value, and infinite when the basis never binds.
pub fn critical_in_basis(
    v: &RadialPotential,
    beta: f64,
    alpha: u8,
    basis: &VariationalBasis,
) -> Result<f64> {
    let problem = Problem::new(v, basis.ell, beta, alpha)?;
    Ok(reference_strength(v) * problem.critical_multiplier(basis)?)
}

/// An exact critical strength, bracketed by the basis-convergence estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalCouplingResult {
    /// Variational value of the largest basis used; an upper bound.
    pub g_c_exact: f64,
    pub bracket: (f64, f64),
    pub ell: u32,
    pub beta: f64,
    pub rel_tol: f64,
}

/// Strengths above this are treated as "no bound state".
pub const MAX_STRENGTH: f64 = 1e4;
const LEVELS: u32 = 4;
const BASE_SIZE: usize = 48;

/// Basis of refinement level `k`: the size doubles while the width ratio
/// shrinks, so both the covered range and the density grow.
fn level_basis(ell: u32, level: u32, scale: f64) -> Result<VariationalBasis> {
    let ratio = DEFAULT_RATIO.powf((2.0f64 / 3.0).powi(level as i32));
    VariationalBasis::with_ratio(ell, BASE_SIZE << level, scale, ratio)
}

fn reference_strength(v: &RadialPotential) -> f64 {
    v.strength().unwrap_or(1.0)
}

/// Exact critical strength of the first `l`-wave bound state.
///
/// For each basis the critical multiplier is `1 / mu_max` of the pencil
/// `-V x = mu T x`; the basis scale is optimised by golden-section search
/// and the basis is refined until successive levels agree within
/// `rel_tol / 2`.
pub fn critical_coupling_exact(
    v: &RadialPotential,
    ell: u32,
    beta: f64,
    alpha: u8,
    rel_tol: f64,
) -> Result<CriticalCouplingResult> {
    if !(1e-4..1.0).contains(&rel_tol) {
        return Err(SolverError::Domain(format!("rel_tol must lie in [1e-4, 1), got {rel_tol}")));
    }
    if v.support().is_none() {
        return Err(SolverError::NoBoundState(MAX_STRENGTH));
    }
    let problem = Problem::new(v, ell, beta, alpha)?;
    let strength = reference_strength(v);
    let centre = v.length_scale().ln();
    let mut previous: Option<f64> = None;
    let mut half_width = 2.5;
    let mut best_ln_scale = centre;
    let mut delta = f64::INFINITY;
    for level in 0..LEVELS {
        let (lo, hi) = (best_ln_scale - half_width, best_ln_scale + half_width);
        let mut failure = None;
        let (x, neg_g) = golden_section_max(
            |ln_scale| match level_basis(ell, level, ln_scale.exp())
                .and_then(|b| problem.critical_multiplier(&b))
            {
                Ok(g) => -g,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NEG_INFINITY
                }
            },
            lo,
            hi,
            0.05,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let g = -neg_g * strength;
        if !(g <= MAX_STRENGTH) {
            return Err(SolverError::NoBoundState(MAX_STRENGTH));
        }
        best_ln_scale = x;
        half_width = 1.0;
        if let Some(p) = previous {
            delta = (p - g).abs();
            if delta <= 0.5 * rel_tol * g {
                let width = delta.max(1e-12 * g);
                return Ok(CriticalCouplingResult {
                    g_c_exact: g,
                    bracket: (g - width, g),
                    ell,
                    beta,
                    rel_tol,
                });
            }
        }
        previous = Some(g);
    }
    Err(SolverError::NoConvergence {
        delta,
        tol: 0.5 * rel_tol * previous.unwrap_or(f64::NAN),
    })
}

/// Largest `l` holding a bound state at strength `g`, or `None` when even
/// the S wave is unbound. Critical strengths grow with `l`, so the search
/// doubles `l` until it is unbound and then bisects.
pub fn l_exact(v: &RadialPotential, g: f64, beta: f64, alpha: u8) -> Result<Option<u32>> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(SolverError::Domain(format!("strength must be positive, got {g}")));
    }
    let bound = |ell: u32| -> Result<bool> {
        match critical_coupling_exact(v, ell, beta, alpha, 1e-4) {
            Ok(r) => Ok(g >= r.g_c_exact),
            Err(SolverError::NoBoundState(_)) => Ok(false),
            Err(e) => Err(e),
        }
    };
    if !bound(0)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0u32, 1u32);
    while bound(hi)? {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

/// Number of `l`-wave states strictly below `energy`. Eigenvalues within
/// `10 * delta` of the threshold are not counted, `delta` being the change of
/// the lowest eigenvalue between refinement levels.
pub fn count_states_below(
    v: &RadialPotential,
    ell: u32,
    beta: f64,
    alpha: u8,
    energy: f64,
) -> Result<usize> {
    if !energy.is_finite() || (energy > 0.0 && !v.is_confining()) {
        return Err(SolverError::Domain(format!(
            "energy {energy} must be finite and <= 0 for a potential that vanishes at infinity"
        )));
    }
    let problem = Problem::new(v, ell, beta, alpha)?;
    let scale = v.length_scale();
    let mut basis = level_basis(ell, 0, scale)?;
    let mut lowest = problem.energies(&basis)?[0];
    let mut previous: Option<usize> = None;
    let mut delta = f64::INFINITY;
    for level in 1..LEVELS {
        let next = level_basis(ell, level, scale)?;
        let next_lowest = problem.energies(&next)?[0];
        delta = (lowest - next_lowest).abs();
        let cut = energy - 10.0 * delta;
        let coarse = previous.map_or_else(|| problem.count_below(&basis, cut), Ok)?;
        let fine = problem.count_below(&next, cut)?;
        if coarse == fine {
            return Ok(fine);
        }
        previous = Some(fine);
        basis = next;
        lowest = next_lowest;
    }
    Err(SolverError::NoConvergence { delta, tol: 0.0 })
}
