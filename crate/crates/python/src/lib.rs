//! Python bindings: potentials, constants, bounds and the exact solver.
//! Reports come back as dictionaries; domain errors raise `ValueError` and
//! numerical failures raise `RuntimeError`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use salpeter::bounds::{self, BoundReport, BoundsError, TraceSettings};
use salpeter::potentials::{PotentialError, RadialPotential, Tabulated};
use salpeter::solver::{self, SolverError, VariationalBasis};

fn bounds_err(e: BoundsError) -> PyErr {
    match e {
        BoundsError::Domain(_) | BoundsError::Potential(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn solver_err(e: SolverError) -> PyErr {
    match e {
        SolverError::InvalidBasis(_) | SolverError::Domain(_) | SolverError::Potential(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn potential_err(e: PotentialError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A central potential `V(r)`.
#[pyclass(name = "Potential", frozen, skip_from_py_object)]
struct PyPotential {
    inner: RadialPotential,
}

#[pymethods]
impl PyPotential {
    /// `-(g/R) exp(-r/R)`
    #[staticmethod]
    #[pyo3(signature = (g, range = 1.0))]
    fn exponential(g: f64, range: f64) -> PyResult<Self> {
        let inner = RadialPotential::exponential(g, range).map_err(potential_err)?;
        Ok(Self { inner })
    }

    /// `-(g/R) / cosh^2(r/R)`
    #[staticmethod]
    #[pyo3(signature = (g, range = 1.0))]
    fn poschl_teller(g: f64, range: f64) -> PyResult<Self> {
        let inner = RadialPotential::poschl_teller(g, range).map_err(potential_err)?;
        Ok(Self { inner })
    }

    /// `-V0` on `[r1, r2]`.
    #[staticmethod]
    fn square_well(v0: f64, r1: f64, r2: f64) -> PyResult<Self> {
        let inner = RadialPotential::square_well(v0, r1, r2).map_err(potential_err)?;
        Ok(Self { inner })
    }

    /// `k^3 r^2`
    #[staticmethod]
    fn harmonic_oscillator(k: f64) -> PyResult<Self> {
        let inner = RadialPotential::harmonic_oscillator(k).map_err(potential_err)?;
        Ok(Self { inner })
    }

    /// Linear interpolation of `(r, V)` samples.
    #[staticmethod]
    fn tabulated(samples: Vec<(f64, f64)>) -> PyResult<Self> {
        let table = Tabulated::new(&samples).map_err(potential_err)?;
        Ok(Self {
            inner: RadialPotential::tabulated(table),
        })
    }

    fn __call__(&self, r: f64) -> PyResult<f64> {
        self.inner.eval(r).map_err(potential_err)
    }

    fn scaled(&self, factor: f64) -> PyResult<Self> {
        let inner = self.inner.scaled(factor).map_err(potential_err)?;
        Ok(Self { inner })
    }

    fn truncate_at_energy(&self, kappa2: f64) -> PyResult<Self> {
        let inner = self.inner.truncate_at_energy(kappa2).map_err(potential_err)?;
        Ok(Self { inner })
    }

    /// `{"m_rmax", "vmax", "i_rint"}`.
    fn moments<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let m = self.inner.moments().map_err(potential_err)?;
        let d = PyDict::new(py);
        d.set_item("m_rmax", m.m_rmax)?;
        d.set_item("vmax", m.vmax)?;
        d.set_item("i_rint", m.i_rint)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Potential({})", self.inner.label())
    }
}

fn report_dict<'py>(py: Python<'py>, r: &BoundReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("method", r.method.as_str())?;
    d.set_item("raw_bound", r.raw_bound)?;
    d.set_item("implied_count", r.implied_count)?;
    d.set_item("err_estimate", r.err_estimate)?;
    d.set_item("warning", r.warning.clone())?;
    let p = &r.params;
    d.set_item("n", p.n)?;
    d.set_item("p", p.p)?;
    d.set_item("pp", p.pp)?;
    d.set_item("ell", p.ell)?;
    d.set_item("nu_max", p.nu_max)?;
    d.set_item("kappa2", p.kappa2)?;
    d.set_item("samples", p.samples)?;
    d.set_item("seed", p.seed)?;
    d.set_item("truncation_index", p.truncation_index)?;
    d.set_item("l_plus", p.l_plus)?;
    d.set_item("asymptotic", p.asymptotic)?;
    Ok(d)
}

fn settings(samples: u64, seed: u64, rel_tol: f64) -> TraceSettings {
    TraceSettings {
        samples,
        seed,
        rel_tol,
    }
}

/// `c(l)` of the angular-momentum existence condition.
#[pyfunction]
fn c_ell(ell: u32) -> PyResult<f64> {
    bounds::const_c_ell(ell).map_err(bounds_err)
}

#[pyfunction]
#[pyo3(signature = (nu, q, alpha = 2))]
fn c_nu_q(nu: u32, q: f64, alpha: u8) -> PyResult<f64> {
    bounds::const_c_nu_q(nu, q, alpha).map_err(bounds_err)
}

/// `B(n, p, p')` as `{"value", "tail", "tail_error", "truncation_index"}`.
#[pyfunction]
#[pyo3(signature = (n, p, pp, alpha = 2, tol = 1e-10))]
fn const_b<'py>(py: Python<'py>, n: u32, p: f64, pp: f64, alpha: u8, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let s = bounds::const_b(n, p, pp, alpha, tol).map_err(bounds_err)?;
    let d = PyDict::new(py);
    d.set_item("value", s.value)?;
    d.set_item("tail", s.tail)?;
    d.set_item("tail_error", s.tail_error)?;
    d.set_item("truncation_index", s.truncation_index)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (v, ell = 0, m = 0.0, alpha = 2, n = 2, samples = 1 << 20, seed = 0, rel_tol = 1e-8))]
#[allow(clippy::too_many_arguments)]
fn bound_lwave_trace<'py>(
    py: Python<'py>,
    v: &PyPotential,
    ell: u32,
    m: f64,
    alpha: u8,
    n: u32,
    samples: u64,
    seed: u64,
    rel_tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let s = settings(samples, seed, rel_tol);
    let r = py
        .detach(|| bounds::bound_lwave_trace(&v.inner, ell, m, alpha, n, &s))
        .map_err(bounds_err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (v, m = 0.0, alpha = 2, n = 4, nu_max = 12, samples = 1 << 20, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn bound_total_trace<'py>(
    py: Python<'py>,
    v: &PyPotential,
    m: f64,
    alpha: u8,
    n: u32,
    nu_max: u32,
    samples: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let s = settings(samples, seed, 1e-8);
    let r = py
        .detach(|| bounds::bound_total_trace(&v.inner, m, alpha, n, nu_max, &s))
        .map_err(bounds_err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (v, n = 5, p = 2.0, pp = 3.0, alpha = 2))]
fn bound_total_holder<'py>(py: Python<'py>, v: &PyPotential, n: u32, p: f64, pp: f64, alpha: u8) -> PyResult<Bound<'py, PyDict>> {
    let r = bounds::bound_total_holder(&v.inner, n, p, pp, alpha).map_err(bounds_err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (v, ell = 0, n = 2, p = 2.0, pp = 3.0, alpha = 2))]
fn bound_lwave_holder<'py>(
    py: Python<'py>,
    v: &PyPotential,
    ell: u32,
    n: u32,
    p: f64,
    pp: f64,
    alpha: u8,
) -> PyResult<Bound<'py, PyDict>> {
    let r = bounds::bound_lwave_holder(&v.inner, ell, n, p, pp, alpha).map_err(bounds_err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (v, alpha = 2))]
fn bound_total_central_ur<'py>(py: Python<'py>, v: &PyPotential, alpha: u8) -> PyResult<Bound<'py, PyDict>> {
    let r = bounds::bound_total_central_ur(&v.inner, alpha).map_err(bounds_err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (v, m = 0.0, alpha = 2))]
fn bound_daubechies<'py>(py: Python<'py>, v: &PyPotential, m: f64, alpha: u8) -> PyResult<Bound<'py, PyDict>> {
    let r = bounds::bound_daubechies(&v.inner, m, alpha).map_err(bounds_err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (v, kappa2, ell = 0, m = 0.0, alpha = 2, rel_tol = 1e-8))]
fn bound_below_energy<'py>(
    py: Python<'py>,
    v: &PyPotential,
    kappa2: f64,
    ell: u32,
    m: f64,
    alpha: u8,
    rel_tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let s = settings(1 << 20, 0, rel_tol);
    let r = py
        .detach(|| bounds::bound_below_energy(&v.inner, ell, m, alpha, kappa2, &s))
        .map_err(bounds_err)?;
    report_dict(py, &r)
}

/// Strength at which the two-fold trace bound equals one.
#[pyfunction]
#[pyo3(signature = (v, ell = 0, m = 0.0, alpha = 2))]
fn critical_trace(py: Python<'_>, v: &PyPotential, ell: u32, m: f64, alpha: u8) -> PyResult<f64> {
    py.detach(|| bounds::critical_trace_lwave(&v.inner, ell, m, alpha, &TraceSettings::default()))
        .map_err(bounds_err)
}

#[pyfunction]
#[pyo3(signature = (v, m = 0.0, alpha = 2))]
fn critical_daubechies(v: &PyPotential, m: f64, alpha: u8) -> PyResult<f64> {
    bounds::critical_daubechies(&v.inner, m, alpha).map_err(bounds_err)
}

/// `(g_crit, p_star)` from the existence condition maximised over `p`.
#[pyfunction]
#[pyo3(signature = (v, ell = 0, alpha = 2))]
fn existence_critical_p(v: &PyPotential, ell: u32, alpha: u8) -> PyResult<(f64, Option<f64>)> {
    let r = bounds::existence_critical_p(&v.inner, ell, alpha).map_err(bounds_err)?;
    Ok((r.g_crit, r.p_star))
}

#[pyfunction]
#[pyo3(signature = (v, ell, alpha = 2))]
fn existence_critical_max(v: &PyPotential, ell: u32, alpha: u8) -> PyResult<f64> {
    Ok(bounds::existence_critical_max(&v.inner, ell, alpha)
        .map_err(bounds_err)?
        .g_crit)
}

/// `{"l_plus", "l_plus_plus", "l_plus_plus_iterated", "s_value"}`.
#[pyfunction]
#[pyo3(signature = (v, alpha = 2))]
fn l_plus<'py>(py: Python<'py>, v: &PyPotential, alpha: u8) -> PyResult<Bound<'py, PyDict>> {
    let r = bounds::l_plus(&v.inner, alpha).map_err(bounds_err)?;
    let d = PyDict::new(py);
    d.set_item("l_plus", r.l_plus)?;
    d.set_item("l_plus_plus", r.l_plus_plus)?;
    d.set_item("l_plus_plus_iterated", r.l_plus_plus_iterated)?;
    d.set_item("s_value", r.s_value)?;
    Ok(d)
}

/// Exact critical strength `{"g_c_exact", "bracket", "ell", "beta", "rel_tol"}`.
#[pyfunction]
#[pyo3(signature = (v, ell = 0, beta = 0.0, alpha = 2, rel_tol = 1e-3))]
fn critical_coupling_exact<'py>(
    py: Python<'py>,
    v: &PyPotential,
    ell: u32,
    beta: f64,
    alpha: u8,
    rel_tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = py
        .detach(|| solver::critical_coupling_exact(&v.inner, ell, beta, alpha, rel_tol))
        .map_err(solver_err)?;
    let d = PyDict::new(py);
    d.set_item("g_c_exact", r.g_c_exact)?;
    d.set_item("bracket", r.bracket)?;
    d.set_item("ell", r.ell)?;
    d.set_item("beta", r.beta)?;
    d.set_item("rel_tol", r.rel_tol)?;
    Ok(d)
}

/// Largest `l` with a bound state at strength `g`; `None` if none binds.
#[pyfunction]
#[pyo3(signature = (v, g, beta = 0.0, alpha = 2))]
fn l_exact(py: Python<'_>, v: &PyPotential, g: f64, beta: f64, alpha: u8) -> PyResult<Option<u32>> {
    py.detach(|| solver::l_exact(&v.inner, g, beta, alpha)).map_err(solver_err)
}

#[pyfunction]
#[pyo3(signature = (v, energy, ell = 0, beta = 0.0, alpha = 2))]
fn count_states_below(py: Python<'_>, v: &PyPotential, energy: f64, ell: u32, beta: f64, alpha: u8) -> PyResult<usize> {
    py.detach(|| solver::count_states_below(&v.inner, ell, beta, alpha, energy))
        .map_err(solver_err)
}

/// Variational binding energies in a Gaussian basis.
#[pyfunction]
#[pyo3(signature = (v, ell = 0, beta = 0.0, alpha = 2, size = 60, scale = 1.0, ratio = 1.3))]
#[allow(clippy::too_many_arguments)]
fn solve_spectrum<'py>(
    py: Python<'py>,
    v: &PyPotential,
    ell: u32,
    beta: f64,
    alpha: u8,
    size: usize,
    scale: f64,
    ratio: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let basis = VariationalBasis::with_ratio(ell, size, scale, ratio).map_err(solver_err)?;
    let r = py
        .detach(|| solver::solve_spectrum(&v.inner, ell, beta, alpha, &basis))
        .map_err(solver_err)?;
    let d = PyDict::new(py);
    d.set_item("binding_energies", r.binding_energies.clone())?;
    d.set_item("convergence_delta", r.convergence_delta)?;
    Ok(d)
}

#[pymodule]
fn salpeter_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPotential>()?;
    m.add_function(wrap_pyfunction!(c_ell, m)?)?;
    m.add_function(wrap_pyfunction!(c_nu_q, m)?)?;
    m.add_function(wrap_pyfunction!(const_b, m)?)?;
    m.add_function(wrap_pyfunction!(bound_lwave_trace, m)?)?;
    m.add_function(wrap_pyfunction!(bound_total_trace, m)?)?;
    m.add_function(wrap_pyfunction!(bound_total_holder, m)?)?;
    m.add_function(wrap_pyfunction!(bound_lwave_holder, m)?)?;
    m.add_function(wrap_pyfunction!(bound_total_central_ur, m)?)?;
    m.add_function(wrap_pyfunction!(bound_daubechies, m)?)?;
    m.add_function(wrap_pyfunction!(bound_below_energy, m)?)?;
    m.add_function(wrap_pyfunction!(critical_trace, m)?)?;
    m.add_function(wrap_pyfunction!(critical_daubechies, m)?)?;
    m.add_function(wrap_pyfunction!(existence_critical_p, m)?)?;
    m.add_function(wrap_pyfunction!(existence_critical_max, m)?)?;
    m.add_function(wrap_pyfunction!(l_plus, m)?)?;
    m.add_function(wrap_pyfunction!(critical_coupling_exact, m)?)?;
    m.add_function(wrap_pyfunction!(l_exact, m)?)?;
    m.add_function(wrap_pyfunction!(count_states_below, m)?)?;
    m.add_function(wrap_pyfunction!(solve_spectrum, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
