//! Python extension module exposing the main types and operations:
//! special functions, the closed-form bounds, the test density with its
//! KL routines, the min-max bound, and the capacity oracle.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ampcap::bounds::{self, PowerLevel};
use ampcap::{oracle, specfun, testdensity};

fn value_err(err: ampcap::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn power(p_linear: f64) -> PyResult<PowerLevel> {
    PowerLevel::new(p_linear).map_err(value_err)
}

#[pyfunction]
fn std_normal_pdf(x: f64) -> f64 {
    specfun::std_normal_pdf(x)
}

#[pyfunction]
fn q_function(x: f64) -> f64 {
    specfun::q_function(x)
}

#[pyfunction]
fn tail_moment(u: f64) -> f64 {
    specfun::tail_moment(u)
}

#[pyfunction]
fn tail_moment_deriv(u: f64, order: u32) -> PyResult<f64> {
    specfun::tail_moment_deriv(u, order).map_err(value_err)
}

#[pyfunction]
fn binary_entropy_nats(p: f64) -> PyResult<f64> {
    specfun::binary_entropy_nats(p).map_err(value_err)
}

#[pyfunction]
fn shannon_bound(p_linear: f64) -> PyResult<f64> {
    Ok(bounds::shannon_bound(power(p_linear)?))
}

#[pyfunction]
fn mckellips_bound(p_linear: f64) -> PyResult<f64> {
    Ok(bounds::mckellips_bound(power(p_linear)?))
}

#[pyfunction]
fn thangaraj_bound(p_linear: f64) -> PyResult<f64> {
    Ok(bounds::thangaraj_bound(power(p_linear)?))
}

#[pyfunction]
fn eb_n0_db(p_linear: f64, c_bits: f64) -> PyResult<f64> {
    oracle::eb_n0_db(power(p_linear)?, c_bits).map_err(value_err)
}

/// All bounds at one power level, in nats.
#[pyclass(frozen, get_all)]
struct BoundPoint {
    p_linear: f64,
    shannon_nats: f64,
    mckellips_nats: f64,
    thangaraj_nats: f64,
    theorem_nats: f64,
    combined_nats: f64,
    refinement_nats: f64,
    sigma2: f64,
    beta: f64,
    regime: String,
}

#[pymethods]
impl BoundPoint {
    fn __repr__(&self) -> String {
        format!(
            "BoundPoint(p={:.6e}, combined={:.9}, regime={})",
            self.p_linear, self.combined_nats, self.regime
        )
    }
}

#[pyfunction]
fn bound_point(p_linear: f64) -> PyResult<BoundPoint> {
    let bp = bounds::theorem_bound(power(p_linear)?).map_err(value_err)?;
    Ok(BoundPoint {
        p_linear: bp.p_linear,
        shannon_nats: bp.shannon_nats,
        mckellips_nats: bp.mckellips_nats,
        thangaraj_nats: bp.thangaraj_nats,
        theorem_nats: bp.theorem_nats,
        combined_nats: bp.combined_nats,
        refinement_nats: bp.refinement_nats,
        sigma2: bp.sigma2,
        beta: bp.beta,
        regime: bp.regime.to_string(),
    })
}

#[pyfunction]
fn kl_closed_form(x: f64, amplitude: f64, beta: f64, sigma2: f64) -> PyResult<f64> {
    testdensity::TestDensity::new(amplitude, beta, sigma2)
        .and_then(|q| q.kl_closed_form(x))
        .map_err(value_err)
}

#[pyfunction]
fn kl_quadrature(x: f64, amplitude: f64, beta: f64, sigma2: f64) -> PyResult<f64> {
    testdensity::TestDensity::new(amplitude, beta, sigma2)
        .and_then(|q| q.kl_quadrature(x))
        .map_err(value_err)
}

#[pyfunction]
fn test_density_pdf(y: f64, amplitude: f64, beta: f64, sigma2: f64) -> PyResult<f64> {
    Ok(testdensity::TestDensity::new(amplitude, beta, sigma2)
        .map_err(value_err)?
        .pdf(y))
}

#[pyfunction]
fn tail_moment_gap(a: f64, x: f64) -> PyResult<f64> {
    testdensity::tail_moment_gap(a, x).map_err(value_err)
}

/// Direct numerical min-max bound; returns
/// `(value_nats, beta, sigma2, x_at_max)`.
#[pyfunction]
fn minmax_bound(a: f64) -> PyResult<(f64, f64, f64, f64)> {
    let mm = testdensity::minmax_search(a).map_err(value_err)?;
    Ok((mm.value_nats, mm.beta, mm.sigma2, mm.x_at_max))
}

/// Capacity oracle result.
#[pyclass(frozen, get_all)]
struct CapacityEstimate {
    value_nats: f64,
    lower_nats: f64,
    upper_nats: f64,
    iterations: usize,
    converged: bool,
}

#[pymethods]
impl CapacityEstimate {
    fn __repr__(&self) -> String {
        format!(
            "CapacityEstimate(value={:.9}, gap={:.2e}, converged={})",
            self.value_nats,
            self.upper_nats - self.lower_nats,
            self.converged
        )
    }
}

#[pyfunction]
#[pyo3(signature = (a, tol = 1e-6))]
fn capacity(a: f64, tol: f64) -> PyResult<CapacityEstimate> {
    let est = oracle::capacity(a, tol).map_err(value_err)?;
    Ok(CapacityEstimate {
        value_nats: est.value_nats,
        lower_nats: est.lower_nats,
        upper_nats: est.upper_nats,
        iterations: est.iterations,
        converged: est.converged,
    })
}

#[pymodule]
fn ampcap_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(std_normal_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(q_function, m)?)?;
    m.add_function(wrap_pyfunction!(tail_moment, m)?)?;
    m.add_function(wrap_pyfunction!(tail_moment_deriv, m)?)?;
    m.add_function(wrap_pyfunction!(binary_entropy_nats, m)?)?;
    m.add_function(wrap_pyfunction!(shannon_bound, m)?)?;
    m.add_function(wrap_pyfunction!(mckellips_bound, m)?)?;
    m.add_function(wrap_pyfunction!(thangaraj_bound, m)?)?;
    m.add_function(wrap_pyfunction!(eb_n0_db, m)?)?;
    m.add_function(wrap_pyfunction!(bound_point, m)?)?;
    m.add_function(wrap_pyfunction!(kl_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(kl_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(test_density_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(tail_moment_gap, m)?)?;
    m.add_function(wrap_pyfunction!(minmax_bound, m)?)?;
    m.add_function(wrap_pyfunction!(capacity, m)?)?;
    m.add_class::<BoundPoint>()?;
    m.add_class::<CapacityEstimate>()?;
    Ok(())
}
