use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use volterra_helix::acceptance;
use volterra_helix::analyze::{self, Ladder, ScanMethod};
use volterra_helix::moments::{self, IncrementQuery};
use volterra_helix::numerics::{self, DEFAULT_TOL};
use volterra_helix::processes::{self, Interval, ProcessKind, ProcessSpec};
use volterra_helix::simulate::{self, TimeGrid};
use volterra_helix::theory;
use volterra_helix::Error;

fn to_py(e: Error) -> PyErr {
    if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else if let Error::Io(_) = e {
        PyOSError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// A process kind with validated parameters.
#[pyclass(frozen, name = "Process", module = "volterra_helix_py")]
struct PyProcess {
    inner: ProcessSpec,
}

#[pymethods]
impl PyProcess {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().name()
    }
    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }
    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma()
    }
    #[getter]
    fn lam(&self) -> f64 {
        self.inner.lambda()
    }

    fn __repr__(&self) -> String {
        format!("Process({})", self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Builds a process. `kind` is one of u1..u6, v, wiener; `lam` is the tempering rate.
#[pyfunction]
#[pyo3(signature = (kind, alpha=0.0, gamma=0.0, lam=1.0))]
fn make_process(kind: &str, alpha: f64, gamma: f64, lam: f64) -> PyResult<PyProcess> {
    let kind: ProcessKind = kind.parse().map_err(to_py)?;
    let inner = processes::make_process(kind, alpha, gamma, lam).map_err(to_py)?;
    Ok(PyProcess { inner })
}

#[pyfunction]
#[pyo3(signature = (process, t, tol=DEFAULT_TOL))]
fn variance(process: &PyProcess, t: f64, tol: f64) -> PyResult<f64> {
    moments::variance_with_tol(&process.inner, t, tol).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (process, s, t, tol=DEFAULT_TOL))]
fn covariance(process: &PyProcess, s: f64, t: f64, tol: f64) -> PyResult<f64> {
    moments::covariance_with_tol(&process.inner, s, t, tol).map_err(to_py)
}

/// `E(U(t) - U(s))^2` with its components.
#[pyfunction]
#[pyo3(signature = (process, s, t, tol=DEFAULT_TOL))]
fn incremental_variance<'py>(
    py: Python<'py>,
    process: &PyProcess,
    s: f64,
    t: f64,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let q = IncrementQuery::new(process.inner, s, t).map_err(to_py)?;
    let b = moments::incremental_variance(&q, tol).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("j1", b.j1)?;
    d.set_item("j2", b.j2)?;
    d.set_item("j4", b.j4)?;
    d.set_item("total", b.total)?;
    d.set_item("error_estimate", b.error_estimate)?;
    let method = match b.method {
        moments::MomentMethod::ClosedForm => "closed_form",
        moments::MomentMethod::Quadrature => "quadrature",
        moments::MomentMethod::SumOfComponents => "sum_of_components",
    };
    d.set_item("method", method)?;
    Ok(d)
}

#[pyfunction]
fn classify_regime<'py>(py: Python<'py>, process: &PyProcess, t1: f64, t2: f64) -> PyResult<Bound<'py, PyDict>> {
    let interval = Interval::new(t1, t2).map_err(to_py)?;
    let r = theory::classify_regime(&process.inner, &interval);
    let d = PyDict::new(py);
    d.set_item("regime", r.regime.name())?;
    d.set_item("rho_lower", r.rho_lower)?;
    d.set_item("rho_upper", r.rho_upper)?;
    d.set_item("requires_t1_positive", r.requires_t1_positive)?;
    d.set_item("source", r.source)?;
    Ok(d)
}

#[pyfunction]
fn mandelbrot_constant(alpha: f64) -> PyResult<f64> {
    moments::mandelbrot_constant(alpha).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (alpha, tol=DEFAULT_TOL))]
fn mandelbrot_constant_numeric(alpha: f64, tol: f64) -> PyResult<f64> {
    moments::mandelbrot_constant_numeric(alpha, tol).map_err(to_py)
}

#[pyfunction]
fn g1(r: f64, alpha: f64, gamma: f64) -> PyResult<f64> {
    moments::g1(r, alpha, gamma).map_err(to_py)
}

#[pyfunction]
fn g2(r: f64, alpha: f64, gamma: f64) -> PyResult<f64> {
    moments::g2(r, alpha, gamma).map_err(to_py)
}

#[pyfunction]
fn gamma_fn(x: f64) -> PyResult<f64> {
    numerics::gamma_fn(x).map_err(to_py)
}

#[pyfunction]
fn beta_fn(a: f64, b: f64) -> PyResult<f64> {
    numerics::beta_fn(a, b).map_err(to_py)
}

#[pyclass(frozen, name = "IncrementTable", module = "volterra_helix_py")]
struct PyIncrementTable {
    inner: analyze::IncrementTable,
}

#[pymethods]
impl PyIncrementTable {
    #[getter]
    fn anchor(&self) -> f64 {
        self.inner.anchor
    }
    #[getter]
    fn lags(&self) -> Vec<f64> {
        self.inner.lags.clone()
    }
    #[getter]
    fn sigma(&self) -> Vec<f64> {
        self.inner.sigma.clone()
    }
    #[getter]
    fn std_errors(&self) -> Vec<f64> {
        self.inner.std_errors.clone()
    }
    #[getter]
    fn method(&self) -> &'static str {
        match self.inner.method {
            analyze::TableMethod::Quadrature => "quadrature",
            analyze::TableMethod::MonteCarlo => "monte_carlo",
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Increment norms on the ladder `h_max * lag_ratio^k`.
/// `method` is "quadrature" or "monte_carlo"; `paths` and `seed` apply to the latter.
#[pyfunction]
#[pyo3(signature = (process, anchor, lag_count=12, lag_ratio=0.5, h_max=1e-2, method="quadrature", tol=DEFAULT_TOL, paths=10_000, seed=0))]
#[allow(clippy::too_many_arguments)]
fn scan_increments(
    py: Python<'_>,
    process: &PyProcess,
    anchor: f64,
    lag_count: usize,
    lag_ratio: f64,
    h_max: f64,
    method: &str,
    tol: f64,
    paths: usize,
    seed: u64,
) -> PyResult<PyIncrementTable> {
    let method = match method {
        "quadrature" => ScanMethod::Quadrature { tol },
        "monte_carlo" => ScanMethod::MonteCarlo { n_paths: paths, seed },
        other => return Err(PyValueError::new_err(format!("unknown method '{other}'"))),
    };
    let ladder = Ladder { lag_count, lag_ratio, h_max };
    let spec = process.inner;
    let inner = py
        .detach(|| analyze::scan_increments(&spec, anchor, &ladder, method))
        .map_err(to_py)?;
    Ok(PyIncrementTable { inner })
}

/// Least-squares slope of `log sigma` against `log h`.
#[pyfunction]
fn fit_exponent<'py>(py: Python<'py>, table: &PyIncrementTable) -> PyResult<Bound<'py, PyDict>> {
    let fit = analyze::fit_exponent(&table.inner).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("rho_hat", fit.rho_hat)?;
    d.set_item("intercept", fit.intercept)?;
    d.set_item("r_squared", fit.r_squared)?;
    Ok(d)
}

/// Gaussian paths on `grid`; `values` holds one list per path.
#[pyfunction]
#[pyo3(signature = (process, grid, n_paths, seed=0))]
fn sample_paths<'py>(
    py: Python<'py>,
    process: &PyProcess,
    grid: Vec<f64>,
    n_paths: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let grid = TimeGrid::new(grid).map_err(to_py)?;
    let spec = process.inner;
    let ens = py
        .detach(|| simulate::sample_paths(&spec, &grid, n_paths, seed))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("grid", ens.grid().points().to_vec())?;
    d.set_item("values", ens.paths().map(<[f64]>::to_vec).collect::<Vec<_>>())?;
    d.set_item("seed", ens.seed())?;
    d.set_item("factor_checksum", ens.factor_checksum())?;
    d.set_item("jitter", ens.jitter())?;
    Ok(d)
}

/// Runs the acceptance criteria (all, or only `only`) and returns one dict per criterion.
#[pyfunction]
#[pyo3(signature = (only=None))]
fn verify<'py>(py: Python<'py>, only: Option<usize>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let outcomes = match only {
        Some(id) => vec![py
            .detach(|| acceptance::run_criterion(id))
            .ok_or_else(|| PyValueError::new_err(format!("no criterion {id}")))?],
        None => py.detach(acceptance::run_all),
    };
    outcomes
        .into_iter()
        .map(|o| {
            let d = PyDict::new(py);
            d.set_item("id", o.id)?;
            d.set_item("title", o.title)?;
            d.set_item("passed", o.passed)?;
            d.set_item("detail", o.detail)?;
            d.set_item("seconds", o.seconds)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn volterra_helix_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProcess>()?;
    m.add_class::<PyIncrementTable>()?;
    m.add_function(wrap_pyfunction!(make_process, m)?)?;
    m.add_function(wrap_pyfunction!(variance, m)?)?;
    m.add_function(wrap_pyfunction!(covariance, m)?)?;
    m.add_function(wrap_pyfunction!(incremental_variance, m)?)?;
    m.add_function(wrap_pyfunction!(classify_regime, m)?)?;
    m.add_function(wrap_pyfunction!(mandelbrot_constant, m)?)?;
    m.add_function(wrap_pyfunction!(mandelbrot_constant_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(g1, m)?)?;
    m.add_function(wrap_pyfunction!(g2, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_fn, m)?)?;
    m.add_function(wrap_pyfunction!(beta_fn, m)?)?;
    m.add_function(wrap_pyfunction!(scan_increments, m)?)?;
    m.add_function(wrap_pyfunction!(fit_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(sample_paths, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
