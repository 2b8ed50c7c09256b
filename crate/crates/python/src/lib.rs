//! Python bindings. Structured results come back as plain dicts and lists;
//! the phase portrait, exact distributions and graph states are classes.

use edgetri::meanfield::{abs_deviation_scaled, scaled_fluctuation_mgf, DEFAULT_DELTA};
use edgetri::phase::{classify_phase_with, Tolerances};
use edgetri::sampler::ChainConfig;
use edgetri::verify::{ChainBudget, DEFAULT_EPSILON};
use edgetri::{
    Centering, ConditionalWindow, CriticalSource, EnergyScale, InitialState, ModelParams, Regime, Scaling,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict};
use pythonize::pythonize;
use serde::Serialize;

create_exception!(_edgetri, EdgetriError, PyValueError, "Raised for domain, regime and configuration errors.");

fn err(e: edgetri::Error) -> PyErr {
    EdgetriError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    Ok(pythonize(py, value)?)
}

fn params(alpha: f64, h: f64) -> PyResult<ModelParams> {
    let p = ModelParams::new(alpha, h);
    p.require_replica_symmetric().map_err(err)?;
    Ok(p)
}

/// `"pair_count"` or `"vertex_square"`.
pub fn parse_scale(s: &str) -> Result<EnergyScale, String> {
    match s {
        "pair_count" => Ok(EnergyScale::PairCount),
        "vertex_square" => Ok(EnergyScale::VertexSquare),
        other => Err(format!("unknown scale {other:?}; expected \"pair_count\" or \"vertex_square\"")),
    }
}

fn scale(s: &str) -> PyResult<EnergyScale> {
    parse_scale(s).map_err(EdgetriError::new_err)
}

pub fn parse_init(kind: &str, value: Option<f64>) -> Result<InitialState, String> {
    let need = || value.ok_or_else(|| format!("init {kind:?} needs init_value"));
    Ok(match kind {
        "empty" => InitialState::Empty,
        "complete" => InitialState::Complete,
        "erdos_renyi" => InitialState::ErdosRenyi(need()?),
        "from_density" => InitialState::FromDensity(need()?),
        other => return Err(format!("unknown init {other:?}")),
    })
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Uniqueness => "Uniqueness",
        Regime::CriticalPoint => "CriticalPoint",
        Regime::OnCriticalCurve => "OnCriticalCurve",
        Regime::OutsideReplicaSymmetric => "OutsideReplicaSymmetric",
    }
}

/// Global maximizers of the mean-field objective and derived constants.
#[pyclass(frozen, name = "PhasePortrait", module = "edgetri")]
pub struct PyPhasePortrait {
    inner: edgetri::PhasePortrait,
}

#[pymethods]
impl PyPhasePortrait {
    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.params.alpha
    }

    #[getter]
    fn h(&self) -> f64 {
        self.inner.params.h
    }

    #[getter]
    fn regime(&self) -> &'static str {
        regime_name(self.inner.regime)
    }

    /// Maximizer locations, ascending.
    #[getter]
    fn maximizers(&self) -> Vec<f64> {
        self.inner.maximizers.iter().map(|m| m.u()).collect()
    }

    #[getter]
    fn free_energy(&self) -> f64 {
        self.inner.free_energy
    }

    /// Limiting variance per maximizer; `None` where it is degenerate.
    #[getter]
    fn variances(&self) -> Vec<Option<f64>> {
        self.inner.maximizers.iter().map(|m| m.variance).collect()
    }

    #[getter]
    fn kappa(&self) -> Option<f64> {
        self.inner.kappa
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "PhasePortrait(alpha={}, h={}, regime={}, maximizers={:?})",
            self.inner.params.alpha,
            self.inner.params.h,
            regime_name(self.inner.regime),
            self.maximizers()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (alpha, h, tol = 1e-10))]
fn classify_phase(alpha: f64, h: f64, tol: f64) -> PyResult<PyPhasePortrait> {
    let inner = classify_phase_with(ModelParams::new(alpha, h), &Tolerances::with_residual(tol)).map_err(err)?;
    Ok(PyPhasePortrait { inner })
}

#[pyfunction]
fn free_energy(alpha: f64, h: f64) -> PyResult<f64> {
    edgetri::free_energy(ModelParams::new(alpha, h)).map_err(err)
}

#[pyfunction]
fn objective(u: f64, alpha: f64, h: f64) -> PyResult<f64> {
    Ok(edgetri::objective(u, params(alpha, h)?))
}

#[pyfunction]
fn rate_function(u: f64, alpha: f64, h: f64) -> PyResult<f64> {
    edgetri::rate_function(u, ModelParams::new(alpha, h)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (alpha, tol = 1e-12))]
fn critical_curve_h(alpha: f64, tol: f64) -> PyResult<f64> {
    edgetri::critical_curve_h(alpha, tol).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (alpha, h, which = 0, window = 0.01))]
fn rate_taylor_coefficients<'py>(
    py: Python<'py>,
    alpha: f64,
    h: f64,
    which: usize,
    window: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let e = edgetri::rate_taylor_coefficients(params(alpha, h)?, which, window).map_err(err)?;
    to_py(py, &e)
}

/// Exact law of the mean-field edge density at one `n`.
#[pyclass(frozen, name = "ExactDistribution", module = "edgetri")]
pub struct PyExactDistribution {
    inner: edgetri::ExactDistribution,
}

#[pymethods]
impl PyExactDistribution {
    #[getter]
    fn n(&self) -> usize {
        self.inner.model.n
    }

    #[getter]
    fn log_partition(&self) -> f64 {
        self.inner.log_partition
    }

    #[getter]
    fn probabilities(&self) -> Vec<f64> {
        self.inner.probabilities.clone()
    }

    /// Edge-density value at each lattice point.
    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.grid().values()
    }

    #[getter]
    fn regime(&self) -> &'static str {
        regime_name(self.inner.portrait.regime)
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    fn variance(&self) -> f64 {
        self.inner.variance()
    }

    /// `n_sq/2 · Var(m)`, comparable with the limiting variance.
    fn clt_variance(&self) -> f64 {
        self.inner.clt_variance()
    }

    /// MGF of the scaled fluctuation. `scaling` is `"clt"`, `"critical"` or
    /// `"auto"`; `centering` is `"maximizer"` or `"exact_mean"`.
    #[pyo3(signature = (t, scaling = "auto", centering = "maximizer"))]
    fn mgf(&self, t: f64, scaling: &str, centering: &str) -> PyResult<f64> {
        let sc = match scaling {
            "clt" => Scaling::Clt,
            "critical" => Scaling::Critical,
            "auto" if self.inner.portrait.regime == Regime::CriticalPoint => Scaling::Critical,
            "auto" => Scaling::Clt,
            other => return Err(EdgetriError::new_err(format!("unknown scaling {other:?}"))),
        };
        let ce = match centering {
            "maximizer" => Centering::Maximizer,
            "exact_mean" => Centering::ExactMean,
            other => return Err(EdgetriError::new_err(format!("unknown centering {other:?}"))),
        };
        scaled_fluctuation_mgf(&self.inner, t, sc, ce).map_err(err)
    }

    /// Scaled mean absolute deviation from the maximizer; on the critical
    /// curve pass `which` to condition on one basin.
    #[pyo3(signature = (which = None, delta = DEFAULT_DELTA))]
    fn abs_deviation(&self, which: Option<usize>, delta: f64) -> PyResult<f64> {
        let window = match which {
            Some(i) => Some(ConditionalWindow::around_maximizer(&self.inner, i, delta).map_err(err)?),
            None => None,
        };
        abs_deviation_scaled(&self.inner, window.as_ref()).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.probabilities.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "ExactDistribution(n={}, alpha={}, h={}, scale={:?})",
            self.inner.model.n, self.inner.model.params.alpha, self.inner.model.params.h, self.inner.model.scale
        )
    }
}

#[pyfunction]
#[pyo3(signature = (n, alpha, h, scale = "vertex_square"))]
fn exact_distribution(n: usize, alpha: f64, h: f64, scale: &str) -> PyResult<PyExactDistribution> {
    let model = edgetri::MeanFieldModel::new(n, params(alpha, h)?).with_scale(self::scale(scale)?);
    Ok(PyExactDistribution {
        inner: model.distribution().map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (n, alpha, h, delta = DEFAULT_DELTA, scale = "pair_count"))]
fn laplace_check<'py>(
    py: Python<'py>,
    n: usize,
    alpha: f64,
    h: f64,
    delta: f64,
    scale: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let model = edgetri::MeanFieldModel::new(n, params(alpha, h)?).with_scale(self::scale(scale)?);
    to_py(py, &edgetri::laplace_check(model, delta).map_err(err)?)
}

#[pyfunction]
fn enumerate<'py>(py: Python<'py>, n: usize, alpha: f64, h: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &edgetri::enumerate(n, params(alpha, h)?).map_err(err)?)
}

/// Coefficients of `Z` in the fugacity `e^h`, optionally with its zeros as
/// Python complex numbers.
#[pyfunction]
#[pyo3(signature = (n, alpha, zeros = false))]
fn partition_polynomial<'py>(py: Python<'py>, n: usize, alpha: f64, zeros: bool) -> PyResult<Bound<'py, PyDict>> {
    params(alpha, 0.0)?;
    let poly = edgetri::polynomial_coefficients(n, alpha).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("n", poly.n)?;
    out.set_item("alpha", poly.alpha)?;
    out.set_item("degree", poly.degree)?;
    out.set_item("log_coefficients", poly.log_coefficients.clone())?;
    if zeros {
        let z: Vec<Bound<'py, PyComplex>> = edgetri::lee_yang_zeros(&poly)
            .map_err(err)?
            .into_iter()
            .map(|z| PyComplex::from_doubles(py, z.re, z.im))
            .collect();
        out.set_item("zeros", z)?;
    }
    Ok(out)
}

/// Simple graph with cached edge and triangle counts.
#[pyclass(name = "GraphState", module = "edgetri")]
pub struct PyGraphState {
    inner: edgetri::GraphState,
}

#[pymethods]
impl PyGraphState {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Self {
            inner: edgetri::GraphState::from_edges(n, &edges).map_err(err)?,
        })
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        Self {
            inner: edgetri::GraphState::complete(n),
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edge_count(&self) -> u64 {
        self.inner.edge_count()
    }

    #[getter]
    fn triangle_count(&self) -> u64 {
        self.inner.triangle_count()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.inner.has_edge(u, v)
    }

    fn common_neighbors(&self, u: usize, v: usize) -> PyResult<u32> {
        self.inner.common_neighbors(u, v).map_err(err)
    }

    fn toggle_edge(&mut self, u: usize, v: usize) -> PyResult<()> {
        self.inner.toggle_edge(u, v).map_err(err)
    }

    /// Heat-bath update with the given uniform draw; returns whether the
    /// edge changed.
    fn glauber_update(&mut self, u: usize, v: usize, draw: f64, alpha: f64, h: f64) -> PyResult<bool> {
        self.inner.glauber_update(u, v, draw, ModelParams::new(alpha, h)).map_err(err)
    }

    fn hamiltonian(&self, alpha: f64, h: f64) -> f64 {
        self.inner.hamiltonian(ModelParams::new(alpha, h))
    }

    /// `(edges, triangles)` recounted from the adjacency bits.
    fn full_recount(&self) -> (u64, u64) {
        self.inner.full_recount()
    }

    fn __repr__(&self) -> String {
        format!(
            "GraphState(n={}, edges={}, triangles={})",
            self.inner.n(),
            self.inner.edge_count(),
            self.inner.triangle_count()
        )
    }
}

/// Run one Glauber chain; returns the config, densities and flip counts.
#[pyfunction]
#[pyo3(signature = (n, alpha, h, seed, sweeps, burn_in_sweeps = 100, thinning = 1, stream = 0, init = "empty", init_value = None))]
#[allow(clippy::too_many_arguments)]
fn run_chain<'py>(
    py: Python<'py>,
    n: usize,
    alpha: f64,
    h: f64,
    seed: u64,
    sweeps: u64,
    burn_in_sweeps: u64,
    thinning: u64,
    stream: u64,
    init: &str,
    init_value: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let config = ChainConfig {
        n,
        params: params(alpha, h)?,
        seed,
        stream,
        init: parse_init(init, init_value).map_err(EdgetriError::new_err)?,
        burn_in_sweeps,
        sweeps,
        thinning,
    };
    let trace = py.detach(|| edgetri::run_chain(&config)).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("config", to_py(py, &trace.config)?)?;
    out.set_item("sweep", trace.samples.iter().map(|s| s.sweep).collect::<Vec<_>>())?;
    out.set_item("edge_density", trace.edge_densities())?;
    out.set_item("triangle_density", trace.triangle_densities())?;
    out.set_item("updates", trace.stats.updates)?;
    out.set_item("flips", trace.stats.flips)?;
    Ok(out)
}

/// Mean, variance, moments, autocorrelation time and standard error.
#[pyfunction]
fn summarize<'py>(py: Python<'py>, samples: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &edgetri::summarize(&samples).map_err(err)?)
}

fn budget(seed: u64, burn_in_sweeps: u64, samples: u64) -> ChainBudget {
    ChainBudget {
        seed,
        burn_in_sweeps,
        samples,
        thinning: 1,
    }
}

#[pyfunction]
#[pyo3(signature = (alpha, h, n_list, seed, burn_in_sweeps = 1000, samples = 10_000))]
fn verify_slln<'py>(
    py: Python<'py>,
    alpha: f64,
    h: f64,
    n_list: Vec<usize>,
    seed: u64,
    burn_in_sweeps: u64,
    samples: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let b = budget(seed, burn_in_sweeps, samples);
    let v = py.detach(|| edgetri::verify_slln(ModelParams::new(alpha, h), &n_list, &b));
    to_py(py, &v.map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (alpha, h, n, seed, burn_in_sweeps = 1000, samples = 10_000))]
fn verify_clt<'py>(
    py: Python<'py>,
    alpha: f64,
    h: f64,
    n: usize,
    seed: u64,
    burn_in_sweeps: u64,
    samples: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let b = budget(seed, burn_in_sweeps, samples);
    let v = py.detach(|| edgetri::verify_clt(ModelParams::new(alpha, h), n, &b));
    to_py(py, &v.map_err(err)?)
}

/// Exact mean-field check of the quartic law at the critical point.
#[pyfunction]
#[pyo3(signature = (n_list, scale = "pair_count"))]
fn verify_critical_scaling<'py>(py: Python<'py>, n_list: Vec<usize>, scale: &str) -> PyResult<Bound<'py, PyAny>> {
    let s = self::scale(scale)?;
    let v = py.detach(|| {
        edgetri::verify_critical_scaling(&n_list, &ChainBudget::default(), CriticalSource::MeanFieldExact, s)
    });
    to_py(py, &v.map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (alpha, h, n_list, epsilon = DEFAULT_EPSILON, scale = "pair_count"))]
fn verify_mixture<'py>(
    py: Python<'py>,
    alpha: f64,
    h: f64,
    n_list: Vec<usize>,
    epsilon: f64,
    scale: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let s = self::scale(scale)?;
    let v = py.detach(|| edgetri::verify_mixture(ModelParams::new(alpha, h), &n_list, epsilon, s));
    to_py(py, &v.map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (alpha, h, n_list, scale = "pair_count"))]
fn verify_rate<'py>(py: Python<'py>, alpha: f64, h: f64, n_list: Vec<usize>, scale: &str) -> PyResult<Bound<'py, PyAny>> {
    let s = self::scale(scale)?;
    let v = py.detach(|| edgetri::verify_rate(ModelParams::new(alpha, h), &n_list, s));
    to_py(py, &v.map_err(err)?)
}

#[pymodule]
fn _edgetri(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("EdgetriError", m.py().get_type::<EdgetriError>())?;
    m.add("ALPHA_C", edgetri::ALPHA_C)?;
    m.add("H_C", edgetri::H_C)?;
    m.add("U_C", edgetri::U_C)?;
    m.add_class::<PyPhasePortrait>()?;
    m.add_class::<PyExactDistribution>()?;
    m.add_class::<PyGraphState>()?;
    m.add_function(wrap_pyfunction!(classify_phase, m)?)?;
    m.add_function(wrap_pyfunction!(free_energy, m)?)?;
    m.add_function(wrap_pyfunction!(objective, m)?)?;
    m.add_function(wrap_pyfunction!(rate_function, m)?)?;
    m.add_function(wrap_pyfunction!(critical_curve_h, m)?)?;
    m.add_function(wrap_pyfunction!(rate_taylor_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(exact_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_check, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(partition_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(run_chain, m)?)?;
    m.add_function(wrap_pyfunction!(summarize, m)?)?;
    m.add_function(wrap_pyfunction!(verify_slln, m)?)?;
    m.add_function(wrap_pyfunction!(verify_clt, m)?)?;
    m.add_function(wrap_pyfunction!(verify_critical_scaling, m)?)?;
    m.add_function(wrap_pyfunction!(verify_mixture, m)?)?;
    m.add_function(wrap_pyfunction!(verify_rate, m)?)?;
    Ok(())
}
