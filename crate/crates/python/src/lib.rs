//! Python bindings: the single-torus and two-tori configurations with
//! their spectrum, simulation and classification entry points.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fhn_torus::analysis::{classify_pattern, consensus_frequency, two_tori_report, PatternReport};
use fhn_torus::dynamics::{
    simulate_torus, simulate_two_tori, IntegratorSettings,
};
use fhn_torus::model::{NetworkState, NeuronParams};
use fhn_torus::normalform;
use fhn_torus::spectrum::{
    closed_form_eigenvalues, find_hopf_boundary, origin_stability, two_tori_max_re, ModeIndex,
    VaryParam,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn settings(
    dt: f64,
    t_end: f64,
    record_stride: usize,
    transient_discard: f64,
) -> PyResult<IntegratorSettings> {
    let s = IntegratorSettings { dt, t_end, record_stride, transient_discard };
    s.validate().map_err(value_err)?;
    Ok(s)
}

fn report_dict<'py>(py: Python<'py>, report: &PatternReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kind", report.kind.to_string())?;
    d.set_item("phase_shift", report.phase_shift)?;
    d.set_item("dominant_freq_per_neuron", report.dominant_freq_per_neuron.clone())?;
    d.set_item("diagonal_symmetry_ok", report.diagonal_symmetry_ok)?;
    d.set_item("consensus_frequency", consensus_frequency(report))?;
    Ok(d)
}

/// Single-torus problem definition.
#[pyclass(name = "TorusConfig")]
#[derive(Clone)]
struct PyTorusConfig {
    inner: fhn_torus::model::TorusConfig,
}

#[pymethods]
impl PyTorusConfig {
    #[new]
    fn new(n: usize, a: f64, b: f64, c: f64, gamma: f64, delta: f64) -> PyResult<Self> {
        let neuron = NeuronParams::new(a, b, c).map_err(value_err)?;
        let inner =
            fhn_torus::model::TorusConfig::new(n, neuron, gamma, delta).map_err(value_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    /// Non-fatal diagnostics (parameter regime, even-N caveat).
    fn diagnostics(&self) -> Vec<String> {
        self.inner.diagnostics()
    }

    /// Closed-form eigenvalues: one `((r, s), (re1, im1), (re2, im2))`
    /// triple per mode.
    #[allow(clippy::type_complexity)]
    fn eigenvalues(&self) -> Vec<((usize, usize), (f64, f64), (f64, f64))> {
        let n = self.inner.n;
        let mut out = Vec::with_capacity(n * n);
        for r in 0..n {
            for s in 0..n {
                let (l1, l2) = closed_form_eigenvalues(ModeIndex { r, s }, &self.inner);
                out.push(((r, s), (l1.re, l1.im), (l2.re, l2.im)));
            }
        }
        out
    }

    fn origin_stability<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let verdict = origin_stability(&self.inner);
        let d = PyDict::new(py);
        d.set_item("stable", verdict.stable)?;
        d.set_item("max_re", verdict.max_re)?;
        d.set_item(
            "critical_modes",
            verdict.critical_modes.iter().map(|m| (m.r, m.s)).collect::<Vec<_>>(),
        )?;
        Ok(d)
    }

    /// Critical coupling where the given mode crosses the imaginary axis.
    /// `vary` is `"gamma"` or `"delta"`.
    fn hopf_boundary(&self, r: usize, s: usize, vary: &str, lo: f64, hi: f64) -> PyResult<f64> {
        let mode = ModeIndex::new(r, s, self.inner.n).map_err(value_err)?;
        let vary = match vary {
            "gamma" => VaryParam::Gamma,
            "delta" => VaryParam::Delta,
            other => return Err(PyValueError::new_err(format!("vary must be gamma or delta, got {other}"))),
        };
        find_hopf_boundary(mode, &self.inner, vary, (lo, hi)).map_err(value_err)
    }

    /// Integrate from row-major grids `x`, `y`; returns `(times, states)`
    /// with states in the interleaved row-major layout.
    #[pyo3(signature = (x, y, dt=0.01, t_end=400.0, record_stride=5, transient_discard=200.0))]
    #[allow(clippy::too_many_arguments)]
    fn simulate(
        &self,
        x: Vec<f64>,
        y: Vec<f64>,
        dt: f64,
        t_end: f64,
        record_stride: usize,
        transient_discard: f64,
    ) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
        let ic = NetworkState::from_grids(self.inner.n, &x, &y).map_err(value_err)?;
        let s = settings(dt, t_end, record_stride, transient_discard)?;
        let traj = simulate_torus(&self.inner, &ic, &s).map_err(value_err)?;
        let states = (0..traj.len()).map(|i| traj.state_row(i).to_vec()).collect();
        Ok((traj.times().to_vec(), states))
    }

    /// Integrate and classify the post-transient pattern.
    #[pyo3(signature = (x, y, dt=0.01, t_end=400.0, record_stride=5, transient_discard=200.0))]
    #[allow(clippy::too_many_arguments)]
    fn simulate_and_classify<'py>(
        &self,
        py: Python<'py>,
        x: Vec<f64>,
        y: Vec<f64>,
        dt: f64,
        t_end: f64,
        record_stride: usize,
        transient_discard: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let ic = NetworkState::from_grids(self.inner.n, &x, &y).map_err(value_err)?;
        let s = settings(dt, t_end, record_stride, transient_discard)?;
        let traj = simulate_torus(&self.inner, &ic, &s).map_err(value_err)?;
        report_dict(py, &classify_pattern(&traj))
    }
}

/// Two identical tori with mean-field coupling.
#[pyclass(name = "TwoToriConfig")]
#[derive(Clone)]
struct PyTwoToriConfig {
    inner: fhn_torus::model::TwoToriConfig,
}

#[pymethods]
impl PyTwoToriConfig {
    #[new]
    #[allow(clippy::too_many_arguments)]
    fn new(n: usize, a: f64, b: f64, c: f64, gamma: f64, delta: f64, epsilon: f64) -> PyResult<Self> {
        let torus = PyTorusConfig::new(n, a, b, c, gamma, delta)?.inner;
        let inner = fhn_torus::model::TwoToriConfig::new(torus, epsilon).map_err(value_err)?;
        Ok(Self { inner })
    }

    /// Largest real part of the coupled linearization at the origin.
    fn max_re(&self) -> f64 {
        two_tori_max_re(&self.inner)
    }

    /// Integrate both tori and report per-torus classifications plus the
    /// torus2/torus1 frequency ratio.
    #[pyo3(signature = (x1, y1, x2, y2, dt=0.01, t_end=400.0, record_stride=5, transient_discard=200.0))]
    #[allow(clippy::too_many_arguments)]
    fn simulate_and_report<'py>(
        &self,
        py: Python<'py>,
        x1: Vec<f64>,
        y1: Vec<f64>,
        x2: Vec<f64>,
        y2: Vec<f64>,
        dt: f64,
        t_end: f64,
        record_stride: usize,
        transient_discard: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let n = self.inner.torus.n;
        let t1 = NetworkState::from_grids(n, &x1, &y1).map_err(value_err)?;
        let t2 = NetworkState::from_grids(n, &x2, &y2).map_err(value_err)?;
        let ic = NetworkState::join(&t1, &t2).map_err(value_err)?;
        let s = settings(dt, t_end, record_stride, transient_discard)?;
        let traj = simulate_two_tori(&self.inner, &ic, &s).map_err(value_err)?;
        let (r1, r2, ratio) = two_tori_report(&traj).map_err(value_err)?;
        let d = PyDict::new(py);
        d.set_item("torus1", report_dict(py, &r1)?)?;
        d.set_item("torus2", report_dict(py, &r2)?)?;
        d.set_item("freq_ratio", ratio)?;
        Ok(d)
    }
}

/// First-Lyapunov-sign classification of the single-neuron Hopf point at
/// `c = a`: returns `(phi, sixteen_s_star, label)`.
#[pyfunction]
fn first_lyapunov_sign(a: f64, b: f64, c: f64) -> PyResult<(f64, f64, String)> {
    let p = NeuronParams::new(a, b, c).map_err(value_err)?;
    let nf = normalform::first_lyapunov_sign(&p).map_err(value_err)?;
    Ok((nf.varphi, nf.s_star_times_16, nf.classification.label().to_string()))
}

/// The reference 3x3 initial conditions as row-major `(x, y)` grids.
#[pyfunction]
fn fig2_initial_conditions() -> (Vec<f64>, Vec<f64>) {
    (fhn_torus::dynamics::FIG2_X0.to_vec(), fhn_torus::dynamics::FIG2_Y0.to_vec())
}

/// Row-major tiling of the reference 9-vector over an N x N lattice.
#[pyfunction]
fn tiled_initial_conditions(n: usize) -> (Vec<f64>, Vec<f64>) {
    let s = fhn_torus::dynamics::tiled_initial_conditions(n);
    let nn = n * n;
    let mut x = Vec::with_capacity(nn);
    let mut y = Vec::with_capacity(nn);
    for p in 0..nn {
        x.push(s.values()[2 * p]);
        y.push(s.values()[2 * p + 1]);
    }
    (x, y)
}

#[pymodule]
fn fhn_torus_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTorusConfig>()?;
    m.add_class::<PyTwoToriConfig>()?;
    m.add_function(wrap_pyfunction!(first_lyapunov_sign, m)?)?;
    m.add_function(wrap_pyfunction!(fig2_initial_conditions, m)?)?;
    m.add_function(wrap_pyfunction!(tiled_initial_conditions, m)?)?;
    m.add("SCHEMA_VERSION", fhn_torus::cli::SCHEMA_VERSION)?;
    Ok(())
}
