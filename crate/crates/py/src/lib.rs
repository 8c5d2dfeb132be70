//! Python bindings for `qtomo_core`.
//!
//! Matrices cross the boundary as nested lists of Python `complex`; any
//! sequence of sequences of numbers (including 2-D NumPy arrays) is accepted
//! on input. Core errors surface as `ValueError`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use qtomo_core as core;
use qtomo_core::{ComplexMatrix, QtomoError};

type Matrix = Vec<Vec<Complex64>>;

fn value_error(e: QtomoError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: Matrix) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(value_error)
}

fn to_rows(m: &ComplexMatrix) -> Matrix {
    m.to_rows()
}

/// Pure qubit cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
#[pyclass(frozen, skip_from_py_object, module = "qtomo", name = "PureQubit")]
#[derive(Clone, Copy)]
pub struct PyPureQubit(core::PureQubit);

#[pymethods]
impl PyPureQubit {
    #[new]
    fn new(theta: f64, phi: f64) -> PyResult<Self> {
        core::PureQubit::new(theta, phi).map(Self).map_err(value_error)
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.0.phi()
    }

    fn amplitudes(&self) -> (Complex64, Complex64) {
        let [a, b] = self.0.amplitudes();
        (a, b)
    }

    fn bloch(&self) -> (f64, f64, f64) {
        let [x, y, z] = self.0.bloch();
        (x, y, z)
    }

    fn density(&self) -> Matrix {
        to_rows(&core::pure_density(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("PureQubit(theta={}, phi={})", self.0.theta(), self.0.phi())
    }
}

/// Stokes parameters (S0, S1, S2, S3).
#[pyclass(frozen, skip_from_py_object, module = "qtomo", name = "StokesVector")]
#[derive(Clone, Copy)]
pub struct PyStokesVector(core::StokesVector);

#[pymethods]
impl PyStokesVector {
    #[new]
    #[pyo3(signature = (s1, s2, s3, s0 = 1.0))]
    fn new(s1: f64, s2: f64, s3: f64, s0: f64) -> PyResult<Self> {
        core::StokesVector::new(s0, s1, s2, s3).map(Self).map_err(value_error)
    }

    #[getter]
    fn s0(&self) -> f64 {
        self.0.s0
    }

    #[getter]
    fn s1(&self) -> f64 {
        self.0.s1
    }

    #[getter]
    fn s2(&self) -> f64 {
        self.0.s2
    }

    #[getter]
    fn s3(&self) -> f64 {
        self.0.s3
    }

    fn bloch(&self) -> (f64, f64, f64) {
        let [x, y, z] = self.0.bloch();
        (x, y, z)
    }

    fn bloch_norm(&self) -> f64 {
        self.0.bloch_norm()
    }

    #[pyo3(name = "to_list")]
    fn as_list(&self) -> Vec<f64> {
        self.0.to_array().to_vec()
    }

    fn __repr__(&self) -> String {
        let s = self.0;
        format!("StokesVector(s0={}, s1={}, s2={}, s3={})", s.s0, s.s1, s.s2, s.s3)
    }
}

/// Player strategy U(β, α).
#[pyclass(frozen, skip_from_py_object, module = "qtomo", name = "Strategy")]
#[derive(Clone, Copy)]
pub struct PyStrategy(core::Strategy);

#[pymethods]
impl PyStrategy {
    #[new]
    #[pyo3(signature = (beta, alpha = 0.0))]
    fn new(beta: f64, alpha: f64) -> PyResult<Self> {
        core::Strategy::new(beta, alpha).map(Self).map_err(value_error)
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    fn unitary(&self) -> Matrix {
        to_rows(&core::strategy_unitary(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("Strategy(beta={}, alpha={})", self.0.beta(), self.0.alpha())
    }
}

/// Diagonal payoff entries (e00, e01, e10, e11), each ±1.
#[pyclass(frozen, skip_from_py_object, module = "qtomo", name = "PayoffMatrix")]
#[derive(Clone, Copy)]
pub struct PyPayoffMatrix(core::PayoffMatrix);

#[pymethods]
impl PyPayoffMatrix {
    #[new]
    fn new(e00: f64, e01: f64, e10: f64, e11: f64) -> PyResult<Self> {
        core::PayoffMatrix::new(e00, e01, e10, e11).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn alice() -> Self {
        Self(core::PayoffMatrix::alice())
    }

    #[staticmethod]
    fn bob() -> Self {
        Self(core::PayoffMatrix::bob())
    }

    fn entries(&self) -> Vec<f64> {
        self.0.entries().to_vec()
    }

    fn operator(&self) -> Matrix {
        to_rows(&core::payoff_operator(&self.0))
    }

    fn __repr__(&self) -> String {
        let [a, b, c, d] = self.0.entries();
        format!("PayoffMatrix({a}, {b}, {c}, {d})")
    }
}

/// Strategies and payoffs of one protocol step.
#[pyclass(frozen, skip_from_py_object, module = "qtomo", name = "ProtocolStep")]
pub struct PyProtocolStep(core::ProtocolStep);

#[pymethods]
impl PyProtocolStep {
    #[getter]
    fn label(&self) -> &'static str {
        self.0.label.as_str()
    }

    #[getter]
    fn number(&self) -> usize {
        self.0.number
    }

    #[getter]
    fn strategy_a(&self) -> PyStrategy {
        PyStrategy(self.0.strategy_a)
    }

    #[getter]
    fn strategy_b(&self) -> PyStrategy {
        PyStrategy(self.0.strategy_b)
    }

    #[getter]
    fn payoff_a(&self) -> PyPayoffMatrix {
        PyPayoffMatrix(self.0.payoff_a)
    }

    #[getter]
    fn payoff_b(&self) -> PyPayoffMatrix {
        PyPayoffMatrix(self.0.payoff_b)
    }

    fn __repr__(&self) -> String {
        format!("ProtocolStep(label={}, number={})", self.0.label, self.0.number)
    }
}

/// Finite-shot estimate of one payoff.
#[pyclass(frozen, skip_from_py_object, module = "qtomo", name = "SampleEstimate")]
#[derive(Clone, Copy)]
pub struct PySampleEstimate(core::SampleEstimate);

#[pymethods]
impl PySampleEstimate {
    #[getter]
    fn value(&self) -> f64 {
        self.0.value
    }

    #[getter]
    fn shots(&self) -> u64 {
        self.0.shots
    }

    #[getter]
    fn std_error(&self) -> f64 {
        self.0.std_error
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    #[getter]
    fn label(&self) -> Option<&'static str> {
        self.0.step_label.map(core::StepLabel::as_str)
    }

    fn __repr__(&self) -> String {
        let e = self.0;
        format!("SampleEstimate(value={}, shots={}, std_error={})", e.value, e.shots, e.std_error)
    }
}

/// Estimated Stokes vector, reconstructed density and optional scores.
#[pyclass(frozen, skip_from_py_object, module = "qtomo", name = "TomographyResult")]
pub struct PyTomographyResult(core::TomographyResult);

#[pymethods]
impl PyTomographyResult {
    #[getter]
    fn stokes(&self) -> PyStokesVector {
        PyStokesVector(self.0.stokes_est)
    }

    #[getter]
    fn per_step(&self) -> Option<Vec<PySampleEstimate>> {
        self.0.per_step.map(|steps| steps.into_iter().map(PySampleEstimate).collect())
    }

    #[getter]
    fn rho_hat(&self) -> Matrix {
        to_rows(&self.0.rho_hat)
    }

    #[getter]
    fn projected(&self) -> bool {
        self.0.projected
    }

    #[getter]
    fn fidelity(&self) -> Option<f64> {
        self.0.fidelity
    }

    #[getter]
    fn trace_distance(&self) -> Option<f64> {
        self.0.trace_dist
    }

    fn __repr__(&self) -> String {
        let s = self.0.stokes_est;
        let projected = if self.0.projected { "True" } else { "False" };
        let fidelity = self.0.fidelity.map_or_else(|| "None".to_string(), |f| f.to_string());
        format!(
            "TomographyResult(s1={}, s2={}, s3={}, projected={projected}, fidelity={fidelity})",
            s.s1, s.s2, s.s3
        )
    }
}

/// Measurement planes z = S3, y = S2, x = S1 and their intersection.
#[pyclass(frozen, skip_from_py_object, module = "qtomo", name = "BlochGeometry")]
pub struct PyBlochGeometry(core::BlochGeometry);

#[pymethods]
impl PyBlochGeometry {
    #[getter]
    fn plane_z(&self) -> f64 {
        self.0.plane_z
    }

    #[getter]
    fn plane_y(&self) -> f64 {
        self.0.plane_y
    }

    #[getter]
    fn plane_x(&self) -> f64 {
        self.0.plane_x
    }

    #[getter]
    fn point(&self) -> (f64, f64, f64) {
        let [x, y, z] = self.0.point;
        (x, y, z)
    }
}

/// |ψ⟩⟨ψ| for a pure qubit.
#[pyfunction]
fn pure_density(q: &PyPureQubit) -> Matrix {
    to_rows(&core::pure_density(&q.0))
}

/// Stokes parameters Tr(σ_i ρ) of a 2×2 density matrix.
#[pyfunction]
fn stokes_of(rho: Matrix) -> PyResult<PyStokesVector> {
    core::stokes_of(&to_matrix(rho)?).map(PyStokesVector).map_err(value_error)
}

/// ρ = ½ Σ S_i σ_i; rejects vectors outside the Bloch ball.
#[pyfunction]
fn density_from_stokes(s: &PyStokesVector) -> PyResult<Matrix> {
    core::density_from_stokes(&s.0).map(|m| to_rows(&m)).map_err(value_error)
}

/// Evolves |0⟩⟨0| ⊗ ρ under the two strategies and returns ρ_f.
#[pyfunction]
fn evolve(rho: Matrix, strategy_a: &PyStrategy, strategy_b: &PyStrategy) -> PyResult<Matrix> {
    let rho_in = core::initial_state(&to_matrix(rho)?).map_err(value_error)?;
    let run = core::evolve(&rho_in, strategy_a.0, strategy_b.0).map_err(value_error)?;
    Ok(to_rows(run.rho_f()))
}

/// Expected payoff Tr(P ρ_f) for a single-qubit ρ and the given strategies.
#[pyfunction]
fn payoff_exact(
    rho: Matrix,
    strategy_a: &PyStrategy,
    strategy_b: &PyStrategy,
    payoff: &PyPayoffMatrix,
) -> PyResult<f64> {
    let rho_in = core::initial_state(&to_matrix(rho)?).map_err(value_error)?;
    let run = core::evolve(&rho_in, strategy_a.0, strategy_b.0).map_err(value_error)?;
    Ok(core::payoff_exact(&run, &payoff.0))
}

/// Closed-form payoff for a pure input state.
#[pyfunction]
fn payoff_closed_form(
    payoff: &PyPayoffMatrix,
    strategy_a: &PyStrategy,
    strategy_b: &PyStrategy,
    q: &PyPureQubit,
) -> f64 {
    core::payoff_closed_form(&payoff.0, &strategy_a.0, &strategy_b.0, &q.0)
}

/// The three protocol steps in order S2, S1, S3.
#[pyfunction]
fn protocol_steps() -> Vec<PyProtocolStep> {
    core::protocol_steps().into_iter().map(PyProtocolStep).collect()
}

/// Stokes vector read off the exact payoffs of the protocol.
#[pyfunction]
fn exact_stokes(rho: Matrix) -> PyResult<PyStokesVector> {
    core::exact_stokes(&to_matrix(rho)?).map(PyStokesVector).map_err(value_error)
}

/// Exact-payoff tomography of a density matrix.
#[pyfunction]
fn exact_tomography(rho: Matrix) -> PyResult<PyTomographyResult> {
    core::exact_tomography(&to_matrix(rho)?).map(PyTomographyResult).map_err(value_error)
}

/// Sampled tomography of a density matrix with `shots` per step.
#[pyfunction]
fn estimate_stokes(py: Python<'_>, rho: Matrix, shots: u64, seed: u64) -> PyResult<PyTomographyResult> {
    let rho = to_matrix(rho)?;
    py.detach(|| core::estimate_stokes(&rho, shots, seed))
        .map(PyTomographyResult)
        .map_err(value_error)
}

/// Sampled tomography of a pure state, scored against it.
#[pyfunction]
fn run_tomography(py: Python<'_>, q: &PyPureQubit, shots: u64, seed: u64) -> PyResult<PyTomographyResult> {
    let q = q.0;
    py.detach(|| core::run_tomography(&q, shots, seed))
        .map(PyTomographyResult)
        .map_err(value_error)
}

/// Density matrix from Stokes parameters; returns `(rho, projected)`.
#[pyfunction]
#[pyo3(signature = (s, project = true))]
fn reconstruct(s: &PyStokesVector, project: bool) -> PyResult<(Matrix, bool)> {
    core::reconstruct(&s.0, project)
        .map(|(m, p)| (to_rows(&m), p))
        .map_err(value_error)
}

/// Measurement planes for a pure state.
#[pyfunction]
fn bloch_geometry(q: &PyPureQubit) -> PyBlochGeometry {
    PyBlochGeometry(core::bloch_geometry(&q.0))
}

/// ⟨ψ|ρ|ψ⟩.
#[pyfunction]
fn fidelity(q: &PyPureQubit, rho: Matrix) -> PyResult<f64> {
    core::fidelity(&q.0, &to_matrix(rho)?).map_err(value_error)
}

/// ½‖a − b‖₁ for 2×2 densities.
#[pyfunction]
fn trace_distance(a: Matrix, b: Matrix) -> PyResult<f64> {
    core::trace_distance(&to_matrix(a)?, &to_matrix(b)?).map_err(value_error)
}

/// Deterministic sub-seed for stream `index` of `master`.
#[pyfunction]
fn derive_seed(master: u64, index: u64) -> u64 {
    core::derive_seed(master, index)
}

#[pymodule]
fn qtomo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPureQubit>()?;
    m.add_class::<PyStokesVector>()?;
    m.add_class::<PyStrategy>()?;
    m.add_class::<PyPayoffMatrix>()?;
    m.add_class::<PyProtocolStep>()?;
    m.add_class::<PySampleEstimate>()?;
    m.add_class::<PyTomographyResult>()?;
    m.add_class::<PyBlochGeometry>()?;
    m.add_function(wrap_pyfunction!(pure_density, m)?)?;
    m.add_function(wrap_pyfunction!(stokes_of, m)?)?;
    m.add_function(wrap_pyfunction!(density_from_stokes, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(payoff_exact, m)?)?;
    m.add_function(wrap_pyfunction!(payoff_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(protocol_steps, m)?)?;
    m.add_function(wrap_pyfunction!(exact_stokes, m)?)?;
    m.add_function(wrap_pyfunction!(exact_tomography, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_stokes, m)?)?;
    m.add_function(wrap_pyfunction!(run_tomography, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(bloch_geometry, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(trace_distance, m)?)?;
    m.add_function(wrap_pyfunction!(derive_seed, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
