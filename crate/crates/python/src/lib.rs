use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use samrot_core::theory::{self as theory, MeanElements as CoreMean, SamTheory as CoreTheory};
use samrot_core::{oracle, rigid, series, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(_) | Error::Ordering { .. } | Error::Symmetry { .. } | Error::ProlateSingularity { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for samrot_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

#[pyclass(frozen, module = "samrot")]
#[derive(Clone, Copy)]
struct InertiaParams(samrot_core::InertiaParams);

#[pymethods]
impl InertiaParams {
    #[staticmethod]
    fn from_moments(a: f64, b: f64, c: f64) -> PyResult<Self> {
        samrot_core::InertiaParams::from_moments(a, b, c).py().map(Self)
    }

    #[staticmethod]
    #[pyo3(signature = (alpha, beta, c = 1.0))]
    fn from_alpha_beta(alpha: f64, beta: f64, c: f64) -> PyResult<Self> {
        samrot_core::InertiaParams::from_alpha_beta(alpha, beta, c).py().map(Self)
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a
    }
    #[getter]
    fn b(&self) -> f64 {
        self.0.b
    }
    #[getter]
    fn c(&self) -> f64 {
        self.0.c
    }
    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }
    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta
    }

    fn sigma(&self) -> f64 {
        self.0.sigma()
    }

    /// `(alpha*, beta*)` of the long-axis-mode arrangement.
    fn lam(&self) -> (f64, f64) {
        let l = rigid::lam_params(&self.0);
        (l.alpha_star, l.beta_star)
    }

    fn __repr__(&self) -> String {
        format!("InertiaParams(A={}, B={}, C={}, alpha={}, beta={})", self.0.a, self.0.b, self.0.c, self.0.alpha, self.0.beta)
    }
}

#[pyclass(frozen, module = "samrot")]
#[derive(Clone, Copy)]
struct AndoyerState(samrot_core::AndoyerState);

#[pymethods]
impl AndoyerState {
    #[new]
    #[pyo3(signature = (mu, nu, m, n, lambda_ = 0.0, big_lambda = 0.0))]
    fn new(mu: f64, nu: f64, m: f64, n: f64, lambda_: f64, big_lambda: f64) -> PyResult<Self> {
        samrot_core::AndoyerState::new(lambda_, mu, nu, big_lambda, m, n).py().map(Self)
    }

    /// State with `N = M cos J`.
    #[staticmethod]
    #[pyo3(signature = (inclination, mu = 0.0, nu = 0.0, m = 1.0))]
    fn from_inclination(inclination: f64, mu: f64, nu: f64, m: f64) -> PyResult<Self> {
        samrot_core::AndoyerState::from_inclination(inclination, mu, nu, m).py().map(Self)
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.0.mu
    }
    #[getter]
    fn nu(&self) -> f64 {
        self.0.nu
    }
    #[getter(M)]
    fn m(&self) -> f64 {
        self.0.m
    }
    #[getter(N)]
    fn n(&self) -> f64 {
        self.0.n
    }
    #[getter(lambda_)]
    fn lambda(&self) -> f64 {
        self.0.lambda
    }
    #[getter(Lambda)]
    fn big_lambda(&self) -> f64 {
        self.0.big_lambda
    }

    fn mirrored(&self) -> Self {
        Self(self.0.mirrored())
    }

    /// `(J, delta)` with `delta = 2 sin^2(J/2)`.
    fn inclination(&self) -> (f64, f64) {
        rigid::inclination_and_delta(&self.0)
    }

    fn __repr__(&self) -> String {
        let s = &self.0;
        format!("AndoyerState(mu={}, nu={}, M={}, N={})", s.mu, s.nu, s.m, s.n)
    }
}

#[pyclass(frozen, module = "samrot")]
#[derive(Clone, Copy)]
struct ActionAngleState(samrot_core::ActionAngleState);

#[pymethods]
impl ActionAngleState {
    #[new]
    fn new(l: f64, g: f64, big_l: f64, big_g: f64) -> PyResult<Self> {
        samrot_core::ActionAngleState::new(l, g, big_l, big_g).py().map(Self)
    }

    #[getter]
    fn l(&self) -> f64 {
        self.0.l
    }
    #[getter]
    fn g(&self) -> f64 {
        self.0.g
    }
    #[getter(L)]
    fn big_l(&self) -> f64 {
        self.0.big_l
    }
    #[getter(G)]
    fn big_g(&self) -> f64 {
        self.0.big_g
    }

    fn __repr__(&self) -> String {
        let a = &self.0;
        format!("ActionAngleState(l={}, g={}, L={}, G={})", a.l, a.g, a.big_l, a.big_g)
    }
}

#[pyclass(frozen, module = "samrot")]
#[derive(Clone, Copy)]
struct MeanElements(CoreMean);

#[pymethods]
impl MeanElements {
    #[new]
    #[pyo3(signature = (l, g, big_l, big_g, order = theory::DEFAULT_ORDER))]
    fn new(l: f64, g: f64, big_l: f64, big_g: f64, order: usize) -> PyResult<Self> {
        CoreMean::new(l, g, big_l, big_g, order).py().map(Self)
    }

    #[getter]
    fn l(&self) -> f64 {
        self.0.l
    }
    #[getter]
    fn g(&self) -> f64 {
        self.0.g
    }
    #[getter(L)]
    fn big_l(&self) -> f64 {
        self.0.big_l
    }
    #[getter(G)]
    fn big_g(&self) -> f64 {
        self.0.big_g
    }
    #[getter]
    fn order(&self) -> usize {
        self.0.order
    }

    fn delta_prime(&self, beta: f64) -> PyResult<f64> {
        self.0.delta_prime(beta).py()
    }

    fn __repr__(&self) -> String {
        let m = &self.0;
        format!("MeanElements(l={}, g={}, L={}, G={}, order={})", m.l, m.g, m.big_l, m.big_g, m.order)
    }
}

fn warn(py: Python<'_>, warnings: &[theory::Warning]) -> PyResult<()> {
    for w in warnings {
        PyErr::warn(py, &py.get_type::<pyo3::exceptions::PyRuntimeWarning>(), &std::ffi::CString::new(w.to_string())?, 1)?;
    }
    Ok(())
}

#[pyclass(frozen, module = "samrot")]
struct SamTheory(CoreTheory);

#[pymethods]
impl SamTheory {
    #[new]
    #[pyo3(signature = (delta_guard = theory::DEFAULT_DELTA_GUARD))]
    fn new(delta_guard: f64) -> Self {
        Self(CoreTheory::default().with_delta_guard(delta_guard))
    }

    fn averaged_hamiltonian(&self, py: Python<'_>, mean: &MeanElements, alpha: f64, beta: f64, c: f64) -> PyResult<f64> {
        let r = self.0.averaged_hamiltonian(&mean.0, alpha, beta, c).py()?;
        warn(py, &r.warnings)?;
        Ok(r.value)
    }

    /// `(n_l, n_g)`.
    fn secular_frequencies(&self, py: Python<'_>, mean: &MeanElements, alpha: f64, beta: f64, c: f64) -> PyResult<(f64, f64)> {
        let r = self.0.secular_frequencies(&mean.0, alpha, beta, c).py()?;
        warn(py, &r.warnings)?;
        Ok(r.value)
    }

    fn mean_to_osculating(&self, py: Python<'_>, mean: &MeanElements, beta: f64) -> PyResult<ActionAngleState> {
        let r = self.0.mean_to_osculating(&mean.0, beta).py()?;
        warn(py, &r.warnings)?;
        Ok(ActionAngleState(r.value))
    }

    #[pyo3(signature = (state, beta, order = theory::DEFAULT_ORDER))]
    fn osculating_to_mean(&self, py: Python<'_>, state: &ActionAngleState, beta: f64, order: usize) -> PyResult<MeanElements> {
        let r = self.0.osculating_to_mean(&state.0, beta, order).py()?;
        warn(py, &r.warnings)?;
        Ok(MeanElements(r.value))
    }

    /// Osculating states at each of `times`, starting from `state` at `t = 0`.
    #[pyo3(signature = (state, params, times, order = theory::DEFAULT_ORDER))]
    fn propagate(
        &self,
        py: Python<'_>,
        state: &AndoyerState,
        params: &InertiaParams,
        times: Vec<f64>,
        order: usize,
    ) -> PyResult<Vec<AndoyerState>> {
        let p = &params.0;
        let prop = self.0.propagator(&state.0, p.alpha, p.beta, p.c, order).py()?;
        warn(py, prop.warnings())?;
        times.into_iter().map(|t| prop.state_at(t).py().map(AndoyerState)).collect()
    }

    /// Residuals of the classical minimum-inclination expansions.
    fn kinoshita_checks<'py>(
        &self,
        py: Python<'py>,
        mean: &MeanElements,
        alpha: f64,
        beta: f64,
        c: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let r = self.0.kinoshita_checks(&mean.0, alpha, beta, c).py()?;
        let d = PyDict::new(py);
        d.set_item("j", r.j)?;
        d.set_item("nl_residual", r.nl_residual)?;
        d.set_item("ng_nl_residual", r.ng_nl_residual)?;
        d.set_item("n_residual", r.n_residual)?;
        d.set_item("nl_bracket_residual", r.nl_bracket_residual)?;
        d.set_item("ng_nl_printed_residual", r.ng_nl_printed_residual)?;
        Ok(d)
    }

    /// The coefficient tables in use, as a JSON document.
    fn tables_json(&self) -> String {
        self.0.tables().to_json().to_string()
    }
}

#[pyfunction]
fn to_action_angle(state: &AndoyerState, beta: f64) -> PyResult<ActionAngleState> {
    samrot_core::to_action_angle(&state.0, beta).py().map(ActionAngleState)
}

#[pyfunction]
fn from_action_angle(state: &ActionAngleState, beta: f64) -> PyResult<AndoyerState> {
    samrot_core::from_action_angle(&state.0, beta).py().map(AndoyerState)
}

#[pyfunction]
fn hamiltonian(state: &AndoyerState, params: &InertiaParams) -> f64 {
    rigid::hamiltonian_reordered(&state.0, &params.0)
}

/// `(main, perturbation)` of the short-axis-mode split.
#[pyfunction]
fn sam_split(state: &AndoyerState, params: &InertiaParams) -> PyResult<(f64, f64)> {
    let s = rigid::sam_split(&state.0, &params.0).py()?;
    Ok((s.main, s.perturbation))
}

/// Numerical reference trajectory: `n_samples + 1` tuples `(t, state, energy)`.
#[pyfunction]
#[pyo3(signature = (state, params, t_end, tol = 1e-13, n_samples = 10))]
fn integrate(
    py: Python<'_>,
    state: &AndoyerState,
    params: &InertiaParams,
    t_end: f64,
    tol: f64,
    n_samples: usize,
) -> PyResult<Vec<(f64, AndoyerState, f64)>> {
    let (s0, p) = (state.0, params.0);
    let out = py.allow_threads(|| oracle::integrate(&s0, &p, t_end, tol, n_samples)).py()?;
    Ok(out.into_iter().map(|s| (s.t, AndoyerState(s.state), s.energy)).collect())
}

/// Regenerate the tables with the normalization engine; returns JSON.
#[pyfunction]
fn regenerate_tables(py: Python<'_>, order: usize) -> PyResult<String> {
    let tables = py
        .allow_threads(|| series::deprit_normalize(&series::sam_hamiltonian(), order).and_then(|r| series::extract_tables(&r)))
        .py()?;
    Ok(tables.to_json().to_string())
}

/// The body catalog as JSON.
#[pyfunction]
fn bodies() -> String {
    theory::catalog_json().to_string()
}

#[pymodule]
#[pyo3(name = "samrot")]
fn samrot_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<InertiaParams>()?;
    m.add_class::<AndoyerState>()?;
    m.add_class::<ActionAngleState>()?;
    m.add_class::<MeanElements>()?;
    m.add_class::<SamTheory>()?;
    m.add_function(wrap_pyfunction!(to_action_angle, m)?)?;
    m.add_function(wrap_pyfunction!(from_action_angle, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(sam_split, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(regenerate_tables, m)?)?;
    m.add_function(wrap_pyfunction!(bodies, m)?)?;
    Ok(())
}
