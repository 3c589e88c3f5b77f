//! Python module `paqs`: formulas and C1 decisions, states, bases,
//! observables, quantum situations and the subspace lattice.

use paqs_core::hilbert::{self, Complex64};
use paqs_core::lattice;
use paqs_core::logic::{self, Limits, Triviality, Validity, Valuation};
use paqs_core::powers;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn logic_error(e: logic::LogicError) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn valuation_dict<'py>(py: Python<'py>, v: &Valuation) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (f, b) in v.assignments() {
        d.set_item(f, b)?;
    }
    Ok(d)
}

fn parse_all(formulas: &[String]) -> PyResult<Vec<logic::Formula>> {
    formulas
        .iter()
        .map(|f| logic::parse_formula(f).map_err(value_error))
        .collect()
}

/// A C1 formula.
#[pyclass(name = "Formula", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyFormula(logic::Formula);

#[pymethods]
impl PyFormula {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        logic::parse_formula(text)
            .map(PyFormula)
            .map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula('{}')", self.0)
    }

    fn atoms(&self) -> Vec<String> {
        self.0.atoms().into_iter().map(String::from).collect()
    }

    fn size(&self) -> usize {
        self.0.size()
    }
}

/// `(True, None)` when valid, else `(False, countermodel)`.
#[pyfunction]
#[pyo3(signature = (formula, max_closure=None))]
fn is_valid<'py>(
    py: Python<'py>,
    formula: &str,
    max_closure: Option<usize>,
) -> PyResult<(bool, Option<Bound<'py, PyDict>>)> {
    let f = logic::parse_formula(formula).map_err(value_error)?;
    let limits = max_closure.map_or_else(Limits::from_env, |max_closure| Limits { max_closure });
    match logic::is_valid(&f, &limits).map_err(logic_error)? {
        Validity::Valid => Ok((true, None)),
        Validity::Invalid { countermodel } => Ok((false, Some(valuation_dict(py, &countermodel)?))),
    }
}

/// `(True, None)` when the set explodes, else `(False, witness)`.
#[pyfunction]
fn trivializes<'py>(
    py: Python<'py>,
    formulas: Vec<String>,
) -> PyResult<(bool, Option<Bound<'py, PyDict>>)> {
    let gamma = parse_all(&formulas)?;
    match logic::trivializes(&gamma, &Limits::from_env()).map_err(logic_error)? {
        Triviality::Trivial => Ok((true, None)),
        Triviality::Nontrivial { witness } => Ok((false, Some(valuation_dict(py, &witness)?))),
    }
}

/// Checks a proof script; returns the proved formula or raises ValueError.
#[pyfunction]
fn check_proof(script: &str) -> PyResult<String> {
    let parsed = logic::parse_proof_script(script).map_err(value_error)?;
    logic::check_proof(&parsed)
        .map(|p| p.formula.to_string())
        .map_err(value_error)
}

#[pyclass(name = "StateVector", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyStateVector(hilbert::StateVector);

#[pymethods]
impl PyStateVector {
    #[new]
    #[pyo3(signature = (amplitudes, normalize=false))]
    fn new(amplitudes: Vec<Complex64>, normalize: bool) -> PyResult<Self> {
        let v = if normalize {
            hilbert::StateVector::normalized(amplitudes)
        } else {
            hilbert::StateVector::new(amplitudes)
        };
        v.map(PyStateVector).map_err(value_error)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.0.amplitudes().to_vec()
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }
}

#[pyclass(name = "Basis", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBasis(hilbert::Basis);

#[pymethods]
impl PyBasis {
    #[new]
    fn new(label: String, names: Vec<String>, vectors: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let vs = vectors
            .into_iter()
            .map(hilbert::StateVector::new)
            .collect::<Result<Vec<_>, _>>()
            .map_err(value_error)?;
        hilbert::Basis::with_names(label, names, vs)
            .map(PyBasis)
            .map_err(value_error)
    }

    #[staticmethod]
    fn computational(label: String, dim: usize) -> PyResult<Self> {
        hilbert::Basis::computational(label, dim)
            .map(PyBasis)
            .map_err(value_error)
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label().to_string()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.0.names().to_vec()
    }
}

#[pyclass(name = "HermitianOperator", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyHermitian(hilbert::HermitianOperator);

#[pymethods]
impl PyHermitian {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        hilbert::HermitianOperator::from_rows(&rows)
            .map(PyHermitian)
            .map_err(value_error)
    }

    /// `(eigenvalue, multiplicity)` in ascending order.
    fn spectrum(&self) -> Vec<(f64, usize)> {
        hilbert::spectral_decompose(&self.0)
            .into_iter()
            .map(|c| (c.eigenvalue, c.vectors.len()))
            .collect()
    }
}

/// A potential state of affairs.
#[pyclass(name = "Psa", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPsa(powers::Psa);

#[pymethods]
impl PyPsa {
    #[new]
    fn new(id: String, state: &PyStateVector) -> Self {
        PyPsa(powers::Psa::new(id, state.0.clone()))
    }

    #[getter]
    fn id(&self) -> String {
        self.0.id().to_string()
    }

    fn state(&self) -> PyStateVector {
        PyStateVector(self.0.state().clone())
    }

    fn fingerprint(&self) -> String {
        self.0.fingerprint()
    }

    #[pyo3(signature = (hamiltonian, t, hbar=1.0))]
    fn evolved(&self, hamiltonian: &PyHermitian, t: f64, hbar: f64) -> PyResult<Self> {
        self.0
            .evolved(&hamiltonian.0, t, hbar)
            .map(PyPsa)
            .map_err(value_error)
    }

    fn situation(&self, basis: &PyBasis) -> PyResult<PySituation> {
        powers::build_quantum_situation(&self.0, &basis.0)
            .map(PySituation)
            .map_err(value_error)
    }
}

#[pyclass(name = "QuantumSituation", frozen, skip_from_py_object)]
struct PySituation(powers::QuantumSituation);

#[pymethods]
impl PySituation {
    /// `(power, potentia)` in basis order.
    fn pairs(&self) -> Vec<(String, f64)> {
        self.0
            .pairs()
            .iter()
            .map(|p| (p.power.name().to_string(), p.potentia))
            .collect()
    }

    /// The power selected on shot `shot` of the stream for `seed`.
    #[pyo3(signature = (seed, shot=0))]
    fn actualize(&self, seed: u64, shot: u64) -> PyResult<String> {
        powers::actualize_shot(&self.0, seed, shot)
            .map(|e| e.selected)
            .map_err(value_error)
    }

    fn run_experiment(&self, shots: u64, seed: u64) -> PyResult<Vec<(String, u64)>> {
        powers::run_experiment(&self.0, shots, seed)
            .map(|t| t.rows.into_iter().map(|r| (r.power, r.count)).collect())
            .map_err(value_error)
    }

    /// Weak contradictions for the named superposed pairs.
    #[pyo3(signature = (pairs, reinforce=false))]
    fn superposition_formulas(
        &self,
        pairs: Vec<(String, String)>,
        reinforce: bool,
    ) -> PyResult<Vec<String>> {
        let declared: Vec<powers::ContradictoryPair> = pairs
            .into_iter()
            .map(|(a, b)| powers::ContradictoryPair {
                a,
                b,
                observable: String::new(),
                context: self.0.basis_label().to_string(),
            })
            .collect();
        powers::superposition_formula(&self.0, &declared, reinforce)
            .map(|fs| fs.iter().map(ToString::to_string).collect())
            .map_err(value_error)
    }
}

/// Born-rule probability of `|v><v|` in `state`.
#[pyfunction]
fn potentia(state: &PyStateVector, onto: &PyStateVector) -> PyResult<f64> {
    hilbert::potentia(&state.0, &hilbert::Projector::onto(&onto.0)).map_err(value_error)
}

/// Failure counts per lattice law over seeded random cases.
#[pyfunction]
#[pyo3(signature = (trials=1000, dims=vec![2, 3, 4], seed=7))]
fn lattice_verify(trials: u64, dims: Vec<usize>, seed: u64) -> PyResult<Vec<(String, u64, u64)>> {
    lattice::verify_laws(trials, &dims, seed)
        .map(|r| {
            r.laws
                .into_iter()
                .map(|l| (l.law, l.checked, l.failed))
                .collect()
        })
        .map_err(value_error)
}

/// Ranks of `(a, b, c, lhs, rhs)` for the distributivity counterexample.
#[pyfunction]
fn distributivity_witness(dim: usize) -> PyResult<(usize, usize, usize, usize, usize)> {
    let w = lattice::distributivity_witness(dim).map_err(value_error)?;
    Ok((
        w.a.rank(),
        w.b.rank(),
        w.c.rank(),
        w.lhs.rank(),
        w.rhs.rank(),
    ))
}

#[pymodule]
fn paqs(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFormula>()?;
    m.add_class::<PyStateVector>()?;
    m.add_class::<PyBasis>()?;
    m.add_class::<PyHermitian>()?;
    m.add_class::<PyPsa>()?;
    m.add_class::<PySituation>()?;
    m.add_function(wrap_pyfunction!(is_valid, m)?)?;
    m.add_function(wrap_pyfunction!(trivializes, m)?)?;
    m.add_function(wrap_pyfunction!(check_proof, m)?)?;
    m.add_function(wrap_pyfunction!(potentia, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_verify, m)?)?;
    m.add_function(wrap_pyfunction!(distributivity_witness, m)?)?;
    Ok(())
}
