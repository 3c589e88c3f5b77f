//! Scenario files: one JSON document declaring states, bases, observables,
//! contradictory pairs, an optional Hamiltonian and experiment blocks.

use paqs_core::hilbert::{Basis, Complex64, HermitianOperator, StateVector};
use paqs_core::powers::{declare_contradictory, ContradictoryPair, Power, Psa};
use serde::Deserialize;
use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    pub file: PathBuf,
    /// JSON path of the offending value, e.g. `states[0].amplitudes`.
    pub path: String,
    pub line: Option<(usize, usize)>,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.file.display())?;
        if let Some((line, col)) = self.line {
            write!(f, ":{line}:{col}")?;
        }
        if !self.path.is_empty() && self.path != "." {
            write!(f, ": at `{}`", self.path)?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ScenarioError {}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawAmp {
    Real(f64),
    Pair([f64; 2]),
}

impl RawAmp {
    fn complex(&self) -> Complex64 {
        match *self {
            RawAmp::Real(re) => Complex64::new(re, 0.0),
            RawAmp::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

fn complexes(v: &[RawAmp]) -> Vec<Complex64> {
    v.iter().map(RawAmp::complex).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    name: String,
    amplitudes: Vec<RawAmp>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawElement {
    name: String,
    vector: Vec<RawAmp>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBasis {
    name: String,
    elements: Vec<RawElement>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObservable {
    name: String,
    matrix: Vec<Vec<RawAmp>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    basis: String,
    a: String,
    b: String,
    observable: String,
}

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHamiltonian {
    observable: Option<String>,
    matrix: Option<Vec<Vec<RawAmp>>>,
    #[serde(default = "one")]
    hbar: f64,
    #[serde(default)]
    times: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    name: String,
    state: String,
    basis: String,
    shots: u64,
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema_version: u32,
    dimension: usize,
    states: Vec<RawState>,
    bases: Vec<RawBasis>,
    #[serde(default)]
    observables: Vec<RawObservable>,
    #[serde(default)]
    contradictory_pairs: Vec<RawPair>,
    hamiltonian: Option<RawHamiltonian>,
    #[serde(default)]
    experiments: Vec<RawExperiment>,
}

#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub operator: HermitianOperator,
    pub hbar: f64,
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Experiment {
    pub name: String,
    pub state: String,
    pub basis: String,
    pub shots: u64,
    pub seed: Option<u64>,
}

/// A validated scenario. Every reference resolves.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub dimension: usize,
    pub states: Vec<Psa>,
    pub bases: Vec<Basis>,
    pub observables: Vec<(String, HermitianOperator)>,
    pub pairs: Vec<ContradictoryPair>,
    pub hamiltonian: Option<Hamiltonian>,
    pub experiments: Vec<Experiment>,
}

struct Checker<'a> {
    file: &'a Path,
}

impl Checker<'_> {
    fn err(&self, path: impl Into<String>, message: impl fmt::Display) -> ScenarioError {
        ScenarioError {
            file: self.file.to_path_buf(),
            path: path.into(),
            line: None,
            message: message.to_string(),
        }
    }

    fn unique<'n>(
        &self,
        section: &str,
        names: impl Iterator<Item = &'n String>,
    ) -> Result<(), ScenarioError> {
        let mut seen = HashSet::new();
        for (i, n) in names.enumerate() {
            if !seen.insert(n) {
                return Err(self.err(
                    format!("{section}[{i}].name"),
                    format!("duplicate name `{n}`"),
                ));
            }
        }
        Ok(())
    }

    fn dimension(&self, path: String, found: usize, expected: usize) -> Result<(), ScenarioError> {
        if found != expected {
            return Err(self.err(path, format!("expected {expected} entries, found {found}")));
        }
        Ok(())
    }

    fn matrix(
        &self,
        path: String,
        rows: &[Vec<RawAmp>],
        dim: usize,
    ) -> Result<HermitianOperator, ScenarioError> {
        self.dimension(path.clone(), rows.len(), dim)?;
        for (r, row) in rows.iter().enumerate() {
            self.dimension(format!("{path}[{r}]"), row.len(), dim)?;
        }
        let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| complexes(r)).collect();
        HermitianOperator::from_rows(&rows).map_err(|e| self.err(path, e))
    }
}

impl Scenario {
    pub fn load(file: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
        let file = file.as_ref();
        let text = std::fs::read_to_string(file).map_err(|e| ScenarioError {
            file: file.to_path_buf(),
            path: String::new(),
            line: None,
            message: format!("cannot read file: {e}"),
        })?;
        Scenario::from_json(&text, file)
    }

    /// Parses and validates `text`; `file` is only used in messages.
    pub fn from_json(text: &str, file: &Path) -> Result<Scenario, ScenarioError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawScenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ScenarioError {
                file: file.to_path_buf(),
                path,
                line: Some((inner.line(), inner.column())),
                message: strip_position(&inner.to_string()),
            }
        })?;
        Checker { file }.validate(raw)
    }

    pub fn state(&self, name: &str) -> Result<&Psa, String> {
        self.states
            .iter()
            .find(|s| s.id() == name)
            .ok_or_else(|| format!("unknown state `{name}`"))
    }

    pub fn basis(&self, name: &str) -> Result<&Basis, String> {
        self.bases
            .iter()
            .find(|b| b.label() == name)
            .ok_or_else(|| format!("unknown basis `{name}`"))
    }

    pub fn experiment(&self, name: &str) -> Result<&Experiment, String> {
        self.experiments
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| format!("unknown experiment `{name}`"))
    }

    /// Contradictory pairs declared in the given context.
    pub fn pairs_in(&self, basis: &str) -> Vec<ContradictoryPair> {
        self.pairs
            .iter()
            .filter(|p| p.context == basis)
            .cloned()
            .collect()
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

impl Checker<'_> {
    fn validate(&self, raw: RawScenario) -> Result<Scenario, ScenarioError> {
        if raw.schema_version != SCHEMA_VERSION {
            return Err(self.err(
                "schema_version",
                format!(
                    "unsupported schema version {}, expected {SCHEMA_VERSION}",
                    raw.schema_version
                ),
            ));
        }
        let dim = raw.dimension;
        let max = paqs_core::hilbert::max_dim();
        if !(2..=max).contains(&dim) {
            return Err(self.err("dimension", format!("dimension {dim} outside 2..={max}")));
        }

        self.unique("states", raw.states.iter().map(|s| &s.name))?;
        let mut states = Vec::new();
        for (i, s) in raw.states.iter().enumerate() {
            let path = format!("states[{i}].amplitudes");
            self.dimension(path.clone(), s.amplitudes.len(), dim)?;
            let psi = StateVector::new(complexes(&s.amplitudes))
                .map_err(|e| self.err(path, format!("state `{}`: {e}", s.name)))?;
            states.push(Psa::new(s.name.clone(), psi));
        }

        self.unique("bases", raw.bases.iter().map(|b| &b.name))?;
        let mut bases = Vec::new();
        for (i, b) in raw.bases.iter().enumerate() {
            let mut vectors = Vec::new();
            for (j, el) in b.elements.iter().enumerate() {
                let path = format!("bases[{i}].elements[{j}].vector");
                self.dimension(path.clone(), el.vector.len(), dim)?;
                vectors.push(
                    StateVector::new(complexes(&el.vector))
                        .map_err(|e| self.err(path, format!("element `{}`: {e}", el.name)))?,
                );
            }
            let names = b.elements.iter().map(|e| e.name.clone()).collect();
            let basis = Basis::with_names(b.name.clone(), names, vectors)
                .map_err(|e| self.err(format!("bases[{i}]"), format!("basis `{}`: {e}", b.name)))?;
            bases.push(basis);
        }

        self.unique("observables", raw.observables.iter().map(|o| &o.name))?;
        let mut observables = Vec::new();
        for (i, o) in raw.observables.iter().enumerate() {
            let op = self.matrix(format!("observables[{i}].matrix"), &o.matrix, dim)?;
            observables.push((o.name.clone(), op));
        }

        let mut pairs = Vec::new();
        for (i, p) in raw.contradictory_pairs.iter().enumerate() {
            let path = format!("contradictory_pairs[{i}]");
            let basis = bases.iter().find(|b| b.label() == p.basis).ok_or_else(|| {
                self.err(
                    format!("{path}.basis"),
                    format!("unknown basis `{}`", p.basis),
                )
            })?;
            let (_, obs) = observables
                .iter()
                .find(|(n, _)| *n == p.observable)
                .ok_or_else(|| {
                    self.err(
                        format!("{path}.observable"),
                        format!("unknown observable `{}`", p.observable),
                    )
                })?;
            let a = Power::of(basis, &p.a).map_err(|e| self.err(format!("{path}.a"), e))?;
            let b = Power::of(basis, &p.b).map_err(|e| self.err(format!("{path}.b"), e))?;
            pairs.push(
                declare_contradictory(&a, &b, &p.observable, obs).map_err(|e| self.err(path, e))?,
            );
        }

        let hamiltonian = match &raw.hamiltonian {
            None => None,
            Some(h) => {
                let operator = match (&h.observable, &h.matrix) {
                    (Some(name), None) => observables
                        .iter()
                        .find(|(n, _)| n == name)
                        .map(|(_, o)| o.clone())
                        .ok_or_else(|| {
                            self.err(
                                "hamiltonian.observable",
                                format!("unknown observable `{name}`"),
                            )
                        })?,
                    (None, Some(m)) => self.matrix("hamiltonian.matrix".into(), m, dim)?,
                    _ => {
                        return Err(self.err(
                            "hamiltonian",
                            "give exactly one of `observable` and `matrix`",
                        ))
                    }
                };
                if !(h.hbar.is_finite() && h.hbar > 0.0) {
                    return Err(self.err(
                        "hamiltonian.hbar",
                        format!("hbar must be positive, got {}", h.hbar),
                    ));
                }
                if let Some(i) = h.times.iter().position(|t| !t.is_finite()) {
                    return Err(self.err(format!("hamiltonian.times[{i}]"), "time must be finite"));
                }
                Some(Hamiltonian {
                    operator,
                    hbar: h.hbar,
                    times: h.times.clone(),
                })
            }
        };

        self.unique("experiments", raw.experiments.iter().map(|e| &e.name))?;
        let mut experiments = Vec::new();
        for (i, e) in raw.experiments.iter().enumerate() {
            let path = format!("experiments[{i}]");
            if !states.iter().any(|s| s.id() == e.state) {
                return Err(self.err(
                    format!("{path}.state"),
                    format!("unknown state `{}`", e.state),
                ));
            }
            if !bases.iter().any(|b| b.label() == e.basis) {
                return Err(self.err(
                    format!("{path}.basis"),
                    format!("unknown basis `{}`", e.basis),
                ));
            }
            if e.shots == 0 {
                return Err(self.err(
                    format!("{path}.shots"),
                    "an experiment needs at least one shot",
                ));
            }
            experiments.push(Experiment {
                name: e.name.clone(),
                state: e.state.clone(),
                basis: e.basis.clone(),
                shots: e.shots,
                seed: e.seed,
            });
        }

        Ok(Scenario {
            dimension: dim,
            states,
            bases,
            observables,
            pairs,
            hamiltonian,
            experiments,
        })
    }
}
