//! Powers and potentia: basis-dependent quantum situations over a
//! basis-free state, p-truth, contradictory powers and their weak
//! contradictions, and measurement as actual effectuation without collapse.

use crate::hilbert::{
    change_of_basis, evolve_with_hbar, inner_product, potentia, Basis, HermitianOperator,
    HilbertError, Projector, StateVector, DEGENERACY_TOL, NORM_TOL,
};
use crate::logic::{
    is_identifier, trivializes, Formula, Limits, LogicError, Triviality, Valuation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::HashSet;
use thiserror::Error;

/// Minimum potentia for a power to count as present in a state.
pub const EXISTENCE_EPS: f64 = 1e-9;
/// Tolerance between a claimed and a computed potentia.
pub const CLAIM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PowersError {
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error("unknown power `{0}`")]
    UnknownPower(String),
    #[error("claimed potentia {0} is outside [0, 1]")]
    PotentiaOutOfRange(f64),
    #[error("powers belong to different contexts `{0}` and `{1}`")]
    DifferentContexts(String, String),
    #[error("powers `{a}` and `{b}` are not orthogonal (overlap {overlap:e})")]
    NonOrthogonal { a: String, b: String, overlap: f64 },
    #[error("power `{power}` is not an eigenvector of `{observable}` (residual {residual:e})")]
    NotEigenvector {
        power: String,
        observable: String,
        residual: f64,
    },
    #[error("powers `{a}` and `{b}` share the eigenvalue {value} of `{observable}`")]
    SameEigenvalue {
        a: String,
        b: String,
        observable: String,
        value: f64,
    },
    #[error("power name `{0}` cannot be used as a formula atom")]
    InvalidAtomName(String),
    #[error("quantum situation has no power with positive potentia")]
    DegenerateSituation,
    #[error("an experiment needs at least one shot")]
    NoShots,
}

/// A potential state of affairs: a state vector carried without any basis.
///
/// Equality compares the vectors only.
#[derive(Clone, Debug, Serialize)]
pub struct Psa {
    id: String,
    psi: StateVector,
}

impl PartialEq for Psa {
    fn eq(&self, other: &Psa) -> bool {
        self.psi == other.psi
    }
}

impl Psa {
    pub fn new(id: impl Into<String>, psi: StateVector) -> Self {
        Psa { id: id.into(), psi }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn state(&self) -> &StateVector {
        &self.psi
    }

    /// Bit-exact serialization: id, dimension, then every amplitude's real
    /// and imaginary parts as little-endian IEEE-754 bits.
    pub fn to_exact_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.id.len() as u64).to_le_bytes());
        out.extend_from_slice(self.id.as_bytes());
        out.extend_from_slice(&(self.psi.dim() as u64).to_le_bytes());
        for a in self.psi.amplitudes() {
            out.extend_from_slice(&a.re.to_bits().to_le_bytes());
            out.extend_from_slice(&a.im.to_bits().to_le_bytes());
        }
        out
    }

    /// SHA-256 of [`Psa::to_exact_bytes`], hex encoded.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.to_exact_bytes()))
    }

    /// Potential effectuation: the same PSA after unitary evolution.
    pub fn evolved(&self, h: &HermitianOperator, t: f64, hbar: f64) -> Result<Psa, PowersError> {
        Ok(Psa {
            id: self.id.clone(),
            psi: evolve_with_hbar(&self.psi, h, t, hbar)?,
        })
    }
}

/// A basis element read as a power of some context.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Power {
    name: String,
    ray: StateVector,
    context: String,
}

impl Power {
    pub fn new(name: impl Into<String>, ray: &StateVector, context: impl Into<String>) -> Self {
        Power {
            name: name.into(),
            ray: ray.phase_canonical(),
            context: context.into(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ray(&self) -> &StateVector {
        &self.ray
    }

    pub fn context(&self) -> &str {
        &self.context
    }

    pub fn projector(&self) -> Projector {
        Projector::onto(&self.ray)
    }

    /// The atomic formula standing for this power.
    pub fn atom(&self) -> Result<Formula, PowersError> {
        if !is_identifier(&self.name) {
            return Err(PowersError::InvalidAtomName(self.name.clone()));
        }
        Ok(Formula::Atom(self.name.clone()))
    }

    /// Every power of a basis, in basis order.
    pub fn all_of(basis: &Basis) -> Vec<Power> {
        basis
            .names()
            .iter()
            .zip(basis.vectors())
            .map(|(name, v)| Power::new(name.clone(), v, basis.label()))
            .collect()
    }

    pub fn of(basis: &Basis, name: &str) -> Result<Power, PowersError> {
        basis
            .element(name)
            .map(|v| Power::new(name, v, basis.label()))
            .ok_or_else(|| PowersError::UnknownPower(name.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerPotentia {
    pub power: Power,
    pub potentia: f64,
}

/// The pairs (power, potentia) of a PSA read in one basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantumSituation {
    psa_id: String,
    basis_label: String,
    pairs: Vec<PowerPotentia>,
}

impl QuantumSituation {
    pub fn psa_id(&self) -> &str {
        &self.psa_id
    }

    pub fn basis_label(&self) -> &str {
        &self.basis_label
    }

    pub fn pairs(&self) -> &[PowerPotentia] {
        &self.pairs
    }

    pub fn potentia_of(&self, name: &str) -> Option<f64> {
        self.find(name).map(|p| p.potentia)
    }

    pub fn power(&self, name: &str) -> Option<&Power> {
        self.find(name).map(|p| &p.power)
    }

    fn find(&self, name: &str) -> Option<&PowerPotentia> {
        self.pairs.iter().find(|p| p.power.name == name)
    }

    /// A warning-free hand-built situation, for tests and forged inputs.
    pub fn from_pairs(
        psa_id: impl Into<String>,
        basis_label: impl Into<String>,
        pairs: Vec<PowerPotentia>,
    ) -> Self {
        QuantumSituation {
            psa_id: psa_id.into(),
            basis_label: basis_label.into(),
            pairs,
        }
    }
}

/// Reads `psa` in `basis`. Powers with zero potentia are kept.
pub fn build_quantum_situation(psa: &Psa, basis: &Basis) -> Result<QuantumSituation, PowersError> {
    // Validates dimensions before any projector is built.
    change_of_basis(psa.state(), basis)?;
    let pairs = Power::all_of(basis)
        .into_iter()
        .map(|power| {
            let p = potentia(psa.state(), &power.projector())?;
            Ok(PowerPotentia { power, potentia: p })
        })
        .collect::<Result<Vec<_>, HilbertError>>()?;
    Ok(QuantumSituation {
        psa_id: psa.id().to_string(),
        basis_label: basis.label().to_string(),
        pairs,
    })
}

/// "The power `power` has potentia `potentia` in PSA `psa_id`."
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantumStatement {
    pub power: String,
    pub potentia: f64,
    pub psa_id: String,
}

impl QuantumStatement {
    pub fn new(
        power: impl Into<String>,
        potentia: f64,
        psa_id: impl Into<String>,
    ) -> Result<Self, PowersError> {
        if !(0.0..=1.0).contains(&potentia) {
            return Err(PowersError::PotentiaOutOfRange(potentia));
        }
        Ok(QuantumStatement {
            power: power.into(),
            potentia,
            psa_id: psa_id.into(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PTruth {
    PTrue,
    PFalse,
}

/// A statement is p-true when its power is present in the PSA and the
/// claimed potentia matches the Born rule.
pub fn p_truth(
    statement: &QuantumStatement,
    psa: &Psa,
    context: &Basis,
) -> Result<PTruth, PowersError> {
    let power = Power::of(context, &statement.power)?;
    let computed = potentia(psa.state(), &power.projector())?;
    Ok(
        if computed > EXISTENCE_EPS && (statement.potentia - computed).abs() <= CLAIM_TOL {
            PTruth::PTrue
        } else {
            PTruth::PFalse
        },
    )
}

/// Two powers declared contradictory with respect to an observable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContradictoryPair {
    pub a: String,
    pub b: String,
    pub observable: String,
    pub context: String,
}

/// Accepts the pair when the rays are orthogonal eigenvectors of `obs`
/// with distinct eigenvalues.
pub fn declare_contradictory(
    a: &Power,
    b: &Power,
    observable_label: &str,
    obs: &HermitianOperator,
) -> Result<ContradictoryPair, PowersError> {
    if a.context != b.context {
        return Err(PowersError::DifferentContexts(
            a.context.clone(),
            b.context.clone(),
        ));
    }
    let overlap = inner_product(&a.ray, &b.ray)?.norm();
    if overlap > NORM_TOL {
        return Err(PowersError::NonOrthogonal {
            a: a.name.clone(),
            b: b.name.clone(),
            overlap,
        });
    }
    if obs.dim() != a.ray.dim() {
        return Err(HilbertError::DimensionMismatch {
            expected: a.ray.dim(),
            found: obs.dim(),
        }
        .into());
    }
    let scale = obs.matrix().frobenius().max(1.0);
    for p in [a, b] {
        let residual = obs.eigen_residual(p.ray.amplitudes());
        if residual > NORM_TOL * scale {
            return Err(PowersError::NotEigenvector {
                power: p.name.clone(),
                observable: observable_label.to_string(),
                residual,
            });
        }
    }
    let la = obs.expectation(a.ray.amplitudes());
    let lb = obs.expectation(b.ray.amplitudes());
    if (la - lb).abs() <= DEGENERACY_TOL {
        return Err(PowersError::SameEigenvalue {
            a: a.name.clone(),
            b: b.name.clone(),
            observable: observable_label.to_string(),
            value: la,
        });
    }
    Ok(ContradictoryPair {
        a: a.name.clone(),
        b: b.name.clone(),
        observable: observable_label.to_string(),
        context: a.context.clone(),
    })
}

/// The weak contradictions `P & ~P` carried by each genuinely superposed
/// member of a contradictory pair; with `reinforce`, also `P -> ~P`.
///
/// Members with potentia 0 or 1 contribute nothing.
pub fn superposition_formula(
    qs: &QuantumSituation,
    pairs: &[ContradictoryPair],
    reinforce: bool,
) -> Result<Vec<Formula>, PowersError> {
    let mut out: Vec<Formula> = Vec::new();
    let mut seen = HashSet::new();
    let mut implications = Vec::new();
    for pair in pairs {
        for name in [&pair.a, &pair.b] {
            let entry = qs
                .find(name)
                .ok_or_else(|| PowersError::UnknownPower(name.clone()))?;
            if entry.potentia <= EXISTENCE_EPS || entry.potentia >= 1.0 - EXISTENCE_EPS {
                continue;
            }
            let atom = entry.power.atom()?;
            let neg = Formula::weak_neg(atom.clone());
            let contradiction = Formula::conj(atom.clone(), neg.clone());
            if seen.insert(contradiction.clone()) {
                out.push(contradiction);
                if reinforce {
                    implications.push(Formula::implies(atom, neg));
                }
            }
        }
    }
    out.extend(implications);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConsistencyVerdict {
    /// No formula pair of the form `X`, `~X` among the conjuncts.
    Consistent {
        witness: Valuation,
    },
    WeaklyInconsistentNontrivial {
        witness: Valuation,
    },
    Trivial,
}

impl ConsistencyVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            ConsistencyVerdict::Consistent { .. } => "consistent",
            ConsistencyVerdict::WeaklyInconsistentNontrivial { .. } => {
                "weakly-inconsistent-nontrivial"
            }
            ConsistencyVerdict::Trivial => "trivial",
        }
    }

    pub fn witness(&self) -> Option<&Valuation> {
        match self {
            ConsistencyVerdict::Consistent { witness }
            | ConsistencyVerdict::WeaklyInconsistentNontrivial { witness } => Some(witness),
            ConsistencyVerdict::Trivial => None,
        }
    }
}

/// Whether some `X` and `~X` both occur among the top-level conjuncts.
pub fn has_contradiction_pattern(formulas: &[Formula]) -> bool {
    let conjuncts: HashSet<&Formula> = formulas.iter().flat_map(|f| f.conjuncts()).collect();
    conjuncts.iter().any(|f| match f {
        Formula::WeakNeg(inner) => conjuncts.contains(inner.as_ref()),
        _ => false,
    })
}

pub fn potential_consistency_check(
    formulas: &[Formula],
    limits: &Limits,
) -> Result<ConsistencyVerdict, LogicError> {
    Ok(match trivializes(formulas, limits)? {
        Triviality::Trivial => ConsistencyVerdict::Trivial,
        Triviality::Nontrivial { witness } if has_contradiction_pattern(formulas) => {
            ConsistencyVerdict::WeaklyInconsistentNontrivial { witness }
        }
        Triviality::Nontrivial { witness } => ConsistencyVerdict::Consistent { witness },
    })
}

/// One measurement outcome: a single power expressed in actuality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActualEffectuation {
    pub selected: String,
    /// Actual truth of every power of the context, in basis order.
    pub truth: Vec<(String, bool)>,
    pub shot: u64,
    pub seed: u64,
}

impl ActualEffectuation {
    pub fn truth_of(&self, name: &str) -> Option<bool> {
        self.truth.iter().find(|(n, _)| n == name).map(|(_, b)| *b)
    }
}

/// Per-shot generator: ChaCha8 keyed by the seed, one stream per shot.
fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

fn check_situation(qs: &QuantumSituation) -> Result<(), PowersError> {
    if qs.pairs.iter().all(|p| p.potentia <= 0.0) {
        return Err(PowersError::DegenerateSituation);
    }
    Ok(())
}

fn select(qs: &QuantumSituation, u: f64) -> usize {
    let total: f64 = qs.pairs.iter().map(|p| p.potentia).sum();
    let target = u * total;
    let mut acc = 0.0;
    for (i, p) in qs.pairs.iter().enumerate() {
        acc += p.potentia;
        if p.potentia > 0.0 && target < acc {
            return i;
        }
    }
    qs.pairs.iter().rposition(|p| p.potentia > 0.0).unwrap_or(0)
}

fn effectuate(qs: &QuantumSituation, seed: u64, shot: u64) -> ActualEffectuation {
    let u: f64 = shot_rng(seed, shot).random();
    let chosen = select(qs, u);
    ActualEffectuation {
        selected: qs.pairs[chosen].power.name.clone(),
        truth: qs
            .pairs
            .iter()
            .enumerate()
            .map(|(i, p)| (p.power.name.clone(), i == chosen))
            .collect(),
        shot,
        seed,
    }
}

/// Samples one power with probability equal to its potentia. The
/// situation is borrowed immutably and can be actualized again.
pub fn actualize(qs: &QuantumSituation, seed: u64) -> Result<ActualEffectuation, PowersError> {
    actualize_shot(qs, seed, 0)
}

/// [`actualize`] on the substream of shot `shot`.
pub fn actualize_shot(
    qs: &QuantumSituation,
    seed: u64,
    shot: u64,
) -> Result<ActualEffectuation, PowersError> {
    check_situation(qs)?;
    Ok(effectuate(qs, seed, shot))
}

/// Lazily actualizes shots `0..shots` of the same unchanged situation.
pub fn effectuations(
    qs: &QuantumSituation,
    shots: u64,
    seed: u64,
) -> Result<impl Iterator<Item = ActualEffectuation> + '_, PowersError> {
    check_situation(qs)?;
    Ok((0..shots).map(move |shot| effectuate(qs, seed, shot)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrequencyRow {
    pub power: String,
    pub count: u64,
    pub frequency: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrequencyTable {
    pub shots: u64,
    pub seed: u64,
    pub rows: Vec<FrequencyRow>,
}

impl FrequencyTable {
    pub fn frequency_of(&self, name: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.power == name)
            .map(|r| r.frequency)
    }

    pub fn count_of(&self, name: &str) -> Option<u64> {
        self.rows.iter().find(|r| r.power == name).map(|r| r.count)
    }
}

/// A statistical experiment: `shots` independent actualizations.
pub fn run_experiment(
    qs: &QuantumSituation,
    shots: u64,
    seed: u64,
) -> Result<FrequencyTable, PowersError> {
    if shots == 0 {
        return Err(PowersError::NoShots);
    }
    let mut counts = vec![0u64; qs.pairs.len()];
    check_situation(qs)?;
    for shot in 0..shots {
        let u: f64 = shot_rng(seed, shot).random();
        counts[select(qs, u)] += 1;
    }
    Ok(FrequencyTable {
        shots,
        seed,
        rows: qs
            .pairs
            .iter()
            .zip(counts)
            .map(|(p, count)| FrequencyRow {
                power: p.power.name.clone(),
                count,
                frequency: count as f64 / shots as f64,
            })
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OppositionViolation {
    /// Position in the checked list.
    pub index: usize,
    pub a: Option<bool>,
    pub b: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OppositionReport {
    pub pair: (String, String),
    pub checked: usize,
    pub violations: Vec<OppositionViolation>,
}

impl OppositionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Contradictories can be neither both actually true nor both actually
/// false: every effectuation must make exactly one member true.
pub fn square_of_opposition_check(
    pair: &ContradictoryPair,
    effectuations: &[ActualEffectuation],
) -> OppositionReport {
    let violations = effectuations
        .iter()
        .enumerate()
        .filter_map(|(index, e)| {
            let a = e.truth_of(&pair.a);
            let b = e.truth_of(&pair.b);
            match (a, b) {
                (Some(x), Some(y)) if x != y => None,
                _ => Some(OppositionViolation { index, a, b }),
            }
        })
        .collect();
    OppositionReport {
        pair: (pair.a.clone(), pair.b.clone()),
        checked: effectuations.len(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn z_basis() -> Basis {
        Basis::with_names(
            "z",
            vec!["P_up".into(), "P_down".into()],
            vec![
                StateVector::basis_vector(2, 0).unwrap(),
                StateVector::basis_vector(2, 1).unwrap(),
            ],
        )
        .unwrap()
    }

    fn x_basis() -> Basis {
        Basis::with_names(
            "x",
            vec!["P_plus".into(), "P_minus".into()],
            vec![
                StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap(),
                StateVector::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap(),
            ],
        )
        .unwrap()
    }

    fn psa(a: f64, b: f64) -> Psa {
        Psa::new("psi", StateVector::from_real(&[a, b]).unwrap())
    }

    fn up_down_pair() -> ContradictoryPair {
        let z = z_basis();
        declare_contradictory(
            &Power::of(&z, "P_up").unwrap(),
            &Power::of(&z, "P_down").unwrap(),
            "sigma_z",
            &HermitianOperator::pauli_z(),
        )
        .unwrap()
    }

    #[test]
    fn situation_pairs_follow_basis_order() {
        let qs = build_quantum_situation(&psa(0.6, 0.8), &z_basis()).unwrap();
        let names: Vec<&str> = qs.pairs().iter().map(|p| p.power.name()).collect();
        assert_eq!(names, ["P_up", "P_down"]);
        assert!((qs.pairs()[0].potentia - 0.36).abs() < 1e-12);
        assert!((qs.pairs()[1].potentia - 0.64).abs() < 1e-12);
        let coords = change_of_basis(psa(0.6, 0.8).state(), &z_basis()).unwrap();
        for (pair, c) in qs.pairs().iter().zip(coords) {
            assert!((pair.potentia - c.norm_sqr()).abs() < 1e-9);
        }
    }

    #[test]
    fn eigenstate_keeps_zero_potentia_power() {
        let qs = build_quantum_situation(&psa(1.0, 0.0), &z_basis()).unwrap();
        assert_eq!(qs.pairs().len(), 2);
        assert_eq!(qs.potentia_of("P_up"), Some(1.0));
        assert_eq!(qs.potentia_of("P_down"), Some(0.0));
    }

    #[test]
    fn two_bases_give_two_situations() {
        let s = psa(0.6, 0.8);
        let qz = build_quantum_situation(&s, &z_basis()).unwrap();
        let qx = build_quantum_situation(&s, &x_basis()).unwrap();
        assert_ne!(qz, qx);
        assert_ne!(qz.basis_label(), qx.basis_label());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let s = Psa::new("psi", StateVector::basis_vector(3, 0).unwrap());
        assert!(matches!(
            build_quantum_situation(&s, &z_basis()),
            Err(PowersError::Hilbert(HilbertError::DimensionMismatch { .. }))
        ));
    }

    #[test]
    fn p_truth_examples() {
        let z = z_basis();
        let s = psa(0.6, 0.8);
        let st = QuantumStatement::new("P_up", 0.36, "psi").unwrap();
        assert_eq!(p_truth(&st, &s, &z).unwrap(), PTruth::PTrue);
        let wrong = QuantumStatement::new("P_up", 0.37, "psi").unwrap();
        assert_eq!(p_truth(&wrong, &s, &z).unwrap(), PTruth::PFalse);

        let e1 = psa(1.0, 0.0);
        let st = QuantumStatement::new("P_down", 0.5, "psi").unwrap();
        assert_eq!(p_truth(&st, &e1, &z).unwrap(), PTruth::PFalse);
        let zero_claim = QuantumStatement::new("P_down", 0.0, "psi").unwrap();
        assert_eq!(p_truth(&zero_claim, &e1, &z).unwrap(), PTruth::PFalse);

        let sg = psa(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
        for name in ["P_up", "P_down"] {
            let st = QuantumStatement::new(name, 0.5, "psi").unwrap();
            assert_eq!(p_truth(&st, &sg, &z).unwrap(), PTruth::PTrue);
        }
        let unknown = QuantumStatement::new("P_left", 0.5, "psi").unwrap();
        assert!(matches!(
            p_truth(&unknown, &sg, &z),
            Err(PowersError::UnknownPower(_))
        ));
        assert!(QuantumStatement::new("P_up", 1.5, "psi").is_err());
    }

    #[test]
    fn contradictory_declarations() {
        let z = z_basis();
        assert_eq!(up_down_pair().observable, "sigma_z");

        let diag = Power::new(
            "diag",
            &StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap(),
            "z",
        );
        assert!(matches!(
            declare_contradictory(
                &Power::of(&z, "P_up").unwrap(),
                &diag,
                "sigma_z",
                &HermitianOperator::pauli_z()
            ),
            Err(PowersError::NonOrthogonal { .. })
        ));

        let x = x_basis();
        let pair = declare_contradictory(
            &Power::of(&x, "P_plus").unwrap(),
            &Power::of(&x, "P_minus").unwrap(),
            "sigma_x",
            &HermitianOperator::pauli_x(),
        );
        assert!(pair.is_ok());

        assert!(matches!(
            declare_contradictory(
                &Power::of(&x, "P_plus").unwrap(),
                &Power::of(&x, "P_minus").unwrap(),
                "sigma_z",
                &HermitianOperator::pauli_z(),
            ),
            Err(PowersError::NotEigenvector { .. })
        ));

        let id = HermitianOperator::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            declare_contradictory(
                &Power::of(&z, "P_up").unwrap(),
                &Power::of(&z, "P_down").unwrap(),
                "id",
                &id
            ),
            Err(PowersError::SameEigenvalue { .. })
        ));

        assert!(matches!(
            declare_contradictory(
                &Power::of(&z, "P_up").unwrap(),
                &Power::of(&x, "P_minus").unwrap(),
                "s",
                &id
            ),
            Err(PowersError::DifferentContexts(..))
        ));
    }

    #[test]
    fn superposition_emits_weak_contradictions() {
        let qs = build_quantum_situation(&psa(FRAC_1_SQRT_2, FRAC_1_SQRT_2), &z_basis()).unwrap();
        let fs = superposition_formula(&qs, &[up_down_pair()], false).unwrap();
        assert_eq!(
            fs,
            vec![
                parse_formula("P_up & ~P_up").unwrap(),
                parse_formula("P_down & ~P_down").unwrap()
            ]
        );

        let reinforced = superposition_formula(&qs, &[up_down_pair()], true).unwrap();
        assert_eq!(reinforced.len(), 4);
        assert!(reinforced.contains(&parse_formula("P_up -> ~P_up").unwrap()));
        assert!(reinforced.contains(&parse_formula("P_down -> ~P_down").unwrap()));

        let eigen = build_quantum_situation(&psa(1.0, 0.0), &z_basis()).unwrap();
        assert!(superposition_formula(&eigen, &[up_down_pair()], true)
            .unwrap()
            .is_empty());

        let mut bogus = up_down_pair();
        bogus.b = "P_left".into();
        assert!(matches!(
            superposition_formula(&qs, &[bogus], false),
            Err(PowersError::UnknownPower(_))
        ));
    }

    #[test]
    fn non_identifier_power_names_cannot_become_atoms() {
        let b = Basis::with_names(
            "z",
            vec!["spin up".into(), "spin down".into()],
            vec![
                StateVector::basis_vector(2, 0).unwrap(),
                StateVector::basis_vector(2, 1).unwrap(),
            ],
        )
        .unwrap();
        let qs = build_quantum_situation(&psa(0.6, 0.8), &b).unwrap();
        let pair = declare_contradictory(
            &Power::of(&b, "spin up").unwrap(),
            &Power::of(&b, "spin down").unwrap(),
            "sigma_z",
            &HermitianOperator::pauli_z(),
        )
        .unwrap();
        assert!(matches!(
            superposition_formula(&qs, &[pair], false),
            Err(PowersError::InvalidAtomName(_))
        ));
    }

    #[test]
    fn consistency_verdicts() {
        let lim = Limits::default();
        let p = |s: &str| parse_formula(s).unwrap();
        let weak =
            potential_consistency_check(&[p("P_up & ~P_up"), p("P_down & ~P_down")], &lim).unwrap();
        assert_eq!(weak.label(), "weakly-inconsistent-nontrivial");
        assert!(weak.witness().is_some());
        let strong = potential_consistency_check(&[p("P_up"), p("~*P_up")], &lim).unwrap();
        assert_eq!(strong, ConsistencyVerdict::Trivial);
        let empty = potential_consistency_check(&[], &lim).unwrap();
        assert_eq!(empty.label(), "consistent");
        let plain = potential_consistency_check(&[p("A -> B"), p("A")], &lim).unwrap();
        assert_eq!(plain.label(), "consistent");
    }

    #[test]
    fn actualize_is_reproducible_and_non_collapsing() {
        let qs = build_quantum_situation(&psa(FRAC_1_SQRT_2, FRAC_1_SQRT_2), &z_basis()).unwrap();
        let before = qs.clone();
        let a = actualize(&qs, 42).unwrap();
        let b = actualize(&qs, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(qs, before);
        assert_eq!(a.truth.iter().filter(|(_, t)| *t).count(), 1);
        assert_eq!(a.seed, 42);
    }

    /// Golden value for ChaCha8 keyed by seed 42, stream 0.
    #[test]
    fn actualize_golden_outcome() {
        let qs = build_quantum_situation(&psa(FRAC_1_SQRT_2, FRAC_1_SQRT_2), &z_basis()).unwrap();
        let u: f64 = shot_rng(42, 0).random();
        let expected = if u < 0.5 { "P_up" } else { "P_down" };
        assert_eq!(actualize(&qs, 42).unwrap().selected, expected);
        assert_eq!(format!("{u:.6}"), GOLDEN_U_SEED42);
    }

    const GOLDEN_U_SEED42: &str = "0.681896";

    #[test]
    fn eigenstate_always_selects_its_power() {
        let qs = build_quantum_situation(&psa(1.0, 0.0), &z_basis()).unwrap();
        for seed in 0..50 {
            assert_eq!(actualize(&qs, seed).unwrap().selected, "P_up");
        }
        let table = run_experiment(&qs, 100, 9).unwrap();
        assert_eq!(table.count_of("P_up"), Some(100));
        assert_eq!(table.count_of("P_down"), Some(0));
    }

    #[test]
    fn experiment_errors() {
        let qs = build_quantum_situation(&psa(1.0, 0.0), &z_basis()).unwrap();
        assert_eq!(run_experiment(&qs, 0, 1), Err(PowersError::NoShots));
        let dead = QuantumSituation::from_pairs(
            "psi",
            "z",
            qs.pairs()
                .iter()
                .map(|p| PowerPotentia {
                    power: p.power.clone(),
                    potentia: 0.0,
                })
                .collect(),
        );
        assert_eq!(actualize(&dead, 1), Err(PowersError::DegenerateSituation));
    }

    #[test]
    fn counts_sum_to_shots_and_match_effectuations() {
        let qs = build_quantum_situation(&psa(0.6, 0.8), &z_basis()).unwrap();
        let table = run_experiment(&qs, 500, 3).unwrap();
        assert_eq!(table.rows.iter().map(|r| r.count).sum::<u64>(), 500);
        let ups = effectuations(&qs, 500, 3)
            .unwrap()
            .filter(|e| e.selected == "P_up")
            .count() as u64;
        assert_eq!(table.count_of("P_up"), Some(ups));
        assert_eq!(run_experiment(&qs, 500, 3).unwrap(), table);
    }

    #[test]
    fn opposition_checks() {
        let pair = up_down_pair();
        let qs = build_quantum_situation(&psa(FRAC_1_SQRT_2, FRAC_1_SQRT_2), &z_basis()).unwrap();
        let effs: Vec<_> = effectuations(&qs, 1000, 5).unwrap().collect();
        assert!(square_of_opposition_check(&pair, &effs).passed());
        let empty = square_of_opposition_check(&pair, &[]);
        assert!(empty.passed());
        assert_eq!(empty.checked, 0);

        let forged = ActualEffectuation {
            selected: "P_up".into(),
            truth: vec![("P_up".into(), true), ("P_down".into(), true)],
            shot: 0,
            seed: 0,
        };
        let report = square_of_opposition_check(&pair, &[effs[0].clone(), forged]);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].index, 1);
    }

    #[test]
    fn fingerprint_tracks_exact_bits() {
        let a = psa(0.6, 0.8);
        let mut amps = a.state().amplitudes().to_vec();
        amps[0].re = f64::from_bits(amps[0].re.to_bits() + 1);
        let b = Psa::new("psi", StateVector::new(amps).unwrap());
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), psa(0.6, 0.8).fingerprint());
        assert_eq!(a.fingerprint().len(), 64);
    }

    #[test]
    fn psa_identity_ignores_basis_and_label() {
        let a = psa(0.6, 0.8);
        let b = Psa::new("other", a.state().clone());
        assert_eq!(a, b);
        let _ = build_quantum_situation(&a, &x_basis()).unwrap();
        assert_eq!(a, b);
    }
}
