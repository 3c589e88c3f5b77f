//! The orthomodular lattice of subspaces of a finite-dimensional state
//! space, with law checkers and the map from quantum events to elements.

use crate::hilbert::linalg::{inner, norm, ONE, ZERO};
use crate::hilbert::{
    event_projector, spectral_decompose, BorelSet, Complex64, HermitianOperator, HilbertError,
    Projector, StateVector,
};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Serialize, Serializer};
use std::f64::consts::FRAC_1_SQRT_2;
use thiserror::Error;

/// Tolerance for lattice identities and rank decisions.
pub const LATTICE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error("first subspace is not contained in the second")]
    NotComparable,
}

/// A subspace, kept both as an orthonormal spanning set and as its projector.
///
/// Equality compares projectors, so it does not depend on the spanning set.
#[derive(Clone, Debug)]
pub struct Subspace {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
    projector: Projector,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Subspace) -> bool {
        self.dim == other.dim && self.projector.distance(&other.projector) < LATTICE_TOL
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.projector.serialize(serializer)
    }
}

/// Modified Gram-Schmidt of `candidates` against the orthonormal `basis`,
/// appending every candidate whose residual survives.
fn extend_orthonormal(
    basis: &mut Vec<Vec<Complex64>>,
    candidates: impl IntoIterator<Item = Vec<Complex64>>,
) {
    for mut v in candidates {
        for _ in 0..2 {
            for u in basis.iter() {
                let c = inner(u, &v);
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= c * y;
                }
            }
        }
        let n = norm(&v);
        if n >= LATTICE_TOL {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
}

fn unit(dim: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; dim];
    v[i] = ONE;
    v
}

fn check_dim(expected: usize, found: usize) -> Result<(), LatticeError> {
    if expected != found {
        return Err(HilbertError::DimensionMismatch { expected, found }.into());
    }
    Ok(())
}

impl Subspace {
    fn from_orthonormal(dim: usize, vectors: Vec<Vec<Complex64>>) -> Self {
        let projector = Projector::from_orthonormal(dim, &vectors);
        Subspace {
            dim,
            vectors,
            projector,
        }
    }

    /// Span of arbitrary vectors of length `dim`.
    pub fn span(dim: usize, vectors: &[Vec<Complex64>]) -> Result<Self, LatticeError> {
        crate::hilbert::check_operator_dim(dim)?;
        for v in vectors {
            check_dim(dim, v.len())?;
        }
        let mut basis = Vec::new();
        extend_orthonormal(&mut basis, vectors.iter().cloned());
        Ok(Subspace::from_orthonormal(dim, basis))
    }

    pub fn span_real(dim: usize, vectors: &[Vec<f64>]) -> Result<Self, LatticeError> {
        let vs: Vec<Vec<Complex64>> = vectors
            .iter()
            .map(|v| v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Subspace::span(dim, &vs)
    }

    /// The rank-1 element an individual power embeds as.
    pub fn ray(v: &StateVector) -> Self {
        Subspace::from_orthonormal(v.dim(), vec![v.amplitudes().to_vec()])
    }

    pub fn zero(dim: usize) -> Self {
        Subspace::from_orthonormal(dim, Vec::new())
    }

    pub fn whole(dim: usize) -> Self {
        Subspace::from_orthonormal(dim, (0..dim).map(|i| unit(dim, i)).collect())
    }

    /// The range of a projector.
    pub fn from_projector(p: &Projector) -> Self {
        let h = HermitianOperator::new(p.matrix().clone()).expect("projectors are Hermitian");
        let vectors = spectral_decompose(&h)
            .into_iter()
            .filter(|c| (c.eigenvalue - 1.0).abs() <= 0.5)
            .flat_map(|c| c.vectors)
            .collect();
        Subspace::from_orthonormal(p.dim(), vectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn projector(&self) -> &Projector {
        &self.projector
    }

    pub fn contains(&self, v: &[Complex64]) -> bool {
        let pv = self.projector.matrix().apply(v);
        let diff: Vec<Complex64> = pv.iter().zip(v).map(|(a, b)| a - b).collect();
        norm(&diff) < LATTICE_TOL * norm(v).max(1.0)
    }
}

/// Largest subspace inside both: the eigenvalue-2 space of `P_a + P_b`.
pub fn meet(a: &Subspace, b: &Subspace) -> Result<Subspace, LatticeError> {
    check_dim(a.dim, b.dim)?;
    if a.rank() == 0 || b.rank() == 0 {
        return Ok(Subspace::zero(a.dim));
    }
    let sum = a.projector.matrix() + b.projector.matrix();
    let h = HermitianOperator::new(sum)?;
    let candidates: Vec<Vec<Complex64>> = spectral_decompose(&h)
        .into_iter()
        .filter(|c| (c.eigenvalue - 2.0).abs() <= LATTICE_TOL)
        .flat_map(|c| c.vectors)
        .collect();
    let mut basis = Vec::new();
    extend_orthonormal(&mut basis, candidates);
    Ok(Subspace::from_orthonormal(a.dim, basis))
}

/// Span of the union.
pub fn join(a: &Subspace, b: &Subspace) -> Result<Subspace, LatticeError> {
    check_dim(a.dim, b.dim)?;
    let mut basis = Vec::new();
    extend_orthonormal(&mut basis, a.vectors.iter().chain(&b.vectors).cloned());
    Ok(Subspace::from_orthonormal(a.dim, basis))
}

/// Orthocomplement, with projector `I - P_a`.
pub fn ortho(a: &Subspace) -> Subspace {
    let mut basis = a.vectors.clone();
    extend_orthonormal(&mut basis, (0..a.dim).map(|i| unit(a.dim, i)));
    let complement = basis.split_off(a.rank());
    Subspace::from_orthonormal(a.dim, complement)
}

/// `a <= b` iff `P_b P_a = P_a`.
pub fn leq(a: &Subspace, b: &Subspace) -> Result<bool, LatticeError> {
    check_dim(a.dim, b.dim)?;
    let product = b.projector.matrix() * a.projector.matrix();
    Ok(product.distance(a.projector.matrix()) < LATTICE_TOL)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum LawOutcome {
    Holds,
    Violated { lhs: Subspace, rhs: Subspace },
}

impl LawOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, LawOutcome::Holds)
    }

    fn compare(lhs: Subspace, rhs: Subspace) -> Self {
        if lhs == rhs {
            LawOutcome::Holds
        } else {
            LawOutcome::Violated { lhs, rhs }
        }
    }
}

/// For `a <= b`: `b = a ∨ (b ∧ a')`.
pub fn orthomodular_check(a: &Subspace, b: &Subspace) -> Result<LawOutcome, LatticeError> {
    if !leq(a, b)? {
        return Err(LatticeError::NotComparable);
    }
    let rhs = join(a, &meet(b, &ortho(a))?)?;
    Ok(LawOutcome::compare(b.clone(), rhs))
}

/// For `a <= c`: `a ∨ (b ∧ c) = (a ∨ b) ∧ c`.
pub fn modular_check(a: &Subspace, b: &Subspace, c: &Subspace) -> Result<LawOutcome, LatticeError> {
    if !leq(a, c)? {
        return Err(LatticeError::NotComparable);
    }
    let lhs = join(a, &meet(b, c)?)?;
    let rhs = meet(&join(a, b)?, c)?;
    Ok(LawOutcome::compare(lhs, rhs))
}

/// `c ∧ (a ∨ b)` against `(c ∧ a) ∨ (c ∧ b)`.
pub fn distributive_check(
    a: &Subspace,
    b: &Subspace,
    c: &Subspace,
) -> Result<LawOutcome, LatticeError> {
    let lhs = meet(c, &join(a, b)?)?;
    let rhs = join(&meet(c, a)?, &meet(c, b)?)?;
    Ok(LawOutcome::compare(lhs, rhs))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributivityWitness {
    pub a: Subspace,
    pub b: Subspace,
    pub c: Subspace,
    /// `c ∧ (a ∨ b)`
    pub lhs: Subspace,
    /// `(c ∧ a) ∨ (c ∧ b)`
    pub rhs: Subspace,
}

/// The triple `e1`, `e2`, `(e1 + e2)/√2`, whose rays break distributivity.
pub fn distributivity_witness(dim: usize) -> Result<DistributivityWitness, LatticeError> {
    if dim < 2 {
        return Err(HilbertError::DimensionOutOfRange {
            dim,
            min: 2,
            max: crate::hilbert::max_dim(),
        }
        .into());
    }
    crate::hilbert::check_operator_dim(dim)?;
    let a = Subspace::span(dim, &[unit(dim, 0)])?;
    let b = Subspace::span(dim, &[unit(dim, 1)])?;
    let mut diag = vec![ZERO; dim];
    diag[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    diag[1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let c = Subspace::span(dim, &[diag])?;
    match distributive_check(&a, &b, &c)? {
        LawOutcome::Violated { lhs, rhs } => Ok(DistributivityWitness { a, b, c, lhs, rhs }),
        LawOutcome::Holds => unreachable!("the diagonal ray lies in a ∨ b but meets neither"),
    }
}

/// The element for event "a measurement of `a` yields a value in `delta`".
pub fn event_to_element(a: &HermitianOperator, delta: &BorelSet) -> Subspace {
    Subspace::from_projector(&event_projector(a, delta))
}

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// A subspace of uniformly random rank spanned by complex Gaussian vectors.
pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Subspace {
    let rank = rng.random_range(0..=dim);
    random_subspace_of_rank(rng, dim, rank)
}

pub fn random_subspace_of_rank<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Subspace {
    let mut basis = Vec::new();
    while basis.len() < rank.min(dim) {
        extend_orthonormal(&mut basis, [gaussian_vector(rng, dim)]);
    }
    Subspace::from_orthonormal(dim, basis)
}

/// A random pair with `a <= b`: `a` is spanned by random combinations of `b`'s basis.
pub fn random_comparable_pair<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> (Subspace, Subspace) {
    let b = random_subspace(rng, dim);
    let k = rng.random_range(0..=b.rank());
    let mut basis = Vec::new();
    while basis.len() < k {
        let coeffs = gaussian_vector(rng, b.rank());
        let mut v = vec![ZERO; dim];
        for (c, u) in coeffs.iter().zip(&b.vectors) {
            for (x, y) in v.iter_mut().zip(u) {
                *x += c * y;
            }
        }
        extend_orthonormal(&mut basis, [v]);
    }
    (Subspace::from_orthonormal(dim, basis), b)
}

/// Counts of sampled law checks, by law.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawTally {
    pub law: String,
    pub checked: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeReport {
    pub trials: u64,
    pub dims: Vec<usize>,
    pub seed: u64,
    pub laws: Vec<LawTally>,
}

impl LatticeReport {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.failed == 0)
    }
}

/// Law names reported by [`verify_laws`], in order.
pub const LAWS: [&str; 12] = [
    "meet-commutative",
    "join-commutative",
    "meet-associative",
    "join-associative",
    "absorption",
    "idempotence",
    "de-morgan",
    "double-ortho",
    "ortho-order-reversing",
    "ortho-complement",
    "orthomodular",
    "modular",
];

/// Runs every lattice law over `trials` random cases per dimension,
/// cycling through `dims`, from a ChaCha8 generator seeded with `seed`.
pub fn verify_laws(trials: u64, dims: &[usize], seed: u64) -> Result<LatticeReport, LatticeError> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut tallies: Vec<LawTally> = LAWS
        .iter()
        .map(|l| LawTally {
            law: (*l).to_string(),
            ..LawTally::default()
        })
        .collect();
    let mut record = |i: usize, ok: bool| {
        tallies[i].checked += 1;
        if !ok {
            tallies[i].failed += 1;
        }
    };
    for t in 0..trials {
        if dims.is_empty() {
            break;
        }
        let dim = dims[(t as usize) % dims.len()];
        crate::hilbert::check_operator_dim(dim)?;
        let a = random_subspace(&mut rng, dim);
        let b = random_subspace(&mut rng, dim);
        let c = random_subspace(&mut rng, dim);

        record(0, meet(&a, &b)? == meet(&b, &a)?);
        record(1, join(&a, &b)? == join(&b, &a)?);
        record(2, meet(&meet(&a, &b)?, &c)? == meet(&a, &meet(&b, &c)?)?);
        record(3, join(&join(&a, &b)?, &c)? == join(&a, &join(&b, &c)?)?);
        record(
            4,
            join(&a, &meet(&a, &b)?)? == a && meet(&a, &join(&a, &b)?)? == a,
        );
        record(5, meet(&a, &a)? == a && join(&a, &a)? == a);
        record(
            6,
            ortho(&meet(&a, &b)?) == join(&ortho(&a), &ortho(&b))?
                && ortho(&join(&a, &b)?) == meet(&ortho(&a), &ortho(&b))?,
        );
        record(7, ortho(&ortho(&a)) == a);
        let (lo, hi) = random_comparable_pair(&mut rng, dim);
        record(8, leq(&ortho(&hi), &ortho(&lo))?);
        record(
            9,
            meet(&a, &ortho(&a))?.rank() == 0 && join(&a, &ortho(&a))? == Subspace::whole(dim),
        );
        record(10, orthomodular_check(&lo, &hi)?.holds());
        record(11, modular_check(&lo, &b, &hi)?.holds());
    }
    Ok(LatticeReport {
        trials,
        dims: dims.to_vec(),
        seed,
        laws: tallies,
    })
}
