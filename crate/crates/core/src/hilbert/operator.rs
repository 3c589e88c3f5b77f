use super::borel::BorelSet;
use super::error::HilbertError;
use super::linalg::{canonicalize_phase, inner, CMatrix, ZERO};
use super::state::{same_dim, StateVector};
use super::{max_dim, DEGENERACY_TOL, HERMITIAN_TOL, NORM_TOL};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

pub(crate) fn check_operator_dim(dim: usize) -> Result<(), HilbertError> {
    let max = max_dim();
    if !(1..=max).contains(&dim) {
        return Err(HilbertError::DimensionOutOfRange { dim, min: 1, max });
    }
    Ok(())
}

/// A Hermitian matrix: an observable or a Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self, HilbertError> {
        check_operator_dim(matrix.dim())?;
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(HilbertError::NotHermitian { deviation });
        }
        Ok(HermitianOperator { matrix })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, HilbertError> {
        Self::new(CMatrix::from_rows(rows).ok_or(HilbertError::NotSquare)?)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, HilbertError> {
        Self::new(CMatrix::from_real_rows(rows).ok_or(HilbertError::NotSquare)?)
    }

    pub fn zero(dim: usize) -> Result<Self, HilbertError> {
        Self::new(CMatrix::zeros(dim))
    }

    pub fn pauli_x() -> Self {
        Self::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    pub fn pauli_y() -> Self {
        let i = Complex64::new(0.0, 1.0);
        Self::from_rows(&[vec![ZERO, -i], vec![i, ZERO]]).unwrap()
    }

    pub fn pauli_z() -> Self {
        Self::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        HermitianOperator {
            matrix: self.matrix.scale(Complex64::new(factor, 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `<v|H|v>` for a unit vector, i.e. the eigenvalue when `v` is an eigenvector.
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        inner(v, &self.matrix.apply(v)).re
    }

    /// Residual `‖Hv - <v|H|v> v‖`; zero exactly for eigenvectors.
    pub fn eigen_residual(&self, v: &[Complex64]) -> f64 {
        let lambda = self.expectation(v);
        let hv = self.matrix.apply(v);
        hv.iter()
            .zip(v)
            .map(|(a, b)| (a - b * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl Serialize for HermitianOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.matrix.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let matrix = deserialize_matrix(deserializer)?;
        HermitianOperator::new(matrix).map_err(serde::de::Error::custom)
    }
}

fn deserialize_matrix<'de, D: Deserializer<'de>>(deserializer: D) -> Result<CMatrix, D::Error> {
    let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .collect();
    CMatrix::from_rows(&rows).ok_or_else(|| serde::de::Error::custom("matrix is not square"))
}

/// An orthogonal projector: Hermitian and idempotent.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    matrix: CMatrix,
}

impl Projector {
    pub fn new(matrix: CMatrix) -> Result<Self, HilbertError> {
        check_operator_dim(matrix.dim())?;
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(HilbertError::NotHermitian { deviation });
        }
        let deviation = (&matrix * &matrix).distance(&matrix);
        if deviation > HERMITIAN_TOL {
            return Err(HilbertError::NotIdempotent { deviation });
        }
        Ok(Projector { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Projector {
            matrix: CMatrix::zeros(dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projector {
            matrix: CMatrix::identity(dim),
        }
    }

    /// `|v><v|`
    pub fn onto(v: &StateVector) -> Self {
        Projector {
            matrix: v.density(),
        }
    }

    /// Sum of `|v_i><v_i|` over orthonormal `vectors`.
    pub(crate) fn from_orthonormal(dim: usize, vectors: &[Vec<Complex64>]) -> Self {
        let mut matrix = CMatrix::zeros(dim);
        for v in vectors {
            matrix = &matrix + &CMatrix::outer(v, v);
        }
        Projector { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Trace, which equals the rank.
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn rank(&self) -> usize {
        self.trace().round().max(0.0) as usize
    }

    pub fn apply(&self, v: &StateVector) -> Vec<Complex64> {
        self.matrix.apply(v.amplitudes())
    }

    pub fn distance(&self, other: &Projector) -> f64 {
        self.matrix.distance(&other.matrix)
    }
}

impl Serialize for Projector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.matrix.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Projector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let matrix = deserialize_matrix(deserializer)?;
        Projector::new(matrix).map_err(serde::de::Error::custom)
    }
}

/// `|v><v|` for raw amplitudes, which must have unit norm.
pub fn rank1_projector(v: &[Complex64]) -> Result<Projector, HilbertError> {
    let n = super::linalg::norm(v);
    if (n - 1.0).abs() > NORM_TOL {
        return Err(HilbertError::NotNormalized { norm: n });
    }
    check_operator_dim(v.len())?;
    Ok(Projector {
        matrix: CMatrix::outer(v, v),
    })
}

/// Born rule `<psi|P|psi>`, cross-checked against `Tr[P_psi P]`.
pub fn potentia(psi: &StateVector, p: &Projector) -> Result<f64, HilbertError> {
    same_dim(p.dim(), psi.dim())?;
    let braket = inner(psi.amplitudes(), &p.apply(psi)).re;
    let trace = (&psi.density() * p.matrix()).trace().re;
    if (braket - trace).abs() > NORM_TOL {
        return Err(HilbertError::BornRuleMismatch { braket, trace });
    }
    Ok(braket.clamp(0.0, 1.0))
}

/// One eigenspace of a Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralComponent {
    pub eigenvalue: f64,
    pub projector: Projector,
    /// Orthonormal eigenvectors spanning the eigenspace, each with canonical phase.
    pub vectors: Vec<Vec<Complex64>>,
}

/// Cyclic complex Jacobi; returns eigenvalues and the unitary whose
/// columns are the matching eigenvectors.
fn jacobi(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.dim();
    let mut a = h.clone();
    let mut v = CMatrix::identity(n);
    let threshold = JACOBI_TOL * h.frobenius().max(1.0);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / mag;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// Eigenvalues in ascending order with their eigenprojectors; eigenvalues
/// within `1e-8` of each other share one projector.
pub fn spectral_decompose(h: &HermitianOperator) -> Vec<SpectralComponent> {
    let n = h.dim();
    let (values, vectors) = jacobi(h.matrix());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some(g) if values[i] - values[g[0]] <= DEGENERACY_TOL => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let eigenvalue = g.iter().map(|&i| values[i]).sum::<f64>() / g.len() as f64;
            let vecs: Vec<Vec<Complex64>> = g
                .iter()
                .map(|&i| {
                    let mut col = vectors.column(i);
                    canonicalize_phase(&mut col);
                    col
                })
                .collect();
            SpectralComponent {
                eigenvalue,
                projector: Projector::from_orthonormal(n, &vecs),
                vectors: vecs,
            }
        })
        .collect()
}

/// Spectral projector of the event "a measurement of `a` yields a value in `delta`".
pub fn event_projector(a: &HermitianOperator, delta: &BorelSet) -> Projector {
    let n = a.dim();
    let vectors: Vec<Vec<Complex64>> = spectral_decompose(a)
        .into_iter()
        .filter(|c| delta.contains_within(c.eigenvalue, DEGENERACY_TOL))
        .flat_map(|c| c.vectors)
        .collect();
    Projector::from_orthonormal(n, &vectors)
}

/// `exp(-i H t / hbar) psi`, built from the spectral decomposition of `h`.
pub fn evolve_with_hbar(
    psi: &StateVector,
    h: &HermitianOperator,
    t: f64,
    hbar: f64,
) -> Result<StateVector, HilbertError> {
    same_dim(h.dim(), psi.dim())?;
    if !t.is_finite() {
        return Err(HilbertError::NonFiniteTime(t));
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(HilbertError::InvalidHbar(hbar));
    }
    let mut out = vec![ZERO; psi.dim()];
    for c in spectral_decompose(h) {
        let phase = Complex64::from_polar(1.0, -c.eigenvalue * t / hbar);
        for (o, x) in out.iter_mut().zip(c.projector.apply(psi)) {
            *o += phase * x;
        }
    }
    Ok(StateVector::from_unit(out))
}

/// [`evolve_with_hbar`] with `hbar = 1`.
pub fn evolve(
    psi: &StateVector,
    h: &HermitianOperator,
    t: f64,
) -> Result<StateVector, HilbertError> {
    evolve_with_hbar(psi, h, t, 1.0)
}

/// The unitary `exp(-i H t / hbar)`.
pub fn propagator(h: &HermitianOperator, t: f64, hbar: f64) -> CMatrix {
    let mut u = CMatrix::zeros(h.dim());
    for c in spectral_decompose(h) {
        let phase = Complex64::from_polar(1.0, -c.eigenvalue * t / hbar);
        u = &u + &c.projector.matrix().scale(phase);
    }
    u
}
