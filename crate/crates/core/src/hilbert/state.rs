use super::error::HilbertError;
use super::linalg::{
    canonicalize_phase, inner, norm, pairs_to_complex, CMatrix, PairSeq, ONE, ZERO,
};
use super::{max_dim, NORM_TOL};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A normalized vector of a finite-dimensional complex Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

pub(crate) fn check_dim(dim: usize) -> Result<(), HilbertError> {
    let max = max_dim();
    if !(2..=max).contains(&dim) {
        return Err(HilbertError::DimensionOutOfRange { dim, min: 2, max });
    }
    Ok(())
}

impl StateVector {
    /// Accepts amplitudes whose norm is 1 within `1e-9`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, HilbertError> {
        check_dim(amplitudes.len())?;
        let n = norm(&amplitudes);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(HilbertError::NotNormalized { norm: n });
        }
        Ok(StateVector { amplitudes })
    }

    /// Divides by the norm; fails only on the zero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self, HilbertError> {
        check_dim(amplitudes.len())?;
        let n = norm(&amplitudes);
        if n < 1e-300 {
            return Err(HilbertError::ZeroVector);
        }
        for a in amplitudes.iter_mut() {
            *a /= n;
        }
        Ok(StateVector { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self, HilbertError> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The `i`-th computational basis vector.
    pub fn basis_vector(dim: usize, i: usize) -> Result<Self, HilbertError> {
        check_dim(dim)?;
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[i] = ONE;
        Ok(StateVector { amplitudes })
    }

    /// Skips the norm check; callers guarantee unit norm up to rounding.
    pub(crate) fn from_unit(amplitudes: Vec<Complex64>) -> Self {
        StateVector { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    /// A representative of the same ray with canonical global phase.
    pub fn phase_canonical(&self) -> Self {
        let mut amplitudes = self.amplitudes.clone();
        canonicalize_phase(&mut amplitudes);
        StateVector { amplitudes }
    }

    /// `|self><self|` as a plain matrix.
    pub fn density(&self) -> CMatrix {
        CMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    /// Componentwise distance after removing the global phase difference.
    pub fn ray_distance(&self, other: &StateVector) -> f64 {
        let a = self.phase_canonical();
        let b = other.phase_canonical();
        norm(
            &a.amplitudes
                .iter()
                .zip(&b.amplitudes)
                .map(|(x, y)| x - y)
                .collect::<Vec<_>>(),
        )
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PairSeq(&self.amplitudes).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        StateVector::new(pairs_to_complex(&pairs)).map_err(serde::de::Error::custom)
    }
}

/// `<a|b>`; errors on mismatched dimensions.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64, HilbertError> {
    same_dim(a.dim(), b.dim())?;
    Ok(inner(a.amplitudes(), b.amplitudes()))
}

pub(crate) fn same_dim(expected: usize, found: usize) -> Result<(), HilbertError> {
    if expected != found {
        return Err(HilbertError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// An ordered orthonormal basis with a label and one name per element.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Basis {
    label: String,
    names: Vec<String>,
    vectors: Vec<StateVector>,
}

impl Basis {
    /// Elements are named `e1`, `e2`, ...
    pub fn new(label: impl Into<String>, vectors: Vec<StateVector>) -> Result<Self, HilbertError> {
        let names = (1..=vectors.len()).map(|i| format!("e{i}")).collect();
        Self::with_names(label, names, vectors)
    }

    pub fn with_names(
        label: impl Into<String>,
        names: Vec<String>,
        vectors: Vec<StateVector>,
    ) -> Result<Self, HilbertError> {
        let dim = vectors.first().map(StateVector::dim).unwrap_or(0);
        check_dim(dim)?;
        if vectors.len() != dim {
            return Err(HilbertError::WrongVectorCount {
                expected: dim,
                found: vectors.len(),
            });
        }
        if names.len() != dim {
            return Err(HilbertError::WrongVectorCount {
                expected: dim,
                found: names.len(),
            });
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(HilbertError::DuplicateName(name.clone()));
            }
        }
        for v in &vectors {
            same_dim(dim, v.dim())?;
        }
        for i in 0..dim {
            for j in i..dim {
                let expected = if i == j { ONE } else { ZERO };
                let deviation =
                    (inner(vectors[i].amplitudes(), vectors[j].amplitudes()) - expected).norm();
                if deviation > NORM_TOL {
                    return Err(HilbertError::NotOrthonormal { i, j, deviation });
                }
            }
        }
        Ok(Basis {
            label: label.into(),
            names,
            vectors,
        })
    }

    pub fn computational(label: impl Into<String>, dim: usize) -> Result<Self, HilbertError> {
        let vectors = (0..dim)
            .map(|i| StateVector::basis_vector(dim, i))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(label, vectors)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn element(&self, name: &str) -> Option<&StateVector> {
        self.position(name).map(|i| &self.vectors[i])
    }
}

/// Coordinates `<b_i|psi>` of `psi` in `basis`.
pub fn change_of_basis(psi: &StateVector, basis: &Basis) -> Result<Vec<Complex64>, HilbertError> {
    same_dim(basis.dim(), psi.dim())?;
    Ok(basis
        .vectors()
        .iter()
        .map(|b| inner(b.amplitudes(), psi.amplitudes()))
        .collect())
}
