#![allow(dead_code)]

use paqs_core::hilbert::{Basis, CMatrix, Complex64, HermitianOperator, StateVector};
use paqs_core::logic::Formula;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

/// Formulas over `A`, `B`, `C` with weak negation, of bounded depth.
pub fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just("A"), Just("B"), Just("C")].prop_map(Formula::atom);
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::conj(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::disj(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.prop_map(Formula::weak_neg),
        ]
    })
}

/// Classical two-valued evaluation, reading `~` as boolean negation.
pub fn classical(f: &Formula, env: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::Atom(a) => env(a),
        Formula::Conj(a, b) => classical(a, env) && classical(b, env),
        Formula::Disj(a, b) => classical(a, env) || classical(b, env),
        Formula::Impl(a, b) => !classical(a, env) || classical(b, env),
        Formula::WeakNeg(a) => !classical(a, env),
    }
}

pub fn tautology(f: &Formula) -> bool {
    let atoms: Vec<String> = f.atoms().into_iter().map(String::from).collect();
    (0u32..1 << atoms.len()).all(|mask| {
        let env = |name: &str| {
            let i = atoms.iter().position(|a| a == name).unwrap();
            mask >> i & 1 == 1
        };
        classical(f, &env)
    })
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> StateVector {
    StateVector::normalized(gaussian_vector(rng, dim)).unwrap()
}

pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> HermitianOperator {
    let g = CMatrix::from_rows(
        &(0..dim)
            .map(|_| gaussian_vector(rng, dim))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let h = (&g + &g.adjoint()).scale(Complex64::new(0.5, 0.0));
    HermitianOperator::new(h).unwrap()
}

/// Orthonormal basis from Gram-Schmidt on Gaussian vectors.
pub fn random_basis<R: Rng>(rng: &mut R, dim: usize) -> Basis {
    let mut vs: Vec<Vec<Complex64>> = Vec::new();
    while vs.len() < dim {
        let mut v = gaussian_vector(rng, dim);
        for u in &vs {
            let c: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= c * y;
            }
        }
        let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            vs.push(v.into_iter().map(|c| c / n).collect());
        }
    }
    Basis::new(
        "random",
        vs.into_iter()
            .map(|v| StateVector::new(v).unwrap())
            .collect(),
    )
    .unwrap()
}
