//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use paqs_cli::scenario::Scenario;
use paqs_core::hilbert::linalg::inner;
use paqs_core::hilbert::{
    evolve_with_hbar, potentia, spectral_decompose, Basis, CMatrix, Complex64, HermitianOperator,
    Projector, StateVector,
};
use paqs_core::lattice::{distributivity_witness, verify_laws, Subspace};
use paqs_core::logic::{
    enumerate_valuations, is_valid, parse_formula, trivializes, Formula, Limits, Validity,
};
use paqs_core::powers::{
    actualize, build_quantum_situation, effectuations, p_truth, potential_consistency_check,
    run_experiment, superposition_formula, ConsistencyVerdict, PTruth, QuantumStatement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::time::{Duration, Instant};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fixture(name: &str) -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    Scenario::load(&path).unwrap_or_else(|e| panic!("{e}"))
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, format!("took {took:?}, limit {limit:?}"))
}

fn paraconsistency_pair() -> Check {
    let lim = Limits::default();
    let weak = parse_formula("(A & ~A) -> B").unwrap();
    let start = Instant::now();
    let model = match is_valid(&weak, &lim).map_err(|e| e.to_string())? {
        Validity::Invalid { countermodel } => countermodel,
        Validity::Valid => return Err("weak explosion decided valid".into()),
    };
    within(Duration::from_secs(1), start)?;
    ensure(
        model.value(&weak) == Some(false),
        "countermodel does not falsify",
    )?;
    let admissible = enumerate_valuations(std::slice::from_ref(&weak), &lim)
        .unwrap()
        .any(|v| v == model);
    ensure(admissible, "countermodel is not an admissible valuation")?;

    let strong = parse_formula("(A & ~*A) -> B").unwrap();
    let start = Instant::now();
    ensure(
        is_valid(&strong, &lim).unwrap().is_valid(),
        "strong explosion decided invalid",
    )?;
    within(Duration::from_secs(1), start)?;
    Ok(format!(
        "(A & ~A) -> B INVALID with A={} ~A={} B={}; (A & ~*A) -> B VALID",
        u8::from(model.atom("A") == Some(true)),
        u8::from(model.value(&parse_formula("~A").unwrap()) == Some(true)),
        u8::from(model.atom("B") == Some(true)),
    ))
}

fn triviality_dichotomy() -> Check {
    let start = Instant::now();
    let lim = Limits::default();
    let p = |s: &str| parse_formula(s).unwrap();
    ensure(
        !trivializes(&[p("A"), p("~A")], &lim).unwrap().is_trivial(),
        "{A, ~A} trivial",
    )?;
    ensure(
        trivializes(&[p("A"), p("~*A")], &lim).unwrap().is_trivial(),
        "{A, ~*A} nontrivial",
    )?;
    let sg = fixture("stern_gerlach.json");
    let basis = sg.basis("z").unwrap();
    let qs = build_quantum_situation(sg.state("psi").unwrap(), basis).unwrap();
    for reinforce in [false, true] {
        let fs = superposition_formula(&qs, &sg.pairs_in("z"), reinforce).unwrap();
        let expected = if reinforce { 4 } else { 2 };
        ensure(fs.len() == expected, format!("{} formulas", fs.len()))?;
        let verdict = potential_consistency_check(&fs, &lim).unwrap();
        ensure(
            matches!(
                verdict,
                ConsistencyVerdict::WeaklyInconsistentNontrivial { .. }
            ),
            format!("reinforce={reinforce}: {}", verdict.label()),
        )?;
    }
    within(Duration::from_secs(1), start)?;
    Ok("{A,~A} nontrivial, {A,~*A} trivial, superposition sets (plain and reinforced) weakly inconsistent nontrivial".into())
}

fn random_formula(rng: &mut ChaCha8Rng, budget: usize) -> Formula {
    if budget <= 1 || rng.random_bool(0.25) {
        return Formula::atom(["A", "B", "C"][rng.random_range(0..3)]);
    }
    let kind = if budget < 3 {
        0
    } else {
        rng.random_range(0..4)
    };
    match kind {
        0 => Formula::weak_neg(random_formula(rng, budget - 1)),
        k => {
            let left = rng.random_range(1..=budget - 2);
            let a = random_formula(rng, left);
            let b = random_formula(rng, budget - 1 - left);
            match k {
                1 => Formula::conj(a, b),
                2 => Formula::disj(a, b),
                _ => Formula::implies(a, b),
            }
        }
    }
}

fn classical(f: &Formula, env: u32, atoms: &[&str]) -> bool {
    match f {
        Formula::Atom(a) => env >> atoms.iter().position(|x| x == a).unwrap() & 1 == 1,
        Formula::Conj(a, b) => classical(a, env, atoms) && classical(b, env, atoms),
        Formula::Disj(a, b) => classical(a, env, atoms) || classical(b, env, atoms),
        Formula::Impl(a, b) => !classical(a, env, atoms) || classical(b, env, atoms),
        Formula::WeakNeg(a) => !classical(a, env, atoms),
    }
}

fn classical_embedding() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let lim = Limits::default();
    let (mut checked, mut tautologies) = (0, 0);
    while checked < 250 {
        let f = random_formula(&mut rng, 10);
        if f.size() > 10 {
            continue;
        }
        let atoms = f.atoms();
        let taut = (0..1u32 << atoms.len()).all(|env| classical(&f, env, &atoms));
        let strong = f.strengthen_negations();
        let decided = is_valid(&strong, &lim)
            .map_err(|e| e.to_string())?
            .is_valid();
        ensure(
            decided == taut,
            format!("{f}: quasi-matrix {decided}, truth table {taut}"),
        )?;
        checked += 1;
        tautologies += usize::from(taut);
    }
    Ok(format!(
        "{checked} formulas agree ({tautologies} tautologies)"
    ))
}

fn uniform_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> HermitianOperator {
    let g = CMatrix::from_rows(
        &(0..dim)
            .map(|_| uniform_vector(rng, dim))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    HermitianOperator::new((&g + &g.adjoint()).scale(Complex64::new(0.5, 0.0))).unwrap()
}

fn born_rule() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_form = 0.0f64;
    let mut worst_sum = 0.0f64;
    for case in 0..100 {
        let dim = 2 + case % 4;
        let psi = StateVector::normalized(uniform_vector(&mut rng, dim)).unwrap();
        let comps = spectral_decompose(&random_hermitian(&mut rng, dim));
        let mut m = CMatrix::zeros(dim);
        for c in comps.iter().filter(|_| rng.random_bool(0.5)) {
            m = &m + c.projector.matrix();
        }
        let braket = inner(psi.amplitudes(), &m.apply(psi.amplitudes())).re;
        let trace = (&psi.density() * &m).trace().re;
        worst_form = worst_form.max((braket - trace).abs());
        let p = Projector::new(m).map_err(|e| e.to_string())?;
        potentia(&psi, &p).map_err(|e| e.to_string())?;

        let vectors: Vec<StateVector> = comps
            .iter()
            .flat_map(|c| {
                c.vectors
                    .iter()
                    .map(|v| StateVector::new(v.clone()).unwrap())
            })
            .collect();
        let basis = Basis::new("eigen", vectors).map_err(|e| e.to_string())?;
        let sum: f64 = basis
            .vectors()
            .iter()
            .map(|b| potentia(&psi, &Projector::onto(b)).unwrap())
            .sum();
        worst_sum = worst_sum.max((sum - 1.0).abs());
    }
    ensure(worst_form < 1e-9, format!("forms differ by {worst_form:e}"))?;
    ensure(
        worst_sum < 1e-8,
        format!("potentia sum off by {worst_sum:e}"),
    )?;
    Ok(format!(
        "100 cases: max form gap {worst_form:.1e}, max |sum - 1| {worst_sum:.1e}"
    ))
}

fn frequency_convergence() -> Check {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (file, block, half_width) in [
        ("stern_gerlach.json", "sg_z", 0.0063),
        ("one_third.json", "third_z", 0.0060),
    ] {
        let s = fixture(file);
        let e = s.experiment(block).unwrap();
        let qs = build_quantum_situation(s.state(&e.state).unwrap(), s.basis(&e.basis).unwrap())
            .unwrap();
        ensure(e.shots == 100_000, "fixture shots")?;
        let table = run_experiment(&qs, e.shots, e.seed.unwrap()).unwrap();
        for (row, pair) in table.rows.iter().zip(qs.pairs()) {
            let dev = (row.frequency - pair.potentia).abs();
            ensure(
                dev < half_width,
                format!("{block}/{}: deviation {dev}", row.power),
            )?;
        }
        parts.push(format!("{block} f={:.5}", table.rows[0].frequency));
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("N=1e5: {}", parts.join(", ")))
}

fn non_collapse() -> Check {
    let s = fixture("stern_gerlach.json");
    let psa = s.state("psi").unwrap();
    let before = psa.to_exact_bytes();
    let hash = psa.fingerprint();
    let qs = build_quantum_situation(psa, s.basis("z").unwrap()).unwrap();
    let n = effectuations(&qs, 10_000, 11).unwrap().count();
    ensure(n == 10_000, "shot count")?;
    ensure(
        psa.to_exact_bytes() == before && psa.fingerprint() == hash,
        "PSA changed",
    )?;

    let r = fixture("rabi.json");
    let h = r.hamiltonian.as_ref().unwrap();
    let start = r.state("up").unwrap();
    let z = r.basis("z").unwrap();
    let (mut quiet, mut busy) = (start.clone(), start.clone());
    let mut worst = 0.0f64;
    for (k, w) in h.times.windows(2).enumerate() {
        let dt = w[1] - w[0];
        quiet = quiet.evolved(&h.operator, dt, h.hbar).unwrap();
        busy = busy.evolved(&h.operator, dt, h.hbar).unwrap();
        let qs = build_quantum_situation(&busy, z).unwrap();
        run_experiment(&qs, 200, k as u64).unwrap();
        actualize(&qs, k as u64).unwrap();
        let gap: f64 = quiet
            .state()
            .amplitudes()
            .iter()
            .zip(busy.state().amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(gap);
    }
    ensure(worst < 1e-9, format!("trajectories differ by {worst:e}"))?;
    Ok(format!(
        "hash {}... unchanged after 1e4 shots; trajectory gap {worst:.1e}",
        &hash[..12]
    ))
}

fn coexistence() -> Check {
    let s = fixture("stern_gerlach.json");
    let psa = s.state("psi").unwrap();
    let z = s.basis("z").unwrap();
    for name in ["P_up", "P_down"] {
        let st = QuantumStatement::new(name, 0.5, "psi").unwrap();
        ensure(
            p_truth(&st, psa, z).unwrap() == PTruth::PTrue,
            format!("{name} not p-true"),
        )?;
    }
    let qs = build_quantum_situation(psa, z).unwrap();
    let pair = &s.pairs_in("z")[0];
    for e in effectuations(&qs, 1000, 17).unwrap() {
        let trues = e.truth.iter().filter(|(_, t)| *t).count();
        ensure(
            trues == 1,
            format!("shot {} has {trues} true powers", e.shot),
        )?;
        ensure(
            e.truth_of(&pair.a) != e.truth_of(&pair.b),
            "contradictories agree",
        )?;
    }
    let eig = fixture("eigenstate.json");
    let qe = build_quantum_situation(eig.state("up").unwrap(), eig.basis("z").unwrap()).unwrap();
    ensure(
        effectuations(&qe, 1000, 3)
            .unwrap()
            .all(|e| e.selected == "P_up"),
        "eigenstate not deterministic",
    )?;
    Ok(
        "both SG statements p-true; 1e3 effectuations exactly-one-true; eigenstate always P_up"
            .into(),
    )
}

fn schroedinger() -> Check {
    let r = fixture("rabi.json");
    let h = r.hamiltonian.as_ref().unwrap();
    let start = r.state("up").unwrap();
    let z = r.basis("z").unwrap();
    // H = (omega/2) sigma_x with omega = 2.
    let omega = 2.0 * h.operator.matrix()[(0, 1)].re;
    ensure(h.times.len() == 50, "time grid")?;
    let (mut worst_p, mut worst_n, mut worst_s) = (0.0f64, 0.0f64, 0.0f64);
    for &t in &h.times {
        let evolved = start.evolved(&h.operator, t, h.hbar).unwrap();
        let p = build_quantum_situation(&evolved, z)
            .unwrap()
            .potentia_of("P_down")
            .unwrap();
        worst_p = worst_p.max((p - (omega * t / 2.0).sin().powi(2)).abs());
        worst_n = worst_n.max((evolved.state().norm() - 1.0).abs());
        let half = evolve_with_hbar(start.state(), &h.operator, t / 2.0, h.hbar).unwrap();
        let twice = evolve_with_hbar(&half, &h.operator, t / 2.0, h.hbar).unwrap();
        let gap: f64 = twice
            .amplitudes()
            .iter()
            .zip(evolved.state().amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst_s = worst_s.max(gap);
    }
    ensure(worst_p < 1e-8, format!("potentia off by {worst_p:e}"))?;
    ensure(worst_n < 1e-9, format!("norm off by {worst_n:e}"))?;
    ensure(worst_s < 1e-8, format!("semigroup off by {worst_s:e}"))?;
    Ok(format!(
        "50 points: |p - sin^2| {worst_p:.1e}, |norm - 1| {worst_n:.1e}, semigroup {worst_s:.1e}"
    ))
}

fn orthomodular_lattice() -> Check {
    let start = Instant::now();
    let report = verify_laws(1000, &[2, 3, 4], 7).map_err(|e| e.to_string())?;
    for law in &report.laws {
        ensure(
            law.failed == 0,
            format!("{} failed {} times", law.law, law.failed),
        )?;
    }
    let w = distributivity_witness(2).map_err(|e| e.to_string())?;
    ensure(w.lhs == w.c, "lhs differs from c")?;
    ensure(w.rhs == Subspace::zero(2), "rhs is not the zero subspace")?;
    within(Duration::from_secs(10), start)?;
    Ok(format!(
        "{} laws x 1000 cases pass; dim-2 witness lhs = c, rhs = 0",
        report.laws.len()
    ))
}

fn basis_dependence() -> Check {
    let s = fixture("generic.json");
    let psa = s.state("psi").unwrap();
    let qz = build_quantum_situation(psa, s.basis("z").unwrap()).unwrap();
    let qx = build_quantum_situation(psa, s.basis("x").unwrap()).unwrap();
    ensure(qz != qx, "situations coincide")?;
    let pz: Vec<f64> = qz.pairs().iter().map(|p| p.potentia).collect();
    let px: Vec<f64> = qx.pairs().iter().map(|p| p.potentia).collect();
    ensure(
        pz.iter().zip(&px).all(|(a, b)| (a - b).abs() > 1e-6),
        "potentia coincide",
    )?;
    Ok(format!(
        "z: ({:.2}, {:.2}), x: ({:.2}, {:.2})",
        pz[0], pz[1], px[0], px[1]
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("paraconsistency pair", paraconsistency_pair),
        ("triviality dichotomy", triviality_dichotomy),
        ("classical embedding", classical_embedding),
        ("Born rule", born_rule),
        ("frequency convergence", frequency_convergence),
        ("non-collapse", non_collapse),
        ("SR/MPA/PPA coexistence", coexistence),
        ("Schroedinger evolution", schroedinger),
        ("orthomodular lattice", orthomodular_lattice),
        ("basis dependence", basis_dependence),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  {:>2}. {name}: {detail} ({secs:.2} s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL  {:>2}. {name}: {why} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
