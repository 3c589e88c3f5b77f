//! Subcommand bodies. Each returns a [`Report`] or a [`CliError`].

use crate::error::CliError;
use crate::report::{num, sig, table, valuation_json, Report};
use crate::scenario::{Experiment, Scenario};
use paqs_core::hilbert::{Basis, StateVector};
use paqs_core::lattice::{distributivity_witness, verify_laws, Subspace};
use paqs_core::logic::{
    check_proof, is_valid, parse_formula, parse_proof_script, trivializes, Formula, Limits,
    Triviality, Validity,
};
use paqs_core::powers::{
    build_quantum_situation, effectuations, potential_consistency_check, run_experiment,
    square_of_opposition_check, superposition_formula, ConsistencyVerdict, OppositionReport, Psa,
    QuantumSituation,
};
use rand::Rng;
use serde_json::{json, Value};

fn situation_json(qs: &QuantumSituation) -> Value {
    json!({
        "psa": qs.psa_id(),
        "basis": qs.basis_label(),
        "pairs": qs.pairs().iter().map(|p| json!({"power": p.power.name(), "potentia": num(p.potentia)})).collect::<Vec<_>>(),
    })
}

fn situation_text(qs: &QuantumSituation) -> String {
    let rows: Vec<Vec<String>> = qs
        .pairs()
        .iter()
        .map(|p| vec![p.power.name().to_string(), sig(p.potentia)])
        .collect();
    format!(
        "quantum situation of {} in basis {}\n{}",
        qs.psa_id(),
        qs.basis_label(),
        table(&["power", "potentia"], &rows)
    )
}

fn pick_state<'a>(scenario: &'a Scenario, name: Option<&str>) -> Result<&'a Psa, CliError> {
    match name {
        Some(n) => scenario.state(n).map_err(CliError::Input),
        None => scenario
            .states
            .first()
            .ok_or_else(|| CliError::Input("scenario declares no states".into())),
    }
}

fn pick_basis<'a>(scenario: &'a Scenario, name: Option<&str>) -> Result<&'a Basis, CliError> {
    match name {
        Some(n) => scenario.basis(n).map_err(CliError::Input),
        None => scenario
            .bases
            .first()
            .ok_or_else(|| CliError::Input("scenario declares no bases".into())),
    }
}

/// One table per requested basis (all bases when none are named).
pub fn situations(
    scenario: &Scenario,
    state: Option<&str>,
    bases: &[String],
) -> Result<Report, CliError> {
    let psa = pick_state(scenario, state)?;
    let chosen: Vec<&Basis> = if bases.is_empty() {
        scenario.bases.iter().collect()
    } else {
        bases
            .iter()
            .map(|b| scenario.basis(b).map_err(CliError::Input))
            .collect::<Result<_, _>>()?
    };
    let mut text = String::new();
    let mut items = Vec::new();
    for (i, basis) in chosen.into_iter().enumerate() {
        let qs = build_quantum_situation(psa, basis).map_err(CliError::input)?;
        if i > 0 {
            text.push('\n');
        }
        text.push_str(&situation_text(&qs));
        items.push(situation_json(&qs));
    }
    Ok(Report::new(text, json!({"situations": items})))
}

/// Outcome of one experiment block.
#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub experiment: Experiment,
    pub seed: u64,
    pub seed_generated: bool,
    pub situation: QuantumSituation,
    pub counts: Vec<u64>,
    pub oppositions: Vec<(String, OppositionReport)>,
    pub fingerprint_before: String,
    pub fingerprint_after: String,
}

impl ExperimentRun {
    pub fn frequency(&self, i: usize) -> f64 {
        self.counts[i] as f64 / self.experiment.shots as f64
    }

    /// 4-sigma binomial half-width for power `i`.
    pub fn bound(&self, i: usize) -> f64 {
        let p = self.situation.pairs()[i].potentia;
        4.0 * (p * (1.0 - p) / self.experiment.shots as f64).sqrt()
    }

    pub fn within_bounds(&self) -> bool {
        (0..self.counts.len()).all(|i| {
            (self.frequency(i) - self.situation.pairs()[i].potentia).abs() <= self.bound(i) + 1e-12
        })
    }

    pub fn collapsed(&self) -> bool {
        self.fingerprint_before != self.fingerprint_after
    }
}

const OPPOSITION_CHUNK: u64 = 8192;

pub fn run_block(
    scenario: &Scenario,
    experiment: &Experiment,
    seed: u64,
    seed_generated: bool,
) -> Result<ExperimentRun, CliError> {
    let psa = scenario.state(&experiment.state).map_err(CliError::Input)?;
    let basis = scenario.basis(&experiment.basis).map_err(CliError::Input)?;
    let fingerprint_before = psa.fingerprint();
    let situation = build_quantum_situation(psa, basis).map_err(CliError::input)?;
    let table = run_experiment(&situation, experiment.shots, seed).map_err(CliError::input)?;
    let counts = table.rows.iter().map(|r| r.count).collect();

    let mut oppositions = Vec::new();
    for pair in scenario.pairs_in(basis.label()) {
        let mut merged = square_of_opposition_check(&pair, &[]);
        let mut stream =
            effectuations(&situation, experiment.shots, seed).map_err(CliError::input)?;
        let mut offset = 0usize;
        loop {
            let chunk: Vec<_> = stream.by_ref().take(OPPOSITION_CHUNK as usize).collect();
            if chunk.is_empty() {
                break;
            }
            let part = square_of_opposition_check(&pair, &chunk);
            merged.checked += part.checked;
            merged
                .violations
                .extend(part.violations.into_iter().map(|mut v| {
                    v.index += offset;
                    v
                }));
            offset += chunk.len();
        }
        oppositions.push((pair.observable.clone(), merged));
    }
    Ok(ExperimentRun {
        experiment: experiment.clone(),
        seed,
        seed_generated,
        situation,
        counts,
        oppositions,
        fingerprint_before,
        fingerprint_after: psa.fingerprint(),
    })
}

fn run_text(run: &ExperimentRun) -> String {
    let e = &run.experiment;
    let mut out = format!(
        "experiment {}: state {}, basis {}, shots {}, seed {}{}\n",
        e.name,
        e.state,
        e.basis,
        e.shots,
        run.seed,
        if run.seed_generated {
            " (generated)"
        } else {
            ""
        }
    );
    let rows: Vec<Vec<String>> = run
        .situation
        .pairs()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            vec![
                p.power.name().to_string(),
                sig(p.potentia),
                run.counts[i].to_string(),
                sig(run.frequency(i)),
                sig(run.bound(i)),
            ]
        })
        .collect();
    out.push_str(&table(
        &["power", "potentia", "count", "frequency", "bound"],
        &rows,
    ));
    out.push_str(&format!(
        "  frequencies within 4-sigma bound: {}\n",
        if run.within_bounds() { "yes" } else { "no" }
    ));
    for (observable, rep) in &run.oppositions {
        out.push_str(&format!(
            "  opposition {} / {} ({}): {} effectuations, {} violations\n",
            rep.pair.0,
            rep.pair.1,
            observable,
            rep.checked,
            rep.violations.len()
        ));
    }
    out.push_str(&format!("  psa hash before: {}\n", run.fingerprint_before));
    out.push_str(&format!("  psa hash after:  {}\n", run.fingerprint_after));
    out.push_str(&format!(
        "  collapse: {}\n",
        if run.collapsed() { "DETECTED" } else { "none" }
    ));
    out
}

fn run_json(run: &ExperimentRun) -> Value {
    let e = &run.experiment;
    json!({
        "name": e.name,
        "state": e.state,
        "basis": e.basis,
        "shots": e.shots,
        "seed": run.seed,
        "seed_generated": run.seed_generated,
        "rows": run.situation.pairs().iter().enumerate().map(|(i, p)| json!({
            "power": p.power.name(),
            "potentia": num(p.potentia),
            "count": run.counts[i],
            "frequency": num(run.frequency(i)),
            "bound": num(run.bound(i)),
        })).collect::<Vec<_>>(),
        "within_bounds": run.within_bounds(),
        "opposition": run.oppositions.iter().map(|(obs, r)| json!({
            "a": r.pair.0,
            "b": r.pair.1,
            "observable": obs,
            "checked": r.checked,
            "violations": r.violations,
        })).collect::<Vec<_>>(),
        "psa_hash_before": run.fingerprint_before,
        "psa_hash_after": run.fingerprint_after,
        "collapsed": run.collapsed(),
    })
}

/// Options overriding the experiment blocks of a scenario.
#[derive(Debug, Clone, Default)]
pub struct MeasureOptions {
    pub experiments: Vec<String>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub jobs: usize,
}

pub fn measure(scenario: &Scenario, opts: &MeasureOptions) -> Result<Report, CliError> {
    let mut blocks: Vec<Experiment> = if opts.experiments.is_empty() {
        scenario.experiments.clone()
    } else {
        opts.experiments
            .iter()
            .map(|n| scenario.experiment(n).cloned().map_err(CliError::Input))
            .collect::<Result<_, _>>()?
    };
    if blocks.is_empty() {
        return Err(CliError::Input("scenario declares no experiments".into()));
    }
    if opts.shots == Some(0) {
        return Err(CliError::Input(
            "an experiment needs at least one shot".into(),
        ));
    }
    let mut seeds = Vec::new();
    for b in &mut blocks {
        if let Some(s) = opts.shots {
            b.shots = s;
        }
        seeds.push(match opts.seed.or(b.seed) {
            Some(s) => (s, false),
            None => (rand::rng().random::<u64>(), true),
        });
    }

    let jobs = opts.jobs.max(1).min(blocks.len());
    let mut results: Vec<Option<Result<ExperimentRun, CliError>>> =
        (0..blocks.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut slots: Vec<Vec<(usize, &mut Option<Result<ExperimentRun, CliError>>)>> =
            (0..jobs).map(|_| Vec::new()).collect();
        for (i, slot) in results.iter_mut().enumerate() {
            slots[i % jobs].push((i, slot));
        }
        for group in slots {
            let blocks = &blocks;
            let seeds = &seeds;
            scope.spawn(move || {
                for (i, slot) in group {
                    *slot = Some(run_block(scenario, &blocks[i], seeds[i].0, seeds[i].1));
                }
            });
        }
    });

    let mut text = String::new();
    let mut items = Vec::new();
    let mut negative = false;
    for (i, r) in results.into_iter().enumerate() {
        let run = r.expect("every block runs")?;
        if i > 0 {
            text.push('\n');
        }
        text.push_str(&run_text(&run));
        items.push(run_json(&run));
        negative |= run.collapsed() || run.oppositions.iter().any(|(_, o)| !o.passed());
    }
    Ok(Report::new(text, json!({"experiments": items})).negative(negative))
}

/// Potentia in `basis` at each time of the Hamiltonian's grid (or `times`).
pub fn evolve(
    scenario: &Scenario,
    state: Option<&str>,
    basis: Option<&str>,
    times: Option<&[f64]>,
) -> Result<Report, CliError> {
    let h = scenario
        .hamiltonian
        .as_ref()
        .ok_or_else(|| CliError::Input("scenario declares no hamiltonian".into()))?;
    let psa = pick_state(scenario, state)?;
    let basis = pick_basis(scenario, basis)?;
    let times = times.unwrap_or(&h.times);
    if times.is_empty() {
        return Err(CliError::Input("no evolution times given".into()));
    }
    let mut header = vec!["t".to_string(), "norm".to_string()];
    header.extend(basis.names().iter().cloned());
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for &t in times {
        let evolved = psa
            .evolved(&h.operator, t, h.hbar)
            .map_err(CliError::input)?;
        let qs = build_quantum_situation(&evolved, basis).map_err(CliError::input)?;
        let norm = evolved.state().norm();
        let mut row = vec![sig(t), sig(norm)];
        row.extend(qs.pairs().iter().map(|p| sig(p.potentia)));
        rows.push(row);
        items.push(json!({
            "t": num(t),
            "norm": num(norm),
            "potentia": qs.pairs().iter().map(|p| json!({"power": p.power.name(), "potentia": num(p.potentia)})).collect::<Vec<_>>(),
        }));
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let text = format!(
        "evolution of {} in basis {} (hbar {})\n{}",
        psa.id(),
        basis.label(),
        sig(h.hbar),
        table(&header, &rows)
    );
    Ok(Report::new(
        text,
        json!({"psa": psa.id(), "basis": basis.label(), "hbar": num(h.hbar), "steps": items}),
    ))
}

fn parse(text: &str) -> Result<Formula, CliError> {
    parse_formula(text).map_err(|e| CliError::Input(format!("cannot parse `{text}`: {e}")))
}

fn indent(block: &str) -> String {
    block.lines().map(|l| format!("  {l}\n")).collect()
}

pub fn logic_check(
    formula: &str,
    expect_valid: Option<bool>,
    limits: &Limits,
) -> Result<Report, CliError> {
    let f = parse(formula)?;
    let verdict = is_valid(&f, limits)?;
    let negative = expect_valid.is_some_and(|e| e != verdict.is_valid());
    Ok(match verdict {
        Validity::Valid => Report::new(
            format!("{f}\nVALID\n"),
            json!({"formula": f.to_string(), "verdict": "valid"}),
        ),
        Validity::Invalid { countermodel } => Report::new(
            format!("{f}\nINVALID\ncountermodel:\n{}", indent(&countermodel.render())),
            json!({"formula": f.to_string(), "verdict": "invalid", "countermodel": valuation_json(&countermodel)}),
        ),
    }
    .negative(negative))
}

/// Source of the superposition formulas for `logic trivial`.
pub struct SituationSource<'a> {
    pub scenario: &'a Scenario,
    pub state: Option<&'a str>,
    pub basis: Option<&'a str>,
    pub reinforce: bool,
}

pub fn scenario_formulas(src: &SituationSource<'_>) -> Result<Vec<Formula>, CliError> {
    let psa = pick_state(src.scenario, src.state)?;
    let basis = match src.basis {
        Some(_) => pick_basis(src.scenario, src.basis)?,
        None => src
            .scenario
            .pairs
            .first()
            .map(|p| src.scenario.basis(&p.context).map_err(CliError::Input))
            .unwrap_or_else(|| pick_basis(src.scenario, None))?,
    };
    let qs = build_quantum_situation(psa, basis).map_err(CliError::input)?;
    superposition_formula(&qs, &src.scenario.pairs_in(basis.label()), src.reinforce)
        .map_err(CliError::input)
}

pub fn logic_trivial(
    formulas: &[String],
    source: Option<SituationSource<'_>>,
    expect_trivial: Option<bool>,
    limits: &Limits,
) -> Result<Report, CliError> {
    let mut gamma = Vec::new();
    if let Some(src) = &source {
        gamma.extend(scenario_formulas(src)?);
    }
    for f in formulas {
        gamma.push(parse(f)?);
    }
    let listing: String = gamma.iter().map(|f| format!("  {f}\n")).collect();
    let names: Vec<String> = gamma.iter().map(Formula::to_string).collect();
    let (verdict, negative) = if source.is_some() {
        let v = potential_consistency_check(&gamma, limits)?;
        let trivial = matches!(v, ConsistencyVerdict::Trivial);
        (
            (v.label(), v.witness().cloned()),
            expect_trivial.is_some_and(|e| e != trivial),
        )
    } else {
        let t = trivializes(&gamma, limits)?;
        let trivial = t.is_trivial();
        let w = match t {
            Triviality::Trivial => None,
            Triviality::Nontrivial { witness } => Some(witness),
        };
        (
            (if trivial { "trivial" } else { "nontrivial" }, w),
            expect_trivial.is_some_and(|e| e != trivial),
        )
    };
    let (label, witness) = verdict;
    let headline = if witness.is_some() {
        "NONTRIVIAL"
    } else {
        "TRIVIAL"
    };
    let mut text = format!("formulas:\n{listing}{headline}\n");
    if label != "trivial" && label != "nontrivial" {
        text.push_str(&format!("classification: {label}\n"));
    }
    if let Some(w) = &witness {
        text.push_str(&format!("witness:\n{}", indent(&w.render())));
    }
    let mut j =
        json!({"formulas": names, "verdict": headline.to_lowercase(), "classification": label});
    if let Some(w) = &witness {
        j["witness"] = valuation_json(w);
    }
    Ok(Report::new(text, j).negative(negative))
}

pub fn logic_proof(script: &str, expect_accepted: Option<bool>) -> Result<Report, CliError> {
    let parsed = parse_proof_script(script).map_err(CliError::input)?;
    let result = check_proof(&parsed);
    let negative = expect_accepted.is_some_and(|e| e != result.is_ok());
    Ok(match result {
        Ok(proved) => {
            let hyps: Vec<String> = proved.hypotheses.iter().map(Formula::to_string).collect();
            let mut text = format!("ACCEPTED\nproves: {}\n", proved.formula);
            if !hyps.is_empty() {
                text.push_str(&format!("hypotheses: {}\n", hyps.join(", ")));
            }
            Report::new(
                text,
                json!({"verdict": "accepted", "proves": proved.formula.to_string(), "hypotheses": hyps, "steps": parsed.steps.len()}),
            )
        }
        Err(rej) => Report::new(
            format!("REJECTED\nstep {}: {}\n", rej.step, rej.reason),
            json!({"verdict": "rejected", "step": rej.step, "reason": rej.reason.to_string()}),
        ),
    }
    .negative(negative))
}

pub fn lattice_verify(dims: &[usize], trials: u64, seed: u64) -> Result<Report, CliError> {
    let report = verify_laws(trials, dims, seed).map_err(CliError::input)?;
    let rows: Vec<Vec<String>> = report
        .laws
        .iter()
        .map(|l| {
            vec![
                l.law.clone(),
                l.checked.to_string(),
                l.failed.to_string(),
                if l.failed == 0 { "pass" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    let dims_text: Vec<String> = report.dims.iter().map(usize::to_string).collect();
    let text = format!(
        "lattice laws: {} trials, dims {}, seed {}\n{}{}\n",
        trials,
        dims_text.join(","),
        seed,
        table(&["law", "checked", "failed", "result"], &rows),
        if report.passed() {
            "ALL PASS"
        } else {
            "FAILURES"
        }
    );
    let json = json!({
        "trials": trials,
        "dims": report.dims,
        "seed": seed,
        "laws": report.laws,
        "passed": report.passed(),
    });
    Ok(Report::new(text, json).negative(!report.passed()))
}

fn subspace_text(name: &str, s: &Subspace) -> String {
    let mut out = format!("{name}: rank {}\n", s.rank());
    for v in s.vectors() {
        let cells: Vec<String> = StateVector::new(v.clone())
            .map(|sv| sv.phase_canonical().amplitudes().to_vec())
            .unwrap_or_else(|_| v.clone())
            .iter()
            .map(|c| {
                if c.im == 0.0 {
                    sig(c.re)
                } else {
                    format!("{}{:+}i", sig(c.re), paqs_core::numfmt::round_sig(c.im))
                }
            })
            .collect();
        out.push_str(&format!("  ({})\n", cells.join(", ")));
    }
    out
}

pub fn lattice_witness(dim: usize) -> Result<Report, CliError> {
    let w = distributivity_witness(dim).map_err(|e| {
        CliError::Input(format!("no distributivity witness in dimension {dim}: {e}"))
    })?;
    let mut text = format!("distributivity fails in dimension {dim}\n");
    for (name, s) in [
        ("a", &w.a),
        ("b", &w.b),
        ("c", &w.c),
        ("c ∧ (a ∨ b)", &w.lhs),
        ("(c ∧ a) ∨ (c ∧ b)", &w.rhs),
    ] {
        text.push_str(&subspace_text(name, s));
    }
    text.push_str(&format!(
        "lhs = c: {}\nrhs = 0: {}\n",
        if w.lhs == w.c { "yes" } else { "no" },
        if w.rhs.rank() == 0 { "yes" } else { "no" }
    ));
    let rank = |s: &Subspace| s.rank();
    let j = json!({
        "dim": dim,
        "a": w.a, "b": w.b, "c": w.c, "lhs": w.lhs, "rhs": w.rhs,
        "ranks": {"a": rank(&w.a), "b": rank(&w.b), "c": rank(&w.c), "lhs": rank(&w.lhs), "rhs": rank(&w.rhs)},
    });
    Ok(Report::new(text, j))
}
