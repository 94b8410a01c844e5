//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qecft::bounds::{singleton_check, singleton_slack};
use qecft::circuit::{Gate1, Gate2};
use qecft::codes::{css_code, five_qubit_code, hamming_code, steane_code};
use qecft::decoder::DecoderTable;
use qecft::dense::{check_kl, codespace_basis, run_circuit_dense, DenseState, Outcomes};
use qecft::faults::check_single_faults;
use qecft::gadgets::{check_transversal_clifford, pi8_injection_circuit, shor_ec_round, LogicalGate, TransversalGate};
use qecft::montecarlo::{concatenated_rate, estimate_logical_rate, levels_needed, MonteCarloReport, Protocol, Sweep};
use qecft::noise::exact_code_capacity_rate;
use qecft::pauli::for_each_of_weight;
use qecft::tableau::Tableau;
use qecft::{Distance, Letter, PauliOperator, StabilizerCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STATE_TOL: f64 = 1e-10;
const KL_TOL: f64 = 1e-10;
const PROB_TOL: f64 = 1e-10;
const RECURSION_REL_TOL: f64 = 1e-12;
const EXPONENT_RANGE: (f64, f64) = (1.7, 2.3);
const SWEEP_PS: [f64; 4] = [2e-3, 5e-3, 1e-2, 2e-2];
const SWEEP_SHOTS: u64 = 100_000;
const SWEEP_SEED: u64 = 7;
const RANDOM_CIRCUITS: usize = 200;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T: std::fmt::Debug>(x: T) -> String {
    format!("{x:?}")
}

fn single_errors(n: usize) -> Vec<PauliOperator> {
    let mut v = vec![PauliOperator::identity(n)];
    for_each_of_weight(n, 1, |p| {
        v.push(p.clone());
        true
    });
    v
}

fn five_qubit_certification() -> Outcome {
    let code = five_qubit_code();
    let code = StabilizerCode::validate(code.generators().to_vec()).map_err(e)?;
    ensure(code.n() == 5 && code.k() == 1, "not [[5,1]]")?;
    let d = code.distance(5).map_err(e)?;
    ensure(d == Distance::Exact(3), format!("distance {d}"))?;
    let syndromes: BTreeSet<String> = single_errors(5)
        .iter()
        .map(|p| code.syndrome(p).map(|s| s.0.to_bit_string()))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    ensure(syndromes.len() == 16, format!("{} distinct syndromes", syndromes.len()))?;
    ensure(singleton_check(5, 2, 3).map_err(e)?, "singleton bound fails")?;
    ensure(singleton_slack(5, 2, 3).map_err(e)? == 0.0, "singleton not tight")?;
    Ok("[[5,1,3]], 16/16 distinct syndromes, singleton 4 = 4".into())
}

fn kl_oracle() -> Outcome {
    let code = five_qubit_code();
    let errors = single_errors(5);
    let r = check_kl(&code, &errors).map_err(e)?;
    ensure(
        r.satisfied && r.max_offdiag_violation < KL_TOL && r.max_identity_violation < KL_TOL,
        format!(
            "weight <= 1 set: {:e} / {:e}",
            r.max_offdiag_violation, r.max_identity_violation
        ),
    )?;
    let logical = code.min_weight_logical(5).ok_or("no logical operator found")?;
    let mut with_logical = errors.clone();
    with_logical.push(logical.clone());
    let bad = check_kl(&code, &with_logical).map_err(e)?;
    ensure(!bad.satisfied, "logical operator accepted")?;
    Ok(format!(
        "16 errors satisfied (max violation {:.1e}), violated with {logical}",
        r.max_offdiag_violation.max(r.max_identity_violation)
    ))
}

fn steane_pipeline() -> Outcome {
    let h = hamming_code();
    let code = css_code(&h, &h).map_err(e)?;
    ensure(code.n() == 7 && code.k() == 1, "not [[7,1]]")?;
    ensure(code.distance(7).map_err(e)? == Distance::Exact(3), "distance is not 3")?;
    let zero = codespace_basis(&code).map_err(e)?.remove(0);
    let even: Vec<u64> = h
        .codewords()
        .map_err(e)?
        .into_iter()
        .filter(|w| w.count_ones() % 2 == 0)
        .map(|w| w.to_u64())
        .collect();
    ensure(even.len() == 8, "expected 8 even codewords")?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 128];
    for &w in &even {
        amps[w as usize] = Complex64::new(1.0 / 8f64.sqrt(), 0.0);
    }
    let want = DenseState::from_amplitudes(amps).map_err(e)?;
    let overlap = want.inner(&zero).norm();
    ensure((overlap - 1.0).abs() < STATE_TOL, format!("overlap {overlap}"))?;
    Ok("[[7,1,3]], |0> = uniform over 8 even Hamming codewords".into())
}

fn transversality() -> Outcome {
    let code = steane_code();
    for (gate, want) in [
        (TransversalGate::Cnot, LogicalGate::Cnot),
        (TransversalGate::H, LogicalGate::Hadamard),
        (TransversalGate::S, LogicalGate::SInverse),
    ] {
        let a = check_transversal_clifford(&code, &gate).map_err(e)?;
        ensure(a.recognized.as_ref() == Some(&want), format!("{gate:?} gave {a}"))?;
    }
    let basis = codespace_basis(&code).map_err(e)?;
    for x in 0..2 {
        for y in 0..2 {
            let mut s = basis[x].tensor(&basis[y]).map_err(e)?;
            for q in 0..7 {
                s.apply_cnot(q, 7 + q).map_err(e)?;
            }
            let want = basis[x].tensor(&basis[x ^ y]).map_err(e)?;
            ensure(s.equal_up_to_phase(&want), format!("|{x}{y}> maps wrong"))?;
        }
    }
    Ok("CNOT, H, S^-1 recognized; 14-qubit dense CNOT matches on 4 basis states".into())
}

fn random_pauli(n: usize, rng: &mut ChaCha8Rng) -> PauliOperator {
    loop {
        let letters: Vec<Letter> = (0..n).map(|_| Letter::ALL[rng.gen_range(0..4)]).collect();
        let p = PauliOperator::from_letters(&letters);
        if p.weight() > 0 {
            return if rng.gen() { p.with_phase(2) } else { p };
        }
    }
}

fn tableau_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut deterministic, mut random) = (0usize, 0usize);
    for c in 0..RANDOM_CIRCUITS {
        let n = rng.gen_range(1..=6);
        let mut t = Tableau::new(n);
        let mut d = DenseState::zero(n).map_err(e)?;
        for _ in 0..rng.gen_range(5..40) {
            match rng.gen_range(0..10) {
                0..=4 => {
                    let g = [Gate1::H, Gate1::S, Gate1::Sdg, Gate1::X, Gate1::Y, Gate1::Z][rng.gen_range(0..6)];
                    let q = rng.gen_range(0..n);
                    t.apply_gate(g, q).map_err(e)?;
                    d.apply_gate(g, q).map_err(e)?;
                }
                5..=7 if n > 1 => {
                    let g = [Gate2::Cx, Gate2::Cy, Gate2::Cz][rng.gen_range(0..3)];
                    let a = rng.gen_range(0..n);
                    let b = (a + rng.gen_range(1..n)) % n;
                    t.apply_gate2(g, a, b).map_err(e)?;
                    d.apply_gate2(g, a, b).map_err(e)?;
                }
                _ => {
                    let p = random_pauli(n, &mut rng);
                    let p0 = d.outcome_probability(&p, false).map_err(e)?;
                    let bit = match t.peek(&p).map_err(e)? {
                        Some(bit) => {
                            deterministic += 1;
                            let want = if bit { 0.0 } else { 1.0 };
                            ensure(
                                (p0 - want).abs() < PROB_TOL,
                                format!("circuit {c}: {p} deterministic {bit}, dense P(+1) = {p0}"),
                            )?;
                            bit
                        }
                        None => {
                            random += 1;
                            ensure(
                                (p0 - 0.5).abs() < PROB_TOL,
                                format!("circuit {c}: {p} random, dense P(+1) = {p0}"),
                            )?;
                            rng.gen()
                        }
                    };
                    t.measure_pauli_forced(&p, bit).map_err(e)?;
                    d.measure_pauli_forced(&p, bit).map_err(e)?;
                }
            }
        }
        for s in t.stabilizers() {
            let ev = d.expectation(s).map_err(e)?;
            ensure((ev - 1.0).abs() < PROB_TOL, format!("circuit {c}: final <{s}> = {ev}"))?;
        }
    }
    Ok(format!(
        "{RANDOM_CIRCUITS} circuits, {deterministic} deterministic + {random} random measurements agree"
    ))
}

fn random_logical_state(code: &StabilizerCode, rng: &mut ChaCha8Rng) -> Result<DenseState, String> {
    let basis = codespace_basis(code).map_err(e)?;
    let a = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
    let b = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
    let amps = basis[0]
        .amplitudes()
        .iter()
        .zip(basis[1].amplitudes())
        .map(|(x, y)| a * x + b * y)
        .collect();
    DenseState::from_amplitudes(amps).map_err(e)
}

fn gadget_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = 0;
    for code in [five_qubit_code(), steane_code()] {
        let circuit = shor_ec_round(&code, 3).map_err(e)?;
        let psi = random_logical_state(&code, &mut rng)?;
        for err in single_errors(code.n()) {
            let mut s = psi.clone();
            s.apply_pauli(&err).map_err(e)?;
            let init = s
                .tensor(&DenseState::zero(circuit.num_qubits - code.n()).map_err(e)?)
                .map_err(e)?;
            let (out, _) = run_circuit_dense(&circuit, init, Outcomes::Sampled(&mut rng)).map_err(e)?;
            let f = out.subsystem_fidelity(&psi).map_err(e)?;
            ensure(
                (f - 1.0).abs() < STATE_TOL,
                format!("[[{},1]] error {err}: fidelity {f}", code.n()),
            )?;
            cases += 1;
        }
    }
    let inj = pi8_injection_circuit().map_err(e)?;
    let t = qecft::dense::gate_matrix(Gate1::T);
    for _ in 0..5 {
        let psi = DenseState::from_amplitudes(
            (0..2)
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect(),
        )
        .map_err(e)?;
        let mut want = psi.clone();
        want.apply_unitary_1q(0, &t).map_err(e)?;
        for c in [false, true] {
            let init = psi.tensor(&DenseState::zero(1).map_err(e)?).map_err(e)?;
            let (out, _) = run_circuit_dense(&inj, init, Outcomes::Forced([c].into())).map_err(e)?;
            let expected = DenseState::basis(1, c as usize).map_err(e)?.tensor(&want).map_err(e)?;
            let f = out.inner(&expected).norm();
            ensure(
                (f - 1.0).abs() < STATE_TOL,
                format!("injection branch {c}: overlap {f}"),
            )?;
        }
    }
    Ok(format!(
        "{cases} corrupted codewords restored; injection exact on 5 states x 2 branches"
    ))
}

fn fault_exhaustion() -> Outcome {
    let code = steane_code();
    let circuit = shor_ec_round(&code, 3).map_err(e)?;
    let r = check_single_faults(&circuit, &code).map_err(e)?;
    ensure(
        r.passed(),
        format!("{} violations, first {:?}", r.violations.len(), r.violations.first()),
    )?;
    Ok(format!(
        "{} single faults, {} restarted, {} aborted, 0 violations",
        r.faults, r.restarted, r.aborted
    ))
}

fn sweep(workers: usize) -> Result<MonteCarloReport, String> {
    estimate_logical_rate(
        &steane_code(),
        &Sweep {
            protocol: Protocol::CodeCapacity,
            ps: SWEEP_PS.to_vec(),
            shots: SWEEP_SHOTS,
            seed: SWEEP_SEED,
            workers,
        },
    )
    .map_err(e)
}

fn quadratic_scaling(report: &MonteCarloReport) -> Outcome {
    let code = steane_code();
    let table = DecoderTable::build(&code, 1).complete();
    let mut detail = Vec::new();
    for pt in &report.points {
        let exact = exact_code_capacity_rate(&code, &table, pt.p).map_err(e)?;
        ensure(
            pt.ci_low <= exact && exact <= pt.ci_high,
            format!(
                "p={}: exact {exact:.4e} outside [{:.4e}, {:.4e}]",
                pt.p, pt.ci_low, pt.ci_high
            ),
        )?;
        detail.push(format!("{:.2e}", pt.p_l));
    }
    let exp = report.fit_exponent.ok_or("no fit")?;
    ensure(
        (EXPONENT_RANGE.0..=EXPONENT_RANGE.1).contains(&exp),
        format!("exponent {exp:.3}"),
    )?;
    Ok(format!(
        "exponent {exp:.3}, C = {:.1}, p_L = [{}], all intervals contain the exact rate",
        report.fit_c.unwrap_or(f64::NAN),
        detail.join(", ")
    ))
}

fn concatenation_formulas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let p_t = 10f64.powf(rng.gen_range(-5.0..-0.5));
        let p = p_t * 10f64.powf(rng.gen_range(-3.0..1.0));
        let l = rng.gen_range(0..8);
        let prev = concatenated_rate(p, p_t, l).map_err(e)?;
        let next = concatenated_rate(p, p_t, l + 1).map_err(e)?;
        let rec = p_t * (prev / p_t) * (prev / p_t);
        ensure(
            (next - rec).abs() <= RECURSION_REL_TOL * next,
            format!("recursion off at p={p}, p_t={p_t}, L={l}"),
        )?;
        if p < p_t {
            let eps = 10f64.powf(rng.gen_range(-15.0..-1.0));
            let need = levels_needed(p, p_t, eps).map_err(e)?;
            ensure(concatenated_rate(p, p_t, need).map_err(e)? <= eps, "levels too few")?;
            ensure(
                need == 0 || concatenated_rate(p, p_t, need - 1).map_err(e)? > eps,
                "levels not minimal",
            )?;
        } else {
            ensure(levels_needed(p, p_t, 1e-9).is_err() || p <= 1e-9, "no divergence error")?;
        }
    }
    Ok("1000 tuples: recursion identity and minimal level counts".into())
}

fn determinism(base: &MonteCarloReport) -> Outcome {
    let csv = base.to_csv();
    for w in [1, 3] {
        ensure(sweep(w)?.to_csv() == csv, format!("CSV differs with {w} workers"))?;
    }
    Ok("identical CSV for 1, 3 and default workers".into())
}

fn main() {
    let mut failed = 0;
    let mut report = |id: usize, limit: Duration, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let mut result = f();
        let took = start.elapsed();
        if result.is_ok() && took > limit {
            result = Err(format!("took {took:?}, limit {limit:?}"));
        }
        match result {
            Ok(msg) => println!("PASS criterion {id:>2} ({took:.2?}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {id:>2} ({took:.2?}): {msg}");
            }
        }
    };
    let secs = Duration::from_secs;
    report(1, secs(1), &mut five_qubit_certification);
    report(2, secs(5), &mut kl_oracle);
    report(3, secs(5), &mut steane_pipeline);
    report(4, secs(60), &mut transversality);
    report(5, secs(60), &mut tableau_oracle);
    report(6, secs(60), &mut gadget_correctness);
    report(7, secs(600), &mut fault_exhaustion);
    let mut base = None;
    report(8, secs(600), &mut || {
        let r = sweep(0)?;
        let out = quadratic_scaling(&r);
        base = Some(r);
        out
    });
    report(9, secs(1), &mut concatenation_formulas);
    report(10, secs(600), &mut || match &base {
        Some(r) => determinism(r),
        None => Err("criterion 8 sweep did not run".into()),
    });
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
