//! Exhaustive single-fault injection by Pauli-frame propagation.
//!
//! A noiseless reference run fixes every measurement record. A fault is a
//! Pauli inserted after one location (or a flipped measurement result); its
//! frame is pushed through the remaining Clifford locations, measurement
//! results are the reference values flipped by the frame, and classical
//! feedback that differs from the reference multiplies into the frame.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{Basis, Circuit, Gate1, Gate2, Op, RegisterKind};
use crate::error::{Error, Result};
use crate::exec::{execute, table_correction, vote};
use crate::pauli::{Letter, PauliOperator};
use crate::stabilizer::StabilizerCode;
use crate::tableau::TableauSim;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    /// After operation `index` of `timestep`.
    Op { timestep: usize, index: usize },
    /// On a waiting qubit during `timestep`.
    Idle { timestep: usize, qubit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaultKind {
    /// A Pauli on the full register.
    Pauli(PauliOperator),
    /// The measurement result is flipped.
    Flip,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fault {
    pub site: Site,
    pub kind: FaultKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaultOutcome {
    /// Final frame on the whole register.
    Residual(PauliOperator),
    /// A verification flag stayed raised through every allowed attempt.
    Aborted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub fault: Fault,
    pub residual: PauliOperator,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaultReport {
    pub faults: usize,
    /// Faults that raised a verification flag and forced a restart.
    pub restarted: usize,
    pub aborted: usize,
    pub violations: Vec<Violation>,
}

impl FaultReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn data_qubits(circuit: &Circuit, code: &StabilizerCode) -> Result<Vec<usize>> {
    let reg = circuit
        .registers_of(RegisterKind::Data)
        .next()
        .ok_or_else(|| Error::Circuit("circuit has no data register".into()))?;
    if reg.len != code.n() {
        return Err(Error::Dimension {
            expected: code.n(),
            found: reg.len,
        });
    }
    Ok(reg.qubits())
}

/// Measurement record of a noiseless run on `|0̄⟩`.
pub fn reference_bits(circuit: &Circuit, code: &StabilizerCode, seed: u64) -> Result<Vec<bool>> {
    let data = data_qubits(circuit, code)?;
    let mut sim = TableauSim::new(circuit.num_qubits, ChaCha8Rng::seed_from_u64(seed));
    let n = circuit.num_qubits;
    let mut fixes = Vec::new();
    for (i, g) in code.generators().iter().enumerate() {
        let mut s = crate::stabilizer::Syndrome::zeros(code.num_generators());
        s.0.set(i, true);
        fixes.push((g.scatter(n, &data), code.pure_error(&s)?.scatter(n, &data)));
    }
    for (z, x) in code.logical_z().iter().zip(code.logical_x()) {
        fixes.push((z.scatter(n, &data), x.scatter(n, &data)));
    }
    for (m, fix) in fixes {
        if sim.tableau.measure_pauli(&m, &mut sim.rng)?.bit {
            sim.tableau.apply_pauli(&fix)?;
        }
    }
    let rec = execute(circuit, &mut sim)?;
    if rec.restarts > 0 || rec.aborted {
        return Err(Error::Internal("noiseless reference run raised a flag".into()));
    }
    Ok(rec.bits)
}

fn letter_pauli(n: usize, q: usize, l: Letter) -> PauliOperator {
    PauliOperator::single(n, q, l)
}

fn live_before_each_timestep(circuit: &Circuit) -> Vec<Vec<bool>> {
    let mut live = vec![circuit.registers.is_empty(); circuit.num_qubits];
    for r in circuit.registers_of(RegisterKind::Data) {
        for q in r.qubits() {
            live[q] = true;
        }
    }
    let mut out = Vec::with_capacity(circuit.timesteps.len());
    for ops in &circuit.timesteps {
        for op in ops {
            match op {
                Op::Prep { q, .. } => live[*q] = true,
                Op::Measure { q, .. } => live[*q] = false,
                _ => {}
            }
        }
        // idle noise applies to qubits still live at the end of the step
        out.push(live.clone());
    }
    out
}

/// Every single fault outside the unverified ranges.
pub fn enumerate_faults(circuit: &Circuit) -> Vec<Fault> {
    let n = circuit.num_qubits;
    let live = live_before_each_timestep(circuit);
    let mut out = Vec::new();
    for (t, ops) in circuit.timesteps.iter().enumerate() {
        if circuit.in_unverified(t) {
            continue;
        }
        let mut touched = vec![false; n];
        for (i, op) in ops.iter().enumerate() {
            let site = Site::Op { timestep: t, index: i };
            for q in op.qubits() {
                touched[q] = true;
            }
            match op {
                Op::Measure { .. } => out.push(Fault {
                    site,
                    kind: FaultKind::Flip,
                }),
                Op::Gate2 { a, b, .. } => {
                    for la in Letter::ALL {
                        for lb in Letter::ALL {
                            if la == Letter::I && lb == Letter::I {
                                continue;
                            }
                            let mut p = PauliOperator::identity(n);
                            p.set_letter(*a, la);
                            p.set_letter(*b, lb);
                            out.push(Fault {
                                site,
                                kind: FaultKind::Pauli(p),
                            });
                        }
                    }
                }
                op if op.is_quantum() => {
                    for q in op.qubits() {
                        for l in Letter::NONTRIVIAL {
                            out.push(Fault {
                                site,
                                kind: FaultKind::Pauli(letter_pauli(n, q, l)),
                            });
                        }
                    }
                }
                _ => {}
            }
        }
        for q in 0..n {
            if live[t][q] && !touched[q] {
                for l in Letter::NONTRIVIAL {
                    out.push(Fault {
                        site: Site::Idle { timestep: t, qubit: q },
                        kind: FaultKind::Pauli(letter_pauli(n, q, l)),
                    });
                }
            }
        }
    }
    out
}

fn conjugate_gate1(frame: &mut PauliOperator, g: Gate1, q: usize) -> Result<()> {
    match g {
        Gate1::H => frame.conjugate_h(q),
        Gate1::S => frame.conjugate_s(q),
        Gate1::Sdg => frame.conjugate_sdg(q),
        Gate1::X | Gate1::Y | Gate1::Z => {}
        Gate1::T | Gate1::Tdg => return Err(Error::Unsupported("fault propagation needs Clifford locations".into())),
    }
    Ok(())
}

fn gate_pauli(n: usize, g: Gate1, q: usize) -> Result<PauliOperator> {
    let l = match g {
        Gate1::X => Letter::X,
        Gate1::Y => Letter::Y,
        Gate1::Z => Letter::Z,
        _ => {
            return Err(Error::Unsupported(
                "classically controlled non-Pauli gate in fault propagation".into(),
            ))
        }
    };
    Ok(letter_pauli(n, q, l))
}

/// Propagates one fault to the end of the circuit.
pub fn propagate(circuit: &Circuit, reference: &[bool], fault: &Fault) -> Result<(FaultOutcome, bool)> {
    let n = circuit.num_qubits;
    let mut frame = PauliOperator::identity(n);
    let mut bits = reference.to_vec();
    let (mut t, mut start) = match fault.site {
        Site::Op { timestep, index } => (timestep, index + 1),
        Site::Idle { timestep, .. } => (timestep, circuit.timesteps[timestep].len()),
    };
    match &fault.kind {
        FaultKind::Pauli(p) => frame.mul_assign_right(p),
        FaultKind::Flip => match fault.site {
            Site::Op { timestep, index } => match &circuit.timesteps[timestep][index] {
                Op::Measure { bit, .. } => bits[*bit] ^= true,
                _ => return Err(Error::Internal("flip fault on a non-measurement".into())),
            },
            Site::Idle { .. } => return Err(Error::Internal("flip fault on an idle".into())),
        },
    }
    let mut restarted = false;
    let mut attempts = std::collections::HashMap::new();
    while t < circuit.timesteps.len() {
        let mut jump = None;
        for (i, op) in circuit.timesteps[t].iter().enumerate().skip(start) {
            match op {
                Op::Prep { q, .. } => frame.set_letter(*q, Letter::I),
                Op::Gate1 { gate, q } => conjugate_gate1(&mut frame, *gate, *q)?,
                Op::Gate2 { gate, a, b } => match gate {
                    Gate2::Cx => frame.conjugate_cnot(*a, *b),
                    Gate2::Cy => frame.conjugate_cy(*a, *b),
                    Gate2::Cz => frame.conjugate_cz(*a, *b),
                },
                Op::Measure { q, basis, bit } => {
                    let flipped = match basis {
                        Basis::Z => frame.x_bits().get(*q),
                        Basis::X => frame.z_bits().get(*q),
                    };
                    bits[*bit] = reference[*bit] ^ flipped;
                }
                Op::Parity { out, inputs } => {
                    bits[*out] = inputs.iter().fold(false, |acc, &b| acc ^ bits[b]);
                }
                Op::Vote { outs, rounds, whole } => {
                    let vals: Vec<Vec<bool>> = rounds.iter().map(|r| r.iter().map(|&b| bits[b]).collect()).collect();
                    for (o, v) in outs.iter().zip(vote(&vals, *whole)) {
                        bits[*o] = v;
                    }
                }
                Op::If { bit, gate, q } => {
                    if bits[*bit] != reference[*bit] {
                        frame.mul_assign_right(&gate_pauli(n, *gate, *q)?);
                    }
                }
                Op::Decode {
                    table,
                    syndrome,
                    qubits,
                } => {
                    let faulty: Vec<bool> = syndrome.iter().map(|&b| bits[b]).collect();
                    let ideal: Vec<bool> = syndrome.iter().map(|&b| reference[b]).collect();
                    if faulty != ideal {
                        frame.mul_assign_right(&table_correction(circuit, *table, &faulty, qubits, n)?);
                        frame.mul_assign_right(&table_correction(circuit, *table, &ideal, qubits, n)?);
                    }
                }
                Op::Retry {
                    flags,
                    restart,
                    max_attempts,
                } => {
                    if flags.iter().any(|&b| bits[b]) {
                        let used = attempts.entry((t, i)).or_insert(1usize);
                        if *used >= *max_attempts {
                            return Ok((FaultOutcome::Aborted, restarted));
                        }
                        *used += 1;
                        restarted = true;
                        jump = Some(*restart);
                        break;
                    }
                }
            }
        }
        match jump {
            Some(r) => t = r,
            None => t += 1,
        }
        start = 0;
    }
    Ok((FaultOutcome::Residual(frame), restarted))
}

/// True iff some element of `r·S` has weight at most 1.
pub fn within_one_error(code: &StabilizerCode, r: &PauliOperator) -> Result<bool> {
    if code.in_stabilizer(r)? {
        return Ok(true);
    }
    for q in 0..code.n() {
        for l in Letter::NONTRIVIAL {
            let e = r.multiply(&PauliOperator::single(code.n(), q, l))?;
            if code.in_stabilizer(&e)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Injects every single fault and checks that the data block ends with at
/// most one error modulo the stabilizer.
pub fn check_single_faults(circuit: &Circuit, code: &StabilizerCode) -> Result<FaultReport> {
    let data = data_qubits(circuit, code)?;
    let reference = reference_bits(circuit, code, 0)?;
    let faults = enumerate_faults(circuit);
    let results: Vec<Result<(Fault, FaultOutcome, bool)>> = faults
        .into_par_iter()
        .map(|f| {
            let (outcome, restarted) = propagate(circuit, &reference, &f)?;
            Ok((f, outcome, restarted))
        })
        .collect();
    let mut report = FaultReport::default();
    for r in results {
        let (fault, outcome, restarted) = r?;
        report.faults += 1;
        report.restarted += restarted as usize;
        match outcome {
            FaultOutcome::Aborted => report.aborted += 1,
            FaultOutcome::Residual(frame) => {
                let residual = frame.gather(&data);
                if !within_one_error(code, &residual)? {
                    report.violations.push(Violation { fault, residual });
                }
            }
        }
    }
    Ok(report)
}
