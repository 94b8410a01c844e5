//! Circuit execution over an abstract simulator backend.
//!
//! The executor owns the classical side (wires, parities, votes, table
//! decoding, retries); a [`Backend`] owns the quantum state.

use std::collections::BTreeSet;

use crate::bits::BitVec;
use crate::circuit::{Basis, Circuit, Gate1, Gate2, Op, RegisterKind};
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

/// Measurement outcomes are reported as bits: `false` for eigenvalue `+1`,
/// `true` for `-1`.
pub trait Backend {
    fn num_qubits(&self) -> usize;
    fn prep(&mut self, q: usize, basis: Basis) -> Result<()>;
    fn gate1(&mut self, gate: Gate1, q: usize) -> Result<()>;
    fn gate2(&mut self, gate: Gate2, a: usize, b: usize) -> Result<()>;
    fn measure(&mut self, q: usize, basis: Basis) -> Result<bool>;
    /// Applies a Pauli on the full register.
    fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()>;

    /// A classically controlled gate; `applied` is the control value.
    fn conditional(&mut self, gate: Gate1, q: usize, applied: bool) -> Result<()> {
        if applied {
            self.gate1(gate, q)?;
        }
        Ok(())
    }

    /// A table correction touching `qubits`.
    fn correct(&mut self, p: &PauliOperator, _qubits: &[usize]) -> Result<()> {
        self.apply_pauli(p)
    }

    /// Called once per timestep for every live qubit no operation touched.
    fn idle(&mut self, _q: usize) -> Result<()> {
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunRecord {
    /// Final value of every classical wire.
    pub bits: Vec<bool>,
    /// Measurement results in execution order.
    pub measurements: Vec<bool>,
    /// Number of times a retry jumped back.
    pub restarts: usize,
    /// A retry ran out of attempts; execution stopped there.
    pub aborted: bool,
}

/// Strict-majority vote over whole vectors; `None` when no vector wins.
pub fn whole_vote(rounds: &[Vec<bool>]) -> Option<Vec<bool>> {
    rounds
        .iter()
        .find(|r| rounds.iter().filter(|s| s == r).count() * 2 > rounds.len())
        .cloned()
}

pub fn bitwise_majority(rounds: &[Vec<bool>]) -> Vec<bool> {
    let len = rounds.first().map_or(0, |r| r.len());
    (0..len)
        .map(|i| rounds.iter().filter(|r| r[i]).count() * 2 > rounds.len())
        .collect()
}

pub(crate) fn vote(rounds: &[Vec<bool>], whole: bool) -> Vec<bool> {
    if whole {
        let len = rounds.first().map_or(0, |r| r.len());
        whole_vote(rounds).unwrap_or_else(|| vec![false; len])
    } else {
        bitwise_majority(rounds)
    }
}

/// Looks up the correction of a `Decode` op and spreads it to `n` qubits.
pub(crate) fn table_correction(
    circuit: &Circuit,
    table: usize,
    syndrome: &[bool],
    qubits: &[usize],
    n: usize,
) -> Result<PauliOperator> {
    let key = BitVec::from_bools(syndrome);
    let local = circuit
        .tables
        .get(table)
        .and_then(|t| t.correction(&key))
        .ok_or_else(|| Error::Circuit(format!("table {table} has no entry for {key}")))?;
    if local.n() != qubits.len() {
        return Err(Error::Circuit(format!(
            "table {table} corrections act on {} qubits, op lists {}",
            local.n(),
            qubits.len()
        )));
    }
    Ok(local.scatter(n, qubits))
}

fn initially_live(circuit: &Circuit) -> Vec<bool> {
    let mut live = vec![circuit.registers.is_empty(); circuit.num_qubits];
    for r in circuit.registers_of(RegisterKind::Data) {
        for q in r.qubits() {
            live[q] = true;
        }
    }
    live
}

/// Runs `circuit` on `backend`.
pub fn execute<B: Backend + ?Sized>(circuit: &Circuit, backend: &mut B) -> Result<RunRecord> {
    let n = backend.num_qubits();
    if circuit.num_qubits > n {
        return Err(Error::Capacity {
            qubits: circuit.num_qubits,
            limit: n,
        });
    }
    let mut rec = RunRecord {
        bits: vec![false; circuit.num_bits],
        ..Default::default()
    };
    let mut live = initially_live(circuit);
    let mut attempts = std::collections::HashMap::new();
    let mut t = 0;
    while t < circuit.timesteps.len() {
        let ops = &circuit.timesteps[t];
        let mut touched = BTreeSet::new();
        let mut jump = None;
        for (i, op) in ops.iter().enumerate() {
            touched.extend(op.qubits());
            match op {
                Op::Prep { q, basis } => {
                    backend.prep(*q, *basis)?;
                    live[*q] = true;
                }
                Op::Gate1 { gate, q } => backend.gate1(*gate, *q)?,
                Op::Gate2 { gate, a, b } => backend.gate2(*gate, *a, *b)?,
                Op::Measure { q, basis, bit } => {
                    let m = backend.measure(*q, *basis)?;
                    rec.bits[*bit] = m;
                    rec.measurements.push(m);
                    live[*q] = false;
                }
                Op::Parity { out, inputs } => {
                    rec.bits[*out] = inputs.iter().fold(false, |acc, &b| acc ^ rec.bits[b]);
                }
                Op::Vote { outs, rounds, whole } => {
                    let vals: Vec<Vec<bool>> = rounds
                        .iter()
                        .map(|r| r.iter().map(|&b| rec.bits[b]).collect())
                        .collect();
                    for (o, v) in outs.iter().zip(vote(&vals, *whole)) {
                        rec.bits[*o] = v;
                    }
                }
                Op::If { bit, gate, q } => backend.conditional(*gate, *q, rec.bits[*bit])?,
                Op::Decode {
                    table,
                    syndrome,
                    qubits,
                } => {
                    let s: Vec<bool> = syndrome.iter().map(|&b| rec.bits[b]).collect();
                    let p = table_correction(circuit, *table, &s, qubits, n)?;
                    backend.correct(&p, qubits)?;
                }
                Op::Retry {
                    flags,
                    restart,
                    max_attempts,
                } => {
                    if flags.iter().any(|&b| rec.bits[b]) {
                        let used = attempts.entry((t, i)).or_insert(1usize);
                        if *used >= *max_attempts {
                            rec.aborted = true;
                            return Ok(rec);
                        }
                        *used += 1;
                        jump = Some(*restart);
                    }
                }
            }
        }
        for (q, &alive) in live.iter().enumerate() {
            if alive && !touched.contains(&q) {
                backend.idle(q)?;
            }
        }
        match jump {
            Some(r) => {
                rec.restarts += 1;
                t = r;
            }
            None => t += 1,
        }
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[u8]) -> Vec<bool> {
        v.iter().map(|&x| x == 1).collect()
    }

    #[test]
    fn whole_vote_needs_strict_majority() {
        assert_eq!(whole_vote(&[b(&[1, 0]), b(&[0, 1]), b(&[1, 0])]), Some(b(&[1, 0])));
        assert_eq!(whole_vote(&[b(&[1, 0]), b(&[0, 1]), b(&[1, 1])]), None);
        assert_eq!(vote(&[b(&[1, 0]), b(&[0, 1]), b(&[1, 1])], true), b(&[0, 0]));
        assert_eq!(vote(&[b(&[1, 0]), b(&[0, 1]), b(&[1, 1])], false), b(&[1, 1]));
    }
}
