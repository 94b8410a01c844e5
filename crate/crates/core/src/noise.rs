//! Depolarizing noise and single-shot sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Basis, Circuit, Gate1, Gate2, RegisterKind};
use crate::decoder::DecoderTable;
use crate::error::{Error, Result};
use crate::exec::{execute, Backend};
use crate::pauli::{Letter, PauliOperator};
use crate::stabilizer::{StabilizerCode, Syndrome};
use crate::tableau::{Tableau, TableauSim};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p_gate1: f64,
    pub p_gate2: f64,
    pub p_prep: f64,
    pub p_meas: f64,
    pub p_idle: f64,
}

impl NoiseModel {
    pub fn new(p_gate1: f64, p_gate2: f64, p_prep: f64, p_meas: f64, p_idle: f64) -> Result<Self> {
        let m = NoiseModel {
            p_gate1,
            p_gate2,
            p_prep,
            p_meas,
            p_idle,
        };
        for p in [p_gate1, p_gate2, p_prep, p_meas, p_idle] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(m)
    }

    /// Every location fails with probability `p`.
    pub fn uniform(p: f64) -> Result<Self> {
        Self::new(p, p, p, p, p)
    }

    pub fn noiseless() -> Self {
        NoiseModel {
            p_gate1: 0.0,
            p_gate2: 0.0,
            p_prep: 0.0,
            p_meas: 0.0,
            p_idle: 0.0,
        }
    }
}

fn random_letter<R: Rng + ?Sized>(rng: &mut R) -> Letter {
    Letter::NONTRIVIAL[rng.gen_range(0..3)]
}

/// Wraps a backend and injects depolarizing faults after each location.
pub struct Noisy<B, R> {
    pub inner: B,
    pub noise: NoiseModel,
    pub rng: R,
}

impl<B: Backend, R: Rng> Noisy<B, R> {
    pub fn new(inner: B, noise: NoiseModel, rng: R) -> Self {
        Noisy { inner, noise, rng }
    }

    fn hit(&mut self, p: f64) -> bool {
        p > 0.0 && self.rng.gen::<f64>() < p
    }

    fn depolarize1(&mut self, q: usize, p: f64) -> Result<()> {
        if self.hit(p) {
            let l = random_letter(&mut self.rng);
            let e = PauliOperator::single(self.inner.num_qubits(), q, l);
            self.inner.apply_pauli(&e)?;
        }
        Ok(())
    }
}

impl<B: Backend, R: Rng> Backend for Noisy<B, R> {
    fn num_qubits(&self) -> usize {
        self.inner.num_qubits()
    }

    fn prep(&mut self, q: usize, basis: Basis) -> Result<()> {
        self.inner.prep(q, basis)?;
        if self.hit(self.noise.p_prep) {
            let l = match basis {
                Basis::Z => Letter::X,
                Basis::X => Letter::Z,
            };
            let e = PauliOperator::single(self.inner.num_qubits(), q, l);
            self.inner.apply_pauli(&e)?;
        }
        Ok(())
    }

    fn gate1(&mut self, gate: Gate1, q: usize) -> Result<()> {
        self.inner.gate1(gate, q)?;
        self.depolarize1(q, self.noise.p_gate1)
    }

    fn gate2(&mut self, gate: Gate2, a: usize, b: usize) -> Result<()> {
        self.inner.gate2(gate, a, b)?;
        if self.hit(self.noise.p_gate2) {
            let k = self.rng.gen_range(1..16);
            let mut e = PauliOperator::identity(self.inner.num_qubits());
            e.set_letter(a, Letter::ALL[k / 4]);
            e.set_letter(b, Letter::ALL[k % 4]);
            self.inner.apply_pauli(&e)?;
        }
        Ok(())
    }

    fn measure(&mut self, q: usize, basis: Basis) -> Result<bool> {
        let bit = self.inner.measure(q, basis)?;
        Ok(bit ^ self.hit(self.noise.p_meas))
    }

    fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        self.inner.apply_pauli(p)
    }

    fn conditional(&mut self, gate: Gate1, q: usize, applied: bool) -> Result<()> {
        self.inner.conditional(gate, q, applied)?;
        self.depolarize1(q, self.noise.p_gate1)
    }

    fn correct(&mut self, p: &PauliOperator, qubits: &[usize]) -> Result<()> {
        self.inner.correct(p, qubits)?;
        for &q in qubits {
            self.depolarize1(q, self.noise.p_gate1)?;
        }
        Ok(())
    }

    fn idle(&mut self, q: usize) -> Result<()> {
        self.inner.idle(q)?;
        self.depolarize1(q, self.noise.p_idle)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShotOutcome {
    Success,
    LogicalFailure,
    Abort,
}

/// One code-capacity shot: depolarize each data qubit with probability `p`,
/// decode perfectly, and report whether a logical operator remains.
pub fn sample_code_capacity<R: Rng + ?Sized>(
    code: &StabilizerCode,
    table: &DecoderTable,
    p: f64,
    rng: &mut R,
) -> Result<ShotOutcome> {
    let n = code.n();
    let mut e = PauliOperator::identity(n);
    for q in 0..n {
        if p > 0.0 && rng.gen::<f64>() < p {
            e.set_letter(q, random_letter(rng));
        }
    }
    decode_outcome(code, table, &e)
}

fn decode_outcome(code: &StabilizerCode, table: &DecoderTable, e: &PauliOperator) -> Result<ShotOutcome> {
    if e.is_identity_up_to_phase() {
        return Ok(ShotOutcome::Success);
    }
    let s = code.syndrome(e)?;
    let residual = e.multiply(&table.decode(&s).correction)?;
    Ok(if code.in_stabilizer(&residual)? {
        ShotOutcome::Success
    } else {
        ShotOutcome::LogicalFailure
    })
}

/// Exact code-capacity failure probability by enumerating all `4^n` errors.
pub fn exact_code_capacity_rate(code: &StabilizerCode, table: &DecoderTable, p: f64) -> Result<f64> {
    let n = code.n();
    if n > 10 {
        return Err(Error::Capacity { qubits: n, limit: 10 });
    }
    // failing error counts by weight, then the binomial-style sum
    let mut by_weight = vec![0u64; n + 1];
    for e in crate::pauli::all_paulis(n) {
        if decode_outcome(code, table, &e)? == ShotOutcome::LogicalFailure {
            by_weight[e.weight()] += 1;
        }
    }
    Ok(by_weight
        .iter()
        .enumerate()
        .map(|(w, &c)| c as f64 * (p / 3.0).powi(w as i32) * (1.0 - p).powi((n - w) as i32))
        .sum())
}

fn data_register(circuit: &Circuit, code: &StabilizerCode) -> Result<Vec<usize>> {
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

/// Measures each operator and applies its fix when the outcome is `-1`.
fn project<R: Rng + ?Sized>(t: &mut Tableau, steps: &[(PauliOperator, PauliOperator)], rng: &mut R) -> Result<()> {
    for (m, fix) in steps {
        if t.measure_pauli(m, rng)?.bit {
            t.apply_pauli(fix)?;
        }
    }
    Ok(())
}

fn generator_steps(code: &StabilizerCode, data: &[usize], total: usize) -> Result<Vec<(PauliOperator, PauliOperator)>> {
    code.generators()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut s = Syndrome::zeros(code.num_generators());
            s.0.set(i, true);
            Ok((g.scatter(total, data), code.pure_error(&s)?.scatter(total, data)))
        })
        .collect()
}

/// Logical checks `X̄⊗X_R` and `Z̄⊗Z_R` against the reference qubit.
fn bell_checks(code: &StabilizerCode, data: &[usize], total: usize) -> Result<[PauliOperator; 2]> {
    if code.k() != 1 {
        return Err(Error::Unsupported("circuit sampling needs k = 1".into()));
    }
    let r = total - 1;
    let xx = code.logical_x()[0]
        .scatter(total, data)
        .multiply(&PauliOperator::single(total, r, Letter::X))?;
    let zz = code.logical_z()[0]
        .scatter(total, data)
        .multiply(&PauliOperator::single(total, r, Letter::Z))?;
    Ok([xx, zz])
}

/// One circuit-level shot. The data block starts maximally entangled with
/// an extra reference qubit; after the noisy circuit an ideal round of
/// decoding runs and the shot fails iff either Bell check reads `-1`.
pub fn sample_run<R: Rng + ?Sized>(
    circuit: &Circuit,
    code: &StabilizerCode,
    table: &DecoderTable,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<ShotOutcome> {
    if !circuit.is_clifford() {
        return Err(Error::Unsupported("noisy sampling needs a Clifford circuit".into()));
    }
    let data = data_register(circuit, code)?;
    let total = circuit.num_qubits + 1;
    let r = total - 1;
    let mut t = Tableau::new(total);
    project(&mut t, &generator_steps(code, &data, total)?, rng)?;
    let [xx, zz] = bell_checks(code, &data, total)?;
    let steps = [
        (xx.clone(), PauliOperator::single(total, r, Letter::Z)),
        (zz.clone(), PauliOperator::single(total, r, Letter::X)),
    ];
    project(&mut t, &steps, rng)?;

    let sim = TableauSim {
        tableau: t,
        rng: ChaCha8Rng::seed_from_u64(rng.gen()),
    };
    let mut noisy = Noisy::new(sim, *noise, ChaCha8Rng::seed_from_u64(rng.gen()));
    let rec = execute(circuit, &mut noisy)?;
    if rec.aborted {
        return Ok(ShotOutcome::Abort);
    }
    let mut t = noisy.inner.tableau;
    let mut bits = Vec::with_capacity(code.num_generators());
    for g in code.generators() {
        bits.push(t.measure_pauli(&g.scatter(total, &data), rng)?.bit);
    }
    let s = Syndrome(crate::bits::BitVec::from_bools(&bits));
    t.apply_pauli(&table.decode(&s).correction.scatter(total, &data))?;
    let bad_x = t.measure_pauli(&xx, rng)?.bit;
    let bad_z = t.measure_pauli(&zz, rng)?.bit;
    Ok(if bad_x || bad_z {
        ShotOutcome::LogicalFailure
    } else {
        ShotOutcome::Success
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{five_qubit_code, steane_code};
    use crate::gadgets::{shor_ec_round, steane_ec_circuit};

    #[test]
    fn rejects_bad_probability() {
        assert!(NoiseModel::new(0.1, 1.5, 0.0, 0.0, 0.0).is_err());
        assert!(NoiseModel::uniform(-0.1).is_err());
    }

    #[test]
    fn noiseless_code_capacity_never_fails() {
        let code = steane_code();
        let table = DecoderTable::build(&code, 1).complete();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            assert_eq!(
                sample_code_capacity(&code, &table, 0.0, &mut rng).unwrap(),
                ShotOutcome::Success
            );
        }
        assert_eq!(exact_code_capacity_rate(&code, &table, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn exact_rate_small_p_is_quadratic() {
        let code = steane_code();
        let table = DecoderTable::build(&code, 1).complete();
        let a = exact_code_capacity_rate(&code, &table, 1e-4).unwrap();
        let b = exact_code_capacity_rate(&code, &table, 2e-4).unwrap();
        assert!((b / a - 4.0).abs() < 0.01);
        // p = 1: every qubit hit; probability is the failing share of weight-7 errors
        let one = exact_code_capacity_rate(&code, &table, 1.0).unwrap();
        assert!(one > 0.0 && one <= 1.0);
    }

    #[test]
    fn noiseless_circuits_succeed() {
        let noise = NoiseModel::noiseless();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for code in [five_qubit_code(), steane_code()] {
            let table = DecoderTable::build(&code, 1).complete();
            let c = shor_ec_round(&code, 3).unwrap();
            for _ in 0..5 {
                assert_eq!(
                    sample_run(&c, &code, &table, &noise, &mut rng).unwrap(),
                    ShotOutcome::Success
                );
            }
        }
        let code = steane_code();
        let table = DecoderTable::build(&code, 1).complete();
        let c = steane_ec_circuit(&code).unwrap();
        for _ in 0..5 {
            assert_eq!(
                sample_run(&c, &code, &table, &noise, &mut rng).unwrap(),
                ShotOutcome::Success
            );
        }
    }

    #[test]
    fn injected_logical_is_detected() {
        // a logical X̄ inserted as a table correction on an otherwise empty circuit
        let code = steane_code();
        let table = DecoderTable::build(&code, 1).complete();
        let mut b = crate::circuit::CircuitBuilder::new();
        let data = b.add_register("data", RegisterKind::Data, 7);
        for &q in &data {
            b.gate1(Gate1::X, q);
        }
        let c = b.finish().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = sample_run(&c, &code, &table, &NoiseModel::noiseless(), &mut rng).unwrap();
        assert_eq!(out, ShotOutcome::LogicalFailure);
    }

    #[test]
    fn certain_fault_on_single_location_is_corrected() {
        let code = steane_code();
        let table = DecoderTable::build(&code, 1).complete();
        let mut b = crate::circuit::CircuitBuilder::new();
        let data = b.add_register("data", RegisterKind::Data, 7);
        b.gate1(Gate1::Z, data[0]);
        let c = b.finish().unwrap();
        let noise = NoiseModel::new(1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let out = sample_run(&c, &code, &table, &noise, &mut rng).unwrap();
            assert_eq!(out, ShotOutcome::Success);
        }
    }
}
