//! Exact state-vector simulation on up to [`MAX_DENSE_QUBITS`] qubits.
//!
//! Qubit `q` is bit `q` of the basis-state index.

use std::collections::VecDeque;

use num_complex::Complex64;
use rand::Rng;

use crate::circuit::{Basis, Circuit, Gate1, Gate2};
use crate::error::{Error, Result};
use crate::exec::{execute, Backend, RunRecord};
use crate::gf2::BitMatrix;
use crate::pauli::{Letter, PauliOperator};
use crate::stabilizer::StabilizerCode;

pub const MAX_DENSE_QUBITS: usize = 14;
pub const TOLERANCE: f64 = 1e-10;

// Forced branches below this probability are rejected.
const ZERO_PROBABILITY: f64 = 1e-12;

pub type Matrix2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn i_pow(k: u32) -> Complex64 {
    match k & 3 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}

pub fn gate_matrix(g: Gate1) -> Matrix2 {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    match g {
        Gate1::H => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
        Gate1::S => [[o, z], [z, c(0.0, 1.0)]],
        Gate1::Sdg => [[o, z], [z, c(0.0, -1.0)]],
        Gate1::X => [[z, o], [o, z]],
        Gate1::Y => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        Gate1::Z => [[o, z], [z, -o]],
        Gate1::T => [[o, z], [z, w]],
        Gate1::Tdg => [[o, z], [z, w.conj()]],
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::Capacity {
            qubits: n,
            limit: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

impl DenseState {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_capacity(n)?;
        if index >= 1 << n {
            return Err(Error::Index { index, n });
        }
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[index] = c(1.0, 0.0);
        Ok(DenseState { n, amps })
    }

    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::Domain("amplitude count must be a power of two".into()));
        }
        let n = len.trailing_zeros() as usize;
        check_capacity(n)?;
        let mut s = DenseState { n, amps };
        let norm = s.norm();
        if norm < ZERO_PROBABILITY {
            return Err(Error::Domain("zero vector is not a state".into()));
        }
        s.scale(1.0 / norm);
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn scale(&mut self, f: f64) {
        for a in &mut self.amps {
            *a *= f;
        }
    }

    /// `self ⊗ other` with `self` on the low qubits.
    pub fn tensor(&self, other: &DenseState) -> Result<DenseState> {
        check_capacity(self.n + other.n)?;
        let mut amps = Vec::with_capacity(1 << (self.n + other.n));
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        Ok(DenseState {
            n: self.n + other.n,
            amps,
        })
    }

    pub fn inner(&self, other: &DenseState) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩| = 1` within tolerance.
    pub fn equal_up_to_phase(&self, other: &DenseState) -> bool {
        self.n == other.n && (self.inner(other).norm() - 1.0).abs() < TOLERANCE
    }

    /// `⟨target|ρ|target⟩` for the reduced state of the low `target.n()`
    /// qubits; `1` iff those qubits are exactly in `target`.
    pub fn subsystem_fidelity(&self, target: &DenseState) -> Result<f64> {
        if target.n > self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: target.n,
            });
        }
        let block = 1usize << target.n;
        Ok(self
            .amps
            .chunks(block)
            .map(|chunk| {
                chunk
                    .iter()
                    .zip(&target.amps)
                    .map(|(a, t)| t.conj() * a)
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::Index { index: q, n: self.n });
        }
        Ok(())
    }

    fn check_pauli(&self, p: &PauliOperator) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: p.n(),
            });
        }
        Ok(())
    }

    /// `P|b⟩ = i^(phase + |x∧z|) (-1)^|z∧b| |b ⊕ x⟩`.
    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        self.check_pauli(p)?;
        self.amps = self.pauli_image(p);
        Ok(())
    }

    fn pauli_image(&self, p: &PauliOperator) -> Vec<Complex64> {
        let x = p.x_bits().to_u64() as usize;
        let z = p.z_bits().to_u64() as usize;
        let base = i_pow(p.phase_exponent() as u32 + (x & z).count_ones());
        let mut out = vec![c(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let s = if (z & b).count_ones() & 1 == 1 { -base } else { base };
            out[b ^ x] = s * a;
        }
        out
    }

    pub fn apply_unitary_1q(&mut self, q: usize, m: &Matrix2) -> Result<()> {
        self.check_qubit(q)?;
        // ‖M†M - I‖ entrywise
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let e: Complex64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((e - target).norm());
            }
        }
        if dev > TOLERANCE {
            return Err(Error::NotUnitary(dev));
        }
        self.apply_1q_unchecked(q, m);
        Ok(())
    }

    fn apply_1q_unchecked(&mut self, q: usize, m: &Matrix2) {
        let bit = 1usize << q;
        for b in 0..self.amps.len() {
            if b & bit == 0 {
                let (a0, a1) = (self.amps[b], self.amps[b | bit]);
                self.amps[b] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[b | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_gate(&mut self, g: Gate1, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        self.apply_1q_unchecked(q, &gate_matrix(g));
        Ok(())
    }

    /// Controlled single-qubit gate.
    fn apply_controlled(&mut self, control: usize, target: usize, m: &Matrix2) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::Circuit("control equals target".into()));
        }
        let (cb, tb) = (1usize << control, 1usize << target);
        for b in 0..self.amps.len() {
            if b & cb != 0 && b & tb == 0 {
                let (a0, a1) = (self.amps[b], self.amps[b | tb]);
                self.amps[b] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[b | tb] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.apply_controlled(control, target, &gate_matrix(Gate1::X))
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.apply_controlled(a, b, &gate_matrix(Gate1::Z))
    }

    pub fn apply_cy(&mut self, control: usize, target: usize) -> Result<()> {
        self.apply_controlled(control, target, &gate_matrix(Gate1::Y))
    }

    pub fn apply_gate2(&mut self, g: Gate2, a: usize, b: usize) -> Result<()> {
        match g {
            Gate2::Cx => self.apply_cnot(a, b),
            Gate2::Cy => self.apply_cy(a, b),
            Gate2::Cz => self.apply_cz(a, b),
        }
    }

    /// `⟨ψ|P|ψ⟩`; real for Hermitian `P`.
    pub fn expectation(&self, p: &PauliOperator) -> Result<f64> {
        self.check_pauli(p)?;
        let img = self.pauli_image(p);
        Ok(self
            .amps
            .iter()
            .zip(&img)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .re)
    }

    /// Probability that measuring `P` yields `outcome` (`true` = `-1`).
    pub fn outcome_probability(&self, p: &PauliOperator, outcome: bool) -> Result<f64> {
        let e = self.expectation(p)?;
        Ok(if outcome { (1.0 - e) / 2.0 } else { (1.0 + e) / 2.0 })
    }

    fn check_hermitian(p: &PauliOperator) -> Result<()> {
        if !p.is_hermitian() {
            return Err(Error::Domain(format!("{p} is not Hermitian")));
        }
        Ok(())
    }

    /// Projects onto the `outcome` eigenspace of `P` and renormalizes;
    /// returns the branch probability.
    pub fn measure_pauli_forced(&mut self, p: &PauliOperator, outcome: bool) -> Result<f64> {
        self.check_pauli(p)?;
        Self::check_hermitian(p)?;
        let img = self.pauli_image(p);
        let sign = if outcome { -1.0 } else { 1.0 };
        let proj: Vec<Complex64> = self.amps.iter().zip(&img).map(|(a, b)| (a + b * sign) * 0.5).collect();
        let prob: f64 = proj.iter().map(|a| a.norm_sqr()).sum();
        if prob < ZERO_PROBABILITY {
            return Err(Error::ZeroProbability);
        }
        self.amps = proj;
        self.scale(1.0 / prob.sqrt());
        Ok(prob)
    }

    /// Samples a measurement of `P`; returns `(outcome, probability)`.
    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, p: &PauliOperator, rng: &mut R) -> Result<(bool, f64)> {
        let p_minus = self.outcome_probability(p, true)?;
        let outcome = p_minus > ZERO_PROBABILITY && rng.gen::<f64>() < p_minus;
        let prob = self.measure_pauli_forced(p, outcome)?;
        Ok((outcome, prob))
    }

    /// Applies `(I + P)/2` without renormalizing.
    fn project_plus(&mut self, p: &PauliOperator) {
        let img = self.pauli_image(p);
        for (a, b) in self.amps.iter_mut().zip(img) {
            *a = (*a + b) * 0.5;
        }
    }
}

fn basis_measurement_op(n: usize, q: usize, basis: Basis) -> PauliOperator {
    let l = if basis == Basis::Z { Letter::Z } else { Letter::X };
    PauliOperator::single(n, q, l)
}

/// Where a dense run gets its measurement outcomes from.
pub enum Outcomes<'a> {
    Sampled(&'a mut dyn rand::RngCore),
    /// Outcomes for the circuit's measurements, in execution order.
    Forced(VecDeque<bool>),
}

/// [`Backend`] over a [`DenseState`]. Preparations measure and flip; in
/// forced mode the reset takes the more likely branch.
pub struct DenseSim<'a> {
    pub state: DenseState,
    pub outcomes: Outcomes<'a>,
}

impl DenseSim<'_> {
    fn reset_outcome(&mut self, p: &PauliOperator) -> Result<bool> {
        let p_minus = self.state.outcome_probability(p, true)?;
        Ok(match &mut self.outcomes {
            Outcomes::Sampled(rng) => p_minus > ZERO_PROBABILITY && rng.gen::<f64>() < p_minus,
            Outcomes::Forced(_) => p_minus > 0.5,
        })
    }
}

impl Backend for DenseSim<'_> {
    fn num_qubits(&self) -> usize {
        self.state.n()
    }

    fn prep(&mut self, q: usize, basis: Basis) -> Result<()> {
        let zq = basis_measurement_op(self.state.n, q, Basis::Z);
        let m = self.reset_outcome(&zq)?;
        self.state.measure_pauli_forced(&zq, m)?;
        if m {
            self.state.apply_gate(Gate1::X, q)?;
        }
        if basis == Basis::X {
            self.state.apply_gate(Gate1::H, q)?;
        }
        Ok(())
    }

    fn gate1(&mut self, gate: Gate1, q: usize) -> Result<()> {
        self.state.apply_gate(gate, q)
    }

    fn gate2(&mut self, gate: Gate2, a: usize, b: usize) -> Result<()> {
        self.state.apply_gate2(gate, a, b)
    }

    fn measure(&mut self, q: usize, basis: Basis) -> Result<bool> {
        let p = basis_measurement_op(self.state.n, q, basis);
        match &mut self.outcomes {
            Outcomes::Sampled(rng) => Ok(self.state.measure_pauli(&p, rng)?.0),
            Outcomes::Forced(list) => {
                let m = list
                    .pop_front()
                    .ok_or_else(|| Error::Circuit("ran out of forced outcomes".into()))?;
                self.state.measure_pauli_forced(&p, m)?;
                Ok(m)
            }
        }
    }

    fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        self.state.apply_pauli(p)
    }
}

/// Runs `circuit` exactly from `initial`.
pub fn run_circuit_dense(
    circuit: &Circuit,
    initial: DenseState,
    outcomes: Outcomes<'_>,
) -> Result<(DenseState, RunRecord)> {
    check_capacity(circuit.num_qubits)?;
    let mut sim = DenseSim {
        state: initial,
        outcomes,
    };
    let rec = execute(circuit, &mut sim)?;
    Ok((sim.state, rec))
}

/// The Z-type elements of `⟨gens⟩` as a basis of `(z-bits, negative)` pairs.
fn z_type_subgroup(gens: &[PauliOperator]) -> Vec<(u64, bool)> {
    let n = gens.first().map_or(0, |g| g.n());
    let xs = BitMatrix::from_rows(gens.iter().map(|g| g.x_bits().clone()).collect(), n);
    // combinations c with Σ c_i x_i = 0: kernel of the transpose
    xs.transpose()
        .kernel()
        .into_iter()
        .map(|comb| {
            let mut p = PauliOperator::identity(n);
            for i in comb.iter_ones() {
                p.mul_assign_right(&gens[i]);
            }
            (p.z_bits().to_u64(), p.phase_exponent() == 2)
        })
        .collect()
}

/// Orthonormal basis `|x̄⟩` of the code space, `x` indexing the logical
/// computational basis with logical qubit `j` as bit `j`.
pub fn codespace_basis(code: &StabilizerCode) -> Result<Vec<DenseState>> {
    let n = code.n();
    check_capacity(n)?;
    let mut fixing: Vec<PauliOperator> = code.generators().to_vec();
    fixing.extend(code.logical_z().iter().cloned());
    // the least basis index with nonzero overlap with |0̄…0⟩
    let constraints = z_type_subgroup(&fixing);
    let seed = (0..1usize << n)
        .find(|&b| {
            constraints
                .iter()
                .all(|&(z, neg)| ((z as usize & b).count_ones() & 1 == 1) == neg)
        })
        .ok_or_else(|| Error::Internal("projector annihilates every seed".into()))?;
    let mut zero = DenseState::basis(n, seed)?;
    for m in &fixing {
        zero.project_plus(m);
    }
    let norm = zero.norm();
    if norm < ZERO_PROBABILITY {
        return Err(Error::Internal("projector annihilates the seed".into()));
    }
    zero.scale(1.0 / norm);
    let k = code.k();
    let mut out = Vec::with_capacity(1 << k);
    for x in 0..1usize << k {
        let mut s = zero.clone();
        for j in 0..k {
            if x >> j & 1 == 1 {
                s.apply_pauli(&code.logical_x()[j])?;
            }
        }
        out.push(s);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KLReport {
    pub error_labels: Vec<String>,
    /// `C_ab`, taken from the first code state.
    pub c_matrix: Vec<Vec<Complex64>>,
    pub max_offdiag_violation: f64,
    pub max_identity_violation: f64,
    pub satisfied: bool,
}

/// Evaluates `⟨ψ_i|E_a† E_b|ψ_j⟩` over the code space basis.
pub fn check_kl(code: &StabilizerCode, errors: &[PauliOperator]) -> Result<KLReport> {
    if errors.is_empty() {
        return Err(Error::Empty);
    }
    for e in errors {
        if e.n() != code.n() {
            return Err(Error::Dimension {
                expected: code.n(),
                found: e.n(),
            });
        }
    }
    let basis = codespace_basis(code)?;
    // images[a][i] = E_a |ψ_i⟩
    let images: Vec<Vec<DenseState>> = errors
        .iter()
        .map(|e| {
            basis
                .iter()
                .map(|s| {
                    let mut t = s.clone();
                    t.apply_pauli(e).map(|_| t)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let m = errors.len();
    let mut c_matrix = vec![vec![c(0.0, 0.0); m]; m];
    let (mut off, mut ident) = (0.0f64, 0.0f64);
    for a in 0..m {
        for b in 0..m {
            let c00 = images[a][0].inner(&images[b][0]);
            c_matrix[a][b] = c00;
            for i in 0..basis.len() {
                for j in 0..basis.len() {
                    let v = images[a][i].inner(&images[b][j]);
                    if i == j {
                        ident = ident.max((v - c00).norm());
                    } else {
                        off = off.max(v.norm());
                    }
                }
            }
        }
    }
    Ok(KLReport {
        error_labels: errors.iter().map(|e| e.to_string()).collect(),
        c_matrix,
        max_offdiag_violation: off,
        max_identity_violation: ident,
        satisfied: off < TOLERANCE && ident < TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{five_qubit_code, steane_code};
    use crate::pauli::for_each_of_weight;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn pauli_action_on_basis_states() {
        let mut s = DenseState::zero(1).unwrap();
        s.apply_pauli(&p("X")).unwrap();
        assert_eq!(s, DenseState::basis(1, 1).unwrap());
        s.apply_pauli(&p("Y")).unwrap();
        assert!((s.amplitudes()[0] - c(0.0, -1.0)).norm() < 1e-15);
        // qubit 0 is the low bit
        let mut t = DenseState::zero(2).unwrap();
        t.apply_pauli(&p("XI")).unwrap();
        assert_eq!(t, DenseState::basis(2, 1).unwrap());
    }

    #[test]
    fn pauli_matches_gate_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let amps: Vec<Complex64> = (0..4).map(|_| c(rng.gen(), rng.gen())).collect();
        let psi = DenseState::from_amplitudes(amps).unwrap();
        for (text, g) in [("XI", Gate1::X), ("YI", Gate1::Y), ("ZI", Gate1::Z)] {
            let mut a = psi.clone();
            a.apply_pauli(&p(text)).unwrap();
            let mut b = psi.clone();
            b.apply_gate(g, 0).unwrap();
            assert!(a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .all(|(x, y)| (x - y).norm() < 1e-12));
        }
    }

    #[test]
    fn measurement_probabilities() {
        let mut s = DenseState::zero(1).unwrap();
        s.apply_gate(Gate1::H, 0).unwrap();
        assert!((s.outcome_probability(&p("Z"), false).unwrap() - 0.5).abs() < 1e-12);
        let mut t = s.clone();
        assert!((t.measure_pauli_forced(&p("Z"), true).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(t, DenseState::basis(1, 1).unwrap());
        assert_eq!(t.measure_pauli_forced(&p("Z"), false), Err(Error::ZeroProbability));
        assert!(s.measure_pauli_forced(&p("+iZ"), false).is_err());
    }

    #[test]
    fn t_gate_phase() {
        let mut s = DenseState::basis(1, 1).unwrap();
        s.apply_unitary_1q(0, &gate_matrix(Gate1::T)).unwrap();
        let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert!((s.amplitudes()[1] - w).norm() < 1e-15);
        let bad = [[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(s.apply_unitary_1q(0, &bad), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(DenseState::zero(14).is_ok());
        assert!(matches!(DenseState::zero(15), Err(Error::Capacity { .. })));
    }

    #[test]
    fn trivial_code_space() {
        let code = StabilizerCode::validate(vec![p("Z")]).unwrap();
        let b = codespace_basis(&code).unwrap();
        assert_eq!(b, vec![DenseState::zero(1).unwrap()]);
    }

    #[test]
    fn five_qubit_code_states_are_fixed() {
        let code = five_qubit_code();
        let basis = codespace_basis(&code).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(basis[0].inner(&basis[1]).norm() < TOLERANCE);
        for s in &basis {
            for g in code.generators() {
                assert!((s.expectation(g).unwrap() - 1.0).abs() < TOLERANCE);
            }
        }
        assert!((basis[0].expectation(&code.logical_z()[0]).unwrap() - 1.0).abs() < TOLERANCE);
        assert!((basis[1].expectation(&code.logical_z()[0]).unwrap() + 1.0).abs() < TOLERANCE);
    }

    #[test]
    fn syndrome_from_dense_measurement() {
        let code = steane_code();
        let zero = &codespace_basis(&code).unwrap()[0];
        for_each_of_weight(7, 1, |e| {
            let mut s = zero.clone();
            s.apply_pauli(e).unwrap();
            let syn = code.syndrome(e).unwrap();
            for (i, g) in code.generators().iter().enumerate() {
                let minus = s.outcome_probability(g, true).unwrap();
                assert!((minus - if syn.bits().get(i) { 1.0 } else { 0.0 }).abs() < TOLERANCE);
            }
            true
        });
    }

    #[test]
    fn kl_identity_only() {
        let r = check_kl(&five_qubit_code(), &[p("IIIII")]).unwrap();
        assert!(r.satisfied);
        assert!((r.c_matrix[0][0] - c(1.0, 0.0)).norm() < TOLERANCE);
        assert!(check_kl(&five_qubit_code(), &[]).is_err());
    }
}
