//! Stabilizer-state simulation with destabilizer rows.

use rand::Rng;

use crate::circuit::{Basis, Gate1, Gate2};
use crate::error::{Error, Result};
use crate::exec::Backend;
use crate::pauli::{Letter, PauliOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measurement {
    /// `true` for eigenvalue `-1`.
    pub bit: bool,
    pub deterministic: bool,
}

impl Measurement {
    pub fn sign(self) -> i8 {
        if self.bit {
            -1
        } else {
            1
        }
    }
}

/// Rows `0..n` are destabilizers, rows `n..2n` stabilizers; destabilizer `i`
/// anticommutes with stabilizer `i` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    rows: Vec<PauliOperator>,
}

impl Tableau {
    /// `|0…0⟩`.
    pub fn new(n: usize) -> Self {
        let mut rows = Vec::with_capacity(2 * n);
        for q in 0..n {
            rows.push(PauliOperator::single(n, q, Letter::X));
        }
        for q in 0..n {
            rows.push(PauliOperator::single(n, q, Letter::Z));
        }
        Tableau { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliOperator] {
        &self.rows[self.n..]
    }

    pub fn destabilizers(&self) -> &[PauliOperator] {
        &self.rows[..self.n]
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::Index { index: q, n: self.n });
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::Circuit(format!("two-qubit gate on qubit {a} twice")));
        }
        Ok(())
    }

    fn each_row(&mut self, f: impl Fn(&mut PauliOperator)) {
        self.rows.iter_mut().for_each(f);
        debug_assert!(self.stabilizers().iter().all(|r| r.is_hermitian()));
    }

    pub fn apply_h(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        self.each_row(|r| r.conjugate_h(q));
        Ok(())
    }

    pub fn apply_s(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        self.each_row(|r| r.conjugate_s(q));
        Ok(())
    }

    pub fn apply_sdg(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        self.each_row(|r| r.conjugate_sdg(q));
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_pair(control, target)?;
        self.each_row(|r| r.conjugate_cnot(control, target));
        Ok(())
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_pair(a, b)?;
        self.each_row(|r| r.conjugate_cz(a, b));
        Ok(())
    }

    pub fn apply_cy(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_pair(control, target)?;
        self.each_row(|r| r.conjugate_cy(control, target));
        Ok(())
    }

    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        self.check_dim(p)?;
        self.each_row(|r| r.conjugate_pauli(p));
        Ok(())
    }

    pub fn apply_gate(&mut self, g: Gate1, q: usize) -> Result<()> {
        match g {
            Gate1::H => self.apply_h(q),
            Gate1::S => self.apply_s(q),
            Gate1::Sdg => self.apply_sdg(q),
            Gate1::X | Gate1::Y | Gate1::Z => {
                self.check_qubit(q)?;
                let l = match g {
                    Gate1::X => Letter::X,
                    Gate1::Y => Letter::Y,
                    _ => Letter::Z,
                };
                self.apply_pauli(&PauliOperator::single(self.n, q, l))
            }
            Gate1::T | Gate1::Tdg => Err(Error::Unsupported("the pi/8 gate is not a Clifford operation".into())),
        }
    }

    pub fn apply_gate2(&mut self, g: Gate2, a: usize, b: usize) -> Result<()> {
        match g {
            Gate2::Cx => self.apply_cnot(a, b),
            Gate2::Cy => self.apply_cy(a, b),
            Gate2::Cz => self.apply_cz(a, b),
        }
    }

    fn check_dim(&self, p: &PauliOperator) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: p.n(),
            });
        }
        Ok(())
    }

    /// The outcome of measuring `P` if it is determined, without changing
    /// the state.
    pub fn peek(&self, p: &PauliOperator) -> Result<Option<bool>> {
        self.check_dim(p)?;
        if !p.is_hermitian() {
            return Err(Error::Domain(format!("{p} is not Hermitian")));
        }
        if self.stabilizers().iter().any(|s| s.anticommutes_with(p)) {
            return Ok(None);
        }
        Ok(Some(self.determined_bit(p)))
    }

    fn determined_bit(&self, p: &PauliOperator) -> bool {
        let mut acc = PauliOperator::identity(self.n);
        for i in 0..self.n {
            if self.rows[i].anticommutes_with(p) {
                acc.mul_assign_right(&self.rows[self.n + i]);
            }
        }
        debug_assert!(acc.x_bits() == p.x_bits() && acc.z_bits() == p.z_bits());
        acc.phase_exponent() != p.phase_exponent()
    }

    /// Measures a Hermitian Pauli. Random outcomes are fair coin flips from `rng`.
    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, p: &PauliOperator, rng: &mut R) -> Result<Measurement> {
        if let Some(bit) = self.peek(p)? {
            return Ok(Measurement {
                bit,
                deterministic: true,
            });
        }
        let bit = rng.gen::<bool>();
        self.collapse(p, bit);
        Ok(Measurement {
            bit,
            deterministic: false,
        })
    }

    /// Measures with a chosen outcome for the random case; deterministic
    /// outcomes that disagree are an error.
    pub fn measure_pauli_forced(&mut self, p: &PauliOperator, bit: bool) -> Result<Measurement> {
        match self.peek(p)? {
            Some(b) if b == bit => Ok(Measurement {
                bit,
                deterministic: true,
            }),
            Some(_) => Err(Error::ZeroProbability),
            None => {
                self.collapse(p, bit);
                Ok(Measurement {
                    bit,
                    deterministic: false,
                })
            }
        }
    }

    fn collapse(&mut self, p: &PauliOperator, bit: bool) {
        let n = self.n;
        let pivot = (n..2 * n)
            .find(|&i| self.rows[i].anticommutes_with(p))
            .expect("random measurement needs an anticommuting stabilizer");
        let pivot_row = self.rows[pivot].clone();
        for i in 0..2 * n {
            if i != pivot && i != pivot - n && self.rows[i].anticommutes_with(p) {
                self.rows[i].mul_assign_right(&pivot_row);
            }
        }
        self.rows[pivot - n] = pivot_row;
        let mut new_row = p.clone();
        if bit {
            new_row.add_phase(2);
        }
        self.rows[pivot] = new_row;
    }

    /// Same signed stabilizer group.
    pub fn state_equal(&self, other: &Tableau) -> bool {
        self.n == other.n
            && other
                .stabilizers()
                .iter()
                .all(|s| matches!(self.peek(s), Ok(Some(false))))
    }
}

/// [`Backend`] over a [`Tableau`] with its own randomness.
pub struct TableauSim<R> {
    pub tableau: Tableau,
    pub rng: R,
}

impl<R: Rng> TableauSim<R> {
    pub fn new(n: usize, rng: R) -> Self {
        TableauSim {
            tableau: Tableau::new(n),
            rng,
        }
    }
}

impl<R: Rng> Backend for TableauSim<R> {
    fn num_qubits(&self) -> usize {
        self.tableau.n()
    }

    fn prep(&mut self, q: usize, basis: Basis) -> Result<()> {
        self.tableau.check_qubit(q)?;
        let z = PauliOperator::single(self.tableau.n(), q, Letter::Z);
        if self.tableau.measure_pauli(&z, &mut self.rng)?.bit {
            self.tableau.apply_gate(Gate1::X, q)?;
        }
        if basis == Basis::X {
            self.tableau.apply_h(q)?;
        }
        Ok(())
    }

    fn gate1(&mut self, gate: Gate1, q: usize) -> Result<()> {
        self.tableau.apply_gate(gate, q)
    }

    fn gate2(&mut self, gate: Gate2, a: usize, b: usize) -> Result<()> {
        self.tableau.apply_gate2(gate, a, b)
    }

    fn measure(&mut self, q: usize, basis: Basis) -> Result<bool> {
        self.tableau.check_qubit(q)?;
        let l = if basis == Basis::Z { Letter::Z } else { Letter::X };
        let p = PauliOperator::single(self.tableau.n(), q, l);
        Ok(self.tableau.measure_pauli(&p, &mut self.rng)?.bit)
    }

    fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        self.tableau.apply_pauli(p)
    }
}
