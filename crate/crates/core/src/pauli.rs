//! Pauli group arithmetic in the binary symplectic representation.
//!
//! A [`PauliOperator`] on `n` qubits is `i^phase · σ_0 ⊗ … ⊗ σ_{n-1}` where each
//! letter `σ_q ∈ {I, X, Y, Z}` is encoded by the bit pair `(x_q, z_q)`:
//! `I = (0,0)`, `X = (1,0)`, `Y = (1,1)`, `Z = (0,1)`. The phase exponent is
//! relative to the displayed letters, so `-Y` has phase exponent 2 and every
//! Hermitian Pauli has phase exponent 0 or 2. Qubit 0 is the leftmost letter
//! of the text form.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitVec;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    pub const NONTRIVIAL: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

/// Phase exponent picked up by the letter-wise product, word by word.
#[inline]
fn product_phase_words(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> u32 {
    let mut pos = 0u32;
    let mut neg = 0u32;
    for i in 0..x1.len() {
        let (a, b, c, d) = (x1[i], z1[i], x2[i], z2[i]);
        // cyclic XY, YZ, ZX give +i; anticyclic YX, ZY, XZ give -i
        let p = (a & !b & c & d) | (a & b & !c & d) | (!a & b & c & !d);
        let m = (a & b & c & !d) | (!a & b & c & d) | (a & !b & !c & d);
        pos += p.count_ones();
        neg += m.count_ones();
    }
    (pos + 3 * neg) & 3
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            phase: 0,
        }
    }

    /// Panics if `x` and `z` differ in length.
    pub fn from_bits(x: BitVec, z: BitVec, phase: u8) -> Self {
        assert_eq!(x.len(), z.len(), "x and z bit vectors differ in length");
        PauliOperator { x, z, phase: phase & 3 }
    }

    /// Inverse of [`PauliOperator::symplectic`]; phase is zero.
    pub fn from_symplectic(v: &BitVec) -> Self {
        assert!(v.len().is_multiple_of(2));
        let n = v.len() / 2;
        PauliOperator::from_bits(v.slice(0, n), v.slice(n, n), 0)
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = PauliOperator::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q, l);
        }
        p
    }

    pub fn single(n: usize, qubit: usize, letter: Letter) -> Self {
        let mut p = PauliOperator::identity(n);
        p.set_letter(qubit, letter);
        p
    }

    /// Operator acting as `letter` on every qubit in `support`.
    pub fn uniform(n: usize, support: &BitVec, letter: Letter) -> Self {
        let (x, z) = letter.bits();
        PauliOperator {
            x: if x { support.clone() } else { BitVec::zeros(n) },
            z: if z { support.clone() } else { BitVec::zeros(n) },
            phase: 0,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    #[inline]
    pub fn phase_exponent(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase & 3;
    }

    pub fn add_phase(&mut self, delta: u8) {
        self.phase = (self.phase + delta) & 3;
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    /// The same letters with phase exponent 0.
    pub fn unsigned(&self) -> Self {
        self.clone().with_phase(0)
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set_letter(&mut self, q: usize, l: Letter) {
        let (x, z) = l.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n()).map(|q| self.letter(q)).collect()
    }

    pub fn support(&self) -> BitVec {
        self.x.or(&self.z)
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// `x || z` as a single `2n`-bit vector.
    pub fn symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    /// `z || x`; dotting this with another operator's [`symplectic`] vector
    /// gives the symplectic product.
    ///
    /// [`symplectic`]: PauliOperator::symplectic
    pub fn symplectic_dual(&self) -> BitVec {
        self.z.concat(&self.x)
    }

    fn check_dim(&self, other: &PauliOperator) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(())
    }

    /// Symplectic product `p_x·q_z + p_z·q_x (mod 2)`; `true` means anticommute.
    #[inline]
    pub fn anticommutes_with(&self, other: &PauliOperator) -> bool {
        debug_assert_eq!(self.n(), other.n());
        let mut acc = 0u64;
        let (px, pz, qx, qz) = (self.x.words(), self.z.words(), other.x.words(), other.z.words());
        for i in 0..px.len() {
            acc ^= (px[i] & qz[i]) ^ (pz[i] & qx[i]);
        }
        acc.count_ones() & 1 == 1
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        self.check_dim(other)?;
        Ok(!self.anticommutes_with(other))
    }

    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_dim(other)?;
        let mut r = self.clone();
        r.mul_assign_right(other);
        Ok(r)
    }

    /// `self ← self · other`.
    #[inline]
    pub fn mul_assign_right(&mut self, other: &PauliOperator) {
        debug_assert_eq!(self.n(), other.n());
        let extra = product_phase_words(self.x.words(), self.z.words(), other.x.words(), other.z.words()) as u8;
        self.phase = (self.phase + other.phase + extra) & 3;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// `self ← other · self`.
    pub fn mul_assign_left(&mut self, other: &PauliOperator) {
        let mut r = other.clone();
        r.mul_assign_right(self);
        *self = r;
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &PauliOperator) -> PauliOperator {
        PauliOperator {
            x: self.x.concat(&other.x),
            z: self.z.concat(&other.z),
            phase: (self.phase + other.phase) & 3,
        }
    }

    /// Places this operator on qubits `offset..offset+self.n()` of an `n`-qubit register.
    pub fn embed(&self, n: usize, offset: usize) -> PauliOperator {
        let mut r = PauliOperator::identity(n);
        for q in 0..self.n() {
            r.set_letter(offset + q, self.letter(q));
        }
        r.phase = self.phase;
        r
    }

    /// Places this operator on the listed qubits of an `n`-qubit register.
    pub fn scatter(&self, n: usize, qubits: &[usize]) -> PauliOperator {
        assert_eq!(qubits.len(), self.n());
        let mut r = PauliOperator::identity(n);
        for (i, &q) in qubits.iter().enumerate() {
            r.set_letter(q, self.letter(i));
        }
        r.phase = self.phase;
        r
    }

    /// Letters on the listed qubits, phase dropped.
    pub fn gather(&self, qubits: &[usize]) -> PauliOperator {
        let mut r = PauliOperator::identity(qubits.len());
        for (i, &q) in qubits.iter().enumerate() {
            r.set_letter(i, self.letter(q));
        }
        r
    }

    // Clifford conjugations P ↦ U P U†, with sign rules written for the letter form.

    pub fn conjugate_h(&mut self, q: usize) {
        let (x, z) = (self.x.get(q), self.z.get(q));
        if x && z {
            self.add_phase(2);
        }
        self.x.set(q, z);
        self.z.set(q, x);
    }

    /// Conjugation by `S = diag(1, i)`: X → Y, Y → −X, Z → Z.
    pub fn conjugate_s(&mut self, q: usize) {
        let (x, z) = (self.x.get(q), self.z.get(q));
        if x && z {
            self.add_phase(2);
        }
        if x {
            self.z.flip(q);
        }
    }

    /// Conjugation by `S†`: X → −Y, Y → X, Z → Z.
    pub fn conjugate_sdg(&mut self, q: usize) {
        let (x, z) = (self.x.get(q), self.z.get(q));
        if x && !z {
            self.add_phase(2);
        }
        if x {
            self.z.flip(q);
        }
    }

    /// Conjugation by CNOT: X_c → X_c X_t, Z_t → Z_c Z_t.
    pub fn conjugate_cnot(&mut self, c: usize, t: usize) {
        let (xc, zc, xt, zt) = (self.x.get(c), self.z.get(c), self.x.get(t), self.z.get(t));
        if xc && zt && (xt == zc) {
            self.add_phase(2);
        }
        self.x.set(t, xt ^ xc);
        self.z.set(c, zc ^ zt);
    }

    pub fn conjugate_cz(&mut self, a: usize, b: usize) {
        self.conjugate_h(b);
        self.conjugate_cnot(a, b);
        self.conjugate_h(b);
    }

    /// Controlled-Y, realized as `S_t · CNOT · S_t†`.
    pub fn conjugate_cy(&mut self, c: usize, t: usize) {
        self.conjugate_sdg(t);
        self.conjugate_cnot(c, t);
        self.conjugate_s(t);
    }

    /// Conjugation by a Pauli `P`: negates iff the two anticommute.
    pub fn conjugate_pauli(&mut self, p: &PauliOperator) {
        if self.anticommutes_with(p) {
            self.add_phase(2);
        }
    }

    /// Lexicographic comparison of the letter strings (I < X < Y < Z).
    pub fn cmp_letters(&self, other: &PauliOperator) -> std::cmp::Ordering {
        self.letters().cmp(&other.letters())
    }

    pub fn parse(text: &str) -> Result<PauliOperator> {
        let chars: Vec<char> = text.trim().chars().collect();
        let mut i = 0;
        let mut phase = 0u8;
        if let Some(&c) = chars.first() {
            match c {
                '+' => i = 1,
                '-' | '−' => {
                    phase = 2;
                    i = 1;
                }
                _ => {}
            }
            if i == 1 && chars.get(1) == Some(&'i') {
                phase += 1;
                i = 2;
            }
        }
        let mut letters = Vec::with_capacity(chars.len());
        for (idx, &c) in chars.iter().enumerate().skip(i) {
            match Letter::from_char(c) {
                Some(l) => letters.push(l),
                None => {
                    return Err(Error::Parse {
                        index: idx,
                        message: format!("unexpected character {c:?}"),
                    })
                }
            }
        }
        if letters.is_empty() {
            return Err(Error::Parse {
                index: chars.len(),
                message: "no Pauli letters".into(),
            });
        }
        Ok(PauliOperator::from_letters(&letters).with_phase(phase))
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n() {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PauliOperator::parse(s)
    }
}

/// All `4^n` unsigned Paulis on `n` qubits, in base-4 counting order.
pub fn all_paulis(n: usize) -> impl Iterator<Item = PauliOperator> {
    assert!(n <= 16);
    (0u64..(1u64 << (2 * n))).map(move |code| {
        let letters: Vec<Letter> = (0..n).map(|q| Letter::ALL[((code >> (2 * q)) & 3) as usize]).collect();
        PauliOperator::from_letters(&letters)
    })
}

/// Visits every unsigned Pauli of exactly weight `w` on `n` qubits.
/// Stops early when `visit` returns `false`; the return value says whether
/// the enumeration ran to completion.
pub fn for_each_of_weight(n: usize, w: usize, mut visit: impl FnMut(&PauliOperator) -> bool) -> bool {
    if w > n {
        return true;
    }
    let mut positions: Vec<usize> = (0..w).collect();
    let mut p = PauliOperator::identity(n);
    loop {
        // letterings of the current support, counted in base 3
        let total = 3usize.pow(w as u32);
        for code in 0..total {
            let mut c = code;
            for &q in positions.iter().rev() {
                p.set_letter(q, Letter::NONTRIVIAL[c % 3]);
                c /= 3;
            }
            if !visit(&p) {
                return false;
            }
        }
        for &q in &positions {
            p.set_letter(q, Letter::I);
        }
        // next combination in lexicographic order
        let mut i = w;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if positions[i] < n - w + i {
                positions[i] += 1;
                for j in i + 1..w {
                    positions[j] = positions[j - 1] + 1;
                }
                break;
            }
        }
    }
}
