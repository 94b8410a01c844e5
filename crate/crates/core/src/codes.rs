//! Code constructions: classical linear codes, CSS, built-in codes and
//! concatenation.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, EchelonBasis};
use crate::pauli::{Letter, PauliOperator};
use crate::stabilizer::StabilizerCode;

/// A binary linear code given by its parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalLinearCode {
    h: BitMatrix,
}

impl ClassicalLinearCode {
    pub fn new(h: BitMatrix) -> Self {
        ClassicalLinearCode { h }
    }

    /// A code with no parity checks: every word is a codeword.
    pub fn trivial(n: usize) -> Self {
        ClassicalLinearCode { h: BitMatrix::new(n) }
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.ncols()
    }

    pub fn k(&self) -> usize {
        self.n() - self.h.rank()
    }

    pub fn is_codeword(&self, v: &BitVec) -> bool {
        self.h.mul_vec(v).is_zero()
    }

    pub fn syndrome(&self, v: &BitVec) -> BitVec {
        self.h.mul_vec(v)
    }

    /// Every codeword, enumerated from a kernel basis.
    pub fn codewords(&self) -> Result<Vec<BitVec>> {
        if self.n() > 24 {
            return Err(Error::Capacity {
                qubits: self.n(),
                limit: 24,
            });
        }
        Ok(span(&self.h.kernel(), self.n()))
    }

    /// Minimum nonzero codeword weight, `None` for the zero code.
    pub fn distance(&self) -> Result<Option<usize>> {
        Ok(self
            .codewords()?
            .iter()
            .map(|c| c.count_ones())
            .filter(|&w| w > 0)
            .min())
    }
}

/// All `2^len` sums of subsets of `basis`.
pub(crate) fn span(basis: &[BitVec], width: usize) -> Vec<BitVec> {
    let mut out = vec![BitVec::zeros(width)];
    for b in basis {
        let more: Vec<BitVec> = out.iter().map(|v| v.xor(b)).collect();
        out.extend(more);
    }
    out
}

/// Parity checks `[[1,1,0,…],[0,1,1,…],…]` of the length-`n` repetition code.
pub fn repetition_code(n: usize) -> Result<ClassicalLinearCode> {
    if n < 2 {
        return Err(Error::Domain("repetition code needs n >= 2".into()));
    }
    let mut h = BitMatrix::zeros(n - 1, n);
    for i in 0..n - 1 {
        h.set(i, i, true);
        h.set(i, i + 1, true);
    }
    Ok(ClassicalLinearCode::new(h))
}

/// The [7,4,3] Hamming code; column `j` of `H` is the binary expansion of `j + 1`.
pub fn hamming_code() -> ClassicalLinearCode {
    ClassicalLinearCode::new(BitMatrix::from_bit_strs(&["0001111", "0110011", "1010101"]).expect("static matrix"))
}

fn independent_rows(h: &BitMatrix, label: &str) -> Vec<BitVec> {
    let mut basis = EchelonBasis::new(h.ncols(), h.nrows().max(1));
    let mut kept = Vec::new();
    for (i, row) in h.rows().iter().enumerate() {
        if row.is_zero() || basis.insert(row).is_err() {
            log::warn!("{label} row {i} is linearly dependent on earlier rows; dropped");
        } else {
            kept.push(row.clone());
        }
    }
    kept
}

/// CSS code with Z-type generators from the rows of `c1`'s parity checks and
/// X-type generators from the rows of `c2`'s. Requires `H1 · H2ᵀ = 0`.
pub fn css_code(c1: &ClassicalLinearCode, c2: &ClassicalLinearCode) -> Result<StabilizerCode> {
    let (h1, h2) = (c1.parity_check(), c2.parity_check());
    if h1.ncols() != h2.ncols() {
        return Err(Error::Dimension {
            expected: h1.ncols(),
            found: h2.ncols(),
        });
    }
    let n = h1.ncols();
    for (i, a) in h1.rows().iter().enumerate() {
        for (j, b) in h2.rows().iter().enumerate() {
            if a.dot(b) {
                return Err(Error::CssCondition { h1_row: i, h2_row: j });
            }
        }
    }
    let mut gens: Vec<PauliOperator> = independent_rows(h1, "H1")
        .into_iter()
        .map(|r| PauliOperator::uniform(n, &r, Letter::Z))
        .collect();
    gens.extend(
        independent_rows(h2, "H2")
            .into_iter()
            .map(|r| PauliOperator::uniform(n, &r, Letter::X)),
    );
    StabilizerCode::new(n, gens)
}

pub fn five_qubit_code() -> StabilizerCode {
    let gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
        .iter()
        .map(|s| s.parse().expect("static generator"))
        .collect();
    StabilizerCode::validate(gens)
        .expect("five-qubit generators are valid")
        .with_known_distance(3)
}

pub fn steane_code() -> StabilizerCode {
    let h = hamming_code();
    css_code(&h, &h)
        .expect("Hamming code contains its dual")
        .with_known_distance(3)
}

/// The bit-flip code `⟨ZZI, IZZ⟩` (Z checks from the repetition code).
pub fn bit_flip_code(n: usize) -> Result<StabilizerCode> {
    css_code(&repetition_code(n)?, &ClassicalLinearCode::trivial(n))
}

/// The phase-flip code `⟨XXI, IXX⟩`.
pub fn phase_flip_code(n: usize) -> Result<StabilizerCode> {
    css_code(&ClassicalLinearCode::trivial(n), &repetition_code(n)?)
}

/// Shor's nine-qubit code as the phase-flip code concatenated with the bit-flip code.
pub fn shor_code() -> StabilizerCode {
    concatenate(&phase_flip_code(3).expect("n = 3"), &bit_flip_code(3).expect("n = 3"))
        .expect("both inputs encode one qubit")
}

/// The two cosets of bit strings whose uniform superpositions are `|0̄⟩` and `|1̄⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssBasis {
    pub zero: Vec<BitVec>,
    pub one: Vec<BitVec>,
}

pub fn encoded_css_basis_description(code: &StabilizerCode) -> Result<CssBasis> {
    if !code.is_css() || code.k() != 1 {
        return Err(Error::Unsupported(
            "logical basis description needs a CSS code with k = 1".into(),
        ));
    }
    let x_gens: Vec<BitVec> = code
        .generators()
        .iter()
        .filter(|g| g.z_bits().is_zero())
        .map(|g| g.x_bits().clone())
        .collect();
    if x_gens.len() > 24 {
        return Err(Error::Capacity {
            qubits: code.n(),
            limit: 24,
        });
    }
    let lx = code.logical_x()[0].x_bits().clone();
    let mut zero = span(&x_gens, code.n());
    let mut one: Vec<BitVec> = zero.iter().map(|v| v.xor(&lx)).collect();
    zero.sort();
    one.sort();
    Ok(CssBasis { zero, one })
}

/// Replaces every qubit of `outer` by a block of `inner`. Outer generator
/// letters are lifted to the inner logical operators; `Y` is lifted to the
/// letter-form product of the inner `X̄` and `Z̄` with phase dropped.
pub fn concatenate(outer: &StabilizerCode, inner: &StabilizerCode) -> Result<StabilizerCode> {
    if outer.k() != 1 || inner.k() != 1 {
        return Err(Error::Unsupported(
            "concatenation needs codes encoding exactly one qubit".into(),
        ));
    }
    let (no, ni) = (outer.n(), inner.n());
    let n = no * ni;
    let lx = &inner.logical_x()[0];
    let lz = &inner.logical_z()[0];
    let ly = lx.multiply(lz)?.unsigned();
    let mut gens = Vec::with_capacity(n - 1);
    for b in 0..no {
        gens.extend(inner.generators().iter().map(|g| g.embed(n, b * ni)));
    }
    for g in outer.generators() {
        let mut lifted = PauliOperator::identity(n);
        for q in 0..no {
            let block = match g.letter(q) {
                Letter::I => continue,
                Letter::X => lx,
                Letter::Y => &ly,
                Letter::Z => lz,
            };
            lifted.mul_assign_right(&block.embed(n, q * ni));
        }
        gens.push(lifted.unsigned());
    }
    StabilizerCode::new(n, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::Distance;

    #[test]
    fn hamming_parameters() {
        let h = hamming_code();
        assert_eq!((h.n(), h.k()), (7, 4));
        assert_eq!(h.distance().unwrap(), Some(3));
        for w in ["1100110", "1010101", "1111111"] {
            assert!(h.is_codeword(&BitVec::from_bit_str(w).unwrap()), "{w}");
        }
        // the spanning list 1111000, 1100110, 1010101, 1111111 describes the
        // same code with the qubit order reversed
        for w in ["0001111", "0110011", "1010101", "1111111"] {
            assert!(h.is_codeword(&BitVec::from_bit_str(w).unwrap()), "{w}");
        }
    }

    #[test]
    fn repetition_parity_checks() {
        let r = repetition_code(3).unwrap();
        assert_eq!(r.parity_check(), &BitMatrix::from_bit_strs(&["110", "011"]).unwrap());
        assert!(repetition_code(1).is_err());
    }

    #[test]
    fn steane_from_hamming() {
        let s = steane_code();
        assert_eq!((s.n(), s.k()), (7, 1));
        assert_eq!(s.distance(7).unwrap(), Distance::Exact(3));
        assert!(!s.is_degenerate(3));
    }

    #[test]
    fn two_bit_css_state() {
        let rep = repetition_code(2).unwrap();
        let c = css_code(&rep, &rep).unwrap();
        assert_eq!((c.n(), c.k()), (2, 0));
        let texts: Vec<String> = c.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(texts, vec!["ZZ", "XX"]);
    }

    #[test]
    fn css_without_checks() {
        let c = css_code(&ClassicalLinearCode::trivial(4), &ClassicalLinearCode::trivial(4)).unwrap();
        assert_eq!((c.n(), c.k()), (4, 4));
        assert!(c.generators().is_empty());
    }

    #[test]
    fn css_condition_violation_names_rows() {
        let a = ClassicalLinearCode::new(BitMatrix::from_bit_strs(&["110", "100"]).unwrap());
        let b = ClassicalLinearCode::new(BitMatrix::from_bit_strs(&["011"]).unwrap());
        assert_eq!(
            css_code(&a, &b).unwrap_err(),
            Error::CssCondition { h1_row: 0, h2_row: 0 }
        );
    }

    #[test]
    fn dependent_rows_are_dropped() {
        let h =
            ClassicalLinearCode::new(BitMatrix::from_bit_strs(&["0001111", "0110011", "1010101", "1011010"]).unwrap());
        let c = css_code(&h, &hamming_code()).unwrap();
        assert_eq!(c.k(), 1);
    }

    #[test]
    fn steane_logical_basis_cosets() {
        let b = encoded_css_basis_description(&steane_code()).unwrap();
        assert_eq!(b.zero.len(), 8);
        assert!(b.zero.iter().all(|v| v.count_ones() % 2 == 0));
        assert!(b.one.iter().all(|v| v.count_ones() % 2 == 1));
        assert!(b.zero.contains(&BitVec::zeros(7)));
        assert!(b.zero.contains(&BitVec::from_bit_str("1100110").unwrap()));
        assert!(b.one.contains(&BitVec::ones(7)));
        let rep = repetition_code(2).unwrap();
        assert!(encoded_css_basis_description(&css_code(&rep, &rep).unwrap()).is_err());
        assert!(encoded_css_basis_description(&five_qubit_code()).is_err());
    }

    #[test]
    fn shor_code_is_degenerate() {
        let s = shor_code();
        assert_eq!((s.n(), s.k()), (9, 1));
        assert_eq!(s.distance(3).unwrap(), Distance::Exact(3));
        assert!(s.is_degenerate(3));
    }

    #[test]
    fn concatenation_sizes() {
        let f = five_qubit_code();
        let ff = concatenate(&f, &f).unwrap();
        assert_eq!((ff.n(), ff.k(), ff.num_generators()), (25, 1, 24));
        let s = steane_code();
        let ss = concatenate(&s, &s).unwrap();
        assert_eq!((ss.n(), ss.k()), (49, 1));
        for b in 0..7 {
            for g in s.generators() {
                assert!(ss.in_stabilizer(&g.embed(49, 7 * b)).unwrap());
            }
        }
        assert!(concatenate(
            &f,
            &css_code(&ClassicalLinearCode::trivial(2), &ClassicalLinearCode::trivial(2)).unwrap()
        )
        .is_err());
    }
}
