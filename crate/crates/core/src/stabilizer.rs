//! Stabilizer codes: validation, logical operators, syndromes, distance.

use std::fmt;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, EchelonBasis};
use crate::pauli::{for_each_of_weight, PauliOperator};

/// Bit `i` is set iff the error anticommutes with generator `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome(pub BitVec);

impl Syndrome {
    pub fn zeros(len: usize) -> Self {
        Syndrome(BitVec::zeros(len))
    }

    pub fn bits(&self) -> &BitVec {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_zero()
    }

    pub fn xor(&self, other: &Syndrome) -> Syndrome {
        Syndrome(self.0.xor(&other.0))
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Syndrome({})", self.0)
    }
}

/// Outcome of a capped exhaustive distance search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    Exact(usize),
    ExceedsCap(usize),
}

impl Distance {
    pub fn exact(self) -> Option<usize> {
        match self {
            Distance::Exact(d) => Some(d),
            Distance::ExceedsCap(_) => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(d) => write!(f, "{d}"),
            Distance::ExceedsCap(cap) => write!(f, "exceeds cap {cap}"),
        }
    }
}

/// A validated stabilizer code `[[n, k]]`.
///
/// Generators pairwise commute, are independent and carry phase exponent 0.
/// Logical operators come in `k` pairs with `logical_x[i]` anticommuting only
/// with `logical_z[i]`.
#[derive(Clone, Debug)]
pub struct StabilizerCode {
    n: usize,
    generators: Vec<PauliOperator>,
    logical_x: Vec<PauliOperator>,
    logical_z: Vec<PauliOperator>,
    known_distance: Option<usize>,
    basis: EchelonBasis,
}

impl StabilizerCode {
    /// Validates a nonempty generator list.
    pub fn validate(generators: Vec<PauliOperator>) -> Result<StabilizerCode> {
        let n = generators.first().ok_or(Error::Empty)?.n();
        StabilizerCode::new(n, generators)
    }

    /// Like [`StabilizerCode::validate`] but admits an empty list, which
    /// gives the trivial `[[n, n]]` code.
    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Result<StabilizerCode> {
        if n == 0 {
            return Err(Error::Domain("code must act on at least one qubit".into()));
        }
        for g in &generators {
            if g.n() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: g.n(),
                });
            }
        }
        for (i, g) in generators.iter().enumerate() {
            if g.phase_exponent() != 0 {
                return Err(Error::PhasedGenerator { index: i });
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if generators[i].anticommutes_with(&generators[j]) {
                    return Err(Error::NonCommuting { first: i, second: j });
                }
            }
        }
        let mut basis = EchelonBasis::new(2 * n, generators.len().max(1));
        for g in &generators {
            if let Err(comb) = basis.insert(&g.symplectic()) {
                return Err(Error::Dependent {
                    combination: comb.iter_ones().collect(),
                });
            }
        }
        let is_css = generators.iter().all(|g| g.x_bits().is_zero() || g.z_bits().is_zero());
        let (logical_x, logical_z) = if is_css {
            css_logicals(n, &generators)
        } else {
            symplectic_logicals(n, &generators)
        };
        debug_assert_eq!(logical_x.len(), n - generators.len());
        Ok(StabilizerCode {
            n,
            generators,
            logical_x,
            logical_z,
            known_distance: None,
            basis,
        })
    }

    pub fn with_known_distance(mut self, d: usize) -> Self {
        self.known_distance = Some(d);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.n - self.generators.len()
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn logical_x(&self) -> &[PauliOperator] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliOperator] {
        &self.logical_z
    }

    pub fn known_distance(&self) -> Option<usize> {
        self.known_distance
    }

    /// True when every generator is purely X-type or purely Z-type.
    pub fn is_css(&self) -> bool {
        self.generators
            .iter()
            .all(|g| g.x_bits().is_zero() || g.z_bits().is_zero())
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

    pub fn syndrome(&self, e: &PauliOperator) -> Result<Syndrome> {
        self.check_dim(e)?;
        Ok(self.syndrome_unchecked(e))
    }

    pub(crate) fn syndrome_unchecked(&self, e: &PauliOperator) -> Syndrome {
        let mut s = BitVec::zeros(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            if e.anticommutes_with(g) {
                s.set(i, true);
            }
        }
        Syndrome(s)
    }

    pub fn in_normalizer(&self, p: &PauliOperator) -> Result<bool> {
        self.check_dim(p)?;
        Ok(self.generators.iter().all(|g| !p.anticommutes_with(g)))
    }

    /// Membership in the stabilizer group up to sign.
    pub fn in_stabilizer(&self, p: &PauliOperator) -> Result<bool> {
        Ok(self.in_normalizer(p)? && self.basis.contains(&p.symplectic()))
    }

    /// If `±p` or `±ip` is in the stabilizer group, the product of generators
    /// equal to it up to phase, together with the phase exponent `δ` such that
    /// `p = i^δ · product`. `δ = 0` means `p` itself is a stabilizer element.
    pub fn stabilizer_decomposition(&self, p: &PauliOperator) -> Result<Option<(Vec<usize>, u8)>> {
        self.check_dim(p)?;
        let (res, comb) = self.basis.reduce(&p.symplectic());
        if !res.is_zero() {
            return Ok(None);
        }
        let idx: Vec<usize> = comb.iter_ones().collect();
        let prod = self.product_of(&idx);
        let delta = (4 + p.phase_exponent() - prod.phase_exponent()) & 3;
        Ok(Some((idx, delta)))
    }

    /// Product of the listed generators in increasing index order.
    pub fn product_of(&self, indices: &[usize]) -> PauliOperator {
        let mut prod = PauliOperator::identity(self.n);
        for &i in indices {
            prod.mul_assign_right(&self.generators[i]);
        }
        prod
    }

    /// Some Pauli with the given syndrome (a "pure error").
    pub fn pure_error(&self, s: &Syndrome) -> Result<PauliOperator> {
        if s.len() != self.generators.len() {
            return Err(Error::Dimension {
                expected: self.generators.len(),
                found: s.len(),
            });
        }
        // rows z||x so that row · (x||z) is the symplectic product
        let m = BitMatrix::from_rows(
            self.generators.iter().map(|g| g.symplectic_dual()).collect(),
            2 * self.n,
        );
        let v = m
            .solve(s.bits())
            .ok_or_else(|| Error::Internal("independent generators admit every syndrome".into()))?;
        Ok(PauliOperator::from_symplectic(&v))
    }

    /// Exhaustive search for the smallest weight of a normalizer element outside
    /// the stabilizer, trying weights `1..=weight_cap`. For `k = 0` codes the
    /// smallest nontrivial stabilizer weight is returned instead.
    pub fn distance(&self, weight_cap: usize) -> Result<Distance> {
        if weight_cap == 0 {
            return Err(Error::Domain("weight cap must be at least 1".into()));
        }
        let k0 = self.k() == 0;
        for w in 1..=weight_cap.min(self.n) {
            let mut found = false;
            for_each_of_weight(self.n, w, |p| {
                let hit = if k0 {
                    self.basis.contains(&p.symplectic())
                } else {
                    self.generators.iter().all(|g| !p.anticommutes_with(g)) && !self.basis.contains(&p.symplectic())
                };
                found = hit;
                !hit
            });
            if found {
                return Ok(Distance::Exact(w));
            }
        }
        Ok(Distance::ExceedsCap(weight_cap))
    }

    /// Minimum-weight nontrivial logical operator, if one has weight `<= weight_cap`.
    pub fn min_weight_logical(&self, weight_cap: usize) -> Option<PauliOperator> {
        if self.k() == 0 {
            return None;
        }
        for w in 1..=weight_cap.min(self.n) {
            let mut found = None;
            for_each_of_weight(self.n, w, |p| {
                if self.generators.iter().all(|g| !p.anticommutes_with(g)) && !self.basis.contains(&p.symplectic()) {
                    found = Some(p.clone());
                    false
                } else {
                    true
                }
            });
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// True iff some nontrivial stabilizer element has weight below `d`.
    pub fn is_degenerate(&self, d: usize) -> bool {
        for w in 1..d.min(self.n + 1) {
            let mut found = false;
            for_each_of_weight(self.n, w, |p| {
                found = self.basis.contains(&p.symplectic());
                !found
            });
            if found {
                return true;
            }
        }
        false
    }

    /// Checks that every Pauli of weight `1..d` is either a stabilizer
    /// element or has a nonzero syndrome.
    pub fn verify_detection(&self, d: usize) -> bool {
        for w in 1..d.min(self.n + 1) {
            let complete = for_each_of_weight(self.n, w, |p| {
                self.generators.iter().any(|g| p.anticommutes_with(g)) || self.basis.contains(&p.symplectic())
            });
            if !complete {
                return false;
            }
        }
        true
    }

    /// Correction supported on `erased` whose syndrome is `s`.
    pub fn decode_erasure(&self, erased: &[usize], s: &Syndrome) -> Result<PauliOperator> {
        if s.len() != self.generators.len() {
            return Err(Error::Dimension {
                expected: self.generators.len(),
                found: s.len(),
            });
        }
        if let Some(&q) = erased.iter().find(|&&q| q >= self.n) {
            return Err(Error::Index { index: q, n: self.n });
        }
        let m = erased.len();
        // unknowns: x bits then z bits on the erased positions
        let mut a = BitMatrix::zeros(self.generators.len(), 2 * m);
        for (i, g) in self.generators.iter().enumerate() {
            for (j, &q) in erased.iter().enumerate() {
                a.set(i, j, g.z_bits().get(q));
                a.set(i, m + j, g.x_bits().get(q));
            }
        }
        let sol = a.solve(s.bits()).ok_or(Error::InfeasibleErasure)?;
        let mut p = PauliOperator::identity(self.n);
        for (j, &q) in erased.iter().enumerate() {
            p.set_letter(q, crate::pauli::Letter::from_bits(sol.get(j), sol.get(m + j)));
        }
        Ok(p)
    }

    /// Coordinates of `p`'s logical class: `(a, b)` with `a[i]` the X̄ᵢ
    /// exponent and `b[i]` the Z̄ᵢ exponent. Only meaningful for normalizer elements.
    pub fn logical_coordinates(&self, p: &PauliOperator) -> (BitVec, BitVec) {
        let k = self.k();
        let mut a = BitVec::zeros(k);
        let mut b = BitVec::zeros(k);
        for i in 0..k {
            if p.anticommutes_with(&self.logical_z[i]) {
                a.set(i, true);
            }
            if p.anticommutes_with(&self.logical_x[i]) {
                b.set(i, true);
            }
        }
        (a, b)
    }

    /// Hermitian canonical logical operator `∏ᵢ L̄ᵢ` where `L̄ᵢ` is `X̄ᵢ`, `Z̄ᵢ`
    /// or `Ȳᵢ = i X̄ᵢ Z̄ᵢ` according to the coordinates.
    pub fn logical_operator(&self, a: &BitVec, b: &BitVec) -> PauliOperator {
        let mut out = PauliOperator::identity(self.n);
        for i in 0..self.k() {
            match (a.get(i), b.get(i)) {
                (false, false) => {}
                (true, false) => out.mul_assign_right(&self.logical_x[i]),
                (false, true) => out.mul_assign_right(&self.logical_z[i]),
                (true, true) => {
                    let mut y = self.logical_x[i].multiply(&self.logical_z[i]).unwrap();
                    y.add_phase(1);
                    out.mul_assign_right(&y);
                }
            }
        }
        out
    }

    /// The `2n`-qubit code made of two independent blocks of this code.
    pub fn two_blocks(&self) -> StabilizerCode {
        let n2 = 2 * self.n;
        let mut gens: Vec<PauliOperator> = self.generators.iter().map(|g| g.embed(n2, 0)).collect();
        gens.extend(self.generators.iter().map(|g| g.embed(n2, self.n)));
        let mut code = StabilizerCode::new(n2, gens).expect("two blocks of a valid code are valid");
        let k = self.k();
        code.logical_x = (0..k)
            .map(|i| self.logical_x[i].embed(n2, 0))
            .chain((0..k).map(|i| self.logical_x[i].embed(n2, self.n)))
            .collect();
        code.logical_z = (0..k)
            .map(|i| self.logical_z[i].embed(n2, 0))
            .chain((0..k).map(|i| self.logical_z[i].embed(n2, self.n)))
            .collect();
        code
    }
}

/// Pairs up `k` X-type and `k` Z-type logical operators of a CSS code.
fn css_logicals(n: usize, generators: &[PauliOperator]) -> (Vec<PauliOperator>, Vec<PauliOperator>) {
    let x_rows: Vec<BitVec> = generators
        .iter()
        .filter(|g| g.z_bits().is_zero() && !g.x_bits().is_zero())
        .map(|g| g.x_bits().clone())
        .collect();
    let z_rows: Vec<BitVec> = generators
        .iter()
        .filter(|g| g.x_bits().is_zero())
        .map(|g| g.z_bits().clone())
        .collect();
    let complement = |commute_with: &[BitVec], modulo: &[BitVec]| -> Vec<BitVec> {
        let kernel = BitMatrix::from_rows(commute_with.to_vec(), n).kernel();
        let mut basis = EchelonBasis::new(n, modulo.len() + kernel.len());
        for r in modulo {
            basis.insert(r).expect("generators are independent");
        }
        kernel.into_iter().filter(|v| basis.insert(v).is_ok()).collect()
    };
    let mut xs = complement(&z_rows, &x_rows);
    let mut zs = complement(&x_rows, &z_rows);
    debug_assert_eq!(xs.len(), zs.len());
    let k = xs.len();
    for i in 0..k {
        let j = (i..k)
            .find(|&j| xs[i].dot(&zs[j]))
            .expect("logical pairing is nondegenerate");
        zs.swap(i, j);
        for l in 0..k {
            if l != i && xs[l].dot(&zs[i]) {
                let xi = xs[i].clone();
                xs[l].xor_assign(&xi);
            }
        }
        for j in 0..k {
            if j != i && xs[i].dot(&zs[j]) {
                let zi = zs[i].clone();
                zs[j].xor_assign(&zi);
            }
        }
    }
    let lx = xs
        .into_iter()
        .map(|v| PauliOperator::from_bits(v, BitVec::zeros(n), 0))
        .collect();
    let lz = zs
        .into_iter()
        .map(|v| PauliOperator::from_bits(BitVec::zeros(n), v, 0))
        .collect();
    (lx, lz)
}

/// Symplectic Gram–Schmidt over a basis of the normalizer.
fn symplectic_logicals(n: usize, generators: &[PauliOperator]) -> (Vec<PauliOperator>, Vec<PauliOperator>) {
    let m = BitMatrix::from_rows(generators.iter().map(|g| g.symplectic_dual()).collect(), 2 * n);
    let mut pool: Vec<PauliOperator> = m.kernel().iter().map(PauliOperator::from_symplectic).collect();
    pool.reverse();
    let mut lx = Vec::new();
    let mut lz = Vec::new();
    while let Some(a) = pool.pop() {
        let Some(j) = pool.iter().rposition(|c| a.anticommutes_with(c)) else {
            // commutes with the whole normalizer, so it lies in the stabilizer
            continue;
        };
        let b = pool.remove(j);
        for c in pool.iter_mut() {
            let with_b = c.anticommutes_with(&b);
            let with_a = c.anticommutes_with(&a);
            if with_b {
                c.mul_assign_right(&a);
            }
            if with_a {
                c.mul_assign_right(&b);
            }
            c.set_phase(0);
        }
        lx.push(a.unsigned());
        lz.push(b.unsigned());
    }
    (lx, lz)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paulis(list: &[&str]) -> Vec<PauliOperator> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn five() -> StabilizerCode {
        StabilizerCode::validate(paulis(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"])).unwrap()
    }

    fn check_logical_pairs(code: &StabilizerCode) {
        let k = code.k();
        assert_eq!(code.logical_x().len(), k);
        for i in 0..k {
            for g in code.generators() {
                assert!(!code.logical_x()[i].anticommutes_with(g));
                assert!(!code.logical_z()[i].anticommutes_with(g));
            }
            for j in 0..k {
                assert_eq!(code.logical_x()[i].anticommutes_with(&code.logical_z()[j]), i == j);
                assert!(!code.logical_x()[i].anticommutes_with(&code.logical_x()[j]));
                assert!(!code.logical_z()[i].anticommutes_with(&code.logical_z()[j]));
            }
            assert!(!code.in_stabilizer(&code.logical_x()[i]).unwrap());
        }
    }

    #[test]
    fn five_qubit_code_validates() {
        let c = five();
        assert_eq!((c.n(), c.k()), (5, 1));
        check_logical_pairs(&c);
    }

    #[test]
    fn single_z_is_a_state() {
        let c = StabilizerCode::validate(paulis(&["Z"])).unwrap();
        assert_eq!(c.k(), 0);
        assert_eq!(c.distance(1).unwrap(), Distance::Exact(1));
    }

    #[test]
    fn xx_yy_is_valid_two_qubit_state() {
        let c = StabilizerCode::validate(paulis(&["XX", "YY"])).unwrap();
        assert_eq!((c.n(), c.k()), (2, 0));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            StabilizerCode::validate(paulis(&["XI", "ZI"])),
            Err(Error::NonCommuting { first: 0, second: 1 })
        ));
        assert!(matches!(
            StabilizerCode::validate(paulis(&["ZZI", "IZZ", "ZIZ"])),
            Err(Error::Dependent { combination }) if combination == vec![0, 1, 2]
        ));
        assert!(matches!(
            StabilizerCode::validate(paulis(&["ZZ", "-XX"])),
            Err(Error::PhasedGenerator { index: 1 })
        ));
        assert!(matches!(
            StabilizerCode::validate(paulis(&["ZZ", "X"])),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(StabilizerCode::validate(vec![]), Err(Error::Empty)));
    }

    #[test]
    fn syndromes_of_five_qubit_code() {
        let c = five();
        let id = PauliOperator::identity(5);
        assert!(c.syndrome(&id).unwrap().is_trivial());
        for g in c.generators() {
            assert!(c.syndrome(g).unwrap().is_trivial());
        }
        // X0 against XZZXI, IXZZX, XIXZZ, ZXIXZ: only the last has Z on qubit 0
        let x0: PauliOperator = "XIIII".parse().unwrap();
        assert_eq!(c.syndrome(&x0).unwrap().to_string(), "0001");
        assert!(!c.in_normalizer(&x0).unwrap());
    }

    #[test]
    fn membership() {
        let c = five();
        for g in c.generators() {
            assert!(c.in_stabilizer(g).unwrap());
        }
        let lx = &c.logical_x()[0];
        assert!(c.in_normalizer(lx).unwrap());
        assert!(!c.in_stabilizer(lx).unwrap());
        let prod = c.generators()[0].multiply(&c.generators()[2]).unwrap();
        let (idx, delta) = c.stabilizer_decomposition(&prod).unwrap().unwrap();
        assert_eq!(idx, vec![0, 2]);
        assert_eq!(delta, 0);
        let neg = prod.clone().with_phase(prod.phase_exponent() + 2);
        assert_eq!(c.stabilizer_decomposition(&neg).unwrap().unwrap().1, 2);
    }

    #[test]
    fn five_qubit_distance_and_detection() {
        let c = five();
        assert_eq!(c.distance(5).unwrap(), Distance::Exact(3));
        assert_eq!(c.distance(2).unwrap(), Distance::ExceedsCap(2));
        assert!(!c.is_degenerate(3));
        assert!(c.verify_detection(3));
        assert!(!c.verify_detection(4));
        assert!(c.distance(0).is_err());
    }

    #[test]
    fn erasure_decoding() {
        let c = five();
        let none = c.decode_erasure(&[], &Syndrome::zeros(4)).unwrap();
        assert!(none.is_identity_up_to_phase());

        let e: PauliOperator = "XZIII".parse().unwrap();
        let s = c.syndrome(&e).unwrap();
        let r = c.decode_erasure(&[0, 1], &s).unwrap();
        assert!(c.in_stabilizer(&r.multiply(&e).unwrap()).unwrap());
        // three erasures of a distance-3 code cannot always be resolved,
        // but a syndrome outside the reachable set on one qubit must fail
        let y4: PauliOperator = "IIIIY".parse().unwrap();
        let s4 = c.syndrome(&y4).unwrap();
        assert!(matches!(c.decode_erasure(&[0], &s4), Err(Error::InfeasibleErasure)));
    }

    #[test]
    fn pure_error_has_requested_syndrome() {
        let c = five();
        for v in 0..16u64 {
            let s = Syndrome(BitVec::from_u64(v, 4));
            let e = c.pure_error(&s).unwrap();
            assert_eq!(c.syndrome(&e).unwrap(), s);
        }
    }

    #[test]
    fn logical_coordinates_roundtrip() {
        let c = five();
        for (a, b) in [(1u64, 0u64), (0, 1), (1, 1)] {
            let (av, bv) = (BitVec::from_u64(a, 1), BitVec::from_u64(b, 1));
            let l = c.logical_operator(&av, &bv);
            assert!(l.is_hermitian());
            assert_eq!(c.logical_coordinates(&l), (av, bv));
        }
    }
}
