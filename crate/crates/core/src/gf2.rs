//! Dense linear algebra over GF(2).

use crate::bits::BitVec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        BitMatrix { cols, rows: Vec::new() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    /// Panics if any row length differs from `cols`.
    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        BitMatrix { cols, rows }
    }

    pub fn from_bit_strs(rows: &[&str]) -> Option<Self> {
        let parsed: Option<Vec<BitVec>> = rows.iter().map(|r| BitVec::from_bit_str(r)).collect();
        let parsed = parsed?;
        let cols = parsed.first().map_or(0, |r| r.len());
        if parsed.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(BitMatrix { cols, rows: parsed })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// `self · v` where `v` has `ncols` bits.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// `self · otherᵀ`, the matrix of pairwise row dot products.
    pub fn mul_transpose(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = BitMatrix::zeros(self.nrows(), other.nrows());
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in other.rows.iter().enumerate() {
                if a.dot(b) {
                    out.rows[i].set(j, true);
                }
            }
        }
        out
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.len() {
                break;
            }
            let Some(p) = (r..m.len()).find(|&i| m[i].get(c)) else {
                continue;
            };
            m.swap(r, p);
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        (
            BitMatrix {
                cols: self.cols,
                rows: m,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self · v = 0}`.
    pub fn kernel(&self) -> Vec<BitVec> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::zeros(self.cols);
            v.set(free, true);
            for (row, &p) in r.rows.iter().zip(&pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `self · x = b`, if one exists.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.nrows());
        let aug: Vec<BitVec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| row.concat(&BitVec::from_bools(&[b.get(i)])))
            .collect();
        let (r, pivots) = BitMatrix::from_rows(aug, self.cols + 1).rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (row, &p) in r.rows.iter().zip(&pivots) {
            if row.get(self.cols) {
                x.set(p, true);
            }
        }
        Some(x)
    }
}

/// Incrementally built echelon basis that remembers, for every stored row,
/// which of the inserted vectors it is a combination of.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    width: usize,
    capacity: usize,
    inserted: usize,
    rows: Vec<(BitVec, BitVec, usize)>,
}

impl EchelonBasis {
    /// `capacity` bounds the number of vectors that may be inserted.
    pub fn new(width: usize, capacity: usize) -> Self {
        EchelonBasis {
            width,
            capacity,
            inserted: 0,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis. Returns the residual and the set of
    /// inserted vectors whose sum was subtracted.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut res = v.clone();
        let mut comb = BitVec::zeros(self.capacity);
        for (row, rc, pivot) in &self.rows {
            if res.get(*pivot) {
                res.xor_assign(row);
                comb.xor_assign(rc);
            }
        }
        (res, comb)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts `v` as input number `self.inserted`. On linear dependence
    /// returns the set of inputs (including this one) summing to zero.
    pub fn insert(&mut self, v: &BitVec) -> Result<(), BitVec> {
        assert_eq!(v.len(), self.width);
        assert!(self.inserted < self.capacity, "echelon basis capacity exceeded");
        let idx = self.inserted;
        self.inserted += 1;
        let (res, mut comb) = self.reduce(v);
        comb.flip(idx);
        match res.first_one() {
            None => Err(comb),
            Some(pivot) => {
                // keep earlier rows free of the new pivot so reduce() is a single pass
                for (row, rc, _) in self.rows.iter_mut() {
                    if row.get(pivot) {
                        row.xor_assign(&res);
                        rc.xor_assign(&comb);
                    }
                }
                self.rows.push((res, comb, pivot));
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming() -> BitMatrix {
        BitMatrix::from_bit_strs(&["0001111", "0110011", "1010101"]).unwrap()
    }

    #[test]
    fn hamming_kernel_has_sixteen_codewords() {
        let h = hamming();
        assert_eq!(h.rank(), 3);
        let k = h.kernel();
        assert_eq!(k.len(), 4);
        for v in &k {
            assert!(h.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn solve_finds_preimage_or_none() {
        let h = hamming();
        let b = BitVec::from_bit_str("101").unwrap();
        let x = h.solve(&b).unwrap();
        assert_eq!(h.mul_vec(&x), b);

        let singular = BitMatrix::from_bit_strs(&["11", "11"]).unwrap();
        assert!(singular.solve(&BitVec::from_bit_str("10").unwrap()).is_none());
    }

    #[test]
    fn echelon_reports_dependency() {
        let mut e = EchelonBasis::new(4, 3);
        e.insert(&BitVec::from_bit_str("1100").unwrap()).unwrap();
        e.insert(&BitVec::from_bit_str("0110").unwrap()).unwrap();
        let dep = e.insert(&BitVec::from_bit_str("1010").unwrap()).unwrap_err();
        assert_eq!(dep.to_bit_string(), "111");
    }

    #[test]
    fn reduce_tracks_combination() {
        let mut e = EchelonBasis::new(3, 2);
        e.insert(&BitVec::from_bit_str("110").unwrap()).unwrap();
        e.insert(&BitVec::from_bit_str("011").unwrap()).unwrap();
        let (res, comb) = e.reduce(&BitVec::from_bit_str("101").unwrap());
        assert!(res.is_zero());
        assert_eq!(comb.to_bit_string(), "11");
    }
}
