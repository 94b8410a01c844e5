//! Lookup-table syndrome decoding.

use std::collections::HashMap;

use crate::pauli::{for_each_of_weight, PauliOperator};
use crate::stabilizer::{StabilizerCode, Syndrome};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub correction: PauliOperator,
    /// Set when the syndrome is not reachable by an error of weight
    /// `<= covered_weight` and the correction came from extended search.
    pub best_effort: bool,
}

#[derive(Clone, Debug)]
struct Entry {
    correction: PauliOperator,
    best_effort: bool,
}

/// Map from syndrome to a minimum-weight correction. Ties are broken by the
/// lexicographic order of the letter strings, so tables are deterministic.
#[derive(Clone, Debug)]
pub struct DecoderTable {
    code: StabilizerCode,
    covered_weight: usize,
    entries: HashMap<Syndrome, Entry>,
}

/// All weight-`w` Paulis on `n` qubits in lexicographic letter order.
fn sorted_of_weight(n: usize, w: usize) -> Vec<PauliOperator> {
    let mut all = Vec::new();
    for_each_of_weight(n, w, |p| {
        all.push(p.clone());
        true
    });
    all.sort_by(|a, b| a.cmp_letters(b));
    all
}

// Above this many candidates per weight, extended search falls back to a
// linear-algebra solve instead of enumeration.
const ENUMERATION_BUDGET: usize = 2_000_000;

fn count_of_weight(n: usize, w: usize) -> usize {
    let mut c: usize = 1;
    for i in 0..w {
        c = c.saturating_mul(n - i) / (i + 1);
    }
    c.saturating_mul(3usize.saturating_pow(w as u32))
}

impl DecoderTable {
    /// Table covering every syndrome of an error of weight `<= t`.
    pub fn build(code: &StabilizerCode, t: usize) -> DecoderTable {
        let mut entries = HashMap::new();
        for w in 0..=t.min(code.n()) {
            for p in sorted_of_weight(code.n(), w) {
                let s = code.syndrome_unchecked(&p);
                entries.entry(s).or_insert(Entry {
                    correction: p,
                    best_effort: false,
                });
            }
        }
        DecoderTable {
            code: code.clone(),
            covered_weight: t,
            entries,
        }
    }

    /// Fills every remaining syndrome with a flagged minimum-weight entry.
    /// Only practical for a modest number of generators.
    pub fn complete(mut self) -> DecoderTable {
        let r = self.code.num_generators();
        assert!(r <= 24, "too many syndromes to tabulate");
        let total = 1usize << r;
        let mut w = self.covered_weight + 1;
        while self.entries.len() < total && w <= self.code.n() {
            for p in sorted_of_weight(self.code.n(), w) {
                let s = self.code.syndrome_unchecked(&p);
                self.entries.entry(s).or_insert(Entry {
                    correction: p,
                    best_effort: true,
                });
            }
            w += 1;
        }
        self
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    pub fn covered_weight(&self) -> usize {
        self.covered_weight
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries sorted by syndrome.
    pub fn entries(&self) -> Vec<(Syndrome, PauliOperator, bool)> {
        let mut v: Vec<_> = self
            .entries
            .iter()
            .map(|(s, e)| (s.clone(), e.correction.clone(), e.best_effort))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn lookup(&self, s: &Syndrome) -> Option<&PauliOperator> {
        self.entries.get(s).map(|e| &e.correction)
    }

    pub fn decode(&self, s: &Syndrome) -> Decoded {
        if let Some(e) = self.entries.get(s) {
            return Decoded {
                correction: e.correction.clone(),
                best_effort: e.best_effort,
            };
        }
        Decoded {
            correction: self.extended_search(s),
            best_effort: true,
        }
    }

    fn extended_search(&self, s: &Syndrome) -> PauliOperator {
        let n = self.code.n();
        for w in self.covered_weight + 1..=n {
            if count_of_weight(n, w) > ENUMERATION_BUDGET {
                break;
            }
            let mut best: Option<PauliOperator> = None;
            for_each_of_weight(n, w, |p| {
                if &self.code.syndrome_unchecked(p) == s && best.as_ref().is_none_or(|b| p.cmp_letters(b).is_lt()) {
                    best = Some(p.clone());
                }
                true
            });
            if let Some(b) = best {
                return b;
            }
        }
        self.code.pure_error(s).expect("syndrome length matches the code")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Letter;

    fn five() -> StabilizerCode {
        StabilizerCode::validate(
            ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
                .iter()
                .map(|s| s.parse().unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn five_qubit_table_is_perfect() {
        let t = DecoderTable::build(&five(), 1);
        assert_eq!(t.len(), 16);
        assert!(t.entries().iter().all(|(_, _, flagged)| !flagged));
        let zero = t.decode(&Syndrome::zeros(4));
        assert!(zero.correction.is_identity_up_to_phase());
        assert!(!zero.best_effort);
    }

    #[test]
    fn corrects_every_single_qubit_error() {
        let code = five();
        let t = DecoderTable::build(&code, 1);
        for q in 0..5 {
            for l in Letter::NONTRIVIAL {
                let e = PauliOperator::single(5, q, l);
                let r = t.decode(&code.syndrome(&e).unwrap()).correction;
                assert!(code.in_stabilizer(&r.multiply(&e).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn ties_break_lexicographically() {
        // repetition code: X0 and X1X2 share nothing, but X1 and X2 alone differ
        let code = StabilizerCode::validate(vec!["ZZI".parse().unwrap()]).unwrap();
        let t = DecoderTable::build(&code, 1);
        // syndrome 1 is produced by X0, Y0, X1, Y1; lexicographically "IXI" < "IYI" < "XII"
        let s = Syndrome(crate::bits::BitVec::from_u64(1, 1));
        assert_eq!(t.decode(&s).correction.to_string(), "IXI");
    }

    #[test]
    fn unknown_syndrome_is_flagged() {
        let code = five();
        let t = DecoderTable::build(&code, 0);
        let e: PauliOperator = "IIXII".parse().unwrap();
        let d = t.decode(&code.syndrome(&e).unwrap());
        assert!(d.best_effort);
        assert_eq!(d.correction, e);
    }
}
