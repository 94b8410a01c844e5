//! Fault-tolerant gadget circuits and symbolic transversality checks.

use std::collections::BTreeMap;
use std::fmt;

use crate::bits::BitVec;
use crate::circuit::{Basis, Circuit, CircuitBuilder, Gate1, Gate2, LookupTable, Op, RegisterKind};
use crate::decoder::DecoderTable;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::pauli::{Letter, PauliOperator};
use crate::stabilizer::StabilizerCode;

/// Attempts allowed for a cat state before the gadget gives up.
pub const CAT_MAX_ATTEMPTS: usize = 10;

/// `n` parallel CNOTs, qubit `i` of block A controlling qubit `i` of block B.
pub fn transversal_cnot(a: &StabilizerCode, b: &StabilizerCode) -> Result<Circuit> {
    if a.n() != b.n() {
        return Err(Error::Dimension {
            expected: a.n(),
            found: b.n(),
        });
    }
    let mut cb = CircuitBuilder::new();
    let qa = cb.add_register("a", RegisterKind::Data, a.n());
    let qb = cb.add_register("b", RegisterKind::Data, b.n());
    for (x, y) in qa.into_iter().zip(qb) {
        cb.gate2(Gate2::Cx, x, y);
    }
    cb.finish()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransversalGate {
    H,
    S,
    /// Qubit `i` of one block controlling qubit `i` of a second block.
    Cnot,
    /// A fixed Pauli operator on the block.
    Pauli(PauliOperator),
    /// The π/8 rotation; always rejected.
    T,
}

impl TransversalGate {
    fn apply(&self, p: &mut PauliOperator, n: usize) {
        match self {
            TransversalGate::H => (0..n).for_each(|q| p.conjugate_h(q)),
            TransversalGate::S => (0..n).for_each(|q| p.conjugate_s(q)),
            TransversalGate::Cnot => (0..n).for_each(|q| p.conjugate_cnot(q, n + q)),
            TransversalGate::Pauli(g) => p.conjugate_pauli(g),
            TransversalGate::T => unreachable!("rejected before conjugation"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    PreservesCode,
    BreaksCode,
}

/// Named logical gates recognized from their action on logical Paulis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogicalGate {
    Identity,
    /// A logical Pauli, given by the product it applies.
    Pauli(PauliOperator),
    Hadamard,
    S,
    SInverse,
    Cnot,
}

impl fmt::Display for LogicalGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogicalGate::Identity => write!(f, "identity"),
            LogicalGate::Pauli(p) => write!(f, "logical Pauli {p}"),
            LogicalGate::Hadamard => write!(f, "logical Hadamard"),
            LogicalGate::S => write!(f, "logical S"),
            LogicalGate::SInverse => write!(f, "logical S^-1"),
            LogicalGate::Cnot => write!(f, "logical CNOT"),
        }
    }
}

/// Images of the logical generators, each as a signed Pauli on the logical
/// qubits (logical qubit `j` is letter `j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalAction {
    pub verdict: Verdict,
    pub x_images: Vec<PauliOperator>,
    pub z_images: Vec<PauliOperator>,
    pub recognized: Option<LogicalGate>,
}

impl fmt::Display for LogicalAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.verdict {
            Verdict::BreaksCode => return write!(f, "breaks-code"),
            Verdict::PreservesCode => writeln!(f, "preserves-code")?,
        }
        let k = self.x_images.len();
        for (label, imgs) in [("X", &self.x_images), ("Z", &self.z_images)] {
            for (j, img) in imgs.iter().enumerate() {
                let src = PauliOperator::single(k, j, if label == "X" { Letter::X } else { Letter::Z });
                writeln!(f, "  {src} -> {img}")?;
            }
        }
        match &self.recognized {
            Some(g) => write!(f, "  action: {g}"),
            None => write!(f, "  action: unrecognized Clifford"),
        }
    }
}

/// Signed logical label of a normalizer element.
fn logical_label(code: &StabilizerCode, p: &PauliOperator) -> Result<PauliOperator> {
    let (a, b) = code.logical_coordinates(p);
    let canonical = code.logical_operator(&a, &b);
    let rest = p.multiply(&canonical)?;
    let (_, delta) = code
        .stabilizer_decomposition(&rest)?
        .ok_or_else(|| Error::Internal("image left the normalizer".into()))?;
    if delta & 1 == 1 {
        return Err(Error::Internal("non-Hermitian logical image".into()));
    }
    Ok(PauliOperator::from_bits(a, b, delta))
}

fn recognize(x_images: &[PauliOperator], z_images: &[PauliOperator]) -> Option<LogicalGate> {
    let k = x_images.len();
    let img = |v: &[PauliOperator], j: usize| v[j].to_string();
    if k == 1 {
        let (x, z) = (img(x_images, 0), img(z_images, 0));
        return match (x.as_str(), z.as_str()) {
            ("X", "Z") => Some(LogicalGate::Identity),
            ("X", "-Z") => Some(LogicalGate::Pauli("X".parse().ok()?)),
            ("-X", "Z") => Some(LogicalGate::Pauli("Z".parse().ok()?)),
            ("-X", "-Z") => Some(LogicalGate::Pauli("Y".parse().ok()?)),
            ("Z", "X") => Some(LogicalGate::Hadamard),
            ("Y", "Z") => Some(LogicalGate::S),
            ("-Y", "Z") => Some(LogicalGate::SInverse),
            _ => None,
        };
    }
    if k == 2 && [img(x_images, 0), img(x_images, 1), img(z_images, 0), img(z_images, 1)] == ["XX", "IX", "ZI", "ZZ"] {
        return Some(LogicalGate::Cnot);
    }
    let ident = (0..k).all(|j| {
        x_images[j] == PauliOperator::single(k, j, Letter::X) && z_images[j] == PauliOperator::single(k, j, Letter::Z)
    });
    ident.then_some(LogicalGate::Identity)
}

/// Conjugates the code by a transversal Clifford gate. For `Cnot` the code
/// is taken as two blocks with logical qubits ordered block A then block B.
pub fn check_transversal_clifford(code: &StabilizerCode, gate: &TransversalGate) -> Result<LogicalAction> {
    match gate {
        TransversalGate::T => {
            return Err(Error::Unsupported(
                "the pi/8 gate is not Clifford; use the injection gadget".into(),
            ))
        }
        TransversalGate::Pauli(p) if p.n() != code.n() => {
            return Err(Error::Dimension {
                expected: code.n(),
                found: p.n(),
            })
        }
        _ => {}
    }
    let target = if *gate == TransversalGate::Cnot {
        code.two_blocks()
    } else {
        code.clone()
    };
    let conj = |p: &PauliOperator| {
        let mut q = p.clone();
        gate.apply(&mut q, code.n());
        q
    };
    for g in target.generators() {
        match target.stabilizer_decomposition(&conj(g))? {
            Some((_, 0)) => {}
            _ => {
                return Ok(LogicalAction {
                    verdict: Verdict::BreaksCode,
                    x_images: vec![],
                    z_images: vec![],
                    recognized: None,
                })
            }
        }
    }
    let x_images = target
        .logical_x()
        .iter()
        .map(|l| logical_label(&target, &conj(l)))
        .collect::<Result<Vec<_>>>()?;
    let z_images = target
        .logical_z()
        .iter()
        .map(|l| logical_label(&target, &conj(l)))
        .collect::<Result<Vec<_>>>()?;
    let k = x_images.len();
    for i in 0..k {
        for j in 0..k {
            let expect = i == j;
            if x_images[i].anticommutes_with(&z_images[j]) != expect
                || (i != j && x_images[i].anticommutes_with(&x_images[j]))
                || (i != j && z_images[i].anticommutes_with(&z_images[j]))
            {
                return Err(Error::Internal("logical images break commutation".into()));
            }
        }
    }
    let recognized = recognize(&x_images, &z_images);
    Ok(LogicalAction {
        verdict: Verdict::PreservesCode,
        x_images,
        z_images,
        recognized,
    })
}

/// Deterministic verification pairs: adjacent `(0,1), (2,3), …` then shifted
/// `(1,2), (3,4), …`, truncated to `count`.
pub fn verification_pairs(cat_size: usize, count: usize) -> Vec<(usize, usize)> {
    let adjacent = (0..cat_size.saturating_sub(1)).step_by(2).map(|i| (i, i + 1));
    let shifted = (1..cat_size.saturating_sub(1)).step_by(2).map(|i| (i, i + 1));
    adjacent.chain(shifted).cycle().take(count).collect()
}

fn controlled(letter: Letter) -> Gate2 {
    match letter {
        Letter::X => Gate2::Cx,
        Letter::Y => Gate2::Cy,
        _ => Gate2::Cz,
    }
}

/// Emits a verified cat-state measurement of `m` (on the qubits `data`)
/// using the first `weight(m)` qubits of `cat`. Returns the parity wire.
pub fn emit_cat_measurement(
    b: &mut CircuitBuilder,
    data: &[usize],
    cat: &[usize],
    verify: Option<usize>,
    m: &PauliOperator,
    verify_rounds: usize,
) -> Result<usize> {
    let support: Vec<usize> = m.support().iter_ones().collect();
    let w = support.len();
    if w == 0 {
        return Err(Error::Domain("cannot measure the identity".into()));
    }
    if m.phase_exponent() != 0 {
        return Err(Error::Domain(format!("{m} must carry phase 0")));
    }
    if m.n() != data.len() || w > cat.len() {
        return Err(Error::Dimension {
            expected: data.len(),
            found: m.n(),
        });
    }
    let cat = &cat[..w];
    let start = b.barrier();
    for &c in cat {
        b.prep(c, Basis::Z);
    }
    b.gate1(Gate1::H, cat[0]);
    for j in 1..w {
        b.gate2(Gate2::Cx, cat[j - 1], cat[j]);
    }
    let pairs = verification_pairs(w, verify_rounds);
    if !pairs.is_empty() {
        let v = verify.ok_or_else(|| Error::Circuit("verification needs a verify qubit".into()))?;
        let mut flags = Vec::new();
        for (x, y) in pairs {
            b.prep(v, Basis::Z);
            b.gate2(Gate2::Cx, cat[x], v);
            b.gate2(Gate2::Cx, cat[y], v);
            flags.push(b.measure(v, Basis::Z));
        }
        b.push(Op::Retry {
            flags,
            restart: start,
            max_attempts: CAT_MAX_ATTEMPTS,
        });
    }
    for (j, &q) in support.iter().enumerate() {
        b.gate2(controlled(m.letter(q)), cat[j], data[q]);
    }
    let mut outs = Vec::with_capacity(w);
    for &c in cat {
        b.gate1(Gate1::H, c);
        outs.push(b.measure(c, Basis::Z));
    }
    Ok(b.parity(outs))
}

/// Cat-state measurement of `m` on a block of `code`. The parity of the
/// readout (`1` for eigenvalue `-1`) is the last classical wire.
pub fn cat_measurement_circuit(code: &StabilizerCode, m: &PauliOperator, verify_rounds: usize) -> Result<Circuit> {
    let mut b = CircuitBuilder::new();
    let data = b.add_register("data", RegisterKind::Data, code.n());
    let cat = b.add_register("cat", RegisterKind::Cat, m.weight());
    let verify = (verify_rounds > 0).then(|| b.add_register("verify", RegisterKind::Verify, 1)[0]);
    emit_cat_measurement(&mut b, &data, &cat, verify, m, verify_rounds)?;
    b.finish()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VoteRule {
    /// A syndrome vector seen in a strict majority of rounds, else trivial.
    WholeSyndrome,
    /// Majority of each syndrome bit separately.
    Bitwise,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShorOptions {
    pub repetitions: usize,
    /// Pair checks per cat state; `None` uses `weight - 1`.
    pub verify_rounds: Option<usize>,
    pub vote: VoteRule,
}

impl Default for ShorOptions {
    fn default() -> Self {
        ShorOptions {
            repetitions: 3,
            verify_rounds: None,
            vote: VoteRule::WholeSyndrome,
        }
    }
}

/// A complete syndrome table for `code` as carried by circuits.
pub fn code_lookup_table(code: &StabilizerCode) -> Result<LookupTable> {
    let r = code.num_generators();
    if r > 20 {
        return Err(Error::Capacity { qubits: r, limit: 20 });
    }
    let t = code.known_distance().map_or(1, |d| (d.max(1) - 1) / 2);
    let table = DecoderTable::build(code, t).complete();
    let entries: BTreeMap<BitVec, PauliOperator> = table.entries().into_iter().map(|(s, p, _)| (s.0, p)).collect();
    Ok(LookupTable {
        syndrome_len: r,
        entries,
    })
}

/// One round of Shor error correction with the default options.
pub fn shor_ec_round(code: &StabilizerCode, repetitions: usize) -> Result<Circuit> {
    shor_ec_round_with(
        code,
        &ShorOptions {
            repetitions,
            ..Default::default()
        },
    )
}

pub fn shor_ec_round_with(code: &StabilizerCode, opts: &ShorOptions) -> Result<Circuit> {
    if opts.repetitions == 0 || opts.repetitions.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "repetitions must be odd, got {}",
            opts.repetitions
        )));
    }
    if code.num_generators() == 0 {
        return Err(Error::Empty);
    }
    let wmax = code.generators().iter().map(|g| g.weight()).max().unwrap_or(0);
    let mut b = CircuitBuilder::new();
    let data = b.add_register("data", RegisterKind::Data, code.n());
    let cat = b.add_register("cat", RegisterKind::Cat, wmax);
    let rounds_needed = code
        .generators()
        .iter()
        .any(|g| opts.verify_rounds.unwrap_or(g.weight() - 1) > 0);
    let verify = rounds_needed.then(|| b.add_register("verify", RegisterKind::Verify, 1)[0]);
    let table = b.add_table(code_lookup_table(code)?);
    let mut rounds = Vec::with_capacity(opts.repetitions);
    for _ in 0..opts.repetitions {
        let mut bits = Vec::with_capacity(code.num_generators());
        for g in code.generators() {
            let vr = opts.verify_rounds.unwrap_or(g.weight() - 1);
            bits.push(emit_cat_measurement(&mut b, &data, &cat, verify, g, vr)?);
        }
        rounds.push(bits);
    }
    let syndrome = if opts.repetitions == 1 {
        rounds.pop().expect("one round")
    } else {
        let outs = b.new_bits(code.num_generators());
        b.push(Op::Vote {
            outs: outs.clone(),
            rounds,
            whole: opts.vote == VoteRule::WholeSyndrome,
        });
        outs
    };
    b.push(Op::Decode {
        table,
        syndrome,
        qubits: data,
    });
    b.finish()
}

/// π/8 gate by injection. Qubit 0 holds the input; the magic qubit 1 is
/// prepared as `T|+⟩` and carries the output.
pub fn pi8_injection_circuit() -> Result<Circuit> {
    let mut b = CircuitBuilder::new();
    let d = b.add_register("data", RegisterKind::Data, 1)[0];
    let a = b.add_register("magic", RegisterKind::Ancilla, 1)[0];
    b.prep(a, Basis::X);
    b.gate1(Gate1::T, a);
    b.mark_unverified(0..b.num_timesteps());
    b.barrier();
    b.gate2(Gate2::Cx, a, d);
    let c = b.measure(d, Basis::Z);
    b.push(Op::If {
        bit: c,
        gate: Gate1::X,
        q: a,
    });
    b.push(Op::If {
        bit: c,
        gate: Gate1::S,
        q: a,
    });
    b.finish()
}

/// Measures `e^{-iπ/4} S X` on the candidate state in qubit 1 using control
/// qubit 0; outcome `0` accepts.
pub fn pi8_ancilla_check_circuit() -> Result<Circuit> {
    let mut b = CircuitBuilder::new();
    let ctrl = b.add_register("control", RegisterKind::Verify, 1)[0];
    let a = b.add_register("candidate", RegisterKind::Data, 1)[0];
    b.prep(ctrl, Basis::X);
    // controlled-(T X T†)
    b.gate1(Gate1::Tdg, a);
    b.gate2(Gate2::Cx, ctrl, a);
    b.gate1(Gate1::T, a);
    b.gate1(Gate1::H, ctrl);
    b.measure(ctrl, Basis::Z);
    b.finish()
}

/// Minimum-weight corrections made of `letter` for every syndrome of the
/// classical checks `rows`, ties broken lexicographically.
fn classical_table(rows: &[BitVec], n: usize, letter: Letter) -> LookupTable {
    let r = rows.len();
    let mut entries = BTreeMap::new();
    let syn = |v: &BitVec| BitVec::from_bools(&rows.iter().map(|h| h.dot(v)).collect::<Vec<_>>());
    let mut w = 0;
    while entries.len() < 1 << r && w <= n {
        let mut level: Vec<BitVec> = Vec::new();
        subsets(n, w, &mut |v| level.push(v.clone()));
        // same order as the letter strings since I sorts first
        level.sort_by_key(|v| v.to_bit_string());
        for v in level {
            entries
                .entry(syn(&v))
                .or_insert_with(|| PauliOperator::uniform(n, &v, letter));
        }
        w += 1;
    }
    LookupTable {
        syndrome_len: r,
        entries,
    }
}

fn subsets(n: usize, w: usize, visit: &mut dyn FnMut(&BitVec)) {
    fn rec(v: &mut BitVec, from: usize, left: usize, visit: &mut dyn FnMut(&BitVec)) {
        if left == 0 {
            visit(v);
            return;
        }
        for q in from..=v.len() - left {
            v.set(q, true);
            rec(v, q + 1, left - 1, visit);
            v.set(q, false);
        }
    }
    if w <= n {
        rec(&mut BitVec::zeros(n), 0, w, visit);
    }
}

/// Encoder for the uniform superposition over the span of `rows` (a CSS
/// logical basis state): `|+⟩` on each pivot, then CNOTs along the row.
fn emit_span_encoder(b: &mut CircuitBuilder, qubits: &[usize], rows: &[BitVec]) {
    let n = qubits.len();
    let (rref, pivots) = BitMatrix::from_rows(rows.to_vec(), n).rref();
    for (q, &qubit) in qubits.iter().enumerate() {
        b.prep(qubit, if pivots.contains(&q) { Basis::X } else { Basis::Z });
    }
    for (i, &p) in pivots.iter().enumerate() {
        for q in rref.row(i).iter_ones().filter(|&q| q != p) {
            b.gate2(Gate2::Cx, qubits[p], qubits[q]);
        }
    }
}

/// Steane error correction for a CSS code encoding one qubit, on `2n`
/// qubits. Bit flips are copied onto a `|+̄⟩` ancilla by CNOTs from the data
/// and read with Z measurements; the ancilla block is then re-encoded as
/// `|0̄⟩`, phase flips are copied onto it by CNOTs into the data and read
/// with X measurements. Ancilla encoders are marked unverified.
pub fn steane_ec_circuit(code: &StabilizerCode) -> Result<Circuit> {
    if !code.is_css() || code.k() != 1 {
        return Err(Error::Unsupported(
            "Steane error correction needs a CSS code with k = 1".into(),
        ));
    }
    let n = code.n();
    let x_rows: Vec<BitVec> = code
        .generators()
        .iter()
        .filter(|g| g.z_bits().is_zero())
        .map(|g| g.x_bits().clone())
        .collect();
    let z_rows: Vec<BitVec> = code
        .generators()
        .iter()
        .filter(|g| g.x_bits().is_zero())
        .map(|g| g.z_bits().clone())
        .collect();
    let lx = code.logical_x()[0].x_bits().clone();
    let mut b = CircuitBuilder::new();
    let data = b.add_register("data", RegisterKind::Data, n);
    let anc = b.add_register("ancilla", RegisterKind::Ancilla, n);
    let t_bitflip = b.add_table(classical_table(&z_rows, n, Letter::X));
    let t_phase = b.add_table(classical_table(&x_rows, n, Letter::Z));

    let mut plus_rows = x_rows.clone();
    plus_rows.push(lx);
    emit_span_encoder(&mut b, &anc, &plus_rows);
    b.mark_unverified(0..b.num_timesteps());
    b.barrier();
    for q in 0..n {
        b.gate2(Gate2::Cx, data[q], anc[q]);
    }
    let mz: Vec<usize> = anc.iter().map(|&q| b.measure(q, Basis::Z)).collect();

    let t1 = b.barrier();
    emit_span_encoder(&mut b, &anc, &x_rows);
    b.mark_unverified(t1..b.num_timesteps());
    b.barrier();
    for q in 0..n {
        b.gate2(Gate2::Cx, anc[q], data[q]);
    }
    let mx: Vec<usize> = anc.iter().map(|&q| b.measure(q, Basis::X)).collect();
    let parities = |b: &mut CircuitBuilder, rows: &[BitVec], bits: &[usize]| -> Vec<usize> {
        rows.iter()
            .map(|r| b.parity(r.iter_ones().map(|q| bits[q]).collect()))
            .collect()
    };
    let s_bit = parities(&mut b, &z_rows, &mz);
    let s_phase = parities(&mut b, &x_rows, &mx);
    b.push(Op::Decode {
        table: t_bitflip,
        syndrome: s_bit,
        qubits: data.clone(),
    });
    b.push(Op::Decode {
        table: t_phase,
        syndrome: s_phase,
        qubits: data,
    });
    b.finish()
}
