//! Circuits as data: timestep-ordered locations over named registers, with
//! classical wires, and a line-oriented text serialization.
//!
//! # Text format
//!
//! ```text
//! # comment
//! QUBITS <n>
//! BITS <m>
//! REG <name> <kind> <start> <len>
//! TABLE <id> <syndrome-length>
//! ENTRY <id> <syndrome bits> <pauli>
//! UNVERIFIED <first-timestep> <end-timestep>
//! <op> ; <op> ; ...            one line per timestep
//! ```
//!
//! Operations: `PZ q`, `PX q` (prepare |0⟩ / |+⟩); `H S SDG X Y Z T TDG q`;
//! `CX CY CZ a b`; `MZ q c<k>`, `MX q c<k>`; `PAR c<out> c<in>...`;
//! `VOTE outs | round | round ...` (whole-syndrome majority) or `MAJ ...`
//! (per-bit majority) with each group a list of `c<k>`; `IF c<k> <gate> q`;
//! `DEC <table> c<k>... | q...` (apply the tabulated correction);
//! `RETRY <timestep> <max-attempts> c<k>...` (jump back while any flag is set).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::ops::Range;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Z,
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate1 {
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    T,
    Tdg,
}

impl Gate1 {
    pub fn is_clifford(self) -> bool {
        !matches!(self, Gate1::T | Gate1::Tdg)
    }

    fn token(self) -> &'static str {
        match self {
            Gate1::H => "H",
            Gate1::S => "S",
            Gate1::Sdg => "SDG",
            Gate1::X => "X",
            Gate1::Y => "Y",
            Gate1::Z => "Z",
            Gate1::T => "T",
            Gate1::Tdg => "TDG",
        }
    }

    fn from_token(t: &str) -> Option<Gate1> {
        Some(match t {
            "H" => Gate1::H,
            "S" => Gate1::S,
            "SDG" => Gate1::Sdg,
            "X" => Gate1::X,
            "Y" => Gate1::Y,
            "Z" => Gate1::Z,
            "T" => Gate1::T,
            "TDG" => Gate1::Tdg,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate2 {
    Cx,
    Cy,
    Cz,
}

impl Gate2 {
    fn token(self) -> &'static str {
        match self {
            Gate2::Cx => "CX",
            Gate2::Cy => "CY",
            Gate2::Cz => "CZ",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Prep {
        q: usize,
        basis: Basis,
    },
    Gate1 {
        gate: Gate1,
        q: usize,
    },
    Gate2 {
        gate: Gate2,
        a: usize,
        b: usize,
    },
    Measure {
        q: usize,
        basis: Basis,
        bit: usize,
    },
    Parity {
        out: usize,
        inputs: Vec<usize>,
    },
    /// Majority over repeated syndrome rounds. `whole` votes on entire
    /// syndrome vectors (no majority gives all zeros); otherwise bit by bit.
    Vote {
        outs: Vec<usize>,
        rounds: Vec<Vec<usize>>,
        whole: bool,
    },
    If {
        bit: usize,
        gate: Gate1,
        q: usize,
    },
    Decode {
        table: usize,
        syndrome: Vec<usize>,
        qubits: Vec<usize>,
    },
    Retry {
        flags: Vec<usize>,
        restart: usize,
        max_attempts: usize,
    },
}

impl Op {
    /// Qubits the operation acts on.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Op::Prep { q, .. } | Op::Gate1 { q, .. } | Op::Measure { q, .. } | Op::If { q, .. } => {
                vec![*q]
            }
            Op::Gate2 { a, b, .. } => vec![*a, *b],
            Op::Decode { qubits, .. } => qubits.clone(),
            Op::Parity { .. } | Op::Vote { .. } | Op::Retry { .. } => vec![],
        }
    }

    pub fn bits_read(&self) -> Vec<usize> {
        match self {
            Op::Parity { inputs, .. } => inputs.clone(),
            Op::Vote { rounds, .. } => rounds.iter().flatten().copied().collect(),
            Op::If { bit, .. } => vec![*bit],
            Op::Decode { syndrome, .. } => syndrome.clone(),
            Op::Retry { flags, .. } => flags.clone(),
            _ => vec![],
        }
    }

    pub fn bits_written(&self) -> Vec<usize> {
        match self {
            Op::Measure { bit, .. } => vec![*bit],
            Op::Parity { out, .. } => vec![*out],
            Op::Vote { outs, .. } => outs.clone(),
            _ => vec![],
        }
    }

    /// Whether the operation is a fault location under circuit noise.
    pub fn is_quantum(&self) -> bool {
        !matches!(self, Op::Parity { .. } | Op::Vote { .. } | Op::Retry { .. })
    }

    pub fn is_clifford(&self) -> bool {
        match self {
            Op::Gate1 { gate, .. } | Op::If { gate, .. } => gate.is_clifford(),
            _ => true,
        }
    }
}

fn bits_list(bits: &[usize]) -> String {
    bits.iter().map(|b| format!("c{b}")).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Prep { q, basis } => {
                write!(f, "{} {q}", if *basis == Basis::Z { "PZ" } else { "PX" })
            }
            Op::Gate1 { gate, q } => write!(f, "{} {q}", gate.token()),
            Op::Gate2 { gate, a, b } => write!(f, "{} {a} {b}", gate.token()),
            Op::Measure { q, basis, bit } => write!(f, "{} {q} c{bit}", if *basis == Basis::Z { "MZ" } else { "MX" }),
            Op::Parity { out, inputs } => write!(f, "PAR c{out} {}", bits_list(inputs)),
            Op::Vote { outs, rounds, whole } => {
                write!(f, "{} {}", if *whole { "VOTE" } else { "MAJ" }, bits_list(outs))?;
                for r in rounds {
                    write!(f, " | {}", bits_list(r))?;
                }
                Ok(())
            }
            Op::If { bit, gate, q } => write!(f, "IF c{bit} {} {q}", gate.token()),
            Op::Decode {
                table,
                syndrome,
                qubits,
            } => {
                let qs: Vec<String> = qubits.iter().map(|q| q.to_string()).collect();
                write!(f, "DEC {table} {} | {}", bits_list(syndrome), qs.join(" "))
            }
            Op::Retry {
                flags,
                restart,
                max_attempts,
            } => write!(f, "RETRY {restart} {max_attempts} {}", bits_list(flags)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegisterKind {
    Data,
    Ancilla,
    Cat,
    Verify,
}

impl RegisterKind {
    fn token(self) -> &'static str {
        match self {
            RegisterKind::Data => "data",
            RegisterKind::Ancilla => "ancilla",
            RegisterKind::Cat => "cat",
            RegisterKind::Verify => "verify",
        }
    }

    fn from_token(t: &str) -> Option<Self> {
        Some(match t {
            "data" => RegisterKind::Data,
            "ancilla" => RegisterKind::Ancilla,
            "cat" => RegisterKind::Cat,
            "verify" => RegisterKind::Verify,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub kind: RegisterKind,
    pub start: usize,
    pub len: usize,
}

impl Register {
    pub fn qubits(&self) -> Vec<usize> {
        (self.start..self.start + self.len).collect()
    }
}

/// A complete syndrome → correction map carried by a circuit.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LookupTable {
    pub syndrome_len: usize,
    pub entries: BTreeMap<BitVec, PauliOperator>,
}

impl LookupTable {
    pub fn correction(&self, s: &BitVec) -> Option<&PauliOperator> {
        self.entries.get(s)
    }
}

/// Position of an operation: `(timestep, index within the timestep)`.
pub type LocationId = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Circuit {
    pub num_qubits: usize,
    pub num_bits: usize,
    pub registers: Vec<Register>,
    pub timesteps: Vec<Vec<Op>>,
    pub tables: Vec<LookupTable>,
    /// Timestep ranges whose ancilla preparation is not fault tolerant and
    /// must be verified before use.
    pub unverified: Vec<Range<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CircuitStats {
    pub timesteps: usize,
    pub qubits: usize,
    pub preparations: usize,
    pub single_qubit_gates: usize,
    pub two_qubit_gates: usize,
    pub measurements: usize,
    pub classical_ops: usize,
}

impl Circuit {
    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn registers_of(&self, kind: RegisterKind) -> impl Iterator<Item = &Register> {
        self.registers.iter().filter(move |r| r.kind == kind)
    }

    pub fn ops(&self) -> impl Iterator<Item = (LocationId, &Op)> {
        self.timesteps
            .iter()
            .enumerate()
            .flat_map(|(t, ops)| ops.iter().enumerate().map(move |(i, op)| ((t, i), op)))
    }

    pub fn is_clifford(&self) -> bool {
        self.ops().all(|(_, op)| op.is_clifford())
    }

    pub fn in_unverified(&self, t: usize) -> bool {
        self.unverified.iter().any(|r| r.contains(&t))
    }

    pub fn count_gate2(&self, gate: Gate2) -> usize {
        self.ops()
            .filter(|(_, op)| matches!(op, Op::Gate2 { gate: g, .. } if *g == gate))
            .count()
    }

    pub fn stats(&self) -> CircuitStats {
        let mut s = CircuitStats {
            timesteps: self.timesteps.len(),
            qubits: self.num_qubits,
            ..Default::default()
        };
        for (_, op) in self.ops() {
            match op {
                Op::Prep { .. } => s.preparations += 1,
                Op::Gate1 { .. } | Op::If { .. } => s.single_qubit_gates += 1,
                Op::Gate2 { .. } => s.two_qubit_gates += 1,
                Op::Measure { .. } => s.measurements += 1,
                _ => s.classical_ops += 1,
            }
        }
        s
    }

    /// Checks the structural invariants: indices in range, no qubit touched
    /// twice in a timestep, every classical read preceded by a write, table
    /// references valid, and each cat qubit coupled to at most one data qubit
    /// between preparations.
    pub fn validate(&self) -> Result<()> {
        let data: BTreeSet<usize> = self.registers_of(RegisterKind::Data).flat_map(|r| r.qubits()).collect();
        let cat: BTreeSet<usize> = self.registers_of(RegisterKind::Cat).flat_map(|r| r.qubits()).collect();
        let mut written = vec![false; self.num_bits];
        let mut cat_partner: BTreeMap<usize, usize> = BTreeMap::new();
        for (t, ops) in self.timesteps.iter().enumerate() {
            let mut touched = BTreeSet::new();
            for op in ops {
                for q in op.qubits() {
                    if q >= self.num_qubits {
                        return Err(Error::Circuit(format!("qubit {q} out of range at timestep {t}")));
                    }
                    if !touched.insert(q) {
                        return Err(Error::Circuit(format!("qubit {q} used twice in timestep {t}")));
                    }
                }
                for b in op.bits_read() {
                    if b >= self.num_bits || !written[b] {
                        return Err(Error::Circuit(format!(
                            "bit c{b} read before it is produced at timestep {t}"
                        )));
                    }
                }
                for b in op.bits_written() {
                    if b >= self.num_bits {
                        return Err(Error::Circuit(format!("bit c{b} out of range")));
                    }
                    written[b] = true;
                }
                match op {
                    Op::Decode { table, syndrome, .. } => {
                        let tb = self
                            .tables
                            .get(*table)
                            .ok_or_else(|| Error::Circuit(format!("unknown table {table}")))?;
                        if tb.syndrome_len != syndrome.len() {
                            return Err(Error::Circuit(format!(
                                "table {table} expects {} syndrome bits",
                                tb.syndrome_len
                            )));
                        }
                    }
                    Op::Retry { restart, .. } if *restart > t => {
                        return Err(Error::Circuit("retry jumps forward".into()));
                    }
                    Op::Vote { outs, rounds, .. } => {
                        if rounds.iter().any(|r| r.len() != outs.len()) {
                            return Err(Error::Circuit("vote rounds differ in length".into()));
                        }
                    }
                    Op::Prep { q, .. } => {
                        cat_partner.remove(q);
                    }
                    Op::Gate2 { a, b, .. } => {
                        for (c, d) in [(a, b), (b, a)] {
                            if cat.contains(c) && data.contains(d) {
                                match cat_partner.get(c) {
                                    Some(prev) if prev != d => {
                                        return Err(Error::Circuit(format!(
                                            "cat qubit {c} couples to data qubits {prev} and {d}"
                                        )))
                                    }
                                    _ => {
                                        cat_partner.insert(*c, *d);
                                    }
                                }
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "QUBITS {}", self.num_qubits);
        let _ = writeln!(s, "BITS {}", self.num_bits);
        for r in &self.registers {
            let _ = writeln!(s, "REG {} {} {} {}", r.name, r.kind.token(), r.start, r.len);
        }
        for (id, t) in self.tables.iter().enumerate() {
            let _ = writeln!(s, "TABLE {id} {}", t.syndrome_len);
            for (k, v) in &t.entries {
                let _ = writeln!(
                    s,
                    "ENTRY {id} {} {v}",
                    if k.is_empty() { "-".to_string() } else { k.to_string() }
                );
            }
        }
        for r in &self.unverified {
            let _ = writeln!(s, "UNVERIFIED {} {}", r.start, r.end);
        }
        for ops in &self.timesteps {
            let line: Vec<String> = ops.iter().map(|o| o.to_string()).collect();
            let _ = writeln!(s, "{}", line.join(" ; "));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut c = Circuit::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: &str| Error::Circuit(format!("line {}: {m}", lineno + 1));
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |i: usize| -> Result<usize> {
                toks.get(i)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err("expected a number"))
            };
            match toks[0] {
                "QUBITS" => c.num_qubits = num(1)?,
                "BITS" => c.num_bits = num(1)?,
                "REG" => {
                    let kind = toks
                        .get(2)
                        .and_then(|t| RegisterKind::from_token(t))
                        .ok_or_else(|| err("bad register kind"))?;
                    c.registers.push(Register {
                        name: toks.get(1).ok_or_else(|| err("missing name"))?.to_string(),
                        kind,
                        start: num(3)?,
                        len: num(4)?,
                    });
                }
                "TABLE" => {
                    let id = num(1)?;
                    if id != c.tables.len() {
                        return Err(err("tables must be numbered consecutively"));
                    }
                    c.tables.push(LookupTable {
                        syndrome_len: num(2)?,
                        entries: BTreeMap::new(),
                    });
                }
                "ENTRY" => {
                    let id = num(1)?;
                    let key = match toks.get(2) {
                        Some(&"-") => BitVec::zeros(0),
                        Some(t) => BitVec::from_bit_str(t).ok_or_else(|| err("bad syndrome"))?,
                        None => return Err(err("missing syndrome")),
                    };
                    let p = PauliOperator::parse(toks.get(3).ok_or_else(|| err("missing Pauli"))?)?;
                    c.tables
                        .get_mut(id)
                        .ok_or_else(|| err("entry for unknown table"))?
                        .entries
                        .insert(key, p);
                }
                "UNVERIFIED" => c.unverified.push(num(1)?..num(2)?),
                _ => {
                    let ops: Result<Vec<Op>> = line
                        .split(';')
                        .map(|o| parse_op(o.trim()).map_err(|m| err(&m)))
                        .collect();
                    c.timesteps.push(ops?);
                }
            }
        }
        c.validate()?;
        Ok(c)
    }
}

fn parse_bit(t: &str) -> std::result::Result<usize, String> {
    t.strip_prefix('c')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| format!("expected classical wire c<k>, got {t:?}"))
}

fn parse_usize(t: Option<&&str>) -> std::result::Result<usize, String> {
    t.and_then(|t| t.parse().ok())
        .ok_or_else(|| "expected a number".to_string())
}

fn parse_op(s: &str) -> std::result::Result<Op, String> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    let head = *toks.first().ok_or("empty operation")?;
    let bits_of =
        |ts: &[&str]| -> std::result::Result<Vec<usize>, String> { ts.iter().map(|t| parse_bit(t)).collect() };
    let op = match head {
        "PZ" | "PX" => Op::Prep {
            q: parse_usize(toks.get(1))?,
            basis: if head == "PZ" { Basis::Z } else { Basis::X },
        },
        "CX" | "CY" | "CZ" => Op::Gate2 {
            gate: match head {
                "CX" => Gate2::Cx,
                "CY" => Gate2::Cy,
                _ => Gate2::Cz,
            },
            a: parse_usize(toks.get(1))?,
            b: parse_usize(toks.get(2))?,
        },
        "MZ" | "MX" => Op::Measure {
            q: parse_usize(toks.get(1))?,
            basis: if head == "MZ" { Basis::Z } else { Basis::X },
            bit: parse_bit(toks.get(2).ok_or("missing wire")?)?,
        },
        "PAR" => Op::Parity {
            out: parse_bit(toks.get(1).ok_or("missing wire")?)?,
            inputs: bits_of(&toks[2..])?,
        },
        "VOTE" | "MAJ" => {
            let groups: Vec<&[&str]> = toks[1..].split(|t| *t == "|").collect();
            let outs = bits_of(groups[0])?;
            let rounds = groups[1..]
                .iter()
                .map(|g| bits_of(g))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Op::Vote {
                outs,
                rounds,
                whole: head == "VOTE",
            }
        }
        "IF" => Op::If {
            bit: parse_bit(toks.get(1).ok_or("missing wire")?)?,
            gate: toks.get(2).and_then(|t| Gate1::from_token(t)).ok_or("bad gate")?,
            q: parse_usize(toks.get(3))?,
        },
        "DEC" => {
            let table = parse_usize(toks.get(1))?;
            let groups: Vec<&[&str]> = toks[2..].split(|t| *t == "|").collect();
            if groups.len() != 2 {
                return Err("DEC needs syndrome wires | qubits".into());
            }
            let qubits = groups[1]
                .iter()
                .map(|t| t.parse().map_err(|_| format!("bad qubit {t:?}")))
                .collect::<std::result::Result<Vec<usize>, String>>()?;
            Op::Decode {
                table,
                syndrome: bits_of(groups[0])?,
                qubits,
            }
        }
        "RETRY" => Op::Retry {
            restart: parse_usize(toks.get(1))?,
            max_attempts: parse_usize(toks.get(2))?,
            flags: bits_of(&toks[3..])?,
        },
        g => match Gate1::from_token(g) {
            Some(gate) => Op::Gate1 {
                gate,
                q: parse_usize(toks.get(1))?,
            },
            None => return Err(format!("unknown operation {g:?}")),
        },
    };
    Ok(op)
}

/// Builds circuits with as-soon-as-possible scheduling. An operation goes
/// into the earliest timestep after every earlier operation sharing a qubit
/// or classical wire with it, and never before the current barrier.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    circuit: Circuit,
    qubit_ready: Vec<usize>,
    bit_ready: Vec<usize>,
    barrier: usize,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_register(&mut self, name: &str, kind: RegisterKind, len: usize) -> Vec<usize> {
        let start = self.circuit.num_qubits;
        self.circuit.registers.push(Register {
            name: name.to_string(),
            kind,
            start,
            len,
        });
        self.circuit.num_qubits += len;
        self.qubit_ready.resize(self.circuit.num_qubits, 0);
        (start..start + len).collect()
    }

    pub fn new_bit(&mut self) -> usize {
        self.circuit.num_bits += 1;
        self.bit_ready.push(0);
        self.circuit.num_bits - 1
    }

    pub fn new_bits(&mut self, count: usize) -> Vec<usize> {
        (0..count).map(|_| self.new_bit()).collect()
    }

    pub fn add_table(&mut self, table: LookupTable) -> usize {
        self.circuit.tables.push(table);
        self.circuit.tables.len() - 1
    }

    /// Forces later operations after everything emitted so far; returns the
    /// first timestep index available to them.
    pub fn barrier(&mut self) -> usize {
        self.barrier = self.circuit.timesteps.len();
        self.barrier
    }

    pub fn push(&mut self, op: Op) {
        let qs = op.qubits();
        let mut t = self.barrier;
        for &q in &qs {
            t = t.max(self.qubit_ready[q]);
        }
        for b in op.bits_read().into_iter().chain(op.bits_written()) {
            t = t.max(self.bit_ready[b]);
        }
        while self.circuit.timesteps.len() <= t {
            self.circuit.timesteps.push(Vec::new());
        }
        self.circuit.timesteps[t].push(op.clone());
        for &q in &qs {
            self.qubit_ready[q] = t + 1;
        }
        for b in op.bits_read().into_iter().chain(op.bits_written()) {
            self.bit_ready[b] = t + 1;
        }
        if matches!(op, Op::Retry { .. }) {
            self.barrier();
        }
    }

    pub fn prep(&mut self, q: usize, basis: Basis) {
        self.push(Op::Prep { q, basis });
    }

    pub fn gate1(&mut self, gate: Gate1, q: usize) {
        self.push(Op::Gate1 { gate, q });
    }

    pub fn gate2(&mut self, gate: Gate2, a: usize, b: usize) {
        self.push(Op::Gate2 { gate, a, b });
    }

    pub fn measure(&mut self, q: usize, basis: Basis) -> usize {
        let bit = self.new_bit();
        self.push(Op::Measure { q, basis, bit });
        bit
    }

    pub fn parity(&mut self, inputs: Vec<usize>) -> usize {
        let out = self.new_bit();
        self.push(Op::Parity { out, inputs });
        out
    }

    pub fn mark_unverified(&mut self, range: Range<usize>) {
        self.circuit.unverified.push(range);
    }

    pub fn num_timesteps(&self) -> usize {
        self.circuit.timesteps.len()
    }

    pub fn finish(self) -> Result<Circuit> {
        self.circuit.validate()?;
        Ok(self.circuit)
    }
}
