//! Reversible-circuit intermediate representation.
//!
//! A [`Circuit`] is a fixed number of qubits, a set of named disjoint
//! registers over them, and a flat, ordered gate list. Dependency structure
//! is not stored; the scheduler recovers it from shared operands.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("circuit width must be positive")]
    ZeroWidth,
    #[error("register `{name}` is empty")]
    EmptyRegister { name: String },
    #[error("register `{name}` spans {offset}..{end} but circuit width is {width}")]
    RegisterOutOfRange {
        name: String,
        offset: usize,
        end: usize,
        width: usize,
    },
    #[error("registers `{first}` and `{second}` overlap")]
    RegisterOverlap { first: String, second: String },
    #[error("duplicate register name `{0}`")]
    DuplicateRegister(String),
    #[error("{kind} takes {expected} operands, got {got}")]
    Arity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("{kind} has duplicate operand q{qubit}")]
    DuplicateOperand { kind: GateKind, qubit: u32 },
    #[error("operand q{qubit} out of range for width {width}")]
    OperandOutOfRange { qubit: u32, width: usize },
    #[error("unknown gate kind `{0}`")]
    UnknownKind(String),
}

/// Index of a qubit within its circuit.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct QubitId(pub u32);

impl QubitId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for QubitId {
    fn from(i: usize) -> Self {
        QubitId(i as u32)
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GateKind {
    #[serde(rename = "NOT")]
    Not,
    #[serde(rename = "CNOT")]
    Cnot,
    #[serde(rename = "TOFFOLI")]
    Toffoli,
    #[serde(rename = "SWAP")]
    Swap,
    /// Controlled square root of NOT.
    #[serde(rename = "CV")]
    Cv,
    /// Inverse of [`GateKind::Cv`].
    #[serde(rename = "CVDAG")]
    Cvdag,
}

impl GateKind {
    pub const ALL: [GateKind; 6] = [
        GateKind::Not,
        GateKind::Cnot,
        GateKind::Toffoli,
        GateKind::Swap,
        GateKind::Cv,
        GateKind::Cvdag,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Not => 1,
            GateKind::Toffoli => 3,
            GateKind::Cnot | GateKind::Swap | GateKind::Cv | GateKind::Cvdag => 2,
        }
    }

    pub fn inverse(self) -> GateKind {
        match self {
            GateKind::Cv => GateKind::Cvdag,
            GateKind::Cvdag => GateKind::Cv,
            k => k,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Not => "NOT",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::Swap => "SWAP",
            GateKind::Cv => "CV",
            GateKind::Cvdag => "CVDAG",
        }
    }

    /// Maps every computational basis state to a basis state.
    pub fn is_classical(self) -> bool {
        !matches!(self, GateKind::Cv | GateKind::Cvdag)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CircuitError::UnknownKind(s.to_string()))
    }
}

/// One reversible primitive. Controls come first and the target last;
/// SWAP operands are symmetric.
///
/// Operands are stored inline; slots past the arity are always zero so the
/// derived equality is structural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGate", into = "RawGate")]
pub struct Gate {
    kind: GateKind,
    ops: [QubitId; 3],
}

#[derive(Serialize, Deserialize)]
struct RawGate {
    kind: GateKind,
    operands: Vec<u32>,
}

impl TryFrom<RawGate> for Gate {
    type Error = CircuitError;

    fn try_from(raw: RawGate) -> Result<Self, Self::Error> {
        let ops: Vec<QubitId> = raw.operands.into_iter().map(QubitId).collect();
        Gate::new(raw.kind, &ops)
    }
}

impl From<Gate> for RawGate {
    fn from(g: Gate) -> Self {
        RawGate {
            kind: g.kind,
            operands: g.operands().iter().map(|q| q.0).collect(),
        }
    }
}

impl Gate {
    /// Checked constructor: operand count must match the kind and operands
    /// must be pairwise distinct.
    pub fn new(kind: GateKind, operands: &[QubitId]) -> Result<Gate, CircuitError> {
        if operands.len() != kind.arity() {
            return Err(CircuitError::Arity {
                kind,
                expected: kind.arity(),
                got: operands.len(),
            });
        }
        for (i, q) in operands.iter().enumerate() {
            if operands[..i].contains(q) {
                return Err(CircuitError::DuplicateOperand { kind, qubit: q.0 });
            }
        }
        let mut ops = [QubitId(0); 3];
        ops[..operands.len()].copy_from_slice(operands);
        Ok(Gate { kind, ops })
    }

    #[inline]
    fn raw(kind: GateKind, ops: [QubitId; 3]) -> Gate {
        debug_assert!(Gate::new(kind, &ops[..kind.arity()]).is_ok());
        Gate { kind, ops }
    }

    pub fn not(t: QubitId) -> Gate {
        Gate::raw(GateKind::Not, [t, QubitId(0), QubitId(0)])
    }

    pub fn cnot(c: QubitId, t: QubitId) -> Gate {
        Gate::raw(GateKind::Cnot, [c, t, QubitId(0)])
    }

    pub fn toffoli(c1: QubitId, c2: QubitId, t: QubitId) -> Gate {
        Gate::raw(GateKind::Toffoli, [c1, c2, t])
    }

    pub fn swap(a: QubitId, b: QubitId) -> Gate {
        Gate::raw(GateKind::Swap, [a, b, QubitId(0)])
    }

    pub fn cv(c: QubitId, t: QubitId) -> Gate {
        Gate::raw(GateKind::Cv, [c, t, QubitId(0)])
    }

    pub fn cvdag(c: QubitId, t: QubitId) -> Gate {
        Gate::raw(GateKind::Cvdag, [c, t, QubitId(0)])
    }

    #[inline]
    pub fn kind(&self) -> GateKind {
        self.kind
    }

    #[inline]
    pub fn operands(&self) -> &[QubitId] {
        &self.ops[..self.kind.arity()]
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.kind.arity()
    }

    /// The target qubit (last operand). For SWAP this is the second operand.
    #[inline]
    pub fn target(&self) -> QubitId {
        self.ops[self.kind.arity() - 1]
    }

    pub fn inverse(&self) -> Gate {
        Gate {
            kind: self.kind.inverse(),
            ops: self.ops,
        }
    }

    /// Same kind, operands renamed through `f`.
    pub fn map_qubits(&self, mut f: impl FnMut(QubitId) -> QubitId) -> Gate {
        let mut ops = [QubitId(0); 3];
        for (slot, q) in ops.iter_mut().zip(self.operands()) {
            *slot = f(*q);
        }
        Gate::raw(self.kind, ops)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.kind)?;
        for (i, q) in self.operands().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", q.0)?;
        }
        f.write_str(")")
    }
}

/// A named, contiguous run of qubits `[offset, offset + length)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub offset: usize,
    pub length: usize,
}

impl Register {
    pub fn new(name: impl Into<String>, offset: usize, length: usize) -> Register {
        Register {
            name: name.into(),
            offset,
            length,
        }
    }

    #[inline]
    pub fn end(&self) -> usize {
        self.offset + self.length
    }

    /// Qubit holding bit `i` (little-endian: bit 0 at `offset`).
    #[inline]
    pub fn qubit(&self, i: usize) -> QubitId {
        debug_assert!(i < self.length);
        QubitId::from(self.offset + i)
    }

    pub fn qubits(&self) -> Vec<QubitId> {
        (self.offset..self.end()).map(QubitId::from).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit")]
pub struct Circuit {
    width: usize,
    registers: Vec<Register>,
    gates: Vec<Gate>,
}

#[derive(Deserialize)]
struct RawCircuit {
    width: usize,
    registers: Vec<Register>,
    gates: Vec<Gate>,
}

impl TryFrom<RawCircuit> for Circuit {
    type Error = CircuitError;

    fn try_from(raw: RawCircuit) -> Result<Self, Self::Error> {
        let mut c = Circuit::new(raw.width, raw.registers)?;
        c.gates.reserve(raw.gates.len());
        for g in raw.gates {
            c.push(g)?;
        }
        Ok(c)
    }
}

impl Circuit {
    /// An empty circuit over `width` qubits with the given registers.
    pub fn new(width: usize, registers: Vec<Register>) -> Result<Circuit, CircuitError> {
        if width == 0 {
            return Err(CircuitError::ZeroWidth);
        }
        for (i, r) in registers.iter().enumerate() {
            if r.length == 0 {
                return Err(CircuitError::EmptyRegister {
                    name: r.name.clone(),
                });
            }
            if r.end() > width {
                return Err(CircuitError::RegisterOutOfRange {
                    name: r.name.clone(),
                    offset: r.offset,
                    end: r.end(),
                    width,
                });
            }
            for prev in &registers[..i] {
                if prev.name == r.name {
                    return Err(CircuitError::DuplicateRegister(r.name.clone()));
                }
                if prev.offset < r.end() && r.offset < prev.end() {
                    return Err(CircuitError::RegisterOverlap {
                        first: prev.name.clone(),
                        second: r.name.clone(),
                    });
                }
            }
        }
        Ok(Circuit {
            width,
            registers,
            gates: Vec::new(),
        })
    }

    /// Appends `g`, checking its operands against the circuit width.
    pub fn push(&mut self, g: Gate) -> Result<(), CircuitError> {
        for q in g.operands() {
            if q.index() >= self.width {
                return Err(CircuitError::OperandOutOfRange {
                    qubit: q.0,
                    width: self.width,
                });
            }
        }
        self.gates.push(g);
        Ok(())
    }

    /// Builder-style [`Circuit::push`].
    pub fn with_gate(mut self, g: Gate) -> Result<Circuit, CircuitError> {
        self.push(g)?;
        Ok(self)
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<(), CircuitError> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    #[inline]
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Same width and registers, different gates. Gates are not re-checked
    /// beyond the width bound.
    pub fn with_gates(&self, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::new(self.width, self.registers.clone())?;
        c.gates.reserve(gates.len());
        c.extend(gates)?;
        Ok(c)
    }

    /// Reversed gate order, each gate replaced by its inverse.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            width: self.width,
            registers: self.registers.clone(),
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn census(&self) -> GateCensus {
        let mut census = GateCensus::default();
        for g in &self.gates {
            *census.counts.entry(g.kind()).or_insert(0) += 1;
            census.total += 1;
        }
        census
    }

    pub fn max_arity(&self) -> usize {
        self.gates.iter().map(Gate::arity).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Circuit, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Gate counts by kind. Kinds that never occur are absent from `counts`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GateCensus {
    pub counts: BTreeMap<GateKind, usize>,
    pub total: usize,
}

impl GateCensus {
    pub fn count(&self, kind: GateKind) -> usize {
        self.counts.get(&kind).copied().unwrap_or(0)
    }
}
