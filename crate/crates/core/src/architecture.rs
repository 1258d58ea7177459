//! Machine models and the transformations that make a circuit run on a
//! neighbor-only linear array.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Num;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GateKind, QubitId};
use crate::Exact;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArchError {
    #[error("gate {index} ({kind}) has arity 3; decompose Toffoli gates before routing")]
    ArityTooHigh { index: usize, kind: GateKind },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ArchName {
    /// Abstract concurrent: any operands, any distance, unlimited concurrency.
    Ac,
    /// Neighbor-only, two-qubit gates, concurrent, on a 1-D line.
    Ntc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArchModel {
    pub name: ArchName,
    pub max_arity: usize,
    pub adjacency_required: bool,
}

impl ArchModel {
    pub const AC: ArchModel = ArchModel {
        name: ArchName::Ac,
        max_arity: 3,
        adjacency_required: false,
    };
    pub const NTC: ArchModel = ArchModel {
        name: ArchName::Ntc,
        max_arity: 2,
        adjacency_required: true,
    };
}

impl fmt::Display for ArchModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.name {
            ArchName::Ac => "ac",
            ArchName::Ntc => "ntc",
        })
    }
}

impl FromStr for ArchModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ac" => Ok(ArchModel::AC),
            "ntc" => Ok(ArchModel::NTC),
            other => Err(format!(
                "unknown architecture `{other}` (expected ac or ntc)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Conformance {
    pub conforms: bool,
    pub first_offending: Option<usize>,
}

pub fn check_conformance(c: &Circuit, model: &ArchModel) -> Conformance {
    let offending = c.gates().iter().position(|g| {
        if g.arity() > model.max_arity {
            return true;
        }
        model.adjacency_required
            && g.arity() == 2
            && g.operands()[0].index().abs_diff(g.operands()[1].index()) != 1
    });
    Conformance {
        conforms: offending.is_none(),
        first_offending: offending,
    }
}

/// The five two-qubit gates replacing `TOFFOLI(a, b, t)`.
pub fn toffoli_decomposition(a: QubitId, b: QubitId, t: QubitId) -> [Gate; 5] {
    [
        Gate::cv(b, t),
        Gate::cnot(a, b),
        Gate::cvdag(b, t),
        Gate::cnot(a, b),
        Gate::cv(a, t),
    ]
}

/// Replaces every Toffoli by [`toffoli_decomposition`]; other gates pass
/// through unchanged.
pub fn decompose_toffoli(c: &Circuit) -> Circuit {
    let toffolis = c.census().count(GateKind::Toffoli);
    let mut gates = Vec::with_capacity(c.len() + 4 * toffolis);
    for g in c.gates() {
        if g.kind() == GateKind::Toffoli {
            let ops = g.operands();
            gates.extend(toffoli_decomposition(ops[0], ops[1], ops[2]));
        } else {
            gates.push(*g);
        }
    }
    c.with_gates(gates)
        .expect("decomposition keeps operands in range")
}

/// The decomposition multiplied out as exact 8x8 matrices over
/// `Q(i)` equals the Toffoli permutation.
pub fn verify_toffoli_identity() -> bool {
    let seq = toffoli_decomposition(QubitId(0), QubitId(1), QubitId(2));
    sequence_implements_toffoli::<Exact>(&seq)
}

/// Whether `gates`, acting on qubits 0..3 with qubit 0 the least
/// significant index bit, multiply out to `TOFFOLI(0, 1, 2)` exactly.
pub fn sequence_implements_toffoli<T>(gates: &[Gate]) -> bool
where
    T: Clone + Num + Neg<Output = T>,
{
    if gates
        .iter()
        .flat_map(Gate::operands)
        .any(|q| q.index() >= 3)
    {
        return false;
    }
    let mut product = identity::<T>();
    for g in gates {
        product = matmul(&gate_matrix::<T>(g), &product);
    }
    product == gate_matrix::<T>(&Gate::toffoli(QubitId(0), QubitId(1), QubitId(2)))
}

const DIM: usize = 8;
type Matrix<T> = Vec<Complex<T>>;

fn identity<T: Clone + Num>() -> Matrix<T> {
    (0..DIM * DIM)
        .map(|i| {
            if i / DIM == i % DIM {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
        .collect()
}

fn matmul<T: Clone + Num>(lhs: &Matrix<T>, rhs: &Matrix<T>) -> Matrix<T> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); DIM * DIM];
    for r in 0..DIM {
        for c in 0..DIM {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..DIM {
                acc = acc + lhs[r * DIM + k].clone() * rhs[k * DIM + c].clone();
            }
            out[r * DIM + c] = acc;
        }
    }
    out
}

/// Column `j` is the image of basis state `j`.
fn gate_matrix<T: Clone + Num + Neg<Output = T>>(g: &Gate) -> Matrix<T> {
    let zero = || Complex::new(T::zero(), T::zero());
    let half = T::one() / (T::one() + T::one());
    // V = 1/2 [[1+i, 1-i], [1-i, 1+i]]
    let plus = Complex::new(half.clone(), half.clone());
    let minus = Complex::new(half.clone(), -half);
    let (diag, off) = match g.kind() {
        GateKind::Cv => (plus, minus),
        _ => (minus, plus),
    };
    let ops: Vec<usize> = g.operands().iter().map(|q| q.index()).collect();
    let bit = |j: usize, q: usize| (j >> q) & 1 == 1;
    let mut m = vec![zero(); DIM * DIM];
    for j in 0..DIM {
        match g.kind() {
            GateKind::Not => m[(j ^ (1 << ops[0])) * DIM + j] = Complex::new(T::one(), T::zero()),
            GateKind::Cnot | GateKind::Toffoli => {
                let (controls, t) = ops.split_at(ops.len() - 1);
                let i = if controls.iter().all(|&c| bit(j, c)) {
                    j ^ (1 << t[0])
                } else {
                    j
                };
                m[i * DIM + j] = Complex::new(T::one(), T::zero());
            }
            GateKind::Swap => {
                let (a, b) = (ops[0], ops[1]);
                let mut i = j & !(1 << a) & !(1 << b);
                if bit(j, a) {
                    i |= 1 << b;
                }
                if bit(j, b) {
                    i |= 1 << a;
                }
                m[i * DIM + j] = Complex::new(T::one(), T::zero());
            }
            GateKind::Cv | GateKind::Cvdag => {
                let (c, t) = (ops[0], ops[1]);
                if bit(j, c) {
                    m[j * DIM + j] = diag.clone();
                    m[(j ^ (1 << t)) * DIM + j] = off.clone();
                } else {
                    m[j * DIM + j] = Complex::new(T::one(), T::zero());
                }
            }
        }
    }
    m
}

/// Logical qubit to line position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutPermutation {
    pub forward: Vec<usize>,
}

impl LayoutPermutation {
    pub fn identity(width: usize) -> LayoutPermutation {
        LayoutPermutation {
            forward: (0..width).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn position(&self, qubit: usize) -> usize {
        self.forward[qubit]
    }
}

/// Greedy SWAP insertion on a line with initial layout "qubit i at
/// position i". For a gate on positions `p < q` with `q - p > 1`, the qubit
/// at `p` is swapped rightward until adjacent. No swaps are undone, so the
/// returned permutation gives where each original qubit ends up.
pub fn route_linear(c: &Circuit) -> Result<(Circuit, LayoutPermutation), ArchError> {
    let width = c.width();
    let mut pos: Vec<usize> = (0..width).collect();
    let mut at: Vec<usize> = (0..width).collect();
    let mut gates = Vec::with_capacity(c.len());
    for (index, g) in c.gates().iter().enumerate() {
        match g.arity() {
            1 => {}
            2 => {
                let (x, y) = (g.operands()[0].index(), g.operands()[1].index());
                let (mut lo, hi) = (pos[x].min(pos[y]), pos[x].max(pos[y]));
                while hi - lo > 1 {
                    gates.push(Gate::swap(QubitId::from(lo), QubitId::from(lo + 1)));
                    let (u, v) = (at[lo], at[lo + 1]);
                    at.swap(lo, lo + 1);
                    pos[u] = lo + 1;
                    pos[v] = lo;
                    lo += 1;
                }
            }
            _ => {
                return Err(ArchError::ArityTooHigh {
                    index,
                    kind: g.kind(),
                })
            }
        }
        gates.push(g.map_qubits(|q| QubitId::from(pos[q.index()])));
    }
    let routed = c.with_gates(gates)?;
    Ok((routed, LayoutPermutation { forward: pos }))
}

/// Decompose (NTC only), route, and confirm conformance.
pub fn lower_for(c: &Circuit, model: &ArchModel) -> Result<Circuit, ArchError> {
    match model.name {
        ArchName::Ac => Ok(c.clone()),
        ArchName::Ntc => {
            let (routed, _) = route_linear(&decompose_toffoli(c))?;
            debug_assert!(check_conformance(&routed, model).conforms);
            Ok(routed)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheduler::asap_schedule;

    fn q(i: u32) -> QubitId {
        QubitId(i)
    }

    fn circuit(width: usize, gates: &[Gate]) -> Circuit {
        let mut c = Circuit::new(width, vec![]).unwrap();
        c.extend(gates.iter().copied()).unwrap();
        c
    }

    #[test]
    fn conformance_examples() {
        let ok = check_conformance(&circuit(2, &[Gate::cnot(q(0), q(1))]), &ArchModel::NTC);
        assert!(ok.conforms);
        let far = check_conformance(&circuit(4, &[Gate::cnot(q(0), q(3))]), &ArchModel::NTC);
        assert_eq!(far.first_offending, Some(0));
        let toff = circuit(3, &[Gate::toffoli(q(0), q(1), q(2))]);
        assert!(check_conformance(&toff, &ArchModel::AC).conforms);
        assert!(!check_conformance(&toff, &ArchModel::NTC).conforms);
    }

    #[test]
    fn decomposition_census() {
        let c = circuit(3, &[Gate::toffoli(q(0), q(1), q(2))]);
        let d = decompose_toffoli(&c);
        assert_eq!(d.len(), 5);
        let census = d.census();
        assert_eq!(census.count(GateKind::Cv), 2);
        assert_eq!(census.count(GateKind::Cvdag), 1);
        assert_eq!(census.count(GateKind::Cnot), 2);
        assert_eq!(d.max_arity(), 2);

        let plain = circuit(2, &[Gate::cnot(q(0), q(1)), Gate::not(q(1))]);
        assert_eq!(decompose_toffoli(&plain), plain);
    }

    #[test]
    fn toffoli_identity_exact_and_mutations() {
        assert!(verify_toffoli_identity());
        let mut seq = toffoli_decomposition(q(0), q(1), q(2)).to_vec();
        seq[2] = Gate::cv(q(1), q(2));
        assert!(!sequence_implements_toffoli::<Exact>(&seq));
        let mut seq = toffoli_decomposition(q(0), q(1), q(2)).to_vec();
        seq.remove(3);
        assert!(!sequence_implements_toffoli::<Exact>(&seq));
        // the same algebra over f64 lands exactly too (entries are dyadic)
        assert!(sequence_implements_toffoli::<f64>(&toffoli_decomposition(
            q(0),
            q(1),
            q(2)
        )));
    }

    #[test]
    fn greedy_route_trace() {
        let c = circuit(4, &[Gate::cnot(q(0), q(3))]);
        let (routed, perm) = route_linear(&c).unwrap();
        assert_eq!(
            routed.gates(),
            &[
                Gate::swap(q(0), q(1)),
                Gate::swap(q(1), q(2)),
                Gate::cnot(q(2), q(3))
            ]
        );
        assert_eq!(perm.forward, vec![2, 0, 1, 3]);
        assert_eq!(asap_schedule(&routed).depth(), 3);
    }

    #[test]
    fn adjacent_circuit_unchanged() {
        let c = circuit(
            3,
            &[
                Gate::cnot(q(0), q(1)),
                Gate::cnot(q(2), q(1)),
                Gate::not(q(2)),
            ],
        );
        let (routed, perm) = route_linear(&c).unwrap();
        assert_eq!(routed, c);
        assert!(perm.is_identity());
    }

    #[test]
    fn routing_rejects_toffoli() {
        let c = circuit(3, &[Gate::toffoli(q(0), q(1), q(2))]);
        assert!(matches!(
            route_linear(&c),
            Err(ArchError::ArityTooHigh { index: 0, .. })
        ));
    }
}
