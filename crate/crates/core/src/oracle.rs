//! Basis-state simulation and builder-versus-integer checks.
//!
//! Register values are little-endian: the qubit at a register's offset is
//! its least significant bit.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, GateKind, Register};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("non-classical gate {kind} at index {index}")]
    NonClassicalGate { index: usize, kind: GateKind },
    #[error("state has {got} bits but the circuit width is {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("circuit has no register `{0}`")]
    UnknownRegister(String),
    #[error("value {value} does not fit register `{register}` ({length} bits)")]
    ValueTooLarge {
        register: String,
        value: u64,
        length: usize,
    },
    #[error("register `{0}` is wider than 64 bits")]
    RegisterTooWide(String),
    #[error("gate {index} is controlled by a qubit holding an odd power of sqrt(NOT)")]
    ControlInSuperposition { index: usize },
    #[error("qubit {qubit} ends holding an odd power of sqrt(NOT)")]
    UnresolvedSuperposition { qubit: usize },
}

/// Register name to little-endian integer value.
pub type RegisterValues = BTreeMap<String, u64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    bits: Vec<bool>,
}

impl BasisState {
    pub fn zeros(width: usize) -> BasisState {
        BasisState {
            bits: vec![false; width],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> BasisState {
        BasisState { bits }
    }

    /// The all-zero state of `c` with the named registers set.
    pub fn from_registers(c: &Circuit, values: &RegisterValues) -> Result<BasisState, SimError> {
        let mut s = BasisState::zeros(c.width());
        for (name, &v) in values {
            let reg = c
                .register(name)
                .ok_or_else(|| SimError::UnknownRegister(name.clone()))?;
            s.write(reg, v)?;
        }
        Ok(s)
    }

    #[inline]
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn read(&self, reg: &Register) -> Result<u64, SimError> {
        if reg.length > 64 {
            return Err(SimError::RegisterTooWide(reg.name.clone()));
        }
        Ok(self.bits[reg.offset..reg.end()]
            .iter()
            .rev()
            .fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn write(&mut self, reg: &Register, value: u64) -> Result<(), SimError> {
        if reg.length < 64 && value >> reg.length != 0 {
            return Err(SimError::ValueTooLarge {
                register: reg.name.clone(),
                value,
                length: reg.length,
            });
        }
        for i in 0..reg.length {
            self.bits[reg.offset + i] = i < 64 && (value >> i) & 1 == 1;
        }
        Ok(())
    }

    /// Every register of `c`, decoded.
    pub fn registers(&self, c: &Circuit) -> Result<RegisterValues, SimError> {
        c.registers()
            .iter()
            .map(|r| Ok((r.name.clone(), self.read(r)?)))
            .collect()
    }

    /// Registers of at most 64 bits, decoded; wider ones are skipped.
    pub fn narrow_registers(&self, c: &Circuit) -> RegisterValues {
        c.registers()
            .iter()
            .filter(|r| r.length <= 64)
            .map(|r| (r.name.clone(), self.read(r).expect("narrow register")))
            .collect()
    }
}

/// Applies the gates of `c` in order to a basis state. Fails on CV/CVDAG.
pub fn simulate(c: &Circuit, input: &BasisState) -> Result<BasisState, SimError> {
    if input.width() != c.width() {
        return Err(SimError::WidthMismatch {
            expected: c.width(),
            got: input.width(),
        });
    }
    let mut s = input.bits.clone();
    for (index, g) in c.gates().iter().enumerate() {
        let ops = g.operands();
        match g.kind() {
            GateKind::Not => s[ops[0].index()] ^= true,
            GateKind::Cnot => s[ops[1].index()] ^= s[ops[0].index()],
            GateKind::Toffoli => s[ops[2].index()] ^= s[ops[0].index()] & s[ops[1].index()],
            GateKind::Swap => s.swap(ops[0].index(), ops[1].index()),
            kind @ (GateKind::Cv | GateKind::Cvdag) => {
                return Err(SimError::NonClassicalGate { index, kind })
            }
        }
    }
    Ok(BasisState { bits: s })
}

/// Simulation that also admits CV/CVDAG, exact whenever every gate's
/// controls are in basis states when the gate runs: each qubit is then
/// `V^h |0>` for some `h` mod 4 (`V^2 = X`, `V^4 = I`) and the state stays
/// a product state. The output must again be a basis state.
pub fn simulate_sqrt_not(c: &Circuit, input: &BasisState) -> Result<BasisState, SimError> {
    if input.width() != c.width() {
        return Err(SimError::WidthMismatch {
            expected: c.width(),
            got: input.width(),
        });
    }
    let mut h: Vec<u8> = input.bits.iter().map(|&b| if b { 2 } else { 0 }).collect();
    let control = |h: &[u8], q: usize, index: usize| -> Result<bool, SimError> {
        match h[q] {
            0 => Ok(false),
            2 => Ok(true),
            _ => Err(SimError::ControlInSuperposition { index }),
        }
    };
    for (index, g) in c.gates().iter().enumerate() {
        let ops: Vec<usize> = g.operands().iter().map(|q| q.index()).collect();
        let shift = match g.kind() {
            GateKind::Swap => {
                h.swap(ops[0], ops[1]);
                continue;
            }
            GateKind::Not => Some(2),
            GateKind::Cnot => control(&h, ops[0], index)?.then_some(2),
            GateKind::Toffoli => {
                let a = control(&h, ops[0], index)?;
                let b = control(&h, ops[1], index)?;
                (a && b).then_some(2)
            }
            GateKind::Cv => control(&h, ops[0], index)?.then_some(1),
            GateKind::Cvdag => control(&h, ops[0], index)?.then_some(3),
        };
        if let Some(d) = shift {
            let t = *ops.last().unwrap();
            h[t] = (h[t] + d) % 4;
        }
    }
    let bits = h
        .iter()
        .enumerate()
        .map(|(qubit, &v)| match v {
            0 => Ok(false),
            2 => Ok(true),
            _ => Err(SimError::UnresolvedSuperposition { qubit }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BasisState { bits })
}

/// Product domain of register values; each named register ranges over
/// `0..bound`. Registers not named start at 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Domain {
    vars: Vec<(String, u64)>,
}

impl Domain {
    pub fn new() -> Domain {
        Domain::default()
    }

    pub fn with(mut self, register: impl Into<String>, bound: u64) -> Domain {
        assert!(bound > 0, "empty register range");
        self.vars.push((register.into(), bound));
        self
    }

    pub fn vars(&self) -> &[(String, u64)] {
        &self.vars
    }

    /// Number of points, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        self.vars
            .iter()
            .fold(1u128, |acc, (_, b)| acc.saturating_mul(*b as u128))
    }

    /// Point `index` in mixed-radix order (first variable fastest).
    pub fn nth(&self, mut index: u128) -> RegisterValues {
        let mut out = RegisterValues::new();
        for (name, bound) in &self.vars {
            let b = *bound as u128;
            out.insert(name.clone(), (index % b) as u64);
            index /= b;
        }
        out
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> RegisterValues {
        self.vars
            .iter()
            .map(|(name, bound)| (name.clone(), rng.gen_range(0..*bound)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Position in the enumeration or sample sequence.
    pub index: u128,
    pub input_registers: RegisterValues,
    pub expected: RegisterValues,
    pub actual: RegisterValues,
    /// Registers too wide to decode that did not come back unchanged.
    pub disturbed: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckOutcome {
    Pass { checked: u128 },
    Counterexample(Counterexample),
}

impl CheckOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, CheckOutcome::Pass { .. })
    }
}

/// Reference behaviour: given the input registers, returns the values of
/// the registers it changes. Every other register must come back as it
/// went in, which covers ancilla cleanliness.
pub type ReferenceFn = dyn Fn(&RegisterValues) -> RegisterValues + Send + Sync;

fn check_one(
    c: &Circuit,
    spec: &ReferenceFn,
    index: u128,
    input: RegisterValues,
) -> Result<Option<Counterexample>, SimError> {
    let state = BasisState::from_registers(c, &input)?;
    let mut expected: RegisterValues = c
        .registers()
        .iter()
        .filter(|r| r.length <= 64)
        .map(|r| (r.name.clone(), input.get(&r.name).copied().unwrap_or(0)))
        .collect();
    expected.extend(spec(&input));
    let out = simulate(c, &state)?;
    let actual = out.narrow_registers(c);
    let disturbed: Vec<String> = c
        .registers()
        .iter()
        .filter(|r| {
            r.length > 64 && out.bits()[r.offset..r.end()] != state.bits()[r.offset..r.end()]
        })
        .map(|r| r.name.clone())
        .collect();
    if actual == expected && disturbed.is_empty() {
        Ok(None)
    } else {
        Ok(Some(Counterexample {
            index,
            input_registers: input,
            expected,
            actual,
            disturbed,
        }))
    }
}

fn first_failure(
    c: &Circuit,
    spec: &ReferenceFn,
    inputs: impl IndexedParallelIterator<Item = (u128, RegisterValues)>,
) -> Result<Option<Counterexample>, SimError> {
    inputs
        .map(|(i, input)| check_one(c, spec, i, input))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .unwrap_or(Ok(None))
}

/// Checks every point of `domain`; the reported counterexample is the one
/// of least index.
pub fn exhaustive_check(
    c: &Circuit,
    spec: &ReferenceFn,
    domain: &Domain,
) -> Result<CheckOutcome, SimError> {
    let size = domain.size();
    let size = usize::try_from(size).expect("exhaustive domain too large to enumerate");
    let inputs = (0..size)
        .into_par_iter()
        .map(|i| (i as u128, domain.nth(i as u128)));
    Ok(match first_failure(c, spec, inputs)? {
        None => CheckOutcome::Pass {
            checked: size as u128,
        },
        Some(cex) => CheckOutcome::Counterexample(cex),
    })
}

/// Checks `trials` points drawn uniformly from `domain` with a ChaCha8
/// generator seeded by `seed`.
pub fn randomized_check(
    c: &Circuit,
    spec: &ReferenceFn,
    domain: &Domain,
    trials: u64,
    seed: u64,
) -> Result<CheckOutcome, SimError> {
    let samples = sample_inputs(domain, trials, seed);
    let inputs = samples
        .into_par_iter()
        .enumerate()
        .map(|(i, v)| (i as u128, v));
    Ok(match first_failure(c, spec, inputs)? {
        None => CheckOutcome::Pass {
            checked: trials as u128,
        },
        Some(cex) => CheckOutcome::Counterexample(cex),
    })
}

/// The sample sequence [`randomized_check`] uses.
pub fn sample_inputs(domain: &Domain, trials: u64, seed: u64) -> Vec<RegisterValues> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| domain.sample(&mut rng)).collect()
}

/// Integer references for the arithmetic builders, paired with the input
/// domain each builder is specified on.
pub mod reference {
    use super::{Domain, ReferenceFn, RegisterValues};

    pub struct Reference {
        pub domain: Domain,
        pub function: Box<ReferenceFn>,
    }

    impl Reference {
        fn new(
            domain: Domain,
            f: impl Fn(&RegisterValues) -> RegisterValues + Send + Sync + 'static,
        ) -> Reference {
            Reference {
                domain,
                function: Box::new(f),
            }
        }
    }

    fn get(v: &RegisterValues, name: &str) -> u64 {
        v.get(name).copied().unwrap_or(0)
    }

    /// `(a, b, carry_out) -> (a, (a + b) mod 2^n, carry_out ^ carry)`,
    /// gated by `ctl` when `controlled`.
    pub fn adder(n: usize, controlled: bool) -> Reference {
        let mut domain = Domain::new()
            .with("a", 1 << n)
            .with("b", 1 << n)
            .with("carry_out", 2);
        if controlled {
            domain = domain.with("ctl", 2);
        }
        Reference::new(domain, move |v| {
            let mut out = RegisterValues::new();
            if !controlled || get(v, "ctl") == 1 {
                let sum = get(v, "a") + get(v, "b");
                out.insert("b".into(), sum & ((1 << n) - 1));
                out.insert("carry_out".into(), get(v, "carry_out") ^ (sum >> n));
            }
            out
        })
    }

    /// `t -> (t + c) mod N` for `t < N` when all controls are set.
    pub fn const_modadd(constant: u64, modulus: u64, controls: usize) -> Reference {
        let mut domain = Domain::new().with("t", modulus);
        if controls > 0 {
            domain = domain.with("ctl", 1 << controls);
        }
        let all = (1u64 << controls) - 1;
        Reference::new(domain, move |v| {
            let mut out = RegisterValues::new();
            if get(v, "ctl") == all {
                out.insert("t".into(), (get(v, "t") + constant) % modulus);
            }
            out
        })
    }

    /// `y -> (c y) mod N` for `y < N`, gated by `ctl` when `controlled`.
    pub fn modmul(constant: u64, modulus: u64, controlled: bool) -> Reference {
        let mut domain = Domain::new().with("y", modulus);
        if controlled {
            domain = domain.with("ctl", 2);
        }
        Reference::new(domain, move |v| {
            let mut out = RegisterValues::new();
            if !controlled || get(v, "ctl") == 1 {
                let y = get(v, "y") as u128;
                out.insert("y".into(), (y * constant as u128 % modulus as u128) as u64);
            }
            out
        })
    }

    /// `e -> x^e mod N` into the zero-initialised result register `r`.
    pub fn modexp(n: usize, modulus: u64, base: u64) -> Reference {
        let domain = Domain::new().with("e", 1u64 << (2 * n));
        Reference::new(domain, move |v| {
            let mut out = RegisterValues::new();
            out.insert("r".into(), pow_mod(base, get(v, "e"), modulus));
            out
        })
    }

    /// Square-and-multiply.
    pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
        let m = modulus as u128;
        let mut result = 1u128 % m;
        let mut b = base as u128 % m;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * b % m;
            }
            b = b * b % m;
            exp >>= 1;
        }
        result as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, QubitId};

    fn q(i: u32) -> QubitId {
        QubitId(i)
    }

    #[test]
    fn basic_gates() {
        let c = Circuit::new(2, vec![])
            .unwrap()
            .with_gate(Gate::cnot(q(0), q(1)))
            .unwrap();
        let out = simulate(&c, &BasisState::from_bits(vec![true, false])).unwrap();
        assert_eq!(out.bits(), &[true, true]);

        let c = Circuit::new(3, vec![])
            .unwrap()
            .with_gate(Gate::toffoli(q(0), q(1), q(2)))
            .unwrap();
        let out = simulate(&c, &BasisState::from_bits(vec![true, true, false])).unwrap();
        assert_eq!(out.bits(), &[true, true, true]);

        let c = Circuit::new(2, vec![])
            .unwrap()
            .with_gate(Gate::cv(q(0), q(1)))
            .unwrap();
        assert_eq!(
            simulate(&c, &BasisState::zeros(2)),
            Err(SimError::NonClassicalGate {
                index: 0,
                kind: GateKind::Cv
            })
        );
    }

    #[test]
    fn register_round_trip() {
        let c = Circuit::new(9, vec![Register::new("x", 2, 5)]).unwrap();
        let reg = c.register("x").unwrap();
        for v in 0..32 {
            let mut s = BasisState::zeros(9);
            s.write(reg, v).unwrap();
            assert_eq!(s.read(reg).unwrap(), v);
            assert_eq!(s.bit(2), v & 1 == 1);
        }
        let mut s = BasisState::zeros(9);
        assert!(matches!(
            s.write(reg, 32),
            Err(SimError::ValueTooLarge { .. })
        ));
    }

    #[test]
    fn sqrt_not_tracking() {
        // Two CVs make a CNOT.
        let c = Circuit::new(2, vec![])
            .unwrap()
            .with_gate(Gate::cv(q(0), q(1)))
            .unwrap()
            .with_gate(Gate::cv(q(0), q(1)))
            .unwrap();
        let out = simulate_sqrt_not(&c, &BasisState::from_bits(vec![true, false])).unwrap();
        assert_eq!(out.bits(), &[true, true]);

        let half = Circuit::new(2, vec![])
            .unwrap()
            .with_gate(Gate::cv(q(0), q(1)))
            .unwrap();
        assert_eq!(
            simulate_sqrt_not(&half, &BasisState::from_bits(vec![true, false])),
            Err(SimError::UnresolvedSuperposition { qubit: 1 })
        );
        let used = half.clone().with_gate(Gate::cnot(q(1), q(0))).unwrap();
        assert_eq!(
            simulate_sqrt_not(&used, &BasisState::from_bits(vec![true, false])),
            Err(SimError::ControlInSuperposition { index: 1 })
        );
    }

    #[test]
    fn domain_enumeration() {
        let d = Domain::new().with("a", 3).with("b", 2);
        assert_eq!(d.size(), 6);
        let all: Vec<_> = (0..6).map(|i| (d.nth(i)["a"], d.nth(i)["b"])).collect();
        assert_eq!(all, vec![(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]);
    }

    #[test]
    fn randomized_is_deterministic() {
        let d = Domain::new().with("a", 256).with("b", 256);
        assert_eq!(sample_inputs(&d, 50, 7), sample_inputs(&d, 50, 7));
        assert_ne!(sample_inputs(&d, 50, 7), sample_inputs(&d, 50, 8));

        let c = Circuit::new(1, vec![Register::new("a", 0, 1)]).unwrap();
        let spec = |_: &RegisterValues| RegisterValues::new();
        let out = randomized_check(&c, &spec, &Domain::new().with("a", 2), 0, 1).unwrap();
        assert_eq!(out, CheckOutcome::Pass { checked: 0 });
    }

    #[test]
    fn pow_mod_matches_repeated_product() {
        for e in 0..40u64 {
            let naive = (0..e).fold(1u64, |acc, _| acc * 7 % 15);
            assert_eq!(reference::pow_mod(7, e, 15), naive);
        }
    }
}
