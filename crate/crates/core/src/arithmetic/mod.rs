//! Reversible arithmetic synthesis: ripple and logarithmic-depth adders,
//! modular addition and multiplication by classical constants, and modular
//! exponentiation with several concurrent multiplier units.
//!
//! Every builder returns a self-contained [`Circuit`] whose registers are
//! named so the oracle can read them back:
//!
//! | builder | registers |
//! |---|---|
//! | [`build_adder`] | `a`, `b`, `carry_out`, `anc` |
//! | [`build_controlled_adder`] | `a`, `b`, `carry_out`, `ctl`, `anc`, `mask` (not for CDKM) |
//! | [`build_const_modadd`] | `t`, `ctl`, `k`, `z`, `f`, `g`, `anc` |
//! | [`build_modmul_const`] | `y`, `ctl`, `p`, `k`, `z`, `f`, `g`, `anc` |
//! | [`build_modexp`] | `e`, `r`, then `p{u}`, `k{u}`, `z{u}`, `f{u}`, `g{u}`, `anc{u}` per unit |
//!
//! Registers that a configuration does not need are omitted.

mod adders;
mod modular;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, QubitId, Register};

pub use adders::adder_ancilla_len;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithmeticError {
    #[error("bit width must be positive")]
    ZeroWidth,
    #[error("bit width {n} is too large (at most {max})")]
    TooWide { n: usize, max: usize },
    #[error("modulus {modulus} must satisfy 1 <= modulus < 2^{n}")]
    ModulusRange { modulus: u64, n: usize },
    #[error("modulus {0} must be odd and at least 3")]
    ModulusParity(u64),
    #[error("constant {constant} must be below the modulus {modulus}")]
    ConstantRange { constant: u64, modulus: u64 },
    #[error("constant {constant} has no inverse modulo {modulus}")]
    NotInvertible { constant: u64, modulus: u64 },
    #[error("base {base} must satisfy 2 <= base < {modulus}")]
    BaseRange { base: u64, modulus: u64 },
    #[error("multiplier count {s} must satisfy 1 <= s <= {max}")]
    Multipliers { s: usize, max: usize },
    #[error("control count {0} unsupported (0, 1 or 2)")]
    Controls(usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Widest operand the modular builders accept; keeps every constant below 2^62.
pub const MAX_BITS: usize = 62;
/// Widest plain adder. No classical constants are involved.
pub const MAX_ADDER_BITS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AdderKind {
    /// Carry ripple with an explicit n-qubit carry register.
    VbeRipple,
    /// Majority / un-majority ripple with a single ancilla.
    CdkmRipple,
    /// Both-hypothesis block carries merged by multiplexers; logarithmic depth.
    ConditionalSum,
}

impl AdderKind {
    pub const ALL: [AdderKind; 3] = [
        AdderKind::VbeRipple,
        AdderKind::CdkmRipple,
        AdderKind::ConditionalSum,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            AdderKind::VbeRipple => "vbe",
            AdderKind::CdkmRipple => "cdkm",
            AdderKind::ConditionalSum => "condsum",
        }
    }
}

impl fmt::Display for AdderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for AdderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "vbe" | "vbe_ripple" => Ok(AdderKind::VbeRipple),
            "cdkm" | "cdkm_ripple" => Ok(AdderKind::CdkmRipple),
            "condsum" | "conditional_sum" => Ok(AdderKind::ConditionalSum),
            other => Err(format!(
                "unknown adder `{other}` (expected vbe, cdkm or condsum)"
            )),
        }
    }
}

/// Parameters of a modular exponentiation circuit computing `x^e mod N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModexpSpec {
    pub n: usize,
    pub modulus: u64,
    pub base: u64,
    /// Number of concurrent multiplier units.
    pub multipliers: usize,
    pub adder: AdderKind,
}

impl ModexpSpec {
    pub fn validate(&self) -> Result<(), ArithmeticError> {
        check_width(self.n)?;
        let n = self.n;
        if self.modulus >= 1u64 << n {
            return Err(ArithmeticError::ModulusRange {
                modulus: self.modulus,
                n,
            });
        }
        if self.modulus < 3 || self.modulus.is_multiple_of(2) {
            return Err(ArithmeticError::ModulusParity(self.modulus));
        }
        if self.base < 2 || self.base >= self.modulus {
            return Err(ArithmeticError::BaseRange {
                base: self.base,
                modulus: self.modulus,
            });
        }
        if gcd(self.base, self.modulus) != 1 {
            return Err(ArithmeticError::NotInvertible {
                constant: self.base,
                modulus: self.modulus,
            });
        }
        let max = n / 2;
        if self.multipliers == 0 || self.multipliers > max {
            return Err(ArithmeticError::Multipliers {
                s: self.multipliers,
                max,
            });
        }
        Ok(())
    }

    /// Exponent register length.
    pub fn exponent_bits(&self) -> usize {
        2 * self.n
    }
}

/// `b <- (a + b) mod 2^n`, `carry_out ^= carry`, with `a` and ancillae
/// unchanged.
pub fn build_adder(kind: AdderKind, n: usize) -> Result<Circuit, ArithmeticError> {
    check_width_up_to(n, MAX_ADDER_BITS)?;
    let mut layout = Layout::default();
    let a = layout.alloc("a", n);
    let b = layout.alloc("b", n);
    let carry = layout.alloc("carry_out", 1)[0];
    let anc = layout.alloc("anc", adder_ancilla_len(kind, n));
    let mut e = Emitter::default();
    adders::emit_adder(&mut e, kind, &a, &b, carry, &anc);
    layout.finish(e)
}

/// [`build_adder`] gated by a one-qubit `ctl` register.
pub fn build_controlled_adder(kind: AdderKind, n: usize) -> Result<Circuit, ArithmeticError> {
    check_width_up_to(n, MAX_ADDER_BITS)?;
    let mut layout = Layout::default();
    let a = layout.alloc("a", n);
    let b = layout.alloc("b", n);
    let carry = layout.alloc("carry_out", 1)[0];
    let ctl = layout.alloc("ctl", 1)[0];
    let anc = layout.alloc("anc", adder_ancilla_len(kind, n));
    let mut e = Emitter::default();
    match kind {
        AdderKind::CdkmRipple => adders::emit_controlled_cdkm(&mut e, ctl, &a, &b, carry, anc[0]),
        _ => {
            let mask = layout.alloc("mask", n);
            adders::emit_masked_controlled_adder(&mut e, kind, ctl, &a, &b, carry, &anc, &mask);
        }
    }
    layout.finish(e)
}

/// `t <- (t + c) mod N` for `t < N` when every control is set.
pub fn build_const_modadd(
    kind: AdderKind,
    n: usize,
    constant: u64,
    modulus: u64,
    controls: usize,
) -> Result<Circuit, ArithmeticError> {
    check_width(n)?;
    check_modulus(n, modulus)?;
    if constant >= modulus {
        return Err(ArithmeticError::ConstantRange { constant, modulus });
    }
    if controls > 2 {
        return Err(ArithmeticError::Controls(controls));
    }
    let mut layout = Layout::default();
    let t = layout.alloc("t", n);
    let ctl = layout.alloc("ctl", controls);
    let unit = modular::Unit::allocate(&mut layout, kind, n, "", controls == 2, false);
    let mut e = Emitter::default();
    match ctl.as_slice() {
        [] => modular::emit_const_modadd(&mut e, &unit, &t, constant, modulus, None),
        [c] => modular::emit_const_modadd(&mut e, &unit, &t, constant, modulus, Some(*c)),
        [c1, c2] => {
            let g = unit.g.expect("and-qubit allocated for two controls");
            e.toffoli(*c1, *c2, g);
            modular::emit_const_modadd(&mut e, &unit, &t, constant, modulus, Some(g));
            e.toffoli(*c1, *c2, g);
        }
        _ => unreachable!(),
    }
    layout.finish(e)
}

/// `y <- (c * y) mod N` for `y < N`, optionally gated by `ctl`. The product
/// register `p` is returned to zero.
pub fn build_modmul_const(
    kind: AdderKind,
    n: usize,
    constant: u64,
    modulus: u64,
    controlled: bool,
) -> Result<Circuit, ArithmeticError> {
    check_width(n)?;
    check_modulus(n, modulus)?;
    if constant == 0 || constant >= modulus {
        return Err(ArithmeticError::ConstantRange { constant, modulus });
    }
    let inverse = mod_inverse(constant, modulus)
        .ok_or(ArithmeticError::NotInvertible { constant, modulus })?;
    let mut layout = Layout::default();
    let y = layout.alloc("y", n);
    let ctl = if controlled {
        Some(layout.alloc("ctl", 1)[0])
    } else {
        None
    };
    let unit = modular::Unit::allocate(&mut layout, kind, n, "", controlled, true);
    let mut e = Emitter::default();
    modular::emit_modmul(&mut e, &unit, &y, ctl, constant, inverse, modulus);
    layout.finish(e)
}

/// Exponent register `e` (2n bits) and result register `r`, initialised to
/// 1 by the circuit itself; on a basis exponent the result is `x^e mod N`.
///
/// The 2n controlled multiplications are dealt round-robin to
/// `spec.multipliers` units, each with its own product and scratch
/// registers. With two or more units the clearing half of one
/// multiplication overlaps the accumulating half of the next.
pub fn build_modexp(spec: &ModexpSpec) -> Result<Circuit, ArithmeticError> {
    spec.validate()?;
    let n = spec.n;
    let mut layout = Layout::default();
    let e_reg = layout.alloc("e", spec.exponent_bits());
    let r = layout.alloc("r", n);
    let units: Vec<modular::Unit> = (0..spec.multipliers)
        .map(|u| modular::Unit::allocate(&mut layout, spec.adder, n, &u.to_string(), true, true))
        .collect();
    let mut e = Emitter::default();
    e.not(r[0]);
    let mut factor = spec.base;
    for (j, &ctl) in e_reg.iter().enumerate() {
        let unit = &units[j % units.len()];
        let inverse = mod_inverse(factor, spec.modulus).expect("validated coprime base");
        modular::emit_modmul(&mut e, unit, &r, Some(ctl), factor, inverse, spec.modulus);
        factor = mul_mod(factor, factor, spec.modulus);
    }
    layout.finish(e)
}

fn check_width(n: usize) -> Result<(), ArithmeticError> {
    check_width_up_to(n, MAX_BITS)
}

fn check_width_up_to(n: usize, max: usize) -> Result<(), ArithmeticError> {
    if n == 0 {
        return Err(ArithmeticError::ZeroWidth);
    }
    if n > max {
        return Err(ArithmeticError::TooWide { n, max });
    }
    Ok(())
}

fn check_modulus(n: usize, modulus: u64) -> Result<(), ArithmeticError> {
    if modulus == 0 || modulus >= 1u64 << n {
        return Err(ArithmeticError::ModulusRange { modulus, n });
    }
    Ok(())
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Sequential register allocator.
#[derive(Default)]
pub(crate) struct Layout {
    registers: Vec<Register>,
    next: usize,
}

impl Layout {
    /// Allocates `len` fresh qubits; zero-length requests declare nothing.
    pub(crate) fn alloc(&mut self, name: &str, len: usize) -> Vec<QubitId> {
        if len == 0 {
            return Vec::new();
        }
        let reg = Register::new(name, self.next, len);
        self.next += len;
        let qubits = reg.qubits();
        self.registers.push(reg);
        qubits
    }

    fn finish(self, e: Emitter) -> Result<Circuit, ArithmeticError> {
        let mut c = Circuit::new(self.next, self.registers)?;
        c.extend(e.gates)?;
        Ok(c)
    }
}

/// Gate sink used by the constructions.
#[derive(Default)]
pub(crate) struct Emitter {
    gates: Vec<Gate>,
}

impl Emitter {
    #[inline]
    pub(crate) fn not(&mut self, t: QubitId) {
        self.gates.push(Gate::not(t));
    }

    #[inline]
    pub(crate) fn cnot(&mut self, c: QubitId, t: QubitId) {
        self.gates.push(Gate::cnot(c, t));
    }

    #[inline]
    pub(crate) fn toffoli(&mut self, c1: QubitId, c2: QubitId, t: QubitId) {
        self.gates.push(Gate::toffoli(c1, c2, t));
    }

    #[inline]
    pub(crate) fn swap(&mut self, a: QubitId, b: QubitId) {
        self.gates.push(Gate::swap(a, b));
    }

    /// Appends the inverse of whatever `f` emits.
    pub(crate) fn inverse_of(&mut self, f: impl FnOnce(&mut Emitter)) {
        let mut sub = Emitter::default();
        f(&mut sub);
        self.gates
            .extend(sub.gates.into_iter().rev().map(|g| g.inverse()));
    }
}
