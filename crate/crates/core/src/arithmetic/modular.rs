//! Modular addition and multiplication by classical constants.

use super::adders::{adder_ancilla_len, emit_adder};
use super::{mul_mod, AdderKind, Emitter, Layout};
use crate::circuit::QubitId;

/// Scratch for one modular multiplier: product register `p`, constant
/// register `k`, carry `z`, comparison flag `f`, optional AND qubit `g`,
/// and the adder's own ancillae. All of it starts and ends at zero.
pub(crate) struct Unit {
    kind: AdderKind,
    p: Vec<QubitId>,
    k: Vec<QubitId>,
    z: QubitId,
    f: QubitId,
    pub(crate) g: Option<QubitId>,
    anc: Vec<QubitId>,
}

impl Unit {
    pub(crate) fn allocate(
        layout: &mut Layout,
        kind: AdderKind,
        n: usize,
        suffix: &str,
        with_and: bool,
        with_product: bool,
    ) -> Unit {
        let p = if with_product {
            layout.alloc(&format!("p{suffix}"), n)
        } else {
            Vec::new()
        };
        let k = layout.alloc(&format!("k{suffix}"), n);
        let z = layout.alloc(&format!("z{suffix}"), 1)[0];
        let f = layout.alloc(&format!("f{suffix}"), 1)[0];
        let g = with_and.then(|| layout.alloc(&format!("g{suffix}"), 1)[0]);
        let anc = layout.alloc(&format!("anc{suffix}"), adder_ancilla_len(kind, n));
        Unit {
            kind,
            p,
            k,
            z,
            f,
            g,
            anc,
        }
    }

    fn add(&self, e: &mut Emitter, t: &[QubitId], carry: QubitId) {
        emit_adder(e, self.kind, &self.k, t, carry, &self.anc);
    }
}

/// XORs a classical value into `k`: bits of `always` unconditionally, and
/// the bits where `gated` differs from `always` under `ctl`.
fn load(e: &mut Emitter, k: &[QubitId], always: u64, gated: u64, ctl: Option<QubitId>) {
    for (i, &q) in k.iter().enumerate() {
        let lo = (always >> i) & 1 == 1;
        let hi = (gated >> i) & 1 == 1;
        match ctl {
            None => {
                if hi {
                    e.not(q);
                }
            }
            Some(c) => {
                if lo {
                    e.not(q);
                }
                if lo != hi {
                    e.cnot(c, q);
                }
            }
        }
    }
}

/// `t <- (t + c) mod N` for `t < N` when `ctl` is set (or absent).
///
/// 1. add `2^n - N + c` with the carry into `f`: `f = [t + c >= N]`;
/// 2. add `N` back when `f` is clear, the certain carry is folded out of `z`;
/// 3. clear `f` by comparing the result with `c`.
pub(crate) fn emit_const_modadd(
    e: &mut Emitter,
    unit: &Unit,
    t: &[QubitId],
    c: u64,
    modulus: u64,
    ctl: Option<QubitId>,
) {
    if c == 0 {
        return;
    }
    let n = t.len();
    let top = 1u64 << n;
    let (k, z, f) = (&unit.k, unit.z, unit.f);

    let offset = top - modulus;
    load(e, k, offset, offset + c, ctl);
    unit.add(e, t, f);
    load(e, k, offset, offset + c, ctl);

    e.not(f);
    load(e, k, 0, modulus, Some(f));
    e.not(f);
    unit.add(e, t, z);
    e.not(f);
    load(e, k, 0, modulus, Some(f));
    e.not(f);
    e.not(z);
    e.cnot(f, z);

    load(e, k, top - c, top - c, None);
    unit.add(e, t, z);
    e.not(z);
    match ctl {
        None => e.cnot(z, f),
        Some(g) => e.toffoli(g, z, f),
    }
    e.not(z);
    e.inverse_of(|e| unit.add(e, t, z));
    load(e, k, top - c, top - c, None);
}

/// Runs `body` with the single control `y[i]` (and `ctl`, folded into the
/// unit's AND qubit when present).
fn with_controls(
    e: &mut Emitter,
    unit: &Unit,
    ctl: Option<QubitId>,
    yi: QubitId,
    body: impl FnOnce(&mut Emitter, QubitId),
) {
    match ctl {
        None => body(e, yi),
        Some(c) => {
            let g = unit.g.expect("controlled multiplier needs an AND qubit");
            e.toffoli(c, yi, g);
            body(e, g);
            e.toffoli(c, yi, g);
        }
    }
}

/// Adds `sum_i y_i * (c 2^i mod N)` into the unit's product register, in
/// the given bit order.
fn accumulate(
    e: &mut Emitter,
    unit: &Unit,
    y: &[QubitId],
    ctl: Option<QubitId>,
    c: u64,
    modulus: u64,
    order: impl Iterator<Item = usize>,
) {
    for i in order {
        let addend = mul_mod(c, pow2_mod(i, modulus), modulus);
        with_controls(e, unit, ctl, y[i], |e, q| {
            emit_const_modadd(e, unit, &unit.p, addend, modulus, Some(q))
        });
    }
}

fn pow2_mod(i: usize, modulus: u64) -> u64 {
    (0..i).fold(1 % modulus, |acc, _| mul_mod(acc, 2, modulus))
}

/// In-place `y <- c y mod N`: multiply into `p`, swap, then subtract
/// `c^-1 y` from `p`. Both halves visit `y` from the high bit down, so a
/// following multiplication on another unit can trail this one's clearing
/// half bit by bit.
pub(crate) fn emit_modmul(
    e: &mut Emitter,
    unit: &Unit,
    y: &[QubitId],
    ctl: Option<QubitId>,
    c: u64,
    c_inv: u64,
    modulus: u64,
) {
    let n = y.len();
    accumulate(e, unit, y, ctl, c, modulus, (0..n).rev());
    for (&yi, &pi) in y.iter().zip(&unit.p) {
        match ctl {
            None => e.swap(yi, pi),
            Some(c) => {
                e.cnot(pi, yi);
                e.toffoli(c, yi, pi);
                e.cnot(pi, yi);
            }
        }
    }
    e.inverse_of(|e| accumulate(e, unit, y, ctl, c_inv, modulus, 0..n));
}
