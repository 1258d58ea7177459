//! In-place adders `b <- a + b` with the carry XORed into a separate qubit.

use super::{AdderKind, Emitter};
use crate::circuit::QubitId;

/// Ancilla qubits an `n`-bit adder of `kind` needs (all start and end at 0).
pub fn adder_ancilla_len(kind: AdderKind, n: usize) -> usize {
    match kind {
        AdderKind::CdkmRipple => 1,
        AdderKind::VbeRipple => n,
        AdderKind::ConditionalSum => n - 1 + CarryTree::plan(n).scratch,
    }
}

pub(crate) fn emit_adder(
    e: &mut Emitter,
    kind: AdderKind,
    a: &[QubitId],
    b: &[QubitId],
    carry: QubitId,
    anc: &[QubitId],
) {
    debug_assert_eq!(a.len(), b.len());
    debug_assert_eq!(anc.len(), adder_ancilla_len(kind, a.len()));
    match kind {
        AdderKind::CdkmRipple => emit_cdkm(e, a, b, carry, anc[0]),
        AdderKind::VbeRipple => emit_vbe(e, a, b, carry, anc),
        AdderKind::ConditionalSum => emit_conditional_sum(e, a, b, carry, anc),
    }
}

fn maj(e: &mut Emitter, c: QubitId, b: QubitId, a: QubitId) {
    e.cnot(a, b);
    e.cnot(a, c);
    e.toffoli(c, b, a);
}

fn uma(e: &mut Emitter, c: QubitId, b: QubitId, a: QubitId) {
    e.toffoli(c, b, a);
    e.cnot(a, c);
    e.cnot(c, b);
}

/// CDKM ripple: a MAJ sweep leaves each carry in `a[i]`, the top carry is
/// copied out, and a UMA sweep restores `a` while writing the sum into `b`.
fn emit_cdkm(e: &mut Emitter, a: &[QubitId], b: &[QubitId], carry: QubitId, c0: QubitId) {
    let n = a.len();
    let carry_in = |i: usize| if i == 0 { c0 } else { a[i - 1] };
    for i in 0..n {
        maj(e, carry_in(i), b[i], a[i]);
    }
    e.cnot(a[n - 1], carry);
    for i in (0..n).rev() {
        uma(e, carry_in(i), b[i], a[i]);
    }
}

/// CDKM ripple whose sum and carry writes are gated by `ctl`. With `ctl`
/// clear each stage's MAJ is undone exactly.
pub(crate) fn emit_controlled_cdkm(
    e: &mut Emitter,
    ctl: QubitId,
    a: &[QubitId],
    b: &[QubitId],
    carry: QubitId,
    c0: QubitId,
) {
    let n = a.len();
    let carry_in = |i: usize| if i == 0 { c0 } else { a[i - 1] };
    for i in 0..n {
        maj(e, carry_in(i), b[i], a[i]);
    }
    e.toffoli(ctl, a[n - 1], carry);
    for i in (0..n).rev() {
        let c = carry_in(i);
        // inverse MAJ
        e.toffoli(c, b[i], a[i]);
        e.cnot(a[i], c);
        e.cnot(a[i], b[i]);
        // b[i] ^= ctl & (a[i] ^ c)
        e.toffoli(ctl, a[i], b[i]);
        e.toffoli(ctl, c, b[i]);
    }
}

/// VBE ripple: CARRY blocks compute every carry into `c`, then inverse
/// CARRY blocks clear them from the top down while SUM blocks write `b`.
fn emit_vbe(e: &mut Emitter, a: &[QubitId], b: &[QubitId], carry: QubitId, c: &[QubitId]) {
    let n = a.len();
    let next = |i: usize| if i + 1 < n { c[i + 1] } else { carry };
    let carry_block = |e: &mut Emitter, i: usize| {
        e.toffoli(a[i], b[i], next(i));
        e.cnot(a[i], b[i]);
        e.toffoli(c[i], b[i], next(i));
    };
    let sum_block = |e: &mut Emitter, i: usize| {
        e.cnot(a[i], b[i]);
        e.cnot(c[i], b[i]);
    };
    for i in 0..n {
        carry_block(e, i);
    }
    e.cnot(a[n - 1], b[n - 1]);
    sum_block(e, n - 1);
    for i in (0..n - 1).rev() {
        e.inverse_of(|e| carry_block(e, i));
        sum_block(e, i);
    }
}

/// Block-carry tree. Every aligned block of `2^l` bits carries the pair
/// (carry out if carry in = 0, carry out if carry in = 1); parents are
/// formed by selecting the high block's pair with the low block's carry.
/// A Brent-Kung down-sweep then resolves the carry into every position.
struct CarryTree {
    /// `nodes[l][m]` holds the hypothesis pair of bits `[m 2^l, (m+1) 2^l)`.
    nodes: Vec<Vec<(usize, usize)>>,
    /// `prefix[j]` holds the carry into bit `j` (`1 <= j <= n`).
    prefix: Vec<usize>,
    /// (select from `prefix[k]`, node (level, index), output slot)
    down: Vec<(usize, (usize, usize), usize)>,
    scratch: usize,
}

impl CarryTree {
    fn plan(n: usize) -> CarryTree {
        let mut scratch = 0usize;
        let mut alloc = || {
            scratch += 1;
            scratch - 1
        };
        let mut nodes = vec![(0..n).map(|_| (alloc(), alloc())).collect::<Vec<_>>()];
        let mut level = 1;
        while (1usize << level) <= n {
            nodes.push((0..n >> level).map(|_| (alloc(), alloc())).collect());
            level += 1;
        }
        let top = level - 1;
        let mut prefix = vec![usize::MAX; n + 1];
        for (l, row) in nodes.iter().enumerate() {
            prefix[1 << l] = row[0].0;
        }
        let mut down = Vec::new();
        for l in (1..=top).rev() {
            let mut m = 1;
            loop {
                let j = (m << l) | (1 << (l - 1));
                if j > n {
                    break;
                }
                let out = alloc();
                prefix[j] = out;
                down.push((m << l, (l - 1, 2 * m), out));
                m += 1;
            }
        }
        debug_assert!(prefix[1..].iter().all(|&p| p != usize::MAX));
        CarryTree {
            nodes,
            prefix,
            down,
            scratch,
        }
    }

    /// Computes the tree from operands `a`, `b` into zeroed scratch.
    fn emit(&self, e: &mut Emitter, a: &[QubitId], b: &[QubitId], s: &[QubitId]) {
        for (i, &(g, p)) in self.nodes[0].iter().enumerate() {
            e.toffoli(a[i], b[i], s[g]);
            e.cnot(a[i], s[p]);
            e.cnot(b[i], s[p]);
            e.cnot(s[g], s[p]);
        }
        for l in 1..self.nodes.len() {
            for (m, &(x0, x1)) in self.nodes[l].iter().enumerate() {
                let lo = self.nodes[l - 1][2 * m];
                let hi = self.nodes[l - 1][2 * m + 1];
                select(e, s[lo.0], (s[hi.0], s[hi.1]), s[x0]);
                select(e, s[lo.1], (s[hi.0], s[hi.1]), s[x1]);
            }
        }
        for &(k, (l, m), out) in &self.down {
            let node = self.nodes[l][m];
            select(e, s[self.prefix[k]], (s[node.0], s[node.1]), s[out]);
        }
    }
}

/// `out ^= if sel { hi.1 } else { hi.0 }`
fn select(e: &mut Emitter, sel: QubitId, hi: (QubitId, QubitId), out: QubitId) {
    e.cnot(hi.0, out);
    e.toffoli(sel, hi.0, out);
    e.toffoli(sel, hi.1, out);
}

/// Conditional-sum adder in logarithmic depth. The carries of `a + b` are
/// copied into `cr` and the tree uncomputed; `b` becomes the sum; then the
/// identical carry string of `a + !sum` is recomputed to clear `cr`.
fn emit_conditional_sum(
    e: &mut Emitter,
    a: &[QubitId],
    b: &[QubitId],
    carry: QubitId,
    anc: &[QubitId],
) {
    let n = a.len();
    let tree = CarryTree::plan(n);
    let (cr, scratch) = anc.split_at(n - 1);
    let tree_then_copy = |e: &mut Emitter, carry_out: Option<QubitId>| {
        tree.emit(e, a, b, scratch);
        if let Some(q) = carry_out {
            e.cnot(scratch[tree.prefix[n]], q);
        }
        for j in 1..n {
            e.cnot(scratch[tree.prefix[j]], cr[j - 1]);
        }
        e.inverse_of(|e| tree.emit(e, a, b, scratch));
    };

    tree_then_copy(e, Some(carry));
    for i in 0..n {
        e.cnot(a[i], b[i]);
    }
    for j in 1..n {
        e.cnot(cr[j - 1], b[j]);
    }
    if n > 1 {
        for &q in b {
            e.not(q);
        }
        tree_then_copy(e, None);
        for &q in b {
            e.not(q);
        }
    }
}

/// Controlled addition for adders without a native controlled form: the
/// addend is ANDed with `ctl` into `mask`, added, and the mask cleared.
#[allow(clippy::too_many_arguments)]
pub(crate) fn emit_masked_controlled_adder(
    e: &mut Emitter,
    kind: AdderKind,
    ctl: QubitId,
    a: &[QubitId],
    b: &[QubitId],
    carry: QubitId,
    anc: &[QubitId],
    mask: &[QubitId],
) {
    for (&ai, &mi) in a.iter().zip(mask) {
        e.toffoli(ctl, ai, mi);
    }
    emit_adder(e, kind, mask, b, carry, anc);
    for (&ai, &mi) in a.iter().zip(mask) {
        e.toffoli(ctl, ai, mi);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carry_tree_covers_every_position() {
        for n in 1..=70 {
            let t = CarryTree::plan(n);
            assert_eq!(t.prefix.len(), n + 1);
            let mut seen = std::collections::HashSet::new();
            for j in 1..=n {
                assert!(t.prefix[j] < t.scratch, "n={n} j={j}");
                assert!(seen.insert(t.prefix[j]), "prefix slots must be distinct");
            }
            // O(n): leaves, internal pairs, and at most n down-sweep slots.
            assert!(t.scratch <= 5 * n, "n={n} scratch={}", t.scratch);
        }
    }
}
