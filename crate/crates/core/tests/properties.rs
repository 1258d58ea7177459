use proptest::prelude::*;
use shorcost::oracle::{simulate, BasisState};
use shorcost::{Circuit, Gate, GateKind, QubitId, Register};

fn arb_circuit(classical_only: bool) -> impl Strategy<Value = Circuit> {
    (1usize..=8).prop_flat_map(move |width| {
        let kinds: Vec<GateKind> = GateKind::ALL
            .iter()
            .copied()
            .filter(|k| k.arity() <= width && (!classical_only || k.is_classical()))
            .collect();
        let order: Vec<u32> = (0..width as u32).collect();
        let gate =
            (prop::sample::select(kinds), Just(order).prop_shuffle()).prop_map(|(k, idx)| {
                let ops: Vec<QubitId> = idx[..k.arity()].iter().map(|&i| QubitId(i)).collect();
                Gate::new(k, &ops).unwrap()
            });
        (prop::collection::vec(gate, 0..40), 0..=width).prop_map(move |(gates, split)| {
            let mut regs = Vec::new();
            if split > 0 {
                regs.push(Register::new("lo", 0, split));
            }
            if split < width {
                regs.push(Register::new("hi", split, width - split));
            }
            let mut c = Circuit::new(width, regs).unwrap();
            c.extend(gates).unwrap();
            c
        })
    })
}

proptest! {
    #[test]
    fn json_round_trip(c in arb_circuit(false)) {
        let text = c.to_json();
        let back = Circuit::from_json(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn inverse_is_involution(c in arb_circuit(false)) {
        prop_assert_eq!(c.inverse().inverse(), c.clone());
        prop_assert_eq!(c.inverse().census().total, c.census().total);
    }

    #[test]
    fn inverse_undoes_simulation(c in arb_circuit(true), seed in any::<u64>()) {
        let bits: Vec<bool> = (0..c.width()).map(|i| (seed >> (i % 64)) & 1 == 1).collect();
        let x = BasisState::from_bits(bits);
        let y = simulate(&c, &x).unwrap();
        prop_assert_eq!(simulate(&c.inverse(), &y).unwrap(), x);
    }
}
