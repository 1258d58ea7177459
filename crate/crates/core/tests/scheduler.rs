use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shorcost::scheduler::{asap_schedule, depth, metrics};
use shorcost::{Circuit, Gate, GateKind, QubitId};

fn random_circuit(rng: &mut ChaCha8Rng) -> Circuit {
    let width = rng.gen_range(3..=10);
    let len = rng.gen_range(0..=200);
    let mut c = Circuit::new(width, vec![]).unwrap();
    for _ in 0..len {
        let kind = GateKind::ALL[rng.gen_range(0..GateKind::ALL.len())];
        let mut ops: Vec<QubitId> = Vec::new();
        while ops.len() < kind.arity() {
            let q = QubitId(rng.gen_range(0..width as u32));
            if !ops.contains(&q) {
                ops.push(q);
            }
        }
        c.push(Gate::new(kind, &ops).unwrap()).unwrap();
    }
    c
}

/// Longest chain of gates where consecutive members share a qubit.
fn longest_path(c: &Circuit) -> usize {
    let gates = c.gates();
    let mut chain = vec![1usize; gates.len()];
    for j in 0..gates.len() {
        for i in 0..j {
            let shares = gates[i]
                .operands()
                .iter()
                .any(|q| gates[j].operands().contains(q));
            if shares {
                chain[j] = chain[j].max(chain[i] + 1);
            }
        }
    }
    chain.into_iter().max().unwrap_or(0)
}

#[test]
fn asap_depth_matches_longest_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let c = random_circuit(&mut rng);
        let s = asap_schedule(&c);
        assert_eq!(s.depth(), longest_path(&c));
        assert_eq!(depth(&c), s.depth());
        let m = metrics(&c);
        assert_eq!(m.total_gates, c.len());
        assert!(m.max_concurrency <= c.width());
    }
}

#[test]
fn schedule_is_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let c = random_circuit(&mut rng);
        let s = asap_schedule(&c);
        let at = s.placement(c.len());
        for step in &s.timesteps {
            let mut used = vec![false; c.width()];
            for &g in step {
                for q in c.gates()[g].operands() {
                    assert!(!used[q.index()], "conflict in one timestep");
                    used[q.index()] = true;
                }
            }
        }
        for j in 0..c.len() {
            for i in 0..j {
                let (a, b) = (&c.gates()[i], &c.gates()[j]);
                if a.operands().iter().any(|q| b.operands().contains(q)) {
                    assert!(at[i] < at[j]);
                }
            }
        }
        assert_eq!(s.timesteps.iter().map(Vec::len).sum::<usize>(), c.len());
    }
}

#[test]
fn concatenation_rules() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let a = random_circuit(&mut rng);
        let b = random_circuit(&mut rng);
        // Disjoint: b shifted above a.
        let w = a.width() + b.width();
        let mut side = Circuit::new(w, vec![]).unwrap();
        side.extend(a.gates().iter().copied()).unwrap();
        let off = a.width() as u32;
        side.extend(
            b.gates()
                .iter()
                .map(|g| g.map_qubits(|q| QubitId(q.0 + off))),
        )
        .unwrap();
        assert_eq!(depth(&side), depth(&a).max(depth(&b)));
    }
    // Fully shared: every gate touches the same qubit.
    let chain = |k: usize| {
        let mut c = Circuit::new(2, vec![]).unwrap();
        c.extend((0..k).map(|_| Gate::cnot(QubitId(0), QubitId(1))))
            .unwrap();
        c
    };
    let mut both = chain(7);
    both.extend(chain(5).gates().iter().copied()).unwrap();
    assert_eq!(depth(&both), depth(&chain(7)) + depth(&chain(5)));
}
