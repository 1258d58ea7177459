use shorcost::architecture::{
    check_conformance, decompose_toffoli, lower_for, route_linear, sequence_implements_toffoli,
    toffoli_decomposition, verify_toffoli_identity, ArchModel,
};
use shorcost::arithmetic::{build_adder, build_const_modadd, build_modexp, AdderKind, ModexpSpec};
use shorcost::oracle::{simulate, simulate_sqrt_not, BasisState, Domain};
use shorcost::scheduler::depth;
use shorcost::{Circuit, Exact, GateKind, QubitId};

fn q(i: u32) -> QubitId {
    QubitId(i)
}

/// Routed output read back through the final layout must match the source.
fn assert_routed_equivalent(c: &Circuit, inputs: impl Iterator<Item = BasisState>) -> usize {
    let lowered = decompose_toffoli(c);
    let (routed, perm) = route_linear(&lowered).unwrap();
    assert!(check_conformance(&routed, &ArchModel::NTC).conforms);
    let mut checked = 0;
    for input in inputs {
        let want = simulate(c, &input).unwrap();
        let got = simulate_sqrt_not(&routed, &input).unwrap();
        for logical in 0..c.width() {
            assert_eq!(
                got.bit(perm.position(logical)),
                want.bit(logical),
                "qubit {logical} on input {:?}",
                input.bits()
            );
        }
        checked += 1;
    }
    checked
}

fn all_states(width: usize) -> impl Iterator<Item = BasisState> {
    (0u64..1 << width)
        .map(move |x| BasisState::from_bits((0..width).map(|i| x >> i & 1 == 1).collect()))
}

/// Seeded random basis states over the whole width.
fn random_states(width: usize, count: usize, seed: u64) -> impl Iterator<Item = BasisState> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |_| BasisState::from_bits((0..width).map(|_| rng.gen()).collect()))
}

#[test]
fn toffoli_identity_exact() {
    assert!(verify_toffoli_identity());
    let seq = toffoli_decomposition(q(0), q(1), q(2));
    assert!(sequence_implements_toffoli::<Exact>(&seq));
    assert!(!sequence_implements_toffoli::<i64>(&seq[..0]));
}

#[test]
fn toffoli_identity_rejects_every_single_gate_deletion() {
    let seq = toffoli_decomposition(q(0), q(1), q(2));
    for skip in 0..seq.len() {
        let cut: Vec<_> = seq
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, g)| *g)
            .collect();
        assert!(
            !sequence_implements_toffoli::<Exact>(&cut),
            "deleting gate {skip}"
        );
    }
}

#[test]
fn routed_cdkm_adder_all_basis_states() {
    for n in 1..=4 {
        let c = build_adder(AdderKind::CdkmRipple, n).unwrap();
        let checked = assert_routed_equivalent(&c, all_states(c.width()));
        assert_eq!(checked, 1usize << c.width());
    }
}

#[test]
fn routed_other_adders_all_basis_states() {
    for kind in [AdderKind::VbeRipple, AdderKind::ConditionalSum] {
        for n in 1..=6 {
            let c = build_adder(kind, n).unwrap();
            if c.width() <= 12 {
                assert_routed_equivalent(&c, all_states(c.width()));
            } else {
                assert_routed_equivalent(&c, random_states(c.width(), 2000, n as u64));
            }
        }
    }
}

#[test]
fn routed_modadd_valid_inputs() {
    let c = build_const_modadd(AdderKind::CdkmRipple, 4, 11, 15, 1).unwrap();
    let domain = Domain::new().with("t", 15).with("ctl", 2);
    let inputs =
        (0..domain.size()).map(|i| BasisState::from_registers(&c, &domain.nth(i)).unwrap());
    assert_eq!(assert_routed_equivalent(&c, inputs), 30);
}

#[test]
fn modexp_lowers_to_ntc() {
    let spec = ModexpSpec {
        n: 4,
        modulus: 15,
        base: 7,
        multipliers: 1,
        adder: AdderKind::CdkmRipple,
    };
    let c = build_modexp(&spec).unwrap();
    assert!(!check_conformance(&c, &ArchModel::NTC).conforms);
    assert!(check_conformance(&c, &ArchModel::AC).conforms);
    let ntc = lower_for(&c, &ArchModel::NTC).unwrap();
    let conf = check_conformance(&ntc, &ArchModel::NTC);
    assert!(conf.conforms, "{conf:?}");
    assert_eq!(ntc.census().count(GateKind::Toffoli), 0);
    assert!(depth(&ntc) > depth(&c));
}

#[test]
fn ntc_depth_exceeds_ac_for_every_adder() {
    for kind in [
        AdderKind::VbeRipple,
        AdderKind::CdkmRipple,
        AdderKind::ConditionalSum,
    ] {
        for n in [2, 4, 8] {
            let c = build_adder(kind, n).unwrap();
            let ac = depth(&lower_for(&c, &ArchModel::AC).unwrap());
            let ntc = depth(&lower_for(&c, &ArchModel::NTC).unwrap());
            assert!(ntc > ac, "{kind:?} n={n}: {ntc} <= {ac}");
        }
    }
}
