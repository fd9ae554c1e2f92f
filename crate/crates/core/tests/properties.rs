//! Property tests for the library invariants.

use std::f64::consts::PI;

use magiclab::catalog::{
    build_catalog, read_catalog, two_qubit_orbits, write_catalog, CatalogOptions, EntryKind,
};
use magiclab::claims::{verify_claims, ClaimConfig};
use magiclab::clifford::{clifford_generators, clifford_orbit, cnot, DEFAULT_ORBIT_CAP};
use magiclab::entanglement::concurrence;
use magiclab::exact::rational_string;
use magiclab::magic::{xi, xi2_closed_1q, xi2_closed_2q, xi2_exact};
use magiclab::optimize::{
    bloch_amplitudes, hypersphere_amplitudes, multistart_minimize, param_to_state, state_to_param,
    ParamPoint, SearchConfig, Xi2Objective,
};
use magiclab::structure::{certify_wh_mub_fiducial, partition_by_wh_orbit};
use magiclab::wh_group::{wh_orbit, WhGroup};
use magiclab::{PureState, C64};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn state(dim: usize) -> impl Strategy<Value = PureState> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter_map("zero vector", |v| {
            PureState::normalize(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).ok()
        })
        .prop_filter("tiny norm", |p| {
            p.amplitudes().iter().any(|c| c.norm() > 1e-3)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_key_ignores_phase_and_scale(psi in state(4), phi in 0.0f64..2.0 * PI, scale in 0.1f64..10.0) {
        let k = psi.canonical_key();
        prop_assert_eq!(psi.with_phase(phi).canonical_key(), k.clone());
        let scaled: Vec<C64> = psi.amplitudes().iter().map(|c| c * scale).collect();
        prop_assert_eq!(PureState::normalize(scaled).unwrap().canonical_key(), k);
    }

    #[test]
    fn phase_equality_is_reflexive_and_symmetric(a in state(4), b in state(4), phi in 0.0f64..2.0 * PI) {
        let tol = 1e-9;
        prop_assert!(a.equal_up_to_phase(&a, tol).unwrap());
        prop_assert!(a.equal_up_to_phase(&a.with_phase(phi), tol).unwrap());
        prop_assert_eq!(a.equal_up_to_phase(&b, tol).unwrap(), b.equal_up_to_phase(&a, tol).unwrap());
    }

    #[test]
    fn purity_sum_rule(one in state(2), two in state(4)) {
        prop_assert!((xi(1.0, &one, &WhGroup::qubits(1).unwrap()).unwrap() - 1.0).abs() <= 1e-10);
        prop_assert!((xi(1.0, &two, &WhGroup::qubits(2).unwrap()).unwrap() - 1.0).abs() <= 1e-10);
        prop_assert!((xi(1.0, &two, &WhGroup::qudit(4).unwrap()).unwrap() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn xi2_is_clifford_invariant(psi in state(4)) {
        let g = WhGroup::qubits(2).unwrap();
        let x = xi(2.0, &psi, &g).unwrap();
        for gate in clifford_generators(2).unwrap() {
            let y = xi(2.0, &psi.apply(gate.matrix()).unwrap(), &g).unwrap();
            prop_assert!((x - y).abs() <= 1e-11);
        }
    }

    #[test]
    fn xi2_range(psi in state(4)) {
        let x = xi(2.0, &psi, &WhGroup::qubits(2).unwrap()).unwrap();
        prop_assert!((7.0 / 16.0 - 1e-9..=1.0 + 1e-12).contains(&x), "xi2 = {}", x);
    }

    #[test]
    fn closed_forms_match_direct_sum(p in proptest::array::uniform6(0.0f64..2.0 * PI)) {
        let two = PureState::normalize(hypersphere_amplitudes(&p)).unwrap();
        prop_assert!((xi2_closed_2q(&p) - xi(2.0, &two, &WhGroup::qubits(2).unwrap()).unwrap()).abs() <= 1e-11);
        let one = PureState::normalize(bloch_amplitudes(p[0], p[1])).unwrap();
        prop_assert!((xi2_closed_1q(p[0], p[1]) - xi(2.0, &one, &WhGroup::qubits(1).unwrap()).unwrap()).abs() <= 1e-11);
    }

    #[test]
    fn concurrence_is_wh_invariant(psi in state(4)) {
        let c0 = concurrence(&psi).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c0));
        for op in WhGroup::qubits(2).unwrap().operators() {
            prop_assert!((concurrence(&op.apply(&psi).unwrap()).unwrap() - c0).abs() <= 1e-12);
        }
    }

    #[test]
    fn wh_orbit_size_divides_group_order(psi in state(4)) {
        let n = wh_orbit(&psi, &WhGroup::qubits(2).unwrap()).unwrap().size();
        prop_assert_eq!(16 % n, 0);
    }

    #[test]
    fn parameters_round_trip(psi in state(4)) {
        let back = param_to_state(&state_to_param(&psi).unwrap()).unwrap();
        prop_assert!(back.equal_up_to_phase(&psi, 1e-9).unwrap());
    }

    #[test]
    fn parameter_points_are_wrapped(raw in proptest::array::uniform6(-20.0f64..20.0)) {
        let p = ParamPoint::from_raw(&raw);
        prop_assert!(p.validate().is_ok());
        prop_assert!(param_to_state(&p).is_ok());
    }
}

#[test]
fn xi2_range_on_many_random_states() {
    let g = WhGroup::qubits(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let violations = (0..100_000)
        .map(|_| xi(2.0, &PureState::haar_random(4, &mut rng), &g).unwrap())
        .filter(|x| !(7.0 / 16.0 - 1e-9..=1.0 + 1e-12).contains(x))
        .count();
    assert_eq!(violations, 0);
}

#[test]
fn exact_conversion_preserves_inner_products() {
    let (stab, magic) = two_qubit_orbits().unwrap();
    let exact: Vec<_> = stab
        .iter()
        .chain(&magic)
        .flat_map(|o| o.exact.clone().unwrap())
        .collect();
    assert_eq!(exact.len(), 540);
    let pure: Vec<PureState> = exact.iter().map(|e| e.to_pure()).collect();
    for i in (0..exact.len()).step_by(7) {
        for j in 0..exact.len() {
            let (n, d) = exact[i].inner_product(&exact[j]).unwrap();
            let d = d.to_f64().unwrap();
            let z = C64::new(n.re.to_f64().unwrap() / d, n.im.to_f64().unwrap() / d);
            assert!((z - pure[i].inner_product(&pure[j]).unwrap()).norm() <= 1e-14);
        }
    }
}

#[test]
fn magic_orbit_is_closed_and_xi2_constant() {
    let (stab, magic) = two_qubit_orbits().unwrap();
    let gens = clifford_generators(2).unwrap();
    let g = WhGroup::qubits(2).unwrap();
    let all: Vec<PureState> = magic.iter().flat_map(|o| o.states.clone()).collect();
    let orbit = clifford_orbit(&all[0], &gens, DEFAULT_ORBIT_CAP).unwrap();
    for psi in &all {
        for gate in &gens {
            assert!(orbit.contains(&psi.apply(gate.matrix()).unwrap()));
        }
        assert!((xi(2.0, psi, &g).unwrap() - 7.0 / 16.0).abs() <= 1e-11);
    }
    for e in magic.iter().flat_map(|o| o.exact.clone().unwrap()) {
        assert_eq!(rational_string(&xi2_exact(&e, &g).unwrap()), "7/16");
    }
    for psi in stab.iter().flat_map(|o| &o.states) {
        assert!((xi(2.0, psi, &g).unwrap() - 1.0).abs() <= 1e-11);
    }
}

#[test]
fn orbit_sizes_ignore_redundant_generators() {
    let (_, magic) = two_qubit_orbits().unwrap();
    let mut gens = clifford_generators(2).unwrap();
    let seed = magic[0].states[0].clone();
    let before = clifford_orbit(&seed, &gens, DEFAULT_ORBIT_CAP)
        .unwrap()
        .size();
    gens.push(cnot(1, 0).unwrap());
    assert_eq!(
        clifford_orbit(&seed, &gens, DEFAULT_ORBIT_CAP)
            .unwrap()
            .size(),
        before
    );
    let zero = PureState::basis(4, 0);
    assert_eq!(
        clifford_orbit(&zero, &gens, DEFAULT_ORBIT_CAP)
            .unwrap()
            .size(),
        60
    );
}

#[test]
fn wh_partition_is_disjoint_and_covering() {
    let (_, magic) = two_qubit_orbits().unwrap();
    let all: Vec<PureState> = magic.iter().flat_map(|o| o.states.clone()).collect();
    let parts = partition_by_wh_orbit(&all, &WhGroup::qubits(2).unwrap()).unwrap();
    let mut seen = vec![0usize; all.len()];
    for p in &parts {
        for s in &p.states {
            let hits: Vec<usize> = (0..all.len())
                .filter(|&k| all[k].equal_up_to_phase(s, 1e-9).unwrap())
                .collect();
            assert_eq!(hits.len(), 1);
            seen[hits[0]] += 1;
        }
    }
    assert!(seen.iter().all(|&n| n == 1));
}

#[test]
fn search_is_reproducible() {
    let obj = Xi2Objective::two_qubit();
    let a = multistart_minimize(&obj, &SearchConfig::new(64, 3)).unwrap();
    let b = multistart_minimize(&obj, &SearchConfig::new(64, 3)).unwrap();
    assert_eq!(
        serde_json::to_string(&a.records).unwrap(),
        serde_json::to_string(&b.records).unwrap()
    );
}

#[test]
fn catalog_round_trip_and_consistency() {
    let cat = build_catalog(&CatalogOptions::new(42)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_catalog(dir.path(), &cat).unwrap();
    let back = read_catalog(dir.path()).unwrap();
    let keys = |c: &magiclab::catalog::Catalog| -> Vec<_> {
        c.entries()
            .map(|e| e.pure().unwrap().canonical_key())
            .collect()
    };
    assert_eq!(keys(&cat), keys(&back));
    let g = WhGroup::qubits(2).unwrap();
    for e in back.of_kind(EntryKind::Magic2q) {
        assert!(
            certify_wh_mub_fiducial(&e.pure().unwrap(), &g)
                .unwrap()
                .pass
        );
    }
    for e in back.of_kind(EntryKind::Stabilizer) {
        assert_eq!(
            rational_string(&xi2_exact(&e.exact().unwrap().unwrap(), &g).unwrap()),
            "1"
        );
    }
}

#[test]
fn claims_are_deterministic() {
    let cfg = ClaimConfig::new(42);
    let a = verify_claims(&cfg);
    let b = verify_claims(&cfg);
    let pass = |r: &[magiclab::claims::ClaimReport]| {
        r.iter()
            .map(|c| (c.claim_id.clone(), c.pass))
            .collect::<Vec<_>>()
    };
    assert_eq!(pass(&a), pass(&b));
    let exact = |r: &[magiclab::claims::ClaimReport]| {
        r.iter()
            .filter(|c| c.tolerance == 0.0)
            .map(|c| c.computed.clone())
            .collect::<Vec<_>>()
    };
    assert_eq!(exact(&a), exact(&b));
}
