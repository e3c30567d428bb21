use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quadent_core::catalog::{make_basis, make_state, NamedBasis, RESOURCE_NAMES};
use quadent_core::densecode::{capacity, SenderChoice};
use quadent_core::entanglement::{pair_concurrence, three_tangle_pure};
use quadent_core::locc::{
    builtin_scenarios as locc_scenarios, candidate_set, check_certificate, protocol, protocol_certificate,
    run_discrimination,
};
use quadent_core::measure::{enumerate_outcomes, MeasurementPlan};
use quadent_core::teleport::{
    builtin_scenario, run_scenario, synthesize_corrections, AllowedOps, CorrectionSpec, Synthesis,
};
use quadent_core::{LocalUnitary, PureState};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn shuffled(n: usize, r: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, r.random_range(0..=i));
    }
    p
}

fn max_diff(a: &PureState, b: &PureState) -> f64 {
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Haar-random orthonormal basis on `k` qubits.
fn random_basis(k: usize, r: &mut ChaCha8Rng) -> NamedBasis {
    let u = LocalUnitary::haar_random(k, r).unwrap();
    let d = 1 << k;
    let vectors =
        (0..d).map(|j| PureState::new(k, (0..d).map(|i| u.entries()[i * d + j]).collect()).unwrap()).collect();
    NamedBasis::new("haar", vectors, (0..d).map(|j| format!("h{j}")).collect()).unwrap()
}

fn random_plan(n: usize, r: &mut ChaCha8Rng) -> MeasurementPlan {
    let order = shuffled(n, r);
    let mut steps = Vec::new();
    let mut at = 0;
    while at < n {
        let k = r.random_range(1..=(n - at).min(3));
        let targets = order[at..at + k].to_vec();
        let basis = match (k, r.random_range(0..3)) {
            (2, 0) => make_basis("bell").unwrap(),
            (3, 0) => make_basis("ghz3_full").unwrap(),
            (1, 0) => make_basis("plus_minus").unwrap(),
            (_, 1) => make_basis(&format!("computational:{k}")).unwrap(),
            _ => random_basis(k, r),
        };
        steps.push((targets, basis));
        at += k;
        if r.random_bool(0.3) {
            break;
        }
    }
    MeasurementPlan::new(steps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalization_survives_op_sequences(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let mut s = PureState::haar_random(n, &mut r).unwrap();
        for _ in 0..100 {
            let m = s.num_qubits();
            match r.random_range(0..3) {
                0 if m < 6 => s = s.tensor(&PureState::haar_random(1, &mut r).unwrap()).unwrap(),
                1 => {
                    let q = r.random_range(0..m);
                    s = s.apply_local(&LocalUnitary::haar_random(1, &mut r).unwrap(), &[q]).unwrap();
                }
                _ => s = s.permute_qubits(&shuffled(m, &mut r)).unwrap(),
            }
            prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn adjoint_undoes_local_unitary(seed in any::<u64>(), n in 2usize..5, k in 1usize..3) {
        let mut r = rng(seed);
        let s = PureState::haar_random(n, &mut r).unwrap();
        let u = LocalUnitary::haar_random(k, &mut r).unwrap();
        let targets = shuffled(n, &mut r)[..k].to_vec();
        let back = s.apply_local(&u, &targets).unwrap().apply_local(&u.adjoint(), &targets).unwrap();
        prop_assert!(max_diff(&back, &s) < 1e-12);
    }

    #[test]
    fn permutations_compose(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let s = PureState::haar_random(n, &mut r).unwrap();
        let p1 = shuffled(n, &mut r);
        let p2 = shuffled(n, &mut r);
        let composed: Vec<usize> = p1.iter().map(|&i| p2[i]).collect();
        let two = s.permute_qubits(&p1).unwrap().permute_qubits(&p2).unwrap();
        prop_assert!(max_diff(&two, &s.permute_qubits(&composed).unwrap()) < 1e-15);
    }

    #[test]
    fn reductions_have_unit_trace_and_bounded_purity(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let s = PureState::haar_random(n, &mut r).unwrap();
        let all: Vec<usize> = (0..n).collect();
        prop_assert!((s.reduced_density(&all).unwrap().purity() - 1.0).abs() < 1e-12);
        let k = r.random_range(1..=n);
        let keep = shuffled(n, &mut r)[..k].to_vec();
        let rho = s.reduced_density(&keep).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
        let p = rho.purity();
        prop_assert!(p >= 1.0 / rho.dim() as f64 - 1e-12 && p <= 1.0 + 1e-12);
    }

    #[test]
    fn fidelity_is_symmetric_and_phase_blind(seed in any::<u64>(), n in 1usize..5, theta in -3.2f64..3.2) {
        let mut r = rng(seed);
        let a = PureState::haar_random(n, &mut r).unwrap();
        let b = PureState::haar_random(n, &mut r).unwrap();
        let f = a.fidelity(&b).unwrap();
        prop_assert!((f - b.fidelity(&a).unwrap()).abs() < 1e-14);
        prop_assert!((f - a.with_global_phase(theta).fidelity(&b).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn outcome_probabilities_sum_to_one(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let s = PureState::haar_random(n, &mut r).unwrap();
        let plan = random_plan(n, &mut r);
        let branches = enumerate_outcomes(&s, &plan).unwrap();
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for b in &branches {
            prop_assert!((b.residual.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ghz_three_plus_one_refinement(seed in any::<u64>()) {
        let mut r = rng(seed);
        let joint = PureState::haar_random(1, &mut r).unwrap().tensor(&make_state("GHZ4", &[]).unwrap().state).unwrap();
        let (g3, pm) = (make_basis("ghz3_full").unwrap(), make_basis("plus_minus").unwrap());
        let one = MeasurementPlan::new(vec![(vec![0, 1, 2, 3], g3.tensor(&pm).unwrap())]).unwrap();
        let two = MeasurementPlan::new(vec![(vec![0, 1, 2], g3), (vec![3], pm)]).unwrap();
        let a = enumerate_outcomes(&joint, &one).unwrap();
        let b = enumerate_outcomes(&joint, &two).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(&x.labels[0], &y.labels.join("⊗"));
            prop_assert!((x.probability - y.probability).abs() < 1e-12);
            prop_assert!((x.residual.fidelity(&y.residual).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn concurrence_is_local_unitary_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = PureState::haar_random(3, &mut r).unwrap();
        let dressed = s
            .apply_local(&LocalUnitary::haar_random(1, &mut r).unwrap(), &[0])
            .unwrap()
            .apply_local(&LocalUnitary::haar_random(1, &mut r).unwrap(), &[1])
            .unwrap();
        let c0 = pair_concurrence(&s, 0, 1).unwrap();
        let c1 = pair_concurrence(&dressed, 0, 1).unwrap();
        prop_assert!((c0 - c1).abs() < 1e-9, "{} vs {}", c0, c1);
    }

    #[test]
    fn three_tangle_is_permutation_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = PureState::haar_random(3, &mut r).unwrap();
        let t = three_tangle_pure(&s).unwrap();
        for p in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            prop_assert!((three_tangle_pure(&s.permute_qubits(&p).unwrap()).unwrap() - t).abs() < 1e-9);
        }
    }

    #[test]
    fn sigma2_phase_does_not_change_capacity(seed in any::<u64>(), k in 1usize..3) {
        let mut r = rng(seed);
        let s = quadent_core::catalog::NamedState { name: "random".into(), params: vec![], state: PureState::haar_random(3, &mut r).unwrap() };
        let choice = SenderChoice::Fixed((0..k).collect());
        prop_assert_eq!(
            capacity(&s, &choice, false).unwrap().max_orthogonal,
            capacity(&s, &choice, true).unwrap().max_orthogonal
        );
    }
}

#[test]
fn catalog_capacities_are_monotone_and_bounded() {
    for name in RESOURCE_NAMES.iter().chain(&["W11"]) {
        let s = make_state(name, &[]).unwrap();
        let mut last = 0;
        for k in 1..=3 {
            for plain in [false, true] {
                let n = capacity(&s, &SenderChoice::Fixed((0..k).collect()), plain).unwrap().max_orthogonal;
                assert!(n >= last && n <= 16, "{name} DC{k}");
                if plain {
                    assert_eq!(n, capacity(&s, &SenderChoice::Fixed((0..k).collect()), false).unwrap().max_orthogonal);
                }
                last = n;
            }
        }
    }
    let omega = make_state("Omega", &[]).unwrap();
    for k in [2, 3] {
        assert_eq!(capacity(&omega, &SenderChoice::Fixed((0..k).collect()), false).unwrap().max_orthogonal, 16);
    }
}

#[test]
fn teleport_reports_are_linear_uniform_and_deterministic() {
    for id in quadent_core::teleport::builtin_ids() {
        let s = builtin_scenario(&id).unwrap();
        let r = run_scenario(&s, 7).unwrap();
        assert!(r.linearity_holds(), "{id}");
        if r.feasible {
            assert!(r.uniform, "{id}");
        }
    }
    let w = builtin_scenario("w_plain_1q").unwrap();
    let a = run_scenario(&w, 42).unwrap().certificate.unwrap();
    let b = run_scenario(&w, 42).unwrap().certificate.unwrap();
    assert_eq!(a, b);
}

#[test]
fn synthesized_tables_replay() {
    for id in ["ghz_1q_4p", "omega_1q_3p1_3party", "q5_1q_xi", "omega_2q_bell_bell_cz", "w_3q_equal"] {
        let s = builtin_scenario(id).unwrap();
        let allowed = match &s.corrections {
            CorrectionSpec::Synthesize(a) => *a,
            CorrectionSpec::Table(_) => AllowedOps::PaulisDiagonal,
        };
        let Synthesis::Feasible(table) =
            synthesize_corrections(&s.resource, &s.plan, &s.distribution, &s.family, allowed, 42).unwrap()
        else {
            panic!("{id} infeasible");
        };
        let mut fixed = s.clone();
        fixed.corrections = CorrectionSpec::Table(table);
        let r = run_scenario(&fixed, 42).unwrap();
        assert!(r.feasible && r.worst_fidelity > 1.0 - 1e-10, "{id}");
        assert_eq!(r.per_outcome, run_scenario(&s, 42).unwrap().per_outcome, "{id}");
    }
}

#[test]
fn locc_success_keeps_prefix_orthogonality_and_certificates_imply_protocols() {
    for sc in locc_scenarios() {
        let set = candidate_set(sc.set).unwrap();
        let p = protocol(sc.protocol).unwrap();
        let r = run_discrimination(&set, &p).unwrap();
        if r.success {
            assert!(r.round_orthogonal.iter().all(|&o| o), "{}", sc.id);
        }
        if check_certificate(&set, &protocol_certificate(&set, &p).unwrap()).unwrap().passed {
            assert!(r.success, "{}", sc.id);
        }
    }
    let ghz = candidate_set("ghz_8").unwrap();
    let bell = run_discrimination(&ghz, &protocol("bell13_bell24").unwrap()).unwrap();
    let pm = run_discrimination(&ghz, &protocol("pm4_ghz3").unwrap()).unwrap();
    assert!(pm.inter_receiver_cbits < bell.inter_receiver_cbits);
}
