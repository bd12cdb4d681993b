use proptest::prelude::*;

use qnet_core::codes::rotated_surface;
use qnet_core::decoders::LookupDecoder;
use qnet_core::ftec::{extract, knill_ec_round_tableau, KnillSampler, LogicalBasis, LogicalInput};
use qnet_core::netchain::{compare_latency, compose_swap, run_chain, ChainConfig, SwapSchedule};
use qnet_core::noise::{stream_rng, werner};
use qnet_core::protocols::{alternating_schedule, purify_pair_dist, PurifyBasis};
use qnet_core::{BellDiagonalState, Pauli, PauliOperator};

fn simplex() -> impl Strategy<Value = BellDiagonalState> {
    prop::array::uniform4(0.01f64..1.0).prop_map(|w| BellDiagonalState::from_weights(w).unwrap())
}

fn pauli() -> impl Strategy<Value = Pauli> {
    (0usize..4).prop_map(Pauli::from_index)
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn swap_composition_is_a_commutative_monoid(a in simplex(), b in simplex(), c in simplex()) {
        let ab = compose_swap(&a, &b).unwrap();
        prop_assert!(ab.max_abs_diff(&compose_swap(&b, &a).unwrap()) < 1e-14);
        let l = compose_swap(&ab, &c).unwrap();
        let r = compose_swap(&a, &compose_swap(&b, &c).unwrap()).unwrap();
        prop_assert!(l.max_abs_diff(&r) < 1e-14);
        prop_assert_eq!(compose_swap(&a, &BellDiagonalState::PERFECT).unwrap(), a);
    }

    #[test]
    fn swapping_never_helps_werner_pairs(f in 0.2501f64..1.0, g in 0.2501f64..1.0) {
        let out = compose_swap(&werner(f).unwrap(), &werner(g).unwrap()).unwrap();
        prop_assert!(out.fidelity() <= f.min(g) + 1e-12);
    }

    #[test]
    fn purification_yields_a_distribution(a in simplex(), b in simplex(), phase in any::<bool>()) {
        let basis = if phase { PurifyBasis::PhaseFlip } else { PurifyBasis::BitFlip };
        let (p, out) = purify_pair_dist(&a, &b, basis).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0 + 1e-12);
        prop_assert!((out.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chain_reports_are_consistent(m in 1usize..7, f in 0.6f64..1.0, rounds in 0usize..4, nested in any::<bool>(), d in 0.5f64..50.0) {
        let schedule = if nested { SwapSchedule::Nested } else { SwapSchedule::Sequential };
        let cfg = ChainConfig::uniform(m, werner(f).unwrap(), alternating_schedule(rounds), schedule, d);
        let r = run_chain(&cfg).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.survival));
        prop_assert!(r.pairs_per_attempt <= r.survival);
        prop_assert_eq!(r.stages.len(), m + 1);
        let (two_way, one_way) = compare_latency(&cfg);
        prop_assert!(one_way >= m as f64 * d - 1e-9);
        if rounds > 0 {
            prop_assert!(two_way > one_way);
        } else {
            prop_assert_eq!(two_way, one_way);
        }
    }

    #[test]
    fn sampler_and_circuit_agree_on_surface3(labels in prop::collection::vec(pauli(), 9), seed in any::<u64>()) {
        let code = rotated_surface(3).unwrap();
        let mut e = PauliOperator::identity(9);
        for (q, &l) in labels.iter().enumerate() {
            e.set(q, l);
        }
        let none = PauliOperator::identity(9);
        let pair = PauliOperator::identity(18);
        let mut rng = stream_rng(seed, 0);
        let fast = extract(&KnillSampler::new(&code).outcomes(&e, &pair, &none, &mut rng).unwrap(), &code).unwrap();
        prop_assert_eq!(fast.syndrome(), code.syndrome(&e).unwrap());
        let dec = LookupDecoder::new(&code).unwrap();
        let input = LogicalInput::random(1, &mut rng);
        let basis = input.basis;
        let (report, verified) = knill_ec_round_tableau(&code, &dec, input, &e, &pair, &none, &mut rng).unwrap();
        prop_assert_eq!(&report.s_x_checks, &fast.s_x_checks);
        prop_assert_eq!(&report.s_z_checks, &fast.s_z_checks);
        // a Z-basis input only sees logical X flips and vice versa
        let seen = match basis {
            LogicalBasis::Zero => report.residual_class.x.get(0),
            LogicalBasis::Plus => report.residual_class.z.get(0),
        };
        prop_assert_eq!(verified, !seen);
    }
}
