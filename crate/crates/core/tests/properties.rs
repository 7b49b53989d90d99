use core::f64::consts::{PI, TAU};

use discordlab_core::discord::{discord, DiscordOptions};
use discordlab_core::protocol::{
    fringe_phasor, visibility_exact, werner_visibility_closed, ProtocolParams,
};
use discordlab_core::qmat::{partial_transpose, trace_distance, Subsystem};
use discordlab_core::shots::{
    cost_protocol, cost_report, cost_tomography, project_physical, TomographyMode,
};
use discordlab_core::states::{
    pauli_decompose, random_state, werner, zero_discord_state, QubitRotation,
};
use discordlab_core::RandomSeed;
use num_bigint::BigUint;
use proptest::prelude::*;

fn angle() -> impl Strategy<Value = f64> {
    0.0..TAU
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>()) {
        let rho = random_state(RandomSeed(seed));
        for side in [Subsystem::A, Subsystem::B] {
            let twice = partial_transpose(&partial_transpose(rho.matrix(), side).unwrap(), side).unwrap();
            prop_assert!(twice.max_abs_diff(rho.matrix()) < 1e-15);
        }
    }

    #[test]
    fn pauli_expansion_round_trips(seed in any::<u64>()) {
        let rho = random_state(RandomSeed(seed));
        let back = pauli_decompose(&rho).reconstruct();
        prop_assert!(back.max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn rotation_inverse_undoes_rotation(theta in -TAU..TAU, phi in -TAU..TAU) {
        let r = QubitRotation::new(theta, phi);
        let prod = &r.matrix() * &r.inverse().matrix();
        prop_assert!(prod.max_abs_diff(&discordlab_core::qmat::identity2()) < 1e-12);
    }

    #[test]
    fn werner_closed_form_matches_exact(
        cw in 0.0..=1.0f64, a in angle(), b in angle(), pa in angle(), pb in angle()
    ) {
        let exact = visibility_exact(&werner(cw).unwrap(), &ProtocolParams::new(a, pa, b, pb));
        let closed = werner_visibility_closed(cw, a, b, pa, pb).unwrap();
        prop_assert!((exact - closed).abs() < 1e-12);
    }

    #[test]
    fn phasor_and_full_route_agree(seed in any::<u64>(), a in angle(), b in angle(), pa in angle(), pb in angle()) {
        let rho = random_state(RandomSeed(seed));
        let p = ProtocolParams::new(a, pa, b, pb);
        prop_assert!((2.0 * fringe_phasor(&rho, &p).norm() - visibility_exact(&rho, &p)).abs() < 1e-12);
    }

    #[test]
    fn visibility_is_bounded_by_one(seed in any::<u64>(), a in angle(), b in angle(), pa in angle(), pb in angle()) {
        let v = visibility_exact(&random_state(RandomSeed(seed)), &ProtocolParams::new(a, pa, b, pb));
        prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
    }

    #[test]
    fn physical_projection_is_a_fixed_point_on_states(seed in any::<u64>()) {
        let rho = random_state(RandomSeed(seed));
        let once = project_physical(rho.matrix()).unwrap();
        prop_assert!(trace_distance(once.matrix(), rho.matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn checked_and_exact_costs_agree(m in 1u64..1_000_000, n in 1u64..200, da in 2u32..5, db in 2u32..5) {
        let report = cost_report(m, n, da, db).unwrap();
        if let Ok(p) = cost_protocol(m, n, da, db) {
            prop_assert_eq!(BigUint::from(p), report.protocol_count);
        }
        if let Ok(t) = cost_tomography(m, n, da, db, TomographyMode::SampledBasis) {
            prop_assert_eq!(BigUint::from(t), report.tomography_sampled_count);
        }
        let f = cost_tomography(m, n, da, db, TomographyMode::FixedBasis).unwrap();
        prop_assert_eq!(BigUint::from(f), report.tomography_fixed_count);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn discord_is_nonnegative_and_bounded(seed in any::<u64>()) {
        let q = discord(&random_state(RandomSeed(seed)), &DiscordOptions::default()).unwrap().value;
        prop_assert!((0.0..=1.0 + 1e-9).contains(&q));
    }

    #[test]
    fn zero_discord_states_have_zero_discord(seed in any::<u64>()) {
        let q = discord(&zero_discord_state(RandomSeed(seed)), &DiscordOptions::default()).unwrap().value;
        prop_assert!(q < 1e-6);
    }

    #[test]
    fn discord_is_invariant_under_local_rotations(
        seed in any::<u64>(), ta in 0.0..PI, pa in angle(), tb in 0.0..PI, pb in angle()
    ) {
        let rho = random_state(RandomSeed(seed));
        let rotated = rho
            .rotate_locally(&QubitRotation::new(ta, pa).matrix(), &QubitRotation::new(tb, pb).matrix())
            .unwrap();
        let opts = DiscordOptions::default();
        let (q0, q1) = (discord(&rho, &opts).unwrap().value, discord(&rotated, &opts).unwrap().value);
        prop_assert!((q0 - q1).abs() < 2e-4);
    }
}
