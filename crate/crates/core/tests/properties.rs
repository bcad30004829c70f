use std::f64::consts::PI;

use coherent_engine::collective::{build_schedule, run_collective_cycle};
use coherent_engine::engine::{run_cycle, split_cycle, CycleMode, EngineUnit};
use coherent_engine::qutrit::{
    apply_work_unitary, coherence_measure, dephase, from_bloch, kl_divergence, relative_entropy,
    to_bloch, von_neumann_entropy, BlochVector23, DensityMatrix3, ProbVector3,
};
use coherent_engine::thermal::{gibbs_steady_state, temperatures_from_populations};
use coherent_engine::{BathPair, LevelStructure};
use proptest::prelude::*;

fn probs() -> impl Strategy<Value = ProbVector3> {
    (0.01f64..1.0, 0.01f64..1.0, 0.01f64..1.0).prop_map(|(a, b, c)| {
        let t = a + b + c;
        ProbVector3::new(a / t, b / t, c / t).unwrap()
    })
}

/// Populations plus a coherence fraction in [-1, 1].
fn coherent_state() -> impl Strategy<Value = DensityMatrix3> {
    (probs(), -1.0f64..=1.0).prop_map(|(p, f)| {
        let s = p.p2() + p.p3();
        let z = p.p3() - p.p2();
        let y = f * (s * s - z * z).max(0.0).sqrt();
        from_bloch(p.p1(), BlochVector23::new(y, z), s).unwrap()
    })
}

fn engine() -> impl Strategy<Value = (LevelStructure, BathPair)> {
    (0.1f64..3.0, 0.1f64..3.0, 0.1f64..4.0, 0.1f64..20.0)
        .prop_filter("engine regime", |(dec, gap, t_c, t_h)| {
            dec / (dec + gap) > t_c / t_h
        })
        .prop_map(|(dec, gap, t_c, t_h)| {
            (
                LevelStructure::new(dec, dec + gap).unwrap(),
                BathPair::new(t_c, t_h).unwrap(),
            )
        })
}

proptest! {
    #[test]
    fn relative_entropy_is_nonnegative(rho in coherent_state(), sigma in coherent_state()) {
        let d = relative_entropy(&rho, &sigma).unwrap();
        prop_assert!(d >= -1e-12, "{d}");
        prop_assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-10);
    }

    #[test]
    fn relative_entropy_splits_into_coherence_and_populations(
        rho in coherent_state(),
        q in probs(),
    ) {
        let sigma = DensityMatrix3::diagonal(&q);
        let lhs = relative_entropy(&rho, &sigma).unwrap();
        let rhs = coherence_measure(&rho) + kl_divergence(&rho.populations(), &q).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
        let c = relative_entropy(&rho, &dephase(&rho)).unwrap();
        prop_assert!((c - coherence_measure(&rho)).abs() < 1e-10);
    }

    #[test]
    fn rotation_preserves_spectrum_and_ground(rho in coherent_state(), theta in -PI..PI) {
        let out = apply_work_unitary(&rho, theta);
        prop_assert!((von_neumann_entropy(&out) - von_neumann_entropy(&rho)).abs() < 1e-10);
        prop_assert!((out.populations().p1() - rho.populations().p1()).abs() < 1e-14);
        let (a, b) = (to_bloch(&out), to_bloch(&rho));
        prop_assert!((a.radius() - b.radius()).abs() < 1e-12);
        let back = apply_work_unitary(&out, -theta);
        prop_assert!((back.matrix() - rho.matrix()).norm() < 1e-12);
    }

    #[test]
    fn temperatures_round_trip((levels, baths) in engine()) {
        let p = gibbs_steady_state(&levels, &baths);
        let back = temperatures_from_populations(&levels, &p).unwrap();
        prop_assert!((back.t_c() / baths.t_c() - 1.0).abs() < 1e-10);
        prop_assert!((back.t_h() / baths.t_h() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bare_cycle_energy_balance_and_efficiency(
        (levels, baths) in engine(),
        theta in 0.01f64..PI,
    ) {
        let unit = EngineUnit::new(levels, baths, theta).unwrap();
        for mode in [CycleMode::Bare, CycleMode::WithCe] {
            let l = run_cycle(&unit, &mode).unwrap();
            prop_assert!((l.w - l.q_h - l.q_c).abs() < 1e-12);
            prop_assert!(l.w > 0.0);
            let eta = 1.0 - levels.delta_e_c() / levels.delta_e_h();
            prop_assert!((l.w / l.q_h - eta).abs() < 1e-9);
            prop_assert!(l.ds_tot >= -1e-12);
        }
    }

    #[test]
    fn extraction_never_raises_pollution(
        (levels, baths) in engine(),
        theta in 0.01f64..PI,
    ) {
        let unit = EngineUnit::new(levels, baths, theta).unwrap();
        let bare = run_cycle(&unit, &CycleMode::Bare).unwrap();
        let ce = run_cycle(&unit, &CycleMode::WithCe).unwrap();
        prop_assert!(ce.ds_tot <= bare.ds_tot + 1e-12);
        prop_assert!((ce.w - bare.w).abs() < 1e-12);
    }

    #[test]
    fn split_cycle_keeps_total_work((levels, baths) in engine(), n in 1usize..64) {
        let unit = EngineUnit::new(levels, baths, PI / 3.0).unwrap();
        let one = run_cycle(&unit, &CycleMode::Bare).unwrap().w;
        let p = split_cycle(&unit, n).unwrap();
        prop_assert!((p.w_total / one - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pipeline_conserves_ground_and_pair_weight(
        (levels, baths) in engine(),
        n in 1usize..40,
        frac in 0.05f64..=1.0,
    ) {
        let s = build_schedule(&levels, &baths, n, frac * PI / n as f64).unwrap();
        for u in &s.units {
            prop_assert!((u.p_eq.p1() - s.invariant_p1).abs() < 1e-14);
        }
        let r = run_collective_cycle(&s).unwrap();
        let swaps: f64 = r.per_unit_ledgers.iter().map(|l| l.ds_acpt + l.ds_dnr).sum();
        prop_assert!(swaps.abs() < 1e-12);
        prop_assert!(r.total_ds >= -1e-12);
    }
}
