//! Property tests for invariants that hold for every input, each checked
//! against an oracle built independently of the code under test.

use std::f64::consts::TAU;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zoll_core::discmaps::generating::HamiltonianFlow;
use zoll_core::discmaps::{gen_from_map, map_from_gen, ClosedFormG, DiscGrid, ExactDiscMap, GeneratingFunction};
use zoll_core::forms3d::perturbation::deck_defect;
use zoll_core::forms3d::point::{hopf_point, mul_i};
use zoll_core::forms3d::{ratios, reeb_at, ContactForm, Generator};
use zoll_core::harness::{classify, fmt_num, ExperimentConfig, Perturbation, Thresholds, Verdict};

fn random_g(seed: u64, norm: f64) -> ClosedFormG {
    let grid = DiscGrid::new(1.0, 16, 32);
    ClosedFormG::random(1.0, &mut ChaCha8Rng::seed_from_u64(seed), norm, &grid).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Both ratios are invariant under α ↦ cα: periods scale by c, volume by c².
    #[test]
    fn ratios_are_scale_invariant(periods in prop::collection::vec(0.1f64..10.0, 1..6), vol in 0.1f64..10.0, c in 0.2f64..5.0) {
        let (s, d) = ratios(&periods, vol).unwrap();
        let scaled: Vec<f64> = periods.iter().map(|t| c * t).collect();
        let (s2, d2) = ratios(&scaled, c * c * vol).unwrap();
        prop_assert!(s <= d);
        prop_assert!((s - s2).abs() <= 1e-12 * s.max(1.0));
        prop_assert!((d - d2).abs() <= 1e-12 * d.max(1.0));
    }

    // A violation needs a wrong-side margin beyond the error budget, and no
    // verdict other than out_of_regime survives an amplitude above the cap.
    #[test]
    fn classify_is_conservative(
        eps in -0.3f64..0.3,
        m in (-1.0f64..1.0, -1.0f64..1.0),
        e in (0.0f64..0.1, 0.0f64..0.1),
    ) {
        let th = Thresholds::default();
        let (v, _) = classify(eps, m.0, m.1, e.0, e.1, &th);
        if eps.abs() > th.amplitude_max {
            prop_assert_eq!(v, Verdict::OutOfRegime);
        }
        let wrong = m.0 < -th.margin_factor * e.0 || m.1 < -th.margin_factor * e.1;
        prop_assert_eq!(v == Verdict::Violation, wrong && eps.abs() <= th.amplitude_max);
        if v == Verdict::StrictInequality {
            prop_assert!(m.0 > 0.0 && m.1 > 0.0);
        }
    }

    #[test]
    fn fmt_num_round_trips(v in prop::num::f64::NORMAL | prop::num::f64::ZERO) {
        prop_assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn config_json_round_trips(
        p in 1u32..6,
        amps in prop::collection::vec(-0.5f64..0.5, 1..5),
        seed in any::<u64>(),
        g in 0usize..2,
    ) {
        let cfg = ExperimentConfig {
            lens_order: p,
            amplitudes: amps,
            seed,
            perturbation: Perturbation::Generator([Generator::HopfHeight, Generator::HopfTilt][g]),
            ..Default::default()
        };
        cfg.validate().unwrap();
        let back = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    // The S¹-symmetric profiles descend to every lens space.
    #[test]
    fn symmetric_generators_are_deck_invariant(p in 1u32..8) {
        prop_assert!(deck_defect(&Generator::HopfHeight.poly(), p) < 1e-12);
        prop_assert!(deck_defect(&Generator::HopfTilt.poly(), p) < 1e-12);
    }

    // The Zoll Reeb field is the Hopf field x ↦ (2π/p)·i·x.
    #[test]
    fn zoll_reeb_field_is_hopf(p in 1u32..5, s in 0.05f64..1.5, a in 0.0f64..TAU, b in 0.0f64..TAU) {
        let x = hopf_point(s, a, b);
        let r = reeb_at(&ContactForm::zoll(p), &x).unwrap();
        let expected = mul_i(&x) * (TAU / p as f64);
        prop_assert!((r - expected).norm() < 1e-12, "{r} vs {expected}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // 𝒢∘ℰ is the identity on generating functions.
    #[test]
    fn generating_round_trip(seed in any::<u64>(), rho in 0.05f64..1.3, t in 0.0f64..1.0) {
        let g = random_g(seed, 0.01);
        let back = gen_from_map(map_from_gen(&g));
        let (a, b) = (g.split(rho, t).unwrap()[0], back.split(rho, t).unwrap()[0]);
        prop_assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    // Exact maps are invertible: the preimage of the image is the source.
    #[test]
    fn preimage_inverts_eval(seed in any::<u64>(), r in 0.05f64..1.3, t in 0.0f64..1.0) {
        let map = map_from_gen(random_g(seed, 0.01));
        let y = map.eval(r, t).unwrap();
        let x = map.preimage(y.r, y.theta).unwrap();
        prop_assert!((x[0] - r).abs() < 1e-9 && (x[1] - t).abs() < 1e-9, "{x:?} vs ({r}, {t})");
    }

    // A radial G generates the time-one flow of G itself: integrating the
    // Hamiltonian ODE reproduces ℰ(G) including the action.
    #[test]
    fn radial_generator_matches_hamiltonian_flow(
        c0 in -0.01f64..0.01,
        c1 in -0.01f64..0.01,
        r in 0.05f64..1.3,
        t in 0.0f64..1.0,
    ) {
        let g = ClosedFormG::radial(1.0, vec![c0, c1]);
        let a = map_from_gen(&g).eval(r, t).unwrap();
        let b = HamiltonianFlow::new(&g, 1.0).eval(r, t).unwrap();
        prop_assert!((a.r - b.r).abs() < 1e-10);
        prop_assert!((a.theta - b.theta).abs() < 1e-10);
        prop_assert!((a.sigma - b.sigma).abs() < 1e-10);
    }
}
