//! Acceptance criteria 1 to 10. Each test prints one `criterion N: PASS|FAIL`
//! line before asserting, so `cargo test -- --nocapture` gives a scorecard.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use zoll_core::forms3d::perturbation::deck_defect;
use zoll_core::forms3d::{contact_volume, ContactForm, Generator, Poly4};
use zoll_core::harness::{
    discmap_suite, run_sweep, sweep_point, ExperimentConfig, Perturbation, ResultRecord, SuiteReport, Verdict,
};
use zoll_core::reebflow::{find_orbits, t_min_max, OrbitSearch};
use zoll_core::IntegratorConfig;

const AMPLITUDES: [f64; 7] = [0.0, -0.05, -0.03, -0.01, 0.01, 0.03, 0.05];

fn report(n: u32, pass: bool, detail: impl AsRef<str>) {
    println!("criterion {n}: {} {}", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
    assert!(pass, "criterion {n} failed: {}", detail.as_ref());
}

fn config(p: u32, g: Generator, amplitudes: &[f64]) -> ExperimentConfig {
    ExperimentConfig {
        lens_order: p,
        perturbation: Perturbation::Generator(g),
        amplitudes: amplitudes.to_vec(),
        ..Default::default()
    }
}

struct GeneratorSweep {
    generator: Generator,
    records: Vec<ResultRecord>,
    elapsed: Duration,
}

/// One full sweep (ratios and section identities) per generator, shared by
/// criteria 2 to 5.
fn sweeps() -> &'static [GeneratorSweep] {
    static CELL: OnceLock<Vec<GeneratorSweep>> = OnceLock::new();
    CELL.get_or_init(|| {
        Generator::ALL
            .iter()
            .map(|&g| {
                let t0 = Instant::now();
                let s = run_sweep(&config(1, g, &AMPLITUDES)).expect("sweep runs");
                GeneratorSweep { generator: g, records: s.records, elapsed: t0.elapsed() }
            })
            .collect()
    })
}

fn all_records() -> impl Iterator<Item = (Generator, &'static ResultRecord)> {
    sweeps().iter().flat_map(|s| s.records.iter().map(move |r| (s.generator, r)))
}

fn suite() -> &'static SuiteReport {
    static CELL: OnceLock<SuiteReport> = OnceLock::new();
    CELL.get_or_init(|| discmap_suite(&ExperimentConfig::default()).expect("suite runs").0)
}

#[test]
fn criterion_01_zoll_baselines() {
    let mut fails = Vec::new();
    let mut detail = String::new();
    for p in 1..=3u32 {
        let mut cfg = config(p, Generator::HopfHeight, &[0.0]);
        cfg.section.enabled = false;
        let t0 = Instant::now();
        let (r, _) = sweep_point(&cfg, 0.0);
        let dt = t0.elapsed();
        let target = 1.0 / p as f64;
        let (ds, dd) = ((r.rho_sys - target).abs(), (r.rho_dia - target).abs());
        detail.push_str(&format!("p={p}: |drho| {ds:.1e}/{dd:.1e} in {:.1}s; ", dt.as_secs_f64()));
        if !(ds < 1e-6 && dd < 1e-6 && r.verdict == Verdict::ZollEquality && dt < Duration::from_secs(60)) {
            fails.push(p);
        }
    }
    report(1, fails.is_empty(), detail);
}

#[test]
fn criterion_02_strict_inequality_under_perturbation() {
    let mut bad = Vec::new();
    for s in sweeps() {
        if s.elapsed > Duration::from_secs(600) {
            bad.push(format!("{} took {:?}", s.generator.name(), s.elapsed));
        }
        for r in s.records.iter().filter(|r| r.eps != 0.0) {
            let resolved = r.sys_margin > 10.0 * r.rho_sys_error && r.dia_margin > 10.0 * r.rho_dia_error;
            if r.verdict != Verdict::StrictInequality || !resolved {
                bad.push(format!("{} eps {}: {} ({})", s.generator.name(), r.eps, r.verdict, r.note));
            }
        }
    }
    let worst = all_records()
        .filter(|(_, r)| r.eps != 0.0)
        .map(|(_, r)| (r.sys_margin / r.rho_sys_error).min(r.dia_margin / r.rho_dia_error))
        .fold(f64::INFINITY, f64::min);
    report(2, bad.is_empty(), format!("18 points, smallest margin/error {worst:.2e}; {}", bad.join("; ")));
}

#[test]
fn criterion_03_return_map_identities() {
    let mut bad = Vec::new();
    let mut worst = [0.0f64; 3];
    let mut zoll_records: Vec<ResultRecord> =
        all_records().filter(|(_, r)| r.eps == 0.0).map(|(_, r)| r.clone()).collect();
    for p in [2, 3] {
        zoll_records.push(sweep_point(&config(p, Generator::HopfHeight, &[0.0]), 0.0).0);
    }
    for (g, r) in all_records() {
        let v = [r.loop_residual, r.volume_identity, r.boundary_residual];
        for (w, x) in worst.iter_mut().zip(v) {
            *w = w.max(x);
        }
        if !(v[0] < 1e-7 && v[1] < 1e-4 && v[2] < 1e-6) {
            bad.push(format!("{} eps {}: {:?} {}", g.name(), r.eps, v, r.note));
        }
    }
    let zoll_disp = zoll_records.iter().map(|r| r.return_displacement).fold(0.0, f64::max);
    if !(zoll_disp < 1e-9) || zoll_records.iter().any(|r| r.return_displacement.is_nan()) {
        bad.push(format!("Zoll return displacement {zoll_disp:e}"));
    }
    report(
        3,
        bad.is_empty(),
        format!(
            "loop {:.1e}, volume {:.1e}, boundary {:.1e}, Zoll |P - id| {zoll_disp:.1e} (p = 1, 2, 3); {}",
            worst[0],
            worst[1],
            worst[2],
            bad.join("; ")
        ),
    );
}

#[test]
fn criterion_04_calabi_identity() {
    let worst = all_records().map(|(_, r)| r.calabi_identity).fold(0.0, f64::max);
    let all = all_records().all(|(_, r)| r.calabi_identity < 1e-4);
    report(4, all, format!("max |Vol - 2 CAL - t T^2| / Vol = {worst:.2e} over {} points", all_records().count()));
}

#[test]
fn criterion_05_fixed_points_are_orbits() {
    let mut bad = Vec::new();
    let (mut closure, mut defect, mut count) = (0.0f64, 0.0f64, 0);
    for (g, r) in all_records() {
        closure = closure.max(r.fixed_closure);
        defect = defect.max(r.period_defect);
        count += r.fixed_points;
        let located = r.eps == 0.0 || r.fixed_points > 0;
        if !(r.fixed_closure < 1e-7 && r.period_defect < 1e-6 && located) {
            bad.push(format!(
                "{} eps {}: closure {:e} defect {:e} points {}",
                g.name(),
                r.eps,
                r.fixed_closure,
                r.period_defect,
                r.fixed_points
            ));
        }
    }
    report(
        5,
        bad.is_empty(),
        format!("{count} fixed points, closure {closure:.1e}, period defect {defect:.1e}; {}", bad.join("; ")),
    );
}

#[test]
fn criterion_06_generating_function_round_trips() {
    let s = suite();
    let pass = s.trials == 100 && s.round_trip.passed == 100 && s.map_round_trip.passed == 100;
    report(
        6,
        pass,
        format!(
            "{}/{} G round trips (worst {:.1e}), {}/{} map round trips (worst {:.1e})",
            s.round_trip.passed,
            s.trials,
            s.round_trip.worst,
            s.map_round_trip.passed,
            s.trials,
            s.map_round_trip.worst
        ),
    );
}

#[test]
fn criterion_07_hamilton_jacobi() {
    let s = suite();
    let pass = s.hamilton_jacobi.passed == s.trials && s.trials == 100 && s.radial_hj < 1e-10;
    report(
        7,
        pass,
        format!(
            "{}/{} below 1e-6 (worst {:.1e}), radial {:.1e}",
            s.hamilton_jacobi.passed, s.trials, s.hamilton_jacobi.worst, s.radial_hj
        ),
    );
}

#[test]
fn criterion_08_quasi_autonomy() {
    let s = suite();
    let pass = s.quasi_autonomy.passed == s.trials && s.trials == 100 && s.worst_drift_ratio < 1.0;
    report(
        8,
        pass,
        format!(
            "{}/{} (value drift {:.1e}, location drift {:.1e} grid spacings)",
            s.quasi_autonomy.passed, s.trials, s.quasi_autonomy.worst, s.worst_drift_ratio
        ),
    );
}

#[test]
fn criterion_09_sign_witnesses_and_rotations() {
    let s = suite();
    let (n, p) = (s.witness_negative, s.witness_positive);
    let rot_ok = s.rotation.iter().all(|r| r.pass) && !s.rotation.is_empty();
    let worst_rot = s
        .rotation
        .iter()
        .map(|r| {
            r.sigma_error
                .max((r.witness_sigma - r.eps * r.k).abs())
                .max((r.calabi - r.expected_calabi).abs())
                .max((r.calabi_hamiltonian - r.expected_calabi).abs())
        })
        .fold(0.0, f64::max);
    let pass = n.attempts == 100 && n.found == 100 && p.attempts == 100 && p.found == 100 && rot_ok;
    report(
        9,
        pass,
        format!(
            "negative {}/{}, positive {}/{}, rotation table {} rows, worst {worst_rot:.1e}",
            n.found,
            n.attempts,
            p.found,
            p.attempts,
            s.rotation.len()
        ),
    );
}

#[test]
fn criterion_10_exact_shift_invariance() {
    let cfg = IntegratorConfig::default();
    let search = OrbitSearch::default();
    let cases = [
        (
            1,
            ContactForm::scaled_perturbation(1, &Generator::Mixed.poly(), 0.05),
            Poly4::from_terms(&[(0.04, [1, 0, 1, 1]), (-0.03, [0, 2, 1, 0])]),
        ),
        (
            3,
            ContactForm::scaled_perturbation(3, &Generator::HopfTilt.poly(), -0.03),
            // |z1|^2 and Re(z1 conj z2) commute with the deck action.
            Poly4::from_terms(&[
                (0.05, [2, 0, 0, 0]),
                (0.05, [0, 2, 0, 0]),
                (0.02, [1, 0, 1, 0]),
                (0.02, [0, 1, 0, 1]),
            ]),
        ),
    ];
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for (p, alpha, h) in cases {
        assert!(deck_defect(&h, p) < 1e-12, "shift must descend to L({p},1)");
        let shifted = alpha.with_shift(&h);
        let a = find_orbits(&alpha, &search, cfg).unwrap();
        let b = find_orbits(&shifted, &search, cfg).unwrap();
        let (ta, tb) = (t_min_max(&a.orbits).unwrap(), t_min_max(&b.orbits).unwrap());
        let va = contact_volume(&alpha, Default::default()).unwrap().value;
        let vb = contact_volume(&shifted, Default::default()).unwrap().value;
        let d = (ta.0 - tb.0).abs().max((ta.1 - tb.1).abs()).max((va - vb).abs());
        detail.push_str(&format!("p={p}: {d:.1e}; "));
        worst = worst.max(d);
    }
    report(10, worst < 1e-6, detail);
}
