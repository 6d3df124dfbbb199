//! Randomized invariant suite for generating functions and their maps.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::discmaps::{
    calabi_action, calabi_comparison, disc_distance, gen_from_map, hj_residual, map_from_gen, quasi_autonomous_path,
    sign_witness, Branch, ClosedFormG, DiscGrid, ExactDiscMap, GeneratingFunction, HamiltonianPath, InverseMap,
    RotationPath, VFunction,
};
use crate::error::Result;

use super::config::ExperimentConfig;

/// Tolerances of the suite.
pub const ROUND_TRIP_TOL: f64 = 1e-8;
pub const HJ_TOL: f64 = 1e-6;
pub const RADIAL_HJ_TOL: f64 = 1e-10;
pub const QUASI_VALUE_TOL: f64 = 1e-9;
pub const CALABI_TOL: f64 = 1e-6;
pub const ROTATION_TOL: f64 = 1e-9;

/// Worst value and number of passing trials of one check.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub passed: usize,
    pub worst: f64,
}

impl Tally {
    fn record(&mut self, value: f64, tol: f64) {
        if value < tol {
            self.passed += 1;
        }
        self.worst = self.worst.max(value);
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct WitnessTally {
    pub attempts: usize,
    pub found: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationRow {
    pub k: f64,
    pub eps: f64,
    /// sup |σ − εk| over the grid.
    pub sigma_error: f64,
    /// Action at the center witness.
    pub witness_sigma: f64,
    pub calabi: f64,
    pub calabi_hamiltonian: f64,
    pub expected_calabi: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub trials: usize,
    pub seed: u64,
    pub norm: f64,
    /// sup |𝒢(ℰ(G)) − G|.
    pub round_trip: Tally,
    /// C⁰ distance of ℰ(𝒢(φ)) from φ.
    pub map_round_trip: Tally,
    pub hamilton_jacobi: Tally,
    /// Value drift of the extrema of H_t; passes also require argmin and
    /// argmax drifts below the grid spacing.
    pub quasi_autonomy: Tally,
    /// Largest argmin/argmax drift over the grid spacing.
    pub worst_drift_ratio: f64,
    /// |CAL by action − CAL by Hamiltonian|.
    pub calabi: Tally,
    /// |CAL(φ) + CAL(φ⁻¹)|.
    pub calabi_antisymmetry: Tally,
    pub radial_hj: f64,
    pub witness_negative: WitnessTally,
    pub witness_positive: WitnessTally,
    pub rotation: Vec<RotationRow>,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        let n = self.trials;
        [self.round_trip, self.map_round_trip, self.hamilton_jacobi, self.quasi_autonomy, self.calabi]
            .iter()
            .all(|t| t.passed == n)
            && self.calabi_antisymmetry.passed == n
            && self.radial_hj < RADIAL_HJ_TOL
            && self.witness_negative.found == self.witness_negative.attempts
            && self.witness_positive.found == self.witness_positive.attempts
            && self.rotation.iter().all(|r| r.pass)
            && self.failures.is_empty()
    }
}

fn grid(k: f64, n: [usize; 2]) -> DiscGrid {
    DiscGrid::new(k, n[0], n[1])
}

struct Grids {
    check: Vec<[f64; 2]>,
    extremum: DiscGrid,
    fine: DiscGrid,
}

fn trial(g: &ClosedFormG, grids: &Grids, cfg: &ExperimentConfig, rep: &mut SuiteReport) -> Result<()> {
    let d = &cfg.discmap;
    let k = g.k();
    let map = map_from_gen(g);
    let back = gen_from_map(&map);
    let again = map_from_gen(&back);
    let (mut rt, mut c0): (f64, f64) = (0.0, 0.0);
    for &p in &grids.check {
        rt = rt.max((g.split(p[0], p[1])?[0] - back.split(p[0], p[1])?[0]).abs());
        let (x, y) = (map.eval(p[0], p[1])?, again.eval(p[0], p[1])?);
        c0 = c0.max(disc_distance(k, [x.r, x.theta], [y.r, y.theta]));
    }
    rep.round_trip.record(rt, ROUND_TRIP_TOL);
    rep.map_round_trip.record(c0, ROUND_TRIP_TOL);
    rep.hamilton_jacobi.record(hj_residual(g, &d.t_values, &grids.check)?, HJ_TOL);

    let (hp, qa) = quasi_autonomous_path(g, &grids.extremum, &d.t_values)?;
    let ratio = qa.argmin_drift.max(qa.argmax_drift) / qa.spacing;
    rep.worst_drift_ratio = rep.worst_drift_ratio.max(ratio);
    rep.quasi_autonomy.record(if qa.holds(QUASI_VALUE_TOL) { qa.value_drift } else { f64::INFINITY }, QUASI_VALUE_TOL);

    let cc = calabi_comparison(&hp, &grids.fine, d.calabi_t_nodes)?;
    rep.calabi.record(cc.difference, CALABI_TOL);
    let inv = calabi_action(&InverseMap(&map), &grids.fine)?;
    rep.calabi_antisymmetry.record((inv + cc.by_action).abs(), CALABI_TOL);

    for h in [g.clone(), g.scaled(-1.0)] {
        let cal = calabi_action(&map_from_gen(&h), &grids.fine)?;
        let expected = if cal <= 0.0 { Branch::Negative } else { Branch::Positive };
        let tally = match expected {
            Branch::Negative => &mut rep.witness_negative,
            Branch::Positive => &mut rep.witness_positive,
        };
        tally.attempts += 1;
        match sign_witness(&h, &grids.fine) {
            Ok(w) if w.branch == expected => tally.found += 1,
            Ok(w) => rep.failures.push(format!("witness on branch {:?}, expected {expected:?}", w.branch)),
            Err(e) => rep.failures.push(e.to_string()),
        }
    }
    Ok(())
}

fn rotation_row(k: f64, eps: f64, cfg: &ExperimentConfig) -> Result<RotationRow> {
    let d = &cfg.discmap;
    let g = ClosedFormG::rotation(k, eps);
    let fine = grid(k, d.fine_grid);
    let map = map_from_gen(&g);
    let mut sigma_error: f64 = 0.0;
    for p in grid(k, d.check_grid).points() {
        sigma_error = sigma_error.max((map.eval(p[0], p[1])?.sigma - eps * k).abs());
    }
    let witness_sigma = sign_witness(&g, &fine)?.sigma;
    let calabi = calabi_action(&map, &fine)?;
    let calabi_hamiltonian = HamiltonianPath::new(RotationPath { k, eps }).calabi(&fine, d.calabi_t_nodes)?;
    let expected_calabi = 0.5 * k * k * eps;
    let pass = sigma_error < ROTATION_TOL
        && (witness_sigma - eps * k).abs() < ROTATION_TOL
        && (calabi - expected_calabi).abs() < ROTATION_TOL
        && (calabi_hamiltonian - expected_calabi).abs() < ROTATION_TOL;
    Ok(RotationRow { k, eps, sigma_error, witness_sigma, calabi, calabi_hamiltonian, expected_calabi, pass })
}

/// Runs `trials` random generating functions of norm `norm` through round
/// trips, Hamilton–Jacobi, quasi-autonomy, Calabi and witness checks, plus a
/// radial case and the closed-form rotation table. Deterministic in the seed.
pub fn discmap_suite(cfg: &ExperimentConfig) -> Result<(SuiteReport, Vec<VFunction>)> {
    cfg.validate()?;
    let d = &cfg.discmap;
    let k = d.k;
    let grids = Grids {
        check: grid(k, d.check_grid).points().collect(),
        extremum: grid(k, d.extremum_grid),
        fine: grid(k, d.fine_grid),
    };
    let norm_grid = grid(k, d.norm_grid);
    let mut rep = SuiteReport {
        trials: d.trials,
        seed: cfg.seed,
        norm: d.norm,
        round_trip: Tally::default(),
        map_round_trip: Tally::default(),
        hamilton_jacobi: Tally::default(),
        quasi_autonomy: Tally::default(),
        worst_drift_ratio: 0.0,
        calabi: Tally::default(),
        calabi_antisymmetry: Tally::default(),
        radial_hj: 0.0,
        witness_negative: WitnessTally::default(),
        witness_positive: WitnessTally::default(),
        rotation: Vec::new(),
        failures: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut samples = Vec::new();
    for i in 0..d.trials {
        let g = ClosedFormG::random(k, &mut rng, d.norm, &norm_grid)?;
        if i == 0 {
            let map = map_from_gen(&g);
            samples.push(VFunction::sample(&grids.fine, |r, t| g.split(r, t).map(|s| s[0]), Some("g".into()))?);
            samples.push(VFunction::sample(&grids.fine, |r, t| map.eval(r, t).map(|p| p.sigma), Some("sigma".into()))?);
        }
        if let Err(e) = trial(&g, &grids, cfg, &mut rep) {
            rep.failures.push(format!("trial {i}: {e}"));
        }
    }
    let radial = ClosedFormG::radial(k, vec![0.5 * d.norm, -0.2 * d.norm]);
    rep.radial_hj = hj_residual(&radial, &d.t_values, &grids.check)?;
    for &rk in &d.rotation_k {
        for &eps in &d.rotation_eps {
            rep.rotation.push(rotation_row(rk, eps, cfg)?);
        }
    }
    Ok((rep, samples))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let mut cfg = ExperimentConfig::default();
        cfg.discmap.trials = 2;
        cfg.discmap.rotation_k = vec![1.0];
        cfg.discmap.rotation_eps = vec![0.02];
        let (a, sa) = discmap_suite(&cfg).unwrap();
        assert!(a.all_passed(), "{a:#?}");
        assert_eq!(a.witness_negative.attempts + a.witness_positive.attempts, 4);
        let (b, sb) = discmap_suite(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(sa, sb);
    }
}
