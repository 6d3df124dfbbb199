//! The reduction from ratios to fixed points, checked on a concrete form.
//!
//! Normalized at an orbit of period T_ref, the return map has action
//! σ = τ − 1 and fixed points q with T(γ_q) = T_ref(1 + σ(q)). At T_ref = T_min
//! no fixed point can have σ < 0, so the sign of CAL is forced positive and a
//! fixed point with σ > 0 must exist; at T_ref = T_max the mirror holds.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::reebflow::{find_orbits, t_min_max, OrbitCensus};
use crate::section::{action_and_calabi, fixed_point_orbit_check, normalize, return_map, FixedPoint};

use super::config::ExperimentConfig;
use super::sweep::{build_form, orbit_with_period};

/// Tolerance on |T(γ_q)/T_ref − (1 + σ(q))|.
pub const PERIOD_DEFECT_TOL: f64 = 1e-6;
/// Largest return displacement for which P counts as the identity.
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// At the shortest class-𝔥 orbit: expect CAL > 0 and no σ < 0.
    Systolic,
    /// At the longest: expect CAL < 0 and no σ > 0.
    Diastolic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub normalization: Normalization,
    pub t_ref: f64,
    /// ½∫σ dλ in normalized units.
    pub calabi: f64,
    /// Fixed point with the largest |σ| among those whose σ has the sign of CAL.
    pub witness: Option<FixedPoint>,
    /// The witness orbit period matches a census orbit to 1e−6.
    pub witness_in_census: bool,
    /// Fixed points whose σ has the forbidden sign (orbits beyond T_ref).
    pub forbidden: usize,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub eps: f64,
    /// P = id: the form is Zoll and the statement is empty.
    pub vacuous: bool,
    pub systolic: Option<BranchReport>,
    pub diastolic: Option<BranchReport>,
    pub discrepancies: Vec<String>,
}

impl ReductionReport {
    pub fn consistent(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

fn branch(
    cfg: &ExperimentConfig,
    eps: f64,
    census: &OrbitCensus,
    which: Normalization,
    t_ref: f64,
    notes: &mut Vec<String>,
) -> Result<(BranchReport, f64)> {
    let alpha = build_form(cfg, eps);
    let orbit = orbit_with_period(census, t_ref)?;
    let n = normalize(&alpha, orbit, cfg.section.normalize, cfg.integrator)?;
    let rd = return_map(&n.form, orbit.period, cfg.section.grid, cfg.integrator)?;
    let displacement = rd.max_displacement();
    let calabi = action_and_calabi(&rd).cal_normalized;
    let fp = fixed_point_orbit_check(&rd, &n, cfg.integrator)?;
    let sign = match which {
        Normalization::Systolic => 1.0,
        Normalization::Diastolic => -1.0,
    };
    let tag = format!("{which:?}").to_lowercase();
    notes.extend(fp.failures.iter().map(|f| format!("{tag}: {f}")));
    let forbidden = fp.points.iter().filter(|p| sign * p.sigma < -PERIOD_DEFECT_TOL).count();
    let witness = fp
        .points
        .iter()
        .filter(|p| p.sigma * calabi > 0.0)
        .max_by(|a, b| a.sigma.abs().total_cmp(&b.sigma.abs()))
        .cloned();
    let witness_in_census = witness.as_ref().is_some_and(|w| {
        census.orbits.iter().any(|o| o.class_h && (o.period - w.original_period).abs() < PERIOD_DEFECT_TOL)
    });
    let mut report = BranchReport {
        normalization: which,
        t_ref: orbit.period,
        calabi,
        witness,
        witness_in_census,
        forbidden,
        consistent: true,
    };
    if displacement < IDENTITY_TOL {
        return Ok((report, displacement));
    }
    let mut fail = |s: String| {
        notes.push(format!("{tag}: {s}"));
        false
    };
    let mut ok = true;
    if sign * calabi <= 0.0 {
        ok &= fail(format!("CAL = {calabi:e} has the wrong sign"));
    }
    if forbidden > 0 {
        ok &= fail(format!("{forbidden} fixed points with action of the wrong sign"));
    }
    match &report.witness {
        None => ok &= fail("no fixed point with the sign of CAL".into()),
        Some(w) => {
            if w.period_defect > PERIOD_DEFECT_TOL {
                ok &= fail(format!("witness period defect {:e}", w.period_defect));
            }
            if sign * (w.original_period - orbit.period) <= 0.0 {
                ok &= fail(format!("witness period {} not beyond T_ref {}", w.original_period, orbit.period));
            }
            if !witness_in_census {
                ok &= fail(format!("witness period {} missing from the orbit census", w.original_period));
            }
        }
    }
    report.consistent = ok;
    Ok((report, displacement))
}

/// Normalizes at the T_min and T_max orbits and checks the sign logic and
/// period formula against the fixed points and the orbit census.
/// Discrepancies are reported, not raised; only failures of the underlying
/// computations are errors.
pub fn verify_reduction(cfg: &ExperimentConfig, eps: f64) -> Result<ReductionReport> {
    cfg.validate()?;
    let alpha = build_form(cfg, eps);
    let census = find_orbits(&alpha, &cfg.orbits, cfg.integrator)?;
    let (t_min, t_max) = t_min_max(&census.orbits)?;
    let mut notes = Vec::new();
    let (sys, displacement) = branch(cfg, eps, &census, Normalization::Systolic, t_min, &mut notes)?;
    if displacement < IDENTITY_TOL {
        return Ok(ReductionReport { eps, vacuous: true, systolic: None, diastolic: None, discrepancies: notes });
    }
    let (dia, _) = branch(cfg, eps, &census, Normalization::Diastolic, t_max, &mut notes)?;
    Ok(ReductionReport { eps, vacuous: false, systolic: Some(sys), diastolic: Some(dia), discrepancies: notes })
}
