//! Amplitude sweeps: ratios, section identities and verdicts per ε.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms3d::{c3_minus_distance, contact_volume, ContactForm, VolumeReport};
use crate::reebflow::{find_orbits, t_min_max, OrbitCensus, PeriodicOrbit};
use crate::section::{
    action_and_calabi, boundary_residual, fixed_point_orbit_check, loop_exactness, normalize, return_map, ReturnData,
};

use super::config::{ExperimentConfig, Thresholds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ZollEquality,
    StrictInequality,
    OutOfRegime,
    Violation,
}

impl Verdict {
    pub const ALL: [Verdict; 4] =
        [Verdict::ZollEquality, Verdict::StrictInequality, Verdict::OutOfRegime, Verdict::Violation];

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ZollEquality => "zoll_equality",
            Verdict::StrictInequality => "strict_inequality",
            Verdict::OutOfRegime => "out_of_regime",
            Verdict::Violation => "violation",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One sweep point. Quantities that were not computed are NaN. Field order
/// is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub eps: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub volume: f64,
    pub volume_error: f64,
    pub rho_sys: f64,
    pub rho_dia: f64,
    pub inv_t_sigma: f64,
    /// CAL of the return map normalized at the T_min orbit, original units.
    pub calabi: f64,
    pub rho_sys_error: f64,
    pub rho_dia_error: f64,
    /// 1/t_Σ − ρ_sys.
    pub sys_margin: f64,
    /// ρ_dia − 1/t_Σ.
    pub dia_margin: f64,
    pub loop_residual: f64,
    /// |Vol/T_ref² − ∫τ dλ| / (Vol/T_ref²).
    pub volume_identity: f64,
    pub boundary_residual: f64,
    /// |Vol − 2·CAL − t_Σ T_ref²| / Vol.
    pub calabi_identity: f64,
    pub return_displacement: f64,
    pub fixed_closure: f64,
    pub period_defect: f64,
    /// Interior fixed points located on the section.
    pub fixed_points: usize,
    pub orbits: usize,
    pub verdict: Verdict,
    pub note: String,
}

pub const CSV_HEADER: [&str; 24] = [
    "eps",
    "t_min",
    "t_max",
    "volume",
    "volume_error",
    "rho_sys",
    "rho_dia",
    "inv_t_sigma",
    "calabi",
    "rho_sys_error",
    "rho_dia_error",
    "sys_margin",
    "dia_margin",
    "loop_residual",
    "volume_identity",
    "boundary_residual",
    "calabi_identity",
    "return_displacement",
    "fixed_closure",
    "period_defect",
    "fixed_points",
    "orbits",
    "verdict",
    "note",
];

impl ResultRecord {
    fn blank(eps: f64, inv_t_sigma: f64) -> Self {
        let nan = f64::NAN;
        Self {
            eps,
            t_min: nan,
            t_max: nan,
            volume: nan,
            volume_error: nan,
            rho_sys: nan,
            rho_dia: nan,
            inv_t_sigma,
            calabi: nan,
            rho_sys_error: nan,
            rho_dia_error: nan,
            sys_margin: nan,
            dia_margin: nan,
            loop_residual: nan,
            volume_identity: nan,
            boundary_residual: nan,
            calabi_identity: nan,
            return_displacement: nan,
            fixed_closure: nan,
            period_defect: nan,
            fixed_points: 0,
            orbits: 0,
            verdict: Verdict::OutOfRegime,
            note: String::new(),
        }
    }

    /// Values in CSV column order.
    pub fn csv_fields(&self) -> Vec<String> {
        let nums = [
            self.eps,
            self.t_min,
            self.t_max,
            self.volume,
            self.volume_error,
            self.rho_sys,
            self.rho_dia,
            self.inv_t_sigma,
            self.calabi,
            self.rho_sys_error,
            self.rho_dia_error,
            self.sys_margin,
            self.dia_margin,
            self.loop_residual,
            self.volume_identity,
            self.boundary_residual,
            self.calabi_identity,
            self.return_displacement,
            self.fixed_closure,
            self.period_defect,
        ];
        let mut out: Vec<String> = nums.iter().map(|&v| fmt_num(v)).collect();
        out.push(self.fixed_points.to_string());
        out.push(self.orbits.to_string());
        out.push(self.verdict.to_string());
        out.push(self.note.clone());
        out
    }

    fn add_note(&mut self, s: impl AsRef<str>) {
        if !self.note.is_empty() {
            self.note.push_str("; ");
        }
        self.note.push_str(s.as_ref());
    }
}

/// Shortest round-trip text, in exponent form for very small or large values.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() || (1e-3..1e6).contains(&v.abs()) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// Linear error budget of a period found by shooting: the closure tolerance
/// plus the integrator tolerance accumulated over T/max_step steps.
pub fn period_error(t: f64, cfg: &ExperimentConfig) -> f64 {
    let i = &cfg.integrator;
    cfg.orbits.accept_tol + i.rel_tol.max(i.abs_tol) * t * (t / i.max_step).max(1.0)
}

/// δρ for ρ = T²/Vol.
pub fn ratio_error(rho: f64, t: f64, dt: f64, vol: &VolumeReport) -> f64 {
    rho * (2.0 * dt / t + vol.error / vol.value)
}

/// Verdict from the two margins m_sys = 1/t_Σ − ρ_sys, m_dia = ρ_dia − 1/t_Σ
/// and their error estimates.
pub fn classify(eps: f64, m_sys: f64, m_dia: f64, e_sys: f64, e_dia: f64, th: &Thresholds) -> (Verdict, String) {
    let f = th.margin_factor;
    if eps.abs() > th.amplitude_max {
        return (Verdict::OutOfRegime, format!("|eps| above amplitude_max {}", th.amplitude_max));
    }
    if m_sys < -f * e_sys || m_dia < -f * e_dia {
        return (Verdict::Violation, format!("margins {m_sys:e}, {m_dia:e} wrong side beyond {f}x error"));
    }
    if m_sys.abs() <= th.zoll_tol && m_dia.abs() <= th.zoll_tol {
        return (Verdict::ZollEquality, String::new());
    }
    if m_sys > f * e_sys && m_dia > f * e_dia {
        return (Verdict::StrictInequality, String::new());
    }
    (Verdict::OutOfRegime, format!("margins {m_sys:e}, {m_dia:e} not resolved against errors {e_sys:e}, {e_dia:e}"))
}

/// Per-node return data of one sweep point: r, θ, τ, σ, |P(q) − q| and
/// whether the node is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionTable {
    pub eps: f64,
    pub rows: Vec<[f64; 5]>,
    pub fixed: Vec<bool>,
}

/// Nodes closer than this to their image are flagged as fixed.
pub const FIXED_FLAG_TOL: f64 = 1e-9;

impl SectionTable {
    pub fn from_return_data(eps: f64, rd: &ReturnData) -> Self {
        let mut rows = Vec::new();
        let mut fixed = Vec::new();
        for (i, &r) in rd.r.iter().enumerate() {
            for (j, &th) in rd.theta.iter().enumerate() {
                let n = rd.nodes[i][j];
                let w = rd.disc.w_from_collar(r, th);
                let d = (n.w[0] - w[0]).hypot(n.w[1] - w[1]);
                rows.push([r, th, n.tau, n.tau - 1.0, d]);
                fixed.push(d < FIXED_FLAG_TOL);
            }
        }
        Self { eps, rows, fixed }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,theta,tau,sigma,displacement,fixed_flag\n");
        for (row, f) in self.rows.iter().zip(&self.fixed) {
            let cols: Vec<String> = row.iter().map(|&v| fmt_num(v)).collect();
            s.push_str(&format!("{},{}\n", cols.join(","), u8::from(*f)));
        }
        s
    }
}

#[derive(Debug, Clone, Default)]
pub struct Sweep {
    pub records: Vec<ResultRecord>,
    pub grids: Vec<SectionTable>,
}

/// α_ε = (1 + εf)·α_Zoll on L(p,1).
pub fn build_form(cfg: &ExperimentConfig, eps: f64) -> Arc<ContactForm> {
    Arc::new(ContactForm::scaled_perturbation(cfg.lens_order, &cfg.perturbation.poly(), eps))
}

/// The class-𝔥 orbit of the census with the given period.
pub fn orbit_with_period(census: &OrbitCensus, period: f64) -> Result<&PeriodicOrbit> {
    census
        .orbits
        .iter()
        .filter(|o| o.class_h)
        .min_by(|a, b| (a.period - period).abs().total_cmp(&(b.period - period).abs()))
        .ok_or(Error::EmptyOrbitSet)
}

/// One sweep point; failures after the ratios are recorded in the note.
pub fn sweep_point(cfg: &ExperimentConfig, eps: f64) -> (ResultRecord, Option<SectionTable>) {
    let t_sigma = cfg.lens_order as f64;
    let mut rec = ResultRecord::blank(eps, 1.0 / t_sigma);
    if eps.abs() > cfg.thresholds.amplitude_max {
        let (v, note) = classify(eps, 0.0, 0.0, 0.0, 0.0, &cfg.thresholds);
        rec.verdict = v;
        rec.add_note(note);
        return (rec, None);
    }
    let alpha = build_form(cfg, eps);
    let ratios = (|| -> Result<(OrbitCensus, VolumeReport)> {
        let census = find_orbits(&alpha, &cfg.orbits, cfg.integrator)?;
        let vol = contact_volume(&alpha, cfg.volume)?;
        Ok((census, vol))
    })();
    let (census, vol) = match ratios {
        Ok(x) => x,
        Err(e) => {
            rec.add_note(format!("ratio computation failed: {e}"));
            return (rec, None);
        }
    };
    rec.orbits = census.orbits.len();
    let (t_min, t_max) = match t_min_max(&census.orbits) {
        Ok(x) => x,
        Err(e) => {
            rec.add_note(format!("no class-h orbit: {e}"));
            return (rec, None);
        }
    };
    rec.t_min = t_min;
    rec.t_max = t_max;
    rec.volume = vol.value;
    rec.volume_error = vol.error;
    rec.rho_sys = t_min * t_min / vol.value;
    rec.rho_dia = t_max * t_max / vol.value;
    rec.rho_sys_error = ratio_error(rec.rho_sys, t_min, period_error(t_min, cfg), &vol);
    rec.rho_dia_error = ratio_error(rec.rho_dia, t_max, period_error(t_max, cfg), &vol);
    rec.sys_margin = rec.inv_t_sigma - rec.rho_sys;
    rec.dia_margin = rec.rho_dia - rec.inv_t_sigma;
    let (v, note) =
        classify(eps, rec.sys_margin, rec.dia_margin, rec.rho_sys_error, rec.rho_dia_error, &cfg.thresholds);
    rec.verdict = v;
    if !note.is_empty() {
        rec.add_note(note);
    }

    let zoll = ContactForm::zoll(cfg.lens_order);
    let c3 = c3_minus_distance(alpha.as_ref(), &zoll, 6);
    if c3 > cfg.thresholds.c3_warning {
        warn!("eps = {eps}: C3- distance {c3:.3e} to the Zoll form exceeds {}", cfg.thresholds.c3_warning);
        rec.add_note(format!("C3- distance {c3:.3e} above warning threshold"));
    }

    let mut table = None;
    if cfg.section.enabled {
        match section_identities(cfg, &alpha, &census, t_min, &vol, &mut rec) {
            Ok(rd) => table = Some(SectionTable::from_return_data(eps, &rd)),
            Err(e) => rec.add_note(format!("section identities failed: {e}")),
        }
    }
    info!("eps = {eps}: rho_sys {:.10} rho_dia {:.10} -> {}", rec.rho_sys, rec.rho_dia, rec.verdict);
    (rec, table)
}

fn section_identities(
    cfg: &ExperimentConfig,
    alpha: &Arc<ContactForm>,
    census: &OrbitCensus,
    t_min: f64,
    vol: &VolumeReport,
    rec: &mut ResultRecord,
) -> Result<ReturnData> {
    let s = &cfg.section;
    let t_sigma = cfg.lens_order as f64;
    let orbit = orbit_with_period(census, t_min)?;
    let n = normalize(alpha, orbit, s.normalize, cfg.integrator)?;
    let rd = return_map(&n.form, orbit.period, s.grid, cfg.integrator)?;
    let cal = action_and_calabi(&rd);
    let vn = vol.value / (orbit.period * orbit.period);
    rec.calabi = cal.cal;
    rec.volume_identity = (cal.section_volume - vn).abs() / vn;
    rec.calabi_identity = cal.identity_residual(vol.value, t_sigma) / vol.value;
    rec.boundary_residual = boundary_residual(&rd);
    rec.return_displacement = rd.max_displacement();
    rec.loop_residual = loop_exactness(&n.form, s.loops, s.loop_samples, cfg.seed, cfg.integrator)?;
    let fp = fixed_point_orbit_check(&rd, &n, cfg.integrator)?;
    rec.fixed_closure = fp.max_closure();
    rec.period_defect = fp.max_period_defect();
    rec.fixed_points = fp.points.len();
    if !fp.failures.is_empty() {
        rec.add_note(format!("{} fixed point searches failed", fp.failures.len()));
    }
    Ok(rd)
}

/// Runs every amplitude of the schedule on a pool of worker threads and
/// merges the results in schedule order, so the output does not depend on
/// the number of workers.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Sweep> {
    cfg.validate()?;
    let n = cfg.amplitudes.len();
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get()).min(n);
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<(ResultRecord, Option<SectionTable>)>>> = Mutex::new(vec![None; n]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let out = sweep_point(cfg, cfg.amplitudes[i]);
                slots.lock().expect("sweep worker panicked")[i] = Some(out);
            });
        }
    });
    let mut sweep = Sweep::default();
    for slot in slots.into_inner().expect("sweep worker panicked") {
        let (rec, table) = slot.expect("every amplitude is processed");
        sweep.records.push(rec);
        sweep.grids.extend(table);
    }
    Ok(sweep)
}

/// 3 if any verdict is a violation, else 2 if any point is out of regime,
/// else 0.
pub fn exit_code(records: &[ResultRecord]) -> i32 {
    if records.iter().any(|r| r.verdict == Verdict::Violation) {
        3
    } else if records.iter().any(|r| r.verdict == Verdict::OutOfRegime) {
        2
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let th = Thresholds::default();
        assert_eq!(classify(0.2, 0.1, 0.1, 0.0, 0.0, &th).0, Verdict::OutOfRegime);
        assert_eq!(classify(0.0, 1e-9, -1e-9, 1e-10, 1e-10, &th).0, Verdict::ZollEquality);
        assert_eq!(classify(0.05, 0.09, 0.1, 1e-9, 1e-9, &th).0, Verdict::StrictInequality);
        assert_eq!(classify(0.05, -0.01, 0.1, 1e-9, 1e-9, &th).0, Verdict::Violation);
        // Wrong side, but inside the error bar: no violation claimed.
        assert_eq!(classify(0.05, -0.01, 0.1, 2e-3, 1e-9, &th).0, Verdict::OutOfRegime);
    }

    #[test]
    fn exit_codes() {
        let mut a = ResultRecord::blank(0.0, 1.0);
        a.verdict = Verdict::StrictInequality;
        let mut b = a.clone();
        assert_eq!(exit_code(&[a.clone()]), 0);
        b.verdict = Verdict::OutOfRegime;
        assert_eq!(exit_code(&[a.clone(), b.clone()]), 2);
        b.verdict = Verdict::Violation;
        assert_eq!(exit_code(&[a, b]), 3);
    }

    #[test]
    fn csv_fields_match_header() {
        let r = ResultRecord::blank(0.01, 1.0);
        assert_eq!(r.csv_fields().len(), CSV_HEADER.len());
    }
}
