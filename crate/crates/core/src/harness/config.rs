use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms3d::perturbation::deck_defect;
use crate::forms3d::{Generator, Poly4, VolumeGrid};
use crate::numerics::IntegratorConfig;
use crate::reebflow::OrbitSearch;
use crate::section::{NormalizeConfig, SectionGrid};

/// Profile f of the perturbed forms (1 + εf)·α_Zoll: a named generator or an
/// explicit list of monomials `{"coef": c, "powers": [a, b, c, d]}` in
/// (x1, y1, x2, y2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Perturbation {
    Generator(Generator),
    Terms(Poly4),
}

impl Perturbation {
    pub fn poly(&self) -> Poly4 {
        match self {
            Perturbation::Generator(g) => g.poly(),
            Perturbation::Terms(p) => p.clone(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Perturbation::Generator(g) => g.name().to_string(),
            Perturbation::Terms(_) => "custom".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    /// Amplitudes with |ε| above this are reported out of regime.
    pub amplitude_max: f64,
    /// C³₋ distance to the Zoll form above which a warning is logged.
    pub c3_warning: f64,
    /// Tolerance of the Zoll equalities ρ = 1/t_Σ.
    pub zoll_tol: f64,
    /// Margins must exceed this multiple of the estimated error.
    pub margin_factor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { amplitude_max: 0.1, c3_warning: 1.0, zoll_tol: 1e-6, margin_factor: 10.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SectionConfig {
    /// Run the return-map identities at every admissible amplitude.
    pub enabled: bool,
    pub grid: SectionGrid,
    pub normalize: NormalizeConfig,
    /// Random closed loops for the exactness test.
    pub loops: usize,
    pub loop_samples: usize,
}

impl Default for SectionConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            grid: SectionGrid::default(),
            normalize: NormalizeConfig::default(),
            loops: 20,
            loop_samples: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiscmapConfig {
    /// t_Σ of the model disc.
    pub k: f64,
    pub trials: usize,
    /// ‖G‖_𝕍 of the random generating functions.
    pub norm: f64,
    /// Grid on which the 𝕍-norm is evaluated.
    pub norm_grid: [usize; 2],
    /// Grid of the pointwise round-trip and Hamilton–Jacobi checks.
    pub check_grid: [usize; 2],
    /// Grid on which extrema of G and H_t are compared.
    pub extremum_grid: [usize; 2],
    /// Grid for Calabi quadrature and witnesses.
    pub fine_grid: [usize; 2],
    pub t_values: Vec<f64>,
    pub calabi_t_nodes: usize,
    /// Closed-form rotation table: every (k, ε) pair is checked.
    pub rotation_k: Vec<f64>,
    pub rotation_eps: Vec<f64>,
}

impl Default for DiscmapConfig {
    fn default() -> Self {
        Self {
            k: 1.0,
            trials: 100,
            norm: 0.01,
            norm_grid: [16, 32],
            check_grid: [10, 16],
            extremum_grid: [12, 24],
            fine_grid: [24, 48],
            t_values: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            calabi_t_nodes: 6,
            rotation_k: vec![1.0, 2.0, 3.0],
            rotation_eps: vec![-0.05, -0.01, 0.01, 0.05],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Also write per-amplitude section grids and disc function grids.
    pub grids: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("zoll-out"), grids: true }
    }
}

/// One experiment: a lens order, a perturbation with an amplitude schedule,
/// numerical settings and outputs. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub lens_order: u32,
    pub perturbation: Perturbation,
    pub amplitudes: Vec<f64>,
    pub seed: u64,
    pub integrator: IntegratorConfig,
    pub orbits: OrbitSearch,
    pub volume: VolumeGrid,
    pub section: SectionConfig,
    pub thresholds: Thresholds,
    pub discmap: DiscmapConfig,
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            lens_order: 1,
            perturbation: Perturbation::Generator(Generator::Mixed),
            amplitudes: vec![0.0],
            seed: 7,
            integrator: IntegratorConfig::default(),
            orbits: OrbitSearch::default(),
            volume: VolumeGrid::default(),
            section: SectionConfig::default(),
            thresholds: Thresholds::default(),
            discmap: DiscmapConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

fn bad(field: &str, message: impl Into<String>) -> Error {
    Error::Config { field: field.into(), message: message.into() }
}

impl ExperimentConfig {
    /// Parses JSON; syntax and schema errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| bad(&format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.lens_order < 1 {
            return Err(bad("lens_order", "must be at least 1"));
        }
        if deck_defect(&self.perturbation.poly(), self.lens_order) > 1e-12 {
            return Err(bad(
                "perturbation",
                format!("profile is not invariant under the L({},1) deck group", self.lens_order),
            ));
        }
        if self.amplitudes.is_empty() {
            return Err(bad("amplitudes", "schedule is empty"));
        }
        if let Some(e) = self.amplitudes.iter().find(|e| !e.is_finite() || e.abs() >= 1.0) {
            return Err(bad("amplitudes", format!("{e} is not a finite amplitude below 1 in size")));
        }
        self.integrator.validate()?;
        let o = &self.orbits;
        if !(o.t_cap > 0.0 && o.accept_tol > 0.0 && o.fd_step > 0.0 && o.dedup_tol > 0.0) || o.n_lat < 2 || o.n_lon < 1
        {
            return Err(bad("orbits", "tolerances must be positive and the seed grid non-trivial"));
        }
        if self.volume.n_lat < 2 || self.volume.n_angle < 2 {
            return Err(bad("volume", "grid too small"));
        }
        let s = &self.section;
        if s.grid.n_r < 2 || s.grid.n_theta < 4 || !(s.grid.boundary_step > 0.0) {
            return Err(bad("section.grid", "grid too small or non-positive boundary step"));
        }
        if s.normalize.samples < 8 || !(s.normalize.closure_tol > 0.0) {
            return Err(bad("section.normalize", "need at least 8 samples and a positive tolerance"));
        }
        let t = &self.thresholds;
        if !(t.amplitude_max > 0.0 && t.c3_warning > 0.0 && t.zoll_tol > 0.0 && t.margin_factor >= 1.0) {
            return Err(bad("thresholds", "must be positive (margin factor at least 1)"));
        }
        let d = &self.discmap;
        if !(d.k > 0.0 && d.norm > 0.0 && d.norm <= 0.05) || d.rotation_k.iter().any(|k| !(*k > 0.0)) {
            return Err(bad("discmap", "k must be positive and norm in (0, 0.05]"));
        }
        if d.t_values.iter().any(|t| !(0.0..=1.0).contains(t)) || d.calabi_t_nodes == 0 {
            return Err(bad("discmap.t_values", "times must lie in [0, 1]"));
        }
        let grids = [d.norm_grid, d.check_grid, d.extremum_grid, d.fine_grid];
        if grids.iter().any(|g| g[0] == 0 || g[1] == 0) {
            return Err(bad("discmap", "grids must be non-empty"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = ExperimentConfig::default();
        assert_eq!(ExperimentConfig::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let err = ExperimentConfig::from_json("{\n  \"lens_order\": 2,\n  \"bogus\": 1\n}").unwrap_err();
        match err {
            Error::Config { field, message } => {
                assert!(field.starts_with("line 3"), "{field}");
                assert!(message.contains("bogus"));
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn perturbation_forms() {
        let c = ExperimentConfig::from_json(r#"{"perturbation": {"generator": "hopf_tilt"}}"#).unwrap();
        assert_eq!(c.perturbation, Perturbation::Generator(Generator::HopfTilt));
        let c = ExperimentConfig::from_json(r#"{"perturbation": {"terms": [{"coef": 1.0, "powers": [2, 0, 0, 0]}]}}"#)
            .unwrap();
        assert_eq!(c.perturbation.name(), "custom");
    }

    #[test]
    fn invalid_values() {
        assert!(ExperimentConfig::from_json(r#"{"lens_order": 0}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"amplitudes": []}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"lens_order": 2, "perturbation": {"generator": "mixed"}}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"integrator": {"rel_tol": -1.0}}"#).is_err());
    }
}
