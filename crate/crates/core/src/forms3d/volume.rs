use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::GaussLegendre;

use super::form::ContactForm;
use super::point::hopf_point;
use super::reeb::contact_density;

/// Quadrature resolution for contact volumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VolumeGrid {
    /// Gauss nodes in the Hopf latitude.
    pub n_lat: usize,
    /// Uniform nodes per Hopf angle.
    pub n_angle: usize,
}

impl Default for VolumeGrid {
    fn default() -> Self {
        Self { n_lat: 40, n_angle: 40 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub value: f64,
    /// |difference| against a 1.5× finer grid.
    pub error: f64,
    pub min_density: f64,
    pub max_density: f64,
}

/// ∫ α∧dα over the manifold (the cover integral divided by the lens order),
/// as a bare number on the given grid.
pub fn volume_on(alpha: &ContactForm, grid: VolumeGrid) -> Result<(f64, f64, f64)> {
    let lat = GaussLegendre::on(grid.n_lat, 0.0, FRAC_PI_2);
    let n = grid.n_angle;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut total = 0.0;
    for (&s, &w) in lat.nodes.iter().zip(&lat.weights) {
        let jac = s.sin() * s.cos();
        let mut ring = 0.0;
        for j in 0..n {
            for k in 0..n {
                let x = hopf_point(s, (j as f64 + 0.5) / n as f64, (k as f64 + 0.5) / n as f64);
                let d = contact_density(alpha, &x);
                lo = lo.min(d);
                hi = hi.max(d);
                ring += d;
            }
        }
        total += w * jac * ring;
    }
    if lo * hi <= 0.0 {
        return Err(Error::NonOrientedDensity { min: lo, max: hi });
    }
    // dvol = sin s cos s ds dθ1 dθ2 with θ = 2π·(angle in turns)
    let cover = total * 4.0 * PI * PI / (n * n) as f64;
    let sign = if hi > 0.0 { 1.0 } else { -1.0 };
    Ok((sign * cover / alpha.lens_order() as f64, lo, hi))
}

/// Contact volume with a refinement-based error estimate.
pub fn contact_volume(alpha: &ContactForm, grid: VolumeGrid) -> Result<VolumeReport> {
    let (v, lo, hi) = volume_on(alpha, grid)?;
    let fine = VolumeGrid { n_lat: grid.n_lat * 3 / 2, n_angle: grid.n_angle * 3 / 2 };
    let (vf, _, _) = volume_on(alpha, fine)?;
    Ok(VolumeReport { value: vf, error: (vf - v).abs() + 1e-14 * vf.abs(), min_density: lo, max_density: hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms3d::poly::Poly4;

    #[test]
    fn zoll_volumes() {
        for p in 1..=3 {
            let v = volume_on(&ContactForm::zoll(p), VolumeGrid { n_lat: 8, n_angle: 8 }).unwrap().0;
            assert!((v - p as f64).abs() < 1e-12, "p={p}: {v}");
        }
    }

    #[test]
    fn scaled_form_oracle() {
        // Vol((1+εZ)α_*) = ⟨(1+εZ)²⟩ = 1 + ε²/3 for Z = |z1|² − |z2|².
        let z =
            Poly4::from_terms(&[(1.0, [2, 0, 0, 0]), (1.0, [0, 2, 0, 0]), (-1.0, [0, 0, 2, 0]), (-1.0, [0, 0, 0, 2])]);
        let eps = 0.2;
        let a = ContactForm::scaled_perturbation(1, &z, eps);
        let r = contact_volume(&a, VolumeGrid::default()).unwrap();
        assert!((r.value - (1.0 + eps * eps / 3.0)).abs() < 1e-12, "{}", r.value);
    }
}
