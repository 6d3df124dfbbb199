//! Hamiltonian paths t ↦ φ_t, the Hamilton–Jacobi relation and
//! quasi-autonomy of ℰ(tG).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::ode::V4;
use crate::numerics::{DormandPrince, GaussLegendre, IntegratorConfig};

use super::generating::{ExactDiscMap, GenMap, GeneratingFunction, MapPoint, Rotation};
use super::witness::{find_extremum, Branch, Extremum};
use super::{disc_distance, DiscGrid};

/// A smooth family of exact maps with φ_0 = id, defined slightly beyond
/// [0, 1] so that centered differences in t are available at the ends.
pub trait MapPath: Send + Sync {
    type Map: ExactDiscMap;
    fn k(&self) -> f64;
    fn at(&self, t: f64) -> Self::Map;
}

/// φ_t = ℰ(tG).
#[derive(Debug, Clone)]
pub struct GenPath<G> {
    pub g: G,
}

impl<G: GeneratingFunction + Clone> MapPath for GenPath<G> {
    type Map = GenMap<G>;
    fn k(&self) -> f64 {
        self.g.k()
    }
    fn at(&self, t: f64) -> GenMap<G> {
        GenMap { g: self.g.clone(), scale: t }
    }
}

/// φ_t = rotation by −tε.
#[derive(Debug, Clone, Copy)]
pub struct RotationPath {
    pub k: f64,
    pub eps: f64,
}

impl MapPath for RotationPath {
    type Map = Rotation;
    fn k(&self) -> f64 {
        self.k
    }
    fn at(&self, t: f64) -> Rotation {
        Rotation { k: self.k, eps: t * self.eps }
    }
}

/// H_t := (dσ_t/dt)∘φ_t^{-1} − λ(X_t) with X_t = (dφ_t/dt)∘φ_t^{-1}, the
/// t-derivatives taken by fourth-order centered differences.
#[derive(Debug, Clone)]
pub struct HamiltonianPath<P> {
    pub path: P,
    pub fd_step: f64,
}

impl<P: MapPath> HamiltonianPath<P> {
    pub fn new(path: P) -> Self {
        Self { path, fd_step: 1e-3 }
    }

    /// φ_t(z) and ∂_t(R, Θ, σ) at fixed z.
    pub fn velocity(&self, t: f64, z: [f64; 2]) -> Result<(MapPoint, [f64; 3])> {
        let h = self.fd_step;
        let at = |s: f64| self.path.at(s).eval(z[0], z[1]);
        let (p2, p1, m1, m2) = (at(t + 2.0 * h)?, at(t + h)?, at(t - h)?, at(t - 2.0 * h)?);
        let d = |f: fn(&MapPoint) -> f64| (-f(&p2) + 8.0 * f(&p1) - 8.0 * f(&m1) + f(&m2)) / (12.0 * h);
        let v = [d(|p| p.r), d(|p| p.theta), d(|p| p.sigma)];
        Ok((self.path.at(t).eval(z[0], z[1])?, v))
    }

    /// H_t∘φ_t(z) = ∂_tσ_t(z) − λ_{φ_t(z)}(∂_tφ_t(z)).
    pub fn along(&self, t: f64, z: [f64; 2]) -> Result<f64> {
        let (p, v) = self.velocity(t, z)?;
        Ok(v[2] - (-self.path.k() + 0.5 * p.r * p.r) * v[1])
    }

    /// H_t(q).
    pub fn hamiltonian(&self, t: f64, q: [f64; 2]) -> Result<f64> {
        let z = self.path.at(t).preimage(q[0], q[1])?;
        self.along(t, z)
    }

    /// X_t(q) = (X^R, X^Θ).
    pub fn field(&self, t: f64, q: [f64; 2]) -> Result<[f64; 2]> {
        let z = self.path.at(t).preimage(q[0], q[1])?;
        let (_, v) = self.velocity(t, z)?;
        Ok([v[0], v[1]])
    }

    /// Largest coefficient of ι_{X_t}dλ − dH_t at `points`, i.e. of
    /// R X^R − ∂_Θ H_t and R X^Θ + ∂_R H_t; dH_t by centered differences.
    pub fn field_residual(&self, t: f64, points: &[[f64; 2]]) -> Result<f64> {
        let h = 1e-3;
        let mut worst: f64 = 0.0;
        for &q in points {
            let x = self.field(t, q)?;
            let d = |i: usize| -> Result<f64> {
                let mut f = [0.0; 4];
                for (n, s) in [2.0, 1.0, -1.0, -2.0].iter().enumerate() {
                    let mut y = q;
                    y[i] += s * h;
                    f[n] = self.hamiltonian(t, y)?;
                }
                Ok((-f[0] + 8.0 * f[1] - 8.0 * f[2] + f[3]) / (12.0 * h))
            };
            let (hr, ht) = (d(0)?, d(1)?);
            worst = worst.max((q[0] * x[0] - ht).abs()).max((q[0] * x[1] + hr).abs());
        }
        Ok(worst)
    }

    /// Integrates q̇ = X_t(q) from q0 over t ∈ [0, 1].
    pub fn reconstruct(&self, q0: [f64; 2]) -> Result<[f64; 2]> {
        let f = |y: &V4| -> Result<V4> {
            let x = self.field(y[2], [y[0], y[1]])?;
            Ok(V4::new(x[0], x[1], 1.0, 0.0))
        };
        let cfg = IntegratorConfig {
            rel_tol: 1e-11,
            abs_tol: 1e-11,
            max_step: 0.25,
            projection: false,
            ..Default::default()
        };
        let y = DormandPrince::new(f, cfg).integrate(V4::new(q0[0], q0[1], 0.0, 0.0), 1.0)?;
        Ok([y[0], y[1]])
    }

    /// CAL(φ_1) = ∫₀¹∫_N H_t dλ dt with `n_t` Gauss nodes in t.
    pub fn calabi(&self, grid: &DiscGrid, n_t: usize) -> Result<f64> {
        let gl = GaussLegendre::on(n_t, 0.0, 1.0);
        let mut acc = 0.0;
        for (&t, &w) in gl.nodes.iter().zip(&gl.weights) {
            acc += w * grid.integrate(|r, th| self.hamiltonian(t, [r, th]))?;
        }
        Ok(acc)
    }
}

/// sup over t ∈ `ts` and `points` of |G∘ν_t − H_t∘φ_t| for φ_t = ℰ(tG),
/// where ν_t(r,θ) = (R_t(r,θ), θ).
pub fn hj_residual<G: GeneratingFunction + Clone>(g: G, ts: &[f64], points: &[[f64; 2]]) -> Result<f64> {
    let hp = HamiltonianPath::new(GenPath { g: g.clone() });
    let mut worst: f64 = 0.0;
    for &t in ts {
        let map = hp.path.at(t);
        for &z in points {
            let p = map.eval(z[0], z[1])?;
            let lhs = g.split(p.r, z[1])?[0];
            worst = worst.max((lhs - hp.along(t, z)?).abs());
        }
    }
    Ok(worst)
}

/// Certificate that φ_t = ℰ(tG) is generated by a quasi-autonomous
/// Hamiltonian: the extrema of H_t sit where those of G sit, with the same
/// values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuasiAutonomy {
    /// G is constant; every point is extremal.
    pub degenerate: bool,
    pub g_min: Extremum,
    pub g_max: Extremum,
    /// max over t of |min H_t − min G| and |max H_t − max G|.
    pub value_drift: f64,
    /// max over t of the distance from argmin H_t to argmin G (and for max).
    pub argmin_drift: f64,
    pub argmax_drift: f64,
    /// Grid spacing that bounds the allowed drift.
    pub spacing: f64,
}

impl QuasiAutonomy {
    pub fn holds(&self, value_tol: f64) -> bool {
        self.degenerate
            || (self.value_drift < value_tol && self.argmin_drift < self.spacing && self.argmax_drift < self.spacing)
    }
}

fn drift(k: f64, a: &Extremum, b: &Extremum) -> f64 {
    match (a.interior, b.interior) {
        (false, false) => 0.0,
        (true, true) => disc_distance(k, a.point, b.point),
        _ => f64::INFINITY,
    }
}

/// Builds φ_t = ℰ(tG) and compares the extrema of H_t, t ∈ `ts`, with those
/// of G on `grid`.
pub fn quasi_autonomous_path<G: GeneratingFunction + Clone>(
    g: G,
    grid: &DiscGrid,
    ts: &[f64],
) -> Result<(HamiltonianPath<GenPath<G>>, QuasiAutonomy)> {
    let k = g.k();
    let gv = |r: f64, t: f64| g.split(r, t).map(|s| s[0]);
    let g_min = find_extremum(gv, grid, Branch::Negative)?;
    let g_max = find_extremum(gv, grid, Branch::Positive)?;
    let hp = HamiltonianPath::new(GenPath { g: g.clone() });
    let spacing = grid.spacing();
    let degenerate = (g_max.value - g_min.value).abs() < 1e-14;
    let mut qa =
        QuasiAutonomy { degenerate, g_min, g_max, value_drift: 0.0, argmin_drift: 0.0, argmax_drift: 0.0, spacing };
    if degenerate {
        return Ok((hp, qa));
    }
    for &t in ts {
        let h = |r: f64, th: f64| hp.hamiltonian(t, [r, th]);
        let h_min = find_extremum(h, grid, Branch::Negative)?;
        let h_max = find_extremum(h, grid, Branch::Positive)?;
        qa.value_drift =
            qa.value_drift.max((h_min.value - qa.g_min.value).abs()).max((h_max.value - qa.g_max.value).abs());
        qa.argmin_drift = qa.argmin_drift.max(drift(k, &h_min, &qa.g_min));
        qa.argmax_drift = qa.argmax_drift.max(drift(k, &h_max, &qa.g_max));
    }
    Ok((hp, qa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discmaps::ClosedFormG;

    #[test]
    fn constant_path_has_zero_hamiltonian() {
        let hp = HamiltonianPath::new(RotationPath { k: 1.0, eps: 0.0 });
        assert!(hp.hamiltonian(0.4, [0.5, 0.2]).unwrap().abs() < 1e-13);
    }

    #[test]
    fn rotation_hamiltonian_is_half_eps_r_squared() {
        let eps = 0.04;
        let hp = HamiltonianPath::new(RotationPath { k: 1.0, eps });
        for &(r, t) in &[(0.1, 0.3), (0.8, 0.9), (1.3, 0.1)] {
            let h = hp.hamiltonian(0.5, [r, t]).unwrap();
            assert!((h - 0.5 * eps * r * r).abs() < 1e-12);
            let x = hp.field(0.5, [r, t]).unwrap();
            assert!(x[0].abs() < 1e-12 && (x[1] + eps).abs() < 1e-12);
        }
    }

    #[test]
    fn radial_g_satisfies_hj_exactly() {
        let g = ClosedFormG::radial(1.0, vec![0.01, -0.003]);
        let pts: Vec<_> = DiscGrid::new(1.0, 6, 5).points().collect();
        assert!(hj_residual(&g, &[0.0, 0.3, 1.0], &pts).unwrap() < 1e-10);
    }

    #[test]
    fn path_of_generated_maps_starts_at_identity() {
        let g = ClosedFormG::radial(1.0, vec![0.01]);
        let p = GenPath { g: &g }.at(0.0).eval(0.4, 0.3).unwrap();
        assert_eq!((p.r, p.theta, p.sigma), (0.4, 0.3, 0.0));
    }
}
