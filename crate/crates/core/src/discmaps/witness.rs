//! Extremal fixed points: an interior critical point of G is a fixed point
//! of ℰ(G) whose action equals G there.

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::calabi::calabi_action;
use super::generating::{map_from_gen, ExactDiscMap, GeneratingFunction};
use super::{collar_to_w, disc_distance, w_to_collar, DiscGrid};

/// Which extremum: `Negative` looks for a minimum (negative action),
/// `Positive` for a maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Negative,
    Positive,
}

impl Branch {
    /// +1 when minimizing, −1 when maximizing.
    fn sign(self) -> f64 {
        match self {
            Branch::Negative => 1.0,
            Branch::Positive => -1.0,
        }
    }
}

/// Extremum of a function in 𝕍. When no interior value beats the boundary
/// value 0, the extremum is attained on ∂N and `interior` is false.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub interior: bool,
    /// Collar point.
    pub point: [f64; 2],
    pub w: [f64; 2],
    pub value: f64,
}

fn fd_grad(obj: &impl Fn([f64; 2]) -> Result<f64>, w: [f64; 2], h: f64) -> Result<Vector2<f64>> {
    let mut g = Vector2::zeros();
    for i in 0..2 {
        let mut f = [0.0; 4];
        for (n, s) in [2.0, 1.0, -1.0, -2.0].iter().enumerate() {
            let mut y = w;
            y[i] += s * h;
            f[n] = obj(y)?;
        }
        g[i] = (-f[0] + 8.0 * f[1] - 8.0 * f[2] + f[3]) / (12.0 * h);
    }
    Ok(g)
}

/// Local extremum of `f` in the center chart, starting at `w0`, by damped
/// Newton with finite-difference derivatives. Returns (w, f(w)).
pub fn refine_extremum(
    f: impl Fn([f64; 2]) -> Result<f64>,
    w0: [f64; 2],
    a: f64,
    branch: Branch,
) -> Result<([f64; 2], f64)> {
    let s = branch.sign();
    let obj = |w: [f64; 2]| f(w).map(|v| s * v);
    let h = 2e-4 * a;
    let inside = |w: [f64; 2]| w[0].hypot(w[1]) < a * (1.0 - 1e-6);
    let mut w = w0;
    let mut val = obj(w)?;
    for _ in 0..60 {
        let g = fd_grad(&obj, w, h)?;
        if g.norm() < 1e-14 {
            break;
        }
        let mut hess = Matrix2::zeros();
        for j in 0..2 {
            let (mut p, mut m) = (w, w);
            p[j] += h;
            m[j] -= h;
            let col = (fd_grad(&obj, p, h)? - fd_grad(&obj, m, h)?) / (2.0 * h);
            hess.set_column(j, &col);
        }
        let hess = 0.5 * (hess + hess.transpose());
        let newton = (hess[(0, 0)] > 0.0 && hess.determinant() > 0.0).then(|| hess.lu().solve(&-g)).flatten();
        let mut d = newton.unwrap_or_else(|| -g * (0.05 * a / g.norm().max(1e-300)));
        if d.norm() > 0.1 * a {
            d *= 0.1 * a / d.norm();
        }
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..40 {
            let wn = [w[0] + t * d[0], w[1] + t * d[1]];
            if inside(wn) {
                let vn = obj(wn)?;
                if vn <= val || t * d.norm() < 1e-7 * a {
                    w = wn;
                    val = vn;
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !moved || t * d.norm() < 1e-15 * a {
            break;
        }
    }
    Ok((w, s * val))
}

/// Extremum of `f` over N: best grid node (center included), refined.
pub fn find_extremum(f: impl Fn(f64, f64) -> Result<f64>, grid: &DiscGrid, branch: Branch) -> Result<Extremum> {
    let s = branch.sign();
    let k = grid.k;
    let a = grid.a_max();
    let mut best = ([a, 0.0], s * f(a, 0.0)?);
    for p in grid.points() {
        let v = s * f(p[0], p[1])?;
        if v < best.1 {
            best = (p, v);
        }
    }
    if best.1 >= 0.0 {
        return Ok(Extremum { interior: false, point: [0.0, 0.0], w: collar_to_w(k, 0.0, 0.0), value: 0.0 });
    }
    let fw = |w: [f64; 2]| {
        let (r, t) = w_to_collar(k, w);
        f(r, t)
    };
    let w0 = collar_to_w(k, best.0[0], best.0[1]);
    let (w, value) = refine_extremum(fw, w0, a, branch)?;
    let (r, t) = w_to_collar(k, w);
    Ok(Extremum { interior: true, point: [r, t], w, value })
}

/// An interior fixed point of ℰ(G) whose action has the sign of CAL.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignWitness {
    pub branch: Branch,
    pub calabi: f64,
    pub point: [f64; 2],
    pub g_value: f64,
    pub sigma: f64,
    /// |φ(q) − q| in the center chart.
    pub displacement: f64,
}

/// Fixed point tolerance for witnesses.
const FIXED_TOL: f64 = 1e-8;

/// If CAL(ℰ(G)) ≤ 0 returns the interior minimizer of G, which must have
/// G < 0 and be a fixed point with σ = G; symmetrically for CAL > 0.
pub fn sign_witness<G: GeneratingFunction>(g: G, grid: &DiscGrid) -> Result<SignWitness> {
    let k = g.k();
    let map = map_from_gen(&g);
    let mut moved: f64 = 0.0;
    for p in grid.points() {
        let q = map.eval(p[0], p[1])?;
        moved = moved.max(disc_distance(k, p, [q.r, q.theta]));
    }
    if moved < 1e-6 {
        return Err(Error::WitnessNotFound { reason: "map is the identity".into() });
    }
    let calabi = calabi_action(&map, grid)?;
    let branch = if calabi <= 0.0 { Branch::Negative } else { Branch::Positive };
    let ext = find_extremum(|r, t| g.split(r, t).map(|s| s[0]), grid, branch)?;
    let fail = |reason: String| Err(Error::WitnessNotFound { reason });
    if !ext.interior {
        return fail(format!("extremum of G lies on the boundary (CAL = {calabi:e})"));
    }
    let p = map.eval(ext.point[0], ext.point[1])?;
    let displacement = disc_distance(k, ext.point, [p.r, p.theta]);
    if displacement > FIXED_TOL {
        return fail(format!("critical point moves by {displacement:e}"));
    }
    if (p.sigma - ext.value).abs() > FIXED_TOL {
        return fail(format!("action {} differs from G = {}", p.sigma, ext.value));
    }
    if (branch == Branch::Negative && p.sigma >= 0.0) || (branch == Branch::Positive && p.sigma <= 0.0) {
        return fail(format!("action {} has the wrong sign for CAL = {calabi:e}", p.sigma));
    }
    Ok(SignWitness { branch, calabi, point: ext.point, g_value: ext.value, sigma: p.sigma, displacement })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discmaps::ClosedFormG;

    #[test]
    fn rotation_witness_is_center() {
        let grid = DiscGrid::new(1.0, 12, 16);
        let eps = 0.02;
        let w = sign_witness(ClosedFormG::rotation(1.0, eps), &grid).unwrap();
        assert_eq!(w.branch, Branch::Positive);
        assert!((w.point[0] - 2f64.sqrt()).abs() < 1e-6);
        assert!((w.sigma - eps).abs() < 1e-12);
        let m = sign_witness(ClosedFormG::rotation(1.0, -eps), &grid).unwrap();
        assert_eq!(m.branch, Branch::Negative);
        assert!(m.sigma < 0.0);
    }

    #[test]
    fn identity_has_no_witness() {
        let grid = DiscGrid::new(1.0, 6, 6);
        assert!(sign_witness(ClosedFormG::radial(1.0, vec![]), &grid).is_err());
    }

    #[test]
    fn refine_finds_quadratic_minimum() {
        let f = |w: [f64; 2]| Ok((w[0] - 0.3).powi(2) + 2.0 * (w[1] + 0.1).powi(2) - 1.0);
        let (w, v) = refine_extremum(f, [0.0, 0.0], 1.0, Branch::Negative).unwrap();
        assert!((w[0] - 0.3).abs() < 1e-10 && (w[1] + 0.1).abs() < 1e-10 && (v + 1.0).abs() < 1e-15);
    }
}
