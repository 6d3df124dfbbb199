use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::forms3d::point::deck;
use crate::numerics::IntegratorConfig;
use crate::reebflow::{integrate, return_through};

use super::returns::{page_return, ReturnData};
use super::tube::Normalized;

/// An interior fixed point of the return map and its orbit checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub w: [f64; 2],
    pub r: f64,
    pub theta: f64,
    pub tau: f64,
    pub sigma: f64,
    /// |P(q) − q| after polishing.
    pub displacement: f64,
    /// |Φ^{α'}_τ(S(q)) − deck·S(q)|.
    pub closure_residual: f64,
    /// Period of the orbit through Ψ(S(q)) for the original form.
    pub original_period: f64,
    /// |T(γ_q)/T_ref − (1 + σ(q))|.
    pub period_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    /// P = id on the grid (Zoll case).
    pub all_fixed: bool,
    pub points: Vec<FixedPoint>,
    pub failures: Vec<String>,
}

impl FixedPointReport {
    pub fn max_closure(&self) -> f64 {
        self.points.iter().map(|p| p.closure_residual).fold(0.0, f64::max)
    }

    pub fn max_period_defect(&self) -> f64 {
        self.points.iter().map(|p| p.period_defect).fold(0.0, f64::max)
    }
}

fn disp(rd: &ReturnData, i: usize, j: usize) -> f64 {
    let w = rd.disc.w_from_collar(rd.r[i], rd.theta[j]);
    let p = rd.nodes[i][j].w;
    ((p[0] - w[0]).powi(2) + (p[1] - w[1]).powi(2)).sqrt()
}

fn polish(norm: &Normalized, w0: [f64; 2], cfg: IntegratorConfig) -> Result<Option<([f64; 2], f64)>> {
    let alpha = &norm.form;
    let disc = super::DiscModel::new(alpha.lens_order());
    let f = |w: [f64; 2]| -> Result<Vector2<f64>> {
        let p = page_return(alpha, &disc, w, cfg)?;
        Ok(Vector2::new(p.w[0] - w[0], p.w[1] - w[1]))
    };
    let mut w = Vector2::new(w0[0], w0[1]);
    let mut fw = f([w[0], w[1]])?;
    for _ in 0..25 {
        if fw.norm() < 1e-12 {
            break;
        }
        let h = 1e-6;
        let mut jac = Matrix2::zeros();
        for k in 0..2 {
            let mut d = Vector2::zeros();
            d[k] = h;
            let fp = f([w[0] + d[0], w[1] + d[1]])?;
            let fm = f([w[0] - d[0], w[1] - d[1]])?;
            jac.set_column(k, &((fp - fm) / (2.0 * h)));
        }
        let jt = jac.transpose();
        let mu = 1e-10 * (jt * jac).norm();
        let Some(inv) = (jt * jac + Matrix2::identity() * mu).try_inverse() else {
            return Ok(None);
        };
        let mut step = -(inv * jt * fw);
        if step.norm() > 0.2 {
            step *= 0.2 / step.norm();
        }
        let next = w + step;
        if next.norm() >= disc.a_max() {
            return Ok(None);
        }
        let fn_ = f([next[0], next[1]])?;
        if fn_.norm() >= fw.norm() && step.norm() < 1e-13 {
            break;
        }
        w = next;
        fw = fn_;
    }
    Ok(Some(([w[0], w[1]], fw.norm())))
}

/// Interior fixed points of P: grid minima of |P − id| polished by Newton,
/// each checked against the flow of α' and the orbit census of α.
pub fn fixed_point_orbit_check(rd: &ReturnData, norm: &Normalized, cfg: IntegratorConfig) -> Result<FixedPointReport> {
    let alpha = &norm.form;
    let disc = rd.disc;
    let d = deck(alpha.lens_order());
    let (nr, nt) = (rd.r.len(), rd.theta.len());
    let all_fixed = rd.max_displacement() < 1e-9;
    let mut candidates = Vec::new();
    if all_fixed {
        for i in (0..nr).step_by((nr / 3).max(1)) {
            candidates.push(disc.w_from_collar(rd.r[i], rd.theta[i % nt]));
        }
    } else {
        let dmax = rd.max_displacement();
        for i in 0..nr {
            for j in 0..nt {
                let v = disp(rd, i, j);
                if v > 0.5 * dmax {
                    continue;
                }
                let mut is_min = true;
                for di in [-1i64, 0, 1] {
                    for dj in [-1i64, 0, 1] {
                        let ii = i as i64 + di;
                        if (di == 0 && dj == 0) || ii < 0 || ii >= nr as i64 {
                            continue;
                        }
                        let jj = (j as i64 + dj).rem_euclid(nt as i64) as usize;
                        if disp(rd, ii as usize, jj) < v {
                            is_min = false;
                        }
                    }
                }
                if is_min {
                    candidates.push(disc.w_from_collar(rd.r[i], rd.theta[j]));
                }
            }
        }
    }
    let mut points: Vec<FixedPoint> = Vec::new();
    let mut failures = Vec::new();
    for c in candidates {
        let (w, res) = if all_fixed {
            let p = page_return(alpha, &disc, c, cfg)?;
            (c, ((p.w[0] - c[0]).powi(2) + (p.w[1] - c[1]).powi(2)).sqrt())
        } else {
            match polish(norm, c, cfg)? {
                Some(v) => v,
                None => {
                    failures.push(format!("newton failed from w = {c:?}"));
                    continue;
                }
            }
        };
        if res > 1e-7 {
            failures.push(format!("no fixed point near w = {c:?} (residual {res:e})"));
            continue;
        }
        let (r, theta) = disc.collar_from_w(w);
        if r < 1e-3 {
            continue;
        }
        if points.iter().any(|p| ((p.w[0] - w[0]).powi(2) + (p.w[1] - w[1]).powi(2)).sqrt() < 1e-6) {
            continue;
        }
        let pr = page_return(alpha, &disc, w, cfg)?;
        let q = disc.embed_w(w);
        let end = integrate(alpha, &q, pr.tau, cfg)?;
        let closure = (end - d * q).norm();
        let x = norm.to_original(&q);
        let (t_orig, _) = return_through(&norm.original, &x, 2.0 * norm.period, cfg)?;
        let sigma = pr.tau - 1.0;
        points.push(FixedPoint {
            w,
            r,
            theta,
            tau: pr.tau,
            sigma,
            displacement: res,
            closure_residual: closure,
            original_period: t_orig,
            period_defect: (t_orig / norm.period - (1.0 + sigma)).abs(),
        });
    }
    Ok(FixedPointReport { all_fixed, points, failures })
}
