use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::forms3d::{ContactForm, CovectorField};
use crate::numerics::{wrap_turn, GaussLegendre, IntegratorConfig};
use crate::reebflow::section_return;

use super::disc::DiscModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SectionGrid {
    /// Gauss–Legendre nodes in r ∈ (0, a).
    pub n_r: usize,
    /// Uniform nodes in θ.
    pub n_theta: usize,
    /// Radial spacing of the five nodes used for boundary extrapolation.
    pub boundary_step: f64,
}

impl Default for SectionGrid {
    fn default() -> Self {
        Self { n_r: 24, n_theta: 48, boundary_step: 0.02 }
    }
}

/// Return time and return point of one page point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PageReturn {
    pub tau: f64,
    /// Return point in the center chart.
    pub w: [f64; 2],
}

/// Return data of a normalized form on a tensor grid of the page.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReturnData {
    pub disc: DiscModel,
    pub r: Vec<f64>,
    pub r_weights: Vec<f64>,
    pub theta: Vec<f64>,
    /// `nodes[i][j]` at (r_i, θ_j).
    pub nodes: Vec<Vec<PageReturn>>,
    /// dλ(∂_r, ∂_θ) at the nodes.
    pub dlambda: Vec<Vec<f64>>,
    /// Extrapolated boundary return time per θ_j.
    pub tau_boundary: Vec<f64>,
    /// Extrapolated boundary angular displacement Θ_P − θ (turns).
    pub shift_boundary: Vec<f64>,
    pub t_ref: f64,
}

/// Return of the page point S_w(w).
pub fn page_return(alpha: &ContactForm, disc: &DiscModel, w: [f64; 2], cfg: IntegratorConfig) -> Result<PageReturn> {
    let q = disc.embed_w(w);
    let (tau, y) = section_return(alpha, &q, cfg)?;
    Ok(PageReturn { tau, w: disc.w_of(&y) })
}

/// dλ(∂_r, ∂_θ) at a collar point.
pub fn dlambda_collar(alpha: &ContactForm, disc: &DiscModel, r: f64, theta: f64) -> f64 {
    let (y, dr, dth) = disc.embed_collar_jac(r, theta);
    alpha.d_eval(&y, &dr, &dth)
}

/// Values at r = 0 from samples at h, 2h, …, 5h (exact for quartics).
pub fn extrapolate_to_boundary(f: [f64; 5]) -> f64 {
    5.0 * f[0] - 10.0 * f[1] + 10.0 * f[2] - 5.0 * f[3] + f[4]
}

/// Return time and return map of a normalized form on the page grid.
pub fn return_map(alpha: &ContactForm, t_ref: f64, grid: SectionGrid, cfg: IntegratorConfig) -> Result<ReturnData> {
    let disc = DiscModel::new(alpha.lens_order());
    let a = disc.a_max();
    let gl = GaussLegendre::on(grid.n_r, 0.0, a);
    let theta: Vec<f64> = (0..grid.n_theta).map(|j| j as f64 / grid.n_theta as f64).collect();
    let mut nodes = Vec::with_capacity(grid.n_r);
    let mut dl = Vec::with_capacity(grid.n_r);
    for &r in &gl.nodes {
        let mut row = Vec::with_capacity(theta.len());
        let mut drow = Vec::with_capacity(theta.len());
        for &th in &theta {
            row.push(page_return(alpha, &disc, disc.w_from_collar(r, th), cfg)?);
            drow.push(dlambda_collar(alpha, &disc, r, th));
        }
        nodes.push(row);
        dl.push(drow);
    }
    let mut tau_b = Vec::with_capacity(theta.len());
    let mut shift_b = Vec::with_capacity(theta.len());
    for &th in &theta {
        let mut ts = [0.0; 5];
        let mut ss = [0.0; 5];
        for k in 0..5 {
            let r = grid.boundary_step * (k + 1) as f64;
            let pr = page_return(alpha, &disc, disc.w_from_collar(r, th), cfg)?;
            let (_, th2) = disc.collar_from_w(pr.w);
            ts[k] = pr.tau;
            ss[k] = wrap_turn(th2 - th);
        }
        tau_b.push(extrapolate_to_boundary(ts));
        shift_b.push(extrapolate_to_boundary(ss));
    }
    Ok(ReturnData {
        disc,
        r: gl.nodes,
        r_weights: gl.weights,
        theta,
        nodes,
        dlambda: dl,
        tau_boundary: tau_b,
        shift_boundary: shift_b,
        t_ref,
    })
}

impl ReturnData {
    /// ∫_N f dλ over the grid for nodal values f.
    pub fn integrate(&self, f: impl Fn(usize, usize) -> f64) -> f64 {
        let nt = self.theta.len() as f64;
        let mut s = 0.0;
        for (i, w) in self.r_weights.iter().enumerate() {
            let mut row = 0.0;
            for j in 0..self.theta.len() {
                row += f(i, j) * self.dlambda[i][j];
            }
            s += w * row / nt;
        }
        s
    }

    /// Largest return displacement |P(q) − q| in the center chart.
    pub fn max_displacement(&self) -> f64 {
        let mut m: f64 = 0.0;
        for (i, &r) in self.r.iter().enumerate() {
            for (j, &th) in self.theta.iter().enumerate() {
                let w = self.disc.w_from_collar(r, th);
                let p = self.nodes[i][j].w;
                m = m.max(((p[0] - w[0]).powi(2) + (p[1] - w[1]).powi(2)).sqrt());
            }
        }
        m
    }

    /// Largest |τ − 1|.
    pub fn max_tau_defect(&self) -> f64 {
        self.nodes.iter().flatten().map(|n| (n.tau - 1.0).abs()).fold(0.0, f64::max)
    }
}
