//! Return-map identities: exactness, volume, boundary normalization, Calabi.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::forms3d::{ContactForm, CovectorField};
use crate::numerics::fourier::spectral_derivative;
use crate::numerics::IntegratorConfig;

use super::disc::DiscModel;
use super::returns::{page_return, ReturnData};

/// ∮ λ along a closed curve sampled uniformly in the center chart.
pub fn loop_integral(alpha: &ContactForm, disc: &DiscModel, w: &[[f64; 2]]) -> f64 {
    let m = w.len();
    let w1: Vec<f64> = w.iter().map(|p| p[0]).collect();
    let w2: Vec<f64> = w.iter().map(|p| p[1]).collect();
    let d1 = spectral_derivative(&w1);
    let d2 = spectral_derivative(&w2);
    let mut s = 0.0;
    for k in 0..m {
        let (y, e1, e2) = disc.embed_w_jac(w[k]);
        s += alpha.eval(&y, &(e1 * d1[k] + e2 * d2[k]));
    }
    s / m as f64
}

/// Max over random circles ℓ of |∮_{P∘ℓ} λ − ∮_ℓ λ|.
pub fn loop_exactness(
    alpha: &ContactForm,
    loops: usize,
    samples: usize,
    seed: u64,
    cfg: IntegratorConfig,
) -> Result<f64> {
    let disc = DiscModel::new(alpha.lens_order());
    let a = disc.a_max();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..loops {
        let rad = a * rng.gen_range(0.05..0.4);
        let reach = 0.9 * a - rad;
        let (cr, ca) = (reach * rng.gen::<f64>().sqrt(), std::f64::consts::TAU * rng.gen::<f64>());
        let c = [cr * ca.cos(), cr * ca.sin()];
        let curve: Vec<[f64; 2]> = (0..samples)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / samples as f64;
                [c[0] + rad * t.cos(), c[1] + rad * t.sin()]
            })
            .collect();
        let image: Vec<[f64; 2]> =
            curve.iter().map(|w| page_return(alpha, &disc, *w, cfg).map(|p| p.w)).collect::<Result<_>>()?;
        let d = loop_integral(alpha, &disc, &image) - loop_integral(alpha, &disc, &curve);
        worst = worst.max(d.abs());
    }
    Ok(worst)
}

/// |(P^*λ − λ − dτ)(∂_{w_k})| at a page point, by centered differences.
pub fn pointwise_exactness(alpha: &ContactForm, w: [f64; 2], h: f64, cfg: IntegratorConfig) -> Result<f64> {
    let disc = DiscModel::new(alpha.lens_order());
    let base = page_return(alpha, &disc, w, cfg)?;
    let (y0, e1, e2) = disc.embed_w_jac(w);
    let lam = [alpha.eval(&y0, &e1), alpha.eval(&y0, &e2)];
    let (yp, f1, f2) = disc.embed_w_jac(base.w);
    let mut worst: f64 = 0.0;
    for k in 0..2 {
        let mut wp = w;
        let mut wm = w;
        wp[k] += h;
        wm[k] -= h;
        let rp = page_return(alpha, &disc, wp, cfg)?;
        let rm = page_return(alpha, &disc, wm, cfg)?;
        let dtau = (rp.tau - rm.tau) / (2.0 * h);
        let dp = [(rp.w[0] - rm.w[0]) / (2.0 * h), (rp.w[1] - rm.w[1]) / (2.0 * h)];
        let pull = alpha.eval(&yp, &(f1 * dp[0] + f2 * dp[1]));
        worst = worst.max((pull - lam[k] - dtau).abs());
    }
    Ok(worst)
}

/// max_θ |τ(θ) − 1 + k·(Θ_P − θ)| on ∂N.
pub fn boundary_residual(rd: &ReturnData) -> f64 {
    let k = rd.disc.k();
    rd.tau_boundary.iter().zip(&rd.shift_boundary).map(|(t, s)| (t - 1.0 + k * s).abs()).fold(0.0, f64::max)
}

/// Calabi invariant of the return map and the volume identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalabiReport {
    /// ½∫σ dλ in normalized units.
    pub cal_normalized: f64,
    /// T_ref² · cal_normalized, in the units of the original form.
    pub cal: f64,
    /// ∫τ dλ (normalized volume from the section).
    pub section_volume: f64,
    /// ∫dλ over the page (equals t_Σ).
    pub page_area: f64,
    pub t_ref: f64,
}

impl CalabiReport {
    /// |Vol − 2·CAL − t_Σ T_ref²| for an independently computed volume.
    pub fn identity_residual(&self, volume: f64, t_sigma: f64) -> f64 {
        (volume - 2.0 * self.cal - t_sigma * self.t_ref * self.t_ref).abs()
    }
}

/// σ = τ − 1 on the grid and CAL = ½∫σ dλ.
pub fn action_and_calabi(rd: &ReturnData) -> CalabiReport {
    let sv = rd.integrate(|i, j| rd.nodes[i][j].tau);
    let area = rd.integrate(|_, _| 1.0);
    let cal_n = 0.5 * rd.integrate(|i, j| rd.nodes[i][j].tau - 1.0);
    CalabiReport {
        cal_normalized: cal_n,
        cal: cal_n * rd.t_ref * rd.t_ref,
        section_volume: sv,
        page_area: area,
        t_ref: rd.t_ref,
    }
}

/// σ per node.
pub fn sigma_grid(rd: &ReturnData) -> Vec<Vec<f64>> {
    rd.nodes.iter().map(|row| row.iter().map(|n| n.tau - 1.0).collect()).collect()
}
