use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::forms3d::V4;

/// The page N as a polar disc: collar (r, θ) with r = 0 the boundary, and a
/// center chart w = √(2p)·z1 with r² = a² − |w|², θ = −arg(w)/2π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscModel {
    /// t_Σ = k = ∫_N dλ_*; equals the lens order.
    pub t_sigma: u32,
}

impl DiscModel {
    pub fn new(t_sigma: u32) -> Self {
        assert!(t_sigma >= 1);
        Self { t_sigma }
    }

    pub fn k(&self) -> f64 {
        self.t_sigma as f64
    }

    pub fn a_max(&self) -> f64 {
        (2.0 * self.k()).sqrt()
    }

    pub fn w_from_collar(&self, r: f64, theta: f64) -> [f64; 2] {
        let m = (self.a_max().powi(2) - r * r).max(0.0).sqrt();
        [m * (TAU * theta).cos(), -m * (TAU * theta).sin()]
    }

    pub fn collar_from_w(&self, w: [f64; 2]) -> (f64, f64) {
        let r = (self.a_max().powi(2) - w[0] * w[0] - w[1] * w[1]).max(0.0).sqrt();
        let theta = (-w[1].atan2(w[0]) / TAU).rem_euclid(1.0);
        (r, theta)
    }

    /// S(r,θ) = (√(1−r²/2p) e^{−2πiθ}, r/√(2p)).
    pub fn embed(&self, r: f64, theta: f64) -> V4 {
        self.embed_collar_jac(r, theta).0
    }

    /// S with ∂_r S and ∂_θ S.
    pub fn embed_collar_jac(&self, r: f64, theta: f64) -> (V4, V4, V4) {
        let tp = 2.0 * self.k();
        let a = (1.0 - r * r / tp).max(0.0).sqrt();
        let (s, c) = (TAU * theta).sin_cos();
        let y = V4::new(a * c, -a * s, r / tp.sqrt(), 0.0);
        let ar = if a > 0.0 { -r / (tp * a) } else { f64::NEG_INFINITY };
        let dr = V4::new(ar * c, -ar * s, 1.0 / tp.sqrt(), 0.0);
        let dth = V4::new(TAU * a * -s, -TAU * a * c, 0.0, 0.0);
        (y, dr, dth)
    }

    /// Center-chart embedding with ∂_{w1} S and ∂_{w2} S.
    pub fn embed_w_jac(&self, w: [f64; 2]) -> (V4, V4, V4) {
        let tp = 2.0 * self.k();
        let s = tp.sqrt();
        let z2 = (1.0 - (w[0] * w[0] + w[1] * w[1]) / tp).max(0.0).sqrt();
        let y = V4::new(w[0] / s, w[1] / s, z2, 0.0);
        let d1 = V4::new(1.0 / s, 0.0, -w[0] / (tp * z2), 0.0);
        let d2 = V4::new(0.0, 1.0 / s, -w[1] / (tp * z2), 0.0);
        (y, d1, d2)
    }

    pub fn embed_w(&self, w: [f64; 2]) -> V4 {
        self.embed_w_jac(w).0
    }

    /// Page point → w (ignores the z2 component).
    pub fn w_of(&self, y: &V4) -> [f64; 2] {
        let s = self.a_max();
        [s * y[0], s * y[1]]
    }

    /// λ_* = (−k + r²/2) dθ, the dθ coefficient.
    pub fn lambda_star_theta(&self, r: f64) -> f64 {
        -self.k() + 0.5 * r * r
    }

    /// λ_* = (w1 dw2 − w2 dw1)/4π as (dw1, dw2) coefficients.
    pub fn lambda_star_w(&self, w: [f64; 2]) -> [f64; 2] {
        [-w[1] / (4.0 * PI), w[0] / (4.0 * PI)]
    }

    /// Jacobian of (r, θ) ↦ w as columns (∂_r w, ∂_θ w).
    pub fn collar_to_w_jac(&self, r: f64, theta: f64) -> [[f64; 2]; 2] {
        let m = (self.a_max().powi(2) - r * r).sqrt();
        let (s, c) = (TAU * theta).sin_cos();
        [[-r / m * c, r / m * s], [-TAU * m * s, -TAU * m * c]]
    }
}
