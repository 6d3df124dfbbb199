//! Calculus of exact area-preserving maps of the disc (N, λ): the collar
//! Weinstein chart, generating functions, Hamiltonian paths, the Calabi
//! invariant and the sign witnesses.
//!
//! Everything is expressed in collar coordinates (r, θ) with r = 0 the
//! boundary and r = a = √(2k) the center, λ = (−k + ½r²)dθ and
//! dλ = r dr∧dθ. Maps are admissible when they are radial near the center,
//! which keeps the angular displacement single-valued there.

pub mod calabi;
pub mod generating;
pub mod hamiltonian;
pub mod vfunction;
pub mod weinstein;
pub mod witness;

pub use calabi::{calabi_action, calabi_comparison, CalabiComparison, InverseMap};
pub use generating::{
    gen_from_map, map_from_gen, ClosedFormG, ExactDiscMap, FourierTerm, GenMap, Generated, GeneratingFunction,
    HamiltonianFlow, MapPoint, Rotation,
};
pub use hamiltonian::{
    hj_residual, quasi_autonomous_path, GenPath, HamiltonianPath, MapPath, QuasiAutonomy, RotationPath,
};
pub use vfunction::{hat_divide, radial_split, vnorm, Derivative, DiscFunction, Hat, VFunction};
pub use weinstein::{chart_identity_residual, k_primitive, weinstein_inverse, weinstein_map};
pub use witness::{refine_extremum, sign_witness, Branch, Extremum, SignWitness};

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::numerics::GaussLegendre;

/// Collar point → center chart w, with |w|² = a² − r².
pub fn collar_to_w(k: f64, r: f64, theta: f64) -> [f64; 2] {
    let m = (2.0 * k - r * r).max(0.0).sqrt();
    [m * (TAU * theta).cos(), -m * (TAU * theta).sin()]
}

/// Center chart w → collar (r, θ) with θ ∈ [0, 1).
pub fn w_to_collar(k: f64, w: [f64; 2]) -> (f64, f64) {
    let r = (2.0 * k - w[0] * w[0] - w[1] * w[1]).max(0.0).sqrt();
    let theta = (-w[1].atan2(w[0]) / TAU).rem_euclid(1.0);
    (r, theta)
}

/// Euclidean distance of two collar points measured in the center chart.
pub fn disc_distance(k: f64, a: [f64; 2], b: [f64; 2]) -> f64 {
    let wa = collar_to_w(k, a[0], a[1]);
    let wb = collar_to_w(k, b[0], b[1]);
    (wa[0] - wb[0]).hypot(wa[1] - wb[1])
}

/// Tensor grid on N: Gauss–Legendre in r ∈ (0, a), uniform in θ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscGrid {
    pub k: f64,
    pub r: Vec<f64>,
    pub r_weights: Vec<f64>,
    pub theta: Vec<f64>,
}

impl DiscGrid {
    pub fn new(k: f64, n_r: usize, n_theta: usize) -> Self {
        assert!(k > 0.0 && n_r > 0 && n_theta > 0);
        let gl = GaussLegendre::on(n_r, 0.0, (2.0 * k).sqrt());
        let theta = (0..n_theta).map(|j| j as f64 / n_theta as f64).collect();
        Self { k, r: gl.nodes, r_weights: gl.weights, theta }
    }

    pub fn a_max(&self) -> f64 {
        (2.0 * self.k).sqrt()
    }

    pub fn points(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        self.r.iter().flat_map(move |&r| self.theta.iter().map(move |&t| [r, t]))
    }

    /// ∫_N f dλ with dλ = r dr dθ.
    pub fn integrate<E>(&self, mut f: impl FnMut(f64, f64) -> Result<f64, E>) -> Result<f64, E> {
        let mut acc = 0.0;
        let dth = 1.0 / self.theta.len() as f64;
        for (&r, &wr) in self.r.iter().zip(&self.r_weights) {
            let mut row = 0.0;
            for &t in &self.theta {
                row += f(r, t)?;
            }
            acc += wr * r * row * dth;
        }
        Ok(acc)
    }

    /// Largest distance between neighbouring nodes, in the center chart.
    pub fn spacing(&self) -> f64 {
        let mut h: f64 = 0.0;
        let nt = self.theta.len();
        for (i, &r) in self.r.iter().enumerate() {
            for (j, &t) in self.theta.iter().enumerate() {
                let t1 = self.theta[(j + 1) % nt];
                h = h.max(disc_distance(self.k, [r, t], [r, t1]));
                if let Some(&r1) = self.r.get(i + 1) {
                    h = h.max(disc_distance(self.k, [r, t], [r1, t]));
                }
            }
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_area_is_k() {
        for k in [1.0, 2.0, 3.0] {
            let g = DiscGrid::new(k, 8, 4);
            let area: f64 = g.integrate(|_, _| Ok::<_, ()>(1.0)).unwrap();
            assert!((area - k).abs() < 1e-13);
        }
    }

    #[test]
    fn chart_round_trip() {
        let (r, t) = w_to_collar(2.0, collar_to_w(2.0, 0.7, 0.3));
        assert!((r - 0.7).abs() < 1e-14 && (t - 0.3).abs() < 1e-14);
    }
}
