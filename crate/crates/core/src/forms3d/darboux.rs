use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::numerics::{CDual, Dual4};

use super::form::CovectorField;
use super::point::{M4, V4};

/// Fiberwise chart (x, φ) ↦ (√(1−|x|²/2p) e^{2πiφ/p}, x/√(2p) · e^{2πiφ/p})
/// around the reference fiber through z_* = (1, 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarbouxChart {
    pub lens_order: u32,
    /// Inverse queries are refused beyond `radius·(1 − margin)`.
    pub margin: f64,
}

impl DarbouxChart {
    pub fn new(lens_order: u32) -> Self {
        Self { lens_order, margin: 1e-6 }
    }

    pub fn center(&self) -> V4 {
        V4::new(1.0, 0.0, 0.0, 0.0)
    }

    /// Radius of the ball B: √(2p).
    pub fn radius(&self) -> f64 {
        (2.0 * self.lens_order as f64).sqrt()
    }

    pub fn forward(&self, x: [f64; 2], phi: f64) -> V4 {
        let (y, _) = self.forward_jac(x, phi);
        y
    }

    /// Point and the 4×3 Jacobian columns (∂_{x1}, ∂_{x2}, ∂_φ) as a 4×4
    /// matrix with a zero last column.
    pub fn forward_jac(&self, x: [f64; 2], phi: f64) -> (V4, M4) {
        let p = self.lens_order as f64;
        let x1 = Dual4::seed(x[0], 0);
        let x2 = Dual4::seed(x[1], 1);
        let ph = Dual4::seed(phi, 2);
        let q = x1 * x1 + x2 * x2;
        let amp = (Dual4::constant(1.0) - q.scale(1.0 / (2.0 * p))).sqrt();
        let rot = CDual::from_polar_turns(Dual4::constant(1.0), ph.scale(1.0 / p));
        let w1 = rot.scale(amp);
        let w2 = CDual::new(x1, x2).scale_f(1.0 / (2.0 * p).sqrt()) * rot;
        let comps = [w1.re, w1.im, w2.re, w2.im];
        let y = V4::new(comps[0].v, comps[1].v, comps[2].v, comps[3].v);
        let mut j = M4::zeros();
        for (r, c) in comps.iter().enumerate() {
            for k in 0..3 {
                j[(r, k)] = c.g[k];
            }
        }
        (y, j)
    }

    /// Inverse on the image; φ is returned in [0, p).
    pub fn inverse(&self, y: &V4) -> Result<([f64; 2], f64)> {
        let p = self.lens_order as f64;
        let n1 = (y[0] * y[0] + y[1] * y[1]).sqrt();
        let xnorm = (2.0 * p).sqrt() * (y[2] * y[2] + y[3] * y[3]).sqrt();
        if n1 == 0.0 || xnorm >= self.radius() * (1.0 - self.margin) {
            return Err(Error::OutOfChart { norm: xnorm });
        }
        let (ur, ui) = (y[0] / n1, y[1] / n1);
        let s = (2.0 * p).sqrt();
        // x = √(2p) z2 ū1
        let x = [s * (y[2] * ur + y[3] * ui), s * (y[3] * ur - y[2] * ui)];
        let phi = (p * y[1].atan2(y[0]) / TAU).rem_euclid(p);
        Ok((x, phi))
    }
}

/// Max over an n³ grid of |𝔇^*α − (dφ + (x1 dx2 − x2 dx1)/4π)| on the
/// coordinate vectors, for points with |x| ≤ 0.9·radius.
pub fn pullback_residual(chart: &DarbouxChart, alpha: &dyn CovectorField, n: usize) -> f64 {
    let rmax = 0.9 * chart.radius();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let rad = rmax * (i as f64 + 0.5) / n as f64;
                let ang = TAU * j as f64 / n as f64;
                let x = [rad * ang.cos(), rad * ang.sin()];
                let phi = k as f64 / n as f64;
                let (y, jac) = chart.forward_jac(x, phi);
                let st = [-x[1] / (4.0 * PI), x[0] / (4.0 * PI), 1.0];
                for (c, want) in st.iter().enumerate() {
                    let got = alpha.eval(&y, &jac.column(c).into_owned());
                    worst = worst.max((got - want).abs());
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms3d::form::ContactForm;

    #[test]
    fn reference_fiber_and_section_formula() {
        let c = DarbouxChart::new(1);
        let y = c.forward([0.0, 0.0], 0.25);
        assert!((y - V4::new(0.0, 1.0, 0.0, 0.0)).norm() < 1e-15);
        let (r, th) = (0.8f64, 0.3f64);
        let y = c.forward([r * (TAU * th).cos(), r * (TAU * th).sin()], -th);
        let a = (1.0 - r * r / 2.0).sqrt();
        let want = V4::new(a * (TAU * th).cos(), -a * (TAU * th).sin(), r / 2f64.sqrt(), 0.0);
        assert!((y - want).norm() < 1e-15);
    }

    #[test]
    fn inverse_round_trip() {
        for p in 1..=3 {
            let c = DarbouxChart::new(p);
            let y = c.forward([0.4, -0.7], 0.3);
            let (x, phi) = c.inverse(&y).unwrap();
            assert!((x[0] - 0.4).abs() < 1e-14 && (x[1] + 0.7).abs() < 1e-14);
            assert!((phi - 0.3).abs() < 1e-14);
        }
        assert!(DarbouxChart::new(1).inverse(&V4::new(0.0, 0.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn pullback_is_standard() {
        for p in 1..=3 {
            let c = DarbouxChart::new(p);
            assert!(pullback_residual(&c, &ContactForm::zoll(p), 10) < 1e-10);
        }
    }
}
