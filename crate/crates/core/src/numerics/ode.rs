//! Dormand–Prince 5(4) with optional projection back to the unit sphere.

use crate::error::{Error, Result};
use nalgebra::Vector4;
use serde::{Deserialize, Serialize};

pub type V4 = Vector4<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub projection: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-10, max_step: 0.05, min_step: 1e-12, projection: true }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_step > 0.0 && self.min_step > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config { field: "integrator".into(), message: "tolerances and steps must be positive".into() })
        }
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// Outcome of the per-step observer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

/// Autonomous integrator for `y' = f(y)`.
pub struct DormandPrince<F> {
    pub f: F,
    pub cfg: IntegratorConfig,
}

impl<F> DormandPrince<F>
where
    F: Fn(&V4) -> Result<V4>,
{
    pub fn new(f: F, cfg: IntegratorConfig) -> Self {
        Self { f, cfg }
    }

    /// One explicit step of size `h`; returns the 5th-order solution and the
    /// embedded error vector.
    pub fn trial(&self, y: &V4, k1: &V4, h: f64) -> Result<(V4, V4)> {
        let mut k = [V4::zeros(); 7];
        k[0] = *k1;
        for s in 1..7 {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(s) {
                if A[s][j] != 0.0 {
                    ys += kj * (h * A[s][j]);
                }
            }
            k[s] = (self.f)(&ys)?;
        }
        let mut y5 = *y;
        for (j, kj) in k.iter().enumerate().take(6) {
            y5 += kj * (h * A[6][j]);
        }
        let mut err = V4::zeros();
        for (j, kj) in k.iter().enumerate() {
            err += kj * (h * E[j]);
        }
        Ok((y5, err))
    }

    /// Single unchecked step; used for event polishing.
    pub fn single(&self, y: &V4, h: f64) -> Result<V4> {
        let k1 = (self.f)(y)?;
        let (y5, _) = self.trial(y, &k1, h)?;
        Ok(self.project(y5))
    }

    fn project(&self, y: V4) -> V4 {
        if self.cfg.projection {
            y / y.norm()
        } else {
            y
        }
    }

    fn error_norm(&self, y0: &V4, y1: &V4, err: &V4) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..4 {
            let sc = self.cfg.abs_tol + self.cfg.rel_tol * y0[i].abs().max(y1[i].abs());
            m = m.max(err[i].abs() / sc);
        }
        m
    }

    /// Adaptive integration from `t = 0` towards `t_end` (either sign). The
    /// observer sees every accepted step `(t0, y0, t1, y1)` and may stop early.
    /// Returns the final `(t, y)`.
    pub fn run(
        &self,
        y0: V4,
        t_end: f64,
        mut observe: impl FnMut(f64, &V4, f64, &V4) -> Result<Flow>,
    ) -> Result<(f64, V4)> {
        let dir = if t_end >= 0.0 { 1.0 } else { -1.0 };
        let mut t = 0.0;
        let mut y = y0;
        let mut h = (0.01f64).min(self.cfg.max_step) * dir;
        while (t_end - t) * dir > 0.0 {
            let mut last = false;
            if (t + h - t_end) * dir >= 0.0 {
                h = t_end - t;
                last = true;
            }
            let k1 = (self.f)(&y)?;
            let (y5, err) = self.trial(&y, &k1, h)?;
            let en = self.error_norm(&y, &y5, &err);
            if en <= 1.0 {
                let y1 = self.project(y5);
                let t1 = if last { t_end } else { t + h };
                let ctl = observe(t, &y, t1, &y1)?;
                t = t1;
                y = y1;
                if ctl == Flow::Stop {
                    return Ok((t, y));
                }
                let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
                h = (h * fac).abs().min(self.cfg.max_step) * dir;
            } else {
                let fac = (0.9 * en.powf(-0.2)).clamp(0.1, 0.9);
                h *= fac;
                if h.abs() < self.cfg.min_step {
                    return Err(Error::StepFailure { t });
                }
            }
        }
        Ok((t, y))
    }

    pub fn integrate(&self, y0: V4, t_end: f64) -> Result<V4> {
        Ok(self.run(y0, t_end, |_, _, _, _| Ok(Flow::Continue))?.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_is_reproduced() {
        let f = |y: &V4| Ok(V4::new(-y[1], y[0], -2.0 * y[3], 2.0 * y[2]));
        let dp = DormandPrince::new(f, IntegratorConfig { projection: false, ..Default::default() });
        let y0 = V4::new(1.0, 0.0, 0.0, 1.0);
        let y = dp.integrate(y0, 3.0).unwrap();
        let exact = V4::new(3f64.cos(), 3f64.sin(), -6f64.sin(), 6f64.cos());
        assert!((y - exact).norm() < 1e-9);
        let back = dp.integrate(y, -3.0).unwrap();
        assert!((back - y0).norm() < 1e-9);
    }
}
