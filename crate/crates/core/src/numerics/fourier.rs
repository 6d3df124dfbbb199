//! Direct trigonometric transforms for short periodic sample sets.

use std::f64::consts::TAU;

/// Complex Fourier coefficients `c_k`, `k = -(m/2-1) ..= m/2-1`, of real
/// samples at `s_j = j/m`. Index `k` is stored at `k + half`.
#[derive(Debug, Clone)]
pub struct TrigSeries {
    pub half: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl TrigSeries {
    pub fn from_samples(samples: &[f64]) -> Self {
        let m = samples.len();
        assert!(m >= 4);
        let half = m / 2 - 1;
        let mut re = vec![0.0; 2 * half + 1];
        let mut im = vec![0.0; 2 * half + 1];
        for k in -(half as i64)..=(half as i64) {
            let (mut a, mut b) = (0.0, 0.0);
            for (j, &v) in samples.iter().enumerate() {
                let ang = -TAU * (k as f64) * (j as f64) / m as f64;
                a += v * ang.cos();
                b += v * ang.sin();
            }
            re[(k + half as i64) as usize] = a / m as f64;
            im[(k + half as i64) as usize] = b / m as f64;
        }
        Self { half, re, im }
    }

    /// `Σ_k c_k u^k` for a unit complex `u = (ur, ui)`; real part only.
    pub fn eval_unit(&self, ur: f64, ui: f64) -> f64 {
        let mut acc = self.re[self.half];
        let (mut pr, mut pi) = (1.0, 0.0);
        for k in 1..=self.half {
            let t = pr * ur - pi * ui;
            pi = pr * ui + pi * ur;
            pr = t;
            let (cr, ci) = (self.re[self.half + k], self.im[self.half + k]);
            // c_k u^k + c_{-k} u^{-k} = 2 Re(c_k u^k) for real data
            acc += 2.0 * (cr * pr - ci * pi);
        }
        acc
    }

    pub fn eval(&self, s: f64) -> f64 {
        let a = TAU * s;
        self.eval_unit(a.cos(), a.sin())
    }
}

/// Spectral derivative d/ds of real periodic samples on [0,1).
pub fn spectral_derivative(samples: &[f64]) -> Vec<f64> {
    let m = samples.len();
    let ser = TrigSeries::from_samples(samples);
    (0..m)
        .map(|j| {
            let s = j as f64 / m as f64;
            let mut acc = 0.0;
            for k in 1..=ser.half {
                let (cr, ci) = (ser.re[ser.half + k], ser.im[ser.half + k]);
                let a = TAU * k as f64 * s;
                // d/ds 2Re(c e^{2πiks}) = 2Re(2πik c e^{...})
                acc += -2.0 * TAU * k as f64 * (cr * a.sin() + ci * a.cos());
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_and_differentiates_trig_polynomials() {
        let m = 32;
        let f = |s: f64| 0.3 + (TAU * s).cos() - 0.5 * (3.0 * TAU * s).sin();
        let df = |s: f64| -TAU * (TAU * s).sin() - 1.5 * TAU * (3.0 * TAU * s).cos();
        let samples: Vec<f64> = (0..m).map(|j| f(j as f64 / m as f64)).collect();
        let ser = TrigSeries::from_samples(&samples);
        assert!((ser.eval(0.123) - f(0.123)).abs() < 1e-13);
        let d = spectral_derivative(&samples);
        for (j, v) in d.iter().enumerate() {
            assert!((v - df(j as f64 / m as f64)).abs() < 1e-12);
        }
    }
}
