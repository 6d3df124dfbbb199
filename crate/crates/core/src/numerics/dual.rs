//! Forward-mode differentiation with a four-component gradient, enough to
//! carry full ambient Jacobians of maps R⁴ → R⁴.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual4 {
    pub v: f64,
    pub g: [f64; 4],
}

impl Dual4 {
    pub fn constant(v: f64) -> Self {
        Self { v, g: [0.0; 4] }
    }

    pub fn seed(v: f64, i: usize) -> Self {
        let mut g = [0.0; 4];
        g[i] = 1.0;
        Self { v, g }
    }

    /// Apply a scalar function with known value and derivative.
    pub fn chain(self, f: f64, df: f64) -> Self {
        Self { v: f, g: self.g.map(|x| df * x) }
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s)
    }

    pub fn sin(self) -> Self {
        self.chain(self.v.sin(), self.v.cos())
    }

    pub fn cos(self) -> Self {
        self.chain(self.v.cos(), -self.v.sin())
    }

    pub fn scale(self, s: f64) -> Self {
        Self { v: self.v * s, g: self.g.map(|x| x * s) }
    }
}

impl Add for Dual4 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut g = self.g;
        g.iter_mut().zip(o.g).for_each(|(a, b)| *a += b);
        Self { v: self.v + o.v, g }
    }
}

impl Sub for Dual4 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut g = self.g;
        g.iter_mut().zip(o.g).for_each(|(a, b)| *a -= b);
        Self { v: self.v - o.v, g }
    }
}

impl Mul for Dual4 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut g = [0.0; 4];
        for i in 0..4 {
            g[i] = self.g[i] * o.v + self.v * o.g[i];
        }
        Self { v: self.v * o.v, g }
    }
}

impl Div for Dual4 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = 1.0 / o.v;
        let mut g = [0.0; 4];
        for i in 0..4 {
            g[i] = (self.g[i] - self.v * inv * o.g[i]) * inv;
        }
        Self { v: self.v * inv, g }
    }
}

impl Neg for Dual4 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Add<f64> for Dual4 {
    type Output = Self;
    fn add(self, o: f64) -> Self {
        Self { v: self.v + o, g: self.g }
    }
}

impl Mul<f64> for Dual4 {
    type Output = Self;
    fn mul(self, o: f64) -> Self {
        self.scale(o)
    }
}

/// Complex number over `Dual4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CDual {
    pub re: Dual4,
    pub im: Dual4,
}

impl CDual {
    pub fn new(re: Dual4, im: Dual4) -> Self {
        Self { re, im }
    }

    pub fn from_polar_turns(r: Dual4, turns: Dual4) -> Self {
        let ang = turns.scale(std::f64::consts::TAU);
        Self { re: r * ang.cos(), im: r * ang.sin() }
    }

    pub fn conj(self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    pub fn norm_sqr(self) -> Dual4 {
        self.re * self.re + self.im * self.im
    }

    pub fn scale(self, s: Dual4) -> Self {
        Self { re: self.re * s, im: self.im * s }
    }

    pub fn scale_f(self, s: f64) -> Self {
        Self { re: self.re.scale(s), im: self.im.scale(s) }
    }
}

impl Add for CDual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Mul for CDual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_rational_expression() {
        let x = Dual4::seed(0.7, 0);
        let y = Dual4::seed(-0.4, 1);
        let f = (x * y + x.sqrt()) / (y * y + Dual4::constant(1.0));
        let h = 1e-7;
        let fv = |a: f64, b: f64| (a * b + a.sqrt()) / (b * b + 1.0);
        let dx = (fv(0.7 + h, -0.4) - fv(0.7 - h, -0.4)) / (2.0 * h);
        let dy = (fv(0.7, -0.4 + h) - fv(0.7, -0.4 - h)) / (2.0 * h);
        assert!((f.g[0] - dx).abs() < 1e-8);
        assert!((f.g[1] - dy).abs() < 1e-8);
        assert_eq!(f.g[2], 0.0);
    }
}
