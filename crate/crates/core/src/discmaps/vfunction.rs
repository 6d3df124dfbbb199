use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::GaussLegendre;

use super::DiscGrid;

/// Quadrature nodes of the Taylor-remainder integral in `Hat`.
const HAT_NODES: usize = 16;
/// Boundary vanishing tolerance for hat division.
const BOUNDARY_TOL: f64 = 1e-10;

/// A smooth function on the collar with access to mixed partials
/// ∂_r^i ∂_θ^j at (r, θ).
pub trait DiscFunction: Send + Sync {
    fn partial(&self, i: usize, j: usize, r: f64, theta: f64) -> f64;

    fn value(&self, r: f64, theta: f64) -> f64 {
        self.partial(0, 0, r, theta)
    }
}

impl<T: DiscFunction + ?Sized> DiscFunction for &T {
    fn partial(&self, i: usize, j: usize, r: f64, theta: f64) -> f64 {
        (**self).partial(i, j, r, theta)
    }
}

/// ∂_r^di ∂_θ^dj f.
#[derive(Debug, Clone)]
pub struct Derivative<F> {
    pub f: F,
    pub di: usize,
    pub dj: usize,
}

impl<F: DiscFunction> DiscFunction for Derivative<F> {
    fn partial(&self, i: usize, j: usize, r: f64, theta: f64) -> f64 {
        self.f.partial(i + self.di, j + self.dj, r, theta)
    }
}

/// f̂ with f = r·f̂, via f̂(r,θ) = ∫₀¹ ∂_r f(ur,θ) du. Partials follow by
/// differentiating under the integral: ∂_r^i ∂_θ^j f̂ = ∫₀¹ u^i f_{i+1,j}(ur) du.
#[derive(Debug, Clone)]
pub struct Hat<F> {
    pub f: F,
    rule: GaussLegendre,
}

impl<F: DiscFunction> DiscFunction for Hat<F> {
    fn partial(&self, i: usize, j: usize, r: f64, theta: f64) -> f64 {
        let mut acc = 0.0;
        for (&u, &w) in self.rule.nodes.iter().zip(&self.rule.weights) {
            acc += w * u.powi(i as i32) * self.f.partial(i + 1, j, u * r, theta);
        }
        acc
    }
}

/// Wraps `f` in the hat-division operator after checking f(0,·) = 0.
pub fn hat_divide<F: DiscFunction>(f: F) -> Result<Hat<F>> {
    let max = (0..64).map(|j| f.value(0.0, j as f64 / 64.0).abs()).fold(0.0, f64::max);
    if max > BOUNDARY_TOL {
        return Err(Error::NonVanishingBoundary { max });
    }
    Ok(Hat { f, rule: GaussLegendre::on(HAT_NODES, 0.0, 1.0) })
}

/// (f_ρ, f_ϑ) with ∂_ρf = ρ f_ρ and ∂_ϑf = ρ² f_ϑ.
#[allow(clippy::type_complexity)]
pub fn radial_split<F: DiscFunction + Clone>(f: F) -> Result<(Hat<Derivative<F>>, Hat<Hat<Derivative<F>>>)> {
    let fr = hat_divide(Derivative { f: f.clone(), di: 1, dj: 0 })?;
    let ft = hat_divide(hat_divide(Derivative { f, di: 0, dj: 1 })?)?;
    Ok((fr, ft))
}

fn sup_order<F: DiscFunction>(f: &F, order: usize, grid: &DiscGrid) -> f64 {
    let mut m: f64 = 0.0;
    for [r, t] in grid.points() {
        for i in 0..=order {
            m = m.max(f.partial(i, order - i, r, t).abs());
        }
    }
    m
}

/// ‖f‖_𝕍 = ‖f‖_{C²} + ‖(1/r)df‖_{C¹} on the grid, with C^k norms summed
/// over orders and maximized over collar partials. The quotient (1/r)df
/// is hat(∂_r f)dr + hat(∂_θ f)dθ.
pub fn vnorm<F: DiscFunction + Clone>(f: F, grid: &DiscGrid) -> Result<f64> {
    let c2: f64 = (0..=2).map(|o| sup_order(&f, o, grid)).sum();
    let hr = hat_divide(Derivative { f: f.clone(), di: 1, dj: 0 })?;
    let ht = hat_divide(Derivative { f, di: 0, dj: 1 })?;
    let c1: f64 = (0..=1).map(|o| sup_order(&hr, o, grid).max(sup_order(&ht, o, grid))).sum();
    Ok(c2 + c1)
}

/// Nodal samples of a scalar field on a `DiscGrid`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VFunction {
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    /// `values[i][j]` at (r_i, θ_j).
    pub values: Vec<Vec<f64>>,
    /// Closed-form source, when there is one.
    pub tag: Option<String>,
}

impl VFunction {
    pub fn sample(grid: &DiscGrid, mut f: impl FnMut(f64, f64) -> Result<f64>, tag: Option<String>) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.r.len());
        for &r in &grid.r {
            values.push(grid.theta.iter().map(|&t| f(r, t)).collect::<Result<Vec<_>>>()?);
        }
        Ok(Self { r: grid.r.clone(), theta: grid.theta.clone(), values, tag })
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sup_distance(&self, other: &VFunction) -> f64 {
        self.values.iter().flatten().zip(other.values.iter().flatten()).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Rows `r,theta,value` under a header.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "r,theta,value")?;
        for (i, &r) in self.r.iter().enumerate() {
            for (j, &t) in self.theta.iter().enumerate() {
                writeln!(out, "{r:.17e},{t:.17e},{:.17e}", self.values[i][j])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a tensor-grid CSV written by `write_csv`.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let file = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut rows = Vec::new();
        for (n, line) in file.lines().enumerate() {
            let line = line?;
            if n == 0 || line.trim().is_empty() {
                continue;
            }
            let v: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidArgument(format!("line {}: {e}", n + 1)))?;
            if v.len() != 3 {
                return Err(Error::InvalidArgument(format!("line {}: expected 3 columns", n + 1)));
            }
            rows.push([v[0], v[1], v[2]]);
        }
        let mut r: Vec<f64> = Vec::new();
        let mut theta: Vec<f64> = Vec::new();
        for row in &rows {
            if r.last() != Some(&row[0]) {
                r.push(row[0]);
            }
            if r.len() == 1 {
                theta.push(row[1]);
            }
        }
        if theta.is_empty() || rows.len() != r.len() * theta.len() {
            return Err(Error::InvalidArgument("grid CSV is not a tensor grid".into()));
        }
        let values = rows.chunks(theta.len()).map(|c| c.iter().map(|x| x[2]).collect()).collect();
        Ok(Self { r, theta, values, tag: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[derive(Clone)]
    struct Fun(fn(usize, usize, f64, f64) -> f64);
    impl DiscFunction for Fun {
        fn partial(&self, i: usize, j: usize, r: f64, t: f64) -> f64 {
            (self.0)(i, j, r, t)
        }
    }

    fn trig(j: usize, t: f64) -> f64 {
        TAU.powi(j as i32) * (TAU * t + j as f64 * std::f64::consts::FRAC_PI_2).sin()
    }

    #[test]
    fn hat_examples() {
        let sq = hat_divide(Fun(|i, j, r, _| match (i, j) {
            (0, 0) => r * r,
            (1, 0) => 2.0 * r,
            (2, 0) => 2.0,
            _ => 0.0,
        }))
        .unwrap();
        let lin = hat_divide(Fun(|i, j, r, t| match i {
            0 => r * trig(j, t),
            1 => trig(j, t),
            _ => 0.0,
        }))
        .unwrap();
        for &r in &[0.0, 0.3, 1.1] {
            assert!((sq.value(r, 0.2) - r).abs() < 1e-14);
            assert!((lin.value(r, 0.2) - (TAU * 0.2).sin()).abs() < 1e-14);
        }
        let bad = hat_divide(Fun(|_, _, _, _| 1.0));
        assert!(matches!(bad, Err(Error::NonVanishingBoundary { .. })));
    }

    #[test]
    fn radial_split_of_rho_squared_sine() {
        // f = ρ² sin 2πϑ
        let f = Fun(|i, j, r, t| match i {
            0 => r * r * trig(j, t),
            1 => 2.0 * r * trig(j, t),
            2 => 2.0 * trig(j, t),
            _ => 0.0,
        });
        let (fr, ft) = radial_split(f).unwrap();
        for &(r, t) in &[(0.2, 0.1), (0.9, 0.7), (1.3, 0.45)] {
            assert!((fr.value(r, t) - 2.0 * (TAU * t).sin()).abs() < 1e-13);
            assert!((ft.value(r, t) - TAU * (TAU * t).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_round_trip() {
        let g = DiscGrid::new(1.0, 3, 4);
        let v = VFunction::sample(&g, |r, t| Ok(r * t), None).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("v.csv");
        v.write_csv(&p).unwrap();
        let back = VFunction::read_csv(&p).unwrap();
        assert_eq!(back.values, v.values);
    }
}
