use std::f64::consts::{FRAC_PI_2, TAU};

use log::debug;
use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms3d::point::{deck, hermitian, hopf_point, M4};
use crate::forms3d::{reeb_at, ContactForm, V4};
use crate::numerics::ode::Flow;
use crate::numerics::IntegratorConfig;

use super::integrate::{first_crossing, integrate, stepper};

/// Periodic Reeb orbit in the class of the Zoll fibers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    pub seed: V4,
    pub period: f64,
    pub class_h: bool,
    pub closure_residual: f64,
    pub lift_winding: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OrbitSearch {
    pub t_cap: f64,
    /// Latitude rows of the seed grid on the base sphere (poles included).
    pub n_lat: usize,
    /// Longitudes per non-polar row.
    pub n_lon: usize,
    pub accept_tol: f64,
    pub fd_step: f64,
    pub dedup_tol: f64,
    pub max_newton: usize,
}

impl Default for OrbitSearch {
    fn default() -> Self {
        Self { t_cap: 1.5, n_lat: 5, n_lon: 6, accept_tol: 1e-10, fd_step: 1e-6, dedup_tol: 1e-5, max_newton: 30 }
    }
}

/// Result of a census: distinct orbits plus the number of dropped seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitCensus {
    pub orbits: Vec<PeriodicOrbit>,
    pub seeds: usize,
    pub dropped: usize,
}

/// Transversal disc through `center`: the great 2-sphere orthogonal to R.
struct LocalSection {
    center: V4,
    normal: V4,
    e1: V4,
    e2: V4,
    deck: M4,
}

impl LocalSection {
    fn new(alpha: &ContactForm, center: V4) -> Result<Self> {
        let r = reeb_at(alpha, &center)?;
        let normal = r.normalize();
        // Gram–Schmidt of the standard basis against (center, normal)
        let mut basis: Vec<V4> = Vec::new();
        for i in 0..4 {
            let mut v = V4::zeros();
            v[i] = 1.0;
            for b in [center, normal].iter().chain(basis.iter()) {
                v -= b * b.dot(&v);
            }
            if v.norm() > 1e-3 {
                basis.push(v.normalize());
            }
            if basis.len() == 2 {
                break;
            }
        }
        let d = deck(alpha.lens_order());
        Ok(Self { center, normal, e1: basis[0], e2: basis[1], deck: d })
    }

    fn point(&self, ab: &Vector2<f64>) -> V4 {
        let h = (1.0 - ab.norm_squared()).max(0.0).sqrt();
        self.center * h + self.e1 * ab[0] + self.e2 * ab[1]
    }

    /// Return time and coordinates of the first class-𝔥 return.
    fn ret(
        &self,
        alpha: &ContactForm,
        ab: &Vector2<f64>,
        t_cap: f64,
        cfg: IntegratorConfig,
    ) -> Result<(f64, Vector2<f64>)> {
        let y0 = self.point(ab);
        let ell = self.deck * self.normal;
        let target = self.deck * self.center;
        let c = first_crossing(alpha, &y0, &ell, t_cap, cfg, |t0, _, _, yb| t0 > 0.25 && (yb - target).norm() < 0.5)?;
        let back = self.deck.transpose() * c.y;
        Ok((c.t, Vector2::new(back.dot(&self.e1), back.dot(&self.e2))))
    }
}

/// Period of the class-𝔥 orbit through `x`, if it is periodic: the return
/// time to the transversal disc at `x` and the return displacement.
pub fn return_through(alpha: &ContactForm, x: &V4, t_cap: f64, cfg: IntegratorConfig) -> Result<(f64, f64)> {
    let sec = LocalSection::new(alpha, *x)?;
    let (t, ab) = sec.ret(alpha, &Vector2::zeros(), t_cap, cfg)?;
    Ok((t, ab.norm()))
}

fn newton(alpha: &ContactForm, seed: V4, search: &OrbitSearch, cfg: IntegratorConfig) -> Result<Option<(V4, f64)>> {
    let mut center = seed;
    for _restart in 0..3 {
        let sec = LocalSection::new(alpha, center)?;
        let mut ab = Vector2::zeros();
        for _ in 0..search.max_newton {
            let (t, img) = sec.ret(alpha, &ab, search.t_cap, cfg)?;
            let f = img - ab;
            if f.norm() <= search.accept_tol {
                return Ok(Some((sec.point(&ab), t)));
            }
            let h = search.fd_step;
            let mut jac = Matrix2::zeros();
            for k in 0..2 {
                let mut d = Vector2::zeros();
                d[k] = h;
                let fp = sec.ret(alpha, &(ab + d), search.t_cap, cfg)?.1 - (ab + d);
                let fm = sec.ret(alpha, &(ab - d), search.t_cap, cfg)?.1 - (ab - d);
                jac.set_column(k, &((fp - fm) / (2.0 * h)));
            }
            // Levenberg damping keeps degenerate twists from blowing up
            let jt = jac.transpose();
            let mu = 1e-12 * (jt * jac).norm();
            let Some(inv) = (jt * jac + Matrix2::identity() * mu).try_inverse() else {
                return Ok(None);
            };
            let mut step = -(inv * jt * f);
            if step.norm() > 0.3 {
                step *= 0.3 / step.norm();
            }
            ab += step;
            if ab.norm() > 0.6 {
                center = sec.point(&ab);
                break;
            }
        }
        if ab.norm() <= 0.6 {
            return Ok(None);
        }
    }
    Ok(None)
}

/// Winding of the fiber-angle lift along the orbit over time `t`, measured by
/// the phase of ⟨seed, y(t)⟩ and scaled by the lens order.
pub fn lift_winding(alpha: &ContactForm, seed: &V4, t: f64, cfg: IntegratorConfig) -> Result<i64> {
    let dp = stepper(alpha, cfg);
    let mut phase = 0.0;
    let mut worst = f64::INFINITY;
    let mut prev = (1.0, 0.0);
    dp.run(*seed, t, |_, _, _, y| {
        let (re, im) = hermitian(seed, y);
        worst = worst.min((re * re + im * im).sqrt());
        phase += (im * prev.0 - re * prev.1).atan2(re * prev.0 + im * prev.1);
        prev = (re, im);
        Ok(Flow::Continue)
    })?;
    if worst < 0.5 {
        return Err(Error::ChartEscape { overlap: worst });
    }
    Ok((alpha.lens_order() as f64 * phase / TAU).round() as i64)
}

/// Class test for a closed orbit: unit winding of the lift.
pub fn class_h_test(orbit: &PeriodicOrbit, alpha: &ContactForm, cfg: IntegratorConfig) -> Result<bool> {
    Ok(lift_winding(alpha, &orbit.seed, orbit.period, cfg)? == 1)
}

/// Sampled trajectory over one period (accepted step endpoints).
fn trajectory(alpha: &ContactForm, seed: &V4, period: f64, cfg: IntegratorConfig) -> Result<Vec<(f64, V4)>> {
    let dp = stepper(alpha, cfg);
    let mut out = vec![(0.0, *seed)];
    dp.run(*seed, period, |_, _, t1, y| {
        out.push((t1, *y));
        Ok(Flow::Continue)
    })?;
    Ok(out)
}

/// min over t and deck powers of |γ(t) − deck^k x|, refined by Newton in t.
pub fn orbit_distance(alpha: &ContactForm, traj: &[(f64, V4)], x: &V4, cfg: IntegratorConfig) -> Result<f64> {
    let p = alpha.lens_order();
    let d = deck(p);
    let mut targets = vec![*x];
    for k in 1..p {
        let prev = targets[k as usize - 1];
        targets.push(d * prev);
    }
    let mut best = f64::INFINITY;
    for tgt in &targets {
        let (_, y0) = traj.iter().min_by(|a, b| (a.1 - tgt).norm().total_cmp(&(b.1 - tgt).norm())).copied().unwrap();
        let mut y = y0;
        for _ in 0..6 {
            let r = reeb_at(alpha, &y)?;
            let dt = -(y - tgt).dot(&r) / r.norm_squared();
            if dt.abs() < 1e-15 {
                break;
            }
            y = integrate(alpha, &y, dt, cfg)?;
        }
        best = best.min((y - tgt).norm());
    }
    Ok(best)
}

fn seeds(search: &OrbitSearch) -> Vec<V4> {
    let mut out = vec![hopf_point(0.0, 0.0, 0.0)];
    for i in 1..search.n_lat.saturating_sub(1) {
        let s = FRAC_PI_2 * i as f64 / (search.n_lat - 1) as f64;
        for j in 0..search.n_lon {
            out.push(hopf_point(s, 0.0, j as f64 / search.n_lon as f64));
        }
    }
    out.push(hopf_point(FRAC_PI_2, 0.0, 0.0));
    out
}

/// Newton search for class-𝔥 orbits with period below `t_cap`.
pub fn find_orbits(alpha: &ContactForm, search: &OrbitSearch, cfg: IntegratorConfig) -> Result<OrbitCensus> {
    let seed_list = seeds(search);
    let mut orbits: Vec<PeriodicOrbit> = Vec::new();
    let mut trajs: Vec<Vec<(f64, V4)>> = Vec::new();
    let mut dropped = 0;
    let d = deck(alpha.lens_order());
    for seed in &seed_list {
        let found = match newton(alpha, *seed, search, cfg) {
            Ok(v) => v,
            Err(e) => {
                debug!("seed dropped: {e}");
                None
            }
        };
        let Some((x, t)) = found else {
            dropped += 1;
            continue;
        };
        if t > search.t_cap {
            dropped += 1;
            continue;
        }
        let mut dup = false;
        for traj in &trajs {
            if orbit_distance(alpha, traj, &x, cfg)? < search.dedup_tol {
                dup = true;
                break;
            }
        }
        if dup {
            continue;
        }
        let end = integrate(alpha, &x, t, cfg)?;
        let residual = (end - d * x).norm();
        let winding = lift_winding(alpha, &x, t, cfg)?;
        trajs.push(trajectory(alpha, &x, t, cfg)?);
        orbits.push(PeriodicOrbit {
            seed: x,
            period: t,
            class_h: winding == 1,
            closure_residual: residual,
            lift_winding: winding,
        });
    }
    Ok(OrbitCensus { orbits, seeds: seed_list.len(), dropped })
}

/// (T_min, T_max) over the class-𝔥 orbits.
pub fn t_min_max(orbits: &[PeriodicOrbit]) -> Result<(f64, f64)> {
    let ps: Vec<f64> = orbits.iter().filter(|o| o.class_h).map(|o| o.period).collect();
    if ps.is_empty() {
        return Err(Error::EmptyOrbitSet);
    }
    Ok((ps.iter().cloned().fold(f64::INFINITY, f64::min), ps.iter().cloned().fold(f64::NEG_INFINITY, f64::max)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms3d::Generator;

    #[test]
    fn zoll_census() {
        let a = ContactForm::zoll(1);
        let c = find_orbits(&a, &OrbitSearch::default(), IntegratorConfig::default()).unwrap();
        assert_eq!(c.dropped, 0);
        assert!(!c.orbits.is_empty());
        for o in &c.orbits {
            assert!((o.period - 1.0).abs() < 1e-9, "{o:?}");
            assert!(o.class_h);
        }
    }

    #[test]
    fn height_perturbation_has_two_orbits() {
        let eps = 0.05;
        let a = ContactForm::scaled_perturbation(1, &Generator::HopfHeight.poly(), eps);
        let c = find_orbits(&a, &OrbitSearch::default(), IntegratorConfig::default()).unwrap();
        let (tmin, tmax) = t_min_max(&c.orbits).unwrap();
        assert_eq!(c.orbits.len(), 2, "{:?}", c.orbits);
        assert!((tmin - (1.0 - eps)).abs() < 1e-9);
        assert!((tmax - (1.0 + eps)).abs() < 1e-9);
    }
}
