//! Normalization at a periodic orbit: an explicit tube diffeomorphism that
//! carries the reference fiber onto the orbit, followed by rescaling.

use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms3d::point::{deck, unitary_to};
use crate::forms3d::{AmbientMap, ContactForm, FormKind, M4, V4};
use crate::numerics::fourier::TrigSeries;
use crate::numerics::{CDual, Dual4, IntegratorConfig, SmoothStep};
use crate::reebflow::{integrate, PeriodicOrbit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NormalizeConfig {
    /// Orbit samples for the Fourier fit.
    pub samples: usize,
    /// Fiber-closure tolerance of the normalized form.
    pub closure_tol: f64,
}

impl Default for NormalizeConfig {
    fn default() -> Self {
        Self { samples: 64, closure_tol: 1e-8 }
    }
}

/// Ψ = U ∘ Ψ₁ with Ψ₁(𝔇(x, φ)) = 𝔇(x + χ(|x|²) ξ(φ), φ + χ(|x|²) η(φ)) in
/// the fiberwise chart 𝔇 of lens order p, and U ∈ SU(2).
#[derive(Debug, Clone)]
pub struct TubeMap {
    p: u32,
    unitary: M4,
    xi_re: TrigSeries,
    xi_im: TrigSeries,
    eta: TrigSeries,
    cutoff: SmoothStep,
}

fn series_at(ser: &TrigSeries, u: CDual) -> Dual4 {
    let mut acc = Dual4::constant(ser.re[ser.half]);
    let mut pw = u;
    for k in 1..=ser.half {
        if k > 1 {
            pw = pw * u;
        }
        let (cr, ci) = (ser.re[ser.half + k], ser.im[ser.half + k]);
        acc = acc + (pw.re.scale(cr) - pw.im.scale(ci)).scale(2.0);
    }
    acc
}

impl TubeMap {
    /// Fit the tube map to samples c(s_k) = U⁻¹ γ(T s_k) of a class-𝔥 orbit.
    pub fn fit(p: u32, unitary: M4, samples: &[V4]) -> Self {
        let pf = p as f64;
        let m = samples.len();
        let mut xr = Vec::with_capacity(m);
        let mut xi = Vec::with_capacity(m);
        let mut eta = Vec::with_capacity(m);
        let mut prev = 0.0;
        for (k, c) in samples.iter().enumerate() {
            let n1 = (c[0] * c[0] + c[1] * c[1]).sqrt();
            let (ur, ui) = (c[0] / n1, c[1] / n1);
            let sc = (2.0 * pf).sqrt();
            xr.push(sc * (c[2] * ur + c[3] * ui));
            xi.push(sc * (c[3] * ur - c[2] * ui));
            // unwrapped fiber angle φ = p·arg(z1)/2π
            let raw = pf * c[1].atan2(c[0]) / TAU;
            let mut phi = raw;
            if k > 0 {
                phi = raw + pf * ((prev - raw) / pf).round();
            }
            prev = phi;
            eta.push(phi - k as f64 / m as f64);
        }
        Self {
            p,
            unitary,
            xi_re: TrigSeries::from_samples(&xr),
            xi_im: TrigSeries::from_samples(&xi),
            eta: TrigSeries::from_samples(&eta),
            cutoff: SmoothStep::new(0.0, 1.6 * pf),
        }
    }

    fn inner(&self, x: &V4) -> (V4, M4) {
        let pf = self.p as f64;
        let q0 = 2.0 * pf * (x[2] * x[2] + x[3] * x[3]);
        if q0 >= self.cutoff.hi {
            return (*x, M4::identity());
        }
        let v: [Dual4; 4] = std::array::from_fn(|i| Dual4::seed(x[i], i));
        let z1 = CDual::new(v[0], v[1]);
        let z2 = CDual::new(v[2], v[3]);
        let n1 = z1.norm_sqr().sqrt();
        let inv = Dual4::constant(1.0) / n1;
        let u1 = z1.scale(inv);
        let sq = (2.0 * pf).sqrt();
        let big_x = (z2 * u1.conj()).scale_f(sq);
        let q = z2.norm_sqr().scale(2.0 * pf);
        let (cv, cd) = self.cutoff.eval1(q.v);
        let chi = q.chain(cv, cd);
        let mut u = u1;
        for _ in 1..self.p {
            u = u * u1;
        }
        let xi = CDual::new(series_at(&self.xi_re, u), series_at(&self.xi_im, u));
        let shift = series_at(&self.eta, u) * chi;
        let xn = big_x + xi.scale(chi);
        let rot = CDual::from_polar_turns(Dual4::constant(1.0), shift.scale(1.0 / pf));
        let frame = u1 * rot;
        let amp = (Dual4::constant(1.0) - xn.norm_sqr().scale(1.0 / (2.0 * pf))).sqrt();
        let w1 = frame.scale(amp);
        let w2 = (xn * frame).scale_f(1.0 / sq);
        let comps = [w1.re, w1.im, w2.re, w2.im];
        let y = V4::new(comps[0].v, comps[1].v, comps[2].v, comps[3].v);
        let mut j = M4::zeros();
        for (r, c) in comps.iter().enumerate() {
            for k in 0..4 {
                j[(r, k)] = c.g[k];
            }
        }
        (y, j)
    }
}

impl AmbientMap for TubeMap {
    fn eval(&self, x: &V4) -> (V4, M4) {
        let (y, j) = self.inner(x);
        (self.unitary * y, self.unitary * j)
    }
}

/// Normalized form α' = (1/T) Ψ^*α whose reference fiber γ_*(s) = (e^{2πis/p}, 0)
/// is a period-1 orbit; Ψ(γ_*(s)) = γ(Ts).
#[derive(Debug, Clone)]
pub struct Normalized {
    pub form: ContactForm,
    pub original: Arc<ContactForm>,
    pub map: Arc<TubeMap>,
    pub period: f64,
    pub closure_residual: f64,
}

impl Normalized {
    /// Ψ applied to a point (into the original manifold).
    pub fn to_original(&self, y: &V4) -> V4 {
        self.map.eval(y).0
    }
}

/// Fiber closure residual |Φ^{α'}_1(z_*) − deck·z_*|.
pub fn fiber_closure(alpha: &ContactForm, cfg: IntegratorConfig) -> Result<f64> {
    let z = V4::new(1.0, 0.0, 0.0, 0.0);
    let end = integrate(alpha, &z, 1.0, cfg)?;
    Ok((end - deck(alpha.lens_order()) * z).norm())
}

pub fn normalize(
    alpha: &Arc<ContactForm>,
    orbit: &PeriodicOrbit,
    ncfg: NormalizeConfig,
    cfg: IntegratorConfig,
) -> Result<Normalized> {
    let p = alpha.lens_order();
    let t = orbit.period;
    let u = unitary_to(&orbit.seed);
    let ut = u.transpose();
    let m = ncfg.samples;
    let mut samples = Vec::with_capacity(m);
    let mut y = orbit.seed;
    for k in 0..m {
        if k > 0 {
            y = integrate(alpha, &y, t / m as f64, cfg)?;
        }
        samples.push(ut * y);
    }
    let map = Arc::new(TubeMap::fit(p, u, &samples));
    let form = alpha.pullback(map.clone(), 1.0 / t, FormKind::Normalized { period: t });
    let residual = fiber_closure(&form, cfg)?;
    if residual > ncfg.closure_tol {
        return Err(Error::AlignmentFailure { residual });
    }
    Ok(Normalized { form, original: alpha.clone(), map, period: t, closure_residual: residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms3d::{contact_volume, CovectorField, Generator, VolumeGrid};
    use crate::reebflow::{find_orbits, OrbitSearch};

    #[test]
    fn zoll_normalization_is_trivial() {
        let a = Arc::new(ContactForm::zoll(1).scaled(1.7));
        let orbit = PeriodicOrbit {
            seed: V4::new(0.6, 0.0, 0.0, 0.8),
            period: 1.7,
            class_h: true,
            closure_residual: 0.0,
            lift_winding: 1,
        };
        let n = normalize(&a, &orbit, NormalizeConfig::default(), IntegratorConfig::default()).unwrap();
        let z = ContactForm::zoll(1);
        let x = V4::new(0.3, 0.5, -0.1, 0.806225774829855);
        let ja = n.form.jet(&x);
        let jz = z.jet(&x);
        let b = crate::forms3d::point::frame(&x);
        for v in &b {
            assert!((ja.eval(v) - jz.eval(v)).abs() < 1e-9);
        }
    }

    #[test]
    fn mixed_orbit_normalizes() {
        let a = Arc::new(ContactForm::scaled_perturbation(1, &Generator::Mixed.poly(), 0.05));
        let cfg = IntegratorConfig::default();
        let census = find_orbits(&a, &OrbitSearch::default(), cfg).unwrap();
        let vol = contact_volume(&a, VolumeGrid::default()).unwrap().value;
        for o in &census.orbits {
            let n = normalize(&a, o, NormalizeConfig::default(), cfg).unwrap();
            assert!(n.closure_residual < 1e-8);
            let vn = contact_volume(&n.form, VolumeGrid::default()).unwrap().value;
            assert!((vn * o.period * o.period - vol).abs() < 1e-8, "{vn} {vol}");
        }
    }
}
