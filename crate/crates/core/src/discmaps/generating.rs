//! Generating functions G ↔ exact maps φ through the collar chart.
//!
//! With ∂_ρG = ρ G_ρ and ∂_ϑG = ρ² G_ϑ the map ℰ(G) is
//! φ(r,θ) = (R, θ − G_ρ(R,θ)) where R solves R√(1−2G_ϑ(R,θ)) = r, and its
//! action is σ = G(R,θ) + (k − ½R²) G_ρ(R,θ). Conversely
//! 𝒢(φ)(ρ,ϑ) = σ(r,ϑ) − K_A(r, ϑ, ρ, Θ_φ(r,ϑ)) with R_φ(r,ϑ) = ρ.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ode::V4;
use crate::numerics::{DormandPrince, IntegratorConfig, Jet, SmoothStep};

use super::vfunction::{vnorm, DiscFunction};
use super::DiscGrid;

/// Generating data in split form: (G, G_ρ, G_ϑ).
pub trait GeneratingFunction: Send + Sync {
    fn k(&self) -> f64;
    fn split(&self, rho: f64, vartheta: f64) -> Result<[f64; 3]>;
}

impl<T: GeneratingFunction + ?Sized> GeneratingFunction for &T {
    fn k(&self) -> f64 {
        (**self).k()
    }
    fn split(&self, rho: f64, vartheta: f64) -> Result<[f64; 3]> {
        (**self).split(rho, vartheta)
    }
}

impl<T: GeneratingFunction + ?Sized> GeneratingFunction for Arc<T> {
    fn k(&self) -> f64 {
        (**self).k()
    }
    fn split(&self, rho: f64, vartheta: f64) -> Result<[f64; 3]> {
        (**self).split(rho, vartheta)
    }
}

/// Image point and action of an exact map at one collar point. `theta` is
/// the lift of Θ closest to the source angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapPoint {
    pub r: f64,
    pub theta: f64,
    pub sigma: f64,
}

/// Exact area-preserving map of N with action σ, φ^*λ − λ = dσ and
/// σ|_{∂N} = K_A∘Γ_φ.
pub trait ExactDiscMap: Send + Sync {
    fn k(&self) -> f64;
    fn eval(&self, r: f64, theta: f64) -> Result<MapPoint>;
    /// φ^{-1}(R, Θ) as a collar point whose angle lifts Θ.
    fn preimage(&self, big_r: f64, big_theta: f64) -> Result<[f64; 2]>;
}

impl<T: ExactDiscMap + ?Sized> ExactDiscMap for &T {
    fn k(&self) -> f64 {
        (**self).k()
    }
    fn eval(&self, r: f64, theta: f64) -> Result<MapPoint> {
        (**self).eval(r, theta)
    }
    fn preimage(&self, big_r: f64, big_theta: f64) -> Result<[f64; 2]> {
        (**self).preimage(big_r, big_theta)
    }
}

/// Root of the increasing function `f` on [lo, hi] with f(lo) ≤ 0 ≤ f(hi),
/// by the Illinois variant of regula falsi. `None` if the bracket fails.
pub(crate) fn increasing_root(mut f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64) -> Result<Option<f64>> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa > 0.0 || fb < 0.0 {
        return Ok(None);
    }
    if fa == 0.0 {
        return Ok(Some(a));
    }
    if fb == 0.0 {
        return Ok(Some(b));
    }
    let mut side = 0i8;
    for _ in 0..200 {
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(Some(x));
        }
        if fx < 0.0 {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        if b - a <= 4.0 * f64::EPSILON * b.abs().max(1.0) {
            break;
        }
    }
    Ok(Some(if fa.abs() < fb.abs() { a } else { b }))
}

/// ℰ(sG): the exact map generated by a scaled generating function.
#[derive(Debug, Clone)]
pub struct GenMap<G> {
    pub g: G,
    pub scale: f64,
}

pub fn map_from_gen<G: GeneratingFunction>(g: G) -> GenMap<G> {
    GenMap { g, scale: 1.0 }
}

impl<G: GeneratingFunction> GenMap<G> {
    fn split(&self, rho: f64, theta: f64) -> Result<[f64; 3]> {
        let [v, gr, gt] = self.g.split(rho, theta)?;
        Ok([self.scale * v, self.scale * gr, self.scale * gt])
    }

    fn radial_factor(&self, rho: f64, theta: f64) -> Result<f64> {
        let gt = self.split(rho, theta)?[2];
        let rad = 1.0 - 2.0 * gt;
        if rad <= 0.0 {
            return Err(Error::NegativeRadicand { value: rad });
        }
        Ok(rho * rad.sqrt())
    }

    /// R_G(r, θ): inverse of ρ ↦ ρ√(1−2G_ϑ(ρ,θ)).
    pub fn big_r(&self, r: f64, theta: f64) -> Result<f64> {
        let a = (2.0 * self.k()).sqrt();
        if r <= 0.0 {
            return Ok(0.0);
        }
        let root = increasing_root(|x| Ok(self.radial_factor(x, theta)? - r), 0.0, a)?;
        let x = root.ok_or(Error::NonMonotone { theta })?;
        // local slope of the radial factor must stay positive
        let d = 1e-6 * a;
        let (x0, x1) = ((x - d).max(0.0), (x + d).min(a));
        if self.radial_factor(x1, theta)? <= self.radial_factor(x0, theta)? {
            return Err(Error::NonMonotone { theta });
        }
        Ok(x)
    }
}

impl<G: GeneratingFunction> ExactDiscMap for GenMap<G> {
    fn k(&self) -> f64 {
        self.g.k()
    }

    fn eval(&self, r: f64, theta: f64) -> Result<MapPoint> {
        let big_r = self.big_r(r, theta)?;
        let [v, gr, _] = self.split(big_r, theta)?;
        if gr.abs() >= 0.5 {
            return Err(Error::DomainOverflow { gap: gr.abs() });
        }
        let sigma = v + (self.k() - 0.5 * big_r * big_r) * gr;
        Ok(MapPoint { r: big_r, theta: theta - gr, sigma })
    }

    fn preimage(&self, big_r: f64, big_theta: f64) -> Result<[f64; 2]> {
        // θ = Θ + G_ρ(R, θ) is a contraction for small G.
        let mut theta = big_theta;
        for _ in 0..200 {
            let next = big_theta + self.split(big_r, theta)?[1];
            let done = (next - theta).abs() <= 1e-16 * next.abs().max(1.0);
            theta = next;
            if done {
                break;
            }
        }
        let gt = self.split(big_r, theta)?[2];
        let rad = 1.0 - 2.0 * gt;
        if rad <= 0.0 {
            return Err(Error::NegativeRadicand { value: rad });
        }
        Ok([big_r * rad.sqrt(), theta])
    }
}

/// 𝒢(φ): the generating function of an exact map, evaluated pointwise.
#[derive(Debug, Clone)]
pub struct Generated<M> {
    pub map: M,
}

pub fn gen_from_map<M: ExactDiscMap>(map: M) -> Generated<M> {
    Generated { map }
}

impl<M: ExactDiscMap> Generated<M> {
    /// r_φ(ρ, ϑ) with R_φ(r_φ, ϑ) = ρ, and the map point there.
    fn source(&self, rho: f64, vartheta: f64) -> Result<(f64, MapPoint)> {
        let a = (2.0 * self.k()).sqrt();
        let root = increasing_root(|x| Ok(self.map.eval(x, vartheta)?.r - rho), 0.0, a)?;
        let r = root.ok_or(Error::NonMonotone { theta: vartheta })?;
        Ok((r, self.map.eval(r, vartheta)?))
    }
}

impl<M: ExactDiscMap> GeneratingFunction for Generated<M> {
    fn k(&self) -> f64 {
        self.map.k()
    }

    fn split(&self, rho: f64, vartheta: f64) -> Result<[f64; 3]> {
        let k = self.k();
        if rho <= 0.0 {
            // G and dG vanish at ∂N; G_ϑ by its limit from a nearby node
            let p = self.map.eval(0.0, vartheta)?;
            let eps = 1e-7;
            let (r, _) = self.source(eps, vartheta)?;
            return Ok([0.0, vartheta - p.theta, 0.5 * (1.0 - (r / eps).powi(2))]);
        }
        let (r, p) = self.source(rho, vartheta)?;
        let gap = vartheta - p.theta;
        if gap.abs() >= 0.5 {
            return Err(Error::DomainOverflow { gap: gap.abs() });
        }
        let g = p.sigma - (k - 0.5 * rho * rho) * gap;
        Ok([g, gap, 0.5 * (1.0 - (r / rho).powi(2))])
    }
}

/// Rigid rotation (r, θ) ↦ (r, θ − ε) with action εk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub k: f64,
    pub eps: f64,
}

impl ExactDiscMap for Rotation {
    fn k(&self) -> f64 {
        self.k
    }
    fn eval(&self, r: f64, theta: f64) -> Result<MapPoint> {
        Ok(MapPoint { r, theta: theta - self.eps, sigma: self.eps * self.k })
    }
    fn preimage(&self, big_r: f64, big_theta: f64) -> Result<[f64; 2]> {
        Ok([big_r, big_theta + self.eps])
    }
}

/// Time-`time` map of the autonomous Hamiltonian H given in split form.
/// In the collar, Ṙ = R·H_ϑ, Θ̇ = −H_ρ and σ̇ = H + (k − ½R²)H_ρ.
#[derive(Debug, Clone)]
pub struct HamiltonianFlow<H> {
    pub h: H,
    pub time: f64,
    pub cfg: IntegratorConfig,
}

impl<H: GeneratingFunction> HamiltonianFlow<H> {
    pub fn new(h: H, time: f64) -> Self {
        let cfg = IntegratorConfig {
            rel_tol: 1e-13,
            abs_tol: 1e-13,
            max_step: 0.25,
            projection: false,
            ..Default::default()
        };
        Self { h, time, cfg }
    }

    fn flow(&self, r: f64, theta: f64, time: f64) -> Result<V4> {
        let k = self.h.k();
        let f = |y: &V4| -> Result<V4> {
            let [v, hr, ht] = self.h.split(y[0].max(0.0), y[1])?;
            Ok(V4::new(y[0] * ht, -hr, v + (k - 0.5 * y[0] * y[0]) * hr, 0.0))
        };
        DormandPrince::new(f, self.cfg).integrate(V4::new(r, theta, 0.0, 0.0), time)
    }
}

impl<H: GeneratingFunction> ExactDiscMap for HamiltonianFlow<H> {
    fn k(&self) -> f64 {
        self.h.k()
    }
    fn eval(&self, r: f64, theta: f64) -> Result<MapPoint> {
        let y = self.flow(r, theta, self.time)?;
        Ok(MapPoint { r: y[0], theta: y[1], sigma: y[2] })
    }
    fn preimage(&self, big_r: f64, big_theta: f64) -> Result<[f64; 2]> {
        let y = self.flow(big_r, big_theta, -self.time)?;
        Ok([y[0], y[1]])
    }
}

/// One angular mode: ρ²χ(ρ)(A(ρ) cos 2πmϑ + B(ρ) sin 2πmϑ), with A and B
/// polynomials in ρ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierTerm {
    pub mode: u32,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

/// Closed-form admissible generating function
/// G = ρ²(Q₀(ρ²) + χ(ρ) Σ_m (A_m cos 2πmϑ + B_m sin 2πmϑ)),
/// where χ = 1 below `cutoff[0]·a` and 0 above `cutoff[1]·a`, so G is radial
/// near the center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosedFormG {
    pub k: f64,
    /// Coefficients of Q₀ in powers of ρ².
    #[serde(default)]
    pub radial: Vec<f64>,
    #[serde(default)]
    pub terms: Vec<FourierTerm>,
    #[serde(default = "default_cutoff")]
    pub cutoff: [f64; 2],
}

fn default_cutoff() -> [f64; 2] {
    [0.3, 0.7]
}

const JET: usize = 8;

impl ClosedFormG {
    pub fn radial(k: f64, radial: Vec<f64>) -> Self {
        Self { k, radial, terms: Vec::new(), cutoff: default_cutoff() }
    }

    /// G = ½ερ², generating the rotation by −ε.
    pub fn rotation(k: f64, eps: f64) -> Self {
        Self::radial(k, vec![0.5 * eps])
    }

    /// Random admissible G rescaled to ‖G‖_𝕍 = `norm` on `grid`.
    pub fn random(k: f64, rng: &mut impl Rng, norm: f64, grid: &DiscGrid) -> Result<Self> {
        let mut u = || rng.gen_range(-1.0..1.0);
        let radial = vec![u(), u()];
        let terms = (1..=2).map(|m| FourierTerm { mode: m, cos: vec![u(), u()], sin: vec![u(), u()] }).collect();
        let g = Self { k, radial, terms, cutoff: default_cutoff() };
        let n = vnorm(&g, grid)?;
        Ok(g.scaled(norm / n))
    }

    pub fn scaled(&self, s: f64) -> Self {
        let sc = |v: &Vec<f64>| v.iter().map(|c| c * s).collect::<Vec<_>>();
        Self {
            k: self.k,
            radial: sc(&self.radial),
            terms: self.terms.iter().map(|t| FourierTerm { mode: t.mode, cos: sc(&t.cos), sin: sc(&t.sin) }).collect(),
            cutoff: self.cutoff,
        }
    }

    pub fn is_radial(&self) -> bool {
        self.terms.iter().all(|t| t.cos.iter().chain(&t.sin).all(|&c| c == 0.0))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config { field: "generating_function".into(), message: m.into() });
        if !(self.k > 0.0) {
            return bad("k must be positive");
        }
        if !(0.0 < self.cutoff[0] && self.cutoff[0] < self.cutoff[1] && self.cutoff[1] < 1.0) {
            return bad("cutoff must satisfy 0 < lo < hi < 1");
        }
        if self.terms.iter().any(|t| t.mode == 0) {
            return bad("angular modes start at 1");
        }
        Ok(())
    }

    fn step(&self) -> SmoothStep {
        let a = (2.0 * self.k).sqrt();
        SmoothStep::new(self.cutoff[0] * a, self.cutoff[1] * a)
    }

    /// Jets in ρ of ρ²Q₀(ρ²) and of ρ²χA_m, ρ²χB_m.
    fn profiles(&self, rho: f64) -> (Jet<JET>, Vec<(f64, Jet<JET>, Jet<JET>)>) {
        let x = Jet::<JET>::variable(rho);
        let x2 = x * x;
        let rad = x2 * Jet::poly(&self.radial, x2);
        let chi = self.step().jet::<JET>(rho);
        let modes = self
            .terms
            .iter()
            .map(|t| {
                let w = x2 * chi;
                (TAU * t.mode as f64, w * Jet::poly(&t.cos, x), w * Jet::poly(&t.sin, x))
            })
            .collect();
        (rad, modes)
    }
}

impl DiscFunction for ClosedFormG {
    fn partial(&self, i: usize, j: usize, r: f64, theta: f64) -> f64 {
        assert!(i < JET, "radial derivative order {i} exceeds the jet length");
        let (rad, modes) = self.profiles(r);
        let mut acc = if j == 0 { rad.derivative(i) } else { 0.0 };
        let shift = j as f64 * FRAC_PI_2;
        for (om, a, b) in modes {
            let ph = om * theta + shift;
            acc += om.powi(j as i32) * (a.derivative(i) * ph.cos() + b.derivative(i) * ph.sin());
        }
        acc
    }
}

impl GeneratingFunction for ClosedFormG {
    fn k(&self) -> f64 {
        self.k
    }

    fn split(&self, rho: f64, vartheta: f64) -> Result<[f64; 3]> {
        let x = Jet::<2>::variable(rho);
        let q0 = Jet::poly(&self.radial, x * x);
        let chi = self.step().jet::<2>(rho);
        let mut q = q0.value();
        let mut g_rho = 2.0 * q0.value() + rho * q0.derivative(1);
        let mut g_theta = 0.0;
        for t in &self.terms {
            let om = TAU * t.mode as f64;
            let (s, c) = (om * vartheta).sin_cos();
            let qa = chi * Jet::poly(&t.cos, x);
            let qb = chi * Jet::poly(&t.sin, x);
            q += qa.value() * c + qb.value() * s;
            g_rho += (2.0 * qa.value() + rho * qa.derivative(1)) * c + (2.0 * qb.value() + rho * qb.derivative(1)) * s;
            g_theta += om * (qb.value() * c - qa.value() * s);
        }
        Ok([rho * rho * q, g_rho, g_theta])
    }
}

impl<T: DiscFunction + ?Sized> DiscFunction for Arc<T> {
    fn partial(&self, i: usize, j: usize, r: f64, theta: f64) -> f64 {
        (**self).partial(i, j, r, theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample_g() -> ClosedFormG {
        let grid = DiscGrid::new(1.0, 12, 16);
        ClosedFormG::random(1.0, &mut ChaCha8Rng::seed_from_u64(3), 0.01, &grid).unwrap()
    }

    #[test]
    fn split_matches_partials() {
        let g = sample_g();
        for &(r, t) in &[(0.1, 0.2), (0.5, 0.7), (0.9, 0.35), (1.3, 0.1)] {
            let [v, gr, gt] = g.split(r, t).unwrap();
            assert!((v - g.value(r, t)).abs() < 1e-15);
            assert!((r * gr - g.partial(1, 0, r, t)).abs() < 1e-14);
            assert!((r * r * gt - g.partial(0, 1, r, t)).abs() < 1e-14);
        }
    }

    #[test]
    fn partials_match_finite_differences() {
        let g = sample_g();
        let h = 1e-5;
        for &(r, t) in &[(0.3, 0.2), (0.7, 0.6)] {
            for i in 0..3 {
                for j in 0..3 {
                    let fd_r = (g.partial(i, j, r + h, t) - g.partial(i, j, r - h, t)) / (2.0 * h);
                    let fd_t = (g.partial(i, j, r, t + h) - g.partial(i, j, r, t - h)) / (2.0 * h);
                    let sr = 1.0 + g.partial(i + 1, j, r, t).abs();
                    let st = 1.0 + g.partial(i, j + 1, r, t).abs();
                    assert!((fd_r - g.partial(i + 1, j, r, t)).abs() < 1e-7 * sr);
                    assert!((fd_t - g.partial(i, j + 1, r, t)).abs() < 1e-6 * st);
                }
            }
        }
    }

    #[test]
    fn rotation_generates_rotation() {
        for k in [1.0, 2.0] {
            let eps = 0.03;
            let m = map_from_gen(ClosedFormG::rotation(k, eps));
            for &(r, t) in &[(0.0, 0.1), (0.4, 0.3), ((2.0 * k).sqrt(), 0.8)] {
                let p = m.eval(r, t).unwrap();
                assert!((p.r - r).abs() < 1e-15 && (p.theta - (t - eps)).abs() < 1e-15);
                assert!((p.sigma - eps * k).abs() < 1e-15);
            }
            let g = gen_from_map(Rotation { k, eps });
            let [v, gr, gt] = g.split(0.8, 0.3).unwrap();
            assert!((v - 0.5 * eps * 0.64).abs() < 1e-15 && (gr - eps).abs() < 1e-15 && gt.abs() < 1e-15);
        }
    }

    #[test]
    fn identity_from_zero() {
        let m = map_from_gen(ClosedFormG::radial(1.0, vec![]));
        let p = m.eval(0.6, 0.25).unwrap();
        assert_eq!((p.r, p.theta, p.sigma), (0.6, 0.25, 0.0));
    }

    #[test]
    fn radial_twist_is_generated_by_its_profile() {
        // φ(r,θ) = (r, θ − g'(r)/r) for g(ρ) = c₀ρ² + c₁ρ⁴
        let (c0, c1) = (0.01, -0.004);
        struct Twist(f64, f64);
        impl ExactDiscMap for Twist {
            fn k(&self) -> f64 {
                1.0
            }
            fn eval(&self, r: f64, t: f64) -> Result<MapPoint> {
                let g = self.0 * r * r + self.1 * r.powi(4);
                let gr = 2.0 * self.0 + 4.0 * self.1 * r * r;
                Ok(MapPoint { r, theta: t - gr, sigma: g + (1.0 - 0.5 * r * r) * gr })
            }
            fn preimage(&self, r: f64, t: f64) -> Result<[f64; 2]> {
                Ok([r, t + 2.0 * self.0 + 4.0 * self.1 * r * r])
            }
        }
        let g = gen_from_map(Twist(c0, c1));
        for &rho in &[0.2, 0.9, 1.3] {
            let v = g.split(rho, 0.4).unwrap()[0];
            assert!((v - (c0 * rho * rho + c1 * rho.powi(4))).abs() < 1e-15);
        }
    }

    #[test]
    fn preimage_inverts_eval() {
        let m = map_from_gen(sample_g());
        for &(r, t) in &[(0.05, 0.2), (0.5, 0.7), (1.2, 0.95)] {
            let p = m.eval(r, t).unwrap();
            let q = m.preimage(p.r, p.theta).unwrap();
            assert!((q[0] - r).abs() < 1e-14 && (q[1] - t).abs() < 1e-14);
        }
    }

    #[test]
    fn flow_of_quadratic_is_rotation() {
        let eps = 0.02;
        let f = HamiltonianFlow::new(ClosedFormG::rotation(1.0, eps), 1.0);
        let p = f.eval(0.7, 0.3).unwrap();
        assert!((p.r - 0.7).abs() < 1e-13 && (p.theta - (0.3 - eps)).abs() < 1e-13);
        assert!((p.sigma - eps).abs() < 1e-13);
    }

    #[test]
    fn large_g_is_rejected() {
        let g = ClosedFormG {
            k: 1.0,
            radial: vec![],
            terms: vec![FourierTerm { mode: 1, cos: vec![5.0], sin: vec![] }],
            cutoff: [0.3, 0.7],
        };
        let m = map_from_gen(&g);
        let failed = (0..20).any(|i| m.eval(0.04 * i as f64, 0.05 * i as f64).is_err());
        assert!(failed);
    }
}
