use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::point::{mul_i, M4, V4};
use super::poly::Poly4;

/// Pointwise data of a one-form: `α_x(v) = a·v`, `dα_x(u,v) = uᵀ W v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormJet {
    pub a: V4,
    pub w: M4,
}

impl FormJet {
    pub fn eval(&self, v: &V4) -> f64 {
        self.a.dot(v)
    }

    pub fn d_eval(&self, u: &V4, v: &V4) -> f64 {
        u.dot(&(self.w * v))
    }

    /// Jet of the pullback along a map with Jacobian `j`, times `factor`.
    pub fn pulled_back(&self, j: &M4, factor: f64) -> Self {
        let jt = j.transpose();
        Self { a: jt * self.a * factor, w: jt * self.w * j * factor }
    }
}

/// A one-form on (a neighbourhood of) S³ together with its exterior
/// derivative, both evaluated analytically.
pub trait CovectorField: Send + Sync {
    fn jet(&self, x: &V4) -> FormJet;

    fn eval(&self, x: &V4, v: &V4) -> f64 {
        self.jet(x).eval(v)
    }

    fn d_eval(&self, x: &V4, u: &V4, v: &V4) -> f64 {
        self.jet(x).d_eval(u, v)
    }
}

/// Smooth self-map of S³ given with its ambient Jacobian.
pub trait AmbientMap: Send + Sync + fmt::Debug {
    fn eval(&self, x: &V4) -> (V4, M4);
}

/// Tag recording how a form was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    ZollReference,
    ScaledPerturbation { eps: f64 },
    OneFormShift,
    Normalized { period: f64 },
}

#[derive(Debug, Clone)]
enum Repr {
    /// `scale · (profile · α_* + d shift)`
    Poly { scale: f64, profile: Poly4, shift: Poly4 },
    /// `factor · Ψ^* base`
    Pullback { base: Arc<ContactForm>, map: Arc<dyn AmbientMap>, factor: f64 },
}

/// Contact form on S³ or on L(p,1), represented on the cover.
#[derive(Debug, Clone)]
pub struct ContactForm {
    lens_order: u32,
    kind: FormKind,
    repr: Repr,
}

/// Coefficient vector of α_* = (1/2π) Σ (x dy − y dx).
pub fn alpha_star_coeffs(x: &V4) -> V4 {
    mul_i(x) / (2.0 * PI)
}

/// Matrix of dα_* = (1/π) Σ dx∧dy.
pub fn d_alpha_star() -> M4 {
    let c = 1.0 / PI;
    M4::new(
        0.0, c, 0.0, 0.0, //
        -c, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, c, //
        0.0, 0.0, -c, 0.0,
    )
}

impl ContactForm {
    /// Zoll form of prime period 1: α_* on S³, p·α_* on the cover of L(p,1).
    pub fn zoll(p: u32) -> Self {
        assert!(p >= 1, "lens order must be positive");
        Self {
            lens_order: p,
            kind: FormKind::ZollReference,
            repr: Repr::Poly { scale: p as f64, profile: Poly4::constant(1.0), shift: Poly4::zero() },
        }
    }

    /// `(1 + ε f) · α_Zoll`.
    pub fn scaled_perturbation(p: u32, f: &Poly4, eps: f64) -> Self {
        let profile = Poly4::constant(1.0).add(&f.scaled(eps));
        Self {
            lens_order: p,
            kind: FormKind::ScaledPerturbation { eps },
            repr: Repr::Poly { scale: p as f64, profile, shift: Poly4::zero() },
        }
    }

    /// `α + dh`. Only available for polynomial representations.
    pub fn with_shift(&self, h: &Poly4) -> Self {
        match &self.repr {
            Repr::Poly { scale, profile, shift } => Self {
                lens_order: self.lens_order,
                kind: FormKind::OneFormShift,
                repr: Repr::Poly { scale: *scale, profile: profile.clone(), shift: shift.add(&h.scaled(1.0 / scale)) },
            },
            Repr::Pullback { .. } => panic!("with_shift on a pulled-back form"),
        }
    }

    /// `c · α`.
    pub fn scaled(&self, c: f64) -> Self {
        let repr = match &self.repr {
            Repr::Poly { scale, profile, shift } => {
                Repr::Poly { scale: scale * c, profile: profile.clone(), shift: shift.clone() }
            }
            Repr::Pullback { base, map, factor } => {
                Repr::Pullback { base: base.clone(), map: map.clone(), factor: factor * c }
            }
        };
        Self { lens_order: self.lens_order, kind: self.kind.clone(), repr }
    }

    /// `factor · Ψ^* self`; `Ψ` must commute with the deck action.
    pub fn pullback(self: &Arc<Self>, map: Arc<dyn AmbientMap>, factor: f64, kind: FormKind) -> Self {
        Self { lens_order: self.lens_order, kind, repr: Repr::Pullback { base: self.clone(), map, factor } }
    }

    pub fn lens_order(&self) -> u32 {
        self.lens_order
    }

    pub fn kind(&self) -> &FormKind {
        &self.kind
    }

    /// The profile `g` with α = c(g α_* + dh), if polynomial.
    pub fn profile(&self) -> Option<&Poly4> {
        match &self.repr {
            Repr::Poly { profile, .. } => Some(profile),
            Repr::Pullback { .. } => None,
        }
    }

    /// Human-readable term list.
    pub fn description(&self) -> String {
        match &self.repr {
            Repr::Poly { scale, profile, shift } => {
                format!("{scale} * ([{}] alpha_* + d[{}])", terms_str(profile), terms_str(shift))
            }
            Repr::Pullback { base, factor, .. } => {
                format!("{factor} * Psi^*({})", base.description())
            }
        }
    }
}

fn terms_str(p: &Poly4) -> String {
    p.terms.iter().map(|t| format!("{}*{:?}", t.coef, t.powers)).collect::<Vec<_>>().join(" + ")
}

impl CovectorField for ContactForm {
    fn jet(&self, x: &V4) -> FormJet {
        match &self.repr {
            Repr::Poly { scale, profile, shift } => {
                let (g, dg) = profile.eval_grad(x);
                let astar = alpha_star_coeffs(x);
                let mut a = astar * g;
                if !shift.is_zero() {
                    a += shift.eval_grad(x).1;
                }
                let w = dg * astar.transpose() - astar * dg.transpose() + d_alpha_star() * g;
                FormJet { a: a * *scale, w: w * *scale }
            }
            Repr::Pullback { base, map, factor } => {
                let (y, j) = map.eval(x);
                base.jet(&y).pulled_back(&j, *factor)
            }
        }
    }
}
