//! Named perturbation profiles f for forms (1 + ε f)·α_Zoll.

use serde::{Deserialize, Serialize};

use super::point::{deck, V4};
use super::poly::Poly4;

/// Built-in generators; all are real harmonic polynomials on R⁴.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// |z1|² − |z2|²: fiber-invariant, orbits are the two coordinate circles.
    HopfHeight,
    /// Re(z1 z̄2): the height function along another base axis.
    HopfTilt,
    /// |z1|² − |z2|² + 0.3 Re(z1² z̄2²) + 0.5 Re(z1² z2): not fiber-invariant,
    /// deck-invariant only for p ∈ {1, 3}.
    Mixed,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::HopfHeight, Generator::HopfTilt, Generator::Mixed];

    pub fn name(&self) -> &'static str {
        match self {
            Generator::HopfHeight => "hopf_height",
            Generator::HopfTilt => "hopf_tilt",
            Generator::Mixed => "mixed",
        }
    }

    pub fn poly(&self) -> Poly4 {
        match self {
            Generator::HopfHeight => hopf_height(),
            Generator::HopfTilt => Poly4::from_terms(&[(1.0, [1, 0, 1, 0]), (1.0, [0, 1, 0, 1])]),
            Generator::Mixed => hopf_height().add(&re_z1sq_z2bar_sq().scaled(0.3)).add(&re_z1sq_z2().scaled(0.5)),
        }
    }
}

fn hopf_height() -> Poly4 {
    Poly4::from_terms(&[(1.0, [2, 0, 0, 0]), (1.0, [0, 2, 0, 0]), (-1.0, [0, 0, 2, 0]), (-1.0, [0, 0, 0, 2])])
}

/// Re(z1² z2) = (x1² − y1²) x2 − 2 x1 y1 y2.
fn re_z1sq_z2() -> Poly4 {
    Poly4::from_terms(&[(1.0, [2, 0, 1, 0]), (-1.0, [0, 2, 1, 0]), (-2.0, [1, 1, 0, 1])])
}

/// Re(z1² z̄2²) = Re((z1 z̄2)²) with z1 z̄2 = (x1x2 + y1y2) + i(y1x2 − x1y2).
fn re_z1sq_z2bar_sq() -> Poly4 {
    let re = Poly4::from_terms(&[(1.0, [1, 0, 1, 0]), (1.0, [0, 1, 0, 1])]);
    let im = Poly4::from_terms(&[(1.0, [0, 1, 1, 0]), (-1.0, [1, 0, 0, 1])]);
    re.mul(&re).add(&im.mul(&im).scaled(-1.0))
}

/// Max deviation |f(deck·x) − f(x)| on a fixed sample; zero iff the profile
/// descends to L(p,1) (up to sampling).
pub fn deck_defect(f: &Poly4, p: u32) -> f64 {
    let d = deck(p);
    let mut worst: f64 = 0.0;
    for i in 0..7 {
        for j in 0..7 {
            let x = crate::forms3d::point::hopf_point(0.2 + 0.17 * i as f64, 0.13 * j as f64, 0.31 * i as f64 + 0.07);
            let y: V4 = d * x;
            worst = worst.max((f.eval(&y) - f.eval(&x)).abs());
        }
    }
    worst
}
