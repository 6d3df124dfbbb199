use std::f64::consts::TAU;

use crate::error::Result;
use crate::forms3d::point::deck;
use crate::forms3d::{ContactForm, V4};
use crate::numerics::IntegratorConfig;

use super::integrate::first_crossing;

/// Returns are not sought beyond this time.
pub const RETURN_HORIZON: f64 = 2.0;

/// First return to the page {z2 ∈ [0, ∞)} (on the cover: after the phase of
/// z2 advances by 2π/p, followed by one inverse deck step).
pub fn section_return(alpha: &ContactForm, q: &V4, cfg: IntegratorConfig) -> Result<(f64, V4)> {
    let p = alpha.lens_order();
    let psi = TAU / p as f64;
    let ell = V4::new(0.0, 0.0, -psi.sin(), psi.cos());
    let mut phase = 0.0;
    let c = first_crossing(alpha, q, &ell, RETURN_HORIZON, cfg, |_, ya, _, yb| {
        let re = yb[2] * ya[2] + yb[3] * ya[3];
        let im = yb[3] * ya[2] - yb[2] * ya[3];
        phase += im.atan2(re);
        (phase - psi).abs() < 1.0
    })?;
    let back = deck(p).transpose() * c.y;
    Ok((c.t, back))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zoll_page_returns_are_identity() {
        for p in 1..=3 {
            let a = ContactForm::zoll(p);
            let q = V4::new(0.6 * 0.3f64.cos(), -0.6 * 0.3f64.sin(), 0.8, 0.0);
            let (t, y) = section_return(&a, &q, IntegratorConfig::default()).unwrap();
            assert!((t - 1.0).abs() < 1e-9, "p={p} t={t}");
            assert!((y - q).norm() < 1e-9);
            assert!(y[3].abs() < 1e-12);
        }
    }
}
