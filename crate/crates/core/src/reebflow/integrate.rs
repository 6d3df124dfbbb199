use crate::error::{Error, Result};
use crate::forms3d::{reeb_at, ContactForm, V4};
use crate::numerics::ode::{DormandPrince, Flow};
use crate::numerics::IntegratorConfig;

/// Reeb flow integrator for a fixed form.
pub fn stepper(alpha: &ContactForm, cfg: IntegratorConfig) -> DormandPrince<impl Fn(&V4) -> Result<V4> + '_> {
    DormandPrince::new(move |y: &V4| reeb_at(alpha, y), cfg)
}

/// Φ^α_t(q).
pub fn integrate(alpha: &ContactForm, q: &V4, t: f64, cfg: IntegratorConfig) -> Result<V4> {
    stepper(alpha, cfg).integrate(*q, t)
}

/// A crossing of the hyperplane `ℓ·y = 0` in the positive direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub t: f64,
    pub y: V4,
}

/// First upward zero of `ℓ·y` along the flow, restricted to steps accepted by
/// `gate(t0, y0, t1, y1)`. The crossing time is polished by Newton iteration
/// on single Runge–Kutta steps from the start of the bracketing step.
pub fn first_crossing(
    alpha: &ContactForm,
    y0: &V4,
    ell: &V4,
    t_max: f64,
    cfg: IntegratorConfig,
    mut gate: impl FnMut(f64, &V4, f64, &V4) -> bool,
) -> Result<Crossing> {
    let dp = stepper(alpha, cfg);
    let mut bracket: Option<(f64, V4, f64)> = None;
    dp.run(*y0, t_max, |t0, ya, t1, yb| {
        let open = gate(t0, ya, t1, yb);
        if open && ell.dot(ya) < 0.0 && ell.dot(yb) >= 0.0 {
            bracket = Some((t0, *ya, t1 - t0));
            return Ok(Flow::Stop);
        }
        Ok(Flow::Continue)
    })?;
    let (t0, ya, h) = bracket.ok_or(Error::NoReturn { t_max })?;
    let ga = ell.dot(&ya);
    let yb = dp.single(&ya, h)?;
    let gb = ell.dot(&yb);
    let (mut lo, mut hi) = (0.0, h);
    let mut s = h * ga / (ga - gb);
    let mut y = dp.single(&ya, s)?;
    for _ in 0..60 {
        let g = ell.dot(&y);
        if g == 0.0 {
            break;
        }
        if g < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let dg = ell.dot(&reeb_at(alpha, &y)?);
        let mut next = s - g / dg;
        if !(next >= lo && next <= hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - s).abs() < 1e-15 {
            break;
        }
        s = next;
        y = dp.single(&ya, s)?;
    }
    Ok(Crossing { t: t0 + s, y })
}
