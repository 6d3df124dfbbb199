use crate::error::{Error, Result};

use super::form::{CovectorField, FormJet};
use super::point::{frame, hopf_point, V4};

/// Below this the form is treated as degenerate.
pub const DENSITY_TOL: f64 = 1e-10;

/// Kernel direction of dα on T_xS³ and the density α∧dα(b1,b2,b3).
pub fn kernel_and_density(jet: &FormJet, x: &V4) -> (V4, f64) {
    let b = frame(x);
    let wb: [V4; 3] = [jet.w * b[0], jet.w * b[1], jet.w * b[2]];
    let a12 = b[0].dot(&wb[1]);
    let a13 = b[0].dot(&wb[2]);
    let a23 = b[1].dot(&wb[2]);
    let k = [a23, -a13, a12];
    let v = b[0] * k[0] + b[1] * k[1] + b[2] * k[2];
    let dens = jet.a.dot(&v);
    (v, dens)
}

/// Density of α∧dα against the round volume (positive for α_*).
pub fn contact_density(form: &dyn CovectorField, x: &V4) -> f64 {
    kernel_and_density(&form.jet(x), x).1
}

/// Reeb vector field: dα(R,·) = 0 and α(R) = 1 on T_xS³.
pub fn reeb_at(form: &dyn CovectorField, x: &V4) -> Result<V4> {
    let (v, dens) = kernel_and_density(&form.jet(x), x);
    if dens.abs() < DENSITY_TOL {
        return Err(Error::DegenerateContact { density: dens });
    }
    Ok(v / dens)
}

/// Density extrema on an n×n×n Hopf grid; errors if the sign changes.
pub fn contact_check(form: &dyn CovectorField, n: usize) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..=n {
        let s = std::f64::consts::FRAC_PI_2 * i as f64 / n as f64;
        for j in 0..n {
            for k in 0..n {
                let d = contact_density(form, &hopf_point(s, j as f64 / n as f64, k as f64 / n as f64));
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }
    }
    if lo * hi <= 0.0 || lo.abs().min(hi.abs()) < DENSITY_TOL {
        return Err(Error::NonOrientedDensity { min: lo, max: hi });
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms3d::form::ContactForm;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn zoll_reeb_is_hopf_generator() {
        let a = ContactForm::zoll(1);
        let r = reeb_at(&a, &V4::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert!((r - V4::new(0.0, TAU, 0.0, 0.0)).norm() < 1e-13);
        let x = hopf_point(0.7, 0.3, 0.1);
        assert!((contact_density(&a, &x) - 1.0 / (2.0 * PI * PI)).abs() < 1e-15);
    }
}
