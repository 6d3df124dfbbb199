//! Contact forms on S³ and L(p,1): Reeb fields, volumes, ratios, norms.

pub mod darboux;
pub mod form;
pub mod norm;
pub mod perturbation;
pub mod point;
pub mod poly;
pub mod reeb;
pub mod volume;

pub use darboux::DarbouxChart;
pub use form::{AmbientMap, ContactForm, CovectorField, FormJet, FormKind};
pub use norm::c3_minus_distance;
pub use perturbation::Generator;
pub use point::{Point4, M4, V4};
pub use poly::{Poly4, Term};
pub use reeb::{contact_check, contact_density, reeb_at};
pub use volume::{contact_volume, VolumeGrid, VolumeReport};

use crate::error::{Error, Result};

/// Systolic and diastolic ratios T_min²/Vol and T_max²/Vol.
pub fn ratios(periods: &[f64], volume: f64) -> Result<(f64, f64)> {
    if periods.is_empty() {
        return Err(Error::EmptyOrbitSet);
    }
    let tmin = periods.iter().cloned().fold(f64::INFINITY, f64::min);
    let tmax = periods.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok((tmin * tmin / volume, tmax * tmax / volume))
}

/// Shortcut for the Zoll form of lens order `p`.
pub fn zoll_form(p: u32) -> ContactForm {
    ContactForm::zoll(p)
}
