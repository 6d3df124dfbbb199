//! Small numerical kernels shared across modules.

pub mod cutoff;
pub mod dual;
pub mod fourier;
pub mod jet;
pub mod ode;
pub mod quadrature;

pub use cutoff::SmoothStep;
pub use dual::{CDual, Dual4};
pub use jet::Jet;
pub use ode::{DormandPrince, IntegratorConfig};
pub use quadrature::GaussLegendre;

/// Wrap an angle measured in turns to (-1/2, 1/2].
pub fn wrap_turn(x: f64) -> f64 {
    let y = x - x.round();
    if y <= -0.5 {
        y + 1.0
    } else {
        y
    }
}
