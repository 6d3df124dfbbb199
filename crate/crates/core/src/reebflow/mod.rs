//! Reeb flow integration, section crossings and periodic-orbit search.

pub mod integrate;
pub mod orbits;
pub mod returns;

pub use crate::numerics::IntegratorConfig;
pub use integrate::{first_crossing, integrate, stepper, Crossing};
pub use orbits::{
    class_h_test, find_orbits, lift_winding, orbit_distance, return_through, t_min_max, OrbitCensus, OrbitSearch,
    PeriodicOrbit,
};
pub use returns::{section_return, RETURN_HORIZON};
