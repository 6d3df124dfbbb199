//! Numerical laboratory for Reeb dynamics near Zoll contact forms on S³ and
//! the lens spaces L(p,1).
//!
//! * [`forms3d`]: contact forms, Reeb fields, volumes, ratios and norms.
//! * [`reebflow`]: flow integration, section returns, periodic orbits.
//! * [`section`]: the global surface of section, return map and identities.
//! * [`discmaps`]: generating functions and actions of exact disc maps.
//! * [`harness`]: configuration, sweeps, verdicts and report emission.

pub mod discmaps;
pub mod error;
pub mod forms3d;
pub mod harness;
pub mod numerics;
pub mod reebflow;
pub mod section;

pub use discmaps::{ClosedFormG, DiscGrid, ExactDiscMap, GeneratingFunction, MapPoint};
pub use error::{Error, Result};
pub use forms3d::{ContactForm, Generator, Poly4, V4};
pub use harness::{ExperimentConfig, ResultRecord, Verdict};
pub use numerics::IntegratorConfig;
pub use reebflow::{OrbitCensus, OrbitSearch, PeriodicOrbit};
