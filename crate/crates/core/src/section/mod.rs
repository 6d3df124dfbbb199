//! Global surface of section: the page, normalization at an orbit, the
//! return map and its identities.

pub mod disc;
pub mod fixed;
pub mod identities;
pub mod returns;
pub mod tube;

pub use disc::DiscModel;
pub use fixed::{fixed_point_orbit_check, FixedPoint, FixedPointReport};
pub use identities::{
    action_and_calabi, boundary_residual, loop_exactness, loop_integral, pointwise_exactness, sigma_grid, CalabiReport,
};
pub use returns::{page_return, return_map, PageReturn, ReturnData, SectionGrid};
pub use tube::{fiber_closure, normalize, NormalizeConfig, Normalized, TubeMap};

use crate::error::{Error, Result};
use crate::forms3d::{ContactForm, CovectorField};
use crate::numerics::IntegratorConfig;

/// Nodal pullback λ = S^*α on a collar grid.
#[derive(Debug, Clone)]
pub struct NodalLambda {
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    /// (λ(∂_r), λ(∂_θ)) per node.
    pub values: Vec<Vec<[f64; 2]>>,
    /// dλ(∂_r, ∂_θ) / r per node.
    pub density_over_r: Vec<Vec<f64>>,
}

/// λ = S^*α at the nodes r ∈ `r`, θ ∈ `theta`. The form must be normalized.
pub fn pull_lambda(alpha: &ContactForm, r: &[f64], theta: &[f64], cfg: IntegratorConfig) -> Result<NodalLambda> {
    let residual = fiber_closure(alpha, cfg)?;
    if residual > 1e-8 {
        return Err(Error::NotNormalized { residual });
    }
    let disc = DiscModel::new(alpha.lens_order());
    let mut values = Vec::with_capacity(r.len());
    let mut dens = Vec::with_capacity(r.len());
    for &ri in r {
        let mut row = Vec::with_capacity(theta.len());
        let mut drow = Vec::with_capacity(theta.len());
        for &th in theta {
            let (y, dr, dth) = disc.embed_collar_jac(ri, th);
            row.push([alpha.eval(&y, &dr), alpha.eval(&y, &dth)]);
            drow.push(alpha.d_eval(&y, &dr, &dth) / ri);
        }
        values.push(row);
        dens.push(drow);
    }
    Ok(NodalLambda { r: r.to_vec(), theta: theta.to_vec(), values, density_over_r: dens })
}
