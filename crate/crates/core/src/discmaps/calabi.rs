use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::generating::{ExactDiscMap, MapPoint};
use super::hamiltonian::{HamiltonianPath, MapPath};
use super::DiscGrid;

/// CAL(φ) = ½∫_N σ dλ.
pub fn calabi_action<M: ExactDiscMap>(map: &M, grid: &DiscGrid) -> Result<f64> {
    Ok(0.5 * grid.integrate(|r, t| map.eval(r, t).map(|p| p.sigma))?)
}

/// φ^{-1} with action σ_{φ^{-1}} = −σ∘φ^{-1}.
#[derive(Debug, Clone)]
pub struct InverseMap<M>(pub M);

impl<M: ExactDiscMap> ExactDiscMap for InverseMap<M> {
    fn k(&self) -> f64 {
        self.0.k()
    }
    fn eval(&self, r: f64, theta: f64) -> Result<MapPoint> {
        let z = self.0.preimage(r, theta)?;
        let sigma = -self.0.eval(z[0], z[1])?.sigma;
        Ok(MapPoint { r: z[0], theta: z[1], sigma })
    }
    fn preimage(&self, big_r: f64, big_theta: f64) -> Result<[f64; 2]> {
        let p = self.0.eval(big_r, big_theta)?;
        Ok([p.r, p.theta])
    }
}

/// The Calabi invariant of φ_1 by its action and by the Hamiltonian double
/// integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalabiComparison {
    pub by_action: f64,
    pub by_hamiltonian: f64,
    pub difference: f64,
}

pub fn calabi_comparison<P: MapPath>(
    path: &HamiltonianPath<P>,
    grid: &DiscGrid,
    n_t: usize,
) -> Result<CalabiComparison> {
    let by_action = calabi_action(&path.path.at(1.0), grid)?;
    let by_hamiltonian = path.calabi(grid, n_t)?;
    Ok(CalabiComparison { by_action, by_hamiltonian, difference: (by_action - by_hamiltonian).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discmaps::{map_from_gen, ClosedFormG, RotationPath};

    #[test]
    fn rotation_calabi_two_ways() {
        for k in [1.0, 2.0] {
            let eps = 0.05;
            let grid = DiscGrid::new(k, 12, 8);
            let c = calabi_comparison(&HamiltonianPath::new(RotationPath { k, eps }), &grid, 4).unwrap();
            let exact = 0.5 * k * k * eps;
            assert!((c.by_action - exact).abs() < 1e-12);
            assert!((c.by_hamiltonian - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn identity_has_zero_calabi() {
        let grid = DiscGrid::new(1.0, 6, 6);
        let m = map_from_gen(ClosedFormG::radial(1.0, vec![]));
        assert_eq!(calabi_action(&m, &grid).unwrap(), 0.0);
    }
}
