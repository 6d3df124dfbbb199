//! The collar Weinstein chart 𝕐 → T*A and the primitive K_A.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// (r, θ, R, Θ) ↦ (ρ, ϑ, p_ρ, p_ϑ) = (R, θ, R(θ−Θ), ½(R²−r²)).
pub fn weinstein_map(r: f64, theta: f64, big_r: f64, big_theta: f64) -> Result<[f64; 4]> {
    let gap = theta - big_theta;
    if gap.abs() >= 0.5 {
        return Err(Error::OutOfDomain { gap: gap.abs() });
    }
    Ok([big_r, theta, big_r * gap, 0.5 * (big_r * big_r - r * r)])
}

/// (ρ, ϑ, p_ρ, p_ϑ) ↦ (√(ρ²−2p_ϑ), ϑ, ρ, ϑ − p_ρ/ρ).
pub fn weinstein_inverse(rho: f64, vartheta: f64, p_rho: f64, p_theta: f64) -> Result<[f64; 4]> {
    if rho == 0.0 {
        return Err(Error::DivisionAtBinding);
    }
    let rad = rho * rho - 2.0 * p_theta;
    if rad < 0.0 {
        return Err(Error::NegativeRadicand { value: rad });
    }
    Ok([rad.sqrt(), vartheta, rho, vartheta - p_rho / rho])
}

/// K_A = (k − ½R²)(θ − Θ).
pub fn k_primitive(_r: f64, theta: f64, big_r: f64, big_theta: f64, k: f64) -> Result<f64> {
    let gap = theta - big_theta;
    if gap.abs() >= 0.5 {
        return Err(Error::OutOfDomain { gap: gap.abs() });
    }
    Ok((k - 0.5 * big_r * big_r) * gap)
}

/// Largest coefficient of W^*λ_can − ((−λ_A)⊕λ_A − dK_A) over `samples`
/// random points of 𝕐. Derivatives of W and K are taken by central
/// differences, so the check does not reuse the closed-form identity.
pub fn chart_identity_residual(k: f64, samples: usize, seed: u64) -> Result<f64> {
    let a = (2.0 * k).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = [rng.gen_range(0.05..0.95) * a, rng.gen_range(0.0..1.0), rng.gen_range(0.05..0.95) * a, 0.0];
        let x = [x[0], x[1], x[2], x[1] + rng.gen_range(-0.4..0.4)];
        let w = weinstein_map(x[0], x[1], x[2], x[3])?;
        let lambda_a = |r: f64| -k + 0.5 * r * r;
        // (−λ_A)⊕λ_A has dθ coefficient −λ_A(r) and dΘ coefficient λ_A(R).
        let split = [0.0, -lambda_a(x[0]), 0.0, lambda_a(x[2])];
        for i in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let wp = weinstein_map(xp[0], xp[1], xp[2], xp[3])?;
            let wm = weinstein_map(xm[0], xm[1], xm[2], xm[3])?;
            let dw: Vec<f64> = (0..4).map(|c| (wp[c] - wm[c]) / (2.0 * h)).collect();
            let pull = w[2] * dw[0] + w[3] * dw[1];
            let dk =
                (k_primitive(xp[0], xp[1], xp[2], xp[3], k)? - k_primitive(xm[0], xm[1], xm[2], xm[3], k)?) / (2.0 * h);
            worst = worst.max((pull - (split[i] - dk)).abs());
        }
    }
    Ok(worst)
}
