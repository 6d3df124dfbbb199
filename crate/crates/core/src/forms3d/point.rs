//! Points of S³ ⊂ C² in real coordinates (x1, y1, x2, y2), z_j = x_j + i y_j.

use nalgebra::{Matrix4, Vector4};
use std::f64::consts::TAU;

pub type V4 = Vector4<f64>;
pub type M4 = Matrix4<f64>;

/// A point of S³; the lens order lives on the form, so a bare vector suffices.
pub type Point4 = V4;

pub fn from_complex(z1: (f64, f64), z2: (f64, f64)) -> V4 {
    V4::new(z1.0, z1.1, z2.0, z2.1)
}

pub fn z1(x: &V4) -> (f64, f64) {
    (x[0], x[1])
}

pub fn z2(x: &V4) -> (f64, f64) {
    (x[2], x[3])
}

/// Multiplication by i on both complex coordinates.
pub fn mul_i(v: &V4) -> V4 {
    V4::new(-v[1], v[0], -v[3], v[2])
}

/// Left-invariant orthonormal frame of T_x S³.
pub fn frame(x: &V4) -> [V4; 3] {
    let (x1, y1, x2, y2) = (x[0], x[1], x[2], x[3]);
    [V4::new(-y1, x1, -y2, x2), V4::new(-x2, y2, x1, -y1), V4::new(-y2, -x2, y1, x1)]
}

/// Real 4×4 matrix of the scalar rotation z ↦ e^{2πi·turns} z.
pub fn phase_matrix(turns: f64) -> M4 {
    let (s, c) = (TAU * turns).sin_cos();
    M4::new(
        c, -s, 0.0, 0.0, //
        s, c, 0.0, 0.0, //
        0.0, 0.0, c, -s, //
        0.0, 0.0, s, c,
    )
}

/// Deck generator of L(p,1): z ↦ e^{2πi/p} z.
pub fn deck(p: u32) -> M4 {
    phase_matrix(1.0 / p as f64)
}

/// Hermitian product ⟨a, b⟩ = Σ ā_j b_j as (re, im).
pub fn hermitian(a: &V4, b: &V4) -> (f64, f64) {
    let re = a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
    let im = a[0] * b[1] - a[1] * b[0] + a[2] * b[3] - a[3] * b[2];
    (re, im)
}

/// SU(2) matrix sending (1,0) to the unit vector `x`: [[a, -b̄], [b, ā]].
pub fn unitary_to(x: &V4) -> M4 {
    let (ar, ai, br, bi) = (x[0], x[1], x[2], x[3]);
    // columns are images of the real basis e_x1, e_y1, e_x2, e_y2
    M4::new(
        ar, -ai, -br, -bi, //
        ai, ar, bi, -br, //
        br, -bi, ar, ai, //
        bi, br, -ai, ar,
    )
}

/// Hopf-coordinate point: z1 = cos s e^{2πi φ1}, z2 = sin s e^{2πi φ2}.
pub fn hopf_point(s: f64, phi1: f64, phi2: f64) -> V4 {
    let (c, sn) = (s.cos(), s.sin());
    let (a1, a2) = (TAU * phi1, TAU * phi2);
    V4::new(c * a1.cos(), c * a1.sin(), sn * a2.cos(), sn * a2.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_is_orthonormal_and_tangent() {
        let x = hopf_point(0.4, 0.1, 0.7);
        let b = frame(&x);
        for i in 0..3 {
            assert!(b[i].dot(&x).abs() < 1e-15);
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((b[i].dot(&b[j]) - e).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn unitary_maps_reference_point() {
        let x = hopf_point(0.9, 0.3, -0.2);
        let u = unitary_to(&x);
        assert!((u * V4::new(1.0, 0.0, 0.0, 0.0) - x).norm() < 1e-15);
        assert!((u.transpose() * u - M4::identity()).norm() < 1e-14);
        // complex linear: commutes with i
        let v = V4::new(0.2, -0.1, 0.5, 0.3);
        assert!((u * mul_i(&v) - mul_i(&(u * v))).norm() < 1e-15);
    }
}
