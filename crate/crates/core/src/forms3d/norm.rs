use std::f64::consts::FRAC_PI_2;

use super::form::{CovectorField, FormJet};
use super::point::{frame, hopf_point, V4};

const FD_STEP: f64 = 1e-3;

/// Components α(b_i) and dα(b_i,b_j) of the difference of two forms.
fn components(a1: &dyn CovectorField, a2: &dyn CovectorField, x: &V4) -> [f64; 6] {
    let j1 = a1.jet(x);
    let j2 = a2.jet(x);
    let d = FormJet { a: j1.a - j2.a, w: j1.w - j2.w };
    let b = frame(x);
    [
        d.eval(&b[0]),
        d.eval(&b[1]),
        d.eval(&b[2]),
        d.d_eval(&b[0], &b[1]),
        d.d_eval(&b[0], &b[2]),
        d.d_eval(&b[1], &b[2]),
    ]
}

fn shifted(x: &V4, u: &V4) -> V4 {
    let y = x + u;
    y / y.norm()
}

/// Sampled lower bound for ‖α₁ − α₂‖_{C³₋} = ‖·‖_{C²} + ‖d·‖_{C²}, taking
/// sup norms over the nodes of the endpoint Hopf grid with `n` cells per
/// axis and finite differences along the left-invariant frame. Doubling `n`
/// refines the node set, so the estimate never decreases.
pub fn c3_minus_distance(a1: &dyn CovectorField, a2: &dyn CovectorField, n: usize) -> f64 {
    let h = FD_STEP;
    let mut sup = [[0.0f64; 3]; 2];
    for i in 0..=n {
        let s = FRAC_PI_2 * i as f64 / n as f64;
        for j in 0..n {
            for k in 0..n {
                let x = hopf_point(s, j as f64 / n as f64, k as f64 / n as f64);
                let b = frame(&x);
                let c0 = components(a1, a2, &x);
                let mut d1 = [[0.0; 6]; 3];
                for (kk, bk) in b.iter().enumerate() {
                    let p = components(a1, a2, &shifted(&x, &(bk * h)));
                    let m = components(a1, a2, &shifted(&x, &(-bk * h)));
                    for c in 0..6 {
                        d1[kk][c] = (p[c] - m[c]) / (2.0 * h);
                    }
                }
                let mut d2max: [f64; 2] = [0.0; 2];
                for k1 in 0..3 {
                    for k2 in k1..3 {
                        let e =
                            |s1: f64, s2: f64| components(a1, a2, &shifted(&x, &(b[k1] * (s1 * h) + b[k2] * (s2 * h))));
                        let (pp, pm, mp, mm) = (e(1.0, 1.0), e(1.0, -1.0), e(-1.0, 1.0), e(-1.0, -1.0));
                        for c in 0..6 {
                            let v = (pp[c] - pm[c] - mp[c] + mm[c]) / (4.0 * h * h);
                            let g = usize::from(c >= 3);
                            d2max[g] = d2max[g].max(v.abs());
                        }
                    }
                }
                for c in 0..6 {
                    let g = usize::from(c >= 3);
                    sup[g][0] = sup[g][0].max(c0[c].abs());
                    for row in &d1 {
                        sup[g][1] = sup[g][1].max(row[c].abs());
                    }
                }
                sup[0][2] = sup[0][2].max(d2max[0]);
                sup[1][2] = sup[1][2].max(d2max[1]);
            }
        }
    }
    sup.iter().map(|s| s.iter().sum::<f64>()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms3d::{form::ContactForm, perturbation::Generator};

    #[test]
    fn zero_for_identical_and_linear_in_eps() {
        let z = ContactForm::zoll(1);
        assert_eq!(c3_minus_distance(&z, &z, 4), 0.0);
        let f = Generator::Mixed.poly();
        let d1 = c3_minus_distance(&ContactForm::scaled_perturbation(1, &f, 0.01), &z, 4);
        let d2 = c3_minus_distance(&ContactForm::scaled_perturbation(1, &f, 0.02), &z, 4);
        assert!(d1 > 0.0);
        assert!((d2 / d1 - 2.0).abs() < 1e-6);
        let fine = c3_minus_distance(&ContactForm::scaled_perturbation(1, &f, 0.01), &z, 8);
        assert!(fine >= d1);
    }
}
