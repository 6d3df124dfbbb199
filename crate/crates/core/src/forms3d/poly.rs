use serde::{Deserialize, Serialize};

use super::point::V4;

/// One monomial `coef · x1^e0 y1^e1 x2^e2 y2^e3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coef: f64,
    pub powers: [u8; 4],
}

/// Real polynomial on R⁴ in the coordinates (x1, y1, x2, y2).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly4 {
    pub terms: Vec<Term>,
}

impl Poly4 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self { terms: vec![Term { coef: c, powers: [0; 4] }] }
    }

    pub fn from_terms(terms: &[(f64, [u8; 4])]) -> Self {
        let mut p = Self::zero();
        for &(c, e) in terms {
            p.push(c, e);
        }
        p
    }

    /// Add a monomial, merging with an existing one of the same powers.
    pub fn push(&mut self, coef: f64, powers: [u8; 4]) {
        if let Some(t) = self.terms.iter_mut().find(|t| t.powers == powers) {
            t.coef += coef;
        } else {
            self.terms.push(Term { coef, powers });
        }
        self.terms.retain(|t| t.coef != 0.0);
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut p = self.clone();
        p.terms.iter_mut().for_each(|t| t.coef *= s);
        p.terms.retain(|t| t.coef != 0.0);
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for t in &other.terms {
            p.push(t.coef, t.powers);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for a in &self.terms {
            for b in &other.terms {
                let mut e = a.powers;
                for i in 0..4 {
                    e[i] += b.powers[i];
                }
                p.push(a.coef * b.coef, e);
            }
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.powers.iter().map(|&e| e as usize).sum::<usize>()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value and ambient gradient.
    pub fn eval_grad(&self, x: &V4) -> (f64, V4) {
        let deg = self.terms.iter().flat_map(|t| t.powers).max().unwrap_or(0) as usize;
        let mut pw = [[1.0f64; 9]; 4];
        for i in 0..4 {
            for k in 1..=deg.min(8) {
                pw[i][k] = pw[i][k - 1] * x[i];
            }
        }
        let mut v = 0.0;
        let mut g = V4::zeros();
        for t in &self.terms {
            let e = t.powers.map(|k| k as usize);
            let mono = pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]] * pw[3][e[3]];
            v += t.coef * mono;
            for i in 0..4 {
                if e[i] > 0 {
                    let mut m = t.coef * e[i] as f64 * pw[i][e[i] - 1];
                    for j in 0..4 {
                        if j != i {
                            m *= pw[j][e[j]];
                        }
                    }
                    g[i] += m;
                }
            }
        }
        (v, g)
    }

    pub fn eval(&self, x: &V4) -> f64 {
        self.eval_grad(x).0
    }
}
