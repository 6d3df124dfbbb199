use std::ops::{Add, Mul, Neg, Sub};

/// Truncated Taylor series: `c[n] = f^(n)(x0) / n!`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<const N: usize>(pub [f64; N]);

impl<const N: usize> Jet<N> {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = v;
        Jet(c)
    }

    /// The identity function expanded at `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = x0;
        if N > 1 {
            c[1] = 1.0;
        }
        Jet(c)
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// n-th derivative at the expansion point.
    pub fn derivative(&self, n: usize) -> f64 {
        let mut fact = 1.0;
        for k in 2..=n {
            fact *= k as f64;
        }
        self.0[n] * fact
    }

    pub fn scale(self, s: f64) -> Self {
        let mut c = self.0;
        c.iter_mut().for_each(|x| *x *= s);
        Jet(c)
    }

    pub fn recip(self) -> Self {
        let a = self.0;
        let mut b = [0.0; N];
        b[0] = 1.0 / a[0];
        for n in 1..N {
            let s: f64 = (1..=n).map(|k| a[k] * b[n - k]).sum();
            b[n] = -s / a[0];
        }
        Jet(b)
    }

    pub fn exp(self) -> Self {
        let a = self.0;
        let mut b = [0.0; N];
        b[0] = a[0].exp();
        for n in 1..N {
            let s: f64 = (1..=n).map(|k| k as f64 * a[k] * b[n - k]).sum();
            b[n] = s / n as f64;
        }
        Jet(b)
    }

    /// Polynomial `Σ coef[j] x^j` evaluated on a jet (Horner).
    pub fn poly(coef: &[f64], x: Self) -> Self {
        let mut acc = Self::constant(0.0);
        for &c in coef.iter().rev() {
            acc = acc * x + Self::constant(c);
        }
        acc
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.0;
        c.iter_mut().zip(o.0).for_each(|(a, b)| *a += b);
        Jet(c)
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut c = self.0;
        c.iter_mut().zip(o.0).for_each(|(a, b)| *a -= b);
        Jet(c)
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut c = [0.0; N];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate().take(N - i) {
                c[i + j] += a * b;
            }
        }
        Jet(c)
    }
}
