use super::jet::Jet;

/// C^∞ step that equals 1 for `s <= lo` and 0 for `s >= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothStep {
    pub lo: f64,
    pub hi: f64,
}

impl SmoothStep {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo < hi, "SmoothStep needs lo < hi");
        Self { lo, hi }
    }

    pub fn value(&self, s: f64) -> f64 {
        self.jet::<1>(s).value()
    }

    /// Value and first derivative.
    pub fn eval1(&self, s: f64) -> (f64, f64) {
        let j = self.jet::<2>(s);
        (j.0[0], j.0[1])
    }

    /// Taylor jet of the step at `s`.
    pub fn jet<const N: usize>(&self, s: f64) -> Jet<N> {
        let w = self.hi - self.lo;
        let t = (s - self.lo) / w;
        if t <= 0.0 {
            return Jet::constant(1.0);
        }
        if t >= 1.0 {
            return Jet::constant(0.0);
        }
        let tj = Jet::<N>::variable(s) - Jet::constant(self.lo);
        let tj = tj.scale(1.0 / w);
        let psi = |u: Jet<N>| (-u.recip()).exp();
        let a = psi(Jet::constant(1.0) - tj);
        let b = psi(tj);
        a * (a + b).recip()
    }
}
