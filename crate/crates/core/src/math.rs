// Thin wrappers so the rest of the crate reads like std float code.

pub(crate) use core::f64::consts::PI;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn sincos(x: f64) -> (f64, f64) {
    libm::sincos(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn fma(a: f64, b: f64, c: f64) -> f64 {
    libm::fma(a, b, c)
}

/// `(cos kx, sin kx)` for consecutive `k`, by complex rotation with a
/// periodic exact resync to keep the drift at a few ulps.
pub(crate) struct Phasor {
    x: f64,
    k: u64,
    step: (f64, f64),
    cur: (f64, f64),
}

const RESYNC: u64 = 64;

impl Phasor {
    pub(crate) fn new(x: f64, first: u64) -> Self {
        let (s, c) = sincos(x);
        let (s0, c0) = sincos(first as f64 * x);
        Phasor { x, k: first, step: (c, s), cur: (c0, s0) }
    }
}

impl Iterator for Phasor {
    type Item = (f64, f64);

    #[inline]
    fn next(&mut self) -> Option<(f64, f64)> {
        let out = self.cur;
        self.k += 1;
        if self.k % RESYNC == 0 {
            let (s, c) = sincos(self.k as f64 * self.x);
            self.cur = (c, s);
        } else {
            let (c, s) = self.cur;
            let (dc, ds) = self.step;
            self.cur = (c * dc - s * ds, s * dc + c * ds);
        }
        Some(out)
    }
}
