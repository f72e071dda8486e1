//! Truncated expansions of the Brownian bridge, the covariance functions of
//! their fluctuation processes, and the pointwise limits of those.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::coeffs::{CoefficientSet, ExpansionKind};
use crate::error::{check_unit, Error, Result};
use crate::legendre::integral_q_all;
use crate::math::{sqrt, Phasor, PI};
use crate::quad::GaussLegendre;
use crate::sum::KahanSum;

/// Partial sum of the expansion carried by `coeffs` at time `t`, using every
/// term the set holds.
pub fn eval_truncated_bridge(coeffs: &CoefficientSet, t: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; coeffs.dim()];
    if coeffs.kind() == ExpansionKind::Fourier {
        for (o, a0) in out.iter_mut().zip(coeffs.a0()) {
            *o = 0.5 * a0;
        }
    }
    if coeffs.order() > 0 {
        add_terms(coeffs, 1..=coeffs.order(), t, &mut out)?;
    }
    Ok(out)
}

/// Adds the terms `k ∈ ks` of the expansion at `t` to `out` (the Fourier
/// constant `a₀/2` is never included).
pub fn add_terms(
    coeffs: &CoefficientSet,
    ks: RangeInclusive<usize>,
    t: f64,
    out: &mut [f64],
) -> Result<()> {
    check_unit("t", t)?;
    let (lo, hi) = (*ks.start(), *ks.end());
    if lo > hi {
        return Ok(());
    }
    if lo == 0 {
        return Err(Error::InvalidArgument("expansion terms start at k = 1"));
    }
    if hi > coeffs.order() {
        return Err(Error::OrderTooSmall { required: hi, available: coeffs.order() });
    }
    match coeffs.kind() {
        ExpansionKind::KarhunenLoeve => {
            for (k, (_, s)) in (lo..=hi).zip(Phasor::new(PI * t, lo as u64)) {
                let w = 2.0 * s / (k as f64 * PI);
                axpy(w, coeffs.z(k), out);
            }
        }
        ExpansionKind::Fourier => {
            for (k, (c, s)) in (lo..=hi).zip(Phasor::new(2.0 * PI * t, lo as u64)) {
                axpy(c, coeffs.a(k), out);
                axpy(s, coeffs.b(k), out);
            }
        }
        ExpansionKind::Polynomial => {
            let ints = integral_q_all(hi, t)?;
            for k in lo..=hi {
                axpy((2 * k + 1) as f64 * ints[k], coeffs.c(k), out);
            }
        }
    }
    Ok(())
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn check_pair(s: f64, t: f64) -> Result<()> {
    check_unit("s", s)?;
    check_unit("t", t)
}

/// `min(s, t) - st`.
pub fn cov_bridge(s: f64, t: f64) -> Result<f64> {
    check_pair(s, t)?;
    Ok(s.min(t) - s * t)
}

/// `Σ_{k=lo}^{hi} 2 sin(kπs) sin(kπt) / (k²π²)`, compensated.
fn sine_series(lo: u64, hi: u64, s: f64, t: f64) -> f64 {
    let mut acc = KahanSum::new();
    let ps = Phasor::new(PI * s, lo);
    let pt = Phasor::new(PI * t, lo);
    for (k, ((_, ss), (_, st))) in (lo..=hi).zip(ps.zip(pt)) {
        let kpi = k as f64 * PI;
        acc.add(2.0 * ss * st / (kpi * kpi));
    }
    acc.value()
}

/// `Σ_{k=lo}^{hi} cos(2kπu) / (2k²π²)`, compensated.
fn cosine_series(lo: u64, hi: u64, u: f64) -> f64 {
    let mut acc = KahanSum::new();
    for (k, (c, _)) in (lo..=hi).zip(Phasor::new(2.0 * PI * u, lo)) {
        let kpi = k as f64 * PI;
        acc.add(c / (2.0 * kpi * kpi));
    }
    acc.value()
}

/// `C₁ᴺ(s, t) = min(s, t) - st - Σ_{k≤N} 2 sin(kπs) sin(kπt)/(k²π²)`, the
/// covariance of the Karhunen–Loève residual before scaling by `N`.
pub fn cov_c1(n: usize, s: f64, t: f64) -> Result<f64> {
    check_pair(s, t)?;
    let mut acc = KahanSum::new();
    acc.add(s.min(t));
    acc.add(-s * t);
    acc.add(-sine_series(1, n as u64, s, t));
    Ok(acc.value())
}

/// `Σ_{k=N+1}^{K} 2 sin(kπs) sin(kπt)/(k²π²)`, the tail representation of
/// `C₁ᴺ` cut off at `K`.
pub fn cov_c1_tail(n: usize, s: f64, t: f64, cutoff: usize) -> Result<f64> {
    check_pair(s, t)?;
    if cutoff <= n {
        return Err(Error::InvalidArgument("tail cutoff must exceed N"));
    }
    Ok(sine_series(n as u64 + 1, cutoff as u64, s, t))
}

/// `C₂ᴺ(s, t) = min(s,t) - st + (s²-s)/2 + (t²-t)/2 + 1/12 - Σ_{k≤N} cos(2kπ(t-s))/(2k²π²)`,
/// the covariance of the Fourier residual before scaling by `2N`.
pub fn cov_c2(n: usize, s: f64, t: f64) -> Result<f64> {
    check_pair(s, t)?;
    let mut acc = KahanSum::new();
    acc.add(s.min(t));
    acc.add(-s * t);
    acc.add(0.5 * (s * s - s));
    acc.add(0.5 * (t * t - t));
    acc.add(1.0 / 12.0);
    acc.add(-cosine_series(1, n as u64, t - s));
    Ok(acc.value())
}

/// `Σ_{k=N+1}^{K} cos(2kπ(t-s))/(2k²π²)`.
pub fn cov_c2_tail(n: usize, s: f64, t: f64, cutoff: usize) -> Result<f64> {
    check_pair(s, t)?;
    if cutoff <= n {
        return Err(Error::InvalidArgument("tail cutoff must exceed N"));
    }
    Ok(cosine_series(n as u64 + 1, cutoff as u64, t - s))
}

/// `min(s,t) - st - Σ_{k=1}^{N-1} (2k+1) ∫₀ˢQ_k ∫₀ᵗQ_k`, the covariance of the
/// polynomial residual before scaling by `N`. The polynomial fluctuation
/// process keeps `N - 1` terms, so `N ≥ 1`.
pub fn cov_c3(n: usize, s: f64, t: f64) -> Result<f64> {
    check_pair(s, t)?;
    if n == 0 {
        return Err(Error::InvalidArgument("cov_c3 needs N >= 1"));
    }
    let mut acc = KahanSum::new();
    acc.add(s.min(t));
    acc.add(-s * t);
    if n >= 2 {
        let is = integral_q_all(n - 1, s)?;
        let it = integral_q_all(n - 1, t)?;
        for k in 1..n {
            acc.add(-((2 * k + 1) as f64) * is[k] * it[k]);
        }
    }
    Ok(acc.value())
}

/// Pointwise limit of the scaled fluctuation covariance of each expansion.
///
/// The Fourier corner condition `s, t ∈ {0, 1}` is tested with exact
/// equality: the limit is discontinuous there.
pub fn limit_fluct_cov(kind: ExpansionKind, s: f64, t: f64) -> Result<f64> {
    check_pair(s, t)?;
    let inv_pi2 = 1.0 / (PI * PI);
    let end = |x: f64| x == 0.0 || x == 1.0;
    Ok(match kind {
        ExpansionKind::KarhunenLoeve => {
            if s == t && !end(t) {
                inv_pi2
            } else {
                0.0
            }
        }
        ExpansionKind::Fourier => {
            if s == t || (end(s) && end(t)) {
                inv_pi2
            } else {
                0.0
            }
        }
        ExpansionKind::Polynomial => {
            if s == t {
                sqrt(t * (1.0 - t)) / PI
            } else {
                0.0
            }
        }
    })
}

/// `∫₀¹ f g dt - F(1) G(1)` with `F(1) = ∫₀¹ f`, `G(1) = ∫₀¹ g`, by composite
/// 16-point Gauss–Legendre with `quad_nodes / 16` panels (rounded up).
///
/// This is `E[∫f dB · ∫g dB]` for a Brownian bridge `B`.
pub fn bridge_ito_cov<F, G>(mut f: F, mut g: G, quad_nodes: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
    G: FnMut(f64) -> f64,
{
    if quad_nodes < 16 {
        return Err(Error::InvalidArgument("bridge_ito_cov needs at least 16 nodes"));
    }
    let rule = GaussLegendre::new(16);
    let panels = quad_nodes.div_ceil(16);
    let h = 1.0 / panels as f64;
    let (mut fg, mut fi, mut gi) = (KahanSum::new(), KahanSum::new(), KahanSum::new());
    for p in 0..panels {
        let lo = p as f64 * h;
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            let r = lo + h * x;
            let (fv, gv) = (f(r), g(r));
            fg.add(h * w * fv * gv);
            fi.add(h * w * fv);
            gi.add(h * w * gv);
        }
    }
    Ok(fg.value() - fi.value() * gi.value())
}

/// Which covariance a [`CovGrid`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CovKind {
    /// `N · C₁ᴺ`, Karhunen–Loève fluctuations.
    C1,
    /// `2N · C₂ᴺ`, Fourier fluctuations.
    C2,
    /// `N · C₃ᴺ`, polynomial fluctuations.
    C3,
    /// The pointwise limit for the given expansion.
    Limit(ExpansionKind),
}

impl CovKind {
    /// Finite-`N` covariance of the fluctuation process of `kind`.
    pub fn fluctuation(kind: ExpansionKind) -> Self {
        match kind {
            ExpansionKind::KarhunenLoeve => CovKind::C1,
            ExpansionKind::Fourier => CovKind::C2,
            ExpansionKind::Polynomial => CovKind::C3,
        }
    }

    pub fn expansion(self) -> ExpansionKind {
        match self {
            CovKind::C1 => ExpansionKind::KarhunenLoeve,
            CovKind::C2 => ExpansionKind::Fourier,
            CovKind::C3 => ExpansionKind::Polynomial,
            CovKind::Limit(k) => k,
        }
    }

    /// Factor in front of the unscaled covariance: `N`, `2N`, or 1 for limits.
    pub fn scaling(self, n: usize) -> f64 {
        match self {
            CovKind::C1 | CovKind::C3 => n as f64,
            CovKind::C2 => 2.0 * n as f64,
            CovKind::Limit(_) => 1.0,
        }
    }

    /// Unscaled covariance at `(s, t)`.
    pub fn unscaled(self, n: usize, s: f64, t: f64) -> Result<f64> {
        match self {
            CovKind::C1 => cov_c1(n, s, t),
            CovKind::C2 => cov_c2(n, s, t),
            CovKind::C3 => cov_c3(n, s, t),
            CovKind::Limit(k) => limit_fluct_cov(k, s, t),
        }
    }
}

/// A covariance function evaluated on `s × t`, stored row-major by `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct CovGrid {
    pub kind: CovKind,
    pub n: usize,
    pub scaling: f64,
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    /// Standard errors, present for Monte Carlo estimates.
    pub stderr: Option<Vec<f64>>,
}

impl CovGrid {
    /// Scaled analytic covariance on the grid.
    pub fn analytic(kind: CovKind, n: usize, s: &[f64], t: &[f64]) -> Result<Self> {
        let scaling = kind.scaling(n);
        let mut values = Vec::with_capacity(s.len() * t.len());
        for &si in s {
            for &tj in t {
                values.push(scaling * kind.unscaled(n, si, tj)?);
            }
        }
        Ok(CovGrid { kind, n, scaling, s: s.to_vec(), t: t.to_vec(), values, stderr: None })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.t.len() + j]
    }

    pub fn stderr_at(&self, i: usize, j: usize) -> Option<f64> {
        self.stderr.as_ref().map(|e| e[i * self.t.len() + j])
    }
}

/// `count` equally spaced points from 0 to 1 inclusive.
pub fn uniform_grid(count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::InvalidArgument("a uniform grid needs at least two points"));
    }
    let h = (count - 1) as f64;
    Ok((0..count).map(|i| i as f64 / h).collect())
}
