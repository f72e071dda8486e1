//! Gaussian coefficient systems of the three bridge expansions, and their
//! exact-in-law samplers.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{sqrt, PI};
use crate::rng::RngStream;
use crate::zeta::tail_inv_sq;

/// Which expansion of the Brownian bridge a coefficient set belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExpansionKind {
    /// `Σ 2 sin(kπt)/(kπ) Z_k` with `Z_k ~ N(0, 1/2)`.
    KarhunenLoeve,
    /// `a₀/2 + Σ a_k cos(2kπt) + b_k sin(2kπt)`.
    Fourier,
    /// `Σ (2k+1) c_k ∫₀ᵗ Q_k` with `c_k ~ N(0, 1/(2k+1))`.
    Polynomial,
}

impl ExpansionKind {
    pub const ALL: [ExpansionKind; 3] =
        [ExpansionKind::KarhunenLoeve, ExpansionKind::Fourier, ExpansionKind::Polynomial];

    pub fn name(self) -> &'static str {
        match self {
            ExpansionKind::KarhunenLoeve => "kl",
            ExpansionKind::Fourier => "fourier",
            ExpansionKind::Polynomial => "polynomial",
        }
    }
}

/// One draw of the coefficients of an expansion in `d` dimensions, together
/// with the Brownian increment `W₁`.
///
/// Coefficients are stored per `k` as contiguous `d`-vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    kind: ExpansionKind,
    d: usize,
    order: usize,
    w1: Vec<f64>,
    // Fourier a₀; empty for the other kinds
    a0: Vec<f64>,
    // Z_k, a_k or c_k for k = 1..=order
    first: Vec<f64>,
    // Fourier b_k; empty for the other kinds
    second: Vec<f64>,
}

impl CoefficientSet {
    pub fn zeros(kind: ExpansionKind, order: usize, d: usize) -> Self {
        let fourier = kind == ExpansionKind::Fourier;
        CoefficientSet {
            kind,
            d,
            order,
            w1: vec![0.0; d],
            a0: if fourier { vec![0.0; d] } else { Vec::new() },
            first: vec![0.0; order * d],
            second: if fourier { vec![0.0; order * d] } else { Vec::new() },
        }
    }

    pub fn kind(&self) -> ExpansionKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn w1(&self) -> &[f64] {
        &self.w1
    }

    pub fn w1_mut(&mut self) -> &mut [f64] {
        &mut self.w1
    }

    fn slot(&self, k: usize) -> core::ops::Range<usize> {
        assert!(k >= 1 && k <= self.order, "coefficient index {k} outside 1..={}", self.order);
        (k - 1) * self.d..k * self.d
    }

    fn expect(&self, kind: ExpansionKind) {
        assert_eq!(self.kind, kind, "coefficient accessor used on a {:?} set", self.kind);
    }

    /// Karhunen–Loève `Z_k`.
    pub fn z(&self, k: usize) -> &[f64] {
        self.expect(ExpansionKind::KarhunenLoeve);
        &self.first[self.slot(k)]
    }

    /// Fourier `a₀`.
    pub fn a0(&self) -> &[f64] {
        self.expect(ExpansionKind::Fourier);
        &self.a0
    }

    /// Fourier `a_k`, `k ≥ 1`.
    pub fn a(&self, k: usize) -> &[f64] {
        self.expect(ExpansionKind::Fourier);
        &self.first[self.slot(k)]
    }

    /// Fourier `b_k`.
    pub fn b(&self, k: usize) -> &[f64] {
        self.expect(ExpansionKind::Fourier);
        &self.second[self.slot(k)]
    }

    /// Polynomial `c_k`.
    pub fn c(&self, k: usize) -> &[f64] {
        self.expect(ExpansionKind::Polynomial);
        &self.first[self.slot(k)]
    }

    /// The single coefficient family of the KL and polynomial kinds, or
    /// Fourier `a_k`.
    pub fn primary(&self, k: usize) -> &[f64] {
        &self.first[self.slot(k)]
    }

    pub fn primary_mut(&mut self, k: usize) -> &mut [f64] {
        let r = self.slot(k);
        &mut self.first[r]
    }

    pub fn a0_mut(&mut self) -> &mut [f64] {
        self.expect(ExpansionKind::Fourier);
        &mut self.a0
    }

    pub fn b_mut(&mut self, k: usize) -> &mut [f64] {
        self.expect(ExpansionKind::Fourier);
        let r = self.slot(k);
        &mut self.second[r]
    }
}

/// Precomputed standard deviations for repeated sampling at a fixed
/// `(kind, order, d)`.
///
/// Draw order from the stream: `W₁`, then for each `k` the `d` coordinates
/// of `Z_k` / `c_k`, or of `a_k` followed by `b_k`; Fourier finally draws the
/// `d` coordinates of the residual `ξ` used for `a₀`.
#[derive(Clone, Debug)]
pub struct CoefficientSampler {
    kind: ExpansionKind,
    order: usize,
    d: usize,
    scales: Vec<f64>,
    sigma: f64,
}

impl CoefficientSampler {
    pub fn new(kind: ExpansionKind, order: usize, d: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("coefficient order must be at least 1"));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1"));
        }
        let scales = (1..=order)
            .map(|k| {
                let kf = k as f64;
                match kind {
                    ExpansionKind::KarhunenLoeve => sqrt(0.5),
                    ExpansionKind::Fourier => 1.0 / (kf * PI * sqrt(2.0)),
                    ExpansionKind::Polynomial => 1.0 / sqrt(2.0 * kf + 1.0),
                }
            })
            .collect();
        let sigma = if kind == ExpansionKind::Fourier {
            // Var(a₀ | a_1..a_order) = 1/3 - Σ 2/(k²π²)
            let var = 2.0 / (PI * PI) * tail_inv_sq(order as u64 + 1)?;
            if !(var >= 0.0) {
                return Err(Error::NegativeVariance(var));
            }
            sqrt(var)
        } else {
            0.0
        };
        Ok(CoefficientSampler { kind, order, d, scales, sigma })
    }

    pub fn kind(&self) -> ExpansionKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Conditional standard deviation of `a₀` given `a_1..a_order`.
    pub fn a0_residual_sd(&self) -> f64 {
        self.sigma
    }

    pub fn sample(&self, stream: &mut RngStream) -> CoefficientSet {
        let mut set = CoefficientSet::zeros(self.kind, self.order, self.d);
        self.sample_into(stream, &mut set);
        set
    }

    /// Overwrites `set`, which must have this sampler's shape.
    pub fn sample_into(&self, stream: &mut RngStream, set: &mut CoefficientSet) {
        assert!(
            set.kind == self.kind && set.order == self.order && set.d == self.d,
            "coefficient set shape does not match the sampler"
        );
        let d = self.d;
        stream.fill_normals(&mut set.w1);
        match self.kind {
            ExpansionKind::Fourier => {
                for x in set.a0.iter_mut() {
                    *x = 0.0;
                }
                for (k, &sd) in self.scales.iter().enumerate() {
                    let r = k * d..(k + 1) * d;
                    for (x, a0) in set.first[r.clone()].iter_mut().zip(set.a0.iter_mut()) {
                        *x = sd * stream.next_normal();
                        *a0 -= 2.0 * *x;
                    }
                    for x in &mut set.second[r] {
                        *x = sd * stream.next_normal();
                    }
                }
                for a0 in set.a0.iter_mut() {
                    *a0 += self.sigma * stream.next_normal();
                }
            }
            _ => {
                for (k, &sd) in self.scales.iter().enumerate() {
                    for x in &mut set.first[k * d..(k + 1) * d] {
                        *x = sd * stream.next_normal();
                    }
                }
            }
        }
    }
}

/// One coefficient set of the given shape drawn from `stream`.
pub fn sample_coefficients(
    stream: &mut RngStream,
    kind: ExpansionKind,
    order: usize,
    d: usize,
) -> Result<CoefficientSet> {
    Ok(CoefficientSampler::new(kind, order, d)?.sample(stream))
}
