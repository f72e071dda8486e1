//! Block-structured Monte Carlo.
//!
//! Sample `i` always draws from stream `stream_offset + i`. Samples are
//! grouped into fixed blocks of [`BLOCK_SIZE`], each block is accumulated
//! in sample order, and blocks are combined with [`merge_blocks`]. A parallel
//! driver only has to compute the same blocks and call the same merge to be
//! bit-identical with [`run_serial`].

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::area::{area_entry_increment, Method};
use crate::bridge::{CovGrid, CovKind};
use crate::coeffs::{CoefficientSampler, CoefficientSet, ExpansionKind};
use crate::error::{check_unit, Error, Result};
use crate::legendre::integral_q_all;
use crate::linalg::{cholesky_psd, lower_mul};
use crate::math::{sqrt, Phasor, PI};
use crate::rng::RngStream;
use crate::stats::{merge_tree, MCEstimate};

pub const BLOCK_SIZE: u64 = 4096;

/// Where the samples of a run come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleLayout {
    pub seed: u64,
    pub stream_offset: u64,
    pub n_samples: u64,
}

impl SampleLayout {
    pub fn new(seed: u64, n_samples: u64) -> Self {
        SampleLayout { seed, stream_offset: 0, n_samples }
    }

    pub fn with_offset(mut self, stream_offset: u64) -> Self {
        self.stream_offset = stream_offset;
        self
    }

    pub fn n_blocks(&self) -> usize {
        self.n_samples.div_ceil(BLOCK_SIZE) as usize
    }

    /// Sample indices of block `b`.
    pub fn block(&self, b: usize) -> Range<u64> {
        let lo = b as u64 * BLOCK_SIZE;
        lo..(lo + BLOCK_SIZE).min(self.n_samples)
    }
}

/// A per-sample computation producing `width()` scalars.
pub trait SampleKernel: Sync {
    type Scratch;

    fn width(&self) -> usize;

    fn scratch(&self) -> Self::Scratch;

    fn sample(&self, stream: &mut RngStream, scratch: &mut Self::Scratch, out: &mut [f64]);
}

/// Accumulates block `b` of `layout`.
pub fn run_block<K: SampleKernel>(kernel: &K, layout: &SampleLayout, b: usize) -> Vec<MCEstimate> {
    let width = kernel.width();
    let mut acc = vec![MCEstimate::new(); width];
    let mut scratch = kernel.scratch();
    let mut out = vec![0.0; width];
    for i in layout.block(b) {
        let mut stream = RngStream::new(layout.seed, layout.stream_offset + i);
        kernel.sample(&mut stream, &mut scratch, &mut out);
        for (a, &x) in acc.iter_mut().zip(&out) {
            a.push(x);
        }
    }
    acc
}

/// Column-wise [`merge_tree`] over blocks given in block order.
pub fn merge_blocks(blocks: &[Vec<MCEstimate>], width: usize) -> Vec<MCEstimate> {
    (0..width)
        .map(|c| {
            let column: Vec<MCEstimate> = blocks.iter().map(|b| b[c]).collect();
            merge_tree(&column)
        })
        .collect()
}

pub fn run_serial<K: SampleKernel>(kernel: &K, layout: &SampleLayout) -> Vec<MCEstimate> {
    let blocks: Vec<_> = (0..layout.n_blocks()).map(|b| run_block(kernel, layout, b)).collect();
    merge_blocks(&blocks, kernel.width())
}

/// Wraps a closure as a kernel without scratch space.
pub struct FnKernel<F> {
    width: usize,
    f: F,
}

impl<F> FnKernel<F>
where
    F: Fn(&mut RngStream, &mut [f64]) + Sync,
{
    pub fn new(width: usize, f: F) -> Self {
        FnKernel { width, f }
    }
}

impl<F> SampleKernel for FnKernel<F>
where
    F: Fn(&mut RngStream, &mut [f64]) + Sync,
{
    type Scratch = ();

    fn width(&self) -> usize {
        self.width
    }

    fn scratch(&self) {}

    fn sample(&self, stream: &mut RngStream, _: &mut (), out: &mut [f64]) {
        (self.f)(stream, out)
    }
}

/// Squared `(1, 2)`-entry gap between a method at index `n` and at the
/// reference index `n_ref`, from one shared coefficient draw.
#[derive(Clone, Debug)]
pub struct MseKernel {
    method: Method,
    n: usize,
    n_ref: usize,
    sampler: CoefficientSampler,
}

impl MseKernel {
    pub fn new(method: Method, n: usize, n_ref: usize, d: usize) -> Result<Self> {
        if n >= n_ref {
            return Err(Error::InvalidArgument("estimate_mse needs n < n_ref"));
        }
        if n < method.min_index() {
            return Err(Error::InvalidArgument("truncation index below the method's minimum"));
        }
        if d < 2 {
            return Err(Error::InvalidArgument("Lévy area needs d >= 2"));
        }
        let sampler = CoefficientSampler::new(method.expansion(), method.required_order(n_ref), d)?;
        Ok(MseKernel { method, n, n_ref, sampler })
    }

    /// `E[(approx_{n_ref} - approx_n)²]` in closed form.
    pub fn analytic(&self) -> Result<f64> {
        coupled_mse_exact(self.method, self.n, self.n_ref)
    }
}

impl SampleKernel for MseKernel {
    type Scratch = CoefficientSet;

    fn width(&self) -> usize {
        1
    }

    fn scratch(&self) -> CoefficientSet {
        CoefficientSet::zeros(self.sampler.kind(), self.sampler.order(), self.sampler.dim())
    }

    fn sample(&self, stream: &mut RngStream, set: &mut CoefficientSet, out: &mut [f64]) {
        self.sampler.sample_into(stream, set);
        let gap = area_entry_increment(self.method, set, self.n, self.n_ref, 0, 1)
            .expect("kernel shape validated at construction");
        out[0] = gap * gap;
    }
}

/// `mse_exact(method, n) - mse_exact(method, n_ref)`: the coupled gap has
/// independent blocks, so its second moment telescopes.
pub fn coupled_mse_exact(method: Method, n: usize, n_ref: usize) -> Result<f64> {
    use crate::area::mse_exact;
    if n >= n_ref {
        return Err(Error::InvalidArgument("coupled MSE needs n < n_ref"));
    }
    Ok(mse_exact(method, n)? - mse_exact(method, n_ref)?)
}

/// Monte Carlo estimate of `E[(approx_{n_ref} - approx_n)²]` on the `(1, 2)`
/// entry, single-threaded.
pub fn estimate_mse(
    method: Method,
    n: usize,
    n_ref: usize,
    d: usize,
    layout: &SampleLayout,
) -> Result<MCEstimate> {
    if layout.n_samples < 1000 {
        return Err(Error::InvalidArgument("estimate_mse needs at least 1000 samples"));
    }
    let kernel = MseKernel::new(method, n, n_ref, d)?;
    Ok(run_serial(&kernel, layout)[0])
}

/// Products `F_s F_t` of the scaled fluctuation process over a grid.
///
/// The residual `B - S_N` is split into the explicit terms up to a reference
/// order `M` (taken from a coefficient draw) and the remainder beyond `M`,
/// which is itself a centred Gaussian vector on the grid with covariance
/// `C^M`; it is drawn from a Cholesky factor of that matrix. The residual is
/// therefore exact in law at every grid point, with no truncation bias.
#[derive(Clone, Debug)]
pub struct FluctKernel {
    kind: ExpansionKind,
    n: usize,
    grid: Vec<f64>,
    sampler: CoefficientSampler,
    first: usize,
    // row-major grid × terms; basis_b only for Fourier
    basis_a: Vec<f64>,
    basis_b: Vec<f64>,
    tail: Vec<f64>,
    scale: f64,
}

pub struct FluctScratch {
    set: CoefficientSet,
    resid: Vec<f64>,
    xi: Vec<f64>,
    tail: Vec<f64>,
}

impl FluctKernel {
    /// `reference_order` is `M`; it must exceed `N` (and, for the polynomial
    /// expansion, `N ≥ 1`).
    pub fn new(kind: ExpansionKind, n: usize, grid: &[f64], reference_order: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("fluctuations need N >= 1"));
        }
        if reference_order <= n {
            return Err(Error::InvalidArgument("reference order must exceed N"));
        }
        if grid.is_empty() {
            return Err(Error::InvalidArgument("empty grid"));
        }
        for &t in grid {
            check_unit("t", t)?;
        }
        let m = reference_order;
        // explicit terms: k = N+1..=M, polynomial k = N..=M-1
        let (first, last) = match kind {
            ExpansionKind::Polynomial => (n, m - 1),
            _ => (n + 1, m),
        };
        let terms = last - first + 1;
        let g = grid.len();
        let mut basis_a = vec![0.0; g * terms];
        let mut basis_b = if kind == ExpansionKind::Fourier { vec![0.0; g * terms] } else { Vec::new() };
        for (gi, &t) in grid.iter().enumerate() {
            let row = gi * terms..(gi + 1) * terms;
            match kind {
                ExpansionKind::KarhunenLoeve => {
                    let ph = Phasor::new(PI * t, first as u64);
                    for ((x, k), (_, s)) in basis_a[row].iter_mut().zip(first..).zip(ph) {
                        *x = 2.0 * s / (k as f64 * PI);
                    }
                }
                ExpansionKind::Fourier => {
                    let ph = Phasor::new(2.0 * PI * t, first as u64);
                    for (idx, (c, s)) in row.zip(ph) {
                        basis_a[idx] = c;
                        basis_b[idx] = s;
                    }
                }
                ExpansionKind::Polynomial => {
                    let ints = integral_q_all(last, t)?;
                    for (x, k) in basis_a[row].iter_mut().zip(first..) {
                        *x = (2 * k + 1) as f64 * ints[k];
                    }
                }
            }
        }
        let tail_kind = CovKind::fluctuation(kind);
        let mut cov = vec![0.0; g * g];
        for i in 0..g {
            for j in 0..=i {
                let v = tail_kind.unscaled(m, grid[i], grid[j])?;
                cov[i * g + j] = v;
                cov[j * g + i] = v;
            }
        }
        let tail = cholesky_psd(&cov, g, 1e-12);
        let sampler = CoefficientSampler::new(kind, last, 1)?;
        let scale = sqrt(CovKind::fluctuation(kind).scaling(n));
        Ok(FluctKernel { kind, n, grid: grid.to_vec(), sampler, first, basis_a, basis_b, tail, scale })
    }

    pub fn kind(&self) -> ExpansionKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
}

impl SampleKernel for FluctKernel {
    type Scratch = FluctScratch;

    fn width(&self) -> usize {
        self.grid.len() * self.grid.len()
    }

    fn scratch(&self) -> FluctScratch {
        let g = self.grid.len();
        FluctScratch {
            set: CoefficientSet::zeros(self.kind, self.sampler.order(), 1),
            resid: vec![0.0; g],
            xi: vec![0.0; g],
            tail: vec![0.0; g],
        }
    }

    fn sample(&self, stream: &mut RngStream, sc: &mut FluctScratch, out: &mut [f64]) {
        self.sampler.sample_into(stream, &mut sc.set);
        stream.fill_normals(&mut sc.xi);
        let g = self.grid.len();
        lower_mul(&self.tail, g, &sc.xi, &mut sc.tail);
        let terms = self.sampler.order() + 1 - self.first;
        for gi in 0..g {
            let row = gi * terms;
            let mut acc = sc.tail[gi];
            for (j, k) in (self.first..self.first + terms).enumerate() {
                acc += self.basis_a[row + j] * sc.set.primary(k)[0];
            }
            if self.kind == ExpansionKind::Fourier {
                for (j, k) in (self.first..self.first + terms).enumerate() {
                    acc += self.basis_b[row + j] * sc.set.b(k)[0];
                }
            }
            sc.resid[gi] = self.scale * acc;
        }
        for i in 0..g {
            for j in 0..g {
                out[i * g + j] = sc.resid[i] * sc.resid[j];
            }
        }
    }
}

/// Assembles a [`CovGrid`] from the per-entry estimates of a [`FluctKernel`].
pub fn fluct_grid(kernel: &FluctKernel, estimates: &[MCEstimate]) -> CovGrid {
    let kind = CovKind::fluctuation(kernel.kind);
    CovGrid {
        kind,
        n: kernel.n,
        scaling: kind.scaling(kernel.n),
        s: kernel.grid.clone(),
        t: kernel.grid.clone(),
        values: estimates.iter().map(MCEstimate::mean).collect(),
        stderr: Some(estimates.iter().map(|e| e.stderr().unwrap_or(f64::NAN)).collect()),
    }
}

/// Empirical covariance of the scaled fluctuation process, with reference
/// order `4N`, single-threaded.
pub fn estimate_fluct_cov(
    kind: ExpansionKind,
    n: usize,
    grid: &[f64],
    layout: &SampleLayout,
) -> Result<CovGrid> {
    let kernel = FluctKernel::new(kind, n, grid, 4 * n)?;
    Ok(fluct_grid(&kernel, &run_serial(&kernel, layout)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_blocks_cover_samples() {
        let l = SampleLayout::new(0, 2 * BLOCK_SIZE + 5);
        assert_eq!(l.n_blocks(), 3);
        assert_eq!(l.block(2), 2 * BLOCK_SIZE..2 * BLOCK_SIZE + 5);
        assert_eq!(SampleLayout::new(0, 0).n_blocks(), 0);
    }

    #[test]
    fn block_merge_matches_flat_accumulation() {
        let kernel = FnKernel::new(1, |s: &mut RngStream, out: &mut [f64]| out[0] = s.next_normal());
        let layout = SampleLayout::new(4, 3 * BLOCK_SIZE + 17).with_offset(100);
        let merged = run_serial(&kernel, &layout)[0];
        let mut flat = MCEstimate::new();
        for i in 0..layout.n_samples {
            flat.push(RngStream::new(4, 100 + i).next_normal());
        }
        assert_eq!(merged.n_samples(), flat.n_samples());
        assert!((merged.mean() - flat.mean()).abs() <= 1e-12 * flat.mean().abs().max(1e-3));
        assert!((merged.m2() / flat.m2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mse_preconditions() {
        let l = SampleLayout::new(0, 1000);
        assert!(estimate_mse(Method::Polynomial, 4, 4, 2, &l).is_err());
        assert!(estimate_mse(Method::Polynomial, 2, 4, 1, &l).is_err());
        assert!(estimate_mse(Method::Fourier, 0, 4, 2, &l).is_err());
        assert!(estimate_mse(Method::Polynomial, 2, 4, 2, &SampleLayout::new(0, 999)).is_err());
    }

    #[test]
    fn fluct_preconditions() {
        assert!(FluctKernel::new(ExpansionKind::Fourier, 8, &[0.5], 8).is_err());
        assert!(FluctKernel::new(ExpansionKind::Fourier, 8, &[1.5], 32).is_err());
        assert!(FluctKernel::new(ExpansionKind::Polynomial, 0, &[0.5], 32).is_err());
        assert!(FluctKernel::new(ExpansionKind::KarhunenLoeve, 8, &[], 32).is_err());
    }
}
