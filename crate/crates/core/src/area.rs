//! Truncated Lévy-area approximations built from the bridge expansions,
//! their exact mean-squared errors, the covariance-matched one-term
//! approximation and its rescale-and-stitch refinement.

use alloc::vec;
use alloc::vec::Vec;

use crate::coeffs::{CoefficientSet, ExpansionKind};
use crate::error::{Error, Result};
use crate::math::{sqrt, PI};
use crate::rng::RngStream;
use crate::zeta::tail_inv_sq;

/// Dense antisymmetric `d × d` matrix. Only the strict upper triangle is
/// ever computed; the lower one is its exact negation.
#[derive(Clone, Debug, PartialEq)]
pub struct AntisymMatrix {
    d: usize,
    entries: Vec<f64>,
}

impl AntisymMatrix {
    pub fn zeros(d: usize) -> Self {
        AntisymMatrix { d, entries: vec![0.0; d * d] }
    }

    /// Builds the matrix from `upper(i, j)` for `i < j`.
    pub fn from_upper<F: FnMut(usize, usize) -> f64>(d: usize, mut upper: F) -> Self {
        let mut m = Self::zeros(d);
        for i in 0..d {
            for j in i + 1..d {
                m.set(i, j, upper(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.d + j]
    }

    /// Sets entry `(i, j)` and mirrors it; `i == j` is rejected.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert_ne!(i, j, "diagonal of an antisymmetric matrix is fixed at zero");
        self.entries[i * self.d + j] = value;
        self.entries[j * self.d + i] = -value;
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    /// `self + factor · other`, entry by entry on the upper triangle.
    pub fn add_scaled(&mut self, factor: f64, other: &AntisymMatrix) {
        assert_eq!(self.d, other.d);
        for i in 0..self.d {
            for j in i + 1..self.d {
                let v = self.get(i, j) + factor * other.get(i, j);
                self.set(i, j, v);
            }
        }
    }
}

/// A truncated Lévy-area approximation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// `Â_n`, Fourier coefficients including the correlated `a₀`.
    Fourier,
    /// `Ã_n`, Kloeden–Platen–Wright: `a₀` replaced using the increment.
    Kpw,
    /// `Ā_n`, shifted Legendre coefficients.
    Polynomial,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Fourier, Method::Kpw, Method::Polynomial];

    pub fn name(self) -> &'static str {
        match self {
            Method::Fourier => "fourier",
            Method::Kpw => "kpw",
            Method::Polynomial => "polynomial",
        }
    }

    pub fn expansion(self) -> ExpansionKind {
        match self {
            Method::Fourier | Method::Kpw => ExpansionKind::Fourier,
            Method::Polynomial => ExpansionKind::Polynomial,
        }
    }

    /// Smallest valid truncation index.
    pub fn min_index(self) -> usize {
        match self {
            Method::Fourier | Method::Kpw => 1,
            Method::Polynomial => 0,
        }
    }

    /// Coefficient order needed to evaluate the approximation at index `n`.
    pub fn required_order(self, n: usize) -> usize {
        match self {
            Method::Fourier | Method::Kpw => n.saturating_sub(1).max(1),
            Method::Polynomial => n.max(1),
        }
    }

    /// Truncation index that uses `N = 2n` Gaussian vectors per dimension.
    ///
    /// `Â_n` and `Ã_n` draw `W₁, a₀` (or nothing) and `a_k, b_k` for `k < n`,
    /// which is `2n` vectors; `Ā_m` draws `W₁, c_1..c_m`, so the polynomial
    /// method at the same cost is `Ā_{2n}`.
    pub fn index_for_level(self, n: usize) -> usize {
        match self {
            Method::Fourier | Method::Kpw => n,
            Method::Polynomial => 2 * n,
        }
    }
}

fn check(method: Method, coeffs: &CoefficientSet, n: usize) -> Result<()> {
    if coeffs.kind() != method.expansion() {
        return Err(Error::KindMismatch);
    }
    if n < method.min_index() {
        return Err(Error::InvalidArgument("truncation index below the method's minimum"));
    }
    let required = if method == Method::Polynomial { n.max(1) } else { n - 1 };
    if coeffs.order() < required {
        return Err(Error::OrderTooSmall { required, available: coeffs.order() });
    }
    if coeffs.dim() < 2 {
        return Err(Error::InvalidArgument("Lévy area needs d >= 2"));
    }
    Ok(())
}

/// Term `k ≥ 1` of the series part of the approximation at `(i, j)`.
#[inline]
fn term(method: Method, c: &CoefficientSet, k: usize, i: usize, j: usize) -> f64 {
    match method {
        Method::Fourier => {
            let (a, b) = (c.a(k), c.b(k));
            PI * k as f64 * (a[i] * b[j] - b[i] * a[j])
        }
        Method::Kpw => {
            let (a, b, w) = (c.a(k), c.b(k), c.w1());
            let kpi = k as f64 * PI;
            kpi * (a[i] * (b[j] - w[j] / kpi) - (b[i] - w[i] / kpi) * a[j])
        }
        Method::Polynomial => {
            let (ck, cn) = (c.c(k), c.c(k + 1));
            0.5 * (ck[i] * cn[j] - cn[i] * ck[j])
        }
    }
}

/// The part of the approximation that does not depend on the truncation.
#[inline]
fn base(method: Method, c: &CoefficientSet, i: usize, j: usize) -> f64 {
    let w = c.w1();
    match method {
        Method::Fourier => {
            let a0 = c.a0();
            0.5 * (a0[i] * w[j] - w[i] * a0[j])
        }
        Method::Kpw => 0.0,
        Method::Polynomial => {
            let c1 = c.c(1);
            0.5 * (w[i] * c1[j] - c1[i] * w[j])
        }
    }
}

/// Entry `(i, j)` of the approximation at truncation index `n`.
pub fn area_entry(method: Method, coeffs: &CoefficientSet, n: usize, i: usize, j: usize) -> Result<f64> {
    check(method, coeffs, n)?;
    if method == Method::Polynomial && n == 0 {
        return Ok(0.0);
    }
    let mut acc = base(method, coeffs, i, j);
    for k in 1..n {
        acc += term(method, coeffs, k, i, j);
    }
    Ok(acc)
}

/// `approx_m - approx_n` at `(i, j)` for `n < m`, summing only the terms
/// that differ.
pub fn area_entry_increment(
    method: Method,
    coeffs: &CoefficientSet,
    n: usize,
    m: usize,
    i: usize,
    j: usize,
) -> Result<f64> {
    if n >= m {
        return Err(Error::InvalidArgument("increment needs n < m"));
    }
    check(method, coeffs, m)?;
    check(method, coeffs, n)?;
    if method == Method::Polynomial && n == 0 {
        return area_entry(method, coeffs, m, i, j);
    }
    let mut acc = 0.0;
    for k in n..m {
        acc += term(method, coeffs, k, i, j);
    }
    Ok(acc)
}

/// The full approximation at truncation index `n`.
pub fn levy_area(method: Method, coeffs: &CoefficientSet, n: usize) -> Result<AntisymMatrix> {
    check(method, coeffs, n)?;
    let d = coeffs.dim();
    if method == Method::Polynomial && n == 0 {
        return Ok(AntisymMatrix::zeros(d));
    }
    Ok(AntisymMatrix::from_upper(d, |i, j| {
        let mut acc = base(method, coeffs, i, j);
        for k in 1..n {
            acc += term(method, coeffs, k, i, j);
        }
        acc
    }))
}

/// `Â_n`, needs `n ≥ 1` and Fourier coefficients up to order `n - 1`.
pub fn levy_fourier(coeffs: &CoefficientSet, n: usize) -> Result<AntisymMatrix> {
    levy_area(Method::Fourier, coeffs, n)
}

/// `Ã_n`, needs `n ≥ 1` and Fourier coefficients up to order `n - 1`.
pub fn levy_kpw(coeffs: &CoefficientSet, n: usize) -> Result<AntisymMatrix> {
    levy_area(Method::Kpw, coeffs, n)
}

/// `Ā_n`, with `Ā_0 = 0`; needs polynomial coefficients up to order `max(n, 1)`.
pub fn levy_poly(coeffs: &CoefficientSet, n: usize) -> Result<AntisymMatrix> {
    levy_area(Method::Polynomial, coeffs, n)
}

/// Exact per-entry mean-squared error `E[(A_{0,1} - approx_n)²]`, `i ≠ j`.
pub fn mse_exact(method: Method, n: usize) -> Result<f64> {
    match method {
        Method::Polynomial => Ok(1.0 / (8.0 * n as f64 + 4.0)),
        Method::Fourier | Method::Kpw => {
            if n == 0 {
                return Err(Error::InvalidArgument("Fourier-type MSE needs n >= 1"));
            }
            let fourier = tail_inv_sq(n as u64)? / (2.0 * PI * PI);
            Ok(if method == Method::Kpw { 3.0 * fourier } else { fourier })
        }
    }
}

/// `lim N · mse` with `N` Gaussian vectors per dimension.
pub fn asymptotic_constant(method: Method) -> f64 {
    match method {
        Method::Fourier => 1.0 / (PI * PI),
        Method::Kpw => 3.0 / (PI * PI),
        Method::Polynomial => 0.125,
    }
}

/// How the correction matrix `λ` of the one-term approximation is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheapVariant {
    /// Independent entries with variance `1/12`.
    DavieFlint,
    /// Entries drawn after `c₁`, with variance `1/20 + (c₁ᵢ² + c₁ⱼ²)/20`.
    Foster,
}

impl CheapVariant {
    pub fn name(self) -> &'static str {
        match self {
            CheapVariant::DavieFlint => "davie-flint",
            CheapVariant::Foster => "foster",
        }
    }
}

/// One draw of the covariance-matched approximation.
#[derive(Clone, Debug, PartialEq)]
pub struct CheapArea {
    pub area: AntisymMatrix,
    pub lambda: AntisymMatrix,
    pub w1: Vec<f64>,
    pub c1: Vec<f64>,
}

/// `½(W₁ c₁ᵀ - c₁ W₁ᵀ) + λ` with `W₁ ~ N(0, I)` and `c₁ ~ N(0, I/3)`.
///
/// Consumes `2d` normals for `W₁, c₁`, then one per `i < j` in row-major
/// order for `λ`.
pub fn cheap_area(stream: &mut RngStream, d: usize, variant: CheapVariant) -> Result<CheapArea> {
    if d < 2 {
        return Err(Error::InvalidArgument("Lévy area needs d >= 2"));
    }
    let w1: Vec<f64> = (0..d).map(|_| stream.next_normal()).collect();
    let inv_sqrt3 = 1.0 / sqrt(3.0);
    let c1: Vec<f64> = (0..d).map(|_| inv_sqrt3 * stream.next_normal()).collect();
    let lambda = AntisymMatrix::from_upper(d, |i, j| {
        let sd = match variant {
            CheapVariant::DavieFlint => sqrt(1.0 / 12.0),
            CheapVariant::Foster => sqrt((1.0 + c1[i] * c1[i] + c1[j] * c1[j]) / 20.0),
        };
        sd * stream.next_normal()
    });
    let area = AntisymMatrix::from_upper(d, |i, j| {
        0.5 * (w1[i] * c1[j] - c1[i] * w1[j]) + lambda.get(i, j)
    });
    Ok(CheapArea { area, lambda, w1, c1 })
}

/// Area and increment over `[0, 1]` assembled from subintervals.
#[derive(Clone, Debug, PartialEq)]
pub struct Stitched {
    pub area: AntisymMatrix,
    pub increment: Vec<f64>,
}

/// Splits `[0, 1]` into `n_sub` pieces of length `h`, draws a cheap area on
/// each (scaled by `h`, increments by `√h`) and combines them with Chen's
/// relation: `A_{0,1} = Σ A_k + ½ Σ (W_{t_k} ΔW_kᵀ - ΔW_k W_{t_k}ᵀ)`.
///
/// With `n_sub = 1` the result is the [`cheap_area`] drawn from the same
/// stream.
pub fn stitch_subintervals(
    stream: &mut RngStream,
    d: usize,
    n_sub: usize,
    variant: CheapVariant,
) -> Result<Stitched> {
    if n_sub == 0 {
        return Err(Error::InvalidArgument("need at least one subinterval"));
    }
    let h = 1.0 / n_sub as f64;
    let sqrt_h = sqrt(h);
    let mut area = AntisymMatrix::zeros(d);
    let mut w = vec![0.0; d];
    for _ in 0..n_sub {
        let piece = cheap_area(stream, d, variant)?;
        let dw: Vec<f64> = piece.w1.iter().map(|x| sqrt_h * x).collect();
        for i in 0..d {
            for j in i + 1..d {
                let chord = 0.5 * (w[i] * dw[j] - w[j] * dw[i]);
                let v = area.get(i, j) + h * piece.area.get(i, j) + chord;
                area.set(i, j, v);
            }
        }
        for (wi, di) in w.iter_mut().zip(&dw) {
            *wi += di;
        }
    }
    Ok(Stitched { area, increment: w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::sample_coefficients;

    #[test]
    fn antisymmetry_by_construction() {
        let m = AntisymMatrix::from_upper(4, |i, j| (i * 10 + j) as f64 + 0.1);
        for i in 0..4 {
            assert_eq!(m.get(i, i), 0.0);
            for j in 0..4 {
                assert_eq!(m.get(i, j), -m.get(j, i));
            }
        }
    }

    #[test]
    fn empty_sums() {
        let mut c = sample_coefficients(&mut RngStream::new(1, 2), ExpansionKind::Fourier, 3, 3).unwrap();
        let a = levy_fourier(&c, 1).unwrap();
        let (a0, w) = (c.a0().to_vec(), c.w1().to_vec());
        for i in 0..3 {
            for j in i + 1..3 {
                assert_eq!(a.get(i, j), 0.5 * (a0[i] * w[j] - w[i] * a0[j]));
            }
        }
        assert_eq!(levy_kpw(&c, 1).unwrap(), AntisymMatrix::zeros(3));

        let p = sample_coefficients(&mut RngStream::new(1, 2), ExpansionKind::Polynomial, 3, 3).unwrap();
        assert_eq!(levy_poly(&p, 0).unwrap(), AntisymMatrix::zeros(3));

        c = CoefficientSet::zeros(ExpansionKind::Fourier, 5, 2);
        assert_eq!(levy_fourier(&c, 6).unwrap(), AntisymMatrix::zeros(2));
    }

    #[test]
    fn single_pair_polynomial() {
        let mut c = CoefficientSet::zeros(ExpansionKind::Polynomial, 2, 3);
        c.primary_mut(1).copy_from_slice(&[1.0, 0.0, 0.0]);
        c.w1_mut().copy_from_slice(&[0.0, 1.0, 0.0]);
        let a = levy_poly(&c, 2).unwrap();
        assert_eq!(a.get(0, 1), -0.5);
        assert_eq!(a.get(1, 0), 0.5);
        assert_eq!(a.get(0, 2), 0.0);
        assert_eq!(a.get(1, 2), 0.0);
    }

    #[test]
    fn precondition_errors() {
        let c = CoefficientSet::zeros(ExpansionKind::Fourier, 3, 2);
        assert_eq!(levy_fourier(&c, 5), Err(Error::OrderTooSmall { required: 4, available: 3 }));
        assert!(levy_fourier(&c, 4).is_ok());
        assert_eq!(levy_poly(&c, 2), Err(Error::KindMismatch));
        assert!(levy_fourier(&c, 0).is_err());
        let p = CoefficientSet::zeros(ExpansionKind::Polynomial, 3, 2);
        assert!(levy_poly(&p, 4).is_err());
        assert!(levy_poly(&p, 3).is_ok());
    }

    #[test]
    fn increment_matches_difference() {
        for method in Method::ALL {
            let c = sample_coefficients(&mut RngStream::new(5, 0), method.expansion(), 40, 3).unwrap();
            for (n, m) in [(1usize, 9usize), (4, 40), (7, 8)] {
                let direct = area_entry(method, &c, m, 0, 2).unwrap() - area_entry(method, &c, n, 0, 2).unwrap();
                let inc = area_entry_increment(method, &c, n, m, 0, 2).unwrap();
                assert!((direct - inc).abs() < 1e-13);
                assert_eq!(levy_area(method, &c, m).unwrap().get(0, 2), area_entry(method, &c, m, 0, 2).unwrap());
            }
        }
    }

    #[test]
    fn mse_examples() {
        assert_eq!(mse_exact(Method::Polynomial, 0).unwrap(), 0.25);
        assert!((mse_exact(Method::Fourier, 1).unwrap() - 1.0 / 12.0).abs() < 1e-16);
        for n in 1..2000 {
            let f = mse_exact(Method::Fourier, n).unwrap();
            assert_eq!(mse_exact(Method::Kpw, n).unwrap(), 3.0 * f);
        }
        assert!(mse_exact(Method::Kpw, 0).is_err());
    }

    #[test]
    fn asymptotic_constants() {
        assert_eq!(asymptotic_constant(Method::Polynomial), 0.125);
        assert_eq!(asymptotic_constant(Method::Fourier), 1.0 / (PI * PI));
        let n = 1024usize;
        let big_n = 2.0 * n as f64;
        let poly = big_n * mse_exact(Method::Polynomial, Method::Polynomial.index_for_level(n)).unwrap();
        assert!((poly / 0.125 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn cheap_area_structure() {
        let mut s = RngStream::new(2, 2);
        let c = cheap_area(&mut s, 4, CheapVariant::Foster).unwrap();
        for i in 0..4 {
            assert_eq!(c.lambda.get(i, i), 0.0);
            assert_eq!(c.area.get(i, i), 0.0);
        }
        assert!(cheap_area(&mut s, 1, CheapVariant::DavieFlint).is_err());
    }

    #[test]
    fn one_subinterval_is_cheap_area() {
        for v in [CheapVariant::DavieFlint, CheapVariant::Foster] {
            let a = cheap_area(&mut RngStream::new(8, 3), 3, v).unwrap();
            let b = stitch_subintervals(&mut RngStream::new(8, 3), 3, 1, v).unwrap();
            assert_eq!(a.area, b.area);
            assert_eq!(a.w1, b.increment);
        }
    }
}
