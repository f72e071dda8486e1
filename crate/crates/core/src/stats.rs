//! Running estimates and log-log rate fits.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{exp, ln, sqrt};

/// Mean and spread of a scalar, accumulated with Welford's update and
/// mergeable with Chan's pairwise formula.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MCEstimate {
    n: u64,
    mean: f64,
    m2: f64,
}

impl MCEstimate {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Combines two disjoint sample sets.
    pub fn merge(&self, other: &MCEstimate) -> MCEstimate {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let (na, nb) = (self.n as f64, other.n as f64);
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * nb / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * na * nb / n as f64;
        MCEstimate { n, mean, m2 }
    }

    pub fn n_samples(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sum of squared deviations from the mean.
    pub fn m2(&self) -> f64 {
        self.m2
    }

    /// Unbiased sample variance; needs two samples.
    pub fn variance(&self) -> Option<f64> {
        (self.n >= 2).then(|| self.m2 / (self.n - 1) as f64)
    }

    /// `sqrt(m2 / (n (n - 1)))`; needs two samples.
    pub fn stderr(&self) -> Option<f64> {
        self.variance().map(|v| sqrt(v / self.n as f64))
    }

    /// `|mean - target| ≤ k · stderr`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        match self.stderr() {
            Some(se) => (self.mean - target).abs() <= k * se,
            None => false,
        }
    }
}

/// Merges `parts` by a balanced binary tree over their order, so the result
/// depends only on the sequence, never on who computed each part.
pub fn merge_tree(parts: &[MCEstimate]) -> MCEstimate {
    match parts.len() {
        0 => MCEstimate::new(),
        1 => parts[0],
        len => {
            let (l, r) = parts.split_at(len / 2);
            merge_tree(l).merge(&merge_tree(r))
        }
    }
}

/// Least-squares fit of `log mse = log C + slope · log N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub log_constant: f64,
    pub constant: f64,
    /// Euclidean norm of the log-space residuals.
    pub residual_norm: f64,
}

/// Fits `mse ≈ C N^slope` to `(N, mse)` pairs.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument("a rate fit needs at least three points"));
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(n, mse) in points {
        if !(n > 0.0) {
            return Err(Error::Domain { name: "N", value: n });
        }
        if !(mse > 0.0) {
            return Err(Error::Domain { name: "mse", value: mse });
        }
        xs.push(ln(n));
        ys.push(ln(mse));
    }
    let m = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidArgument("rate fit needs at least two distinct N"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let log_constant = ybar - slope * xbar;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (log_constant + slope * x);
            r * r
        })
        .sum();
    Ok(RateFit { slope, log_constant, constant: exp(log_constant), residual_norm: sqrt(rss) })
}
