//! Series expansions of the Brownian bridge and the Lévy-area approximations
//! built on them.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure numerics:
//!
//! * [`legendre`]: shifted Legendre polynomials on `[0, 1]`.
//! * [`zeta`]: sine moments, Bernoulli numbers, `ζ(2n)` and `Σ_{k≥n} 1/k²`.
//! * [`rng`] and [`coeffs`]: counter-based Gaussian streams and exact-in-law
//!   samplers for the Karhunen–Loève, Fourier and polynomial coefficients.
//! * [`bridge`]: truncated bridges, fluctuation covariances and their limits.
//! * [`area`]: truncated Lévy-area approximations, their exact mean-squared
//!   errors, the covariance-matched one-term approximation and stitching.
//! * [`stats`] and [`mc`]: Welford estimates, rate fits and the block-wise
//!   Monte Carlo kernels whose results do not depend on how blocks are
//!   scheduled.
//!
//! Threading, file formats and the command-line interface live in the `levy`
//! crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod area;
pub mod bridge;
pub mod coeffs;
mod dd;
mod error;
pub mod legendre;
mod linalg;
mod math;
pub mod mc;
pub mod quad;
pub mod rng;
pub mod stats;
pub mod sum;
pub mod zeta;

pub use area::{AntisymMatrix, CheapVariant, Method};
pub use bridge::{CovGrid, CovKind};
pub use coeffs::{CoefficientSampler, CoefficientSet, ExpansionKind};
pub use error::{Error, Result};
pub use rng::RngStream;
pub use stats::{MCEstimate, RateFit};
