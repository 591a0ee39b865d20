//! Exact lattice distribution arithmetic and numerical verification of the
//! entropic central limit theorem for lattice sums.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: finitely supported pmfs, convolution, standardisation
//! - [`entropy`]: discrete entropy, quantised Gaussians, relative entropy
//!   to the Gaussian and the finite-n bound checks built on them
//! - [`binomial`]: closed-form `Bin(n, 1/2)` machinery
//! - [`bernoulli`]: the Bernoulli part decomposition `X = V + W B`
//! - [`fisher`]: Gaussian-smoothed densities, Fisher information and the
//!   integral de Bruijn identity
//! - [`report`]: the `BoundReport` record all checks return
//!
//! All logarithms are natural.

#![forbid(unsafe_code)]

pub mod bernoulli;
pub mod binomial;
pub mod dist;
pub mod entropy;
pub mod error;
pub mod fisher;
pub mod lattice;
pub mod numeric;
pub mod report;

pub use bernoulli::{BernoulliPartDecomposition, SumDecomposition};
pub use binomial::BinomialLaw;
pub use entropy::QuantisedGaussianSpec;
pub use error::{Error, Result};
pub use fisher::GaussianSmoothedDensity;
pub use lattice::{DistSpec, LatticePmf, Moments};
pub use report::BoundReport;
