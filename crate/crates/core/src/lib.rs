//! Numerical integration and exact recognition of the Hall normalization
//! constants of Bures-type eigenvalue densities over density-matrix spectra.
//!
//! The crate is split along the computation:
//!
//! * [`eigenparam`] maps hyperspherical angles to spectra and back into a unit cube,
//! * [`kernels`] evaluates the eigenvalue kernels and the closed-form n = 2, 3 densities,
//! * [`quad`] and [`qmc`] are the two integration engines,
//! * [`pipeline`] assembles constants, entropies and expectations (with a result cache),
//! * [`numbers`] recognizes constants as `N / π^k`, factors them and relates them to
//!   Bernoulli partial-sum denominators.

pub mod eigenparam;
mod error;
pub mod kernels;
pub mod numbers;
pub mod pipeline;
pub mod qmc;
pub mod quad;
pub mod sum;

pub use error::{Error, Result};
