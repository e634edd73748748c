//! Weighted ergodic averages of Wiener-Wintner type on finite, circle and
//! infinite-measure systems.
//!
//! The numerical kernels are generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix `f64`, which is what the command-line runner uses.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod averages;
pub mod error;
pub mod scalar;
pub mod spectral;
pub mod summation;
pub mod system;
pub mod weights;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type System = system::DynamicalSystem<f64>;
pub type Observable = system::Observable<f64>;
pub type StatePoint = system::StatePoint<f64>;
pub type Weight = weights::WeightSequence<f64>;
pub type AverageTable = averages::AverageTable<f64>;
pub type Correlation = spectral::CorrelationSequence<f64>;
pub type SpectralSummary = spectral::SpectralSummary<f64>;
pub type VdcInput = analysis::VdcInput<f64>;
pub type ConvergenceReport = analysis::ConvergenceReport<f64>;
