//! A single-input/single-output LTI systems toolkit: signal algebra and
//! convolution, transform-domain analysis, FIR/IIR filter design,
//! multi-resolution filter banks, stochastic propagation, and Hankel-matrix
//! ridge identification.
//!
//! Everything operates on plain real sample sequences ([`signal::DiscreteSignal`])
//! and rational transfer functions ([`lti::RationalTransferFunction`]); all
//! operations are pure functions over immutable values.

pub mod error;
pub mod filters;
pub mod lti;
pub mod mra;
mod poly;
pub mod signal;
pub mod spectral;
pub mod stochastic;
pub mod sysid;

pub use error::{Error, Result};
