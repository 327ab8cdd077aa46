//! Numerical laboratory for list-decoding and channel-coding bounds.

pub mod bisect;
pub mod code;
pub mod curve;
pub mod entropy;
pub mod error;
pub mod exponents;
pub mod figures;
pub mod geometry;
pub mod montecarlo;
pub mod thresholds;
pub mod verify;

pub use entropy::{AlphabetSize, Channel};
pub use error::{Error, Result};
