//! Exact Jack and Laguerre symmetric functions, z-measure moments, and the
//! spectral expansion of the transition density of the z-measure diffusions on
//! the Thoma simplex.

pub mod circ;
pub mod cli;
pub mod density;
pub mod error;
pub mod laguerre;
pub mod partitions;
pub mod petrov;
pub mod poly;
pub mod scalar;
pub mod spectral;
pub mod symalg;
pub mod verify;
pub mod zmeasure;

pub use error::{Error, Result};
pub use partitions::Partition;
pub use scalar::{Scalar, Q};
