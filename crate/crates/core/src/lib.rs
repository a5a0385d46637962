//! Holographic stabilizer codes built from block-perfect seed tensors on
//! hyperbolic tilings, with exact decoders, distance search and Monte Carlo
//! threshold estimation.

pub mod builder;
pub mod decoder;
pub mod distance;
pub mod error;
pub mod gf2;
pub mod network;
pub mod pauli;
pub mod seed;
pub mod sim;
pub mod tiling;

pub use error::{Error, Result};
pub use gf2::{BitVec, Gf2Matrix};
pub use pauli::{Pauli, PauliVector};
pub use seed::SeedCode;
