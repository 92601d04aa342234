//! Partition function and emptiness formation probability of the six-vertex
//! model with domain wall boundary conditions, computed at arbitrary precision
//! by several independent routes.

pub mod checks;
pub mod contour;
pub mod detform;
pub mod efp;
pub mod error;
pub mod grid;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod orthopoly;
pub mod qism;
pub mod sampling;

pub use error::{Error, Result};
