//! Exact L-functions of twisted tensor powers of the Carlitz module over
//! F_q(θ), their analytic ranks, and the machinery to verify and tabulate
//! them.

pub mod error;
pub mod euler;
pub mod ff;
pub mod matrix;
pub mod motive;
pub mod poly;
pub mod scan;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
