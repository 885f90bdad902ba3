//! Exact arithmetic for sub-Riemannian frames with constant structure
//! constants: canonical connections, curvature identities, comparison
//! certificates and Riemannian penalty limits.

// Dense tensor code reads best with explicit index loops.
#![allow(clippy::needless_range_loop)]

pub mod exactnum;
pub mod frame;
pub mod geometry;
pub mod analysis;
pub mod riemann;
pub mod tensor;
pub mod checks;
pub mod connection;
pub mod curvature;
pub mod jets;
pub mod report;
pub mod cli;
