//! Random knots traced along three-colour percolation interfaces in a cube,
//! their planar codes, Reidemeister simplification, and Alexander invariants.

pub mod alexander;
pub mod diagram;
pub mod fixtures;
pub mod interface;
pub mod percolation;
pub mod pipeline;
pub mod rng;
pub mod simplify;
pub mod stats;
